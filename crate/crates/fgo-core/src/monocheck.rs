//! Monomorphisability check.
//!
//! A program is rejected when some method declaration, started from a
//! symbolic instantiation of its own formals, can reach an instantiation of
//! itself where a formal occurs *under* a type constructor in its own
//! position (polymorphic recursion): such programs have infinite instance
//! sets. The check is conservative: an uncalled polymorphic-recursive method
//! still fails it.
//!
//! All methods are advanced in lock step (one extension each per round) so
//! one method whose instance set diverges without ever witnessing the
//! occurs check cannot starve the method that does witness it.

use crate::ast::*;
use crate::diag::{Diagnostic, TypeResult};
use crate::fgg_typing::{FggChecker, TypeEnv};
use crate::instances::{extend_once, Instance, InstanceSet};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OccursWitness {
    pub recv_type: Name,
    pub method: Name,
    /// The formal that recurs.
    pub formal: Name,
    /// The type argument it recurs inside.
    pub argument: Type,
    /// The offending instantiation.
    pub instance: Instance,
}

impl std::fmt::Display for OccursWitness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}.{} is not monomorphisable: formal {} recurs inside {} in instance {}",
            self.recv_type, self.method, self.formal, self.argument, self.instance
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MonoCheck {
    Monomorphisable,
    NotMonomorphisable(Vec<OccursWitness>),
}

impl MonoCheck {
    pub fn is_mono(&self) -> bool {
        matches!(self, MonoCheck::Monomorphisable)
    }
}

/// `Φ ≺ φ`, positionally: some formal α_i with φ_i ≠ α_i and α_i ∈ FV(φ_i).
pub fn occurs(formals: &[TypeParam], args: &[Type]) -> Option<(Name, Type)> {
    for (f, a) in formals.iter().zip(args) {
        if *a == Type::param(f.name.clone()) {
            continue;
        }
        if a.free_params().iter().any(|p| *p == f.name) {
            return Some((f.name.clone(), a.clone()));
        }
    }
    None
}

const ROUND_BUDGET: usize = 100;
const SIZE_BUDGET: usize = 64;

struct MethodState<'a> {
    decl: &'a MethodDecl,
    delta: TypeEnv,
    set: InstanceSet,
    resolved: Option<Option<OccursWitness>>, // Some(None) = mono, Some(Some) = witness
    exhausted: bool,
}

impl<'a> MethodState<'a> {
    fn new(decl: &'a MethodDecl) -> Self {
        let mut delta: TypeEnv = decl
            .recv_formals
            .iter()
            .map(|f| (f.name.clone(), f.bound.clone()))
            .collect();
        delta.extend(
            decl.sig
                .type_formals
                .iter()
                .map(|f| (f.name.clone(), f.bound.clone())),
        );
        let recv = Type::Named {
            name: decl.recv_type.clone(),
            args: decl.recv_formals.iter().map(|f| Type::param(f.name.clone())).collect(),
        };
        let mut set = InstanceSet::new();
        set.insert(Instance::Ty(recv.clone()));
        set.insert(Instance::Method {
            recv,
            name: decl.name.clone(),
            type_args: decl
                .sig
                .type_formals
                .iter()
                .map(|f| Type::param(f.name.clone()))
                .collect(),
        });
        MethodState { decl, delta, set, resolved: None, exhausted: false }
    }

    /// Look for an instantiation of this very method that witnesses the
    /// occurs check.
    fn witness(&self) -> Option<OccursWitness> {
        for inst in &self.set {
            let Instance::Method { recv, name, type_args } = inst else { continue };
            if *name != self.decl.name || recv.head() != Some(&self.decl.recv_type) {
                continue;
            }
            let Type::Named { args, .. } = recv else { continue };
            let hit = occurs(&self.decl.recv_formals, args)
                .or_else(|| occurs(&self.decl.sig.type_formals, type_args));
            if let Some((formal, argument)) = hit {
                return Some(OccursWitness {
                    recv_type: self.decl.recv_type.clone(),
                    method: self.decl.name.clone(),
                    formal,
                    argument,
                    instance: inst.clone(),
                });
            }
        }
        None
    }

    fn advance(&mut self, ck: &FggChecker) -> TypeResult<()> {
        if self.resolved.is_some() || self.exhausted {
            return Ok(());
        }
        if let Some(w) = self.witness() {
            self.resolved = Some(Some(w));
            return Ok(());
        }
        if self.set.iter().any(|i| crate::instances::instance_size(i) > SIZE_BUDGET) {
            self.exhausted = true;
            return Ok(());
        }
        let next = extend_once(ck, &self.delta, &self.set)?;
        if next == self.set {
            self.resolved = Some(None);
        } else {
            self.set = next;
        }
        Ok(())
    }
}

/// The whole-program check. The program must be checked (and embedding-
/// expanded) first. An `Err` means the check itself could not complete,
/// which for well-typed programs indicates a bug.
pub fn check_program_mono(prog: &Program) -> TypeResult<MonoCheck> {
    let ck = FggChecker::new(prog);
    let mut states: Vec<MethodState> = prog.method_decls().map(MethodState::new).collect();

    for _round in 0..ROUND_BUDGET {
        if states.iter().all(|s| s.resolved.is_some() || s.exhausted) {
            break;
        }
        for s in &mut states {
            s.advance(&ck)?;
        }
    }

    let witnesses: Vec<OccursWitness> = states
        .iter()
        .filter_map(|s| s.resolved.clone().flatten())
        .collect();
    if !witnesses.is_empty() {
        return Ok(MonoCheck::NotMonomorphisable(witnesses));
    }
    if states.iter().any(|s| s.resolved.is_none()) {
        // no witness anywhere, yet some instance set refused to converge:
        // contradicts the theory, so surface it loudly
        return Err(Diagnostic::new(
            Span::default(),
            "nomono",
            "instance growth without an occurs witness; this is a bug",
        ));
    }
    Ok(MonoCheck::Monomorphisable)
}
