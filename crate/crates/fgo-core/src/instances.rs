//! Instance-set collection: the set Ω of type and method instantiations a
//! program requires, computed as the fixpoint of an extension function G
//! over the instances collected from `main`.
//!
//! Sets are `BTreeSet`s so iteration order (and hence everything generated
//! from Ω) is deterministic.

use crate::ast::*;
use crate::diag::{Diagnostic, TypeResult};
use crate::fgg_typing::{FggChecker, TypeEnv};
use std::collections::BTreeSet;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Instance {
    /// A type instantiation τ.
    Ty(Type),
    /// A method instantiation τ.m(ψ).
    Method { recv: Type, name: Name, type_args: Vec<Type> },
}

impl Instance {
    pub fn method(recv: Type, name: impl Into<Name>, type_args: Vec<Type>) -> Instance {
        Instance::Method { recv, name: name.into(), type_args }
    }
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instance::Ty(t) => write!(f, "{t}"),
            Instance::Method { recv, name, type_args } => {
                write!(f, "{recv}.{name}(")?;
                for (i, t) in type_args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{t}")?;
                }
                write!(f, ")")
            }
        }
    }
}

pub type InstanceSet = BTreeSet<Instance>;

/// Instances occurring in an expression (rules I-var .. I-call). Typing is
/// consulted only to find receiver types at call sites.
pub fn collect_expr(
    ck: &FggChecker,
    delta: &TypeEnv,
    env: &[(Name, Type)],
    e: &Expr,
    out: &mut InstanceSet,
) -> TypeResult<()> {
    match &e.kind {
        ExprKind::Var(_) => Ok(()),
        ExprKind::StructLit { ty, args } => {
            out.insert(Instance::Ty(ty.clone()));
            for a in args {
                collect_expr(ck, delta, env, a, out)?;
            }
            Ok(())
        }
        ExprKind::Select { recv, .. } => collect_expr(ck, delta, env, recv, out),
        ExprKind::Assert { recv, ty } => {
            out.insert(Instance::Ty(ty.clone()));
            collect_expr(ck, delta, env, recv, out)
        }
        ExprKind::Call { recv, method, type_args, args } => {
            let rt = ck.type_expr(delta, &env.to_vec(), recv, true)?;
            out.insert(Instance::Ty(rt.clone()));
            out.insert(Instance::Method {
                recv: rt,
                name: method.clone(),
                type_args: type_args.clone(),
            });
            collect_expr(ck, delta, env, recv, out)?;
            for a in args {
                collect_expr(ck, delta, env, a, out)?;
            }
            Ok(())
        }
        ExprKind::IntLit { ty, .. } | ExprKind::BoolLit { ty, .. } | ExprKind::StrLit { ty, .. } => {
            out.insert(Instance::Ty(Type::named(ty.clone())));
            Ok(())
        }
        ExprKind::BinOp { lhs, rhs, .. } => {
            collect_expr(ck, delta, env, lhs, out)?;
            collect_expr(ck, delta, env, rhs, out)
        }
        ExprKind::Sprintf { args, .. } => {
            for a in args {
                collect_expr(ck, delta, env, a, out)?;
            }
            Ok(())
        }
    }
}

/// One application of G: ω plus the F-, M-, I-, and S-extensions.
pub fn extend_once(
    ck: &FggChecker,
    delta: &TypeEnv,
    omega: &InstanceSet,
) -> TypeResult<InstanceSet> {
    let mut out = omega.clone();
    for inst in omega {
        match inst {
            Instance::Ty(ty) => {
                // F-ext: field types of structure instances
                if is_struct_instance(ck, ty) {
                    for f in ck.fields(ty, Span::default())? {
                        out.insert(Instance::Ty(f.ty.clone()));
                    }
                }
            }
            Instance::Method { recv, name, type_args } => {
                // M-ext: parameter and result types of the instantiated
                // signature
                if let Some(spec) =
                    ck.methods(delta, recv)?.into_iter().find(|s| s.name == *name)
                {
                    if spec.sig.type_formals.len() == type_args.len() {
                        let eta = TypeSubst::new(
                            spec.sig
                                .type_formals
                                .iter()
                                .zip(type_args)
                                .map(|(f, a)| (f.name.clone(), a.clone()))
                                .collect(),
                        );
                        for p in &spec.sig.params {
                            out.insert(Instance::Ty(eta.apply(&p.ty)));
                        }
                        out.insert(Instance::Ty(eta.apply(&spec.sig.ret)));
                    }
                }
                // I-ext and S-ext: propagate the instantiation along <:
                for other in omega {
                    let Instance::Ty(sigma) = other else { continue };
                    if !ck.implements(delta, sigma, recv)? {
                        continue;
                    }
                    if ck.is_interface(sigma) {
                        if sigma != recv && ck.is_interface(recv) {
                            out.insert(Instance::Method {
                                recv: sigma.clone(),
                                name: name.clone(),
                                type_args: type_args.clone(),
                            });
                        }
                    } else if is_struct_instance(ck, sigma) {
                        collect_body(ck, delta, sigma, name, type_args, &mut out)?;
                    }
                }
            }
        }
    }
    Ok(out)
}

fn is_struct_instance(ck: &FggChecker, ty: &Type) -> bool {
    matches!(ty, Type::Named { .. }) && ck.is_concrete(ty) && ck.underlying(ty).is_none()
}

/// S-ext for one implementation: record τ_S.m(ψ) and collect the instances
/// of the θ-instantiated body.
fn collect_body(
    ck: &FggChecker,
    delta: &TypeEnv,
    recv_ty: &Type,
    method: &str,
    type_args: &[Type],
    out: &mut InstanceSet,
) -> TypeResult<()> {
    let Type::Named { name, args } = recv_ty else { return Ok(()) };
    let Some(m) = ck.prog.lookup_method(name, method) else { return Ok(()) };
    if m.recv_formals.len() != args.len() || m.sig.type_formals.len() != type_args.len() {
        return Ok(());
    }
    // a method absent from the instantiation's method set (receiver bounds
    // unsatisfied) contributes nothing
    if !ck.methods(delta, recv_ty)?.iter().any(|s| s.name == method) {
        return Ok(());
    }
    let key = Instance::Method {
        recv: recv_ty.clone(),
        name: method.to_owned(),
        type_args: type_args.to_vec(),
    };
    if !out.insert(key) {
        // already expanded (or currently queued); the body is collected the
        // first time the instance appears, and collection is idempotent
    }
    let mut entries: Vec<(Name, Type)> = m
        .recv_formals
        .iter()
        .zip(args)
        .map(|(f, a)| (f.name.clone(), a.clone()))
        .collect();
    entries.extend(
        m.sig
            .type_formals
            .iter()
            .zip(type_args)
            .map(|(f, a)| (f.name.clone(), a.clone())),
    );
    let theta = TypeSubst::new(entries);
    let mut env: Vec<(Name, Type)> = vec![(m.recv_name.clone(), recv_ty.clone())];
    env.extend(
        m.sig
            .params
            .iter()
            .map(|p| (p.name.clone(), theta.apply(&p.ty))),
    );
    collect_expr(ck, delta, &env, &m.body.subst_types(&theta), out)
}

/// Guards against runaway fixpoints (polymorphic recursion); programs should
/// pass the monomorphisability check before Ω is computed. A diverging
/// fixpoint manifests as ever-deeper type instantiations, so the per-type
/// size bound fires long before the other two.
pub const MAX_ITERATIONS: usize = 1000;
pub const MAX_INSTANCES: usize = 1_000_000;
pub const MAX_TYPE_SIZE: usize = 32;

pub fn type_size(t: &Type) -> usize {
    match t {
        Type::Param(_) => 1,
        Type::Named { args, .. } => 1 + args.iter().map(type_size).sum::<usize>(),
    }
}

pub fn instance_size(i: &Instance) -> usize {
    match i {
        Instance::Ty(t) => type_size(t),
        Instance::Method { recv, type_args, .. } => {
            type_size(recv) + type_args.iter().map(type_size).sum::<usize>()
        }
    }
}

/// Ω for a whole (checked, embedding-expanded) program.
pub fn omega(prog: &Program) -> TypeResult<InstanceSet> {
    let ck = FggChecker::new(prog);
    let mut set = InstanceSet::new();
    collect_expr(&ck, &Vec::new(), &[], &prog.main, &mut set)?;
    let delta = Vec::new();
    let diverged = || {
        Diagnostic::new(
            Span::default(),
            "omega",
            "instance set did not reach a fixpoint (is the program monomorphisable?)",
        )
    };
    for i in 0.. {
        if i >= MAX_ITERATIONS || set.len() > MAX_INSTANCES {
            return Err(diverged());
        }
        if set.iter().any(|inst| instance_size(inst) > MAX_TYPE_SIZE) {
            return Err(diverged());
        }
        let next = extend_once(&ck, &delta, &set)?;
        if next == set {
            break;
        }
        set = next;
    }
    Ok(set)
}

/// Worked example used across the test suite: one interface with a generic
/// method, one implementation, and a monomorphic caller.
pub const DISPATCHER: &str = "package main\n\
        type Any interface {}\n\
        type Int struct {}\n\
        type Event interface { Process(type b Any)(y b) Int }\n\
        type UIEvent struct {}\n\
        func (x UIEvent) Process(type b Any)(y b) Int { return Int{} }\n\
        type Dispatcher struct {}\n\
        func (x Dispatcher) Dispatch(y Event) Int { return y.Process(Int)(Int{}) }\n\
        func main() { _ = Dispatcher{}.Dispatch(UIEvent{}) }\n";

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgg_typing::check_program_fgg;
    use crate::parser::{parse_program, ParseOptions};

    fn checked(src: &str) -> Program {
        check_program_fgg(&parse_program(src, ParseOptions::fgg()).unwrap()).unwrap()
    }

    #[test]
    fn dispatcher_omega() {
        let p = checked(DISPATCHER);
        let got = omega(&p).unwrap();
        let int = || Type::named("Int");
        let want: InstanceSet = [
            Instance::Ty(int()),
            Instance::Ty(Type::named("Event")),
            Instance::Ty(Type::named("UIEvent")),
            Instance::Ty(Type::named("Dispatcher")),
            Instance::method(Type::named("Event"), "Process", vec![int()]),
            Instance::method(Type::named("UIEvent"), "Process", vec![int()]),
            Instance::method(Type::named("Dispatcher"), "Dispatch", vec![]),
        ]
        .into_iter()
        .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn dispatcher_fixpoint_reached_by_second_iteration() {
        let p = checked(DISPATCHER);
        let ck = FggChecker::new(&p);
        let mut w0 = InstanceSet::new();
        collect_expr(&ck, &Vec::new(), &[], &p.main, &mut w0).unwrap();
        assert!(w0.contains(&Instance::Ty(Type::named("Dispatcher"))));
        assert!(w0.contains(&Instance::method(Type::named("Dispatcher"), "Dispatch", vec![])));
        assert!(w0.contains(&Instance::Ty(Type::named("UIEvent"))));
        let w1 = extend_once(&ck, &Vec::new(), &w0).unwrap();
        assert!(w1.contains(&Instance::method(Type::named("Event"), "Process", vec![Type::named("Int")])));
        let w2 = extend_once(&ck, &Vec::new(), &w1).unwrap();
        let w3 = extend_once(&ck, &Vec::new(), &w2).unwrap();
        assert_eq!(w2, w3, "fixpoint by the second iteration");
        assert_eq!(w2, omega(&p).unwrap());
    }

    #[test]
    fn nested_instantiations_close_over_field_types() {
        let src = "package main\n\
            type Any interface {}\n\
            type Pair(type a Any, b Any) struct { fst a; snd b }\n\
            type Left struct {}\n\
            type Right struct {}\n\
            func main() { _ = Pair(Left, Pair(Right, Left)){Left{}, Pair(Right, Left){Right{}, Left{}}}.snd }\n";
        let p = checked(src);
        let got = omega(&p).unwrap();
        let inner = Type::app("Pair", vec![Type::named("Right"), Type::named("Left")]);
        assert!(got.contains(&Instance::Ty(inner.clone())));
        assert!(got.contains(&Instance::Ty(Type::app(
            "Pair",
            vec![Type::named("Left"), inner]
        ))));
        assert!(got.contains(&Instance::Ty(Type::named("Right"))));
    }

    #[test]
    fn polymorphic_recursion_hits_the_guard() {
        let src = "package main\n\
            type Any interface {}\n\
            type Box(type a Any) struct { v a }\n\
            func (b Box(type a Any)) Nest() Any { return Box(Box(a)){b}.Nest() }\n\
            type unit struct {}\n\
            func main() { _ = Box(unit){unit{}}.Nest() }\n";
        let p = checked(src);
        assert!(omega(&p).is_err());
    }
}
