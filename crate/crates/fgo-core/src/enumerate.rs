//! Bounded-exhaustive enumeration of well-typed FGG programs over a small
//! fixed vocabulary, for differential testing of the whole pipeline.
//!
//! Size metric: every expression node costs one, plus one for each type or
//! method symbol it mentions (struct literal types, assertion targets, type
//! arguments, call names); declarations cost the type symbols used in their
//! bounds, fields, and signatures, plus one per interface specification,
//! plus the size of each method body. Declared names themselves are free.
//!
//! The subset, chosen to keep the space finite and the programs meaningful:
//! structs `A` (optionally generic over `a`, one or two fields `f`,`g`) and
//! `B` (empty); one optional interface `I` with a single specification; the
//! always-present empty interface `Any`; up to two methods named `m`,`n`,
//! optionally generic over `b`; method bodies are call-free (variables,
//! selections, literals, assertions), the main expression may also call.
//! Field and signature types only refer to earlier declarations, so type
//! definitions are never mutually recursive.

use crate::ast::*;
use crate::bisim::{bisim_run_with, Verdict, DEFAULT_FUEL};
use crate::diag::TypeResult;
use crate::fgg_typing::{check_program_fgg, FggChecker, TypeEnv};
use crate::monomorphise::MonoOptions;
use std::collections::HashSet;

// ---------------------------------------------------------------- size

pub fn type_size(t: &Type) -> usize {
    match t {
        Type::Param(_) => 1,
        Type::Named { args, .. } => 1 + args.iter().map(type_size).sum::<usize>(),
    }
}

fn formals_size(fs: &[TypeParam]) -> usize {
    fs.iter().map(|f| type_size(&f.bound)).sum()
}

fn sig_size(s: &Sig) -> usize {
    formals_size(&s.type_formals)
        + s.params.iter().map(|p| type_size(&p.ty)).sum::<usize>()
        + type_size(&s.ret)
}

pub fn expr_size(e: &Expr) -> usize {
    // every node costs 1, plus the symbols in any types it mentions and
    // the method name of a call
    match &e.kind {
        ExprKind::Var(_) => 1,
        ExprKind::Select { recv, .. } => 1 + expr_size(recv),
        ExprKind::StructLit { ty, args } => {
            1 + type_size(ty) + args.iter().map(expr_size).sum::<usize>()
        }
        ExprKind::Call { recv, type_args, args, .. } => {
            2 + expr_size(recv)
                + type_args.iter().map(type_size).sum::<usize>()
                + args.iter().map(expr_size).sum::<usize>()
        }
        ExprKind::Assert { recv, ty } => 1 + expr_size(recv) + type_size(ty),
        ExprKind::IntLit { .. } | ExprKind::BoolLit { .. } | ExprKind::StrLit { .. } => 1,
        ExprKind::BinOp { lhs, rhs, .. } => 1 + expr_size(lhs) + expr_size(rhs),
        ExprKind::Sprintf { args, .. } => 1 + args.iter().map(expr_size).sum::<usize>(),
    }
}

pub fn program_size(p: &Program) -> usize {
    let mut n = expr_size(&p.main);
    for d in &p.decls {
        n += match d {
            Decl::Type(t) => {
                formals_size(&t.formals)
                    + match &t.lit {
                        TypeLit::Struct { fields } => {
                            fields.iter().map(|f| type_size(&f.ty)).sum()
                        }
                        TypeLit::Interface { embeds, specs } => {
                            embeds.iter().map(type_size).sum::<usize>()
                                + specs.iter().map(|s| 1 + sig_size(&s.sig)).sum::<usize>()
                        }
                        TypeLit::Alias(_) => 1,
                    }
            }
            Decl::Method(m) => {
                formals_size(&m.recv_formals) + sig_size(&m.sig) + expr_size(&m.body)
            }
        };
    }
    n
}

// ---------------------------------------------------------------- space

#[derive(Debug, Clone)]
struct Skeleton {
    has_b: bool,
    i_spec: Option<Spec>,
    a_generic: bool,
    a_fields: Vec<Param>,
}

fn any() -> Type {
    Type::named("Any")
}

fn tp(name: &str) -> TypeParam {
    TypeParam { name: name.into(), bound: any() }
}

/// Every declaration skeleton of the subset, smallest first.
fn skeletons() -> Vec<Skeleton> {
    let mut out = Vec::new();
    for has_b in [false, true] {
        for a_generic in [false, true] {
            let mut field_tys = vec![any()];
            if has_b {
                field_tys.push(Type::named("B"));
            }
            if a_generic {
                field_tys.push(Type::param("a"));
            }
            let mut field_opts: Vec<Vec<Param>> = Vec::new();
            for t1 in &field_tys {
                field_opts.push(vec![Param { name: "f".into(), ty: t1.clone() }]);
                for t2 in &field_tys {
                    field_opts.push(vec![
                        Param { name: "f".into(), ty: t1.clone() },
                        Param { name: "g".into(), ty: t2.clone() },
                    ]);
                }
            }
            let mut specs: Vec<Option<Spec>> = vec![
                None,
                Some(Spec {
                    name: "m".into(),
                    sig: Sig { type_formals: vec![], params: vec![], ret: any() },
                }),
            ];
            specs.push(Some(Spec {
                name: "m".into(),
                sig: Sig {
                    type_formals: vec![tp("b")],
                    params: vec![Param { name: "y".into(), ty: Type::param("b") }],
                    ret: any(),
                },
            }));
            for i_spec in &specs {
                for a_fields in &field_opts {
                    out.push(Skeleton {
                        has_b,
                        i_spec: i_spec.clone(),
                        a_generic,
                        a_fields: a_fields.clone(),
                    });
                }
            }
        }
    }
    out.sort_by_key(skeleton_size);
    out
}

fn skeleton_size(sk: &Skeleton) -> usize {
    (sk.a_generic as usize)
        + sk.a_fields.iter().map(|f| type_size(&f.ty)).sum::<usize>()
        + sk.i_spec.as_ref().map_or(0, |s| 1 + sig_size(&s.sig))
}

/// The declarations of a skeleton, with method bodies still missing.
fn skeleton_decls(sk: &Skeleton) -> Vec<Decl> {
    let mut decls = vec![Decl::Type(TypeDecl {
        name: "Any".into(),
        formals: vec![],
        lit: TypeLit::Interface { embeds: vec![], specs: vec![] },
        span: Span::default(),
    })];
    if sk.has_b {
        decls.push(Decl::Type(TypeDecl {
            name: "B".into(),
            formals: vec![],
            lit: TypeLit::Struct { fields: vec![] },
            span: Span::default(),
        }));
    }
    if let Some(spec) = &sk.i_spec {
        decls.push(Decl::Type(TypeDecl {
            name: "I".into(),
            formals: vec![],
            lit: TypeLit::Interface { embeds: vec![], specs: vec![spec.clone()] },
            span: Span::default(),
        }));
    }
    decls.push(Decl::Type(TypeDecl {
        name: "A".into(),
        formals: if sk.a_generic { vec![tp("a")] } else { vec![] },
        lit: TypeLit::Struct { fields: sk.a_fields.clone() },
        span: Span::default(),
    }));
    decls
}

/// Candidate method shapes: `m` on `A` and `n` on `B`, each with a small
/// set of signatures.
fn method_shapes(sk: &Skeleton) -> Vec<MethodDecl> {
    let mut out = Vec::new();
    let mut rets = vec![any()];
    if sk.a_generic {
        rets.push(Type::param("a"));
    }
    for ret in &rets {
        out.push(shape("A", sk.a_generic, "m", vec![], vec![], ret.clone()));
        out.push(shape(
            "A",
            sk.a_generic,
            "m",
            vec![],
            vec![Param { name: "y".into(), ty: any() }],
            ret.clone(),
        ));
    }
    for ret in [any(), Type::param("b")] {
        out.push(shape(
            "A",
            sk.a_generic,
            "m",
            vec![tp("b")],
            vec![Param { name: "y".into(), ty: Type::param("b") }],
            ret.clone(),
        ));
    }
    if sk.has_b {
        out.push(shape("B", false, "n", vec![], vec![], any()));
        out.push(shape(
            "B",
            false,
            "n",
            vec![tp("b")],
            vec![Param { name: "y".into(), ty: Type::param("b") }],
            any(),
        ));
    }
    out
}

fn shape(
    recv: &str,
    generic_recv: bool,
    name: &str,
    type_formals: Vec<TypeParam>,
    params: Vec<Param>,
    ret: Type,
) -> MethodDecl {
    MethodDecl {
        recv_name: "x".into(),
        recv_type: recv.into(),
        recv_formals: if generic_recv { vec![tp("a")] } else { vec![] },
        name: name.into(),
        sig: Sig { type_formals, params, ret },
        body: Expr::new(ExprKind::Var("x".into())), // placeholder
        span: Span::default(),
    }
}

// ------------------------------------------------------- expressions

/// All (expression, type) pairs of size ≤ budget, well-typed by
/// construction against `ck` under `delta`/`env`.
struct Memo<'a, 'p> {
    ck: &'a FggChecker<'p>,
    delta: &'a TypeEnv,
    implements: std::cell::RefCell<std::collections::HashMap<(Type, Type), bool>>,
    methods: std::cell::RefCell<std::collections::HashMap<Type, Vec<Spec>>>,
}

impl Memo<'_, '_> {
    fn implements(&self, t: &Type, u: &Type) -> bool {
        if let Some(b) = self.implements.borrow().get(&(t.clone(), u.clone())) {
            return *b;
        }
        let b = self.ck.implements(self.delta, t, u).unwrap_or(false);
        self.implements.borrow_mut().insert((t.clone(), u.clone()), b);
        b
    }

    fn methods(&self, t: &Type) -> Vec<Spec> {
        if let Some(m) = self.methods.borrow().get(t) {
            return m.clone();
        }
        let m = self.ck.methods(self.delta, t).unwrap_or_default();
        self.methods.borrow_mut().insert(t.clone(), m.clone());
        m
    }
}

fn gen_exprs(
    ck: &FggChecker,
    delta: &TypeEnv,
    env: &[(Name, Type)],
    budget: usize,
    allow_calls: bool,
) -> Vec<(Expr, Type)> {
    let memo = Memo {
        ck,
        delta,
        implements: Default::default(),
        methods: Default::default(),
    };
    let mut pool: Vec<(Expr, Type)> = Vec::new();
    let mut seen: HashSet<Expr> = HashSet::new();
    let push = |pool: &mut Vec<(Expr, Type)>, seen: &mut HashSet<Expr>, e: Expr, t: Type| {
        if seen.insert(e.clone()) {
            pool.push((e, t));
        }
    };
    for (x, t) in env {
        push(&mut pool, &mut seen, Expr::new(ExprKind::Var(x.clone())), t.clone());
    }

    // closed type arguments available for instantiations and assertions
    let mut arg_tys: Vec<Type> = vec![any()];
    for n in ["B", "I"] {
        if ck.prog.lookup_type(n).is_some() {
            arg_tys.push(Type::named(n));
        }
    }
    for (p, _) in delta {
        arg_tys.push(Type::param(p.clone()));
    }

    // grow the pool in rounds; every constructor adds ≥1 to the size, so
    // `budget` rounds saturate everything except zero-cost selections.
    // Per-phase frontier marks keep each round linear in the number of
    // *new* expressions: a combination of all-old parts was already tried.
    let mut marks = [0usize; 4];
    for _round in 0..=budget {
        let before = pool.len();

        // selections are free
        let start = marks[0];
        let snapshot = pool.clone();
        marks[0] = snapshot.len();
        for (e, t) in snapshot.iter().skip(start) {
            if let Ok(fields) = ck.fields(t, Span::default()) {
                for f in fields {
                    let sel = Expr::new(ExprKind::Select {
                        recv: Box::new(e.clone()),
                        field: f.name.clone(),
                    });
                    if expr_size(&sel) <= budget {
                        push(&mut pool, &mut seen, sel, f.ty.clone());
                    }
                }
            }
        }

        // struct literals
        let start = marks[1];
        let snapshot = pool.clone();
        marks[1] = snapshot.len();
        for name in ["A", "B"] {
            let Some(decl) = ck.prog.lookup_type(name) else { continue };
            let TypeLit::Struct { .. } = &decl.lit else { continue };
            let instances: Vec<Type> = if decl.formals.is_empty() {
                vec![Type::named(name)]
            } else {
                arg_tys.iter().map(|t| Type::app(name, vec![t.clone()])).collect()
            };
            for inst in instances {
                if type_size(&inst) > budget {
                    continue;
                }
                let Ok(want) = ck.fields(&inst, Span::default()) else { continue };
                let base = type_size(&inst);
                // (args, total size, uses a new expression)
                let mut combos: Vec<(Vec<Expr>, usize, bool)> = vec![(vec![], 0, false)];
                for fld in &want {
                    let mut next = Vec::new();
                    for (combo, used, has_new) in &combos {
                        for (i, (e, t)) in snapshot.iter().enumerate() {
                            let sz = expr_size(e);
                            if base + used + sz <= budget && memo.implements(t, &fld.ty) {
                                let mut c = combo.clone();
                                c.push(e.clone());
                                next.push((c, used + sz, *has_new || i >= start));
                            }
                        }
                    }
                    combos = next;
                }
                for (args, _, has_new) in combos {
                    if !has_new && !(start == 0 && want.is_empty()) {
                        continue;
                    }
                    let lit = Expr::new(ExprKind::StructLit { ty: inst.clone(), args });
                    if expr_size(&lit) <= budget {
                        push(&mut pool, &mut seen, lit, inst.clone());
                    }
                }
            }
        }

        // assertions on interface-typed expressions
        let start = marks[2];
        let snapshot = pool.clone();
        marks[2] = snapshot.len();
        for (e, t) in snapshot.iter().skip(start) {
            let assertable = matches!(t, Type::Param(_)) || ck.is_interface(t);
            if !assertable {
                continue;
            }
            let Ok(source_bound) = ck.bounds(delta, t) else { continue };
            for target in &arg_tys {
                // concrete targets must implement the source's bound
                let ok = !ck.is_concrete(target) || memo.implements(target, &source_bound);
                if !ok {
                    continue;
                }
                let a = Expr::new(ExprKind::Assert {
                    recv: Box::new(e.clone()),
                    ty: target.clone(),
                });
                if expr_size(&a) <= budget {
                    push(&mut pool, &mut seen, a, target.clone());
                }
            }
        }

        if allow_calls {
            let start = marks[3];
            let snapshot = pool.clone();
            marks[3] = snapshot.len();
            for (ri, (e, t)) in snapshot.iter().enumerate() {
                let recv_new = ri >= start;
                for spec in memo.methods(t) {
                    let insts: Vec<Vec<Type>> = if spec.sig.type_formals.is_empty() {
                        vec![vec![]]
                    } else {
                        arg_tys.iter().map(|t| vec![t.clone()]).collect()
                    };
                    for psi in insts {
                        let Ok(theta) = ck.subst_checked(
                            delta,
                            &spec.sig.type_formals,
                            &psi,
                            Span::default(),
                        ) else {
                            continue;
                        };
                        let want: Vec<Type> =
                            spec.sig.params.iter().map(|p| theta.apply(&p.ty)).collect();
                        let base = 1
                            + expr_size(e)
                            + psi.iter().map(type_size).sum::<usize>();
                        let mut combos: Vec<(Vec<Expr>, usize, bool)> =
                            vec![(vec![], 0, false)];
                        for w in &want {
                            let mut next = Vec::new();
                            for (combo, used, has_new) in &combos {
                                for (i, (ae, at)) in snapshot.iter().enumerate() {
                                    let sz = expr_size(ae);
                                    if base + used + sz <= budget && memo.implements(at, w) {
                                        let mut c = combo.clone();
                                        c.push(ae.clone());
                                        next.push((c, used + sz, *has_new || i >= start));
                                    }
                                }
                            }
                            combos = next;
                        }
                        for (args, _, has_new) in combos {
                            if !recv_new && !has_new {
                                continue;
                            }
                            let call = Expr::new(ExprKind::Call {
                                recv: Box::new(e.clone()),
                                method: spec.name.clone(),
                                type_args: psi.clone(),
                                args,
                            });
                            if expr_size(&call) <= budget {
                                let ret = theta.apply(&spec.sig.ret);
                                push(&mut pool, &mut seen, call, ret);
                            }
                        }
                    }
                }
            }
        }
        if pool.len() == before {
            break;
        }
    }
    pool
}

// ------------------------------------------------------------ driver

/// Lazily yields every program of the subset with size ≤ `bound`, each one
/// passing the FGG checker, in deterministic order.
pub fn enumerate(bound: usize) -> impl Iterator<Item = Program> {
    skeletons()
        .into_iter()
        .filter(move |sk| skeleton_size(sk) < bound)
        .flat_map(move |sk| programs_for(&sk, bound))
}

fn programs_for(sk: &Skeleton, bound: usize) -> Vec<Program> {
    let decls = skeleton_decls(sk);
    let left = bound - skeleton_size(sk);
    let mut out = Vec::new();

    // method sets: one or two shapes, distinct (receiver, name) pairs
    let shapes = method_shapes(sk);
    let mut method_sets: Vec<Vec<MethodDecl>> = Vec::new();
    for (i, m1) in shapes.iter().enumerate() {
        method_sets.push(vec![m1.clone()]);
        for m2 in shapes.iter().skip(i + 1) {
            if m1.recv_type == m2.recv_type && m1.name == m2.name {
                continue;
            }
            method_sets.push(vec![m1.clone(), m2.clone()]);
        }
    }

    for methods in method_sets {
        let sig_cost: usize = methods
            .iter()
            .map(|m| formals_size(&m.recv_formals) + sig_size(&m.sig))
            .sum();
        if sig_cost >= left {
            continue;
        }
        // skeleton program with placeholder bodies, for type-directed
        // generation of bodies and main
        let mut skel_prog = Program {
            decls: decls
                .iter()
                .cloned()
                .chain(methods.iter().cloned().map(Decl::Method))
                .collect(),
            main: Expr::new(ExprKind::Var("unused".into())),
            mode: Mode::Fgg,
            extended: false,
        };
        let budget = left - sig_cost;

        // enumerate bodies per method
        let bodies: Vec<Vec<Expr>> = {
            let ck = FggChecker::new(&skel_prog);
            methods
                .iter()
                .map(|m| {
                    let mut delta: TypeEnv = m
                        .recv_formals
                        .iter()
                        .map(|f| (f.name.clone(), f.bound.clone()))
                        .collect();
                    delta.extend(
                        m.sig.type_formals.iter().map(|f| (f.name.clone(), f.bound.clone())),
                    );
                    let recv_ty = if m.recv_formals.is_empty() {
                        Type::named(&m.recv_type)
                    } else {
                        Type::app(&m.recv_type, vec![Type::param("a")])
                    };
                    let mut env = vec![("x".to_owned(), recv_ty)];
                    for p in &m.sig.params {
                        env.push((p.name.clone(), p.ty.clone()));
                    }
                    gen_exprs(&ck, &delta, &env, budget, false)
                        .into_iter()
                        .filter(|(_, t)| ck.implements(&delta, t, &m.sig.ret).unwrap_or(false))
                        .map(|(e, _)| e)
                        .collect()
                })
                .collect()
        };

        // all body combinations within budget
        let mut combos: Vec<Vec<Expr>> = vec![vec![]];
        for per_method in &bodies {
            let mut next = Vec::new();
            for combo in &combos {
                let used: usize = combo.iter().map(expr_size).sum();
                for b in per_method {
                    if used + expr_size(b) <= budget {
                        let mut c = combo.clone();
                        c.push(b.clone());
                        next.push(c);
                    }
                }
            }
            combos = next;
        }

        // bodies do not affect typing elsewhere, so mains are generated once
        let mains: Vec<Expr> = {
            let ck = FggChecker::new(&skel_prog);
            gen_exprs(&ck, &TypeEnv::new(), &[], budget, true)
                .into_iter()
                .map(|(e, _)| e)
                .filter(|e| main_is_interesting(e))
                .collect()
        };
        for combo in combos {
            let used: usize = combo.iter().map(expr_size).sum();
            for (m, body) in skel_prog
                .decls
                .iter_mut()
                .filter_map(|d| match d {
                    Decl::Method(m) => Some(m),
                    _ => None,
                })
                .zip(&combo)
            {
                m.body = body.clone();
            }
            for main in &mains {
                if expr_size(main) + used > budget {
                    continue;
                }
                let mut p = skel_prog.clone();
                p.main = main.clone();
                if program_size(&p) <= bound {
                    if let Ok(p) = check_program_fgg(&p) {
                        out.push(p);
                    }
                }

            }
        }
    }
    out
}

/// Variables never type-check in main, and a bare literal exercises
/// nothing; require at least one select, call, or assertion.
fn main_is_interesting(e: &Expr) -> bool {
    match &e.kind {
        ExprKind::Var(_) => false,
        ExprKind::StructLit { args, .. } => args.iter().any(main_is_interesting),
        ExprKind::Select { .. } | ExprKind::Call { .. } | ExprKind::Assert { .. } => true,
        _ => false,
    }
}

// -------------------------------------------------------------- fuzz

#[derive(Debug, Default)]
pub struct FuzzReport {
    pub total: usize,
    pub passed: usize,
    pub skipped: usize,
    /// Shrunk failing program source plus its verdict.
    pub failures: Vec<(String, Verdict)>,
}

pub fn fuzz_pipeline(bound: usize) -> TypeResult<FuzzReport> {
    fuzz_pipeline_with(bound, MonoOptions::default())
}

pub fn fuzz_pipeline_with(bound: usize, opts: MonoOptions) -> TypeResult<FuzzReport> {
    let mut report = FuzzReport::default();
    for prog in enumerate(bound) {
        report.total += 1;
        match bisim_run_with(&prog, DEFAULT_FUEL, opts)? {
            Verdict::Pass { .. } => report.passed += 1,
            Verdict::Skipped { .. } => report.skipped += 1,
            v => {
                let small = shrink(&prog, opts)?;
                report
                    .failures
                    .push((crate::pretty::pretty_program(&small), v));
            }
        }
    }
    Ok(report)
}

/// Greedy structural shrinking: drop declarations while the program still
/// checks and still fails the bisimulation.
fn shrink(prog: &Program, opts: MonoOptions) -> TypeResult<Program> {
    let mut cur = prog.clone();
    loop {
        let mut shrunk = None;
        for i in 0..cur.decls.len() {
            let mut cand = cur.clone();
            cand.decls.remove(i);
            let Ok(cand) = check_program_fgg(&cand) else { continue };
            match bisim_run_with(&cand, DEFAULT_FUEL, opts)? {
                Verdict::Pass { .. } | Verdict::Skipped { .. } => continue,
                _ => {
                    shrunk = Some(cand);
                    break;
                }
            }
        }
        match shrunk {
            Some(p) => cur = p,
            None => return Ok(cur),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_program, ParseOptions};

    #[test]
    fn size_metric_counts_use_sites() {
        let src = "package main\n\
            type Any interface {}\n\
            type B struct {}\n\
            type A struct { f B }\n\
            func (x A) m() B { return x.f }\n\
            func main() { _ = A{B{}}.m() }\n";
        let p = parse_program(src, ParseOptions::fgg()).unwrap();
        // field f B (1) + ret B (1) + body x.f (2)
        // + main: call (2) + A{..} (2) + B{} (2)
        assert_eq!(program_size(&p), 10);
    }

    #[test]
    fn tiny_bound_is_empty_but_harmless() {
        assert_eq!(enumerate(6).count(), 0);
    }

    #[test]
    fn program_counts_per_bound() {
        let counts: Vec<usize> = (7..=11).map(|b| enumerate(b).count()).collect();
        assert_eq!(counts, vec![2, 15, 54, 154, 412]);
    }

    #[test]
    fn all_yielded_programs_type_check() {
        for p in enumerate(11) {
            assert!(check_program_fgg(&p).is_ok(), "{}", crate::pretty::pretty_program(&p));
        }
    }

    #[test]
    fn enumeration_is_duplicate_free_and_lazy() {
        let first = enumerate(11).next();
        assert!(first.is_some());
        let all: Vec<String> =
            enumerate(11).map(|p| crate::pretty::pretty_program(&p)).collect();
        let set: std::collections::HashSet<&String> = all.iter().collect();
        assert_eq!(all.len(), set.len());
    }

    #[test]
    fn fuzz_small_bound_all_pass() {
        let r = fuzz_pipeline(11).unwrap();
        assert!(r.total > 0);
        assert!(r.failures.is_empty(), "{:?}", r.failures);
    }
}
