//! FGG → FG translation.
//!
//! Every type and method instance in the program's instance set Ω becomes a
//! standalone FG declaration whose name encodes the instantiation, e.g.
//! `List(int)` becomes the FG type `List<int>`. Generic methods additionally
//! get per-type *dummy* methods (`Map<2>() Top`) so that the FG implements
//! relation agrees with the FGG one: without them an instantiated interface
//! whose method set ended up empty would be implemented by everything.
//!
//! Angle brackets and commas inside generated identifiers are accepted by
//! the relaxed lexer; `go_compat` swaps them for the Unicode lookalikes
//! ᐸ, ᐳ, ᐨ so the output is valid under stock Go identifier rules.

use crate::ast::*;
use crate::diag::{Diagnostic, TypeResult};
use crate::fg_typing::check_program_fg;
use crate::fgg_typing::FggChecker;
use crate::instances::{omega, Instance, InstanceSet};
use indexmap::IndexMap;

/// Deterministic map from closed types (and method instantiations) to FG
/// identifiers.
#[derive(Debug, Clone, Copy, Default)]
pub struct Mangler {
    pub go_compat: bool,
}

impl Mangler {
    pub fn new(go_compat: bool) -> Mangler {
        Mangler { go_compat }
    }

    fn glyphs(&self, s: String) -> Name {
        if !self.go_compat {
            return s;
        }
        s.chars()
            .map(|c| match c {
                '<' => '\u{1438}',
                '>' => '\u{1433}',
                ',' => '\u{1428}',
                c => c,
            })
            .collect()
    }

    /// `⌈τ⌉` for closed τ. Types without arguments keep their name, so a
    /// program that never uses generics keeps its identifiers.
    pub fn mangle_type(&self, ty: &Type) -> TypeResult<Name> {
        Ok(self.glyphs(self.raw_type(ty)?))
    }

    fn raw_type(&self, ty: &Type) -> TypeResult<String> {
        match ty {
            Type::Param(a) => Err(Diagnostic::new(
                Span::default(),
                "mono",
                format!("type parameter {a} escaped instantiation"),
            )),
            Type::Named { name, args } if args.is_empty() => Ok(name.clone()),
            Type::Named { name, args } => {
                let inner: Vec<String> =
                    args.iter().map(|a| self.raw_type(a)).collect::<TypeResult<_>>()?;
                Ok(format!("{}<{}>", name, inner.join(",")))
            }
        }
    }

    /// `⌈m(ψ)⌉` for closed ψ.
    pub fn mangle_method(&self, m: &str, psi: &[Type]) -> TypeResult<Name> {
        if psi.is_empty() {
            return Ok(m.to_owned());
        }
        let inner: Vec<String> =
            psi.iter().map(|a| self.raw_type(a)).collect::<TypeResult<_>>()?;
        Ok(self.glyphs(format!("{}<{}>", m, inner.join(","))))
    }

    fn dummy_name(&self, m: &str, number: usize) -> Name {
        self.glyphs(format!("{m}<{number}>"))
    }
}

/// Assigns each distinct method signature class a number, in order of first
/// appearance. Equality is up to positional renaming of type formals and
/// value-parameter names, after the receiver instantiation has been applied.
#[derive(Debug, Default)]
pub struct SignatureHasher {
    classes: IndexMap<String, usize>,
}

impl SignatureHasher {
    pub fn hash(&mut self, method: &str, instantiated: &Sig) -> usize {
        let key = format!("{method}|{:?}", instantiated.canon());
        let next = self.classes.len();
        *self.classes.entry(key).or_insert(next)
    }
}

/// Deliberate translation defects, used by the differential-testing harness
/// to confirm that the bisimulation oracle actually notices broken output.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonoMutation {
    /// Skip the dummy method declarations on structs.
    DropDummyMethods,
    /// Skip the dummy specifications in interfaces.
    DropDummySpecs,
    /// Ignore the type arguments when mangling method names.
    CollapseMethodNames,
    /// Reverse struct-literal argument order in translated bodies.
    ReverseStructLitArgs,
    /// Rewrite every type assertion target to `Top`.
    AssertTargetsTop,
}

pub const ALL_MUTATIONS: [MonoMutation; 5] = [
    MonoMutation::DropDummyMethods,
    MonoMutation::DropDummySpecs,
    MonoMutation::CollapseMethodNames,
    MonoMutation::ReverseStructLitArgs,
    MonoMutation::AssertTargetsTop,
];

#[derive(Debug, Clone, Copy, Default)]
pub struct MonoOptions {
    pub go_compat: bool,
    pub mutation: Option<MonoMutation>,
}

#[derive(Debug)]
pub struct MonoOutput {
    pub program: Program,
    pub omega: InstanceSet,
}

pub const TOP: &str = "Top";

struct Mono<'a> {
    ck: FggChecker<'a>,
    mangler: Mangler,
    hasher: SignatureHasher,
    opts: MonoOptions,
}

impl<'a> Mono<'a> {
    fn mutated(&self, m: MonoMutation) -> bool {
        self.opts.mutation == Some(m)
    }

    fn method_name(&self, m: &str, psi: &[Type]) -> TypeResult<Name> {
        if self.mutated(MonoMutation::CollapseMethodNames) {
            return Ok(m.to_owned());
        }
        self.mangler.mangle_method(m, psi)
    }

    fn mono_type(&self, eta: &TypeSubst, ty: &Type) -> TypeResult<Type> {
        Ok(Type::named(self.mangler.mangle_type(&eta.apply(ty))?))
    }

    fn mono_sig(&self, theta: &TypeSubst, sig: &Sig) -> TypeResult<Sig> {
        Ok(Sig {
            type_formals: Vec::new(),
            params: sig
                .params
                .iter()
                .map(|p| {
                    Ok(Param { name: p.name.clone(), ty: self.mono_type(theta, &p.ty)? })
                })
                .collect::<TypeResult<_>>()?,
            ret: self.mono_type(theta, &sig.ret)?,
        })
    }

    fn mono_expr(&self, eta: &TypeSubst, e: &Expr) -> TypeResult<Expr> {
        let kind = match &e.kind {
            ExprKind::Var(x) => ExprKind::Var(x.clone()),
            ExprKind::StructLit { ty, args } => {
                let mut args: Vec<Expr> =
                    args.iter().map(|a| self.mono_expr(eta, a)).collect::<TypeResult<_>>()?;
                if self.mutated(MonoMutation::ReverseStructLitArgs) {
                    args.reverse();
                }
                ExprKind::StructLit { ty: self.mono_type(eta, ty)?, args }
            }
            ExprKind::Select { recv, field } => ExprKind::Select {
                recv: Box::new(self.mono_expr(eta, recv)?),
                field: field.clone(),
            },
            ExprKind::Call { recv, method, type_args, args } => {
                let psi: Vec<Type> = type_args.iter().map(|t| eta.apply(t)).collect();
                ExprKind::Call {
                    recv: Box::new(self.mono_expr(eta, recv)?),
                    method: self.method_name(method, &psi)?,
                    type_args: Vec::new(),
                    args: args
                        .iter()
                        .map(|a| self.mono_expr(eta, a))
                        .collect::<TypeResult<_>>()?,
                }
            }
            ExprKind::Assert { recv, ty } => ExprKind::Assert {
                recv: Box::new(self.mono_expr(eta, recv)?),
                ty: if self.mutated(MonoMutation::AssertTargetsTop) {
                    Type::named(TOP)
                } else {
                    self.mono_type(eta, ty)?
                },
            },
            k @ (ExprKind::IntLit { .. } | ExprKind::BoolLit { .. } | ExprKind::StrLit { .. }) => {
                k.clone()
            }
            ExprKind::BinOp { op, lhs, rhs } => ExprKind::BinOp {
                op: *op,
                lhs: Box::new(self.mono_expr(eta, lhs)?),
                rhs: Box::new(self.mono_expr(eta, rhs)?),
            },
            ExprKind::Sprintf { format, args } => ExprKind::Sprintf {
                format: format.clone(),
                args: args.iter().map(|a| self.mono_expr(eta, a)).collect::<TypeResult<_>>()?,
            },
        };
        Ok(Expr::at(kind, e.span))
    }

    fn dummy_spec(&mut self, eta: &TypeSubst, spec: &Spec) -> Spec {
        let inst = eta.apply_sig(&spec.sig);
        let n = self.hasher.hash(&spec.name, &inst);
        Spec {
            name: self.mangler.dummy_name(&spec.name, n),
            sig: Sig { type_formals: Vec::new(), params: Vec::new(), ret: Type::named(TOP) },
        }
    }

    /// m-spec: instantiated signatures per μ entry plus the dummy.
    fn mono_spec(
        &mut self,
        eta: &TypeSubst,
        mu: &[(Name, Vec<Type>)],
        spec: &Spec,
    ) -> TypeResult<Vec<Spec>> {
        let mut out = Vec::new();
        for (m, psi) in mu.iter().filter(|(m, _)| *m == spec.name) {
            let theta = eta.extended(
                spec.sig
                    .type_formals
                    .iter()
                    .zip(psi)
                    .map(|(f, t)| (f.name.clone(), t.clone()))
                    .collect(),
            );
            out.push(Spec {
                name: self.method_name(m, psi)?,
                sig: self.mono_sig(&theta, &spec.sig)?,
            });
        }
        if !self.mutated(MonoMutation::DropDummySpecs) {
            out.push(self.dummy_spec(eta, spec));
        }
        Ok(out)
    }

    /// m-type: one FG type declaration per instance of this declaration.
    fn mono_type_decl(
        &mut self,
        omega: &InstanceSet,
        decl: &TypeDecl,
        inst: &Type,
    ) -> TypeResult<TypeDecl> {
        let Type::Named { args, .. } = inst else { unreachable!() };
        let eta = TypeSubst::new(
            decl.formals.iter().zip(args).map(|(f, t)| (f.name.clone(), t.clone())).collect(),
        );
        let lit = match &decl.lit {
            TypeLit::Struct { fields } => TypeLit::Struct {
                fields: fields
                    .iter()
                    .map(|f| {
                        Ok(Param { name: f.name.clone(), ty: self.mono_type(&eta, &f.ty)? })
                    })
                    .collect::<TypeResult<_>>()?,
            },
            TypeLit::Interface { specs, .. } => {
                let mu: Vec<(Name, Vec<Type>)> = omega
                    .iter()
                    .filter_map(|i| match i {
                        Instance::Method { recv, name, type_args } if recv == inst => {
                            Some((name.clone(), type_args.clone()))
                        }
                        _ => None,
                    })
                    .collect();
                let mut out = Vec::new();
                for s in specs {
                    out.extend(self.mono_spec(&eta, &mu, s)?);
                }
                TypeLit::Interface { embeds: Vec::new(), specs: out }
            }
            TypeLit::Alias(p) => TypeLit::Alias(*p),
        };
        Ok(TypeDecl {
            name: self.mangler.mangle_type(inst)?,
            formals: Vec::new(),
            lit,
            span: decl.span,
        })
    }

    /// m-func, first half: the method instances themselves.
    fn mono_method_instance(
        &mut self,
        decl: &MethodDecl,
        recv: &Type,
        psi: &[Type],
    ) -> TypeResult<MethodDecl> {
        let Type::Named { args, .. } = recv else { unreachable!() };
        let mut entries: Vec<(Name, Type)> = decl
            .recv_formals
            .iter()
            .zip(args)
            .map(|(f, t)| (f.name.clone(), t.clone()))
            .collect();
        entries.extend(
            decl.sig.type_formals.iter().zip(psi).map(|(f, t)| (f.name.clone(), t.clone())),
        );
        let theta = TypeSubst::new(entries);
        Ok(MethodDecl {
            recv_name: decl.recv_name.clone(),
            recv_type: self.mangler.mangle_type(recv)?,
            recv_formals: Vec::new(),
            name: self.method_name(&decl.name, psi)?,
            sig: self.mono_sig(&theta, &decl.sig)?,
            body: self.mono_expr(&theta, &decl.body)?,
            span: decl.span,
        })
    }

    /// m-func, second half: a dummy per receiver instance.
    fn mono_dummy_method(&mut self, decl: &MethodDecl, recv: &Type) -> TypeResult<MethodDecl> {
        let Type::Named { args, .. } = recv else { unreachable!() };
        let eta = TypeSubst::new(
            decl.recv_formals
                .iter()
                .zip(args)
                .map(|(f, t)| (f.name.clone(), t.clone()))
                .collect(),
        );
        let inst = eta.apply_sig(&decl.sig);
        let n = self.hasher.hash(&decl.name, &inst);
        Ok(MethodDecl {
            recv_name: decl.recv_name.clone(),
            recv_type: self.mangler.mangle_type(recv)?,
            recv_formals: Vec::new(),
            name: self.mangler.dummy_name(&decl.name, n),
            sig: Sig { type_formals: Vec::new(), params: Vec::new(), ret: Type::named(TOP) },
            body: Expr::new(ExprKind::StructLit { ty: Type::named(TOP), args: Vec::new() }),
            span: decl.span,
        })
    }
}

/// Sorted type instances from Ω that are declared in the program (primitive
/// types have no declaration and pass through untouched).
fn type_instances<'a>(prog: &Program, omega: &'a InstanceSet) -> Vec<&'a Type> {
    let mut tys: Vec<&Type> = omega
        .iter()
        .filter_map(|i| match i {
            Instance::Ty(t) => t.head().and_then(|h| prog.lookup_type(h)).map(|_| t),
            _ => None,
        })
        .collect();
    tys.sort_by_key(|t| crate::pretty::pretty_type(t));
    tys
}

pub fn mono_program(prog: &Program) -> TypeResult<MonoOutput> {
    mono_program_with(prog, MonoOptions::default())
}

pub fn mono_program_with(prog: &Program, opts: MonoOptions) -> TypeResult<MonoOutput> {
    let om = omega(prog)?;
    let mut mono = Mono {
        ck: FggChecker::new(prog),
        mangler: Mangler::new(opts.go_compat),
        hasher: SignatureHasher::default(),
        opts,
    };

    let mut types: Vec<TypeDecl> = vec![TypeDecl {
        name: TOP.into(),
        formals: Vec::new(),
        lit: TypeLit::Struct { fields: Vec::new() },
        span: Span::default(),
    }];
    for inst in type_instances(prog, &om) {
        let decl = prog.lookup_type(inst.head().unwrap()).unwrap();
        types.push(mono.mono_type_decl(&om, decl, inst)?);
    }

    let mut methods: Vec<MethodDecl> = Vec::new();
    for decl in prog.method_decls() {
        for i in &om {
            if let Instance::Method { recv, name, type_args } = i {
                if recv.head() == Some(decl.recv_type.as_str())
                    && *name == decl.name
                    && mono.ck.is_concrete(recv)
                {
                    methods.push(mono.mono_method_instance(decl, recv, type_args)?);
                }
            }
        }
        if mono.mutated(MonoMutation::DropDummyMethods) {
            continue;
        }
        for inst in type_instances(prog, &om) {
            if inst.head() != Some(decl.recv_type.as_str()) {
                continue;
            }
            // a method dropped from this instance's method set by its
            // receiver bounds gets no dummy either
            let Type::Named { args, .. } = inst else { unreachable!() };
            if mono
                .ck
                .subst_checked(&Vec::new(), &decl.recv_formals, args, decl.span)
                .is_err()
            {
                continue;
            }
            methods.push(mono.mono_dummy_method(decl, inst)?);
        }
    }
    methods.sort_by(|a, b| (&a.recv_type, &a.name).cmp(&(&b.recv_type, &b.name)));
    methods.dedup();

    let main = mono.mono_expr(&TypeSubst::empty(), &prog.main)?;
    let out = Program {
        decls: types
            .into_iter()
            .map(Decl::Type)
            .chain(methods.into_iter().map(Decl::Method))
            .collect(),
        main,
        mode: Mode::Fg,
        extended: prog.extended,
    };
    if opts.mutation.is_none() {
        // the translation of a well-typed program is well-typed; a failure
        // here is a translator bug, so surface the checker's complaint
        check_program_fg(&out).map_err(|mut ds| {
            let d = ds.remove(0);
            Diagnostic::new(d.span, "mono", format!("generated FG fails to check: {}", d.message))
        })?;
    }
    Ok(MonoOutput { program: out, omega: om })
}

/// Translate a closed expression (no free type parameters) against `prog`'s
/// declarations, as the bisimulation harness does after every step.
pub fn mono_expr_closed(prog: &Program, opts: MonoOptions, e: &Expr) -> TypeResult<Expr> {
    let mono = Mono {
        ck: FggChecker::new(prog),
        mangler: Mangler::new(opts.go_compat),
        hasher: SignatureHasher::default(),
        opts,
    };
    mono.mono_expr(&TypeSubst::empty(), e)
}

/// Canonical serialization that is insensitive to dummy numbering and
/// declaration order, for comparing translations against golden files.
pub fn normalize_mono(prog: &Program) -> Vec<String> {
    // interface members carry no order either
    let sort_members = |s: String| -> String {
        if !s.starts_with("type ") || !s.contains("interface {") {
            return s;
        }
        let mut lines: Vec<&str> = s.lines().collect();
        let n = lines.len();
        if n > 2 {
            lines[1..n - 1].sort_by_key(|l| mask_dummies(l, |_, _| "#".into()));
        }
        lines.join("\n")
    };
    let rendered: Vec<String> = prog
        .decls
        .iter()
        .map(|d| match d {
            Decl::Type(t) => sort_members(crate::pretty::pretty_type_decl(t)),
            Decl::Method(m) => crate::pretty::pretty_method_decl(m),
        })
        .chain(std::iter::once(format!("main = {}", crate::pretty::pretty_expr(&prog.main))))
        .collect();

    // sort on number-masked text, then renumber dummies by first appearance
    let mut order: Vec<&String> = rendered.iter().collect();
    order.sort_by_key(|s| mask_dummies(s, |_, _| "#".into()));
    let mut assign: IndexMap<(String, u64), usize> = IndexMap::new();
    let mut out: Vec<String> = order
        .iter()
        .map(|s| {
            mask_dummies(s, |m, n| {
                let next = assign.len();
                let id = *assign.entry((m.to_owned(), n)).or_insert(next);
                format!("{id}")
            })
        })
        .collect();
    out.sort();
    out
}

pub fn mono_equiv(a: &Program, b: &Program) -> bool {
    normalize_mono(a) == normalize_mono(b)
}

/// Rewrites each dummy-number occurrence `m<N>` via `f(m, N)`. Mangled type
/// arguments are never bare numbers, so `<digits>` is unambiguous.
fn mask_dummies(s: &str, mut f: impl FnMut(&str, u64) -> String) -> String {
    let chars: Vec<char> = s.chars().collect();
    let mut out = String::new();
    let mut i = 0;
    while i < chars.len() {
        if chars[i].is_alphabetic() || chars[i] == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let ident: String = chars[start..i].iter().collect();
            let open = matches!(chars.get(i), Some('<' | '\u{1438}'));
            if open {
                let mut j = i + 1;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let close = matches!(chars.get(j), Some('>' | '\u{1433}'));
                if close && j > i + 1 {
                    let n: u64 = chars[i + 1..j].iter().collect::<String>().parse().unwrap();
                    out.push_str(&ident);
                    out.push('<');
                    out.push_str(&f(&ident, n));
                    out.push('>');
                    i = j + 1;
                    continue;
                }
            }
            out.push_str(&ident);
        } else {
            out.push(chars[i]);
            i += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgg_typing::check_program_fgg;
    use crate::instances::DISPATCHER;
    use crate::parser::{parse_program, ParseOptions};

    fn checked(src: &str) -> Program {
        check_program_fgg(&parse_program(src, ParseOptions::fgg()).unwrap()).unwrap()
    }

    #[test]
    fn mangling() {
        let m = Mangler::new(false);
        assert_eq!(m.mangle_type(&Type::named("Int")).unwrap(), "Int");
        let li = Type::app("List", vec![Type::named("int")]);
        assert_eq!(m.mangle_type(&li).unwrap(), "List<int>");
        let nested = Type::app("f", vec![Type::named("g"), Type::named("h")]);
        assert_eq!(m.mangle_type(&nested).unwrap(), "f<g,h>");
        assert_eq!(m.mangle_method("Map", &[Type::named("bool")]).unwrap(), "Map<bool>");
        assert_eq!(m.mangle_method("Dispatch", &[]).unwrap(), "Dispatch");
        assert!(m.mangle_type(&Type::param("a")).is_err());

        let g = Mangler::new(true);
        assert_eq!(g.mangle_type(&li).unwrap(), "List\u{1438}int\u{1433}");
        let two = Type::app("Pair", vec![Type::named("a1"), Type::named("b1")]);
        assert_eq!(g.mangle_type(&two).unwrap(), "Pair\u{1438}a1\u{1428}b1\u{1433}");
        // valid under Go identifier rules: letters only
        assert!(g.mangle_type(&two).unwrap().chars().all(|c| c.is_alphanumeric()));
    }

    #[test]
    fn hasher_is_stable_under_renaming() {
        let mut h = SignatureHasher::default();
        let s1 = Sig {
            type_formals: vec![TypeParam { name: "b".into(), bound: Type::named("Any") }],
            params: vec![Param { name: "y".into(), ty: Type::param("b") }],
            ret: Type::named("Int"),
        };
        let s2 = Sig {
            type_formals: vec![TypeParam { name: "c".into(), bound: Type::named("Any") }],
            params: vec![Param { name: "z".into(), ty: Type::param("c") }],
            ret: Type::named("Int"),
        };
        assert_eq!(h.hash("Process", &s1), h.hash("Process", &s2));
        assert_ne!(h.hash("Process", &s1), h.hash("Other", &s1));
    }

    #[test]
    fn dispatcher_translation() {
        let prog = checked(DISPATCHER);
        let out = mono_program(&prog).unwrap();
        let golden = "package main\n\
            type Top struct {}\n\
            type Int struct {}\n\
            type Event interface {\n\
              Process<Int>(y Int) Int\n\
              Process<1>() Top\n\
            }\n\
            type UIEvent struct {}\n\
            func (x UIEvent) Process<Int>(y Int) Int { return Int{} }\n\
            func (x UIEvent) Process<1>() Top { return Top{} }\n\
            type Dispatcher struct {}\n\
            func (x Dispatcher) Dispatch(y Event) Int { return y.Process<Int>(Int{}) }\n\
            func (x Dispatcher) Dispatch<1>() Top { return Top{} }\n\
            func main() { _ = Dispatcher{}.Dispatch(UIEvent{}) }\n";
        let golden = parse_program(golden, ParseOptions::fg().relaxed()).unwrap();
        assert!(mono_equiv(&out.program, &golden));
    }

    #[test]
    fn monomorphic_program_translates_to_itself_plus_top() {
        let src = "package main\n\
            type A struct {}\n\
            type I interface { M() A }\n\
            func (x A) M() A { return x }\n\
            func main() { _ = A{}.M() }\n";
        let prog = checked(src);
        let out = mono_program(&prog).unwrap();
        // same declarations, modulo Top and the dummies; I is never
        // instantiated so it produces nothing
        let names: Vec<&str> = out
            .program
            .type_decls()
            .map(|t| t.name.as_str())
            .collect();
        assert_eq!(names, ["Top", "A"]);
        let body = out.program.lookup_method("A", "M").unwrap();
        assert_eq!(body.body, prog.lookup_method("A", "M").unwrap().body);
    }

    #[test]
    fn output_reparses_under_relaxed_lexer() {
        let prog = checked(DISPATCHER);
        let out = mono_program(&prog).unwrap();
        let text = crate::pretty::pretty_program(&out.program);
        let back = parse_program(&text, ParseOptions::fg().relaxed()).unwrap();
        assert!(mono_equiv(&out.program, &back));
    }

    #[test]
    fn mutations_change_the_output() {
        // has an assert and an asymmetric struct literal so every mutation
        // is visible in the output
        let src = "package main\n\
            type Any interface {}\n\
            type Int struct {}\n\
            type I interface { Process(type b Any)(y b) Any }\n\
            type Pair struct { l I; r Int }\n\
            type Unit struct {}\n\
            func (x Unit) Process(type b Any)(y b) Any { return x }\n\
            func (x Pair) Process(type b Any)(y b) Any { return x.r }\n\
            func main() { _ = Pair{Unit{}, Int{}}.Process(Int)(Int{}).(Int) }\n";
        let prog = checked(src);
        let clean = mono_program(&prog).unwrap();
        for m in ALL_MUTATIONS {
            let opts = MonoOptions { go_compat: false, mutation: Some(m) };
            let bad = mono_program_with(&prog, opts).unwrap();
            assert!(!mono_equiv(&clean.program, &bad.program), "{m:?} was a no-op");
        }
    }
}
