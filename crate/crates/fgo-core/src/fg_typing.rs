//! FG type checker.
//!
//! Subtyping is structural: `t <: u` holds when `u` is an interface and
//! every method of `u` is a method of `t`; a concrete (struct or defined
//! primitive) type is a subtype only of itself and of interfaces it
//! implements. Type assertions from a concrete source type ("stupid casts")
//! are rejected in source programs but admitted while re-typing intermediate
//! terms during reduction.

use crate::ast::*;
use crate::diag::{Diagnostic, TypeResult};
use crate::embed::expand_embeddings;

pub struct FgChecker<'a> {
    pub prog: &'a Program,
}

/// Typing environment for value variables.
pub type Env = Vec<(Name, Type)>;

impl<'a> FgChecker<'a> {
    pub fn new(prog: &'a Program) -> Self {
        FgChecker { prog }
    }

    fn name_of(ty: &Type) -> &str {
        match ty {
            Type::Named { name, .. } => name,
            Type::Param(_) => unreachable!("FG types have no parameters"),
        }
    }

    fn decl_of(&self, ty: &Type, span: Span) -> TypeResult<&'a TypeDecl> {
        let name = Self::name_of(ty);
        self.prog.lookup_type(name).ok_or_else(|| {
            Diagnostic::new(span, "t-named", format!("undeclared type {name}"))
        })
    }

    /// Primitive names (`int`, `bool`, `string`) are valid types in extended
    /// mode without a declaration.
    fn is_prim(&self, ty: &Type) -> bool {
        self.prog.extended && Prim::from_name(Self::name_of(ty)).is_some()
    }

    pub fn type_declared(&self, ty: &Type, span: Span) -> TypeResult<()> {
        if self.is_prim(ty) {
            return Ok(());
        }
        self.decl_of(ty, span).map(|_| ())
    }

    pub fn is_interface(&self, ty: &Type) -> bool {
        if self.is_prim(ty) {
            return false;
        }
        matches!(
            self.decl_of(ty, Span::default()),
            Ok(TypeDecl { lit: TypeLit::Interface { .. }, .. })
        )
    }

    /// `fields(t_S)`.
    pub fn fields(&self, ty: &Type, span: Span) -> TypeResult<&'a [Param]> {
        match &self.decl_of(ty, span)?.lit {
            TypeLit::Struct { fields } => Ok(fields),
            _ => Err(Diagnostic::new(
                span,
                "fields",
                format!("{ty} is not a structure type"),
            )),
        }
    }

    /// `methods(t)`: the method set of a type. For a concrete type, the
    /// specifications of its method declarations; for an interface, its
    /// (embedding-expanded) specification list.
    pub fn methods(&self, ty: &Type) -> Vec<Spec> {
        let name = Self::name_of(ty);
        if self.is_prim(ty) {
            return Vec::new();
        }
        match self.prog.lookup_type(name).map(|d| &d.lit) {
            Some(TypeLit::Interface { specs, .. }) => specs.clone(),
            Some(TypeLit::Struct { .. }) | Some(TypeLit::Alias(_)) => self
                .prog
                .methods_of(name)
                .map(|m| Spec { name: m.name.clone(), sig: m.sig.clone() })
                .collect(),
            None => Vec::new(),
        }
    }

    /// `t <: u`.
    pub fn subtype(&self, t: &Type, u: &Type) -> bool {
        if self.is_interface(u) {
            let have = self.methods(t);
            self.methods(u)
                .iter()
                .all(|s| have.iter().any(|h| h.spec_eq(s)))
        } else {
            t == u
        }
    }

    /// Underlying primitive of a type, if any (extended mode).
    pub fn underlying(&self, ty: &Type) -> Option<Prim> {
        let name = Self::name_of(ty);
        if let Some(p) = Prim::from_name(name) {
            if self.prog.extended {
                return Some(p);
            }
        }
        match self.prog.lookup_type(name).map(|d| &d.lit) {
            Some(TypeLit::Alias(p)) => Some(*p),
            _ => None,
        }
    }

    /// Type of an expression. `allow_stupid` admits assertions on a concrete
    /// source type, which arise only during reduction.
    pub fn type_expr(&self, env: &Env, e: &Expr, allow_stupid: bool) -> TypeResult<Type> {
        match &e.kind {
            ExprKind::Var(x) => env
                .iter()
                .rev()
                .find(|(n, _)| n == x)
                .map(|(_, t)| t.clone())
                .ok_or_else(|| {
                    Diagnostic::new(e.span, "t-var", format!("unbound variable {x}"))
                }),
            ExprKind::StructLit { ty, args } => {
                self.type_declared(ty, e.span)?;
                let fields = self.fields(ty, e.span)?;
                if fields.len() != args.len() {
                    return Err(Diagnostic::new(
                        e.span,
                        "t-literal",
                        format!("{ty} has {} fields, literal has {}", fields.len(), args.len()),
                    ));
                }
                for (f, a) in fields.iter().zip(args) {
                    let at = self.type_expr(env, a, allow_stupid)?;
                    if !self.subtype(&at, &f.ty) {
                        return Err(Diagnostic::new(
                            a.span,
                            "t-literal",
                            format!("field {} expects {}, got {}", f.name, f.ty, at),
                        ));
                    }
                }
                Ok(ty.clone())
            }
            ExprKind::Select { recv, field } => {
                let rt = self.type_expr(env, recv, allow_stupid)?;
                let fields = self.fields(&rt, e.span)?;
                fields
                    .iter()
                    .find(|f| f.name == *field)
                    .map(|f| f.ty.clone())
                    .ok_or_else(|| {
                        Diagnostic::new(
                            e.span,
                            "t-field",
                            format!("{rt} has no field {field}"),
                        )
                    })
            }
            ExprKind::Call { recv, method, type_args, args } => {
                if !type_args.is_empty() {
                    return Err(Diagnostic::new(e.span, "t-call", "FG calls take no type arguments"));
                }
                let rt = self.type_expr(env, recv, allow_stupid)?;
                let spec = self
                    .methods(&rt)
                    .into_iter()
                    .find(|s| s.name == *method)
                    .ok_or_else(|| {
                        Diagnostic::new(
                            e.span,
                            "t-call",
                            format!("{rt} has no method {method}"),
                        )
                    })?;
                if spec.sig.params.len() != args.len() {
                    return Err(Diagnostic::new(
                        e.span,
                        "t-call",
                        format!(
                            "{method} expects {} arguments, got {}",
                            spec.sig.params.len(),
                            args.len()
                        ),
                    ));
                }
                for (p, a) in spec.sig.params.iter().zip(args) {
                    let at = self.type_expr(env, a, allow_stupid)?;
                    if !self.subtype(&at, &p.ty) {
                        return Err(Diagnostic::new(
                            a.span,
                            "t-call",
                            format!("argument {} expects {}, got {}", p.name, p.ty, at),
                        ));
                    }
                }
                Ok(spec.sig.ret.clone())
            }
            ExprKind::Assert { recv, ty } => {
                self.type_declared(ty, e.span)?;
                let rt = self.type_expr(env, recv, allow_stupid)?;
                if self.is_interface(&rt) {
                    if self.is_interface(ty) || self.subtype(ty, &rt) {
                        Ok(ty.clone())
                    } else {
                        Err(Diagnostic::new(
                            e.span,
                            "t-assert",
                            format!("{ty} does not implement {rt}"),
                        ))
                    }
                } else if allow_stupid {
                    Ok(ty.clone())
                } else {
                    Err(Diagnostic::new(
                        e.span,
                        "t-assert",
                        format!("assertion on concrete type {rt}"),
                    ))
                }
            }
            ExprKind::IntLit { ty, .. } => self.lit_type(ty, Prim::Int, e.span),
            ExprKind::BoolLit { ty, .. } => self.lit_type(ty, Prim::Bool, e.span),
            ExprKind::StrLit { ty, .. } => self.lit_type(ty, Prim::Str, e.span),
            ExprKind::BinOp { op, lhs, rhs } => {
                let lt = self.type_expr(env, lhs, allow_stupid)?;
                let rt = self.type_expr(env, rhs, allow_stupid)?;
                self.binop_type(*op, &lt, &rt, e.span)
            }
            ExprKind::Sprintf { format, args } => {
                let verbs = parse_verbs(format).map_err(|m| {
                    Diagnostic::new(e.span, "t-sprintf", m)
                })?;
                if verbs.len() != args.len() {
                    return Err(Diagnostic::new(
                        e.span,
                        "t-sprintf",
                        format!("format has {} verbs, got {} arguments", verbs.len(), args.len()),
                    ));
                }
                for (v, a) in verbs.iter().zip(args) {
                    let at = self.type_expr(env, a, allow_stupid)?;
                    if *v == Verb::Int && self.underlying(&at) != Some(Prim::Int) {
                        return Err(Diagnostic::new(
                            a.span,
                            "t-sprintf",
                            format!("%d expects an integer, got {at}"),
                        ));
                    }
                    // %s accepts any value; non-strings print structurally.
                }
                Ok(Type::named("string"))
            }
        }
    }

    fn lit_type(&self, ty: &Name, want: Prim, span: Span) -> TypeResult<Type> {
        if !self.prog.extended {
            return Err(Diagnostic::new(span, "t-lit", "literals require extended mode"));
        }
        let t = Type::named(ty.clone());
        match self.underlying(&t) {
            Some(p) if p == want => Ok(t),
            _ => Err(Diagnostic::new(
                span,
                "t-lit",
                format!("literal type {ty} does not have underlying {}", want.type_name()),
            )),
        }
    }

    pub fn binop_type(&self, op: BinOp, lt: &Type, rt: &Type, span: Span) -> TypeResult<Type> {
        let err = |msg: String| Err(Diagnostic::new(span, "t-op", msg));
        let lu = self.underlying(lt);
        let ru = self.underlying(rt);
        match op {
            BinOp::Add => {
                if lu != Some(Prim::Int) || ru != Some(Prim::Int) {
                    return err(format!("+ expects integers, got {lt} and {rt}"));
                }
                // an untyped-constant side adopts the other side's type
                if Self::name_of(lt) == "int" {
                    Ok(rt.clone())
                } else if Self::name_of(rt) == "int" || lt == rt {
                    Ok(lt.clone())
                } else {
                    err(format!("+ operands have different types {lt} and {rt}"))
                }
            }
            BinOp::Gt => {
                if lu == Some(Prim::Int) && ru == Some(Prim::Int) {
                    Ok(Type::named("bool"))
                } else {
                    err(format!("> expects integers, got {lt} and {rt}"))
                }
            }
            BinOp::Eq => {
                if lu.is_some() && lu == ru {
                    Ok(Type::named("bool"))
                } else {
                    err(format!("== expects matching primitives, got {lt} and {rt}"))
                }
            }
            BinOp::And => {
                if lu == Some(Prim::Bool) && ru == Some(Prim::Bool) {
                    Ok(Type::named("bool"))
                } else {
                    err(format!("&& expects booleans, got {lt} and {rt}"))
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verb {
    Int,
    Any,
}

/// The supported format verbs: `%d` and `%s`.
pub fn parse_verbs(format: &str) -> Result<Vec<Verb>, String> {
    let mut out = Vec::new();
    let mut chars = format.chars();
    while let Some(c) = chars.next() {
        if c != '%' {
            continue;
        }
        match chars.next() {
            Some('d') => out.push(Verb::Int),
            Some('s') => out.push(Verb::Any),
            Some('%') => {}
            other => return Err(format!("unsupported format verb %{}", other.unwrap_or(' '))),
        }
    }
    Ok(out)
}

/// Whole-program well-formedness: distinct names, well-formed declarations,
/// method bodies and main typed without stupid casts.
pub fn check_program_fg(prog: &Program) -> Result<Program, Vec<Diagnostic>> {
    let mut prog = prog.clone();
    expand_embeddings(&mut prog).map_err(|d| vec![d])?;
    let mut errs = Vec::new();

    // distinct type names / method names per receiver
    let mut seen_types: Vec<&str> = Vec::new();
    let mut seen_methods: Vec<(&str, &str)> = Vec::new();
    for d in prog.type_decls() {
        if Prim::from_name(&d.name).is_some() {
            errs.push(Diagnostic::new(d.span, "t-type", format!("cannot redeclare {}", d.name)));
        }
        if seen_types.contains(&d.name.as_str()) {
            errs.push(Diagnostic::new(d.span, "t-prog", format!("duplicate type {}", d.name)));
        }
        seen_types.push(&d.name);
    }
    for m in prog.method_decls() {
        let key = (m.recv_type.as_str(), m.name.as_str());
        if seen_methods.contains(&key) {
            errs.push(Diagnostic::new(
                m.span,
                "t-prog",
                format!("duplicate method {}.{}", m.recv_type, m.name),
            ));
        }
        seen_methods.push(key);
    }

    let ck = FgChecker::new(&prog);

    for d in prog.type_decls() {
        if let Err(e) = check_type_decl(&ck, d) {
            errs.push(e);
        }
    }
    if let Err(e) = check_struct_recursion(&prog) {
        errs.push(e);
    }
    for m in prog.method_decls() {
        if let Err(e) = check_method_decl(&ck, m) {
            errs.push(e);
        }
    }
    match ck.type_expr(&Vec::new(), &prog.main, false) {
        Ok(_) => {}
        Err(e) => errs.push(e),
    }

    if errs.is_empty() {
        Ok(prog)
    } else {
        Err(errs)
    }
}

fn check_type_decl(ck: &FgChecker, d: &TypeDecl) -> TypeResult<()> {
    match &d.lit {
        TypeLit::Struct { fields } => {
            let mut seen: Vec<&str> = Vec::new();
            for f in fields {
                if seen.contains(&f.name.as_str()) {
                    return Err(Diagnostic::new(
                        d.span,
                        "t-type",
                        format!("duplicate field {}", f.name),
                    ));
                }
                seen.push(&f.name);
                ck.type_declared(&f.ty, d.span)?;
            }
            Ok(())
        }
        TypeLit::Interface { specs, .. } => {
            let mut seen: Vec<&str> = Vec::new();
            for s in specs {
                if seen.contains(&s.name.as_str()) {
                    return Err(Diagnostic::new(
                        d.span,
                        "t-type",
                        format!("duplicate method specification {}", s.name),
                    ));
                }
                seen.push(&s.name);
                check_sig(ck, &s.sig, d.span)?;
            }
            Ok(())
        }
        TypeLit::Alias(_) => {
            if ck.prog.extended {
                Ok(())
            } else {
                Err(Diagnostic::new(d.span, "t-type", "defined primitives require extended mode"))
            }
        }
    }
}

fn check_sig(ck: &FgChecker, sig: &Sig, span: Span) -> TypeResult<()> {
    let mut seen: Vec<&str> = Vec::new();
    for p in &sig.params {
        if !p.name.is_empty() && seen.contains(&p.name.as_str()) {
            return Err(Diagnostic::new(span, "t-sig", format!("duplicate parameter {}", p.name)));
        }
        seen.push(&p.name);
        ck.type_declared(&p.ty, span)?;
    }
    ck.type_declared(&sig.ret, span)
}

fn check_method_decl(ck: &FgChecker, m: &MethodDecl) -> TypeResult<()> {
    let recv_ty = Type::named(m.recv_type.clone());
    ck.type_declared(&recv_ty, m.span)?;
    if ck.is_interface(&recv_ty) {
        return Err(Diagnostic::new(
            m.span,
            "t-func",
            format!("receiver {} is an interface", m.recv_type),
        ));
    }
    check_sig(ck, &m.sig, m.span)?;
    let mut seen = vec![m.recv_name.as_str()];
    for p in &m.sig.params {
        if seen.contains(&p.name.as_str()) {
            return Err(Diagnostic::new(
                m.span,
                "t-func",
                format!("duplicate parameter {}", p.name),
            ));
        }
        seen.push(&p.name);
    }
    let mut env: Env = vec![(m.recv_name.clone(), recv_ty)];
    env.extend(m.sig.params.iter().map(|p| (p.name.clone(), p.ty.clone())));
    let bt = ck.type_expr(&env, &m.body, false)?;
    if !ck.subtype(&bt, &m.sig.ret) {
        return Err(Diagnostic::new(
            m.body.span,
            "t-func",
            format!("body has type {bt}, expected {}", m.sig.ret),
        ));
    }
    Ok(())
}

/// Struct declarations must not be recursive through struct-typed fields
/// (recursion through an interface is fine).
fn check_struct_recursion(prog: &Program) -> TypeResult<()> {
    fn visit<'p>(
        prog: &'p Program,
        name: &'p str,
        state: &mut Vec<(&'p str, bool)>, // (name, done)
        span: Span,
    ) -> TypeResult<()> {
        match state.iter().find(|(n, _)| *n == name) {
            Some((_, true)) => return Ok(()),
            Some((_, false)) => {
                return Err(Diagnostic::new(
                    span,
                    "t-type",
                    format!("invalid recursive struct {name}"),
                ))
            }
            None => {}
        }
        state.push((name, false));
        if let Some(TypeDecl { lit: TypeLit::Struct { fields }, span, .. }) =
            prog.lookup_type(name)
        {
            for f in fields {
                if let Some(head) = f.ty.head() {
                    if matches!(
                        prog.lookup_type(head).map(|d| &d.lit),
                        Some(TypeLit::Struct { .. })
                    ) {
                        visit(prog, head, state, *span)?;
                    }
                }
            }
        }
        let entry = state.iter_mut().find(|(n, _)| *n == name).unwrap();
        entry.1 = true;
        Ok(())
    }

    let mut state = Vec::new();
    for d in prog.type_decls() {
        if matches!(d.lit, TypeLit::Struct { .. }) {
            visit(prog, &d.name, &mut state, d.span)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_program, ParseOptions};

    fn check(src: &str) -> Result<Program, Vec<Diagnostic>> {
        check_program_fg(&parse_program(src, ParseOptions::fg()).unwrap())
    }

    const BASE: &str = "package main\n\
        type Any interface {}\n\
        type Eq interface { Equal(that Any) Bool }\n\
        type Bool interface { Not() Bool }\n\
        type T struct {}\n\
        type F struct {}\n\
        func (this T) Not() Bool { return F{} }\n\
        func (this F) Not() Bool { return T{} }\n";

    #[test]
    fn accepts_well_typed_program() {
        let src = format!("{BASE}func main() {{ _ = T{{}}.Not().Not() }}\n");
        assert!(check(&src).is_ok());
    }

    #[test]
    fn structs_implement_interfaces_by_method_set() {
        let src = format!(
            "{BASE}type pair struct {{ b Bool }}\n\
             func main() {{ _ = pair{{T{{}}}}.b.Not() }}\n"
        );
        let p = check(&src).unwrap();
        let ck = FgChecker::new(&p);
        assert!(ck.subtype(&Type::named("T"), &Type::named("Bool")));
        assert!(ck.subtype(&Type::named("T"), &Type::named("Any")));
        assert!(!ck.subtype(&Type::named("T"), &Type::named("Eq")));
        assert!(!ck.subtype(&Type::named("T"), &Type::named("F")));
        assert!(ck.subtype(&Type::named("Bool"), &Type::named("Any")));
        assert!(!ck.subtype(&Type::named("Any"), &Type::named("Bool")));
    }

    #[test]
    fn rejects_bad_field_and_call() {
        let bad_field = format!("{BASE}func main() {{ _ = T{{}}.missing }}\n");
        assert!(check(&bad_field).is_err());
        let bad_call = format!("{BASE}func main() {{ _ = T{{}}.Equal(F{{}}) }}\n");
        assert!(check(&bad_call).is_err());
        let bad_arity = format!("{BASE}func main() {{ _ = T{{F{{}}}} }}\n");
        assert!(check(&bad_arity).is_err());
    }

    #[test]
    fn stupid_casts_only_during_reduction() {
        let src = format!("{BASE}func main() {{ _ = T{{}}.(F) }}\n");
        assert!(check(&src).is_err());
        // the same expression re-types once stupid casts are admitted
        let p = parse_program(&src, ParseOptions::fg()).unwrap();
        let mut p2 = p.clone();
        expand_embeddings(&mut p2).unwrap();
        let ck = FgChecker::new(&p2);
        assert!(ck.type_expr(&Vec::new(), &p2.main, true).is_ok());
    }

    #[test]
    fn assert_from_interface() {
        // interface-to-interface: always allowed
        let src = format!(
            "{BASE}type box struct {{ v Any }}\n\
             func main() {{ _ = box{{T{{}}}}.v.(Eq) }}\n"
        );
        assert!(check(&src).is_ok());
        // interface-to-struct: target must implement the source
        let ok = format!(
            "{BASE}type box struct {{ v Bool }}\n\
             func main() {{ _ = box{{T{{}}}}.v.(T) }}\n"
        );
        assert!(check(&ok).is_ok());
        let bad = format!(
            "{BASE}type box struct {{ v Bool }}\n\
             type plain struct {{}}\n\
             func main() {{ _ = box{{T{{}}}}.v.(plain) }}\n"
        );
        assert!(check(&bad).is_err());
    }

    #[test]
    fn rejects_duplicate_declarations() {
        let dup_type = format!("{BASE}type T struct {{}}\nfunc main() {{ _ = T{{}} }}\n");
        assert!(check(&dup_type).is_err());
        let dup_method = format!(
            "{BASE}func (this T) Not() Bool {{ return T{{}} }}\nfunc main() {{ _ = T{{}} }}\n"
        );
        assert!(check(&dup_method).is_err());
    }

    #[test]
    fn rejects_recursive_struct() {
        let src = "package main\n\
            type a struct { next b }\n\
            type b struct { next a }\n\
            type t struct {}\n\
            func main() { _ = t{} }\n";
        assert!(check(src).is_err());
        // recursion through an interface is fine
        let ok = "package main\n\
            type List interface { Tail() List }\n\
            type Nil struct {}\n\
            type Cons struct { tail List }\n\
            func (this Nil) Tail() List { return this }\n\
            func (this Cons) Tail() List { return this.tail }\n\
            func main() { _ = Cons{Cons{Nil{}}}.Tail() }\n";
        assert!(check(ok).is_ok());
    }
}
