//! FGG type checker.
//!
//! Types are parameterised; every judgement carries a type environment Δ
//! mapping type parameters to their (interface) bounds. Subtyping is
//! structural as in FG, with a parameter's method set taken from its bound.
//!
//! A method declaration's receiver bounds may be stronger than the bounds on
//! the receiver's type declaration; the method is then simply absent from
//! the method set of instantiations that do not satisfy them.

use crate::ast::*;
use crate::diag::{Diagnostic, TypeResult};
use crate::embed::expand_embeddings;
use crate::fg_typing::parse_verbs;
use crate::fg_typing::Verb;

/// Type environment Δ: parameter name → bound.
pub type TypeEnv = Vec<(Name, Type)>;

/// Value environment Γ.
pub type Env = Vec<(Name, Type)>;

pub struct FggChecker<'a> {
    pub prog: &'a Program,
}

impl<'a> FggChecker<'a> {
    pub fn new(prog: &'a Program) -> Self {
        FggChecker { prog }
    }

    fn is_prim_name(&self, name: &str) -> bool {
        self.prog.extended && Prim::from_name(name).is_some()
    }

    /// `bounds_Δ(τ)`: the bound of a parameter, the type itself otherwise.
    pub fn bounds(&self, delta: &TypeEnv, ty: &Type) -> TypeResult<Type> {
        match ty {
            Type::Param(a) => delta
                .iter()
                .find(|(n, _)| n == a)
                .map(|(_, b)| b.clone())
                .ok_or_else(|| {
                    Diagnostic::new(Span::default(), "bounds", format!("unbound type parameter {a}"))
                }),
            _ => Ok(ty.clone()),
        }
    }

    pub fn is_interface(&self, ty: &Type) -> bool {
        match ty {
            Type::Param(_) => false,
            Type::Named { name, .. } => {
                !self.is_prim_name(name)
                    && matches!(
                        self.prog.lookup_type(name).map(|d| &d.lit),
                        Some(TypeLit::Interface { .. })
                    )
            }
        }
    }

    /// Concrete type: a struct or defined/raw primitive (never a parameter).
    pub fn is_concrete(&self, ty: &Type) -> bool {
        match ty {
            Type::Param(_) => false,
            Type::Named { name, .. } => {
                self.is_prim_name(name)
                    || matches!(
                        self.prog.lookup_type(name).map(|d| &d.lit),
                        Some(TypeLit::Struct { .. }) | Some(TypeLit::Alias(_))
                    )
            }
        }
    }

    /// Check actual type arguments against formals and build the
    /// substitution `(Φ := φ)`; bounds are read under the substitution, so
    /// mutually recursive bounds work.
    pub fn subst_checked(
        &self,
        delta: &TypeEnv,
        formals: &[TypeParam],
        actuals: &[Type],
        span: Span,
    ) -> TypeResult<TypeSubst> {
        if formals.len() != actuals.len() {
            return Err(Diagnostic::new(
                span,
                "t-named",
                format!("expected {} type arguments, got {}", formals.len(), actuals.len()),
            ));
        }
        let eta = TypeSubst::new(
            formals
                .iter()
                .zip(actuals)
                .map(|(f, a)| (f.name.clone(), a.clone()))
                .collect(),
        );
        for (f, a) in formals.iter().zip(actuals) {
            self.type_ok(delta, a, span)?;
            let want = eta.apply(&f.bound);
            if !self.implements(delta, a, &want)? {
                return Err(Diagnostic::new(
                    span,
                    "t-named",
                    format!("type argument {a} does not implement bound {want}"),
                ));
            }
        }
        Ok(eta)
    }

    /// Well-formedness of a type under Δ.
    pub fn type_ok(&self, delta: &TypeEnv, ty: &Type, span: Span) -> TypeResult<()> {
        match ty {
            Type::Param(a) => {
                if delta.iter().any(|(n, _)| n == a) {
                    Ok(())
                } else {
                    Err(Diagnostic::new(span, "t-param", format!("unbound type parameter {a}")))
                }
            }
            Type::Named { name, args } => {
                if self.is_prim_name(name) {
                    return if args.is_empty() {
                        Ok(())
                    } else {
                        Err(Diagnostic::new(span, "t-named", format!("{name} takes no arguments")))
                    };
                }
                let decl = self.prog.lookup_type(name).ok_or_else(|| {
                    Diagnostic::new(span, "t-named", format!("undeclared type {name}"))
                })?;
                self.subst_checked(delta, &decl.formals, args, span)?;
                Ok(())
            }
        }
    }

    /// `methods_Δ(τ)`: the method specifications of a type. A method
    /// declaration whose receiver bounds are not satisfied by the
    /// instantiation is absent from the set.
    pub fn methods(&self, delta: &TypeEnv, ty: &Type) -> TypeResult<Vec<Spec>> {
        match ty {
            Type::Param(_) => {
                let b = self.bounds(delta, ty)?;
                self.methods(delta, &b)
            }
            Type::Named { name, args } => {
                if self.is_prim_name(name) {
                    return Ok(Vec::new());
                }
                let Some(decl) = self.prog.lookup_type(name) else {
                    return Ok(Vec::new());
                };
                match &decl.lit {
                    TypeLit::Interface { specs, .. } => {
                        let eta = TypeSubst::new(
                            decl.formals
                                .iter()
                                .zip(args)
                                .map(|(f, a)| (f.name.clone(), a.clone()))
                                .collect(),
                        );
                        Ok(specs.iter().map(|s| eta.apply_spec(s)).collect())
                    }
                    TypeLit::Struct { .. } | TypeLit::Alias(_) => {
                        let mut out = Vec::new();
                        for m in self.prog.methods_of(name) {
                            if self
                                .subst_checked(delta, &m.recv_formals, args, decl.span)
                                .is_err()
                            {
                                continue;
                            }
                            let eta = TypeSubst::new(
                                m.recv_formals
                                    .iter()
                                    .zip(args)
                                    .map(|(f, a)| (f.name.clone(), a.clone()))
                                    .collect(),
                            );
                            out.push(Spec { name: m.name.clone(), sig: eta.apply_sig(&m.sig) });
                        }
                        Ok(out)
                    }
                }
            }
        }
    }

    /// `τ <:_Δ σ`.
    pub fn implements(&self, delta: &TypeEnv, t: &Type, u: &Type) -> TypeResult<bool> {
        if t == u {
            return Ok(true);
        }
        if self.is_interface(u) {
            let want = self.methods(delta, u)?;
            if want.is_empty() {
                return Ok(true);
            }
            let have = self.methods(delta, t)?;
            Ok(want.iter().all(|s| have.iter().any(|h| h.spec_eq(s))))
        } else {
            Ok(false)
        }
    }

    /// `fields(t_S(φ))`, instantiated.
    pub fn fields(&self, ty: &Type, span: Span) -> TypeResult<Vec<Param>> {
        let Type::Named { name, args } = ty else {
            return Err(Diagnostic::new(span, "fields", format!("{ty} is not a structure type")));
        };
        let decl = self.prog.lookup_type(name).ok_or_else(|| {
            Diagnostic::new(span, "fields", format!("undeclared type {name}"))
        })?;
        let TypeLit::Struct { fields } = &decl.lit else {
            return Err(Diagnostic::new(span, "fields", format!("{ty} is not a structure type")));
        };
        let eta = TypeSubst::new(
            decl.formals
                .iter()
                .zip(args)
                .map(|(f, a)| (f.name.clone(), a.clone()))
                .collect(),
        );
        Ok(fields
            .iter()
            .map(|f| Param { name: f.name.clone(), ty: eta.apply(&f.ty) })
            .collect())
    }

    /// Underlying primitive of a type under Δ, if any (extended mode).
    pub fn underlying(&self, ty: &Type) -> Option<Prim> {
        let Type::Named { name, .. } = ty else { return None };
        if self.is_prim_name(name) {
            return Prim::from_name(name);
        }
        match self.prog.lookup_type(name).map(|d| &d.lit) {
            Some(TypeLit::Alias(p)) => Some(*p),
            _ => None,
        }
    }

    /// Type of an expression under Δ; Γ. `allow_stupid` admits assertions on
    /// a concrete source type (reduction only).
    pub fn type_expr(
        &self,
        delta: &TypeEnv,
        env: &Env,
        e: &Expr,
        allow_stupid: bool,
    ) -> TypeResult<Type> {
        match &e.kind {
            ExprKind::Var(x) => env
                .iter()
                .rev()
                .find(|(n, _)| n == x)
                .map(|(_, t)| t.clone())
                .ok_or_else(|| Diagnostic::new(e.span, "t-var", format!("unbound variable {x}"))),
            ExprKind::StructLit { ty, args } => {
                self.type_ok(delta, ty, e.span)?;
                if !self.is_concrete(ty) || self.underlying(ty).is_some() {
                    return Err(Diagnostic::new(
                        e.span,
                        "t-literal",
                        format!("{ty} is not a structure type"),
                    ));
                }
                let fields = self.fields(ty, e.span)?;
                if fields.len() != args.len() {
                    return Err(Diagnostic::new(
                        e.span,
                        "t-literal",
                        format!("{ty} has {} fields, literal has {}", fields.len(), args.len()),
                    ));
                }
                for (f, a) in fields.iter().zip(args) {
                    let at = self.type_expr(delta, env, a, allow_stupid)?;
                    if !self.implements(delta, &at, &f.ty)? {
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
                let rt = self.type_expr(delta, env, recv, allow_stupid)?;
                let fields = self.fields(&rt, e.span)?;
                fields
                    .iter()
                    .find(|f| f.name == *field)
                    .map(|f| f.ty.clone())
                    .ok_or_else(|| {
                        Diagnostic::new(e.span, "t-field", format!("{rt} has no field {field}"))
                    })
            }
            ExprKind::Call { recv, method, type_args, args } => {
                let rt = self.type_expr(delta, env, recv, allow_stupid)?;
                let spec = self
                    .methods(delta, &rt)?
                    .into_iter()
                    .find(|s| s.name == *method)
                    .ok_or_else(|| {
                        Diagnostic::new(e.span, "t-call", format!("{rt} has no method {method}"))
                    })?;
                let eta = self.subst_checked(delta, &spec.sig.type_formals, type_args, e.span)?;
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
                    let at = self.type_expr(delta, env, a, allow_stupid)?;
                    let want = eta.apply(&p.ty);
                    if !self.implements(delta, &at, &want)? {
                        return Err(Diagnostic::new(
                            a.span,
                            "t-call",
                            format!("argument {} expects {want}, got {at}", p.name),
                        ));
                    }
                }
                Ok(eta.apply(&spec.sig.ret))
            }
            ExprKind::Assert { recv, ty } => {
                self.type_ok(delta, ty, e.span)?;
                let rt = self.type_expr(delta, env, recv, allow_stupid)?;
                let rb = self.bounds(delta, &rt)?;
                if self.is_interface(&rb) {
                    if self.is_concrete(ty) {
                        // asserting to a concrete type: it must be able to
                        // hold a value of the source interface
                        if self.implements(delta, ty, &rb)? {
                            Ok(ty.clone())
                        } else {
                            Err(Diagnostic::new(
                                e.span,
                                "t-assert",
                                format!("{ty} does not implement {rb}"),
                            ))
                        }
                    } else {
                        Ok(ty.clone())
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
                let lt = self.type_expr(delta, env, lhs, allow_stupid)?;
                let rt = self.type_expr(delta, env, rhs, allow_stupid)?;
                self.binop_type(*op, &lt, &rt, e.span)
            }
            ExprKind::Sprintf { format, args } => {
                let verbs =
                    parse_verbs(format).map_err(|m| Diagnostic::new(e.span, "t-sprintf", m))?;
                if verbs.len() != args.len() {
                    return Err(Diagnostic::new(
                        e.span,
                        "t-sprintf",
                        format!("format has {} verbs, got {} arguments", verbs.len(), args.len()),
                    ));
                }
                for (v, a) in verbs.iter().zip(args) {
                    let at = self.type_expr(delta, env, a, allow_stupid)?;
                    if *v == Verb::Int && self.underlying(&at) != Some(Prim::Int) {
                        return Err(Diagnostic::new(
                            a.span,
                            "t-sprintf",
                            format!("%d expects an integer, got {at}"),
                        ));
                    }
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

    fn binop_type(&self, op: BinOp, lt: &Type, rt: &Type, span: Span) -> TypeResult<Type> {
        let err = |msg: String| Err(Diagnostic::new(span, "t-op", msg));
        let lu = self.underlying(lt);
        let ru = self.underlying(rt);
        let name_of = |t: &Type| t.head().unwrap_or("").to_owned();
        match op {
            BinOp::Add => {
                if lu != Some(Prim::Int) || ru != Some(Prim::Int) {
                    return err(format!("+ expects integers, got {lt} and {rt}"));
                }
                if name_of(lt) == "int" {
                    Ok(rt.clone())
                } else if name_of(rt) == "int" || lt == rt {
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

    /// Well-formedness of a formal list; bounds may refer to any formal in
    /// the list (mutual recursion) and must be interfaces.
    pub fn type_formals_ok(
        &self,
        outer: &TypeEnv,
        formals: &[TypeParam],
        span: Span,
    ) -> TypeResult<TypeEnv> {
        let mut delta = outer.clone();
        for f in formals {
            if delta.iter().any(|(n, _)| n == &f.name) {
                return Err(Diagnostic::new(
                    span,
                    "t-formals",
                    format!("duplicate type parameter {}", f.name),
                ));
            }
            if self.prog.lookup_type(&f.name).is_some() || self.is_prim_name(&f.name) {
                return Err(Diagnostic::new(
                    span,
                    "t-formals",
                    format!("type parameter {} shadows a type name", f.name),
                ));
            }
            delta.push((f.name.clone(), f.bound.clone()));
        }
        for f in formals {
            self.type_ok(&delta, &f.bound, span)?;
            let b = self.bounds(&delta, &f.bound)?;
            if !self.is_interface(&b) {
                return Err(Diagnostic::new(
                    span,
                    "t-formals",
                    format!("bound {} of {} is not an interface", f.bound, f.name),
                ));
            }
        }
        Ok(delta)
    }
}

/// Whole-program FGG well-formedness; returns the embedding-expanded program.
pub fn check_program_fgg(prog: &Program) -> Result<Program, Vec<Diagnostic>> {
    let mut prog = prog.clone();
    expand_embeddings(&mut prog).map_err(|d| vec![d])?;
    let mut errs = Vec::new();

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

    let ck = FggChecker::new(&prog);
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
    if let Err(e) = ck.type_expr(&Vec::new(), &Vec::new(), &prog.main, false) {
        errs.push(e);
    }

    if errs.is_empty() {
        Ok(prog)
    } else {
        Err(errs)
    }
}

fn check_type_decl(ck: &FggChecker, d: &TypeDecl) -> TypeResult<()> {
    let delta = ck.type_formals_ok(&Vec::new(), &d.formals, d.span)?;
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
                ck.type_ok(&delta, &f.ty, d.span)?;
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
                check_sig(ck, &delta, &s.sig, d.span)?;
            }
            Ok(())
        }
        TypeLit::Alias(_) => {
            if !d.formals.is_empty() {
                return Err(Diagnostic::new(d.span, "t-type", "defined primitives take no formals"));
            }
            if ck.prog.extended {
                Ok(())
            } else {
                Err(Diagnostic::new(d.span, "t-type", "defined primitives require extended mode"))
            }
        }
    }
}

fn check_sig(ck: &FggChecker, outer: &TypeEnv, sig: &Sig, span: Span) -> TypeResult<TypeEnv> {
    let delta = ck.type_formals_ok(outer, &sig.type_formals, span)?;
    let mut seen: Vec<&str> = Vec::new();
    for p in &sig.params {
        if !p.name.is_empty() && seen.contains(&p.name.as_str()) {
            return Err(Diagnostic::new(span, "t-sig", format!("duplicate parameter {}", p.name)));
        }
        seen.push(&p.name);
        ck.type_ok(&delta, &p.ty, span)?;
    }
    ck.type_ok(&delta, &sig.ret, span)?;
    Ok(delta)
}

fn check_method_decl(ck: &FggChecker, m: &MethodDecl) -> TypeResult<()> {
    let Some(recv_decl) = ck.prog.lookup_type(&m.recv_type) else {
        return Err(Diagnostic::new(
            m.span,
            "t-func",
            format!("undeclared receiver type {}", m.recv_type),
        ));
    };
    if matches!(recv_decl.lit, TypeLit::Interface { .. }) {
        return Err(Diagnostic::new(
            m.span,
            "t-func",
            format!("receiver {} is an interface", m.recv_type),
        ));
    }
    if recv_decl.formals.len() != m.recv_formals.len() {
        return Err(Diagnostic::new(
            m.span,
            "t-func",
            format!(
                "{} declares {} type parameters, receiver binds {}",
                m.recv_type,
                recv_decl.formals.len(),
                m.recv_formals.len()
            ),
        ));
    }
    let delta = ck.type_formals_ok(&Vec::new(), &m.recv_formals, m.span)?;
    // Receiver bounds may strengthen the declaration's bounds, never relax
    // them: every instantiation accepted here is accepted by the type.
    let ren = TypeSubst::new(
        recv_decl
            .formals
            .iter()
            .zip(&m.recv_formals)
            .map(|(df, mf)| (df.name.clone(), Type::param(mf.name.clone())))
            .collect(),
    );
    for (df, mf) in recv_decl.formals.iter().zip(&m.recv_formals) {
        let decl_bound = ren.apply(&df.bound);
        if !ck.implements(&delta, &mf.bound, &decl_bound)? {
            return Err(Diagnostic::new(
                m.span,
                "t-func",
                format!(
                    "receiver bound {} on {} weaker than declared bound {}",
                    mf.bound, mf.name, decl_bound
                ),
            ));
        }
    }

    let delta_full = check_sig(ck, &delta, &m.sig, m.span)?;
    let recv_ty = Type::Named {
        name: m.recv_type.clone(),
        args: m.recv_formals.iter().map(|f| Type::param(f.name.clone())).collect(),
    };
    let mut seen = vec![m.recv_name.as_str()];
    for p in &m.sig.params {
        if seen.contains(&p.name.as_str()) {
            return Err(Diagnostic::new(m.span, "t-func", format!("duplicate parameter {}", p.name)));
        }
        seen.push(&p.name);
    }
    let mut env: Env = vec![(m.recv_name.clone(), recv_ty)];
    env.extend(m.sig.params.iter().map(|p| (p.name.clone(), p.ty.clone())));
    let bt = ck.type_expr(&delta_full, &env, &m.body, false)?;
    if !ck.implements(&delta_full, &bt, &m.sig.ret)? {
        return Err(Diagnostic::new(
            m.body.span,
            "t-func",
            format!("body has type {bt}, expected {}", m.sig.ret),
        ));
    }
    Ok(())
}

/// Struct declarations must not be recursive through struct-typed fields.
fn check_struct_recursion(prog: &Program) -> TypeResult<()> {
    fn visit<'p>(
        prog: &'p Program,
        name: &'p str,
        state: &mut Vec<(&'p str, bool)>,
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
        if let Some(TypeDecl { lit: TypeLit::Struct { fields }, span, .. }) = prog.lookup_type(name)
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
        check_program_fgg(&parse_program(src, ParseOptions::fgg()).unwrap())
    }

    const LIST: &str = "package main\n\
        type Any interface {}\n\
        type Function(type a Any, b Any) interface { Apply(x a) b }\n\
        type List(type a Any) interface { Map(type b Any)(f Function(a, b)) List(b) }\n\
        type Nil(type a Any) struct {}\n\
        type Cons(type a Any) struct { head a; tail List(a) }\n\
        func (xs Nil(type a Any)) Map(type b Any)(f Function(a, b)) List(b) { return Nil(b){} }\n\
        func (xs Cons(type a Any)) Map(type b Any)(f Function(a, b)) List(b) {\n\
          return Cons(b){f.Apply(xs.head), xs.tail.Map(b)(f)}\n\
        }\n";

    #[test]
    fn generic_list_program_checks() {
        let src = format!(
            "{LIST}type id(type a Any) struct {{}}\n\
             func (this id(type a Any)) Apply(x a) a {{ return x }}\n\
             func main() {{ _ = Cons(Any){{Nil(Any){{}}, Nil(Any){{}}}}.Map(Any)(id(Any){{}}) }}\n"
        );
        assert!(check(&src).is_ok(), "{:?}", check(&src).err());
    }

    #[test]
    fn bound_violation_rejected() {
        let src = "package main\n\
            type Any interface {}\n\
            type Eq(type a Any) interface { Equal(that a) Eq(a) }\n\
            type Set(type a Eq(a)) struct { elem a }\n\
            type plain struct {}\n\
            func main() { _ = Set(plain){plain{}} }\n";
        assert!(check(src).is_err());
    }

    #[test]
    fn recursive_bounds_check() {
        // a's bound mentions a itself
        let src = "package main\n\
            type Any interface {}\n\
            type Eq(type a Any) interface { Equal(that a) Eq(a) }\n\
            type mine struct {}\n\
            func (this mine) Equal(that mine) Eq(mine) { return this }\n\
            type Set(type a Eq(a)) struct { elem a }\n\
            func main() { _ = Set(mine){mine{}} }\n";
        assert!(check(src).is_ok(), "{:?}", check(src).err());
    }

    #[test]
    fn method_set_of_param_is_its_bound() {
        let src = format!(
            "{LIST}type wrap(type a List(a)) struct {{}}\n\
             func main() {{ _ = Nil(Any){{}} }}\n"
        );
        let p = check(&src).unwrap();
        let ck = FggChecker::new(&p);
        let delta: TypeEnv =
            vec![("a".into(), Type::app("List", vec![Type::param("a")]))];
        let specs = ck.methods(&delta, &Type::param("a")).unwrap();
        assert_eq!(specs.len(), 1);
        assert_eq!(specs[0].name, "Map");
    }

    #[test]
    fn stronger_receiver_bounds_drop_methods() {
        let src = "package main\n\
            type Any interface {}\n\
            type Shower interface { Show() Shower }\n\
            type Box(type a Any) struct { v a }\n\
            func (b Box(type a Shower)) Show() Shower { return b.v.Show() }\n\
            type plain struct {}\n\
            type neat struct {}\n\
            func (n neat) Show() Shower { return n }\n\
            func main() { _ = Box(plain){plain{}} }\n";
        let p = check(src).unwrap();
        let ck = FggChecker::new(&p);
        let none = ck.methods(&Vec::new(), &Type::app("Box", vec![Type::named("plain")])).unwrap();
        assert!(none.is_empty());
        let some = ck.methods(&Vec::new(), &Type::app("Box", vec![Type::named("neat")])).unwrap();
        assert_eq!(some.len(), 1);
        // and the weaker-bound direction is rejected outright
        let bad = "package main\n\
            type Any interface {}\n\
            type Shower interface { Show() Shower }\n\
            type Box(type a Shower) struct { v a }\n\
            func (b Box(type a Any)) Get() a { return b.v }\n\
            type t struct {}\n\
            func main() { _ = t{} }\n";
        assert!(check(bad).is_err());
    }

    #[test]
    fn generic_call_site_checks_type_args() {
        let bad = format!(
            "{LIST}type id(type a Any) struct {{}}\n\
             func (this id(type a Any)) Apply(x a) a {{ return x }}\n\
             func main() {{ _ = Nil(Any){{}}.Map(Any, Any)(id(Any){{}}) }}\n"
        );
        assert!(check(&bad).is_err());
    }

    #[test]
    fn assert_rules() {
        let base = "package main\n\
            type Any interface {}\n\
            type Named interface { Name() Named }\n\
            type t struct {}\n\
            func (x t) Name() Named { return x }\n\
            type box struct { v Any }\n";
        // interface target: fine
        assert!(check(&format!("{base}func main() {{ _ = box{{t{{}}}}.v.(Named) }}\n")).is_ok());
        // concrete target implementing the source: fine
        assert!(check(&format!("{base}func main() {{ _ = box{{t{{}}}}.v.(t) }}\n")).is_ok());
        // concrete source: stupid cast, rejected in source programs
        assert!(check(&format!("{base}func main() {{ _ = t{{}}.(Named) }}\n")).is_err());
    }
}
