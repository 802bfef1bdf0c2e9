//! Shared abstract syntax for FG and FGG programs.
//!
//! FG is the degenerate case of FGG: every type is named with an empty
//! argument list and no declaration carries type formals. Both calculi share
//! this tree; `Mode` records which language a program was parsed as.

use std::fmt;

pub type Name = String;

/// Source position. Ignored by equality and hashing so that structural
/// comparison of terms (round-trip tests, lockstep bisimulation) is not
/// disturbed by where a node was written.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

impl Span {
    pub fn new(line: u32, col: u32) -> Self {
        Span { line, col }
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Fg,
    Fgg,
}

/// A type: a type parameter or a named type with arguments.
/// FG types are `Named` with empty `args` at every node.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Type {
    Param(Name),
    Named { name: Name, args: Vec<Type> },
}

impl Type {
    pub fn named(name: impl Into<Name>) -> Type {
        Type::Named { name: name.into(), args: Vec::new() }
    }

    pub fn app(name: impl Into<Name>, args: Vec<Type>) -> Type {
        Type::Named { name: name.into(), args }
    }

    pub fn param(name: impl Into<Name>) -> Type {
        Type::Param(name.into())
    }

    pub fn is_closed(&self) -> bool {
        match self {
            Type::Param(_) => false,
            Type::Named { args, .. } => args.iter().all(Type::is_closed),
        }
    }

    /// Free type parameters, in first-occurrence order.
    pub fn free_params(&self) -> Vec<Name> {
        let mut out = Vec::new();
        self.collect_free(&mut out);
        out
    }

    fn collect_free(&self, out: &mut Vec<Name>) {
        match self {
            Type::Param(a) => {
                if !out.iter().any(|x| x == a) {
                    out.push(a.clone());
                }
            }
            Type::Named { args, .. } => {
                for t in args {
                    t.collect_free(out);
                }
            }
        }
    }

    /// The head type name, if this is a named type.
    pub fn head(&self) -> Option<&str> {
        match self {
            Type::Param(_) => None,
            Type::Named { name, .. } => Some(name),
        }
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::Param(a) => write!(f, "{a}"),
            Type::Named { name, args } => {
                write!(f, "{name}")?;
                if !args.is_empty() {
                    write!(f, "(")?;
                    for (i, t) in args.iter().enumerate() {
                        if i > 0 {
                            write!(f, ", ")?;
                        }
                        write!(f, "{t}")?;
                    }
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

/// A type formal: parameter name plus its interface bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeParam {
    pub name: Name,
    pub bound: Type,
}

/// A value parameter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Param {
    pub name: Name,
    pub ty: Type,
}

/// Method signature: `(Ψ)(x̄ τ̄) τ`. FG signatures have empty `type_formals`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sig {
    pub type_formals: Vec<TypeParam>,
    pub params: Vec<Param>,
    pub ret: Type,
}

impl Sig {
    /// Signature equality: value-parameter names are irrelevant and type
    /// formals compare up to positional alpha-renaming; bounds, parameter
    /// types, and the return type must match exactly.
    pub fn sig_eq(&self, other: &Sig) -> bool {
        self.canon() == other.canon()
    }

    /// Canonical form used for signature equality and for dummy-method
    /// hashing: type formals renamed positionally, value-parameter names
    /// erased.
    pub fn canon(&self) -> Sig {
        let renaming: Vec<(Name, Type)> = self
            .type_formals
            .iter()
            .enumerate()
            .map(|(i, tp)| (tp.name.clone(), Type::Param(format!("${i}"))))
            .collect();
        let subst = TypeSubst::new(renaming);
        Sig {
            type_formals: self
                .type_formals
                .iter()
                .enumerate()
                .map(|(i, tp)| TypeParam {
                    name: format!("${i}"),
                    bound: subst.apply(&tp.bound),
                })
                .collect(),
            params: self
                .params
                .iter()
                .map(|p| Param { name: String::new(), ty: subst.apply(&p.ty) })
                .collect(),
            ret: subst.apply(&self.ret),
        }
    }
}

/// Method specification `mM` inside an interface literal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spec {
    pub name: Name,
    pub sig: Sig,
}

impl Spec {
    pub fn spec_eq(&self, other: &Spec) -> bool {
        self.name == other.name && self.sig.sig_eq(&other.sig)
    }
}

/// Extended-mode primitive underlying a defined type such as `type Int int`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Prim {
    Int,
    Bool,
    Str,
}

impl Prim {
    pub fn type_name(self) -> &'static str {
        match self {
            Prim::Int => "int",
            Prim::Bool => "bool",
            Prim::Str => "string",
        }
    }

    pub fn from_name(name: &str) -> Option<Prim> {
        match name {
            "int" => Some(Prim::Int),
            "bool" => Some(Prim::Bool),
            "string" => Some(Prim::Str),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TypeLit {
    Struct { fields: Vec<Param> },
    /// Interface literal. `embeds` is emptied by embedding expansion.
    Interface { embeds: Vec<Type>, specs: Vec<Spec> },
    /// Extended mode only: a defined type over a primitive, e.g. `type Int int`.
    Alias(Prim),
}

#[derive(Debug, Clone)]
pub struct TypeDecl {
    pub name: Name,
    pub formals: Vec<TypeParam>,
    pub lit: TypeLit,
    pub span: Span,
}

// span is position metadata, not part of declaration identity
impl PartialEq for TypeDecl {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.formals == other.formals && self.lit == other.lit
    }
}
impl Eq for TypeDecl {}

#[derive(Debug, Clone)]
pub struct MethodDecl {
    pub recv_name: Name,
    pub recv_type: Name,
    pub recv_formals: Vec<TypeParam>,
    pub name: Name,
    pub sig: Sig,
    pub body: Expr,
    pub span: Span,
}

impl PartialEq for MethodDecl {
    fn eq(&self, other: &Self) -> bool {
        self.recv_name == other.recv_name
            && self.recv_type == other.recv_type
            && self.recv_formals == other.recv_formals
            && self.name == other.name
            && self.sig == other.sig
            && self.body == other.body
    }
}
impl Eq for MethodDecl {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decl {
    Type(TypeDecl),
    Method(MethodDecl),
}

impl Decl {
    pub fn span(&self) -> Span {
        match self {
            Decl::Type(d) => d.span,
            Decl::Method(d) => d.span,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Gt,
    Eq,
    And,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Gt => ">",
            BinOp::Eq => "==",
            BinOp::And => "&&",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExprKind {
    Var(Name),
    Call {
        recv: Box<Expr>,
        method: Name,
        type_args: Vec<Type>,
        args: Vec<Expr>,
    },
    StructLit {
        ty: Type,
        args: Vec<Expr>,
    },
    Select {
        recv: Box<Expr>,
        field: Name,
    },
    Assert {
        recv: Box<Expr>,
        ty: Type,
    },
    // Extended mode.
    /// Integer literal; `ty` is "int" unless retyped to a defined type by a
    /// `var` ascription in main.
    IntLit {
        value: i64,
        ty: Name,
    },
    BoolLit {
        value: bool,
        ty: Name,
    },
    StrLit {
        value: String,
        ty: Name,
    },
    BinOp {
        op: BinOp,
        lhs: Box<Expr>,
        rhs: Box<Expr>,
    },
    Sprintf {
        format: String,
        args: Vec<Expr>,
    },
}

#[derive(Debug, Clone)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Eq for Expr {}

impl std::hash::Hash for Expr {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.kind.hash(state);
    }
}

impl Expr {
    pub fn new(kind: ExprKind) -> Expr {
        Expr { kind, span: Span::default() }
    }

    pub fn at(kind: ExprKind, span: Span) -> Expr {
        Expr { kind, span }
    }

    pub fn var(name: impl Into<Name>) -> Expr {
        Expr::new(ExprKind::Var(name.into()))
    }

    /// Value predicate: a structure literal whose arguments are all values,
    /// or (extended mode) a primitive literal.
    pub fn is_value(&self) -> bool {
        match &self.kind {
            ExprKind::StructLit { args, .. } => args.iter().all(Expr::is_value),
            ExprKind::IntLit { .. } | ExprKind::BoolLit { .. } | ExprKind::StrLit { .. } => true,
            _ => false,
        }
    }

    /// `type(v)` on values: the structure type of a struct literal, or the
    /// (possibly defined) type of a primitive literal.
    pub fn value_type(&self) -> Option<Type> {
        match &self.kind {
            ExprKind::StructLit { ty, .. } => Some(ty.clone()),
            ExprKind::IntLit { ty, .. }
            | ExprKind::BoolLit { ty, .. }
            | ExprKind::StrLit { ty, .. } => Some(Type::named(ty.clone())),
            _ => None,
        }
    }

    /// Simultaneous substitution of variables by expressions.
    pub fn subst_vars(&self, map: &[(Name, Expr)]) -> Expr {
        let kind = match &self.kind {
            ExprKind::Var(x) => {
                if let Some((_, e)) = map.iter().find(|(n, _)| n == x) {
                    return e.clone();
                }
                ExprKind::Var(x.clone())
            }
            ExprKind::Call { recv, method, type_args, args } => ExprKind::Call {
                recv: Box::new(recv.subst_vars(map)),
                method: method.clone(),
                type_args: type_args.clone(),
                args: args.iter().map(|e| e.subst_vars(map)).collect(),
            },
            ExprKind::StructLit { ty, args } => ExprKind::StructLit {
                ty: ty.clone(),
                args: args.iter().map(|e| e.subst_vars(map)).collect(),
            },
            ExprKind::Select { recv, field } => ExprKind::Select {
                recv: Box::new(recv.subst_vars(map)),
                field: field.clone(),
            },
            ExprKind::Assert { recv, ty } => ExprKind::Assert {
                recv: Box::new(recv.subst_vars(map)),
                ty: ty.clone(),
            },
            k @ (ExprKind::IntLit { .. } | ExprKind::BoolLit { .. } | ExprKind::StrLit { .. }) => {
                k.clone()
            }
            ExprKind::BinOp { op, lhs, rhs } => ExprKind::BinOp {
                op: *op,
                lhs: Box::new(lhs.subst_vars(map)),
                rhs: Box::new(rhs.subst_vars(map)),
            },
            ExprKind::Sprintf { format, args } => ExprKind::Sprintf {
                format: format.clone(),
                args: args.iter().map(|e| e.subst_vars(map)).collect(),
            },
        };
        Expr::at(kind, self.span)
    }

    /// Apply a type substitution to every type inside the expression.
    pub fn subst_types(&self, subst: &TypeSubst) -> Expr {
        let kind = match &self.kind {
            ExprKind::Var(x) => ExprKind::Var(x.clone()),
            ExprKind::Call { recv, method, type_args, args } => ExprKind::Call {
                recv: Box::new(recv.subst_types(subst)),
                method: method.clone(),
                type_args: type_args.iter().map(|t| subst.apply(t)).collect(),
                args: args.iter().map(|e| e.subst_types(subst)).collect(),
            },
            ExprKind::StructLit { ty, args } => ExprKind::StructLit {
                ty: subst.apply(ty),
                args: args.iter().map(|e| e.subst_types(subst)).collect(),
            },
            ExprKind::Select { recv, field } => ExprKind::Select {
                recv: Box::new(recv.subst_types(subst)),
                field: field.clone(),
            },
            ExprKind::Assert { recv, ty } => ExprKind::Assert {
                recv: Box::new(recv.subst_types(subst)),
                ty: subst.apply(ty),
            },
            k @ (ExprKind::IntLit { .. } | ExprKind::BoolLit { .. } | ExprKind::StrLit { .. }) => {
                k.clone()
            }
            ExprKind::BinOp { op, lhs, rhs } => ExprKind::BinOp {
                op: *op,
                lhs: Box::new(lhs.subst_types(subst)),
                rhs: Box::new(rhs.subst_types(subst)),
            },
            ExprKind::Sprintf { format, args } => ExprKind::Sprintf {
                format: format.clone(),
                args: args.iter().map(|e| e.subst_types(subst)).collect(),
            },
        };
        Expr::at(kind, self.span)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Program {
    pub decls: Vec<Decl>,
    pub main: Expr,
    pub mode: Mode,
    pub extended: bool,
}

impl Program {
    pub fn type_decls(&self) -> impl Iterator<Item = &TypeDecl> {
        self.decls.iter().filter_map(|d| match d {
            Decl::Type(t) => Some(t),
            Decl::Method(_) => None,
        })
    }

    pub fn method_decls(&self) -> impl Iterator<Item = &MethodDecl> {
        self.decls.iter().filter_map(|d| match d {
            Decl::Method(m) => Some(m),
            Decl::Type(_) => None,
        })
    }

    pub fn lookup_type(&self, name: &str) -> Option<&TypeDecl> {
        self.type_decls().find(|t| t.name == name)
    }

    pub fn lookup_method(&self, recv_type: &str, method: &str) -> Option<&MethodDecl> {
        self.method_decls()
            .find(|m| m.recv_type == recv_type && m.name == method)
    }

    pub fn methods_of(&self, recv_type: &str) -> impl Iterator<Item = &MethodDecl> {
        let recv_type = recv_type.to_owned();
        self.method_decls().filter(move |m| m.recv_type == recv_type)
    }
}

/// Finite map from type parameters to types; application is simultaneous.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TypeSubst {
    entries: Vec<(Name, Type)>,
}

impl TypeSubst {
    pub fn new(entries: Vec<(Name, Type)>) -> TypeSubst {
        TypeSubst { entries }
    }

    pub fn empty() -> TypeSubst {
        TypeSubst::default()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<&Type> {
        self.entries.iter().find(|(n, _)| n == name).map(|(_, t)| t)
    }

    pub fn entries(&self) -> &[(Name, Type)] {
        &self.entries
    }

    /// Extend with further bindings; names must be disjoint from the domain.
    pub fn extended(&self, more: Vec<(Name, Type)>) -> TypeSubst {
        let mut entries = self.entries.clone();
        entries.extend(more);
        TypeSubst { entries }
    }

    pub fn apply(&self, ty: &Type) -> Type {
        match ty {
            Type::Param(a) => self.get(a).cloned().unwrap_or_else(|| ty.clone()),
            Type::Named { name, args } => Type::Named {
                name: name.clone(),
                args: args.iter().map(|t| self.apply(t)).collect(),
            },
        }
    }

    pub fn apply_sig(&self, sig: &Sig) -> Sig {
        // Method formals shadow; corpus programs keep parameter names
        // distinct (the FGG rules require it), so plain application is safe.
        Sig {
            type_formals: sig
                .type_formals
                .iter()
                .map(|tp| TypeParam { name: tp.name.clone(), bound: self.apply(&tp.bound) })
                .collect(),
            params: sig
                .params
                .iter()
                .map(|p| Param { name: p.name.clone(), ty: self.apply(&p.ty) })
                .collect(),
            ret: self.apply(&sig.ret),
        }
    }

    pub fn apply_spec(&self, spec: &Spec) -> Spec {
        Spec { name: spec.name.clone(), sig: self.apply_sig(&spec.sig) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(formals: &[(&str, Type)], params: &[(&str, Type)], ret: Type) -> Sig {
        Sig {
            type_formals: formals
                .iter()
                .map(|(n, b)| TypeParam { name: (*n).into(), bound: b.clone() })
                .collect(),
            params: params
                .iter()
                .map(|(n, t)| Param { name: (*n).into(), ty: t.clone() })
                .collect(),
            ret,
        }
    }

    #[test]
    fn sig_eq_ignores_value_param_names() {
        let any = Type::named("Any");
        let a = sig(&[], &[("x", any.clone())], any.clone());
        let b = sig(&[], &[("arg", any.clone())], any);
        assert!(a.sig_eq(&b));
    }

    #[test]
    fn sig_eq_alpha_renames_type_formals() {
        let any = Type::named("Any");
        let a = sig(
            &[("b", any.clone())],
            &[("f", Type::app("Function", vec![Type::param("a"), Type::param("b")]))],
            Type::app("List", vec![Type::param("b")]),
        );
        let b = sig(
            &[("bob", any.clone())],
            &[("fred", Type::app("Function", vec![Type::param("a"), Type::param("bob")]))],
            Type::app("List", vec![Type::param("bob")]),
        );
        assert!(a.sig_eq(&b));
        let c = sig(&[("b", any)], &[], Type::param("b"));
        assert!(!a.sig_eq(&c));
    }

    #[test]
    fn sig_eq_compares_bounds() {
        let a = sig(&[("b", Type::named("Any"))], &[], Type::param("b"));
        let b = sig(&[("c", Type::named("Evaler"))], &[], Type::param("c"));
        assert!(!a.sig_eq(&b));
    }

    #[test]
    fn type_display_round_trip_shape() {
        let t = Type::app("f", vec![Type::app("g", vec![]), Type::named("h")]);
        assert_eq!(t.to_string(), "f(g, h)");
    }

    #[test]
    fn expr_eq_ignores_span() {
        let a = Expr::at(ExprKind::Var("x".into()), Span::new(1, 1));
        let b = Expr::at(ExprKind::Var("x".into()), Span::new(9, 4));
        assert_eq!(a, b);
    }
}
