//! Recursive-descent parser for FG and FGG concrete syntax.
//!
//! Type parameters use the parenthesised form: `type List(type a Any)`,
//! `xs.Map(bool)(f)`. FG mode rejects type parameters outright. Extended
//! mode additionally accepts int/bool/string literals, the operators
//! `+ > == &&`, `fmt.Sprintf`, defined primitive types (`type Int int`),
//! and `var` bindings in `main` (desugared by sequential substitution).

use crate::ast::*;
use crate::lexer::{lex, LexError, Tok, Token};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParseOptions {
    pub mode: Mode,
    pub extended: bool,
    pub relaxed_idents: bool,
}

impl ParseOptions {
    pub fn fg() -> Self {
        ParseOptions { mode: Mode::Fg, extended: false, relaxed_idents: false }
    }

    pub fn fgg() -> Self {
        ParseOptions { mode: Mode::Fgg, extended: false, relaxed_idents: false }
    }

    pub fn extended(mut self) -> Self {
        self.extended = true;
        self
    }

    pub fn relaxed(mut self) -> Self {
        self.relaxed_idents = true;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{span}: syntax: {message}")]
pub struct ParseError {
    pub span: Span,
    pub message: String,
}

impl From<LexError> for ParseError {
    fn from(e: LexError) -> Self {
        ParseError { span: e.span, message: e.message }
    }
}

pub fn parse(source: &str, opts: ParseOptions) -> Result<Program, ParseError> {
    let tokens = lex(source, opts.relaxed_idents)?;
    let mut p = Parser { tokens, pos: 0, opts };
    let prog = p.program()?;
    if opts.mode == Mode::Fg {
        reject_type_parameters(&prog)?;
    }
    Ok(prog)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    opts: ParseOptions,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn peek_at(&self, n: usize) -> &Tok {
        let i = (self.pos + n).min(self.tokens.len() - 1);
        &self.tokens[i].tok
    }

    fn span(&self) -> Span {
        self.tokens[self.pos].span
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { span: self.span(), message: message.into() })
    }

    fn expect(&mut self, tok: Tok) -> Result<Span, ParseError> {
        if *self.peek() == tok {
            Ok(self.bump().span)
        } else {
            self.err(format!("expected {tok}, found {}", self.peek()))
        }
    }

    fn expect_ident(&mut self) -> Result<(Name, Span), ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                let span = self.bump().span;
                Ok((s, span))
            }
            other => self.err(format!("expected identifier, found {other}")),
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<Span, ParseError> {
        match self.peek() {
            Tok::Ident(s) if s == kw => Ok(self.bump().span),
            other => self.err(format!("expected `{kw}`, found {other}")),
        }
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn skip_semis(&mut self) {
        while *self.peek() == Tok::Semi {
            self.bump();
        }
    }

    // ---- program ----

    fn program(&mut self) -> Result<Program, ParseError> {
        self.expect_keyword("package")?;
        self.expect_keyword("main")?;
        self.skip_semis();

        let mut decls = Vec::new();
        loop {
            self.skip_semis();
            if self.at_keyword("type") {
                decls.push(Decl::Type(self.type_decl()?));
            } else if self.at_keyword("func") {
                // `func main()` terminates the declaration list.
                if matches!(self.peek_at(1), Tok::Ident(s) if s == "main") {
                    break;
                }
                decls.push(Decl::Method(self.method_decl()?));
            } else {
                return self.err(format!(
                    "expected `type`, `func`, or `func main`, found {}",
                    self.peek()
                ));
            }
        }

        let main = self.main_func(&decls)?;
        self.skip_semis();
        if *self.peek() != Tok::Eof {
            return self.err(format!("trailing input: {}", self.peek()));
        }
        Ok(Program { decls, main, mode: self.opts.mode, extended: self.opts.extended })
    }

    fn type_decl(&mut self) -> Result<TypeDecl, ParseError> {
        let span = self.expect_keyword("type")?;
        let (name, _) = self.expect_ident()?;
        let formals = if *self.peek() == Tok::LParen && *self.peek_at(1) == Tok::Ident("type".into())
        {
            self.type_formals()?
        } else {
            Vec::new()
        };
        let lit = if self.at_keyword("struct") {
            self.bump();
            self.expect(Tok::LBrace)?;
            let mut fields = Vec::new();
            loop {
                self.skip_semis();
                if *self.peek() == Tok::RBrace {
                    break;
                }
                let (fname, _) = self.expect_ident()?;
                let ty = self.parse_type()?;
                fields.push(Param { name: fname, ty });
            }
            self.expect(Tok::RBrace)?;
            TypeLit::Struct { fields }
        } else if self.at_keyword("interface") {
            self.bump();
            self.expect(Tok::LBrace)?;
            let mut embeds = Vec::new();
            let mut specs = Vec::new();
            loop {
                self.skip_semis();
                if *self.peek() == Tok::RBrace {
                    break;
                }
                self.interface_member(&mut embeds, &mut specs)?;
            }
            self.expect(Tok::RBrace)?;
            TypeLit::Interface { embeds, specs }
        } else if let Tok::Ident(prim) = self.peek().clone() {
            match Prim::from_name(&prim) {
                Some(p) if self.opts.extended => {
                    self.bump();
                    TypeLit::Alias(p)
                }
                Some(_) => {
                    return self.err("defined primitive types require extended mode");
                }
                None => {
                    return self.err(format!(
                        "expected `struct` or `interface`, found identifier `{prim}`"
                    ));
                }
            }
        } else {
            return self.err(format!("expected `struct` or `interface`, found {}", self.peek()));
        };
        Ok(TypeDecl { name, formals, lit, span })
    }

    /// `(type a Any, b Eq(b))`
    fn type_formals(&mut self) -> Result<Vec<TypeParam>, ParseError> {
        self.expect(Tok::LParen)?;
        self.expect_keyword("type")?;
        let mut out = Vec::new();
        loop {
            let (name, _) = self.expect_ident()?;
            let bound = self.parse_type()?;
            out.push(TypeParam { name, bound });
            if *self.peek() == Tok::Comma {
                self.bump();
            } else {
                break;
            }
        }
        self.expect(Tok::RParen)?;
        Ok(out)
    }

    fn parse_type(&mut self) -> Result<Type, ParseError> {
        let (name, _) = self.expect_ident()?;
        if *self.peek() == Tok::LParen {
            self.bump();
            let mut args = Vec::new();
            if *self.peek() != Tok::RParen {
                loop {
                    args.push(self.parse_type()?);
                    if *self.peek() == Tok::Comma {
                        self.bump();
                    } else {
                        break;
                    }
                }
            }
            self.expect(Tok::RParen)?;
            Ok(Type::Named { name, args })
        } else {
            // Parameter vs. named type is resolved by the checker (a bare
            // name is `Named`; binding sites introduce `Param`). We mark
            // names bound by enclosing formals as parameters in a later
            // resolution pass; at parse level, single lower-vs-upper case
            // carries no meaning, so emit Named and let `resolve_params`
            // rewrite in scope.
            Ok(Type::Named { name, args: Vec::new() })
        }
    }

    fn interface_member(
        &mut self,
        embeds: &mut Vec<Type>,
        specs: &mut Vec<Spec>,
    ) -> Result<(), ParseError> {
        let (name, _) = self.expect_ident()?;
        if *self.peek() != Tok::LParen {
            // bare embedding, e.g. `Stringer`
            embeds.push(Type::named(name));
            return Ok(());
        }
        // Look inside the group: `(type ...` or `()` or `x T, ...` means a
        // method specification; a single type means an embedding.
        let next = self.peek_at(1).clone();
        let is_spec = match &next {
            Tok::RParen => true,
            Tok::Ident(s) if s == "type" => true,
            Tok::Ident(_) => matches!(self.peek_at(2), Tok::Ident(_)),
            _ => false,
        };
        if is_spec {
            let sig = self.signature()?;
            specs.push(Spec { name, sig });
        } else {
            self.bump(); // (
            let mut args = Vec::new();
            loop {
                args.push(self.parse_type()?);
                if *self.peek() == Tok::Comma {
                    self.bump();
                } else {
                    break;
                }
            }
            self.expect(Tok::RParen)?;
            embeds.push(Type::Named { name, args });
        }
        Ok(())
    }

    /// `[(type b Any)] (x τ, ...) τ`
    fn signature(&mut self) -> Result<Sig, ParseError> {
        let type_formals = if *self.peek() == Tok::LParen
            && matches!(self.peek_at(1), Tok::Ident(s) if s == "type")
        {
            self.type_formals()?
        } else {
            Vec::new()
        };
        self.expect(Tok::LParen)?;
        let mut params = Vec::new();
        if *self.peek() != Tok::RParen {
            loop {
                let (pname, _) = self.expect_ident()?;
                let ty = self.parse_type()?;
                params.push(Param { name: pname, ty });
                if *self.peek() == Tok::Comma {
                    self.bump();
                } else {
                    break;
                }
            }
        }
        self.expect(Tok::RParen)?;
        let ret = self.parse_type()?;
        Ok(Sig { type_formals, params, ret })
    }

    fn method_decl(&mut self) -> Result<MethodDecl, ParseError> {
        let span = self.expect_keyword("func")?;
        self.expect(Tok::LParen)?;
        let (recv_name, _) = self.expect_ident()?;
        let (recv_type, _) = self.expect_ident()?;
        let recv_formals = if *self.peek() == Tok::LParen {
            self.type_formals()?
        } else {
            Vec::new()
        };
        self.expect(Tok::RParen)?;
        let (name, _) = self.expect_ident()?;
        let sig = self.signature()?;
        self.expect(Tok::LBrace)?;
        self.expect_keyword("return")?;
        let body = self.expr()?;
        self.skip_semis();
        self.expect(Tok::RBrace)?;
        Ok(MethodDecl { recv_name, recv_type, recv_formals, name, sig, body, span })
    }

    /// `func main() { var x T = e ... _ = e }`, desugared into the single
    /// body expression by sequential substitution of the `var` bindings.
    fn main_func(&mut self, decls: &[Decl]) -> Result<Expr, ParseError> {
        self.expect_keyword("func")?;
        self.expect_keyword("main")?;
        self.expect(Tok::LParen)?;
        self.expect(Tok::RParen)?;
        self.expect(Tok::LBrace)?;

        let mut bindings: Vec<(Name, Expr)> = Vec::new();
        let mut body: Option<Expr> = None;
        loop {
            self.skip_semis();
            if *self.peek() == Tok::RBrace {
                break;
            }
            if self.at_keyword("var") {
                self.bump();
                let mut names = Vec::new();
                loop {
                    let (n, _) = self.expect_ident()?;
                    names.push(n);
                    if *self.peek() == Tok::Comma {
                        self.bump();
                    } else {
                        break;
                    }
                }
                let decl_ty = self.parse_type()?;
                self.expect(Tok::Assign)?;
                let mut exprs = Vec::new();
                loop {
                    let e = self.expr()?;
                    exprs.push(e.subst_vars(&bindings));
                    if *self.peek() == Tok::Comma {
                        self.bump();
                    } else {
                        break;
                    }
                }
                if exprs.len() != names.len() {
                    return self.err(format!(
                        "var binds {} names to {} expressions",
                        names.len(),
                        exprs.len()
                    ));
                }
                for (n, e) in names.into_iter().zip(exprs) {
                    let e = retag_literal(e, &decl_ty, decls);
                    if n != "_" {
                        bindings.push((n, e.clone()));
                    }
                    body = Some(e);
                }
            } else if matches!(self.peek(), Tok::Ident(s) if s == "_") {
                self.bump();
                self.expect(Tok::Assign)?;
                let e = self.expr()?;
                body = Some(e.subst_vars(&bindings));
            } else {
                return self.err(format!("expected `var` or `_ =` in main, found {}", self.peek()));
            }
        }
        self.expect(Tok::RBrace)?;
        match body {
            Some(e) => Ok(e),
            None => self.err("main has no body expression"),
        }
    }

    // ---- expressions ----

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.cmp_expr()?;
        while *self.peek() == Tok::AndAnd {
            let span = self.bump().span;
            self.check_extended(span)?;
            let rhs = self.cmp_expr()?;
            lhs = Expr::at(
                ExprKind::BinOp { op: BinOp::And, lhs: Box::new(lhs), rhs: Box::new(rhs) },
                span,
            );
        }
        Ok(lhs)
    }

    fn cmp_expr(&mut self) -> Result<Expr, ParseError> {
        let lhs = self.add_expr()?;
        let op = match self.peek() {
            Tok::Gt => BinOp::Gt,
            Tok::EqEq => BinOp::Eq,
            _ => return Ok(lhs),
        };
        let span = self.bump().span;
        self.check_extended(span)?;
        let rhs = self.add_expr()?;
        Ok(Expr::at(ExprKind::BinOp { op, lhs: Box::new(lhs), rhs: Box::new(rhs) }, span))
    }

    fn add_expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.postfix_expr()?;
        while *self.peek() == Tok::Plus {
            let span = self.bump().span;
            self.check_extended(span)?;
            let rhs = self.postfix_expr()?;
            lhs = Expr::at(
                ExprKind::BinOp { op: BinOp::Add, lhs: Box::new(lhs), rhs: Box::new(rhs) },
                span,
            );
        }
        Ok(lhs)
    }

    fn postfix_expr(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.primary_expr()?;
        while *self.peek() == Tok::Dot {
            let span = self.bump().span;
            if *self.peek() == Tok::LParen {
                self.bump();
                let ty = self.parse_type()?;
                self.expect(Tok::RParen)?;
                e = Expr::at(ExprKind::Assert { recv: Box::new(e), ty }, span);
                continue;
            }
            let (name, _) = self.expect_ident()?;
            if *self.peek() != Tok::LParen {
                e = Expr::at(ExprKind::Select { recv: Box::new(e), field: name }, span);
                continue;
            }
            // `fmt.Sprintf(...)` builtin.
            if name == "Sprintf" && matches!(&e.kind, ExprKind::Var(v) if v == "fmt") {
                self.check_extended(span)?;
                self.bump();
                let format = match self.peek().clone() {
                    Tok::Str(s) => {
                        self.bump();
                        s
                    }
                    other => return self.err(format!("Sprintf expects a format string, found {other}")),
                };
                let mut args = Vec::new();
                while *self.peek() == Tok::Comma {
                    self.bump();
                    args.push(self.expr()?);
                }
                self.expect(Tok::RParen)?;
                e = Expr::at(ExprKind::Sprintf { format, args }, span);
                continue;
            }
            // Method call, possibly with a leading type-argument group:
            // `e.m(ψ)(ē)` has two paren groups, `e.m(ē)` has one.
            let save = self.pos;
            let as_exprs = (|| -> Result<Vec<Expr>, ParseError> {
                self.bump(); // (
                let mut first_args = Vec::new();
                if *self.peek() != Tok::RParen {
                    loop {
                        first_args.push(self.expr()?);
                        if *self.peek() == Tok::Comma {
                            self.bump();
                        } else {
                            break;
                        }
                    }
                }
                self.expect(Tok::RParen)?;
                Ok(first_args)
            })();
            // A group that does not parse as expressions (e.g. `(Box(b))`) can
            // still be a type-argument group, so fall through in that case.
            let (type_args, args) = if as_exprs.is_err() || *self.peek() == Tok::LParen {
                // First group was type arguments; reparse it as types.
                self.pos = save;
                self.bump();
                let mut tys = Vec::new();
                if *self.peek() != Tok::RParen {
                    loop {
                        tys.push(self.parse_type()?);
                        if *self.peek() == Tok::Comma {
                            self.bump();
                        } else {
                            break;
                        }
                    }
                }
                self.expect(Tok::RParen)?;
                self.expect(Tok::LParen)?;
                let mut args = Vec::new();
                if *self.peek() != Tok::RParen {
                    loop {
                        args.push(self.expr()?);
                        if *self.peek() == Tok::Comma {
                            self.bump();
                        } else {
                            break;
                        }
                    }
                }
                self.expect(Tok::RParen)?;
                (tys, args)
            } else {
                (Vec::new(), as_exprs.unwrap())
            };
            e = Expr::at(
                ExprKind::Call { recv: Box::new(e), method: name, type_args, args },
                span,
            );
        }
        Ok(e)
    }

    fn primary_expr(&mut self) -> Result<Expr, ParseError> {
        let span = self.span();
        match self.peek().clone() {
            Tok::Int(n) => {
                self.check_extended(span)?;
                self.bump();
                Ok(Expr::at(ExprKind::IntLit { value: n, ty: "int".into() }, span))
            }
            Tok::Str(s) => {
                self.check_extended(span)?;
                self.bump();
                Ok(Expr::at(ExprKind::StrLit { value: s, ty: "string".into() }, span))
            }
            Tok::Ident(name) => {
                if self.opts.extended && (name == "true" || name == "false") {
                    self.bump();
                    return Ok(Expr::at(
                        ExprKind::BoolLit { value: name == "true", ty: "bool".into() },
                        span,
                    ));
                }
                self.bump();
                // struct literal: `t{...}` or `t(τ̄){...}`
                if *self.peek() == Tok::LBrace {
                    let args = self.brace_args()?;
                    return Ok(Expr::at(
                        ExprKind::StructLit { ty: Type::named(name), args },
                        span,
                    ));
                }
                if *self.peek() == Tok::LParen {
                    self.bump();
                    let mut tys = Vec::new();
                    if *self.peek() != Tok::RParen {
                        loop {
                            tys.push(self.parse_type()?);
                            if *self.peek() == Tok::Comma {
                                self.bump();
                            } else {
                                break;
                            }
                        }
                    }
                    self.expect(Tok::RParen)?;
                    let args = self.brace_args()?;
                    return Ok(Expr::at(
                        ExprKind::StructLit { ty: Type::Named { name, args: tys }, args },
                        span,
                    ));
                }
                Ok(Expr::at(ExprKind::Var(name), span))
            }
            other => self.err(format!("expected expression, found {other}")),
        }
    }

    fn brace_args(&mut self) -> Result<Vec<Expr>, ParseError> {
        self.expect(Tok::LBrace)?;
        let mut args = Vec::new();
        if *self.peek() != Tok::RBrace {
            loop {
                args.push(self.expr()?);
                if *self.peek() == Tok::Comma {
                    self.bump();
                } else {
                    break;
                }
            }
        }
        self.expect(Tok::RBrace)?;
        Ok(args)
    }

    fn check_extended(&self, span: Span) -> Result<(), ParseError> {
        if self.opts.extended {
            Ok(())
        } else {
            Err(ParseError {
                span,
                message: "literals, operators, and Sprintf require extended mode".into(),
            })
        }
    }
}

/// Re-tag a primitive literal bound by `var x T = lit` when `T` is a defined
/// primitive type, so `var i Int = 1` gives the literal type `Int`.
fn retag_literal(e: Expr, decl_ty: &Type, decls: &[Decl]) -> Expr {
    let Type::Named { name, args } = decl_ty else { return e };
    if !args.is_empty() {
        return e;
    }
    let is_prim_like = Prim::from_name(name).is_some()
        || decls.iter().any(|d| {
            matches!(d, Decl::Type(t) if t.name == *name && matches!(t.lit, TypeLit::Alias(_)))
        });
    if !is_prim_like {
        return e;
    }
    let kind = match e.kind {
        ExprKind::IntLit { value, .. } => ExprKind::IntLit { value, ty: name.clone() },
        ExprKind::BoolLit { value, .. } => ExprKind::BoolLit { value, ty: name.clone() },
        ExprKind::StrLit { value, .. } => ExprKind::StrLit { value, ty: name.clone() },
        k => k,
    };
    Expr::at(kind, e.span)
}

/// FG source must not contain type parameters anywhere.
fn reject_type_parameters(p: &Program) -> Result<(), ParseError> {
    fn bad(span: Span) -> ParseError {
        ParseError { span, message: "FG mode forbids type parameters".into() }
    }
    fn check_ty(t: &Type, span: Span) -> Result<(), ParseError> {
        match t {
            Type::Param(_) => Err(bad(span)),
            Type::Named { args, .. } => {
                if args.is_empty() {
                    Ok(())
                } else {
                    Err(bad(span))
                }
            }
        }
    }
    fn check_sig(s: &Sig, span: Span) -> Result<(), ParseError> {
        if !s.type_formals.is_empty() {
            return Err(bad(span));
        }
        for p in &s.params {
            check_ty(&p.ty, span)?;
        }
        check_ty(&s.ret, span)
    }
    fn check_expr(e: &Expr) -> Result<(), ParseError> {
        match &e.kind {
            ExprKind::Var(_)
            | ExprKind::IntLit { .. }
            | ExprKind::BoolLit { .. }
            | ExprKind::StrLit { .. } => Ok(()),
            ExprKind::Call { recv, type_args, args, .. } => {
                if !type_args.is_empty() {
                    return Err(bad(e.span));
                }
                check_expr(recv)?;
                args.iter().try_for_each(check_expr)
            }
            ExprKind::StructLit { ty, args } => {
                check_ty(ty, e.span)?;
                args.iter().try_for_each(check_expr)
            }
            ExprKind::Select { recv, .. } => check_expr(recv),
            ExprKind::Assert { recv, ty } => {
                check_ty(ty, e.span)?;
                check_expr(recv)
            }
            ExprKind::BinOp { lhs, rhs, .. } => {
                check_expr(lhs)?;
                check_expr(rhs)
            }
            ExprKind::Sprintf { args, .. } => args.iter().try_for_each(check_expr),
        }
    }

    for d in &p.decls {
        match d {
            Decl::Type(t) => {
                if !t.formals.is_empty() {
                    return Err(bad(t.span));
                }
                match &t.lit {
                    TypeLit::Struct { fields } => {
                        for f in fields {
                            check_ty(&f.ty, t.span)?;
                        }
                    }
                    TypeLit::Interface { embeds, specs } => {
                        for e in embeds {
                            check_ty(e, t.span)?;
                        }
                        for s in specs {
                            check_sig(&s.sig, t.span)?;
                        }
                    }
                    TypeLit::Alias(_) => {}
                }
            }
            Decl::Method(m) => {
                if !m.recv_formals.is_empty() {
                    return Err(bad(m.span));
                }
                check_sig(&m.sig, m.span)?;
                check_expr(&m.body)?;
            }
        }
    }
    check_expr(&p.main)
}

/// Rewrite bare `Named` types that refer to type parameters in scope into
/// `Type::Param`. The parser cannot tell a parameter from a type name, so
/// this runs as a resolution pass over every declaration.
pub fn resolve_params(p: &mut Program) {
    fn resolve_ty(t: &mut Type, scope: &[Name]) {
        match t {
            Type::Param(_) => {}
            Type::Named { name, args } => {
                if args.is_empty() && scope.iter().any(|s| s == name) {
                    *t = Type::Param(name.clone());
                } else {
                    for a in args {
                        resolve_ty(a, scope);
                    }
                }
            }
        }
    }
    fn resolve_sig(sig: &mut Sig, outer: &[Name]) {
        let mut scope: Vec<Name> = outer.to_vec();
        scope.extend(sig.type_formals.iter().map(|tp| tp.name.clone()));
        for tp in &mut sig.type_formals {
            resolve_ty(&mut tp.bound, &scope);
        }
        for p in &mut sig.params {
            resolve_ty(&mut p.ty, &scope);
        }
        resolve_ty(&mut sig.ret, &scope);
    }
    fn resolve_expr(e: &mut Expr, scope: &[Name]) {
        match &mut e.kind {
            ExprKind::Var(_)
            | ExprKind::IntLit { .. }
            | ExprKind::BoolLit { .. }
            | ExprKind::StrLit { .. } => {}
            ExprKind::Call { recv, type_args, args, .. } => {
                resolve_expr(recv, scope);
                for t in type_args {
                    resolve_ty(t, scope);
                }
                for a in args {
                    resolve_expr(a, scope);
                }
            }
            ExprKind::StructLit { ty, args } => {
                resolve_ty(ty, scope);
                for a in args {
                    resolve_expr(a, scope);
                }
            }
            ExprKind::Select { recv, .. } => resolve_expr(recv, scope),
            ExprKind::Assert { recv, ty } => {
                resolve_expr(recv, scope);
                resolve_ty(ty, scope);
            }
            ExprKind::BinOp { lhs, rhs, .. } => {
                resolve_expr(lhs, scope);
                resolve_expr(rhs, scope);
            }
            ExprKind::Sprintf { args, .. } => {
                for a in args {
                    resolve_expr(a, scope);
                }
            }
        }
    }

    for d in &mut p.decls {
        match d {
            Decl::Type(t) => {
                let scope: Vec<Name> = t.formals.iter().map(|tp| tp.name.clone()).collect();
                for tp in &mut t.formals {
                    resolve_ty(&mut tp.bound, &scope);
                }
                match &mut t.lit {
                    TypeLit::Struct { fields } => {
                        for f in fields {
                            resolve_ty(&mut f.ty, &scope);
                        }
                    }
                    TypeLit::Interface { embeds, specs } => {
                        for e in embeds {
                            resolve_ty(e, &scope);
                        }
                        for s in specs {
                            resolve_sig(&mut s.sig, &scope);
                        }
                    }
                    TypeLit::Alias(_) => {}
                }
            }
            Decl::Method(m) => {
                let scope: Vec<Name> = m.recv_formals.iter().map(|tp| tp.name.clone()).collect();
                for tp in &mut m.recv_formals {
                    resolve_ty(&mut tp.bound, &scope);
                }
                let mut inner = scope.clone();
                inner.extend(m.sig.type_formals.iter().map(|tp| tp.name.clone()));
                resolve_sig(&mut m.sig, &scope);
                resolve_expr(&mut m.body, &inner);
            }
        }
    }
    resolve_expr(&mut p.main, &[]);
}

/// Parse and resolve type parameters in one step.
pub fn parse_program(source: &str, opts: ParseOptions) -> Result<Program, ParseError> {
    let mut p = parse(source, opts)?;
    resolve_params(&mut p);
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_fg_struct_and_method() {
        let p = parse_program(
            "package main\n\
             type Any interface {}\n\
             type pair struct { left Any; right Any }\n\
             func (this pair) Left() Any { return this.left }\n\
             func main() { _ = pair{pair{pair{}, pair{}}.Left().(pair), pair{}}.left }\n",
            ParseOptions::fg(),
        )
        .unwrap();
        assert_eq!(p.decls.len(), 3);
        match &p.main.kind {
            ExprKind::Select { field, .. } => assert_eq!(field, "left"),
            k => panic!("unexpected main: {k:?}"),
        }
    }

    #[test]
    fn parse_fgg_generics() {
        let src = "package main\n\
             type Any interface {}\n\
             type Function(type a Any, b Any) interface { Apply(x a) b }\n\
             type List(type a Any) interface { Map(type b Any)(f Function(a, b)) List(b) }\n\
             type Cons(type a Any) struct { head a; tail List(a) }\n\
             func (xs Cons(type a Any)) Map(type b Any)(f Function(a, b)) List(b) {\n\
               return Cons(b){f.Apply(xs.head), xs.tail.Map(b)(f)}\n\
             }\n\
             func main() { _ = Cons(Any){Cons(Any){}.head, Cons(Any){}.tail} }\n";
        let p = parse_program(src, ParseOptions::fgg()).unwrap();
        let m = p.method_decls().next().unwrap();
        assert_eq!(m.recv_formals.len(), 1);
        assert_eq!(m.sig.type_formals.len(), 1);
        // receiver formal `a` resolved to a parameter inside the body
        match &m.body.kind {
            ExprKind::StructLit { ty, .. } => {
                assert_eq!(ty, &Type::app("Cons", vec![Type::param("b")]))
            }
            k => panic!("unexpected body: {k:?}"),
        }
    }

    #[test]
    fn fg_mode_rejects_type_params() {
        let src = "package main\n\
             type Any interface {}\n\
             type Box(type a Any) struct { v a }\n\
             func main() { _ = Box(Any){Box(Any){}.v} }\n";
        assert!(parse(src, ParseOptions::fg()).is_err());
        assert!(parse(src, ParseOptions::fgg()).is_ok());
    }

    #[test]
    fn var_desugar_substitutes_sequentially() {
        let src = "package main\n\
             type Int int\n\
             func (x Int) Add(y Int) Int { return x + y }\n\
             func main() {\n\
               var i, j Int = 1, 2\n\
               var k Int = i.Add(j)\n\
               var _ Int = k.Add(i)\n\
             }\n";
        let p = parse_program(src, ParseOptions::fgg().extended()).unwrap();
        // main is k.Add(i) with k and i fully substituted, literals tagged Int
        match &p.main.kind {
            ExprKind::Call { recv, method, args, .. } => {
                assert_eq!(method, "Add");
                assert!(matches!(&recv.kind, ExprKind::Call { .. }));
                assert!(matches!(&args[0].kind, ExprKind::IntLit { value: 1, ty } if ty == "Int"));
            }
            k => panic!("unexpected main: {k:?}"),
        }
    }

    #[test]
    fn extension_ops_have_precedence() {
        let src = "package main\nfunc main() { _ = 1 + 2 > 2 && 4 == 2 + 2 }\n";
        let p = parse_program(src, ParseOptions::fg().extended()).unwrap();
        match &p.main.kind {
            ExprKind::BinOp { op: BinOp::And, lhs, rhs } => {
                assert!(matches!(&lhs.kind, ExprKind::BinOp { op: BinOp::Gt, .. }));
                assert!(matches!(&rhs.kind, ExprKind::BinOp { op: BinOp::Eq, .. }));
            }
            k => panic!("unexpected main: {k:?}"),
        }
    }

    #[test]
    fn sprintf_and_interface_members() {
        let src = "package main\n\
             type Stringer interface { String() string }\n\
             type Pretty interface { Stringer; Indent(i string) string }\n\
             type pair struct {}\n\
             func (this pair) String() string { return fmt.Sprintf(\"(%d)\", 1) }\n\
             func main() { _ = pair{}.String() }\n";
        let p = parse_program(src, ParseOptions::fg().extended()).unwrap();
        let pretty = p.lookup_type("Pretty").unwrap();
        match &pretty.lit {
            TypeLit::Interface { embeds, specs } => {
                assert_eq!(embeds, &vec![Type::named("Stringer")]);
                assert_eq!(specs.len(), 1);
            }
            _ => panic!(),
        }
    }

    #[test]
    fn embedding_with_type_args_vs_spec() {
        let src = "package main\n\
             type Any interface {}\n\
             type Eq(type a Any) interface { Equal(that a) Bool }\n\
             type Bool interface { Not() Bool }\n\
             type Ord(type a Eq(a)) interface { Eq(a); Less(that a) Bool }\n\
             type t struct {}\n\
             func main() { _ = t{} }\n";
        let p = parse_program(src, ParseOptions::fgg()).unwrap();
        let ord = p.lookup_type("Ord").unwrap();
        match &ord.lit {
            TypeLit::Interface { embeds, specs } => {
                assert_eq!(embeds, &vec![Type::app("Eq", vec![Type::param("a")])]);
                assert_eq!(specs[0].name, "Less");
            }
            _ => panic!(),
        }
    }
}
