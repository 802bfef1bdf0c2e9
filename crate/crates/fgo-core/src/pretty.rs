//! Pretty-printer. `parse_program(pretty(p))` reproduces `p` (modulo spans),
//! which the proptests rely on.

use crate::ast::*;
use std::fmt::Write;

pub fn pretty_program(p: &Program) -> String {
    let mut out = String::from("package main\n\n");
    for d in &p.decls {
        match d {
            Decl::Type(t) => {
                out.push_str(&pretty_type_decl(t));
                out.push('\n');
            }
            Decl::Method(m) => {
                out.push_str(&pretty_method_decl(m));
                out.push('\n');
            }
        }
    }
    let _ = write!(out, "func main() {{\n\t_ = {}\n}}\n", pretty_expr(&p.main));
    out
}

pub fn pretty_type(t: &Type) -> String {
    match t {
        Type::Param(a) => a.clone(),
        Type::Named { name, args } => {
            if args.is_empty() {
                name.clone()
            } else {
                format!("{}({})", name, comma(args.iter().map(pretty_type)))
            }
        }
    }
}

fn pretty_formals(formals: &[TypeParam]) -> String {
    format!(
        "(type {})",
        comma(formals.iter().map(|tp| format!("{} {}", tp.name, pretty_type(&tp.bound))))
    )
}

fn pretty_sig(sig: &Sig) -> String {
    let mut s = String::new();
    if !sig.type_formals.is_empty() {
        s.push_str(&pretty_formals(&sig.type_formals));
    }
    let _ = write!(
        s,
        "({}) {}",
        comma(sig.params.iter().map(|p| format!("{} {}", p.name, pretty_type(&p.ty)))),
        pretty_type(&sig.ret)
    );
    s
}

pub fn pretty_type_decl(t: &TypeDecl) -> String {
    let formals = if t.formals.is_empty() {
        String::new()
    } else {
        pretty_formals(&t.formals)
    };
    match &t.lit {
        TypeLit::Struct { fields } => {
            let mut s = format!("type {}{} struct {{\n", t.name, formals);
            for f in fields {
                let _ = writeln!(s, "\t{} {}", f.name, pretty_type(&f.ty));
            }
            s.push_str("}\n");
            s
        }
        TypeLit::Interface { embeds, specs } => {
            if embeds.is_empty() && specs.is_empty() {
                return format!("type {}{} interface {{}}\n", t.name, formals);
            }
            let mut s = format!("type {}{} interface {{\n", t.name, formals);
            for e in embeds {
                let _ = writeln!(s, "\t{}", pretty_type(e));
            }
            for sp in specs {
                let _ = writeln!(s, "\t{}{}", sp.name, pretty_sig(&sp.sig));
            }
            s.push_str("}\n");
            s
        }
        TypeLit::Alias(prim) => format!("type {} {}\n", t.name, prim.type_name()),
    }
}

pub fn pretty_method_decl(m: &MethodDecl) -> String {
    let recv_formals = if m.recv_formals.is_empty() {
        String::new()
    } else {
        pretty_formals(&m.recv_formals)
    };
    format!(
        "func ({} {}{}) {}{} {{\n\treturn {}\n}}\n",
        m.recv_name,
        m.recv_type,
        recv_formals,
        m.name,
        pretty_sig(&m.sig),
        pretty_expr(&m.body)
    )
}

pub fn pretty_expr(e: &Expr) -> String {
    match &e.kind {
        ExprKind::Var(x) => x.clone(),
        ExprKind::Call { recv, method, type_args, args } => {
            let ta = if type_args.is_empty() {
                String::new()
            } else {
                format!("({})", comma(type_args.iter().map(pretty_type)))
            };
            format!(
                "{}.{}{}({})",
                pretty_sub(recv),
                method,
                ta,
                comma(args.iter().map(pretty_expr))
            )
        }
        ExprKind::StructLit { ty, args } => {
            format!("{}{{{}}}", pretty_type(ty), comma(args.iter().map(pretty_expr)))
        }
        ExprKind::Select { recv, field } => format!("{}.{}", pretty_sub(recv), field),
        ExprKind::Assert { recv, ty } => {
            format!("{}.({})", pretty_sub(recv), pretty_type(ty))
        }
        ExprKind::IntLit { value, .. } => value.to_string(),
        ExprKind::BoolLit { value, .. } => value.to_string(),
        ExprKind::StrLit { value, .. } => format!("{value:?}"),
        ExprKind::BinOp { op, lhs, rhs } => {
            format!(
                "{} {} {}",
                pretty_operand(lhs, *op, true),
                op.symbol(),
                pretty_operand(rhs, *op, false)
            )
        }
        ExprKind::Sprintf { format, args } => {
            let mut s = format!("fmt.Sprintf({format:?}");
            for a in args {
                let _ = write!(s, ", {}", pretty_expr(a));
            }
            s.push(')');
            s
        }
    }
}

/// An operand of a postfix form (`.m(...)`, `.f`, `.(τ)`). Binary operations
/// would need parentheses there, but the grammar has none, so the printer
/// never faces that case on well-formed trees; print as-is.
fn pretty_sub(e: &Expr) -> String {
    pretty_expr(e)
}

fn prec(op: BinOp) -> u8 {
    match op {
        BinOp::And => 0,
        BinOp::Gt | BinOp::Eq => 1,
        BinOp::Add => 2,
    }
}

/// The printed form must reparse to the same tree. `&&` and `+` associate
/// left; `>`/`==` do not chain, so a comparison under a comparison cannot be
/// printed faithfully (the parser never produces one either).
fn pretty_operand(e: &Expr, parent: BinOp, is_left: bool) -> String {
    if let ExprKind::BinOp { op, .. } = &e.kind {
        let needs_sep = prec(*op) < prec(parent) || (prec(*op) == prec(parent) && !is_left);
        debug_assert!(!needs_sep, "unprintable operator nesting: {:?}", e.kind);
    }
    let _ = is_left;
    pretty_expr(e)
}

fn comma<I: IntoIterator<Item = String>>(items: I) -> String {
    items.into_iter().collect::<Vec<_>>().join(", ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_program, ParseOptions};

    fn round_trip(src: &str, opts: ParseOptions) {
        let p1 = parse_program(src, opts).unwrap();
        let printed = pretty_program(&p1);
        let p2 = parse_program(&printed, opts).unwrap_or_else(|e| {
            panic!("reparse failed: {e}\n---\n{printed}");
        });
        assert_eq!(p1, p2, "round trip changed the program:\n{printed}");
    }

    #[test]
    fn round_trip_fg() {
        round_trip(
            "package main\n\
             type Any interface {}\n\
             type pair struct { left Any; right Any }\n\
             func (this pair) Swap() pair { return pair{this.right, this.left} }\n\
             func main() { _ = pair{pair{}, pair{}}.Swap().left.(pair) }\n",
            ParseOptions::fg(),
        );
    }

    #[test]
    fn round_trip_fgg_extended() {
        round_trip(
            "package main\n\
             type Int int\n\
             type Any interface {}\n\
             type Box(type a Any) struct { v a }\n\
             func (b Box(type a Any)) Get() a { return b.v }\n\
             func (x Int) Show() string { return fmt.Sprintf(\"%d\", x + 1) }\n\
             func main() { var x int = 3\n _ = Box(int){x}.Get() }\n",
            ParseOptions::fgg().extended(),
        );
    }

    #[test]
    fn operator_printing() {
        let src = "package main\nfunc main() { _ = 1 + 2 > 2 && 4 == 2 + 2 }\n";
        let p = parse_program(src, ParseOptions::fg().extended()).unwrap();
        assert_eq!(pretty_expr(&p.main), "1 + 2 > 2 && 4 == 2 + 2");
    }
}
