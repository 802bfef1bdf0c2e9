//! FG small-step interpreter.
//!
//! Reduction is call-by-value with a leftmost-innermost strategy: the next
//! redex is found by descending into the leftmost non-value subterm. A failed
//! type assertion on a value is a panic; anything else stuck is a bug in the
//! checker (or an unchecked term).

use crate::ast::*;
use crate::fg_typing::{parse_verbs, FgChecker};
use crate::pretty::pretty_expr;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepResult {
    /// One reduction applied.
    Stepped(Expr),
    /// The term is a value; no step applies.
    Value,
    /// A type assertion failed on a value (possibly deep in a context).
    Panic { value: Expr, asserted: Type },
    /// No rule applies and the term is not a value.
    Stuck(String),
}

use StepResult::*;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Value(Expr),
    Panic { value: Expr, asserted: Type },
    /// Fuel ran out before reaching a value or panic.
    Diverged { last: Expr, steps: u64 },
    Stuck { expr: Expr, reason: String },
}

pub struct FgInterp<'a> {
    ck: FgChecker<'a>,
}

impl<'a> FgInterp<'a> {
    /// The program must already be embedding-expanded (as returned by
    /// `check_program_fg`).
    pub fn new(prog: &'a Program) -> Self {
        FgInterp { ck: FgChecker::new(prog) }
    }

    pub fn checker(&self) -> &FgChecker<'a> {
        &self.ck
    }

    /// One reduction step.
    pub fn step(&self, e: &Expr) -> StepResult {
        match &e.kind {
            ExprKind::Var(x) => Stuck(format!("unbound variable {x}")),
            ExprKind::IntLit { .. } | ExprKind::BoolLit { .. } | ExprKind::StrLit { .. } => Value,
            ExprKind::StructLit { ty, args } => match self.step_args(args) {
                Ok(Some(args)) => {
                    Stepped(Expr::at(ExprKind::StructLit { ty: ty.clone(), args }, e.span))
                }
                Ok(None) => Value,
                Err(r) => r,
            },
            ExprKind::Select { recv, field } => {
                if !recv.is_value() {
                    return self.in_context(recv, e, |r| ExprKind::Select {
                        recv: Box::new(r),
                        field: field.clone(),
                    });
                }
                let ExprKind::StructLit { ty, args } = &recv.kind else {
                    return Stuck(format!(
                        "field selection on non-struct value {}",
                        pretty_expr(recv)
                    ));
                };
                let fields = match self.ck.fields(ty, e.span) {
                    Ok(fs) => fs,
                    Err(d) => return Stuck(d.to_string()),
                };
                match fields.iter().position(|f| f.name == *field) {
                    Some(idx) => Stepped(args[idx].clone()),
                    None => Stuck(format!("{ty} has no field {field}")),
                }
            }
            ExprKind::Call { recv, method, type_args, args } => {
                if !recv.is_value() {
                    return self.in_context(recv, e, |r| ExprKind::Call {
                        recv: Box::new(r),
                        method: method.clone(),
                        type_args: type_args.clone(),
                        args: args.clone(),
                    });
                }
                match self.step_args(args) {
                    Ok(Some(args2)) => {
                        return Stepped(Expr::at(
                            ExprKind::Call {
                                recv: recv.clone(),
                                method: method.clone(),
                                type_args: type_args.clone(),
                                args: args2,
                            },
                            e.span,
                        ))
                    }
                    Ok(None) => {}
                    Err(r) => return r,
                }
                let vt = recv.value_type().expect("receiver is a value");
                let recv_name = vt.head().expect("FG value type is named");
                let Some(m) = self.ck.prog.lookup_method(recv_name, method) else {
                    return Stuck(format!("{vt} has no method {method}"));
                };
                if m.sig.params.len() != args.len() {
                    return Stuck(format!("arity mismatch calling {method}"));
                }
                let mut map: Vec<(Name, Expr)> = vec![(m.recv_name.clone(), (**recv).clone())];
                map.extend(
                    m.sig
                        .params
                        .iter()
                        .zip(args)
                        .map(|(p, a)| (p.name.clone(), a.clone())),
                );
                Stepped(m.body.subst_vars(&map))
            }
            ExprKind::Assert { recv, ty } => {
                if !recv.is_value() {
                    return self.in_context(recv, e, |r| ExprKind::Assert {
                        recv: Box::new(r),
                        ty: ty.clone(),
                    });
                }
                let vt = recv.value_type().expect("value");
                if self.ck.subtype(&vt, ty) {
                    Stepped((**recv).clone())
                } else {
                    Panic { value: (**recv).clone(), asserted: ty.clone() }
                }
            }
            ExprKind::BinOp { op, lhs, rhs } => {
                if !lhs.is_value() {
                    return self.in_context(lhs, e, |l| ExprKind::BinOp {
                        op: *op,
                        lhs: Box::new(l),
                        rhs: rhs.clone(),
                    });
                }
                if !rhs.is_value() {
                    return self.in_context(rhs, e, |r| ExprKind::BinOp {
                        op: *op,
                        lhs: lhs.clone(),
                        rhs: Box::new(r),
                    });
                }
                match apply_binop(*op, lhs, rhs, e.span) {
                    Ok(v) => Stepped(v),
                    Err(r) => Stuck(r),
                }
            }
            ExprKind::Sprintf { format, args } => {
                match self.step_args(args) {
                    Ok(Some(args2)) => {
                        return Stepped(Expr::at(
                            ExprKind::Sprintf { format: format.clone(), args: args2 },
                            e.span,
                        ))
                    }
                    Ok(None) => {}
                    Err(r) => return r,
                }
                match render_sprintf(format, args) {
                    Ok(rendered) => Stepped(Expr::at(
                        ExprKind::StrLit { value: rendered, ty: "string".into() },
                        e.span,
                    )),
                    Err(r) => Stuck(r),
                }
            }
        }
    }

    /// Step the leftmost non-value in an argument list; `Ok(None)` if all are
    /// values, `Err` carries a panic or stuckness from inside the context.
    fn step_args(&self, args: &[Expr]) -> Result<Option<Vec<Expr>>, StepResult> {
        for (i, a) in args.iter().enumerate() {
            if a.is_value() {
                continue;
            }
            return match self.step(a) {
                Stepped(a2) => {
                    let mut out = args.to_vec();
                    out[i] = a2;
                    Ok(Some(out))
                }
                Value => unreachable!("non-value cannot be a value"),
                other => Err(other),
            };
        }
        Ok(None)
    }

    /// Step inside an evaluation context: reduce `sub` and rebuild with `k`.
    fn in_context(&self, sub: &Expr, whole: &Expr, k: impl FnOnce(Expr) -> ExprKind) -> StepResult {
        match self.step(sub) {
            Stepped(s) => Stepped(Expr::at(k(s), whole.span)),
            Value => unreachable!("caller checked is_value"),
            other => other,
        }
    }
}

fn apply_binop(op: BinOp, lhs: &Expr, rhs: &Expr, span: Span) -> Result<Expr, String> {
    let kind = match (op, &lhs.kind, &rhs.kind) {
        (
            BinOp::Add,
            ExprKind::IntLit { value: a, ty: ta },
            ExprKind::IntLit { value: b, ty: tb },
        ) => {
            // an untyped-constant side adopts the other side's type
            let ty = if ta == "int" { tb.clone() } else { ta.clone() };
            ExprKind::IntLit { value: a.wrapping_add(*b), ty }
        }
        (BinOp::Gt, ExprKind::IntLit { value: a, .. }, ExprKind::IntLit { value: b, .. }) => {
            ExprKind::BoolLit { value: a > b, ty: "bool".into() }
        }
        (BinOp::Eq, ExprKind::IntLit { value: a, .. }, ExprKind::IntLit { value: b, .. }) => {
            ExprKind::BoolLit { value: a == b, ty: "bool".into() }
        }
        (BinOp::Eq, ExprKind::BoolLit { value: a, .. }, ExprKind::BoolLit { value: b, .. }) => {
            ExprKind::BoolLit { value: a == b, ty: "bool".into() }
        }
        (BinOp::Eq, ExprKind::StrLit { value: a, .. }, ExprKind::StrLit { value: b, .. }) => {
            ExprKind::BoolLit { value: a == b, ty: "bool".into() }
        }
        (BinOp::And, ExprKind::BoolLit { value: a, .. }, ExprKind::BoolLit { value: b, .. }) => {
            ExprKind::BoolLit { value: *a && *b, ty: "bool".into() }
        }
        _ => {
            return Err(format!(
                "operator {} applied to {} and {}",
                op.symbol(),
                pretty_expr(lhs),
                pretty_expr(rhs)
            ))
        }
    };
    Ok(Expr::at(kind, span))
}

fn render_sprintf(format: &str, args: &[Expr]) -> Result<String, String> {
    let verbs = parse_verbs(format)?;
    if verbs.len() != args.len() {
        return Err("format/argument count mismatch".into());
    }
    let mut rendered = String::new();
    let mut next = 0usize;
    let mut chars = format.chars();
    while let Some(c) = chars.next() {
        if c != '%' {
            rendered.push(c);
            continue;
        }
        match chars.next() {
            Some('%') => rendered.push('%'),
            Some('d') => {
                let ExprKind::IntLit { value, .. } = &args[next].kind else {
                    return Err("%d applied to a non-integer value".into());
                };
                rendered.push_str(&value.to_string());
                next += 1;
            }
            Some('s') => {
                match &args[next].kind {
                    ExprKind::StrLit { value, .. } => rendered.push_str(value),
                    _ => rendered.push_str(&pretty_expr(&args[next])),
                }
                next += 1;
            }
            _ => unreachable!("parse_verbs validated the format"),
        }
    }
    Ok(rendered)
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    pub fuel: Option<u64>,
    /// Re-type the term after every step (with stupid casts admitted) and
    /// fail loudly if preservation is violated.
    pub dynamic_checks: bool,
}

/// Reduce `e` to an outcome under the (embedding-expanded) program.
pub fn run_fg(prog: &Program, e: &Expr, opts: RunOptions) -> Outcome {
    let interp = FgInterp::new(prog);
    let mut cur = e.clone();
    let mut prev_ty: Option<Type> = None;
    if opts.dynamic_checks {
        prev_ty = interp.ck.type_expr(&Vec::new(), &cur, true).ok();
    }
    let mut steps = 0u64;
    loop {
        if let Some(fuel) = opts.fuel {
            if steps >= fuel {
                return Outcome::Diverged { last: cur, steps };
            }
        }
        match interp.step(&cur) {
            Value => return Outcome::Value(cur),
            Panic { value, asserted } => return Outcome::Panic { value, asserted },
            Stuck(reason) => return Outcome::Stuck { expr: cur, reason },
            Stepped(next) => {
                if opts.dynamic_checks {
                    match interp.ck.type_expr(&Vec::new(), &next, true) {
                        Ok(ty) => {
                            if let Some(prev) = &prev_ty {
                                if !interp.ck.subtype(&ty, prev) {
                                    return Outcome::Stuck {
                                        expr: next,
                                        reason: format!(
                                            "preservation violated: {ty} is not a subtype of {prev}"
                                        ),
                                    };
                                }
                            }
                            prev_ty = Some(ty);
                        }
                        Err(d) => {
                            return Outcome::Stuck {
                                expr: next,
                                reason: format!("preservation violated: {d}"),
                            }
                        }
                    }
                }
                cur = next;
                steps += 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fg_typing::check_program_fg;
    use crate::parser::{parse_program, ParseOptions};

    fn run(src: &str, opts: RunOptions) -> Outcome {
        let p = parse_program(src, ParseOptions::fg()).unwrap();
        let p = check_program_fg(&p).unwrap();
        run_fg(&p, &p.main.clone(), opts)
    }

    const BOOLS: &str = "package main\n\
        type Bool interface { Not() Bool }\n\
        type T struct {}\n\
        type F struct {}\n\
        func (this T) Not() Bool { return F{} }\n\
        func (this F) Not() Bool { return T{} }\n";

    #[test]
    fn method_call_reduces_to_value() {
        let out = run(
            &format!("{BOOLS}func main() {{ _ = T{{}}.Not().Not() }}\n"),
            RunOptions { dynamic_checks: true, ..Default::default() },
        );
        match out {
            Outcome::Value(v) => assert_eq!(pretty_expr(&v), "T{}"),
            o => panic!("unexpected outcome {o:?}"),
        }
    }

    #[test]
    fn field_select_and_assert() {
        let src = format!(
            "{BOOLS}type box struct {{ v Bool }}\n\
             func main() {{ _ = box{{T{{}}.Not()}}.v.(F) }}\n"
        );
        let out = run(&src, RunOptions { dynamic_checks: true, ..Default::default() });
        match out {
            Outcome::Value(v) => assert_eq!(pretty_expr(&v), "F{}"),
            o => panic!("unexpected outcome {o:?}"),
        }
    }

    #[test]
    fn failed_assert_panics() {
        let src = format!(
            "{BOOLS}type box struct {{ v Bool }}\n\
             func main() {{ _ = box{{T{{}}}}.v.(F) }}\n"
        );
        match run(&src, RunOptions::default()) {
            Outcome::Panic { value, asserted } => {
                assert_eq!(pretty_expr(&value), "T{}");
                assert_eq!(asserted, Type::named("F"));
            }
            o => panic!("unexpected outcome {o:?}"),
        }
    }

    #[test]
    fn panic_inside_context_propagates() {
        let src = format!(
            "{BOOLS}type box struct {{ v Bool }}\n\
             func main() {{ _ = box{{box{{T{{}}}}.v.(F)}}.v.Not() }}\n"
        );
        match run(&src, RunOptions::default()) {
            Outcome::Panic { value, asserted } => {
                assert_eq!(pretty_expr(&value), "T{}");
                assert_eq!(asserted, Type::named("F"));
            }
            o => panic!("unexpected outcome {o:?}"),
        }
    }

    #[test]
    fn fuel_stops_divergence() {
        let src = "package main\n\
            type t struct {}\n\
            func (x t) Loop() t { return x.Loop() }\n\
            func main() { _ = t{}.Loop() }\n";
        let out = run(src, RunOptions { fuel: Some(50), ..Default::default() });
        assert!(matches!(out, Outcome::Diverged { steps: 50, .. }));
    }

    #[test]
    fn arguments_reduce_left_to_right() {
        // the leftmost non-value argument steps first
        let src = format!(
            "{BOOLS}type pair struct {{ a Bool; b Bool }}\n\
             func main() {{ _ = pair{{T{{}}.Not(), F{{}}.Not()}} }}\n"
        );
        let p = parse_program(&src, ParseOptions::fg()).unwrap();
        let p = check_program_fg(&p).unwrap();
        let interp = FgInterp::new(&p);
        let s1 = match interp.step(&p.main) {
            Stepped(e) => e,
            r => panic!("{r:?}"),
        };
        assert_eq!(pretty_expr(&s1), "pair{F{}, F{}.Not()}");
    }

    #[test]
    fn extended_operators_evaluate() {
        let src = "package main\n\
            type Int int\n\
            func (x Int) Double() Int { return x + x }\n\
            func main() { var i Int = 21\n _ = fmt.Sprintf(\"%d and %s\", i.Double(), \"more\") }\n";
        let p = parse_program(src, ParseOptions::fg().extended()).unwrap();
        let p = check_program_fg(&p).unwrap();
        let out =
            run_fg(&p, &p.main.clone(), RunOptions { dynamic_checks: true, ..Default::default() });
        match out {
            Outcome::Value(v) => match v.kind {
                ExprKind::StrLit { value, .. } => assert_eq!(value, "42 and more"),
                k => panic!("{k:?}"),
            },
            o => panic!("unexpected outcome {o:?}"),
        }
    }
}
