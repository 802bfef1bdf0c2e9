//! FGG small-step interpreter.
//!
//! Identical strategy to the FG interpreter; method dispatch additionally
//! instantiates the receiver's and the call's type arguments into the body.
//! All types appearing in a running term are closed.

use crate::ast::*;
use crate::fgg_typing::FggChecker;
use crate::pretty::pretty_expr;

pub use crate::fg_eval::Outcome;
pub use crate::fg_eval::RunOptions;
use crate::fg_eval::StepResult::{self, *};

pub struct FggInterp<'a> {
    ck: FggChecker<'a>,
}

impl<'a> FggInterp<'a> {
    /// The program must already be embedding-expanded (as returned by
    /// `check_program_fgg`).
    pub fn new(prog: &'a Program) -> Self {
        FggInterp { ck: FggChecker::new(prog) }
    }

    pub fn checker(&self) -> &FggChecker<'a> {
        &self.ck
    }

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
                let Some(vt) = recv.value_type() else {
                    return Stuck(format!("selection on non-value {}", pretty_expr(recv)));
                };
                let fields = match self.ck.fields(&vt, e.span) {
                    Ok(fs) => fs,
                    Err(d) => return Stuck(d.to_string()),
                };
                let ExprKind::StructLit { args, .. } = &recv.kind else {
                    return Stuck(format!("field selection on {}", pretty_expr(recv)));
                };
                match fields.iter().position(|f| f.name == *field) {
                    Some(idx) => Stepped(args[idx].clone()),
                    None => Stuck(format!("{vt} has no field {field}")),
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
                match body_fgg(self.ck.prog, &vt, method, type_args, recv, args) {
                    Ok(body) => Stepped(body),
                    Err(msg) => Stuck(msg),
                }
            }
            ExprKind::Assert { recv, ty } => {
                if !recv.is_value() {
                    return self.in_context(recv, e, |r| ExprKind::Assert {
                        recv: Box::new(r),
                        ty: ty.clone(),
                    });
                }
                let vt = recv.value_type().expect("value");
                match self.ck.implements(&Vec::new(), &vt, ty) {
                    Ok(true) => Stepped((**recv).clone()),
                    Ok(false) => Panic { value: (**recv).clone(), asserted: ty.clone() },
                    Err(d) => Stuck(d.to_string()),
                }
            }
            ExprKind::BinOp { .. } | ExprKind::Sprintf { .. } => {
                // the primitive extensions are type-argument-free; reuse FG
                crate::fg_eval::FgInterp::new(self.ck.prog).step(e)
            }
        }
    }

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

    fn in_context(&self, sub: &Expr, whole: &Expr, k: impl FnOnce(Expr) -> ExprKind) -> StepResult {
        match self.step(sub) {
            Stepped(s) => Stepped(Expr::at(k(s), whole.span)),
            Value => unreachable!("caller checked is_value"),
            other => other,
        }
    }
}

/// `body(t_S(φ).m(ψ))` instantiated at a call site: the method body with the
/// receiver's and the method's type arguments substituted for the formals
/// and the receiver/arguments substituted for the value variables.
pub fn body_fgg(
    prog: &Program,
    recv_ty: &Type,
    method: &str,
    type_args: &[Type],
    recv: &Expr,
    args: &[Expr],
) -> Result<Expr, String> {
    let Type::Named { name, args: ty_args } = recv_ty else {
        return Err(format!("call on non-named type {recv_ty}"));
    };
    let Some(m) = prog.lookup_method(name, method) else {
        return Err(format!("{recv_ty} has no method {method}"));
    };
    if m.recv_formals.len() != ty_args.len() || m.sig.type_formals.len() != type_args.len() {
        return Err(format!("type-argument arity mismatch calling {method}"));
    }
    if m.sig.params.len() != args.len() {
        return Err(format!("arity mismatch calling {method}"));
    }
    let mut entries: Vec<(Name, Type)> = m
        .recv_formals
        .iter()
        .zip(ty_args)
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
    let mut map: Vec<(Name, Expr)> = vec![(m.recv_name.clone(), recv.clone())];
    map.extend(m.sig.params.iter().zip(args).map(|(p, a)| (p.name.clone(), a.clone())));
    Ok(m.body.subst_types(&theta).subst_vars(&map))
}

/// Reduce `e` to an outcome under the (embedding-expanded) program.
pub fn run_fgg(prog: &Program, e: &Expr, opts: RunOptions) -> Outcome {
    let interp = FggInterp::new(prog);
    let mut cur = e.clone();
    let mut prev_ty: Option<Type> = None;
    if opts.dynamic_checks {
        prev_ty = interp.ck.type_expr(&Vec::new(), &Vec::new(), &cur, true).ok();
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
                    match interp.ck.type_expr(&Vec::new(), &Vec::new(), &next, true) {
                        Ok(ty) => {
                            if let Some(prev) = &prev_ty {
                                match interp.ck.implements(&Vec::new(), &ty, prev) {
                                    Ok(true) => {}
                                    _ => {
                                        return Outcome::Stuck {
                                            expr: next,
                                            reason: format!(
                                                "preservation violated: {ty} is not a subtype of {prev}"
                                            ),
                                        }
                                    }
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
    use crate::fgg_typing::check_program_fgg;
    use crate::parser::{parse_program, ParseOptions};

    fn run(src: &str, opts: RunOptions) -> Outcome {
        let p = parse_program(src, ParseOptions::fgg()).unwrap();
        let p = check_program_fgg(&p).unwrap_or_else(|e| panic!("{e:?}"));
        run_fgg(&p, &p.main.clone(), opts)
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
        }\n\
        type T struct {}\n\
        type wrap struct { v Any }\n\
        type wrapper struct {}\n\
        func (this wrapper) Apply(x Any) wrap { return wrap{x} }\n";

    #[test]
    fn generic_map_reduces() {
        let src = format!(
            "{LIST}func main() {{\n\
               _ = Cons(Any){{T{{}}, Cons(Any){{T{{}}, Nil(Any){{}}}}}}.Map(wrap)(wrapper{{}})\n\
             }}\n"
        );
        match run(&src, RunOptions { dynamic_checks: true, ..Default::default() }) {
            Outcome::Value(v) => assert_eq!(
                pretty_expr(&v),
                "Cons(wrap){wrap{T{}}, Cons(wrap){wrap{T{}}, Nil(wrap){}}}"
            ),
            o => panic!("unexpected outcome {o:?}"),
        }
    }

    #[test]
    fn dispatch_picks_dynamic_type() {
        let src = format!(
            "{LIST}func main() {{ _ = Nil(Any){{}}.Map(wrap)(wrapper{{}}) }}\n"
        );
        match run(&src, RunOptions::default()) {
            Outcome::Value(v) => assert_eq!(pretty_expr(&v), "Nil(wrap){}"),
            o => panic!("unexpected outcome {o:?}"),
        }
    }

    #[test]
    fn assert_on_instantiated_type() {
        let src = format!(
            "{LIST}func main() {{ _ = wrap{{Nil(T){{}}}}.v.(List(T)) }}\n"
        );
        match run(&src, RunOptions { dynamic_checks: true, ..Default::default() }) {
            Outcome::Value(v) => assert_eq!(pretty_expr(&v), "Nil(T){}"),
            o => panic!("unexpected outcome {o:?}"),
        }
        let bad = format!(
            "{LIST}func main() {{ _ = wrap{{Nil(T){{}}}}.v.(List(wrap)) }}\n"
        );
        assert!(matches!(run(&bad, RunOptions::default()), Outcome::Panic { .. }));
    }

    #[test]
    fn fuel_stops_divergence() {
        let src = "package main\n\
            type Any interface {}\n\
            type Box(type a Any) struct {}\n\
            func (b Box(type a Any)) Loop() Any { return Box(Box(a)){}.Loop() }\n\
            func main() { _ = Box(Any){}.Loop() }\n";
        let out = run(src, RunOptions { fuel: Some(25), ..Default::default() });
        assert!(matches!(out, Outcome::Diverged { steps: 25, .. }));
    }
}
