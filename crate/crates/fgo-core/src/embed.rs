//! Interface embedding expansion.
//!
//! Replaces every embedded interface inside an interface literal by the
//! embedded interface's (recursively expanded, instantiated) method
//! specifications. After this pass every interface literal has an empty
//! embed list, which the checkers and `methods` lookups rely on.

use crate::ast::*;
use crate::diag::Diagnostic;

pub fn expand_embeddings(p: &mut Program) -> Result<(), Diagnostic> {
    let snapshot = p.clone();
    for d in &mut p.decls {
        let Decl::Type(t) = d else { continue };
        let TypeLit::Interface { embeds, specs } = &t.lit else { continue };
        if embeds.is_empty() {
            continue;
        }
        let mut out: Vec<Spec> = Vec::new();
        let mut stack = vec![t.name.clone()];
        for e in embeds {
            let embedded = expand_embed(&snapshot, e, &mut stack, t.span)?;
            for s in embedded {
                push_spec(&mut out, s, t.span)?;
            }
        }
        for s in specs {
            push_spec(&mut out, s.clone(), t.span)?;
        }
        t.lit = TypeLit::Interface { embeds: Vec::new(), specs: out };
    }
    Ok(())
}

/// Expanded specs of one embedded interface type, instantiated with its
/// arguments. `stack` holds the names currently being expanded, for cycle
/// detection.
fn expand_embed(
    p: &Program,
    embed: &Type,
    stack: &mut Vec<Name>,
    span: Span,
) -> Result<Vec<Spec>, Diagnostic> {
    let Type::Named { name, args } = embed else {
        return Err(Diagnostic::new(span, "embed", "cannot embed a type parameter"));
    };
    if stack.iter().any(|n| n == name) {
        return Err(Diagnostic::new(
            span,
            "embed",
            format!("embedding cycle through interface {name}"),
        ));
    }
    let Some(decl) = p.lookup_type(name) else {
        return Err(Diagnostic::new(span, "embed", format!("undeclared type {name}")));
    };
    let TypeLit::Interface { embeds, specs } = &decl.lit else {
        return Err(Diagnostic::new(span, "embed", format!("{name} is not an interface")));
    };
    if decl.formals.len() != args.len() {
        return Err(Diagnostic::new(
            span,
            "embed",
            format!("{} expects {} type arguments, got {}", name, decl.formals.len(), args.len()),
        ));
    }
    let subst = TypeSubst::new(
        decl.formals
            .iter()
            .zip(args)
            .map(|(tp, a)| (tp.name.clone(), a.clone()))
            .collect(),
    );
    stack.push(name.clone());
    let mut out = Vec::new();
    for e in embeds {
        for s in expand_embed(p, &subst.apply(e), stack, span)? {
            push_spec(&mut out, s, span)?;
        }
    }
    for s in specs {
        push_spec(&mut out, subst.apply_spec(s), span)?;
    }
    stack.pop();
    Ok(out)
}

fn push_spec(out: &mut Vec<Spec>, s: Spec, span: Span) -> Result<(), Diagnostic> {
    if let Some(existing) = out.iter().find(|x| x.name == s.name) {
        if existing.sig.sig_eq(&s.sig) {
            return Ok(()); // same method from two embeddings: fine
        }
        return Err(Diagnostic::new(
            span,
            "embed",
            format!("conflicting signatures for method {}", s.name),
        ));
    }
    out.push(s);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_program, ParseOptions};

    fn expand(src: &str, opts: ParseOptions) -> Result<Program, Diagnostic> {
        let mut p = parse_program(src, opts).unwrap();
        expand_embeddings(&mut p)?;
        Ok(p)
    }

    #[test]
    fn flattens_transitively() {
        let p = expand(
            "package main\n\
             type A interface { M() A }\n\
             type B interface { A; N() A }\n\
             type C interface { B }\n\
             type t struct {}\n\
             func main() { _ = t{} }\n",
            ParseOptions::fg(),
        )
        .unwrap();
        let c = p.lookup_type("C").unwrap();
        match &c.lit {
            TypeLit::Interface { embeds, specs } => {
                assert!(embeds.is_empty());
                let names: Vec<_> = specs.iter().map(|s| s.name.as_str()).collect();
                assert_eq!(names, vec!["M", "N"]);
            }
            _ => panic!(),
        }
    }

    #[test]
    fn instantiates_generic_embeds() {
        let p = expand(
            "package main\n\
             type Any interface {}\n\
             type Eq(type a Any) interface { Equal(that a) Eq(a) }\n\
             type Ord(type a Any) interface { Eq(a); Less(that a) Ord(a) }\n\
             type t struct {}\n\
             func main() { _ = t{} }\n",
            ParseOptions::fgg(),
        )
        .unwrap();
        let ord = p.lookup_type("Ord").unwrap();
        match &ord.lit {
            TypeLit::Interface { specs, .. } => {
                assert_eq!(specs[0].name, "Equal");
                assert_eq!(specs[0].sig.params[0].ty, Type::param("a"));
                assert_eq!(specs[0].sig.ret, Type::app("Eq", vec![Type::param("a")]));
            }
            _ => panic!(),
        }
    }

    #[test]
    fn rejects_cycles_and_conflicts() {
        assert!(expand(
            "package main\n\
             type A interface { B }\n\
             type B interface { A }\n\
             type t struct {}\n\
             func main() { _ = t{} }\n",
            ParseOptions::fg(),
        )
        .is_err());
        assert!(expand(
            "package main\n\
             type A interface { M() A }\n\
             type B interface { M() B }\n\
             type C interface { A; B }\n\
             type t struct {}\n\
             func main() { _ = t{} }\n",
            ParseOptions::fg(),
        )
        .is_err());
    }

    #[test]
    fn duplicate_identical_specs_merge() {
        let p = expand(
            "package main\n\
             type A interface { M() A }\n\
             type B interface { A; M() A }\n\
             type t struct {}\n\
             func main() { _ = t{} }\n",
            ParseOptions::fg(),
        )
        .unwrap();
        match &p.lookup_type("B").unwrap().lit {
            TypeLit::Interface { specs, .. } => assert_eq!(specs.len(), 1),
            _ => panic!(),
        }
    }
}
