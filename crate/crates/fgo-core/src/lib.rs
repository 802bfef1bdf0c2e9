//! Featherweight Go toolkit: parsers, type checkers, and interpreters for
//! the FG and FGG calculi, plus monomorphisation from FGG to FG and a
//! bisimulation harness for differential testing of the translation.

pub mod ast;
pub mod bisim;
pub mod diag;
pub mod embed;
pub mod enumerate;
pub mod fg_eval;
pub mod fg_typing;
pub mod fgg_eval;
pub mod fgg_typing;
pub mod instances;
pub mod lexer;
pub mod monocheck;
pub mod monomorphise;
pub mod parser;
pub mod pretty;

pub use ast::*;
pub use diag::{Diagnostic, Diagnostics, TypeResult};
pub use parser::{parse_program, ParseError, ParseOptions};
pub use pretty::{pretty_expr, pretty_program, pretty_type};
