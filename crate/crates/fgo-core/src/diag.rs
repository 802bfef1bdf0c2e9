//! Located diagnostics, rendered as `file:line:col: rule-name: message`.

use crate::ast::Span;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub span: Span,
    pub rule: String,
    pub message: String,
}

impl Diagnostic {
    pub fn new(span: Span, rule: impl Into<String>, message: impl Into<String>) -> Diagnostic {
        Diagnostic { span, rule: rule.into(), message: message.into() }
    }

    pub fn render(&self, file: &str) -> String {
        format!("{}:{}: {}: {}", file, self.span, self.rule, self.message)
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}: {}", self.span, self.rule, self.message)
    }
}

/// A single diagnostic used where typing is syntax-directed and the first
/// failure aborts (expression typing), or a batch for whole-program checks.
pub type TypeResult<T> = Result<T, Diagnostic>;

#[derive(Debug, Clone, Default)]
pub struct Diagnostics {
    pub items: Vec<Diagnostic>,
}

impl Diagnostics {
    pub fn push(&mut self, d: Diagnostic) {
        self.items.push(d);
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn into_result(self) -> Result<(), Vec<Diagnostic>> {
        if self.items.is_empty() {
            Ok(())
        } else {
            Err(self.items)
        }
    }
}

impl fmt::Display for Diagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.items.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}
