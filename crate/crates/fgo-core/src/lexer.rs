//! Hand-rolled lexer for the concrete FG/FGG syntax.
//!
//! Comments run from `//` to end of line. In relaxed mode, `<`, `>` and `,`
//! may appear inside identifiers (balanced angle brackets), so monomorphiser
//! output re-parses; comparison operators then need surrounding whitespace.

use crate::ast::Span;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(i64),
    Str(String),
    // punctuation
    LParen,
    RParen,
    LBrace,
    RBrace,
    Dot,
    Comma,
    Semi,
    Assign,   // =
    Plus,     // +
    Gt,       // >
    EqEq,     // ==
    AndAnd,   // &&
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Int(n) => write!(f, "integer `{n}`"),
            Tok::Str(s) => write!(f, "string {s:?}"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::LBrace => write!(f, "`{{`"),
            Tok::RBrace => write!(f, "`}}`"),
            Tok::Dot => write!(f, "`.`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::Semi => write!(f, "`;`"),
            Tok::Assign => write!(f, "`=`"),
            Tok::Plus => write!(f, "`+`"),
            Tok::Gt => write!(f, "`>`"),
            Tok::EqEq => write!(f, "`==`"),
            Tok::AndAnd => write!(f, "`&&`"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexError {
    pub span: Span,
    pub message: String,
}

pub fn lex(source: &str, relaxed_idents: bool) -> Result<Vec<Token>, LexError> {
    let chars: Vec<char> = source.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let mut line: u32 = 1;
    let mut col: u32 = 1;

    macro_rules! bump {
        () => {{
            if chars[i] == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            i += 1;
        }};
    }

    while i < chars.len() {
        let c = chars[i];
        let span = Span::new(line, col);
        if c.is_whitespace() {
            bump!();
            continue;
        }
        if c == '/' && i + 1 < chars.len() && chars[i + 1] == '/' {
            while i < chars.len() && chars[i] != '\n' {
                bump!();
            }
            continue;
        }
        if is_ident_start(c) {
            let mut s = String::new();
            while i < chars.len() && is_ident_continue(chars[i]) {
                s.push(chars[i]);
                bump!();
            }
            // Relaxed mode: a `<` directly after an identifier begins a
            // mangled-name segment; consume through the balanced `>`.
            if relaxed_idents && i < chars.len() && chars[i] == '<' {
                let mut depth = 0;
                loop {
                    if i >= chars.len() {
                        return Err(LexError {
                            span,
                            message: format!("unbalanced `<` in identifier `{s}`"),
                        });
                    }
                    let ch = chars[i];
                    match ch {
                        '<' => depth += 1,
                        '>' => depth -= 1,
                        ',' | '-' => {}
                        _ if is_ident_continue(ch) => {}
                        _ => {
                            return Err(LexError {
                                span,
                                message: format!("invalid character `{ch}` in mangled identifier"),
                            })
                        }
                    }
                    s.push(ch);
                    bump!();
                    if depth == 0 {
                        break;
                    }
                }
            }
            out.push(Token { tok: Tok::Ident(s), span });
            continue;
        }
        if c.is_ascii_digit() || (c == '-' && i + 1 < chars.len() && chars[i + 1].is_ascii_digit())
        {
            let neg = c == '-';
            if neg {
                bump!();
            }
            let mut n: i64 = 0;
            while i < chars.len() && chars[i].is_ascii_digit() {
                n = n * 10 + (chars[i] as i64 - '0' as i64);
                bump!();
            }
            out.push(Token { tok: Tok::Int(if neg { -n } else { n }), span });
            continue;
        }
        if c == '"' {
            bump!();
            let mut s = String::new();
            while i < chars.len() && chars[i] != '"' {
                if chars[i] == '\n' {
                    return Err(LexError { span, message: "unterminated string".into() });
                }
                s.push(chars[i]);
                bump!();
            }
            if i >= chars.len() {
                return Err(LexError { span, message: "unterminated string".into() });
            }
            bump!(); // closing quote
            out.push(Token { tok: Tok::Str(s), span });
            continue;
        }
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            '.' => Tok::Dot,
            ',' => Tok::Comma,
            ';' => Tok::Semi,
            '+' => Tok::Plus,
            '>' => Tok::Gt,
            '=' => {
                if i + 1 < chars.len() && chars[i + 1] == '=' {
                    bump!();
                    Tok::EqEq
                } else {
                    Tok::Assign
                }
            }
            '&' => {
                if i + 1 < chars.len() && chars[i + 1] == '&' {
                    bump!();
                    Tok::AndAnd
                } else {
                    return Err(LexError { span, message: "expected `&&`".into() });
                }
            }
            _ => {
                return Err(LexError { span, message: format!("unexpected character `{c}`") });
            }
        };
        bump!();
        out.push(Token { tok, span });
    }
    out.push(Token { tok: Tok::Eof, span: Span::new(line, col) });
    Ok(out)
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_' || c == '\u{1438}' || c == '\u{1433}' || c == '\u{1428}'
}

fn is_ident_continue(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\u{1438}' || c == '\u{1433}' || c == '\u{1428}'
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexes_negative_literal_in_struct() {
        let toks = lex("incr{-5}", false).unwrap();
        assert_eq!(toks[1].tok, Tok::LBrace);
        assert_eq!(toks[2].tok, Tok::Int(-5));
    }

    #[test]
    fn relaxed_mode_consumes_mangled_names() {
        let toks = lex("List<int> Map<int,bool>", true).unwrap();
        assert_eq!(toks[0].tok, Tok::Ident("List<int>".into()));
        assert_eq!(toks[1].tok, Tok::Ident("Map<int,bool>".into()));
    }

    #[test]
    fn relaxed_mode_keeps_spaced_gt_as_operator() {
        let toks = lex("x > 0", true).unwrap();
        assert_eq!(toks[1].tok, Tok::Gt);
    }

    #[test]
    fn comments_skipped() {
        let toks = lex("x // comment\ny", false).unwrap();
        assert_eq!(toks.len(), 3);
        assert_eq!(toks[1].span.line, 2);
    }
}
