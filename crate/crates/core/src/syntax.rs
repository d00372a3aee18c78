//! Tokenizer and recursive-descent parser shared by every textual input.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := ('-' | '+') unary | power
//! power   := primary ('^' INT)?
//! primary := INT | FLOAT | IDENT | IDENT '(' [expr (',' expr)*] ')' | '(' expr ')'
//! ```
//!
//! Implicit multiplication (`2p`, `2(p+q)`) is rejected. The parser only
//! builds the tree; [`crate::scalar`], [`crate::hcnumber`] and
//! [`crate::eval`] give it meaning.

use num::BigInt;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Expr {
    /// Byte offset of the node in the source text.
    pub pos: usize,
    pub kind: ExprKind,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExprKind {
    Int(BigInt),
    Float(f64),
    Ident(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Call(String, Vec<Expr>),
}

impl Expr {
    pub fn has_float_literal(&self) -> bool {
        use ExprKind::*;
        match &self.kind {
            Float(_) => true,
            Int(_) | Ident(_) => false,
            Neg(a) | Pow(a, _) => a.has_float_literal(),
            Add(a, b) | Sub(a, b) | Mul(a, b) | Div(a, b) => {
                a.has_float_literal() || b.has_float_literal()
            }
            Call(_, args) => args.iter().any(Expr::has_float_literal),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Float(f64),
    Ident(String),
    Op(char),
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || (c == '.' && bytes.get(i + 1).is_some_and(u8::is_ascii_digit)) {
            let start = i;
            let mut is_float = false;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i < bytes.len() && bytes[i] == b'.' {
                is_float = true;
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    is_float = true;
                    i = j;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text = &src[start..i];
            let tok = if is_float {
                Tok::Float(
                    text.parse()
                        .map_err(|_| Error::parse(start, format!("bad number `{text}`")))?,
                )
            } else {
                Tok::Int(text.parse().expect("digits"))
            };
            out.push((start, tok));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(src[start..i].to_string())));
        } else if "+-*/^(),".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            let ch = src[i..].chars().next().unwrap();
            return Err(Error::parse(i, format!("unexpected character `{ch}`")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let pos = self.pos();
            let kind = if self.eat('+') {
                ExprKind::Add
            } else if self.eat('-') {
                ExprKind::Sub
            } else {
                return Ok(lhs);
            };
            let rhs = self.term()?;
            lhs = Expr {
                pos,
                kind: kind(Box::new(lhs), Box::new(rhs)),
            };
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let pos = self.pos();
            let kind = if self.eat('*') {
                ExprKind::Mul
            } else if self.eat('/') {
                ExprKind::Div
            } else {
                return Ok(lhs);
            };
            let rhs = self.unary()?;
            lhs = Expr {
                pos,
                kind: kind(Box::new(lhs), Box::new(rhs)),
            };
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        let pos = self.pos();
        if self.eat('-') {
            let inner = self.unary()?;
            return Ok(Expr {
                pos,
                kind: ExprKind::Neg(Box::new(inner)),
            });
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        let pos = self.pos();
        if self.eat('^') {
            let epos = self.pos();
            match self.peek().cloned() {
                Some(Tok::Int(n)) => {
                    self.at += 1;
                    let k: u32 = n
                        .try_into()
                        .map_err(|_| Error::parse(epos, "exponent too large"))?;
                    Ok(Expr {
                        pos,
                        kind: ExprKind::Pow(Box::new(base), k),
                    })
                }
                _ => Err(Error::parse(epos, "exponent must be a nonnegative integer literal")),
            }
        } else {
            Ok(base)
        }
    }

    fn primary(&mut self) -> Result<Expr> {
        let pos = self.pos();
        let tok = self
            .peek()
            .cloned()
            .ok_or_else(|| Error::parse(pos, "unexpected end of input"))?;
        self.at += 1;
        let e = match tok {
            Tok::Int(n) => ExprKind::Int(n),
            Tok::Float(x) => ExprKind::Float(x),
            Tok::Ident(name) => {
                if self.eat('(') {
                    let mut args = Vec::new();
                    if !self.eat(')') {
                        loop {
                            args.push(self.expr()?);
                            if self.eat(')') {
                                break;
                            }
                            if !self.eat(',') {
                                return Err(Error::parse(self.pos(), "expected `,` or `)`"));
                            }
                        }
                    }
                    ExprKind::Call(name, args)
                } else {
                    ExprKind::Ident(name)
                }
            }
            Tok::Op('(') => {
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::parse(self.pos(), "expected `)`"));
                }
                return Ok(inner);
            }
            Tok::Op(c) => return Err(Error::parse(pos, format!("unexpected `{c}`"))),
        };
        Ok(Expr { pos, kind: e })
    }
}

/// Parses a complete expression.
pub fn parse(src: &str) -> Result<Expr> {
    let toks = tokenize(src)?;
    let mut p = Parser {
        toks,
        at: 0,
        end: src.len(),
    };
    let e = p.expr()?;
    if let Some((pos, tok)) = p.toks.get(p.at) {
        let msg = match tok {
            Tok::Op(c) => format!("unexpected `{c}`"),
            _ => "implicit multiplication is not allowed; write `*`".to_string(),
        };
        return Err(Error::parse(*pos, msg));
    }
    Ok(e)
}

/// Splits a basis-element identifier `<letters><digits>` such as `e1` or
/// `E12` into stem and 1-based index. Identifiers with underscores or
/// without a trailing number are ordinary symbols.
pub fn split_basis(ident: &str) -> Option<(&str, usize)> {
    let split = ident.find(|c: char| c.is_ascii_digit())?;
    let (stem, digits) = ident.split_at(split);
    if stem.is_empty()
        || !stem.chars().all(|c| c.is_ascii_alphabetic())
        || !digits.chars().all(|c| c.is_ascii_digit())
    {
        return None;
    }
    Some((stem, digits.parse().ok()?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let e = parse("a - b*c^2").unwrap();
        match e.kind {
            ExprKind::Sub(_, r) => assert!(matches!(r.kind, ExprKind::Mul(..))),
            other => panic!("{other:?}"),
        }
        let e = parse("-p^2").unwrap();
        match e.kind {
            ExprKind::Neg(inner) => assert!(matches!(inner.kind, ExprKind::Pow(_, 2))),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn left_associative_division() {
        let e = parse("1/2*a").unwrap();
        match e.kind {
            ExprKind::Mul(l, _) => assert!(matches!(l.kind, ExprKind::Div(..))),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn errors_carry_position() {
        match parse("a + 2b") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("{other:?}"),
        }
        assert!(parse("a $ b").is_err());
        assert!(parse("a^b").is_err());
        assert!(parse("a^1.5").is_err());
        assert!(parse("(a + b").is_err());
    }

    #[test]
    fn floats() {
        assert_eq!(parse("1.5e-3").unwrap().kind, ExprKind::Float(1.5e-3));
        assert_eq!(parse(".5").unwrap().kind, ExprKind::Float(0.5));
        assert!(parse("2*e1").unwrap().kind != ExprKind::Float(20.0));
    }

    #[test]
    fn basis_identifiers() {
        assert_eq!(split_basis("e1"), Some(("e", 1)));
        assert_eq!(split_basis("E12"), Some(("E", 12)));
        assert_eq!(split_basis("a_1"), None);
        assert_eq!(split_basis("alpha"), None);
        assert_eq!(split_basis("x1y"), None);
    }
}
