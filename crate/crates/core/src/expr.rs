//! Tiny expression grammar shared by element, polynomial and rational-map
//! input. Accepts integers, the symbols `w`, `x`, `y`, `+`, `-` (binary and
//! unary), `*`, `^` with a nonnegative integer exponent, and parentheses.
//! Juxtaposition such as `2x` is read as a product.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(u64),
    Sym(char),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Tok {
    Int(u64),
    Sym(char),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' => {}
            '+' => out.push(Tok::Plus),
            // Accept the unicode minus that shows up in pasted formulas.
            '-' | '\u{2212}' => out.push(Tok::Minus),
            '*' | '\u{00b7}' => out.push(Tok::Star),
            '^' => out.push(Tok::Caret),
            '(' => out.push(Tok::LParen),
            ')' => out.push(Tok::RParen),
            'w' | 'x' | 'y' | 'T' => out.push(Tok::Sym(if c == 'T' { 'x' } else { c })),
            d if d.is_ascii_digit() => {
                let start = i;
                while i + 1 < chars.len() && chars[i + 1].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..=i].iter().collect();
                let v = text
                    .parse::<u64>()
                    .map_err(|_| Error::parse(s, format!("integer {text} out of range")))?;
                out.push(Tok::Int(v));
            }
            other => return Err(Error::parse(s, format!("unexpected character {other:?}"))),
        }
        i += 1;
    }
    Ok(out)
}

struct Parser<'s> {
    src: &'s str,
    toks: Vec<Tok>,
    pos: usize,
}

impl<'s> Parser<'s> {
    fn peek(&self) -> Option<Tok> {
        self.toks.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.peek();
        self.pos += 1;
        t
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse(self.src, msg)
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(Tok::Int(_)) | Some(Tok::Sym(_)) | Some(Tok::LParen) => {
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Some(Tok::Plus) => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek() == Some(Tok::Caret) {
            self.bump();
            let e = match self.bump() {
                Some(Tok::Int(e)) => e,
                Some(Tok::LParen) => {
                    // Allow w^(19*2^3) style exponents: a product of integers.
                    let inner = self.expr()?;
                    match self.bump() {
                        Some(Tok::RParen) => {}
                        _ => return Err(self.err("missing ')' in exponent")),
                    }
                    eval_int(&inner).ok_or_else(|| self.err("exponent must be an integer"))?
                }
                _ => return Err(self.err("exponent must be a nonnegative integer")),
            };
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.bump() {
            Some(Tok::Int(v)) => Ok(Expr::Int(v)),
            Some(Tok::Sym(c)) => Ok(Expr::Sym(c)),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(e),
                    _ => Err(self.err("missing ')'")),
                }
            }
            Some(t) => Err(self.err(format!("unexpected token {t:?}"))),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

fn eval_int(e: &Expr) -> Option<u64> {
    match e {
        Expr::Int(v) => Some(*v),
        Expr::Mul(a, b) => eval_int(a)?.checked_mul(eval_int(b)?),
        Expr::Add(a, b) => eval_int(a)?.checked_add(eval_int(b)?),
        Expr::Pow(a, k) => eval_int(a)?.checked_pow(u32::try_from(*k).ok()?),
        _ => None,
    }
}

pub fn parse(src: &str) -> Result<Expr> {
    let toks = tokenize(src)?;
    if toks.is_empty() {
        return Err(Error::parse(src, "empty expression"));
    }
    let mut p = Parser { src, toks, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

/// Splits `"(N)/(D)"` or `"N/D"` at the single top-level `/`. A string
/// without a top-level `/` is returned as numerator with no denominator.
pub fn split_fraction(src: &str) -> Result<(&str, Option<&str>)> {
    let mut depth = 0i32;
    let mut at = None;
    for (i, c) in src.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            '/' if depth == 0 => {
                if at.is_some() {
                    return Err(Error::parse(src, "more than one top-level '/'"));
                }
                at = Some(i);
            }
            _ => {}
        }
    }
    Ok(match at {
        Some(i) => (&src[..i], Some(&src[i + 1..])),
        None => (src, None),
    })
}

/// Folds an expression bottom-up: `leaf` maps integers and symbols,
/// `ops` combines already-evaluated children.
pub fn walk<T, F>(e: &Expr, leaf: &F, ops: &dyn Fn(Op<T>) -> T) -> Result<T>
where
    F: Fn(&Expr) -> Result<T>,
{
    match e {
        Expr::Int(_) | Expr::Sym(_) => leaf(e),
        Expr::Neg(a) => Ok(ops(Op::Neg(walk(a, leaf, ops)?))),
        Expr::Add(a, b) => Ok(ops(Op::Add(walk(a, leaf, ops)?, walk(b, leaf, ops)?))),
        Expr::Sub(a, b) => Ok(ops(Op::Sub(walk(a, leaf, ops)?, walk(b, leaf, ops)?))),
        Expr::Mul(a, b) => Ok(ops(Op::Mul(walk(a, leaf, ops)?, walk(b, leaf, ops)?))),
        Expr::Pow(a, k) => Ok(ops(Op::Pow(walk(a, leaf, ops)?, *k))),
    }
}

pub enum Op<T> {
    Neg(T),
    Add(T, T),
    Sub(T, T),
    Mul(T, T),
    Pow(T, u64),
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let e = parse("-x^2*y + 3").unwrap();
        assert_eq!(
            e,
            Expr::Add(
                Box::new(Expr::Mul(
                    Box::new(Expr::Neg(Box::new(Expr::Pow(Box::new(Expr::Sym('x')), 2)))),
                    Box::new(Expr::Sym('y'))
                )),
                Box::new(Expr::Int(3))
            )
        );
    }

    #[test]
    fn exponent_products() {
        assert_eq!(
            parse("w^(19*2^3)").unwrap(),
            Expr::Pow(Box::new(Expr::Sym('w')), 152)
        );
    }

    #[test]
    fn fractions() {
        assert_eq!(
            split_fraction("(-x^7+x^6+x)/(x^6+x-1)").unwrap(),
            ("(-x^7+x^6+x)", Some("(x^6+x-1)"))
        );
        assert_eq!(split_fraction("x^2").unwrap(), ("x^2", None));
        assert!(split_fraction("x/y/x").is_err());
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse("x^").is_err());
        assert!(parse("x + ?").is_err());
        assert!(parse("(x").is_err());
        assert!(parse("").is_err());
    }
}
