//! Recursive-descent parser for the expression language.
//!
//! ```text
//! expr    := term (("+"|"-") term)*
//! term    := factor (("*"|"/") factor)*
//! factor  := rational | "(" expr ")" | "sum" "(" ident "," formula ")"
//!          | "prod" "(" ident "," formula ")" | "-" factor
//! rational:= int ("/" posint)?
//! ```
//!
//! Formulas use ordinary precedence (`^` > unary `-` > `*` `/` > `+` `-`),
//! so `3/4^n` means `3/(4^n)`.

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::{BinOp, Exponent, Expression, Formula};
use crate::arith::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset into the input.
    pub position: usize,
    pub kind: ParseErrorKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    UnexpectedToken { found: String, expected: &'static str },
    UnexpectedEnd { expected: &'static str },
    UnboundIdentifier(String),
    /// A divisor in a term formula could not be shown nonzero for all n >= 1.
    ZeroDenominator(String),
    InvalidExponent(String),
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at offset {}: ", self.position)?;
        match &self.kind {
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character `{c}`"),
            ParseErrorKind::UnexpectedToken { found, expected } => {
                write!(f, "expected {expected}, found `{found}`")
            }
            ParseErrorKind::UnexpectedEnd { expected } => {
                write!(f, "expected {expected}, found end of input")
            }
            ParseErrorKind::UnboundIdentifier(name) => write!(f, "unbound identifier `{name}`"),
            ParseErrorKind::ZeroDenominator(d) => {
                write!(f, "divisor `{d}` may vanish for some n >= 1")
            }
            ParseErrorKind::InvalidExponent(why) => write!(f, "invalid exponent: {why}"),
        }
    }
}

impl core::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(i) => write!(f, "{i}"),
            Tok::Ident(s) => f.write_str(s),
            Tok::Plus => f.write_str("+"),
            Tok::Minus => f.write_str("-"),
            Tok::Star => f.write_str("*"),
            Tok::Slash => f.write_str("/"),
            Tok::Caret => f.write_str("^"),
            Tok::LParen => f.write_str("("),
            Tok::RParen => f.write_str(")"),
            Tok::Comma => f.write_str(","),
        }
    }
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let tok = if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            Tok::Int(src[start..i].parse().expect("digits"))
        } else if c.is_ascii_alphabetic() || c == '_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            Tok::Ident(src[start..i].to_string())
        } else {
            i += 1;
            match c {
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '/' => Tok::Slash,
                '^' => Tok::Caret,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ',' => Tok::Comma,
                _ => {
                    let ch = src[start..].chars().next().unwrap_or(c);
                    return Err(ParseError {
                        position: start,
                        kind: ParseErrorKind::UnexpectedChar(ch),
                    });
                }
            }
        };
        out.push((start, tok));
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn new(src: &str) -> PResult<Self> {
        Ok(Self {
            toks: tokenize(src)?,
            pos: 0,
            end: src.len(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn error(&self, expected: &'static str) -> ParseError {
        match self.peek() {
            Some(t) => ParseError {
                position: self.offset(),
                kind: ParseErrorKind::UnexpectedToken {
                    found: t.to_string(),
                    expected,
                },
            },
            None => ParseError {
                position: self.end,
                kind: ParseErrorKind::UnexpectedEnd { expected },
            },
        }
    }

    fn expect(&mut self, tok: Tok, expected: &'static str) -> PResult<()> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(expected))
        }
    }

    fn finish(&self) -> PResult<()> {
        if self.pos < self.toks.len() {
            Err(self.error("end of input"))
        } else {
            Ok(())
        }
    }

    // ---- expressions ----

    fn expr(&mut self) -> PResult<Expression> {
        let mut acc = self.term()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Plus) => BinOp::Add,
                Some(Tok::Minus) => BinOp::Sub,
                _ => return Ok(acc),
            };
            self.pos += 1;
            let rhs = self.term()?;
            acc = Expression::binop(op, acc, rhs);
        }
    }

    fn term(&mut self) -> PResult<Expression> {
        let mut acc = self.factor()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Star) => BinOp::Mul,
                Some(Tok::Slash) => BinOp::Div,
                _ => return Ok(acc),
            };
            self.pos += 1;
            let rhs = self.factor()?;
            acc = Expression::binop(op, acc, rhs);
        }
    }

    fn factor(&mut self) -> PResult<Expression> {
        let at = self.offset();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                // greedy `int / posint` literal
                if let (Some(Tok::Slash), Some(Tok::Int(d))) = (self.peek(), self.peek_at(1)) {
                    let d = d.clone();
                    let d_at = self.toks[self.pos + 1].0;
                    self.pos += 2;
                    if d.is_zero() {
                        return Err(ParseError {
                            position: d_at,
                            kind: ParseErrorKind::ZeroDenominator("0".into()),
                        });
                    }
                    return Ok(Expression::Literal(Rational::new(n, d).expect("nonzero")));
                }
                Ok(Expression::Literal(Rational::integer(n)))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Some(Tok::Minus) => {
                self.pos += 1;
                let inner = self.factor()?;
                Ok(match inner {
                    Expression::Literal(r) => Expression::Literal(-r),
                    other => Expression::binop(BinOp::Mul, Expression::Literal(Rational::integer(-1)), other),
                })
            }
            Some(Tok::Ident(name)) if name == "sum" || name == "prod" => {
                self.pos += 1;
                self.expect(Tok::LParen, "`(`")?;
                let var = match self.bump() {
                    Some(Tok::Ident(v)) => v,
                    _ => {
                        self.pos -= 1;
                        return Err(self.error("index identifier"));
                    }
                };
                self.expect(Tok::Comma, "`,`")?;
                let f = self.formula(&var)?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(if name == "sum" {
                    Expression::SeriesInf(f)
                } else {
                    Expression::ProductInf(f)
                })
            }
            Some(Tok::Ident(name)) => Err(ParseError {
                position: at,
                kind: ParseErrorKind::UnboundIdentifier(name),
            }),
            _ => Err(self.error("number, `(`, `-`, `sum` or `prod`")),
        }
    }

    // ---- formulas ----

    fn formula(&mut self, var: &str) -> PResult<Formula> {
        let mut acc = self.f_term(var)?;
        loop {
            let add = match self.peek() {
                Some(Tok::Plus) => true,
                Some(Tok::Minus) => false,
                _ => return Ok(acc),
            };
            self.pos += 1;
            let rhs = self.f_term(var)?;
            acc = fold(if add {
                Formula::Add(Box::new(acc), Box::new(rhs))
            } else {
                Formula::Sub(Box::new(acc), Box::new(rhs))
            });
        }
    }

    fn f_term(&mut self, var: &str) -> PResult<Formula> {
        let mut acc = self.f_unary(var)?;
        loop {
            let mul = match self.peek() {
                Some(Tok::Star) => true,
                Some(Tok::Slash) => false,
                _ => return Ok(acc),
            };
            self.pos += 1;
            let at = self.offset();
            let rhs = self.f_unary(var)?;
            if !mul {
                self.check_nonzero(&rhs, at)?;
            }
            acc = fold(if mul {
                Formula::Mul(Box::new(acc), Box::new(rhs))
            } else {
                Formula::Div(Box::new(acc), Box::new(rhs))
            });
        }
    }

    fn f_unary(&mut self, var: &str) -> PResult<Formula> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            let inner = self.f_unary(var)?;
            return Ok(fold(Formula::Neg(Box::new(inner))));
        }
        self.f_pow(var)
    }

    fn f_pow(&mut self, var: &str) -> PResult<Formula> {
        let base_at = self.offset();
        let base = self.f_atom(var)?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let exp_at = self.offset();
        let exp = self.exponent(var)?;
        let bad = |why: &str| ParseError {
            position: exp_at,
            kind: ParseErrorKind::InvalidExponent(why.to_string()),
        };
        match exp {
            Exponent::Index(_) => match &base {
                Formula::Const(b) if !b.is_zero() => {}
                Formula::Const(_) => return Err(bad("zero base with an index exponent")),
                _ => return Err(bad("index exponents need a constant base")),
            },
            Exponent::Const(k) if k < 0 => self.check_nonzero(&base, base_at)?,
            Exponent::Const(_) => {}
        }
        Ok(fold(Formula::Pow(Box::new(base), exp)))
    }

    fn f_atom(&mut self, var: &str) -> PResult<Formula> {
        let at = self.offset();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(Formula::Const(Rational::integer(n)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if name == var {
                    Ok(Formula::Index)
                } else {
                    Err(ParseError {
                        position: at,
                        kind: ParseErrorKind::UnboundIdentifier(name),
                    })
                }
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let f = self.formula(var)?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            _ => Err(self.error("number, index variable or `(`")),
        }
    }

    /// `int` | ident | `(` [-]int `)` | `(` ident (+|-) int `)` | `(` ident `)`
    fn exponent(&mut self, var: &str) -> PResult<Exponent> {
        let small = |n: &BigInt, p: &Self| {
            n.to_i64().ok_or_else(|| ParseError {
                position: p.offset(),
                kind: ParseErrorKind::InvalidExponent("exponent too large".into()),
            })
        };
        let ident = |name: String, at: usize| {
            if name == var {
                Ok(())
            } else {
                Err(ParseError {
                    position: at,
                    kind: ParseErrorKind::UnboundIdentifier(name),
                })
            }
        };
        let at = self.offset();
        match self.bump() {
            Some(Tok::Int(n)) => Ok(Exponent::Const(small(&n, self)?)),
            Some(Tok::Ident(name)) => {
                ident(name, at)?;
                Ok(Exponent::Index(0))
            }
            Some(Tok::LParen) => {
                let inner_at = self.offset();
                let e = match self.bump() {
                    Some(Tok::Int(n)) => Exponent::Const(small(&n, self)?),
                    Some(Tok::Minus) => match self.bump() {
                        Some(Tok::Int(n)) => Exponent::Const(-small(&n, self)?),
                        _ => {
                            self.pos -= 1;
                            return Err(self.error("integer"));
                        }
                    },
                    Some(Tok::Ident(name)) => {
                        ident(name, inner_at)?;
                        match self.peek() {
                            Some(Tok::Plus) | Some(Tok::Minus) => {
                                let sign = if self.bump() == Some(Tok::Plus) { 1 } else { -1 };
                                match self.bump() {
                                    Some(Tok::Int(n)) => Exponent::Index(sign * small(&n, self)?),
                                    _ => {
                                        self.pos -= 1;
                                        return Err(self.error("integer offset"));
                                    }
                                }
                            }
                            _ => Exponent::Index(0),
                        }
                    }
                    _ => {
                        self.pos -= 1;
                        return Err(self.error("exponent"));
                    }
                };
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            _ => {
                self.pos -= 1;
                Err(self.error("exponent"))
            }
        }
    }

    fn check_nonzero(&self, divisor: &Formula, at: usize) -> PResult<()> {
        let ok = match divisor {
            Formula::Const(c) => !c.is_zero(),
            other => other
                .normal_form()
                .is_some_and(|p| p.never_zero_on_positive_integers()),
        };
        if ok {
            Ok(())
        } else {
            Err(ParseError {
                position: at,
                kind: ParseErrorKind::ZeroDenominator(divisor.to_string()),
            })
        }
    }
}

/// Folds constant-only nodes so parsed formulas are canonical.
fn fold(f: Formula) -> Formula {
    let c = |x: &Formula| match x {
        Formula::Const(c) => Some(c.clone()),
        _ => None,
    };
    let folded = match &f {
        Formula::Neg(a) => c(a).map(|a| -a),
        Formula::Add(a, b) => c(a).zip(c(b)).map(|(a, b)| a + b),
        Formula::Sub(a, b) => c(a).zip(c(b)).map(|(a, b)| a - b),
        Formula::Mul(a, b) => c(a).zip(c(b)).map(|(a, b)| a * b),
        Formula::Div(a, b) => c(a).zip(c(b)).and_then(|(a, b)| a.checked_div(&b).ok()),
        Formula::Pow(a, Exponent::Const(k)) => c(a).and_then(|a| a.pow(*k).ok()),
        _ => None,
    };
    folded.map_or(f, Formula::Const)
}

/// Parses an infinite number expression.
pub fn parse(text: &str) -> Result<Expression, ParseError> {
    let mut p = Parser::new(text)?;
    let e = p.expr()?;
    p.finish()?;
    Ok(e)
}

/// Parses a stand-alone term formula with bound variable `var`.
pub fn parse_formula(text: &str, var: &str) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text)?;
    let f = p.formula(var)?;
    p.finish()?;
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn example_expressions_parse() {
        assert_eq!(parse("sum(n, n)").unwrap(), Expression::SeriesInf(Formula::Index));
        let b = parse("sum(n, (-1)^(n+1) / 2^n)").unwrap();
        match &b {
            Expression::SeriesInf(t) => {
                assert_eq!(t.eval(1).unwrap(), r("1/2"));
                assert_eq!(t.eval(2).unwrap(), r("-1/4"));
                assert_eq!(t.eval(3).unwrap(), r("1/8"));
            }
            other => panic!("{other:?}"),
        }
        let d = parse("3 + 5/sum(n, 1)").unwrap();
        assert_eq!(
            d,
            Expression::binop(
                BinOp::Add,
                Expression::Literal(r("3")),
                Expression::binop(
                    BinOp::Div,
                    Expression::Literal(r("5")),
                    Expression::SeriesInf(Formula::Const(r("1")))
                )
            )
        );
    }

    #[test]
    fn alpha_equivalent_index_names() {
        assert_eq!(parse("sum(k, 1/k^2)").unwrap(), parse("sum(n, 1/n^2)").unwrap());
    }

    #[test]
    fn literals_are_greedy_in_expressions() {
        assert_eq!(parse("-2/3").unwrap(), Expression::Literal(r("-2/3")));
        assert_eq!(parse("4/6").unwrap(), Expression::Literal(r("2/3")));
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse("1 + ").unwrap_err();
        assert_eq!(e.position, 4);
        assert!(matches!(e.kind, ParseErrorKind::UnexpectedEnd { .. }));

        let e = parse("sum(n, 1/(n - 2))").unwrap_err();
        assert_eq!(e.position, 9);
        assert!(matches!(e.kind, ParseErrorKind::ZeroDenominator(_)));

        let e = parse("sum(n, k)").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnboundIdentifier("k".into()));
        let e = parse("x + 1").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnboundIdentifier("x".into()));

        assert!(matches!(parse("1/0").unwrap_err().kind, ParseErrorKind::ZeroDenominator(_)));
        assert!(matches!(parse("2 $ 3").unwrap_err().kind, ParseErrorKind::UnexpectedChar('$')));
        assert!(matches!(parse("sum(n, n^n)").unwrap_err().kind, ParseErrorKind::InvalidExponent(_)));
        assert!(parse("(1 + 2").is_err());
        assert!(parse("1 2").is_err());
    }

    #[test]
    fn accepted_divisors() {
        assert!(parse("sum(n, 1/(n*(n+1)))").is_ok());
        assert!(parse("sum(n, n^(-2))").is_ok());
        assert!(parse("sum(n, 1/(n^2 + 1))").is_ok());
        assert!(parse("sum(n, 1/(2^n - 1))").is_err());
    }

    #[test]
    fn constant_folding() {
        assert_eq!(parse_formula("(1/2)^3 + 1", "n").unwrap(), Formula::Const(r("9/8")));
        assert_eq!(parse_formula("-(2)", "n").unwrap(), Formula::Const(r("-2")));
    }
}
