//! Infinite number expressions: AST, canonical printer and parser.
//!
//! An [`Expression`] is a finite tree whose leaves are rational literals or
//! infinite sums/products `sum(n, t(n))` / `prod(n, t(n))` over a closed-form
//! [`Formula`] in the index `n >= 1`.

mod normal;
mod parser;

use alloc::boxed::Box;
use alloc::string::String;
use core::fmt;

use crate::arith::Rational;
use crate::error::Error;

pub use normal::{ExpPoly, ExpTerm};
pub(crate) use normal::polynomial_lower_bound;
pub use parser::{parse, parse_formula, ParseError, ParseErrorKind};

/// Exponent of a power node: a fixed integer or `n + offset`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Exponent {
    Const(i64),
    Index(i64),
}

impl Exponent {
    fn value_at(&self, n: u64) -> i64 {
        match self {
            Exponent::Const(k) => *k,
            Exponent::Index(off) => n as i64 + off,
        }
    }
}

/// Closed-form general term over the index variable.
///
/// Constant-only subtrees are folded by the parser, so a parsed formula
/// never contains e.g. `Div(Const(1), Const(2))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Const(Rational),
    Index,
    Neg(Box<Formula>),
    Add(Box<Formula>, Box<Formula>),
    Sub(Box<Formula>, Box<Formula>),
    Mul(Box<Formula>, Box<Formula>),
    Div(Box<Formula>, Box<Formula>),
    Pow(Box<Formula>, Exponent),
}

impl Formula {
    pub fn constant(c: Rational) -> Self {
        Formula::Const(c)
    }

    /// Exact value at index `n`.
    pub fn eval(&self, n: u64) -> Result<Rational, Error> {
        Ok(match self {
            Formula::Const(c) => c.clone(),
            Formula::Index => Rational::integer(n),
            Formula::Neg(a) => -a.eval(n)?,
            Formula::Add(a, b) => a.eval(n)? + b.eval(n)?,
            Formula::Sub(a, b) => a.eval(n)? - b.eval(n)?,
            Formula::Mul(a, b) => a.eval(n)? * b.eval(n)?,
            Formula::Div(a, b) => a.eval(n)?.checked_div(&b.eval(n)?)?,
            Formula::Pow(base, e) => base.eval(n)?.pow(e.value_at(n))?,
        })
    }

    /// Value at a rational point; used when a formula is read as a polynomial in `x`.
    pub fn eval_at(&self, x: &Rational) -> Result<Rational, Error> {
        Ok(match self {
            Formula::Const(c) => c.clone(),
            Formula::Index => x.clone(),
            Formula::Neg(a) => -a.eval_at(x)?,
            Formula::Add(a, b) => a.eval_at(x)? + b.eval_at(x)?,
            Formula::Sub(a, b) => a.eval_at(x)? - b.eval_at(x)?,
            Formula::Mul(a, b) => a.eval_at(x)? * b.eval_at(x)?,
            Formula::Div(a, b) => a.eval_at(x)?.checked_div(&b.eval_at(x)?)?,
            Formula::Pow(base, Exponent::Const(k)) => base.eval_at(x)?.pow(*k)?,
            Formula::Pow(_, Exponent::Index(_)) => {
                return Err(Error::Unsupported("index exponent at a rational point".into()))
            }
        })
    }

    pub fn depends_on_index(&self) -> bool {
        match self {
            Formula::Const(_) => false,
            Formula::Index => true,
            Formula::Neg(a) => a.depends_on_index(),
            Formula::Add(a, b) | Formula::Sub(a, b) | Formula::Mul(a, b) | Formula::Div(a, b) => {
                a.depends_on_index() || b.depends_on_index()
            }
            Formula::Pow(base, e) => base.depends_on_index() || matches!(e, Exponent::Index(_)),
        }
    }

    /// Exponential-polynomial normal form, when the formula has one.
    pub fn normal_form(&self) -> Option<ExpPoly> {
        normal::normal_form(self)
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Add(..) | Formula::Sub(..) => 1,
            Formula::Mul(..) | Formula::Div(..) => 2,
            Formula::Neg(_) => 3,
            Formula::Pow(..) => 4,
            Formula::Const(c) if c.is_negative() || !c.is_integer() => 0,
            Formula::Const(_) | Formula::Index => 5,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, var: &str, min: u8) -> fmt::Result {
        let p = self.precedence();
        let paren = p < min;
        if paren {
            f.write_str("(")?;
        }
        match self {
            Formula::Const(c) => write!(f, "{c}")?,
            Formula::Index => f.write_str(var)?,
            Formula::Neg(a) => {
                f.write_str("-")?;
                a.fmt_prec(f, var, 4)?;
            }
            Formula::Add(a, b) | Formula::Sub(a, b) => {
                a.fmt_prec(f, var, 1)?;
                f.write_str(if matches!(self, Formula::Add(..)) { " + " } else { " - " })?;
                b.fmt_prec(f, var, 2)?;
            }
            Formula::Mul(a, b) | Formula::Div(a, b) => {
                a.fmt_prec(f, var, 2)?;
                f.write_str(if matches!(self, Formula::Mul(..)) { "*" } else { "/" })?;
                b.fmt_prec(f, var, 3)?;
            }
            Formula::Pow(base, e) => {
                base.fmt_prec(f, var, 5)?;
                f.write_str("^")?;
                match e {
                    Exponent::Const(k) if *k >= 0 => write!(f, "{k}")?,
                    Exponent::Const(k) => write!(f, "({k})")?,
                    Exponent::Index(0) => f.write_str(var)?,
                    Exponent::Index(k) if *k > 0 => write!(f, "({var}+{k})")?,
                    Exponent::Index(k) => write!(f, "({var}-{})", k.unsigned_abs())?,
                }
            }
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }

    /// Renders with `var` as the bound variable name.
    pub fn display_with<'a>(&'a self, var: &'a str) -> impl fmt::Display + 'a {
        struct D<'a>(&'a Formula, &'a str);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                self.0.fmt_prec(f, self.1, 1)
            }
        }
        D(self, var)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, "n", 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => " + ",
            BinOp::Sub => " - ",
            BinOp::Mul => "*",
            BinOp::Div => "/",
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expression {
    Literal(Rational),
    /// `sum(n, t(n))`, summed over n >= 1 "in inf."
    SeriesInf(Formula),
    /// `prod(n, t(n))`, multiplied over n >= 1 "in inf."
    ProductInf(Formula),
    BinOp(BinOp, Box<Expression>, Box<Expression>),
}

impl Expression {
    pub fn literal(r: Rational) -> Self {
        Expression::Literal(r)
    }

    pub fn binop(op: BinOp, a: Expression, b: Expression) -> Self {
        Expression::BinOp(op, Box::new(a), Box::new(b))
    }

    /// Canonical text; `parse` of this string gives back an identical tree.
    pub fn pretty(&self) -> String {
        alloc::format!("{self}")
    }

    fn precedence(&self) -> u8 {
        match self {
            Expression::BinOp(op, ..) => op.precedence(),
            Expression::Literal(r) if r.is_negative() => 0,
            _ => 3,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let paren = self.precedence() < min;
        if paren {
            f.write_str("(")?;
        }
        match self {
            Expression::Literal(r) => write!(f, "{r}")?,
            Expression::SeriesInf(t) => write!(f, "sum(n, {t})")?,
            Expression::ProductInf(t) => write!(f, "prod(n, {t})")?,
            Expression::BinOp(op, a, b) => {
                a.fmt_prec(f, op.precedence())?;
                f.write_str(op.symbol())?;
                // `a/2` would re-read as the literal 1/2 when `a` ends in an integer
                let right_min = match (op, &**b) {
                    (BinOp::Div, Expression::Literal(_)) => 4,
                    _ => op.precedence() + 1,
                };
                b.fmt_prec(f, right_min)?;
            }
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

impl core::str::FromStr for Expression {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        parse(s).map_err(Error::Parse)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn pretty_print_examples() {
        let one = Formula::Const(Rational::one());
        assert_eq!(Expression::SeriesInf(one.clone()).pretty(), "sum(n, 1)");
        assert_eq!(Expression::Literal(r("-2/3")).pretty(), "-2/3");
        let c = Formula::Sub(
            Box::new(one.clone()),
            Box::new(Formula::Div(
                Box::new(one),
                Box::new(Formula::Pow(Box::new(Formula::Const(r("2"))), Exponent::Index(0))),
            )),
        );
        assert_eq!(Expression::ProductInf(c).pretty(), "prod(n, 1 - 1/2^n)");
    }

    #[test]
    fn formula_evaluation() {
        let b = parse_formula("(-1)^(n+1) / 2^n", "n").unwrap();
        assert_eq!(b.eval(1).unwrap(), r("1/2"));
        assert_eq!(b.eval(2).unwrap(), r("-1/4"));
        assert_eq!(b.eval(3).unwrap(), r("1/8"));
        assert_eq!(b.to_string(), "(-1)^(n+1)/2^n");
    }

    #[test]
    fn awkward_literals_round_trip() {
        let e = Expression::binop(
            BinOp::Div,
            Expression::binop(BinOp::Mul, Expression::SeriesInf(Formula::Index), Expression::Literal(r("3"))),
            Expression::Literal(r("2")),
        );
        assert_eq!(parse(&e.pretty()).unwrap(), e);
        let e = Expression::binop(BinOp::Sub, Expression::Literal(r("3")), Expression::Literal(r("-2/3")));
        assert_eq!(e.pretty(), "3 - (-2/3)");
        assert_eq!(parse(&e.pretty()).unwrap(), e);
    }
}
