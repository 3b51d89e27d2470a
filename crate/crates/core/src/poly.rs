//! Univariate polynomials with rational coefficients: exact evaluation,
//! Sturm root counting and a Lipschitz-based continuity modulus.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::arith::Rational;
use crate::error::Error;
use crate::expr::parse_formula;

/// Coefficients in ascending order; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(mut ascending: Vec<Rational>) -> Self {
        while ascending.last().is_some_and(Rational::is_zero) {
            ascending.pop();
        }
        Self { coeffs: ascending }
    }

    /// From coefficients listed highest degree first, as written by hand.
    pub fn from_descending(descending: &[Rational]) -> Self {
        Self::new(descending.iter().rev().cloned().collect())
    }

    /// Reads text such as `x^3 - x - 1` in the variable `var`.
    pub fn parse(text: &str, var: &str) -> Result<Self, Error> {
        let f = parse_formula(text, var)?;
        let coeffs = f
            .normal_form()
            .and_then(|nf| nf.as_polynomial())
            .ok_or_else(|| Error::Unsupported(alloc::format!("`{text}` is not a polynomial in {var}")))?;
        Ok(Self::new(coeffs))
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rational::integer(k as u64))
                .collect(),
        )
    }

    fn lead(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    /// Remainder of division by a nonzero polynomial.
    fn rem(&self, d: &Self) -> Self {
        let dl = d.lead().expect("nonzero divisor");
        let dd = d.coeffs.len() - 1;
        let mut r = self.coeffs.clone();
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1;
            let factor = r[k].checked_div(dl).expect("nonzero lead");
            for (i, c) in d.coeffs.iter().enumerate() {
                let idx = k - dd + i;
                r[idx] = &r[idx] - &(&factor * c);
            }
            r.pop();
            while r.last().is_some_and(Rational::is_zero) {
                r.pop();
            }
        }
        Self::new(r)
    }

    fn sturm_chain(&self) -> Vec<Self> {
        let mut chain = alloc::vec![self.clone(), self.derivative()];
        while !chain[chain.len() - 1].is_zero() {
            let n = chain.len();
            let r = chain[n - 2].rem(&chain[n - 1]);
            chain.push(Self::new(r.coeffs.iter().map(|c| -c).collect()));
        }
        chain.pop();
        chain
    }

    fn sign_changes(chain: &[Self], x: &Rational) -> usize {
        let signs: Vec<i32> = chain.iter().map(|p| p.eval(x).signum()).filter(|s| *s != 0).collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Number of distinct real roots in `(a, b]`.
    pub fn count_roots(&self, a: &Rational, b: &Rational) -> usize {
        if self.is_zero() || a >= b {
            return 0;
        }
        let chain = self.sturm_chain();
        Self::sign_changes(&chain, a).saturating_sub(Self::sign_changes(&chain, b))
    }

    /// Bound on `|p'|` over `[lo, hi]`.
    pub fn lipschitz_bound(&self, lo: &Rational, hi: &Rational) -> Rational {
        let r = lo.abs().max(hi.abs());
        let mut acc = Rational::zero();
        let mut rpow = Rational::one();
        for (k, c) in self.coeffs.iter().enumerate().skip(1) {
            acc += &(c.abs() * Rational::integer(k as u64) * &rpow);
            rpow *= &r;
        }
        acc
    }

    /// `delta` with `|p(x) - p(y)| <= 1/q` for `x, y` in `[lo, hi]`, `|x - y| <= delta`.
    pub fn continuity_modulus(&self, lo: &Rational, hi: &Rational, q: u64) -> Rational {
        let l = self.lipschitz_bound(lo, hi) * Rational::integer(q.max(1));
        if l <= Rational::one() {
            Rational::one()
        } else {
            l.recip().expect("positive")
        }
    }

    pub fn display_with(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let a = c.abs();
            let unit = a == Rational::one();
            if k == 0 || !unit {
                if a.is_integer() || k == 0 {
                    out.push_str(&alloc::format!("{a}"));
                } else {
                    out.push_str(&alloc::format!("({a})"));
                }
                if k > 0 {
                    out.push('*');
                }
            }
            match k {
                0 => {}
                1 => out.push_str(var),
                _ => out.push_str(&alloc::format!("{var}^{k}")),
            }
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("x"))
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
    fn parse_and_print() {
        let p = Polynomial::parse("x^3 - x - 1", "x").unwrap();
        assert_eq!(p.coeffs(), [r("-1"), r("-1"), r("0"), r("1")]);
        assert_eq!(p.to_string(), "x^3 - x - 1");
        assert_eq!(Polynomial::parse(&p.to_string(), "x").unwrap(), p);
        let q = Polynomial::from_descending(&[r("1/2"), r("0"), r("-2")]);
        assert_eq!(q.to_string(), "(1/2)*x^2 - 2");
        assert_eq!(Polynomial::parse(&q.to_string(), "x").unwrap(), q);
        assert!(Polynomial::parse("1/x", "x").is_err());
    }

    #[test]
    fn sturm_counts() {
        let p = Polynomial::parse("x^2 - 2", "x").unwrap();
        assert_eq!(p.count_roots(&r("1"), &r("2")), 1);
        assert_eq!(p.count_roots(&r("-2"), &r("2")), 2);
        assert_eq!(p.count_roots(&r("2"), &r("3")), 0);
        let sq = Polynomial::parse("x^2 - 4", "x").unwrap();
        // right end included
        assert_eq!(sq.count_roots(&r("1"), &r("2")), 1);
        assert_eq!(sq.count_roots(&r("2"), &r("3")), 0);
        let triple = Polynomial::parse("(x - 1)^3*(x + 1)", "x").unwrap();
        assert_eq!(triple.count_roots(&r("-5"), &r("5")), 2);
    }

    #[test]
    fn continuity_modulus_is_sound_on_probes() {
        let p = Polynomial::parse("x^3 - x - 1", "x").unwrap();
        let (lo, hi) = (r("1"), r("2"));
        for q in [1u64, 10, 1000] {
            let d = p.continuity_modulus(&lo, &hi, q);
            for i in 0..20 {
                let x = &lo + &(Rational::ratio(i, 20) * (&hi - &lo - &d));
                let y = &x + &d;
                assert!((p.eval(&x) - p.eval(&y)).abs() <= Rational::new(1, q).unwrap());
            }
        }
    }
}
