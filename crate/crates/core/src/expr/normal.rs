//! Exponential-polynomial normal form `sum_j c_j * n^k_j * b_j^n` of a term
//! formula. Certification rules recognise term shapes through it, and the
//! parser uses it to prove divisors never vanish for `n >= 1`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::{One, ToPrimitive};

use super::{Exponent, Formula};
use crate::arith::Rational;

/// One term `coeff * n^power * base^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpTerm {
    pub coeff: Rational,
    pub power: i64,
    pub base: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ExpPoly {
    terms: BTreeMap<(i64, Rational), Rational>,
}

impl ExpPoly {
    pub fn constant(c: Rational) -> Self {
        Self::term(c, 0, Rational::one())
    }

    pub fn term(coeff: Rational, power: i64, base: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert((power, base), coeff);
        }
        Self { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> Vec<ExpTerm> {
        self.terms
            .iter()
            .map(|((power, base), coeff)| ExpTerm {
                coeff: coeff.clone(),
                power: *power,
                base: base.clone(),
            })
            .collect()
    }

    /// The single term, if there is exactly one.
    pub fn single(&self) -> Option<ExpTerm> {
        if self.terms.len() == 1 {
            self.terms().pop()
        } else {
            None
        }
    }

    pub fn eval(&self, n: u64) -> Rational {
        let nr = Rational::integer(n);
        self.terms
            .iter()
            .map(|((power, base), coeff)| {
                coeff * nr.pow(*power).expect("n >= 1") * base.pow(n as i64).expect("nonzero base")
            })
            .fold(Rational::zero(), |acc, t| acc + t)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (k, c) in &other.terms {
            let entry = terms.entry(k.clone()).or_insert_with(Rational::zero);
            *entry = &*entry + c;
            if entry.is_zero() {
                terms.remove(k);
            }
        }
        Self { terms }
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut acc = Self::default();
        for ((p1, b1), c1) in &self.terms {
            for ((p2, b2), c2) in &other.terms {
                acc = acc.add(&Self::term(c1 * c2, p1 + p2, b1 * b2));
            }
        }
        acc
    }

    fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(Rational::one());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exact quotient by a single nonzero term.
    fn div_single(&self, t: &ExpTerm) -> Option<Self> {
        let inv_c = t.coeff.recip().ok()?;
        let inv_b = t.base.recip().ok()?;
        Some(self.mul(&Self::term(inv_c, -t.power, inv_b)))
    }

    /// Plain polynomial coefficients (ascending) when every base is 1 and
    /// every power is non-negative.
    pub fn as_polynomial(&self) -> Option<Vec<Rational>> {
        let mut coeffs: Vec<Rational> = Vec::new();
        for ((power, base), c) in &self.terms {
            if !base.is_one_value() || *power < 0 {
                return None;
            }
            let idx = *power as usize;
            if coeffs.len() <= idx {
                coeffs.resize(idx + 1, Rational::zero());
            }
            coeffs[idx] = c.clone();
        }
        Some(coeffs)
    }

    /// True when the formula provably has no zero at any integer `n >= 1`.
    pub fn never_zero_on_positive_integers(&self) -> bool {
        if self.terms.is_empty() {
            return false;
        }
        if self.terms.len() == 1 {
            return true;
        }
        // Same base everywhere: strip base^n and the lowest power of n.
        let mut bases = self.terms.keys().map(|(_, b)| b);
        let first = bases.next().expect("nonempty");
        if bases.any(|b| b != first) {
            return false;
        }
        let min_power = self.terms.keys().map(|(p, _)| *p).min().expect("nonempty");
        let mut coeffs: Vec<Rational> = Vec::new();
        for ((p, _), c) in &self.terms {
            let idx = (p - min_power) as usize;
            if coeffs.len() <= idx {
                coeffs.resize(idx + 1, Rational::zero());
            }
            coeffs[idx] = c.clone();
        }
        !has_positive_integer_root(&coeffs)
    }
}

trait IsOne {
    fn is_one_value(&self) -> bool;
}

impl IsOne for Rational {
    fn is_one_value(&self) -> bool {
        self.numer().is_one() && self.denom().is_one()
    }
}

/// Positive integer roots are bounded by 1 + max|a_i / a_d|; past a
/// search cap the answer is conservatively "may have a root".
fn has_positive_integer_root(coeffs: &[Rational]) -> bool {
    const CAP: u64 = 1_000_000;
    let lead = coeffs.last().expect("nonempty");
    let bound = coeffs[..coeffs.len() - 1]
        .iter()
        .map(|c| (c.checked_div(lead).expect("leading coefficient nonzero")).abs())
        .fold(Rational::zero(), Rational::max)
        + Rational::one();
    let bound = match bound.ceil().to_u64() {
        Some(b) if b <= CAP => b,
        _ => return true,
    };
    (1..=bound).any(|n| {
        let nr = Rational::integer(n);
        let mut acc = Rational::zero();
        for c in coeffs.iter().rev() {
            acc = acc * &nr + c;
        }
        acc.is_zero()
    })
}

pub(super) fn normal_form(f: &Formula) -> Option<ExpPoly> {
    Some(match f {
        Formula::Const(c) => ExpPoly::constant(c.clone()),
        Formula::Index => ExpPoly::term(Rational::one(), 1, Rational::one()),
        Formula::Neg(a) => normal_form(a)?.neg(),
        Formula::Add(a, b) => normal_form(a)?.add(&normal_form(b)?),
        Formula::Sub(a, b) => normal_form(a)?.add(&normal_form(b)?.neg()),
        Formula::Mul(a, b) => normal_form(a)?.mul(&normal_form(b)?),
        Formula::Div(a, b) => {
            let d = normal_form(b)?.single()?;
            normal_form(a)?.div_single(&d)?
        }
        Formula::Pow(base, Exponent::Const(k)) => {
            let nb = normal_form(base)?;
            let e = u32::try_from(k.unsigned_abs()).ok()?;
            if *k >= 0 {
                nb.pow(e)
            } else {
                let t = nb.single()?;
                ExpPoly::constant(Rational::one()).div_single(&t)?.pow(e)
            }
        }
        Formula::Pow(base, Exponent::Index(off)) => {
            let b = match &**base {
                Formula::Const(b) if !b.is_zero() => b.clone(),
                _ => return None,
            };
            ExpPoly::term(b.pow(*off).ok()?, 0, b)
        }
    })
}

/// Sign facts about `n -> p(n)` on integers `n >= 1`, for polynomial `p`.
///
/// Substituting `n = m + 1` and finding all coefficients `>= 0` with a
/// positive constant gives `p(n) >= p(1) > 0` for every `n >= 1`.
pub(crate) fn polynomial_lower_bound(coeffs: &[Rational]) -> Option<Rational> {
    let shifted = shift_by_one(coeffs);
    if shifted.iter().all(|c| !c.is_negative()) && shifted.first().is_some_and(|c| c.is_positive()) {
        Some(shifted[0].clone())
    } else {
        None
    }
}

/// Coefficients of `p(m + 1)` from those of `p(n)` (both ascending).
fn shift_by_one(coeffs: &[Rational]) -> Vec<Rational> {
    let mut out = coeffs.to_vec();
    let len = out.len();
    // repeated synthetic division by (m - (-1)) performs the Taylor shift
    for i in 0..len {
        for j in (i..len.saturating_sub(1)).rev() {
            let next = out[j + 1].clone();
            out[j] = &out[j] + &next;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_formula;

    fn nf(s: &str) -> ExpPoly {
        parse_formula(s, "n").unwrap().normal_form().unwrap()
    }

    #[test]
    fn geometric_alternating_term() {
        let t = nf("(-1)^(n+1)/2^n").single().unwrap();
        assert_eq!(t.power, 0);
        assert_eq!(t.base, Rational::ratio(-1, 2));
        assert_eq!(t.coeff, Rational::integer(-1));
    }

    #[test]
    fn normal_form_agrees_with_direct_evaluation() {
        for s in ["n^2 + 3*n - 1", "1 - 1/2^n", "(n+1)^2/n^3", "(-1)^n/n", "2^(n-1)*n", "(1/3)^n - n"] {
            let f = parse_formula(s, "n").unwrap();
            let p = f.normal_form().unwrap();
            for n in 1..12 {
                assert_eq!(p.eval(n), f.eval(n).unwrap(), "{s} at {n}");
            }
        }
    }

    #[test]
    fn taylor_shift() {
        // n^2 - 2n + 2 = (m+1)^2 - 2(m+1) + 2 = m^2 + 1
        let c = [Rational::integer(2), Rational::integer(-2), Rational::integer(1)];
        assert_eq!(shift_by_one(&c), [Rational::integer(1), Rational::zero(), Rational::integer(1)]);
        assert_eq!(polynomial_lower_bound(&c), Some(Rational::one()));
        assert_eq!(polynomial_lower_bound(&[Rational::integer(-1), Rational::integer(1)]), None);
    }

    #[test]
    fn zero_detection() {
        assert!(nf("n + 1").never_zero_on_positive_integers());
        assert!(!nf("n - 3").never_zero_on_positive_integers());
        assert!(nf("n^2 - 2").never_zero_on_positive_integers());
        assert!(!nf("n^2 - 4*n + 3").never_zero_on_positive_integers());
        assert!(nf("2^n").never_zero_on_positive_integers());
        assert!(!nf("2^n - 4").never_zero_on_positive_integers());
    }
}
