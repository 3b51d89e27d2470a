//! Partial-result sequences of infinite number expressions and their
//! convergence or divergence certificates.
//!
//! A certificate is an explicit modulus: a function `q -> N(q)` whose
//! guarantee can be checked exactly on sampled indices. Recognition covers
//! geometric and alternating series, reciprocal powers, constant-sign terms,
//! telescoping products and arithmetic combinations of these; everything else
//! is [`Certificate::Uncertified`].

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use num_traits::ToPrimitive;

use crate::arith::{ceil_root, Rational};
use crate::error::Error;
use crate::expr::{BinOp, ExpPoly, ExpTerm, Expression, Formula};
use crate::limit::{Atom, Limit};

/// Position in a partial-result sequence, starting at 1.
pub type Index = u64;

/// Largest index evaluated by term-by-term summation or multiplication.
pub const ITERATIVE_INDEX_CAP: Index = 20_000;

/// Largest numerator plus denominator size, in bits, of a term-by-term result.
pub const ITERATIVE_BITS_CAP: u64 = 1 << 16;

type Gen = dyn Fn(Index) -> Result<Rational, Error> + Send + Sync;

/// Deterministic generator `n -> S_n`.
#[derive(Clone)]
pub struct PartialResults {
    gen: Arc<Gen>,
    iterative: bool,
    constant: Option<Rational>,
}

impl PartialResults {
    /// A generator whose cost does not grow with `n`.
    pub fn new(f: impl Fn(Index) -> Result<Rational, Error> + Send + Sync + 'static) -> Self {
        Self {
            gen: Arc::new(f),
            iterative: false,
            constant: None,
        }
    }

    /// A generator whose cost grows linearly with `n`; capped at [`ITERATIVE_INDEX_CAP`].
    pub fn iterative(f: impl Fn(Index) -> Result<Rational, Error> + Send + Sync + 'static) -> Self {
        Self {
            gen: Arc::new(f),
            iterative: true,
            constant: None,
        }
    }

    pub fn constant(r: Rational) -> Self {
        let v = r.clone();
        Self {
            gen: Arc::new(move |_| Ok(v.clone())),
            iterative: false,
            constant: Some(r),
        }
    }

    pub fn at(&self, n: Index) -> Result<Rational, Error> {
        if n == 0 {
            return Err(Error::Precondition("indices start at 1".into()));
        }
        if self.iterative && n > ITERATIVE_INDEX_CAP {
            return Err(Error::BudgetExhausted(format!(
                "index {n} exceeds the term-by-term evaluation cap {ITERATIVE_INDEX_CAP}"
            )));
        }
        (self.gen)(n)
    }

    pub fn is_iterative(&self) -> bool {
        self.iterative
    }

    pub fn constant_value(&self) -> Option<&Rational> {
        self.constant.as_ref()
    }

    /// Pointwise combination; division reports the index of a zero divisor.
    pub fn zip(&self, other: &Self, op: BinOp) -> Self {
        if let (Some(a), Some(b)) = (&self.constant, &other.constant) {
            if let Ok(v) = apply(op, a, b, 1) {
                return Self::constant(v);
            }
        }
        let (a, b) = (self.clone(), other.clone());
        Self {
            gen: Arc::new(move |n| apply(op, &a.at(n)?, &b.at(n)?, n)),
            iterative: self.iterative || other.iterative,
            constant: None,
        }
    }

    /// `n -> S_{max(n, from)}`; same limit, defined wherever the tail is.
    pub fn clamp_from(&self, from: Index) -> Self {
        if from <= 1 || self.constant.is_some() {
            return self.clone();
        }
        let a = self.clone();
        Self {
            gen: Arc::new(move |n| a.at(n.max(from))),
            iterative: self.iterative,
            constant: None,
        }
    }
}

fn apply(op: BinOp, a: &Rational, b: &Rational, n: Index) -> Result<Rational, Error> {
    Ok(match op {
        BinOp::Add => a + b,
        BinOp::Sub => a - b,
        BinOp::Mul => a * b,
        BinOp::Div => a
            .checked_div(b)
            .map_err(|_| Error::ZeroPartialResult { index: n })?,
    })
}

impl fmt::Debug for PartialResults {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PartialResults")
            .field("iterative", &self.iterative)
            .field("constant", &self.constant)
            .finish()
    }
}

/// `q -> N(q)`, nondecreasing in `q`, never below 1.
#[derive(Clone)]
pub struct Modulus(Arc<dyn Fn(u64) -> Index + Send + Sync>);

impl Modulus {
    pub fn new(f: impl Fn(u64) -> Index + Send + Sync + 'static) -> Self {
        Modulus(Arc::new(f))
    }

    pub fn constant(n: Index) -> Self {
        Modulus::new(move |_| n)
    }

    pub fn at(&self, q: u64) -> Index {
        (self.0)(q).max(1)
    }

    /// `q -> self(factor * q)`, saturating.
    pub fn scaled(&self, factor: u64) -> Self {
        let m = self.clone();
        Modulus::new(move |q| m.at(q.saturating_mul(factor)))
    }

    pub fn max(&self, other: &Self) -> Self {
        let (a, b) = (self.clone(), other.clone());
        Modulus::new(move |q| a.at(q).max(b.at(q)))
    }

    pub fn at_least(&self, floor: Index) -> Self {
        let a = self.clone();
        Modulus::new(move |q| a.at(q).max(floor))
    }
}

impl fmt::Debug for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Modulus(N(1)={}, N(10)={}, N(1000)={})", self.at(1), self.at(10), self.at(1000))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn flip(self) -> Self {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }

    fn times(self, other: Sign) -> Sign {
        if self == other {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    pub fn of(r: &Rational) -> Option<Sign> {
        match r.signum() {
            1 => Some(Sign::Positive),
            -1 => Some(Sign::Negative),
            _ => None,
        }
    }
}

/// Names of the recognition rules, as reported in certificates.
pub mod rule {
    pub const LITERAL: &str = "literal";
    pub const ZERO_TERMS: &str = "zero-terms";
    pub const GEOMETRIC_TAIL: &str = "geometric-tail";
    pub const ALTERNATING_SERIES: &str = "alternating-series";
    pub const INTEGRAL_TAIL: &str = "integral-tail";
    pub const CONSTANT_SIGN_TERMS: &str = "constant-sign-terms";
    pub const PRODUCT_TELESCOPING: &str = "product-telescoping";
    pub const COMPOSITION: &str = "composition";
    pub const RECIPROCAL_OF_DIVERGENT: &str = "reciprocal-of-divergent";
    pub const DIAGONAL_LIMIT: &str = "diagonal-limit";
    pub const NONE: &str = "none";
}

#[derive(Clone)]
pub enum Certificate {
    /// For all `m, n >= N(q)`: `|S_m - S_n| <= 1/q`. The limit is tracked exactly.
    CauchyModulus {
        modulus: Modulus,
        limit: Limit,
        rule: &'static str,
    },
    /// For all `n >= N(q)`: `|S_n| <= 1/q`. `sign` is the strict sign of
    /// every `S_n` from the given index on, when known.
    VanishesModulus {
        modulus: Modulus,
        sign: Option<(Sign, Index)>,
        rule: &'static str,
    },
    /// For all `n >= N(M)`: `S_n >= M`.
    DivergesAbove { modulus: Modulus, rule: &'static str },
    /// For all `n >= N(M)`: `S_n <= -M`.
    DivergesBelow { modulus: Modulus, rule: &'static str },
    Uncertified,
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::CauchyModulus { .. } => "CauchyModulus",
            Certificate::VanishesModulus { .. } => "VanishesModulus",
            Certificate::DivergesAbove { .. } => "DivergesAbove",
            Certificate::DivergesBelow { .. } => "DivergesBelow",
            Certificate::Uncertified => "Uncertified",
        }
    }

    pub fn rule(&self) -> &'static str {
        match self {
            Certificate::CauchyModulus { rule, .. }
            | Certificate::VanishesModulus { rule, .. }
            | Certificate::DivergesAbove { rule, .. }
            | Certificate::DivergesBelow { rule, .. } => rule,
            Certificate::Uncertified => rule::NONE,
        }
    }

    pub fn modulus(&self) -> Option<&Modulus> {
        match self {
            Certificate::CauchyModulus { modulus, .. }
            | Certificate::VanishesModulus { modulus, .. }
            | Certificate::DivergesAbove { modulus, .. }
            | Certificate::DivergesBelow { modulus, .. } => Some(modulus),
            Certificate::Uncertified => None,
        }
    }

    /// Cauchy modulus and exact limit, for convergent certificates.
    pub fn cauchy(&self) -> Option<(Modulus, Limit)> {
        match self {
            Certificate::CauchyModulus { modulus, limit, .. } => Some((modulus.clone(), limit.clone())),
            Certificate::VanishesModulus { modulus, .. } => Some((modulus.scaled(2), Limit::zero())),
            _ => None,
        }
    }

    /// A vanishing modulus, when one is present or derivable from a zero limit.
    pub fn vanishing(&self) -> Option<Modulus> {
        match self {
            Certificate::VanishesModulus { modulus, .. } => Some(modulus.clone()),
            Certificate::CauchyModulus { modulus, limit, .. } if limit.is_zero() => Some(modulus.clone()),
            _ => None,
        }
    }

    pub fn limit(&self) -> Option<Limit> {
        self.cauchy().map(|(_, l)| l)
    }

    fn negated(&self) -> Certificate {
        match self {
            Certificate::CauchyModulus { modulus, limit, rule } => Certificate::CauchyModulus {
                modulus: modulus.clone(),
                limit: limit.neg(),
                rule,
            },
            Certificate::VanishesModulus { modulus, sign, rule } => Certificate::VanishesModulus {
                modulus: modulus.clone(),
                sign: sign.map(|(s, k)| (s.flip(), k)),
                rule,
            },
            Certificate::DivergesAbove { modulus, rule } => Certificate::DivergesBelow {
                modulus: modulus.clone(),
                rule,
            },
            Certificate::DivergesBelow { modulus, rule } => Certificate::DivergesAbove {
                modulus: modulus.clone(),
                rule,
            },
            Certificate::Uncertified => Certificate::Uncertified,
        }
    }
}

impl fmt::Debug for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Certificate::CauchyModulus { modulus, limit, rule } => f
                .debug_struct("CauchyModulus")
                .field("rule", rule)
                .field("limit", &alloc::format!("{limit}"))
                .field("modulus", modulus)
                .finish(),
            Certificate::VanishesModulus { modulus, sign, rule } => f
                .debug_struct("VanishesModulus")
                .field("rule", rule)
                .field("sign", sign)
                .field("modulus", modulus)
                .finish(),
            Certificate::DivergesAbove { modulus, rule } => {
                f.debug_struct("DivergesAbove").field("rule", rule).field("modulus", modulus).finish()
            }
            Certificate::DivergesBelow { modulus, rule } => {
                f.debug_struct("DivergesBelow").field("rule", rule).field("modulus", modulus).finish()
            }
            Certificate::Uncertified => f.write_str("Uncertified"),
        }
    }
}

/// `|S_n| >= 1/witness_q` and `S_n` has sign `sign` for every `n >= from`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Apartness {
    pub sign: Sign,
    pub witness_q: u64,
    pub from: Index,
}

#[derive(Clone, Debug)]
pub struct CertifiedSequence {
    pub sequence: PartialResults,
    pub certificate: Certificate,
    pub source: Option<Expression>,
}

impl CertifiedSequence {
    pub fn new(sequence: PartialResults, certificate: Certificate) -> Self {
        Self {
            sequence,
            certificate,
            source: None,
        }
    }

    pub fn literal(r: Rational) -> Self {
        Self {
            sequence: PartialResults::constant(r.clone()),
            certificate: Certificate::CauchyModulus {
                modulus: Modulus::constant(1),
                limit: Limit::constant(r.clone()),
                rule: rule::LITERAL,
            },
            source: Some(Expression::Literal(r)),
        }
    }

    pub fn at(&self, n: Index) -> Result<Rational, Error> {
        self.sequence.at(n)
    }

    /// `(from, B)` with `|S_n| <= B` for every `n >= from`.
    pub fn bound(&self) -> Option<(Index, Rational)> {
        if let Some(c) = self.sequence.constant_value() {
            return Some((1, c.abs()));
        }
        match &self.certificate {
            Certificate::VanishesModulus { modulus, .. } => Some((modulus.at(1), Rational::one())),
            Certificate::CauchyModulus { modulus, .. } => {
                let k = modulus.at(1);
                let s = self.sequence.at(k).ok()?;
                Some((k, s.abs() + Rational::one()))
            }
            _ => None,
        }
    }

    /// Searches for a certified separation from zero, trying precisions
    /// `1, 2, 4, ...` up to `max_q`.
    pub fn apartness(&self, max_q: u64) -> Option<Apartness> {
        if let Some(c) = self.sequence.constant_value() {
            let sign = Sign::of(c)?;
            return Some(Apartness {
                sign,
                witness_q: c.abs().recip().ok()?.ceil().to_u64()?.max(1),
                from: 1,
            });
        }
        match &self.certificate {
            Certificate::DivergesAbove { modulus, .. } => Some(Apartness {
                sign: Sign::Positive,
                witness_q: 1,
                from: modulus.at(1),
            }),
            Certificate::DivergesBelow { modulus, .. } => Some(Apartness {
                sign: Sign::Negative,
                witness_q: 1,
                from: modulus.at(1),
            }),
            Certificate::VanishesModulus { .. } | Certificate::Uncertified => None,
            Certificate::CauchyModulus { modulus, limit, .. } => {
                if limit.is_zero() {
                    return None;
                }
                if let Some(l) = limit.as_constant() {
                    // |S_n - L| <= 1/q' <= |L|/2 from N(q') on
                    let q = (Rational::integer(2).checked_div(&l.abs()).ok()?).ceil().to_u64()?.max(1);
                    return Some(Apartness {
                        sign: Sign::of(&l)?,
                        witness_q: q,
                        from: modulus.at(q),
                    });
                }
                let mut q: u64 = 1;
                while q <= max_q {
                    let k = modulus.at(q);
                    if self.sequence.is_iterative() && k > ITERATIVE_INDEX_CAP {
                        return None;
                    }
                    let s = self.sequence.at(k).ok()?;
                    if s.abs() >= Rational::ratio(2, 1) * Rational::new(1, q).ok()? {
                        return Some(Apartness {
                            sign: Sign::of(&s)?,
                            witness_q: q,
                            from: k,
                        });
                    }
                    q = q.checked_mul(2)?;
                }
                None
            }
        }
    }

    pub fn negate(&self) -> Self {
        Self {
            sequence: self
                .sequence
                .zip(&PartialResults::constant(Rational::integer(-1)), BinOp::Mul),
            certificate: self.certificate.negated(),
            source: self.source.as_ref().map(|e| {
                Expression::binop(BinOp::Mul, Expression::Literal(Rational::integer(-1)), e.clone())
            }),
        }
    }

    /// Pointwise combination with a composed certificate.
    /// An iterative Cauchy sequence read at `min(n, N(n))`, so that a
    /// composite evaluated at a large index does not drag it there. Needs a
    /// non-decreasing modulus; the new modulus is `max(q, N(q))`.
    pub fn regularized(&self) -> Self {
        let Certificate::CauchyModulus { modulus, limit, rule } = &self.certificate else {
            return self.clone();
        };
        if !self.sequence.is_iterative() {
            return self.clone();
        }
        let (seq, m) = (self.sequence.clone(), modulus.clone());
        let m2 = modulus.clone();
        Self {
            sequence: PartialResults::new(move |n| seq.at(n.min(m.at(n)))),
            certificate: Certificate::CauchyModulus {
                modulus: Modulus::new(move |q| q.max(m2.at(q))),
                limit: limit.clone(),
                rule,
            },
            source: self.source.clone(),
        }
    }

    pub fn combine(&self, op: BinOp, other: &Self) -> Self {
        let (a, b) = (self.regularized(), other.regularized());
        let sequence = a.sequence.zip(&b.sequence, op);
        let certificate = compose(op, &a, &b);
        let source = match (&self.source, &other.source) {
            (Some(a), Some(b)) => Some(Expression::binop(op, a.clone(), b.clone())),
            _ => None,
        };
        Self {
            sequence,
            certificate,
            source,
        }
    }

    /// Reciprocal of a sequence separated from zero from `apart.from` on.
    /// Earlier indices are replaced by the value at `apart.from`.
    pub fn reciprocal(&self, apart: &Apartness) -> Result<Self, Error> {
        let base = self.sequence.clamp_from(apart.from);
        let sequence = PartialResults::constant(Rational::one()).zip(&base, BinOp::Div);
        let certificate = match &self.certificate {
            Certificate::DivergesAbove { modulus, .. } | Certificate::DivergesBelow { modulus, .. } => {
                reciprocal_of_divergent(&self.certificate, modulus)
            }
            cert => match cert.cauchy() {
                Some((m, limit)) if !limit.is_zero() => {
                    let w2 = apart.witness_q.saturating_mul(apart.witness_q);
                    Certificate::CauchyModulus {
                        modulus: m.scaled(w2).at_least(apart.from),
                        limit: limit.recip(),
                        rule: rule::COMPOSITION,
                    }
                }
                _ => return Err(Error::NoApartness),
            },
        };
        Ok(Self {
            sequence,
            certificate,
            source: None,
        })
    }
}

fn reciprocal_of_divergent(cert: &Certificate, modulus: &Modulus) -> Certificate {
    let sign = match cert {
        Certificate::DivergesAbove { .. } => Sign::Positive,
        _ => Sign::Negative,
    };
    // |S_n| >= q  implies  |1/S_n| <= 1/q
    Certificate::VanishesModulus {
        modulus: modulus.clone(),
        sign: Some((sign, modulus.at(1))),
        rule: rule::RECIPROCAL_OF_DIVERGENT,
    }
}

fn ceil_u64(r: &Rational) -> u64 {
    r.ceil().to_u64().unwrap_or(u64::MAX).max(1)
}

/// Strict eventual sign, when cheaply known.
fn eventual_sign(s: &CertifiedSequence) -> Option<(Sign, Index)> {
    if let Certificate::VanishesModulus { sign, .. } = &s.certificate {
        return *sign;
    }
    s.apartness(1 << 20).map(|a| (a.sign, a.from))
}

/// Rule (f): certificates of pointwise sums, differences, products and quotients.
fn compose(op: BinOp, a: &CertifiedSequence, b: &CertifiedSequence) -> Certificate {
    match op {
        BinOp::Add => compose_add(a, b),
        BinOp::Sub => compose_add(a, &b.negate()),
        BinOp::Mul => compose_mul(a, b),
        BinOp::Div => compose_div(a, b),
    }
}

fn compose_add(a: &CertifiedSequence, b: &CertifiedSequence) -> Certificate {
    use Certificate::*;
    match (&a.certificate, &b.certificate) {
        // opposite divergences can cancel
        (DivergesAbove { .. }, DivergesBelow { .. }) | (DivergesBelow { .. }, DivergesAbove { .. }) => Uncertified,
        (VanishesModulus { modulus: ma, sign: sa, .. }, VanishesModulus { modulus: mb, sign: sb, .. }) => {
            let sign = match (sa, sb) {
                (Some((s1, k1)), Some((s2, k2))) if s1 == s2 => Some((*s1, (*k1).max(*k2))),
                _ => None,
            };
            VanishesModulus {
                modulus: ma.scaled(2).max(&mb.scaled(2)),
                sign,
                rule: rule::COMPOSITION,
            }
        }
        (DivergesAbove { modulus, .. }, _) | (_, DivergesAbove { modulus, .. }) => {
            let other = if matches!(a.certificate, DivergesAbove { .. }) { b } else { a };
            match &other.certificate {
                DivergesAbove { modulus: mo, .. } => {
                    let (m, mo) = (modulus.clone(), mo.clone());
                    DivergesAbove {
                        modulus: Modulus::new(move |big| m.at(big).max(mo.at(0))),
                        rule: rule::COMPOSITION,
                    }
                }
                c if c.cauchy().is_some() => match other.bound() {
                    Some((k, bound)) => {
                        let extra = ceil_u64(&bound);
                        DivergesAbove {
                            modulus: {
                                let m = modulus.clone();
                                Modulus::new(move |big| m.at(big.saturating_add(extra)).max(k))
                            },
                            rule: rule::COMPOSITION,
                        }
                    }
                    None => Uncertified,
                },
                _ => Uncertified,
            }
        }
        (DivergesBelow { .. }, _) | (_, DivergesBelow { .. }) => {
            // mirror through negation
            match compose_add(&a.negate(), &b.negate()) {
                DivergesAbove { modulus, rule } => DivergesBelow { modulus, rule },
                _ => Uncertified,
            }
        }
        (ca, cb) => match (ca.cauchy(), cb.cauchy()) {
            (Some((ma, la)), Some((mb, lb))) => CauchyModulus {
                modulus: ma.scaled(2).max(&mb.scaled(2)),
                limit: la.add(&lb),
                rule: rule::COMPOSITION,
            },
            _ => Uncertified,
        },
    }
}

fn compose_mul(a: &CertifiedSequence, b: &CertifiedSequence) -> Certificate {
    use Certificate::*;
    let diverging = |c: &Certificate| matches!(c, DivergesAbove { .. } | DivergesBelow { .. });
    match (diverging(&a.certificate), diverging(&b.certificate)) {
        (true, true) => {
            let (ma, mb) = (a.certificate.modulus().unwrap().clone(), b.certificate.modulus().unwrap().clone());
            let modulus = Modulus::new(move |big| ma.at(big).max(mb.at(1)));
            let same = matches!(
                (&a.certificate, &b.certificate),
                (DivergesAbove { .. }, DivergesAbove { .. }) | (DivergesBelow { .. }, DivergesBelow { .. })
            );
            if same {
                DivergesAbove { modulus, rule: rule::COMPOSITION }
            } else {
                DivergesBelow { modulus, rule: rule::COMPOSITION }
            }
        }
        (true, false) | (false, true) => {
            let (div, conv) = if diverging(&a.certificate) { (a, b) } else { (b, a) };
            if conv.certificate.cauchy().is_none() {
                return Uncertified;
            }
            let Some(apart) = conv.apartness(1 << 20) else {
                return Uncertified;
            };
            let md = div.certificate.modulus().unwrap().clone();
            let w = apart.witness_q;
            let from = apart.from;
            let modulus = Modulus::new(move |big| md.at(big.saturating_mul(w)).max(from));
            let up = matches!(div.certificate, DivergesAbove { .. }) == (apart.sign == Sign::Positive);
            if up {
                DivergesAbove { modulus, rule: rule::COMPOSITION }
            } else {
                DivergesBelow { modulus, rule: rule::COMPOSITION }
            }
        }
        (false, false) => {
            let (Some((ma, la)), Some((mb, lb))) = (a.certificate.cauchy(), b.certificate.cauchy()) else {
                return Uncertified;
            };
            // vanishing times bounded is vanishing
            for (v, other) in [(a, b), (b, a)] {
                if let Certificate::VanishesModulus { modulus: mv, sign, .. } = &v.certificate {
                    let Some((k, bound)) = other.bound() else { return Uncertified };
                    let factor = ceil_u64(&bound);
                    let sign = match (sign, eventual_sign(other)) {
                        (Some((s1, k1)), Some((s2, k2))) => Some((s1.times(s2), (*k1).max(k2))),
                        _ => None,
                    };
                    return VanishesModulus {
                        modulus: mv.scaled(factor).at_least(k),
                        sign,
                        rule: rule::COMPOSITION,
                    };
                }
            }
            let (Some((ka, ba)), Some((kb, bb))) = (a.bound(), b.bound()) else {
                return Uncertified;
            };
            let (fa, fb) = (ceil_u64(&ba), ceil_u64(&bb));
            CauchyModulus {
                modulus: ma
                    .scaled(fb.saturating_mul(2))
                    .max(&mb.scaled(fa.saturating_mul(2)))
                    .at_least(ka.max(kb)),
                limit: la.mul(&lb),
                rule: rule::COMPOSITION,
            }
        }
    }
}

fn compose_div(a: &CertifiedSequence, b: &CertifiedSequence) -> Certificate {
    use Certificate::*;
    match &b.certificate {
        DivergesAbove { modulus, .. } | DivergesBelow { modulus, .. } => {
            if a.certificate.cauchy().is_none() {
                return Uncertified;
            }
            let inv = CertifiedSequence::new(
                PartialResults::constant(Rational::one()).zip(&b.sequence, BinOp::Div),
                reciprocal_of_divergent(&b.certificate, modulus),
            );
            compose_mul(a, &inv)
        }
        c if c.cauchy().is_some() => {
            let Some(apart) = b.apartness(1 << 20) else { return Uncertified };
            if matches!(a.certificate, DivergesAbove { .. } | DivergesBelow { .. }) {
                let Some((kb, bb)) = b.bound() else { return Uncertified };
                let md = a.certificate.modulus().unwrap().clone();
                let factor = ceil_u64(&bb);
                let from = apart.from.max(kb);
                let modulus = Modulus::new(move |big| md.at(big.saturating_mul(factor)).max(from));
                let up = matches!(a.certificate, DivergesAbove { .. }) == (apart.sign == Sign::Positive);
                return if up {
                    DivergesAbove { modulus, rule: rule::COMPOSITION }
                } else {
                    DivergesBelow { modulus, rule: rule::COMPOSITION }
                };
            }
            match b.reciprocal(&apart) {
                Ok(inv) => {
                    // the reciprocal's bound is the separation witness itself
                    let inv = CertifiedSequence {
                        sequence: inv.sequence.clone(),
                        certificate: inv.certificate.clone(),
                        source: None,
                    };
                    compose_mul_with_bound(a, &inv, (apart.from, Rational::integer(apart.witness_q)))
                }
                Err(_) => Uncertified,
            }
        }
        _ => Uncertified,
    }
}

/// Product rule where the second factor's bound is already known.
fn compose_mul_with_bound(a: &CertifiedSequence, inv: &CertifiedSequence, inv_bound: (Index, Rational)) -> Certificate {
    use Certificate::*;
    let (Some((ma, la)), Some((mb, lb))) = (a.certificate.cauchy(), inv.certificate.cauchy()) else {
        return Uncertified;
    };
    if let VanishesModulus { modulus: mv, sign, .. } = &a.certificate {
        let (k, bound) = inv_bound;
        let inv_sign = eventual_sign(inv);
        let sign = match (sign, inv_sign) {
            (Some((s1, k1)), Some((s2, k2))) => Some((s1.times(s2), (*k1).max(k2))),
            _ => None,
        };
        return VanishesModulus {
            modulus: mv.scaled(ceil_u64(&bound)).at_least(k),
            sign,
            rule: rule::COMPOSITION,
        };
    }
    let Some((ka, ba)) = a.bound() else { return Uncertified };
    let (kb, bb) = inv_bound;
    let (fa, fb) = (ceil_u64(&ba), ceil_u64(&bb));
    CauchyModulus {
        modulus: ma
            .scaled(fb.saturating_mul(2))
            .max(&mb.scaled(fa.saturating_mul(2)))
            .at_least(ka.max(kb)),
        limit: la.mul(&lb),
        rule: rule::COMPOSITION,
    }
}

// ---------------------------------------------------------------------------
// Expressions

/// Exact `n`-th partial result of `e`.
pub fn evaluate_partial(e: &Expression, n: Index) -> Result<Rational, Error> {
    partial_results(e).at(n)
}

/// The partial-result generator of `e`.
pub fn partial_results(e: &Expression) -> PartialResults {
    match e {
        Expression::Literal(r) => PartialResults::constant(r.clone()),
        Expression::SeriesInf(t) => series_partial_results(t),
        Expression::ProductInf(t) => product_partial_results(t),
        Expression::BinOp(op, a, b) => partial_results(a).zip(&partial_results(b), *op),
    }
}

/// Infers a certificate for `e`; never fails, falling back to `Uncertified`.
pub fn certify(e: &Expression) -> CertifiedSequence {
    let mut cs = match e {
        Expression::Literal(r) => CertifiedSequence::literal(r.clone()),
        Expression::SeriesInf(t) => CertifiedSequence::new(series_partial_results(t), certify_series(t)),
        Expression::ProductInf(t) => CertifiedSequence::new(product_partial_results(t), certify_product(t)),
        Expression::BinOp(op, a, b) => certify(a).combine(*op, &certify(b)),
    };
    cs.source = Some(e.clone());
    cs
}

/// Polynomial partial sums via interpolation through `S(0..=d+1)`.
#[derive(Clone)]
struct PolySum {
    values: Arc<Vec<Rational>>,
}

impl PolySum {
    fn new(coeffs: &[Rational]) -> Self {
        let deg = coeffs.len();
        let mut values = Vec::with_capacity(deg + 1);
        let mut acc = Rational::zero();
        values.push(acc.clone());
        for i in 1..=deg as u64 {
            let x = Rational::integer(i);
            let mut v = Rational::zero();
            for c in coeffs.iter().rev() {
                v = v * &x + c;
            }
            acc += &v;
            values.push(acc.clone());
        }
        Self { values: Arc::new(values) }
    }

    fn at(&self, n: Index) -> Rational {
        let m = self.values.len() as u64 - 1;
        if n <= m {
            return self.values[n as usize].clone();
        }
        let x = Rational::integer(n);
        let mut total = Rational::zero();
        for (i, yi) in self.values.iter().enumerate() {
            let mut term = yi.clone();
            for j in 0..=m as usize {
                if j != i {
                    let num = &x - Rational::integer(j as u64);
                    let den = Rational::integer(i as i64 - j as i64);
                    term = term * num.checked_div(&den).expect("distinct nodes");
                }
            }
            total += &term;
        }
        total
    }
}

type Step = dyn Fn(&Rational, Index) -> Result<Rational, Error> + Send + Sync;

/// Running sum or product `acc_n = step(acc_{n-1}, n)`, resuming from the
/// nearest earlier checkpoint. Checkpoints only cache exact values, so
/// results do not depend on query order.
struct Accumulator {
    start: Rational,
    step: Arc<Step>,
    memo: spin::Mutex<BTreeMap<Index, Rational>>,
}

impl Accumulator {
    const MAX_CHECKPOINTS: usize = 256;

    fn new(start: Rational, step: impl Fn(&Rational, Index) -> Result<Rational, Error> + Send + Sync + 'static) -> Self {
        Self {
            start,
            step: Arc::new(step),
            memo: spin::Mutex::new(BTreeMap::new()),
        }
    }

    fn at(&self, n: Index) -> Result<Rational, Error> {
        let (mut i, mut acc) = {
            let memo = self.memo.lock();
            match memo.range(..=n).next_back() {
                Some((k, v)) => (*k, v.clone()),
                None => (0, self.start.clone()),
            }
        };
        while i < n {
            i += 1;
            acc = (self.step)(&acc, i)?;
            if acc.bits() > ITERATIVE_BITS_CAP {
                return Err(Error::BudgetExhausted(format!(
                    "partial result {i} exceeds {ITERATIVE_BITS_CAP} bits"
                )));
            }
        }
        let mut memo = self.memo.lock();
        if memo.len() >= Self::MAX_CHECKPOINTS {
            memo.pop_first();
        }
        memo.insert(n, acc.clone());
        Ok(acc)
    }
}

fn accumulated(start: Rational, step: impl Fn(&Rational, Index) -> Result<Rational, Error> + Send + Sync + 'static) -> PartialResults {
    let acc = Accumulator::new(start, step);
    PartialResults::iterative(move |n| acc.at(n))
}

fn series_partial_results(t: &Formula) -> PartialResults {
    let Some(nf) = t.normal_form() else {
        let t = t.clone();
        return accumulated(Rational::zero(), move |acc, i| Ok(acc + t.eval(i)?));
    };
    let mut poly: Vec<Rational> = Vec::new();
    let mut geometric: Vec<(Rational, Rational)> = Vec::new();
    let mut rest = ExpPoly::default();
    for term in nf.terms() {
        let ExpTerm { coeff, power, base } = term;
        if base == Rational::one() && power >= 0 {
            let i = power as usize;
            if poly.len() <= i {
                poly.resize(i + 1, Rational::zero());
            }
            poly[i] = coeff;
        } else if power == 0 {
            geometric.push((coeff, base));
        } else {
            rest = rest.add(&ExpPoly::term(coeff, power, base));
        }
    }
    if poly.is_empty() && geometric.is_empty() && rest.is_zero() {
        return PartialResults::constant(Rational::zero());
    }
    let psum = (!poly.is_empty()).then(|| PolySum::new(&poly));
    let closed = PartialResults::new(move |n| {
        let mut acc = psum.as_ref().map_or_else(Rational::zero, |p| p.at(n));
        for (c, b) in &geometric {
            // c*b*(b^n - 1)/(b - 1)
            let bn = b.pow(n as i64)?;
            acc += &(c * b * (bn - Rational::one())).checked_div(&(b - Rational::one()))?;
        }
        Ok(acc)
    });
    if rest.is_zero() {
        return closed;
    }
    let tail = accumulated(Rational::zero(), move |acc, i| Ok(acc + rest.eval(i)));
    closed.zip(&tail, BinOp::Add)
}

fn product_partial_results(t: &Formula) -> PartialResults {
    if let Formula::Const(c) = t {
        let c = c.clone();
        return PartialResults::new(move |n| c.pow(n as i64));
    }
    let t = t.clone();
    accumulated(Rational::one(), move |acc, i| {
        if acc.is_zero() {
            Ok(Rational::zero())
        } else {
            Ok(acc * t.eval(i)?)
        }
    })
}

/// Explicit bound on `sum_{i > n} |t(i)|`.
#[derive(Clone, Debug)]
enum TailBound {
    /// `scale * ratio^n`, `0 < ratio < 1`.
    Geometric { scale: Rational, ratio: Rational },
    /// `scale / n^power`.
    Integral { scale: Rational, power: u32 },
}

impl TailBound {
    fn at(&self, n: Index) -> Rational {
        match self {
            TailBound::Geometric { scale, ratio } => scale * ratio.pow(n as i64).expect("nonzero"),
            TailBound::Integral { scale, power } => {
                scale * Rational::integer(n).pow(-(*power as i64)).expect("n >= 1")
            }
        }
    }

    /// Least `n >= 1` with `at(n) <= eps`.
    fn first_below(&self, eps: &Rational) -> Index {
        match self {
            TailBound::Integral { scale, power } => {
                // scale / n^p <= eps  <=>  n^p >= scale / eps
                ceil_root(&scale.checked_div(eps).expect("eps > 0"), *power)
            }
            TailBound::Geometric { .. } => {
                if self.at(1) <= *eps {
                    return 1;
                }
                let mut n: Index = 1;
                while self.at(n) > *eps {
                    n = n.saturating_mul(2).max(n + 1);
                }
                let (mut lo, mut hi) = (1, n);
                while lo < hi {
                    let mid = lo + (hi - lo) / 2;
                    if self.at(mid) <= *eps {
                        hi = mid;
                    } else {
                        lo = mid + 1;
                    }
                }
                lo
            }
        }
    }
}

fn q_fraction(q: u64, mult: u64) -> Rational {
    Rational::new(1, num_bigint::BigInt::from(q) * num_bigint::BigInt::from(mult)).expect("q >= 1")
}

/// Absolute tail bound for single-term formulas `c * n^p * b^n`.
fn abs_tail(t: &ExpTerm) -> Option<TailBound> {
    let rho = t.base.abs();
    let c = t.coeff.abs();
    if rho < Rational::one() && !rho.is_zero() && t.power <= 0 {
        // |t(i)| <= c rho^i  =>  tail(n) <= c rho^(n+1) / (1 - rho)
        let scale = (&c * &rho).checked_div(&(Rational::one() - &rho)).ok()?;
        return Some(TailBound::Geometric { scale, ratio: rho });
    }
    if rho == Rational::one() && t.power <= -2 {
        let k = u32::try_from(-t.power).ok()?;
        // sum_{i>n} c/i^k <= integral_n^inf c/x^k = c / ((k-1) n^(k-1))
        let scale = c.checked_div(&Rational::integer(k - 1)).ok()?;
        return Some(TailBound::Integral { scale, power: k - 1 });
    }
    None
}

fn certify_series(t: &Formula) -> Certificate {
    let Some(nf) = t.normal_form() else {
        return Certificate::Uncertified;
    };
    if nf.is_zero() {
        return Certificate::CauchyModulus {
            modulus: Modulus::constant(1),
            limit: Limit::zero(),
            rule: rule::ZERO_TERMS,
        };
    }
    let series_atom = || Limit::atom(Atom::named(alloc::format!("sum(n, {t})")));
    if let Some(term) = nf.single() {
        let rho = term.base.abs();
        // (a) geometric tail: c * b^n with 0 < |b| < 1
        if term.power == 0 && rho < Rational::one() {
            let tail = abs_tail(&term).expect("geometric");
            let limit = (&term.coeff * &term.base)
                .checked_div(&(Rational::one() - &term.base))
                .expect("b != 1");
            return Certificate::CauchyModulus {
                // |S - S_n| <= tail(n) <= 1/(2q)
                modulus: Modulus::new(move |q| tail.first_below(&q_fraction(q, 2))),
                limit: Limit::constant(limit),
                rule: rule::GEOMETRIC_TAIL,
            };
        }
        // (b) alternating c (-1)^n / n^k, k >= 1
        if term.base == Rational::integer(-1) && term.power <= -1 {
            let k = u32::try_from(-term.power).unwrap_or(u32::MAX);
            let c = term.coeff.abs();
            return Certificate::CauchyModulus {
                // |S_m - S_n| <= |t(n+1)| = c/(n+1)^k <= 1/q
                modulus: Modulus::new(move |q| {
                    ceil_root(&(&c * Rational::integer(q)), k).saturating_sub(1).max(1)
                }),
                limit: series_atom(),
                rule: rule::ALTERNATING_SERIES,
            };
        }
        // (c) c / n^k, k >= 2
        if term.base == Rational::one() && term.power <= -2 {
            let tail = abs_tail(&term).expect("integral");
            return Certificate::CauchyModulus {
                modulus: Modulus::new(move |q| tail.first_below(&q_fraction(q, 1))),
                limit: series_atom(),
                rule: rule::INTEGRAL_TAIL,
            };
        }
    }
    // (d) terms bounded away from zero with constant sign
    let lower = nf
        .as_polynomial()
        .and_then(|p| {
            crate::expr::polynomial_lower_bound(&p)
                .map(|c| (Sign::Positive, c))
                .or_else(|| {
                    let neg: Vec<Rational> = p.iter().map(|c| -c).collect();
                    crate::expr::polynomial_lower_bound(&neg).map(|c| (Sign::Negative, c))
                })
        })
        .or_else(|| {
            let term = nf.single()?;
            // c n^k b^n with b >= 1, k >= 0 is monotone in n, so t(1) bounds it
            (term.power >= 0 && term.base >= Rational::one())
                .then(|| {
                    let t1 = &term.coeff * &term.base;
                    Sign::of(&t1).map(|s| (s, t1.abs()))
                })
                .flatten()
        });
    if let Some((sign, c)) = lower {
        // S_n >= c n  >= M  once n >= M / c
        let modulus = Modulus::new(move |big| ceil_u64(&Rational::integer(big).checked_div(&c).expect("c > 0")));
        return match sign {
            Sign::Positive => Certificate::DivergesAbove {
                modulus,
                rule: rule::CONSTANT_SIGN_TERMS,
            },
            Sign::Negative => Certificate::DivergesBelow {
                modulus,
                rule: rule::CONSTANT_SIGN_TERMS,
            },
        };
    }
    Certificate::Uncertified
}

fn certify_product(t: &Formula) -> Certificate {
    let Some(nf) = t.normal_form() else {
        return Certificate::Uncertified;
    };
    let shifted = nf.add(&ExpPoly::constant(-Rational::one()));
    if shifted.is_zero() {
        return Certificate::CauchyModulus {
            modulus: Modulus::constant(1),
            limit: Limit::constant(Rational::one()),
            rule: rule::ZERO_TERMS,
        };
    }
    // (e) prod(1 + t(n)) with sum |t(n)| certified and every factor positive
    let Some(term) = shifted.single() else {
        return Certificate::Uncertified;
    };
    let Some(tail) = abs_tail(&term) else {
        return Certificate::Uncertified;
    };
    // factors up to n0 are checked one by one; beyond it |t| <= 1/2
    let n0 = tail.first_below(&Rational::ratio(1, 2));
    let mut head = Rational::one();
    for i in 1..=n0 {
        match t.eval(i) {
            Ok(v) if v.is_positive() => head *= &v,
            _ => return Certificate::Uncertified,
        }
    }
    // |P_m - P_n| <= |P_n| T(n)/(1-T(n)) <= 2|P_n0| * 2 T(n) for n >= n0
    let factor = ceil_u64(&(head.abs() * Rational::integer(4)));
    Certificate::CauchyModulus {
        modulus: Modulus::new(move |q| {
            tail.first_below(&q_fraction(q, factor)).max(n0)
        }),
        limit: Limit::atom(Atom::named(alloc::format!("prod(n, {t})"))),
        rule: rule::PRODUCT_TELESCOPING,
    }
}

// ---------------------------------------------------------------------------
// Auditing

/// First inequality found false while sampling a certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub q: u64,
    pub m: Index,
    pub n: Index,
    pub detail: String,
}

/// Exact sampling check of a certificate's guarantee at the given `qs`.
///
/// For each `q` the indices `N(q), N(q)+1, N(q)+2, 2N(q), 4N(q)+3` (those under
/// the evaluation cap) are compared pairwise. Returns the number of rational
/// inequalities checked.
pub fn audit(cs: &CertifiedSequence, qs: &[u64]) -> Result<usize, Violation> {
    let mut checked = 0;
    let cert = &cs.certificate;
    for &q in qs {
        let Some(modulus) = cert.modulus() else { return Ok(checked) };
        let base = modulus.at(q);
        let mut idx: Vec<Index> = [base, base + 1, base + 2, base.saturating_mul(2), base.saturating_mul(4).saturating_add(3)]
            .into_iter()
            .filter(|&i| !cs.sequence.is_iterative() || i <= ITERATIVE_INDEX_CAP)
            .collect();
        idx.dedup();
        let vals: Vec<(Index, Rational)> = idx.iter().filter_map(|&i| cs.at(i).ok().map(|v| (i, v))).collect();
        let tol = Rational::new(1, q.max(1)).expect("q >= 1");
        let fail = |m: Index, n: Index, detail: String| Violation { q, m, n, detail };
        for (i, (m, sm)) in vals.iter().enumerate() {
            match cert {
                Certificate::CauchyModulus { .. } => {
                    for (n, sn) in &vals[i + 1..] {
                        checked += 1;
                        if (sm - sn).abs() > tol {
                            return Err(fail(*m, *n, alloc::format!("|S_m - S_n| = {} > 1/{q}", (sm - sn).abs())));
                        }
                    }
                }
                Certificate::VanishesModulus { sign, .. } => {
                    checked += 1;
                    if sm.abs() > tol {
                        return Err(fail(*m, *m, alloc::format!("|S_n| = {} > 1/{q}", sm.abs())));
                    }
                    if let Some((s, from)) = sign {
                        if m >= from {
                            checked += 1;
                            if Sign::of(sm) != Some(*s) {
                                return Err(fail(*m, *m, alloc::format!("sign of S_n = {sm} is not {s:?}")));
                            }
                        }
                    }
                }
                Certificate::DivergesAbove { .. } => {
                    checked += 1;
                    if *sm < Rational::integer(q) {
                        return Err(fail(*m, *m, alloc::format!("S_n = {sm} < {q}")));
                    }
                }
                Certificate::DivergesBelow { .. } => {
                    checked += 1;
                    if *sm > -Rational::integer(q) {
                        return Err(fail(*m, *m, alloc::format!("S_n = {sm} > -{q}")));
                    }
                }
                Certificate::Uncertified => {}
            }
        }
    }
    Ok(checked)
}

#[allow(dead_code)]
fn _assert_send_sync() {
    fn is<T: Send + Sync>() {}
    is::<CertifiedSequence>();
    is::<Box<Certificate>>();
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ceil_log2;
    use crate::expr::parse;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn cs(s: &str) -> CertifiedSequence {
        certify(&parse(s).unwrap())
    }

    const QS: [u64; 5] = [1, 2, 10, 100, 1000];

    #[test]
    fn partial_results_of_examples() {
        let a = parse("sum(n, n)").unwrap();
        assert_eq!(evaluate_partial(&a, 4).unwrap(), r("10"));
        let b = parse("sum(n, (-1)^(n+1)/2^n)").unwrap();
        assert_eq!(evaluate_partial(&b, 2).unwrap(), r("1/4"));
        let c = parse("prod(n, 1 - 1/2^n)").unwrap();
        // hand oracle: (1/2)(3/4)(7/8)
        assert_eq!(evaluate_partial(&c, 3).unwrap(), r("21/64"));
        assert!(evaluate_partial(&a, 0).is_err());
    }

    #[test]
    fn closed_form_sums_match_term_by_term_summation() {
        for s in ["n", "3*n^2 - n + 7", "(-1)^(n+1)/2^n", "n + (2/3)^n", "n*2^n", "1/n^2", "5"] {
            let f = crate::expr::parse_formula(s, "n").unwrap();
            let fast = series_partial_results(&f);
            let mut acc = Rational::zero();
            for n in 1..40 {
                acc += &f.eval(n).unwrap();
                assert_eq!(fast.at(n).unwrap(), acc, "{s} at {n}");
            }
        }
    }

    #[test]
    fn zero_partial_result_is_reported_with_index() {
        let e = parse("1/(sum(n, (-1)^n) + 1)").unwrap();
        assert_eq!(evaluate_partial(&e, 1), Err(Error::ZeroPartialResult { index: 1 }));
        assert_eq!(evaluate_partial(&e, 2).unwrap(), r("1"));
    }

    #[test]
    fn divergent_series_a() {
        let a = cs("sum(n, n)");
        assert!(matches!(a.certificate, Certificate::DivergesAbove { .. }));
        assert_eq!(a.certificate.rule(), rule::CONSTANT_SIGN_TERMS);
        audit(&a, &QS).unwrap();
        let neg = cs("sum(n, -n^2 - 1)");
        assert!(matches!(neg.certificate, Certificate::DivergesBelow { .. }));
        audit(&neg, &QS).unwrap();
        assert!(matches!(cs("sum(n, 2^n)").certificate, Certificate::DivergesAbove { .. }));
    }

    #[test]
    fn geometric_series_b_modulus() {
        let b = cs("sum(n, (-1)^(n+1)/2^n)");
        let Certificate::CauchyModulus { modulus, limit, rule } = &b.certificate else {
            panic!("{:?}", b.certificate)
        };
        assert_eq!(*rule, rule::GEOMETRIC_TAIL);
        assert_eq!(limit.as_constant(), Some(r("1/3")));
        for q in 1..2000u64 {
            assert_eq!(modulus.at(q), ceil_log2(&Rational::integer(q)) + 1, "q = {q}");
        }
        audit(&b, &QS).unwrap();
    }

    #[test]
    fn reciprocal_of_divergent_vanishes_with_identity_modulus() {
        let v = cs("1/sum(n, 1)");
        let Certificate::VanishesModulus { modulus, sign, .. } = &v.certificate else {
            panic!("{:?}", v.certificate)
        };
        for q in [1, 2, 7, 1000, 123456] {
            assert_eq!(modulus.at(q), q);
        }
        assert_eq!(sign.map(|s| s.0), Some(Sign::Positive));
        audit(&v, &QS).unwrap();
    }

    #[test]
    fn other_recognised_rules() {
        let alt = cs("sum(n, (-1)^n/n)");
        assert_eq!(alt.certificate.rule(), rule::ALTERNATING_SERIES);
        audit(&alt, &[1, 2, 10, 100]).unwrap();
        let basel = cs("sum(n, 1/n^2)");
        assert_eq!(basel.certificate.rule(), rule::INTEGRAL_TAIL);
        audit(&basel, &[1, 2, 10, 100]).unwrap();
        let c = cs("prod(n, 1 - 1/2^n)");
        assert_eq!(c.certificate.rule(), rule::PRODUCT_TELESCOPING);
        audit(&c, &QS).unwrap();
        let p2 = cs("prod(n, 1 + 1/n^2)");
        assert_eq!(p2.certificate.rule(), rule::PRODUCT_TELESCOPING);
        audit(&p2, &[1, 2, 10, 100]).unwrap();
    }

    #[test]
    fn unrecognised_shapes_stay_uncertified() {
        for s in ["sum(n, 1/n)", "sum(n, (-1)^n)", "sum(n, n/2^n)", "prod(n, n)", "sum(n, 1/(n*(n+1)))"] {
            assert!(matches!(cs(s).certificate, Certificate::Uncertified), "{s}");
        }
    }

    #[test]
    fn compositions_are_sound_by_sampling() {
        for s in [
            "3 + 5/sum(n, 1)",
            "sum(n, (-1)^(n+1)/2^n) * prod(n, 1 - 1/2^n)",
            "sum(n, n) + sum(n, 1/n^3)",
            "sum(n, n) - 7",
            "1/prod(n, 1 - 1/2^n)",
            "sum(n, n) * (1/2)",
            "sum(n, n) / prod(n, 1 - 1/2^n)",
            "(1/sum(n, 1)) * (-1/2)",
            "1/sum(n, 1) - 1/sum(n, 3)",
            "-sum(n, n) * sum(n, 1)",
        ] {
            let c = cs(s);
            assert!(!matches!(c.certificate, Certificate::Uncertified), "{s}");
            audit(&c, &QS).unwrap_or_else(|v| panic!("{s}: {v:?}"));
        }
        assert!(matches!(cs("sum(n, n) - sum(n, n)").certificate, Certificate::Uncertified));
        assert!(matches!(cs("(1/sum(n, 1)) * sum(n, n)").certificate, Certificate::Uncertified));
    }

    #[test]
    fn d_has_limit_three() {
        let d = cs("3 + 5/sum(n, 1)");
        assert_eq!(d.certificate.limit().unwrap().as_constant(), Some(r("3")));
        let vanishing = cs("5/sum(n, 1)");
        let Certificate::VanishesModulus { modulus, .. } = &vanishing.certificate else { panic!() };
        assert_eq!(modulus.at(10), 50);
    }
}
