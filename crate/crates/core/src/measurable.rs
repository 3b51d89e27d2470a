//! Measuring fractions, classification, comparison up to infinitely small
//! differences, and arithmetic on measurable numbers.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use num_traits::ToPrimitive;

use crate::arith::{Integer, Rational};
use crate::error::Error;
use crate::expr::{BinOp, Expression};
use crate::limit::Limit;
use crate::sequence::{certify, Certificate, CertifiedSequence, Index, Modulus, Sign, Violation, ITERATIVE_INDEX_CAP};

/// `(p-1)/q <= S_n <= (p+1)/q` for every `n >= from_index`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasuringFraction {
    pub q: u64,
    pub p: Integer,
    pub from_index: Index,
}

impl MeasuringFraction {
    pub fn lower(&self) -> Rational {
        Rational::new(&self.p - 1, self.q).expect("q >= 1")
    }

    pub fn upper(&self) -> Rational {
        Rational::new(&self.p + 1, self.q).expect("q >= 1")
    }

    pub fn center(&self) -> Rational {
        Rational::new(self.p.clone(), self.q).expect("q >= 1")
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.lower() <= *x && *x <= self.upper()
    }
}

impl fmt::Display for MeasuringFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p/q = {}/{} in [{}, {}] from n = {}", self.p, self.q, self.lower(), self.upper(), self.from_index)
    }
}

/// Exact sampling check of a bracket: partial results from `from_index` on
/// must lie inside it. Returns the number of inequalities checked.
pub fn audit_measure(x: &MeasurableNumber, mf: &MeasuringFraction) -> Result<usize, Violation> {
    let n = mf.from_index;
    let mut checked = 0;
    for i in [n, n + 1, n + 2, n.saturating_mul(2), n.saturating_mul(4).saturating_add(3)] {
        if x.base.sequence.is_iterative() && i > ITERATIVE_INDEX_CAP {
            continue;
        }
        let Ok(s) = x.at(i) else { continue };
        checked += 2;
        if !mf.contains(&s) {
            return Err(Violation {
                q: mf.q,
                m: n,
                n: i,
                detail: format!("S_n = {s} outside [{}, {}]", mf.lower(), mf.upper()),
            });
        }
    }
    Ok(checked)
}

/// Direction of sampled partial results; advisory only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Trend {
    NonDecreasing,
    NonIncreasing,
    Oscillating,
    Unavailable,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    Measurable,
    InfinitelySmallPositive,
    InfinitelySmallNegative,
    InfinitelyGreatPositive,
    InfinitelyGreatNegative,
    UndeterminedAtFuel {
        fuel: Index,
        trend: Trend,
        /// Last partial result that could be evaluated, with its index.
        last: Option<(Index, Rational)>,
    },
}

impl Classification {
    pub fn name(&self) -> &'static str {
        match self {
            Classification::Measurable => "Measurable",
            Classification::InfinitelySmallPositive => "InfinitelySmallPositive",
            Classification::InfinitelySmallNegative => "InfinitelySmallNegative",
            Classification::InfinitelyGreatPositive => "InfinitelyGreatPositive",
            Classification::InfinitelyGreatNegative => "InfinitelyGreatNegative",
            Classification::UndeterminedAtFuel { .. } => "UndeterminedAtFuel",
        }
    }
}

/// Classifies from the certificate; only uncertified sequences are scanned.
pub fn classify(s: &CertifiedSequence, fuel: Index) -> Classification {
    match &s.certificate {
        Certificate::VanishesModulus { sign: Some((Sign::Positive, _)), .. } => Classification::InfinitelySmallPositive,
        Certificate::VanishesModulus { sign: Some((Sign::Negative, _)), .. } => Classification::InfinitelySmallNegative,
        Certificate::VanishesModulus { .. } | Certificate::CauchyModulus { .. } => Classification::Measurable,
        Certificate::DivergesAbove { .. } => Classification::InfinitelyGreatPositive,
        Certificate::DivergesBelow { .. } => Classification::InfinitelyGreatNegative,
        Certificate::Uncertified => scan(s, fuel),
    }
}

fn scan(s: &CertifiedSequence, fuel: Index) -> Classification {
    let fuel = fuel.max(1);
    let mut idx: Vec<Index> = (0..64).map(|k| 1u64 << k).take_while(|&n| n < fuel).collect();
    idx.push(fuel);
    let mut values: Vec<(Index, Rational)> = Vec::new();
    for n in idx {
        match s.at(n) {
            Ok(v) => values.push((n, v)),
            Err(_) => break,
        }
    }
    let (mut up, mut down) = (true, true);
    for w in values.windows(2) {
        up &= w[0].1 <= w[1].1;
        down &= w[0].1 >= w[1].1;
    }
    let trend = match (values.len() >= 2, up, down) {
        (false, ..) => Trend::Unavailable,
        (true, true, _) => Trend::NonDecreasing,
        (true, _, true) => Trend::NonIncreasing,
        _ => Trend::Oscillating,
    };
    Classification::UndeterminedAtFuel {
        fuel,
        trend,
        last: values.pop(),
    }
}

/// A certified sequence with a Cauchy or vanishing modulus.
#[derive(Clone, Debug)]
pub struct MeasurableNumber {
    base: CertifiedSequence,
}

impl MeasurableNumber {
    pub fn new(base: CertifiedSequence) -> Result<Self, Error> {
        if base.certificate.cauchy().is_none() {
            let what = base
                .source
                .as_ref()
                .map_or_else(|| "sequence".into(), |e| format!("{e}"));
            return Err(Error::NotMeasurable(format!("{what}: {}", base.certificate.kind())));
        }
        Ok(Self { base })
    }

    pub fn from_expression(e: &Expression) -> Result<Self, Error> {
        Self::new(certify(e))
    }

    pub fn rational(r: Rational) -> Self {
        Self {
            base: CertifiedSequence::literal(r),
        }
    }

    pub fn integer(n: i64) -> Self {
        Self::rational(Rational::integer(n))
    }

    pub fn base(&self) -> &CertifiedSequence {
        &self.base
    }

    pub fn certificate(&self) -> &Certificate {
        &self.base.certificate
    }

    fn cauchy(&self) -> (Modulus, Limit) {
        self.base.certificate.cauchy().expect("checked at construction")
    }

    /// Cauchy modulus `N(q)` of the underlying sequence.
    pub fn modulus(&self) -> Modulus {
        self.cauchy().0
    }

    pub fn limit(&self) -> Limit {
        self.cauchy().1
    }

    /// Exact value when the limit is rational and known.
    pub fn exact_value(&self) -> Option<Rational> {
        self.limit().as_constant()
    }

    pub fn at(&self, n: Index) -> Result<Rational, Error> {
        self.base.at(n)
    }

    /// Corrected measuring fraction: `N = N(2q)`, `p = round(q * S_N)`.
    pub fn measure(&self, q: u64) -> Result<MeasuringFraction, Error> {
        if q == 0 {
            return Err(Error::Precondition("q must be positive".into()));
        }
        let n = self.modulus().at(q.saturating_mul(2));
        let s = self.at(n)?;
        Ok(MeasuringFraction {
            q,
            p: (s * Rational::integer(q)).nearest_integer(),
            from_index: n,
        })
    }

    pub fn classify(&self) -> Classification {
        classify(&self.base, 1)
    }

    fn wrap(base: CertifiedSequence) -> Result<Self, Error> {
        Self::new(base)
    }

    pub fn add(&self, other: &Self) -> Result<Self, Error> {
        Self::wrap(self.base.combine(BinOp::Add, &other.base))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, Error> {
        Self::wrap(self.base.combine(BinOp::Sub, &other.base))
    }

    pub fn mul(&self, other: &Self) -> Result<Self, Error> {
        Self::wrap(self.base.combine(BinOp::Mul, &other.base))
    }

    pub fn neg(&self) -> Self {
        Self {
            base: self.base.negate(),
        }
    }

    /// Quotient; the divisor must be certified apart from zero within `budget`.
    ///
    /// Partial results of the divisor before the apartness index are replaced
    /// by the value at that index, so no early zero can interfere.
    pub fn div(&self, other: &Self, budget: u64) -> Result<Self, Error> {
        let apart = other.base.apartness(budget).ok_or(Error::NoApartness)?;
        let inv = other.base.reciprocal(&apart)?;
        let mut q = self.base.combine(BinOp::Mul, &inv);
        q.source = match (&self.base.source, &other.base.source) {
            (Some(a), Some(b)) => Some(Expression::binop(BinOp::Div, a.clone(), b.clone())),
            _ => None,
        };
        Self::wrap(q)
    }

    /// `(self + other) / 2`.
    pub fn midpoint(&self, other: &Self) -> Result<Self, Error> {
        self.add(other)?.mul(&Self::rational(Rational::ratio(1, 2)))
    }
}

#[derive(Clone, Debug)]
pub enum ComparisonVerdict {
    /// Separation `>= 1/witness_q`.
    Less { witness_q: u64 },
    Greater { witness_q: u64 },
    /// Vanishing modulus of the difference.
    EqualCertified(Modulus),
    IndistinguishableAtBudget { budget: u64 },
}

impl ComparisonVerdict {
    pub fn name(&self) -> &'static str {
        match self {
            ComparisonVerdict::Less { .. } => "Less",
            ComparisonVerdict::Greater { .. } => "Greater",
            ComparisonVerdict::EqualCertified(_) => "EqualCertified",
            ComparisonVerdict::IndistinguishableAtBudget { .. } => "IndistinguishableAtBudget",
        }
    }

    pub fn is_less(&self) -> bool {
        matches!(self, ComparisonVerdict::Less { .. })
    }

    pub fn is_greater(&self) -> bool {
        matches!(self, ComparisonVerdict::Greater { .. })
    }

    pub fn is_equal(&self) -> bool {
        matches!(self, ComparisonVerdict::EqualCertified(_))
    }

    pub fn witness_q(&self) -> Option<u64> {
        match self {
            ComparisonVerdict::Less { witness_q } | ComparisonVerdict::Greater { witness_q } => Some(*witness_q),
            _ => None,
        }
    }
}

impl fmt::Display for ComparisonVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComparisonVerdict::Less { witness_q } | ComparisonVerdict::Greater { witness_q } => {
                write!(f, "{} (witness q = {witness_q})", self.name())
            }
            ComparisonVerdict::EqualCertified(m) => write!(f, "EqualCertified (vanishing N(1000) = {})", m.at(1000)),
            ComparisonVerdict::IndistinguishableAtBudget { budget } => write!(f, "IndistinguishableAtBudget({budget})"),
        }
    }
}

fn witness_for(gap: &Rational) -> u64 {
    // smallest q with 1/q <= gap
    gap.recip().expect("gap > 0").ceil().to_u64().unwrap_or(u64::MAX).max(1)
}

/// Order of `x` and `y` up to an infinitely small difference.
///
/// Equality needs a vanishing modulus for `x - y`. Otherwise the difference
/// is measured at `q' = 1, 2, 4, ... <= budget` until its bracket excludes 0.
pub fn compare(x: &MeasurableNumber, y: &MeasurableNumber, budget: u64) -> ComparisonVerdict {
    let Ok(d) = x.sub(y) else {
        return ComparisonVerdict::IndistinguishableAtBudget { budget };
    };
    if let Some(m) = d.base.certificate.vanishing() {
        return ComparisonVerdict::EqualCertified(m);
    }
    if let Some(c) = d.limit().as_constant() {
        let witness_q = witness_for(&c.abs());
        return if c.is_negative() {
            ComparisonVerdict::Less { witness_q }
        } else {
            ComparisonVerdict::Greater { witness_q }
        };
    }
    let mut q: u64 = 1;
    while q <= budget.max(1) {
        let Ok(mf) = d.measure(q) else { break };
        if mf.lower().is_positive() {
            return ComparisonVerdict::Greater {
                witness_q: witness_for(&mf.lower()),
            };
        }
        if mf.upper().is_negative() {
            return ComparisonVerdict::Less {
                witness_q: witness_for(&-mf.upper()),
            };
        }
        match q.checked_mul(2) {
            Some(next) => q = next,
            None => break,
        }
    }
    ComparisonVerdict::IndistinguishableAtBudget { budget }
}

/// Same procedure as [`compare`]; named for equality queries.
pub fn eq(x: &MeasurableNumber, y: &MeasurableNumber, budget: u64) -> ComparisonVerdict {
    compare(x, y, budget)
}

/// Same procedure as [`compare`]; named for order queries.
pub fn order(x: &MeasurableNumber, y: &MeasurableNumber, budget: u64) -> ComparisonVerdict {
    compare(x, y, budget)
}
