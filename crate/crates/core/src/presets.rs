//! Named examples: the series and products A to D, the between-quantity
//! pairs and the point sets used by the command line and the checks.

use alloc::vec::Vec;

use crate::arith::Rational;
use crate::measurable::MeasurableNumber;
use crate::sequence::Modulus;
use crate::theorems::{neighbour_pair, GapMode, MeasurableSequence, VariableQuantityPair};
use crate::topology::{dyadic_unit_interval, pu41, unit_interval, PointSet1D};
use crate::limit::Limit;

/// `1 + 2 + 3 + ...`
pub const A: &str = "sum(n, n)";
/// `1/2 - 1/4 + 1/8 - ...`
pub const B: &str = "sum(n, (-1)^(n+1)/2^n)";
/// `(1 - 1/2)(1 - 1/4)(1 - 1/8)...`
pub const C: &str = "prod(n, 1 - 1/2^n)";
/// `a + b/(1 + 1 + ...)` with `a = 3`, `b = 5`.
pub const D: &str = "3 + 5/sum(n, 1)";

pub const EXPRESSIONS: [(&str, &str); 4] = [("A", A), ("B", B), ("C", C), ("D", D)];

pub fn expression(name: &str) -> Option<&'static str> {
    EXPRESSIONS.iter().find(|(n, _)| n.eq_ignore_ascii_case(name)).map(|(_, e)| *e)
}

pub const POINT_SETS: [&str; 4] = ["pu41", "pu41-with-z", "dyadic", "unit-interval"];

/// The midpoint-removal sets use `a = 0`, `z = 1`.
pub fn point_set(name: &str) -> Option<PointSet1D> {
    let (zero, one) = (Rational::zero(), Rational::one());
    Some(match name {
        "pu41" => pu41(zero, one, false),
        "pu41-with-z" => pu41(zero, one, true),
        "dyadic" => dyadic_unit_interval(),
        "unit-interval" => unit_interval(),
        _ => return None,
    })
}

pub const PAIRS: [&str; 3] = ["bounded", "vanishing", "attained"];

fn rationals(f: impl Fn(u64) -> Rational + Send + Sync + 'static, limit: Rational) -> MeasurableSequence {
    MeasurableSequence::new(
        move |k| Ok(MeasurableNumber::rational(f(k))),
        // |1/j - 1/k| <= 1/q once j, k >= q
        Modulus::new(|q| q),
        Some(Limit::constant(limit)),
    )
}

/// `X_k = -1/k`, `Y_k = 1 + 1/k` with gap at least 1; the other two approach `1/3`.
pub fn pair(name: &str) -> Option<VariableQuantityPair> {
    let third = MeasurableNumber::rational(Rational::ratio(1, 3));
    Some(match name {
        "bounded" => VariableQuantityPair {
            xs: rationals(|k| -Rational::new(1, k).expect("k >= 1"), Rational::zero()),
            ys: rationals(|k| Rational::one() + Rational::new(1, k).expect("k >= 1"), Rational::one()),
            gap: GapMode::BoundedBelow { n0: 1 },
        },
        "vanishing" => neighbour_pair(&third, false),
        "attained" => neighbour_pair(&third, true),
        _ => return None,
    })
}

pub fn names() -> Vec<&'static str> {
    let mut out: Vec<&str> = EXPRESSIONS.iter().map(|(n, _)| *n).collect();
    out.extend(POINT_SETS);
    out.extend(PAIRS);
    out
}
