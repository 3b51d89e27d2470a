//! Exact bookkeeping of limits of certified sequences.
//!
//! A [`Limit`] is a polynomial with rational coefficients over opaque
//! [`Atom`]s. Atoms stand for limits that have no known rational value (the
//! sum of an alternating harmonic series, a bisection boundary, ...). Two
//! atoms with the same name denote the same sequence, hence the same limit.
//!
//! Limits of sums and products of convergent sequences are the sums and
//! products of the limits, so a difference whose limit polynomial is
//! identically zero is certified to vanish.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;
use core::sync::atomic::{AtomicU64, Ordering};

use crate::arith::Rational;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    /// Determined by a canonical description of the sequence.
    Named(Arc<str>),
    /// Unique per construction.
    Fresh(u64),
}

static NEXT_FRESH: AtomicU64 = AtomicU64::new(1);

impl Atom {
    pub fn named(name: impl Into<String>) -> Self {
        Atom::Named(Arc::from(name.into()))
    }

    pub fn fresh() -> Self {
        Atom::Fresh(NEXT_FRESH.fetch_add(1, Ordering::Relaxed))
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Named(n) => write!(f, "[{n}]"),
            Atom::Fresh(id) => write!(f, "[#{id}]"),
        }
    }
}

type Monomial = Vec<(Atom, i32)>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Limit {
    terms: BTreeMap<Monomial, Rational>,
}

fn mono_mul(a: &Monomial, b: &Monomial) -> Monomial {
    let mut map: BTreeMap<Atom, i32> = BTreeMap::new();
    for (atom, e) in a.iter().chain(b.iter()) {
        *map.entry(atom.clone()).or_insert(0) += e;
    }
    map.into_iter().filter(|(_, e)| *e != 0).collect()
}

impl Limit {
    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        Self { terms }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn atom(a: Atom) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(alloc::vec![(a, 1)], Rational::one());
        Self { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The rational value, when no atom occurs.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let e = terms.entry(m.clone()).or_insert_with(Rational::zero);
            *e = &*e + c;
            if e.is_zero() {
                terms.remove(m);
            }
        }
        Self { terms }
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut acc = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let mut t = BTreeMap::new();
                t.insert(mono_mul(m1, m2), c1 * c2);
                acc = acc.add(&Self { terms: t });
            }
        }
        acc
    }

    /// Reciprocal of a limit already known to be nonzero. A single monomial
    /// is inverted exactly; other limits get an atom named after the divisor,
    /// so equal divisors share their reciprocal.
    pub fn recip(&self) -> Self {
        if self.terms.len() == 1 {
            let (mono, c) = self.terms.iter().next().expect("one term");
            let mut terms = BTreeMap::new();
            terms.insert(
                mono.iter().map(|(a, e)| (a.clone(), -e)).collect(),
                c.recip().expect("nonzero coefficient"),
            );
            return Self { terms };
        }
        Self::atom(Atom::named(format!("1/({self})")))
    }
}

impl fmt::Display for Limit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (mono, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            let unit = c.numer() == c.denom();
            if mono.is_empty() || !unit {
                write!(f, "{c}")?;
                if !mono.is_empty() {
                    f.write_str("*")?;
                }
            }
            for (j, (atom, e)) in mono.iter().enumerate() {
                if j > 0 {
                    f.write_str("*")?;
                }
                write!(f, "{atom}")?;
                if *e != 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}
