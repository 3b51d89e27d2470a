//! Neighbour-based completeness of symbolic point sets on the line.
//!
//! A point has a neighbour at distance `h` when `x - h` or `x + h` belongs to
//! the set. A set is complete when every point has a neighbour at every
//! distance below some per-point threshold.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::arith::Rational;
use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Carrier {
    Continuum,
    Rationals,
    Dyadics,
}

impl Carrier {
    pub fn name(self) -> &'static str {
        match self {
            Carrier::Continuum => "continuum",
            Carrier::Rationals => "rationals",
            Carrier::Dyadics => "dyadics",
        }
    }

    fn admits(self, x: &Rational) -> bool {
        match self {
            Carrier::Continuum | Carrier::Rationals => true,
            Carrier::Dyadics => x.is_dyadic(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub lo: Rational,
    pub hi: Rational,
    pub lo_closed: bool,
    pub hi_closed: bool,
    pub carrier: Carrier,
}

impl Piece {
    pub fn closed(lo: Rational, hi: Rational, carrier: Carrier) -> Self {
        Self {
            lo,
            hi,
            lo_closed: true,
            hi_closed: true,
            carrier,
        }
    }

    fn spans(&self, x: &Rational) -> bool {
        let above = if self.lo_closed { *x >= self.lo } else { *x > self.lo };
        let below = if self.hi_closed { *x <= self.hi } else { *x < self.hi };
        above && below
    }

    fn contains(&self, x: &Rational) -> bool {
        self.spans(x) && self.carrier.admits(x)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilySide {
    Left,
    Right,
}

/// The points `c - b r^n` (left) or `c + b r^n` (right) for `n >= 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeometricFamily {
    pub accumulation: Rational,
    pub scale: Rational,
    pub ratio: Rational,
    pub side: FamilySide,
    /// Whether the accumulation point is removed as well.
    pub include_accumulation: bool,
}

impl GeometricFamily {
    /// The `n` with `|x - c| = b r^n`, if `x` is a member.
    fn index_of(&self, x: &Rational) -> Option<u64> {
        let offset = match self.side {
            FamilySide::Left => &self.accumulation - x,
            FamilySide::Right => x - &self.accumulation,
        };
        if !offset.is_positive() {
            return None;
        }
        let mut p = &self.scale * &self.ratio;
        let mut n = 1;
        while p > offset {
            p *= &self.ratio;
            n += 1;
        }
        (p == offset).then_some(n)
    }

    fn excludes(&self, x: &Rational) -> bool {
        (self.include_accumulation && *x == self.accumulation) || self.index_of(x).is_some()
    }

    fn distance(&self, n: u32) -> Rational {
        &self.scale * &self.ratio.pow(n as i64).expect("nonzero ratio")
    }

    fn point(&self, n: u32) -> Rational {
        match self.side {
            FamilySide::Left => &self.accumulation - &self.distance(n),
            FamilySide::Right => &self.accumulation + &self.distance(n),
        }
    }

    /// Distance from `x` to the nearest member, for `x` away from the accumulation point.
    fn gap_to(&self, x: &Rational) -> Rational {
        let far = (x - &self.accumulation).abs();
        let mut best = far.clone();
        for n in 1.. {
            let d = self.distance(n);
            best = best.min((x - &self.point(n)).abs());
            if d * Rational::integer(2) < far {
                break;
            }
        }
        best
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PointSet1D {
    pieces: Vec<Piece>,
    isolated: Vec<Rational>,
    excluded: Vec<GeometricFamily>,
}

impl PointSet1D {
    pub fn new(pieces: Vec<Piece>, isolated: Vec<Rational>, excluded: Vec<GeometricFamily>) -> Result<Self, Error> {
        for p in &pieces {
            if p.lo >= p.hi {
                return Err(Error::Precondition(format!("piece needs lo < hi, got [{}, {}]", p.lo, p.hi)));
            }
        }
        for f in &excluded {
            if !f.scale.is_positive() || !f.ratio.is_positive() || f.ratio >= Rational::one() {
                return Err(Error::Precondition(format!(
                    "family needs b > 0 and 0 < r < 1, got b = {}, r = {}",
                    f.scale, f.ratio
                )));
            }
            let (first, c) = (f.point(1), &f.accumulation);
            let (lo, hi) = if first < *c { (&first, c) } else { (c, &first) };
            if !pieces.iter().any(|p| p.lo <= *lo && *hi <= p.hi) {
                return Err(Error::Precondition(format!("family accumulating at {c} lies outside every piece")));
            }
        }
        Ok(Self {
            pieces,
            isolated,
            excluded,
        })
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn isolated(&self) -> &[Rational] {
        &self.isolated
    }

    pub fn excluded(&self) -> &[GeometricFamily] {
        &self.excluded
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let present = self.pieces.iter().any(|p| p.contains(x)) || self.isolated.contains(x);
        present && !self.excluded.iter().any(|f| f.excludes(x))
    }

    pub fn has_neighbour_at(&self, x: &Rational, h: &Rational) -> Result<bool, Error> {
        self.require(x)?;
        if !h.is_positive() {
            return Err(Error::Precondition(format!("distance must be positive, got {h}")));
        }
        Ok(self.contains(&(x - h)) || self.contains(&(x + h)))
    }

    fn require(&self, x: &Rational) -> Result<(), Error> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::NotInSet(x.clone()))
        }
    }

    /// A `d > 0` below which the neighbours of `x` follow the side profiles.
    pub fn neighbour_threshold(&self, x: &Rational) -> Rational {
        let mut events: Vec<Rational> = Vec::new();
        for p in &self.pieces {
            events.push((x - &p.lo).abs());
            events.push((x - &p.hi).abs());
        }
        for y in &self.isolated {
            events.push((x - y).abs());
        }
        for f in &self.excluded {
            if f.accumulation != *x {
                events.push(f.gap_to(x));
            }
        }
        let nearest = events.into_iter().filter(Rational::is_positive).fold(Rational::one(), Rational::min);
        nearest * Rational::ratio(1, 2)
    }

    fn side(&self, x: &Rational, left: bool) -> Side {
        let mut side = Side::Empty;
        for p in &self.pieces {
            let covers = if left { p.lo < *x && *x <= p.hi } else { p.lo <= *x && *x < p.hi };
            if covers {
                side = side.join(match p.carrier {
                    Carrier::Dyadics => Side::Dyadic,
                    _ => Side::All,
                });
            }
        }
        let want = if left { FamilySide::Left } else { FamilySide::Right };
        let holes: Vec<GeometricFamily> = self
            .excluded
            .iter()
            .filter(|f| f.accumulation == *x && f.side == want)
            .cloned()
            .collect();
        match side {
            Side::All if !holes.is_empty() => Side::AllBut(holes),
            other => other,
        }
    }

    pub fn classify_point(&self, x: &Rational) -> Result<PointKind, Error> {
        self.require(x)?;
        Ok(match (self.side(x, true), self.side(x, false)) {
            (Side::All, Side::All) => PointKind::Interior,
            (Side::All, Side::Empty) | (Side::Empty, Side::All) => PointKind::Boundary,
            (Side::Empty, Side::Empty) => PointKind::Isolated,
            _ => PointKind::Irregular,
        })
    }

    /// Points where failure can occur: endpoints, isolated points,
    /// accumulation points and representatives of dyadic pieces.
    fn candidates(&self) -> Vec<Rational> {
        let mut out = Vec::new();
        for p in &self.pieces {
            out.push(p.lo.clone());
            out.push(p.hi.clone());
            if p.carrier == Carrier::Dyadics {
                // a dyadic point strictly inside: the next multiple of 2^-k after lo
                for k in 0..64u32 {
                    let unit = Rational::new(1, 1u64 << k).expect("nonzero");
                    let x = (Rational::integer((&p.lo * &Rational::integer(1u64 << k)).floor()) + Rational::one()) * unit;
                    if x < p.hi {
                        out.push(x);
                        break;
                    }
                }
            }
        }
        out.extend(self.isolated.iter().cloned());
        out.extend(self.excluded.iter().map(|f| f.accumulation.clone()));
        let mut seen: Vec<Rational> = Vec::new();
        for x in out {
            if !seen.contains(&x) {
                seen.push(x);
            }
        }
        seen.into_iter().filter(|x| self.contains(x)).collect()
    }

    /// Decides completeness by case analysis of the side profiles at every
    /// candidate point; elsewhere a continuum or rational side is always present.
    pub fn bolzano_complete(&self) -> Verdict {
        for x in self.candidates() {
            if let Some((gap, samples)) = self.failure_at(&x) {
                return Verdict::FailsAt { point: x, gap, samples };
            }
        }
        Verdict::Complete
    }

    fn verified(&self, x: &Rational, hs: impl IntoIterator<Item = Rational>, want: usize) -> Vec<Rational> {
        hs.into_iter()
            .filter(|h| h.is_positive() && self.has_neighbour_at(x, h) == Ok(false))
            .take(want)
            .collect()
    }

    fn failure_at(&self, x: &Rational) -> Option<(GapDescription, Vec<Rational>)> {
        let (left, right) = (self.side(x, true), self.side(x, false));
        let d = self.neighbour_threshold(x);
        let (gap, samples) = match (&left, &right) {
            (Side::All, _) | (_, Side::All) => return None,
            (Side::Empty, Side::Empty) => {
                let hs = (1..=3).map(|k| &d * &Rational::ratio(1, k));
                (GapDescription::Interval { upto: d.clone() }, self.verified(x, hs, 3))
            }
            (Side::AllBut(fs), Side::Empty) | (Side::Empty, Side::AllBut(fs)) => {
                let f = &fs[0];
                let hs = (1..=10).map(|n| f.distance(n));
                (
                    GapDescription::Geometric {
                        scale: f.scale.clone(),
                        ratio: f.ratio.clone(),
                    },
                    self.verified(x, hs, 10),
                )
            }
            (Side::AllBut(ls), Side::AllBut(rs)) => common_distances(ls, rs).map(|(scale, ratio)| {
                let hs: Vec<Rational> = (1..=10).map(|n| &scale * &ratio.pow(n).expect("nonzero")).collect();
                (GapDescription::Geometric { scale, ratio }, self.verified(x, hs, 10))
            })?,
            _ => {
                // a dyadic side: distances leaving both sides non-dyadic
                let families: Vec<&GeometricFamily> = [&left, &right]
                    .into_iter()
                    .filter_map(|s| if let Side::AllBut(fs) = s { Some(&fs[0]) } else { None })
                    .collect();
                let stream: Vec<Rational> = match families.first() {
                    Some(f) => (1..=64).map(|n| f.distance(n)).collect(),
                    None if x.is_dyadic() => [3i64, 5, 7, 9, 11, 13]
                        .iter()
                        .map(|&k| Rational::ratio(1, k))
                        .chain((1..=3).map(|k| Rational::new(1, 3u64 << (10 * k)).expect("nonzero")))
                        .collect(),
                    None => (1..=64).map(|k| Rational::new(1, 1u64 << k).expect("nonzero")).collect(),
                };
                let gap = match families.first() {
                    Some(f) => GapDescription::GeometricNonDyadic {
                        scale: f.scale.clone(),
                        ratio: f.ratio.clone(),
                    },
                    None => GapDescription::NonDyadic,
                };
                (gap, self.verified(x, stream, 6))
            }
        };
        (samples.len() >= 3).then_some((gap, samples))
    }
}

/// Common members of `{b1 r1^n}` and `{b2 r2^m}`, as a geometric family.
/// Two coincidences force infinitely many; the search is bounded.
fn common_distances(ls: &[GeometricFamily], rs: &[GeometricFamily]) -> Option<(Rational, Rational)> {
    const SEARCH: u32 = 256;
    for f in ls {
        for g in rs {
            let gd: Vec<Rational> = (1..=SEARCH).map(|m| g.distance(m)).collect();
            let hits: Vec<Rational> = (1..=SEARCH)
                .map(|n| f.distance(n))
                .filter(|d| gd.contains(d))
                .take(2)
                .collect();
            if let [a, b] = hits.as_slice() {
                let ratio = b.checked_div(a).ok()?;
                return Some((a.checked_div(&ratio).ok()?, ratio));
            }
        }
    }
    None
}

/// What lies on one side of a point at all small distances.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Side {
    Empty,
    Dyadic,
    All,
    /// Everything except the members of families accumulating at the point.
    AllBut(Vec<GeometricFamily>),
}

impl Side {
    fn join(self, other: Side) -> Side {
        match (self, other) {
            (Side::All, _) | (_, Side::All) => Side::All,
            (Side::Dyadic, _) | (_, Side::Dyadic) => Side::Dyadic,
            _ => Side::Empty,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointKind {
    Interior,
    Boundary,
    Isolated,
    /// Neighbours come and go at arbitrarily small distances.
    Irregular,
}

impl PointKind {
    pub fn name(self) -> &'static str {
        match self {
            PointKind::Interior => "Interior",
            PointKind::Boundary => "Boundary",
            PointKind::Isolated => "Isolated",
            PointKind::Irregular => "Irregular",
        }
    }
}

/// The distances at which a failing point has no neighbour.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GapDescription {
    /// Every `h` in `(0, upto]`.
    Interval { upto: Rational },
    /// `scale * ratio^n` for `n >= 1`.
    Geometric { scale: Rational, ratio: Rational },
    /// Every `h` with `x - h` and `x + h` both non-dyadic.
    NonDyadic,
    /// Those `scale * ratio^n` with `x - h` and `x + h` both non-dyadic.
    GeometricNonDyadic { scale: Rational, ratio: Rational },
}

impl fmt::Display for GapDescription {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GapDescription::Interval { upto } => write!(f, "(0, {upto}]"),
            GapDescription::Geometric { scale, ratio } => write!(f, "{{{scale} * ({ratio})^n : n >= 1}}"),
            GapDescription::NonDyadic => f.write_str("{h : x - h and x + h not dyadic}"),
            GapDescription::GeometricNonDyadic { scale, ratio } => {
                write!(f, "{{h = {scale} * ({ratio})^n : x - h and x + h not dyadic}}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum Verdict {
    Complete,
    FailsAt {
        point: Rational,
        gap: GapDescription,
        /// Distances checked exactly to have no neighbour.
        samples: Vec<Rational>,
    },
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Complete => "Complete",
            Verdict::FailsAt { .. } => "FailsAt",
        }
    }
}

/// `[a, z]` with the midpoints `a_1, a_2, ...` of `a z`, `a_1 z`, ... removed,
/// and `z` itself kept or removed.
pub fn pu41(a: Rational, z: Rational, keep_end: bool) -> PointSet1D {
    let family = GeometricFamily {
        accumulation: z.clone(),
        scale: &z - &a,
        ratio: Rational::ratio(1, 2),
        side: FamilySide::Left,
        include_accumulation: !keep_end,
    };
    PointSet1D::new(vec![Piece::closed(a, z, Carrier::Continuum)], Vec::new(), vec![family]).expect("well-formed")
}

pub fn dyadic_unit_interval() -> PointSet1D {
    PointSet1D::new(vec![Piece::closed(Rational::zero(), Rational::one(), Carrier::Dyadics)], Vec::new(), Vec::new())
        .expect("well-formed")
}

pub fn unit_interval() -> PointSet1D {
    PointSet1D::new(vec![Piece::closed(Rational::zero(), Rational::one(), Carrier::Continuum)], Vec::new(), Vec::new())
        .expect("well-formed")
}

impl fmt::Display for PointSet1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .pieces
            .iter()
            .map(|p| {
                format!(
                    "{}{}, {}{} ({})",
                    if p.lo_closed { '[' } else { '(' },
                    p.lo,
                    p.hi,
                    if p.hi_closed { ']' } else { ')' },
                    p.carrier.name()
                )
            })
            .collect();
        if !self.isolated.is_empty() {
            let pts: Vec<String> = self.isolated.iter().map(|x| format!("{x}")).collect();
            parts.push(format!("{{{}}}", pts.join(", ")));
        }
        f.write_str(&parts.join(" u "))?;
        for fam in &self.excluded {
            let sign = if fam.side == FamilySide::Left { '-' } else { '+' };
            write!(f, " minus {{{} {sign} {} * ({})^n}}", fam.accumulation, fam.scale, fam.ratio)?;
            if fam.include_accumulation {
                write!(f, " minus {{{}}}", fam.accumulation)?;
            }
        }
        Ok(())
    }
}
