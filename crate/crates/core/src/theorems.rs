//! Completeness procedures: limits of Bolzano–Cauchy sequences, greatest
//! boundaries (supremum), intermediate values, numbers between two variable
//! quantities, and the neighbour realization built on the last of these.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::ToPrimitive;

use crate::arith::Rational;
use crate::error::Error;
use crate::limit::{Atom, Limit};
use crate::measurable::{compare, ComparisonVerdict, MeasurableNumber};
use crate::poly::Polynomial;
use crate::sequence::{rule, Certificate, CertifiedSequence, Index, Modulus, PartialResults};

type Generator = dyn Fn(Index) -> Result<MeasurableNumber, Error> + Send + Sync;

/// `k -> X_k` with a Bolzano–Cauchy modulus: `|X_j - X_k| <= 1/q` for all `j, k >= K(q)`.
#[derive(Clone)]
pub struct MeasurableSequence {
    gen: Arc<Generator>,
    bc: Modulus,
    limit: Option<Limit>,
}

impl fmt::Debug for MeasurableSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MeasurableSequence")
            .field("bc", &self.bc)
            .field("limit", &self.limit.as_ref().map(|l| format!("{l}")))
            .finish()
    }
}

impl MeasurableSequence {
    /// `limit`, when given, must be the exact limit of the sequence.
    pub fn new(
        gen: impl Fn(Index) -> Result<MeasurableNumber, Error> + Send + Sync + 'static,
        bc: Modulus,
        limit: Option<Limit>,
    ) -> Self {
        Self {
            gen: Arc::new(gen),
            bc,
            limit,
        }
    }

    pub fn constant(x: MeasurableNumber) -> Self {
        let limit = x.limit();
        Self::new(move |_| Ok(x.clone()), Modulus::constant(1), Some(limit))
    }

    /// The partial results of a convergent certified sequence, each as a rational.
    pub fn from_partial_results(cs: &CertifiedSequence) -> Result<Self, Error> {
        let (modulus, limit) = cs
            .certificate
            .cauchy()
            .ok_or_else(|| Error::NotMeasurable(cs.certificate.kind().into()))?;
        let seq = cs.sequence.clone();
        Ok(Self::new(
            move |k| Ok(MeasurableNumber::rational(seq.at(k)?)),
            modulus,
            Some(limit),
        ))
    }

    /// `X_1, Y_1, X_2, Y_2, ...` for increasing `xs` below decreasing `ys`
    /// whose gap `Y_k - X_k` is at most `1/q` from `gap(q)` on.
    pub fn interleave(xs: &Self, ys: &Self, gap: &Modulus) -> Self {
        let (a, b) = (xs.clone(), ys.clone());
        let limit = xs.limit.clone().or_else(|| ys.limit.clone());
        let g = gap.clone();
        Self::new(
            move |k| if k % 2 == 1 { a.at(k.div_ceil(2)) } else { b.at(k / 2) },
            Modulus::new(move |q| g.at(q).saturating_mul(2)),
            limit,
        )
    }

    pub fn at(&self, k: Index) -> Result<MeasurableNumber, Error> {
        if k == 0 {
            return Err(Error::Precondition("sequence indices start at 1".into()));
        }
        (self.gen)(k)
    }

    pub fn bc_modulus(&self) -> &Modulus {
        &self.bc
    }

    pub fn known_limit(&self) -> Option<&Limit> {
        self.limit.as_ref()
    }
}

/// Limit of a Bolzano–Cauchy sequence by the diagonal construction
/// `L_j = X_{K(4j)}` read at its own index `N(4j)`, so `|L_j - lim| <= 1/(2j)`
/// and `N_L(q) = q`.
pub fn bc_limit(xs: &MeasurableSequence) -> MeasurableNumber {
    let seq = xs.clone();
    let partial = PartialResults::new(move |j| {
        let q = j.saturating_mul(4);
        let x = seq.at(seq.bc.at(q))?;
        x.at(x.modulus().at(q))
    });
    let limit = xs.limit.clone().unwrap_or_else(|| Limit::atom(Atom::fresh()));
    let cert = Certificate::CauchyModulus {
        modulus: Modulus::new(|q| q),
        limit,
        rule: rule::DIAGONAL_LIMIT,
    };
    MeasurableNumber::new(CertifiedSequence::new(partial, cert)).expect("Cauchy certificate")
}

// ---------------------------------------------------------------------------
// Boundaries

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Answer {
    Holds,
    Fails,
    WithinTolerance,
}

/// A property holding below some boundary in `[U, V]` and failing above it.
pub trait BoundaryPredicate: Send + Sync {
    /// `U`: the property holds here.
    fn lower_witness(&self) -> Rational;
    /// `V > U`: the property fails here.
    fn counter_witness(&self) -> Rational;
    /// Three-valued query with tolerance `1/q`.
    fn query(&self, x: &Rational, q: u64) -> Result<Answer, Error>;
    /// True when `x` is exactly the boundary. Bisection that lands there
    /// keeps `x` as its limit.
    fn on_boundary(&self, _x: &Rational) -> bool {
        false
    }
    /// Exact limit of the boundary, when the predicate knows it.
    fn exact_boundary(&self) -> Option<Limit> {
        None
    }
    fn describe(&self) -> String;

    /// Query at a measurable point through its bracket at `2q`.
    fn query_measurable(&self, x: &MeasurableNumber, q: u64) -> Result<Answer, Error> {
        let mf = x.measure(q.saturating_mul(2))?;
        // failing is inherited upwards and holding downwards
        if self.query(&mf.upper(), q)? == Answer::Holds {
            return Ok(Answer::Holds);
        }
        if self.query(&mf.lower(), q)? == Answer::Fails {
            return Ok(Answer::Fails);
        }
        Ok(Answer::WithinTolerance)
    }
}

/// `g(x) < 0` on `[U, V]`, where `g` has a single sign change there.
#[derive(Clone, Debug)]
pub struct PolynomialBelow {
    g: Polynomial,
    lower: Rational,
    upper: Rational,
}

impl PolynomialBelow {
    pub fn new(g: Polynomial, lower: Rational, upper: Rational) -> Result<Self, Error> {
        if lower >= upper {
            return Err(Error::Precondition(format!("need U < V, got U = {lower}, V = {upper}")));
        }
        if !g.eval(&lower).is_negative() || !g.eval(&upper).is_positive() {
            return Err(Error::Precondition(format!(
                "{g} < 0 must hold at U = {lower} and fail at V = {upper}"
            )));
        }
        // Sturm count: exactly one root in (U, V] means one boundary
        if g.count_roots(&lower, &upper) != 1 {
            return Err(Error::Precondition(format!("{g} changes sign more than once on [{lower}, {upper}]")));
        }
        Ok(Self { g, lower, upper })
    }
}

impl BoundaryPredicate for PolynomialBelow {
    fn lower_witness(&self) -> Rational {
        self.lower.clone()
    }

    fn counter_witness(&self) -> Rational {
        self.upper.clone()
    }

    fn query(&self, x: &Rational, _q: u64) -> Result<Answer, Error> {
        Ok(match self.g.eval(x).signum() {
            -1 => Answer::Holds,
            0 => Answer::WithinTolerance,
            _ => Answer::Fails,
        })
    }

    fn on_boundary(&self, x: &Rational) -> bool {
        self.g.eval(x).is_zero()
    }

    fn describe(&self) -> String {
        format!("{} < 0", self.g)
    }
}

/// `x < bound` for a measurable bound; undecided comparisons are WithinTolerance.
#[derive(Clone, Debug)]
pub struct LessThan {
    bound: MeasurableNumber,
    lower: Rational,
    upper: Rational,
}

impl LessThan {
    pub fn new(bound: MeasurableNumber, lower: Rational, upper: Rational) -> Result<Self, Error> {
        if lower >= upper {
            return Err(Error::Precondition(format!("need U < V, got U = {lower}, V = {upper}")));
        }
        Ok(Self { bound, lower, upper })
    }
}

impl BoundaryPredicate for LessThan {
    fn lower_witness(&self) -> Rational {
        self.lower.clone()
    }

    fn counter_witness(&self) -> Rational {
        self.upper.clone()
    }

    fn query(&self, x: &Rational, q: u64) -> Result<Answer, Error> {
        Ok(match compare(&MeasurableNumber::rational(x.clone()), &self.bound, q) {
            ComparisonVerdict::Less { .. } => Answer::Holds,
            ComparisonVerdict::Greater { .. } => Answer::Fails,
            _ => Answer::WithinTolerance,
        })
    }

    fn on_boundary(&self, x: &Rational) -> bool {
        self.bound.exact_value().as_ref() == Some(x)
    }

    fn exact_boundary(&self) -> Option<Limit> {
        Some(self.bound.limit())
    }

    fn describe(&self) -> String {
        match self.bound.base().source.as_ref() {
            Some(e) => format!("x < {e}"),
            None => format!("x < {}", self.bound.limit()),
        }
    }
}

/// One probe of a bisection run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub step: u64,
    pub probe: Rational,
    pub answer: Answer,
    pub left: Rational,
    pub right: Rational,
}

#[derive(Clone, Debug)]
struct Bisection {
    left: Rational,
    right: Rational,
    steps: u64,
    hit: Option<Rational>,
    trace: Vec<TraceStep>,
}

const MAX_STEPS: u64 = 4096;

/// Bisection on `[U, V]` keeping "left holds, right fails". Runs `steps`
/// steps, or until the width is at most `width` when that is given. With
/// `collapse`, landing exactly on the boundary ends the search there.
fn bisect(
    pred: &dyn BoundaryPredicate,
    steps: Option<u64>,
    width: Option<&Rational>,
    trace: bool,
    collapse: bool,
) -> Result<Bisection, Error> {
    let (u, v) = (pred.lower_witness(), pred.counter_witness());
    let span = &v - &u;
    let mut b = Bisection {
        left: u,
        right: v,
        steps: 0,
        hit: None,
        trace: Vec::new(),
    };
    loop {
        let done_steps = steps.is_some_and(|s| b.steps >= s);
        let done_width = width.is_some_and(|w| &b.right - &b.left <= *w);
        if done_steps || done_width {
            return Ok(b);
        }
        if b.steps >= MAX_STEPS {
            return Err(Error::BudgetExhausted(format!("bisection exceeded {MAX_STEPS} steps")));
        }
        // query tolerance grows with the step so answers refine with the bracket
        let q = (Rational::integer(4u64 << b.steps.min(60)).checked_div(&span)?)
            .ceil()
            .to_u64()
            .unwrap_or(u64::MAX)
            .max(1);
        let w = &b.right - &b.left;
        let m = b.left.midpoint(&b.right);
        let answer = pred.query(&m, q)?;
        let record = |probe: &Rational, answer: Answer, b: &Bisection, out: &mut Vec<TraceStep>| {
            if trace {
                out.push(TraceStep {
                    step: b.steps,
                    probe: probe.clone(),
                    answer,
                    left: b.left.clone(),
                    right: b.right.clone(),
                });
            }
        };
        match answer {
            Answer::Holds => b.left = m.clone(),
            Answer::Fails => b.right = m.clone(),
            Answer::WithinTolerance if collapse && pred.on_boundary(&m) => {
                b.left = m.clone();
                b.right = m.clone();
                b.hit = Some(m.clone());
            }
            Answer::WithinTolerance => {
                let quarter = &w * Rational::ratio(1, 4);
                let (lq, rq) = (&m - &quarter, &m + &quarter);
                let (a1, a2) = (pred.query(&lq, q)?, pred.query(&rq, q)?);
                if pred.on_boundary(&m) {
                    if a1 != Answer::Holds || a2 != Answer::Fails {
                        let (holds, fails) = if a1 == Answer::Holds { (rq, m.clone()) } else { (m.clone(), lq) };
                        return Err(Error::inconsistent(holds, fails));
                    }
                    b.hit = Some(m.clone());
                }
                let (old_left, old_right) = (b.left.clone(), b.right.clone());
                match (a1, a2) {
                    (Answer::Fails, _) => b.right = lq,
                    (_, Answer::Holds) => b.left = rq,
                    (a1, a2) => {
                        if a1 == Answer::Holds {
                            b.left = lq;
                        }
                        if a2 == Answer::Fails {
                            b.right = rq;
                        }
                    }
                }
                if b.left == old_left && b.right == old_right {
                    return Err(Error::BudgetExhausted(format!("predicate undecided around {m}")));
                }
            }
        }
        let mut out = core::mem::take(&mut b.trace);
        record(&m, answer, &b, &mut out);
        b.trace = out;
        b.steps += 1;
    }
}

fn check_witnesses(pred: &dyn BoundaryPredicate) -> Result<(), Error> {
    let (u, v) = (pred.lower_witness(), pred.counter_witness());
    if u >= v {
        return Err(Error::Precondition(format!("need U < V, got U = {u}, V = {v}")));
    }
    if pred.query(&u, 1)? != Answer::Holds {
        return Err(Error::Precondition(format!("property must hold at U = {u}")));
    }
    if pred.query(&v, 1)? != Answer::Fails {
        return Err(Error::Precondition(format!("property must fail at V = {v}")));
    }
    Ok(())
}

/// The left endpoints of a replayable bisection, with `K(q)` the first step
/// of width at most `1/q`.
fn bisection_sequence(pred: Arc<dyn BoundaryPredicate>, limit: Limit, collapse: bool) -> MeasurableSequence {
    let p1 = pred.clone();
    let gen = move |k: Index| Ok(MeasurableNumber::rational(bisect(&*p1, Some(k), None, false, collapse)?.left));
    let p2 = pred;
    let bc = Modulus::new(move |q| {
        let w = Rational::new(1, q.max(1)).expect("q >= 1");
        // an error here surfaces again when the sequence is evaluated
        bisect(&*p2, None, Some(&w), false, collapse).map_or(MAX_STEPS, |b| b.steps)
    });
    MeasurableSequence::new(gen, bc, Some(limit))
}

#[derive(Clone, Debug)]
pub struct BoundaryRun {
    /// Limit of the bisection's left endpoints.
    pub value: MeasurableNumber,
    /// Final bracket: the property holds at `left` and fails at `right`.
    pub left: Rational,
    pub right: Rational,
    pub steps: u64,
    pub trace: Vec<TraceStep>,
    pub sequence: MeasurableSequence,
}

/// Greatest `A` such that the property holds for every `X < A`, by bisection
/// until the bracket is at most `1/q` wide.
pub fn greatest_boundary(pred: Arc<dyn BoundaryPredicate>, q: u64) -> Result<BoundaryRun, Error> {
    check_witnesses(&*pred)?;
    let width = Rational::new(1, q.max(1))?;
    let run = bisect(&*pred, None, Some(&width), true, false)?;
    monotone_probes(&*pred, &run, q)?;
    let limit = pred
        .exact_boundary()
        .or_else(|| run.hit.clone().map(Limit::constant))
        .unwrap_or_else(|| {
            Limit::atom(Atom::named(format!(
                "sup{{x : {}}} on [{}, {}]",
                pred.describe(),
                pred.lower_witness(),
                pred.counter_witness()
            )))
        });
    let sequence = bisection_sequence(pred, limit, false);
    Ok(BoundaryRun {
        value: bc_limit(&sequence),
        left: run.left,
        right: run.right,
        steps: run.steps,
        trace: run.trace,
        sequence,
    })
}

/// Points left of the bracket must hold and points right of it must fail.
fn monotone_probes(pred: &dyn BoundaryPredicate, run: &Bisection, q: u64) -> Result<(), Error> {
    let (u, v) = (pred.lower_witness(), pred.counter_witness());
    let w = &run.right - &run.left;
    for k in 1..=3i64 {
        let step = &w * Rational::integer(k);
        let below = &run.left - &step;
        if below >= u && pred.query(&below, q)? == Answer::Fails {
            return Err(Error::inconsistent(run.left.clone(), below));
        }
        let above = &run.right + &step;
        if above <= v && pred.query(&above, q)? == Answer::Holds {
            return Err(Error::inconsistent(above, run.right.clone()));
        }
    }
    // coarse grid across the whole interval catches distant violations
    for i in 1..8i64 {
        let t = Rational::ratio(i, 8);
        let below = &u + &(&t * &(&run.left - &u));
        if pred.query(&below, q)? == Answer::Fails {
            return Err(Error::inconsistent(run.left.clone(), below));
        }
        let above = &run.right + &(&t * &(&v - &run.right));
        if pred.query(&above, q)? == Answer::Holds {
            return Err(Error::inconsistent(above, run.right.clone()));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Intermediate values

/// Exact evaluation with a caller-checkable continuity modulus.
pub trait ContinuousFunction: Send + Sync {
    fn eval(&self, x: &Rational) -> Result<Rational, Error>;
    /// `delta` with `|f(x) - f(y)| <= 1/q` whenever `x, y` in `[lo, hi]`, `|x - y| <= delta`.
    fn modulus(&self, lo: &Rational, hi: &Rational, q: u64) -> Rational;
    fn describe(&self) -> String;
}

impl ContinuousFunction for Polynomial {
    fn eval(&self, x: &Rational) -> Result<Rational, Error> {
        Ok(Polynomial::eval(self, x))
    }

    fn modulus(&self, lo: &Rational, hi: &Rational, q: u64) -> Rational {
        self.continuity_modulus(lo, hi, q)
    }

    fn describe(&self) -> String {
        format!("{self}")
    }
}

type RatFn = dyn Fn(&Rational) -> Result<Rational, Error> + Send + Sync;
type ModFn = dyn Fn(&Rational, &Rational, u64) -> Rational + Send + Sync;

/// A function given by closures for its values and its continuity modulus.
#[derive(Clone)]
pub struct CustomFunction {
    eval: Arc<RatFn>,
    modulus: Arc<ModFn>,
    name: String,
}

impl CustomFunction {
    pub fn new(
        name: impl Into<String>,
        eval: impl Fn(&Rational) -> Result<Rational, Error> + Send + Sync + 'static,
        modulus: impl Fn(&Rational, &Rational, u64) -> Rational + Send + Sync + 'static,
    ) -> Self {
        Self {
            eval: Arc::new(eval),
            modulus: Arc::new(modulus),
            name: name.into(),
        }
    }
}

impl ContinuousFunction for CustomFunction {
    fn eval(&self, x: &Rational) -> Result<Rational, Error> {
        (self.eval)(x)
    }

    fn modulus(&self, lo: &Rational, hi: &Rational, q: u64) -> Rational {
        (self.modulus)(lo, hi, q)
    }

    fn describe(&self) -> String {
        self.name.clone()
    }
}

/// `f(x) < phi(x)` on `[alpha, beta]`, the property of the `i = x - alpha` reduction.
struct FunctionBelow {
    f: Arc<dyn ContinuousFunction>,
    phi: Arc<dyn ContinuousFunction>,
    alpha: Rational,
    beta: Rational,
}

impl FunctionBelow {
    fn gap(&self, x: &Rational) -> Result<Rational, Error> {
        Ok(self.f.eval(x)? - self.phi.eval(x)?)
    }
}

impl BoundaryPredicate for FunctionBelow {
    fn lower_witness(&self) -> Rational {
        self.alpha.clone()
    }

    fn counter_witness(&self) -> Rational {
        self.beta.clone()
    }

    fn query(&self, x: &Rational, _q: u64) -> Result<Answer, Error> {
        Ok(match self.gap(x)?.signum() {
            -1 => Answer::Holds,
            0 => Answer::WithinTolerance,
            _ => Answer::Fails,
        })
    }

    fn on_boundary(&self, x: &Rational) -> bool {
        self.gap(x).is_ok_and(|g| g.is_zero())
    }

    fn describe(&self) -> String {
        format!("{} < {}", self.f.describe(), self.phi.describe())
    }
}

#[derive(Clone, Debug)]
pub struct IvtRun {
    pub root: MeasurableNumber,
    pub left: Rational,
    pub right: Rational,
    /// `f - phi` at `left` (negative or zero) and at `right` (positive or zero).
    pub gap_at_ends: (Rational, Rational),
    pub steps: u64,
    pub trace: Vec<TraceStep>,
}

/// A point `r` in `[alpha, beta]` with `|f(r) - phi(r)| <= 1/q`, given
/// `f(alpha) < phi(alpha)` and `f(beta) > phi(beta)`.
///
/// Bisection keeps `f < phi` at the left end and `f > phi` at the right end,
/// and stops once the bracket is narrower than both `1/q` and the continuity
/// moduli at `2q`. Without monotonicity the root found need not be the
/// first one, so no monotone probes are made.
pub fn intermediate_value(
    f: Arc<dyn ContinuousFunction>,
    phi: Arc<dyn ContinuousFunction>,
    alpha: &Rational,
    beta: &Rational,
    q: u64,
) -> Result<IvtRun, Error> {
    if alpha >= beta {
        return Err(Error::Precondition(format!("need alpha < beta, got {alpha} and {beta}")));
    }
    let pred = Arc::new(FunctionBelow {
        f: f.clone(),
        phi: phi.clone(),
        alpha: alpha.clone(),
        beta: beta.clone(),
    });
    let (ga, gb) = (pred.gap(alpha)?, pred.gap(beta)?);
    if !ga.is_negative() || !gb.is_positive() {
        return Err(Error::Precondition(format!(
            "need f(alpha) < phi(alpha) and f(beta) > phi(beta); f - phi is {ga} at {alpha} and {gb} at {beta}"
        )));
    }
    let q2 = q.max(1).saturating_mul(2);
    let delta = f.modulus(alpha, beta, q2).min(phi.modulus(alpha, beta, q2));
    let width = Rational::new(1, q.max(1))?.min(delta);
    // several roots may lie in the interval: an exact hit is simply kept
    let run = bisect(&*pred, None, Some(&width), true, true)?;
    let (gl, gr) = (pred.gap(&run.left)?, pred.gap(&run.right)?);
    if (&gr - &gl).abs() > Rational::new(1, q.max(1))? {
        return Err(Error::modulus_violation(run.left.clone(), run.right.clone()));
    }
    let limit = match &run.hit {
        Some(h) => Limit::constant(h.clone()),
        None => Limit::atom(Atom::named(format!(
            "root{{{} = {}}} on [{alpha}, {beta}]",
            f.describe(),
            phi.describe()
        ))),
    };
    let sequence = bisection_sequence(pred, limit, true);
    Ok(IvtRun {
        root: bc_limit(&sequence),
        left: run.left,
        right: run.right,
        gap_at_ends: (gl, gr),
        steps: run.steps,
        trace: run.trace,
    })
}

// ---------------------------------------------------------------------------
// Between two variable quantities

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// The increasing quantity attains its greatest value.
    Lower,
    /// The decreasing quantity attains its least value.
    Upper,
}

#[derive(Clone, Debug)]
#[allow(clippy::large_enum_variant)]
pub enum GapMode {
    /// `Y_k - X_j >= 1/n0` always.
    BoundedBelow { n0: u64 },
    /// `Y_k - X_k <= 1/q` for `k >= G(q)`.
    Vanishing { modulus: Modulus },
    /// Vanishing gap, with the extremum of one side belonging to that side.
    VanishingWithAttainedExtremum { side: Side, extremum: MeasurableNumber },
}

/// An increasing `X` below a decreasing `Y`.
#[derive(Clone, Debug)]
pub struct VariableQuantityPair {
    pub xs: MeasurableSequence,
    pub ys: MeasurableSequence,
    pub gap: GapMode,
}

#[derive(Clone, Debug)]
#[allow(clippy::large_enum_variant)]
pub enum BetweenResult {
    InfinitelyMany {
        a: MeasurableNumber,
        a_prime: MeasurableNumber,
        /// Every witness verified strictly between sampled `X` and `Y`.
        witnesses: Vec<MeasurableNumber>,
    },
    ExactlyOne { a: MeasurableNumber },
    None { extremum: MeasurableNumber, side: Side },
}

impl BetweenResult {
    pub fn name(&self) -> &'static str {
        match self {
            BetweenResult::InfinitelyMany { .. } => "InfinitelyMany",
            BetweenResult::ExactlyOne { .. } => "ExactlyOne",
            BetweenResult::None { .. } => "None",
        }
    }
}

/// Generator indices at which orderings are verified.
pub const SAMPLE_INDICES: [Index; 6] = [1, 2, 3, 5, 10, 100];

fn strictly_between(w: &MeasurableNumber, pair: &VariableQuantityPair, budget: u64) -> Result<bool, Error> {
    for &k in &SAMPLE_INDICES {
        if !compare(&pair.xs.at(k)?, w, budget).is_less() || !compare(w, &pair.ys.at(k)?, budget).is_less() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Case analysis of RZ §110 on the declared gap behaviour.
pub fn between_sets(pair: &VariableQuantityPair, budget: u64) -> Result<BetweenResult, Error> {
    for &j in &SAMPLE_INDICES {
        let x = pair.xs.at(j)?;
        for &k in &SAMPLE_INDICES {
            if !compare(&x, &pair.ys.at(k)?, budget).is_less() {
                return Err(Error::Precondition(format!("X_{j} is not below Y_{k}")));
            }
        }
    }
    match &pair.gap {
        GapMode::BoundedBelow { n0 } => {
            let n0 = (*n0).max(1);
            let inf_y = bc_limit(&pair.ys);
            let u = pair.xs.at(1)?.measure(1)?.lower();
            let v = pair.ys.at(1)?.measure(1)?.upper() + Rational::one();
            let pred = LessThan::new(inf_y, u, v)?;
            let a = greatest_boundary(Arc::new(pred), 1 << 10)?.value;
            let mut witnesses = Vec::new();
            let mut candidates = vec![a.clone()];
            for i in 1..=3u32 {
                let back = (Rational::one() - Rational::new(1, 1u64 << i)?) * Rational::new(1, n0)?;
                candidates.push(a.sub(&MeasurableNumber::rational(back))?);
            }
            for w in candidates {
                if strictly_between(&w, pair, budget)? {
                    witnesses.push(w);
                }
            }
            if witnesses.len() < 2 {
                return Err(Error::Precondition("fewer than two verified witnesses".into()));
            }
            for i in 0..witnesses.len() {
                for j in i + 1..witnesses.len() {
                    if compare(&witnesses[i], &witnesses[j], budget).is_equal() {
                        return Err(Error::Precondition("witnesses are not distinct".into()));
                    }
                }
            }
            let a_prime = a.sub(&MeasurableNumber::rational(Rational::new(1, 2 * n0)?))?;
            Ok(BetweenResult::InfinitelyMany { a, a_prime, witnesses })
        }
        GapMode::Vanishing { modulus } => {
            let a = bc_limit(&MeasurableSequence::interleave(&pair.xs, &pair.ys, modulus));
            for &k in &SAMPLE_INDICES {
                let below = compare(&pair.xs.at(k)?, &a, budget);
                let above = compare(&a, &pair.ys.at(k)?, budget);
                if below.is_greater() || above.is_greater() {
                    return Err(Error::Precondition(format!("limit falls outside X_{k}, Y_{k}")));
                }
            }
            Ok(BetweenResult::ExactlyOne { a })
        }
        GapMode::VanishingWithAttainedExtremum { side, extremum } => {
            for &k in &SAMPLE_INDICES {
                let (x, y) = (pair.xs.at(k)?, pair.ys.at(k)?);
                let ok = match side {
                    Side::Lower => !compare(&x, extremum, budget).is_greater() && compare(extremum, &y, budget).is_less(),
                    Side::Upper => compare(&x, extremum, budget).is_less() && !compare(extremum, &y, budget).is_greater(),
                };
                if !ok {
                    return Err(Error::Precondition(format!("extremum is not between X_{k} and Y_{k}")));
                }
            }
            Ok(BetweenResult::None {
                extremum: extremum.clone(),
                side: *side,
            })
        }
    }
}

/// `X_k = d - 1/k` below `d` and `Y_k = d + 1/k` above it.
pub fn neighbour_pair(d: &MeasurableNumber, attained: bool) -> VariableQuantityPair {
    let offset = |sign: i64| {
        let d = d.clone();
        let limit = d.limit();
        MeasurableSequence::new(
            move |k| d.add(&MeasurableNumber::rational(Rational::new(sign, k)?)),
            // |1/j - 1/k| <= 1/q once j, k >= q
            Modulus::new(|q| q),
            Some(limit),
        )
    };
    let gap = if attained {
        GapMode::VanishingWithAttainedExtremum {
            side: Side::Lower,
            extremum: d.clone(),
        }
    } else {
        // 2/k <= 1/q once k >= 2q
        GapMode::Vanishing {
            modulus: Modulus::new(|q| q.saturating_mul(2)),
        }
    };
    VariableQuantityPair {
        xs: offset(-1),
        ys: offset(1),
        gap,
    }
}

/// Every positive distance `d` is realized between points approaching it
/// from both sides: one number when the gap vanishes, none when `d` itself
/// is counted among the lower points.
pub fn neighbour_realization(d: &MeasurableNumber, attained: bool, budget: u64) -> Result<BetweenResult, Error> {
    if !compare(d, &MeasurableNumber::integer(0), budget).is_greater() {
        return Err(Error::Precondition("distance must be certified positive".into()));
    }
    between_sets(&neighbour_pair(d, attained), budget)
}

#[allow(dead_code)]
fn _assert_send_sync() {
    fn is<T: Send + Sync>() {}
    is::<MeasurableSequence>();
    is::<Box<dyn BoundaryPredicate>>();
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::measurable::eq;
    use crate::sequence::certify;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn poly(s: &str) -> Polynomial {
        Polynomial::parse(s, "x").unwrap()
    }

    const BUDGET: u64 = 1_000_000;

    #[test]
    fn bc_limit_of_geometric_partial_sums() {
        let xs = MeasurableSequence::from_partial_results(&certify(&parse("sum(n, 1/2^n)").unwrap())).unwrap();
        let l = bc_limit(&xs);
        assert!(eq(&l, &MeasurableNumber::integer(1), BUDGET).is_equal());
        let c = MeasurableNumber::rational(r("-7/3"));
        assert!(eq(&bc_limit(&MeasurableSequence::constant(c.clone())), &c, BUDGET).is_equal());
    }

    #[test]
    fn square_root_of_two_as_greatest_boundary() {
        let pred = PolynomialBelow::new(poly("x^2 - 2"), r("1"), r("2")).unwrap();
        let q = 1_000_000;
        let run = greatest_boundary(Arc::new(pred.clone()), q).unwrap();
        assert!(&run.right - &run.left <= Rational::new(1, q).unwrap());
        assert!(run.left.clone() * run.left.clone() < r("2") && run.right.clone() * run.right.clone() > r("2"));
        // K(q) = ceil(log2((V - U) q)) for plain halving
        assert_eq!(run.sequence.bc_modulus().at(q), 20);
        let a = run.value.measure(q).unwrap().center();
        assert!((&a * &a - r("2")).abs() <= Rational::new(4, q).unwrap());
        let below = run.value.sub(&MeasurableNumber::rational(Rational::new(1, q).unwrap())).unwrap();
        let above = run.value.add(&MeasurableNumber::rational(Rational::new(1, q).unwrap())).unwrap();
        assert_ne!(pred.query_measurable(&below, q).unwrap(), Answer::Fails);
        assert_ne!(pred.query_measurable(&above, q).unwrap(), Answer::Holds);
    }

    #[test]
    fn rational_boundaries_are_exact() {
        let cut = LessThan::new(MeasurableNumber::rational(r("3/4")), r("0"), r("1")).unwrap();
        let run = greatest_boundary(Arc::new(cut.clone()), 1000).unwrap();
        assert!(eq(&run.value, &MeasurableNumber::rational(r("3/4")), BUDGET).is_equal());
        assert!(run.trace.iter().any(|t| t.answer == Answer::WithinTolerance && t.probe == r("3/4")));
        let four = PolynomialBelow::new(poly("x^2 - 4"), r("1"), r("3")).unwrap();
        let run = greatest_boundary(Arc::new(four), 1000).unwrap();
        assert!(eq(&run.value, &MeasurableNumber::integer(2), BUDGET).is_equal());
        let third = LessThan::new(MeasurableNumber::rational(r("1/3")), r("0"), r("1")).unwrap();
        let run = greatest_boundary(Arc::new(third), 1000).unwrap();
        assert!(eq(&run.value, &MeasurableNumber::rational(r("1/3")), BUDGET).is_equal());
    }

    #[test]
    fn bad_predicates_are_rejected() {
        assert!(PolynomialBelow::new(poly("x^2 - 2"), r("-2"), r("2")).is_err());
        assert!(PolynomialBelow::new(poly("x^2 - 2"), r("2"), r("1")).is_err());

        struct Liar;
        impl BoundaryPredicate for Liar {
            fn lower_witness(&self) -> Rational {
                Rational::zero()
            }
            fn counter_witness(&self) -> Rational {
                Rational::one()
            }
            fn query(&self, x: &Rational, _q: u64) -> Result<Answer, Error> {
                // holds on [0, 1/8] and on [1/2, 3/4), fails elsewhere
                let holds = *x <= Rational::ratio(1, 8) || (*x >= Rational::ratio(1, 2) && *x < Rational::ratio(3, 4));
                Ok(if holds { Answer::Holds } else { Answer::Fails })
            }
            fn describe(&self) -> String {
                "liar".into()
            }
        }
        assert!(matches!(greatest_boundary(Arc::new(Liar), 64), Err(Error::InconsistentPredicate { .. })));
    }

    #[test]
    fn intermediate_values() {
        let zero: Arc<dyn ContinuousFunction> = Arc::new(Polynomial::default());
        let q = 1_000_000;
        let run = intermediate_value(Arc::new(poly("x^2 - 2")), zero.clone(), &r("1"), &r("2"), q).unwrap();
        let x = run.root.measure(q).unwrap().center();
        assert!((&x * &x - r("2")).abs() <= Rational::new(4, q).unwrap());
        assert!(!run.gap_at_ends.0.is_positive() && !run.gap_at_ends.1.is_negative());
        assert!(run.left >= r("1") && run.right <= r("2"));

        let odd = intermediate_value(Arc::new(poly("x")), zero.clone(), &r("-1"), &r("1"), q).unwrap();
        assert!(eq(&odd.root, &MeasurableNumber::integer(0), BUDGET).is_equal());

        let plastic = intermediate_value(Arc::new(poly("x^3 - x - 1")), zero.clone(), &r("1"), &r("2"), q).unwrap();
        let p = plastic.root.measure(q).unwrap().center();
        assert!((p.to_f64() - 1.324_717_957_244_746).abs() < 2e-6);

        assert!(intermediate_value(Arc::new(poly("x^2 + 1")), zero.clone(), &r("0"), &r("1"), q).is_err());
        let liar = CustomFunction::new(
            "steep",
            |x| Ok((x - &Rational::ratio(1, 3)) * Rational::integer(1000)),
            |_, _, _| Rational::one(),
        );
        assert!(matches!(
            intermediate_value(Arc::new(liar), zero, &r("0"), &r("1"), 100),
            Err(Error::ModulusViolation { .. })
        ));
    }

    fn rationals(f: impl Fn(Index) -> Rational + Send + Sync + 'static, limit: Rational) -> MeasurableSequence {
        MeasurableSequence::new(
            move |k| Ok(MeasurableNumber::rational(f(k))),
            Modulus::new(|q| q),
            Some(Limit::constant(limit)),
        )
    }

    #[test]
    fn between_two_quantities() {
        let pair = VariableQuantityPair {
            xs: rationals(|k| Rational::new(-1, k).unwrap(), Rational::zero()),
            ys: rationals(|k| Rational::one() + Rational::new(1, k).unwrap(), Rational::one()),
            gap: GapMode::BoundedBelow { n0: 1 },
        };
        let BetweenResult::InfinitelyMany { witnesses, a_prime, .. } = between_sets(&pair, BUDGET).unwrap() else {
            panic!()
        };
        assert!(witnesses.len() >= 2);
        assert!(eq(&a_prime, &MeasurableNumber::rational(r("1/2")), BUDGET).is_equal());
        assert!(witnesses.iter().any(|w| eq(w, &MeasurableNumber::rational(r("1/4")), BUDGET).is_equal()));

        let d = MeasurableNumber::rational(r("1/3"));
        let BetweenResult::ExactlyOne { a } = neighbour_realization(&d, false, BUDGET).unwrap() else { panic!() };
        assert!(eq(&a, &d, BUDGET).is_equal());
        let BetweenResult::None { extremum, .. } = neighbour_realization(&d, true, BUDGET).unwrap() else { panic!() };
        assert!(eq(&extremum, &d, BUDGET).is_equal());
        assert!(neighbour_realization(&MeasurableNumber::integer(0), false, BUDGET).is_err());

        let crossed = VariableQuantityPair {
            xs: rationals(|_| Rational::one(), Rational::one()),
            ys: rationals(|_| Rational::zero(), Rational::zero()),
            gap: GapMode::BoundedBelow { n0: 1 },
        };
        assert!(between_sets(&crossed, BUDGET).is_err());
    }
}
