//! One function per subcommand; each returns a finished report.

use std::sync::Arc;

use anyhow::Result;
use bolzano_core::poly::Polynomial;
use bolzano_core::theorems::{
    between_sets, greatest_boundary, intermediate_value, neighbour_realization, BetweenResult, BoundaryPredicate,
    LessThan, PolynomialBelow,
};
use bolzano_core::topology::Verdict;
use bolzano_core::{certify, classify, compare, presets, Classification, MeasurableNumber};

use crate::input::{self, InputError};
use crate::report::*;
use crate::topo_format::{self, SetSpec};

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub q: u64,
    pub fuel: u64,
    pub trace: bool,
}

/// `1, 10, 100, ...` up to and including `q`.
fn decades(q: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 1u64;
    while p < q {
        out.push(p);
        p = p.saturating_mul(10);
    }
    out.push(q);
    out
}

pub fn classify_one(text: &str, cfg: &RunConfig) -> Result<ClassifyReport> {
    let e = input::expression(text)?;
    let cs = certify(&e);
    let class = classify(&cs, cfg.fuel);
    let qs = decades(cfg.q);
    let modulus = match cs.certificate.modulus() {
        Some(m) => qs.iter().map(|&q| ModulusPoint { q, n: m.at(q) }).collect(),
        None => Vec::new(),
    };
    let fractions = match MeasurableNumber::new(cs.clone()) {
        Ok(x) => qs.iter().map(|&q| Bracket::of(&x, q)).collect::<Result<Vec<_>>>()?,
        Err(_) => Vec::new(),
    };
    let undetermined = match &class {
        Classification::UndeterminedAtFuel { fuel, trend, last } => Some(Undetermined {
            fuel: *fuel,
            trend: format!("{trend:?}"),
            last_index: last.as_ref().map(|(i, _)| *i),
            last_value: last.as_ref().map(|(_, v)| v.to_string()),
        }),
        _ => None,
    };
    Ok(ClassifyReport {
        expression: e.pretty(),
        classification: class.name().into(),
        certificate: CertificateReport {
            kind: cs.certificate.kind().into(),
            rule: cs.certificate.rule().into(),
            modulus,
        },
        fractions,
        undetermined,
    })
}

pub fn classify_all(texts: &[String], cfg: &RunConfig) -> Result<ClassifyReports> {
    if texts.is_empty() {
        return Err(InputError("no expressions given".into()).into());
    }
    Ok(ClassifyReports(texts.iter().map(|t| classify_one(t, cfg)).collect::<Result<_>>()?))
}

pub fn compare_pair(left: &str, right: &str, cfg: &RunConfig) -> Result<CompareReport> {
    let (x, y) = (input::number(left)?, input::number(right)?);
    let v = compare(&x, &y, cfg.q);
    Ok(CompareReport {
        left: input::expression(left)?.pretty(),
        right: input::expression(right)?.pretty(),
        verdict: v.name().into(),
        witness_q: v.witness_q(),
        budget: cfg.q,
    })
}

pub fn approx(text: &str, cfg: &RunConfig) -> Result<ApproxReport> {
    let x = input::number(text)?;
    Ok(ApproxReport {
        expression: input::expression(text)?.pretty(),
        value: Bracket::of(&x, cfg.q)?,
    })
}

/// `property` is a polynomial `g` read as `g(x) < 0`, or with `less_than`
/// an expression `b` read as `x < b`.
pub fn sup(property: &str, lower: &str, upper: &str, less_than: bool, cfg: &RunConfig) -> Result<SupReport> {
    let (u, v) = (input::rational(lower)?, input::rational(upper)?);
    let pred: Arc<dyn BoundaryPredicate> = if less_than {
        Arc::new(LessThan::new(input::number(property)?, u.clone(), v.clone())?)
    } else {
        Arc::new(PolynomialBelow::new(input::polynomial(property)?, u.clone(), v.clone())?)
    };
    let run = greatest_boundary(pred.clone(), cfg.q)?;
    Ok(SupReport {
        property: pred.describe(),
        lower_witness: u.to_string(),
        counter_witness: v.to_string(),
        value: Bracket::of(&run.value, cfg.q)?,
        left: run.left.to_string(),
        right: run.right.to_string(),
        steps: run.steps,
        trace: trace(&run.trace, cfg.trace),
    })
}

pub fn ivt(f: &str, phi: &str, alpha: &str, beta: &str, cfg: &RunConfig) -> Result<IvtReport> {
    let (f, phi) = (input::polynomial(f)?, input::polynomial(phi)?);
    let (a, b) = (input::rational(alpha)?, input::rational(beta)?);
    let run = intermediate_value(Arc::new(f.clone()), Arc::new(phi.clone()), &a, &b, cfg.q)?;
    Ok(IvtReport {
        f: f.to_string(),
        phi: phi.to_string(),
        alpha: a.to_string(),
        beta: b.to_string(),
        root: Bracket::of(&run.root, cfg.q)?,
        left: run.left.to_string(),
        right: run.right.to_string(),
        gap_at_ends: [run.gap_at_ends.0.to_string(), run.gap_at_ends.1.to_string()],
        steps: run.steps,
        trace: trace(&run.trace, cfg.trace),
    })
}

/// A preset pair by name, or the neighbour pair around `d`.
pub fn between(pair: Option<&str>, neighbour: Option<&str>, attained: bool, cfg: &RunConfig) -> Result<BetweenReport> {
    let (label, result) = match (pair, neighbour) {
        (Some(name), None) => {
            let p = presets::pair(name).ok_or_else(|| {
                InputError(format!("unknown pair `{name}`; presets are {}", presets::PAIRS.join(", ")))
            })?;
            (name.to_string(), between_sets(&p, cfg.q)?)
        }
        (None, Some(d)) => {
            let x = input::number(d)?;
            let label = format!("neighbours of {}{}", input::expression(d)?.pretty(), if attained { " (attained)" } else { "" });
            (label, neighbour_realization(&x, attained, cfg.q)?)
        }
        _ => return Err(InputError("give a preset pair or --neighbour, not both".into()).into()),
    };
    let q = cfg.q;
    let mut report = BetweenReport {
        pair: label,
        result: result.name().into(),
        a: None,
        a_prime: None,
        witnesses: Vec::new(),
        extremum: None,
        side: None,
    };
    match &result {
        BetweenResult::InfinitelyMany { a, a_prime, witnesses } => {
            report.a = Some(Bracket::of(a, q)?);
            report.a_prime = Some(Bracket::of(a_prime, q)?);
            report.witnesses = witnesses.iter().map(|w| Bracket::of(w, q)).collect::<Result<_>>()?;
        }
        BetweenResult::ExactlyOne { a } => report.a = Some(Bracket::of(a, q)?),
        BetweenResult::None { extremum, side } => {
            report.extremum = Some(Bracket::of(extremum, q)?);
            report.side = Some(format!("{side:?}").to_lowercase());
        }
    }
    Ok(report)
}

pub fn topo(source: &str) -> Result<TopoReport> {
    let set = topo_format::load(source)?;
    let verdict = set.bolzano_complete();
    let mut report = TopoReport {
        set: SetSpec::describe(&set),
        described: set.to_string(),
        verdict: verdict.name().into(),
        point: None,
        gap: None,
        samples: Vec::new(),
    };
    if let Verdict::FailsAt { point, gap, samples } = verdict {
        report.point = Some(point.to_string());
        report.gap = Some(gap.to_string());
        report.samples = texts(&samples);
    }
    Ok(report)
}

/// Default `phi` for `ivt`.
pub fn zero_polynomial() -> String {
    Polynomial::default().to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> RunConfig {
        RunConfig {
            q: 1000,
            fuel: 1000,
            trace: false,
        }
    }

    #[test]
    fn decade_list() {
        assert_eq!(decades(1), vec![1]);
        assert_eq!(decades(1000), vec![1, 10, 100, 1000]);
        assert_eq!(decades(250), vec![1, 10, 100, 250]);
    }

    #[test]
    fn zero_has_zero_fractions() {
        let r = classify_one("0", &cfg()).unwrap();
        assert_eq!(r.classification, "Measurable");
        assert!(r.fractions.iter().all(|b| b.p == "0"));
    }

    #[test]
    fn divergent_has_no_fractions() {
        let r = classify_one("A", &cfg()).unwrap();
        assert_eq!(r.classification, "InfinitelyGreatPositive");
        assert!(r.fractions.is_empty());
    }
}
