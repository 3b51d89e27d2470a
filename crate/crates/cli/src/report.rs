//! Report records. Each one serializes to JSON and renders as text from the
//! same fields, so both formats carry identical verdicts.

use std::fmt::Write;

use anyhow::Result;
use bolzano_core::theorems::TraceStep;
use bolzano_core::{MeasurableNumber, Rational};
use serde::Serialize;

use crate::topo_format::SetSpec;

pub trait Render: Serialize {
    fn text(&self) -> String;
}

/// Decimal places that `1/q` resolves.
pub fn digits(q: u64) -> usize {
    let mut d = 0;
    let mut p = 1u64;
    while p < q {
        p = p.saturating_mul(10);
        d += 1;
    }
    d
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Bracket {
    pub q: u64,
    pub p: String,
    pub lower: String,
    pub upper: String,
    pub decimal: String,
}

impl Bracket {
    pub fn of(x: &MeasurableNumber, q: u64) -> Result<Self> {
        let mf = x.measure(q)?;
        Ok(Bracket {
            q,
            p: mf.p.to_string(),
            lower: mf.lower().to_string(),
            upper: mf.upper().to_string(),
            decimal: mf.center().to_decimal(digits(q)),
        })
    }

    fn line(&self) -> String {
        format!("q = {}: p = {}, within [{}, {}], ~ {}", self.q, self.p, self.lower, self.upper, self.decimal)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ModulusPoint {
    pub q: u64,
    pub n: u64,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CertificateReport {
    pub kind: String,
    pub rule: String,
    /// `N(q)` at the report's q values; empty when uncertified.
    pub modulus: Vec<ModulusPoint>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Undetermined {
    pub fuel: u64,
    pub trend: String,
    pub last_index: Option<u64>,
    pub last_value: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ClassifyReport {
    pub expression: String,
    pub classification: String,
    pub certificate: CertificateReport,
    pub fractions: Vec<Bracket>,
    pub undetermined: Option<Undetermined>,
}

impl Render for ClassifyReport {
    fn text(&self) -> String {
        let mut s = format!("{}\n  classification: {}\n", self.expression, self.classification);
        let c = &self.certificate;
        let _ = write!(s, "  certificate: {} ({})", c.kind, c.rule);
        if !c.modulus.is_empty() {
            let ns: Vec<String> = c.modulus.iter().map(|m| format!("N({}) = {}", m.q, m.n)).collect();
            let _ = write!(s, ", {}", ns.join(", "));
        }
        s.push('\n');
        if let Some(u) = &self.undetermined {
            let _ = writeln!(s, "  undetermined after {} terms, trend {}", u.fuel, u.trend);
            if let (Some(i), Some(v)) = (u.last_index, &u.last_value) {
                let _ = writeln!(s, "  last partial result S_{i} = {v}");
            }
        }
        for b in &self.fractions {
            let _ = writeln!(s, "  {}", b.line());
        }
        s
    }
}

/// Several classifications, one per input expression.
#[derive(Clone, Debug, Serialize)]
#[serde(transparent)]
pub struct ClassifyReports(pub Vec<ClassifyReport>);

impl Render for ClassifyReports {
    fn text(&self) -> String {
        self.0.iter().map(Render::text).collect::<Vec<_>>().join("\n")
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CompareReport {
    pub left: String,
    pub right: String,
    pub verdict: String,
    pub witness_q: Option<u64>,
    pub budget: u64,
}

impl Render for CompareReport {
    fn text(&self) -> String {
        let mut s = format!("{} vs {}: {}", self.left, self.right, self.verdict);
        match (self.verdict.as_str(), self.witness_q) {
            (_, Some(w)) => {
                let _ = write!(s, " (separated by at least 1/{w})");
            }
            ("IndistinguishableAtBudget", _) => {
                let _ = write!(s, " (no separation down to 1/{})", self.budget);
            }
            _ => {}
        }
        s.push('\n');
        s
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ApproxReport {
    pub expression: String,
    pub value: Bracket,
}

impl Render for ApproxReport {
    fn text(&self) -> String {
        format!("{} ~ {}\n  {}\n", self.expression, self.value.decimal, self.value.line())
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TraceRow {
    pub step: u64,
    pub probe: String,
    pub answer: String,
    pub left: String,
    pub right: String,
}

pub fn trace(steps: &[TraceStep], wanted: bool) -> Option<Vec<TraceRow>> {
    wanted.then(|| {
        steps
            .iter()
            .map(|t| TraceRow {
                step: t.step,
                probe: t.probe.to_string(),
                answer: format!("{:?}", t.answer),
                left: t.left.to_string(),
                right: t.right.to_string(),
            })
            .collect()
    })
}

fn trace_text(s: &mut String, rows: &Option<Vec<TraceRow>>) {
    if let Some(rows) = rows {
        let _ = writeln!(s, "  trace:");
        for t in rows {
            let _ = writeln!(s, "    {:>4}  probe {}  {}  -> [{}, {}]", t.step, t.probe, t.answer, t.left, t.right);
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SupReport {
    pub property: String,
    pub lower_witness: String,
    pub counter_witness: String,
    pub value: Bracket,
    pub left: String,
    pub right: String,
    pub steps: u64,
    pub trace: Option<Vec<TraceRow>>,
}

impl Render for SupReport {
    fn text(&self) -> String {
        let mut s = format!(
            "greatest boundary of {} on [{}, {}] ~ {}\n  {}\n  holds at {}, fails at {} after {} steps\n",
            self.property,
            self.lower_witness,
            self.counter_witness,
            self.value.decimal,
            self.value.line(),
            self.left,
            self.right,
            self.steps
        );
        trace_text(&mut s, &self.trace);
        s
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct IvtReport {
    pub f: String,
    pub phi: String,
    pub alpha: String,
    pub beta: String,
    pub root: Bracket,
    pub left: String,
    pub right: String,
    /// `f - phi` at `left` and at `right`.
    pub gap_at_ends: [String; 2],
    pub steps: u64,
    pub trace: Option<Vec<TraceRow>>,
}

impl Render for IvtReport {
    fn text(&self) -> String {
        let mut s = format!(
            "{} = {} on [{}, {}] at ~ {}\n  {}\n  f - phi is {} at {} and {} at {} after {} steps\n",
            self.f,
            self.phi,
            self.alpha,
            self.beta,
            self.root.decimal,
            self.root.line(),
            self.gap_at_ends[0],
            self.left,
            self.gap_at_ends[1],
            self.right,
            self.steps
        );
        trace_text(&mut s, &self.trace);
        s
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BetweenReport {
    pub pair: String,
    pub result: String,
    pub a: Option<Bracket>,
    pub a_prime: Option<Bracket>,
    pub witnesses: Vec<Bracket>,
    pub extremum: Option<Bracket>,
    pub side: Option<String>,
}

impl Render for BetweenReport {
    fn text(&self) -> String {
        let mut s = format!("{}: {}\n", self.pair, self.result);
        for (label, b) in [("a", &self.a), ("a'", &self.a_prime), ("extremum", &self.extremum)] {
            if let Some(b) = b {
                let _ = writeln!(s, "  {label} ~ {} ({})", b.decimal, b.line());
            }
        }
        if let Some(side) = &self.side {
            let _ = writeln!(s, "  attained on the {side} side");
        }
        if !self.witnesses.is_empty() {
            let w: Vec<&str> = self.witnesses.iter().map(|b| b.decimal.as_str()).collect();
            let _ = writeln!(s, "  witnesses ~ {}", w.join(", "));
        }
        s
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TopoReport {
    pub set: SetSpec,
    pub described: String,
    pub verdict: String,
    pub point: Option<String>,
    pub gap: Option<String>,
    pub samples: Vec<String>,
}

impl Render for TopoReport {
    fn text(&self) -> String {
        let mut s = format!("{}\n  verdict: {}", self.described, self.verdict);
        if let Some(p) = &self.point {
            let _ = write!(s, " {p}");
        }
        s.push('\n');
        if let Some(g) = &self.gap {
            let _ = writeln!(s, "  no neighbour at distances {g}");
        }
        if !self.samples.is_empty() {
            let _ = writeln!(s, "  verified: {}", self.samples.join(", "));
        }
        s
    }
}

pub fn texts(rs: &[Rational]) -> Vec<String> {
    rs.iter().map(Rational::to_string).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digits_cover_the_resolution() {
        assert_eq!(digits(1), 0);
        assert_eq!(digits(10), 1);
        assert_eq!(digits(11), 2);
        assert_eq!(digits(1_000_000), 6);
    }

    #[test]
    fn brackets_name_the_measuring_fraction() {
        let b = Bracket::of(&MeasurableNumber::rational(Rational::ratio(1, 3)), 3).unwrap();
        assert_eq!((b.p.as_str(), b.lower.as_str(), b.upper.as_str()), ("1", "0", "2/3"));
    }
}
