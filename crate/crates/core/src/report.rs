//! Pass/fail cells with replayable witnesses.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::chain::HomologyComparison;
use crate::error::{Error, Result};
use crate::linalg::Field;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Pass,
    /// The checked property fails; a mathematical outcome, not a defect.
    Fail,
    /// The computation itself broke an internal invariant.
    InvariantViolated,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Pass => "PASS",
            Outcome::Fail => "FAIL",
            Outcome::InvariantViolated => "BUG",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub degree: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub expected: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub found: Option<usize>,
    pub detail: String,
}

impl Witness {
    pub fn new(kind: impl Into<String>, detail: impl Into<String>) -> Self {
        Witness { kind: kind.into(), degree: None, expected: None, found: None, detail: detail.into() }
    }

    pub fn at(mut self, degree: usize) -> Self {
        self.degree = Some(degree);
        self
    }

    pub fn counts(mut self, expected: usize, found: usize) -> Self {
        self.expected = Some(expected);
        self.found = Some(found);
        self
    }

    pub fn from_error(e: &Error) -> Self {
        Witness::new("error", e.to_string())
    }

    /// A degree where a map fails to induce an isomorphism on homology.
    pub fn homology(c: &HomologyComparison) -> Self {
        Witness::new(
            "homology",
            format!("H_{}: source {} target {} induced rank {}", c.degree, c.source_dim, c.target_dim, c.induced_rank),
        )
        .at(c.degree)
        .counts(c.source_dim.max(c.target_dim), c.induced_rank)
    }
}

/// One checked `(property, map, n)` combination.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub check: String,
    pub map: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n: Option<usize>,
    pub verdict: Outcome,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Witness>,
}

impl Cell {
    /// `Ok(None)` passes, `Ok(Some(w))` fails with `w`, `Err` is an invariant violation.
    pub fn from_check(check: &str, map: &str, n: Option<usize>, result: Result<Option<Witness>>) -> Self {
        let (verdict, witness) = match result {
            Ok(None) => (Outcome::Pass, None),
            Ok(Some(w)) => (Outcome::Fail, Some(w)),
            Err(e) => (Outcome::InvariantViolated, Some(Witness::from_error(&e))),
        };
        Cell { check: check.into(), map: map.into(), n, verdict, witness }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub axiom: String,
    pub field: Field,
    pub parameters: BTreeMap<String, serde_json::Value>,
    pub cells: Vec<Cell>,
    #[serde(skip)]
    pub elapsed: Option<Duration>,
}

impl AxiomReport {
    pub fn new(axiom: impl Into<String>, field: Field) -> Self {
        AxiomReport { axiom: axiom.into(), field, parameters: BTreeMap::new(), cells: Vec::new(), elapsed: None }
    }

    pub fn param(mut self, key: &str, value: impl Into<serde_json::Value>) -> Self {
        self.parameters.insert(key.into(), value.into());
        self
    }

    pub fn record(&mut self, check: &str, map: &str, n: Option<usize>, result: Result<Option<Witness>>) {
        self.cells.push(Cell::from_check(check, map, n, result));
    }

    /// Append another report's cells, prefixing their check names.
    pub fn absorb(&mut self, other: AxiomReport) {
        for mut c in other.cells {
            c.check = format!("{}/{}", other.axiom, c.check);
            self.cells.push(c);
        }
    }

    pub fn passed(&self) -> bool {
        self.cells.iter().all(|c| c.verdict == Outcome::Pass)
    }

    pub fn has_violation(&self) -> bool {
        self.cells.iter().any(|c| c.verdict == Outcome::InvariantViolated)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Cell> {
        self.cells.iter().filter(|c| c.verdict != Outcome::Pass)
    }

    pub fn find(&self, check: &str, map: &str, n: Option<usize>) -> Option<&Cell> {
        self.cells.iter().find(|c| c.check == check && c.map == map && c.n == n)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let params: Vec<String> = self.parameters.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let _ = writeln!(s, "== {} over {} [{}]", self.axiom, self.field, params.join(" "));
        for c in &self.cells {
            let n = c.n.map(|n| format!(" n={n}")).unwrap_or_default();
            let _ = write!(s, "  {:<4} {} {}{}", c.verdict.to_string(), c.check, c.map, n);
            if let Some(w) = &c.witness {
                let deg = w.degree.map(|d| format!(" deg {d}")).unwrap_or_default();
                let _ = write!(s, "  ({}{}: {})", w.kind, deg, w.detail);
            }
            s.push('\n');
        }
        let passes = self.cells.iter().filter(|c| c.verdict == Outcome::Pass).count();
        let _ = write!(s, "  {passes}/{} cells pass", self.cells.len());
        if let Some(t) = self.elapsed {
            let _ = write!(s, " in {:.2}s", t.as_secs_f64());
        }
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiers() {
        let mut r = AxiomReport::new("demo", Field::Rational);
        r.record("a", "f", Some(1), Ok(None));
        assert!(r.passed());
        r.record("b", "f", None, Ok(Some(Witness::new("rank", "short").at(2))));
        r.record("c", "g", None, Err(Error::DivisionByZero));
        assert!(!r.passed());
        assert!(r.has_violation());
        assert_eq!(r.failures().count(), 2);
        let json = serde_json::to_string(&r).unwrap();
        assert!(!json.contains("elapsed"));
        let back: AxiomReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }
}
