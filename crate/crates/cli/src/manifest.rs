//! Expected verdicts: which cells must fail, per axiom and field.

use serde::Deserialize;

use cmonv::report::{AxiomReport, Outcome};

const SHIPPED: &str = include_str!("../manifest.json");

#[derive(Clone, Debug, Deserialize)]
pub struct CellKey {
    pub check: String,
    pub map: String,
    pub n: Option<usize>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct Entry {
    pub axiom: String,
    pub field: String,
    pub expected_failures: Vec<CellKey>,
    pub other_failures: bool,
}

#[derive(Clone, Debug, Deserialize)]
pub struct Manifest {
    pub entries: Vec<Entry>,
}

impl Manifest {
    pub fn shipped() -> Manifest {
        serde_json::from_str(SHIPPED).expect("shipped manifest parses")
    }

    fn entry(&self, r: &AxiomReport) -> Option<&Entry> {
        let field = r.field.to_string();
        self.entries.iter().find(|e| e.axiom == r.axiom && e.field == field)
    }

    /// Cells whose verdict differs from the manifest, as printable lines.
    pub fn mismatches(&self, r: &AxiomReport) -> Vec<String> {
        let entry = self.entry(r);
        let expected = |check: &str, map: &str, n: Option<usize>| {
            entry.is_some_and(|e| e.expected_failures.iter().any(|k| k.check == check && k.map == map && k.n == n))
        };
        let others = entry.is_some_and(|e| e.other_failures);
        let mut out = Vec::new();
        for c in &r.cells {
            let n = c.n.map(|n| format!(" n={n}")).unwrap_or_default();
            let want_fail = expected(&c.check, &c.map, c.n);
            match c.verdict {
                Outcome::Pass if want_fail => out.push(format!("{}: {} {}{n} passed, expected FAIL", r.axiom, c.check, c.map)),
                Outcome::Fail if !want_fail && !others => {
                    out.push(format!("{}: {} {}{n} failed, expected PASS", r.axiom, c.check, c.map))
                }
                _ => {}
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use cmonv::report::Witness;
    use cmonv::Field;

    #[test]
    fn shipped_manifest_matches_cells() {
        let m = Manifest::shipped();
        let mut r = AxiomReport::new("strong-cmon", Field::Prime(2));
        r.record("trivial-cofibration", "triv-cof-1", Some(2), Ok(Some(Witness::new("homology", "x"))));
        r.record("trivial-cofibration", "triv-cof-1", Some(3), Ok(None));
        assert!(m.mismatches(&r).is_empty());
        r.record("trivial-cofibration", "triv-cof-2", Some(2), Ok(None));
        assert_eq!(m.mismatches(&r).len(), 1);
        let mut q = AxiomReport::new("strong-cmon", Field::Rational);
        q.record("cofibration", "gen-cof-0-1", Some(2), Ok(Some(Witness::new("rank", "x"))));
        assert_eq!(m.mismatches(&q).len(), 1);
    }
}
