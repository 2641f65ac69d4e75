use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::generators::GeneratingSets;
use super::random::random_complex;
use super::verdicts::acyclicity_witness;
use crate::chain::{compare_homology, direct_sum, pushout, tensor_map, tensor_maps_between, ChainComplex, ChainMap, TensorFactors, TensorPart};
use crate::cube::box_power_quotient;
use crate::equivariant::{homotopy_orbits, tensor_power_action};
use crate::error::{Error, Result};
use crate::linalg::Field;
use crate::report::{AxiomReport, Cell, Witness};

pub const MAX_TRIALS: usize = 100;

/// Attach `cell` to `a` along the zero map from its source.
fn attach(a: &Arc<ChainComplex>, cell: &ChainMap) -> Result<ChainMap> {
    let a = Arc::new(a.truncate(a.cap().min(cell.cap())));
    let zero = ChainMap::zero(cell.source().clone(), a)?;
    Ok(pushout(&zero, cell)?.in_b)
}

/// Random finite cell chains of `j ⊗ id_Z`, `j ∈ J`, must be quasi-isomorphisms.
pub fn monoid_axiom_probe(gs: &GeneratingSets, trials: usize, seed: u64) -> AxiomReport {
    let mut report = AxiomReport::new("monoid-axiom", gs.field).param("trials", trials).param("seed", seed);
    if trials > MAX_TRIALS {
        report.record("trials", "config", None, Err(Error::OutOfRange(format!("at most {MAX_TRIALS} trials"))));
        return report;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let seeds: Vec<u64> = (0..trials).map(|_| rng.gen()).collect();
    report.cells = seeds
        .par_iter()
        .enumerate()
        .map(|(t, &s)| {
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            let (name, result) = monoid_trial(gs, &mut rng);
            Cell::from_check("quasi-iso", &format!("trial-{t}: {name}"), None, result)
        })
        .collect();
    report
}

fn monoid_trial(gs: &GeneratingSets, rng: &mut ChaCha8Rng) -> (String, Result<Option<Witness>>) {
    let cap = rng.gen_range(gs.bound.max(2)..=6.max(gs.bound));
    let length = rng.gen_range(1..=3);
    let mut names = Vec::with_capacity(length);
    let result = (|| {
        let base = Arc::new(random_complex(rng, gs.field, cap, 3)?);
        let mut a = base.clone();
        let mut total = ChainMap::identity(base);
        for _ in 0..length {
            let j = &gs.j[rng.gen_range(0..gs.j.len())];
            let z = Arc::new(random_complex(rng, gs.field, cap, 3)?);
            names.push(format!("{}⊗Z{:?}", j.name, z.dims()));
            let step = attach(&a, &tensor_map(&j.map, &ChainMap::identity(z))?)?;
            total = step.compose(&total.retarget(total.source().clone(), step.source().clone())?)?;
            a = step.target().clone();
        }
        acyclicity_witness(&total)
    })();
    (names.join(" then "), result)
}

/// Pushout chains of `X ⊗ (j^{□n}/Σ_n)` for `n = 1..=n_max` and `j ∈ J`.
pub fn weak_cmon_probe(gs: &GeneratingSets, fixtures: &[(String, Arc<ChainComplex>)], n_max: usize) -> AxiomReport {
    let mut report = AxiomReport::new("weak-cmon", gs.field).param("n_max", n_max).param("gen_bound", gs.bound);
    let jobs: Vec<(&(String, Arc<ChainComplex>), usize)> =
        fixtures.iter().flat_map(|x| (0..gs.j.len()).map(move |k| (x, k))).collect();
    report.cells = jobs
        .par_iter()
        .map(|((xname, x), k)| {
            let j = &gs.j[*k];
            let mut cells = Vec::with_capacity(n_max + 1);
            let mut a = x.clone();
            let mut total = Ok(ChainMap::identity(x.clone()));
            for n in 1..=n_max {
                let name = format!("{xname}⊗{}", j.name);
                let step = (|| {
                    let q = box_power_quotient(&j.map, n)?;
                    let id_x = ChainMap::identity(x.clone());
                    let src = TensorFactors::new(gs.field, vec![x.clone(), q.source.object.clone()])?;
                    let tgt = TensorFactors::new(gs.field, vec![x.clone(), q.target.object.clone()])?;
                    let cell = tensor_maps_between(&src, &tgt, &[TensorPart::single(&id_x), TensorPart::single(&q.map)])?;
                    attach(&a, &cell)
                })();
                match step {
                    Ok(s) => {
                        cells.push(Cell::from_check("step-quasi-iso", &name, Some(n), acyclicity_witness(&s)));
                        total = total.and_then(|t: ChainMap| s.compose(&t.retarget(t.source().clone(), s.source().clone())?));
                        a = s.target().clone();
                    }
                    Err(e) => {
                        cells.push(Cell::from_check("step-quasi-iso", &name, Some(n), Err(e.clone())));
                        total = Err(e);
                    }
                }
            }
            let name = format!("{xname}⊗{}", j.name);
            cells.push(Cell::from_check("composite-quasi-iso", &name, Some(n_max), total.and_then(|t| acyclicity_witness(&t))));
            cells
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    report
}

/// Homotopy orbits of `X^{⊗n}` against `Sym^n X`, one cell per trusted degree.
pub fn rectification_probe(field: Field, x: &Arc<ChainComplex>, name: &str, n: usize, length: usize) -> AxiomReport {
    let mut report = AxiomReport::new("rectification", field).param("n", n).param("length", length);
    let built = (|| {
        if !(2..=3).contains(&n) {
            return Err(Error::OutOfRange(format!("rectification probe takes n = 2 or 3, got {n}")));
        }
        field.ensure_same(x.field())?;
        let e = tensor_power_action(x, n)?;
        let ho = homotopy_orbits(&e, length)?;
        compare_homology(&ho.comparison)
    })();
    match built {
        Ok(rows) => {
            for c in rows {
                let w = (!c.is_iso()).then(|| Witness::homology(&c));
                report.record(&format!("degree-{}", c.degree), name, Some(n), Ok(w));
            }
        }
        Err(e) => report.record("comparison", name, Some(n), Err(e)),
    }
    report
}

/// Spheres and disks used by the probes.
pub fn standard_fixtures(field: Field, cap: usize) -> Result<Vec<(String, Arc<ChainComplex>)>> {
    let sphere = |n| ChainComplex::sphere_capped(n, field, cap).map(Arc::new);
    Ok(vec![
        ("S(0)".into(), sphere(0)?),
        ("S(1)".into(), sphere(1)?),
        ("S(2)".into(), sphere(2)?),
        ("D(1)".into(), Arc::new(ChainComplex::disk_capped(1, field, cap)?)),
        ("S(0)+S(1)".into(), Arc::new(direct_sum(field, &[sphere(0)?, sphere(1)?])?)),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Outcome;

    #[test]
    fn monoid_probe_is_reproducible() {
        let gs = GeneratingSets::with_cap(Field::Prime(3), 2, 6).unwrap();
        let a = monoid_axiom_probe(&gs, 10, 42);
        assert!(a.passed(), "{}", a.to_text());
        let b = monoid_axiom_probe(&gs, 10, 42);
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert!(!monoid_axiom_probe(&gs, 101, 0).passed());
    }

    #[test]
    fn rectification_sphere() {
        let f2 = Field::Prime(2);
        let s0 = Arc::new(ChainComplex::sphere(0, f2));
        let r = rectification_probe(f2, &s0, "S(0)", 2, 6);
        let first = r.failures().next().unwrap();
        assert_eq!(first.check, "degree-1");
        let w = first.witness.as_ref().unwrap();
        assert_eq!(w.degree, Some(1));
        let q = Arc::new(ChainComplex::sphere(0, Field::Rational));
        assert!(rectification_probe(Field::Rational, &q, "S(0)", 2, 6).passed());
        assert_eq!(rectification_probe(f2, &s0, "S(0)", 4, 6).cells[0].verdict, Outcome::InvariantViolated);
    }

    #[test]
    fn weak_probe_inherits_failures() {
        let gs = GeneratingSets::new(Field::Prime(2), 1).unwrap();
        let x = vec![("unit".to_string(), Arc::new(ChainComplex::sphere(0, Field::Prime(2))))];
        let r = weak_cmon_probe(&gs, &x, 2);
        let bad: Vec<_> = r.failures().map(|c| (c.check.as_str(), c.n)).collect();
        assert_eq!(bad, vec![("step-quasi-iso", Some(2)), ("composite-quasi-iso", Some(2))]);
    }
}
