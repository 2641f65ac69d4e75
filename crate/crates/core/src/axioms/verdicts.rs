use rayon::prelude::*;

use super::generators::{pushout_product, Generator, GeneratingSets};
use crate::chain::{classify, cokernel, first_non_quasi_iso_degree, homology, ChainMap};
use crate::cube::{bracketing_check, box_power, box_power_quotient, mono_witness};
use crate::equivariant::{is_free_sigma2, EquivariantComplex};
use crate::error::{Error, Result};
use crate::linalg::Field;
use crate::report::{AxiomReport, Cell, Witness};

/// Non-quasi-isomorphism witness; for a mono the homology of the cokernel is reported.
pub fn acyclicity_witness(f: &ChainMap) -> Result<Option<Witness>> {
    let Some(c) = first_non_quasi_iso_degree(f)? else { return Ok(None) };
    if f.is_mono() {
        let q = cokernel(f)?;
        let h = homology(&q.object, c.degree)?.dim;
        let w = Witness::new("homology", format!("the cokernel has H_{} of dimension {h}", c.degree)).at(c.degree).counts(0, h);
        return Ok(Some(w));
    }
    Ok(Some(Witness::homology(&c)))
}

fn run_cells<T: Sync>(items: &[T], f: impl Fn(&T) -> Vec<Cell> + Sync + Send) -> Vec<Cell> {
    items.par_iter().map(f).collect::<Vec<_>>().into_iter().flatten().collect()
}

/// `f □ g` is a cofibration for `f, g ∈ I`, and trivial when either factor lies in `J`.
pub fn check_pushout_product_axiom(gs: &GeneratingSets) -> AxiomReport {
    let mut report = AxiomReport::new("pushout-product", gs.field).param("gen_bound", gs.bound).param("cap", gs.cap);
    let pairs: Vec<(&Generator, &Generator)> = gs.all().flat_map(|f| gs.all().map(move |g| (f, g))).collect();
    report.cells = run_cells(&pairs, |(f, g)| {
        let name = format!("{} □ {}", f.name, g.name);
        let built = pushout_product(&f.map, &g.map).map(|(_, m)| m);
        let mono = built.as_ref().map_err(Clone::clone).map(|m| mono_witness("pushout product", m));
        let mut cells = vec![Cell::from_check("cofibration", &name, None, mono)];
        if f.is_trivial() || g.is_trivial() {
            let acyclic = built.and_then(|m| acyclicity_witness(&m));
            cells.push(Cell::from_check("trivial-cofibration", &name, None, acyclic));
        }
        cells
    });
    report
}

/// The cells of the strong commutative monoid axiom for one generator and power.
pub fn strong_cmon_cells(g: &Generator, n: usize) -> Vec<Cell> {
    let q = box_power_quotient(&g.map, n);
    let mono = q.as_ref().map_err(Clone::clone).map(|q| mono_witness("f^{□n}/Σn", &q.map));
    let mut cells = vec![Cell::from_check("cofibration", &g.name, Some(n), mono)];
    if g.is_trivial() {
        cells.push(Cell::from_check("trivial-cofibration", &g.name, Some(n), q.and_then(|q| acyclicity_witness(&q.map))));
    }
    cells
}

/// `f^{□n}/Σ_n` is a cofibration for `f ∈ I ∪ J` and trivial for `f ∈ J`, `1 ≤ n ≤ n_max`.
pub fn check_strong_cmon_axiom(gs: &GeneratingSets, n_max: usize) -> AxiomReport {
    let mut report = AxiomReport::new("strong-cmon", gs.field)
        .param("gen_bound", gs.bound)
        .param("n_max", n_max)
        .param("cap", gs.cap);
    let jobs: Vec<(&Generator, usize)> = gs.all().flat_map(|g| (1..=n_max).map(move |n| (g, n))).collect();
    report.cells = run_cells(&jobs, |(g, n)| strong_cmon_cells(g, *n));
    report
}

/// `f^{□2}` is a mono whose cokernel is degreewise projective over the group algebra of `Σ_2`.
pub fn lurie_sigma2_cell(f: &ChainMap) -> Result<Option<Witness>> {
    let bp = box_power(f, 2)?;
    if let Some(w) = mono_witness("f^{□2}", &bp.map.map) {
        return Ok(Some(w));
    }
    if f.field() != Field::Prime(2) {
        // 2 is invertible: every module over the group algebra is projective
        return Ok(None);
    }
    let q = cokernel(&bp.map.map)?;
    let tau = bp.map.target.action().generator(0).ok_or_else(|| Error::InvariantViolated("missing swap".into()))?;
    let tau_q = q.descend(&q.projection.compose(tau)?)?;
    let coker = EquivariantComplex::new(q.object.clone(), 2, vec![Some(tau_q)])?;
    let free = is_free_sigma2(&coker)?;
    Ok(free.iter().position(|&b| !b).map(|d| {
        let dim = q.object.dim(d);
        Witness::new("non-free", format!("cokernel in degree {d} has dimension {dim} and is not a free Σ2-module"))
            .at(d)
            .counts(0, dim)
    }))
}

pub fn check_lurie_axiom_sigma2(gs: &GeneratingSets) -> AxiomReport {
    let basis = if gs.field == Field::Prime(2) { "freeness test" } else { "semisimple group algebra" };
    let mut report = AxiomReport::new("lurie-sigma2", gs.field).param("gen_bound", gs.bound).param("projectivity", basis);
    report.cells = run_cells(&gs.i, |g| vec![Cell::from_check("sigma2-projective", &g.name, Some(2), lurie_sigma2_cell(&g.map))]);
    report
}

/// The punctured-cube domain of `f^{□n}` agrees with the iterated binary pushout product.
pub fn check_bracketing(gs: &GeneratingSets, n_max: usize) -> AxiomReport {
    let mut report = AxiomReport::new("bracketing", gs.field).param("gen_bound", gs.bound).param("n_max", n_max);
    let jobs: Vec<(&Generator, usize)> = gs.all().flat_map(|g| (1..=n_max).map(move |n| (g, n))).collect();
    report.cells = run_cells(&jobs, |(g, n)| vec![Cell::from_check("cube-vs-bracketing", &g.name, Some(*n), bracketing_check(&g.map, *n))]);
    report
}

/// `Sym^n` of a trivial cofibration is a quasi-isomorphism.
pub fn check_sym_trivial(gs: &GeneratingSets, n_max: usize) -> AxiomReport {
    let mut report = AxiomReport::new("sym-trivial", gs.field).param("gen_bound", gs.bound).param("n_max", n_max);
    let jobs: Vec<(&Generator, usize)> = gs.j.iter().flat_map(|g| (1..=n_max).map(move |n| (g, n))).collect();
    report.cells = run_cells(&jobs, |(g, n)| {
        let m = crate::sym::sym_power_map(&g.map, *n);
        vec![Cell::from_check("quasi-iso", &g.name, Some(*n), m.and_then(|m| acyclicity_witness(&m)))]
    });
    report
}

/// Replays the classification of a generator on its own.
pub fn classify_generator(g: &Generator) -> Result<Option<Witness>> {
    let c = classify(&g.map)?;
    Ok((!c.is_mono || (g.is_trivial() && !c.is_quasi_iso)).then(|| Witness::new("classification", format!("{:?}", c.verdict))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Outcome;

    fn failing(r: &AxiomReport) -> Vec<(String, String, Option<usize>)> {
        r.failures().map(|c| (c.check.clone(), c.map.clone(), c.n)).collect()
    }

    #[test]
    fn strong_cmon_small() {
        let q = check_strong_cmon_axiom(&GeneratingSets::new(Field::Rational, 2).unwrap(), 2);
        assert!(q.passed(), "{}", q.to_text());
        let f2 = check_strong_cmon_axiom(&GeneratingSets::new(Field::Prime(2), 2).unwrap(), 2);
        assert_eq!(
            failing(&f2),
            vec![
                ("trivial-cofibration".into(), "triv-cof-1".into(), Some(2)),
                ("trivial-cofibration".into(), "triv-cof-2".into(), Some(2)),
            ]
        );
        let w = f2.find("trivial-cofibration", "triv-cof-1", Some(2)).unwrap().witness.clone().unwrap();
        assert_eq!((w.degree, w.found), (Some(2), Some(1)));
    }

    #[test]
    fn lurie_separates() {
        assert!(check_lurie_axiom_sigma2(&GeneratingSets::new(Field::Rational, 1).unwrap()).passed());
        let r = check_lurie_axiom_sigma2(&GeneratingSets::new(Field::Prime(2), 1).unwrap());
        let c = r.find("sigma2-projective", "gen-cof-0-1", Some(2)).unwrap();
        assert_eq!(c.verdict, Outcome::Fail);
        assert_eq!(c.witness.as_ref().unwrap().degree, Some(2));
        let u = r.find("sigma2-projective", "gen-cof-unit", Some(2)).unwrap();
        assert_eq!(u.witness.as_ref().unwrap().degree, Some(0));
    }

    #[test]
    fn pushout_products_pass() {
        for field in [Field::Rational, Field::Prime(2)] {
            let r = check_pushout_product_axiom(&GeneratingSets::new(field, 2).unwrap());
            assert!(r.passed(), "{}", r.to_text());
        }
    }
}
