use serde::Serialize;

use super::complex::ChainComplex;
use super::map::ChainMap;
use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Homology in one degree: its dimension and cycle representatives (as columns).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homology {
    pub degree: usize,
    pub dim: usize,
    pub basis: Matrix,
}

/// `H_n(X)`, trusted only for `n ≤ cap − 1`.
pub fn homology(x: &ChainComplex, n: usize) -> Result<Homology> {
    if n + 1 > x.cap() {
        return Err(Error::UntrustedDegree { degree: n, cap: x.cap() });
    }
    let cycles = x.d(n).kernel_basis();
    let boundaries = x.d(n + 1).image_basis();
    // pivots falling in the cycle block pick a complement of the boundaries
    let both = Matrix::hstack(x.field(), x.dim(n), &[&boundaries, &cycles])?;
    let (_, pivots) = both.rref();
    let reps: Vec<usize> = pivots.into_iter().filter(|&p| p >= boundaries.cols()).map(|p| p - boundaries.cols()).collect();
    let basis = cycles.select_cols(&reps);
    Ok(Homology { degree: n, dim: reps.len(), basis })
}

/// Homology dimensions in every trusted degree `0..cap`.
pub fn homology_dims(x: &ChainComplex) -> Vec<usize> {
    (0..x.cap()).map(|n| x.dim(n) - x.d(n).rank() - x.d(n + 1).rank()).collect()
}

/// Rank of `H_n(f)`.
pub fn induced_rank(f: &ChainMap, n: usize) -> Result<usize> {
    if n + 1 > f.cap() {
        return Err(Error::UntrustedDegree { degree: n, cap: f.cap() });
    }
    let (s, t) = (f.source(), f.target());
    let cycles = s.d(n).kernel_basis();
    let image = f.comp(n).mul(&cycles)?;
    let bt = t.d(n + 1).image_basis();
    let both = Matrix::hstack(f.field(), t.dim(n), &[&bt, &image])?;
    Ok(both.rank() - bt.rank())
}

/// Per-degree comparison of `H_n(f)` in the trusted range of `f`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyComparison {
    pub degree: usize,
    pub source_dim: usize,
    pub target_dim: usize,
    pub induced_rank: usize,
}

impl HomologyComparison {
    pub fn is_iso(&self) -> bool {
        self.source_dim == self.induced_rank && self.target_dim == self.induced_rank
    }
}

pub fn compare_homology(f: &ChainMap) -> Result<Vec<HomologyComparison>> {
    (0..f.cap())
        .map(|n| {
            Ok(HomologyComparison {
                degree: n,
                source_dim: homology(f.source(), n)?.dim,
                target_dim: homology(f.target(), n)?.dim,
                induced_rank: induced_rank(f, n)?,
            })
        })
        .collect()
}

/// Induced isomorphism on homology in every trusted degree.
pub fn is_quasi_iso(f: &ChainMap) -> Result<bool> {
    Ok(compare_homology(f)?.iter().all(HomologyComparison::is_iso))
}

pub fn first_non_quasi_iso_degree(f: &ChainMap) -> Result<Option<HomologyComparison>> {
    Ok(compare_homology(f)?.into_iter().find(|c| !c.is_iso()))
}

/// Model-structure verdict for a map in `Ch_{≥0}(k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    TrivialCofibration,
    Cofibration,
    WeakEquivalenceOnly,
    Neither,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MapClass {
    pub is_mono: bool,
    pub is_quasi_iso: bool,
    pub verdict: Verdict,
}

/// Cofibration means degreewise mono; weak equivalence means quasi-isomorphism.
pub fn classify(f: &ChainMap) -> Result<MapClass> {
    let is_mono = f.is_mono();
    let is_quasi_iso = is_quasi_iso(f)?;
    let verdict = match (is_mono, is_quasi_iso) {
        (true, true) => Verdict::TrivialCofibration,
        (true, false) => Verdict::Cofibration,
        (false, true) => Verdict::WeakEquivalenceOnly,
        (false, false) => Verdict::Neither,
    };
    Ok(MapClass { is_mono, is_quasi_iso, verdict })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::linalg::Field;

    #[test]
    fn sphere_and_disk_homology() {
        let f = Field::Rational;
        let s = ChainComplex::sphere(3, f);
        assert_eq!(homology(&s, 3).unwrap().dim, 1);
        assert_eq!(homology(&s, 2).unwrap().dim, 0);
        let d = ChainComplex::disk(2, f).unwrap();
        assert!(homology_dims(&d).iter().all(|&h| h == 0));
        assert!(matches!(homology(&d, 8), Err(Error::UntrustedDegree { .. })));
    }

    #[test]
    fn zero_into_disk_is_trivial_cofibration() {
        let f = Field::Prime(2);
        let z = Arc::new(ChainComplex::zero(f, 8));
        let d = Arc::new(ChainComplex::disk(1, f).unwrap());
        let m = ChainMap::zero(z, d).unwrap();
        assert_eq!(classify(&m).unwrap().verdict, Verdict::TrivialCofibration);
    }

    #[test]
    fn representatives_are_cycles() {
        let f = Field::Rational;
        let s = ChainComplex::sphere(0, f);
        let h = homology(&s, 0).unwrap();
        assert_eq!(h.basis, Matrix::identity(f, 1));
    }
}
