use std::sync::Arc;

use super::complex::ChainComplex;
use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix, Scalar};

/// A degree-preserving chain map, known in degrees `0..=cap`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    source: Arc<ChainComplex>,
    target: Arc<ChainComplex>,
    comps: Vec<Matrix>,
}

impl ChainMap {
    /// Build and check a chain map; `comps[n]` is `f_n` for `n ≤ min(cap_s, cap_t)`.
    pub fn new(source: Arc<ChainComplex>, target: Arc<ChainComplex>, comps: Vec<Matrix>) -> Result<Self> {
        let m = Self::new_unchecked(source, target, comps)?;
        m.check_chain_condition()?;
        Ok(m)
    }

    /// Shape-checked only; the chain condition is the caller's responsibility.
    pub(crate) fn new_unchecked(
        source: Arc<ChainComplex>,
        target: Arc<ChainComplex>,
        comps: Vec<Matrix>,
    ) -> Result<Self> {
        source.field().ensure_same(target.field())?;
        let top = source.cap().min(target.cap());
        if comps.is_empty() || comps.len() > top + 1 {
            return Err(Error::DimensionMismatch(format!(
                "{} components for a map with common cap {top}",
                comps.len()
            )));
        }
        for (n, c) in comps.iter().enumerate() {
            source.field().ensure_same(c.field())?;
            if c.shape() != (target.dim(n), source.dim(n)) {
                return Err(Error::DimensionMismatch(format!(
                    "f_{n} has shape {:?}, expected {:?}",
                    c.shape(),
                    (target.dim(n), source.dim(n))
                )));
            }
        }
        Ok(ChainMap { source, target, comps })
    }

    /// Build from a closure producing each component.
    pub fn from_fn(
        source: Arc<ChainComplex>,
        target: Arc<ChainComplex>,
        mut comp: impl FnMut(usize) -> Result<Matrix>,
    ) -> Result<Self> {
        let top = source.cap().min(target.cap());
        let comps = (0..=top).map(&mut comp).collect::<Result<Vec<_>>>()?;
        Self::new(source, target, comps)
    }

    pub(crate) fn check_chain_condition(&self) -> Result<()> {
        for n in 1..=self.cap() {
            let lhs = self.target.d(n).mul(&self.comps[n])?;
            let rhs = self.comps[n - 1].mul(self.source.d(n))?;
            if lhs != rhs {
                return Err(Error::NotAChainMap { degree: n });
            }
        }
        Ok(())
    }

    pub fn identity(x: Arc<ChainComplex>) -> Self {
        let comps = (0..=x.cap()).map(|n| Matrix::identity(x.field(), x.dim(n))).collect();
        ChainMap { source: x.clone(), target: x, comps }
    }

    pub fn zero(source: Arc<ChainComplex>, target: Arc<ChainComplex>) -> Result<Self> {
        source.field().ensure_same(target.field())?;
        let top = source.cap().min(target.cap());
        let comps = (0..=top).map(|n| Matrix::zeros(source.field(), target.dim(n), source.dim(n))).collect();
        Ok(ChainMap { source, target, comps })
    }

    pub fn field(&self) -> Field {
        self.source.field()
    }

    pub fn source(&self) -> &Arc<ChainComplex> {
        &self.source
    }

    pub fn target(&self) -> &Arc<ChainComplex> {
        &self.target
    }

    /// Largest degree in which the map is known.
    pub fn cap(&self) -> usize {
        self.comps.len() - 1
    }

    pub fn comp(&self, n: usize) -> &Matrix {
        assert!(n <= self.cap(), "component f_{n} beyond map cap {}", self.cap());
        &self.comps[n]
    }

    pub fn comps(&self) -> &[Matrix] {
        &self.comps
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &ChainMap) -> Result<ChainMap> {
        if !first.target.same_data(&self.source) {
            return Err(Error::DimensionMismatch("composed maps do not share a middle complex".into()));
        }
        let top = self.cap().min(first.cap());
        let comps = (0..=top).map(|n| self.comps[n].mul(&first.comps[n])).collect::<Result<Vec<_>>>()?;
        ChainMap::new_unchecked(first.source.clone(), self.target.clone(), comps)
    }

    fn zip(&self, other: &ChainMap, subtract: bool) -> Result<ChainMap> {
        if !self.source.same_data(&other.source) || !self.target.same_data(&other.target) {
            return Err(Error::DimensionMismatch("maps have different source or target".into()));
        }
        let top = self.cap().min(other.cap());
        let comps = (0..=top)
            .map(|n| if subtract { self.comps[n].sub(&other.comps[n]) } else { self.comps[n].add(&other.comps[n]) })
            .collect::<Result<Vec<_>>>()?;
        ChainMap::new_unchecked(self.source.clone(), self.target.clone(), comps)
    }

    pub fn add(&self, other: &ChainMap) -> Result<ChainMap> {
        self.zip(other, false)
    }

    pub fn sub(&self, other: &ChainMap) -> Result<ChainMap> {
        self.zip(other, true)
    }

    pub fn neg(&self) -> ChainMap {
        ChainMap { comps: self.comps.iter().map(Matrix::neg).collect(), ..self.clone() }
    }

    pub fn scale(&self, s: &Scalar) -> ChainMap {
        ChainMap { comps: self.comps.iter().map(|m| m.scale(s)).collect(), ..self.clone() }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Matrix::is_zero)
    }

    /// Equal components through the common cap.
    pub fn agrees_with(&self, other: &ChainMap) -> bool {
        let top = self.cap().min(other.cap());
        (0..=top).all(|n| self.comps[n] == other.comps[n])
    }

    /// First degree (with both sides' shapes) where the maps disagree.
    pub fn first_disagreement(&self, other: &ChainMap) -> Option<usize> {
        let top = self.cap().min(other.cap());
        (0..=top).find(|&n| self.comps[n] != other.comps[n])
    }

    pub fn is_identity(&self) -> bool {
        self.comps.iter().all(Matrix::is_identity)
    }

    /// Degreewise injective in every known degree.
    pub fn is_mono(&self) -> bool {
        self.comps.iter().all(Matrix::is_injective)
    }

    pub fn first_non_mono_degree(&self) -> Option<usize> {
        self.comps.iter().position(|m| !m.is_injective())
    }

    pub fn is_epi(&self) -> bool {
        self.comps.iter().all(Matrix::is_surjective)
    }

    /// Degreewise invertible in every known degree.
    pub fn is_iso(&self) -> bool {
        self.comps.iter().all(|m| m.rows() == m.cols() && m.is_injective())
    }

    pub fn first_non_iso_degree(&self) -> Option<usize> {
        self.comps.iter().position(|m| !(m.rows() == m.cols() && m.is_injective()))
    }

    /// Degreewise inverse, when every component is invertible.
    pub fn inverse(&self) -> Result<ChainMap> {
        let comps = self
            .comps
            .iter()
            .enumerate()
            .map(|(n, m)| {
                m.inverse().ok_or_else(|| Error::InvariantViolated(format!("map is not invertible in degree {n}")))
            })
            .collect::<Result<Vec<_>>>()?;
        ChainMap::new_unchecked(self.target.clone(), self.source.clone(), comps)
    }

    /// Same components viewed between other complexes with identical data.
    pub fn retarget(&self, source: Arc<ChainComplex>, target: Arc<ChainComplex>) -> Result<ChainMap> {
        if !source.same_data(&self.source) || !target.same_data(&self.target) {
            return Err(Error::DimensionMismatch("retarget onto different complexes".into()));
        }
        let top = self.cap().min(source.cap()).min(target.cap());
        ChainMap::new_unchecked(source, target, self.comps[..=top].to_vec())
    }

    /// Restrict to degrees `0..=cap`.
    pub fn truncate(&self, cap: usize) -> ChainMap {
        let top = cap.min(self.cap());
        ChainMap { comps: self.comps[..=top].to_vec(), ..self.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inclusion_into_disk() {
        let f = Field::Rational;
        let s = Arc::new(ChainComplex::sphere(0, f));
        let d = Arc::new(ChainComplex::disk(1, f).unwrap());
        let mut comps = vec![Matrix::identity(f, 1)];
        comps.extend((1..=8).map(|n| Matrix::zeros(f, d.dim(n), s.dim(n))));
        let inc = ChainMap::new(s.clone(), d.clone(), comps).unwrap();
        assert!(inc.is_mono());
        assert!(!inc.is_epi());
        assert!(ChainMap::identity(d.clone()).compose(&inc).unwrap().agrees_with(&inc));
    }

    #[test]
    fn detects_non_chain_map() {
        let f = Field::Rational;
        let d = Arc::new(ChainComplex::disk(1, f).unwrap());
        let s = Arc::new(ChainComplex::sphere(1, f));
        // a cycle cannot go to a chain with nonzero boundary
        let mut comps: Vec<Matrix> = (0..=8).map(|n| Matrix::zeros(f, d.dim(n), s.dim(n))).collect();
        comps[1] = Matrix::identity(f, 1);
        assert!(matches!(ChainMap::new(s, d, comps), Err(Error::NotAChainMap { degree: 1 })));
    }
}
