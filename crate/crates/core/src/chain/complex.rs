use std::fmt;

use crate::error::{Error, Result};
use crate::guard;
use crate::linalg::{Field, Matrix};

/// Cap used by the sphere and disk constructors unless one is given.
pub const DEFAULT_CAP: usize = 8;

/// A bounded chain complex `X_0 ← X_1 ← ⋯ ← X_cap` over an exact field.
///
/// Data is exact through degree `cap`; above it every group is treated as unknown
/// and reported as zero.
#[derive(Clone, PartialEq, Eq)]
pub struct ChainComplex {
    field: Field,
    cap: usize,
    dims: Vec<usize>,
    // diffs[n] is d_n: X_n → X_{n-1}, stored for 0..=cap+1
    diffs: Vec<Matrix>,
    labels: Option<Vec<Vec<String>>>,
}

impl ChainComplex {
    /// Build a complex from its dimensions `dims[0..=cap]` and differentials `d_1..d_cap`.
    pub fn new(field: Field, dims: Vec<usize>, diffs: Vec<Matrix>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::DimensionMismatch("a complex needs at least degree 0".into()));
        }
        let cap = dims.len() - 1;
        if diffs.len() != cap {
            return Err(Error::DimensionMismatch(format!(
                "{} differentials given for cap {cap}",
                diffs.len()
            )));
        }
        if let Some(&big) = dims.iter().max() {
            guard::check("complex dimension", big)?;
        }
        let mut all = Vec::with_capacity(cap + 2);
        all.push(Matrix::zeros(field, 0, dims[0]));
        for (k, d) in diffs.into_iter().enumerate() {
            let n = k + 1;
            field.ensure_same(d.field())?;
            if d.shape() != (dims[n - 1], dims[n]) {
                return Err(Error::DimensionMismatch(format!(
                    "d_{n} has shape {:?}, expected {:?}",
                    d.shape(),
                    (dims[n - 1], dims[n])
                )));
            }
            all.push(d);
        }
        all.push(Matrix::zeros(field, dims[cap], 0));
        let c = ChainComplex { field, cap, dims, diffs: all, labels: None };
        for n in 2..=cap {
            if !c.diffs[n - 1].mul(&c.diffs[n])?.is_zero() {
                return Err(Error::NotAComplex { degree: n });
            }
        }
        Ok(c)
    }

    /// Attach basis labels, one list per degree `0..=cap`.
    pub fn with_labels(mut self, labels: Vec<Vec<String>>) -> Result<Self> {
        if labels.len() != self.cap + 1 || labels.iter().zip(&self.dims).any(|(l, &d)| l.len() != d) {
            return Err(Error::DimensionMismatch("label lists do not match dimensions".into()));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn zero(field: Field, cap: usize) -> Self {
        let dims = vec![0; cap + 1];
        let diffs = (0..cap).map(|_| Matrix::zeros(field, 0, 0)).collect();
        ChainComplex::new(field, dims, diffs).expect("zero complex is valid")
    }

    /// `k` in degree `n`; cap `DEFAULT_CAP` (raised to `n` if needed).
    pub fn sphere(n: usize, field: Field) -> Self {
        Self::sphere_capped(n, field, DEFAULT_CAP.max(n)).expect("cap covers the sphere")
    }

    pub fn sphere_capped(n: usize, field: Field, cap: usize) -> Result<Self> {
        if n > cap {
            return Err(Error::OutOfRange(format!("sphere degree {n} above cap {cap}")));
        }
        let mut dims = vec![0; cap + 1];
        dims[n] = 1;
        let diffs = (1..=cap).map(|k| Matrix::zeros(field, dims[k - 1], dims[k])).collect();
        let labels = (0..=cap).map(|k| if k == n { vec![format!("s{n}")] } else { vec![] }).collect();
        ChainComplex::new(field, dims, diffs)?.with_labels(labels)
    }

    /// `k` in degrees `n` and `n-1` with identity differential.
    pub fn disk(n: usize, field: Field) -> Result<Self> {
        Self::disk_capped(n, field, DEFAULT_CAP.max(n))
    }

    pub fn disk_capped(n: usize, field: Field, cap: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::OutOfRange("disk degree must be at least 1".into()));
        }
        if n > cap {
            return Err(Error::OutOfRange(format!("disk degree {n} above cap {cap}")));
        }
        let mut dims = vec![0; cap + 1];
        dims[n] = 1;
        dims[n - 1] = 1;
        let diffs = (1..=cap)
            .map(|k| {
                let mut m = Matrix::zeros(field, dims[k - 1], dims[k]);
                if k == n {
                    m.add_int(0, 0, 1);
                }
                m
            })
            .collect();
        let labels = (0..=cap)
            .map(|k| match k {
                _ if k == n => vec![format!("e{n}")],
                _ if k + 1 == n => vec![format!("b{}", n - 1)],
                _ => vec![],
            })
            .collect();
        ChainComplex::new(field, dims, diffs)?.with_labels(labels)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Dimension in degree `n`; zero above the cap.
    pub fn dim(&self, n: usize) -> usize {
        self.dims.get(n).copied().unwrap_or(0)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn max_dim(&self) -> usize {
        self.dims.iter().copied().max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    /// Lowest degree carrying a nonzero group.
    pub fn bottom_degree(&self) -> Option<usize> {
        self.dims.iter().position(|&d| d > 0)
    }

    pub fn top_degree(&self) -> Option<usize> {
        self.dims.iter().rposition(|&d| d > 0)
    }

    /// `d_n: X_n → X_{n-1}` for `n ≤ cap + 1`.
    pub fn d(&self, n: usize) -> &Matrix {
        assert!(n <= self.cap + 1, "differential d_{n} beyond cap {}", self.cap);
        &self.diffs[n]
    }

    pub fn label(&self, n: usize, i: usize) -> String {
        match &self.labels {
            Some(l) => l[n][i].clone(),
            None => format!("[{n}:{i}]"),
        }
    }

    pub fn labels(&self) -> Option<&Vec<Vec<String>>> {
        self.labels.as_ref()
    }

    /// Euler characteristic over degrees `0..=cap`.
    pub fn euler_characteristic(&self) -> i64 {
        self.dims.iter().enumerate().map(|(n, &d)| if n % 2 == 0 { d as i64 } else { -(d as i64) }).sum()
    }

    /// Restrict to a smaller cap.
    pub fn truncate(&self, cap: usize) -> Self {
        if cap >= self.cap {
            return self.clone();
        }
        ChainComplex {
            field: self.field,
            cap,
            dims: self.dims[..=cap].to_vec(),
            diffs: {
                let mut d = self.diffs[..=cap].to_vec();
                d.push(Matrix::zeros(self.field, self.dims[cap], 0));
                d
            },
            labels: self.labels.as_ref().map(|l| l[..=cap].to_vec()),
        }
    }

    /// Same dimensions and differentials through the smaller of the two caps.
    pub fn same_data(&self, other: &ChainComplex) -> bool {
        let c = self.cap.min(other.cap);
        self.field == other.field
            && (0..=c).all(|n| self.dims[n] == other.dims[n])
            && (1..=c).all(|n| self.diffs[n] == other.diffs[n])
    }
}

impl fmt::Debug for ChainComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nz: Vec<String> =
            self.dims.iter().enumerate().filter(|(_, &d)| d > 0).map(|(n, d)| format!("{n}:{d}")).collect();
        write!(f, "ChainComplex<{}, cap {}>{{{}}}", self.field, self.cap, nz.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spheres_and_disks() {
        let s = ChainComplex::sphere(0, Field::Rational);
        assert_eq!(s.dims()[..2], [1, 0]);
        let d = ChainComplex::disk(1, Field::Prime(2)).unwrap();
        assert_eq!((d.dim(0), d.dim(1)), (1, 1));
        assert_eq!(d.d(1), &Matrix::identity(Field::Prime(2), 1));
        let d3 = ChainComplex::disk(3, Field::Rational).unwrap();
        assert_eq!((d3.dim(2), d3.dim(3), d3.total_dim()), (1, 1, 2));
        assert!(ChainComplex::disk(0, Field::Rational).is_err());
        assert!(ChainComplex::sphere_capped(4, Field::Rational, 3).is_err());
    }

    #[test]
    fn rejects_non_complex() {
        let f = Field::Rational;
        let one = Matrix::identity(f, 1);
        let r = ChainComplex::new(f, vec![1, 1, 1], vec![one.clone(), one]);
        assert!(matches!(r, Err(Error::NotAComplex { degree: 2 })));
    }

    #[test]
    fn rejects_bad_shapes() {
        let f = Field::Rational;
        let r = ChainComplex::new(f, vec![1, 2], vec![Matrix::zeros(f, 2, 1)]);
        assert!(matches!(r, Err(Error::DimensionMismatch(_))));
    }
}
