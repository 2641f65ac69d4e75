//! Spheres, disks and the standard maps between them.

use std::sync::Arc;

use crate::chain::{ChainComplex, ChainMap, DEFAULT_CAP};
use crate::error::Result;
use crate::linalg::{Field, Matrix};

/// The boundary inclusion `S(n−1) → D(n)`, `n ≥ 1`.
pub fn sphere_to_disk(n: usize, field: Field) -> ChainMap {
    sphere_to_disk_capped(n, field, DEFAULT_CAP.max(n)).expect("cap covers the disk")
}

pub fn sphere_to_disk_capped(n: usize, field: Field, cap: usize) -> Result<ChainMap> {
    let s = Arc::new(ChainComplex::sphere_capped(n - 1, field, cap)?);
    let d = Arc::new(ChainComplex::disk_capped(n, field, cap)?);
    ChainMap::from_fn(s.clone(), d.clone(), |k| {
        let mut m = Matrix::zeros(field, d.dim(k), s.dim(k));
        if k + 1 == n {
            m.add_int(0, 0, 1);
        }
        Ok(m)
    })
}

/// `0 → X`.
pub fn from_zero(x: &Arc<ChainComplex>) -> ChainMap {
    let z = Arc::new(ChainComplex::zero(x.field(), x.cap()));
    ChainMap::zero(z, x.clone()).expect("same field")
}

/// `0 → D(n)`.
pub fn zero_to_disk(n: usize, field: Field) -> Result<ChainMap> {
    Ok(from_zero(&Arc::new(ChainComplex::disk(n, field)?)))
}

/// `0 → S(0)`.
pub fn zero_to_unit(field: Field) -> ChainMap {
    from_zero(&Arc::new(ChainComplex::sphere(0, field)))
}
