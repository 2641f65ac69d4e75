use std::sync::Arc;

use rand::Rng;

use crate::chain::{ChainComplex, ChainMap};
use crate::error::Result;
use crate::linalg::{Field, Matrix, Scalar};

fn scalar(rng: &mut impl Rng, field: Field) -> Scalar {
    Scalar::from_i64(field, rng.gen_range(-2..=2))
}

fn matrix(rng: &mut impl Rng, field: Field, rows: usize, cols: usize) -> Matrix {
    let mut m = Matrix::zeros(field, rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m.set(i, j, &scalar(rng, field));
        }
    }
    m
}

/// A complex with `dim ≤ max_dim` in each degree `0..=cap`; each differential is a random
/// combination of cycles of the one below.
pub fn random_complex(rng: &mut impl Rng, field: Field, cap: usize, max_dim: usize) -> Result<ChainComplex> {
    let dims: Vec<usize> = (0..=cap).map(|_| rng.gen_range(0..=max_dim)).collect();
    let mut diffs: Vec<Matrix> = Vec::with_capacity(cap);
    for n in 1..=cap {
        let cycles = if n == 1 { Matrix::identity(field, dims[0]) } else { diffs[n - 2].kernel_basis() };
        let coeffs = matrix(rng, field, cycles.cols(), dims[n]);
        diffs.push(cycles.mul(&coeffs)?);
    }
    ChainComplex::new(field, dims, diffs)
}

/// A chain map `S(0) → z` hitting a random vector in degree 0.
pub fn random_point(rng: &mut impl Rng, s0: &Arc<ChainComplex>, z: &Arc<ChainComplex>) -> Result<ChainMap> {
    let field = z.field();
    let v = matrix(rng, field, z.dim(0), 1);
    ChainMap::from_fn(s0.clone(), z.clone(), |d| Ok(if d == 0 { v.clone() } else { Matrix::zeros(field, z.dim(d), s0.dim(d)) }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_complexes_are_complexes() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for field in [Field::Rational, Field::Prime(3)] {
            for _ in 0..20 {
                let c = random_complex(&mut rng, field, 5, 3).unwrap();
                assert_eq!(c.cap(), 5);
            }
        }
        let a = random_complex(&mut ChaCha8Rng::seed_from_u64(1), Field::Prime(5), 4, 3).unwrap();
        let b = random_complex(&mut ChaCha8Rng::seed_from_u64(1), Field::Prime(5), 4, 3).unwrap();
        assert!(a.same_data(&b));
    }
}
