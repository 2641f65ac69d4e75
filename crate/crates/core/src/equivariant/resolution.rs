use std::collections::HashMap;
use std::sync::Arc;

use super::action::{coinvariants, EquivariantComplex};
use super::perm::{self, Perm};
use crate::chain::{ChainComplex, ChainMap, QuotientComplex};
use crate::error::{Error, Result};
use crate::guard;
use crate::linalg::{sign, Field, Matrix, Scalar};

/// Largest arity accepted by the resolution builders.
pub const MAX_ARITY: usize = 4;
/// Largest resolution length accepted.
pub const MAX_LENGTH: usize = 8;

/// A truncated free resolution `F_L → ⋯ → F_0 → k` of the trivial module over a
/// permutation group algebra.
///
/// `F_k` is free on `ranks[k]` generators. The k-linear basis of `F_k` is
/// `(i, g) ↦ g·e_i`, indexed `i·|G| + idx(g)`.
#[derive(Clone, Debug)]
pub struct Resolution {
    field: Field,
    elements: Vec<Perm>,
    // mult[a][b] = idx(a ∘ b)
    mult: Vec<Vec<usize>>,
    ranks: Vec<usize>,
    // images[k]: one column per generator of F_k in the basis of F_{k-1}; images[0] is the augmentation
    images: Vec<Matrix>,
}

fn check_limits(n: usize, length: usize) -> Result<()> {
    if n == 0 || n > MAX_ARITY {
        return Err(Error::OutOfRange(format!("arity {n} outside 1..={MAX_ARITY}")));
    }
    if length > MAX_LENGTH {
        return Err(Error::OutOfRange(format!("resolution length {length} exceeds {MAX_LENGTH}")));
    }
    Ok(())
}

/// Normalized bar resolution of `k` over `k[Σ_n]`, through degree `length`.
pub fn bar_resolution(n: usize, field: Field, length: usize) -> Result<Resolution> {
    check_limits(n, length)?;
    Resolution::bar(perm::all_perms(n), field, length)
}

impl Resolution {
    fn skeleton(mut elements: Vec<Perm>, field: Field) -> Result<Self> {
        elements.sort();
        elements.dedup();
        let Some(first) = elements.first() else {
            return Err(Error::InvalidAction("empty group".into()));
        };
        if *first != perm::identity(first.len()) {
            return Err(Error::InvalidAction("group does not contain the identity".into()));
        }
        let index: HashMap<Perm, usize> = elements.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let mult = elements
            .iter()
            .map(|a| {
                elements
                    .iter()
                    .map(|b| {
                        index
                            .get(&perm::compose(a, b))
                            .copied()
                            .ok_or_else(|| Error::InvalidAction("element set is not closed under composition".into()))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let order = elements.len();
        Ok(Resolution {
            field,
            elements,
            mult,
            ranks: vec![1],
            images: vec![Matrix::from_int_rows(field, &[vec![1; order]])],
        })
    }

    /// Normalized bar resolution over the group with the given elements.
    pub fn bar(elements: Vec<Perm>, field: Field, length: usize) -> Result<Self> {
        let mut r = Self::skeleton(elements, field)?;
        let order = r.order();
        let nontrivial: Vec<usize> = (1..order).collect();
        let mut prev_tuples: Vec<Vec<usize>> = vec![vec![]];
        for k in 1..=length {
            let count = (order - 1).checked_pow(k as u32).unwrap_or(usize::MAX);
            guard::check("bar resolution module", count.saturating_mul(order))?;
            let tuples: Vec<Vec<usize>> = prev_tuples
                .iter()
                .flat_map(|t| nontrivial.iter().map(move |&g| [t.as_slice(), &[g]].concat()))
                .collect();
            let prev_index: HashMap<&[usize], usize> =
                prev_tuples.iter().enumerate().map(|(i, t)| (t.as_slice(), i)).collect();
            let mut img = Matrix::zeros(field, prev_tuples.len() * order, tuples.len());
            for (j, t) in tuples.iter().enumerate() {
                img.add_int(prev_index[&t[1..]] * order + t[0], j, 1);
                for i in 0..k - 1 {
                    let prod = r.mult[t[i]][t[i + 1]];
                    if prod == 0 {
                        continue;
                    }
                    let mut face = t.clone();
                    face.splice(i..i + 2, [prod]);
                    img.add_int(prev_index[face.as_slice()] * order, j, sign(i + 1));
                }
                img.add_int(prev_index[&t[..k - 1]] * order, j, sign(k));
            }
            r.ranks.push(tuples.len());
            r.images.push(img);
            prev_tuples = tuples;
        }
        Ok(r)
    }

    /// A smaller free resolution: `F_0 = kG` and each later `F_k` is generated by
    /// greedily chosen kernel vectors of the previous boundary.
    pub fn reduced(elements: Vec<Perm>, field: Field, length: usize) -> Result<Self> {
        let mut r = Self::skeleton(elements, field)?;
        let order = r.order();
        let mut prev = r.images[0].clone();
        for k in 1..=length {
            let kernel = prev.kernel_basis();
            let mut span = Matrix::zeros(field, kernel.rows(), 0);
            let mut rank = 0;
            let mut chosen = Vec::new();
            for c in 0..kernel.cols() {
                if rank == kernel.cols() {
                    break;
                }
                let v = kernel.column(c);
                let grown = Matrix::hstack(field, kernel.rows(), &[&span, &v])?;
                if grown.rank() == rank {
                    continue;
                }
                let orbit = r.orbit(&v)?;
                span = Matrix::hstack(field, kernel.rows(), &[&span, &orbit])?.image_basis();
                rank = span.cols();
                chosen.push(v);
            }
            guard::check("resolution module", chosen.len().saturating_mul(order))?;
            let refs: Vec<&Matrix> = chosen.iter().collect();
            let img = Matrix::hstack(field, kernel.rows(), &refs)?;
            r.ranks.push(chosen.len());
            r.images.push(img);
            prev = r.boundary(k)?;
        }
        Ok(r)
    }

    /// Columns `g·v` for every group element `g`.
    fn orbit(&self, v: &Matrix) -> Result<Matrix> {
        let order = self.order();
        let mut out = Matrix::zeros(self.field, v.rows(), order);
        for (row, s) in v.col_nonzeros(0) {
            let (i, h) = (row / order, row % order);
            for g in 0..order {
                out.add_scalar(i * order + self.mult[g][h], g, &s);
            }
        }
        Ok(out)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn length(&self) -> usize {
        self.ranks.len() - 1
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// `d_k: F_k → F_{k-1}` as a k-linear matrix; `k = 0` gives the augmentation.
    pub fn boundary(&self, k: usize) -> Result<Matrix> {
        if k > self.length() {
            return Err(Error::OutOfRange(format!("boundary d_{k} beyond length {}", self.length())));
        }
        if k == 0 {
            return Ok(self.images[0].clone());
        }
        let order = self.order();
        let img = &self.images[k];
        let mut out = Matrix::zeros(self.field, self.ranks[k - 1] * order, self.ranks[k] * order);
        for j in 0..self.ranks[k] {
            for (row, s) in img.col_nonzeros(j) {
                let (i, h) = (row / order, row % order);
                for g in 0..order {
                    out.add_scalar(i * order + self.mult[g][h], j * order + g, &s);
                }
            }
        }
        Ok(out)
    }

    /// Coefficient of `h·e_i` in `d(e_j)`.
    fn coefficient(&self, k: usize, i: usize, j: usize, h: usize) -> Scalar {
        self.images[k].get(i * self.order() + h, j)
    }

    /// `d∘d = 0`, the augmentation is onto, and `ker d_k = im d_{k+1}` for `k < length`.
    pub fn verify_exact(&self) -> Result<()> {
        let ds = (0..=self.length()).map(|k| self.boundary(k)).collect::<Result<Vec<_>>>()?;
        if ds[0].rank() != 1 {
            return Err(Error::InvariantViolated("augmentation is not onto".into()));
        }
        for k in 1..ds.len() {
            if !ds[k - 1].mul(&ds[k])?.is_zero() {
                return Err(Error::NotAComplex { degree: k });
            }
            let nullity = ds[k - 1].cols() - ds[k - 1].rank();
            if ds[k].rank() != nullity {
                return Err(Error::InvariantViolated(format!("resolution not exact in degree {}", k - 1)));
            }
        }
        Ok(())
    }
}

/// `F ⊗_{kG} E` with its comparison map to the coinvariants.
#[derive(Clone, Debug)]
pub struct HomotopyOrbits {
    pub complex: Arc<ChainComplex>,
    pub coinvariants: QuotientComplex,
    pub comparison: ChainMap,
}

/// Homotopy orbits through degree `length`, using a reduced resolution of the acting group.
pub fn homotopy_orbits(e: &EquivariantComplex, length: usize) -> Result<HomotopyOrbits> {
    check_limits(e.arity(), length)?;
    let elements: Vec<Perm> = e.group_elements()?.into_keys().collect();
    let res = Resolution::reduced(elements, e.field(), length)?;
    homotopy_orbits_with(e, &res)
}

/// Homotopy orbits computed with a given resolution of `E`'s acting group.
pub fn homotopy_orbits_with(e: &EquivariantComplex, res: &Resolution) -> Result<HomotopyOrbits> {
    e.field().ensure_same(res.field())?;
    let rho = e.group_elements()?;
    if rho.len() != res.order() || !res.elements().iter().all(|g| rho.contains_key(g)) {
        return Err(Error::InvalidAction("resolution is for a different group".into()));
    }
    let field = e.field();
    let x = e.complex();
    let cap = res.length().min(x.cap());
    let order = res.order();
    // ρ(h⁻¹) for each group index h
    let rho_inv: Vec<&ChainMap> = res.elements().iter().map(|h| &rho[&perm::inverse(h)]).collect();

    // summands of Tot_n: (k, j) with E_{n-k}
    let summands = |n: usize| -> Vec<(usize, usize)> {
        (0..=n.min(res.length())).flat_map(|k| (0..res.ranks()[k]).map(move |j| (k, j))).collect()
    };
    let offsets = |n: usize| -> (Vec<usize>, usize) {
        let mut acc = 0;
        let offs = summands(n)
            .iter()
            .map(|&(k, _)| {
                let o = acc;
                acc += x.dim(n - k);
                o
            })
            .collect();
        (offs, acc)
    };
    let layout: Vec<(Vec<usize>, usize)> = (0..=cap).map(offsets).collect();
    let dims: Vec<usize> = layout.iter().map(|(_, t)| *t).collect();
    let total: usize = dims.iter().sum();
    guard::check("homotopy orbit complex", total)?;

    let mut diffs = Vec::with_capacity(cap);
    for n in 1..=cap {
        let mut d = Matrix::zeros(field, dims[n - 1], dims[n]);
        let src = summands(n);
        let tgt = summands(n - 1);
        let tgt_pos: HashMap<(usize, usize), usize> = tgt.iter().enumerate().map(|(p, &kj)| (kj, p)).collect();
        for (p, &(k, j)) in src.iter().enumerate() {
            let col0 = layout[n].0[p];
            let deg = n - k;
            if k > 0 {
                for i in 0..res.ranks()[k - 1] {
                    let mut block = Matrix::zeros(field, x.dim(deg), x.dim(deg));
                    for h in 0..order {
                        let c = res.coefficient(k, i, j, h);
                        if !c.is_zero() {
                            block = block.add(&rho_inv[h].comp(deg).scale(&c))?;
                        }
                    }
                    d.set_block(layout[n - 1].0[tgt_pos[&(k - 1, i)]], col0, &block);
                }
            }
            if deg > 0 {
                let vertical = if k % 2 == 0 { x.d(deg).clone() } else { x.d(deg).neg() };
                d.set_block(layout[n - 1].0[tgt_pos[&(k, j)]], col0, &vertical);
            }
        }
        diffs.push(d);
    }
    let complex = Arc::new(ChainComplex::new(field, dims.clone(), diffs)?);
    let coinv = coinvariants(e)?;
    let q = coinv.object.clone();
    let comparison = ChainMap::from_fn(complex.clone(), q.clone(), |n| {
        let mut m = Matrix::zeros(field, q.dim(n), dims[n]);
        m.set_block(0, 0, coinv.projection.comp(n));
        Ok(m)
    })?;
    Ok(HomotopyOrbits { complex, coinvariants: coinv, comparison })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{homology_dims, is_quasi_iso};
    use crate::equivariant::tensor_power_action;

    fn trivial_point(field: Field, n: usize) -> EquivariantComplex {
        EquivariantComplex::trivial(Arc::new(ChainComplex::sphere(0, field)), n).unwrap()
    }

    #[test]
    fn bar_and_reduced_are_exact() {
        for field in [Field::Rational, Field::Prime(2), Field::Prime(3)] {
            for n in 1..=3 {
                bar_resolution(n, field, if n == 3 { 2 } else { 4 }).unwrap().verify_exact().unwrap();
                Resolution::reduced(perm::all_perms(n), field, 4).unwrap().verify_exact().unwrap();
            }
        }
    }

    #[test]
    fn trivial_group() {
        let r = bar_resolution(1, Field::Rational, 3).unwrap();
        assert_eq!(r.ranks(), &[1, 0, 0, 0]);
        let d = Arc::new(ChainComplex::disk(2, Field::Rational).unwrap());
        let e = EquivariantComplex::trivial(d.clone(), 1).unwrap();
        let ho = homotopy_orbits(&e, 8).unwrap();
        assert!(ho.complex.same_data(&d));
        assert!(ho.comparison.is_identity());
    }

    // periodic resolution ⋯ → kΣ2 --(1+τ)--> kΣ2 --(1-τ)--> kΣ2 tensored with k
    fn periodic_oracle(field: Field, len: usize) -> Vec<usize> {
        let p = field.characteristic();
        let dims = vec![1; len + 1];
        let diffs = (1..=len)
            .map(|k| {
                let v = if k % 2 == 1 { 0 } else { 2 };
                Matrix::from_int_rows(field, &[vec![if p == 2 { 0 } else { v }]])
            })
            .collect();
        homology_dims(&ChainComplex::new(field, dims, diffs).unwrap())
    }

    #[test]
    fn group_homology_of_sigma2() {
        let f2 = Field::Prime(2);
        assert_eq!(periodic_oracle(f2, 6), vec![1; 6]);
        for (res, field) in [
            (bar_resolution(2, f2, 6).unwrap(), f2),
            (bar_resolution(2, Field::Rational, 6).unwrap(), Field::Rational),
        ] {
            let ho = homotopy_orbits_with(&trivial_point(field, 2), &res).unwrap();
            assert_eq!(homology_dims(&ho.complex), periodic_oracle(field, 6));
        }
        assert_eq!(periodic_oracle(Field::Rational, 6), vec![1, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn comparison_quasi_iso_only_when_semisimple() {
        let q = Arc::new(ChainComplex::sphere(0, Field::Rational));
        let e = tensor_power_action(&q, 2).unwrap();
        assert!(is_quasi_iso(&homotopy_orbits(&e, 5).unwrap().comparison).unwrap());

        let f = Arc::new(ChainComplex::sphere(0, Field::Prime(2)));
        let e = tensor_power_action(&f, 2).unwrap();
        let ho = homotopy_orbits(&e, 5).unwrap();
        assert_eq!(homology_dims(&ho.complex)[1], 1);
        assert_eq!(homology_dims(&ho.coinvariants.object)[1], 0);
        assert!(!is_quasi_iso(&ho.comparison).unwrap());
    }

    #[test]
    fn sigma3_reduced_matches_bar() {
        for field in [Field::Rational, Field::Prime(2), Field::Prime(3)] {
            let e = trivial_point(field, 3);
            let bar = homotopy_orbits_with(&e, &bar_resolution(3, field, 3).unwrap()).unwrap();
            let red = homotopy_orbits(&e, 3).unwrap();
            assert_eq!(homology_dims(&bar.complex), homology_dims(&red.complex));
        }
    }

    #[test]
    fn limits() {
        assert!(matches!(bar_resolution(5, Field::Rational, 2), Err(Error::OutOfRange(_))));
        assert!(matches!(bar_resolution(2, Field::Rational, 9), Err(Error::OutOfRange(_))));
        assert!(matches!(bar_resolution(4, Field::Rational, 8), Err(Error::GuardExceeded { .. })));
    }
}
