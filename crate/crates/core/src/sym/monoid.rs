use std::sync::Arc;

use crate::chain::{
    permutation_map_between, tensor_maps_between, ChainComplex, ChainMap, QuotientComplex, TensorFactors, TensorPart,
};
use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix, Scalar};
use crate::report::Witness;

/// A sparse vector in one degree: `(basis index, coefficient)`.
pub type Sparse = Vec<(usize, Scalar)>;

/// A commutative monoid in chain complexes: unit `S(0) → X` and multiplication
/// `X ⊗ X → X`, exact through the cap of `X`.
#[derive(Clone, Debug)]
pub struct CommutativeMonoidObject {
    underlying: Arc<ChainComplex>,
    square: Arc<TensorFactors>,
    unit: ChainMap,
    mult: ChainMap,
    exact: bool,
}

impl CommutativeMonoidObject {
    /// Checks the unit, associativity and commutativity laws.
    pub fn new(underlying: Arc<ChainComplex>, unit: ChainMap, mult: ChainMap) -> Result<Self> {
        let m = Self::new_unchecked(underlying, unit, mult)?;
        if let Some(w) = m.law_violation()? {
            let at = w.degree.map(|d| format!(" in degree {d}")).unwrap_or_default();
            return Err(Error::MonoidLaw(format!("{}{at}: {}", w.kind, w.detail)));
        }
        Ok(m)
    }

    pub(crate) fn new_unchecked(underlying: Arc<ChainComplex>, unit: ChainMap, mult: ChainMap) -> Result<Self> {
        let field = underlying.field();
        let square = Arc::new(TensorFactors::new(field, vec![underlying.clone(); 2])?);
        let cap = underlying.cap();
        if unit.source().dims().iter().take(cap + 1).enumerate().any(|(d, &n)| n != usize::from(d == 0))
            || !unit.target().same_data(&underlying)
        {
            return Err(Error::DimensionMismatch("unit must be a map S(0) → X".into()));
        }
        if !mult.source().same_data(square.complex()) || !mult.target().same_data(&underlying) {
            return Err(Error::DimensionMismatch("multiplication must be a map X ⊗ X → X".into()));
        }
        if unit.cap() < cap || mult.cap() < cap {
            return Err(Error::DimensionMismatch(format!("unit and multiplication must be known through degree {cap}")));
        }
        let unit = unit.retarget(unit_sphere(field, cap)?, underlying.clone())?;
        let mult = mult.retarget(square.complex().clone(), underlying.clone())?;
        Ok(CommutativeMonoidObject { underlying, square, unit, mult, exact: true })
    }

    /// Builds the multiplication from products of basis elements.
    pub fn from_products(
        underlying: Arc<ChainComplex>,
        unit: &[Scalar],
        product: impl Fn(usize, usize, usize, usize) -> Result<Sparse>,
    ) -> Result<Self> {
        let field = underlying.field();
        let cap = underlying.cap();
        let sphere = unit_sphere(field, cap)?;
        let mut u = Matrix::zeros(field, underlying.dim(0), 1);
        for (i, s) in unit.iter().enumerate() {
            u.set(i, 0, s);
        }
        let unit = ChainMap::from_fn(sphere.clone(), underlying.clone(), |d| {
            Ok(if d == 0 { u.clone() } else { Matrix::zeros(field, underlying.dim(d), 0) })
        })?;
        let square = TensorFactors::new(field, vec![underlying.clone(); 2])?;
        let mult = ChainMap::from_fn(square.complex().clone(), underlying.clone(), |d| {
            let mut m = Matrix::zeros(field, underlying.dim(d), square.complex().dim(d));
            for (j, w) in square.words(d).iter().enumerate() {
                for (r, s) in product(w[0].0, w[0].1, w[1].0, w[1].1)? {
                    m.add_scalar(r, j, &s);
                }
            }
            Ok(m)
        })?;
        Self::new(underlying, unit, mult)
    }

    pub fn field(&self) -> Field {
        self.underlying.field()
    }

    pub fn cap(&self) -> usize {
        self.underlying.cap()
    }

    pub fn underlying(&self) -> &Arc<ChainComplex> {
        &self.underlying
    }

    pub fn square(&self) -> &Arc<TensorFactors> {
        &self.square
    }

    pub fn unit(&self) -> &ChainMap {
        &self.unit
    }

    pub fn mult(&self) -> &ChainMap {
        &self.mult
    }

    /// False when the monoid is a word-length truncation of an infinite one.
    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub(crate) fn mark_truncated(mut self) -> Self {
        self.exact = false;
        self
    }

    /// First failing law, or `None`.
    pub fn law_violation(&self) -> Result<Option<Witness>> {
        let field = self.field();
        let x = &self.underlying;
        let id = ChainMap::identity(x.clone());
        let s = self.unit.source().clone();

        let left = TensorFactors::new(field, vec![s.clone(), x.clone()])?;
        let lu = tensor_maps_between(&left, &self.square, &[TensorPart::single(&self.unit), TensorPart::single(&id)])?;
        if let Some(d) = first_non_identity(&self.mult.compose(&lu)?) {
            return Ok(Some(Witness::new("left-unit", "μ ∘ (η ⊗ id) is not the unitor").at(d)));
        }
        let right = TensorFactors::new(field, vec![x.clone(), s])?;
        let ru = tensor_maps_between(&right, &self.square, &[TensorPart::single(&id), TensorPart::single(&self.unit)])?;
        if let Some(d) = first_non_identity(&self.mult.compose(&ru)?) {
            return Ok(Some(Witness::new("right-unit", "μ ∘ (id ⊗ η) is not the unitor").at(d)));
        }

        let swap = permutation_map_between(&self.square, &self.square, &[1, 0])?;
        if let Some(d) = self.mult.compose(&swap)?.first_disagreement(&self.mult) {
            return Ok(Some(Witness::new("commutativity", "μ ∘ τ ≠ μ").at(d)));
        }

        let cube = TensorFactors::new(field, vec![x.clone(); 3])?;
        let pair = TensorPart { sources: vec![x.clone(); 2], targets: vec![x.clone()], map: &self.mult };
        let ml = tensor_maps_between(&cube, &self.square, &[pair, TensorPart::single(&id)])?;
        let pair = TensorPart { sources: vec![x.clone(); 2], targets: vec![x.clone()], map: &self.mult };
        let mr = tensor_maps_between(&cube, &self.square, &[TensorPart::single(&id), pair])?;
        if let Some(d) = self.mult.compose(&ml)?.first_disagreement(&self.mult.compose(&mr)?) {
            return Ok(Some(Witness::new("associativity", "μ ∘ (μ ⊗ id) ≠ μ ∘ (id ⊗ μ)").at(d)));
        }
        Ok(None)
    }

    /// The unit as a sparse degree-0 vector.
    pub fn unit_vector(&self) -> Sparse {
        self.unit.comp(0).col_nonzeros(0)
    }

    /// `a · b` for `a` in degree `da` and `b` in degree `db`; `None` above the cap.
    pub fn product(&self, da: usize, a: &[(usize, Scalar)], db: usize, b: &[(usize, Scalar)]) -> Result<Option<Sparse>> {
        let d = da + db;
        if d > self.cap() {
            return Ok(None);
        }
        let field = self.field();
        let mut acc = vec![Scalar::zero(field); self.underlying.dim(d)];
        for (i, s) in a {
            for (j, t) in b {
                let w = [(da, *i), (db, *j)];
                let col = self.square.index_of(&w).expect("pair of basis elements is a square word");
                let st = s.mul(t)?;
                for (r, c) in self.mult.comp(d).col_nonzeros(col) {
                    acc[r] = acc[r].add(&c.mul(&st)?)?;
                }
            }
        }
        Ok(Some(acc.into_iter().enumerate().filter(|(_, s)| !s.is_zero()).collect()))
    }

    /// `f` is a monoid map `self → target`: unit and multiplication squares commute.
    pub fn monoid_map_violation(&self, target: &CommutativeMonoidObject, f: &ChainMap) -> Result<Option<Witness>> {
        if !f.source().same_data(&self.underlying) || !f.target().same_data(&target.underlying) {
            return Err(Error::DimensionMismatch("map does not run between the two monoids".into()));
        }
        let fu = f.compose(&self.unit)?;
        if let Some(d) = fu.first_disagreement(&target.unit.retarget(fu.source().clone(), fu.target().clone())?) {
            return Ok(Some(Witness::new("unit-square", "f ∘ η ≠ η").at(d)));
        }
        let tgt_sq = TensorFactors::new(self.field(), vec![target.underlying.clone(); 2])?;
        let ff = tensor_maps_between(&self.square, &tgt_sq, &[TensorPart::single(f), TensorPart::single(f)])?;
        let lhs = f.compose(&self.mult)?;
        let rhs = target.mult.compose(&ff)?;
        if let Some(d) = lhs.first_disagreement(&rhs) {
            return Ok(Some(Witness::new("mult-square", "f ∘ μ ≠ μ ∘ (f ⊗ f)").at(d)));
        }
        Ok(None)
    }

    /// Restriction to degrees `0..=cap`.
    pub fn truncate(&self, cap: usize) -> Result<Self> {
        if cap >= self.cap() {
            return Ok(self.clone());
        }
        let x = Arc::new(self.underlying.truncate(cap));
        let square = Arc::new(TensorFactors::new(self.field(), vec![x.clone(); 2])?);
        let unit = self.unit.retarget(unit_sphere(self.field(), cap)?, x.clone())?;
        let mult = self.mult.retarget(square.complex().clone(), x.clone())?;
        Ok(CommutativeMonoidObject { underlying: x, square, unit, mult, exact: self.exact })
    }

    /// `A ⊗ B` with `(a ⊗ x)(b ⊗ y) = (−1)^{|x||b|} ab ⊗ xy`, on the flat product `[A, B]`.
    pub fn tensor(&self, other: &CommutativeMonoidObject) -> Result<(Arc<TensorFactors>, CommutativeMonoidObject)> {
        let field = self.field();
        field.ensure_same(other.field())?;
        let flat = Arc::new(TensorFactors::new(field, vec![self.underlying.clone(), other.underlying.clone()])?);
        let cap = flat.cap();
        let a = self.truncate(cap)?;
        let b = other.truncate(cap)?;
        let mut unit = Vec::new();
        for (i, s) in a.unit_vector() {
            for (j, t) in b.unit_vector() {
                let k = flat.index_of(&[(0, i), (0, j)]).expect("degree-0 pair");
                unit.push((k, s.mul(&t)?));
            }
        }
        let mut unit_dense = vec![Scalar::zero(field); flat.complex().dim(0)];
        for (k, s) in unit {
            unit_dense[k] = s;
        }
        let product = |d1: usize, i1: usize, d2: usize, i2: usize| -> Result<Sparse> {
            let w1 = &flat.words(d1)[i1];
            let w2 = &flat.words(d2)[i2];
            let (pa, pb) = (w1[0], w1[1]);
            let (qa, qb) = (w2[0], w2[1]);
            let ab = a.product(pa.0, &[(pa.1, Scalar::one(field))], qa.0, &[(qa.1, Scalar::one(field))])?;
            let xy = b.product(pb.0, &[(pb.1, Scalar::one(field))], qb.0, &[(qb.1, Scalar::one(field))])?;
            let (Some(ab), Some(xy)) = (ab, xy) else { return Ok(vec![]) };
            let sign = if pb.0 % 2 == 1 && qa.0 % 2 == 1 { Scalar::from_i64(field, -1) } else { Scalar::one(field) };
            let mut out = Vec::with_capacity(ab.len() * xy.len());
            for (r, s) in &ab {
                for (c, t) in &xy {
                    let k = flat.index_of(&[(pa.0 + qa.0, *r), (pb.0 + qb.0, *c)]).expect("product word");
                    out.push((k, s.mul(t)?.mul(&sign)?));
                }
            }
            Ok(out)
        };
        let mut m = Self::from_products(flat.complex().clone(), &unit_dense, product)?;
        m.exact = a.exact && b.exact;
        Ok((flat, m))
    }

    /// The quotient by the ideal generated by the image of `gens: R → X`.
    ///
    /// Fails with `DescentFailure` unless the image is closed under multiplication by `X`.
    pub fn quotient_by_ideal(&self, gens: &ChainMap) -> Result<(QuotientComplex, CommutativeMonoidObject)> {
        let field = self.field();
        let x = &self.underlying;
        if !gens.target().same_data(x) {
            return Err(Error::DimensionMismatch("ideal generators must land in the monoid".into()));
        }
        let q = QuotientComplex::new(x.clone(), (0..=self.cap()).map(|n| gens_comp(gens, x, n)).collect())?;
        let id = ChainMap::identity(x.clone());
        let r = gens.source().clone();
        let to_q = q.projection.compose(&self.mult)?;
        let left = TensorFactors::new(field, vec![r.clone(), x.clone()])?;
        let lg = tensor_maps_between(&left, &self.square, &[TensorPart::single(gens), TensorPart::single(&id)])?;
        let right = TensorFactors::new(field, vec![x.clone(), r])?;
        let rg = tensor_maps_between(&right, &self.square, &[TensorPart::single(&id), TensorPart::single(gens)])?;
        for (side, m) in [("left", &lg), ("right", &rg)] {
            if let Some(d) = to_q.compose(m)?.comps().iter().position(|c| !c.is_zero()) {
                return Err(Error::DescentFailure(format!("{side} multiples of the relations escape in degree {d}")));
            }
        }
        let obj = q.object.clone();
        let qsq = TensorFactors::new(field, vec![obj.clone(); 2])?;
        let mult = ChainMap::from_fn(qsq.complex().clone(), obj.clone(), |d| {
            let mut lift = Matrix::zeros(field, self.square.complex().dim(d), qsq.complex().dim(d));
            for (j, w) in qsq.words(d).iter().enumerate() {
                let (a, b) = (w[0], w[1]);
                for (r1, s1) in q.section(a.0).col_nonzeros(a.1) {
                    for (r2, s2) in q.section(b.0).col_nonzeros(b.1) {
                        let k = self.square.index_of(&[(a.0, r1), (b.0, r2)]).expect("lifted pair");
                        lift.add_scalar(k, j, &s1.mul(&s2)?);
                    }
                }
            }
            to_q.comp(d).mul(&lift)
        })?;
        let unit = q.projection.compose(&self.unit)?;
        let mut m = Self::new(obj, unit, mult)?;
        m.exact = self.exact;
        Ok((q, m))
    }
}

fn gens_comp(gens: &ChainMap, x: &ChainComplex, n: usize) -> Matrix {
    if n <= gens.cap() {
        gens.comp(n).clone()
    } else {
        Matrix::zeros(x.field(), x.dim(n), 0)
    }
}

fn first_non_identity(f: &ChainMap) -> Option<usize> {
    f.comps().iter().position(|m| !m.is_identity())
}

pub(crate) fn unit_sphere(field: Field, cap: usize) -> Result<Arc<ChainComplex>> {
    Ok(Arc::new(ChainComplex::sphere_capped(0, field, cap)?))
}

/// The unit monoid `S(0)`.
pub fn unit_monoid(field: Field, cap: usize) -> Result<CommutativeMonoidObject> {
    let s = unit_sphere(field, cap)?;
    CommutativeMonoidObject::from_products(s, &[Scalar::one(field)], |_, _, _, _| Ok(vec![(0, Scalar::one(field))]))
}

/// `k ⊕ k·ε` with `|ε| = degree`, `ε² = 0` and zero differential.
pub fn square_zero(field: Field, degree: usize, cap: usize) -> Result<CommutativeMonoidObject> {
    if degree == 0 || degree > cap {
        return Err(Error::OutOfRange(format!("square-zero class needs degree in 1..={cap}, got {degree}")));
    }
    let mut dims = vec![0; cap + 1];
    dims[0] = 1;
    dims[degree] = 1;
    let diffs = (1..=cap).map(|n| Matrix::zeros(field, dims[n - 1], dims[n])).collect();
    let mut labels: Vec<Vec<String>> = dims.iter().map(|&k| vec![String::new(); k]).collect();
    labels[0][0] = "1".into();
    labels[degree][0] = "ε".into();
    let x = Arc::new(ChainComplex::new(field, dims, diffs)?.with_labels(labels)?);
    CommutativeMonoidObject::from_products(x, &[Scalar::one(field)], |d1, _, d2, _| {
        Ok(if d1 == 0 || d2 == 0 { vec![(0, Scalar::one(field))] } else { vec![] })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_and_square_zero_are_monoids() {
        for field in [Field::Rational, Field::Prime(2), Field::Prime(3)] {
            let u = unit_monoid(field, 6).unwrap();
            assert!(u.law_violation().unwrap().is_none());
            for deg in [1, 2, 3] {
                let sz = square_zero(field, deg, 6).unwrap();
                assert_eq!(sz.underlying().dims(), &{
                    let mut d = vec![1, 0, 0, 0, 0, 0, 0];
                    d[deg] = 1;
                    d
                }[..]);
            }
        }
    }

    #[test]
    fn broken_multiplication_is_rejected() {
        let field = Field::Rational;
        let sz = square_zero(field, 2, 4).unwrap();
        let bad = sz.mult().scale(&Scalar::from_i64(field, 2));
        let err = CommutativeMonoidObject::new(sz.underlying().clone(), sz.unit().clone(), bad).unwrap_err();
        assert!(matches!(err, Error::MonoidLaw(_)), "{err}");
    }

    #[test]
    fn tensor_of_square_zeros() {
        let field = Field::Rational;
        let a = square_zero(field, 1, 4).unwrap();
        let b = square_zero(field, 1, 4).unwrap();
        let (flat, ab) = a.tensor(&b).unwrap();
        assert_eq!(ab.underlying().dims(), &[1, 2, 1, 0, 0]);
        assert!(ab.law_violation().unwrap().is_none());
        // (ε⊗1)(1⊗ε) = ε⊗ε and (1⊗ε)(ε⊗1) = −ε⊗ε
        let e1 = flat.index_of(&[(1, 0), (0, 0)]).unwrap();
        let e2 = flat.index_of(&[(0, 0), (1, 0)]).unwrap();
        let one = Scalar::one(field);
        let p = ab.product(1, &[(e1, one.clone())], 1, &[(e2, one.clone())]).unwrap().unwrap();
        let q = ab.product(1, &[(e2, one.clone())], 1, &[(e1, one)]).unwrap().unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(q[0].1, p[0].1.neg());
    }

    #[test]
    fn quotient_by_ideal_checks_closure() {
        let field = Field::Rational;
        let (_, ab) = square_zero(field, 2, 6).unwrap().tensor(&square_zero(field, 2, 6).unwrap()).unwrap();
        // ideal generated by ε⊗1 − 1⊗ε: ab/(ε₁ − ε₂) ≅ k[ε]/ε²
        let r = Arc::new(ChainComplex::sphere_capped(2, field, 6).unwrap());
        let gens = ChainMap::from_fn(r.clone(), ab.underlying().clone(), |d| {
            let mut m = Matrix::zeros(field, ab.underlying().dim(d), r.dim(d));
            if d == 2 {
                m.add_int(0, 0, 1);
                m.add_int(1, 0, -1);
            }
            Ok(m)
        })
        .unwrap();
        // ε₁ε₂ is not in the span of ε₁ − ε₂ alone, so the image is not an ideal
        assert!(matches!(ab.quotient_by_ideal(&gens), Err(Error::DescentFailure(_))));
    }
}
