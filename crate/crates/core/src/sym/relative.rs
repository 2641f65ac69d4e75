use std::sync::Arc;

use super::free::{sym_free, sym_free_truncated, sym_map, TruncatedSym};
use super::monoid::CommutativeMonoidObject;
use crate::chain::{tensor_maps_between, ChainComplex, ChainMap, QuotientComplex, TensorFactors, TensorPart};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// `X ⊗_{Sym K} Sym L`: the pushout of `Sym L ← Sym K → X` in commutative monoids,
/// computed as the coequalizer of `Sym L ⊗ Sym K ⊗ X ⇉ Sym L ⊗ X`.
#[derive(Clone, Debug)]
pub struct RelativeTensor {
    pub x: CommutativeMonoidObject,
    pub sym_k: TruncatedSym,
    pub sym_l: TruncatedSym,
    pub sym_h: ChainMap,
    pub adjoint_g: ChainMap,
    /// The flat product `[Sym L, X]`.
    pub ambient: Arc<TensorFactors>,
    pub ambient_monoid: CommutativeMonoidObject,
    pub quotient: QuotientComplex,
    pub monoid: CommutativeMonoidObject,
}

/// `K` and `L` must vanish in degree 0.
pub fn relative_tensor(x: &CommutativeMonoidObject, g: &ChainMap, h: &ChainMap, cap: usize) -> Result<RelativeTensor> {
    build(x, g, h, cap, None)
}

/// As [`relative_tensor`] with `Sym L` cut off above word length `n_max`; this allows `L`
/// with degree-0 classes, provided `K = 0`.
pub fn relative_tensor_truncated(
    x: &CommutativeMonoidObject,
    g: &ChainMap,
    h: &ChainMap,
    cap: usize,
    n_max: usize,
) -> Result<RelativeTensor> {
    build(x, g, h, cap, Some(n_max))
}

fn build(x: &CommutativeMonoidObject, g: &ChainMap, h: &ChainMap, cap: usize, n_max: Option<usize>) -> Result<RelativeTensor> {
    let field = x.field();
    field.ensure_same(h.field())?;
    if !g.source().same_data(h.source()) {
        return Err(Error::DimensionMismatch("g and h must share their source".into()));
    }
    if !g.target().same_data(x.underlying()) {
        return Err(Error::DimensionMismatch("g must land in the monoid".into()));
    }
    let cap = cap.min(x.cap()).min(h.source().cap()).min(h.target().cap());
    let k = Arc::new(h.source().truncate(cap));
    let l = Arc::new(h.target().truncate(cap));
    let x = x.truncate(cap)?;
    if k.dim(0) != 0 {
        return Err(Error::TruncationUnsound("the source of h must vanish in degree 0".into()));
    }
    let sym_k = sym_free(&k, cap)?;
    let sym_l = match n_max {
        _ if l.dim(0) == 0 && n_max.is_none() => sym_free(&l, cap)?,
        Some(n) if k.is_zero() => sym_free_truncated(&l, cap, n)?,
        Some(_) => {
            return Err(Error::TruncationUnsound("word-length truncation needs the source of h to be zero".into()))
        }
        None => return Err(Error::TruncationUnsound("the target of h has degree-0 classes; give a word bound".into())),
    };
    let g = g.retarget(k.clone(), x.underlying().clone())?;
    let h = h.retarget(k, l)?;
    let sym_h = sym_map(&h, &sym_k, &sym_l)?;
    let adjoint_g = sym_k.universal(&g, &x)?;

    let (ambient, ambient_monoid) = sym_l.monoid().tensor(&x)?;
    let sl = sym_l.monoid().underlying().clone();
    let sk = sym_k.monoid().underlying().clone();
    let xu = x.underlying().clone();
    let id_sl = ChainMap::identity(sl.clone());
    let id_x = ChainMap::identity(xu.clone());

    let lk = TensorFactors::new(field, vec![sl.clone(), sk.clone()])?;
    let act_l = sym_l
        .monoid()
        .mult()
        .compose(&tensor_maps_between(&lk, sym_l.monoid().square(), &[TensorPart::single(&id_sl), TensorPart::single(&sym_h)])?)?;
    let kx = TensorFactors::new(field, vec![sk.clone(), xu.clone()])?;
    let act_x = x
        .mult()
        .compose(&tensor_maps_between(&kx, x.square(), &[TensorPart::single(&adjoint_g), TensorPart::single(&id_x)])?)?;

    let triple = TensorFactors::new(field, vec![sl.clone(), sk.clone(), xu.clone()])?;
    let alpha = tensor_maps_between(
        &triple,
        &ambient,
        &[TensorPart { sources: vec![sl.clone(), sk.clone()], targets: vec![sl.clone()], map: &act_l }, TensorPart::single(&id_x)],
    )?;
    let beta = tensor_maps_between(
        &triple,
        &ambient,
        &[TensorPart::single(&id_sl), TensorPart { sources: vec![sk, xu.clone()], targets: vec![xu], map: &act_x }],
    )?;
    let (quotient, monoid) = ambient_monoid.quotient_by_ideal(&alpha.sub(&beta)?)?;
    let monoid = if ambient_monoid.is_exact() { monoid } else { monoid.mark_truncated() };
    Ok(RelativeTensor { x, sym_k, sym_l, sym_h, adjoint_g, ambient, ambient_monoid, quotient, monoid })
}

impl RelativeTensor {
    pub fn object(&self) -> &Arc<ChainComplex> {
        &self.quotient.object
    }

    pub fn cap(&self) -> usize {
        self.object().cap()
    }

    /// `X → P`, `x ↦ [1 ⊗ x]`.
    pub fn from_x(&self) -> Result<ChainMap> {
        let xu = self.x.underlying().clone();
        let amb = self.ambient.complex().clone();
        let field = xu.field();
        let into = ChainMap::from_fn(xu.clone(), amb.clone(), |d| {
            let mut m = Matrix::zeros(field, amb.dim(d), xu.dim(d));
            for i in 0..xu.dim(d) {
                m.add_int(self.ambient.index_of(&[(0, 0), (d, i)]).expect("unit word of Sym L"), i, 1);
            }
            Ok(m)
        })?;
        self.quotient.projection.compose(&into)
    }

    /// `Sym L → P`, `y ↦ [y ⊗ 1]`.
    pub fn from_sym_l(&self) -> Result<ChainMap> {
        let sl = self.sym_l.monoid().underlying().clone();
        let amb = self.ambient.complex().clone();
        let field = sl.field();
        let unit = self.x.unit_vector();
        let into = ChainMap::from_fn(sl.clone(), amb.clone(), |d| {
            let mut m = Matrix::zeros(field, amb.dim(d), sl.dim(d));
            for i in 0..sl.dim(d) {
                for (j, s) in &unit {
                    m.add_scalar(self.ambient.index_of(&[(d, i), (0, *j)]).expect("word times unit"), i, s);
                }
            }
            Ok(m)
        })?;
        self.quotient.projection.compose(&into)
    }

    /// `L → Sym L → P`.
    pub fn from_generators(&self) -> Result<ChainMap> {
        self.from_sym_l()?.compose(&self.sym_l.inclusion()?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Field;
    use crate::standard::{from_zero, sphere_to_disk};
    use crate::sym::{square_zero, unit_monoid};

    fn zero_map(k: &Arc<ChainComplex>, x: &CommutativeMonoidObject) -> ChainMap {
        ChainMap::zero(k.clone(), x.underlying().clone()).unwrap()
    }

    #[test]
    fn generating_cofibration_over_unit() {
        for (field, top) in [(Field::Rational, vec![1, 0, 0, 1, 0, 0, 0, 0, 0]), (Field::Prime(2), vec![1, 0, 0, 1, 0, 0, 1, 0, 0])] {
            let x = unit_monoid(field, 8).unwrap();
            let h = sphere_to_disk(3, field);
            let rt = relative_tensor(&x, &zero_map(h.source(), &x), &h, 8).unwrap();
            assert_eq!(rt.object().dims(), &top[..], "{field}");
            assert!(rt.monoid.law_violation().unwrap().is_none());
        }
    }

    #[test]
    fn identity_h_gives_back_x() {
        let field = Field::Prime(3);
        let x = square_zero(field, 2, 8).unwrap();
        let k = Arc::new(ChainComplex::sphere(2, field));
        let g = ChainMap::from_fn(k.clone(), x.underlying().clone(), |d| {
            let mut m = Matrix::zeros(field, x.underlying().dim(d), k.dim(d));
            if d == 2 {
                m.add_int(0, 0, 1);
            }
            Ok(m)
        })
        .unwrap();
        let rt = relative_tensor(&x, &g, &ChainMap::identity(k), 8).unwrap();
        let fx = rt.from_x().unwrap();
        assert!(fx.is_iso());
        assert!(x.monoid_map_violation(&rt.monoid, &fx).unwrap().is_none());
    }

    #[test]
    fn zero_source_is_plain_tensor() {
        let field = Field::Rational;
        let x = square_zero(field, 2, 6).unwrap();
        let l = Arc::new(ChainComplex::sphere_capped(2, field, 6).unwrap());
        let h = from_zero(&l);
        let rt = relative_tensor(&x, &zero_map(h.source(), &x), &h, 6).unwrap();
        // k[y] ⊗ k[ε]/ε² with |y| = |ε| = 2
        assert_eq!(rt.object().dims(), &[1, 0, 2, 0, 2, 0, 2]);
        let d1 = Arc::new(ChainComplex::disk(1, Field::Prime(2)).unwrap());
        let x2 = unit_monoid(Field::Prime(2), 6).unwrap();
        let h = from_zero(&d1);
        assert!(matches!(relative_tensor(&x2, &zero_map(h.source(), &x2), &h, 6), Err(Error::TruncationUnsound(_))));
        let rt = relative_tensor_truncated(&x2, &zero_map(h.source(), &x2), &h, 6, 3).unwrap();
        assert!(!rt.monoid.is_exact());
        assert_eq!(rt.object().dim(0), 4);
    }
}
