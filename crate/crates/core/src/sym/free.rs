use std::sync::Arc;

use super::monoid::{CommutativeMonoidObject, Sparse};
use crate::chain::{tensor_maps_between, ChainComplex, ChainMap, DirectSum, QuotientComplex, TensorFactors, TensorPart};
use crate::equivariant::{coinvariants, tensor_power_action_on};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Scalar};

/// `Sym^n X = X^{⊗n}/Σ_n` with the presentation it was computed from.
#[derive(Clone, Debug)]
pub struct SymPower {
    pub power: usize,
    pub tensor: Arc<TensorFactors>,
    pub quotient: QuotientComplex,
}

impl SymPower {
    pub fn new(x: &Arc<ChainComplex>, n: usize) -> Result<Self> {
        let field = x.field();
        let tensor = Arc::new(TensorFactors::with_cap(field, vec![x.clone(); n], x.cap())?);
        let quotient = if n == 0 {
            let c = tensor.complex();
            QuotientComplex::new(c.clone(), (0..=c.cap()).map(|d| Matrix::zeros(field, c.dim(d), 0)).collect())?
        } else {
            coinvariants(&tensor_power_action_on(&tensor)?)?
        };
        Ok(SymPower { power: n, tensor, quotient })
    }

    pub fn object(&self) -> &Arc<ChainComplex> {
        &self.quotient.object
    }
}

pub fn sym_power(x: &Arc<ChainComplex>, n: usize) -> Result<ChainComplex> {
    Ok(SymPower::new(x, n)?.object().as_ref().clone())
}

/// `Sym^n f`, descended from `f^{⊗n}` to coinvariants.
pub fn sym_power_map(f: &ChainMap, n: usize) -> Result<ChainMap> {
    let src = SymPower::new(f.source(), n)?;
    let tgt = SymPower::new(f.target(), n)?;
    let parts: Vec<TensorPart<'_>> = (0..n).map(|_| TensorPart::single(f)).collect();
    let fn_ = tensor_maps_between(&src.tensor, &tgt.tensor, &parts)?;
    src.quotient.descend_to(&fn_, &tgt.quotient)
}

/// `Sym X = ⊕_{n ≤ n_max} Sym^n X` through a cap, with concatenation as product.
///
/// For `X` concentrated in degrees `≥ b ≥ 1` the summands above `cap / b` vanish through
/// the cap and the result is exact. Otherwise the summands above `n_max` are dropped and
/// the result is the quotient by words longer than `n_max`.
#[derive(Clone, Debug)]
pub struct TruncatedSym {
    input: Arc<ChainComplex>,
    n_max: usize,
    summands: Vec<SymPower>,
    sum: DirectSum,
    monoid: CommutativeMonoidObject,
}

/// Exact truncation of `Sym X`; `X` must vanish in degree 0.
pub fn sym_free(x: &Arc<ChainComplex>, cap: usize) -> Result<TruncatedSym> {
    if x.dim(0) != 0 {
        return Err(Error::TruncationUnsound(
            "Sym of a complex with degree-0 classes is infinite in degree 0; give an explicit word bound".into(),
        ));
    }
    let cap = cap.min(x.cap());
    let n_max = match x.truncate(cap).bottom_degree() {
        Some(b) => cap / b,
        None => 0,
    };
    TruncatedSym::build(x, cap, n_max, true)
}

/// `Sym X` modulo words longer than `n_max`; flagged as not exact when that drops anything.
pub fn sym_free_truncated(x: &Arc<ChainComplex>, cap: usize, n_max: usize) -> Result<TruncatedSym> {
    let cap = cap.min(x.cap());
    let exact = match x.truncate(cap).bottom_degree() {
        None => true,
        Some(0) => false,
        Some(b) => n_max >= cap / b,
    };
    TruncatedSym::build(x, cap, n_max, exact)
}

impl TruncatedSym {
    fn build(x: &Arc<ChainComplex>, cap: usize, n_max: usize, exact: bool) -> Result<Self> {
        let field = x.field();
        let input = Arc::new(x.truncate(cap));
        let summands = (0..=n_max).map(|n| SymPower::new(&input, n)).collect::<Result<Vec<_>>>()?;
        let parts: Vec<Arc<ChainComplex>> = summands.iter().map(|s| s.object().clone()).collect();
        let sum = DirectSum::with_cap(field, &parts, cap)?;
        let mut unit = vec![Scalar::zero(field); sum.complex.dim(0)];
        unit[0] = Scalar::one(field);
        let locate = |d: usize, i: usize| {
            let k = (0..summands.len()).rev().find(|&k| sum.offset(d, k) <= i).expect("index lies in a summand");
            (k, i - sum.offset(d, k))
        };
        let product = |d1: usize, i1: usize, d2: usize, i2: usize| -> Result<Sparse> {
            let (a, l1) = locate(d1, i1);
            let (b, l2) = locate(d2, i2);
            if a + b > n_max {
                return Ok(vec![]);
            }
            let (sa, sb, sc) = (&summands[a], &summands[b], &summands[a + b]);
            let d = d1 + d2;
            let mut acc = vec![Scalar::zero(field); sc.object().dim(d)];
            for (r1, s1) in sa.quotient.section(d1).col_nonzeros(l1) {
                for (r2, s2) in sb.quotient.section(d2).col_nonzeros(l2) {
                    let w = [sa.tensor.words(d1)[r1].as_slice(), sb.tensor.words(d2)[r2].as_slice()].concat();
                    let col = sc.tensor.index_of(&w).expect("concatenated word");
                    let s = s1.mul(&s2)?;
                    for (r, c) in sc.quotient.projection.comp(d).col_nonzeros(col) {
                        acc[r] = acc[r].add(&c.mul(&s)?)?;
                    }
                }
            }
            let off = sum.offset(d, a + b);
            Ok(acc.into_iter().enumerate().filter(|(_, s)| !s.is_zero()).map(|(r, s)| (off + r, s)).collect())
        };
        let monoid = CommutativeMonoidObject::from_products(sum.complex.clone(), &unit, product)?;
        let monoid = if exact { monoid } else { monoid.mark_truncated() };
        Ok(TruncatedSym { input, n_max, summands, sum, monoid })
    }

    pub fn input(&self) -> &Arc<ChainComplex> {
        &self.input
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn cap(&self) -> usize {
        self.sum.cap()
    }

    pub fn summand(&self, n: usize) -> Option<&SymPower> {
        self.summands.get(n)
    }

    pub fn sum(&self) -> &DirectSum {
        &self.sum
    }

    pub fn monoid(&self) -> &CommutativeMonoidObject {
        &self.monoid
    }

    pub fn is_exact(&self) -> bool {
        self.monoid.is_exact()
    }

    /// `X → Sym X` onto the word-length-one summand.
    pub fn inclusion(&self) -> Result<ChainMap> {
        let obj = self.sum.complex.clone();
        if self.n_max == 0 {
            return ChainMap::zero(self.input.clone(), obj);
        }
        let one = &self.summands[1];
        let to_power = ChainMap::identity(self.input.clone()).retarget(self.input.clone(), one.tensor.complex().clone())?;
        self.sum.injections[1].compose(&one.quotient.projection.compose(&to_power)?)
    }

    /// The monoid map `Sym X → T` adjoint to `g: X → T`.
    ///
    /// On `Sym^n` it is the `n`-fold product of `g` on each factor, descended to coinvariants.
    pub fn universal(&self, g: &ChainMap, target: &CommutativeMonoidObject) -> Result<ChainMap> {
        if !g.source().same_data(&self.input) || !g.target().same_data(target.underlying()) {
            return Err(Error::DimensionMismatch("g must run from the generators to the target monoid".into()));
        }
        let field = target.field();
        let t = target.underlying().clone();
        let mut comps = Vec::with_capacity(self.summands.len());
        for s in &self.summands {
            let src = s.tensor.complex().clone();
            let on_words = ChainMap::from_fn(src.clone(), t.clone(), |d| {
                let mut m = Matrix::zeros(field, t.dim(d), src.dim(d));
                for (j, w) in s.tensor.words(d).iter().enumerate() {
                    let mut deg = 0;
                    let mut v: Option<Sparse> = Some(target.unit_vector());
                    for &(dk, ik) in w {
                        let Some(cur) = v else { break };
                        let gk = if dk <= g.cap() { g.comp(dk).col_nonzeros(ik) } else { vec![] };
                        v = target.product(deg, &cur, dk, &gk)?;
                        deg += dk;
                    }
                    for (r, c) in v.unwrap_or_default() {
                        m.add_scalar(r, j, &c);
                    }
                }
                Ok(m)
            })?;
            let descended = s
                .quotient
                .descend(&on_words)
                .map_err(|e| Error::DescentFailure(format!("Sym^{} of the adjoint map: {e}", s.power)))?;
            comps.push(descended);
        }
        let refs: Vec<&ChainMap> = comps.iter().collect();
        self.sum.copair(t, &refs)
    }
}

/// The monoid map `Sym K → X` adjoint to `g: K → X`, for `K` vanishing in degree 0.
pub fn sym_universal(g: &ChainMap, x: &CommutativeMonoidObject, cap: usize) -> Result<ChainMap> {
    let cap = cap.min(x.cap());
    let sym = sym_free(g.source(), cap)?;
    let x = x.truncate(sym.cap())?;
    let g = g.retarget(sym.input().clone(), x.underlying().clone())?;
    sym.universal(&g, &x)
}

/// `Sym(h): Sym K → Sym L` as the monoid map adjoint to `K → L → Sym L`.
pub fn sym_map(h: &ChainMap, sym_k: &TruncatedSym, sym_l: &TruncatedSym) -> Result<ChainMap> {
    let h = h.retarget(sym_k.input().clone(), sym_l.input().clone())?;
    sym_k.universal(&sym_l.inclusion()?.compose(&h)?, sym_l.monoid())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{homology_dims, is_quasi_iso};
    use crate::linalg::Field;
    use crate::standard::{sphere_to_disk, zero_to_disk};
    use crate::sym::square_zero;

    fn arc(c: ChainComplex) -> Arc<ChainComplex> {
        Arc::new(c)
    }

    #[test]
    fn small_powers() {
        let q = Field::Rational;
        let s1 = arc(ChainComplex::sphere(1, q));
        assert!(sym_power(&s1, 2).unwrap().is_zero());
        let s0 = sym_power(&s1, 0).unwrap();
        assert_eq!(s0.dims()[0], 1);
        assert_eq!(s0.total_dim(), 1);
        let d1 = arc(ChainComplex::disk(1, Field::Prime(2)).unwrap());
        let sq = sym_power(&d1, 2).unwrap();
        assert_eq!(&sq.dims()[..3], &[1, 1, 1]);
        assert_eq!(homology_dims(&sq)[2], 1);
    }

    #[test]
    fn polynomial_and_exterior() {
        let q = Field::Rational;
        let even = sym_free(&arc(ChainComplex::sphere(2, q)), 8).unwrap();
        assert_eq!(even.monoid().underlying().dims(), &[1, 0, 1, 0, 1, 0, 1, 0, 1]);
        let odd = sym_free(&arc(ChainComplex::sphere_capped(1, q, 4).unwrap()), 4).unwrap();
        assert_eq!(odd.monoid().underlying().dims(), &[1, 1, 0, 0, 0]);
        let zero = sym_free(&arc(ChainComplex::zero(q, 4)), 4).unwrap();
        assert_eq!(zero.monoid().underlying().dims(), &[1, 0, 0, 0, 0]);
        assert!(matches!(sym_free(&arc(ChainComplex::sphere(0, q)), 4), Err(Error::TruncationUnsound(_))));
        let trunc = sym_free_truncated(&arc(ChainComplex::sphere(0, q)), 4, 3).unwrap();
        assert!(!trunc.is_exact());
        assert_eq!(trunc.monoid().underlying().dims()[0], 4);
    }

    #[test]
    fn universal_maps() {
        let q = Field::Rational;
        let k = arc(ChainComplex::sphere(2, q));
        let sym = sym_free(&k, 8).unwrap();
        // identity through the canonical inclusion
        let id = sym.universal(&sym.inclusion().unwrap(), sym.monoid()).unwrap();
        assert!(id.is_identity());
        // into the square-zero monoid the square of the generator dies
        let sz = square_zero(q, 2, 8).unwrap();
        let g = ChainMap::from_fn(k.clone(), sz.underlying().clone(), |d| {
            let mut m = Matrix::zeros(q, sz.underlying().dim(d), k.dim(d));
            if d == 2 {
                m.add_int(0, 0, 1);
            }
            Ok(m)
        })
        .unwrap();
        let u = sym_universal(&g, &sz, 8).unwrap();
        assert_eq!(u.comp(2).rank(), 1);
        assert!(u.comp(4).is_zero());
        assert!(sym.monoid().monoid_map_violation(&sz, &u).unwrap().is_none());
    }

    #[test]
    fn trivial_cofibration_powers_over_q() {
        let q = Field::Rational;
        for f in [zero_to_disk(2, q).unwrap(), zero_to_disk(3, q).unwrap()] {
            for n in 1..=3 {
                let m = sym_power_map(&f, n).unwrap();
                assert!(m.is_mono() && is_quasi_iso(&m).unwrap());
            }
        }
        let m = sym_power_map(&sphere_to_disk(3, q), 2).unwrap();
        assert!(m.is_mono() && !is_quasi_iso(&m).unwrap());
    }
}
