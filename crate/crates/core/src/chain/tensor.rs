use std::collections::HashMap;
use std::sync::Arc;

use super::complex::{ChainComplex, DEFAULT_CAP};
use super::map::ChainMap;
use crate::error::{Error, Result};
use crate::guard;
use crate::linalg::{Field, Matrix, Scalar};

/// One basis element of a tensor product: `(degree, index)` for each factor.
pub type Word = Vec<(usize, usize)>;

/// Basis bookkeeping for `C_1 ⊗ ⋯ ⊗ C_k`.
///
/// Words of each total degree are listed lexicographically in their
/// `(degree, index)` tuples, which fixes every matrix built on top of them.
#[derive(Clone, Debug)]
pub struct TensorFactors {
    field: Field,
    factors: Vec<Arc<ChainComplex>>,
    cap: usize,
    words: Vec<Vec<Word>>,
    index: Vec<HashMap<Word, usize>>,
    complex: Arc<ChainComplex>,
}

impl TensorFactors {
    /// Cap is the smallest factor cap (`DEFAULT_CAP` for the empty product).
    pub fn new(field: Field, factors: Vec<Arc<ChainComplex>>) -> Result<Self> {
        let cap = factors.iter().map(|c| c.cap()).min().unwrap_or(DEFAULT_CAP);
        Self::with_cap(field, factors, cap)
    }

    pub fn with_cap(field: Field, factors: Vec<Arc<ChainComplex>>, cap: usize) -> Result<Self> {
        for c in &factors {
            field.ensure_same(c.field())?;
        }
        let cap = factors.iter().map(|c| c.cap()).fold(cap, usize::min);
        // dimension count by convolution before enumerating anything
        let mut dims = vec![0usize; cap + 1];
        dims[0] = 1;
        for c in &factors {
            let mut next = vec![0usize; cap + 1];
            for (a, &da) in dims.iter().enumerate() {
                if da == 0 {
                    continue;
                }
                for b in 0..=cap - a {
                    next[a + b] = next[a + b].saturating_add(da.saturating_mul(c.dim(b)));
                }
            }
            dims = next;
        }
        guard::check("tensor product dimension", dims.iter().copied().max().unwrap_or(0))?;

        let mut words: Vec<Vec<Word>> = vec![Vec::new(); cap + 1];
        let mut current = Vec::with_capacity(factors.len());
        enumerate(&factors, 0, 0, cap, &mut current, &mut words);
        let words = words;
        let index: Vec<HashMap<Word, usize>> = words
            .iter()
            .map(|ws| ws.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect())
            .collect();

        let complex = Arc::new(build_complex(field, &factors, cap, &words, &index)?);
        Ok(TensorFactors { field, factors, cap, words, index, complex })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn factors(&self) -> &[Arc<ChainComplex>] {
        &self.factors
    }

    pub fn arity(&self) -> usize {
        self.factors.len()
    }

    pub fn complex(&self) -> &Arc<ChainComplex> {
        &self.complex
    }

    pub fn words(&self, n: usize) -> &[Word] {
        self.words.get(n).map_or(&[], Vec::as_slice)
    }

    pub fn index_of(&self, w: &[(usize, usize)]) -> Option<usize> {
        let n: usize = w.iter().map(|p| p.0).sum();
        self.index.get(n)?.get(w).copied()
    }
}

fn enumerate(
    factors: &[Arc<ChainComplex>],
    k: usize,
    used: usize,
    cap: usize,
    current: &mut Word,
    out: &mut [Vec<Word>],
) {
    if k == factors.len() {
        out[used].push(current.clone());
        return;
    }
    for d in 0..=cap - used {
        for i in 0..factors[k].dim(d) {
            current.push((d, i));
            enumerate(factors, k + 1, used + d, cap, current, out);
            current.pop();
        }
    }
}

fn build_complex(
    field: Field,
    factors: &[Arc<ChainComplex>],
    cap: usize,
    words: &[Vec<Word>],
    index: &[HashMap<Word, usize>],
) -> Result<ChainComplex> {
    let dims: Vec<usize> = words.iter().map(Vec::len).collect();
    let mut diffs = Vec::with_capacity(cap);
    for n in 1..=cap {
        let mut m = Matrix::zeros(field, dims[n - 1], dims[n]);
        for (j, w) in words[n].iter().enumerate() {
            let mut prefix = 0;
            for (k, &(d, i)) in w.iter().enumerate() {
                if d > 0 {
                    let negate = prefix % 2 == 1;
                    for (r, c) in factors[k].d(d).col_nonzeros(i) {
                        let mut v = w.clone();
                        v[k] = (d - 1, r);
                        let row = index[n - 1][&v];
                        m.add_scalar(row, j, &if negate { c.neg() } else { c });
                    }
                }
                prefix += d;
            }
        }
        diffs.push(m);
    }
    let complex = ChainComplex::new(field, dims, diffs)
        .map_err(|e| Error::InvariantViolated(format!("tensor differential: {e}")))?;
    let labels = words
        .iter()
        .enumerate()
        .map(|(_, ws)| {
            ws.iter()
                .map(|w| {
                    if w.is_empty() {
                        "1".to_string()
                    } else {
                        w.iter().enumerate().map(|(k, &(d, i))| factors[k].label(d, i)).collect::<Vec<_>>().join("⊗")
                    }
                })
                .collect()
        })
        .collect();
    complex.with_labels(labels)
}

/// `X ⊗ Y` with the Koszul differential.
pub fn tensor(x: &Arc<ChainComplex>, y: &Arc<ChainComplex>) -> Result<ChainComplex> {
    x.field().ensure_same(y.field())?;
    Ok(TensorFactors::new(x.field(), vec![x.clone(), y.clone()])?.complex().as_ref().clone())
}

/// One block of a grouped tensor of maps: a map between the tensor products of
/// `sources` and of `targets`.
pub struct TensorPart<'a> {
    pub sources: Vec<Arc<ChainComplex>>,
    pub targets: Vec<Arc<ChainComplex>>,
    pub map: &'a ChainMap,
}

impl<'a> TensorPart<'a> {
    /// A map between single factors.
    pub fn single(map: &'a ChainMap) -> Self {
        TensorPart { sources: vec![map.source().clone()], targets: vec![map.target().clone()], map }
    }
}

/// `f_1 ⊗ ⋯ ⊗ f_k` from the flat product of all sources to the flat product of all targets.
pub fn tensor_maps(field: Field, parts: &[TensorPart<'_>]) -> Result<ChainMap> {
    let src = TensorFactors::new(field, parts.iter().flat_map(|p| p.sources.iter().cloned()).collect())?;
    let tgt = TensorFactors::new(field, parts.iter().flat_map(|p| p.targets.iter().cloned()).collect())?;
    tensor_maps_between(&src, &tgt, parts)
}

/// As [`tensor_maps`], reusing already enumerated source and target products.
pub fn tensor_maps_between(src: &TensorFactors, tgt: &TensorFactors, parts: &[TensorPart<'_>]) -> Result<ChainMap> {
    let field = src.field();
    let mut subs = Vec::with_capacity(parts.len());
    let mut cap = src.cap().min(tgt.cap());
    for p in parts {
        field.ensure_same(p.map.field())?;
        let s = TensorFactors::new(field, p.sources.clone())?;
        let t = TensorFactors::new(field, p.targets.clone())?;
        if !s.complex().same_data(p.map.source()) || !t.complex().same_data(p.map.target()) {
            return Err(Error::DimensionMismatch("tensor part map does not match its factor lists".into()));
        }
        cap = cap.min(p.map.cap()).min(s.cap()).min(t.cap());
        subs.push((s, t));
    }
    let arity_s: usize = parts.iter().map(|p| p.sources.len()).sum();
    let arity_t: usize = parts.iter().map(|p| p.targets.len()).sum();
    if arity_s != src.arity() || arity_t != tgt.arity() {
        return Err(Error::DimensionMismatch("tensor part arities do not match the products".into()));
    }

    let mut comps = Vec::with_capacity(cap + 1);
    for n in 0..=cap {
        let mut m = Matrix::zeros(field, tgt.complex().dim(n), src.complex().dim(n));
        let mut cache: Vec<HashMap<(usize, usize), Vec<(Word, Scalar)>>> = vec![HashMap::new(); parts.len()];
        for (j, w) in src.words(n).iter().enumerate() {
            // images of each group, then their product
            let mut acc: Vec<(Word, Scalar)> = vec![(Vec::new(), Scalar::one(field))];
            let mut offset = 0;
            for (k, p) in parts.iter().enumerate() {
                let sub = &w[offset..offset + p.sources.len()];
                offset += p.sources.len();
                let deg: usize = sub.iter().map(|x| x.0).sum();
                let idx = subs[k].0.index_of(sub).expect("subword is a basis word");
                let images = cache[k].entry((deg, idx)).or_insert_with(|| {
                    p.map
                        .comp(deg)
                        .col_nonzeros(idx)
                        .into_iter()
                        .map(|(r, c)| (subs[k].1.words(deg)[r].clone(), c))
                        .collect()
                });
                if images.is_empty() {
                    acc.clear();
                    break;
                }
                let mut next = Vec::with_capacity(acc.len() * images.len());
                for (prefix, a) in &acc {
                    for (tail, b) in images.iter() {
                        let mut v = prefix.clone();
                        v.extend_from_slice(tail);
                        next.push((v, a.mul(b)?));
                    }
                }
                acc = next;
            }
            for (v, c) in acc {
                let row = tgt.index_of(&v).expect("image word is a basis word");
                m.add_scalar(row, j, &c);
            }
        }
        comps.push(m);
    }
    let f = ChainMap::new_unchecked(src.complex().clone(), tgt.complex().clone(), comps)?;
    debug_assert!(f.check_chain_condition().is_ok());
    Ok(f)
}

/// `f ⊗ g`.
pub fn tensor_map(f: &ChainMap, g: &ChainMap) -> Result<ChainMap> {
    tensor_maps(f.field(), &[TensorPart::single(f), TensorPart::single(g)])
}

/// Koszul sign of moving factor `i` of a word to position `perm[i]`, computed by
/// bubbling adjacent transpositions.
pub fn permutation_sign(degrees: &[usize], perm: &[usize]) -> bool {
    let mut seq: Vec<(usize, usize)> = perm.iter().copied().zip(degrees.iter().copied()).collect();
    let mut negative = false;
    let n = seq.len();
    for a in 0..n {
        for b in 0..n - 1 - a {
            if seq[b].0 > seq[b + 1].0 {
                if seq[b].1 % 2 == 1 && seq[b + 1].1 % 2 == 1 {
                    negative = !negative;
                }
                seq.swap(b, b + 1);
            }
        }
    }
    negative
}

/// The signed permutation `C_1 ⊗ ⋯ ⊗ C_k → C_{π⁻¹(1)} ⊗ ⋯` sending factor `i` to slot `perm[i]`.
pub fn permutation_map(src: &TensorFactors, perm: &[usize]) -> Result<ChainMap> {
    let k = src.arity();
    let mut seen = vec![false; k];
    if perm.len() != k || perm.iter().any(|&p| p >= k || std::mem::replace(&mut seen[p], true)) {
        return Err(Error::OutOfRange(format!("{perm:?} is not a permutation of {k} factors")));
    }
    let mut out: Vec<Option<Arc<ChainComplex>>> = vec![None; k];
    for (i, &p) in perm.iter().enumerate() {
        out[p] = Some(src.factors()[i].clone());
    }
    let out: Vec<Arc<ChainComplex>> = out.into_iter().map(|c| c.expect("permutation is onto")).collect();
    let tgt = TensorFactors::with_cap(src.field(), out, src.cap())?;
    permutation_map_between(src, &tgt, perm)
}

/// As [`permutation_map`] with a prebuilt target product.
pub fn permutation_map_between(src: &TensorFactors, tgt: &TensorFactors, perm: &[usize]) -> Result<ChainMap> {
    let field = src.field();
    let cap = src.cap().min(tgt.cap());
    let mut comps = Vec::with_capacity(cap + 1);
    for n in 0..=cap {
        let mut m = Matrix::zeros(field, tgt.complex().dim(n), src.complex().dim(n));
        for (j, w) in src.words(n).iter().enumerate() {
            let mut v = vec![(0, 0); w.len()];
            for (i, &p) in perm.iter().enumerate() {
                v[p] = w[i];
            }
            let degrees: Vec<usize> = w.iter().map(|x| x.0).collect();
            let row = tgt
                .index_of(&v)
                .ok_or_else(|| Error::DimensionMismatch("permuted word missing from target".into()))?;
            m.add_int(row, j, if permutation_sign(&degrees, perm) { -1 } else { 1 });
        }
        comps.push(m);
    }
    let f = ChainMap::new_unchecked(src.complex().clone(), tgt.complex().clone(), comps)?;
    debug_assert!(f.check_chain_condition().is_ok());
    Ok(f)
}

/// The symmetry `τ: X ⊗ Y → Y ⊗ X`, `x ⊗ y ↦ (−1)^{|x||y|} y ⊗ x`.
pub fn symmetry_iso(x: &Arc<ChainComplex>, y: &Arc<ChainComplex>) -> Result<ChainMap> {
    x.field().ensure_same(y.field())?;
    let src = TensorFactors::new(x.field(), vec![x.clone(), y.clone()])?;
    permutation_map(&src, &[1, 0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::homology::homology_dims;

    fn arc(c: ChainComplex) -> Arc<ChainComplex> {
        Arc::new(c)
    }

    #[test]
    fn unit_law_dims() {
        let f = Field::Rational;
        let y = arc(ChainComplex::disk(2, f).unwrap());
        let t = tensor(&arc(ChainComplex::sphere(0, f)), &y).unwrap();
        assert!(t.same_data(&y));
    }

    #[test]
    fn disk_squared_is_acyclic() {
        let f = Field::Rational;
        let d = arc(ChainComplex::disk(1, f).unwrap());
        let t = tensor(&d, &d).unwrap();
        assert_eq!(&t.dims()[..3], &[1, 2, 1]);
        assert!(homology_dims(&t).iter().all(|&h| h == 0));
    }

    #[test]
    fn odd_spheres_swap_with_sign() {
        let f = Field::Rational;
        let s = arc(ChainComplex::sphere(1, f));
        let tau = symmetry_iso(&s, &s).unwrap();
        assert_eq!(tau.comp(2), &Matrix::from_int_rows(f, &[vec![-1]]));
        let s0 = arc(ChainComplex::sphere(0, f));
        assert!(symmetry_iso(&s0, &s0).unwrap().is_identity());
    }

    #[test]
    fn symmetry_is_involutive() {
        let f = Field::Rational;
        let d = arc(ChainComplex::disk(1, f).unwrap());
        let e = arc(ChainComplex::disk(2, f).unwrap());
        let t1 = symmetry_iso(&d, &e).unwrap();
        let t2 = symmetry_iso(&e, &d).unwrap();
        assert!(t2.compose(&t1).unwrap().is_identity());
        let tt = symmetry_iso(&d, &d).unwrap();
        assert!(tt.compose(&tt).unwrap().is_identity());
    }

    #[test]
    fn bubble_sign_matches_inversions() {
        // three odd factors reversed: three inversions
        assert!(permutation_sign(&[1, 1, 1], &[2, 1, 0]));
        assert!(!permutation_sign(&[1, 2, 1], &[1, 0, 2]));
        assert!(permutation_sign(&[1, 2, 1], &[2, 1, 0]));
    }
}
