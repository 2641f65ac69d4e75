use std::collections::{BTreeMap, VecDeque};
use std::sync::Arc;

use super::perm::{self, Perm};
use crate::chain::{
    permutation_map_between, ChainComplex, ChainMap, DirectSum, QuotientComplex, TensorFactors,
};
use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix};

/// Action of `Σ_n`, or of a Young subgroup of it, by chain automorphisms.
///
/// `generators[i]` is the action of the transposition `s_i = (i i+1)`, or `None`
/// when `s_i` is outside the acting subgroup.
#[derive(Clone, Debug)]
pub struct SymmetricGroupAction {
    n: usize,
    generators: Vec<Option<ChainMap>>,
}

impl SymmetricGroupAction {
    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn generator(&self, i: usize) -> Option<&ChainMap> {
        self.generators.get(i).and_then(Option::as_ref)
    }

    pub fn generators(&self) -> &[Option<ChainMap>] {
        &self.generators
    }

    pub fn is_full(&self) -> bool {
        self.generators.iter().all(Option::is_some)
    }
}

/// A complex with a symmetric group action.
#[derive(Clone, Debug)]
pub struct EquivariantComplex {
    complex: Arc<ChainComplex>,
    action: SymmetricGroupAction,
}

impl EquivariantComplex {
    /// Check that the generators are automorphisms satisfying the Coxeter relations.
    pub fn new(complex: Arc<ChainComplex>, n: usize, generators: Vec<Option<ChainMap>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::OutOfRange("arity must be at least 1".into()));
        }
        if generators.len() != n - 1 {
            return Err(Error::InvalidAction(format!("{} generators for arity {n}", generators.len())));
        }
        let cap = complex.cap();
        for (i, g) in generators.iter().enumerate() {
            let Some(g) = g else { continue };
            if !g.source().same_data(&complex) || !g.target().same_data(&complex) || g.cap() < cap {
                return Err(Error::InvalidAction(format!("generator s_{i} is not an endomorphism of the complex")));
            }
            if !g.compose(g)?.is_identity() {
                return Err(Error::InvalidAction(format!("s_{i}² ≠ id")));
            }
        }
        for i in 0..generators.len() {
            for j in i + 1..generators.len() {
                let (Some(a), Some(b)) = (&generators[i], &generators[j]) else { continue };
                let ok = if j == i + 1 {
                    a.compose(b)?.compose(a)?.agrees_with(&b.compose(a)?.compose(b)?)
                } else {
                    a.compose(b)?.agrees_with(&b.compose(a)?)
                };
                if !ok {
                    return Err(Error::InvalidAction(format!("Coxeter relation fails for s_{i}, s_{j}")));
                }
            }
        }
        Ok(EquivariantComplex { complex, action: SymmetricGroupAction { n, generators } })
    }

    /// The trivial action of `Σ_n`.
    pub fn trivial(complex: Arc<ChainComplex>, n: usize) -> Result<Self> {
        let id = ChainMap::identity(complex.clone());
        Self::new(complex, n, vec![Some(id); n.saturating_sub(1)])
    }

    pub fn complex(&self) -> &Arc<ChainComplex> {
        &self.complex
    }

    pub fn action(&self) -> &SymmetricGroupAction {
        &self.action
    }

    pub fn arity(&self) -> usize {
        self.action.n
    }

    pub fn field(&self) -> Field {
        self.complex.field()
    }

    /// Every element of the acting group with its action, sorted by permutation.
    pub fn group_elements(&self) -> Result<BTreeMap<Perm, ChainMap>> {
        let n = self.arity();
        let mut out = BTreeMap::new();
        let id = perm::identity(n);
        out.insert(id.clone(), ChainMap::identity(self.complex.clone()));
        let mut queue = VecDeque::from([id]);
        while let Some(h) = queue.pop_front() {
            for (i, g) in self.action.generators.iter().enumerate() {
                let Some(g) = g else { continue };
                let next = perm::compose(&perm::transposition(n, i), &h);
                if !out.contains_key(&next) {
                    let m = g.compose(&out[&h])?;
                    out.insert(next.clone(), m);
                    queue.push_back(next);
                }
            }
        }
        Ok(out)
    }

    /// Whether `map: self → other` commutes with every common generator.
    pub fn is_equivariant(&self, other: &EquivariantComplex, map: &ChainMap) -> Result<bool> {
        for i in 0..self.arity().saturating_sub(1) {
            if let (Some(a), Some(b)) = (self.action.generator(i), other.action.generator(i)) {
                if !map.compose(a)?.agrees_with(&b.compose(map)?) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Restriction to the subgroup generated by the `s_i` with `keep[i]`.
    pub fn restrict(&self, keep: &[bool]) -> Result<Self> {
        let gens = self
            .action
            .generators
            .iter()
            .zip(keep)
            .map(|(g, &k)| if k { g.clone() } else { None })
            .collect();
        Ok(EquivariantComplex { complex: self.complex.clone(), action: SymmetricGroupAction { n: self.arity(), generators: gens } })
    }
}

/// A map of complexes carrying actions, checked to commute with the generators.
#[derive(Clone, Debug)]
pub struct EquivariantMap {
    pub source: EquivariantComplex,
    pub target: EquivariantComplex,
    pub map: ChainMap,
}

impl EquivariantMap {
    pub fn new(source: EquivariantComplex, target: EquivariantComplex, map: ChainMap) -> Result<Self> {
        if source.arity() != target.arity() {
            return Err(Error::InvalidAction("arity mismatch".into()));
        }
        if !source.is_equivariant(&target, &map)? {
            return Err(Error::InvalidAction("map does not commute with the action".into()));
        }
        Ok(EquivariantMap { source, target, map })
    }

    /// The induced map on coinvariants.
    pub fn on_coinvariants(&self) -> Result<(QuotientComplex, QuotientComplex, ChainMap)> {
        let s = coinvariants(&self.source)?;
        let t = coinvariants(&self.target)?;
        let m = s.descend_to(&self.map, &t)?;
        Ok((s, t, m))
    }
}

/// `X^{⊗n}` with `Σ_n` permuting factors with Koszul signs.
pub fn tensor_power_action(x: &Arc<ChainComplex>, n: usize) -> Result<EquivariantComplex> {
    let tf = TensorFactors::new(x.field(), vec![x.clone(); n])?;
    tensor_power_action_on(&tf)
}

/// The permutation action on a product whose factors are all equal.
pub fn tensor_power_action_on(tf: &TensorFactors) -> Result<EquivariantComplex> {
    let n = tf.arity();
    if n == 0 {
        return Err(Error::OutOfRange("tensor power needs n ≥ 1".into()));
    }
    let gens = (0..n - 1)
        .map(|i| permutation_map_between(tf, tf, &perm::transposition(n, i)).map(Some))
        .collect::<Result<Vec<_>>>()?;
    EquivariantComplex::new(tf.complex().clone(), n, gens)
}

/// Quotient by the span of `v − s_i v` over the acting generators.
pub fn coinvariants(e: &EquivariantComplex) -> Result<QuotientComplex> {
    let c = e.complex();
    let field = c.field();
    let relations = (0..=c.cap())
        .map(|n| {
            let id = Matrix::identity(field, c.dim(n));
            let blocks = e
                .action
                .generators
                .iter()
                .flatten()
                .map(|g| id.sub(g.comp(n)))
                .collect::<Result<Vec<_>>>()?;
            let refs: Vec<&Matrix> = blocks.iter().collect();
            Matrix::hstack(field, c.dim(n), &refs)
        })
        .collect::<Result<Vec<_>>>()?;
    QuotientComplex::new(c.clone(), relations)
}

/// `Σ_n ·_{Young(sizes)} M`: one copy of `M` per shuffle, with the permuted-coset action.
///
/// `m` must carry the generators of the Young subgroup; others are ignored.
pub fn induce(m: &EquivariantComplex, sizes: &[usize]) -> Result<EquivariantComplex> {
    Ok(Induced::new(m, sizes)?.equivariant)
}

/// An induced complex with the data needed to build maps out of it.
#[derive(Clone, Debug)]
pub struct Induced {
    pub equivariant: EquivariantComplex,
    pub restricted: EquivariantComplex,
    pub sum: DirectSum,
    pub cosets: Vec<Perm>,
    pub sizes: Vec<usize>,
}

impl Induced {
    pub fn new(m: &EquivariantComplex, sizes: &[usize]) -> Result<Self> {
        let n: usize = sizes.iter().sum();
        if n != m.arity() {
            return Err(Error::InvalidAction(format!("block sizes {sizes:?} do not add up to arity {}", m.arity())));
        }
        let mask = perm::young_generators(sizes);
        for (i, g) in m.action.generators.iter().enumerate() {
            if mask[i] && g.is_none() {
                return Err(Error::InvalidAction(format!("Young subgroup generator s_{i} missing")));
            }
        }
        let m = m.restrict(&mask)?;
        let reps = perm::shuffles(sizes);
        let field = m.field();
        let sum = DirectSum::new(field, &vec![m.complex().clone(); reps.len()])?;
        let elements = m.group_elements()?;
        let position: BTreeMap<&Perm, usize> = reps.iter().enumerate().map(|(k, p)| (p, k)).collect();
        let mut gens = Vec::with_capacity(n.saturating_sub(1));
        for i in 0..n.saturating_sub(1) {
            let s = perm::transposition(n, i);
            let mut parts: Vec<ChainMap> = Vec::with_capacity(reps.len());
            for sigma in &reps {
                let g = perm::compose(&s, sigma);
                let rep = perm::coset_representative(&g, sizes);
                let h = perm::compose(&perm::inverse(&rep), &g);
                let rho = elements
                    .get(&h)
                    .ok_or_else(|| Error::InvariantViolated(format!("{h:?} is not in the Young subgroup")))?;
                parts.push(sum.injections[position[&rep]].compose(rho)?);
            }
            let refs: Vec<&ChainMap> = parts.iter().collect();
            gens.push(Some(sum.copair(sum.complex.clone(), &refs)?));
        }
        let equivariant = EquivariantComplex::new(sum.complex.clone(), n, gens)?;
        Ok(Induced { equivariant, restricted: m, sum, cosets: reps, sizes: sizes.to_vec() })
    }

    /// `Ind(φ)` for a subgroup-equivariant `φ: M → other.M`.
    pub fn map(&self, other: &Induced, phi: &ChainMap) -> Result<ChainMap> {
        if self.sizes != other.sizes {
            return Err(Error::InvalidAction("induced maps need the same Young subgroup".into()));
        }
        if !self.restricted.is_equivariant(&other.restricted, phi)? {
            return Err(Error::InvalidAction("map is not equivariant for the Young subgroup".into()));
        }
        let parts =
            other.sum.injections.iter().map(|inj| inj.compose(phi)).collect::<Result<Vec<_>>>()?;
        let refs: Vec<&ChainMap> = parts.iter().collect();
        self.sum.copair(other.sum.complex.clone(), &refs)
    }

    /// The `Σ_n`-map `Ind(M) → T` adjoint to a subgroup-equivariant `φ: M → T`.
    pub fn adjoint(&self, phi: &ChainMap, target: &EquivariantComplex) -> Result<ChainMap> {
        let restricted_target = target.restrict(&perm::young_generators(&self.sizes))?;
        if !self.restricted.is_equivariant(&restricted_target, phi)? {
            return Err(Error::InvalidAction("map is not equivariant for the Young subgroup".into()));
        }
        let rho = target.group_elements()?;
        let parts = self
            .cosets
            .iter()
            .map(|sigma| {
                rho.get(sigma)
                    .ok_or_else(|| Error::InvalidAction("target action does not reach every coset".into()))?
                    .compose(phi)
            })
            .collect::<Result<Vec<_>>>()?;
        let refs: Vec<&ChainMap> = parts.iter().collect();
        self.sum.copair(target.complex().clone(), &refs)
    }
}

/// Degreewise freeness of a `Σ_2`-action over `𝔽_2`: `dim` even and `rank(1 + τ) = dim/2`.
pub fn is_free_sigma2(e: &EquivariantComplex) -> Result<Vec<bool>> {
    if e.field() != Field::Prime(2) {
        return Err(Error::UnsupportedField(format!("freeness test needs F2, got {}", e.field())));
    }
    if e.arity() != 2 || !e.action.is_full() {
        return Err(Error::InvalidAction("freeness test needs a Σ2 action".into()));
    }
    let tau = e.action.generator(0).expect("full action");
    let c = e.complex();
    (0..=c.cap())
        .map(|n| {
            let d = c.dim(n);
            let norm = Matrix::identity(Field::Prime(2), d).add(tau.comp(n))?;
            Ok(d % 2 == 0 && norm.rank() * 2 == d)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::homology_dims;

    fn arc(c: ChainComplex) -> Arc<ChainComplex> {
        Arc::new(c)
    }

    #[test]
    fn odd_square_swap() {
        let s = arc(ChainComplex::sphere(1, Field::Rational));
        let e = tensor_power_action(&s, 2).unwrap();
        let g = e.action().generator(0).unwrap();
        assert_eq!(g.comp(2), &Matrix::from_int_rows(Field::Rational, &[vec![-1]]));
        let q = coinvariants(&e).unwrap();
        assert_eq!(q.object.dim(2), 0);
        let s2 = arc(ChainComplex::sphere(1, Field::Prime(2)));
        let q2 = coinvariants(&tensor_power_action(&s2, 2).unwrap()).unwrap();
        assert_eq!(q2.object.dim(2), 1);
    }

    #[test]
    fn degree_zero_cube_is_permutation() {
        let s = arc(ChainComplex::sphere(0, Field::Rational));
        let e = tensor_power_action(&s, 3).unwrap();
        for g in e.action().generators().iter().flatten() {
            assert!(g.is_identity());
        }
        assert!(coinvariants(&e).unwrap().projection.is_identity());
    }

    #[test]
    fn trivial_action_coinvariants() {
        let d = arc(ChainComplex::disk(2, Field::Prime(3)).unwrap());
        let e = EquivariantComplex::trivial(d, 3).unwrap();
        assert!(coinvariants(&e).unwrap().projection.is_identity());
    }

    #[test]
    fn induce_counts() {
        let f = Field::Rational;
        let s = arc(ChainComplex::sphere(0, f));
        let m = EquivariantComplex::new(s.clone(), 2, vec![None]).unwrap();
        let ind = induce(&m, &[1, 1]).unwrap();
        assert_eq!(ind.complex().dim(0), 2);
        let swap = ind.action().generator(0).unwrap();
        assert_eq!(swap.comp(0), &Matrix::from_int_rows(f, &[vec![0, 1], vec![1, 0]]));

        let m3 = EquivariantComplex::trivial(s.clone(), 3).unwrap().restrict(&perm::young_generators(&[1, 2])).unwrap();
        assert_eq!(induce(&m3, &[1, 2]).unwrap().complex().dim(0), 3);
        let whole = EquivariantComplex::trivial(s, 3).unwrap();
        assert!(induce(&whole, &[3, 0]).unwrap().complex().same_data(whole.complex()));
    }

    #[test]
    fn sigma2_freeness() {
        let f = Field::Prime(2);
        let s = arc(ChainComplex::sphere(0, f));
        let reg = induce(&EquivariantComplex::new(s.clone(), 2, vec![None]).unwrap(), &[1, 1]).unwrap();
        assert!(is_free_sigma2(&reg).unwrap()[0]);
        let triv = EquivariantComplex::trivial(s, 2).unwrap();
        assert!(!is_free_sigma2(&triv).unwrap()[0]);
    }

    #[test]
    fn coinvariants_stay_complexes() {
        let d = arc(ChainComplex::disk(1, Field::Prime(2)).unwrap());
        let q = coinvariants(&tensor_power_action(&d, 2).unwrap()).unwrap();
        // Sym²(D(1)) over F2: dims 1, 1, 1 and H_2 = F2
        assert_eq!(&q.object.dims()[..3], &[1, 1, 1]);
        assert_eq!(homology_dims(&q.object)[2], 1);
    }
}
