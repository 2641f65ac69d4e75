use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::chain::{
    colimit_unchecked, permutation_map_between, tensor_maps_between, ChainComplex, ChainMap, Colimit, Diagram,
    TensorFactors, TensorPart,
};
use crate::equivariant::{perm, EquivariantComplex};
use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix};

/// A vertex of a cube: one letter index per tensor slot.
pub type Letters = Vec<usize>;

/// Sort words in colex order (last slot most significant).
pub fn colex_sort(words: &mut Vec<Letters>) {
    words.sort_by(|a, b| a.iter().rev().cmp(b.iter().rev()));
    words.dedup();
}

/// All words of length `n` over `m` letters, in colex order.
pub fn all_words(m: usize, n: usize) -> Vec<Letters> {
    let mut out: Vec<Letters> = vec![vec![]];
    for _ in 0..n {
        out = out.into_iter().flat_map(|w| (0..m).map(move |a| [w.as_slice(), &[a]].concat())).collect();
    }
    colex_sort(&mut out);
    out
}

pub fn below(a: &[usize], b: &[usize]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// The `m^n` rectangle of tensor words over a chain of letter maps
/// `A_0 → A_1 → ⋯ → A_{m−1}`, with edges the tensors of identities and letter maps.
#[derive(Debug)]
pub struct WordCube {
    field: Field,
    n: usize,
    letters: Vec<Arc<ChainComplex>>,
    maps: Vec<ChainMap>,
    vertices: Mutex<HashMap<Letters, Arc<TensorFactors>>>,
}

impl WordCube {
    /// Letters are the source of `maps[0]` and every target; all are cut to a common cap.
    pub fn new(maps: &[ChainMap], n: usize) -> Result<Self> {
        let first = maps.first().ok_or_else(|| Error::OutOfRange("a cube needs at least one letter map".into()))?;
        if n == 0 {
            return Err(Error::OutOfRange("cube arity must be at least 1".into()));
        }
        let field = first.field();
        for w in maps.windows(2) {
            if !w[0].target().same_data(w[1].source()) {
                return Err(Error::DimensionMismatch("letter maps are not composable".into()));
            }
        }
        let cap = maps
            .iter()
            .map(|m| m.cap().min(m.source().cap()).min(m.target().cap()))
            .min()
            .expect("nonempty");
        let mut letters = vec![Arc::new(first.source().truncate(cap))];
        letters.extend(maps.iter().map(|m| Arc::new(m.target().truncate(cap))));
        let maps = maps
            .iter()
            .enumerate()
            .map(|(i, m)| m.truncate(cap).retarget(letters[i].clone(), letters[i + 1].clone()))
            .collect::<Result<Vec<_>>>()?;
        Ok(WordCube { field, n, letters, maps, vertices: Mutex::new(HashMap::new()) })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn cap(&self) -> usize {
        self.letters[0].cap()
    }

    pub fn letter_count(&self) -> usize {
        self.letters.len()
    }

    pub fn letter(&self, a: usize) -> &Arc<ChainComplex> {
        &self.letters[a]
    }

    pub fn letter_map(&self, a: usize, b: usize) -> Result<ChainMap> {
        if a > b || b >= self.letters.len() {
            return Err(Error::OutOfRange(format!("no letter map {a} → {b}")));
        }
        let mut m = ChainMap::identity(self.letters[a].clone());
        for k in a..b {
            m = self.maps[k].compose(&m)?;
        }
        Ok(m)
    }

    pub fn vertex(&self, w: &[usize]) -> Result<Arc<TensorFactors>> {
        if w.len() != self.n || w.iter().any(|&a| a >= self.letters.len()) {
            return Err(Error::OutOfRange(format!("{w:?} is not a vertex")));
        }
        if let Some(tf) = self.vertices.lock().expect("vertex cache").get(w) {
            return Ok(tf.clone());
        }
        let tf = Arc::new(TensorFactors::new(self.field, w.iter().map(|&a| self.letters[a].clone()).collect())?);
        self.vertices.lock().expect("vertex cache").insert(w.to_vec(), tf.clone());
        Ok(tf)
    }

    /// The map `W(a) → W(b)` for `a ≤ b` slotwise.
    pub fn edge(&self, a: &[usize], b: &[usize]) -> Result<ChainMap> {
        if !below(a, b) {
            return Err(Error::OutOfRange(format!("{a:?} is not below {b:?}")));
        }
        let slot_maps = a.iter().zip(b).map(|(&x, &y)| self.letter_map(x, y)).collect::<Result<Vec<_>>>()?;
        self.slotwise(&*self.vertex(a)?, &*self.vertex(b)?, &slot_maps)
    }

    /// `⊗_i maps[i]` between two prebuilt vertices.
    pub fn slotwise(&self, src: &TensorFactors, tgt: &TensorFactors, maps: &[ChainMap]) -> Result<ChainMap> {
        let parts: Vec<TensorPart<'_>> = maps.iter().map(TensorPart::single).collect();
        tensor_maps_between(src, tgt, &parts)
    }

    /// `σ · w` and the signed permutation `W(w) → W(σ·w)`.
    pub fn permute(&self, w: &[usize], sigma: &[usize]) -> Result<(Letters, ChainMap)> {
        let mut image = vec![0; w.len()];
        for (i, &p) in sigma.iter().enumerate() {
            image[p] = w[i];
        }
        let map = permutation_map_between(&*self.vertex(w)?, &*self.vertex(&image)?, sigma)?;
        Ok((image, map))
    }

    /// Colimit over the full subposet on `words`.
    pub fn colimit(&self, mut words: Vec<Letters>) -> Result<CubeColimit> {
        colex_sort(&mut words);
        let vertices = words.iter().map(|w| self.vertex(w)).collect::<Result<Vec<_>>>()?;
        let mut diagram = Diagram::new(self.field);
        for v in &vertices {
            diagram.add_vertex(v.complex().clone());
        }
        for (i, a) in words.iter().enumerate() {
            for (j, b) in words.iter().enumerate() {
                if i == j || !below(a, b) {
                    continue;
                }
                let covered = words.iter().any(|u| u != a && u != b && below(a, u) && below(u, b));
                if !covered {
                    diagram.add_edge(i, j, self.edge(a, b)?);
                }
            }
        }
        let colimit = colimit_unchecked(&diagram)?;
        let position = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        Ok(CubeColimit { words, vertices, colimit, position, diagram })
    }

    /// The `Σ_n` (or Young subgroup, per `mask`) action on the colimit of a closed vertex set.
    pub fn action(&self, cc: &CubeColimit, mask: &[bool]) -> Result<EquivariantComplex> {
        let n = self.n;
        let mut gens = Vec::with_capacity(n.saturating_sub(1));
        for i in 0..n.saturating_sub(1) {
            if !mask.get(i).copied().unwrap_or(true) {
                gens.push(None);
                continue;
            }
            let s = perm::transposition(n, i);
            let maps = cc
                .words
                .iter()
                .map(|w| {
                    let (image, p) = self.permute(w, &s)?;
                    let inj = cc
                        .cocone(&image)
                        .ok_or_else(|| Error::InvalidAction(format!("vertex set not closed: {image:?} missing")))?;
                    inj.compose(&p)
                })
                .collect::<Result<Vec<_>>>()?;
            gens.push(Some(cc.descend(cc.object().clone(), &maps)?));
        }
        EquivariantComplex::new(cc.object().clone(), n, gens)
    }

    /// The full `Σ_n` action.
    pub fn full_action(&self, cc: &CubeColimit) -> Result<EquivariantComplex> {
        self.action(cc, &vec![true; self.n.saturating_sub(1)])
    }

    /// Induced map of colimits `colim S → colim T` for `S ⊆ T`.
    pub fn inclusion(&self, from: &CubeColimit, to: &CubeColimit) -> Result<ChainMap> {
        let maps = from
            .words
            .iter()
            .map(|w| to.cocone(w).cloned().ok_or_else(|| Error::DiagramInvalid(format!("{w:?} missing from target"))))
            .collect::<Result<Vec<_>>>()?;
        from.descend(to.object().clone(), &maps)
    }

    /// The map `colim S → W(top)` given by edges into a vertex above all of `S`.
    pub fn to_vertex(&self, from: &CubeColimit, top: &[usize]) -> Result<ChainMap> {
        let maps = from.words.iter().map(|w| self.edge(w, top)).collect::<Result<Vec<_>>>()?;
        from.descend(self.vertex(top)?.complex().clone(), &maps)
    }
}

/// Colimit of a vertex set with its cocone indexed by word.
#[derive(Clone, Debug)]
pub struct CubeColimit {
    pub words: Vec<Letters>,
    pub vertices: Vec<Arc<TensorFactors>>,
    pub colimit: Colimit,
    pub diagram: Diagram,
    position: HashMap<Letters, usize>,
}

impl CubeColimit {
    pub fn object(&self) -> &Arc<ChainComplex> {
        &self.colimit.object
    }

    pub fn position(&self, w: &[usize]) -> Option<usize> {
        self.position.get(w).copied()
    }

    pub fn cocone(&self, w: &[usize]) -> Option<&ChainMap> {
        self.position(w).map(|k| &self.colimit.cocone[k])
    }

    /// Universal map from one map per vertex (in `words` order).
    pub fn descend(&self, target: Arc<ChainComplex>, maps: &[ChainMap]) -> Result<ChainMap> {
        let refs: Vec<&ChainMap> = maps.iter().collect();
        let phi = self.colimit.sum.copair(target, &refs)?;
        self.colimit.quotient.descend(&phi)
    }

    /// First relation a family of vertex maps fails to kill, as `(vertex, degree)` of the edge source.
    pub fn relation_violation(&self, target: Arc<ChainComplex>, maps: &[ChainMap]) -> Result<Option<(String, usize)>> {
        let refs: Vec<&ChainMap> = maps.iter().collect();
        let phi = self.colimit.sum.copair(target, &refs)?;
        let Some((n, col)) = self.colimit.quotient.relation_violation(&phi)? else { return Ok(None) };
        let mut c = col;
        for e in &self.diagram.edges {
            let d = e.map.source().dim(n);
            if c < d {
                return Ok(Some((format!("{:?} -> {:?}", self.words[e.from], self.words[e.to]), n)));
            }
            c -= d;
        }
        Ok(Some((format!("relation column {col}"), n)))
    }

    /// Column of the cocone image of a basis word of vertex `w` in degree `d`.
    pub(crate) fn cocone_column(&self, w: &[usize], word: &crate::chain::Word, d: usize) -> Result<Matrix> {
        let k = self.position(w).ok_or_else(|| Error::DescentFailure(format!("vertex {w:?} not in the diagram")))?;
        let j = self.vertices[k]
            .index_of(word)
            .ok_or_else(|| Error::DescentFailure(format!("basis word missing from vertex {w:?}")))?;
        Ok(self.colimit.cocone[k].comp(d).column(j))
    }
}
