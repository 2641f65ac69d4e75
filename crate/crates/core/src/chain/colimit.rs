use std::sync::Arc;

use super::complex::{ChainComplex, DEFAULT_CAP};
use super::map::ChainMap;
use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix};

/// `⊕ X_k` with its injections and projections; summands are stacked in order.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub complex: Arc<ChainComplex>,
    pub injections: Vec<ChainMap>,
    pub projections: Vec<ChainMap>,
    offsets: Vec<Vec<usize>>,
}

impl DirectSum {
    pub fn new(field: Field, parts: &[Arc<ChainComplex>]) -> Result<Self> {
        let cap = parts.iter().map(|c| c.cap()).min().unwrap_or(DEFAULT_CAP);
        Self::with_cap(field, parts, cap)
    }

    pub fn with_cap(field: Field, parts: &[Arc<ChainComplex>], cap: usize) -> Result<Self> {
        for p in parts {
            field.ensure_same(p.field())?;
        }
        let cap = parts.iter().map(|c| c.cap()).fold(cap, usize::min);
        let dims: Vec<usize> = (0..=cap).map(|n| parts.iter().map(|p| p.dim(n)).sum()).collect();
        let diffs = (1..=cap)
            .map(|n| {
                let blocks: Vec<&Matrix> = parts.iter().map(|p| p.d(n)).collect();
                Matrix::block_diag(field, &blocks)
            })
            .collect::<Result<Vec<_>>>()?;
        let labels = (0..=cap)
            .map(|n| {
                parts
                    .iter()
                    .enumerate()
                    .flat_map(|(k, p)| (0..p.dim(n)).map(move |i| format!("{k}:{}", p.label(n, i))))
                    .collect()
            })
            .collect();
        let complex = Arc::new(ChainComplex::new(field, dims, diffs)?.with_labels(labels)?);
        let offsets: Vec<Vec<usize>> = (0..=cap)
            .map(|n| {
                let mut acc = 0;
                parts
                    .iter()
                    .map(|p| {
                        let o = acc;
                        acc += p.dim(n);
                        o
                    })
                    .collect()
            })
            .collect();
        let mut injections = Vec::with_capacity(parts.len());
        let mut projections = Vec::with_capacity(parts.len());
        for (k, p) in parts.iter().enumerate() {
            let mut inj = Vec::with_capacity(cap + 1);
            let mut proj = Vec::with_capacity(cap + 1);
            for n in 0..=cap {
                let mut a = Matrix::zeros(field, complex.dim(n), p.dim(n));
                let mut b = Matrix::zeros(field, p.dim(n), complex.dim(n));
                for i in 0..p.dim(n) {
                    a.add_int(offsets[n][k] + i, i, 1);
                    b.add_int(i, offsets[n][k] + i, 1);
                }
                inj.push(a);
                proj.push(b);
            }
            injections.push(ChainMap::new_unchecked(p.clone(), complex.clone(), inj)?);
            projections.push(ChainMap::new_unchecked(complex.clone(), p.clone(), proj)?);
        }
        Ok(DirectSum { complex, injections, projections, offsets })
    }

    pub fn cap(&self) -> usize {
        self.complex.cap()
    }

    /// Offset of summand `k` in degree `n`.
    pub fn offset(&self, n: usize, k: usize) -> usize {
        self.offsets[n][k]
    }

    /// The map out of the sum restricting to `maps[k]` on summand `k`.
    pub fn copair(&self, target: Arc<ChainComplex>, maps: &[&ChainMap]) -> Result<ChainMap> {
        if maps.len() != self.injections.len() {
            return Err(Error::DimensionMismatch("one map per summand required".into()));
        }
        let cap = maps.iter().map(|m| m.cap()).fold(self.cap().min(target.cap()), usize::min);
        let field = self.complex.field();
        let comps = (0..=cap)
            .map(|n| {
                let blocks: Vec<&Matrix> = maps.iter().map(|m| m.comp(n)).collect();
                Matrix::hstack(field, target.dim(n), &blocks)
            })
            .collect::<Result<Vec<_>>>()?;
        for (k, m) in maps.iter().enumerate() {
            if !m.source().same_data(self.injections[k].source()) || !m.target().same_data(&target) {
                return Err(Error::DimensionMismatch(format!("copair component {k} has the wrong type")));
            }
        }
        ChainMap::new_unchecked(self.complex.clone(), target, comps)
    }

    /// The map into the sum with components `maps[k]`.
    pub fn pair(&self, source: Arc<ChainComplex>, maps: &[&ChainMap]) -> Result<ChainMap> {
        if maps.len() != self.injections.len() {
            return Err(Error::DimensionMismatch("one map per summand required".into()));
        }
        let cap = maps.iter().map(|m| m.cap()).fold(self.cap().min(source.cap()), usize::min);
        let field = self.complex.field();
        let comps = (0..=cap)
            .map(|n| {
                let blocks: Vec<&Matrix> = maps.iter().map(|m| m.comp(n)).collect();
                Matrix::vstack(field, source.dim(n), &blocks)
            })
            .collect::<Result<Vec<_>>>()?;
        ChainMap::new_unchecked(source, self.complex.clone(), comps)
    }
}

/// `direct_sum(Xs)` as a bare complex.
pub fn direct_sum(field: Field, parts: &[Arc<ChainComplex>]) -> Result<ChainComplex> {
    Ok(DirectSum::new(field, parts)?.complex.as_ref().clone())
}

/// A quotient `A / R` of a complex by a subcomplex spanned degreewise by the
/// columns of `relations[n]`.
#[derive(Clone, Debug)]
pub struct QuotientComplex {
    pub object: Arc<ChainComplex>,
    pub projection: ChainMap,
    sections: Vec<Matrix>,
    relations: Vec<Matrix>,
}

impl QuotientComplex {
    pub fn new(ambient: Arc<ChainComplex>, relations: Vec<Matrix>) -> Result<Self> {
        let field = ambient.field();
        let cap = (relations.len().max(1) - 1).min(ambient.cap());
        let mut projs = Vec::with_capacity(cap + 1);
        let mut sections = Vec::with_capacity(cap + 1);
        for n in 0..=cap {
            let q = Matrix::quotient_basis(field, ambient.dim(n), &relations[n])?;
            projs.push(q.projection);
            sections.push(q.section);
        }
        let mut diffs = Vec::with_capacity(cap);
        for n in 1..=cap {
            // relations must form a subcomplex for the differential to descend
            if !projs[n - 1].mul(&ambient.d(n).mul(&relations[n])?)?.is_zero() {
                return Err(Error::DescentFailure(format!("relations are not a subcomplex in degree {n}")));
            }
            diffs.push(projs[n - 1].mul(&ambient.d(n).mul(&sections[n])?)?);
        }
        let dims = projs.iter().map(Matrix::rows).collect();
        let object = Arc::new(
            ChainComplex::new(field, dims, diffs)
                .map_err(|e| Error::InvariantViolated(format!("quotient differential: {e}")))?,
        );
        let projection = ChainMap::new_unchecked(ambient, object.clone(), projs)?;
        debug_assert!(projection.check_chain_condition().is_ok());
        Ok(QuotientComplex { object, projection, sections, relations: relations.into_iter().take(cap + 1).collect() })
    }

    pub fn ambient(&self) -> &Arc<ChainComplex> {
        self.projection.source()
    }

    pub fn cap(&self) -> usize {
        self.object.cap()
    }

    pub fn section(&self, n: usize) -> &Matrix {
        &self.sections[n]
    }

    pub fn relations(&self, n: usize) -> &Matrix {
        &self.relations[n]
    }

    /// First `(degree, relation column)` that `phi` fails to kill.
    pub fn relation_violation(&self, phi: &ChainMap) -> Result<Option<(usize, usize)>> {
        let top = self.cap().min(phi.cap());
        for n in 0..=top {
            let killed = phi.comp(n).mul(&self.relations[n])?;
            if let Some(j) = (0..killed.cols()).find(|&j| (0..killed.rows()).any(|i| !killed.entry_is_zero(i, j))) {
                return Ok(Some((n, j)));
            }
        }
        Ok(None)
    }

    /// The map `A/R → T` induced by `phi: A → T`, after checking `phi(R) = 0`.
    pub fn descend(&self, phi: &ChainMap) -> Result<ChainMap> {
        if !phi.source().same_data(self.ambient()) {
            return Err(Error::DimensionMismatch("descended map must start at the ambient complex".into()));
        }
        if let Some((n, j)) = self.relation_violation(phi)? {
            return Err(Error::DescentFailure(format!("relation {j} in degree {n} is not killed")));
        }
        let top = self.cap().min(phi.cap());
        let comps = (0..=top).map(|n| phi.comp(n).mul(&self.sections[n])).collect::<Result<Vec<_>>>()?;
        let f = ChainMap::new_unchecked(self.object.clone(), phi.target().clone(), comps)?;
        f.check_chain_condition().map_err(|e| Error::InvariantViolated(format!("descended map: {e}")))?;
        Ok(f)
    }

    /// `A/R → B/S` induced by `phi: A → B` followed by the projection of `other`.
    pub fn descend_to(&self, phi: &ChainMap, other: &QuotientComplex) -> Result<ChainMap> {
        self.descend(&other.projection.compose(phi)?)
    }
}

/// `coker f` and the projection `target → coker f`.
pub fn cokernel(f: &ChainMap) -> Result<QuotientComplex> {
    let relations = (0..=f.cap()).map(|n| f.comp(n).clone()).collect();
    QuotientComplex::new(f.target().clone(), relations)
}

/// `B ⊔_A C` computed as `coker((f, −g): A → B ⊕ C)`.
#[derive(Clone, Debug)]
pub struct Pushout {
    pub object: Arc<ChainComplex>,
    pub in_b: ChainMap,
    pub in_c: ChainMap,
    pub sum: DirectSum,
    pub quotient: QuotientComplex,
}

impl Pushout {
    /// Universal map to `T` from a cocone `(phi_b, phi_c)`.
    pub fn descend(&self, phi_b: &ChainMap, phi_c: &ChainMap) -> Result<ChainMap> {
        let target = phi_b.target().clone();
        let phi = self.sum.copair(target, &[phi_b, phi_c])?;
        self.quotient.descend(&phi)
    }
}

pub fn pushout(f: &ChainMap, g: &ChainMap) -> Result<Pushout> {
    if !f.source().same_data(g.source()) {
        return Err(Error::DimensionMismatch("pushout legs need a shared source".into()));
    }
    let field = f.field();
    let sum = DirectSum::new(field, &[f.target().clone(), g.target().clone()])?;
    let minus_g = g.neg();
    let rel = sum.pair(f.source().clone(), &[f, &minus_g])?;
    let quotient = cokernel(&rel)?;
    let in_b = quotient.projection.compose(&sum.injections[0])?;
    let in_c = quotient.projection.compose(&sum.injections[1])?;
    Ok(Pushout { object: quotient.object.clone(), in_b, in_c, sum, quotient })
}

/// A finite diagram of complexes.
#[derive(Clone, Debug)]
pub struct Diagram {
    pub field: Field,
    pub vertices: Vec<Arc<ChainComplex>>,
    pub edges: Vec<Edge>,
}

#[derive(Clone, Debug)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub map: ChainMap,
}

impl Diagram {
    pub fn new(field: Field) -> Self {
        Diagram { field, vertices: Vec::new(), edges: Vec::new() }
    }

    pub fn add_vertex(&mut self, c: Arc<ChainComplex>) -> usize {
        self.vertices.push(c);
        self.vertices.len() - 1
    }

    pub fn add_edge(&mut self, from: usize, to: usize, map: ChainMap) {
        self.edges.push(Edge { from, to, map });
    }

    /// Every pair of parallel paths of length ≤ 2 must agree.
    pub fn check_commutes(&self) -> Result<()> {
        let nv = self.vertices.len();
        // paths: (start, end, description, composite)
        let mut paths: Vec<(usize, usize, String, ChainMap)> = Vec::new();
        for (a, e) in self.edges.iter().enumerate() {
            paths.push((e.from, e.to, format!("{a}"), e.map.clone()));
        }
        for (a, e1) in self.edges.iter().enumerate() {
            for (b, e2) in self.edges.iter().enumerate() {
                if e1.to == e2.from {
                    paths.push((e1.from, e2.to, format!("{a}->{b}"), e2.map.compose(&e1.map)?));
                }
            }
        }
        for s in 0..nv {
            let group: Vec<&(usize, usize, String, ChainMap)> = paths.iter().filter(|p| p.0 == s).collect();
            for (i, p) in group.iter().enumerate() {
                for q in &group[i + 1..] {
                    if p.1 == q.1 && !p.3.agrees_with(&q.3) {
                        return Err(Error::DiagramInvalid(format!(
                            "paths {} and {} from vertex {} to vertex {} disagree",
                            p.2, q.2, p.0, p.1
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// A colimit with its cocone and the presentation used to compute it.
#[derive(Clone, Debug)]
pub struct Colimit {
    pub object: Arc<ChainComplex>,
    pub cocone: Vec<ChainMap>,
    pub sum: DirectSum,
    pub quotient: QuotientComplex,
}

impl Colimit {
    /// The universal map determined by maps out of every vertex.
    pub fn descend(&self, maps: &[&ChainMap]) -> Result<ChainMap> {
        let target = maps
            .first()
            .map(|m| m.target().clone())
            .ok_or_else(|| Error::DiagramInvalid("empty cocone".into()))?;
        let phi = self.sum.copair(target, maps)?;
        self.quotient.descend(&phi)
    }

    /// The composite `⊕ vertices → T` and the first relation it fails to kill, if any.
    pub fn relation_violation(&self, maps: &[&ChainMap]) -> Result<Option<(usize, usize)>> {
        let target = maps
            .first()
            .map(|m| m.target().clone())
            .ok_or_else(|| Error::DiagramInvalid("empty cocone".into()))?;
        let phi = self.sum.copair(target, maps)?;
        self.quotient.relation_violation(&phi)
    }
}

/// Colimit as the coequalizer of `⊕_edges source ⇉ ⊕_vertices`.
pub fn finite_colimit(diagram: &Diagram) -> Result<Colimit> {
    diagram.check_commutes()?;
    colimit_unchecked(diagram)
}

/// As [`finite_colimit`] without the path-commutation check (for diagrams that commute by construction).
pub(crate) fn colimit_unchecked(diagram: &Diagram) -> Result<Colimit> {
    let field = diagram.field;
    let mut cap = diagram.vertices.iter().map(|v| v.cap()).min().unwrap_or(DEFAULT_CAP);
    for e in &diagram.edges {
        cap = cap.min(e.map.cap());
    }
    let sum = DirectSum::with_cap(field, &diagram.vertices, cap)?;
    let mut relations = Vec::with_capacity(cap + 1);
    for n in 0..=cap {
        let cols: usize = diagram.edges.iter().map(|e| e.map.source().dim(n)).sum();
        let mut r = Matrix::zeros(field, sum.complex.dim(n), cols);
        let mut c0 = 0;
        for e in &diagram.edges {
            let m = e.map.comp(n);
            r.set_block(sum.offset(n, e.to), c0, m);
            for i in 0..m.cols() {
                r.add_int(sum.offset(n, e.from) + i, c0 + i, -1);
            }
            c0 += m.cols();
        }
        relations.push(r);
    }
    let quotient = QuotientComplex::new(sum.complex.clone(), relations)?;
    let cocone = sum
        .injections
        .iter()
        .map(|inj| quotient.projection.compose(inj))
        .collect::<Result<Vec<_>>>()?;
    Ok(Colimit { object: quotient.object.clone(), cocone, sum, quotient })
}
