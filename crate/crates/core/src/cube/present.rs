//! Complexes built from cube vertices by tensoring and gluing, with each basis
//! element expanded as a combination of vertex basis words. Used to write down
//! comparison maps into cube colimits without going through universal properties.

use std::sync::Arc;

use super::word::{CubeColimit, Letters};
use crate::chain::{ChainComplex, ChainMap, Pushout, TensorFactors, Word};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Scalar};

/// A term of an expansion: vertex letters, basis word of that vertex, coefficient.
pub type Term = (Letters, Word, Scalar);

#[derive(Clone, Debug)]
pub enum Presented {
    /// A single vertex `W(letters)`.
    Vertex { letters: Letters, tf: Arc<TensorFactors> },
    /// A cube colimit whose letter `a` is renamed `relabel[a]`.
    Colimit { cc: Arc<CubeColimit>, relabel: Vec<usize> },
    /// The tensor product of the parts, in order.
    Tensor { tf: Arc<TensorFactors>, parts: Vec<Presented> },
    /// A pushout of two presented complexes.
    Pushout { po: Arc<Pushout>, b: Box<Presented>, c: Box<Presented> },
}

impl Presented {
    pub fn tensor(parts: Vec<Presented>) -> Result<Self> {
        let objects: Vec<Arc<ChainComplex>> = parts.iter().map(|p| p.object().clone()).collect();
        let field = objects.first().map(|o| o.field()).ok_or_else(|| Error::OutOfRange("empty tensor".into()))?;
        Ok(Presented::Tensor { tf: Arc::new(TensorFactors::new(field, objects)?), parts })
    }

    pub fn object(&self) -> &Arc<ChainComplex> {
        match self {
            Presented::Vertex { tf, .. } | Presented::Tensor { tf, .. } => tf.complex(),
            Presented::Colimit { cc, .. } => cc.object(),
            Presented::Pushout { po, .. } => &po.object,
        }
    }

    /// Basis element `i` of degree `d` as a combination of vertex basis words.
    pub fn expand(&self, d: usize, i: usize) -> Result<Vec<Term>> {
        match self {
            Presented::Vertex { letters, tf } => {
                let w = tf.words(d).get(i).ok_or_else(|| Error::OutOfRange(format!("no basis element {i} in degree {d}")))?;
                Ok(vec![(letters.clone(), w.clone(), Scalar::one(tf.field()))])
            }
            Presented::Colimit { cc, relabel } => {
                let section = cc.colimit.quotient.section(d);
                let sum = &cc.colimit.sum;
                let mut out = Vec::new();
                for (row, s) in section.col_nonzeros(i) {
                    let k = (0..cc.words.len())
                        .rev()
                        .find(|&k| sum.offset(d, k) <= row)
                        .expect("row lies in some summand");
                    let local = row - sum.offset(d, k);
                    let letters = cc.words[k].iter().map(|&a| relabel[a]).collect();
                    out.push((letters, cc.vertices[k].words(d)[local].clone(), s));
                }
                Ok(out)
            }
            Presented::Tensor { tf, parts } => {
                let w = tf.words(d).get(i).ok_or_else(|| Error::OutOfRange(format!("no basis element {i} in degree {d}")))?;
                let mut acc: Vec<Term> = vec![(vec![], vec![], Scalar::one(tf.field()))];
                for (p, &(dk, ik)) in parts.iter().zip(w) {
                    let terms = p.expand(dk, ik)?;
                    let mut next = Vec::with_capacity(acc.len() * terms.len());
                    for (l0, w0, c0) in &acc {
                        for (l1, w1, c1) in &terms {
                            next.push(([l0.as_slice(), l1].concat(), [w0.as_slice(), w1].concat(), c0.mul(c1)?));
                        }
                    }
                    acc = next;
                }
                Ok(acc)
            }
            Presented::Pushout { po, b, c } => {
                let section = po.quotient.section(d);
                let split = po.sum.offset(d, 1);
                let mut out = Vec::new();
                for (row, s) in section.col_nonzeros(i) {
                    let terms = if row < split { b.expand(d, row)? } else { c.expand(d, row - split)? };
                    for (l, w, t) in terms {
                        out.push((l, w, t.mul(&s)?));
                    }
                }
                Ok(out)
            }
        }
    }

    /// The map into a cube colimit sending each vertex word to its cocone image.
    pub fn into_colimit(&self, target: &CubeColimit) -> Result<ChainMap> {
        self.map_with(target.object().clone(), |letters, word, d| target.cocone_column(letters, word, d))
    }

    /// The map onto a single vertex with the given letters.
    pub fn into_vertex(&self, letters: &[usize], tf: &TensorFactors) -> Result<ChainMap> {
        self.map_with(tf.complex().clone(), |l, word, _| {
            if l != letters {
                return Err(Error::DescentFailure(format!("term at vertex {l:?}, expected {letters:?}")));
            }
            let j = tf.index_of(word).ok_or_else(|| Error::DescentFailure("basis word missing".into()))?;
            let mut col = Matrix::zeros(tf.field(), tf.complex().dim(word.iter().map(|x| x.0).sum()), 1);
            col.add_int(j, 0, 1);
            Ok(col)
        })
    }

    fn map_with(
        &self,
        target: Arc<ChainComplex>,
        column: impl Fn(&[usize], &Word, usize) -> Result<Matrix>,
    ) -> Result<ChainMap> {
        let src = self.object().clone();
        let field = src.field();
        ChainMap::from_fn(src.clone(), target.clone(), |d| {
            let mut m = Matrix::zeros(field, target.dim(d), src.dim(d));
            for i in 0..src.dim(d) {
                for (letters, word, s) in self.expand(d, i)? {
                    let col = column(&letters, &word, d)?;
                    for (r, v) in col.col_nonzeros(0) {
                        m.add_scalar(r, i, &v.mul(&s)?);
                    }
                }
            }
            Ok(m)
        })
    }
}
