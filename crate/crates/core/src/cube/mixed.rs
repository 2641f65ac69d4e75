use std::sync::Arc;

use super::power::{agree_witness, box_power, box_power_morphism, iso_witness, mono_witness};
use super::present::Presented;
use super::word::{all_words, below, CubeColimit, Letters, WordCube};
use crate::chain::{pushout, tensor_maps_between, ChainComplex, ChainMap, TensorPart};
use crate::equivariant::{coinvariants, perm, EquivariantComplex, Induced};
use crate::error::{Error, Result};
use crate::report::{AxiomReport, Witness};

const X: usize = 0;
const Y: usize = 1;
const Z: usize = 2;

/// The `3^n` rectangle of words in `X, Y, Z` for composable `f: X → Y`, `g: Y → Z`.
#[derive(Debug)]
pub struct MixedCube {
    pub cube: WordCube,
}

impl MixedCube {
    pub fn new(f: &ChainMap, g: &ChainMap, n: usize) -> Result<Self> {
        Ok(MixedCube { cube: WordCube::new(&[f.clone(), g.clone()], n)? })
    }

    pub fn arity(&self) -> usize {
        self.cube.arity()
    }

    /// `Y^q Z^{n−q}`.
    pub fn corner(&self, q: usize) -> Letters {
        let n = self.arity();
        [vec![Y; q], vec![Z; n - q]].concat()
    }

    /// Vertices strictly below `e`.
    pub fn under(&self, e: &[usize]) -> Vec<Letters> {
        all_words(3, self.arity()).into_iter().filter(|u| below(u, e) && u != e).collect()
    }

    /// `Q_e` for `e = Y^q Z^{n−q}` with its `Σ_q × Σ_{n−q}` action.
    pub fn q_e(&self, q: usize) -> Result<(CubeColimit, EquivariantComplex)> {
        let n = self.arity();
        if q > n {
            return Err(Error::OutOfRange(format!("{q} Y-letters in arity {n}")));
        }
        let cc = self.cube.colimit(self.under(&self.corner(q)))?;
        let act = self.cube.action(&cc, &perm::young_generators(&[q, n - q]))?;
        Ok((cc, act))
    }
}

pub fn mixed_q_e(f: &ChainMap, g: &ChainMap, n: usize, q: usize) -> Result<EquivariantComplex> {
    Ok(MixedCube::new(f, g, n)?.q_e(q)?.1)
}

fn tensor_tf(p: &Presented) -> Arc<crate::chain::TensorFactors> {
    match p {
        Presented::Tensor { tf, .. } => tf.clone(),
        _ => unreachable!("built as a tensor"),
    }
}

/// `Q_e ≅ Y^q ⊗ Q(g) ⊔_{Q(f) ⊗ Q(g)} Q(f) ⊗ Z^{n−q}` for `e = Y^q Z^{n−q}`.
pub fn decomposition_check(f: &ChainMap, g: &ChainMap, n: usize, q: usize, name: &str) -> AxiomReport {
    let mut report = AxiomReport::new("cube-decomposition", f.field()).param("n", n).param("q", q);
    let result = (|| -> Result<Option<Witness>> {
        if q == 0 || q >= n {
            return Err(Error::OutOfRange(format!("decomposition needs 1 ≤ q ≤ n − 1, got q = {q}, n = {n}")));
        }
        let mixed = MixedCube::new(f, g, n)?;
        let (qe, _) = mixed.q_e(q)?;
        let bf = box_power(f, q)?;
        let bg = box_power(g, n - q)?;
        let qf = Presented::Colimit { cc: bf.domain.clone(), relabel: vec![X, Y] };
        let qg = Presented::Colimit { cc: bg.domain.clone(), relabel: vec![Y, Z] };
        let yq = Presented::Vertex { letters: vec![Y; q], tf: bf.cube.vertex(&vec![1; q])? };
        let zr = Presented::Vertex { letters: vec![Z; n - q], tf: bg.cube.vertex(&vec![1; n - q])? };
        let a = Presented::tensor(vec![qf.clone(), qg.clone()])?;
        let b = Presented::tensor(vec![yq, qg.clone()])?;
        let c = Presented::tensor(vec![qf, zr])?;
        let id_qg = ChainMap::identity(bg.domain.object().clone());
        let id_qf = ChainMap::identity(bf.domain.object().clone());
        let a_to_b = tensor_maps_between(&tensor_tf(&a), &tensor_tf(&b), &[TensorPart::single(&bf.map.map), TensorPart::single(&id_qg)])?;
        let a_to_c = tensor_maps_between(&tensor_tf(&a), &tensor_tf(&c), &[TensorPart::single(&id_qf), TensorPart::single(&bg.map.map)])?;
        let po = pushout(&a_to_b, &a_to_c)?;
        let comparison = po.descend(&b.into_colimit(&qe)?, &c.into_colimit(&qe)?)?;
        Ok(iso_witness("decomposition comparison", &comparison))
    })();
    report.record("decomposition-iso", name, Some(n), result);
    report
}

/// The tower `Q[0] → Q[1] → ⋯ → Q[n]` from `Q(gf)` to `Q(g)`.
///
/// Stage `k` is the colimit over the `X–Z` punctured cube together with every word having at
/// most `k − 1` copies of `Z`; each step adds the orbit of `e_k = Y^{n−k+1} Z^{k−1}` and the
/// vertices under it.
pub struct QBracketTower {
    pub stages: Vec<Arc<ChainComplex>>,
    pub steps: Vec<ChainMap>,
    pub report: AxiomReport,
}

fn xz_punctured(n: usize) -> Vec<Letters> {
    all_words(3, n).into_iter().filter(|w| w.iter().all(|&a| a != Y) && w.contains(&X)).collect()
}

fn stage_words(n: usize, k: usize) -> Vec<Letters> {
    let mut words = xz_punctured(n);
    if k > 0 {
        words.extend(all_words(3, n).into_iter().filter(|w| w.iter().filter(|&&a| a == Z).count() < k));
    }
    words
}

pub fn q_bracket_tower(f: &ChainMap, g: &ChainMap, n: usize, name: &str) -> Result<QBracketTower> {
    let mixed = MixedCube::new(f, g, n)?;
    let cube = &mixed.cube;
    let mut report = AxiomReport::new("q-bracket-tower", f.field()).param("n", n);
    let mut colims = Vec::with_capacity(n + 1);
    let mut actions = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let cc = cube.colimit(stage_words(n, k))?;
        actions.push(cube.full_action(&cc)?);
        colims.push(cc);
    }
    let mut steps = Vec::with_capacity(n);
    for k in 1..=n {
        let label = format!("{name}[{k}]");
        let e = mixed.corner(n - k + 1);
        let step = cube.inclusion(&colims[k - 1], &colims[k])?;
        let check = (|| -> Result<Option<Witness>> {
            let orbit_free: Vec<Letters> = colims[k]
                .words
                .iter()
                .filter(|w| {
                    let mut s = (*w).clone();
                    s.sort_unstable();
                    s != e
                })
                .cloned()
                .collect();
            let rest = cube.colimit(orbit_free)?;
            let rest_act = cube.full_action(&rest)?;
            let cofinal = cube.inclusion(&colims[k - 1], &rest)?;
            if let Some(w) = iso_witness("cofinal restriction", &cofinal) {
                return Ok(Some(w));
            }
            let sizes = [n - k + 1, k - 1];
            let mask = perm::young_generators(&sizes);
            let (qe, qe_act) = mixed.q_e(n - k + 1)?;
            let top_v = cube.colimit(vec![e.clone()])?;
            let top_act = cube.action(&top_v, &mask)?;
            let ind_q = Induced::new(&qe_act, &sizes)?;
            let ind_e = Induced::new(&top_act, &sizes)?;
            let to_e = {
                let inj = top_v.cocone(&e).expect("corner vertex");
                let maps = qe.words.iter().map(|w| inj.compose(&cube.edge(w, &e)?)).collect::<Result<Vec<_>>>()?;
                qe.descend(top_v.object().clone(), &maps)?
            };
            let left = ind_q.map(&ind_e, &to_e)?;
            let upper = ind_q.adjoint(&cube.inclusion(&qe, &rest)?, &rest_act)?;
            let lower = ind_e.adjoint(&cube.inclusion(&top_v, &colims[k])?, &actions[k])?;
            let right = cube.inclusion(&rest, &colims[k])?;
            let po = pushout(&upper, &left)?;
            Ok(iso_witness("tower pushout comparison", &po.descend(&right, &lower)?))
        })();
        report.record("step-pushout-iso", &label, Some(n), check);
        let mono = (|| {
            let s = coinvariants(&actions[k - 1])?;
            let t = coinvariants(&actions[k])?;
            Ok(mono_witness("step after coinvariants", &s.descend_to(&step, &t)?))
        })();
        report.record("step-mono-coinvariants", &label, Some(n), mono);
        steps.push(step);
    }
    let gf = g.compose(f)?;
    let ends = (|| -> Result<(Option<Witness>, Option<Witness>)> {
        let b_gf = box_power(&gf, n)?;
        let b_g = box_power(g, n)?;
        let start = Presented::Colimit { cc: b_gf.domain.clone(), relabel: vec![X, Z] }.into_colimit(&colims[0])?;
        let end = Presented::Colimit { cc: b_g.domain.clone(), relabel: vec![Y, Z] }.into_colimit(&colims[n])?;
        Ok((iso_witness("Q(gf) → Q[0]", &start), iso_witness("Q(g) → Q[n]", &end)))
    })();
    match ends {
        Ok((a, b)) => {
            report.record("start-is-composite", name, Some(n), Ok(a));
            report.record("end-is-second", name, Some(n), Ok(b));
        }
        Err(e) => report.record("start-is-composite", name, Some(n), Err(e)),
    }
    let stages = colims.iter().map(|c| c.object().clone()).collect();
    Ok(QBracketTower { stages, steps, report })
}

/// The ladder `Q(F_1) → Q(F_2) → ⋯` over `X_1^{⊗n} → X_2^{⊗n} → ⋯` for `F_i = f_i ∘ ⋯ ∘ f_1`:
/// after coinvariants every vertical map and every pushout corner map is mono.
pub fn composition_ladder_check(fs: &[ChainMap], n: usize, name: &str) -> AxiomReport {
    let field = fs.first().map(|f| f.field()).unwrap_or(crate::linalg::Field::Rational);
    let mut report = AxiomReport::new("composition-ladder", field).param("n", n).param("length", fs.len());
    let built = (|| -> Result<Vec<_>> {
        let mut composite = fs.first().ok_or_else(|| Error::OutOfRange("empty chain of maps".into()))?.clone();
        let mut out = vec![box_power(&composite, n)?];
        for f in &fs[1..] {
            composite = f.compose(&composite)?;
            out.push(box_power(&composite, n)?);
        }
        Ok(out)
    })();
    let powers = match built {
        Ok(p) => p,
        Err(e) => {
            report.record("ladder", name, Some(n), Err(e));
            return report;
        }
    };
    let quotients: Vec<_> = powers.iter().map(|p| p.quotient()).collect();
    for (i, q) in quotients.iter().enumerate() {
        let label = format!("{name}[{}]", i + 1);
        let r = q.as_ref().map(|q| mono_witness("vertical", &q.map)).map_err(Clone::clone);
        report.record("vertical-mono", &label, Some(n), r);
    }
    for i in 0..fs.len().saturating_sub(1) {
        let label = format!("{name}[{}→{}]", i + 1, i + 2);
        let r = (|| -> Result<Option<Witness>> {
            let (qa, qb) = (quotients[i].as_ref().map_err(Clone::clone)?, quotients[i + 1].as_ref().map_err(Clone::clone)?);
            let id = ChainMap::identity(powers[i].cube.letter(0).clone());
            let (dom, cod) = box_power_morphism(&powers[i], &powers[i + 1], &id, &fs[i + 1])?;
            let dom = qa.source.descend_to(&dom, &qb.source)?;
            let cod = qa.target.descend_to(&cod, &qb.target)?;
            if let Some(w) = agree_witness("ladder square", &qb.map.compose(&dom)?, &cod.compose(&qa.map)?) {
                return Ok(Some(w));
            }
            let po = pushout(&dom, &qa.map)?;
            Ok(mono_witness("pushout corner", &po.descend(&qb.map, &cod)?))
        })();
        report.record("corner-mono", &label, Some(n), r);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Field;
    use crate::standard::{from_zero, sphere_to_disk, zero_to_unit};

    #[test]
    fn decomposition_small() {
        let field = Field::Rational;
        let f = zero_to_unit(field);
        let g = sphere_to_disk(1, field);
        let r = decomposition_check(&f, &g, 2, 1, "f,g");
        assert!(r.passed(), "{}", r.to_text());
        let id = ChainMap::identity(g.target().clone());
        let r = decomposition_check(&id, &id, 2, 1, "id");
        assert!(r.passed(), "{}", r.to_text());
    }

    #[test]
    fn tower_ends() {
        let field = Field::Prime(2);
        let f = zero_to_unit(field);
        let g = sphere_to_disk(1, field);
        let t = q_bracket_tower(&f, &g, 2, "f,g").unwrap();
        assert_eq!(t.stages.len(), 3);
        assert!(t.report.passed(), "{}", t.report.to_text());
    }

    #[test]
    fn ladder_of_cofibrations() {
        let field = Field::Rational;
        let f1 = sphere_to_disk(1, field);
        let d = f1.target().clone();
        let po = pushout(&f1, &f1).unwrap();
        let f2 = po.in_b.clone();
        let _ = d;
        let r = composition_ladder_check(&[f1.clone(), f2], 2, "chain");
        assert!(r.passed(), "{}", r.to_text());
        let single = composition_ladder_check(&[from_zero(f1.target())], 2, "single");
        assert!(single.passed());
    }
}
