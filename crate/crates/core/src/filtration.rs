//! The tower `X = P_0 → P_1 → ⋯` computing the pushout of `Sym L ← Sym K → X` in
//! commutative monoids, one pushout of `X ⊗ (h^{□n}/Σ_n)` per stage.

use std::sync::Arc;

use crate::chain::{
    first_non_quasi_iso_degree, pushout, tensor_maps_between, ChainComplex, ChainMap, Pushout, TensorFactors, TensorPart,
    Word,
};
use crate::cube::{box_power, BoxPower, BoxPowerQuotient, Presented, WordCube};
use crate::equivariant::perm;
use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix, Scalar};
use crate::report::{AxiomReport, Witness};
use crate::sym::{relative_tensor, relative_tensor_truncated, CommutativeMonoidObject, RelativeTensor, Sparse};

const K: usize = 0;
const L: usize = 1;

/// Stage `n`: the pushout of `P_{n−1} ← X ⊗ Q_n/Σ_n → X ⊗ Sym^n L`.
#[derive(Debug)]
pub struct FiltrationStage {
    pub n: usize,
    pub box_power: BoxPower,
    pub quotient: BoxPowerQuotient,
    /// `X ⊗ Q_n/Σ_n`.
    pub lower: Arc<TensorFactors>,
    /// `X ⊗ Sym^n L`.
    pub upper: Arc<TensorFactors>,
    /// `id_X ⊗ h^{□n}/Σ_n`.
    pub top: ChainMap,
    pub attaching: ChainMap,
    pub pushout: Pushout,
}

impl FiltrationStage {
    pub fn object(&self) -> &Arc<ChainComplex> {
        &self.pushout.object
    }

    /// `P_{n−1} → P_n`.
    pub fn connecting(&self) -> &ChainMap {
        &self.pushout.in_b
    }

    /// `X ⊗ Sym^n L → P_n`.
    pub fn cell(&self) -> &ChainMap {
        &self.pushout.in_c
    }
}

#[derive(Debug)]
pub struct FiltrationResult {
    pub x: CommutativeMonoidObject,
    pub g: ChainMap,
    pub h: ChainMap,
    pub n_max: usize,
    pub stages: Vec<FiltrationStage>,
    /// Number of coequalizer relations verified while attaching cells.
    pub relations_checked: usize,
}

pub fn build_filtration(x: &CommutativeMonoidObject, g: &ChainMap, h: &ChainMap, n_max: usize, cap: usize) -> Result<FiltrationResult> {
    x.field().ensure_same(h.field())?;
    if !g.source().same_data(h.source()) || !g.target().same_data(x.underlying()) {
        return Err(Error::DimensionMismatch("need g: K → X and h: K → L with a shared K".into()));
    }
    let cap = cap.min(x.cap()).min(h.source().cap()).min(h.target().cap());
    let k = Arc::new(h.source().truncate(cap));
    let l = Arc::new(h.target().truncate(cap));
    let x = x.truncate(cap)?;
    let g = g.retarget(k.clone(), x.underlying().clone())?;
    let h = h.retarget(k, l)?;
    let mut fr = FiltrationResult { x, g, h, n_max, stages: Vec::with_capacity(n_max), relations_checked: 0 };
    for n in 1..=n_max {
        let stage = fr.attach(n)?;
        fr.stages.push(stage);
    }
    Ok(fr)
}

impl FiltrationResult {
    pub fn field(&self) -> Field {
        self.x.field()
    }

    pub fn cap(&self) -> usize {
        self.x.cap()
    }

    /// `P_m`.
    pub fn stage(&self, m: usize) -> &Arc<ChainComplex> {
        if m == 0 {
            self.x.underlying()
        } else {
            self.stages[m - 1].object()
        }
    }

    /// `P_m → P_n` for `m ≤ n`.
    pub fn connecting(&self, m: usize, n: usize) -> Result<ChainMap> {
        let mut f = ChainMap::identity(self.stage(m).clone());
        for s in &self.stages[m..n] {
            f = s.connecting().compose(&f)?;
        }
        Ok(f)
    }

    /// `X = P_0 → P_{n_max}`.
    pub fn composite(&self) -> Result<ChainMap> {
        self.connecting(0, self.stages.len())
    }

    /// Degrees through which `P_{n_max}` already agrees with the full pushout.
    pub fn safe_degree(&self) -> usize {
        let cap = self.cap();
        if self.h.target().dim(0) != 0 {
            return cap.saturating_sub(1);
        }
        let b = [self.h.source().bottom_degree(), self.h.target().bottom_degree()].into_iter().flatten().min();
        match b {
            Some(b) => (self.n_max * b).min(cap).saturating_sub(1),
            None => cap.saturating_sub(1),
        }
    }

    fn vertex_tf(&self, letters: &[usize]) -> Result<Arc<TensorFactors>> {
        let factors = letters.iter().map(|&a| if a == K { self.h.source().clone() } else { self.h.target().clone() }).collect();
        Ok(Arc::new(TensorFactors::with_cap(self.field(), factors, self.cap())?))
    }

    /// `X ⊗ W(D) → P_{|D|}`: apply `g` to the `K` factors, move the resulting `X` factors to the
    /// left with their Koszul signs, multiply them, pass to `X ⊗ Sym^{|D|} L` and map in.
    pub fn vertex_map(&self, letters: &[usize]) -> Result<ChainMap> {
        let wtf = self.vertex_tf(letters)?;
        Ok(self.vertex_map_on(letters, &wtf)?.1)
    }

    fn vertex_map_on(&self, letters: &[usize], wtf: &TensorFactors) -> Result<(Arc<TensorFactors>, ChainMap)> {
        let m = letters.iter().filter(|&&a| a == L).count();
        if m > self.stages.len() {
            return Err(Error::OutOfRange(format!("stage-order violation: vertex {letters:?} needs P_{m}, only P_0..P_{} exist", self.stages.len())));
        }
        let field = self.field();
        let src = Arc::new(TensorFactors::new(field, vec![self.x.underlying().clone(), wtf.complex().clone()])?);
        let target = self.stage(m).clone();
        let map = ChainMap::from_fn(src.complex().clone(), target.clone(), |d| {
            let mut mat = Matrix::zeros(field, target.dim(d), src.complex().dim(d));
            for (j, w) in src.words(d).iter().enumerate() {
                let (dx, ix) = w[0];
                let (dw, iw) = w[1];
                let (_, v) = self.vertex_image(letters, dx, &[(ix, Scalar::one(field))], &wtf.words(dw)[iw])?;
                for (r, s) in v.into_iter().enumerate() {
                    if !s.is_zero() {
                        mat.set(r, j, &s);
                    }
                }
            }
            Ok(mat)
        })?;
        Ok((src, map))
    }

    /// Image of `x ⊗ word` in `P_m`, `m` the number of `L` letters.
    fn vertex_image(&self, letters: &[usize], dx: usize, x: &[(usize, Scalar)], word: &Word) -> Result<(usize, Vec<Scalar>)> {
        let field = self.field();
        let mut acc: Sparse = x.to_vec();
        let mut deg = dx;
        let mut l_deg = 0;
        let mut l_word: Word = Vec::new();
        let mut negative = false;
        for (p, &(dp, ip)) in word.iter().enumerate() {
            if letters[p] == K {
                negative ^= dp % 2 == 1 && l_deg % 2 == 1;
                let gk = self.g.comp(dp).col_nonzeros(ip);
                acc = self.x.product(deg, &acc, dp, &gk)?.unwrap_or_default();
                deg += dp;
            } else {
                l_word.push((dp, ip));
                l_deg += dp;
            }
        }
        let m = l_word.len();
        let d = deg + l_deg;
        let target = self.stage(m);
        let mut out = vec![Scalar::zero(field); target.dim(d)];
        if negative {
            acc = acc.into_iter().map(|(i, s)| (i, s.neg())).collect();
        }
        if m == 0 {
            for (i, s) in acc {
                out[i] = s;
            }
            return Ok((0, out));
        }
        let stage = &self.stages[m - 1];
        let ltf = stage.box_power.cube.vertex(&vec![L; m])?;
        let idx = ltf.index_of(&l_word).expect("L-word is a top-vertex word");
        let sym = stage.quotient.target.projection.comp(l_deg).col_nonzeros(idx);
        let cell = stage.cell().comp(d);
        for (a, s) in &acc {
            for (b, t) in &sym {
                let col = stage.upper.index_of(&[(deg, *a), (l_deg, *b)]).expect("X ⊗ Sym word");
                let st = s.mul(t)?;
                for (r, c) in cell.col_nonzeros(col) {
                    out[r] = out[r].add(&c.mul(&st)?)?;
                }
            }
        }
        Ok((m, out))
    }

    fn attach(&mut self, n: usize) -> Result<FiltrationStage> {
        let field = self.field();
        let bp = box_power(&self.h, n)?;
        let quotient = bp.quotient()?;
        let xu = self.x.underlying().clone();
        let id_x = ChainMap::identity(xu.clone());
        let lower = Arc::new(TensorFactors::new(field, vec![xu.clone(), quotient.source.object.clone()])?);
        let upper = Arc::new(TensorFactors::new(field, vec![xu.clone(), quotient.target.object.clone()])?);
        let top = tensor_maps_between(&lower, &upper, &[TensorPart::single(&id_x), TensorPart::single(&quotient.map)])?;
        let prev = self.stage(n - 1).clone();
        let to_prev = (0..n).map(|m| self.connecting(m, n - 1)).collect::<Result<Vec<_>>>()?;

        self.check_relations(&bp.cube, &bp.domain.words, &to_prev, n)?;

        let presented = Presented::Colimit { cc: bp.domain.clone(), relabel: vec![K, L] };
        let attaching = ChainMap::from_fn(lower.complex().clone(), prev.clone(), |d| {
            let cols = lower.complex().dim(d);
            let mut parts: Vec<Matrix> = (0..n).map(|m| Matrix::zeros(field, self.stage(m).dim(d), cols)).collect();
            for (j, w) in lower.words(d).iter().enumerate() {
                let (dx, ix) = w[0];
                let (dq, iq) = w[1];
                for (r, s) in quotient.source.section(dq).col_nonzeros(iq) {
                    for (letters, word, t) in presented.expand(dq, r)? {
                        let (m, v) = self.vertex_image(&letters, dx, &[(ix, Scalar::one(field))], &word)?;
                        let st = s.mul(&t)?;
                        for (row, c) in v.into_iter().enumerate() {
                            if !c.is_zero() {
                                parts[m].add_scalar(row, j, &c.mul(&st)?);
                            }
                        }
                    }
                }
            }
            let mut total = Matrix::zeros(field, prev.dim(d), cols);
            for (m, p) in parts.iter().enumerate() {
                total = total.add(&to_prev[m].comp(d).mul(p)?)?;
            }
            Ok(total)
        })
        .map_err(|e| Error::InvariantViolated(format!("stage {n} attaching map: {e}")))?;
        let pushout = pushout(&attaching, &top)?;
        Ok(FiltrationStage { n, box_power: bp, quotient, lower, upper, top, attaching, pushout })
    }

    /// The vertex maps into `P_{n−1}` must agree along every cube edge and every transposition.
    fn check_relations(&mut self, cube: &WordCube, words: &[Vec<usize>], to_prev: &[ChainMap], n: usize) -> Result<()> {
        let id_x = ChainMap::identity(self.x.underlying().clone());
        let mut maps = Vec::with_capacity(words.len());
        for w in words {
            let wtf = cube.vertex(w)?;
            let (src, vm) = self.vertex_map_on(w, &wtf)?;
            let m = w.iter().filter(|&&a| a == L).count();
            maps.push((src, to_prev[m].compose(&vm)?));
        }
        let pos = |w: &[usize]| words.iter().position(|u| u == w);
        for (a, w) in words.iter().enumerate() {
            let (src, vm) = &maps[a];
            for i in (0..n).filter(|&i| w[i] == K) {
                let mut up = w.clone();
                up[i] = L;
                let Some(b) = pos(&up) else { continue };
                let edge = cube.edge(w, &up)?;
                let lifted = tensor_maps_between(src, &maps[b].0, &[TensorPart::single(&id_x), TensorPart::single(&edge)])?;
                self.relations_checked += 1;
                if let Some(d) = vm.first_disagreement(&maps[b].1.compose(&lifted)?) {
                    return Err(Error::DescentFailure(format!(
                        "stage {n}: edge {} → {} is not respected in degree {d}",
                        spell(w),
                        spell(&up)
                    )));
                }
            }
            for i in 0..n.saturating_sub(1) {
                let sigma = perm::transposition(n, i);
                let (image, pm) = cube.permute(w, &sigma)?;
                let b = pos(&image).ok_or_else(|| Error::InvariantViolated("permuted vertex left the punctured cube".into()))?;
                let lifted = tensor_maps_between(src, &maps[b].0, &[TensorPart::single(&id_x), TensorPart::single(&pm)])?;
                self.relations_checked += 1;
                if let Some(d) = vm.first_disagreement(&maps[b].1.compose(&lifted)?) {
                    return Err(Error::DescentFailure(format!(
                        "stage {n}: transposition ({} {}) from {} to {} is not respected in degree {d}",
                        i + 1,
                        i + 2,
                        spell(w),
                        spell(&image)
                    )));
                }
            }
        }
        Ok(())
    }

    /// The oracle `X ⊗_{Sym K} Sym L` and the map `P_{n_max} → X ⊗_{Sym K} Sym L`.
    pub fn comparison(&self) -> Result<(RelativeTensor, ChainMap)> {
        let field = self.field();
        let cap = self.cap();
        let rt = if self.h.target().dim(0) == 0 {
            relative_tensor(&self.x, &self.g, &self.h, cap)?
        } else {
            relative_tensor_truncated(&self.x, &self.g, &self.h, cap, self.n_max)?
        };
        let obj = rt.object().clone();
        let mut theta = rt.from_x()?.retarget(self.stage(0).clone(), obj.clone())?;
        for stage in &self.stages {
            let n = stage.n;
            let up = stage.upper.complex().clone();
            let summand = rt.sym_l.summand(n);
            if let Some(s) = summand {
                if !s.object().same_data(&stage.quotient.target.object) {
                    return Err(Error::InvariantViolated(format!("Sym^{n} L differs between the tower and the oracle")));
                }
            }
            let xi = ChainMap::from_fn(up.clone(), obj.clone(), |d| {
                let mut m = Matrix::zeros(field, rt.ambient.complex().dim(d), up.dim(d));
                if summand.is_some() {
                    for (j, w) in stage.upper.words(d).iter().enumerate() {
                        let (dx, ix) = w[0];
                        let (ds, is) = w[1];
                        let off = rt.sym_l.sum().offset(ds, n);
                        let row = rt.ambient.index_of(&[(ds, off + is), (dx, ix)]).expect("Sym L ⊗ X word");
                        m.add_int(row, j, if dx % 2 == 1 && ds % 2 == 1 { -1 } else { 1 });
                    }
                }
                rt.quotient.projection.comp(d).mul(&m)
            })?;
            theta = stage
                .pushout
                .descend(&theta, &xi)
                .map_err(|e| Error::DescentFailure(format!("stage {n} does not map to the relative tensor product: {e}")))?;
        }
        Ok((rt, theta))
    }
}

fn spell(w: &[usize]) -> String {
    w.iter().map(|&a| if a == K { 'K' } else { 'L' }).collect()
}

/// The comparison `P_{n_max} → X ⊗_{Sym K} Sym L` is an isomorphism through the safe degree.
pub fn compare_to_relative_tensor(fr: &FiltrationResult, name: &str) -> AxiomReport {
    let mut report = AxiomReport::new("filtration-comparison", fr.field())
        .param("n_max", fr.n_max)
        .param("cap", fr.cap())
        .param("safe_degree", fr.safe_degree())
        .param("relations_checked", fr.relations_checked);
    let result = fr.comparison().map(|(rt, theta)| {
        let safe = fr.safe_degree().min(theta.cap());
        (0..=safe).find_map(|d| {
            let m = theta.comp(d);
            let r = m.rank();
            (m.rows() != m.cols() || r != m.rows()).then(|| {
                Witness::new("rank", format!("P_{} → oracle has rank {r} from {} onto {}", fr.n_max, m.cols(), rt.object().dim(d)))
                    .at(d)
                    .counts(m.rows().max(m.cols()), r)
            })
        })
    });
    report.record("comparison-iso", name, Some(fr.n_max), result);
    report
}

/// The oracle is a commutative monoid and `X → P` is a monoid map agreeing with the tower.
pub fn monoid_structure_check(fr: &FiltrationResult, name: &str) -> AxiomReport {
    let mut report = AxiomReport::new("filtration-monoid", fr.field()).param("n_max", fr.n_max);
    let built = fr.comparison();
    let (rt, theta) = match built {
        Ok(v) => v,
        Err(e) => {
            report.record("comparison", name, None, Err(e));
            return report;
        }
    };
    report.record("monoid-laws", name, None, rt.monoid.law_violation());
    let from_x = rt.from_x();
    report.record("x-to-p-monoid-map", name, None, from_x.clone().and_then(|f| fr.x.monoid_map_violation(&rt.monoid, &f)));
    let agree = (|| {
        let through = theta.compose(&fr.composite()?)?;
        let direct = from_x?.retarget(through.source().clone(), through.target().clone())?;
        Ok(through.first_disagreement(&direct).map(|d| Witness::new("disagreement", "X → P_n → oracle differs from X → oracle").at(d)))
    })();
    report.record("tower-compatible", name, None, agree);
    report
}

/// Mono and quasi-isomorphism checks on each connecting map and on `X → P_{n_max}`.
pub fn homotopy_check(fr: &FiltrationResult, name: &str) -> AxiomReport {
    let mut report = AxiomReport::new("filtration-homotopy", fr.field()).param("n_max", fr.n_max);
    for s in &fr.stages {
        let c = s.connecting();
        let mono = c.first_non_mono_degree().map(|d| Witness::new("kernel", "connecting map is not injective").at(d));
        report.record("connecting-mono", name, Some(s.n), Ok(mono));
        report.record("connecting-quasi-iso", name, Some(s.n), first_non_quasi_iso_degree(c).map(|o| o.as_ref().map(Witness::homology)));
    }
    let composite = fr.composite().and_then(|f| first_non_quasi_iso_degree(&f)).map(|o| o.as_ref().map(Witness::homology));
    report.record("composite-quasi-iso", name, Some(fr.n_max), composite);
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::standard::{sphere_to_disk, zero_to_disk};
    use crate::sym::{square_zero, sym_free, unit_monoid};

    fn zero_g(h: &ChainMap, x: &CommutativeMonoidObject) -> ChainMap {
        ChainMap::zero(h.source().clone(), x.underlying().clone()).unwrap()
    }

    #[test]
    fn identity_h_keeps_x() {
        let field = Field::Rational;
        let x = square_zero(field, 2, 8).unwrap();
        let k = Arc::new(ChainComplex::sphere(2, field));
        let h = ChainMap::identity(k);
        let fr = build_filtration(&x, &zero_g(&h, &x), &h, 3, 8).unwrap();
        for s in &fr.stages {
            assert!(s.connecting().is_iso(), "stage {}", s.n);
        }
        assert!(compare_to_relative_tensor(&fr, "id").passed());
    }

    #[test]
    fn first_vertex_map_is_g_then_multiply() {
        let field = Field::Rational;
        let x = square_zero(field, 2, 8).unwrap();
        let h = sphere_to_disk(3, field);
        let k = h.source().clone();
        let g = ChainMap::from_fn(k.clone(), x.underlying().clone(), |d| {
            let mut m = Matrix::zeros(field, x.underlying().dim(d), k.dim(d));
            if d == 2 {
                m.add_int(0, 0, 1);
            }
            Ok(m)
        })
        .unwrap();
        let fr = build_filtration(&x, &g, &h, 2, 8).unwrap();
        let vm = fr.vertex_map(&[K]).unwrap();
        // 1 ⊗ k ↦ ε and ε ⊗ k ↦ ε² = 0
        assert_eq!(vm.comp(2).rank(), 1);
        assert!(vm.comp(4).is_zero());
        assert!(matches!(fr.vertex_map(&[L, L, L]), Err(Error::OutOfRange(_))));
        let r = compare_to_relative_tensor(&fr, "sz");
        assert!(r.passed(), "{}", r.to_text());
        assert!(monoid_structure_check(&fr, "sz").passed());
    }

    #[test]
    fn trivial_cofibration_over_q_and_f2() {
        let x = unit_monoid(Field::Rational, 8).unwrap();
        let h = zero_to_disk(2, Field::Rational).unwrap();
        let fr = build_filtration(&x, &zero_g(&h, &x), &h, 3, 8).unwrap();
        assert!(homotopy_check(&fr, "q").passed());

        let f2 = Field::Prime(2);
        let x = unit_monoid(f2, 8).unwrap();
        let h = zero_to_disk(1, f2).unwrap();
        let fr = build_filtration(&x, &zero_g(&h, &x), &h, 3, 8).unwrap();
        let r = homotopy_check(&fr, "f2");
        assert!(r.find("connecting-quasi-iso", "f2", Some(1)).unwrap().verdict == crate::report::Outcome::Pass);
        assert!(r.find("connecting-quasi-iso", "f2", Some(2)).unwrap().verdict == crate::report::Outcome::Fail);
        assert!(compare_to_relative_tensor(&fr, "f2").passed());
    }

    #[test]
    fn generating_cofibration_grid() {
        for field in [Field::Rational, Field::Prime(2)] {
            let h = sphere_to_disk(3, field);
            let unit = unit_monoid(field, 8).unwrap();
            let sz = square_zero(field, 2, 8).unwrap();
            let k = h.source().clone();
            let eps = ChainMap::from_fn(k.clone(), sz.underlying().clone(), |d| {
                let mut m = Matrix::zeros(field, sz.underlying().dim(d), k.dim(d));
                if d == 2 {
                    m.add_int(0, 0, 1);
                }
                Ok(m)
            })
            .unwrap();
            for (x, g) in [(&unit, zero_g(&h, &unit)), (&sz, eps)] {
                let fr = build_filtration(x, &g, &h, 4, 8).unwrap();
                assert!(fr.relations_checked > 0);
                assert_eq!(fr.safe_degree(), 7);
                let r = compare_to_relative_tensor(&fr, "grid");
                assert!(r.passed(), "{field}: {}", r.to_text());
                let m = monoid_structure_check(&fr, "grid");
                assert!(m.passed(), "{field}: {}", m.to_text());
            }
        }
    }

    #[test]
    fn non_map_g_is_rejected() {
        let field = Field::Rational;
        let x = unit_monoid(field, 8).unwrap();
        let h = zero_to_disk(2, field).unwrap();
        let bad = ChainMap::zero(h.target().clone(), x.underlying().clone()).unwrap();
        assert!(build_filtration(&x, &bad, &h, 2, 8).is_err());
    }

    #[test]
    fn killing_an_odd_generator() {
        for field in [Field::Rational, Field::Prime(3), Field::Prime(2)] {
            let h = sphere_to_disk(2, field);
            let sx = sym_free(h.source(), 8).unwrap();
            let x = sx.monoid().clone();
            let g = sx.inclusion().unwrap();
            let fr = build_filtration(&x, &g, &h, 4, 8).unwrap();
            let r = compare_to_relative_tensor(&fr, "odd");
            assert!(r.passed(), "{field}: {}", r.to_text());
            assert!(monoid_structure_check(&fr, "odd").passed());
        }
    }

    #[test]
    fn koszul_sign_on_mixed_words() {
        for field in [Field::Rational, Field::Prime(3)] {
            let k = Arc::new(ChainComplex::sphere(1, field));
            let mut dims = vec![0; 9];
            dims[1] = 2;
            let diffs = (1..=8).map(|n| Matrix::zeros(field, dims[n - 1], dims[n])).collect();
            let l = Arc::new(ChainComplex::new(field, dims, diffs).unwrap());
            let h = ChainMap::from_fn(k.clone(), l.clone(), |d| {
                let mut m = Matrix::zeros(field, l.dim(d), k.dim(d));
                if d == 1 {
                    m.add_int(0, 0, 1);
                }
                Ok(m)
            })
            .unwrap();
            let sx = sym_free(&k, 8).unwrap();
            let fr = build_filtration(sx.monoid(), &sx.inclusion().unwrap(), &h, 3, 8).unwrap();
            let r = compare_to_relative_tensor(&fr, "sign");
            assert!(r.passed(), "{field}: {}", r.to_text());
            assert_eq!(fr.stage(3).dims()[..4], [1, 2, 1, 0]);
        }
    }
}
