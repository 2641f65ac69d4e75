use std::sync::Arc;

use super::present::Presented;
use super::word::{all_words, CubeColimit, Letters, WordCube};
use crate::chain::{pushout, tensor_maps_between, ChainMap, QuotientComplex, TensorPart};
use crate::equivariant::{
    perm, tensor_power_action_on, EquivariantComplex, EquivariantMap, Induced,
};
use crate::error::{Error, Result};
use crate::report::{AxiomReport, Witness};

/// `f^{□n}: Q_n → L^{⊗n}` with its cube data.
#[derive(Debug)]
pub struct BoxPower {
    pub cube: WordCube,
    pub domain: Arc<CubeColimit>,
    pub map: EquivariantMap,
}

impl BoxPower {
    pub fn arity(&self) -> usize {
        self.cube.arity()
    }

    /// `f^{□n}/Σ_n` between coinvariants.
    pub fn quotient(&self) -> Result<BoxPowerQuotient> {
        let (source, target, map) = self.map.on_coinvariants()?;
        Ok(BoxPowerQuotient { source, target, map })
    }
}

#[derive(Clone, Debug)]
pub struct BoxPowerQuotient {
    pub source: QuotientComplex,
    pub target: QuotientComplex,
    pub map: ChainMap,
}

/// Words with at most `q` copies of the top letter `1`.
pub fn shell_words(n: usize, q: usize) -> Vec<Letters> {
    all_words(2, n).into_iter().filter(|w| w.iter().filter(|&&a| a == 1).count() <= q).collect()
}

pub fn box_power(f: &ChainMap, n: usize) -> Result<BoxPower> {
    let cube = WordCube::new(std::slice::from_ref(f), n)?;
    box_power_of_cube(cube)
}

pub(crate) fn box_power_of_cube(cube: WordCube) -> Result<BoxPower> {
    let n = cube.arity();
    let domain = Arc::new(cube.colimit(shell_words(n, n - 1))?);
    let top = vec![1; n];
    let source = cube.full_action(&domain)?;
    let target = tensor_power_action_on(&*cube.vertex(&top)?)?;
    let m = cube.to_vertex(&domain, &top)?;
    let map = EquivariantMap::new(source, target, m)?;
    Ok(BoxPower { cube, domain, map })
}

pub fn box_power_quotient(f: &ChainMap, n: usize) -> Result<BoxPowerQuotient> {
    box_power(f, n)?.quotient()
}

/// The colimit `Q^n_q` over words with at most `q` copies of the target letter.
#[derive(Clone, Debug)]
pub struct PartialCubeColimit {
    pub q: usize,
    pub colimit: Arc<CubeColimit>,
    pub object: EquivariantComplex,
    /// `Q^n_{q−1} → Q^n_q`, absent for `q = 0`.
    pub inclusion_from: Option<ChainMap>,
}

pub fn partial_cube(f: &ChainMap, n: usize, q: usize) -> Result<PartialCubeColimit> {
    let cube = WordCube::new(std::slice::from_ref(f), n)?;
    partial_cube_in(&cube, q)
}

pub(crate) fn partial_cube_in(cube: &WordCube, q: usize) -> Result<PartialCubeColimit> {
    let n = cube.arity();
    if q > n {
        return Err(Error::OutOfRange(format!("shell index {q} above arity {n}")));
    }
    let colimit = Arc::new(cube.colimit(shell_words(n, q))?);
    let object = cube.full_action(&colimit)?;
    let inclusion_from = if q == 0 {
        None
    } else {
        let prev = cube.colimit(shell_words(n, q - 1))?;
        Some(cube.inclusion(&prev, &colimit)?)
    };
    Ok(PartialCubeColimit { q, colimit, object, inclusion_from })
}

pub(crate) fn iso_witness(what: &str, m: &ChainMap) -> Option<Witness> {
    m.first_non_iso_degree().map(|d| {
        let c = m.comp(d);
        Witness::new("non-iso", format!("{what}: {}x{} matrix of rank {}", c.rows(), c.cols(), c.rank()))
            .at(d)
            .counts(c.cols(), c.rank())
    })
}

pub(crate) fn mono_witness(what: &str, m: &ChainMap) -> Option<Witness> {
    m.first_non_mono_degree().map(|d| {
        let c = m.comp(d);
        Witness::new("non-mono", format!("{what}: rank {} on a {}-dimensional source", c.rank(), c.cols()))
            .at(d)
            .counts(c.cols(), c.rank())
    })
}

pub(crate) fn agree_witness(what: &str, a: &ChainMap, b: &ChainMap) -> Option<Witness> {
    a.first_disagreement(b).map(|d| Witness::new("square", format!("{what} does not commute")).at(d))
}

/// The shell square building `Q^n_q` from `Q^n_{q−1}` by inducing up the boundary of one vertex.
pub struct ShellSquare {
    pub top: ChainMap,
    pub left: ChainMap,
    pub right: ChainMap,
    pub bottom: ChainMap,
    pub comparison: ChainMap,
}

/// Build the square for `1 ≤ q ≤ n` and the comparison from its pushout to `Q^n_q`.
pub fn shell_square(cube: &WordCube, q: usize) -> Result<ShellSquare> {
    let n = cube.arity();
    if q == 0 || q > n {
        return Err(Error::OutOfRange(format!("shell index {q} outside 1..={n}")));
    }
    let sizes = [n - q, q];
    let mask = perm::young_generators(&sizes);
    let prefix = vec![0; n - q];
    let corner: Letters = [prefix.as_slice(), &vec![1; q]].concat();
    let boundary_words: Vec<Letters> = all_words(2, q)
        .into_iter()
        .filter(|v| v.contains(&0))
        .map(|v| [prefix.as_slice(), &v].concat())
        .collect();
    let m = cube.colimit(boundary_words)?;
    let v = cube.colimit(vec![corner.clone()])?;
    let m_act = cube.action(&m, &mask)?;
    let v_act = cube.action(&v, &mask)?;
    let phi = {
        let maps = m.words.iter().map(|w| v.cocone(&corner).expect("corner").compose(&cube.edge(w, &corner)?)).collect::<Result<Vec<_>>>()?;
        m.descend(v.object().clone(), &maps)?
    };
    let prev = partial_cube_in(cube, q - 1)?;
    let next = partial_cube_in(cube, q)?;
    let ind_m = Induced::new(&m_act, &sizes)?;
    let ind_v = Induced::new(&v_act, &sizes)?;
    let left = ind_m.map(&ind_v, &phi)?;
    let top = ind_m.adjoint(&cube.inclusion(&m, &prev.colimit)?, &prev.object)?;
    let bottom = ind_v.adjoint(&cube.inclusion(&v, &next.colimit)?, &next.object)?;
    let right = next.inclusion_from.clone().expect("q ≥ 1");
    let po = pushout(&top, &left)?;
    let comparison = po.descend(&right, &bottom)?;
    Ok(ShellSquare { top, left, right, bottom, comparison })
}

/// Verify that `Q^n_q` is the pushout of `Q^n_{q−1}` along the induced boundary map of `f^{□q}`.
pub fn shell_pushout_verify(f: &ChainMap, n: usize, q: usize, name: &str) -> AxiomReport {
    let mut report = AxiomReport::new("shell-pushout", f.field()).param("n", n).param("q", q);
    let built = WordCube::new(std::slice::from_ref(f), n).and_then(|cube| shell_square(&cube, q));
    match built {
        Ok(sq) => {
            let commute = (|| Ok(agree_witness("shell square", &sq.right.compose(&sq.top)?, &sq.bottom.compose(&sq.left)?)))();
            report.record("square-commutes", name, Some(n), commute);
            report.record("comparison-iso", name, Some(n), Ok(iso_witness("pushout comparison", &sq.comparison)));
        }
        Err(e) => report.record("comparison-iso", name, Some(n), Err(e)),
    }
    report
}

/// A map of arrows `(a, b): f → g` induces `Q(f) → Q(g)` and `L_f^{⊗n} → L_g^{⊗n}`.
pub fn box_power_morphism(src: &BoxPower, tgt: &BoxPower, a: &ChainMap, b: &ChainMap) -> Result<(ChainMap, ChainMap)> {
    let n = src.arity();
    if tgt.arity() != n {
        return Err(Error::DimensionMismatch("box powers of different arity".into()));
    }
    let slot = |letter: usize| if letter == 0 { a } else { b };
    let maps = src
        .domain
        .words
        .iter()
        .map(|w| {
            let slots: Vec<ChainMap> = w.iter().map(|&l| slot(l).clone()).collect();
            let m = src.cube.slotwise(&*src.cube.vertex(w)?, &*tgt.cube.vertex(w)?, &slots)?;
            tgt.domain.cocone(w).expect("same vertex set").compose(&m)
        })
        .collect::<Result<Vec<_>>>()?;
    let dom = src.domain.descend(tgt.domain.object().clone(), &maps)?;
    let top = vec![1; n];
    let cod = src.cube.slotwise(&*src.cube.vertex(&top)?, &*tgt.cube.vertex(&top)?, &vec![b.clone(); n])?;
    Ok((dom, cod))
}

/// The pushout product `f □ g` with presented domain and codomain.
pub struct PresentedArrow {
    pub domain: Presented,
    pub codomain: Presented,
    pub map: ChainMap,
}

/// `f^{□n}` by right-nested binary pushout products `f □ (f □ (⋯ □ f))`.
pub fn bracketed_power(f: &ChainMap, n: usize) -> Result<PresentedArrow> {
    let cube = WordCube::new(std::slice::from_ref(f), 1)?;
    let k = Presented::Vertex { letters: vec![0], tf: cube.vertex(&[0])? };
    let l = Presented::Vertex { letters: vec![1], tf: cube.vertex(&[1])? };
    let f = cube.edge(&[0], &[1])?;
    if n == 0 {
        return Err(Error::OutOfRange("power must be at least 1".into()));
    }
    let mut arrow = PresentedArrow { domain: k.clone(), codomain: l.clone(), map: f.clone() };
    for _ in 1..n {
        let prev = arrow;
        let kd = Presented::tensor(vec![k.clone(), prev.domain.clone()])?;
        let kc = Presented::tensor(vec![k.clone(), prev.codomain.clone()])?;
        let ld = Presented::tensor(vec![l.clone(), prev.domain.clone()])?;
        let lc = Presented::tensor(vec![l.clone(), prev.codomain.clone()])?;
        let tf = |p: &Presented| match p {
            Presented::Tensor { tf, .. } => tf.clone(),
            _ => unreachable!("built as a tensor"),
        };
        let (kd_tf, kc_tf, ld_tf, lc_tf) = (tf(&kd), tf(&kc), tf(&ld), tf(&lc));
        let id_k = ChainMap::identity(kd_tf.factors()[0].clone());
        let id_l = ChainMap::identity(ld_tf.factors()[0].clone());
        let id_dom = ChainMap::identity(prev.domain.object().clone());
        let id_cod = ChainMap::identity(prev.codomain.object().clone());
        let into_kc = tensor_maps_between(&kd_tf, &kc_tf, &[TensorPart::single(&id_k), TensorPart::single(&prev.map)])?;
        let into_ld = tensor_maps_between(&kd_tf, &ld_tf, &[TensorPart::single(&f), TensorPart::single(&id_dom)])?;
        let po = pushout(&into_kc, &into_ld)?;
        let from_kc = tensor_maps_between(&kc_tf, &lc_tf, &[TensorPart::single(&f), TensorPart::single(&id_cod)])?;
        let from_ld = tensor_maps_between(&ld_tf, &lc_tf, &[TensorPart::single(&id_l), TensorPart::single(&prev.map)])?;
        let map = po.descend(&from_kc, &from_ld)?;
        let domain = Presented::Pushout { po: Arc::new(po), b: Box::new(kc), c: Box::new(ld) };
        arrow = PresentedArrow { domain, codomain: lc, map };
    }
    Ok(arrow)
}

/// Compare the cube colimit with the bracketed construction as arrows.
pub fn bracketing_check(f: &ChainMap, n: usize) -> Result<Option<Witness>> {
    let bp = box_power(f, n)?;
    let br = bracketed_power(f, n)?;
    let top = vec![1; n];
    let dom = br.domain.into_colimit(&bp.domain)?;
    let cod = br.codomain.into_vertex(&top, &*bp.cube.vertex(&top)?)?;
    if let Some(w) = iso_witness("domain comparison", &dom) {
        return Ok(Some(w));
    }
    if let Some(w) = iso_witness("codomain comparison", &cod) {
        return Ok(Some(w));
    }
    Ok(agree_witness("cube vs bracketing", &bp.map.map.compose(&dom)?, &cod.compose(&br.map)?))
}

/// Retract data `f → g → f` with both composites the identity.
pub struct Retract<'a> {
    pub f: &'a ChainMap,
    pub g: &'a ChainMap,
    pub include: (&'a ChainMap, &'a ChainMap),
    pub retract: (&'a ChainMap, &'a ChainMap),
}

/// `f^{□n}/Σ_n` is a retract of `g^{□n}/Σ_n` with commuting squares.
pub fn retract_check(r: &Retract<'_>, n: usize) -> Result<Option<Witness>> {
    for (a, b, src, tgt) in [(r.include.0, r.include.1, r.f, r.g), (r.retract.0, r.retract.1, r.g, r.f)] {
        if let Some(w) = agree_witness("arrow morphism", &tgt.compose(a)?, &b.compose(src)?) {
            return Ok(Some(w));
        }
    }
    let bf = box_power(r.f, n)?;
    let bg = box_power(r.g, n)?;
    let qf = bf.quotient()?;
    let qg = bg.quotient()?;
    let (i_dom, i_cod) = box_power_morphism(&bf, &bg, r.include.0, r.include.1)?;
    let (r_dom, r_cod) = box_power_morphism(&bg, &bf, r.retract.0, r.retract.1)?;
    let i_dom = qf.source.descend_to(&i_dom, &qg.source)?;
    let i_cod = qf.target.descend_to(&i_cod, &qg.target)?;
    let r_dom = qg.source.descend_to(&r_dom, &qf.source)?;
    let r_cod = qg.target.descend_to(&r_cod, &qf.target)?;
    for (what, m) in [("domain retraction", r_dom.compose(&i_dom)?), ("codomain retraction", r_cod.compose(&i_cod)?)] {
        if let Some(d) = m.comps().iter().position(|c| !c.is_identity()) {
            return Ok(Some(Witness::new("retract", format!("{what} is not the identity")).at(d)));
        }
    }
    if let Some(w) = agree_witness("inclusion square", &qg.map.compose(&i_dom)?, &i_cod.compose(&qf.map)?) {
        return Ok(Some(w));
    }
    Ok(agree_witness("retraction square", &qf.map.compose(&r_dom)?, &r_cod.compose(&qg.map)?))
}

/// For `f'` the pushout of `f` along `phi: K → Z`, the square `f^{□n} → f'^{□n}` is a pushout,
/// before and after coinvariants.
pub fn pushout_closure_check(f: &ChainMap, phi: &ChainMap, n: usize) -> Result<Option<Witness>> {
    let po = pushout(phi, f)?;
    let f2 = po.in_b.clone();
    let bf = box_power(f, n)?;
    let bg = box_power(&f2, n)?;
    let (dom, cod) = box_power_morphism(&bf, &bg, phi, &po.in_c)?;
    let square = pushout(&dom, &bf.map.map)?;
    let comparison = square.descend(&bg.map.map, &cod)?;
    if let Some(w) = iso_witness("equivariant pushout comparison", &comparison) {
        return Ok(Some(w));
    }
    let qf = bf.quotient()?;
    let qg = bg.quotient()?;
    let dom_q = qf.source.descend_to(&dom, &qg.source)?;
    let cod_q = qf.target.descend_to(&cod, &qg.target)?;
    let square_q = pushout(&dom_q, &qf.map)?;
    let comparison_q = square_q.descend(&qg.map, &cod_q)?;
    Ok(iso_witness("coinvariant pushout comparison", &comparison_q))
}
