//! JSON fixtures: named complexes, chain maps and commutative monoids with exact scalars
//! written as strings (`"-3/4"` over ℚ, a residue over 𝔽_p).

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::chain::{ChainComplex, ChainMap, TensorFactors};
use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix, Scalar};
use crate::sym::CommutativeMonoidObject;

pub const MAX_FIXTURE_CAP: usize = 64;
pub const MAX_FIXTURE_DIM: usize = 256;

/// A scalar as text; bare integers are accepted on input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarText {
    Text(String),
    Int(i64),
}

impl ScalarText {
    fn parse(&self, field: Field) -> Result<Scalar> {
        match self {
            ScalarText::Text(s) => Scalar::parse(field, s),
            ScalarText::Int(v) => Ok(Scalar::from_i64(field, *v)),
        }
    }
}

pub type MatrixText = Vec<Vec<ScalarText>>;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<Field>,
    pub cap: usize,
    pub dims: BTreeMap<String, usize>,
    #[serde(default)]
    pub diffs: BTreeMap<String, MatrixText>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<BTreeMap<String, Vec<String>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    pub source: String,
    pub target: String,
    #[serde(default)]
    pub comps: BTreeMap<String, MatrixText>,
}

/// A monoid on a named complex: the unit as a degree-0 vector and the multiplication
/// `X ⊗ X → X` with columns in the lexicographic order of tensor words.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonoidSpec {
    pub complex: String,
    pub unit: Vec<ScalarText>,
    #[serde(default)]
    pub mult: BTreeMap<String, MatrixText>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixtureFile {
    pub field: Field,
    #[serde(default)]
    pub complexes: BTreeMap<String, ComplexSpec>,
    #[serde(default)]
    pub maps: BTreeMap<String, MapSpec>,
    #[serde(default)]
    pub monoids: BTreeMap<String, MonoidSpec>,
}

/// Built and validated fixture objects.
#[derive(Clone, Debug)]
pub struct Fixtures {
    pub field: Field,
    pub complexes: BTreeMap<String, Arc<ChainComplex>>,
    pub maps: BTreeMap<String, ChainMap>,
    pub monoids: BTreeMap<String, CommutativeMonoidObject>,
}

fn degree_key(path: &str, k: &str, cap: usize) -> Result<usize> {
    let d: usize = k.parse().map_err(|_| Error::Parse(format!("degree key {k:?} is not a natural number")).at(path))?;
    if d > cap {
        return Err(Error::Parse(format!("degree {d} above cap {cap}")).at(path));
    }
    Ok(d)
}

fn matrix(path: &str, field: Field, rows: usize, cols: usize, m: &MatrixText) -> Result<Matrix> {
    if m.len() != rows {
        return Err(Error::DimensionMismatch(format!("{} rows, expected {rows}", m.len())).at(path));
    }
    let mut out = Matrix::zeros(field, rows, cols);
    for (i, row) in m.iter().enumerate() {
        if row.len() != cols {
            return Err(Error::DimensionMismatch(format!("row {i} has {} entries, expected {cols}", row.len())).at(path));
        }
        for (j, s) in row.iter().enumerate() {
            out.set(i, j, &s.parse(field).map_err(|e| e.at(format!("{path}[{i}][{j}]")))?);
        }
    }
    Ok(out)
}

fn matrix_text(m: &Matrix) -> MatrixText {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| ScalarText::Text(m.get(i, j).to_string())).collect()).collect()
}

/// Per-degree matrices keyed by degree, zero where absent.
fn degree_matrices(
    path: &str,
    field: Field,
    cap: usize,
    range: std::ops::RangeInclusive<usize>,
    given: &BTreeMap<String, MatrixText>,
    shape: impl Fn(usize) -> (usize, usize),
) -> Result<Vec<Matrix>> {
    let mut by_degree = BTreeMap::new();
    for (k, m) in given {
        let p = format!("{path}.{k}");
        let d = degree_key(&p, k, cap)?;
        if !range.contains(&d) {
            return Err(Error::Parse(format!("degree {d} outside {range:?}")).at(p));
        }
        let (r, c) = shape(d);
        by_degree.insert(d, matrix(&p, field, r, c, m)?);
    }
    Ok(range
        .map(|d| {
            by_degree.remove(&d).unwrap_or_else(|| {
                let (r, c) = shape(d);
                Matrix::zeros(field, r, c)
            })
        })
        .collect())
}

impl ComplexSpec {
    pub fn build(&self, path: &str, field: Field) -> Result<ChainComplex> {
        if let Some(f) = self.field {
            field.ensure_same(f).map_err(|e| e.at(path))?;
        }
        if self.cap > MAX_FIXTURE_CAP {
            return Err(Error::OutOfRange(format!("cap {} above {MAX_FIXTURE_CAP}", self.cap)).at(path));
        }
        let mut dims = vec![0; self.cap + 1];
        for (k, &d) in &self.dims {
            let p = format!("{path}.dims.{k}");
            if d > MAX_FIXTURE_DIM {
                return Err(Error::OutOfRange(format!("dimension {d} above {MAX_FIXTURE_DIM}")).at(p));
            }
            dims[degree_key(&p, k, self.cap)?] = d;
        }
        let diffs = if self.cap == 0 {
            Vec::new()
        } else {
            degree_matrices(&format!("{path}.diffs"), field, self.cap, 1..=self.cap, &self.diffs, |n| (dims[n - 1], dims[n]))?
        };
        let mut c = ChainComplex::new(field, dims.clone(), diffs).map_err(|e| e.at(path))?;
        if let Some(labels) = &self.labels {
            let mut all = dims.iter().map(|&d| (0..d).map(|i| format!("e{i}")).collect::<Vec<_>>()).collect::<Vec<_>>();
            for (k, l) in labels {
                let p = format!("{path}.labels.{k}");
                all[degree_key(&p, k, self.cap)?] = l.clone();
            }
            c = c.with_labels(all).map_err(|e| e.at(format!("{path}.labels")))?;
        }
        Ok(c)
    }

    pub fn from_complex(c: &ChainComplex) -> Self {
        let dims = (0..=c.cap()).filter(|&n| c.dim(n) > 0).map(|n| (n.to_string(), c.dim(n))).collect();
        let diffs = (1..=c.cap()).filter(|&n| !c.d(n).is_zero()).map(|n| (n.to_string(), matrix_text(c.d(n)))).collect();
        let labels =
            c.labels().map(|ls| ls.iter().enumerate().filter(|(_, l)| !l.is_empty()).map(|(n, l)| (n.to_string(), l.clone())).collect());
        ComplexSpec { field: None, cap: c.cap(), dims, diffs, labels }
    }
}

fn map_comps(f: &ChainMap) -> BTreeMap<String, MatrixText> {
    (0..=f.cap()).filter(|&n| !f.comp(n).is_zero()).map(|n| (n.to_string(), matrix_text(f.comp(n)))).collect()
}

impl FixtureFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("line {} column {}: {e}", e.line(), e.column())))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("fixture serializes")
    }

    pub fn build(&self) -> Result<Fixtures> {
        let field = self.field;
        let mut complexes = BTreeMap::new();
        for (name, spec) in &self.complexes {
            complexes.insert(name.clone(), Arc::new(spec.build(&format!("complexes.{name}"), field)?));
        }
        let lookup = |path: &str, name: &str| {
            complexes.get(name).cloned().ok_or_else(|| Error::Parse(format!("unknown complex {name:?}")).at(path))
        };
        let mut maps = BTreeMap::new();
        for (name, spec) in &self.maps {
            let path = format!("maps.{name}");
            let s = lookup(&format!("{path}.source"), &spec.source)?;
            let t = lookup(&format!("{path}.target"), &spec.target)?;
            if s.cap() != t.cap() {
                return Err(Error::DimensionMismatch(format!("source cap {} vs target cap {}", s.cap(), t.cap())).at(path));
            }
            let comps = degree_matrices(&format!("{path}.comps"), field, s.cap(), 0..=s.cap(), &spec.comps, |n| (t.dim(n), s.dim(n)))?;
            maps.insert(name.clone(), ChainMap::new(s, t, comps).map_err(|e| e.at(&path))?);
        }
        let mut monoids = BTreeMap::new();
        for (name, spec) in &self.monoids {
            let path = format!("monoids.{name}");
            let x = lookup(&format!("{path}.complex"), &spec.complex)?;
            let unit = spec
                .unit
                .iter()
                .enumerate()
                .map(|(i, s)| s.parse(field).map_err(|e| e.at(format!("{path}.unit[{i}]"))))
                .collect::<Result<Vec<_>>>()?;
            let built = build_monoid(&path, field, &x, &unit, &spec.mult)?;
            monoids.insert(name.clone(), built);
        }
        Ok(Fixtures { field, complexes, maps, monoids })
    }
}

fn build_monoid(
    path: &str,
    field: Field,
    x: &Arc<ChainComplex>,
    unit: &[Scalar],
    mult: &BTreeMap<String, MatrixText>,
) -> Result<CommutativeMonoidObject> {
    if unit.len() != x.dim(0) {
        return Err(Error::DimensionMismatch(format!("unit has {} entries, expected {}", unit.len(), x.dim(0))).at(format!("{path}.unit")));
    }
    let s0 = Arc::new(ChainComplex::sphere_capped(0, field, x.cap()).map_err(|e| e.at(path))?);
    let u = ChainMap::from_fn(s0.clone(), x.clone(), |d| {
        let mut m = Matrix::zeros(field, x.dim(d), s0.dim(d));
        if d == 0 {
            for (i, s) in unit.iter().enumerate() {
                m.set(i, 0, s);
            }
        }
        Ok(m)
    })
    .map_err(|e| e.at(format!("{path}.unit")))?;
    let square = TensorFactors::new(field, vec![x.clone(), x.clone()]).map_err(|e| e.at(path))?;
    let sq = square.complex().clone();
    let comps = degree_matrices(&format!("{path}.mult"), field, x.cap(), 0..=x.cap(), mult, |n| (x.dim(n), sq.dim(n)))?;
    let m = ChainMap::new(sq, x.clone(), comps).map_err(|e| e.at(format!("{path}.mult")))?;
    CommutativeMonoidObject::new(x.clone(), u, m).map_err(|e| e.at(path))
}

impl Fixtures {
    pub fn parse(text: &str) -> Result<Self> {
        FixtureFile::parse(text)?.build()
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| e.at(path.display().to_string()))
    }
}

/// Collects named objects into a serializable fixture.
#[derive(Clone, Debug)]
pub struct FixtureWriter {
    file: FixtureFile,
    names: Vec<(Arc<ChainComplex>, String)>,
}

impl FixtureWriter {
    pub fn new(field: Field) -> Self {
        FixtureWriter {
            file: FixtureFile { field, complexes: BTreeMap::new(), maps: BTreeMap::new(), monoids: BTreeMap::new() },
            names: Vec::new(),
        }
    }

    /// Name a complex; an existing name is reused for identical data.
    pub fn complex(&mut self, name: &str, c: &Arc<ChainComplex>) -> String {
        if let Some((_, n)) = self.names.iter().find(|(k, _)| k.same_data(c)) {
            return n.clone();
        }
        self.file.complexes.insert(name.to_string(), ComplexSpec::from_complex(c));
        self.names.push((c.clone(), name.to_string()));
        name.to_string()
    }

    pub fn map(&mut self, name: &str, f: &ChainMap) {
        let source = self.complex(&format!("{name}.source"), f.source());
        let target = self.complex(&format!("{name}.target"), f.target());
        self.file.maps.insert(name.to_string(), MapSpec { source, target, comps: map_comps(f) });
    }

    pub fn monoid(&mut self, name: &str, m: &CommutativeMonoidObject) {
        let complex = self.complex(&format!("{name}.complex"), m.underlying());
        let unit = (0..m.underlying().dim(0)).map(|i| ScalarText::Text(m.unit().comp(0).get(i, 0).to_string())).collect();
        self.file.monoids.insert(name.to_string(), MonoidSpec { complex, unit, mult: map_comps(m.mult()) });
    }

    pub fn finish(self) -> FixtureFile {
        self.file
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::standard::sphere_to_disk;
    use crate::sym::square_zero;

    #[test]
    fn roundtrip_is_exact() {
        for field in [Field::Rational, Field::Prime(5)] {
            let mut w = FixtureWriter::new(field);
            let c = Scalar::parse(field, if field == Field::Rational { "-3/7" } else { "3" }).unwrap();
            let h = sphere_to_disk(2, field);
            w.map("h", &h.scale(&c));
            w.monoid("eps", &square_zero(field, 2, 6).unwrap());
            let file = w.finish();
            let text = file.to_json();
            let back = FixtureFile::parse(&text).unwrap();
            assert_eq!(back, file);
            let built = back.build().unwrap();
            assert_eq!(built.maps["h"].comp(1).get(0, 0), c);
            assert_eq!(built.monoids["eps"].underlying().dims(), &[1, 0, 1, 0, 0, 0, 0]);
        }
    }

    #[test]
    fn errors_carry_locations() {
        let bad_dd = r#"{"field": "Q", "complexes": {"C": {"cap": 2, "dims": {"0": 1, "1": 1, "2": 1},
            "diffs": {"1": [["1"]], "2": [["1"]]}}}}"#;
        let e = Fixtures::parse(bad_dd).unwrap_err();
        assert!(matches!(&e, Error::Fixture { path, source } if path == "complexes.C" && **source == Error::NotAComplex { degree: 2 }), "{e}");
        let bad_scalar = r#"{"field": "F3", "complexes": {"C": {"cap": 1, "dims": {"0": 1, "1": 1}, "diffs": {"1": [["1/2"]]}}}}"#;
        assert!(Fixtures::parse(bad_scalar).unwrap_err().to_string().contains("complexes.C.diffs.1[0][0]"));
        let syntax = "{\n  \"field\": \"Q\",\n  oops }";
        assert!(Fixtures::parse(syntax).unwrap_err().to_string().contains("line 3"));
        let unknown = r#"{"field": "Q", "maps": {"f": {"source": "A", "target": "A"}}}"#;
        assert!(Fixtures::parse(unknown).unwrap_err().to_string().contains("maps.f.source"));
        let not_map = r#"{"field": "Q", "complexes": {"S": {"cap": 1, "dims": {"0": 1}}, "D": {"cap": 1, "dims": {"0": 1, "1": 1}, "diffs": {"1": [[1]]}}},
            "maps": {"f": {"source": "D", "target": "S", "comps": {"0": [[1]]}}}}"#;
        assert!(Fixtures::parse(not_map).unwrap_err().to_string().contains("maps.f"));
    }

    #[test]
    fn broken_monoid_is_rejected() {
        let text = r#"{"field": "Q", "complexes": {"X": {"cap": 2, "dims": {"0": 1, "2": 1}}},
            "monoids": {"m": {"complex": "X", "unit": ["1"], "mult": {"0": [["2"]], "2": [["1", "1"]]}}}}"#;
        let e = Fixtures::parse(text).unwrap_err();
        assert!(e.to_string().contains("monoids.m"), "{e}");
    }
}
