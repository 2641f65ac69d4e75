use std::sync::Arc;

use crate::chain::{pushout, tensor_map, ChainComplex, ChainMap, Pushout, DEFAULT_CAP};
use crate::error::{Error, Result};
use crate::linalg::Field;
use crate::standard::{from_zero, sphere_to_disk_capped};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorKind {
    Cofibration,
    TrivialCofibration,
}

#[derive(Clone, Debug)]
pub struct Generator {
    pub name: String,
    pub kind: GeneratorKind,
    pub map: ChainMap,
}

impl Generator {
    pub fn is_trivial(&self) -> bool {
        self.kind == GeneratorKind::TrivialCofibration
    }
}

/// `I = {S(n−1) → D(n)} ∪ {0 → S(0)}` and `J = {0 → D(n)}` for `1 ≤ n ≤ bound`.
#[derive(Clone, Debug)]
pub struct GeneratingSets {
    pub field: Field,
    pub bound: usize,
    pub cap: usize,
    pub i: Vec<Generator>,
    pub j: Vec<Generator>,
}

impl GeneratingSets {
    pub fn new(field: Field, bound: usize) -> Result<Self> {
        Self::with_cap(field, bound, DEFAULT_CAP.max(bound))
    }

    pub fn with_cap(field: Field, bound: usize, cap: usize) -> Result<Self> {
        if bound == 0 {
            return Err(Error::OutOfRange("generator bound must be at least 1".into()));
        }
        if cap < bound {
            return Err(Error::OutOfRange(format!("cap {cap} is below the generator bound {bound}")));
        }
        let mut i = vec![Generator {
            name: "gen-cof-unit".into(),
            kind: GeneratorKind::Cofibration,
            map: from_zero(&Arc::new(ChainComplex::sphere_capped(0, field, cap)?)),
        }];
        let mut j = Vec::with_capacity(bound);
        for n in 1..=bound {
            i.push(Generator {
                name: format!("gen-cof-{}-{n}", n - 1),
                kind: GeneratorKind::Cofibration,
                map: sphere_to_disk_capped(n, field, cap)?,
            });
            j.push(Generator {
                name: format!("triv-cof-{n}"),
                kind: GeneratorKind::TrivialCofibration,
                map: from_zero(&Arc::new(ChainComplex::disk_capped(n, field, cap)?)),
            });
        }
        Ok(GeneratingSets { field, bound, cap, i, j })
    }

    /// `I` followed by `J`.
    pub fn all(&self) -> impl Iterator<Item = &Generator> {
        self.i.iter().chain(&self.j)
    }

    pub fn find(&self, name: &str) -> Option<&Generator> {
        self.all().find(|g| g.name == name)
    }
}

/// `f □ g: (K ⊗ L') ⊔_{K ⊗ K'} (L ⊗ K') → L ⊗ L'`, with the pushout it is built on.
pub fn pushout_product(f: &ChainMap, g: &ChainMap) -> Result<(Pushout, ChainMap)> {
    let id_k = ChainMap::identity(f.source().clone());
    let id_l = ChainMap::identity(f.target().clone());
    let id_k2 = ChainMap::identity(g.source().clone());
    let id_l2 = ChainMap::identity(g.target().clone());
    let po = pushout(&tensor_map(f, &id_k2)?, &tensor_map(&id_k, g)?)?;
    let map = po.descend(&tensor_map(&id_l, g)?, &tensor_map(f, &id_l2)?)?;
    Ok((po, map))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{classify, Verdict};

    #[test]
    fn generators_classify() {
        for field in [Field::Rational, Field::Prime(2)] {
            let gs = GeneratingSets::new(field, 3).unwrap();
            assert_eq!(gs.i.len(), 4);
            assert_eq!(gs.j.len(), 3);
            for g in gs.all() {
                let v = classify(&g.map).unwrap().verdict;
                let want = if g.is_trivial() { Verdict::TrivialCofibration } else { Verdict::Cofibration };
                assert_eq!(v, want, "{}", g.name);
            }
        }
    }

    #[test]
    fn unit_is_neutral() {
        let gs = GeneratingSets::new(Field::Rational, 2).unwrap();
        let unit = &gs.find("gen-cof-unit").unwrap().map;
        let f = &gs.find("gen-cof-1-2").unwrap().map;
        let (po, m) = pushout_product(unit, f).unwrap();
        assert_eq!(po.object.dims(), f.source().dims());
        assert_eq!(m.target().dims(), f.target().dims());
        assert_eq!(classify(&m).unwrap().verdict, Verdict::Cofibration);
    }
}
