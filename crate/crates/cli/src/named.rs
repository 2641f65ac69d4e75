//! Built-in and fixture-provided objects looked up by name.

use std::collections::BTreeMap;
use std::sync::Arc;

use cmonv::chain::{ChainComplex, ChainMap};
use cmonv::fixture::Fixtures;
use cmonv::linalg::Matrix;
use cmonv::standard::{from_zero, sphere_to_disk_capped};
use cmonv::sym::{square_zero, unit_monoid, CommutativeMonoidObject};
use cmonv::{Error, Field};

use crate::RunConfig;

pub struct Library {
    field: Field,
    cap: usize,
    fixtures: Vec<Fixtures>,
}

fn number(s: &str, what: &str) -> Result<usize, Error> {
    s.parse().map_err(|_| Error::Parse(format!("{what}: {s:?} is not a degree")))
}

impl Library {
    pub fn new(cfg: &RunConfig) -> Result<Library, Error> {
        let mut fixtures = Vec::new();
        if let Some(dir) = &cfg.fixtures_dir {
            let mut paths: Vec<_> = std::fs::read_dir(dir)
                .map_err(|e| Error::Parse(format!("{}: {e}", dir.display())))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "json"))
                .collect();
            paths.sort();
            for p in paths {
                let f = Fixtures::load(&p)?;
                if f.field == cfg.field {
                    fixtures.push(f);
                }
            }
        }
        Ok(Library { field: cfg.field, cap: cfg.cap as usize, fixtures })
    }

    pub fn complexes(&self) -> Vec<(String, Arc<ChainComplex>)> {
        self.fixtures.iter().flat_map(|f| f.complexes.iter().map(|(k, v)| (k.clone(), v.clone()))).collect()
    }

    /// `X` fixtures for the weak commutative monoid probe.
    pub fn weak_fixtures(&self) -> Result<Vec<(String, Arc<ChainComplex>)>, Error> {
        Ok(vec![
            ("unit".into(), unit_monoid(self.field, self.cap)?.underlying().clone()),
            ("square-zero".into(), square_zero(self.field, 2, self.cap)?.underlying().clone()),
        ])
    }

    pub fn monoid(&self, name: &str) -> Result<CommutativeMonoidObject, Error> {
        if name == "unit" {
            return unit_monoid(self.field, self.cap);
        }
        if name == "square-zero" {
            return square_zero(self.field, 2, self.cap);
        }
        if let Some(d) = name.strip_prefix("square-zero-") {
            return square_zero(self.field, number(d, name)?, self.cap);
        }
        let found: BTreeMap<_, _> = self.fixtures.iter().flat_map(|f| f.monoids.iter()).collect();
        found.get(&name.to_string()).map(|m| (*m).clone()).ok_or_else(|| Error::Parse(format!("unknown monoid {name:?}")))
    }

    pub fn map(&self, name: &str) -> Result<ChainMap, Error> {
        let (field, cap) = (self.field, self.cap);
        if name == "gen-cof-unit" {
            return Ok(from_zero(&Arc::new(ChainComplex::sphere_capped(0, field, cap)?)));
        }
        if let Some(rest) = name.strip_prefix("gen-cof-") {
            let (a, b) = rest.split_once('-').ok_or_else(|| Error::Parse(format!("{name:?}: expected gen-cof-<a>-<a+1>")))?;
            let (a, b) = (number(a, name)?, number(b, name)?);
            if b != a + 1 {
                return Err(Error::Parse(format!("{name:?}: the disk degree must be one more than the sphere degree")));
            }
            return sphere_to_disk_capped(b, field, cap);
        }
        if let Some(m) = name.strip_prefix("triv-cof-") {
            let m = number(m, name)?;
            if m == 0 {
                return Err(Error::Parse(format!("{name:?}: disks start in degree 1")));
            }
            return Ok(from_zero(&Arc::new(ChainComplex::disk_capped(m, field, cap)?)));
        }
        if let Some(k) = name.strip_prefix("identity-s") {
            return Ok(ChainMap::identity(Arc::new(ChainComplex::sphere_capped(number(k, name)?, field, cap)?)));
        }
        self.fixtures
            .iter()
            .find_map(|f| f.maps.get(name).cloned())
            .ok_or_else(|| Error::Parse(format!("unknown map {name:?}")))
    }

    pub fn g_map(&self, name: &str, h: &ChainMap, x: &CommutativeMonoidObject) -> Result<ChainMap, Error> {
        let k = h.source().clone();
        let xu = x.underlying().clone();
        match name {
            "zero" => ChainMap::zero(k, xu),
            "eps" => {
                let b = k.bottom_degree().ok_or_else(|| Error::Parse("eps needs a nonzero source for h".into()))?;
                if xu.dim(b) == 0 {
                    return Err(Error::Parse(format!("eps: the monoid is zero in degree {b}")));
                }
                ChainMap::from_fn(k.clone(), xu.clone(), |d| {
                    let mut m = Matrix::zeros(self.field, xu.dim(d), k.dim(d));
                    if d == b {
                        m.add_int(0, 0, 1);
                    }
                    Ok(m)
                })
            }
            _ => self.map(name),
        }
    }
}
