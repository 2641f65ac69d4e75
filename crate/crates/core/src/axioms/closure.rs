use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::generators::GeneratingSets;
use super::random::{random_complex, random_point};
use crate::chain::{pushout, ChainMap, DirectSum};
use crate::cube::{
    composition_ladder_check, decomposition_check, pushout_closure_check, q_bracket_tower, retract_check, shell_pushout_verify,
    Retract,
};
use crate::error::{Error, Result};
use crate::report::{AxiomReport, Cell};
use crate::standard::from_zero;

/// Sizes for the closure suite.
#[derive(Clone, Copy, Debug)]
pub struct ClosureConfig {
    /// Largest arity for the shell pushouts.
    pub shell_max: usize,
    /// Largest arity for decompositions, Q-bracket towers and ladders.
    pub cube_max: usize,
}

impl Default for ClosureConfig {
    fn default() -> Self {
        ClosureConfig { shell_max: 4, cube_max: 3 }
    }
}

fn find<'a>(gs: &'a GeneratingSets, name: &str) -> Result<&'a ChainMap> {
    gs.find(name).map(|g| &g.map).ok_or_else(|| Error::OutOfRange(format!("generator {name} needs a larger bound")))
}

/// `f ⊕ g` as a map of direct sums.
fn sum_map(f: &ChainMap, g: &ChainMap) -> Result<(DirectSum, DirectSum, ChainMap)> {
    let field = f.field();
    let s = DirectSum::new(field, &[f.source().clone(), g.source().clone()])?;
    let t = DirectSum::new(field, &[f.target().clone(), g.target().clone()])?;
    let m = s.copair(t.complex.clone(), &[&t.injections[0].compose(f)?, &t.injections[1].compose(g)?])?;
    Ok((s, t, m))
}

/// Composable pairs `K → L → M` of cofibrations.
fn pairs(gs: &GeneratingSets) -> Result<Vec<(String, ChainMap, ChainMap)>> {
    let mut out = vec![("gen-cof-unit,gen-cof-0-1".to_string(), find(gs, "gen-cof-unit")?.clone(), find(gs, "gen-cof-0-1")?.clone())];
    if let Ok(g) = find(gs, "gen-cof-1-2") {
        out.push(("0-S(1),gen-cof-1-2".into(), from_zero(g.source()), g.clone()));
    }
    Ok(out)
}

/// Closure of `{f^{□n}/Σ_n}` under retracts, pushouts and compositions, checked step by step
/// on generators and seeded random attaching maps.
pub fn closure_suite(gs: &GeneratingSets, seed: u64, cfg: ClosureConfig) -> AxiomReport {
    let mut report = AxiomReport::new("closure", gs.field)
        .param("seed", seed)
        .param("shell_max", cfg.shell_max)
        .param("cube_max", cfg.cube_max);
    let field = gs.field;
    let jobs: Vec<Box<dyn Fn() -> Vec<Cell> + Send + Sync + '_>> = {
        let mut v: Vec<Box<dyn Fn() -> Vec<Cell> + Send + Sync + '_>> = Vec::new();
        v.push(Box::new(move || {
            let result = (|| {
                let f = find(gs, "gen-cof-0-1")?;
                let g2 = find(gs, "gen-cof-unit")?;
                let (s, t, g) = sum_map(f, g2)?;
                let r = Retract {
                    f,
                    g: &g,
                    include: (&s.injections[0], &t.injections[0]),
                    retract: (&s.projections[0], &t.projections[0]),
                };
                retract_check(&r, 2)
            })();
            vec![Cell::from_check("retract", "gen-cof-0-1 ⊂ gen-cof-0-1 ⊕ gen-cof-unit", Some(2), result)]
        }));
        v.push(Box::new(move || {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let result = (|| {
                let f = find(gs, "gen-cof-0-1")?;
                let z = Arc::new(random_complex(&mut rng, field, f.source().cap(), 2)?);
                let phi = random_point(&mut rng, f.source(), &z)?;
                pushout_closure_check(f, &phi, 2)
            })();
            vec![Cell::from_check("pushout", "gen-cof-0-1 along S(0) → Z", Some(2), result)]
        }));
        for g in gs.i.iter().filter(|g| g.name == "gen-cof-unit" || g.name == "gen-cof-0-1" || g.name == "gen-cof-1-2") {
            for n in 2..=cfg.shell_max {
                for q in 1..=n {
                    v.push(Box::new(move || {
                        let r = shell_pushout_verify(&g.map, n, q, &format!("{} q={q}", g.name));
                        r.cells.into_iter().map(|mut c| {
                            c.check = format!("shell-{}", c.check);
                            c
                        }).collect()
                    }));
                }
            }
        }
        match pairs(gs) {
            Ok(ps) => {
                for (name, f, g) in ps {
                    let name2 = name.clone();
                    let (f2, g2) = (f.clone(), g.clone());
                    v.push(Box::new(move || {
                        let mut cells = Vec::new();
                        for n in 2..=cfg.cube_max {
                            for q in 1..n {
                                cells.extend(prefixed(decomposition_check(&f2, &g2, n, q, &format!("{name2} q={q}"))));
                            }
                        }
                        cells
                    }));
                    v.push(Box::new(move || {
                        let mut cells = Vec::new();
                        for n in 2..=cfg.cube_max {
                            match q_bracket_tower(&f, &g, n, &name) {
                                Ok(t) => cells.extend(prefixed(t.report)),
                                Err(e) => cells.push(Cell::from_check("q-bracket-tower", &name, Some(n), Err(e))),
                            }
                        }
                        cells
                    }));
                }
            }
            Err(e) => v.push(Box::new(move || vec![Cell::from_check("pairs", "config", None, Err(e.clone()))])),
        }
        v.push(Box::new(move || {
            let chain = (|| {
                let f1 = find(gs, "gen-cof-unit")?.clone();
                let f2 = find(gs, "gen-cof-0-1")?.clone();
                let f3 = pushout(&f2, &f2)?.in_b;
                Ok(vec![f1, f2, f3])
            })();
            match chain {
                Ok(fs) => (2..=cfg.cube_max)
                    .flat_map(|n| prefixed(composition_ladder_check(&fs, n, "unit,gen-cof-0-1,D(1)→D(1)⊔D(1)")))
                    .collect(),
                Err(e) => vec![Cell::from_check("composition-ladder", "chain", None, Err(e))],
            }
        }));
        v
    };
    report.cells = jobs.par_iter().map(|job| job()).collect::<Vec<_>>().into_iter().flatten().collect();
    report
}

fn prefixed(r: AxiomReport) -> Vec<Cell> {
    let axiom = r.axiom;
    r.cells
        .into_iter()
        .map(|mut c| {
            c.check = format!("{axiom}/{}", c.check);
            c
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Field;

    #[test]
    fn small_suite_passes() {
        let gs = GeneratingSets::new(Field::Prime(2), 2).unwrap();
        let r = closure_suite(&gs, 3, ClosureConfig { shell_max: 2, cube_max: 2 });
        assert!(r.passed(), "{}", r.to_text());
        assert!(r.cells.len() > 10);
    }
}
