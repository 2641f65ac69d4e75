//! The `cmonv` command line: runs axiom suites, filtrations and probes, prints reports and
//! compares verdicts against the shipped manifest.
//!
//! Exit codes: 0 when every verdict matches the manifest, 2 on an unexpected verdict,
//! 1 on usage, fixture or internal errors.

mod manifest;
mod named;

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use cmonv::axioms::{
    check_bracketing, check_lurie_axiom_sigma2, check_pushout_product_axiom, check_strong_cmon_axiom, check_sym_trivial,
    closure_suite, monoid_axiom_probe, rectification_probe, standard_fixtures, weak_cmon_probe, ClosureConfig,
    GeneratingSets, MAX_TRIALS,
};
use cmonv::chain::is_quasi_iso;
use cmonv::filtration::{build_filtration, compare_to_relative_tensor, homotopy_check, monoid_structure_check};
use cmonv::fixture::Fixtures;
use cmonv::guard::set_dimension_guard;
use cmonv::report::{AxiomReport, Outcome};
use cmonv::{Error, Field};

pub use manifest::Manifest;
use named::Library;

#[derive(Parser, Debug)]
#[command(name = "cmonv", version, about = "Exact checks of monoidal model category axioms for chain complexes over a field")]
pub struct Cli {
    #[command(flatten)]
    pub cfg: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Coefficient field: q, f2, f3, f5, ...
    #[arg(long, global = true, default_value = "q", value_parser = parse_field)]
    pub field: Field,
    /// Largest power n.
    #[arg(long, global = true, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..=4))]
    pub nmax: u64,
    /// Degree cap for all complexes.
    #[arg(long, global = true, default_value_t = 8, value_parser = clap::value_parser!(u64).range(2..=16))]
    pub cap: u64,
    /// Largest disk degree among the generating maps.
    #[arg(long, global = true, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..=4))]
    pub gen_bound: u64,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Largest dimension any single degree may reach.
    #[arg(long, global = true, env = "CMONV_GUARD")]
    pub guard: Option<usize>,
    /// Directory of JSON fixtures whose names become available to --x, --h and --g.
    #[arg(long, global = true)]
    pub fixtures_dir: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Pushout-product, strong commutative monoid, Σ2-projectivity, monoid and bracketing checks.
    Axioms,
    /// Build the pushout tower for Sym L ← Sym K → X and compare with the relative tensor product.
    Filtration {
        /// Monoid: unit, square-zero, square-zero-<d>, or a fixture monoid.
        #[arg(long)]
        x: String,
        /// Map K → L: gen-cof-unit, gen-cof-<a>-<a+1>, triv-cof-<m>, identity-s<k>, or a fixture map.
        #[arg(long)]
        h: String,
        /// Map K → X: zero, eps (bottom class of K to the first class of X there), or a fixture map.
        #[arg(long, default_value = "zero")]
        g: String,
    },
    /// Individual probes.
    Probe {
        #[command(subcommand)]
        which: Probe,
    },
    /// Parse and validate fixture files.
    Validate {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum Probe {
    /// Sym^n of trivial generating cofibrations.
    Sym,
    /// Homotopy orbits against strict orbits of X^{⊗n}.
    Rect {
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(2..=3))]
        n: u64,
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u64).range(1..=6))]
        length: u64,
    },
    /// Random cell chains of J ⊗ Z.
    Monoid {
        #[arg(long, default_value_t = MAX_TRIALS as u64, value_parser = clap::value_parser!(u64).range(1..=MAX_TRIALS as u64))]
        trials: u64,
    },
    /// Retract, pushout, shell, decomposition, Q-bracket and ladder checks.
    Closure {
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(2..=4))]
        shell_max: u64,
    },
}

fn parse_field(s: &str) -> Result<Field, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Captured process output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    fn error(msg: impl std::fmt::Display) -> Output {
        Output { code: 1, stdout: String::new(), stderr: format!("error: {msg}\n") }
    }
}

pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Output { code, stdout: text, stderr: String::new() }
            } else {
                Output { code, stdout: String::new(), stderr: text }
            };
        }
    };
    if let Some(g) = cli.cfg.guard {
        set_dimension_guard(g);
    }
    match execute(&cli) {
        Ok(out) => out,
        Err(e) => Output::error(e),
    }
}

struct Reports {
    command: String,
    reports: Vec<AxiomReport>,
}

fn execute(cli: &Cli) -> Result<Output, Error> {
    let cfg = &cli.cfg;
    let lib = Library::new(cfg)?;
    let reports = match &cli.command {
        Command::Axioms => cmd_axioms(cfg, &lib)?,
        Command::Filtration { x, h, g } => cmd_filtration(cfg, &lib, x, h, g)?,
        Command::Probe { which } => cmd_probe(cfg, &lib, which)?,
        Command::Validate { paths } => return Ok(cmd_validate(paths)),
    };
    Ok(emit(cfg, reports))
}

fn gens(cfg: &RunConfig) -> Result<GeneratingSets, Error> {
    GeneratingSets::with_cap(cfg.field, cfg.gen_bound as usize, cfg.cap as usize)
}

fn timed(f: impl FnOnce() -> AxiomReport) -> AxiomReport {
    let t = Instant::now();
    let mut r = f();
    r.elapsed = Some(t.elapsed());
    r
}

fn cmd_axioms(cfg: &RunConfig, lib: &Library) -> Result<Reports, Error> {
    let gs = gens(cfg)?;
    let n = cfg.nmax as usize;
    let xs = lib.weak_fixtures()?;
    let reports = vec![
        timed(|| check_pushout_product_axiom(&gs)),
        timed(|| check_strong_cmon_axiom(&gs, n)),
        timed(|| check_lurie_axiom_sigma2(&gs)),
        timed(|| monoid_axiom_probe(&gs, MAX_TRIALS, cfg.seed)),
        timed(|| weak_cmon_probe(&gs, &xs, n)),
        timed(|| check_bracketing(&gs, n.min(3))),
    ];
    Ok(Reports { command: "axioms".into(), reports })
}

fn cmd_filtration(cfg: &RunConfig, lib: &Library, x: &str, h: &str, g: &str) -> Result<Reports, Error> {
    let cap = cfg.cap as usize;
    let xm = lib.monoid(x)?;
    let hm = lib.map(h)?;
    let gm = lib.g_map(g, &hm, &xm)?;
    let n_max = cfg.nmax as usize;
    let name = format!("{x}:{h}");
    let fr = build_filtration(&xm, &gm, &hm, n_max, cap)?;
    let comparison = timed(|| compare_to_relative_tensor(&fr, &name));
    let monoid = timed(|| monoid_structure_check(&fr, &name));
    let mut homotopy = timed(|| homotopy_check(&fr, &name));
    // quasi-isomorphism is only claimed when h is one
    if !is_quasi_iso(&hm)? {
        homotopy.cells.retain(|c| c.check == "connecting-mono");
    }
    Ok(Reports { command: "filtration".into(), reports: vec![comparison, monoid, homotopy] })
}

fn cmd_probe(cfg: &RunConfig, lib: &Library, which: &Probe) -> Result<Reports, Error> {
    let field = cfg.field;
    let (command, reports) = match which {
        Probe::Sym => {
            let gs = gens(cfg)?;
            ("probe sym", vec![timed(|| check_sym_trivial(&gs, cfg.nmax as usize))])
        }
        Probe::Rect { n, length } => {
            let mut xs = standard_fixtures(field, cfg.cap as usize)?;
            xs.extend(lib.complexes());
            let reports = xs.iter().map(|(name, x)| timed(|| rectification_probe(field, x, name, *n as usize, *length as usize))).collect();
            ("probe rect", reports)
        }
        Probe::Monoid { trials } => {
            let gs = gens(cfg)?;
            ("probe monoid", vec![timed(|| monoid_axiom_probe(&gs, *trials as usize, cfg.seed))])
        }
        Probe::Closure { shell_max } => {
            let gs = gens(cfg)?;
            let c = ClosureConfig { shell_max: *shell_max as usize, cube_max: (cfg.nmax as usize).clamp(2, 3) };
            ("probe closure", vec![timed(|| closure_suite(&gs, cfg.seed, c))])
        }
    };
    Ok(Reports { command: command.into(), reports })
}

fn cmd_validate(paths: &[PathBuf]) -> Output {
    let mut stdout = String::new();
    let mut stderr = String::new();
    let mut code = 0;
    for p in paths {
        match Fixtures::load(p) {
            Ok(f) => stdout.push_str(&format!(
                "ok {}: {} complexes, {} maps, {} monoids over {}\n",
                p.display(),
                f.complexes.len(),
                f.maps.len(),
                f.monoids.len(),
                f.field
            )),
            Err(e) => {
                code = 1;
                stderr.push_str(&format!("invalid {e}\n"));
            }
        }
    }
    Output { code, stdout, stderr }
}

fn emit(cfg: &RunConfig, r: Reports) -> Output {
    let manifest = Manifest::shipped();
    let unexpected: Vec<String> = r.reports.iter().flat_map(|rep| manifest.mismatches(rep)).collect();
    let bug = r.reports.iter().any(|rep| rep.cells.iter().any(|c| c.verdict == Outcome::InvariantViolated));
    let (code, verdict) = match (bug, unexpected.is_empty()) {
        (true, _) => (1, "error"),
        (false, false) => (2, "unexpected"),
        (false, true) => (0, "match"),
    };
    let stdout = match cfg.format {
        Format::Json => {
            let doc = json!({
                "command": r.command,
                "field": cfg.field,
                "config": {
                    "nmax": cfg.nmax,
                    "cap": cfg.cap,
                    "gen_bound": cfg.gen_bound,
                    "seed": cfg.seed,
                },
                "reports": r.reports,
                "unexpected": unexpected,
                "verdict": verdict,
            });
            serde_json::to_string_pretty(&doc).expect("report serializes") + "\n"
        }
        Format::Text => {
            let mut s: String = r.reports.iter().map(AxiomReport::to_text).collect();
            for u in &unexpected {
                s.push_str(&format!("UNEXPECTED {u}\n"));
            }
            s.push_str(&format!("verdicts: {verdict}\n"));
            s
        }
    };
    let stderr = if bug { "error: a check broke an internal invariant (cells marked BUG)\n".to_string() } else { String::new() };
    Output { code, stdout, stderr }
}
