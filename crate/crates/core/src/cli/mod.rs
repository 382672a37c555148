//! Command-line interface. Exit codes: 0 when every check passes, 1 when a
//! verification fails or a computation breaks down, 2 for invalid input.

pub mod output;
pub mod suites;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::bounds::{
    bray_miao_bound, max_capacity_round, round_data_to_schwarzschild, schwarzschild_bartnik_data,
};
use crate::config::{parse_outer_radius, ConfigFile, Family, MetricSpec, OuterRadius, SpecKind};
use crate::constructions::{
    bump_first_order, collar_capacity_bound, conformal_blowup, strict_h_deformation, zsc_bump_deformation,
    CollarParams,
};
use crate::error::{Error, Result};
use crate::geometry::{RadialMetric, SchwarzschildParams};
use crate::harmonicstatic::{example_flat, example_schwarzschild, example_sphere, linear_grid, solve_hs_ode};
use crate::potential::{capacity_energy, capacity_flux, capacity_quadrature, expansion_coefficient};
use crate::quadrature::{Quadrature, DEFAULT_TOL};
use crate::variation::{Bump, DEFAULT_FD_DELTA};
use output::{emit_rows, Cell, Format, Table};
use suites::{table_passes, Settings};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

/// Environment variable overriding the quadrature tolerance.
pub const TOL_ENV: &str = "CAPAFLAT_TOL";
pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-10;

/// Relative agreement required between capacity routes.
const ROUTE_TOL: f64 = 1e-9;
/// Far-field extrapolation is only accurate to this level.
const EXPANSION_TOL: f64 = 1e-6;
const BLOWUP_TOL: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(name = "capaflat", version, about = "Capacity and harmonic-static checks on radial 3-manifolds")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone, Default)]
pub struct GlobalArgs {
    /// Output format.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write rows to this file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// JSON file with a metric spec and tolerances.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Absolute quadrature tolerance (overridden by CAPAFLAT_TOL).
    #[arg(long, global = true)]
    pub quadrature_tol: Option<f64>,
    /// Pass threshold for harmonic-static residuals.
    #[arg(long, global = true)]
    pub residual_tol: Option<f64>,
    /// Step for finite-difference checks.
    #[arg(long, global = true)]
    pub fd_delta: Option<f64>,
    /// Worker threads for sweeps; output order does not depend on it.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Args, Clone, Default)]
pub struct MetricArgs {
    #[arg(long, value_enum)]
    pub spec: Option<SpecKind>,
    #[arg(long, value_enum)]
    pub family: Option<Family>,
    #[arg(long, allow_negative_numbers = true)]
    pub m: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub r0: Option<f64>,
    /// Outer radius, a number or "inf".
    #[arg(long, value_parser = parse_outer_radius)]
    pub r1: Option<OuterRadius>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConstructionKind {
    Blowup,
    StrictH,
    Bump,
    Collar,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolveExample {
    Flat,
    Schwarzschild,
    Sphere,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Examples,
    Gradient,
    Flow,
    Trace,
    Bounds,
    Collar,
    All,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Capacity of the inner sphere by every available route.
    Capacity {
        #[command(flatten)]
        metric: MetricArgs,
    },
    /// Round-data bounds for Schwarzschild spheres over a parameter sweep.
    Bounds {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_values_t = [-1.0, 0.0, 1.0, 2.0])]
        m: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_values_t = [1.0])]
        r0: Vec<f64>,
    },
    /// Capacity-changing deformations.
    Constructions {
        #[command(flatten)]
        metric: MetricArgs,
        #[arg(long, value_enum, default_value_t = ConstructionKind::All)]
        kind: ConstructionKind,
        /// Blow-up factors; values above 1 are also used for the strict-H deformation.
        #[arg(long, value_delimiter = ',', default_values_t = [0.25, 1.0, 1.01, 1.1, 3.0, 10.0])]
        c: Vec<f64>,
        /// Bump deformation parameters.
        #[arg(long, value_delimiter = ',', default_values_t = [0.01, 0.05])]
        t: Vec<f64>,
        /// Collar lapse amplitudes.
        #[arg(long, value_delimiter = ',', default_values_t = [10.0, 100.0, 1000.0, 10000.0])]
        lapse: Vec<f64>,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        #[arg(long, default_value_t = 4.0 * std::f64::consts::PI)]
        area: f64,
    },
    /// Integrate the harmonic-static ODE from closed-form initial data.
    SolveHs {
        #[arg(long, value_enum, default_value_t = SolveExample::Schwarzschild)]
        example: SolveExample,
        #[arg(long, allow_negative_numbers = true, default_value_t = 2.0)]
        m: f64,
        #[arg(long, default_value_t = 1.0)]
        r0: f64,
        /// Kernel coefficient of the closed form used for initial data.
        #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
        c: f64,
        #[arg(long, allow_negative_numbers = true)]
        start: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        end: Option<f64>,
        #[arg(long, default_value_t = 480)]
        points: usize,
        #[arg(long, default_value_t = 0.01)]
        max_step: f64,
        /// Allowed mismatch against the closed form and compatibility defect.
        #[arg(long, default_value_t = 1e-7)]
        match_tol: f64,
    },
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

/// Resolved settings: defaults, then the config file, then flags, then the
/// environment for the quadrature tolerance.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub metric: MetricSpec,
    pub quadrature_tol: f64,
    pub residual_tol: f64,
    pub fd_delta: f64,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub jobs: Option<usize>,
}

impl RunConfig {
    pub fn resolve(global: &GlobalArgs, metric: Option<&MetricArgs>, env_tol: Option<&str>) -> Result<Self> {
        let file = match &global.config {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        let mut spec = file.metric.clone().unwrap_or_else(|| MetricSpec::flat(1.0));
        if let Some(a) = metric {
            if let Some(s) = a.spec {
                if s != spec.spec {
                    spec = MetricSpec {
                        spec: s,
                        family: None,
                        r0: None,
                        r1: None,
                        table: None,
                        m: 0.0,
                    };
                }
            }
            if a.family.is_some() {
                spec.family = a.family;
            }
            if let Some(m) = a.m {
                spec.m = m;
            }
            if a.r0.is_some() {
                spec.r0 = a.r0;
            }
            if a.r1.is_some() {
                spec.r1 = a.r1;
            }
        }
        let mut quadrature_tol = global.quadrature_tol.or(file.quadrature_tol).unwrap_or(DEFAULT_TOL);
        if let Some(text) = env_tol {
            quadrature_tol = text
                .trim()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("{TOL_ENV}={text:?} is not a number")))?;
        }
        let residual_tol = global.residual_tol.or(file.residual_tol).unwrap_or(DEFAULT_RESIDUAL_TOL);
        let fd_delta = global.fd_delta.or(file.fd_delta).unwrap_or(DEFAULT_FD_DELTA);
        for (name, v) in [
            ("quadrature tolerance", quadrature_tol),
            ("residual tolerance", residual_tol),
            ("finite-difference step", fd_delta),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidInput(format!("{name} must be positive, got {v}")));
            }
        }
        if global.jobs == Some(0) {
            return Err(Error::InvalidInput("--jobs must be at least 1".into()));
        }
        Ok(RunConfig {
            metric: spec,
            quadrature_tol,
            residual_tol,
            fd_delta,
            format: global.format.unwrap_or_default(),
            output: global.output.clone(),
            jobs: global.jobs,
        })
    }

    pub fn quadrature(&self) -> Quadrature {
        Quadrature::with_tol(self.quadrature_tol)
    }
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::InvalidInput(_) | Error::BoundaryMismatch { .. } => EXIT_INVALID,
        _ => EXIT_FAIL,
    }
}

/// Parse arguments, run the command and return the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    let env_tol = std::env::var(TOL_ENV).ok();
    match execute(&cli, env_tol.as_deref()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

fn execute(cli: &Cli, env_tol: Option<&str>) -> Result<i32> {
    let metric_args = match &cli.command {
        Command::Capacity { metric } | Command::Constructions { metric, .. } => Some(metric),
        _ => None,
    };
    let cfg = RunConfig::resolve(&cli.global, metric_args, env_tol)?;
    let table = with_pool(cfg.jobs, || run_command(&cli.command, &cfg))??;
    let pass = table_passes(&table);
    let written = match &cfg.output {
        Some(path) => File::create(path).and_then(|f| {
            let mut w = BufWriter::new(f);
            emit_rows(&table, cfg.format, &mut w)?;
            w.flush()
        }),
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            emit_rows(&table, cfg.format, &mut lock)
        }
    };
    if let Err(e) = written {
        eprintln!("error: writing output: {e}");
        return Ok(EXIT_INVALID);
    }
    if !pass {
        eprintln!("verification failed: see rows with pass = false");
    }
    Ok(if pass { EXIT_PASS } else { EXIT_FAIL })
}

fn with_pool<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    let threads = jobs.unwrap_or(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

pub fn run_command(command: &Command, cfg: &RunConfig) -> Result<Table> {
    let quad = cfg.quadrature();
    match command {
        Command::Capacity { .. } => capacity_table(&cfg.metric, &quad),
        Command::Bounds { m, r0 } => bounds_table(m, r0, &quad),
        Command::Constructions {
            kind,
            c,
            t,
            lapse,
            eps,
            area,
            ..
        } => constructions_table(&cfg.metric, *kind, c, t, lapse, *eps, *area, &quad),
        Command::SolveHs {
            example,
            m,
            r0,
            c,
            start,
            end,
            points,
            max_step,
            match_tol,
        } => solve_hs_table(*example, *m, *r0, *c, *start, *end, *points, *max_step, *match_tol),
        Command::Verify { suite, trials, seed } => {
            let s = Settings {
                quad,
                residual_tol: cfg.residual_tol,
                fd_delta: cfg.fd_delta,
                trials: *trials,
                seed: *seed,
            };
            verify_table(*suite, &s)
        }
    }
}

pub fn verify_table(suite: Suite, s: &Settings) -> Result<Table> {
    Ok(match suite {
        Suite::Examples => suites::examples(s)?,
        Suite::Gradient => suites::gradient(s)?,
        Suite::Flow => suites::flow(s)?,
        Suite::Trace => suites::trace(s)?,
        Suite::Bounds => suites::bounds(s)?,
        Suite::Collar => suites::collar(s)?,
        Suite::All => {
            let mut t = Table::new(&suites::VERIFY_COLUMNS);
            for part in [
                Suite::Examples,
                Suite::Gradient,
                Suite::Flow,
                Suite::Trace,
                Suite::Bounds,
                Suite::Collar,
            ] {
                t.extend(verify_table(part, s)?);
            }
            t
        }
    })
}

const CAPACITY_COLUMNS: [&str; 5] = ["source", "cap", "rel_diff", "tolerance", "pass"];

pub fn capacity_table(spec: &MetricSpec, quad: &Quadrature) -> Result<Table> {
    let metric = spec.build()?;
    let pot = spec.potential(quad)?;
    let reference = capacity_quadrature(&metric, quad)?;
    let mut entries = vec![
        ("quadrature", reference, ROUTE_TOL),
        ("flux", capacity_flux(&pot), ROUTE_TOL),
        ("energy", capacity_energy(&pot, quad)?, ROUTE_TOL),
    ];
    if metric.is_asymptotically_flat() && metric.r0() > 0.0 {
        entries.push(("expansion", expansion_coefficient(&pot)?, EXPANSION_TOL));
    }
    if let Some(p) = spec.schwarzschild_params() {
        entries.push(("closed_form", p.capacity(), ROUTE_TOL));
    }
    let mut t = Table::new(&CAPACITY_COLUMNS);
    for (source, cap, tol) in entries {
        let rel = (cap - reference).abs() / reference.abs();
        t.push(vec![source.into(), cap.into(), rel.into(), tol.into(), (rel <= tol).into()]);
    }
    Ok(t)
}

const BOUNDS_COLUMNS: [&str; 9] = ["m", "r0", "area", "H", "cap", "bray_miao", "max_cap_round", "residual", "pass"];
const BOUNDS_TOL: f64 = 1e-9;

pub fn bounds_table(ms: &[f64], r0s: &[f64], quad: &Quadrature) -> Result<Table> {
    let grid: Vec<(f64, f64)> = ms.iter().flat_map(|&m| r0s.iter().map(move |&r0| (m, r0))).collect();
    let rows = grid
        .par_iter()
        .map(|&(m, r0)| -> Result<Vec<Cell>> {
            let p = SchwarzschildParams::new(m, r0)?;
            let data = schwarzschild_bartnik_data(p)?;
            let cap = capacity_quadrature(&RadialMetric::schwarzschild(p)?, quad)?;
            let bm = bray_miao_bound(&data)?;
            let mc = max_capacity_round(&data)?;
            let inv = round_data_to_schwarzschild(&data)?;
            let exact = p.capacity();
            let residual = [bm, mc, cap, inv.capacity()]
                .iter()
                .map(|v| (v - exact).abs())
                .fold(0.0, f64::max);
            Ok(vec![
                m.into(),
                r0.into(),
                data.area.into(),
                data.h.into(),
                cap.into(),
                bm.into(),
                mc.into(),
                residual.into(),
                (residual <= BOUNDS_TOL).into(),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    let mut t = Table::new(&BOUNDS_COLUMNS);
    rows.into_iter().for_each(|r| t.push(r));
    Ok(t)
}

const CONSTRUCTION_COLUMNS: [&str; 7] = ["kind", "parameter", "before", "after", "reference", "check", "pass"];

/// Rows per construction:
/// - blowup: capacities before/after, reference `c cap`, check `|ratio - c|`;
/// - strict_h: capacities, reference the new boundary mean curvature, check
///   the capacity increase (must be positive);
/// - bump: capacities, reference the first-order prediction, check the
///   increase (must be positive);
/// - collar: closed-form bound, reference `area / (2πA)`, check the
///   relative deviation from the `ε`-corrected value, which must be `ε/12`.
#[allow(clippy::too_many_arguments)]
pub fn constructions_table(
    spec: &MetricSpec,
    kind: ConstructionKind,
    cs: &[f64],
    ts: &[f64],
    lapses: &[f64],
    eps: f64,
    area: f64,
    quad: &Quadrature,
) -> Result<Table> {
    let want = |k: ConstructionKind| kind == ConstructionKind::All || kind == k;
    let mut t = Table::new(&CONSTRUCTION_COLUMNS);
    let needs_metric = want(ConstructionKind::Blowup) || want(ConstructionKind::StrictH) || want(ConstructionKind::Bump);
    let pot = if needs_metric { Some(spec.potential(quad)?) } else { None };
    if let Some(pot) = &pot {
        if want(ConstructionKind::Blowup) {
            let rows = cs
                .par_iter()
                .map(|&c| -> Result<Vec<Cell>> {
                    let r = conformal_blowup(pot, c, quad)?;
                    let check = (r.ratio - c).abs();
                    Ok(vec![
                        "blowup".into(),
                        c.into(),
                        r.cap_before.into(),
                        r.cap_after.into(),
                        (c * r.cap_before).into(),
                        check.into(),
                        (check <= BLOWUP_TOL).into(),
                    ])
                })
                .collect::<Result<Vec<_>>>()?;
            rows.into_iter().for_each(|r| t.push(r));
        }
        if want(ConstructionKind::StrictH) {
            let strict: Vec<f64> = cs.iter().copied().filter(|&c| c > 1.0).collect();
            let rows = strict
                .par_iter()
                .map(|&c| -> Result<Vec<Cell>> {
                    let r = strict_h_deformation(pot, c, quad)?;
                    let margin = r.new_cap - r.cap;
                    Ok(vec![
                        "strict_h".into(),
                        c.into(),
                        r.cap.into(),
                        r.new_cap.into(),
                        r.new_boundary_h.into(),
                        margin.into(),
                        (margin > 0.0).into(),
                    ])
                })
                .collect::<Result<Vec<_>>>()?;
            rows.into_iter().for_each(|r| t.push(r));
        }
        if want(ConstructionKind::Bump) {
            let metric = pot.metric();
            let lo = metric.r0() + 0.25 * (metric.r0().abs().max(1.0));
            let width = if metric.r1().is_finite() {
                0.5 * (metric.r1() - lo)
            } else {
                metric.r0().abs().max(1.0)
            };
            let rho = Bump::new(lo, lo + width, 1.0)?;
            let slope = bump_first_order(pot, rho, quad)?;
            let rows = ts
                .par_iter()
                .map(|&tv| -> Result<Vec<Cell>> {
                    let r = zsc_bump_deformation(metric, rho, tv, quad)?;
                    let margin = r.increase();
                    Ok(vec![
                        "bump".into(),
                        tv.into(),
                        r.cap_0.into(),
                        r.cap_t.into(),
                        (r.cap_0 + tv * slope).into(),
                        margin.into(),
                        (tv <= 0.0 || margin > 0.0).into(),
                    ])
                })
                .collect::<Result<Vec<_>>>()?;
            rows.into_iter().for_each(|r| t.push(r));
        }
    }
    if want(ConstructionKind::Collar) {
        for &a in lapses {
            let p = CollarParams::new(a, eps, area)?;
            let bound = collar_capacity_bound(&p)?;
            let base = area / (2.0 * std::f64::consts::PI * a);
            let check = (bound / base - 1.0 - eps / 12.0).abs();
            t.push(vec![
                "collar".into(),
                a.into(),
                f64::NAN.into(),
                bound.into(),
                base.into(),
                check.into(),
                (check <= 1e-12).into(),
            ]);
        }
    }
    Ok(t)
}

const SOLVE_COLUMNS: [&str; 6] = ["r", "u", "u_closed_form", "abs_error", "defect", "pass"];

#[allow(clippy::too_many_arguments)]
pub fn solve_hs_table(
    example: SolveExample,
    m: f64,
    r0: f64,
    c: f64,
    start: Option<f64>,
    end: Option<f64>,
    points: usize,
    max_step: f64,
    match_tol: f64,
) -> Result<Table> {
    let (pair, default_range) = match example {
        SolveExample::Flat => (example_flat(r0, c)?, (2.0 * r0, 50.0 * r0)),
        SolveExample::Schwarzschild => (
            example_schwarzschild(SchwarzschildParams::new(m, r0)?, c)?,
            (2.0 * r0, 50.0 * r0),
        ),
        SolveExample::Sphere => (example_sphere(c)?, (0.0, 1.2)),
    };
    if points == 0 || !(max_step > 0.0) {
        return Err(Error::InvalidInput("need at least one interval and a positive step".into()));
    }
    let (lo, hi) = (start.unwrap_or(default_range.0), end.unwrap_or(default_range.1));
    let grid = linear_grid(lo, hi, points);
    let sol = solve_hs_ode(&pair.metric, &pair.phi, pair.u(lo), pair.du(lo), &grid, max_step)?;
    let mut t = Table::new(&SOLVE_COLUMNS);
    for ((&r, &u), &d) in grid.iter().zip(&sol.u).zip(&sol.defect) {
        let exact = pair.u(r);
        let err = (u - exact).abs();
        t.push(vec![
            r.into(),
            u.into(),
            exact.into(),
            err.into(),
            d.into(),
            (err <= match_tol && d <= match_tol).into(),
        ]);
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("capaflat").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn negative_mass_parses() {
        let cli = parse(&["capacity", "--spec", "schwarzschild", "--m", "-1", "--r0", "1"]);
        let Command::Capacity { metric } = &cli.command else { panic!() };
        assert_eq!(metric.m, Some(-1.0));
    }

    #[test]
    fn env_overrides_flag() {
        let cli = parse(&["--quadrature-tol", "1e-9", "verify", "flow"]);
        let cfg = RunConfig::resolve(&cli.global, None, Some("1e-11")).unwrap();
        assert_eq!(cfg.quadrature_tol, 1e-11);
        let cfg = RunConfig::resolve(&cli.global, None, None).unwrap();
        assert_eq!(cfg.quadrature_tol, 1e-9);
        assert!(RunConfig::resolve(&cli.global, None, Some("abc")).is_err());
    }

    #[test]
    fn nonpositive_tolerances_rejected() {
        let cli = parse(&["--residual-tol", "0", "verify", "flow"]);
        assert!(RunConfig::resolve(&cli.global, None, None).is_err());
    }

    #[test]
    fn unknown_subcommand_is_invalid_input() {
        assert_eq!(run(["capaflat", "frobnicate"]), EXIT_INVALID);
        assert_eq!(run(["capaflat", "--help"]), EXIT_PASS);
    }

    #[test]
    fn capacity_rows_agree() {
        let t = capacity_table(&MetricSpec::schwarzschild(2.0, 1.0), &Quadrature::default()).unwrap();
        assert!(table_passes(&t));
        let sources: Vec<_> = t.rows.iter().map(|r| r[0].clone()).collect();
        assert!(sources.contains(&Cell::Text("energy".into())));
        assert!(sources.contains(&Cell::Text("expansion".into())));
    }

    #[test]
    fn bounds_sweep_has_one_row_per_mass() {
        let t = bounds_table(&[-1.0, 0.0, 1.0, 2.0], &[1.0], &Quadrature::default()).unwrap();
        assert_eq!(t.rows.len(), 4);
        assert!(table_passes(&t));
    }

    #[test]
    fn constructions_default_sweep_passes() {
        let t = constructions_table(
            &MetricSpec::flat(1.0),
            ConstructionKind::All,
            &[0.25, 1.0, 1.01, 3.0],
            &[0.01, 0.05],
            &[10.0, 100.0],
            0.1,
            4.0 * std::f64::consts::PI,
            &Quadrature::default(),
        )
        .unwrap();
        assert!(table_passes(&t), "{t:?}");
        assert_eq!(t.rows.len(), 4 + 2 + 2 + 2);
    }
}
