//! Verification suites behind `verify`. Every suite returns rows with the
//! columns of [`VERIFY_COLUMNS`]; a row passes when `error <= tolerance`.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::output::{Cell, Table};
use crate::bounds::{
    admissibility_default, bray_miao_bound, max_capacity_round, round_data_to_schwarzschild,
    schwarzschild_bartnik_data, BartnikDataRound,
};
use crate::constructions::{collar_capacity_bound, CollarParams};
use crate::error::Result;
use crate::geometry::{RadialMetric, SchwarzschildParams};
use crate::harmonicstatic::{
    cartesian_linear_field_check, example_flat, example_schwarzschild, example_sphere, linear_grid,
    scalar_constancy_check, trace_identity_residual, CartesianVariant, HSPotential,
};
use crate::potential::{capacity_quadrature, CapacitaryPotential};
use crate::quadrature::Quadrature;
use crate::variation::{flow_variation, gradient_check, random_perturbation, MetricPerturbation, PerturbationKind};

pub const VERIFY_COLUMNS: [&str; 7] = ["suite", "case", "value", "reference", "error", "tolerance", "pass"];

/// Relative tolerance for finite differences against the gradient pairing.
pub const GRADIENT_TOL: f64 = 1e-6;
pub const FLOW_TOL: f64 = 1e-8;
pub const CHAIN_TOL: f64 = 1e-9;
pub const INVERSION_TOL: f64 = 1e-10;
pub const COLLAR_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy)]
pub struct Settings {
    pub quad: Quadrature,
    pub residual_tol: f64,
    pub fd_delta: f64,
    pub trials: usize,
    pub seed: u64,
}

fn row(suite: &str, case: String, value: f64, reference: f64, error: f64, tolerance: f64) -> Vec<Cell> {
    vec![
        suite.into(),
        case.into(),
        value.into(),
        reference.into(),
        error.into(),
        tolerance.into(),
        (error <= tolerance).into(),
    ]
}

pub fn table_passes(table: &Table) -> bool {
    let Some(idx) = table.columns.iter().position(|c| *c == "pass") else {
        return true;
    };
    table.rows.iter().all(|r| r[idx] == Cell::Bool(true))
}

/// The closed-form harmonic-static pairs with their sample grids.
pub fn golden_pairs() -> Result<Vec<(String, HSPotential, Vec<f64>)>> {
    let mut out = Vec::new();
    for r0 in [1.0, 2.0] {
        out.push((
            format!("flat r0={r0}"),
            example_flat(r0, 0.0)?,
            linear_grid(r0, 20.0 * r0, 200),
        ));
    }
    for m in [-1.0, 1.0, 2.0] {
        for c in [0.0, 1.0, -3.0] {
            out.push((
                format!("schwarzschild m={m} r0=1 C={c}"),
                example_schwarzschild(SchwarzschildParams::new(m, 1.0)?, c)?,
                linear_grid(1.0, 20.0, 200),
            ));
        }
    }
    for c in [0.0, 2.0] {
        out.push((format!("sphere C={c}"), example_sphere(c)?, linear_grid(-1.2, 1.2, 200)));
    }
    Ok(out)
}

pub fn examples(s: &Settings) -> Result<Table> {
    let mut t = Table::new(&VERIFY_COLUMNS);
    for (case, pair, grid) in golden_pairs()? {
        let sup = pair.residual(&grid)?.sup_norm;
        t.push(row("examples", case, sup, 0.0, sup, s.residual_tol));
    }
    let points: Vec<[f64; 3]> = (0..27)
        .map(|k| {
            let c = |i: usize| -2.0 + 2.0 * i as f64;
            [c(k % 3), c((k / 3) % 3), c(k / 9)]
        })
        .collect();
    let cart = cartesian_linear_field_check(&points, CartesianVariant::Full);
    t.push(row("examples", "cartesian phi=z".into(), cart, 0.0, cart, 0.0));
    Ok(t)
}

/// Seeded perturbations, alternating between the two kinds.
pub fn seeded_perturbations(seed: u64, trials: usize, r0: f64) -> Vec<MetricPerturbation> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials)
        .map(|i| {
            let p = random_perturbation(&mut rng, r0);
            let kind = if i % 2 == 0 {
                PerturbationKind::Conformal
            } else {
                PerturbationKind::RadialRR
            };
            MetricPerturbation { kind, ..p }
        })
        .collect()
}

pub fn gradient(s: &Settings) -> Result<Table> {
    let backgrounds = [
        ("flat", SchwarzschildParams::new(0.0, 1.0)?),
        ("schwarzschild m=2", SchwarzschildParams::new(2.0, 1.0)?),
    ];
    let mut cases = Vec::new();
    for (name, params) in backgrounds {
        let pot = CapacitaryPotential::schwarzschild_closed_form(params, s.quad)?;
        for (i, h) in seeded_perturbations(s.seed, s.trials, params.r0).into_iter().enumerate() {
            cases.push((name, i, pot.clone(), h));
        }
    }
    let rows = cases
        .par_iter()
        .map(|(name, i, pot, h)| {
            let check = gradient_check(pot, h, s.fd_delta, &s.quad)?;
            let kind = match h.kind {
                PerturbationKind::Conformal => "conformal",
                PerturbationKind::RadialRR => "radial",
            };
            let case = format!(
                "{name} #{i} {kind} [{:.4}, {:.4}] amp {:.4}",
                h.profile.r_a, h.profile.r_b, h.profile.amplitude
            );
            Ok(row("gradient", case, check.fd, check.pairing, check.rel_error, GRADIENT_TOL))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut t = Table::new(&VERIFY_COLUMNS);
    rows.into_iter().for_each(|r| t.push(r));
    Ok(t)
}

pub fn flow(s: &Settings) -> Result<Table> {
    let mut t = Table::new(&VERIFY_COLUMNS);
    for m in [-1.0, 0.0, 2.0] {
        let metric = RadialMetric::schwarzschild(SchwarzschildParams::new(m, 1.0)?)?;
        for r in [1.0, 2.0, 5.0] {
            let v = flow_variation(&metric, r, &s.quad)?;
            t.push(row("flow", format!("m={m} r={r}"), v, 1.0, (v - 1.0).abs(), FLOW_TOL));
        }
    }
    Ok(t)
}

pub fn trace(s: &Settings) -> Result<Table> {
    let mut t = Table::new(&VERIFY_COLUMNS);
    for (case, pair, grid) in golden_pairs()? {
        let mut worst: f64 = 0.0;
        for &r in &grid {
            worst = worst.max(trace_identity_residual(&pair.metric, &pair.phi, &pair.u, r)?);
        }
        t.push(row("trace", format!("trace identity {case}"), worst, 0.0, worst, s.residual_tol));
    }
    let scalar_cases = [
        ("flat", RadialMetric::flat(1.0)?, 0.0, linear_grid(1.0, 50.0, 200)),
        (
            "schwarzschild m=2",
            RadialMetric::schwarzschild(SchwarzschildParams::new(2.0, 1.0)?)?,
            0.0,
            linear_grid(1.0, 50.0, 200),
        ),
        (
            "schwarzschild m=-1",
            RadialMetric::schwarzschild(SchwarzschildParams::new(-1.0, 1.0)?)?,
            0.0,
            linear_grid(1.0, 50.0, 200),
        ),
        ("sphere band", RadialMetric::unit_sphere_band(-1.2, 1.2)?, 6.0, linear_grid(-1.2, 1.2, 200)),
    ];
    for (case, metric, expected, grid) in scalar_cases {
        let c = scalar_constancy_check(&metric, &grid)?;
        let err = c.max_deviation.max((c.mean - expected).abs());
        t.push(row("trace", format!("scalar curvature {case}"), c.mean, expected, err, s.residual_tol));
    }
    Ok(t)
}

pub fn bounds(s: &Settings) -> Result<Table> {
    let mut t = Table::new(&VERIFY_COLUMNS);
    let grid: Vec<(f64, f64)> = [-1.0, -0.5, 0.0, 1.0, 2.0]
        .iter()
        .flat_map(|&m| [1.0, 1.5, 2.0, 3.0, 5.0].map(|r0| (m, r0)))
        .collect();
    let rows = grid
        .par_iter()
        .map(|&(m, r0)| -> Result<Vec<Vec<Cell>>> {
            let p = SchwarzschildParams::new(m, r0)?;
            let data = schwarzschild_bartnik_data(p)?;
            let exact = p.capacity();
            let bm = bray_miao_bound(&data)?;
            let mc = max_capacity_round(&data)?;
            let cap = capacity_quadrature(&RadialMetric::schwarzschild(p)?, &s.quad)?;
            let chain = (bm - exact).abs().max((mc - exact).abs()).max((cap - exact).abs());
            let inv = round_data_to_schwarzschild(&data)?;
            let back = schwarzschild_bartnik_data(inv)?;
            let trip = ((back.area - data.area) / data.area)
                .abs()
                .max((back.h - data.h).abs() / (1.0 + data.h));
            Ok(vec![
                row("bounds", format!("equality chain m={m} r0={r0}"), mc, exact, chain, CHAIN_TOL),
                row("bounds", format!("inversion m={m} r0={r0}"), inv.capacity(), exact, trip, INVERSION_TOL),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    rows.into_iter().flatten().for_each(|r| t.push(r));

    let schw = RadialMetric::schwarzschild(SchwarzschildParams::new(2.0, 1.0)?)?;
    let flat = RadialMetric::flat(1.0)?;
    let admissible_cases = [
        ("schwarzschild m=2 vs (64pi, 0)", &schw, BartnikDataRound::new(64.0 * PI, 0.0)?, true),
        ("schwarzschild m=2 vs (64pi, 0.5)", &schw, BartnikDataRound::new(64.0 * PI, 0.5)?, true),
        ("flat vs (4pi, 1)", &flat, BartnikDataRound::new(4.0 * PI, 1.0)?, false),
    ];
    for (case, metric, data, expected) in admissible_cases {
        let rep = admissibility_default(metric, &data)?;
        let mismatch = if rep.admissible == expected { 0.0 } else { 1.0 };
        t.push(row(
            "bounds",
            format!("admissibility {case} expect {expected}"),
            rep.boundary_h,
            rep.target_h,
            mismatch,
            0.0,
        ));
    }
    Ok(t)
}

/// Energy of the collar test function by quadrature, independent of the
/// closed form.
fn collar_energy(p: &CollarParams, quad: &Quadrature) -> Result<f64> {
    let est = quad.integrate(|t| 4.0 / p.a_lapse * (1.0 + p.eps * t * t) * p.area, 0.0, 0.5)?;
    Ok(est.value / (4.0 * PI))
}

pub fn collar(s: &Settings) -> Result<Table> {
    let mut t = Table::new(&VERIFY_COLUMNS);
    let lapses = [10.0, 1e2, 1e3, 1e4];
    let mut values = Vec::new();
    for a in lapses {
        let p = CollarParams::new(a, 0.1, 4.0 * PI)?;
        let b = collar_capacity_bound(&p)?;
        let e = collar_energy(&p, &s.quad)?;
        t.push(row("collar", format!("bound A={a}"), b, e, (b - e).abs() / e, COLLAR_TOL));
        values.push(b);
    }
    for (w, a) in values.windows(2).zip(lapses.windows(2)) {
        let slope = (w[1].ln() - w[0].ln()) / (a[1].ln() - a[0].ln());
        t.push(row(
            "collar",
            format!("log slope A={}..{}", a[0], a[1]),
            slope,
            -1.0,
            (slope + 1.0).abs(),
            COLLAR_TOL,
        ));
    }
    Ok(t)
}
