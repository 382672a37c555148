//! Round Bartnik data: the Bray–Miao upper bound, the maximal capacity of
//! rotationally symmetric extensions, and the Schwarzschild data map and its
//! inverse.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::geometry::{RadialMetric, SchwarzschildParams};

/// Round boundary data `(area, H)` with constant mean curvature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BartnikDataRound {
    pub area: f64,
    pub h: f64,
}

impl BartnikDataRound {
    pub fn new(area: f64, h: f64) -> Result<Self> {
        let data = BartnikDataRound { area, h };
        data.validate()?;
        Ok(data)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.area.is_finite() && self.area > 0.0) {
            return Err(invalid(format!("area must be positive, got {}", self.area)));
        }
        if !(self.h.is_finite() && self.h >= 0.0) {
            return Err(invalid(format!("mean curvature must be nonnegative, got {}", self.h)));
        }
        Ok(())
    }

    /// `√(area / 16π)`.
    pub fn half_area_radius(&self) -> f64 {
        (self.area / (16.0 * PI)).sqrt()
    }

    /// Areal radius `√(area / 4π)`.
    pub fn areal_radius(&self) -> f64 {
        (self.area / (4.0 * PI)).sqrt()
    }
}

/// `√(area/16π) (1 + √(∫H^2 dA / 16π))` for an arbitrary mean curvature,
/// given its squared integral.
pub fn bray_miao_bound_integral(area: f64, h_sq_integral: f64) -> f64 {
    (area / (16.0 * PI)).sqrt() * (1.0 + (h_sq_integral / (16.0 * PI)).sqrt())
}

pub fn bray_miao_bound(data: &BartnikDataRound) -> Result<f64> {
    data.validate()?;
    Ok(bray_miao_bound_integral(data.area, data.h * data.h * data.area))
}

/// `√(area/16π) (1 + H √(area/16π))`.
pub fn max_capacity_round(data: &BartnikDataRound) -> Result<f64> {
    data.validate()?;
    let s = data.half_area_radius();
    Ok(s * (1.0 + data.h * s))
}

/// Area and mean curvature of the Schwarzschild sphere at `r0`.
pub fn schwarzschild_bartnik_data(params: SchwarzschildParams) -> Result<BartnikDataRound> {
    params.validate()?;
    let SchwarzschildParams { m, r0 } = params;
    let w = 1.0 + m / (2.0 * r0);
    let area = 4.0 * PI * r0 * r0 * w.powi(4);
    let h = 2.0 * (1.0 - m / (2.0 * r0)) / (r0 * w.powi(3));
    // rounding can leave a horizon at -0.0 or -1e-17
    BartnikDataRound::new(area, h.max(0.0))
}

const NEWTON_MAX_ITER: usize = 200;
const NEWTON_TARGET: f64 = 1e-13;

/// Areal radius and mean curvature as functions of `(m, r0)`, with their
/// Jacobian rows.
fn data_map(m: f64, r0: f64) -> ([f64; 2], [[f64; 2]; 2]) {
    let p = r0 + 0.5 * m;
    let q = r0 - 0.5 * m;
    let rho = p * p / r0;
    let h = 2.0 * r0 * q / p.powi(3);
    let drho = [p / r0, 2.0 * p / r0 - p * p / (r0 * r0)];
    let dh = [
        -r0 / p.powi(3) - 3.0 * r0 * q / p.powi(4),
        2.0 * q / p.powi(3) + 2.0 * r0 / p.powi(3) - 6.0 * r0 * q / p.powi(4),
    ];
    ([rho, h], [drho, dh])
}

/// Scaled residual: relative areal radius and `H` in units of the target
/// areal radius.
fn scaled_residual(m: f64, r0: f64, rho_t: f64, h_t: f64) -> [f64; 2] {
    let ([rho, h], _) = data_map(m, r0);
    [rho / rho_t - 1.0, (h - h_t) * rho_t]
}

fn norm(v: [f64; 2]) -> f64 {
    v[0].abs().max(v[1].abs())
}

fn admissible_params(m: f64, r0: f64) -> bool {
    r0 > 0.0 && r0 + 0.5 * m > 0.0 && r0 - 0.5 * m >= 0.0
}

/// Schwarzschild parameters whose sphere at `r0` carries the given data, by
/// damped Newton iteration from flat data.
pub fn round_data_to_schwarzschild(data: &BartnikDataRound) -> Result<SchwarzschildParams> {
    data.validate()?;
    let rho_t = data.areal_radius();
    let h_t = data.h;
    // H is only representable to a few ulps of H ρ
    let target = NEWTON_TARGET * (1.0 + h_t * rho_t);
    let (mut m, mut r0) = (0.0, rho_t);
    let mut res = scaled_residual(m, r0, rho_t, h_t);
    for _ in 0..NEWTON_MAX_ITER {
        if norm(res) <= target {
            return SchwarzschildParams::new(m, r0);
        }
        let (_, [drho, dh]) = data_map(m, r0);
        // Jacobian of the scaled residual
        let j = [
            [drho[0] / rho_t, drho[1] / rho_t],
            [dh[0] * rho_t, dh[1] * rho_t],
        ];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if !(det.is_finite() && det != 0.0) {
            break;
        }
        let dm = (-res[0] * j[1][1] + res[1] * j[0][1]) / det;
        let dr = (-res[1] * j[0][0] + res[0] * j[1][0]) / det;
        let mut lambda = 1.0;
        let mut accepted = false;
        while lambda > 1e-12 {
            let (m_new, r_new) = (m + lambda * dm, r0 + lambda * dr);
            if admissible_params(m_new, r_new) {
                let trial = scaled_residual(m_new, r_new, rho_t, h_t);
                if norm(trial) < norm(res) {
                    m = m_new;
                    r0 = r_new;
                    res = trial;
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    if norm(res) <= target {
        return SchwarzschildParams::new(m, r0);
    }
    Err(Error::Newton {
        iterations: NEWTON_MAX_ITER,
        residual: norm(res),
    })
}

pub const ADMISSIBILITY_GRID_SIZE: usize = 512;
pub const ADMISSIBILITY_TOL: f64 = 1e-10;
pub const AREA_MATCH_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdmissibilityReport {
    pub min_scalar_curvature: f64,
    pub boundary_h: f64,
    pub target_h: f64,
    pub admissible: bool,
}

/// `n` radii from `r0`, log-spaced when `r0 > 0`. Asymptotically flat metrics
/// are sampled out to `10^4 r0`.
pub fn admissibility_grid(metric: &RadialMetric, n: usize) -> Vec<f64> {
    let lo = metric.r0();
    let hi = if metric.is_asymptotically_flat() {
        1e4 * lo.abs().max(1.0) + lo
    } else {
        metric.r1()
    };
    let n = n.max(2);
    (0..n)
        .map(|k| {
            let t = k as f64 / (n - 1) as f64;
            if lo > 0.0 {
                lo * (hi / lo).powf(t)
            } else {
                lo + (hi - lo) * t
            }
        })
        .collect()
}

/// Check nonnegative scalar curvature on `grid` and the boundary condition
/// `H_∂M ≤ H`, after checking the boundary area matches the data.
pub fn admissibility(
    metric: &RadialMetric,
    data: &BartnikDataRound,
    grid: &[f64],
    tol: f64,
) -> Result<AdmissibilityReport> {
    data.validate()?;
    let metric_area = metric.sphere_area(metric.r0());
    if ((metric_area - data.area) / data.area).abs() > AREA_MATCH_TOL {
        return Err(Error::BoundaryMismatch {
            metric_area,
            data_area: data.area,
        });
    }
    if grid.is_empty() {
        return Err(invalid("empty admissibility grid"));
    }
    let mut min_r = f64::INFINITY;
    for &r in grid {
        min_r = min_r.min(metric.curvature(r)?.scalar);
    }
    let boundary_h = metric.mean_curvature(metric.r0())?;
    let admissible = min_r >= -tol && boundary_h <= data.h + tol;
    Ok(AdmissibilityReport {
        min_scalar_curvature: min_r,
        boundary_h,
        target_h: data.h,
        admissible,
    })
}

/// [`admissibility`] with the default grid and tolerance.
pub fn admissibility_default(metric: &RadialMetric, data: &BartnikDataRound) -> Result<AdmissibilityReport> {
    let grid = admissibility_grid(metric, ADMISSIBILITY_GRID_SIZE);
    admissibility(metric, data, &grid, ADMISSIBILITY_TOL)
}
