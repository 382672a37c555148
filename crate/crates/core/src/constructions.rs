//! Deformations that change capacity in a controlled way: conformal blow-up
//! by `(1 + (c-1)φ)^4`, the same factor used to make the boundary mean
//! curvature strictly larger, a compactly supported conformal bump, and the
//! long-collar estimate showing capacity can be made arbitrarily small.
//!
//! Deformed metrics are general radial metrics, used only for quadrature.

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::geometry::{RadialFn, RadialMetric};
use crate::potential::{capacity_quadrature, CapacitaryPotential};
use crate::quadrature::Quadrature;
use crate::variation::{gradient_pairing, Bump, MetricPerturbation};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlowupResult {
    pub cap_before: f64,
    pub cap_after: f64,
    pub ratio: f64,
}

/// `u_c^4 g` with `u_c = 1 + (c-1)φ`, as a general radial metric.
pub fn conformal_factor_metric(potential: &CapacitaryPotential, c: f64) -> Result<RadialMetric> {
    if !(c.is_finite() && c > 0.0) {
        return Err(invalid(format!("blow-up factor must be positive, got {c}")));
    }
    let metric = potential.metric();
    // c - (c-1)(1-φ) keeps full precision where φ is close to 1
    let uc = {
        let pot = potential.clone();
        move |r: f64| match pot.one_minus_phi(r) {
            Ok(v) => c - (c - 1.0) * v,
            Err(_) => f64::NAN,
        }
    };
    let (ma, mb) = (metric.clone(), metric.clone());
    let (ua, ub) = (uc.clone(), uc);
    let out = RadialMetric::general(
        RadialFn::sampled(move |r| {
            let u = ua(r);
            ma.coefficients(r).0 * u * u
        }),
        RadialFn::sampled(move |r| {
            let u = ub(r);
            mb.coefficients(r).1 * u * u
        }),
        metric.r0(),
        metric.r1(),
    )?;
    Ok(out.with_breakpoints(metric.breakpoints().to_vec()))
}

/// Capacity before and after the conformal change by `(1 + (c-1)φ)^4`; the
/// ratio is exactly `c`.
pub fn conformal_blowup(potential: &CapacitaryPotential, c: f64, quad: &Quadrature) -> Result<BlowupResult> {
    if !potential.metric().is_asymptotically_flat() {
        return Err(invalid("conformal blow-up needs an asymptotically flat metric"));
    }
    let deformed = conformal_factor_metric(potential, c)?;
    let cap_before = potential.cap();
    let cap_after = capacity_quadrature(&deformed, quad)?;
    Ok(BlowupResult {
        cap_before,
        cap_after,
        ratio: cap_after / cap_before,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StrictHResult {
    pub boundary_h: f64,
    pub new_boundary_h: f64,
    pub cap: f64,
    pub new_cap: f64,
}

/// The blow-up with `c > 1`, reporting the new boundary mean curvature
/// `H + 4(c-1) ∂_ν φ` alongside the increased capacity.
pub fn strict_h_deformation(potential: &CapacitaryPotential, c: f64, quad: &Quadrature) -> Result<StrictHResult> {
    if !(c > 1.0) {
        return Err(invalid(format!("strict deformation needs c > 1, got {c}")));
    }
    let metric = potential.metric();
    let r0 = metric.r0();
    let boundary_h = metric.mean_curvature(r0)?;
    let (a0, _) = metric.coefficients(r0);
    let normal_derivative = potential.dphi(r0) / a0;
    let blowup = conformal_blowup(potential, c, quad)?;
    Ok(StrictHResult {
        boundary_h,
        new_boundary_h: boundary_h + 4.0 * (c - 1.0) * normal_derivative,
        cap: blowup.cap_before,
        new_cap: blowup.cap_after,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BumpResult {
    pub cap_0: f64,
    pub cap_t: f64,
}

impl BumpResult {
    pub fn increase(&self) -> f64 {
        self.cap_t - self.cap_0
    }
}

/// `(1 + tρ)^4 g` as a general radial metric.
pub fn bump_metric(metric: &RadialMetric, rho: Bump, t: f64) -> Result<RadialMetric> {
    if rho.amplitude < 0.0 {
        return Err(invalid("bump profile must be nonnegative"));
    }
    if !(1.0 + t * rho.amplitude > 0.0) {
        return Err(invalid(format!(
            "1 + tρ must stay positive (t = {t}, peak {})",
            rho.amplitude
        )));
    }
    let (ma, mb) = (metric.clone(), metric.clone());
    let factor = move |r: f64| {
        let s = 1.0 + t * rho.value(r);
        s * s
    };
    let out = RadialMetric::general(
        RadialFn::sampled(move |r| factor(r) * ma.coefficients(r).0),
        RadialFn::sampled(move |r| factor(r) * mb.coefficients(r).1),
        metric.r0(),
        metric.r1(),
    )?;
    let mut points = metric.breakpoints().to_vec();
    points.extend([rho.r_a, rho.r_b]);
    Ok(out.with_breakpoints(points))
}

/// Capacity of `(1 + tρ)^4 g` against that of `g`.
pub fn zsc_bump_deformation(metric: &RadialMetric, rho: Bump, t: f64, quad: &Quadrature) -> Result<BumpResult> {
    if !(rho.r_a > metric.r0() && rho.r_b < metric.r1()) {
        return Err(invalid(format!(
            "bump support [{}, {}] must lie inside ({}, {})",
            rho.r_a,
            rho.r_b,
            metric.r0(),
            metric.r1()
        )));
    }
    let cap_0 = capacity_quadrature(metric, quad)?;
    let cap_t = if t == 0.0 {
        cap_0
    } else {
        capacity_quadrature(&bump_metric(metric, rho, t)?, quad)?
    };
    Ok(BumpResult { cap_0, cap_t })
}

/// First-order capacity response of the bump, the pairing with `h = 4ρg`.
pub fn bump_first_order(potential: &CapacitaryPotential, rho: Bump, quad: &Quadrature) -> Result<f64> {
    let h = MetricPerturbation::conformal(Bump::new(rho.r_a, rho.r_b, 4.0 * rho.amplitude)?);
    gradient_pairing(potential, &h, quad)
}

/// Collar `A^2 dt^2 + (1 + εt^2) γ` over a round boundary of the given area.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CollarParams {
    pub a_lapse: f64,
    pub eps: f64,
    pub area: f64,
}

impl CollarParams {
    pub fn new(a_lapse: f64, eps: f64, area: f64) -> Result<Self> {
        let p = CollarParams { a_lapse, eps, area };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("lapse", self.a_lapse), ("eps", self.eps), ("area", self.area)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(invalid(format!("collar {name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

/// Energy of the test function `2t` across the first half of the collar,
/// divided by `4π`: `(area / (πA)) (1/2 + ε/24)`.
pub fn collar_capacity_bound(params: &CollarParams) -> Result<f64> {
    params.validate()?;
    Ok(params.area / (std::f64::consts::PI * params.a_lapse) * (0.5 + params.eps / 24.0))
}
