//! The harmonic-static equation `L*u = -dφ⊗dφ + ½|∇φ|^2 g`, where
//! `L*u = Hess u - (Δu) g - u Ric` is the formal adjoint of the linearized
//! scalar curvature, specialized to radial `u` and `φ`.
//!
//! Closed-form solutions are provided for the Euclidean exterior, the
//! Schwarzschild exterior and the round 3-sphere band with `φ = tan r`, plus a
//! Cartesian check for `φ = z` on flat space. [`solve_hs_ode`] integrates the
//! traced form numerically and monitors the first-order `dr^2` equation.

use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::geometry::{Jet, RadialFn, RadialMetric, RadialTensor, SchwarzschildParams};
use crate::ode::integrate_on_grid;
use crate::variation::stress_energy_from_gradient;

/// Distance kept from the poles `±π/2` of the sphere band.
pub const POLE_MARGIN: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum HsExample {
    Flat,
    Schwarzschild,
    CartesianZ,
    Sphere,
    Numeric,
}

/// A harmonic-static pair: metric, harmonic function `φ`, potential `u`.
#[derive(Debug, Clone)]
pub struct HSPotential {
    pub metric: RadialMetric,
    pub phi: RadialFn,
    pub u: RadialFn,
    /// Coefficient of the radial kernel element added to the decaying part.
    pub c: f64,
    pub source: HsExample,
}

impl HSPotential {
    pub fn u(&self, r: f64) -> f64 {
        self.u.value(r)
    }

    pub fn du(&self, r: f64) -> f64 {
        self.u.d1(r)
    }

    pub fn ddu(&self, r: f64) -> f64 {
        self.u.d2(r)
    }

    pub fn residual(&self, grid: &[f64]) -> Result<HSResidual> {
        hs_residual(&self.metric, &self.phi, &self.u, grid)
    }
}

/// `Δu = (u'' - (a'/a) u' + 2 (b'/b) u') / a^2`.
pub fn laplacian(metric: &RadialMetric, u: Jet, r: f64) -> f64 {
    let a = metric.a_jet(r);
    let b = metric.b_jet(r);
    (u.d2 - a.d1 / a.value * u.d1 + 2.0 * b.d1 / b.value * u.d1) / (a.value * a.value)
}

/// Radial Hessian `(u'' - (a'/a) u') dr^2 + (b b' u' / a^2) dσ^2`.
pub fn hessian(metric: &RadialMetric, u: Jet, r: f64) -> RadialTensor {
    let a = metric.a_jet(r);
    let b = metric.b_jet(r);
    RadialTensor::new(
        u.d2 - a.d1 / a.value * u.d1,
        b.value * b.d1 * u.d1 / (a.value * a.value),
    )
}

fn lstar_jet(metric: &RadialMetric, u: Jet, r: f64) -> Result<RadialTensor> {
    let curv = metric.curvature(r)?;
    let hess = hessian(metric, u, r);
    let lap = laplacian(metric, u, r);
    Ok(hess - lap * metric.metric_tensor(r) - u.value * curv.ric)
}

/// `L*u = Hess u - (Δu) g - u Ric` at `r`.
pub fn lstar(metric: &RadialMetric, u: &RadialFn, r: f64) -> Result<RadialTensor> {
    lstar_jet(metric, u.jet(r), r)
}

/// `-dφ⊗dφ + ½|∇φ|^2 g` for a radial `φ`.
pub fn source_tensor(metric: &RadialMetric, phi: &RadialFn, r: f64) -> RadialTensor {
    let (a, b) = metric.coefficients(r);
    stress_energy_from_gradient(a, b, phi.d1(r))
}

/// Largest orthonormal-frame component, `max(|t_rr|/a^2, |t_ang|/b^2)`.
pub fn frame_norm(t: &RadialTensor, a: f64, b: f64) -> f64 {
    (t.t_rr / (a * a)).abs().max((t.t_ang / (b * b)).abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualSample {
    pub r: f64,
    /// `L*u - S_φ`.
    pub tensor: RadialTensor,
    /// Trace of `tensor`.
    pub trace: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HSResidual {
    pub samples: Vec<ResidualSample>,
    /// Largest orthonormal-frame component over the grid.
    pub sup_norm: f64,
}

pub fn hs_residual(
    metric: &RadialMetric,
    phi: &RadialFn,
    u: &RadialFn,
    grid: &[f64],
) -> Result<HSResidual> {
    if grid.is_empty() {
        return Err(invalid("empty residual grid"));
    }
    let mut samples = Vec::with_capacity(grid.len());
    let mut sup_norm: f64 = 0.0;
    for &r in grid {
        if !(r >= metric.r0() && r <= metric.r1()) {
            return Err(invalid(format!(
                "grid point {r} outside [{}, {}]",
                metric.r0(),
                metric.r1()
            )));
        }
        let tensor = lstar(metric, u, r)? - source_tensor(metric, phi, r);
        let (a, b) = metric.coefficients(r);
        sup_norm = sup_norm.max(frame_norm(&tensor, a, b));
        samples.push(ResidualSample {
            r,
            tensor,
            trace: tensor.trace(a, b),
        });
    }
    Ok(HSResidual { samples, sup_norm })
}

/// Residual of the traced form
/// `Hess u - u Ric + dφ⊗dφ - ¼|∇φ|^2 g + ½ u R g`, which for `R = 0` is the
/// familiar `Hess u = u Ric - dφ⊗dφ + ¼|∇φ|^2 g`.
pub fn traced_residual(metric: &RadialMetric, phi: &RadialFn, u: &RadialFn, r: f64) -> Result<RadialTensor> {
    let curv = metric.curvature(r)?;
    let j = u.jet(r);
    let g = metric.metric_tensor(r);
    let (a, _) = metric.coefficients(r);
    let dphi = phi.d1(r);
    let grad_sq = (dphi / a) * (dphi / a);
    let dphi_sq = RadialTensor::new(dphi * dphi, 0.0);
    Ok(hessian(metric, j, r) - j.value * curv.ric + dphi_sq - (0.25 * grad_sq) * g
        + (0.5 * j.value * curv.scalar) * g)
}

/// `|-2Δu - uR - ½|∇φ|^2|` at `r`.
pub fn trace_identity_residual(metric: &RadialMetric, phi: &RadialFn, u: &RadialFn, r: f64) -> Result<f64> {
    let curv = metric.curvature(r)?;
    let j = u.jet(r);
    let (a, _) = metric.coefficients(r);
    let grad = phi.d1(r) / a;
    Ok((-2.0 * laplacian(metric, j, r) - j.value * curv.scalar - 0.5 * grad * grad).abs())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalarConstancy {
    pub values: Vec<f64>,
    pub mean: f64,
    pub max_deviation: f64,
}

pub fn scalar_constancy_check(metric: &RadialMetric, grid: &[f64]) -> Result<ScalarConstancy> {
    if grid.is_empty() {
        return Err(invalid("empty grid"));
    }
    let values = grid
        .iter()
        .map(|&r| Ok(metric.curvature(r)?.scalar))
        .collect::<Result<Vec<f64>>>()?;
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let max_deviation = values.iter().map(|v| (v - mean).abs()).fold(0.0, f64::max);
    Ok(ScalarConstancy {
        values,
        mean,
        max_deviation,
    })
}

/// `u = -r0^2 / (8 r^2) + c` on the Euclidean exterior of `r0`, with
/// `φ = 1 - r0/r`.
pub fn example_flat(r0: f64, c: f64) -> Result<HSPotential> {
    let metric = RadialMetric::flat(r0)?;
    let k = r0 * r0;
    Ok(HSPotential {
        metric,
        phi: RadialFn::analytic(
            move |r| 1.0 - r0 / r,
            move |r| r0 / (r * r),
            move |r| -2.0 * r0 / (r * r * r),
        ),
        u: RadialFn::analytic(
            move |r| -k / (8.0 * r * r) + c,
            move |r| k / (4.0 * r * r * r),
            move |r| -3.0 * k / (4.0 * r.powi(4)),
        ),
        c,
        source: HsExample::Flat,
    })
}

/// The static potential `(1 - m/2r) / (1 + m/2r) = (r - m/2) / (r + m/2)`.
pub fn schwarzschild_static_potential(m: f64) -> RadialFn {
    let h = 0.5 * m;
    RadialFn::analytic(
        move |r| (r - h) / (r + h),
        move |r| m / ((r + h) * (r + h)),
        move |r| -2.0 * m / (r + h).powi(3),
    )
}

/// `u = -(m + 2 r0)^2 / (32 r^2 (1 + m/2r)^2) + c (1 - m/2r)/(1 + m/2r)` on
/// the Schwarzschild exterior, with the capacitary potential as `φ`.
pub fn example_schwarzschild(params: SchwarzschildParams, c: f64) -> Result<HSPotential> {
    let metric = RadialMetric::schwarzschild(params)?;
    let SchwarzschildParams { m, r0 } = params;
    let h = 0.5 * m;
    let k = params.capacity();
    let k2 = k * k;
    let v = schwarzschild_static_potential(m);
    let (v0, v1, v2) = (v.clone(), v.clone(), v);
    Ok(HSPotential {
        metric,
        phi: RadialFn::analytic(
            move |r| (1.0 - r0 / r) / (1.0 + h / r),
            move |r| k / ((r + h) * (r + h)),
            move |r| -2.0 * k / (r + h).powi(3),
        ),
        // (m + 2 r0)^2 / (32 r^2 w^2) = k^2 / (8 (r + m/2)^2)
        u: RadialFn::analytic(
            move |r| -k2 / (8.0 * (r + h) * (r + h)) + c * v0.value(r),
            move |r| k2 / (4.0 * (r + h).powi(3)) + c * v1.d1(r),
            move |r| -3.0 * k2 / (4.0 * (r + h).powi(4)) + c * v2.d2(r),
        ),
        c,
        source: HsExample::Schwarzschild,
    })
}

/// Sphere band half-width used by the sphere example.
pub fn sphere_half_width() -> f64 {
    FRAC_PI_2 - POLE_MARGIN
}

/// `u = c sin r + (3 - sec^2 r)/8 + (3/8) sin r (log cos r - log(1 + sin r))`
/// on the unit 3-sphere band, with `φ = tan r`.
pub fn example_sphere(c: f64) -> Result<HSPotential> {
    let half = sphere_half_width();
    let metric = RadialMetric::unit_sphere_band(-half, half)?;
    // L(r) = log cos r - log(1 + sin r), L' = -sec r
    let log_term = |r: f64| r.cos().ln() - r.sin().ln_1p();
    let sec = |r: f64| 1.0 / r.cos();
    Ok(HSPotential {
        metric,
        phi: RadialFn::analytic(
            f64::tan,
            move |r| sec(r) * sec(r),
            move |r| 2.0 * sec(r) * sec(r) * r.tan(),
        ),
        u: RadialFn::analytic(
            move |r| {
                let (s, sc) = (r.sin(), sec(r));
                c * s + (3.0 - sc * sc) / 8.0 + 0.375 * s * log_term(r)
            },
            move |r| {
                let (s, co, sc, t) = (r.sin(), r.cos(), sec(r), r.tan());
                c * co - sc * sc * t / 4.0 + 0.375 * (co * log_term(r) - s * sc)
            },
            move |r| {
                let (s, sc, t) = (r.sin(), sec(r), r.tan());
                let sc2 = sc * sc;
                -c * s - 0.25 * (2.0 * sc2 * t * t + sc2 * sc2) + 0.375 * (-s * log_term(r) - 1.0 - sc2)
            },
        ),
        c,
        source: HsExample::Sphere,
    })
}

/// Parameters for [`example_solution`]; unused fields are ignored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExampleParams {
    pub m: f64,
    pub r0: f64,
    pub c: f64,
}

pub fn example_solution(example: HsExample, params: ExampleParams) -> Result<HSPotential> {
    match example {
        HsExample::Flat => example_flat(params.r0, params.c),
        HsExample::Schwarzschild => {
            example_schwarzschild(SchwarzschildParams::new(params.m, params.r0)?, params.c)
        }
        HsExample::Sphere => example_sphere(params.c),
        HsExample::CartesianZ | HsExample::Numeric => Err(invalid(format!(
            "{example:?} has no radial closed form"
        ))),
    }
}

/// Radial kernel element of `L*` for each closed-form example.
pub fn radial_kernel_element(example: HsExample, params: ExampleParams) -> Result<RadialFn> {
    match example {
        HsExample::Flat => Ok(RadialFn::constant(1.0)),
        HsExample::Schwarzschild => Ok(schwarzschild_static_potential(params.m)),
        HsExample::Sphere => Ok(RadialFn::analytic(f64::sin, f64::cos, |r| -r.sin())),
        _ => Err(invalid(format!("no radial kernel element for {example:?}"))),
    }
}

pub type Mat3 = [[f64; 3]; 3];

/// Componentwise sup of `Hess u - (Δu) δ - (-dφ⊗dφ + ½|∇φ|^2 δ)` on flat
/// R^3 over the sample points, given the Cartesian Hessian of `u` and the
/// gradient of `φ`.
pub fn cartesian_residual(
    points: &[[f64; 3]],
    hess_u: impl Fn([f64; 3]) -> Mat3,
    grad_phi: impl Fn([f64; 3]) -> [f64; 3],
) -> f64 {
    let mut sup: f64 = 0.0;
    for &p in points {
        let h = hess_u(p);
        let g = grad_phi(p);
        let lap = h[0][0] + h[1][1] + h[2][2];
        let grad_sq = g[0] * g[0] + g[1] * g[1] + g[2] * g[2];
        for i in 0..3 {
            for j in 0..3 {
                let delta = if i == j { 1.0 } else { 0.0 };
                let lstar = h[i][j] - lap * delta;
                let source = -g[i] * g[j] + 0.5 * grad_sq * delta;
                sup = sup.max((lstar - source).abs());
            }
        }
    }
    sup
}

/// Variants of the Cartesian example used to isolate each side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CartesianVariant {
    /// `φ = z`, `u = (x^2 + y^2 - 3 z^2)/8`.
    Full,
    /// `u = 0`, leaving only the stress-energy.
    ZeroPotential,
    /// `φ` constant, leaving only `L*u`.
    ConstantPhi,
}

pub fn cartesian_linear_field_check(points: &[[f64; 3]], variant: CartesianVariant) -> f64 {
    // Hess of (x^2 + y^2 - 3 z^2)/8
    let quad_hess = |_: [f64; 3]| [[0.25, 0.0, 0.0], [0.0, 0.25, 0.0], [0.0, 0.0, -0.75]];
    let zero_hess = |_: [f64; 3]| [[0.0; 3]; 3];
    let grad_z = |_: [f64; 3]| [0.0, 0.0, 1.0];
    let grad_zero = |_: [f64; 3]| [0.0; 3];
    match variant {
        CartesianVariant::Full => cartesian_residual(points, quad_hess, grad_z),
        CartesianVariant::ZeroPotential => cartesian_residual(points, zero_hess, grad_z),
        CartesianVariant::ConstantPhi => cartesian_residual(points, quad_hess, grad_zero),
    }
}

/// Residuals of the two sphere-band ODEs
/// `tan(r) u' - u = -¼ sec^4 r` and `-u'' + tan(r) u' - 2u = ½ sec^4 r`.
pub fn sphere_band_ode_residuals(u: &RadialFn, r: f64) -> Result<(f64, f64)> {
    if !(r.abs() < FRAC_PI_2) {
        return Err(invalid(format!("r = {r} is at or beyond a pole")));
    }
    let j = u.jet(r);
    let t = r.tan();
    let sec4 = 1.0 / r.cos().powi(4);
    let res1 = t * j.d1 - j.value + 0.25 * sec4;
    let res2 = -j.d2 + t * j.d1 - 2.0 * j.value - 0.5 * sec4;
    Ok((res1, res2))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NumericSolution {
    pub grid: Vec<f64>,
    pub u: Vec<f64>,
    pub du: Vec<f64>,
    /// Orthonormal `dr^2` component of `L*u - S_φ` at each grid point, which
    /// the integration does not enforce.
    pub defect: Vec<f64>,
    /// Sup of `defect`.
    pub compatibility_defect: f64,
}

impl NumericSolution {
    pub fn max_mismatch(&self, exact: &RadialFn) -> f64 {
        self.grid
            .iter()
            .zip(&self.u)
            .map(|(&r, &u)| (u - exact.value(r)).abs())
            .fold(0.0, f64::max)
    }
}

/// Integrate `u'' = (a'/a) u' + u Ric_rr - ¾ φ'^2 - ½ u R a^2` (the `dr^2`
/// component of the traced equation) from `grid[0]` with `u = u0`,
/// `u' = du0`.
pub fn solve_hs_ode(
    metric: &RadialMetric,
    phi: &RadialFn,
    u0: f64,
    du0: f64,
    grid: &[f64],
    max_step: f64,
) -> Result<NumericSolution> {
    if !metric.is_curvature_bearing() {
        return Err(Error::UnsupportedFamily);
    }
    if let Some(&bad) = grid.iter().find(|&&r| !(r >= metric.r0() && r <= metric.r1())) {
        return Err(invalid(format!(
            "grid point {bad} outside [{}, {}]",
            metric.r0(),
            metric.r1()
        )));
    }
    let second = |r: f64, u: f64, du: f64| -> f64 {
        let a = metric.a_jet(r);
        let dphi = phi.d1(r);
        match metric.curvature(r) {
            Ok(c) => {
                a.d1 / a.value * du + u * c.ric.t_rr - 0.75 * dphi * dphi
                    - 0.5 * u * c.scalar * a.value * a.value
            }
            Err(_) => f64::NAN,
        }
    };
    let states = integrate_on_grid(
        |r, y: [f64; 2]| [y[1], second(r, y[0], y[1])],
        grid,
        [u0, du0],
        max_step,
    )?;
    let mut defect = Vec::with_capacity(grid.len());
    for (&r, y) in grid.iter().zip(&states) {
        let jet = Jet::new(y[0], y[1], second(r, y[0], y[1]));
        let res = lstar_jet(metric, jet, r)? - source_tensor(metric, phi, r);
        let (a, _) = metric.coefficients(r);
        defect.push((res.t_rr / (a * a)).abs());
    }
    let compatibility_defect = defect.iter().copied().fold(0.0, f64::max);
    Ok(NumericSolution {
        grid: grid.to_vec(),
        u: states.iter().map(|y| y[0]).collect(),
        du: states.iter().map(|y| y[1]).collect(),
        defect,
        compatibility_defect,
    })
}

/// Evenly spaced grid with `n` intervals.
pub fn linear_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|k| lo + (hi - lo) * k as f64 / n as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flat_metric() -> RadialMetric {
        RadialMetric::flat(1.0).unwrap()
    }

    #[test]
    fn lstar_flat_example_value() {
        let ex = example_flat(1.0, 0.0).unwrap();
        let l = lstar(&ex.metric, &ex.u, 2.0).unwrap();
        assert!((l.t_rr + 1.0 / 32.0).abs() < 1e-15);
        assert!((l.t_ang - 1.0 / 8.0).abs() < 1e-15);
        // the reduced Euclidean form
        let (u1, u2) = (ex.du(2.0), ex.ddu(2.0));
        assert!((l.t_rr - (-2.0 / 2.0 * u1)).abs() < 1e-15);
        assert!((l.t_ang - (-(2.0 * u1 + u2 * 4.0))).abs() < 1e-15);
    }

    #[test]
    fn constants_are_static_in_flat_space() {
        let l = lstar(&flat_metric(), &RadialFn::constant(1.0), 3.0).unwrap();
        assert_eq!(l, RadialTensor::ZERO);
    }

    #[test]
    fn sin_is_static_on_sphere() {
        let band = RadialMetric::unit_sphere_band(-1.2, 1.2).unwrap();
        let s = RadialFn::analytic(f64::sin, f64::cos, |r| -r.sin());
        for r in [-1.0, 0.0, 0.3, 1.1] {
            assert!(lstar(&band, &s, r).unwrap().sup_abs() < 1e-15);
        }
    }

    #[test]
    fn lstar_rejects_general_family() {
        let g = RadialMetric::general(RadialFn::constant(1.0), RadialFn::identity(), 1.0, f64::INFINITY)
            .unwrap();
        assert_eq!(lstar(&g, &RadialFn::constant(1.0), 2.0), Err(Error::UnsupportedFamily));
    }

    #[test]
    fn conformal_lstar_matches_displayed_formula() {
        let m = 2.0;
        let ex = example_schwarzschild(SchwarzschildParams::new(m, 1.0).unwrap(), 0.7).unwrap();
        let w = ex.metric.conformal_factor().unwrap().clone();
        for r in [1.3, 2.0, 6.0] {
            let (w0, w1, w2) = (w.value(r), w.d1(r), w.d2(r));
            let (u, u1, u2) = (ex.u(r), ex.du(r), ex.ddu(r));
            let rr = -4.0 * w1 * u1 / w0 - 2.0 * u1 / r
                + u * (4.0 * w2 / w0 + 4.0 * w1 / (r * w0) - 4.0 * w1 * w1 / (w0 * w0));
            let ang = (-u2 - u1 / r + u * (2.0 * w2 / w0 + 6.0 * w1 / (r * w0) + 2.0 * w1 * w1 / (w0 * w0)))
                * r
                * r;
            let l = lstar(&ex.metric, &ex.u, r).unwrap();
            assert!((l.t_rr - rr).abs() < 1e-14 * (1.0 + rr.abs()));
            assert!((l.t_ang - ang).abs() < 1e-14 * (1.0 + ang.abs()));
        }
    }

    #[test]
    fn schwarzschild_source_matches_display() {
        let (m, r0) = (2.0, 1.0);
        let ex = example_schwarzschild(SchwarzschildParams::new(m, r0).unwrap(), 0.0).unwrap();
        for r in [1.0, 2.5, 9.0] {
            let w = 1.0 + m / (2.0 * r);
            let k = (r0 + m / 2.0).powi(2) / (2.0 * r.powi(4) * w.powi(4));
            let s = source_tensor(&ex.metric, &ex.phi, r);
            assert!((s.t_rr + k).abs() < 1e-15);
            assert!((s.t_ang - k * r * r).abs() < 1e-15);
        }
    }

    #[test]
    fn example_values() {
        assert!((example_flat(1.0, 0.0).unwrap().u(2.0) + 1.0 / 32.0).abs() < 1e-16);
        assert!((example_sphere(0.0).unwrap().u(0.0) - 0.25).abs() < 1e-16);
        let s0 = example_schwarzschild(SchwarzschildParams::new(0.0, 1.0).unwrap(), 0.0).unwrap();
        let f = example_flat(1.0, 0.0).unwrap();
        for r in [1.0, 2.0, 7.0] {
            assert!((s0.u(r) - f.u(r)).abs() < 1e-16);
        }
        // C term reduces to the constant C when m = 0
        let s1 = example_schwarzschild(SchwarzschildParams::new(0.0, 1.0).unwrap(), 2.5).unwrap();
        assert!((s1.u(3.0) - f.u(3.0) - 2.5).abs() < 1e-15);
    }

    #[test]
    fn analytic_derivatives_match_central_differences() {
        let cases = [
            example_flat(1.5, 0.3).unwrap(),
            example_schwarzschild(SchwarzschildParams::new(2.0, 1.0).unwrap(), -3.0).unwrap(),
            example_schwarzschild(SchwarzschildParams::new(-1.0, 1.0).unwrap(), 1.0).unwrap(),
            example_sphere(2.0).unwrap(),
        ];
        for ex in &cases {
            let lo = ex.metric.r0();
            for frac in [0.1, 0.5, 0.9] {
                let r = if ex.metric.is_asymptotically_flat() {
                    lo + 10.0 * frac
                } else {
                    -1.2 + 2.4 * frac
                };
                let h = 1e-5;
                let d1 = (ex.u(r + h) - ex.u(r - h)) / (2.0 * h);
                let d2 = (ex.du(r + h) - ex.du(r - h)) / (2.0 * h);
                assert!((d1 - ex.du(r)).abs() <= 1e-6 * (1.0 + ex.du(r).abs()), "{:?} r={r}", ex.source);
                assert!((d2 - ex.ddu(r)).abs() <= 1e-6 * (1.0 + ex.ddu(r).abs()), "{:?} r={r}", ex.source);
                let p1 = (ex.phi.value(r + h) - ex.phi.value(r - h)) / (2.0 * h);
                assert!((p1 - ex.phi.d1(r)).abs() <= 1e-6 * (1.0 + p1.abs()));
            }
        }
    }

    #[test]
    fn golden_residuals() {
        let flat = example_flat(1.0, 0.0).unwrap();
        assert!(flat.residual(&linear_grid(1.0, 20.0, 64)).unwrap().sup_norm < 1e-12);
        let s = example_schwarzschild(SchwarzschildParams::new(2.0, 1.0).unwrap(), 1.0).unwrap();
        assert!(s.residual(&linear_grid(1.0, 20.0, 64)).unwrap().sup_norm < 1e-10);
        let sph = example_sphere(2.0).unwrap();
        assert!(sph.residual(&linear_grid(-1.2, 1.2, 64)).unwrap().sup_norm < 1e-10);
    }

    #[test]
    fn residual_trace_matches_tensor() {
        let s = example_sphere(0.0).unwrap();
        let res = s.residual(&linear_grid(-1.0, 1.0, 9)).unwrap();
        for smp in &res.samples {
            let (a, b) = s.metric.coefficients(smp.r);
            assert!((smp.trace - smp.tensor.trace(a, b)).abs() < 1e-12);
        }
    }

    #[test]
    fn cartesian_example() {
        let pts = [[0.0, 0.0, 0.0], [1.0, -2.0, 3.5], [-4.0, 0.25, 1e3]];
        assert_eq!(cartesian_linear_field_check(&pts, CartesianVariant::Full), 0.0);
        assert_eq!(cartesian_linear_field_check(&pts, CartesianVariant::ZeroPotential), 0.5);
        assert_eq!(cartesian_linear_field_check(&pts, CartesianVariant::ConstantPhi), 0.5);
    }

    #[test]
    fn sphere_odes() {
        let u = example_sphere(0.0).unwrap().u;
        let (r1, _) = sphere_band_ode_residuals(&u, 0.0).unwrap();
        assert!(r1.abs() < 1e-16);
        for c in [0.0, 2.0, -5.0] {
            let u = example_sphere(c).unwrap().u;
            let (r1, r2) = sphere_band_ode_residuals(&u, 0.7).unwrap();
            assert!(r1.abs() < 1e-10 && r2.abs() < 1e-10, "{r1} {r2}");
        }
        assert!(sphere_band_ode_residuals(&u, FRAC_PI_2).is_err());
    }

    #[test]
    fn trace_identity_on_examples() {
        let f = example_flat(1.0, 0.0).unwrap();
        for r in [1.0, 2.0, 11.0] {
            assert!(trace_identity_residual(&f.metric, &f.phi, &f.u, r).unwrap() < 1e-12);
        }
        let s = example_sphere(0.0).unwrap();
        assert!(trace_identity_residual(&s.metric, &s.phi, &s.u, 0.5).unwrap() < 1e-10);
        let zero = RadialFn::constant(0.0);
        assert_eq!(trace_identity_residual(&flat_metric(), &zero, &zero, 2.0).unwrap(), 0.0);
    }

    #[test]
    fn scalar_constancy() {
        let s = RadialMetric::schwarzschild(SchwarzschildParams::new(2.0, 1.0).unwrap()).unwrap();
        let c = scalar_constancy_check(&s, &linear_grid(1.0, 30.0, 50)).unwrap();
        assert!(c.max_deviation < 1e-10 && c.mean.abs() < 1e-10);
        let band = RadialMetric::unit_sphere_band(-1.2, 1.2).unwrap();
        let c = scalar_constancy_check(&band, &linear_grid(-1.2, 1.2, 50)).unwrap();
        assert!(c.max_deviation < 1e-10 && (c.mean - 6.0).abs() < 1e-10);
        let c = scalar_constancy_check(&flat_metric(), &linear_grid(1.0, 5.0, 5)).unwrap();
        assert!(c.values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn ode_reproduces_flat_example() {
        let ex = example_flat(1.0, 0.0).unwrap();
        let grid = linear_grid(2.0, 50.0, 480);
        let sol = solve_hs_ode(&ex.metric, &ex.phi, ex.u(2.0), ex.du(2.0), &grid, 0.01).unwrap();
        assert!(sol.max_mismatch(&ex.u) < 1e-8);
        assert!(sol.compatibility_defect < 1e-8);
    }

    #[test]
    fn ode_on_general_metric_is_rejected() {
        let g = RadialMetric::general(RadialFn::constant(1.0), RadialFn::identity(), 1.0, f64::INFINITY)
            .unwrap();
        let phi = RadialFn::identity();
        assert_eq!(
            solve_hs_ode(&g, &phi, 0.0, 0.0, &[2.0, 3.0], 0.1),
            Err(Error::UnsupportedFamily)
        );
    }

    #[test]
    fn ode_reproduces_schwarzschild_example() {
        let ex = example_schwarzschild(SchwarzschildParams::new(2.0, 1.0).unwrap(), 0.0).unwrap();
        let grid = linear_grid(2.0, 50.0, 480);
        let sol = solve_hs_ode(&ex.metric, &ex.phi, ex.u(2.0), ex.du(2.0), &grid, 0.01).unwrap();
        assert!(sol.max_mismatch(&ex.u) < 1e-7);
        assert!(sol.compatibility_defect < 1e-7);
    }

    #[test]
    fn ode_shifted_by_kernel_element() {
        let ex = example_flat(1.0, 0.0).unwrap();
        let shifted = example_flat(1.0, 0.75).unwrap();
        let grid = linear_grid(2.0, 50.0, 480);
        let sol = solve_hs_ode(&ex.metric, &ex.phi, ex.u(2.0) + 0.75, ex.du(2.0), &grid, 0.01).unwrap();
        assert!(sol.max_mismatch(&shifted.u) < 1e-8);
    }

    #[test]
    fn ode_runs_backwards_on_sphere() {
        let ex = example_sphere(1.0).unwrap();
        let grid = linear_grid(0.0, -1.2, 120);
        let sol = solve_hs_ode(&ex.metric, &ex.phi, ex.u(0.0), ex.du(0.0), &grid, 0.005).unwrap();
        assert!(sol.max_mismatch(&ex.u) < 1e-7);
    }

    #[test]
    fn ode_convergence_order() {
        let ex = example_schwarzschild(SchwarzschildParams::new(2.0, 1.0).unwrap(), 1.0).unwrap();
        let grid = linear_grid(2.0, 50.0, 24);
        let errs: Vec<f64> = [0.4, 0.2, 0.1]
            .iter()
            .map(|&h| {
                solve_hs_ode(&ex.metric, &ex.phi, ex.u(2.0), ex.du(2.0), &grid, h)
                    .unwrap()
                    .max_mismatch(&ex.u)
            })
            .collect();
        for w in errs.windows(2) {
            let slope = (w[0] / w[1]).log2();
            assert!((slope - crate::ode::RK4_ORDER).abs() < 0.3, "slope {slope}, errors {errs:?}");
        }
    }

    #[test]
    fn kernel_invariance_at_amplitude_ten() {
        let grid_af = linear_grid(1.0, 20.0, 40);
        let grid_band = linear_grid(-1.2, 1.2, 40);
        let cases = [
            (HsExample::Flat, ExampleParams { m: 0.0, r0: 1.0, c: 0.0 }, &grid_af),
            (HsExample::Schwarzschild, ExampleParams { m: 2.0, r0: 1.0, c: 0.0 }, &grid_af),
            (HsExample::Sphere, ExampleParams { m: 0.0, r0: 0.0, c: 0.0 }, &grid_band),
        ];
        for (example, params, grid) in cases {
            let base = example_solution(example, params).unwrap();
            let kernel = radial_kernel_element(example, params).unwrap();
            let k = kernel.clone();
            let u = base.u.clone();
            let shifted = RadialFn::analytic(
                {
                    let (u, k) = (u.clone(), k.clone());
                    move |r| u.value(r) + 10.0 * k.value(r)
                },
                {
                    let (u, k) = (u.clone(), k.clone());
                    move |r| u.d1(r) + 10.0 * k.d1(r)
                },
                move |r| u.d2(r) + 10.0 * k.d2(r),
            );
            let r0 = base.residual(grid).unwrap();
            let r1 = hs_residual(&base.metric, &base.phi, &shifted, grid).unwrap();
            for (s0, s1) in r0.samples.iter().zip(&r1.samples) {
                let scale = 1.0 + 10.0 * kernel.value(s0.r).abs();
                assert!((s0.tensor - s1.tensor).sup_abs() < 1e-12 * scale * (1.0 + s0.r * s0.r));
            }
            let l = grid.iter().map(|&r| lstar(&base.metric, &kernel, r).unwrap().sup_abs()).fold(0.0, f64::max);
            assert!(l < 1e-12, "{example:?} {l}");
        }
    }

    #[test]
    fn difference_of_schwarzschild_solutions_is_static() {
        let p = SchwarzschildParams::new(2.0, 1.0).unwrap();
        let (u1, u2) = (example_schwarzschild(p, 1.0).unwrap().u, example_schwarzschild(p, -3.0).unwrap().u);
        let diff = RadialFn::analytic(
            {
                let (a, b) = (u1.clone(), u2.clone());
                move |r| a.value(r) - b.value(r)
            },
            {
                let (a, b) = (u1.clone(), u2.clone());
                move |r| a.d1(r) - b.d1(r)
            },
            move |r| u1.d2(r) - u2.d2(r),
        );
        let metric = RadialMetric::schwarzschild(p).unwrap();
        for r in linear_grid(1.0, 30.0, 60) {
            let l = lstar(&metric, &diff, r).unwrap();
            let (a, b) = metric.coefficients(r);
            assert!(frame_norm(&l, a, b) < 1e-12, "r={r}");
        }
    }

    fn random_u(c0: f64, c1: f64, k: f64, c2: f64) -> RadialFn {
        RadialFn::analytic(
            move |r| c0 + c1 * (k * r).sin() + c2 / r,
            move |r| c1 * k * (k * r).cos() - c2 / (r * r),
            move |r| -c1 * k * k * (k * r).sin() + 2.0 * c2 / (r * r * r),
        )
    }

    fn metric_for(m: f64) -> (RadialMetric, RadialFn) {
        let p = SchwarzschildParams::new(m, 1.0).unwrap();
        let ex = example_schwarzschild(p, 0.0).unwrap();
        (ex.metric, ex.phi)
    }

    proptest::proptest! {
        #[test]
        fn trace_consistency(
            c0 in -2.0..2.0f64, c1 in -2.0..2.0f64, k in 0.1..2.0f64, c2 in -2.0..2.0f64,
            m in -1.0..2.0f64, r in 1.0..8.0f64,
        ) {
            let (metric, _) = metric_for(m);
            let u = random_u(c0, c1, k, c2);
            let (a, b) = metric.coefficients(r);
            let j = u.jet(r);
            let curv = metric.curvature(r).unwrap();
            let l = lstar(&metric, &u, r).unwrap();
            let lhs = l.trace(a, b) + 2.0 * laplacian(&metric, j, r) + j.value * curv.scalar;
            proptest::prop_assert!(lhs.abs() < 1e-12 * (1.0 + l.sup_abs()));
        }

        #[test]
        fn traced_form_differs_by_pure_trace(
            c0 in -2.0..2.0f64, c1 in -2.0..2.0f64, k in 0.1..2.0f64, c2 in -2.0..2.0f64,
            m in -1.0..2.0f64, r in 1.0..8.0f64,
        ) {
            let (metric, phi) = metric_for(m);
            let u = random_u(c0, c1, k, c2);
            let (a, b) = metric.coefficients(r);
            let full = lstar(&metric, &u, r).unwrap() - source_tensor(&metric, &phi, r);
            let traced = traced_residual(&metric, &phi, &u, r).unwrap();
            let rebuilt = traced + (0.5 * full.trace(a, b)) * metric.metric_tensor(r);
            proptest::prop_assert!(frame_norm(&(full - rebuilt), a, b) < 1e-11 * (1.0 + frame_norm(&full, a, b)));
        }

        #[test]
        fn trace_identity_on_sphere_examples(c in -3.0..3.0f64, r in -1.2..1.2f64) {
            let ex = example_sphere(c).unwrap();
            proptest::prop_assert!(trace_identity_residual(&ex.metric, &ex.phi, &ex.u, r).unwrap() < 1e-10);
        }
    }
}
