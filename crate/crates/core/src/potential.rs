//! Capacitary potentials and capacities of the inner boundary sphere.
//!
//! For a radial metric `a^2 dr^2 + b^2 dσ^2` a radial function is harmonic
//! exactly when `b^2 φ' / a` is constant, so the capacitary potential is
//! `φ(r) = cap ∫_{r0}^{r} a/b^2` with `cap = [∫_{r0}^{∞} a/b^2]^{-1}`. The
//! flux and energy routes below recompute the same number from the boundary
//! derivative and from the Dirichlet integral; they are checked against the
//! closed reduction rather than assumed equal.
//!
//! On a finite annulus `[r0, r1]` the same formulas give the condenser
//! capacity, with the potential equal to 1 on the outer sphere.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{invalid, Error, Result};
use crate::geometry::{RadialFn, RadialMetric, ScalarFn, SchwarzschildParams};
use crate::quadrature::{Estimate, Quadrature};

/// `a / b^2`, the density of `∫ dr / (area-weighted length)`.
fn harmonic_density(metric: &RadialMetric, r: f64) -> f64 {
    let (a, b) = metric.coefficients(r);
    a / (b * b)
}

/// `∫_{lo}^{hi} a/b^2 dr`, with `hi = ∞` allowed.
fn density_integral(metric: &RadialMetric, lo: f64, hi: f64, quad: &Quadrature) -> Result<Estimate> {
    let f = |r: f64| harmonic_density(metric, r);
    if hi.is_infinite() {
        quad.integrate_to_infinity(f, lo, metric.breakpoints())
    } else {
        quad.integrate_pieces(f, &metric.segment_points(lo, hi))
    }
}

/// Reject metrics whose areal radius does not grow linearly, for which
/// `∫ a/b^2` diverges and the capacity is zero.
fn check_tail(metric: &RadialMetric) -> Result<()> {
    let base = metric.r0().abs().max(1.0);
    let tail = |r: f64| r * r * harmonic_density(metric, r);
    let (t1, t2) = (tail(1e6 * base), tail(1e9 * base));
    if !(t1.is_finite() && t2.is_finite()) || t2 > 10.0 * t1 {
        return Err(Error::CapacityUndefined(format!(
            "r^2 a/b^2 grows from {t1:e} to {t2:e}; the boundary integral diverges"
        )));
    }
    Ok(())
}

/// Capacity of the inner sphere from the closed radial reduction.
pub fn capacity_quadrature(metric: &RadialMetric, quad: &Quadrature) -> Result<f64> {
    let integral = if metric.is_asymptotically_flat() {
        check_tail(metric)?;
        density_integral(metric, metric.r0(), f64::INFINITY, quad)
    } else {
        density_integral(metric, metric.r0(), metric.r1(), quad)
    }
    .map_err(|e| match e {
        Error::Convergence { value, achieved, .. } => Error::CapacityUndefined(format!(
            "boundary integral failed to converge (value {value:e}, error {achieved:e})"
        )),
        other => other,
    })?
    .value;
    if !(integral > 0.0 && integral.is_finite()) {
        return Err(Error::CapacityUndefined(format!(
            "boundary integral evaluated to {integral}"
        )));
    }
    Ok(1.0 / integral)
}

#[derive(Clone)]
enum Representation {
    /// `φ(r) = cap ∫_{r0}^{r} a/b^2`.
    Reduced,
    /// Caller-supplied closed form.
    Closed { phi: ScalarFn, dphi: ScalarFn },
}

/// Radial harmonic function vanishing on the inner sphere and tending to 1
/// at the outer end, together with its capacity.
#[derive(Clone)]
pub struct CapacitaryPotential {
    metric: RadialMetric,
    cap: f64,
    quad: Quadrature,
    repr: Representation,
}

impl fmt::Debug for CapacitaryPotential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CapacitaryPotential")
            .field("metric", &self.metric)
            .field("cap", &self.cap)
            .field("closed_form", &matches!(self.repr, Representation::Closed { .. }))
            .finish()
    }
}

impl CapacitaryPotential {
    /// Wrap a closed-form potential. The capacity is read off from the
    /// boundary flux `b(r0)^2 φ'(r0) / a(r0)`.
    pub fn from_closed_form(
        metric: RadialMetric,
        phi: impl Fn(f64) -> f64 + Send + Sync + 'static,
        dphi: impl Fn(f64) -> f64 + Send + Sync + 'static,
        quad: Quadrature,
    ) -> Result<Self> {
        let r0 = metric.r0();
        let (a, b) = metric.coefficients(r0);
        let cap = b * b * dphi(r0) / a;
        if !(cap > 0.0 && cap.is_finite()) {
            return Err(invalid(format!("closed-form potential has boundary flux {cap}")));
        }
        Ok(Self {
            metric,
            cap,
            quad,
            repr: Representation::Closed {
                phi: std::sync::Arc::new(phi),
                dphi: std::sync::Arc::new(dphi),
            },
        })
    }

    /// `(1 - r0/r) / (1 + m/2r)` on the Schwarzschild exterior of `r0`.
    pub fn schwarzschild_closed_form(params: SchwarzschildParams, quad: Quadrature) -> Result<Self> {
        let metric = RadialMetric::schwarzschild(params)?;
        let SchwarzschildParams { m, r0 } = params;
        let k = params.capacity();
        Self::from_closed_form(
            metric,
            move |r| (1.0 - r0 / r) / (1.0 + 0.5 * m / r),
            move |r| k / ((r + 0.5 * m) * (r + 0.5 * m)),
            quad,
        )
    }

    pub fn metric(&self) -> &RadialMetric {
        &self.metric
    }

    pub fn cap(&self) -> f64 {
        self.cap
    }

    pub fn quadrature(&self) -> &Quadrature {
        &self.quad
    }

    pub fn is_closed_form(&self) -> bool {
        matches!(self.repr, Representation::Closed { .. })
    }

    pub fn phi(&self, r: f64) -> Result<f64> {
        self.check_domain(r)?;
        match &self.repr {
            Representation::Closed { phi, .. } => Ok(phi(r)),
            Representation::Reduced => {
                let r0 = self.metric.r0();
                if self.metric.is_asymptotically_flat() && r > 2.0 * r0 {
                    Ok(1.0 - self.one_minus_phi(r)?)
                } else {
                    Ok(self.cap * density_integral(&self.metric, r0, r, &self.quad)?.value)
                }
            }
        }
    }

    /// `1 - φ(r)`, computed without cancellation for the reduced form.
    pub fn one_minus_phi(&self, r: f64) -> Result<f64> {
        self.check_domain(r)?;
        match &self.repr {
            Representation::Closed { phi, .. } => Ok(1.0 - phi(r)),
            Representation::Reduced => {
                // r (1 - φ) is what callers extrapolate, so tighten by r
                let quad = Quadrature::with_tol(self.quad.abs_tol / r.abs().max(1.0));
                Ok(self.cap * density_integral(&self.metric, r, self.metric.r1(), &quad)?.value)
            }
        }
    }

    pub fn dphi(&self, r: f64) -> f64 {
        match &self.repr {
            Representation::Closed { dphi, .. } => dphi(r),
            Representation::Reduced => self.cap * harmonic_density(&self.metric, r),
        }
    }

    /// `φ` as a standalone radial function. Values go through quadrature
    /// (NaN if it fails); the first derivative is exact.
    pub fn to_radial_fn(&self) -> RadialFn {
        let (p0, p1) = (self.clone(), self.clone());
        RadialFn::with_first(
            move |r| p0.phi(r).unwrap_or(f64::NAN),
            move |r| p1.dphi(r),
        )
    }

    /// `|∇φ|^2 = (φ'/a)^2`.
    pub fn grad_norm_sq(&self, r: f64) -> f64 {
        let (a, _) = self.metric.coefficients(r);
        let d = self.dphi(r) / a;
        d * d
    }

    /// Central difference of the radial flux density `b^2 φ' / a`; zero for a
    /// harmonic function.
    pub fn harmonicity_residual(&self, r: f64) -> f64 {
        let flux = |s: f64| {
            let (a, b) = self.metric.coefficients(s);
            b * b * self.dphi(s) / a
        };
        let h = 1e-4 * r.abs().max(1.0);
        (flux(r + h) - flux(r - h)) / (2.0 * h)
    }

    fn check_domain(&self, r: f64) -> Result<()> {
        if r >= self.metric.r0() && r <= self.metric.r1() {
            Ok(())
        } else {
            Err(invalid(format!(
                "radius {r} outside [{}, {}]",
                self.metric.r0(),
                self.metric.r1()
            )))
        }
    }
}

/// Build the capacitary potential from the closed radial reduction.
pub fn capacitary_potential(metric: &RadialMetric, quad: &Quadrature) -> Result<CapacitaryPotential> {
    let cap = capacity_quadrature(metric, quad)?;
    Ok(CapacitaryPotential {
        metric: metric.clone(),
        cap,
        quad: *quad,
        repr: Representation::Reduced,
    })
}

/// `(1/4π) ∫_{∂M} ∂_ν φ dA`.
pub fn capacity_flux(potential: &CapacitaryPotential) -> f64 {
    let r0 = potential.metric.r0();
    let (a, b) = potential.metric.coefficients(r0);
    let normal_derivative = potential.dphi(r0) / a;
    normal_derivative * 4.0 * PI * b * b / (4.0 * PI)
}

/// `(1/4π) ∫_M |∇φ|^2 dV` by adaptive quadrature.
pub fn capacity_energy(potential: &CapacitaryPotential, quad: &Quadrature) -> Result<f64> {
    let metric = &potential.metric;
    let integrand = |r: f64| {
        let (a, b) = metric.coefficients(r);
        let grad = potential.dphi(r) / a;
        grad * grad * 4.0 * PI * a * b * b
    };
    let est = if metric.is_asymptotically_flat() {
        quad.integrate_to_infinity(integrand, metric.r0(), metric.breakpoints())?
    } else {
        quad.integrate_pieces(integrand, &metric.segment_points(metric.r0(), metric.r1()))?
    };
    Ok(est.value / (4.0 * PI))
}

/// Radii `r0 2^k`, `k = 4..=12`, used for the far-field extrapolation.
pub fn expansion_radii(r0: f64) -> Vec<f64> {
    (4..=12).map(|k| r0 * 2f64.powi(k)).collect()
}

/// Limit of `r (1 - φ(r))` as `r → ∞`, which equals the capacity.
///
/// Samples at doubling radii and removes the `1/r` and `1/r^2` error terms by
/// two levels of Richardson elimination.
pub fn expansion_coefficient(potential: &CapacitaryPotential) -> Result<f64> {
    if !potential.metric.is_asymptotically_flat() {
        return Err(invalid("expansion coefficient needs an asymptotically flat metric"));
    }
    let r0 = potential.metric.r0();
    if r0 <= 0.0 {
        return Err(invalid("expansion coefficient needs r0 > 0"));
    }
    let samples = expansion_radii(r0)
        .into_iter()
        .map(|r| Ok(r * potential.one_minus_phi(r)?))
        .collect::<Result<Vec<f64>>>()?;
    let level1: Vec<f64> = samples.windows(2).map(|w| 2.0 * w[1] - w[0]).collect();
    let level2: Vec<f64> = level1.windows(2).map(|w| (4.0 * w[1] - w[0]) / 3.0).collect();
    let n = level2.len();
    let (previous, last) = (level2[n - 2], level2[n - 1]);
    if (last - previous).abs() > 1e-7 * last.abs().max(1.0) || !last.is_finite() {
        return Err(Error::Extrapolation { previous, last });
    }
    Ok(last)
}

/// Dirichlet problem on a finite annulus with constant boundary values.
#[derive(Debug, Clone)]
pub struct AnnulusDirichletProblem {
    metric: RadialMetric,
    f0: f64,
    f1: f64,
}

impl AnnulusDirichletProblem {
    pub fn new(metric: RadialMetric, f0: f64, f1: f64) -> Result<Self> {
        if metric.is_asymptotically_flat() {
            return Err(invalid(
                "annulus problem needs a finite outer radius; use the capacity operations instead",
            ));
        }
        if !(f0.is_finite() && f1.is_finite()) {
            return Err(invalid("boundary values must be finite"));
        }
        Ok(Self { metric, f0, f1 })
    }

    pub fn metric(&self) -> &RadialMetric {
        &self.metric
    }
}

/// Harmonic interpolant of the boundary values and its Dirichlet energy
/// `∫_Ω |∇φ_f|^2 dV` (no `1/4π`).
#[derive(Debug, Clone)]
pub struct DirichletSolution {
    problem: AnnulusDirichletProblem,
    total: f64,
    quad: Quadrature,
    pub energy: f64,
}

impl DirichletSolution {
    pub fn phi(&self, r: f64) -> Result<f64> {
        let p = &self.problem;
        let partial = density_integral(&p.metric, p.metric.r0(), r, &self.quad)?.value;
        Ok(p.f0 + (p.f1 - p.f0) * partial / self.total)
    }

    pub fn dphi(&self, r: f64) -> f64 {
        let p = &self.problem;
        (p.f1 - p.f0) * harmonic_density(&p.metric, r) / self.total
    }
}

pub fn dirichlet_functional(
    problem: &AnnulusDirichletProblem,
    quad: &Quadrature,
) -> Result<DirichletSolution> {
    let m = &problem.metric;
    let total = density_integral(m, m.r0(), m.r1(), quad)?.value;
    let mut sol = DirichletSolution {
        problem: problem.clone(),
        total,
        quad: *quad,
        energy: 0.0,
    };
    let integrand = |r: f64| {
        let (a, b) = m.coefficients(r);
        let g = sol.dphi(r) / a;
        g * g * 4.0 * PI * a * b * b
    };
    let energy = quad.integrate_pieces(integrand, &m.segment_points(m.r0(), m.r1()))?.value;
    sol.energy = energy;
    Ok(sol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Quadrature {
        Quadrature::default()
    }

    fn schw(m: f64, r0: f64) -> RadialMetric {
        RadialMetric::schwarzschild(SchwarzschildParams::new(m, r0).unwrap()).unwrap()
    }

    #[test]
    fn flat_capacity_is_radius() {
        for r0 in [1.0, 2.0, 5.0] {
            let cap = capacity_quadrature(&RadialMetric::flat(r0).unwrap(), &q()).unwrap();
            assert!((cap - r0).abs() < 1e-12 * r0);
        }
    }

    #[test]
    fn schwarzschild_capacity_values() {
        assert!((capacity_quadrature(&schw(2.0, 1.0), &q()).unwrap() - 2.0).abs() < 1e-11);
        assert!((capacity_quadrature(&schw(-1.0, 1.0), &q()).unwrap() - 0.5).abs() < 1e-11);
    }

    #[test]
    fn horizon_boundary_allowed() {
        let cap = capacity_quadrature(&schw(2.0, 1.0), &q()).unwrap();
        let cap_h = capacity_quadrature(&schw(4.0, 2.0), &q()).unwrap();
        assert!((cap - 2.0).abs() < 1e-11);
        assert!((cap_h - 4.0).abs() < 1e-11);
    }

    #[test]
    fn cylinder_has_no_capacity() {
        let cyl = RadialMetric::warped(RadialFn::constant(1.0), 1.0, f64::INFINITY).unwrap();
        assert!(matches!(
            capacity_quadrature(&cyl, &q()),
            Err(Error::CapacityUndefined(_))
        ));
    }

    #[test]
    fn potential_values() {
        let flat = capacitary_potential(&RadialMetric::flat(1.0).unwrap(), &q()).unwrap();
        assert!((flat.phi(2.0).unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(flat.phi(1.0).unwrap(), 0.0);
        let s = capacitary_potential(&schw(2.0, 1.0), &q()).unwrap();
        assert!((s.phi(3.0).unwrap() - 0.5).abs() < 1e-12);
        assert!(s.phi(0.5).is_err());
    }

    #[test]
    fn reduced_matches_closed_form_pointwise() {
        let p = SchwarzschildParams::new(1.5, 1.2).unwrap();
        let reduced = capacitary_potential(&schw(1.5, 1.2), &q()).unwrap();
        let closed = CapacitaryPotential::schwarzschild_closed_form(p, q()).unwrap();
        for r in [1.2, 1.3, 2.0, 2.5, 10.0, 400.0] {
            let (a, b) = (reduced.phi(r).unwrap(), closed.phi(r).unwrap());
            assert!((a - b).abs() < 1e-11, "r = {r}: {a} vs {b}");
            assert!((reduced.dphi(r) - closed.dphi(r)).abs() < 1e-12);
        }
        assert!((closed.cap() - p.capacity()).abs() < 1e-14);
    }

    #[test]
    fn three_routes_agree_on_closed_form() {
        let p = SchwarzschildParams::new(2.0, 1.0).unwrap();
        let closed = CapacitaryPotential::schwarzschild_closed_form(p, q()).unwrap();
        assert!((capacity_flux(&closed) - 2.0).abs() < 1e-14);
        assert!((capacity_energy(&closed, &q()).unwrap() - 2.0).abs() < 1e-10);
    }

    #[test]
    fn energy_scales_with_radius() {
        let pot = capacitary_potential(&RadialMetric::flat(2.0).unwrap(), &q()).unwrap();
        assert!((capacity_energy(&pot, &q()).unwrap() - 2.0).abs() < 1e-10);
    }

    #[test]
    fn expansion_coefficients() {
        let flat = capacitary_potential(&RadialMetric::flat(1.0).unwrap(), &q()).unwrap();
        assert!((expansion_coefficient(&flat).unwrap() - 1.0).abs() < 1e-6);
        let s = capacitary_potential(&schw(2.0, 1.0), &q()).unwrap();
        assert!((expansion_coefficient(&s).unwrap() - 2.0).abs() < 1e-6);
        let neg = CapacitaryPotential::schwarzschild_closed_form(
            SchwarzschildParams::new(-1.0, 1.0).unwrap(),
            q(),
        )
        .unwrap();
        assert!((expansion_coefficient(&neg).unwrap() - 0.5).abs() < 1e-6);
    }

    #[test]
    fn harmonicity_of_closed_form() {
        let closed = CapacitaryPotential::schwarzschild_closed_form(
            SchwarzschildParams::new(2.0, 1.0).unwrap(),
            q(),
        )
        .unwrap();
        for r in [1.5, 3.0, 20.0] {
            assert!(closed.harmonicity_residual(r).abs() < 1e-8);
        }
    }

    #[test]
    fn annulus_energy() {
        let m = RadialMetric::flat(1.0).unwrap().with_outer_radius(2.0).unwrap();
        let sol = dirichlet_functional(&AnnulusDirichletProblem::new(m.clone(), 0.0, 1.0).unwrap(), &q())
            .unwrap();
        assert!((sol.energy - 8.0 * PI).abs() < 1e-11);
        // φ = 2(1 - 1/r)
        assert!((sol.phi(1.5).unwrap() - 2.0 * (1.0 - 1.0 / 1.5)).abs() < 1e-12);

        let c = dirichlet_functional(&AnnulusDirichletProblem::new(m, 0.7, 0.7).unwrap(), &q()).unwrap();
        assert_eq!(c.energy, 0.0);
        assert_eq!(c.phi(1.3).unwrap(), 0.7);
    }

    #[test]
    fn annulus_energy_approaches_exterior_value() {
        let m = RadialMetric::flat(1.0).unwrap().with_outer_radius(1e6).unwrap();
        let sol = dirichlet_functional(&AnnulusDirichletProblem::new(m, 0.0, 1.0).unwrap(), &q()).unwrap();
        assert!((sol.energy - 4.0 * PI).abs() < 1e-4);
    }

    #[test]
    fn annulus_requires_finite_outer_radius() {
        assert!(AnnulusDirichletProblem::new(RadialMetric::flat(1.0).unwrap(), 0.0, 1.0).is_err());
    }

    #[test]
    fn sphere_band_potential_is_affine_in_tan() {
        let d = 0.05;
        let band = RadialMetric::unit_sphere_band(-std::f64::consts::FRAC_PI_2 + d, std::f64::consts::FRAC_PI_2 - d)
            .unwrap();
        let sol = dirichlet_functional(&AnnulusDirichletProblem::new(band.clone(), 0.0, 1.0).unwrap(), &q())
            .unwrap();
        let (lo, hi) = (band.r0(), band.r1());
        for r in [-1.0_f64, 0.0, 0.4, 1.3] {
            let expect = (r.tan() - lo.tan()) / (hi.tan() - lo.tan());
            assert!((sol.phi(r).unwrap() - expect).abs() < 1e-11);
        }
    }
}
