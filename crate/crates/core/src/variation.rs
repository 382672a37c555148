//! First variation of capacity with respect to the metric.
//!
//! Along a path `g_t` with `h = dg_t/dt` the capacity changes at rate
//! `(1/4π) ∫_M ⟨S_φ, h⟩ dV`, where `S_φ = -dφ⊗dφ + ½|∇φ|^2 g` is the
//! stress-energy tensor of the capacitary potential. This module evaluates
//! that pairing for compactly supported radial perturbations and compares it
//! with central differences of the capacity along explicit metric paths.

use rand::RngExt;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::geometry::{RadialFn, RadialMetric, RadialTensor};
use crate::potential::{capacitary_potential, capacity_quadrature, CapacitaryPotential};
use crate::quadrature::Quadrature;

/// Default base step for [`capacity_fd`].
pub const DEFAULT_FD_DELTA: f64 = 1e-3;

/// `amplitude · exp(1 - 1/(1 - x^2))` with `x` mapping `[r_a, r_b]` onto
/// `[-1, 1]`; peak value `amplitude` at the midpoint, smooth and flat to all
/// orders at the ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bump {
    pub r_a: f64,
    pub r_b: f64,
    pub amplitude: f64,
}

impl Bump {
    pub fn new(r_a: f64, r_b: f64, amplitude: f64) -> Result<Self> {
        if !(r_a.is_finite() && r_b.is_finite() && r_b > r_a && amplitude.is_finite()) {
            return Err(invalid(format!(
                "bump needs finite r_a < r_b, got [{r_a}, {r_b}] with amplitude {amplitude}"
            )));
        }
        Ok(Self {
            r_a,
            r_b,
            amplitude,
        })
    }

    fn local(&self, r: f64) -> Option<(f64, f64)> {
        let scale = 2.0 / (self.r_b - self.r_a);
        let x = (2.0 * r - self.r_a - self.r_b) / (self.r_b - self.r_a);
        (x.abs() < 1.0).then_some((x, scale))
    }

    pub fn value(&self, r: f64) -> f64 {
        match self.local(r) {
            Some((x, _)) => self.amplitude * (1.0 - 1.0 / (1.0 - x * x)).exp(),
            None => 0.0,
        }
    }

    pub fn d1(&self, r: f64) -> f64 {
        match self.local(r) {
            Some((x, s)) => {
                let q = 1.0 - x * x;
                self.value(r) * (-2.0 * x / (q * q)) * s
            }
            None => 0.0,
        }
    }

    pub fn d2(&self, r: f64) -> f64 {
        match self.local(r) {
            Some((x, s)) => {
                let q = 1.0 - x * x;
                let g1 = -2.0 * x / (q * q);
                let g2 = -2.0 / (q * q) - 8.0 * x * x / (q * q * q);
                self.value(r) * (g1 * g1 + g2) * s * s
            }
            None => 0.0,
        }
    }

    pub fn as_radial_fn(&self) -> RadialFn {
        let (b1, b2, b3) = (*self, *self, *self);
        RadialFn::analytic(move |r| b1.value(r), move |r| b2.d1(r), move |r| b3.d2(r))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PerturbationKind {
    /// `h = ρ g`.
    Conformal,
    /// `h = h_rr dr⊗dr`.
    RadialRR,
}

/// Compactly supported radial metric perturbation `h = dg_t/dt`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricPerturbation {
    pub kind: PerturbationKind,
    pub profile: Bump,
}

impl MetricPerturbation {
    pub fn conformal(profile: Bump) -> Self {
        Self {
            kind: PerturbationKind::Conformal,
            profile,
        }
    }

    pub fn radial_rr(profile: Bump) -> Self {
        Self {
            kind: PerturbationKind::RadialRR,
            profile,
        }
    }

    pub fn support(&self) -> (f64, f64) {
        (self.profile.r_a, self.profile.r_b)
    }

    pub fn tensor(&self, metric: &RadialMetric, r: f64) -> RadialTensor {
        let rho = self.profile.value(r);
        match self.kind {
            PerturbationKind::Conformal => rho * metric.metric_tensor(r),
            PerturbationKind::RadialRR => RadialTensor::new(rho, 0.0),
        }
    }

    fn check_support(&self, metric: &RadialMetric) -> Result<()> {
        let (lo, hi) = self.support();
        if lo > metric.r0() && hi < metric.r1() {
            Ok(())
        } else {
            Err(invalid(format!(
                "perturbation support [{lo}, {hi}] must lie inside ({}, {})",
                metric.r0(),
                metric.r1()
            )))
        }
    }

    /// `g + t h`, as a general radial metric for quadrature.
    pub fn perturbed_metric(&self, metric: &RadialMetric, t: f64) -> Result<RadialMetric> {
        let (lo, hi) = self.support();
        let bump = self.profile;
        let base_a = metric.clone();
        let base_b = metric.clone();
        let out = match self.kind {
            PerturbationKind::Conformal => {
                let factor = move |r: f64| (1.0 + t * bump.value(r)).sqrt();
                RadialMetric::general(
                    RadialFn::sampled(move |r| factor(r) * base_a.coefficients(r).0),
                    RadialFn::sampled(move |r| factor(r) * base_b.coefficients(r).1),
                    metric.r0(),
                    metric.r1(),
                )?
            }
            PerturbationKind::RadialRR => RadialMetric::general(
                RadialFn::sampled(move |r| {
                    let a = base_a.coefficients(r).0;
                    (a * a + t * bump.value(r)).sqrt()
                }),
                RadialFn::sampled(move |r| base_b.coefficients(r).1),
                metric.r0(),
                metric.r1(),
            )?,
        };
        Ok(out.with_breakpoints(vec![lo, hi]))
    }
}

/// `-dφ⊗dφ + ½|∇φ|^2 g` in radial coefficients.
pub fn stress_energy(potential: &CapacitaryPotential, r: f64) -> RadialTensor {
    let (a, b) = potential.metric().coefficients(r);
    stress_energy_from_gradient(a, b, potential.dphi(r))
}

/// Stress-energy of any radial function with derivative `dphi` where the
/// metric coefficients are `(a, b)`.
pub fn stress_energy_from_gradient(a: f64, b: f64, dphi: f64) -> RadialTensor {
    let grad = dphi / a;
    RadialTensor::new(-0.5 * dphi * dphi, 0.5 * grad * grad * b * b)
}

/// `(1/4π) ∫ ⟨S_φ, h⟩ dV` for an arbitrary radial tensor field supported in
/// `[lo, hi]`.
pub fn pairing_integral(
    potential: &CapacitaryPotential,
    h: impl Fn(f64) -> RadialTensor,
    support: (f64, f64),
    quad: &Quadrature,
) -> Result<f64> {
    let metric = potential.metric();
    let (lo, hi) = support;
    if !(lo > metric.r0() && hi < metric.r1() && hi > lo) {
        return Err(invalid(format!(
            "support [{lo}, {hi}] must lie inside ({}, {})",
            metric.r0(),
            metric.r1()
        )));
    }
    let integrand = |r: f64| {
        let (a, b) = metric.coefficients(r);
        stress_energy(potential, r).pairing(&h(r), a, b) * a * b * b
    };
    // the 4π of the volume form cancels the 1/4π
    Ok(quad.integrate(integrand, lo, hi)?.value)
}

/// Predicted `d(cap)/dt` for the perturbation.
pub fn gradient_pairing(
    potential: &CapacitaryPotential,
    h: &MetricPerturbation,
    quad: &Quadrature,
) -> Result<f64> {
    let metric = potential.metric();
    h.check_support(metric)?;
    pairing_integral(potential, |r| h.tensor(metric, r), h.support(), quad)
}

/// `L_X g` for the radial field `X = ξ(r) ∂_r`.
pub fn radial_lie_derivative(metric: &RadialMetric, xi: &Bump, r: f64) -> RadialTensor {
    let a = metric.a_jet(r);
    let b = metric.b_jet(r);
    let (x, dx) = (xi.value(r), xi.d1(r));
    RadialTensor::new(
        2.0 * a.value * a.d1 * x + 2.0 * a.value * a.value * dx,
        2.0 * b.value * b.d1 * x,
    )
}

/// `d cap(g_t)/dt` at `t = 0` by central differences with one Richardson
/// step: `(4 D(δ/2) - D(δ)) / 3`, error `O(δ^4)`.
pub fn capacity_fd(
    family: impl Fn(f64) -> Result<RadialMetric>,
    delta: f64,
    quad: &Quadrature,
) -> Result<f64> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(invalid(format!("finite-difference step must be positive, got {delta}")));
    }
    let cap = |t: f64| -> Result<f64> { capacity_quadrature(&family(t)?, quad) };
    let central = |d: f64| -> Result<f64> { Ok((cap(d)? - cap(-d)?) / (2.0 * d)) };
    let coarse = central(delta)?;
    let fine = central(0.5 * delta)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

/// `d/dr cap(S_r)` for the coordinate-radial flow through the sphere of
/// radius `r`: `(1/4π) |∇φ_r|^2 ⟨∂_r, ν⟩ |S_r|`, with `φ_r` the capacitary
/// potential of the exterior of `S_r`.
pub fn flow_variation(metric: &RadialMetric, r: f64, quad: &Quadrature) -> Result<f64> {
    let exterior = metric.with_inner_radius(r)?;
    let potential = capacitary_potential(&exterior, quad)?;
    let (a, _) = exterior.coefficients(r);
    let normal_speed = a;
    Ok(potential.grad_norm_sq(r) * normal_speed * exterior.sphere_area(r) / (4.0 * std::f64::consts::PI))
}

/// Central difference of the exterior capacity as the inner radius moves.
pub fn moving_boundary_fd(metric: &RadialMetric, r: f64, step: f64, quad: &Quadrature) -> Result<f64> {
    let cap = |s: f64| capacity_quadrature(&metric.with_inner_radius(s)?, quad);
    Ok((cap(r + step)? - cap(r - step)?) / (2.0 * step))
}

/// One comparison of the analytic gradient against finite differences.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GradientCheck {
    pub perturbation: MetricPerturbation,
    pub fd: f64,
    pub pairing: f64,
    pub rel_error: f64,
}

pub fn gradient_check(
    potential: &CapacitaryPotential,
    h: &MetricPerturbation,
    delta: f64,
    quad: &Quadrature,
) -> Result<GradientCheck> {
    let metric = potential.metric();
    let pairing = gradient_pairing(potential, h, quad)?;
    let fd = capacity_fd(|t| h.perturbed_metric(metric, t), delta, quad)?;
    Ok(GradientCheck {
        perturbation: *h,
        fd,
        pairing,
        rel_error: (fd - pairing).abs() / pairing.abs().max(1.0),
    })
}

/// Random bump of either kind supported a little outside `r0`, amplitude at
/// most 0.1.
pub fn random_perturbation<R: RngExt + ?Sized>(rng: &mut R, r0: f64) -> MetricPerturbation {
    let scale = r0.abs().max(1.0);
    let r_a = r0 + scale * rng.random_range(0.05..2.0);
    let r_b = r_a + scale * rng.random_range(0.3..3.0);
    let amplitude = rng.random_range(0.01..0.1);
    let profile = Bump {
        r_a,
        r_b,
        amplitude,
    };
    if rng.random_bool(0.5) {
        MetricPerturbation::conformal(profile)
    } else {
        MetricPerturbation::radial_rr(profile)
    }
}
