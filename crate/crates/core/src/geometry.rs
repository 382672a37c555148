//! Rotationally symmetric metrics `a(r)^2 dr^2 + b(r)^2 dσ^2` and the tensor
//! algebra used by every other module.
//!
//! Two families carry curvature: the warped product `dr^2 + f(r)^2 dσ^2`
//! (`a = 1`, `b = f`) and the conformally flat `w(r)^4 (dr^2 + r^2 dσ^2)`
//! (`a = w^2`, `b = r w^2`). A third, general `(a, b)` form exists so that
//! deformed metrics can be fed to the quadrature routines; asking it for
//! curvature is an error.
//!
//! Conventions: `dσ^2` is the unit round metric on S^2, the sphere normal
//! points towards increasing `r` (into the manifold), the unit flat sphere
//! has `H = 2`, and the unit 3-sphere has `Ric = 2g`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Value and first two derivatives at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Jet {
    pub const fn new(value: f64, d1: f64, d2: f64) -> Self {
        Self { value, d1, d2 }
    }

    fn check(self, what: &'static str, r: f64) -> Result<Self> {
        if self.value.is_finite() && self.d1.is_finite() && self.d2.is_finite() {
            Ok(self)
        } else {
            Err(Error::Evaluation { what, r })
        }
    }
}

/// Central-difference step used by the fallback derivatives.
pub fn fd_step(r: f64) -> f64 {
    1e-6_f64.max(1e-6 * r.abs())
}

/// A scalar function of the radial coordinate together with its first and
/// second derivatives.
///
/// Derivatives are normally supplied analytically. When one is missing it is
/// replaced by a central difference, which is only good to roughly `h^2`
/// (first derivative) or `eps / h^2` (second derivative) and is meant for
/// cross-checking.
#[derive(Clone)]
pub struct RadialFn {
    value: ScalarFn,
    d1: Option<ScalarFn>,
    d2: Option<ScalarFn>,
}

impl fmt::Debug for RadialFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialFn")
            .field("analytic_d1", &self.d1.is_some())
            .field("analytic_d2", &self.d2.is_some())
            .finish()
    }
}

impl RadialFn {
    pub fn analytic(
        value: impl Fn(f64) -> f64 + Send + Sync + 'static,
        d1: impl Fn(f64) -> f64 + Send + Sync + 'static,
        d2: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            value: Arc::new(value),
            d1: Some(Arc::new(d1)),
            d2: Some(Arc::new(d2)),
        }
    }

    /// Analytic first derivative; the second is a central difference of it.
    pub fn with_first(
        value: impl Fn(f64) -> f64 + Send + Sync + 'static,
        d1: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            value: Arc::new(value),
            d1: Some(Arc::new(d1)),
            d2: None,
        }
    }

    /// Values only; both derivatives fall back to central differences.
    pub fn sampled(value: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            value: Arc::new(value),
            d1: None,
            d2: None,
        }
    }

    pub fn constant(c: f64) -> Self {
        Self::analytic(move |_| c, |_| 0.0, |_| 0.0)
    }

    pub fn identity() -> Self {
        Self::analytic(|r| r, |_| 1.0, |_| 0.0)
    }

    pub fn has_analytic_derivatives(&self) -> bool {
        self.d1.is_some() && self.d2.is_some()
    }

    pub fn value(&self, r: f64) -> f64 {
        (self.value)(r)
    }

    pub fn d1(&self, r: f64) -> f64 {
        match &self.d1 {
            Some(d) => d(r),
            None => self.fd_d1(r),
        }
    }

    pub fn d2(&self, r: f64) -> f64 {
        match (&self.d2, &self.d1) {
            (Some(d), _) => d(r),
            (None, Some(d1)) => {
                let h = fd_step(r);
                (d1(r + h) - d1(r - h)) / (2.0 * h)
            }
            (None, None) => self.fd_d2(r),
        }
    }

    pub fn jet(&self, r: f64) -> Jet {
        Jet::new(self.value(r), self.d1(r), self.d2(r))
    }

    pub fn fd_d1(&self, r: f64) -> f64 {
        let h = fd_step(r);
        (self.value(r + h) - self.value(r - h)) / (2.0 * h)
    }

    pub fn fd_d2(&self, r: f64) -> f64 {
        let h = fd_step(r);
        (self.value(r + h) - 2.0 * self.value(r) + self.value(r - h)) / (h * h)
    }

    /// Same function with derivatives forced to central differences.
    pub fn numerically_differentiated(&self) -> Self {
        Self {
            value: self.value.clone(),
            d1: None,
            d2: None,
        }
    }
}

/// Symmetric 2-tensor `t_rr dr⊗dr + t_ang dσ^2` at one radius.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RadialTensor {
    pub t_rr: f64,
    pub t_ang: f64,
}

impl RadialTensor {
    pub const ZERO: RadialTensor = RadialTensor {
        t_rr: 0.0,
        t_ang: 0.0,
    };

    pub const fn new(t_rr: f64, t_ang: f64) -> Self {
        Self { t_rr, t_ang }
    }

    /// `g` itself, i.e. `(a^2, b^2)`.
    pub fn metric(a: f64, b: f64) -> Self {
        Self::new(a * a, b * b)
    }

    /// `g^{ij} T_ij = t_rr / a^2 + 2 t_ang / b^2`.
    pub fn trace(&self, a: f64, b: f64) -> f64 {
        self.t_rr / (a * a) + 2.0 * self.t_ang / (b * b)
    }

    /// `g^{ik} g^{jl} S_ij T_kl`.
    pub fn pairing(&self, other: &RadialTensor, a: f64, b: f64) -> f64 {
        let a2 = a * a;
        let b2 = b * b;
        self.t_rr * other.t_rr / (a2 * a2) + 2.0 * self.t_ang * other.t_ang / (b2 * b2)
    }

    pub fn sup_abs(&self) -> f64 {
        self.t_rr.abs().max(self.t_ang.abs())
    }
}

impl Add for RadialTensor {
    type Output = RadialTensor;
    fn add(self, o: RadialTensor) -> RadialTensor {
        RadialTensor::new(self.t_rr + o.t_rr, self.t_ang + o.t_ang)
    }
}

impl Sub for RadialTensor {
    type Output = RadialTensor;
    fn sub(self, o: RadialTensor) -> RadialTensor {
        RadialTensor::new(self.t_rr - o.t_rr, self.t_ang - o.t_ang)
    }
}

impl Neg for RadialTensor {
    type Output = RadialTensor;
    fn neg(self) -> RadialTensor {
        RadialTensor::new(-self.t_rr, -self.t_ang)
    }
}

impl Mul<RadialTensor> for f64 {
    type Output = RadialTensor;
    fn mul(self, t: RadialTensor) -> RadialTensor {
        RadialTensor::new(self * t.t_rr, self * t.t_ang)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Curvature {
    pub ric: RadialTensor,
    pub scalar: f64,
}

/// Ricci and scalar curvature of `dr^2 + f^2 dσ^2`.
pub fn curvature_warped(f: &RadialFn, r: f64) -> Result<Curvature> {
    let j = f.jet(r).check("warping function", r)?;
    let ric = RadialTensor::new(
        -2.0 * j.d2 / j.value,
        1.0 - j.d1 * j.d1 - j.value * j.d2,
    );
    let scalar = ric.trace(1.0, j.value);
    finite_curvature(ric, scalar, r)
}

/// Ricci and scalar curvature of `w^4 (dr^2 + r^2 dσ^2)`.
///
/// The angular coefficient is returned against the unit sphere metric, so it
/// carries the `r^2` that multiplies `dσ^2` in the flat metric.
pub fn curvature_conformal(w: &RadialFn, r: f64) -> Result<Curvature> {
    let j = w.jet(r).check("conformal factor", r)?;
    let (w0, w1, w2) = (j.value, j.d1, j.d2);
    let ric_rr = -(4.0 * w2 / w0 + 4.0 * w1 / (r * w0) - 4.0 * w1 * w1 / (w0 * w0));
    let ric_ang =
        -(2.0 * w2 / w0 + 6.0 * w1 / (r * w0) + 2.0 * w1 * w1 / (w0 * w0)) * r * r;
    let ric = RadialTensor::new(ric_rr, ric_ang);
    let scalar = ric.trace(w0 * w0, r * w0 * w0);
    finite_curvature(ric, scalar, r)
}

fn finite_curvature(ric: RadialTensor, scalar: f64, r: f64) -> Result<Curvature> {
    if ric.t_rr.is_finite() && ric.t_ang.is_finite() && scalar.is_finite() {
        Ok(Curvature { ric, scalar })
    } else {
        Err(Error::Evaluation {
            what: "curvature",
            r,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MetricFamily {
    WarpedProduct,
    ConformallyFlat,
    /// General `(a, b)` radial metric; quadrature only.
    General,
}

#[derive(Clone)]
enum Profile {
    Warped(RadialFn),
    Conformal(RadialFn),
    General { a: RadialFn, b: RadialFn },
}

/// Schwarzschild mass and inner radius in isotropic coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchwarzschildParams {
    pub m: f64,
    pub r0: f64,
}

impl SchwarzschildParams {
    pub fn new(m: f64, r0: f64) -> Result<Self> {
        let p = Self { m, r0 };
        p.validate()?;
        Ok(p)
    }

    /// `r0 >= m/2` for positive mass, `r0 > |m|/2` otherwise.
    pub fn validate(&self) -> Result<()> {
        let ok = self.m.is_finite()
            && self.r0.is_finite()
            && if self.m > 0.0 {
                self.r0 >= 0.5 * self.m
            } else {
                self.r0 > 0.5 * self.m.abs()
            };
        if ok {
            Ok(())
        } else {
            Err(invalid(format!(
                "Schwarzschild parameters out of range: m = {}, r0 = {}",
                self.m, self.r0
            )))
        }
    }

    /// `r0 + m/2`, the capacity of the inner sphere.
    pub fn capacity(&self) -> f64 {
        self.r0 + 0.5 * self.m
    }
}

/// Conformal factor `1 + m/(2r)`.
pub fn schwarzschild_factor(m: f64) -> RadialFn {
    RadialFn::analytic(
        move |r| 1.0 + 0.5 * m / r,
        move |r| -0.5 * m / (r * r),
        move |r| m / (r * r * r),
    )
}

#[derive(Clone)]
pub struct RadialMetric {
    profile: Profile,
    r0: f64,
    r1: f64,
    breakpoints: Vec<f64>,
}

impl fmt::Debug for RadialMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialMetric")
            .field("family", &self.family())
            .field("r0", &self.r0)
            .field("r1", &self.r1)
            .finish()
    }
}

impl RadialMetric {
    pub fn warped(f: RadialFn, r0: f64, r1: f64) -> Result<Self> {
        Self::build(Profile::Warped(f), r0, r1)
    }

    pub fn conformal(w: RadialFn, r0: f64, r1: f64) -> Result<Self> {
        Self::build(Profile::Conformal(w), r0, r1)
    }

    /// `a^2 dr^2 + b^2 dσ^2` with no curvature support.
    pub fn general(a: RadialFn, b: RadialFn, r0: f64, r1: f64) -> Result<Self> {
        Self::build(Profile::General { a, b }, r0, r1)
    }

    /// Euclidean exterior of the ball of radius `r0`, as a warped product.
    pub fn flat(r0: f64) -> Result<Self> {
        Self::warped(RadialFn::identity(), r0, f64::INFINITY)
    }

    /// Euclidean exterior as the conformally flat metric with `w = 1`.
    pub fn flat_conformal(r0: f64) -> Result<Self> {
        Self::conformal(RadialFn::constant(1.0), r0, f64::INFINITY)
    }

    pub fn schwarzschild(params: SchwarzschildParams) -> Result<Self> {
        params.validate()?;
        Self::conformal(schwarzschild_factor(params.m), params.r0, f64::INFINITY)
    }

    /// `dr^2 + cos(r)^2 dσ^2` on `[r0, r1] ⊂ (-π/2, π/2)`.
    pub fn unit_sphere_band(r0: f64, r1: f64) -> Result<Self> {
        if !(r0 > -FRAC_PI_2 && r1 < FRAC_PI_2) {
            return Err(invalid(format!(
                "sphere band [{r0}, {r1}] must lie inside (-π/2, π/2)"
            )));
        }
        Self::warped(
            RadialFn::analytic(f64::cos, |r| -r.sin(), |r| -r.cos()),
            r0,
            r1,
        )
    }

    fn build(profile: Profile, r0: f64, r1: f64) -> Result<Self> {
        if !r0.is_finite() || r1.is_nan() || r1 <= r0 {
            return Err(invalid(format!("need finite r0 < r1, got [{r0}, {r1}]")));
        }
        let m = Self {
            profile,
            r0,
            r1,
            breakpoints: Vec::new(),
        };
        m.validate()?;
        Ok(m)
    }

    fn sample_radii(&self) -> Vec<f64> {
        if self.r1.is_finite() {
            (0..=32)
                .map(|k| self.r0 + (self.r1 - self.r0) * k as f64 / 32.0)
                .collect()
        } else {
            let base = self.r0.abs().max(1e-3);
            let mut v = vec![self.r0];
            v.extend((0..=40).map(|k| self.r0 + base * 10f64.powf(-2.0 + 0.2 * k as f64)));
            v
        }
    }

    fn validate(&self) -> Result<()> {
        for r in self.sample_radii() {
            let (a, b) = self.coefficients(r);
            if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
                return Err(invalid(format!(
                    "metric coefficients must be positive and finite: a({r}) = {a}, b({r}) = {b}"
                )));
            }
        }
        if let (Profile::Conformal(w), true) = (&self.profile, self.r1.is_infinite()) {
            let far = 1e9 * self.r0.abs().max(1.0);
            let dev = (w.value(far) - 1.0).abs();
            if !(dev <= 1e-3) {
                return Err(invalid(format!(
                    "conformal factor must tend to 1 at infinity (w({far:e}) - 1 = {dev:e})"
                )));
            }
        }
        Ok(())
    }

    /// Extra radii at which quadrature should split, e.g. the edges of a
    /// compactly supported perturbation.
    pub fn with_breakpoints(mut self, mut points: Vec<f64>) -> Self {
        points.retain(|&p| p > self.r0 && p < self.r1);
        points.sort_by(f64::total_cmp);
        points.dedup();
        self.breakpoints = points;
        self
    }

    /// The same metric restricted to `[r0, r1]` with a different inner radius.
    pub fn with_inner_radius(&self, r0: f64) -> Result<Self> {
        let m = Self::build(self.profile.clone(), r0, self.r1)?;
        Ok(m.with_breakpoints(self.breakpoints.clone()))
    }

    pub fn with_outer_radius(&self, r1: f64) -> Result<Self> {
        let m = Self::build(self.profile.clone(), self.r0, r1)?;
        Ok(m.with_breakpoints(self.breakpoints.clone()))
    }

    pub fn family(&self) -> MetricFamily {
        match self.profile {
            Profile::Warped(_) => MetricFamily::WarpedProduct,
            Profile::Conformal(_) => MetricFamily::ConformallyFlat,
            Profile::General { .. } => MetricFamily::General,
        }
    }

    pub fn is_curvature_bearing(&self) -> bool {
        self.family() != MetricFamily::General
    }

    pub fn r0(&self) -> f64 {
        self.r0
    }

    pub fn r1(&self) -> f64 {
        self.r1
    }

    pub fn is_asymptotically_flat(&self) -> bool {
        self.r1.is_infinite()
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    /// Breakpoints inside `(lo, hi)`, bracketed by `lo` and `hi`.
    pub fn segment_points(&self, lo: f64, hi: f64) -> Vec<f64> {
        let mut pts = vec![lo];
        pts.extend(self.breakpoints.iter().copied().filter(|&p| p > lo && p < hi));
        pts.push(hi);
        pts
    }

    /// The warping function `f` for warped products.
    pub fn warping(&self) -> Option<&RadialFn> {
        match &self.profile {
            Profile::Warped(f) => Some(f),
            _ => None,
        }
    }

    /// The conformal factor `w` for conformally flat metrics.
    pub fn conformal_factor(&self) -> Option<&RadialFn> {
        match &self.profile {
            Profile::Conformal(w) => Some(w),
            _ => None,
        }
    }

    /// `(a(r), b(r))` without derivatives.
    pub fn coefficients(&self, r: f64) -> (f64, f64) {
        match &self.profile {
            Profile::Warped(f) => (1.0, f.value(r)),
            Profile::Conformal(w) => {
                let w = w.value(r);
                (w * w, r * w * w)
            }
            Profile::General { a, b } => (a.value(r), b.value(r)),
        }
    }

    pub fn a_jet(&self, r: f64) -> Jet {
        match &self.profile {
            Profile::Warped(_) => Jet::new(1.0, 0.0, 0.0),
            Profile::Conformal(w) => {
                let j = w.jet(r);
                Jet::new(
                    j.value * j.value,
                    2.0 * j.value * j.d1,
                    2.0 * (j.d1 * j.d1 + j.value * j.d2),
                )
            }
            Profile::General { a, .. } => a.jet(r),
        }
    }

    pub fn b_jet(&self, r: f64) -> Jet {
        match &self.profile {
            Profile::Warped(f) => f.jet(r),
            Profile::Conformal(w) => {
                let j = w.jet(r);
                Jet::new(
                    r * j.value * j.value,
                    j.value * j.value + 2.0 * r * j.value * j.d1,
                    4.0 * j.value * j.d1 + 2.0 * r * (j.d1 * j.d1 + j.value * j.d2),
                )
            }
            Profile::General { b, .. } => b.jet(r),
        }
    }

    /// `g` as a radial tensor at `r`.
    pub fn metric_tensor(&self, r: f64) -> RadialTensor {
        let (a, b) = self.coefficients(r);
        RadialTensor::metric(a, b)
    }

    pub fn curvature(&self, r: f64) -> Result<Curvature> {
        match &self.profile {
            Profile::Warped(f) => curvature_warped(f, r),
            Profile::Conformal(w) => curvature_conformal(w, r),
            Profile::General { .. } => Err(Error::UnsupportedFamily),
        }
    }

    /// `4π b(r)^2`.
    pub fn sphere_area(&self, r: f64) -> f64 {
        let (_, b) = self.coefficients(r);
        4.0 * PI * b * b
    }

    /// Mean curvature `2 b' / (a b)` of the coordinate sphere, normal towards
    /// increasing `r`.
    pub fn mean_curvature(&self, r: f64) -> Result<f64> {
        let a = self.a_jet(r).value;
        let b = self.b_jet(r).check("areal radius", r)?;
        let h = 2.0 * b.d1 / (a * b.value);
        if h.is_finite() {
            Ok(h)
        } else {
            Err(Error::Evaluation {
                what: "mean curvature",
                r,
            })
        }
    }
}

pub fn sphere_area(metric: &RadialMetric, r: f64) -> f64 {
    metric.sphere_area(r)
}

pub fn mean_curvature_sphere(metric: &RadialMetric, r: f64) -> Result<f64> {
    metric.mean_curvature(r)
}

pub fn tensor_pairing(s: &RadialTensor, t: &RadialTensor, metric: &RadialMetric, r: f64) -> f64 {
    let (a, b) = metric.coefficients(r);
    s.pairing(t, a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn flat_warped_is_flat() {
        for r in [0.5, 1.0, 7.0] {
            let c = curvature_warped(&RadialFn::identity(), r).unwrap();
            assert_eq!(c.ric, RadialTensor::ZERO);
            assert_eq!(c.scalar, 0.0);
        }
    }

    #[test]
    fn round_sphere_curvature() {
        let m = RadialMetric::unit_sphere_band(-1.2, 1.2).unwrap();
        let c0 = m.curvature(0.0).unwrap();
        assert!(close(c0.ric.t_rr, 2.0, 1e-15));
        assert!(close(c0.ric.t_ang, 2.0, 1e-15));
        assert!(close(c0.scalar, 6.0, 1e-15));
        let c = m.curvature(PI / 4.0).unwrap();
        assert!(close(c.scalar, 6.0, 1e-14));
        // Ric = 2g
        let g = m.metric_tensor(PI / 4.0);
        assert!(close(c.ric.t_ang, 2.0 * g.t_ang, 1e-14));
    }

    #[test]
    fn conformal_flat_is_flat() {
        let c = curvature_conformal(&RadialFn::constant(1.0), 3.0).unwrap();
        assert_eq!(c.ric, RadialTensor::ZERO);
        assert_eq!(c.scalar, 0.0);
    }

    #[test]
    fn schwarzschild_scalar_flat() {
        let c = curvature_conformal(&schwarzschild_factor(2.0), 3.0).unwrap();
        assert!(c.scalar.abs() < 1e-12);
    }

    #[test]
    fn conformal_ricci_against_numeric_derivatives() {
        // w = 1 + 1/r at r = 2 with derivatives from central differences of w
        let w = RadialFn::analytic(|r| 1.0 + 1.0 / r, |r| -1.0 / (r * r), |r| 2.0 / (r * r * r));
        let c = curvature_conformal(&w, 2.0).unwrap();
        // hand evaluation: w = 3/2, w' = -1/4, w'' = 1/4
        let (w0, w1, w2) = (1.5, -0.25, 0.25);
        let expect = -(4.0 * w2 / w0 + 4.0 * w1 / (2.0 * w0) - 4.0 * w1 * w1 / (w0 * w0));
        assert!(close(c.ric.t_rr, expect, 1e-15));
        let cn = curvature_conformal(&w.numerically_differentiated(), 2.0).unwrap();
        assert!((cn.ric.t_rr - c.ric.t_rr).abs() < 1e-3);
    }

    #[test]
    fn sphere_area_values() {
        let flat = RadialMetric::flat(1.0).unwrap();
        assert!(close(flat.sphere_area(1.0), 4.0 * PI, 1e-15));
        let s = RadialMetric::schwarzschild(SchwarzschildParams::new(2.0, 1.0).unwrap()).unwrap();
        assert!(close(s.sphere_area(1.0), 64.0 * PI, 1e-15));
        let band = RadialMetric::unit_sphere_band(-1.0, 1.0).unwrap();
        assert!(close(band.sphere_area(0.0), 4.0 * PI, 1e-15));
    }

    #[test]
    fn mean_curvature_values() {
        let flat = RadialMetric::flat(1.0).unwrap();
        assert!(close(flat.mean_curvature(1.0).unwrap(), 2.0, 1e-15));
        let s = RadialMetric::schwarzschild(SchwarzschildParams::new(2.0, 1.0).unwrap()).unwrap();
        assert!(s.mean_curvature(1.0).unwrap().abs() < 1e-12);
        assert!(close(s.mean_curvature(3.0).unwrap(), 3.0 / 16.0, 1e-14));
    }

    #[test]
    fn mean_curvature_is_log_derivative_of_area_along_unit_normal() {
        // dA/ds = H A with ds = a dr
        let s = RadialMetric::schwarzschild(SchwarzschildParams::new(2.0, 1.0).unwrap()).unwrap();
        let r = 3.0;
        let h = 1e-5;
        let d_area = (s.sphere_area(r + h) - s.sphere_area(r - h)) / (2.0 * h);
        let (a, _) = s.coefficients(r);
        let h_fd = d_area / (a * s.sphere_area(r));
        assert!((h_fd - 3.0 / 16.0).abs() < 1e-8);
    }

    #[test]
    fn pairing_with_metric_is_trace() {
        let m = RadialMetric::flat(1.0).unwrap();
        let g = m.metric_tensor(2.0);
        assert!(close(tensor_pairing(&g, &g, &m, 2.0), 3.0, 1e-15));
        let t = RadialTensor::new(0.3, -1.7);
        let (a, b) = m.coefficients(2.0);
        assert!(close(tensor_pairing(&g, &t, &m, 2.0), t.trace(a, b), 1e-15));
    }

    #[test]
    fn schwarzschild_param_constraints() {
        assert!(SchwarzschildParams::new(2.0, 1.0).is_ok());
        assert!(SchwarzschildParams::new(2.0, 0.99).is_err());
        assert!(SchwarzschildParams::new(-1.0, 0.5).is_err());
        assert!(SchwarzschildParams::new(-1.0, 0.51).is_ok());
        assert!(SchwarzschildParams::new(0.0, 0.0).is_err());
    }

    #[test]
    fn metric_validation() {
        assert!(RadialMetric::flat(0.0).is_err());
        assert!(RadialMetric::flat(2.0).unwrap().with_outer_radius(1.0).is_err());
        assert!(RadialMetric::conformal(RadialFn::constant(2.0), 1.0, f64::INFINITY).is_err());
        assert!(RadialMetric::unit_sphere_band(-1.6, 0.0).is_err());
        let general = RadialMetric::general(
            RadialFn::constant(1.0),
            RadialFn::identity(),
            1.0,
            f64::INFINITY,
        )
        .unwrap();
        assert_eq!(general.curvature(2.0), Err(Error::UnsupportedFamily));
    }

    #[test]
    fn fallback_derivatives() {
        let f = RadialFn::sampled(|r: f64| r.powi(3));
        assert!((f.d1(2.0) - 12.0).abs() < 1e-6);
        assert!((f.d2(2.0) - 12.0).abs() < 1e-2);
        let g = RadialFn::with_first(|r: f64| r.powi(3), |r| 3.0 * r * r);
        assert!((g.d2(2.0) - 12.0).abs() < 1e-6);
    }
}
