//! JSON metric specifications and run configuration files.
//!
//! ```json
//! { "family": "conformal", "spec": "schwarzschild", "m": 2, "r0": 1, "r1": "inf" }
//! ```
//!
//! A `custom` spec carries a table of the warping function (warped family)
//! or the conformal factor (conformal family), interpolated by a cubic
//! spline. Asymptotically flat custom metrics continue the table with a
//! linear warping or a `1 + c/r` conformal tail.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{invalid, Result};
use crate::geometry::{RadialFn, RadialMetric, SchwarzschildParams};
use crate::harmonicstatic::POLE_MARGIN;
use crate::potential::{capacitary_potential, CapacitaryPotential};
use crate::quadrature::Quadrature;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Warped,
    Conformal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SpecKind {
    Flat,
    Schwarzschild,
    Sphere,
    Custom,
}

impl fmt::Display for SpecKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SpecKind::Flat => "flat",
            SpecKind::Schwarzschild => "schwarzschild",
            SpecKind::Sphere => "sphere",
            SpecKind::Custom => "custom",
        };
        f.write_str(s)
    }
}

/// Outer radius: a number or `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OuterRadius(pub f64);

impl Serialize for OuterRadius {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for OuterRadius {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(OuterRadius(v)),
            Raw::Text(s) => parse_outer_radius(&s).map_err(serde::de::Error::custom),
        }
    }
}

pub fn parse_outer_radius(s: &str) -> std::result::Result<OuterRadius, String> {
    match s.trim().to_ascii_lowercase().as_str() {
        "inf" | "infinity" => Ok(OuterRadius(f64::INFINITY)),
        other => other
            .parse::<f64>()
            .map(OuterRadius)
            .map_err(|_| format!("expected a number or \"inf\", got {s:?}")),
    }
}

/// Samples of the warping function or conformal factor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientTable {
    pub r: Vec<f64>,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricSpec {
    #[serde(default)]
    pub family: Option<Family>,
    pub spec: SpecKind,
    #[serde(default)]
    pub m: f64,
    #[serde(default)]
    pub r0: Option<f64>,
    #[serde(default)]
    pub r1: Option<OuterRadius>,
    #[serde(default)]
    pub table: Option<CoefficientTable>,
}

impl MetricSpec {
    pub fn schwarzschild(m: f64, r0: f64) -> Self {
        MetricSpec {
            family: Some(Family::Conformal),
            spec: SpecKind::Schwarzschild,
            m,
            r0: Some(r0),
            r1: None,
            table: None,
        }
    }

    pub fn flat(r0: f64) -> Self {
        MetricSpec {
            family: Some(Family::Warped),
            spec: SpecKind::Flat,
            m: 0.0,
            r0: Some(r0),
            r1: None,
            table: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| invalid(format!("metric spec: {e}")))
    }

    fn r0_or(&self, default: f64) -> f64 {
        self.r0.unwrap_or(default)
    }

    fn r1_or(&self, default: f64) -> f64 {
        self.r1.map_or(default, |r| r.0)
    }

    /// Schwarzschild parameters when the spec is an exterior in that family
    /// (flat counts as `m = 0`).
    pub fn schwarzschild_params(&self) -> Option<SchwarzschildParams> {
        match self.spec {
            SpecKind::Flat => SchwarzschildParams::new(0.0, self.r0_or(1.0)).ok(),
            SpecKind::Schwarzschild => SchwarzschildParams::new(self.m, self.r0_or(1.0)).ok(),
            _ => None,
        }
        .filter(|_| self.r1_or(f64::INFINITY).is_infinite())
    }

    pub fn build(&self) -> Result<RadialMetric> {
        let r1 = self.r1_or(f64::INFINITY);
        let metric = match self.spec {
            SpecKind::Flat => {
                let r0 = self.r0_or(1.0);
                match self.family.unwrap_or(Family::Warped) {
                    Family::Warped => RadialMetric::warped(RadialFn::identity(), r0, r1)?,
                    Family::Conformal => RadialMetric::conformal(RadialFn::constant(1.0), r0, r1)?,
                }
            }
            SpecKind::Schwarzschild => {
                if self.family == Some(Family::Warped) {
                    return Err(invalid("Schwarzschild is provided in isotropic (conformal) form only"));
                }
                let p = SchwarzschildParams::new(self.m, self.r0_or(1.0))?;
                if r1.is_infinite() {
                    RadialMetric::schwarzschild(p)?
                } else {
                    RadialMetric::schwarzschild(p)?.with_outer_radius(r1)?
                }
            }
            SpecKind::Sphere => {
                if self.family == Some(Family::Conformal) {
                    return Err(invalid("the sphere band is provided as a warped product only"));
                }
                let edge = FRAC_PI_2 - POLE_MARGIN;
                RadialMetric::unit_sphere_band(self.r0_or(-edge), self.r1_or(edge))?
            }
            SpecKind::Custom => self.build_custom(r1)?,
        };
        Ok(metric)
    }

    fn build_custom(&self, r1: f64) -> Result<RadialMetric> {
        let table = self
            .table
            .as_ref()
            .ok_or_else(|| invalid("custom spec needs a coefficient table"))?;
        let family = self
            .family
            .ok_or_else(|| invalid("custom spec needs a family"))?;
        let first = *table.r.first().ok_or_else(|| invalid("empty coefficient table"))?;
        let last = *table.r.last().unwrap_or(&first);
        let r0 = self.r0_or(first);
        if r0 < first || (r1.is_finite() && r1 > last) {
            return Err(invalid(format!(
                "domain [{r0}, {r1}] leaves the table range [{first}, {last}]"
            )));
        }
        let af = r1.is_infinite();
        match family {
            Family::Warped => {
                let spline = CubicSpline::new(&table.r, &table.values, None)?;
                let f = extend(spline, af.then_some(Tail::Linear));
                RadialMetric::warped(f, r0, r1)
            }
            Family::Conformal => {
                let wl = *table.values.last().unwrap_or(&1.0);
                let c = (wl - 1.0) * last;
                let end_slope = af.then_some(-c / (last * last));
                let spline = CubicSpline::new(&table.r, &table.values, end_slope)?;
                let w = extend(spline, af.then_some(Tail::Harmonic(c)));
                RadialMetric::conformal(w, r0, r1)
            }
        }
    }

    /// Capacitary potential, in closed form for the Schwarzschild family.
    pub fn potential(&self, quad: &Quadrature) -> Result<CapacitaryPotential> {
        match self.schwarzschild_params() {
            Some(p) => CapacitaryPotential::schwarzschild_closed_form(p, *quad),
            None => capacitary_potential(&self.build()?, quad),
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Tail {
    /// `f(r) = f(R) + f'(R)(r - R)`.
    Linear,
    /// `w(r) = 1 + c/r`.
    Harmonic(f64),
}

fn extend(spline: CubicSpline, tail: Option<Tail>) -> RadialFn {
    let s = Arc::new(spline);
    let end = s.end();
    let (s0, s1, s2) = (s.clone(), s.clone(), s);
    let jet = move |r: f64, k: usize| -> f64 {
        let sp = match k {
            0 => &s0,
            1 => &s1,
            _ => &s2,
        };
        if r <= end {
            return sp.eval(r)[k];
        }
        match tail {
            None => f64::NAN,
            Some(Tail::Linear) => {
                let [v, d, _] = sp.eval(end);
                [v + d * (r - end), d, 0.0][k]
            }
            Some(Tail::Harmonic(c)) => [1.0 + c / r, -c / (r * r), 2.0 * c / (r * r * r)][k],
        }
    };
    let (j0, j1, j2) = (jet.clone(), jet.clone(), jet);
    RadialFn::analytic(move |r| j0(r, 0), move |r| j1(r, 1), move |r| j2(r, 2))
}

/// Cubic spline, natural at the left end and natural or clamped at the
/// right end.
#[derive(Debug, Clone)]
pub struct CubicSpline {
    x: Vec<f64>,
    y: Vec<f64>,
    /// Second derivatives at the knots.
    m: Vec<f64>,
}

impl CubicSpline {
    pub fn new(x: &[f64], y: &[f64], right_slope: Option<f64>) -> Result<Self> {
        let n = x.len();
        if n < 3 || y.len() != n {
            return Err(invalid("coefficient table needs at least 3 points and matching lengths"));
        }
        if x.windows(2).any(|w| !(w[1] > w[0])) || x.iter().chain(y).any(|v| !v.is_finite()) {
            return Err(invalid("table radii must be finite and strictly increasing"));
        }
        let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
        // tridiagonal system for the knot second derivatives
        let mut sub = vec![0.0; n];
        let mut diag = vec![1.0; n];
        let mut sup = vec![0.0; n];
        let mut rhs = vec![0.0; n];
        for i in 1..n - 1 {
            sub[i] = h[i - 1];
            diag[i] = 2.0 * (h[i - 1] + h[i]);
            sup[i] = h[i];
            rhs[i] = 6.0 * ((y[i + 1] - y[i]) / h[i] - (y[i] - y[i - 1]) / h[i - 1]);
        }
        if let Some(slope) = right_slope {
            let k = n - 1;
            sub[k] = h[k - 1];
            diag[k] = 2.0 * h[k - 1];
            rhs[k] = 6.0 * (slope - (y[k] - y[k - 1]) / h[k - 1]);
        }
        for i in 1..n {
            let w = sub[i] / diag[i - 1];
            diag[i] -= w * sup[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        let mut m = vec![0.0; n];
        m[n - 1] = rhs[n - 1] / diag[n - 1];
        for i in (0..n - 1).rev() {
            m[i] = (rhs[i] - sup[i] * m[i + 1]) / diag[i];
        }
        Ok(CubicSpline {
            x: x.to_vec(),
            y: y.to_vec(),
            m,
        })
    }

    pub fn end(&self) -> f64 {
        self.x[self.x.len() - 1]
    }

    /// Value, first and second derivative; NaN outside the knots.
    pub fn eval(&self, r: f64) -> [f64; 3] {
        let n = self.x.len();
        if !(r >= self.x[0] && r <= self.x[n - 1]) {
            return [f64::NAN; 3];
        }
        let i = self.x.partition_point(|&v| v <= r).clamp(1, n - 1) - 1;
        let h = self.x[i + 1] - self.x[i];
        let (a, b) = ((self.x[i + 1] - r) / h, (r - self.x[i]) / h);
        let (mi, mj) = (self.m[i], self.m[i + 1]);
        let (yi, yj) = (self.y[i], self.y[i + 1]);
        let value = a * yi + b * yj + ((a * a * a - a) * mi + (b * b * b - b) * mj) * h * h / 6.0;
        let d1 = (yj - yi) / h + ((1.0 - 3.0 * a * a) * mi + (3.0 * b * b - 1.0) * mj) * h / 6.0;
        let d2 = a * mi + b * mj;
        [value, d1, d2]
    }
}

/// Optional run settings read with `--config`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default)]
    pub metric: Option<MetricSpec>,
    #[serde(default)]
    pub quadrature_tol: Option<f64>,
    #[serde(default)]
    pub residual_tol: Option<f64>,
    #[serde(default)]
    pub fd_delta: Option<f64>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| invalid(format!("reading {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| invalid(format!("{}: {e}", path.display())))
    }
}
