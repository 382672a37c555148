//! Fixed-step classical Runge-Kutta for small first-order systems.

use crate::error::{invalid, Error, Result};

pub const RK4_ORDER: f64 = 4.0;

pub fn rk4_step<const N: usize>(
    f: &impl Fn(f64, [f64; N]) -> [f64; N],
    t: f64,
    y: [f64; N],
    h: f64,
) -> [f64; N] {
    let axpy = |y: [f64; N], k: [f64; N], s: f64| {
        let mut out = y;
        for i in 0..N {
            out[i] += s * k[i];
        }
        out
    };
    let k1 = f(t, y);
    let k2 = f(t + 0.5 * h, axpy(y, k1, 0.5 * h));
    let k3 = f(t + 0.5 * h, axpy(y, k2, 0.5 * h));
    let k4 = f(t + h, axpy(y, k3, h));
    let mut out = y;
    for i in 0..N {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

/// Integrate from `grid[0]` (where the state is `y0`) through every grid
/// node, taking equal substeps no longer than `max_step` between nodes.
/// The grid must be strictly monotone in either direction.
pub fn integrate_on_grid<const N: usize>(
    f: impl Fn(f64, [f64; N]) -> [f64; N],
    grid: &[f64],
    y0: [f64; N],
    max_step: f64,
) -> Result<Vec<[f64; N]>> {
    if grid.is_empty() {
        return Err(invalid("empty integration grid"));
    }
    if !(max_step > 0.0 && max_step.is_finite()) {
        return Err(invalid(format!("max step must be positive, got {max_step}")));
    }
    let increasing = grid.len() < 2 || grid[1] > grid[0];
    if !grid
        .windows(2)
        .all(|w| if increasing { w[1] > w[0] } else { w[1] < w[0] })
    {
        return Err(invalid("integration grid must be strictly monotone"));
    }
    let mut out = Vec::with_capacity(grid.len());
    let mut y = y0;
    out.push(y);
    for w in grid.windows(2) {
        let span = w[1] - w[0];
        let n = (span.abs() / max_step).ceil().max(1.0) as usize;
        let h = span / n as f64;
        for k in 0..n {
            let t = w[0] + k as f64 * h;
            y = rk4_step(&f, t, y, h);
            if y.iter().any(|v| !v.is_finite()) {
                return Err(Error::StepFailure { r: t });
            }
        }
        out.push(y);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator() {
        let grid: Vec<f64> = (0..=10).map(|k| k as f64 * 0.5).collect();
        let ys = integrate_on_grid(|_, y: [f64; 2]| [y[1], -y[0]], &grid, [0.0, 1.0], 1e-3).unwrap();
        for (t, y) in grid.iter().zip(&ys) {
            assert!((y[0] - t.sin()).abs() < 1e-12);
        }
    }

    #[test]
    fn backwards_integration() {
        let grid = [1.0, 0.5, 0.0];
        let ys = integrate_on_grid(|_, y: [f64; 1]| [y[0]], &grid, [1.0f64.exp()], 1e-3).unwrap();
        assert!((ys[2][0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn blow_up_is_reported() {
        let grid = [0.0, 2.0];
        let err = integrate_on_grid(|_, y: [f64; 1]| [y[0] * y[0] * 1e300], &grid, [1.0], 0.1);
        assert!(matches!(err, Err(Error::StepFailure { .. })));
    }

    #[test]
    fn rejects_bad_grid() {
        assert!(integrate_on_grid(|_, y: [f64; 1]| y, &[0.0, 1.0, 0.5], [1.0], 0.1).is_err());
        assert!(integrate_on_grid(|_, y: [f64; 1]| y, &[], [1.0], 0.1).is_err());
    }
}
