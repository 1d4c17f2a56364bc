//! Classical fixed-step fourth-order Runge–Kutta.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// A state that supports `self += a * x`.
pub trait Axpy: Clone {
    fn axpy(&mut self, a: f64, x: &Self);
}

impl Axpy for f64 {
    fn axpy(&mut self, a: f64, x: &Self) {
        *self += a * x;
    }
}

impl Axpy for DVector<f64> {
    fn axpy(&mut self, a: f64, x: &Self) {
        DVector::axpy(self, a, x, 1.0);
    }
}

impl Axpy for DMatrix<Complex64> {
    fn axpy(&mut self, a: f64, x: &Self) {
        self.zip_apply(x, |s, v| *s += v * a);
    }
}

/// One step of size `h` from `(t, y)` for `dy/dt = f(t, y)`.
pub fn step<S, F>(y: &S, t: f64, h: f64, mut f: F) -> S
where
    S: Axpy,
    F: FnMut(f64, &S) -> S,
{
    let k1 = f(t, y);
    let mut tmp = y.clone();
    tmp.axpy(0.5 * h, &k1);
    let k2 = f(t + 0.5 * h, &tmp);
    tmp = y.clone();
    tmp.axpy(0.5 * h, &k2);
    let k3 = f(t + 0.5 * h, &tmp);
    tmp = y.clone();
    tmp.axpy(h, &k3);
    let k4 = f(t + h, &tmp);

    let mut out = y.clone();
    out.axpy(h / 6.0, &k1);
    out.axpy(h / 3.0, &k2);
    out.axpy(h / 3.0, &k3);
    out.axpy(h / 6.0, &k4);
    out
}

/// Largest `h |λ|` kept inside the real stability interval of RK4 (about 2.785).
const STABLE_H_RADIUS: f64 = 2.5;

/// Equal sub-steps needed so that `h / n` times `radius` stays inside the
/// stability interval. `radius` bounds the spectral radius of the generator.
pub(crate) fn substeps(h: f64, radius: f64) -> usize {
    ((h * radius / STABLE_H_RADIUS).ceil() as usize).max(1)
}

/// Number of fixed steps of size `dt` that cover `[0, t_end]`.
pub(crate) fn step_count(dt: f64, t_end: f64) -> usize {
    (t_end / dt).round() as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solve(h: f64) -> f64 {
        // y' = -y + sin t, y(0) = 1 on [0, 2]
        let n = step_count(h, 2.0);
        let mut y = 1.0;
        for k in 0..n {
            y = step(&y, k as f64 * h, h, |t, y| -y + t.sin());
        }
        y
    }

    #[test]
    fn substeps_respect_stability_limit() {
        assert_eq!(substeps(0.005, 394.0), 1);
        assert_eq!(substeps(0.005, 794.0), 2);
        assert_eq!(substeps(0.01, 0.0), 1);
    }

    #[test]
    fn fourth_order_on_scalar_problem() {
        let exact = {
            let t: f64 = 2.0;
            1.5 * (-t).exp() + 0.5 * (t.sin() - t.cos())
        };
        let e1 = (solve(0.025) - exact).abs();
        let e2 = (solve(0.0125) - exact).abs();
        let ratio = e1 / e2;
        assert!((14.0..18.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn matrix_state_linear_decay() {
        let y0 = DMatrix::from_element(2, 2, Complex64::new(1.0, 0.5));
        let h = 0.01;
        let mut y = y0.clone();
        for k in 0..100 {
            y = step(&y, k as f64 * h, h, |_, y: &DMatrix<Complex64>| {
                y.map(|v| -v)
            });
        }
        let expected = (-1.0f64).exp();
        assert!((y[(0, 1)].re - expected).abs() < 1e-10);
        assert!((y[(1, 0)].im - 0.5 * expected).abs() < 1e-10);
    }
}
