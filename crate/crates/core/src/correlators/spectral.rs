//! Evolved bath spectral density for a discretized reservoir.
//!
//! For bath modes `r, s` with detunings `a = ω₀ - ω_r` and `b = ω_s - ω₀`
//! the nested time integrals
//!
//! ```text
//! ∫₀ᵗ dτ e^{iaτ} ∫₀^{t-τ} dt₁ e^{iat₁} ∫₀^{t₁} dt₂ e^{ibt₂}
//! ```
//!
//! become, after substituting `x = t₂`, `y = t₁`, `z = τ + t₁`, an integral
//! of `exp(i(az + bx))` over the ordered simplex `0 ≤ x ≤ y ≤ z ≤ t`. That
//! equals `t³ · exp[i(a+b)t, iat, iat, 0]`, a third divided difference of
//! the exponential, which is evaluated without quadrature.

use num_complex::Complex64;
use rayon::prelude::*;

use super::assemble_a2_bracket;
use crate::scales::occupation_from_temperature;
use crate::{Error, Occupation, PhysicalScales, Result, Temperature};

/// Discretized reservoir.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeGrid {
    frequencies: Vec<f64>,
    coupling: Vec<f64>,
    density: Vec<f64>,
    weights: Vec<f64>,
}

impl ModeGrid {
    /// `coupling` holds `|κ(ω_k)|²`, `density` holds `D(ω_k)`, and
    /// `weights` are the quadrature weights for `∫ dω`.
    pub fn new(
        frequencies: Vec<f64>,
        coupling: Vec<f64>,
        density: Vec<f64>,
        weights: Vec<f64>,
    ) -> Result<Self> {
        let n = frequencies.len();
        if n < 2 || coupling.len() != n || density.len() != n || weights.len() != n {
            return Err(Error::domain("mode grid arrays must share one length >= 2"));
        }
        if frequencies.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::domain("mode frequencies must be positive"));
        }
        if frequencies.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::domain(
                "mode frequencies must be strictly increasing",
            ));
        }
        for (name, v) in [
            ("coupling", &coupling),
            ("density", &density),
            ("weights", &weights),
        ] {
            if v.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
                return Err(Error::domain(format!(
                    "{name} values must be finite and >= 0"
                )));
            }
        }
        Ok(ModeGrid {
            frequencies,
            coupling,
            density,
            weights,
        })
    }

    /// `modes` equally spaced frequencies on `[omega0 - half_width, omega0 + half_width]`
    /// with constant `D |κ|² = strength` and trapezoidal weights.
    pub fn flat(omega0: f64, half_width: f64, modes: usize, strength: f64) -> Result<Self> {
        if modes < 2
            || half_width.is_nan()
            || half_width <= 0.0
            || strength.is_nan()
            || strength < 0.0
        {
            return Err(Error::domain(
                "flat band needs >= 2 modes, positive width and nonnegative strength",
            ));
        }
        let lo = omega0 - half_width;
        let spacing = 2.0 * half_width / (modes - 1) as f64;
        let frequencies = (0..modes).map(|k| lo + spacing * k as f64).collect();
        let density = vec![1.0 / spacing; modes];
        let coupling = vec![strength * spacing; modes];
        let mut weights = vec![spacing; modes];
        weights[0] *= 0.5;
        weights[modes - 1] *= 0.5;
        Self::new(frequencies, coupling, density, weights)
    }

    pub fn len(&self) -> usize {
        self.frequencies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frequencies.is_empty()
    }

    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }

    /// `D(ω_k) |κ(ω_k)|²`.
    pub fn profile(&self, k: usize) -> f64 {
        self.density[k] * self.coupling[k]
    }

    /// Half of the covered frequency span.
    pub fn half_width(&self) -> f64 {
        0.5 * (self.frequencies[self.len() - 1] - self.frequencies[0])
    }

    fn spectral_weights(&self) -> Vec<f64> {
        (0..self.len())
            .map(|k| self.profile(k) * self.weights[k])
            .collect()
    }

    fn interpolate_profile(&self, omega: f64) -> Result<f64> {
        let f = &self.frequencies;
        if !(omega >= f[0] && omega <= f[f.len() - 1]) {
            return Err(Error::domain(format!(
                "frequency {omega} outside grid span [{}, {}]",
                f[0],
                f[f.len() - 1]
            )));
        }
        let hi = f.partition_point(|&w| w < omega).clamp(1, f.len() - 1);
        let lo = hi - 1;
        let s = (omega - f[lo]) / (f[hi] - f[lo]);
        Ok((1.0 - s) * self.profile(lo) + s * self.profile(hi))
    }
}

/// `γ = 2π D(ω₀) |κ(ω₀)|²`, with the profile linearly interpolated.
pub fn gamma_from_grid(grid: &ModeGrid, omega0: f64) -> Result<f64> {
    Ok(2.0 * std::f64::consts::PI * grid.interpolate_profile(omega0)?)
}

/// Predicted growth rate `2π² D²(ω₀) |κ(ω₀)|⁴ Δn̄ = γ² Δn̄ / 2` of the real
/// part of the evolved spectral density.
pub fn linear_growth_rate(grid: &ModeGrid, omega0: f64, delta_n: f64) -> Result<f64> {
    let g = gamma_from_grid(grid, omega0)?;
    Ok(0.5 * g * g * delta_n)
}

/// Nested integral for one mode pair: `∫_{0≤x≤y≤z≤t} exp(i(a z + b x))`.
pub fn triple_time_integral(a: f64, b: f64, t: f64) -> Complex64 {
    let (p, q) = ((a + b) * t, a * t);
    let dd = if p.abs() > SERIES_SPREAD && q.abs() > SERIES_SPREAD && (p - q).abs() > SERIES_SPREAD
    {
        exp_dd_separated(p, q)
    } else {
        let i = Complex64::i();
        exp_divided_difference(&[i * p, i * q, i * q, Complex64::new(0.0, 0.0)])
    };
    dd * (t * t * t)
}

/// `exp[ip, iq, iq, 0]` by explicit differencing, for nodes at least
/// `SERIES_SPREAD` apart.
fn exp_dd_separated(p: f64, q: f64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    let (zp, zq) = (Complex64::new(0.0, p), Complex64::new(0.0, q));
    let (ep, eq) = (Complex64::from_polar(1.0, p), Complex64::from_polar(1.0, q));
    let q0 = (eq - one) / zq;
    let qq0 = (eq - q0) / zq;
    let pq0 = ((ep - eq) / (zp - zq) - q0) / zp;
    (pq0 - qq0) / (zp - zq)
}

/// Node spread below which the Taylor expansion is used.
const SERIES_SPREAD: f64 = 1.0;
const SERIES_TERMS: usize = 32;

/// Divided difference of `exp` over up to four nodes (repeats allowed).
fn exp_divided_difference(z: &[Complex64]) -> Complex64 {
    let n = z.len();
    if n == 1 {
        return z[0].exp();
    }
    let (mut wi, mut wj, mut spread) = (0, 0, 0.0);
    for p in 0..n {
        for q in p + 1..n {
            let d = (z[p] - z[q]).norm();
            if d > spread {
                (wi, wj, spread) = (p, q, d);
            }
        }
    }
    if spread <= SERIES_SPREAD {
        return exp_divided_difference_series(z);
    }
    // f[S] = (f[S \ {z_i}] - f[S \ {z_j}]) / (z_j - z_i)
    let mut without_i = [Complex64::new(0.0, 0.0); 4];
    let mut without_j = [Complex64::new(0.0, 0.0); 4];
    let (mut ni, mut nj) = (0, 0);
    for (k, v) in z.iter().enumerate() {
        if k != wi {
            without_i[ni] = *v;
            ni += 1;
        }
        if k != wj {
            without_j[nj] = *v;
            nj += 1;
        }
    }
    (exp_divided_difference(&without_i[..ni]) - exp_divided_difference(&without_j[..nj]))
        / (z[wj] - z[wi])
}

/// `exp[z₀..z_m] = e^c Σ_k h_k(z - c) / (k + m)!` with `h_k` the complete
/// homogeneous symmetric polynomials and `c` the node mean.
fn exp_divided_difference_series(z: &[Complex64]) -> Complex64 {
    let m = z.len() - 1;
    let c = z.iter().sum::<Complex64>() / z.len() as f64;
    let mut h = [Complex64::new(0.0, 0.0); SERIES_TERMS];
    h[0] = Complex64::new(1.0, 0.0);
    // first variable: h_k = w₀^k, then fold in the rest
    for k in 1..SERIES_TERMS {
        h[k] = h[k - 1] * (z[0] - c);
    }
    for zj in &z[1..] {
        let w = zj - c;
        for k in 1..SERIES_TERMS {
            h[k] += w * h[k - 1];
        }
    }
    let mut factorial = (1..=m).map(|v| v as f64).product::<f64>();
    let mut sum = Complex64::new(0.0, 0.0);
    for (k, hk) in h.iter().enumerate() {
        sum += hk / factorial;
        factorial *= (k + m + 1) as f64;
    }
    c.exp() * sum
}

/// Evolved spectral density samples and their linear fit.
#[derive(Debug, Clone, PartialEq)]
pub struct WHatResult {
    pub t_values: Vec<f64>,
    pub values: Vec<Complex64>,
    /// Least-squares slope of `Re Ŵ` against `t`.
    pub slope: f64,
    pub intercept: f64,
    /// RMS residual of the linear fit.
    pub fit_residual: f64,
    /// Set when the window starts before `5 / half_width` or the fit
    /// residual exceeds 5 % of the fitted rise over the window.
    pub accuracy_warning: bool,
}

/// Evolved spectral density `Ŵ(t)` of the bath driven by a system mode at
/// `omega0` with fixed occupation `n_bar_s`, for a bath at temperature
/// `t_r`. Mode occupations follow the Bose–Einstein law at each bath
/// frequency, `θ(ω) = theta0 · ω / omega0`.
pub fn numeric_w_hat(
    grid: &ModeGrid,
    omega0: f64,
    n_bar_s: Occupation,
    t_r: Temperature,
    scales: &PhysicalScales,
    t_values: &[f64],
) -> Result<WHatResult> {
    if !(omega0.is_finite() && omega0 > 0.0) {
        return Err(Error::domain(format!(
            "omega0 must be positive, got {omega0}"
        )));
    }
    if t_values.len() < 2 || t_values.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
        return Err(Error::domain("need at least two nonnegative times"));
    }
    let mode_occupation: Vec<Occupation> = grid
        .frequencies
        .iter()
        .map(|&w| {
            let s = PhysicalScales::new(scales.theta0() * w / omega0, scales.gamma())?;
            occupation_from_temperature(t_r, &s)
        })
        .collect::<Result<_>>()?;
    let weights = grid.spectral_weights();
    let q12 = Complex64::new(n_bar_s.value(), 0.0);
    let q21 = Complex64::new(n_bar_s.value() + 1.0, 0.0);
    let freqs = &grid.frequencies;
    let brackets: Vec<Complex64> = mode_occupation
        .iter()
        .flat_map(|&nr| {
            mode_occupation
                .iter()
                .map(move |&ns| assemble_a2_bracket(nr, ns, q12, q21))
        })
        .collect();

    let values: Vec<Complex64> = t_values
        .iter()
        .map(|&t| {
            let rot: Vec<Complex64> = freqs
                .iter()
                .map(|&w| Complex64::from_polar(1.0, w * t))
                .collect();
            (0..freqs.len())
                .into_par_iter()
                .map(|r| {
                    let a = omega0 - freqs[r];
                    let row = &brackets[r * freqs.len()..(r + 1) * freqs.len()];
                    let mut acc = Complex64::new(0.0, 0.0);
                    for s in 0..freqs.len() {
                        let b = freqs[s] - omega0;
                        acc += rot[s].conj() * triple_time_integral(a, b, t) * row[s] * weights[s];
                    }
                    acc * rot[r] * weights[r]
                })
                .sum()
        })
        .collect();

    let (slope, intercept, fit_residual) = linear_fit(t_values, values.iter().map(|v| v.re));
    let t_min = t_values.iter().cloned().fold(f64::INFINITY, f64::min);
    let t_max = t_values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let rise = slope.abs() * (t_max - t_min);
    let accuracy_warning = t_min * grid.half_width() < 5.0 || fit_residual > 0.05 * rise;
    Ok(WHatResult {
        t_values: t_values.to_vec(),
        values,
        slope,
        intercept,
        fit_residual,
        accuracy_warning,
    })
}

/// Ordinary least squares `y ≈ slope·x + intercept`; returns the RMS residual
/// as the third element.
fn linear_fit(x: &[f64], y: impl Iterator<Item = f64>) -> (f64, f64, f64) {
    let y: Vec<f64> = y.collect();
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = x
        .iter()
        .zip(&y)
        .map(|(a, b)| (b - slope * a - intercept).powi(2))
        .sum();
    (slope, intercept, (rss / n).sqrt())
}
