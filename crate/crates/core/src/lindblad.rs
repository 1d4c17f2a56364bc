//! Truncated Fock-space master equation for a damped oscillator.
//!
//! The generator is
//!
//! ```text
//! dρ/dt = -γ₁(t)/2 [a†a ρ - 2 a ρ a† + ρ a†a] - γ₂(t)/2 [a a† ρ - 2 a† ρ a + ρ a a†]
//! ```
//!
//! written in the interaction picture, so the free rotation `-i[H, ρ]` is
//! absent: it only rotates coherences and leaves populations untouched. The
//! ladder operators are truncated to levels `0..N`; with `a a†` formed as the
//! product of truncated matrices, the generator conserves the trace exactly
//! and nothing flows above level `N - 1`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::rk4;
use crate::{Error, Occupation, Result, Trajectory};

/// Time dependence of the emission (`γ₁`) and absorption (`γ₂`) rates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RateLaw {
    /// `γ₁ = γ(1 + n̄_R)`, `γ₂ = γ n̄_R`.
    ConstantMarkov,
    /// Both rates shifted by `γ²(n̄_S(t) - n̄_R) t`, with `n̄_S(t)` read from
    /// the instantaneous state. This makes the occupation obey
    /// `dn̄/dt = -γ(n̄ - n̄_R) + γ²(n̄ - n̄_R) t`, i.e. feedback that slows the
    /// decay, and can drive `γ₂` negative when `n̄_S < n̄_R`.
    Feedback,
    /// Both Markov rates scaled by `(1 + γt)`, giving
    /// `dn̄/dt = -γ(1 + γt)(n̄ - n̄_R)` and the accelerated closed form
    /// `exp(-γt(1 + γt/2))`. Rates stay nonnegative.
    Ramped,
}

impl RateLaw {
    pub const ALL: [RateLaw; 3] = [RateLaw::ConstantMarkov, RateLaw::Feedback, RateLaw::Ramped];
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateModel {
    pub law: RateLaw,
    pub gamma: f64,
    pub n_bar_r: f64,
}

impl RateModel {
    pub fn new(law: RateLaw, gamma: f64, n_bar_r: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::domain(format!(
                "gamma must be positive, got {gamma}"
            )));
        }
        Occupation::new(n_bar_r)?;
        Ok(RateModel {
            law,
            gamma,
            n_bar_r,
        })
    }

    pub fn is_state_dependent(&self) -> bool {
        self.law == RateLaw::Feedback
    }

    /// `(γ₁(t), γ₂(t))` given the current system occupation. The occupation
    /// is ignored by the state-independent laws.
    pub fn rates(&self, t: f64, n_bar_s: f64) -> (f64, f64) {
        let g = self.gamma;
        let nr = self.n_bar_r;
        match self.law {
            RateLaw::ConstantMarkov => (g * (1.0 + nr), g * nr),
            RateLaw::Feedback => {
                let shift = g * g * (n_bar_s - nr) * t;
                (g * (1.0 + nr) + shift, g * nr + shift)
            }
            RateLaw::Ramped => {
                let ramp = g * (1.0 + g * t);
                (ramp * (1.0 + nr), ramp * nr)
            }
        }
    }
}

/// Number of equal RK4 sub-steps for the step `[t, t + h]` on a truncation
/// with `dim` levels. The truncated generator has spectral radius at most
/// `2 (|γ₁| (dim - 1) + |γ₂| dim)` (Gershgorin), which grows with `dim`, so
/// large truncations or fast rates need a finer step than requested.
pub(crate) fn stable_substeps(
    model: &RateModel,
    dim: usize,
    n_bar_s: f64,
    t: f64,
    h: f64,
) -> usize {
    let radius = [t, t + h]
        .iter()
        .map(|&s| {
            let (g1, g2) = model.rates(s, n_bar_s);
            2.0 * (g1.abs() * (dim as f64 - 1.0) + g2.abs() * dim as f64)
        })
        .fold(0.0, f64::max);
    rk4::substeps(h, radius)
}

/// Density matrix on the truncated Fock space `{|0⟩, …, |N-1⟩}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockDensityMatrix {
    rho: DMatrix<Complex64>,
}

impl FockDensityMatrix {
    /// Validates squareness, Hermiticity (1e-12) and unit trace (1e-9).
    pub fn from_matrix(rho: DMatrix<Complex64>) -> Result<Self> {
        if rho.nrows() != rho.ncols() || rho.nrows() < 2 {
            return Err(Error::domain(format!(
                "density matrix must be square with dim >= 2, got {}x{}",
                rho.nrows(),
                rho.ncols()
            )));
        }
        let herm = hermiticity_error(&rho);
        if herm > 1e-12 {
            return Err(Error::domain(format!(
                "matrix is not Hermitian (deviation {herm:e})"
            )));
        }
        let tr = trace(&rho);
        if (tr - 1.0).abs() > 1e-9 {
            return Err(Error::domain(format!("trace must be 1, got {tr}")));
        }
        Ok(FockDensityMatrix { rho })
    }

    /// Diagonal state with populations `p_i ∝ (n̄ / (1 + n̄))^i`, renormalized
    /// over the truncation. Fails when the truncation would hold less than
    /// 99.9 % of the untruncated geometric distribution.
    pub fn thermal_state(n_bar: Occupation, dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::domain("dim must be >= 2"));
        }
        let n = n_bar.value();
        let q = n / (1.0 + n);
        let captured = 1.0 - q.powi(dim as i32);
        if captured < 0.999 {
            return Err(Error::Truncation(format!(
                "dim {dim} holds only {captured:.6} of a thermal state with n_bar = {n}"
            )));
        }
        let weights: Vec<f64> = (0..dim).map(|i| q.powi(i as i32)).collect();
        let total: f64 = weights.iter().sum();
        Ok(Self::from_populations(weights.iter().map(|w| w / total)))
    }

    /// Projector onto Fock level `m`.
    pub fn number_state(m: usize, dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::domain("dim must be >= 2"));
        }
        if m >= dim {
            return Err(Error::domain(format!(
                "level {m} does not fit in dim {dim}"
            )));
        }
        Ok(Self::from_populations((0..dim).map(|i| {
            if i == m {
                1.0
            } else {
                0.0
            }
        })))
    }

    /// Diagonal state from populations; the caller guarantees normalization.
    pub(crate) fn from_populations(p: impl ExactSizeIterator<Item = f64>) -> Self {
        let dim = p.len();
        let mut rho = DMatrix::zeros(dim, dim);
        for (i, v) in p.enumerate() {
            rho[(i, i)] = Complex64::new(v, 0.0);
        }
        FockDensityMatrix { rho }
    }

    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.rho
    }

    pub fn mean_occupation(&self) -> f64 {
        mean_occupation(&self.rho)
    }

    pub fn trace(&self) -> f64 {
        trace(&self.rho)
    }

    pub fn purity(&self) -> f64 {
        purity(&self.rho)
    }

    pub fn populations(&self) -> Vec<f64> {
        populations(&self.rho)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        min_eigenvalue(&self.rho)
    }
}

fn mean_occupation(rho: &DMatrix<Complex64>) -> f64 {
    rho.diagonal()
        .iter()
        .enumerate()
        .map(|(i, v)| i as f64 * v.re)
        .sum()
}

fn trace(rho: &DMatrix<Complex64>) -> f64 {
    rho.diagonal().iter().map(|v| v.re).sum()
}

fn purity(rho: &DMatrix<Complex64>) -> f64 {
    // Tr ρ² = Σ |ρ_mn|² for Hermitian ρ
    rho.iter().map(|v| v.norm_sqr()).sum()
}

fn populations(rho: &DMatrix<Complex64>) -> Vec<f64> {
    rho.diagonal().iter().map(|v| v.re).collect()
}

fn min_eigenvalue(rho: &DMatrix<Complex64>) -> f64 {
    rho.clone().symmetric_eigenvalues().min()
}

fn hermiticity_error(rho: &DMatrix<Complex64>) -> f64 {
    let n = rho.nrows();
    let mut worst = 0.0f64;
    for m in 0..n {
        for k in m..n {
            worst = worst.max((rho[(m, k)] - rho[(k, m)].conj()).norm());
        }
    }
    worst
}

fn max_coherence(rho: &DMatrix<Complex64>) -> f64 {
    let n = rho.nrows();
    let mut worst = 0.0f64;
    for m in 0..n {
        for k in 0..n {
            if m != k {
                worst = worst.max(rho[(m, k)].norm());
            }
        }
    }
    worst
}

fn hermitize(rho: &mut DMatrix<Complex64>) {
    let n = rho.nrows();
    for m in 0..n {
        rho[(m, m)].im = 0.0;
        for k in m + 1..n {
            let avg = 0.5 * (rho[(m, k)] + rho[(k, m)].conj());
            rho[(m, k)] = avg;
            rho[(k, m)] = avg.conj();
        }
    }
}

/// Dissipator with fixed rates, evaluated element by element using the
/// bidiagonal structure of the truncated ladder operators.
fn dissipator(rho: &DMatrix<Complex64>, g1: f64, g2: f64) -> DMatrix<Complex64> {
    let n = rho.nrows();
    let sqrt: Vec<f64> = (0..=n).map(|k| (k as f64).sqrt()).collect();
    // diagonal of the truncated product a a†
    let aad = |k: usize| if k + 1 < n { (k + 1) as f64 } else { 0.0 };
    DMatrix::from_fn(n, n, |m, k| {
        let decay = 0.5 * g1 * (m + k) as f64 + 0.5 * g2 * (aad(m) + aad(k));
        let mut d = rho[(m, k)] * -decay;
        if m + 1 < n && k + 1 < n {
            d += rho[(m + 1, k + 1)] * (g1 * sqrt[m + 1] * sqrt[k + 1]);
        }
        if m > 0 && k > 0 {
            d += rho[(m - 1, k - 1)] * (g2 * sqrt[m] * sqrt[k]);
        }
        d
    })
}

fn rhs_matrix(rho: &DMatrix<Complex64>, t: f64, model: &RateModel) -> DMatrix<Complex64> {
    let n_s = if model.is_state_dependent() {
        mean_occupation(rho)
    } else {
        0.0
    };
    let (g1, g2) = model.rates(t, n_s);
    dissipator(rho, g1, g2)
}

/// Time derivative of `rho` at time `t`. For [`RateLaw::Feedback`] the
/// rates are evaluated with `n̄_S = mean_occupation(rho)`.
pub fn lindblad_rhs(rho: &FockDensityMatrix, t: f64, model: &RateModel) -> DMatrix<Complex64> {
    rhs_matrix(&rho.rho, t, model)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub dt: f64,
    pub t_end: f64,
    /// Record observables every this many steps (the initial state is always
    /// recorded).
    pub record_every: usize,
    /// Allowed loss of trace below 1.
    pub leak_tol: f64,
    /// Allowed negative eigenvalue (or population) magnitude.
    pub pos_tol: f64,
    /// Positivity is checked every this many steps and at the final step.
    pub check_every: usize,
}

impl IntegratorConfig {
    pub fn new(dt: f64, t_end: f64) -> Result<Self> {
        let cfg = IntegratorConfig {
            dt,
            t_end,
            record_every: 1,
            leak_tol: 1e-6,
            pos_tol: 1e-8,
            check_every: 100,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::domain(format!(
                "dt must be positive, got {}",
                self.dt
            )));
        }
        if !(self.t_end.is_finite() && self.t_end >= 0.0) {
            return Err(Error::domain(format!(
                "t_end must be >= 0, got {}",
                self.t_end
            )));
        }
        if self.record_every == 0 || self.check_every == 0 {
            return Err(Error::domain("record_every and check_every must be >= 1"));
        }
        if !(self.leak_tol >= 0.0 && self.pos_tol >= 0.0) {
            return Err(Error::domain("tolerances must be >= 0"));
        }
        Ok(())
    }

    pub(crate) fn steps(&self) -> usize {
        rk4::step_count(self.dt, self.t_end)
    }
}

/// Truncation that keeps geometric and Poissonian tails below ~1e-9, with
/// `n̄` the larger of the two occupations: the larger of
/// `ceil(n̄ + 12 sqrt(n̄ + 1)) + 4` (Poissonian) and `ceil((n̄ + 1) ln 1e9)`
/// (a thermal tail `(n̄ / (1 + n̄))^N <= exp(-N / (n̄ + 1))`).
pub fn default_dim(n_bar_s0: f64, n_bar_r: f64) -> usize {
    let n = n_bar_s0.max(n_bar_r).max(0.0);
    let poisson = (n + 12.0 * (n + 1.0).sqrt()).ceil() as usize + 4;
    let geometric = ((n + 1.0) * 1e9f64.ln()).ceil() as usize;
    poisson.max(geometric)
}

/// Fixed-step RK4 integration of the master equation.
///
/// Each step of size `dt` is split into equal sub-steps when `dt` exceeds the
/// stability limit of the truncated generator (see [`stable_substeps`]).
///
/// The state is Hermitized after every step. The trace must stay within
/// `[1 - leak_tol, 1 + 1e-9]`, and at positivity checkpoints the smallest
/// eigenvalue must exceed `-pos_tol`.
pub fn integrate(
    rho0: &FockDensityMatrix,
    model: &RateModel,
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    cfg.validate()?;
    let steps = cfg.steps();
    let dt = cfg.dt;
    let mut rho = rho0.rho.clone();
    let mut traj = Trajectory::default();

    let min0 = min_eigenvalue(&rho);
    traj.min_eigenvalues.push((0.0, min0));
    record(&mut traj, 0.0, &rho, 0.0, model);

    for k in 0..steps {
        let t = k as f64 * dt;
        let t_next = (k + 1) as f64 * dt;
        let n_sub = stable_substeps(model, rho.nrows(), mean_occupation(&rho), t, dt);
        let h = dt / n_sub as f64;
        for j in 0..n_sub {
            rho = rk4::step(&rho, t + j as f64 * h, h, |s, r| rhs_matrix(r, s, model));
        }
        let herm = hermiticity_error(&rho);
        hermitize(&mut rho);

        let tr = trace(&rho);
        if !(tr >= 1.0 - cfg.leak_tol && tr <= 1.0 + 1e-9) {
            return Err(Error::Integration {
                time: t_next,
                reason: format!("trace left [1 - {:e}, 1 + 1e-9]", cfg.leak_tol),
                trace: tr,
                min_eigenvalue: None,
            });
        }
        if (k + 1) % cfg.check_every == 0 || k + 1 == steps {
            let min = min_eigenvalue(&rho);
            traj.min_eigenvalues.push((t_next, min));
            if min < -cfg.pos_tol {
                return Err(Error::Integration {
                    time: t_next,
                    reason: format!("negative eigenvalue below -{:e}", cfg.pos_tol),
                    trace: tr,
                    min_eigenvalue: Some(min),
                });
            }
        }
        if (k + 1) % cfg.record_every == 0 {
            record(&mut traj, t_next, &rho, herm, model);
        }
    }
    Ok(traj)
}

fn record(traj: &mut Trajectory, t: f64, rho: &DMatrix<Complex64>, herm: f64, model: &RateModel) {
    let n = mean_occupation(rho);
    let (g1, g2) = model.rates(t, n);
    traj.times.push(t);
    traj.n_bar.push(n);
    traj.populations.push(populations(rho));
    traj.trace.push(trace(rho));
    traj.purity.push(purity(rho));
    traj.hermiticity_error.push(herm);
    traj.max_coherence.push(max_coherence(rho));
    traj.negative_rate.push(g1 < 0.0 || g2 < 0.0);
    traj.check_guideline(t, n, model.n_bar_r, model.gamma);
}
