//! Population-only (birth–death) form of the master equation.
//!
//! For a diagonal density matrix the dissipator couples each level only to
//! its neighbours:
//!
//! ```text
//! dp_i/dt = (i+1) γ₁ p_{i+1} + i γ₂ p_{i-1} - (i γ₁ + (i+1) γ₂) p_i
//! ```
//!
//! so level `i` decays downward at `i γ₁` and is excited upward at
//! `(i+1) γ₂`. The top level of the truncation has no upward rate, matching
//! the truncated Fock-space generator exactly.

use nalgebra::DVector;

use crate::lindblad::{stable_substeps, IntegratorConfig, RateModel};
use crate::rk4;
use crate::{Error, Result, Trajectory};

/// Level probabilities `p_i = ρ_ii`.
#[derive(Debug, Clone, PartialEq)]
pub struct PopulationVector(Vec<f64>);

impl PopulationVector {
    /// Requires at least two levels, entries `>= -1e-12` and total `1 ± 1e-9`.
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.len() < 2 {
            return Err(Error::domain("need at least two levels"));
        }
        if p.iter().any(|v| !v.is_finite() || *v < -1e-12) {
            return Err(Error::domain("populations must be finite and nonnegative"));
        }
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::domain(format!(
                "populations must sum to 1, got {total}"
            )));
        }
        Ok(PopulationVector(p))
    }

    pub fn point_mass(level: usize, dim: usize) -> Result<Self> {
        if level >= dim {
            return Err(Error::domain(format!(
                "level {level} does not fit in dim {dim}"
            )));
        }
        let mut p = vec![0.0; dim];
        p[level] = 1.0;
        Self::new(p)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn mean_occupation(&self) -> f64 {
        mean(&self.0)
    }
}

fn mean(p: &[f64]) -> f64 {
    p.iter().enumerate().map(|(i, v)| i as f64 * v).sum()
}

/// Emission and absorption rates at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LadderRates {
    pub gamma1: f64,
    pub gamma2: f64,
}

impl LadderRates {
    /// Rate of the transition `i -> i - 1`.
    pub fn down_rate(&self, i: usize) -> f64 {
        i as f64 * self.gamma1
    }

    /// Rate of the transition `i -> i + 1` on the untruncated ladder.
    pub fn up_rate(&self, i: usize) -> f64 {
        (i + 1) as f64 * self.gamma2
    }

    /// Upward rate on a ladder with `dim` levels; zero out of the top level.
    pub fn up_rate_truncated(&self, i: usize, dim: usize) -> f64 {
        if i + 1 < dim {
            self.up_rate(i)
        } else {
            0.0
        }
    }
}

pub fn ladder_rates(model: &RateModel, n_bar_s: f64, t: f64) -> Result<LadderRates> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::domain(format!("time must be >= 0, got {t}")));
    }
    let (gamma1, gamma2) = model.rates(t, n_bar_s);
    Ok(LadderRates { gamma1, gamma2 })
}

fn rhs(p: &DVector<f64>, t: f64, model: &RateModel) -> DVector<f64> {
    let n = p.len();
    let n_s = if model.is_state_dependent() {
        mean(p.as_slice())
    } else {
        0.0
    };
    let (gamma1, gamma2) = model.rates(t, n_s);
    let r = LadderRates { gamma1, gamma2 };
    DVector::from_fn(n, |i, _| {
        let mut d = -(r.down_rate(i) + r.up_rate_truncated(i, n)) * p[i];
        if i + 1 < n {
            d += r.down_rate(i + 1) * p[i + 1];
        }
        if i > 0 {
            d += r.up_rate(i - 1) * p[i - 1];
        }
        d
    })
}

/// RK4 integration of the gain–loss equations, sub-stepped exactly like
/// [`crate::lindblad::integrate`].
///
/// The returned [`Trajectory`] has the same layout as the density-matrix
/// integrator; purity is `Σ p_i²`, coherences are zero, and the positivity
/// checkpoints record the smallest population.
pub fn evolve_populations(
    p0: &PopulationVector,
    model: &RateModel,
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    cfg.validate()?;
    let steps = cfg.steps();
    let dt = cfg.dt;
    let mut p = DVector::from_column_slice(&p0.0);
    let mut traj = Trajectory::default();
    traj.min_eigenvalues.push((0.0, p.min()));
    record(&mut traj, 0.0, &p, model);

    for k in 0..steps {
        let t = k as f64 * dt;
        let t_next = (k + 1) as f64 * dt;
        let n_sub = stable_substeps(model, p.len(), mean(p.as_slice()), t, dt);
        let h = dt / n_sub as f64;
        for j in 0..n_sub {
            p = rk4::step(&p, t + j as f64 * h, h, |s, y| rhs(y, s, model));
        }
        let total = p.sum();
        if !(total >= 1.0 - cfg.leak_tol && total <= 1.0 + 1e-9) {
            return Err(Error::Integration {
                time: t_next,
                reason: format!("probability left [1 - {:e}, 1 + 1e-9]", cfg.leak_tol),
                trace: total,
                min_eigenvalue: None,
            });
        }
        if (k + 1) % cfg.check_every == 0 || k + 1 == steps {
            let min = p.min();
            traj.min_eigenvalues.push((t_next, min));
            if min < -cfg.pos_tol {
                return Err(Error::Integration {
                    time: t_next,
                    reason: format!("population below -{:e}", cfg.pos_tol),
                    trace: total,
                    min_eigenvalue: Some(min),
                });
            }
        }
        if (k + 1) % cfg.record_every == 0 {
            record(&mut traj, t_next, &p, model);
        }
    }
    Ok(traj)
}

fn record(traj: &mut Trajectory, t: f64, p: &DVector<f64>, model: &RateModel) {
    let n = mean(p.as_slice());
    let (g1, g2) = model.rates(t, n);
    traj.times.push(t);
    traj.n_bar.push(n);
    traj.populations.push(p.as_slice().to_vec());
    traj.trace.push(p.sum());
    traj.purity.push(p.iter().map(|v| v * v).sum());
    traj.hermiticity_error.push(0.0);
    traj.max_coherence.push(0.0);
    traj.negative_rate.push(g1 < 0.0 || g2 < 0.0);
    traj.check_guideline(t, n, model.n_bar_r, model.gamma);
}
