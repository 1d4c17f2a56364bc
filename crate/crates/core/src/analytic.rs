//! Closed-form relaxation laws.
//!
//! All three laws share the shape `x(t) = x_R + (x_0 - x_R) exp(-E(t))`:
//!
//! | law        | variable    | exponent `E(t)`     |
//! |------------|-------------|---------------------|
//! | `Newton`   | temperature | `γt`                |
//! | `Markov`   | occupation  | `γt`                |
//! | `Modified` | either      | `γt (1 + γt / 2)`   |
//!
//! The modified law carries the bath-feedback correction, whose rate grows
//! as `γ(1 + γt)`. It is a first-order result, trustworthy only for
//! `t < 1/γ`; the functions here are nevertheless total on `t >= 0`.

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LawKind {
    Newton,
    Markov,
    Modified,
}

impl LawKind {
    pub const ALL: [LawKind; 3] = [LawKind::Newton, LawKind::Markov, LawKind::Modified];

    /// Decay exponent `E(t)` with `x - x_R ∝ exp(-E(t))`.
    fn exponent(self, gamma_t: f64) -> f64 {
        match self {
            LawKind::Newton | LawKind::Markov => gamma_t,
            LawKind::Modified => gamma_t * (1.0 + 0.5 * gamma_t),
        }
    }

    /// Inverse of [`Self::exponent`] on `E >= 0`, in units of `1/γ`.
    fn inverse_exponent(self, e: f64) -> f64 {
        match self {
            LawKind::Newton | LawKind::Markov => e,
            // positive root of s²/2 + s - E = 0, written without cancellation
            LawKind::Modified => 2.0 * e / ((1.0 + 2.0 * e).sqrt() + 1.0),
        }
    }
}

/// Initial value, reservoir value and decay constant of one relaxation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoolingParams {
    pub x0: f64,
    pub x_r: f64,
    pub gamma: f64,
}

impl CoolingParams {
    pub fn new(x0: f64, x_r: f64, gamma: f64) -> Result<Self> {
        if !(x0.is_finite() && x_r.is_finite()) {
            return Err(Error::domain("initial and reservoir values must be finite"));
        }
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::domain(format!(
                "gamma must be positive, got {gamma}"
            )));
        }
        Ok(CoolingParams { x0, x_r, gamma })
    }

    fn deviation(&self) -> f64 {
        self.x0 - self.x_r
    }
}

fn check_time(t: f64) -> Result<()> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "time must be finite and >= 0, got {t}"
        )))
    }
}

pub fn evaluate_law(kind: LawKind, params: &CoolingParams, t: f64) -> Result<f64> {
    check_time(t)?;
    let e = kind.exponent(params.gamma * t);
    Ok(params.x_r + params.deviation() * (-e).exp())
}

/// `dx/dt` at state `x` and time `t`.
pub fn rate_rhs(kind: LawKind, params: &CoolingParams, x: f64, t: f64) -> Result<f64> {
    check_time(t)?;
    let g = params.gamma;
    let base = -g * (x - params.x_r);
    Ok(match kind {
        LawKind::Newton | LawKind::Markov => base,
        LawKind::Modified => base * (1.0 + g * t),
    })
}

/// Time for the deviation from the reservoir value to halve.
pub fn half_thermalization_time(kind: LawKind, gamma: f64) -> Result<f64> {
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::domain(format!(
            "gamma must be positive, got {gamma}"
        )));
    }
    Ok(kind.inverse_exponent(std::f64::consts::LN_2) / gamma)
}

/// Time at which the law reaches `target`, which must lie strictly between
/// the reservoir and initial values.
pub fn time_to_value(kind: LawKind, params: &CoolingParams, target: f64) -> Result<f64> {
    let lo = params.x0.min(params.x_r);
    let hi = params.x0.max(params.x_r);
    if !(target > lo && target < hi) {
        return Err(Error::domain(format!(
            "target {target} is not strictly between {} and {}",
            params.x_r, params.x0
        )));
    }
    let e = (params.deviation() / (target - params.x_r)).ln();
    Ok(kind.inverse_exponent(e) / params.gamma)
}
