//! Thermal bath correlators.
//!
//! A thermal state of a single bosonic mode is Gaussian and diagonal in the
//! number basis, so every correlator reduces to the two-point values
//! `⟨b†b⟩ = n̄` and `⟨bb†⟩ = 1 + n̄`, and four-point correlators split into
//! the three pairings of their operators. [`brute_force_four_point`] checks
//! that factorization with explicit traces in a truncated Fock space.

mod spectral;

pub use spectral::{
    gamma_from_grid, linear_growth_rate, numeric_w_hat, triple_time_integral, ModeGrid, WHatResult,
};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::{Error, Occupation, Result};

/// Single-mode ladder operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LadderOp {
    /// Annihilation `b`.
    Lower,
    /// Creation `b†`.
    Raise,
}

/// `⟨left · right⟩` in the thermal state with occupation `n_bar`.
pub fn thermal_two_point(left: LadderOp, right: LadderOp, n_bar: Occupation) -> Complex64 {
    let n = n_bar.value();
    let v = match (left, right) {
        (LadderOp::Raise, LadderOp::Lower) => n,
        (LadderOp::Lower, LadderOp::Raise) => 1.0 + n,
        _ => 0.0,
    };
    Complex64::new(v, 0.0)
}

/// `⟨O_a O_b O_c O_d⟩` as the sum over the three pairings
/// `(ab)(cd) + (ac)(bd) + (ad)(bc)`.
pub fn wick_four_point(ops: [LadderOp; 4], n_bar: Occupation) -> Complex64 {
    let p = |i: usize, j: usize| thermal_two_point(ops[i], ops[j], n_bar);
    p(0, 1) * p(2, 3) + p(0, 2) * p(1, 3) + p(0, 3) * p(1, 2)
}

/// `Tr[O_a O_b O_c O_d ρ]` for the thermal state in a `dim`-level
/// truncation, by explicit matrix products.
///
/// Fails when the geometric tail beyond `dim` exceeds 1e-10.
pub fn brute_force_four_point(
    ops: [LadderOp; 4],
    n_bar: Occupation,
    dim: usize,
) -> Result<Complex64> {
    if dim < 2 {
        return Err(Error::domain("dim must be >= 2"));
    }
    let n = n_bar.value();
    let q = n / (1.0 + n);
    let tail = q.powi(dim as i32);
    if tail > 1e-10 {
        return Err(Error::Truncation(format!(
            "thermal tail beyond level {dim} is {tail:e} for n_bar = {n}"
        )));
    }
    let lower = DMatrix::from_fn(
        dim,
        dim,
        |m, k| if k == m + 1 { (k as f64).sqrt() } else { 0.0 },
    );
    let raise = lower.transpose();
    let op = |o: LadderOp| match o {
        LadderOp::Lower => &lower,
        LadderOp::Raise => &raise,
    };
    let product = op(ops[0]) * op(ops[1]) * op(ops[2]) * op(ops[3]);
    let weights: Vec<f64> = (0..dim).map(|i| q.powi(i as i32)).collect();
    let z: f64 = weights.iter().sum();
    let value: f64 = weights
        .iter()
        .enumerate()
        .map(|(i, w)| product[(i, i)] * w)
        .sum::<f64>()
        / z;
    Ok(Complex64::new(value, 0.0))
}

/// Every ordering of four ladder operators (16 in total).
pub fn all_orderings() -> Vec<[LadderOp; 4]> {
    (0..16u8)
        .map(|bits| {
            let pick = |i: u8| {
                if bits >> i & 1 == 1 {
                    LadderOp::Raise
                } else {
                    LadderOp::Lower
                }
            };
            [pick(3), pick(2), pick(1), pick(0)]
        })
        .collect()
}

/// Orderings with two raising and two lowering operators.
pub fn balanced_orderings() -> Vec<[LadderOp; 4]> {
    all_orderings()
        .into_iter()
        .filter(|ops| ops.iter().filter(|&&o| o == LadderOp::Raise).count() == 2)
        .collect()
}

/// System-weighted bath bracket for one pair of bath modes `(r, s)`:
/// `(2 + n̄_r + n̄_s) q12 - (n̄_r + n̄_s) q21`, with `q12 = ⟨Q₁Q₂⟩` and
/// `q21 = ⟨Q₂Q₁⟩` the system averages.
pub fn assemble_a2_bracket(
    n_bar_r: Occupation,
    n_bar_s: Occupation,
    q12: Complex64,
    q21: Complex64,
) -> Complex64 {
    let nr = n_bar_r.value();
    let ns = n_bar_s.value();
    q12 * (2.0 + nr + ns) - q21 * (nr + ns)
}

/// The same bracket assembled term by term from the pairings of the bath
/// operators `F₁ ∝ b` and `F₂ ∝ b†` (mode `r` carries `F₁(t₁) F₂(t')`, mode
/// `s` carries `F₂(t₂) F₁(t)`), with the overall minus sign pulled out:
///
/// ```text
/// -( [⟨F₁F₂⟩_r (⟨F₂F₁⟩_s - ⟨F₁F₂⟩_s) + ⟨F₁F₂⟩_s (⟨F₂F₁⟩_r - ⟨F₁F₂⟩_r)] q12
///  + [⟨F₂F₁⟩_r (⟨F₁F₂⟩_s - ⟨F₂F₁⟩_s) + ⟨F₂F₁⟩_s (⟨F₁F₂⟩_r - ⟨F₂F₁⟩_r)] q21 )
/// ```
pub fn pairing_sum_bracket(
    n_bar_r: Occupation,
    n_bar_s: Occupation,
    q12: Complex64,
    q21: Complex64,
) -> Complex64 {
    use LadderOp::{Lower, Raise};
    let lr_r = thermal_two_point(Lower, Raise, n_bar_r);
    let rl_r = thermal_two_point(Raise, Lower, n_bar_r);
    let lr_s = thermal_two_point(Lower, Raise, n_bar_s);
    let rl_s = thermal_two_point(Raise, Lower, n_bar_s);
    let c12 = lr_r * (rl_s - lr_s) + lr_s * (rl_r - lr_r);
    let c21 = rl_r * (lr_s - rl_s) + rl_s * (lr_r - rl_r);
    -(c12 * q12 + c21 * q21)
}
