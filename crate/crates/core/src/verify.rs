//! Named self-check suites: pairing decomposition against brute-force
//! traces, ladder against density-matrix dynamics, and the linear growth of
//! the evolved bath spectral density.

use std::fmt;

use num_complex::Complex64;

use crate::correlators::{
    all_orderings, assemble_a2_bracket, balanced_orderings, brute_force_four_point,
    linear_growth_rate, numeric_w_hat, pairing_sum_bracket, wick_four_point, ModeGrid, WHatResult,
};
use crate::ladder::{evolve_populations, PopulationVector};
use crate::lindblad::{integrate, FockDensityMatrix, IntegratorConfig, RateLaw, RateModel};
use crate::{Occupation, PhysicalScales, Result, Temperature};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Wick,
    LadderEquiv,
    W25,
    All,
}

/// Outcome of one check: `passed` iff `measured <= tolerance`.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckResult {
    pub fn new(name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        CheckResult {
            name: name.into(),
            measured,
            tolerance,
            passed: measured <= tolerance,
        }
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} measured={:.3e} tol={:.1e}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.measured,
            self.tolerance
        )
    }
}

pub fn run(suite: Suite) -> Result<Vec<CheckResult>> {
    match suite {
        Suite::Wick => wick_suite(),
        Suite::LadderEquiv => ladder_equivalence_suite(),
        Suite::W25 => spectral_growth_suite(&SpectralCheck::default()),
        Suite::All => {
            let mut out = wick_suite()?;
            out.extend(ladder_equivalence_suite()?);
            out.extend(spectral_growth_suite(&SpectralCheck::default())?);
            Ok(out)
        }
    }
}

fn ops_label(ops: &[crate::correlators::LadderOp; 4]) -> String {
    ops.iter()
        .map(|o| match o {
            crate::correlators::LadderOp::Lower => "b",
            crate::correlators::LadderOp::Raise => "B",
        })
        .collect()
}

/// Four-point pairings vs. truncated traces (dim 200, relative 1e-8), plus
/// the bracket assembled from pairings vs. its closed form.
pub fn wick_suite() -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    for n in [0.5, 1.0, 3.0] {
        let occ = Occupation::new(n)?;
        for ops in balanced_orderings() {
            let w = wick_four_point(ops, occ);
            let b = brute_force_four_point(ops, occ, 200)?;
            out.push(CheckResult::new(
                format!("wick {} n_bar={n}", ops_label(&ops)),
                (w - b).norm() / w.norm(),
                1e-8,
            ));
        }
        let worst_unbalanced = all_orderings()
            .into_iter()
            .filter(|ops| {
                ops.iter()
                    .filter(|&&o| o == crate::correlators::LadderOp::Raise)
                    .count()
                    != 2
            })
            .map(|ops| brute_force_four_point(ops, occ, 200).map(|v| v.norm()))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        out.push(CheckResult::new(
            format!("wick unbalanced n_bar={n}"),
            worst_unbalanced,
            1e-12,
        ));
    }
    let mut worst = 0.0f64;
    for (nr, ns, q12, q21) in [
        (
            0.3,
            2.0,
            Complex64::new(1.5, -0.2),
            Complex64::new(2.5, 0.7),
        ),
        (4.0, 4.0, Complex64::new(7.0, 0.0), Complex64::new(8.0, 0.0)),
        (
            0.0,
            9.5,
            Complex64::new(-3.0, 1.0),
            Complex64::new(0.25, -4.0),
        ),
    ] {
        let (nr, ns) = (Occupation::new(nr)?, Occupation::new(ns)?);
        let a = assemble_a2_bracket(nr, ns, q12, q21);
        worst = worst.max((a - pairing_sum_bracket(nr, ns, q12, q21)).norm() / (1.0 + a.norm()));
    }
    out.push(CheckResult::new("bracket pairing sum", worst, 1e-12));
    Ok(out)
}

/// Ladder vs. density matrix for diagonal starts (number state 8 and a
/// two-level mixture, dim 40, n̄_R = 2, γ = 1, dt = 0.005, t_end = 1). The
/// window stops at `1/γ`: beyond it the feedback law drives the occupation
/// up without bound and the truncation no longer holds the state.
pub fn ladder_equivalence_suite() -> Result<Vec<CheckResult>> {
    let dim = 40;
    let cfg = IntegratorConfig::new(0.005, 1.0)?;
    let mut starts: Vec<(&str, Vec<f64>)> = Vec::new();
    let mut p = vec![0.0; dim];
    p[8] = 1.0;
    starts.push(("number8", p));
    let mut p = vec![0.0; dim];
    p[1] = 0.3;
    p[10] = 0.7;
    starts.push(("mix1+10", p));

    let mut out = Vec::new();
    for law in RateLaw::ALL {
        let model = RateModel::new(law, 1.0, 2.0)?;
        for (label, p) in &starts {
            let rho0 = FockDensityMatrix::from_populations(p.iter().copied());
            let full = integrate(&rho0, &model, &cfg)?;
            let diag = evolve_populations(&PopulationVector::new(p.clone())?, &model, &cfg)?;
            let dev = max_population_deviation(&full.populations, &diag.populations);
            out.push(CheckResult::new(
                format!("ladder-equiv {} {label}", law_label(law)),
                dev,
                1e-8,
            ));
        }
    }
    Ok(out)
}

pub(crate) fn law_label(law: RateLaw) -> &'static str {
    match law {
        RateLaw::ConstantMarkov => "markov",
        RateLaw::Feedback => "feedback",
        RateLaw::Ramped => "ramped",
    }
}

pub fn max_population_deviation(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter()
        .zip(b)
        .flat_map(|(x, y)| x.iter().zip(y).map(|(u, v)| (u - v).abs()))
        .fold(0.0, f64::max)
}

/// Parameters of the spectral-density growth check. Frequencies and times
/// are in units of `1/γ` where `γ = 2π · strength`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralCheck {
    pub omega0: f64,
    pub half_width: f64,
    pub modes: usize,
    /// `D |κ|²` of the flat band.
    pub strength: f64,
    pub theta0: f64,
    pub t_values: Vec<f64>,
}

impl Default for SpectralCheck {
    fn default() -> Self {
        let half_width = 20.0;
        let t_start = 5.0 / half_width;
        SpectralCheck {
            omega0: 50.0,
            half_width,
            modes: 801,
            strength: 1.0 / (2.0 * std::f64::consts::PI),
            theta0: 1.0,
            t_values: (0..36).map(|k| t_start + 0.05 * k as f64).collect(),
        }
    }
}

impl SpectralCheck {
    pub fn grid(&self) -> Result<ModeGrid> {
        ModeGrid::flat(self.omega0, self.half_width, self.modes, self.strength)
    }

    /// Bath temperature at which the resonant bath mode holds one quantum.
    pub fn bath_temperature(&self) -> Result<Temperature> {
        Temperature::new(self.theta0 / std::f64::consts::LN_2)
    }

    /// Evaluate `Ŵ` with the system occupation `1 + delta_n`.
    pub fn evaluate(&self, grid: &ModeGrid, delta_n: f64) -> Result<WHatResult> {
        let gamma = 2.0 * std::f64::consts::PI * self.strength;
        let scales = PhysicalScales::new(self.theta0, gamma)?;
        numeric_w_hat(
            grid,
            self.omega0,
            Occupation::new(1.0 + delta_n)?,
            self.bath_temperature()?,
            &scales,
            &self.t_values,
        )
    }
}

/// Fitted growth rate against `γ² Δn̄ / 2` (10 %), equilibrium null (1 % of
/// `γ²/2`) and linearity in `Δn̄` (3 %).
pub fn spectral_growth_suite(check: &SpectralCheck) -> Result<Vec<CheckResult>> {
    let grid = check.grid()?;
    let scale = linear_growth_rate(&grid, check.omega0, 1.0)?;
    let mut out = Vec::new();

    let at5 = check.evaluate(&grid, 5.0)?;
    let rel = (at5.slope - 5.0 * scale).abs() / (5.0 * scale);
    out.push(CheckResult::new(
        format!(
            "w25 slope dn=5 fitted={:.6e} predicted={:.6e}",
            at5.slope,
            5.0 * scale
        ),
        rel,
        0.10,
    ));

    let at0 = check.evaluate(&grid, 0.0)?;
    out.push(CheckResult::new(
        format!("w25 equilibrium null fitted={:.6e}", at0.slope),
        at0.slope.abs() / scale,
        0.01,
    ));

    let at2 = check.evaluate(&grid, 2.0)?;
    let at4 = check.evaluate(&grid, 4.0)?;
    out.push(CheckResult::new(
        format!(
            "w25 linearity slope(4)/slope(2)={:.6}",
            at4.slope / at2.slope
        ),
        (at4.slope / (2.0 * at2.slope) - 1.0).abs(),
        0.03,
    ));
    Ok(out)
}
