#![allow(clippy::approx_constant)] // pinned reference values

//! Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use bathcool::analytic::{
    evaluate_law, half_thermalization_time, time_to_value, CoolingParams, LawKind,
};
use bathcool::correlators::{wick_four_point, LadderOp};
use bathcool::ladder::{evolve_populations, PopulationVector};
use bathcool::lindblad::{integrate, FockDensityMatrix, IntegratorConfig, RateLaw, RateModel};
use bathcool::verify::{
    ladder_equivalence_suite, spectral_growth_suite, wick_suite, CheckResult, SpectralCheck,
};
use bathcool::{Occupation, Trajectory};

struct Criterion {
    id: u32,
    title: &'static str,
    passed: bool,
    detail: String,
}

fn report(c: &Criterion) {
    println!(
        "{} criterion {} {}: {}",
        if c.passed { "PASS" } else { "FAIL" },
        c.id,
        c.title,
        c.detail
    );
}

fn halftimes() -> Criterion {
    let newton = half_thermalization_time(LawKind::Newton, 1.0).unwrap();
    let modified = half_thermalization_time(LawKind::Modified, 1.0).unwrap();
    let passed = (newton - 0.693147).abs() < 1e-6 && (modified - 0.544764).abs() < 1e-6;
    Criterion {
        id: 1,
        title: "half-thermalization times",
        passed,
        detail: format!("newton={newton:.9} modified={modified:.9} (0.693147, 0.544764 tol 1e-6)"),
    }
}

fn figure() -> Criterion {
    let p = CoolingParams::new(2000.0, 200.0, 1.0).unwrap();
    let below = (1..=3000).all(|k| {
        let t = k as f64 * 1e-3;
        evaluate_law(LawKind::Modified, &p, t).unwrap()
            < evaluate_law(LawKind::Newton, &p, t).unwrap()
    });
    let newton = evaluate_law(LawKind::Newton, &p, 0.5).unwrap();
    let modified = evaluate_law(LawKind::Modified, &p, 0.5).unwrap();
    let passed = below && (newton - 1291.76).abs() <= 0.01 && (modified - 1163.47).abs() <= 0.01;
    Criterion {
        id: 2,
        title: "figure curves",
        passed,
        detail: format!(
            "modified<newton on (0,3]: {below}; t=0.5 newton={newton:.4} modified={modified:.4} (1291.76, 1163.47 tol 0.01)"
        ),
    }
}

fn cooling_ratio() -> Criterion {
    let p = CoolingParams::new(2000.0, 200.0, 1.0).unwrap();
    let tn = time_to_value(LawKind::Newton, &p, 800.0).unwrap();
    let tm = time_to_value(LawKind::Modified, &p, 800.0).unwrap();
    let ratio = tm / tn;
    Criterion {
        id: 3,
        title: "cooling-time ratio 2000 -> 800",
        passed: (ratio - 0.7173).abs() <= 1e-4,
        detail: format!("newton={tn:.6} modified={tm:.6} ratio={ratio:.6} (0.7173 tol 1e-4)"),
    }
}

fn benchmark(law: RateLaw, dim: usize, dt: f64) -> Trajectory {
    let model = RateModel::new(law, 1.0, 2.0).unwrap();
    let rho0 = FockDensityMatrix::number_state(8, dim).unwrap();
    integrate(&rho0, &model, &IntegratorConfig::new(dt, 3.0).unwrap()).unwrap()
}

fn oracle_error(traj: &Trajectory, kind: LawKind) -> f64 {
    let p = CoolingParams::new(8.0, 2.0, 1.0).unwrap();
    traj.times
        .iter()
        .zip(&traj.n_bar)
        .map(|(&t, &n)| (n - evaluate_law(kind, &p, t).unwrap()).abs())
        .fold(0.0, f64::max)
}

fn master_equation_oracle() -> Criterion {
    let markov = oracle_error(
        &benchmark(RateLaw::ConstantMarkov, 40, 0.005),
        LawKind::Markov,
    );
    let ramped = oracle_error(&benchmark(RateLaw::Ramped, 40, 0.005), LawKind::Modified);
    let markov_half = oracle_error(
        &benchmark(RateLaw::ConstantMarkov, 40, 0.0025),
        LawKind::Markov,
    );
    let ratio = markov / markov_half;
    let order_ok = (12.0..=20.0).contains(&ratio);
    let passed = markov < 1e-6 && ramped < 1e-6 && order_ok;
    Criterion {
        id: 4,
        title: "master equation vs closed forms (dim 40)",
        passed,
        detail: format!(
            "markov err={markov:.3e} ramped err={ramped:.3e} (tol 1e-6); dt-halving error ratio={ratio:.3} (expected 12..20)"
        ),
    }
}

fn worst(checks: &[CheckResult]) -> (bool, f64) {
    (
        checks.iter().all(|c| c.passed),
        checks.iter().map(|c| c.measured).fold(0.0, f64::max),
    )
}

fn ladder_equivalence() -> Criterion {
    let checks = ladder_equivalence_suite().unwrap();
    let (passed, dev) = worst(&checks);
    Criterion {
        id: 5,
        title: "ladder/density-matrix equivalence",
        passed,
        detail: format!(
            "{} runs, max population deviation={dev:.3e} (tol 1e-8)",
            checks.len()
        ),
    }
}

fn wick() -> Criterion {
    let checks = wick_suite().unwrap();
    let balanced: Vec<_> = checks
        .iter()
        .filter(|c| c.name.starts_with("wick b") || c.name.starts_with("wick B"))
        .collect();
    let (all_ok, _) = worst(&checks);
    let worst_rel = balanced.iter().map(|c| c.measured).fold(0.0, f64::max);
    let number_sq = [0.5, 1.0, 3.0]
        .iter()
        .map(|&n| {
            let ops = [
                LadderOp::Raise,
                LadderOp::Lower,
                LadderOp::Raise,
                LadderOp::Lower,
            ];
            let v = wick_four_point(ops, Occupation::new(n).unwrap());
            (v.re - (2.0 * n * n + n)).abs() + v.im.abs()
        })
        .fold(0.0, f64::max);
    Criterion {
        id: 6,
        title: "Wick suite",
        passed: all_ok && balanced.len() == 18 && number_sq < 1e-12,
        detail: format!(
            "{} balanced checks, worst relative={worst_rel:.3e} (tol 1e-8); |<n^2> - (2n^2+n)|={number_sq:.1e}",
            balanced.len()
        ),
    }
}

fn spectral_growth() -> Criterion {
    let start = Instant::now();
    let check = SpectralCheck::default();
    let checks = spectral_growth_suite(&check).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let passed = checks.iter().all(|c| c.passed) && check.modes == 801;
    let detail = checks
        .iter()
        .map(|c| format!("[{}]", c))
        .chain(std::iter::once(format!(
            "modes={} runtime={secs:.1}s",
            check.modes
        )))
        .collect::<Vec<_>>()
        .join(" ");
    Criterion {
        id: 7,
        title: "spectral density growth rate",
        passed,
        detail,
    }
}

fn invariants() -> Criterion {
    let mut runs = vec![
        ("markov", benchmark(RateLaw::ConstantMarkov, 40, 0.005)),
        ("ramped", benchmark(RateLaw::Ramped, 40, 0.005)),
    ];
    let model = RateModel::new(RateLaw::Feedback, 1.0, 2.0).unwrap();
    let rho0 = FockDensityMatrix::number_state(8, 40).unwrap();
    runs.push((
        "feedback",
        integrate(&rho0, &model, &IntegratorConfig::new(0.005, 1.0).unwrap()).unwrap(),
    ));

    let mut trace_dev: f64 = 0.0;
    let mut herm: f64 = 0.0;
    let mut min_eig: f64 = f64::INFINITY;
    for (_, t) in &runs {
        trace_dev = t
            .trace
            .iter()
            .map(|v| (v - 1.0).abs())
            .fold(trace_dev, f64::max);
        herm = t.hermiticity_error.iter().cloned().fold(herm, f64::max);
        min_eig = t
            .min_eigenvalues
            .iter()
            .map(|e| e.1)
            .fold(min_eig, f64::min);
    }

    let mut prob_dev: f64 = 0.0;
    let mut min_pop: f64 = f64::INFINITY;
    for law in [RateLaw::ConstantMarkov, RateLaw::Ramped] {
        let model = RateModel::new(law, 1.0, 2.0).unwrap();
        let p0 = PopulationVector::point_mass(8, 40).unwrap();
        let t =
            evolve_populations(&p0, &model, &IntegratorConfig::new(0.005, 3.0).unwrap()).unwrap();
        prob_dev = t
            .trace
            .iter()
            .map(|v| (v - 1.0).abs())
            .fold(prob_dev, f64::max);
        min_pop = t
            .populations
            .iter()
            .flatten()
            .cloned()
            .fold(min_pop, f64::min);
    }

    let passed =
        trace_dev < 1e-6 && herm < 1e-10 && min_eig > -1e-8 && prob_dev < 1e-6 && min_pop > -1e-9;
    Criterion {
        id: 8,
        title: "invariants on benchmark runs",
        passed,
        detail: format!(
            "|tr-1|={trace_dev:.1e} (1e-6) hermiticity={herm:.1e} (1e-10) min eigenvalue={min_eig:.1e} (>-1e-8) \
             |sum p-1|={prob_dev:.1e} (1e-6) min population={min_pop:.1e} (>-1e-9)"
        ),
    }
}

fn main() -> ExitCode {
    let criteria: [fn() -> Criterion; 8] = [
        halftimes,
        figure,
        cooling_ratio,
        master_equation_oracle,
        ladder_equivalence,
        wick,
        spectral_growth,
        invariants,
    ];
    let mut failed = 0;
    for f in criteria {
        let c = f();
        report(&c);
        failed += usize::from(!c.passed);
    }

    // Supplementary diagnostics, not acceptance criteria.
    let e60 = oracle_error(
        &benchmark(RateLaw::ConstantMarkov, 60, 0.005),
        LawKind::Markov,
    );
    let r60 = oracle_error(&benchmark(RateLaw::Ramped, 60, 0.005), LawKind::Modified);
    let n40 = benchmark(RateLaw::ConstantMarkov, 40, 0.005).n_bar;
    let n60 = benchmark(RateLaw::ConstantMarkov, 60, 0.005).n_bar;
    let shift = n40
        .iter()
        .zip(&n60)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    println!("info master equation at dim 60: markov err={e60:.3e} ramped err={r60:.3e}");
    println!("info n_bar change from dim 40 to 60: {shift:.3e}");

    println!("{} criteria, {failed} failed", criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
