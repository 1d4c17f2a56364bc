//! Command-line front end: `simulate`, `halftime`, `cooltime`, `verify`.
//!
//! Exit codes: 0 success, 1 verification failure, 2 invalid arguments,
//! 3 numerical tolerance failure.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analytic::{
    evaluate_law, half_thermalization_time, time_to_value, CoolingParams, LawKind,
};
use crate::ladder::{evolve_populations, PopulationVector};
use crate::lindblad::{
    default_dim, integrate, FockDensityMatrix, IntegratorConfig, RateLaw, RateModel,
};
use crate::scales::{
    high_temp_occupation, occupation_from_temperature, temperature_from_occupation,
};
use crate::verify::{self, Suite};
use crate::{Error, Occupation, PhysicalScales, Temperature, Trajectory};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "bathcool",
    version,
    about = "Cooling of a damped oscillator with bath feedback"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample a relaxation curve as CSV.
    Simulate(SimulateArgs),
    /// Half-thermalization time of a law.
    Halftime(HalftimeArgs),
    /// Time to cool from --t0 to --target.
    Cooltime(CooltimeArgs),
    /// Run a self-check suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LawArg {
    Newton,
    Markov,
    Modified,
    Lindblad,
    Ladder,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Markov,
    #[value(alias = "eq27")]
    Feedback,
    #[value(alias = "eq28")]
    Ramped,
}

impl From<ModelArg> for RateLaw {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Markov => RateLaw::ConstantMarkov,
            ModelArg::Feedback => RateLaw::Feedback,
            ModelArg::Ramped => RateLaw::Ramped,
        }
    }
}

/// Occupation ↔ temperature map used when temperature inputs meet an
/// occupation-space law.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MapArg {
    Exact,
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InitialArg {
    Number,
    Thermal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Wick,
    LadderEquiv,
    W25,
    All,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    pub law: LawArg,
    /// Rate model for the lindblad and ladder integrators.
    #[arg(long, value_enum, default_value = "ramped")]
    pub model: ModelArg,
    /// Initial temperature (temperature mode).
    #[arg(long = "t0")]
    pub t0: Option<f64>,
    /// Reservoir temperature (temperature mode).
    #[arg(long = "tr")]
    pub tr: Option<f64>,
    /// Initial occupation (occupation mode).
    #[arg(long = "n0")]
    pub n0: Option<f64>,
    /// Reservoir occupation (occupation mode).
    #[arg(long = "nr")]
    pub nr: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    /// Level spacing as a temperature, used by --map.
    #[arg(long, default_value_t = 1.0)]
    pub theta0: f64,
    #[arg(long, value_enum)]
    pub map: Option<MapArg>,
    #[arg(long, default_value_t = 0.01)]
    pub dt: f64,
    #[arg(long = "t-end", default_value_t = 3.0)]
    pub t_end: f64,
    /// Fock truncation; defaults to a size keeping tails below ~1e-9.
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long = "record-every", default_value_t = 1)]
    pub record_every: usize,
    /// Initial state for the integrators; defaults to a number state when
    /// the initial occupation is an integer and a thermal state otherwise.
    #[arg(long, value_enum)]
    pub initial: Option<InitialArg>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: FormatArg,
}

#[derive(Debug, Args)]
pub struct HalftimeArgs {
    #[arg(long, value_enum)]
    pub law: LawArg,
    #[arg(long)]
    pub gamma: f64,
}

#[derive(Debug, Args)]
pub struct CooltimeArgs {
    #[arg(long, value_enum, default_value = "newton")]
    pub law: LawArg,
    /// Report both laws and the modified/newton ratio.
    #[arg(long)]
    pub compare: bool,
    #[arg(long = "t0")]
    pub t0: f64,
    #[arg(long = "tr")]
    pub tr: f64,
    #[arg(long)]
    pub target: f64,
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub suite: SuiteArg,
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
pub struct CommandError {
    pub code: i32,
    pub message: String,
}

impl CommandError {
    fn invalid(message: impl Into<String>) -> Self {
        CommandError {
            code: EXIT_INVALID,
            message: message.into(),
        }
    }
}

impl From<Error> for CommandError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Integration { .. } => EXIT_NUMERICAL,
            Error::Domain(_) | Error::Truncation(_) => EXIT_INVALID,
        };
        CommandError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for CommandError {
    fn from(e: io::Error) -> Self {
        CommandError {
            code: EXIT_INVALID,
            message: format!("i/o error: {e}"),
        }
    }
}

/// Runs a parsed command, writing reports to `out` and diagnostics to
/// `err`. Returns the process exit code.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match cli.command {
        Command::Simulate(a) => simulate(&a, out),
        Command::Halftime(a) => halftime(&a, out),
        Command::Cooltime(a) => cooltime(&a, out),
        Command::Verify(a) => verify_cmd(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}

/// Formats with 9 significant digits, `%g` style.
pub fn fmt_sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let fixed = format!("{:.*}", (8 - exp) as usize, x);
        trim_zeros(&fixed).to_string()
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn law_kind(law: LawArg) -> Option<LawKind> {
    match law {
        LawArg::Newton => Some(LawKind::Newton),
        LawArg::Markov => Some(LawKind::Markov),
        LawArg::Modified => Some(LawKind::Modified),
        LawArg::Lindblad | LawArg::Ladder => None,
    }
}

fn law_name(law: LawArg) -> &'static str {
    match law {
        LawArg::Newton => "newton",
        LawArg::Markov => "markov",
        LawArg::Modified => "modified",
        LawArg::Lindblad => "lindblad",
        LawArg::Ladder => "ladder",
    }
}

#[derive(Clone, Copy)]
enum Inputs {
    Temperature { t0: f64, tr: f64 },
    Occupation { n0: f64, nr: f64 },
}

fn inputs(a: &SimulateArgs) -> Result<Inputs, CommandError> {
    match (a.t0, a.tr, a.n0, a.nr) {
        (Some(t0), Some(tr), None, None) => Ok(Inputs::Temperature { t0, tr }),
        (None, None, Some(n0), Some(nr)) => Ok(Inputs::Occupation { n0, nr }),
        _ => Err(CommandError::invalid(
            "provide exactly one of (--t0, --tr) or (--n0, --nr)",
        )),
    }
}

fn to_occupation(t: f64, map: MapArg, scales: &PhysicalScales) -> Result<f64, Error> {
    let t = Temperature::new(t)?;
    Ok(match map {
        MapArg::Exact => occupation_from_temperature(t, scales)?,
        MapArg::Linear => high_temp_occupation(t, scales)?,
    }
    .value())
}

fn to_temperature(n: f64, map: MapArg, scales: &PhysicalScales) -> Result<f64, Error> {
    Ok(match map {
        MapArg::Exact => temperature_from_occupation(Occupation::new(n)?, scales)?.value(),
        MapArg::Linear => n * scales.theta0(),
    })
}

fn map_name(map: MapArg) -> &'static str {
    match map {
        MapArg::Exact => "exact",
        MapArg::Linear => "linear",
    }
}

fn simulate(a: &SimulateArgs, out: &mut dyn Write) -> Result<i32, CommandError> {
    let FormatArg::Csv = a.format;
    let scales = PhysicalScales::new(a.theta0, a.gamma)?;
    let inputs = inputs(a)?;
    if !(a.dt.is_finite() && a.dt > 0.0 && a.t_end.is_finite() && a.t_end >= 0.0) {
        return Err(CommandError::invalid(
            "--dt must be positive and --t-end nonnegative",
        ));
    }
    if a.record_every == 0 {
        return Err(CommandError::invalid("--record-every must be >= 1"));
    }
    if matches!(inputs, Inputs::Occupation { .. }) && a.map.is_some() {
        return Err(CommandError::invalid(
            "--map applies only to temperature inputs (--t0, --tr)",
        ));
    }

    let mut header = String::new();
    let mut kv = |k: &str, v: String| {
        let _ = writeln!(header, "# {k}={v}");
    };
    kv("command", "simulate".into());
    kv("version", env!("CARGO_PKG_VERSION").into());
    kv("law", law_name(a.law).into());
    match inputs {
        Inputs::Temperature { t0, tr } => {
            kv("t0", fmt_sig9(t0));
            kv("tr", fmt_sig9(tr));
        }
        Inputs::Occupation { n0, nr } => {
            kv("n0", fmt_sig9(n0));
            kv("nr", fmt_sig9(nr));
        }
    }
    kv("gamma", fmt_sig9(a.gamma));
    kv("theta0", fmt_sig9(a.theta0));
    kv("map", a.map.map(map_name).unwrap_or("none").into());
    kv("dt", fmt_sig9(a.dt));
    kv("t_end", fmt_sig9(a.t_end));
    kv("record_every", a.record_every.to_string());
    kv("format", "csv".into());

    let body = match law_kind(a.law) {
        Some(kind) => analytic_rows(kind, &inputs, a, &scales, &mut header)?,
        None => integrator_rows(&inputs, a, &scales, &mut header)?,
    };

    match &a.out {
        Some(path) => {
            let mut f = BufWriter::new(File::create(path)?);
            f.write_all(header.as_bytes())?;
            f.write_all(body.as_bytes())?;
            f.flush()?;
        }
        None => {
            out.write_all(header.as_bytes())?;
            out.write_all(body.as_bytes())?;
        }
    }
    Ok(EXIT_OK)
}

fn analytic_rows(
    kind: LawKind,
    inputs: &Inputs,
    a: &SimulateArgs,
    scales: &PhysicalScales,
    header: &mut String,
) -> Result<String, CommandError> {
    // with a map, temperatures are taken into occupation space, the law is
    // evaluated there and the result mapped back
    let (x0, xr, back): (f64, f64, Option<MapArg>) = match (*inputs, a.map) {
        (Inputs::Temperature { t0, tr }, Some(map)) => (
            to_occupation(t0, map, scales)?,
            to_occupation(tr, map, scales)?,
            Some(map),
        ),
        (Inputs::Temperature { t0, tr }, None) => (t0, tr, None),
        (Inputs::Occupation { n0, nr }, _) => (n0, nr, None),
    };
    let params = CoolingParams::new(x0, xr, a.gamma)?;
    let steps = (a.t_end / a.dt).round() as usize;
    let _ = writeln!(header, "# rows={}", steps / a.record_every + 1);
    let mut body = String::from("t,value,valid\n");
    for k in (0..=steps).step_by(a.record_every) {
        let t = k as f64 * a.dt;
        let mut v = evaluate_law(kind, &params, t)?;
        if let Some(map) = back {
            v = to_temperature(v, map, scales)?;
        }
        let valid = u8::from(t * a.gamma < 1.0);
        let _ = writeln!(body, "{},{},{valid}", fmt_sig9(t), fmt_sig9(v));
    }
    Ok(body)
}

fn integrator_rows(
    inputs: &Inputs,
    a: &SimulateArgs,
    scales: &PhysicalScales,
    header: &mut String,
) -> Result<String, CommandError> {
    let (n0, nr) =
        match (*inputs, a.map) {
            (Inputs::Occupation { n0, nr }, _) => (n0, nr),
            (Inputs::Temperature { t0, tr }, Some(map)) => (
                to_occupation(t0, map, scales)?,
                to_occupation(tr, map, scales)?,
            ),
            (Inputs::Temperature { .. }, None) => return Err(CommandError::invalid(
                "integrators work in occupation space: pass --n0/--nr or choose --map exact|linear",
            )),
        };
    Occupation::new(n0)?;
    let model = RateModel::new(a.model.into(), a.gamma, nr)?;
    let dim = a.dim.unwrap_or_else(|| default_dim(n0, nr));
    let initial = a.initial.unwrap_or(if n0.fract() == 0.0 {
        InitialArg::Number
    } else {
        InitialArg::Thermal
    });
    let rho0 = match initial {
        InitialArg::Number => {
            if n0.fract() != 0.0 {
                return Err(CommandError::invalid(
                    "--initial number needs an integer --n0",
                ));
            }
            FockDensityMatrix::number_state(n0 as usize, dim)?
        }
        InitialArg::Thermal => FockDensityMatrix::thermal_state(Occupation::new(n0)?, dim)?,
    };
    let mut cfg = IntegratorConfig::new(a.dt, a.t_end)?;
    cfg.record_every = a.record_every;

    let traj: Trajectory = match a.law {
        LawArg::Ladder => {
            evolve_populations(&PopulationVector::new(rho0.populations())?, &model, &cfg)?
        }
        _ => integrate(&rho0, &model, &cfg)?,
    };

    let _ = writeln!(header, "# model={}", verify::law_label(model.law));
    let _ = writeln!(header, "# dim={dim}");
    let _ = writeln!(
        header,
        "# initial={}",
        match initial {
            InitialArg::Number => "number",
            InitialArg::Thermal => "thermal",
        }
    );
    let _ = writeln!(header, "# negative_rate_seen={}", traj.any_negative_rate());
    let _ = writeln!(
        header,
        "# guideline_exceeded_at={}",
        traj.guideline_exceeded_at
            .map(fmt_sig9)
            .unwrap_or_else(|| "none".into())
    );
    let _ = writeln!(header, "# rows={}", traj.len());

    let mut body = String::from("t,n_bar,trace,purity,valid,neg_rate_flag\n");
    for i in 0..traj.len() {
        let t = traj.times[i];
        let _ = writeln!(
            body,
            "{},{},{},{},{},{}",
            fmt_sig9(t),
            fmt_sig9(traj.n_bar[i]),
            fmt_sig9(traj.trace[i]),
            fmt_sig9(traj.purity[i]),
            u8::from(t * a.gamma < 1.0),
            u8::from(traj.negative_rate[i])
        );
    }
    Ok(body)
}

fn halftime(a: &HalftimeArgs, out: &mut dyn Write) -> Result<i32, CommandError> {
    let (kind, formula) = match a.law {
        LawArg::Newton | LawArg::Markov => (LawKind::Newton, "ln(2)/gamma"),
        LawArg::Modified => (LawKind::Modified, "(sqrt(1+2*ln(2))-1)/gamma"),
        _ => {
            return Err(CommandError::invalid(
                "halftime supports --law newton|markov|modified",
            ))
        }
    };
    let t = half_thermalization_time(kind, a.gamma)?;
    writeln!(
        out,
        "{}: t_1/2 = {formula} = {}",
        law_name(a.law),
        fmt_sig9(t)
    )?;
    Ok(EXIT_OK)
}

fn cooltime(a: &CooltimeArgs, out: &mut dyn Write) -> Result<i32, CommandError> {
    let params = CoolingParams::new(a.t0, a.tr, a.gamma)?;
    if a.compare {
        let newton = time_to_value(LawKind::Newton, &params, a.target)?;
        let modified = time_to_value(LawKind::Modified, &params, a.target)?;
        writeln!(out, "newton {}", fmt_sig9(newton))?;
        writeln!(out, "modified {}", fmt_sig9(modified))?;
        writeln!(out, "ratio {}", fmt_sig9(modified / newton))?;
    } else {
        let kind = law_kind(a.law).ok_or_else(|| {
            CommandError::invalid("cooltime supports --law newton|markov|modified")
        })?;
        let t = time_to_value(kind, &params, a.target)?;
        writeln!(out, "{} {}", law_name(a.law), fmt_sig9(t))?;
    }
    Ok(EXIT_OK)
}

fn verify_cmd(a: &VerifyArgs, out: &mut dyn Write) -> Result<i32, CommandError> {
    let suite = match a.suite {
        SuiteArg::Wick => Suite::Wick,
        SuiteArg::LadderEquiv => Suite::LadderEquiv,
        SuiteArg::W25 => Suite::W25,
        SuiteArg::All => Suite::All,
    };
    let checks = verify::run(suite)?;
    let failed = checks.iter().filter(|c| !c.passed).count();
    for c in &checks {
        writeln!(out, "{c}")?;
    }
    writeln!(out, "{} checks, {} failed", checks.len(), failed)?;
    Ok(if failed == 0 {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    })
}
