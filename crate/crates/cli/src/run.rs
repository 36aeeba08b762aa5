use std::fs;
use std::path::Path;

use nullprop_core::calibration::CalibrationTable;
use nullprop_core::rng::GENERATOR_TAG;
use nullprop_core::simlab::{daniels_check, power_curve, regime_grid, ShiftModel};
use nullprop_core::{
    analytic_beta, calibrate_beta, BoundingFunction, BoundingSequenceSpec, CalibrationEntry,
    CalibrationRequest, EstimateConfig, Estimator, SequenceMethod,
};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config::{
    CalibrateArgs, Command, DanielsArgs, EstimateArgs, PowerArgs, RegimeArgs, RunConfig,
    SequenceArgs,
};
use crate::error::{CliError, Result};
use crate::input::read_pvalues;
use crate::output::{num, Table};

pub const TOOL: &str = "nullprop";

/// Mixed into the run seed when a Monte Carlo sequence has no seed of its
/// own, so calibration draws differ from the simulation draws.
const MC_SEED_SALT: u64 = 0x9e37_79b9_7f4a_7c15;

/// Report written by every command. `config` is the resolved run
/// configuration, so feeding it back through [`run`] reproduces `result`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: RunConfig,
    pub seed: u64,
    pub generator: String,
    pub result: Value,
}

/// Outcome of a run: the JSON envelope and the same result as a table.
#[derive(Clone, Debug)]
pub struct Report {
    pub envelope: Envelope,
    pub table: Table,
}

/// Runs one command. A missing seed is drawn from system entropy and
/// recorded in the envelope.
pub fn run(config: &RunConfig) -> Result<Report> {
    let seed = config.seed.unwrap_or_else(rand::random);
    let resolved = RunConfig {
        seed: Some(seed),
        ..config.clone()
    };
    let (result, table) = match &config.command {
        Command::Estimate(args) => estimate(args, seed)?,
        Command::Calibrate(args) => calibrate(args, seed)?,
        Command::SimulatePower(args) => simulate_power(args, seed)?,
        Command::SimulateRegime(args) => simulate_regime(args)?,
        Command::CheckDaniels(args) => check_daniels(args, seed)?,
    };
    Ok(Report {
        envelope: Envelope {
            tool: TOOL.into(),
            version: nullprop_core::VERSION.into(),
            command: config.command.name().into(),
            config: resolved,
            seed,
            generator: GENERATOR_TAG.into(),
            result,
        },
        table,
    })
}

/// Reruns the configuration stored in a JSON report and checks that the
/// result is identical.
pub fn replay(path: &Path) -> Result<Report> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let stored: Envelope = serde_json::from_str(&text).map_err(|e| CliError::Report {
        path: path.into(),
        reason: e.to_string(),
    })?;
    if stored.generator != GENERATOR_TAG {
        return Err(CliError::Report {
            path: path.into(),
            reason: format!("generator `{}` is not `{GENERATOR_TAG}`", stored.generator),
        });
    }
    let report = run(&stored.config)?;
    if report.envelope.result != stored.result {
        return Err(CliError::ReplayMismatch { path: path.into() });
    }
    Ok(report)
}

fn to_value<T: Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("results serialize to JSON")
}

fn sequence_spec(
    delta: BoundingFunction,
    alpha: f64,
    args: &SequenceArgs,
    seed: u64,
) -> BoundingSequenceSpec {
    match args.sequence {
        None => BoundingSequenceSpec::analytic(delta.analytic_sequence(), alpha),
        Some(SequenceMethod::MonteCarlo) => BoundingSequenceSpec::monte_carlo(
            alpha,
            args.mc_replicates,
            args.mc_seed.unwrap_or(seed ^ MC_SEED_SALT),
        ),
        Some(method) => BoundingSequenceSpec::analytic(method, alpha),
    }
}

fn load_cache(path: Option<&Path>) -> Result<Option<CalibrationTable>> {
    Ok(match path {
        Some(p) => Some(CalibrationTable::load(p)?),
        None => None,
    })
}

fn estimate(args: &EstimateArgs, seed: u64) -> Result<(Value, Table)> {
    let sample = read_pvalues(&args.input, args.input_format, &args.column)?;
    let n = sample.n();
    let config = EstimateConfig {
        delta: args.delta,
        sequence: sequence_spec(args.delta, args.alpha, &args.sequence, seed),
        interval: args.interval.choice(n),
        refine_grid: args.refine_grid,
        clamp: !args.no_clamp,
    };
    let mut cache = load_cache(args.cache.as_deref())?;
    let estimator = Estimator::prepare(config, n, cache.as_mut())?;
    if let (Some(table), Some(path)) = (&cache, &args.cache) {
        table.save(path)?;
    }
    let report = estimator.estimate(&sample)?;

    let mut table = Table::new(&[
        "n",
        "delta_kind",
        "sequence",
        "alpha",
        "a",
        "b",
        "beta",
        "lambda_hat_raw",
        "lambda_hat",
        "argmax_t",
        "fwer_lambda",
        "hc_reject",
    ]);
    table.push(vec![
        n.to_string(),
        report.config.delta.to_string(),
        report.config.sequence.method.to_string(),
        num(report.alpha),
        num(report.interval.lo),
        num(report.interval.hi),
        num(report.beta_used),
        num(report.lambda_hat_raw),
        num(report.lambda_hat),
        num(report.argmax_t),
        num(report.fwer_lambda),
        report.hc_reject.to_string(),
    ]);
    let result = json!({ "input": sample.source(), "report": report });
    Ok((result, table))
}

#[derive(Serialize)]
struct CalibrateRow {
    #[serde(flatten)]
    entry: CalibrationEntry,
    beta_analytic: Option<f64>,
}

fn calibrate(args: &CalibrateArgs, seed: u64) -> Result<(Value, Table)> {
    let mut cache = load_cache(args.cache.as_deref())?;
    let mut rows = Vec::with_capacity(args.n.len());
    for &n in &args.n {
        let req = CalibrationRequest {
            n,
            delta: args.delta,
            interval: args.interval.choice(n).resolve(n)?,
            alpha: args.alpha,
            replicates: args.replicates,
            seed,
        };
        let entry = match cache.as_mut() {
            Some(table) => table.get_or_calibrate(&req)?,
            None => CalibrationEntry::new(&req, &calibrate_beta(&req)?),
        };
        let beta_analytic =
            analytic_beta(args.delta.analytic_sequence(), n as u64, args.alpha).ok();
        rows.push(CalibrateRow {
            entry,
            beta_analytic,
        });
    }
    if let (Some(table), Some(path)) = (&cache, &args.cache) {
        table.save(path)?;
    }

    let mut table = Table::new(&[
        "n",
        "delta_kind",
        "a",
        "b",
        "alpha",
        "replicates",
        "seed",
        "beta_mc",
        "achieved_level",
        "beta_analytic",
    ]);
    for row in &rows {
        let e = &row.entry;
        table.push(vec![
            e.n.to_string(),
            e.delta_kind.to_string(),
            num(e.a),
            num(e.b),
            num(e.alpha),
            e.replicates.to_string(),
            e.seed.to_string(),
            num(e.beta),
            num(e.achieved_level),
            row.beta_analytic.map(num).unwrap_or_default(),
        ]);
    }
    Ok((to_value(&rows), table))
}

fn simulate_power(args: &PowerArgs, seed: u64) -> Result<(Value, Table)> {
    if args.mu.is_empty() == args.r.is_empty() {
        return Err(CliError::Config("give exactly one of --mu and --r".into()));
    }
    let mut models = Vec::new();
    for &lambda in &args.lambda {
        for &mu in &args.mu {
            models.push(ShiftModel::fixed(args.kappa, mu, args.n, lambda, seed)?);
        }
        for &r in &args.r {
            models.push(ShiftModel::scaled(args.kappa, r, args.n, lambda, seed)?);
        }
    }
    let configs: Vec<EstimateConfig> = args
        .delta
        .iter()
        .map(|&delta| EstimateConfig {
            delta,
            sequence: sequence_spec(delta, args.alpha, &args.sequence, seed),
            interval: args.interval.choice(args.n),
            refine_grid: 0,
            clamp: true,
        })
        .collect();
    let result = power_curve(&models, &configs, args.replicates)?;

    let mut table = Table::new(&[
        "mu",
        "lambda_true",
        "delta_kind",
        "mean_ratio",
        "median_ratio",
        "p10",
        "p90",
    ]);
    for row in &result.rows {
        table.push(vec![
            num(row.mu),
            num(row.lambda_true),
            row.delta_kind.to_string(),
            num(row.summary.mean),
            num(row.summary.median),
            num(row.summary.p10),
            num(row.summary.p90),
        ]);
    }
    Ok((to_value(&result), table))
}

fn simulate_regime(args: &RegimeArgs) -> Result<(Value, Table)> {
    let cells = regime_grid(&args.nu, args.points)?;
    let mut table = Table::new(&["nu", "gamma", "r", "regime", "fwer_detects"]);
    for c in &cells {
        table.push(vec![
            num(c.nu),
            num(c.gamma),
            num(c.r),
            c.regime.as_str().into(),
            c.fwer_detects.to_string(),
        ]);
    }
    Ok((to_value(&cells), table))
}

fn check_daniels(args: &DanielsArgs, seed: u64) -> Result<(Value, Table)> {
    let d = daniels_check(args.n, args.lambda, args.replicates, seed)?;
    let mut table = Table::new(&[
        "n",
        "lambda",
        "replicates",
        "probability",
        "std_error",
        "expected",
    ]);
    table.push(vec![
        d.n.to_string(),
        num(d.lambda),
        d.replicates.to_string(),
        num(d.probability),
        num(d.std_error),
        num(d.expected),
    ]);
    Ok((to_value(&d), table))
}
