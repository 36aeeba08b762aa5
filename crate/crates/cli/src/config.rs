//! Run configuration shared by the argument parser, report envelopes and
//! `replay`.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Subcommand, ValueEnum};
use nullprop_core::{BoundingFunction, IntervalChoice, SequenceMethod};
use serde::{Deserialize, Serialize};

/// One end of an interval: a number, `1/n` or `1-1/n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Bound {
    Value(f64),
    InvN,
    OneMinusInvN,
}

impl Bound {
    fn resolve(self, n: usize) -> f64 {
        match self {
            Bound::Value(v) => v,
            Bound::InvN => 1.0 / n as f64,
            Bound::OneMinusInvN => 1.0 - 1.0 / n as f64,
        }
    }
}

impl FromStr for Bound {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "1/n" => Ok(Bound::InvN),
            "1-1/n" => Ok(Bound::OneMinusInvN),
            other => other
                .parse()
                .map(Bound::Value)
                .map_err(|_| format!("bad interval bound `{other}` (number, 1/n or 1-1/n)")),
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Value(v) => write!(f, "{v}"),
            Bound::InvN => f.write_str("1/n"),
            Bound::OneMinusInvN => f.write_str("1-1/n"),
        }
    }
}

/// Interval as written on the command line: `truncated`, `full` or `a:b`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum IntervalSpec {
    #[default]
    Truncated,
    Full,
    Range(Bound, Bound),
}

impl IntervalSpec {
    /// The estimator interval for samples of size `n`.
    pub fn choice(self, n: usize) -> IntervalChoice {
        match self {
            IntervalSpec::Truncated => IntervalChoice::Truncated,
            IntervalSpec::Full => IntervalChoice::Full,
            IntervalSpec::Range(lo, hi) => IntervalChoice::Custom {
                lo: lo.resolve(n),
                hi: hi.resolve(n),
            },
        }
    }
}

impl FromStr for IntervalSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "truncated" => Ok(IntervalSpec::Truncated),
            "full" => Ok(IntervalSpec::Full),
            other => {
                let (lo, hi) = other
                    .split_once(':')
                    .ok_or_else(|| format!("bad interval `{other}` (truncated, full or a:b)"))?;
                Ok(IntervalSpec::Range(lo.parse()?, hi.parse()?))
            }
        }
    }
}

impl fmt::Display for IntervalSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IntervalSpec::Truncated => f.write_str("truncated"),
            IntervalSpec::Full => f.write_str("full"),
            IntervalSpec::Range(lo, hi) => write!(f, "{lo}:{hi}"),
        }
    }
}

impl TryFrom<String> for IntervalSpec {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<IntervalSpec> for String {
    fn from(spec: IntervalSpec) -> String {
        spec.to_string()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum InputFormat {
    /// `csv` for `.csv` files, `lines` otherwise.
    #[default]
    Auto,
    /// One value per line; blank lines and `#` comments are skipped.
    Lines,
    /// CSV with a header row; values are read from `--column`.
    Csv,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

/// Bounding sequence choice. Without `--sequence` each bounding function
/// uses its closed-form sequence.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize, Args)]
pub struct SequenceArgs {
    /// daniels, dkw, gumbel or monte-carlo.
    #[arg(long, value_parser = SequenceMethod::from_str)]
    pub sequence: Option<SequenceMethod>,

    /// Replicates for a Monte Carlo sequence.
    #[arg(long, default_value_t = 2000)]
    #[serde(default = "default_mc_replicates")]
    pub mc_replicates: usize,

    /// Seed for a Monte Carlo sequence; derived from `--seed` when absent.
    #[arg(long)]
    pub mc_seed: Option<u64>,
}

impl Default for SequenceArgs {
    fn default() -> Self {
        SequenceArgs {
            sequence: None,
            mc_replicates: default_mc_replicates(),
            mc_seed: None,
        }
    }
}

fn default_mc_replicates() -> usize {
    2000
}

fn default_alpha() -> f64 {
    0.05
}

fn default_kappa() -> f64 {
    2.0
}

fn default_points() -> usize {
    100
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Args)]
pub struct EstimateArgs {
    /// P-value file.
    pub input: PathBuf,

    #[arg(long, value_enum, default_value_t)]
    #[serde(default)]
    pub input_format: InputFormat,

    /// CSV column holding the p-values.
    #[arg(long, default_value = "pvalue")]
    pub column: String,

    /// linear, constant or stddev.
    #[arg(long, default_value = "stddev", value_parser = BoundingFunction::from_str)]
    pub delta: BoundingFunction,

    #[arg(long, default_value_t = 0.05)]
    #[serde(default = "default_alpha")]
    pub alpha: f64,

    /// truncated, full, or a:b where a bound may be 1/n or 1-1/n.
    #[arg(long, default_value = "truncated")]
    #[serde(default)]
    pub interval: IntervalSpec,

    #[command(flatten)]
    #[serde(flatten)]
    pub sequence: SequenceArgs,

    /// Extra evaluation points between consecutive candidates.
    #[arg(long, default_value_t = 0)]
    #[serde(default)]
    pub refine_grid: usize,

    /// Report the raw supremum without clamping to [0, 1].
    #[arg(long)]
    #[serde(default)]
    pub no_clamp: bool,

    /// Calibration cache used and updated by Monte Carlo sequences.
    #[arg(long)]
    pub cache: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Args)]
pub struct CalibrateArgs {
    /// Sample sizes, comma separated.
    #[arg(long, required = true, value_delimiter = ',')]
    pub n: Vec<usize>,

    #[arg(long, default_value = "stddev", value_parser = BoundingFunction::from_str)]
    pub delta: BoundingFunction,

    #[arg(long, default_value_t = 0.05)]
    #[serde(default = "default_alpha")]
    pub alpha: f64,

    #[arg(long, default_value = "truncated")]
    #[serde(default)]
    pub interval: IntervalSpec,

    #[arg(long, default_value_t = 2000)]
    #[serde(default = "default_mc_replicates")]
    pub replicates: usize,

    /// Calibration cache to update.
    #[arg(long)]
    pub cache: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Args)]
#[command(group(clap::ArgGroup::new("shift").required(true).args(["mu", "r"])))]
pub struct PowerArgs {
    #[arg(long)]
    pub n: usize,

    /// Subbotin shape; 2 is Gaussian.
    #[arg(long, default_value_t = 2.0)]
    #[serde(default = "default_kappa")]
    pub kappa: f64,

    /// Proportions of false nulls, comma separated.
    #[arg(long, required = true, value_delimiter = ',')]
    pub lambda: Vec<f64>,

    /// Fixed shifts, comma separated.
    #[arg(long, value_delimiter = ',')]
    #[serde(default)]
    pub mu: Vec<f64>,

    /// Scaled shifts `(kappa r ln n)^(1/kappa)`, comma separated.
    #[arg(long, value_delimiter = ',')]
    #[serde(default)]
    pub r: Vec<f64>,

    /// Bounding functions, comma separated.
    #[arg(
        long,
        default_value = "linear,constant,stddev",
        value_delimiter = ',',
        value_parser = BoundingFunction::from_str
    )]
    pub delta: Vec<BoundingFunction>,

    #[arg(long, default_value_t = 0.05)]
    #[serde(default = "default_alpha")]
    pub alpha: f64,

    #[arg(long, default_value = "truncated")]
    #[serde(default)]
    pub interval: IntervalSpec,

    #[command(flatten)]
    #[serde(flatten)]
    pub sequence: SequenceArgs,

    #[arg(long, default_value_t = 100)]
    pub replicates: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Args)]
pub struct RegimeArgs {
    /// Exponents of the bounding functions, comma separated.
    #[arg(long, default_value = "0,0.5,1", value_delimiter = ',')]
    pub nu: Vec<f64>,

    /// Grid points per axis.
    #[arg(long, default_value_t = 100)]
    #[serde(default = "default_points")]
    pub points: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Args)]
pub struct DanielsArgs {
    #[arg(long, default_value_t = 1000)]
    pub n: usize,

    #[arg(long)]
    pub lambda: f64,

    #[arg(long, default_value_t = 100_000)]
    pub replicates: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Subcommand)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Lower confidence bound for the proportion of false nulls in a file.
    Estimate(EstimateArgs),
    /// Monte Carlo bounding sequence for one or more sample sizes.
    Calibrate(CalibrateArgs),
    /// Power curves under the Subbotin shift model.
    SimulatePower(PowerArgs),
    /// Detection regimes on a (gamma, r) grid.
    SimulateRegime(RegimeArgs),
    /// Monte Carlo check of P(sup U_n(t)/t >= lambda) = 1/lambda.
    CheckDaniels(DanielsArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Estimate(_) => "estimate",
            Command::Calibrate(_) => "calibrate",
            Command::SimulatePower(_) => "simulate-power",
            Command::SimulateRegime(_) => "simulate-regime",
            Command::CheckDaniels(_) => "check-daniels",
        }
    }
}

/// Everything needed to run one command. The echo embedded in a report has
/// `seed` filled in, so rerunning it reproduces the report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(flatten)]
    pub command: Command,
    pub seed: Option<u64>,
    #[serde(default)]
    pub format: OutputFormat,
    pub output: Option<PathBuf>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_specs_parse_and_print() {
        for text in ["truncated", "full", "1/n:0.01", "0.001:1-1/n", "0.25:0.75"] {
            let spec: IntervalSpec = text.parse().unwrap();
            assert_eq!(spec.to_string(), text);
        }
        assert!("0.1".parse::<IntervalSpec>().is_err());
        assert!("x:0.5".parse::<IntervalSpec>().is_err());
    }

    #[test]
    fn interval_specs_resolve_against_n() {
        let spec: IntervalSpec = "1/n:1-1/n".parse().unwrap();
        assert_eq!(
            spec.choice(200),
            IntervalChoice::Custom {
                lo: 0.005,
                hi: 0.995
            }
        );
        assert_eq!(IntervalSpec::Full.choice(10), IntervalChoice::Full);
    }

    #[test]
    fn run_config_json_round_trip() {
        let config = RunConfig {
            command: Command::SimulateRegime(RegimeArgs {
                nu: vec![0.0, 0.5],
                points: 10,
            }),
            seed: Some(3),
            format: OutputFormat::Csv,
            output: None,
        };
        let text = serde_json::to_string(&config).unwrap();
        assert!(text.contains(r#""command":"simulate-regime""#));
        assert_eq!(serde_json::from_str::<RunConfig>(&text).unwrap(), config);
    }
}
