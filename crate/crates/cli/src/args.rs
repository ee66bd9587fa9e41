//! Command-line grammar: `mcmc-confidence <ar1|tda|gibbs-normal|mcse|stop> [flags]`.

use clap::{Args, Parser, Subcommand, ValueEnum};
use mcmc_confidence_core::diagnostics::{Limits, RbVariant};
use mcmc_confidence_core::mcse::{BatchPolicy, Method};
use mcmc_confidence_core::samplers::UpdateOrder;
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "mcmc-confidence", version, about = "Monte Carlo standard errors, intervals and stopping rules for MCMC output")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate an AR(1) chain and write running estimates, standard errors and the ACF.
    Ar1(Ar1Args),
    /// Run the data-augmentation sampler for a Student t(4) target.
    Tda(TdaArgs),
    /// Run the Gibbs sampler for a normal model with unknown mean and variance.
    GibbsNormal(GibbsArgs),
    /// Estimate a mean, its standard error and an interval from a CSV column.
    Mcse(McseArgs),
    /// Run the fixed-width stopping rule, optionally over many replications.
    Stop(StopArgs),
}

/// Comma-separated probabilities in (0, 1).
#[derive(Debug, Clone, PartialEq)]
pub struct Probs(pub Vec<f64>);

impl std::ops::Deref for Probs {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

fn parse_probs(s: &str) -> Result<Probs, String> {
    let probs = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    match probs.iter().find(|&&p| !(p > 0.0 && p < 1.0)) {
        Some(p) => Err(format!("probability {p} is outside (0, 1)")),
        None => Ok(Probs(probs)),
    }
}

fn parse_batch(s: &str) -> Result<BatchPolicy, String> {
    match s {
        "sqroot" => Ok(BatchPolicy::SquareRoot),
        "cuberoot" => Ok(BatchPolicy::CubeRoot),
        _ => match s.parse::<usize>() {
            Ok(b) if b > 1 => Ok(BatchPolicy::Fixed(b)),
            _ => Err(format!("expected sqroot, cuberoot or an integer above 1, got {s:?}")),
        },
    }
}

fn parse_limits(s: &str) -> Result<Limits, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<Result<_, _>>()?;
    match v[..] {
        [x_lo, x_hi, y_lo, y_hi] if x_lo < x_hi && y_lo < y_hi => Ok(Limits { x_lo, x_hi, y_lo, y_hi }),
        _ => Err("expected x_lo,x_hi,y_lo,y_hi with lo < hi".into()),
    }
}

fn parse_grid(s: &str) -> Result<(f64, f64, f64), String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<Result<_, _>>()?;
    match v[..] {
        [lo, hi, step] if lo < hi && step > 0.0 => Ok((lo, hi, step)),
        _ => Err("expected lo,hi,step with lo < hi and step > 0".into()),
    }
}

pub fn batch_label(policy: BatchPolicy) -> String {
    match policy {
        BatchPolicy::SquareRoot => "sqroot".into(),
        BatchPolicy::CubeRoot => "cuberoot".into(),
        BatchPolicy::Fixed(b) => b.to_string(),
    }
}

pub fn probs_label(probs: &[f64]) -> String {
    probs.iter().map(f64::to_string).collect::<Vec<_>>().join(",")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Bm,
    Obm,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Bm => Method::Bm,
            MethodArg::Obm => Method::Obm,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OrderArg {
    ThetaFirst,
    MuFirst,
}

impl From<OrderArg> for UpdateOrder {
    fn from(o: OrderArg) -> Self {
        match o {
            OrderArg::ThetaFirst => UpdateOrder::ThetaFirst,
            OrderArg::MuFirst => UpdateOrder::MuFirst,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RbVariantArg {
    Plugin,
    Mixture,
}

impl From<RbVariantArg> for RbVariant {
    fn from(v: RbVariantArg) -> Self {
        match v {
            RbVariantArg::Plugin => RbVariant::Plugin,
            RbVariantArg::Mixture => RbVariant::Mixture,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Transform {
    Identity,
    Square,
    Abs,
    Exp,
    Log,
    Inverse,
}

impl Transform {
    pub fn apply(self, x: f64) -> f64 {
        match self {
            Transform::Identity => x,
            Transform::Square => x * x,
            Transform::Abs => x.abs(),
            Transform::Exp => x.exp(),
            Transform::Log => x.ln(),
            Transform::Inverse => 1.0 / x,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Mean,
    Quantiles,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SamplerArg {
    Ar1,
    Tda,
    GibbsNormal,
}

pub fn value_name<T: ValueEnum>(v: T) -> String {
    v.to_possible_value().expect("no skipped variants").get_name().to_string()
}

#[derive(Debug, Args)]
pub struct Ar1Args {
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub rho: f64,
    #[arg(long, default_value_t = 1.0)]
    pub tau: f64,
    /// Chain length, counting the initial state.
    #[arg(long, default_value_t = 2000)]
    pub n: usize,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub init: f64,
    #[arg(long, default_value = "0.25,0.75", value_parser = parse_probs)]
    pub probs: Probs,
    /// One-sided level of the t critical value for the running interval.
    #[arg(long, default_value_t = 0.9)]
    pub level: f64,
    /// Largest autocorrelation lag; defaults to floor(10 log10 n).
    #[arg(long)]
    pub max_lag: Option<usize>,
    #[arg(long, default_value_t = 1976)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct TdaArgs {
    #[arg(long, default_value_t = 2000)]
    pub n: usize,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub init_x: f64,
    #[arg(long, default_value_t = 1.0)]
    pub init_y: f64,
    #[arg(long, default_value_t = 100)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct GibbsArgs {
    /// Number of observations.
    #[arg(long, default_value_t = 11)]
    pub m: usize,
    /// Sample mean of the observations.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub y_bar: f64,
    /// Sample variance with divisor m.
    #[arg(long, default_value_t = 4.0)]
    pub s2: f64,
    #[arg(long, default_value_t = 2000)]
    pub n: usize,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub init_mu: f64,
    #[arg(long, default_value_t = 1.0)]
    pub init_theta: f64,
    #[arg(long, value_enum, default_value_t = OrderArg::ThetaFirst)]
    pub order: OrderArg,
    #[arg(long, value_enum, default_value_t = RbVariantArg::Plugin)]
    pub rb_variant: RbVariantArg,
    /// Grid for the Rao-Blackwellized density of mu, as lo,hi,step.
    #[arg(long, default_value = "-3,4,0.01", value_parser = parse_grid, allow_hyphen_values = true)]
    pub rb_grid: (f64, f64, f64),
    #[arg(long, default_value_t = 512)]
    pub kde_points: usize,
    /// Points per axis of the joint density lattice.
    #[arg(long, default_value_t = 50)]
    pub grid2d: usize,
    /// Rectangle of the joint density lattice, as mu_lo,mu_hi,theta_lo,theta_hi.
    #[arg(long, default_value = "-1.5,3.5,1,15", value_parser = parse_limits, allow_hyphen_values = true)]
    pub lims: Limits,
    #[arg(long, default_value_t = 100)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct McseArgs {
    /// CSV file whose first column holds the chain; a non-numeric first row is a header.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = MethodArg::Bm)]
    pub method: MethodArg,
    /// sqroot, cuberoot or a fixed batch size.
    #[arg(long, default_value = "sqroot", value_parser = parse_batch)]
    pub batch: BatchPolicy,
    /// Function g applied before estimating E g(X).
    #[arg(long, value_enum, default_value_t = Transform::Identity)]
    pub transform: Transform,
    /// Also report type-1 quantiles with subsampling standard errors.
    #[arg(long, value_parser = parse_probs)]
    pub probs: Option<Probs>,
    #[arg(long, default_value_t = 0.9)]
    pub level: f64,
    /// Accepted for a uniform interface; the estimate is deterministic.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Directory for `estimate.csv` and the manifest; the report is printed either way.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StopArgs {
    #[arg(long, value_enum, default_value_t = Target::Mean)]
    pub target: Target,
    #[arg(long, value_enum, default_value_t = SamplerArg::Ar1)]
    pub sampler: SamplerArg,
    #[arg(long, default_value_t = 0.95, allow_negative_numbers = true)]
    pub rho: f64,
    #[arg(long, default_value_t = 1.0)]
    pub tau: f64,
    /// Initial state of x, mu or the AR(1) chain.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub init: f64,
    #[arg(long, default_value_t = 11)]
    pub m: usize,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub y_bar: f64,
    #[arg(long, default_value_t = 4.0)]
    pub s2: f64,
    #[arg(long, value_enum, default_value_t = OrderArg::ThetaFirst)]
    pub order: OrderArg,
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 0.9)]
    pub level: f64,
    /// Iterations between checks; 1000 for means and 2000 for quantiles by default.
    #[arg(long)]
    pub step: Option<usize>,
    #[arg(long, default_value_t = 2000)]
    pub pilot: usize,
    #[arg(long, default_value_t = 200_000)]
    pub max_n: usize,
    #[arg(long, default_value = "0.25,0.75", value_parser = parse_probs)]
    pub probs: Probs,
    /// Adjust the per-interval level for the number of quantiles.
    #[arg(long)]
    pub bonferroni: bool,
    /// Independent runs; replicate r uses seed + r.
    #[arg(long, default_value_t = 1)]
    pub replications: usize,
    #[arg(long, default_value_t = 1976)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}
