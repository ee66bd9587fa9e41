//! Fixed-width sequential stopping rules.
//!
//! Starting from a pilot run, the chain grows by a fixed step until
//! `half_width + 1/N <= epsilon`, where the half-width comes from an OBM
//! interval for the mean or from subsampling intervals for quantiles (the
//! largest one). The chain is extended on demand through [`ChainSource`].

use crate::dist::TailProbability;
use crate::mcse::{ci_mean, ci_quantiles, BatchPolicy, Interval, Method, Outcome};
use crate::rng::Variates;
use crate::samplers::{
    ar1_extend, nv_gibbs_extend, tda_extend, Ar1Params, Chain, ChainMeta, NormalPosteriorParams, NvState,
    PairChain, SamplerKind, TdaState, UpdateOrder,
};
use crate::{Error, Result};
use alloc::vec;
use alloc::vec::Vec;

/// A chain that can be grown on demand; `values` are the draws of the
/// functional being estimated.
pub trait ChainSource {
    fn values(&self) -> &[f64];

    /// Grows the chain to at least `n` states.
    fn extend_to(&mut self, n: usize) -> Result<()>;
}

/// AR(1) chain grown on demand.
#[derive(Debug, Clone)]
pub struct Ar1Source<V> {
    chain: Chain,
    params: Ar1Params,
    rng: V,
}

impl<V: Variates> Ar1Source<V> {
    pub fn new(init: f64, params: Ar1Params, rng: V) -> Self {
        let meta = ChainMeta {
            sampler: SamplerKind::Ar1(params),
            seed: rng.seed(),
        };
        Ar1Source {
            chain: Chain::new(vec![init], meta).expect("one initial state"),
            params,
            rng,
        }
    }

    pub fn chain(&self) -> &Chain {
        &self.chain
    }
}

impl<V: Variates> ChainSource for Ar1Source<V> {
    fn values(&self) -> &[f64] {
        self.chain.values()
    }

    fn extend_to(&mut self, n: usize) -> Result<()> {
        let len = self.chain.len();
        if n > len {
            ar1_extend(&mut self.chain, n - len, self.params, &mut self.rng)?;
        }
        Ok(())
    }
}

/// Data-augmentation chain grown on demand; tracks the `x` component.
#[derive(Debug, Clone)]
pub struct TdaSource<V> {
    chain: PairChain,
    rng: V,
}

impl<V: Variates> TdaSource<V> {
    pub fn new(init: TdaState, rng: V) -> Result<Self> {
        let init = TdaState::new(init.x, init.y)?;
        let meta = ChainMeta {
            sampler: SamplerKind::TDataAugmentation,
            seed: rng.seed(),
        };
        Ok(TdaSource {
            chain: PairChain::new(vec![init.x], vec![init.y], meta)?,
            rng,
        })
    }

    pub fn chain(&self) -> &PairChain {
        &self.chain
    }
}

impl<V: Variates> ChainSource for TdaSource<V> {
    fn values(&self) -> &[f64] {
        self.chain.first()
    }

    fn extend_to(&mut self, n: usize) -> Result<()> {
        let len = self.chain.len();
        if n > len {
            tda_extend(&mut self.chain, n - len, &mut self.rng)?;
        }
        Ok(())
    }
}

/// Normal-posterior Gibbs chain grown on demand; tracks the `mu` component.
#[derive(Debug, Clone)]
pub struct NormalPosteriorSource<V> {
    chain: PairChain,
    params: NormalPosteriorParams,
    order: UpdateOrder,
    rng: V,
}

impl<V: Variates> NormalPosteriorSource<V> {
    pub fn new(init: NvState, params: NormalPosteriorParams, order: UpdateOrder, rng: V) -> Result<Self> {
        let init = NvState::new(init.mu, init.theta)?;
        let meta = ChainMeta {
            sampler: SamplerKind::NormalPosterior(params, order),
            seed: rng.seed(),
        };
        Ok(NormalPosteriorSource {
            chain: PairChain::new(vec![init.mu], vec![init.theta], meta)?,
            params,
            order,
            rng,
        })
    }

    pub fn chain(&self) -> &PairChain {
        &self.chain
    }
}

impl<V: Variates> ChainSource for NormalPosteriorSource<V> {
    fn values(&self) -> &[f64] {
        self.chain.first()
    }

    fn extend_to(&mut self, n: usize) -> Result<()> {
        let len = self.chain.len();
        if n > len {
            nv_gibbs_extend(&mut self.chain, n - len, self.params, self.order, &mut self.rng)?;
        }
        Ok(())
    }
}

/// Reveals a pre-generated chain one prefix at a time.
#[derive(Debug, Clone)]
pub struct SliceSource<'a> {
    all: &'a [f64],
    len: usize,
}

impl<'a> SliceSource<'a> {
    pub fn new(all: &'a [f64]) -> Self {
        SliceSource { all, len: 0 }
    }
}

impl ChainSource for SliceSource<'_> {
    fn values(&self) -> &[f64] {
        &self.all[..self.len]
    }

    fn extend_to(&mut self, n: usize) -> Result<()> {
        if n > self.all.len() {
            return Err(Error::InvalidArgument("pre-generated chain is shorter than requested"));
        }
        self.len = self.len.max(n);
        Ok(())
    }
}

/// Settings of a fixed-width run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StoppingConfig {
    /// Target half-width.
    pub epsilon: f64,
    /// One-sided level of the t critical value (0.9 gives 80% intervals).
    pub level: TailProbability,
    /// Iterations added between checks.
    pub step: usize,
    /// Chain length at the first check.
    pub pilot_n: usize,
    /// Largest chain length the run may reach.
    pub max_n: usize,
}

impl StoppingConfig {
    pub fn new(epsilon: f64, level: f64, step: usize, pilot_n: usize, max_n: usize) -> Result<Self> {
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(Error::InvalidParameter {
                name: "epsilon",
                value: epsilon,
                reason: "target half-width must be positive",
            });
        }
        if step == 0 {
            return Err(Error::InvalidArgument("step must be at least 1"));
        }
        if pilot_n < crate::mcse::MIN_SAMPLES {
            return Err(Error::InvalidArgument("pilot run must have at least 10 iterations"));
        }
        if pilot_n > max_n {
            return Err(Error::InvalidArgument("pilot_n must not exceed max_n"));
        }
        Ok(StoppingConfig {
            epsilon,
            level: TailProbability::new(level)?,
            step,
            pilot_n,
            max_n,
        })
    }

    /// `epsilon = 0.1`, level 0.9, step 1000, pilot 2000, cap 200 000.
    pub fn mean_defaults() -> Self {
        StoppingConfig::new(0.1, 0.9, 1000, 2000, 200_000).expect("valid defaults")
    }

    /// As [`StoppingConfig::mean_defaults`] with step 2000.
    pub fn quantile_defaults() -> Self {
        StoppingConfig::new(0.1, 0.9, 2000, 2000, 200_000).expect("valid defaults")
    }
}

/// One check of the stopping criterion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckPoint {
    pub n: usize,
    /// Largest half-width across the tracked functionals.
    pub half: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StoppingResult {
    pub terminal_n: usize,
    /// Terminal intervals, one per tracked functional.
    pub intervals: Vec<Interval>,
    /// Whether `half + 1/N <= epsilon` held at termination.
    pub converged: bool,
    pub trace: Vec<CheckPoint>,
}

impl StoppingResult {
    pub fn half(&self) -> f64 {
        max_half(&self.intervals)
    }

    pub fn half_widths(&self) -> Vec<f64> {
        self.intervals.iter().map(|i| i.half_width).collect()
    }

    pub fn estimates(&self) -> Vec<f64> {
        self.intervals.iter().map(|i| i.center).collect()
    }
}

fn max_half(intervals: &[Interval]) -> f64 {
    intervals.iter().map(|i| i.half_width).fold(f64::NEG_INFINITY, f64::max)
}

fn run<S: ChainSource>(
    source: &mut S,
    config: &StoppingConfig,
    mut intervals_at: impl FnMut(&[f64]) -> Result<Outcome<Vec<Interval>>>,
) -> Result<StoppingResult> {
    let mut n = config.pilot_n;
    let mut trace = Vec::new();
    loop {
        source.extend_to(n)?;
        let values = &source.values()[..n];
        let intervals = intervals_at(values)?
            .into_value()
            .ok_or(Error::InvalidArgument("chain too short for an interval"))?;
        let half = max_half(&intervals);
        trace.push(CheckPoint { n, half });
        let satisfied = half + 1.0 / n as f64 <= config.epsilon;
        if satisfied || n + config.step > config.max_n {
            return Ok(StoppingResult {
                terminal_n: n,
                intervals,
                converged: satisfied,
                trace,
            });
        }
        n += config.step;
    }
}

/// Grows the chain until the OBM interval for the mean (square-root batches,
/// `df = N - b + 1`) satisfies `half + 1/N <= epsilon`, or until the next
/// step would pass `max_n`.
pub fn fixed_width_mean<S: ChainSource>(source: &mut S, config: &StoppingConfig) -> Result<StoppingResult> {
    run(source, config, |values| {
        Ok(ci_mean(values, Method::Obm, BatchPolicy::SquareRoot, config.level)?.map(|i| vec![i]))
    })
}

/// As [`fixed_width_mean`] for several quantiles, stopping on the largest
/// subsampling half-width. With `bonferroni`, each interval uses level
/// `1 - (1 - level) / k`.
pub fn fixed_width_quantiles<S: ChainSource>(
    source: &mut S,
    probabilities: &[f64],
    config: &StoppingConfig,
    bonferroni: bool,
) -> Result<StoppingResult> {
    if probabilities.is_empty() {
        return Err(Error::InvalidArgument("at least one probability is required"));
    }
    run(source, config, |values| {
        ci_quantiles(values, probabilities, config.level, bonferroni)
    })
}
