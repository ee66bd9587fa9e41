//! The example Markov chains: an AR(1) series, a data-augmentation Gibbs
//! sampler whose `x` marginal is Student-t with 4 degrees of freedom, and a
//! Gibbs sampler for the posterior of a normal mean and variance.
//!
//! Every sampler appends to an existing chain; the last stored state seeds
//! the next transition.

use crate::rng::Variates;
use crate::{Error, Result};
use alloc::vec;
use alloc::vec::Vec;

/// Parameters of `X_{n+1} = rho X_n + eps_n` with `eps_n ~ N(0, tau^2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ar1Params {
    rho: f64,
    tau: f64,
}

impl Ar1Params {
    pub fn new(rho: f64, tau: f64) -> Result<Self> {
        if !(rho.abs() < 1.0) {
            return Err(Error::InvalidParameter {
                name: "rho",
                value: rho,
                reason: "|rho| < 1 is required for stationarity",
            });
        }
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(Error::InvalidParameter {
                name: "tau",
                value: tau,
                reason: "innovation standard deviation must be positive",
            });
        }
        Ok(Ar1Params { rho, tau })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// Variance of the invariant distribution, `tau^2 / (1 - rho^2)`.
    pub fn stationary_variance(&self) -> f64 {
        self.tau * self.tau / (1.0 - self.rho * self.rho)
    }

    /// Square root of the long-run variance of the sample mean,
    /// `tau / (1 - rho)`.
    pub fn long_run_sd(&self) -> f64 {
        self.tau / (1.0 - self.rho)
    }
}

/// Observed-data summary for the normal mean/variance posterior.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalPosteriorParams {
    m: usize,
    y_bar: f64,
    s2: f64,
}

impl NormalPosteriorParams {
    /// `m` observations with mean `y_bar` and biased sample variance `s2`.
    pub fn new(m: usize, y_bar: f64, s2: f64) -> Result<Self> {
        if m < 3 {
            return Err(Error::InvalidParameter {
                name: "m",
                value: m as f64,
                reason: "at least 3 observations are required",
            });
        }
        if !(s2 > 0.0) || !s2.is_finite() {
            return Err(Error::InvalidParameter {
                name: "s2",
                value: s2,
                reason: "sample variance must be positive",
            });
        }
        if !y_bar.is_finite() {
            return Err(Error::InvalidParameter {
                name: "y_bar",
                value: y_bar,
                reason: "sample mean must be finite",
            });
        }
        Ok(NormalPosteriorParams { m, y_bar, s2 })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn y_bar(&self) -> f64 {
        self.y_bar
    }

    pub fn s2(&self) -> f64 {
        self.s2
    }

    /// Posterior mean of `theta`: the marginal is inverse gamma with shape
    /// `m/2 - 1` and scale `m s2 / 2`, so the mean exists for `m > 4`.
    pub fn theta_mean(&self) -> Option<f64> {
        let shape = self.m as f64 / 2.0 - 1.0;
        (shape > 1.0).then(|| self.m as f64 * self.s2 / 2.0 / (shape - 1.0))
    }

    /// The marginal of `mu` is `y_bar + scale * T` with `T` Student-t on
    /// `m - 2` degrees of freedom; returns `(df, scale)`.
    pub fn mu_marginal(&self) -> (f64, f64) {
        let df = (self.m - 2) as f64;
        (df, libm::sqrt(self.s2 / df))
    }
}

/// Order of the two conditional draws in one normal-posterior Gibbs sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UpdateOrder {
    /// Draw `theta | mu`, then `mu | theta`.
    #[default]
    ThetaFirst,
    /// Draw `mu | theta`, then `theta | mu`.
    MuFirst,
}

/// State `(x, y)` of the data-augmentation sampler; `y` is the latent precision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TdaState {
    pub x: f64,
    pub y: f64,
}

impl TdaState {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(y > 0.0) || !y.is_finite() {
            return Err(Error::InvalidParameter {
                name: "y",
                value: y,
                reason: "latent precision must be positive",
            });
        }
        Ok(TdaState { x, y })
    }
}

impl Default for TdaState {
    fn default() -> Self {
        TdaState { x: 1.0, y: 1.0 }
    }
}

/// State `(mu, theta)` of the normal-posterior sampler; `theta` is the variance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NvState {
    pub mu: f64,
    pub theta: f64,
}

impl NvState {
    pub fn new(mu: f64, theta: f64) -> Result<Self> {
        if !(theta > 0.0) || !theta.is_finite() {
            return Err(Error::InvalidParameter {
                name: "theta",
                value: theta,
                reason: "variance must be positive",
            });
        }
        Ok(NvState { mu, theta })
    }
}

impl Default for NvState {
    fn default() -> Self {
        NvState { mu: 1.0, theta: 1.0 }
    }
}

/// Which sampler produced a chain, with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SamplerKind {
    Ar1(Ar1Params),
    TDataAugmentation,
    NormalPosterior(NormalPosteriorParams, UpdateOrder),
    /// Values supplied from outside the crate.
    External,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainMeta {
    pub sampler: SamplerKind,
    pub seed: Option<u64>,
}

/// A univariate chain. Never empty.
#[derive(Debug, Clone, PartialEq)]
pub struct Chain {
    values: Vec<f64>,
    meta: ChainMeta,
}

impl Chain {
    pub fn new(values: Vec<f64>, meta: ChainMeta) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyInput);
        }
        Ok(Chain { values, meta })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn last(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    pub fn meta(&self) -> &ChainMeta {
        &self.meta
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

/// A bivariate chain stored column-wise. Values are only ever appended in
/// pairs, so `first[i]` and `second[i]` always belong to the same state.
#[derive(Debug, Clone, PartialEq)]
pub struct PairChain {
    first: Vec<f64>,
    second: Vec<f64>,
    meta: ChainMeta,
}

impl PairChain {
    pub fn new(first: Vec<f64>, second: Vec<f64>, meta: ChainMeta) -> Result<Self> {
        if first.len() != second.len() {
            return Err(Error::LengthMismatch {
                left: first.len(),
                right: second.len(),
            });
        }
        if first.is_empty() {
            return Err(Error::EmptyInput);
        }
        Ok(PairChain {
            first,
            second,
            meta,
        })
    }

    pub fn first(&self) -> &[f64] {
        &self.first
    }

    pub fn second(&self) -> &[f64] {
        &self.second
    }

    pub fn len(&self) -> usize {
        self.first.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn last(&self) -> (f64, f64) {
        let i = self.first.len() - 1;
        (self.first[i], self.second[i])
    }

    pub fn meta(&self) -> &ChainMeta {
        &self.meta
    }

    fn push(&mut self, a: f64, b: f64) {
        self.first.push(a);
        self.second.push(b);
    }

    fn reserve(&mut self, extra: usize) {
        self.first.reserve(extra);
        self.second.reserve(extra);
    }
}

fn check_steps(p: usize) -> Result<()> {
    if p == 0 {
        Err(Error::InvalidArgument("a chain must be extended by at least one state"))
    } else {
        Ok(())
    }
}

fn check_len(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidArgument("a chain needs at least one state"))
    } else {
        Ok(())
    }
}

/// One AR(1) transition: `rho x + tau z` with `z` standard normal.
pub fn ar1_step<V: Variates + ?Sized>(x: f64, params: Ar1Params, rng: &mut V) -> f64 {
    params.rho * x + params.tau * rng.standard_normal()
}

/// Appends `p` AR(1) transitions to `chain`, starting from its last value.
pub fn ar1_extend<V: Variates + ?Sized>(
    chain: &mut Chain,
    p: usize,
    params: Ar1Params,
    rng: &mut V,
) -> Result<()> {
    check_steps(p)?;
    chain.values.reserve(p);
    let mut x = chain.last();
    for _ in 0..p {
        x = ar1_step(x, params, rng);
        chain.values.push(x);
    }
    Ok(())
}

/// An AR(1) chain of `n` states whose first state is `init`.
pub fn ar1_run<V: Variates + ?Sized>(
    init: f64,
    n: usize,
    params: Ar1Params,
    rng: &mut V,
) -> Result<Chain> {
    check_len(n)?;
    let mut chain = Chain {
        values: vec![init],
        meta: ChainMeta {
            sampler: SamplerKind::Ar1(params),
            seed: rng.seed(),
        },
    };
    if n > 1 {
        ar1_extend(&mut chain, n - 1, params, rng)?;
    }
    Ok(chain)
}

/// One data-augmentation sweep: `x ~ N(0, 1/y')`, then
/// `y ~ Gamma(5/2, rate = 2 + x^2/2)`.
pub fn tda_step<V: Variates + ?Sized>(state: TdaState, rng: &mut V) -> Result<TdaState> {
    let x = rng.normal(0.0, libm::sqrt(1.0 / state.y))?;
    let y = rng.gamma(2.5, 2.0 + 0.5 * x * x)?;
    Ok(TdaState { x, y })
}

/// Appends `p` data-augmentation sweeps to a `(x, y)` chain.
pub fn tda_extend<V: Variates + ?Sized>(chain: &mut PairChain, p: usize, rng: &mut V) -> Result<()> {
    check_steps(p)?;
    chain.reserve(p);
    let (x, y) = chain.last();
    let mut state = TdaState::new(x, y)?;
    for _ in 0..p {
        state = tda_step(state, rng)?;
        chain.push(state.x, state.y);
    }
    Ok(())
}

/// A data-augmentation chain of `n` states starting at `init`.
pub fn tda_run<V: Variates + ?Sized>(n: usize, init: TdaState, rng: &mut V) -> Result<PairChain> {
    check_len(n)?;
    let init = TdaState::new(init.x, init.y)?;
    let mut chain = PairChain {
        first: vec![init.x],
        second: vec![init.y],
        meta: ChainMeta {
            sampler: SamplerKind::TDataAugmentation,
            seed: rng.seed(),
        },
    };
    if n > 1 {
        tda_extend(&mut chain, n - 1, rng)?;
    }
    Ok(chain)
}

fn draw_theta<V: Variates + ?Sized>(mu: f64, params: NormalPosteriorParams, rng: &mut V) -> Result<f64> {
    let m = params.m as f64;
    let dev = params.y_bar - mu;
    let precision = rng.gamma((m - 1.0) / 2.0, m * (params.s2 + dev * dev) / 2.0)?;
    Ok(1.0 / precision)
}

fn draw_mu<V: Variates + ?Sized>(theta: f64, params: NormalPosteriorParams, rng: &mut V) -> Result<f64> {
    rng.normal(params.y_bar, libm::sqrt(theta / params.m as f64))
}

/// One Gibbs sweep for the normal mean/variance posterior.
///
/// `theta | mu` is inverse gamma with shape `(m-1)/2` and scale
/// `m (s2 + (y_bar - mu)^2) / 2`, drawn as the reciprocal of a gamma
/// precision; `mu | theta ~ N(y_bar, theta / m)`.
pub fn nv_gibbs_step<V: Variates + ?Sized>(
    state: NvState,
    params: NormalPosteriorParams,
    order: UpdateOrder,
    rng: &mut V,
) -> Result<NvState> {
    match order {
        UpdateOrder::ThetaFirst => {
            let theta = draw_theta(state.mu, params, rng)?;
            let mu = draw_mu(theta, params, rng)?;
            Ok(NvState { mu, theta })
        }
        UpdateOrder::MuFirst => {
            let mu = draw_mu(state.theta, params, rng)?;
            let theta = draw_theta(mu, params, rng)?;
            Ok(NvState { mu, theta })
        }
    }
}

/// Appends `p` Gibbs sweeps to a `(mu, theta)` chain.
pub fn nv_gibbs_extend<V: Variates + ?Sized>(
    chain: &mut PairChain,
    p: usize,
    params: NormalPosteriorParams,
    order: UpdateOrder,
    rng: &mut V,
) -> Result<()> {
    check_steps(p)?;
    chain.reserve(p);
    let (mu, theta) = chain.last();
    let mut state = NvState::new(mu, theta)?;
    for _ in 0..p {
        state = nv_gibbs_step(state, params, order, rng)?;
        chain.push(state.mu, state.theta);
    }
    Ok(())
}

/// A normal-posterior Gibbs chain of `n` states starting at `init`.
pub fn nv_gibbs_run<V: Variates + ?Sized>(
    n: usize,
    params: NormalPosteriorParams,
    order: UpdateOrder,
    init: NvState,
    rng: &mut V,
) -> Result<PairChain> {
    check_len(n)?;
    let init = NvState::new(init.mu, init.theta)?;
    let mut chain = PairChain {
        first: vec![init.mu],
        second: vec![init.theta],
        meta: ChainMeta {
            sampler: SamplerKind::NormalPosterior(params, order),
            seed: rng.seed(),
        },
    };
    if n > 1 {
        nv_gibbs_extend(&mut chain, n - 1, params, order, rng)?;
    }
    Ok(chain)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Rng;

    /// Returns fixed normal and gamma draws.
    struct Forced {
        z: f64,
        gamma: Option<f64>,
        gamma_calls: Vec<(f64, f64)>,
    }

    impl Variates for Forced {
        fn uniform(&mut self) -> f64 {
            0.5
        }
        fn standard_normal(&mut self) -> f64 {
            self.z
        }
        fn standard_gamma(&mut self, shape: f64) -> f64 {
            shape
        }
        fn gamma(&mut self, shape: f64, rate: f64) -> Result<f64> {
            self.gamma_calls.push((shape, rate));
            Ok(self.gamma.unwrap_or(shape / rate))
        }
    }

    fn forced(z: f64, gamma: Option<f64>) -> Forced {
        Forced {
            z,
            gamma,
            gamma_calls: Vec::new(),
        }
    }

    fn mean(xs: &[f64]) -> f64 {
        xs.iter().sum::<f64>() / xs.len() as f64
    }

    #[test]
    fn parameter_validation() {
        assert!(Ar1Params::new(1.0, 1.0).is_err());
        assert!(Ar1Params::new(-1.0, 1.0).is_err());
        assert!(Ar1Params::new(0.5, 0.0).is_err());
        assert!(Ar1Params::new(f64::NAN, 1.0).is_err());
        assert!(Ar1Params::new(-0.99, 2.0).is_ok());
        assert!(NormalPosteriorParams::new(2, 1.0, 4.0).is_err());
        assert!(NormalPosteriorParams::new(11, 1.0, 0.0).is_err());
        assert!(TdaState::new(0.0, 0.0).is_err());
        assert!(NvState::new(0.0, -1.0).is_err());
    }

    #[test]
    fn ar1_forced_draws() {
        let p = Ar1Params::new(0.5, 1.0).unwrap();
        assert_eq!(ar1_step(2.0, p, &mut forced(0.0, None)), 1.0);
        let p = Ar1Params::new(0.9, 1.0).unwrap();
        assert_eq!(ar1_step(0.0, p, &mut forced(0.3, None)), 0.3);
    }

    #[test]
    fn ar1_extend_contracts() {
        let p = Ar1Params::new(0.5, 1.0).unwrap();
        let mut rng = Rng::new(1976);
        let chain = ar1_run(1.0, 2000, p, &mut rng).unwrap();
        assert_eq!(chain.len(), 2000);
        assert_eq!(chain.values()[0], 1.0);
        assert_eq!(chain.meta().seed, Some(1976));

        // p then q equals p + q on a continuous stream
        let mut r1 = Rng::new(3);
        let mut r2 = Rng::new(3);
        let mut a = ar1_run(1.0, 1, p, &mut r1).unwrap();
        ar1_extend(&mut a, 700, p, &mut r1).unwrap();
        let prefix = a.values().to_vec();
        ar1_extend(&mut a, 301, p, &mut r1).unwrap();
        let b = ar1_run(1.0, 1002, p, &mut r2).unwrap();
        assert_eq!(a.values(), b.values());
        assert_eq!(&a.values()[..701], &prefix[..]);

        assert!(ar1_extend(&mut a, 0, p, &mut r1).is_err());
        assert!(ar1_run(1.0, 0, p, &mut r1).is_err());
    }

    #[test]
    fn ar1_stationary_variance_and_lag_one() {
        for &rho in &[0.5, 0.95] {
            let p = Ar1Params::new(rho, 1.0).unwrap();
            let mut rng = Rng::new(42);
            let chain = ar1_run(0.0, 100_000, p, &mut rng).unwrap();
            let xs = chain.values();
            let m = mean(xs);
            let var = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / xs.len() as f64;
            let tol = if rho == 0.5 { 0.05 } else { 0.15 };
            let want = p.stationary_variance();
            assert!((var - want).abs() < tol * want, "rho={rho} var={var}");
            let lag1 = xs.windows(2).map(|w| (w[0] - m) * (w[1] - m)).sum::<f64>()
                / xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>();
            assert!((lag1 - rho).abs() < 0.02, "rho={rho} lag1={lag1}");
        }
    }

    #[test]
    fn tda_forced_structure() {
        let mut src = forced(0.0, None);
        let next = tda_step(TdaState::new(3.0, 1.0).unwrap(), &mut src).unwrap();
        assert_eq!(next.x, 0.0);
        assert_eq!(src.gamma_calls, vec![(2.5, 2.0)]);
        let mut src = forced(1.0, None);
        let next = tda_step(TdaState::new(0.0, 4.0).unwrap(), &mut src).unwrap();
        assert_eq!(next.x, 0.5);
        assert_eq!(src.gamma_calls, vec![(2.5, 2.125)]);
    }

    #[test]
    fn tda_runs() {
        let mut rng = Rng::new(100);
        let one = tda_run(1, TdaState::default(), &mut rng).unwrap();
        assert_eq!(one.last(), (1.0, 1.0));
        let a = tda_run(2000, TdaState::default(), &mut Rng::new(100)).unwrap();
        let b = tda_run(2000, TdaState::default(), &mut Rng::new(100)).unwrap();
        assert_eq!(a, b);
        assert!(a.second().iter().all(|&y| y > 0.0));
        assert!(tda_run(0, TdaState::default(), &mut rng).is_err());
    }

    #[test]
    fn tda_moments() {
        let chain = tda_run(100_000, TdaState::default(), &mut Rng::new(7)).unwrap();
        let x = chain.first();
        let x2: Vec<f64> = x.iter().map(|v| v * v).collect();
        assert!(mean(x).abs() < 0.05);
        assert!((mean(&x2) - 2.0).abs() < 0.15);
    }

    #[test]
    fn tda_latent_mean_matches_conditional_mean() {
        let chain = tda_run(1_000_000, TdaState::default(), &mut Rng::new(8)).unwrap();
        let y_mean = mean(&chain.second()[1..]);
        let cond: Vec<f64> = chain.first()[1..].iter().map(|x| 2.5 / (2.0 + 0.5 * x * x)).collect();
        let cond_mean = mean(&cond);
        assert!((y_mean - cond_mean).abs() < 0.02 * cond_mean);
    }

    #[test]
    fn nv_forced_structure() {
        let params = NormalPosteriorParams::new(11, 1.0, 4.0).unwrap();
        let mut src = forced(0.0, Some(1.0));
        let next = nv_gibbs_step(NvState::default(), params, UpdateOrder::ThetaFirst, &mut src).unwrap();
        assert_eq!(next, NvState { mu: 1.0, theta: 1.0 });
        // shape (m-1)/2 = 5, rate m (s2 + (y_bar - mu)^2) / 2 = 22
        assert_eq!(src.gamma_calls, vec![(5.0, 22.0)]);

        // mu first uses the incoming theta for the normal draw
        let mut src = forced(1.0, Some(0.5));
        let next =
            nv_gibbs_step(NvState::new(0.0, 11.0).unwrap(), params, UpdateOrder::MuFirst, &mut src).unwrap();
        assert_eq!(next.mu, 2.0);
        assert_eq!(next.theta, 2.0);
        assert_eq!(src.gamma_calls, vec![(5.0, 11.0 * 5.0 / 2.0)]);
    }

    #[test]
    fn nv_long_run_means() {
        let params = NormalPosteriorParams::new(11, 1.0, 4.0).unwrap();
        assert!((params.theta_mean().unwrap() - 44.0 / 7.0).abs() < 1e-12);
        for order in [UpdateOrder::ThetaFirst, UpdateOrder::MuFirst] {
            let chain = nv_gibbs_run(100_000, params, order, NvState::default(), &mut Rng::new(9)).unwrap();
            assert!((mean(chain.first()) - 1.0).abs() < 0.05);
            assert!((mean(chain.second()) - 44.0 / 7.0).abs() < 0.03 * 44.0 / 7.0);
            assert!(chain.second().iter().all(|&t| t > 0.0));
        }
    }

    #[test]
    fn nv_location_equivariance() {
        let base = NormalPosteriorParams::new(11, 1.0, 4.0).unwrap();
        let shifted = NormalPosteriorParams::new(11, 6.0, 4.0).unwrap();
        let a = nv_gibbs_run(500, base, UpdateOrder::ThetaFirst, NvState::default(), &mut Rng::new(5)).unwrap();
        let b = nv_gibbs_run(
            500,
            shifted,
            UpdateOrder::ThetaFirst,
            NvState::new(6.0, 1.0).unwrap(),
            &mut Rng::new(5),
        )
        .unwrap();
        for (x, y) in a.first().iter().zip(b.first()) {
            assert!((y - x - 5.0).abs() < 1e-9);
        }
        for (x, y) in a.second().iter().zip(b.second()) {
            assert!((x - y).abs() < 1e-9 * x.max(1.0));
        }
    }

    #[test]
    fn pair_chain_validation() {
        let meta = ChainMeta {
            sampler: SamplerKind::External,
            seed: None,
        };
        assert!(PairChain::new(vec![1.0], vec![], meta).is_err());
        assert!(PairChain::new(vec![], vec![], meta).is_err());
        assert!(Chain::new(vec![], meta).is_err());
    }
}
