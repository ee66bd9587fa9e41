//! Monte Carlo standard errors: batch means, overlapping batch means and
//! subsampling for quantiles.
//!
//! Chains shorter than [`MIN_SAMPLES`] produce [`Outcome::Absent`] instead of
//! a number; chains shorter than [`WARN_SAMPLES`] produce an estimate with
//! the small-sample flag set.

use crate::dist::{t_quantile, TailProbability};
use crate::{Error, Result};
use alloc::vec::Vec;

/// Below this many samples no standard error is reported.
pub const MIN_SAMPLES: usize = 10;
/// Below this many samples the estimate carries a small-sample warning.
pub const WARN_SAMPLES: usize = 1000;

/// How the batch size `b` is chosen from the chain length `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BatchPolicy {
    /// `b = floor(sqrt(n))`
    SquareRoot,
    /// `b = floor(n^(1/3))`
    CubeRoot,
    /// A fixed batch size, which must exceed one.
    Fixed(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Non-overlapping batch means.
    Bm,
    /// Overlapping batch means.
    Obm,
}

/// Batch size `b` and number of complete non-overlapping batches `a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BatchLayout {
    pub b: usize,
    pub a: usize,
}

/// Why an estimator declined to produce a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Absence {
    TooFewSamples { n: usize, min: usize },
}

/// Either a value or the absent-value sentinel with its reason.
#[derive(Debug, Clone, PartialEq)]
pub enum Outcome<T> {
    Value(T),
    Absent(Absence),
}

impl<T> Outcome<T> {
    pub fn value(&self) -> Option<&T> {
        match self {
            Outcome::Value(v) => Some(v),
            Outcome::Absent(_) => None,
        }
    }

    pub fn into_value(self) -> Option<T> {
        match self {
            Outcome::Value(v) => Some(v),
            Outcome::Absent(_) => None,
        }
    }

    pub fn is_absent(&self) -> bool {
        matches!(self, Outcome::Absent(_))
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Outcome<U> {
        match self {
            Outcome::Value(v) => Outcome::Value(f(v)),
            Outcome::Absent(reason) => Outcome::Absent(reason),
        }
    }
}

/// A batch-means standard error together with the layout that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McseEstimate {
    /// Monte Carlo standard error, `sqrt(sigma2_hat / n)`.
    pub se: f64,
    /// Estimate of the long-run variance in the Markov chain CLT.
    pub sigma2_hat: f64,
    pub b: usize,
    /// Number of batches (BM) or windows (OBM).
    pub a: usize,
    pub n: usize,
    pub method: Method,
    /// Set when `n` is below [`WARN_SAMPLES`].
    pub small_sample: bool,
}

impl McseEstimate {
    /// Degrees of freedom for the t critical value: `a - 1` for BM and
    /// `n - b + 1` for OBM.
    pub fn df(&self) -> f64 {
        match self.method {
            Method::Bm => (self.a - 1) as f64,
            Method::Obm => (self.n - self.b + 1) as f64,
        }
    }
}

/// `floor(n^(1/3))`, corrected so perfect cubes are not floored one short.
fn integer_cbrt(n: usize) -> usize {
    let mut r = libm::floor(libm::cbrt(n as f64)) as usize;
    while (r + 1).pow(3) <= n {
        r += 1;
    }
    while r > 0 && r.pow(3) > n {
        r -= 1;
    }
    r
}

fn integer_sqrt(n: usize) -> usize {
    let mut r = libm::floor(libm::sqrt(n as f64)) as usize;
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    while r > 0 && r * r > n {
        r -= 1;
    }
    r
}

/// Batch size and batch count for a chain of length `n`.
pub fn batch_layout(n: usize, policy: BatchPolicy) -> Result<BatchLayout> {
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    let b = match policy {
        BatchPolicy::SquareRoot => integer_sqrt(n),
        BatchPolicy::CubeRoot => integer_cbrt(n),
        BatchPolicy::Fixed(b) if b > 1 => b,
        BatchPolicy::Fixed(b) => return Err(Error::InvalidBatchSize(b)),
    };
    Ok(BatchLayout { b, a: n / b })
}

/// Mean computed as `x[0] + mean(x - x[0])`: exact for constant input.
pub(crate) fn shifted_mean(xs: &[f64]) -> f64 {
    let Some(&first) = xs.first() else {
        return f64::NAN;
    };
    first + xs.iter().map(|x| x - first).sum::<f64>() / xs.len() as f64
}

fn sum_sq_dev(xs: &[f64], center: f64) -> f64 {
    xs.iter().map(|y| (y - center) * (y - center)).sum()
}

/// Long-run variance from `n - b + 1` overlapping window statistics:
/// `n b Σ (Y_k - Ȳ)^2 / ((a - 1) a)`.
pub fn overlapping_variance(window_stats: &[f64], n: usize, b: usize) -> f64 {
    let a = window_stats.len() as f64;
    let mu = shifted_mean(window_stats);
    n as f64 * b as f64 * sum_sq_dev(window_stats, mu) / ((a - 1.0) * a)
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// Means of every length-`b` window of `xs`, from double-double prefix sums.
/// Each window sum is accurate to well below one rounding of its own
/// magnitude, and bitwise identical for identical windows.
pub(crate) fn window_means(xs: &[f64], b: usize) -> Vec<f64> {
    let mut hi = Vec::with_capacity(xs.len() + 1);
    let mut lo = Vec::with_capacity(xs.len() + 1);
    hi.push(0.0);
    lo.push(0.0);
    let (mut h, mut l) = (0.0f64, 0.0f64);
    for &x in xs {
        let (s, e) = two_sum(h, x);
        let (s, e) = two_sum(s, l + e);
        h = s;
        l = e;
        hi.push(h);
        lo.push(l);
    }
    let inv_b = 1.0 / b as f64;
    (0..=xs.len() - b)
        .map(|k| {
            let (d, e) = two_sum(hi[k + b], -hi[k]);
            (d + (e + (lo[k + b] - lo[k]))) * inv_b
        })
        .collect()
}

fn too_few(n: usize) -> Option<Absence> {
    (n < MIN_SAMPLES).then_some(Absence::TooFewSamples {
        n,
        min: MIN_SAMPLES,
    })
}

/// Batch-means standard error of the mean of `g(X)`.
///
/// The batch means are `Ȳ_k = mean(g(x))` over `a` consecutive batches of
/// `b` values (a trailing partial batch is ignored), centered at the mean of
/// the batch means, and `σ̂² = b Σ (Ȳ_k - μ̂)² / (a - 1)`.
pub fn mcse_bm(
    values: &[f64],
    policy: BatchPolicy,
    g: impl Fn(f64) -> f64,
) -> Result<Outcome<McseEstimate>> {
    let n = values.len();
    if let Some(reason) = too_few(n) {
        return Ok(Outcome::Absent(reason));
    }
    let BatchLayout { b, a } = batch_layout(n, policy)?;
    if a < 2 {
        return Err(Error::DegenerateLayout { n, b, a });
    }
    let batch_means: Vec<f64> = values[..a * b]
        .chunks_exact(b)
        .map(|chunk| chunk.iter().map(|&x| g(x)).sum::<f64>() / b as f64)
        .collect();
    let mu = shifted_mean(&batch_means);
    let sigma2_hat = b as f64 * sum_sq_dev(&batch_means, mu) / (a - 1) as f64;
    Ok(Outcome::Value(McseEstimate {
        se: libm::sqrt(sigma2_hat / n as f64),
        sigma2_hat,
        b,
        a,
        n,
        method: Method::Bm,
        small_sample: n < WARN_SAMPLES,
    }))
}

/// Overlapping-batch-means standard error of the mean of `g(X)`, using all
/// `a = n - b + 1` windows of length `b`.
pub fn mcse_obm(
    values: &[f64],
    policy: BatchPolicy,
    g: impl Fn(f64) -> f64,
) -> Result<Outcome<McseEstimate>> {
    let n = values.len();
    if let Some(reason) = too_few(n) {
        return Ok(Outcome::Absent(reason));
    }
    let BatchLayout { b, .. } = batch_layout(n, policy)?;
    if b >= n {
        return Err(Error::DegenerateLayout { n, b, a: n.saturating_sub(b) + 1 });
    }
    let transformed: Vec<f64> = values.iter().map(|&x| g(x)).collect();
    let windows = window_means(&transformed, b);
    let sigma2_hat = overlapping_variance(&windows, n, b);
    Ok(Outcome::Value(McseEstimate {
        se: libm::sqrt(sigma2_hat / n as f64),
        sigma2_hat,
        b,
        a: windows.len(),
        n,
        method: Method::Obm,
        small_sample: n < WARN_SAMPLES,
    }))
}

/// Dispatches to [`mcse_bm`] or [`mcse_obm`].
pub fn mcse(
    values: &[f64],
    method: Method,
    policy: BatchPolicy,
    g: impl Fn(f64) -> f64,
) -> Result<Outcome<McseEstimate>> {
    match method {
        Method::Bm => mcse_bm(values, policy, g),
        Method::Obm => mcse_obm(values, policy, g),
    }
}

const QUANTILE_FUZZ: f64 = 4.0 * f64::EPSILON;

fn check_quantile_prob(p: f64) -> Result<()> {
    if p > 0.0 && p <= 1.0 {
        Ok(())
    } else {
        Err(Error::Domain {
            function: "quantile_type1",
            value: p,
        })
    }
}

/// Zero-based index of the type-1 (inverse empirical CDF) order statistic:
/// `ceil(n p) - 1`, with products within a few ulps of an integer treated as
/// that integer.
pub(crate) fn type1_index(n: usize, p: f64) -> usize {
    let np = n as f64 * p;
    let j = libm::floor(np + QUANTILE_FUZZ);
    let j = if np > j + QUANTILE_FUZZ { j + 1.0 } else { j };
    (j as usize).clamp(1, n) - 1
}

/// Type-1 quantile of already sorted data.
pub fn quantile_type1_sorted(sorted: &[f64], p: f64) -> Result<f64> {
    if sorted.is_empty() {
        return Err(Error::EmptyInput);
    }
    check_quantile_prob(p)?;
    Ok(sorted[type1_index(sorted.len(), p)])
}

pub(crate) fn sorted_copy(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_unstable_by(f64::total_cmp);
    v
}

/// Type-1 quantile: the `ceil(n p)`-th order statistic, for `p` in `(0, 1]`.
pub fn quantile_type1(values: &[f64], p: f64) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    check_quantile_prob(p)?;
    quantile_type1_sorted(&sorted_copy(values), p)
}

/// Point estimates and subsampling standard errors for a set of quantiles.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantileSeSet {
    pub probabilities: Vec<f64>,
    /// Type-1 quantiles of the whole chain.
    pub point_estimates: Vec<f64>,
    pub ses: Vec<f64>,
    pub b: usize,
    /// Number of overlapping windows, `n - b + 1`.
    pub a: usize,
    pub n: usize,
}

impl QuantileSeSet {
    /// Degrees of freedom for the critical value, `n - b + 1`.
    pub fn df(&self) -> f64 {
        (self.n - self.b + 1) as f64
    }
}

/// Sorted contents of a window sliding one position at a time.
pub(crate) struct SortedWindow {
    sorted: Vec<f64>,
}

impl SortedWindow {
    pub(crate) fn new(init: &[f64]) -> Self {
        SortedWindow {
            sorted: sorted_copy(init),
        }
    }

    pub(crate) fn slide(&mut self, leaving: f64, entering: f64) {
        let at = self
            .sorted
            .binary_search_by(|probe| probe.total_cmp(&leaving))
            .expect("leaving value is in the window");
        self.sorted.remove(at);
        self.insert(entering);
    }

    pub(crate) fn insert(&mut self, x: f64) {
        let at = self.sorted.partition_point(|probe| probe.total_cmp(&x).is_le());
        self.sorted.insert(at, x);
    }

    pub(crate) fn as_slice(&self) -> &[f64] {
        &self.sorted
    }
}

/// Type-1 quantiles of every length-`b` window, one vector per probability.
pub(crate) fn window_quantiles(values: &[f64], b: usize, probabilities: &[f64]) -> Vec<Vec<f64>> {
    let windows = values.len() - b + 1;
    let mut out: Vec<Vec<f64>> = probabilities.iter().map(|_| Vec::with_capacity(windows)).collect();
    let idx: Vec<usize> = probabilities.iter().map(|&p| type1_index(b, p)).collect();
    let mut window = SortedWindow::new(&values[..b]);
    for k in 0..windows {
        if k > 0 {
            window.slide(values[k - 1], values[k + b - 1]);
        }
        for (series, &i) in out.iter_mut().zip(&idx) {
            series.push(window.as_slice()[i]);
        }
    }
    out
}

/// Subsampling standard errors for type-1 quantiles, using the overlapping
/// windows of the OBM estimator with `b = floor(sqrt(n))`.
pub fn subsample_quantile_se(values: &[f64], probabilities: &[f64]) -> Result<Outcome<QuantileSeSet>> {
    for &p in probabilities {
        check_quantile_prob(p)?;
    }
    let n = values.len();
    if let Some(reason) = too_few(n) {
        return Ok(Outcome::Absent(reason));
    }
    let BatchLayout { b, .. } = batch_layout(n, BatchPolicy::SquareRoot)?;
    let per_prob = window_quantiles(values, b, probabilities);
    let ses = per_prob
        .iter()
        .map(|ys| libm::sqrt(overlapping_variance(ys, n, b) / n as f64))
        .collect();
    let sorted = sorted_copy(values);
    let point_estimates = probabilities
        .iter()
        .map(|&p| sorted[type1_index(n, p)])
        .collect();
    Ok(Outcome::Value(QuantileSeSet {
        probabilities: probabilities.to_vec(),
        point_estimates,
        ses,
        b,
        a: n - b + 1,
        n,
    }))
}

/// A symmetric t interval `center ± critical · se`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub center: f64,
    pub lower: f64,
    pub upper: f64,
    pub half_width: f64,
    pub critical: f64,
    pub df: f64,
    pub se: f64,
}

impl Interval {
    pub fn from_se(center: f64, se: f64, level: TailProbability, df: f64) -> Result<Self> {
        let critical = t_quantile(level.get(), df)?;
        let half_width = critical * se;
        Ok(Interval {
            center,
            lower: center - half_width,
            upper: center + half_width,
            half_width,
            critical,
            df,
            se,
        })
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }
}

/// Interval for the mean: sample mean ± `t_quantile(level, df) · se`.
///
/// `level` is the one-sided tail, so 0.9 gives an 80% two-sided interval.
pub fn ci_mean(
    values: &[f64],
    method: Method,
    policy: BatchPolicy,
    level: TailProbability,
) -> Result<Outcome<Interval>> {
    let est = match mcse(values, method, policy, |x| x)? {
        Outcome::Value(est) => est,
        Outcome::Absent(reason) => return Ok(Outcome::Absent(reason)),
    };
    let center = shifted_mean(values);
    Interval::from_se(center, est.se, level, est.df()).map(Outcome::Value)
}

/// Subsampling intervals for several quantiles at once. With `bonferroni`
/// set, the per-interval level becomes `1 - (1 - level) / k`.
pub fn ci_quantiles(
    values: &[f64],
    probabilities: &[f64],
    level: TailProbability,
    bonferroni: bool,
) -> Result<Outcome<Vec<Interval>>> {
    let set = match subsample_quantile_se(values, probabilities)? {
        Outcome::Value(set) => set,
        Outcome::Absent(reason) => return Ok(Outcome::Absent(reason)),
    };
    let level = if bonferroni {
        level.bonferroni(probabilities.len())
    } else {
        level
    };
    let df = set.df();
    set.point_estimates
        .iter()
        .zip(&set.ses)
        .map(|(&q, &se)| Interval::from_se(q, se, level, df))
        .collect::<Result<Vec<_>>>()
        .map(Outcome::Value)
}
