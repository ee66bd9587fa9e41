//! Running estimates and the other series behind diagnostic plots.
//!
//! Every running operation produces a [`RunningSeries`] whose record `k`
//! depends only on the first `k` chain values.

mod acf;
mod kde;
mod rb;

pub use acf::{acf, default_max_lag};
pub use kde::{kde_1d, kde_2d, nrd0_bandwidth, Density1d, Density2d, Limits, DEFAULT_KDE_POINTS};
pub use rb::{rb_marginal_mu, rb_second_moment, RbVariant};

use crate::mcse::{
    batch_layout, overlapping_variance, type1_index, window_quantiles, BatchPolicy,
    Method, SortedWindow, MIN_SAMPLES,
};
use crate::{Error, Result};
use alloc::vec;
use alloc::vec::Vec;

/// Per-prefix records: `get(k)` covers the first `k` values and is `None`
/// where the estimator is undefined for that prefix length.
#[derive(Debug, Clone, PartialEq)]
pub struct RunningSeries {
    width: usize,
    rows: Vec<Option<Vec<f64>>>,
}

impl RunningSeries {
    fn with_capacity(width: usize, n: usize) -> Self {
        RunningSeries {
            width,
            rows: Vec::with_capacity(n),
        }
    }

    fn push(&mut self, row: Option<Vec<f64>>) {
        debug_assert!(row.as_ref().map_or(true, |r| r.len() == self.width));
        self.rows.push(row);
    }

    /// Number of records, equal to the chain length.
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Values per record.
    pub fn width(&self) -> usize {
        self.width
    }

    /// Record for prefix length `k` (1-based).
    pub fn get(&self, k: usize) -> Option<&[f64]> {
        k.checked_sub(1)
            .and_then(|i| self.rows.get(i))
            .and_then(|r| r.as_deref())
    }

    pub fn last(&self) -> Option<&[f64]> {
        self.get(self.rows.len())
    }

    /// Column `j` across all records.
    pub fn column(&self, j: usize) -> Vec<Option<f64>> {
        self.rows.iter().map(|r| r.as_ref().map(|r| r[j])).collect()
    }

    pub fn rows(&self) -> impl Iterator<Item = Option<&[f64]>> + '_ {
        self.rows.iter().map(|r| r.as_deref())
    }
}

fn nonempty(values: &[f64]) -> Result<()> {
    if values.is_empty() {
        Err(Error::EmptyInput)
    } else {
        Ok(())
    }
}

/// Cumulative means.
pub fn running_mean(values: &[f64]) -> Result<RunningSeries> {
    nonempty(values)?;
    let mut out = RunningSeries::with_capacity(1, values.len());
    let mut sum = 0.0;
    for (i, x) in values.iter().enumerate() {
        sum += x;
        out.push(Some(vec![sum / (i + 1) as f64]));
    }
    Ok(out)
}

/// Type-1 quantiles of each prefix, one column per probability.
pub fn running_quantiles(values: &[f64], probabilities: &[f64]) -> Result<RunningSeries> {
    nonempty(values)?;
    for &p in probabilities {
        crate::mcse::quantile_type1_sorted(&[0.0], p)?;
    }
    let mut out = RunningSeries::with_capacity(probabilities.len(), values.len());
    let mut window = SortedWindow::new(&[]);
    for &x in values {
        window.insert(x);
        let sorted = window.as_slice();
        out.push(Some(
            probabilities
                .iter()
                .map(|&p| sorted[type1_index(sorted.len(), p)])
                .collect(),
        ));
    }
    Ok(out)
}

/// Standard error of the running mean of `g(X)` with square-root batches;
/// records shorter than ten values are absent.
pub fn running_mcse(values: &[f64], method: Method, g: impl Fn(f64) -> f64) -> Result<RunningSeries> {
    nonempty(values)?;
    let transformed: Vec<f64> = values.iter().map(|&x| g(x)).collect();
    let mut out = RunningSeries::with_capacity(1, values.len());
    for k in 1..=values.len() {
        if k < MIN_SAMPLES {
            out.push(None);
            continue;
        }
        let est = crate::mcse::mcse(&transformed[..k], method, BatchPolicy::SquareRoot, |x| x)?;
        out.push(est.into_value().map(|e| vec![e.se]));
    }
    Ok(out)
}

/// Subsampling standard errors of the running quantiles.
pub fn running_quantile_se(values: &[f64], probabilities: &[f64]) -> Result<RunningSeries> {
    nonempty(values)?;
    for &p in probabilities {
        crate::mcse::quantile_type1_sorted(&[0.0], p)?;
    }
    let mut out = RunningSeries::with_capacity(probabilities.len(), values.len());
    for k in 1..=values.len() {
        if k < MIN_SAMPLES {
            out.push(None);
            continue;
        }
        let prefix = &values[..k];
        let b = batch_layout(k, BatchPolicy::SquareRoot)?.b;
        let ses = window_quantiles(prefix, b, probabilities)
            .iter()
            .map(|ys| libm::sqrt(overlapping_variance(ys, k, b) / k as f64))
            .collect();
        out.push(Some(ses));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mcse::{mcse, quantile_type1, subsample_quantile_se};
    use crate::rng::{Rng, Variates};
    use proptest::prelude::*;

    /// Running OBM standard errors computed from window means directly; used to
    /// cross-check [`running_mcse`].
    fn running_obm_direct(values: &[f64]) -> Vec<Option<f64>> {
        (1..=values.len())
            .map(|k| {
                if k < MIN_SAMPLES {
                    return None;
                }
                let b = batch_layout(k, BatchPolicy::SquareRoot).unwrap().b;
                let means = crate::mcse::window_means(&values[..k], b);
                Some(libm::sqrt(overlapping_variance(&means, k, b) / k as f64))
            })
            .collect()
    }

    fn col(series: &RunningSeries, j: usize) -> Vec<f64> {
        series.column(j).into_iter().map(Option::unwrap).collect()
    }

    #[test]
    fn running_mean_examples() {
        assert_eq!(col(&running_mean(&[1.0, 2.0, 3.0]).unwrap(), 0), vec![1.0, 1.5, 2.0]);
        assert!(col(&running_mean(&[2.5; 40]).unwrap(), 0).iter().all(|&m| m == 2.5));
        let mut rng = Rng::new(3);
        let xs: Vec<f64> = (0..5000).map(|_| rng.standard_normal()).collect();
        let last = running_mean(&xs).unwrap().last().unwrap()[0];
        let full = xs.iter().sum::<f64>() / xs.len() as f64;
        assert!((last - full).abs() <= 1e-12 * full.abs().max(1e-300));
        assert!(running_mean(&[]).is_err());
    }

    #[test]
    fn running_quantile_examples() {
        let s = running_quantiles(&[5.0, 1.0, 3.0], &[0.5]).unwrap();
        assert_eq!(col(&s, 0), vec![5.0, 1.0, 3.0]);
        let sorted: Vec<f64> = (0..50).map(|i| i as f64 * 0.5).collect();
        assert_eq!(col(&running_quantiles(&sorted, &[1.0]).unwrap(), 0), sorted);
        assert!(running_quantiles(&sorted, &[0.0]).is_err());
    }

    #[test]
    fn running_mcse_guard_and_consistency() {
        let mut rng = Rng::new(17);
        let xs: Vec<f64> = (0..600).map(|_| rng.standard_normal()).collect();
        for method in [Method::Bm, Method::Obm] {
            let s = running_mcse(&xs, method, |x| x).unwrap();
            for k in 1..10 {
                assert!(s.get(k).is_none());
            }
            let full = mcse(&xs, method, BatchPolicy::SquareRoot, |x| x).unwrap().into_value().unwrap();
            assert_eq!(s.last().unwrap()[0], full.se);
        }
        let constant = running_mcse(&[4.0; 120], Method::Obm, |x| x).unwrap();
        assert!(constant.rows().flatten().all(|r| r[0] == 0.0));
        let s = running_mcse(&xs, Method::Obm, |x| x).unwrap();
        for (k, direct) in running_obm_direct(&xs).into_iter().enumerate() {
            assert_eq!(s.get(k + 1).map(|r| r[0]), direct);
        }
    }

    #[test]
    fn running_quantile_se_examples() {
        let s = running_quantile_se(&[1.5; 60], &[0.25, 0.75]).unwrap();
        assert!(s.rows().flatten().all(|r| r.iter().all(|&v| v == 0.0)));
        let mut rng = Rng::new(1);
        let params = crate::samplers::Ar1Params::new(0.5, 1.0).unwrap();
        let chain = crate::samplers::ar1_run(1.0, 800, params, &mut rng).unwrap();
        let probs = [0.25, 0.75];
        let s = running_quantile_se(chain.values(), &probs).unwrap();
        let full = subsample_quantile_se(chain.values(), &probs).unwrap().into_value().unwrap();
        assert_eq!(s.last().unwrap(), &full.ses[..]);
        for k in 10..=800 {
            assert!(s.get(k).unwrap().iter().all(|v| v.is_finite() && *v > 0.0), "k={k}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn prefix_consistency(xs in proptest::collection::vec(-100.0f64..100.0, 1..200)) {
            let probs = [0.1, 0.5, 0.9];
            let means = running_mean(&xs).unwrap();
            let quants = running_quantiles(&xs, &probs).unwrap();
            let bm = running_mcse(&xs, Method::Bm, |x| x * x).unwrap();
            let obm = running_mcse(&xs, Method::Obm, |x| x).unwrap();
            let qse = running_quantile_se(&xs, &probs).unwrap();
            for k in 1..=xs.len() {
                let prefix = &xs[..k];
                let direct = prefix.iter().sum::<f64>() / k as f64;
                prop_assert!((means.get(k).unwrap()[0] - direct).abs() <= 1e-9 * direct.abs().max(1.0));
                for (j, &p) in probs.iter().enumerate() {
                    prop_assert_eq!(quants.get(k).unwrap()[j], quantile_type1(prefix, p).unwrap());
                }
                let fresh_bm = mcse(prefix, Method::Bm, BatchPolicy::SquareRoot, |x| x * x).unwrap();
                prop_assert_eq!(bm.get(k).map(|r| r[0]), fresh_bm.value().map(|e| e.se));
                let fresh_obm = mcse(prefix, Method::Obm, BatchPolicy::SquareRoot, |x| x).unwrap();
                prop_assert_eq!(obm.get(k).map(|r| r[0]), fresh_obm.value().map(|e| e.se));
                let fresh_q = subsample_quantile_se(prefix, &probs).unwrap();
                prop_assert_eq!(qse.get(k).map(|r| r.to_vec()), fresh_q.value().map(|s| s.ses.clone()));
            }
        }
    }
}
