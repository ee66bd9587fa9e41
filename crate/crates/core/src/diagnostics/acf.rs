use crate::mcse::shifted_mean;
use crate::{Error, Result};
use alloc::vec::Vec;

/// `floor(10 log10 n)`, capped at `n - 1`.
pub fn default_max_lag(n: usize) -> usize {
    if n < 2 {
        return 0;
    }
    let lag = libm::floor(10.0 * libm::log10(n as f64)) as usize;
    lag.min(n - 1)
}

/// Sample autocorrelations `r_0..=r_max_lag`, normalized by the lag-0 sum of
/// squares. `max_lag` defaults to [`default_max_lag`].
pub fn acf(values: &[f64], max_lag: Option<usize>) -> Result<Vec<f64>> {
    let n = values.len();
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    let max_lag = max_lag.unwrap_or_else(|| default_max_lag(n));
    if max_lag >= n {
        return Err(Error::InvalidArgument("max_lag must be smaller than the chain length"));
    }
    let mean = shifted_mean(values);
    let centered: Vec<f64> = values.iter().map(|x| x - mean).collect();
    let c0: f64 = centered.iter().map(|d| d * d).sum();
    if !(c0 > 0.0) {
        return Err(Error::ZeroVariance);
    }
    Ok((0..=max_lag)
        .map(|k| {
            if k == 0 {
                return 1.0;
            }
            let ck: f64 = centered[..n - k]
                .iter()
                .zip(&centered[k..])
                .map(|(a, b)| a * b)
                .sum();
            ck / c0
        })
        .collect())
}
