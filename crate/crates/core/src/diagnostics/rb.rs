use super::{Density1d, RunningSeries};
use crate::dist::normal_pdf;
use crate::mcse::shifted_mean;
use crate::samplers::NormalPosteriorParams;
use crate::{Error, Result};
use alloc::vec;
use alloc::vec::Vec;

fn check_positive(name: &'static str, xs: &[f64]) -> Result<()> {
    if xs.is_empty() {
        return Err(Error::EmptyInput);
    }
    match xs.iter().find(|&&v| !(v > 0.0)) {
        Some(&v) => Err(Error::InvalidParameter {
            name,
            value: v,
            reason: "values must be positive",
        }),
        None => Ok(()),
    }
}

/// Rao-Blackwellized running estimate of `E X^2` for the data-augmentation
/// chain: since `Var(X | Y = y) = 1/y`, the running mean of `1/y`.
pub fn rb_second_moment(y: &[f64]) -> Result<RunningSeries> {
    check_positive("y", y)?;
    let mut out = RunningSeries::with_capacity(1, y.len());
    let mut sum = 0.0;
    for (i, v) in y.iter().enumerate() {
        sum += 1.0 / v;
        out.push(Some(vec![sum / (i + 1) as f64]));
    }
    Ok(out)
}

/// How the conditional densities of `mu | theta` are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RbVariant {
    /// One normal density with the average `theta` plugged in.
    #[default]
    Plugin,
    /// Average of the conditional densities over the `theta` draws.
    Mixture,
}

/// Estimate of the marginal density of `mu` from the `theta` draws, using
/// `mu | theta ~ N(y_bar, theta / m)`.
pub fn rb_marginal_mu(
    theta: &[f64],
    grid: &[f64],
    params: NormalPosteriorParams,
    variant: RbVariant,
) -> Result<Density1d> {
    check_positive("theta", theta)?;
    let m = params.m() as f64;
    let y_bar = params.y_bar();
    let density: Vec<f64> = match variant {
        RbVariant::Plugin => {
            let sd = libm::sqrt(shifted_mean(theta) / m);
            grid.iter()
                .map(|&x| normal_pdf(x, y_bar, sd))
                .collect::<Result<_>>()?
        }
        RbVariant::Mixture => {
            let sds: Vec<f64> = theta.iter().map(|t| libm::sqrt(t / m)).collect();
            let n = theta.len() as f64;
            grid.iter()
                .map(|&x| {
                    sds.iter()
                        .map(|&sd| normal_pdf(x, y_bar, sd))
                        .sum::<Result<f64>>()
                        .map(|s| s / n)
                })
                .collect::<Result<_>>()?
        }
    };
    Ok(Density1d {
        x: grid.to_vec(),
        density,
        bandwidth: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> NormalPosteriorParams {
        NormalPosteriorParams::new(11, 1.0, 4.0).unwrap()
    }

    fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
        x.windows(2).zip(y.windows(2)).map(|(xs, ys)| 0.5 * (xs[1] - xs[0]) * (ys[0] + ys[1])).sum()
    }

    #[test]
    fn second_moment_examples() {
        let s = rb_second_moment(&[0.5, 0.5]).unwrap();
        assert_eq!(s.column(0), vec![Some(2.0), Some(2.0)]);
        let s = rb_second_moment(&[1.0, 2.0, 4.0]).unwrap();
        assert_eq!(s.get(1).unwrap()[0], 1.0);
        assert_eq!(s.get(2).unwrap()[0], 0.75);
        assert!((s.get(3).unwrap()[0] - 1.75 / 3.0).abs() < 1e-15);
        assert!(rb_second_moment(&[1.0, 0.0]).is_err());
        assert!(rb_second_moment(&[]).is_err());
    }

    #[test]
    fn marginal_variants() {
        let grid: Vec<f64> = (0..=700).map(|i| -3.0 + 0.01 * i as f64).collect();
        let one = [5.5];
        let a = rb_marginal_mu(&one, &grid, params(), RbVariant::Plugin).unwrap();
        let b = rb_marginal_mu(&one, &grid, params(), RbVariant::Mixture).unwrap();
        for (u, v) in a.density.iter().zip(&b.density) {
            assert!((u - v).abs() < 1e-15);
        }
        // mode value at y_bar
        let theta = [4.0, 6.0, 8.0];
        let at_mode = rb_marginal_mu(&theta, &[1.0], params(), RbVariant::Plugin).unwrap();
        let sd = libm::sqrt(6.0 / 11.0);
        assert!((at_mode.density[0] - 0.398_942_280_401_432_7 / sd).abs() < 1e-14);
        assert!(rb_marginal_mu(&[1.0, -1.0], &grid, params(), RbVariant::Mixture).is_err());
    }

    #[test]
    fn mixture_normalizes_and_ignores_order() {
        let theta: Vec<f64> = (0..200).map(|i| 2.0 + (i % 17) as f64 * 0.7).collect();
        let max_sd = libm::sqrt(theta.iter().cloned().fold(0.0, f64::max) / 11.0);
        let grid: Vec<f64> = (0..=4000).map(|i| 1.0 - 8.0 * max_sd + 16.0 * max_sd * i as f64 / 4000.0).collect();
        let mix = rb_marginal_mu(&theta, &grid, params(), RbVariant::Mixture).unwrap();
        assert!((trapezoid(&mix.x, &mix.density) - 1.0).abs() < 1e-3);
        let mut reversed = theta.clone();
        reversed.reverse();
        let mix_rev = rb_marginal_mu(&reversed, &grid, params(), RbVariant::Mixture).unwrap();
        for (u, v) in mix.density.iter().zip(&mix_rev.density) {
            assert!((u - v).abs() < 1e-14);
        }
        // plugin depends on theta only through its mean
        let flat = vec![theta.iter().sum::<f64>() / theta.len() as f64; 3];
        let p1 = rb_marginal_mu(&theta, &grid, params(), RbVariant::Plugin).unwrap();
        let p2 = rb_marginal_mu(&flat, &grid, params(), RbVariant::Plugin).unwrap();
        for (u, v) in p1.density.iter().zip(&p2.density) {
            assert!((u - v).abs() < 1e-12);
        }
    }
}
