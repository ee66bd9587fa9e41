use crate::mcse::sorted_copy;
use crate::{Error, Result};
use alloc::vec;
use alloc::vec::Vec;

/// Grid size of a 1-D density estimate unless told otherwise.
pub const DEFAULT_KDE_POINTS: usize = 512;
const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;
/// The 1-D grid extends this many bandwidths beyond the data range.
const CUT: f64 = 3.0;

/// A density evaluated on increasing abscissae.
#[derive(Debug, Clone, PartialEq)]
pub struct Density1d {
    pub x: Vec<f64>,
    pub density: Vec<f64>,
    /// Kernel standard deviation, for kernel estimates.
    pub bandwidth: Option<f64>,
}

/// A density lattice; `density[i * y.len() + j]` is the value at `(x[i], y[j])`.
#[derive(Debug, Clone, PartialEq)]
pub struct Density2d {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub density: Vec<f64>,
    pub bandwidth_x: f64,
    pub bandwidth_y: f64,
}

impl Density2d {
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.density[i * self.y.len() + j]
    }
}

/// Rectangle `[x_lo, x_hi] × [y_lo, y_hi]` for a 2-D lattice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Limits {
    pub x_lo: f64,
    pub x_hi: f64,
    pub y_lo: f64,
    pub y_hi: f64,
}

impl Limits {
    pub fn transpose(self) -> Self {
        Limits {
            x_lo: self.y_lo,
            x_hi: self.y_hi,
            y_lo: self.x_lo,
            y_hi: self.x_hi,
        }
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let step = (hi - lo) / (n - 1) as f64;
    (0..n)
        .map(|i| if i == n - 1 { hi } else { lo + step * i as f64 })
        .collect()
}

fn quantile_type7(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = libm::floor(h) as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// `min(sd, IQR / 1.34)`, falling back to `sd` when the IQR is zero.
fn spread(samples: &[f64]) -> Result<f64> {
    let n = samples.len();
    if n < 2 {
        return Err(Error::InvalidArgument("density estimation needs at least two samples"));
    }
    let mean = crate::mcse::shifted_mean(samples);
    let sd = libm::sqrt(samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64);
    let sorted = sorted_copy(samples);
    let iqr = quantile_type7(&sorted, 0.75) - quantile_type7(&sorted, 0.25);
    let lo = sd.min(iqr / 1.34);
    let lo = if lo > 0.0 { lo } else { sd };
    if lo > 0.0 && lo.is_finite() {
        Ok(lo)
    } else {
        Err(Error::ZeroVariance)
    }
}

/// Rule-of-thumb bandwidth `0.9 min(sd, IQR/1.34) n^(-1/5)`.
pub fn nrd0_bandwidth(samples: &[f64]) -> Result<f64> {
    Ok(0.9 * spread(samples)? * libm::pow(samples.len() as f64, -0.2))
}

fn normal_reference_bandwidth(samples: &[f64]) -> Result<f64> {
    Ok(1.06 * spread(samples)? * libm::pow(samples.len() as f64, -0.2))
}

#[inline]
fn kernel(u: f64) -> f64 {
    FRAC_1_SQRT_2PI * libm::exp(-0.5 * u * u)
}

/// Gaussian kernel density estimate on `n_grid` equally spaced points
/// spanning the data range widened by three bandwidths on each side.
pub fn kde_1d(samples: &[f64], n_grid: usize) -> Result<Density1d> {
    if n_grid < 2 {
        return Err(Error::InvalidArgument("grid needs at least two points"));
    }
    let h = nrd0_bandwidth(samples)?;
    let (min, max) = samples
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    let x = linspace(min - CUT * h, max + CUT * h, n_grid);
    let scale = 1.0 / (samples.len() as f64 * h);
    let density = x
        .iter()
        .map(|&g| samples.iter().map(|&s| kernel((g - s) / h)).sum::<f64>() * scale)
        .collect();
    Ok(Density1d {
        x,
        density,
        bandwidth: Some(h),
    })
}

/// Product-Gaussian kernel density estimate on an `n_grid × n_grid` lattice
/// over `lims`. Each axis uses `1.06 min(sd, IQR/1.34) n^(-1/5)` as its
/// kernel standard deviation.
pub fn kde_2d(x: &[f64], y: &[f64], n_grid: usize, lims: Limits) -> Result<Density2d> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if n_grid < 2 {
        return Err(Error::InvalidArgument("grid needs at least two points"));
    }
    if !(lims.x_lo < lims.x_hi) || !(lims.y_lo < lims.y_hi) {
        return Err(Error::InvalidArgument("lattice limits must be increasing"));
    }
    let hx = normal_reference_bandwidth(x)?;
    let hy = normal_reference_bandwidth(y)?;
    let gx = linspace(lims.x_lo, lims.x_hi, n_grid);
    let gy = linspace(lims.y_lo, lims.y_hi, n_grid);
    let mut density = vec![0.0; n_grid * n_grid];
    let mut kx = vec![0.0; n_grid];
    let mut ky = vec![0.0; n_grid];
    for (&xs, &ys) in x.iter().zip(y) {
        for (k, &g) in kx.iter_mut().zip(&gx) {
            *k = kernel((g - xs) / hx);
        }
        for (k, &g) in ky.iter_mut().zip(&gy) {
            *k = kernel((g - ys) / hy);
        }
        for (i, &a) in kx.iter().enumerate() {
            let row = &mut density[i * n_grid..(i + 1) * n_grid];
            for (cell, &b) in row.iter_mut().zip(&ky) {
                *cell += a * b;
            }
        }
    }
    let scale = 1.0 / (x.len() as f64 * hx * hy);
    for v in &mut density {
        *v *= scale;
    }
    Ok(Density2d {
        x: gx,
        y: gy,
        density,
        bandwidth_x: hx,
        bandwidth_y: hy,
    })
}
