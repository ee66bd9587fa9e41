//! Seeded pseudo-random numbers and the variates the samplers draw.
//!
//! [`Rng`] is xoshiro256++ seeded through SplitMix64. Normal variates use the
//! polar (Marsaglia) method and gamma variates the Marsaglia–Tsang squeeze;
//! both are rejection methods, so the number of uniforms consumed per draw
//! varies. Reproducibility is defined over the underlying 64-bit stream.

use crate::{Error, Result};

/// Source of the random variates needed by the samplers.
///
/// Samplers are generic over this trait so tests can substitute a source
/// with forced draws.
pub trait Variates {
    /// Uniform draw on `[0, 1)`.
    fn uniform(&mut self) -> f64;

    /// Seed the source was created from, when it has one.
    fn seed(&self) -> Option<u64> {
        None
    }

    /// Standard normal draw.
    fn standard_normal(&mut self) -> f64;

    /// Gamma draw with the given shape and unit rate. `shape` must be positive.
    fn standard_gamma(&mut self, shape: f64) -> f64;

    /// Draw from `N(mean, sd^2)`.
    fn normal(&mut self, mean: f64, sd: f64) -> Result<f64> {
        if !(sd > 0.0) || !sd.is_finite() {
            return Err(Error::InvalidParameter {
                name: "sd",
                value: sd,
                reason: "standard deviation must be positive and finite",
            });
        }
        Ok(mean + sd * self.standard_normal())
    }

    /// Draw from the gamma distribution with density proportional to
    /// `x^(shape - 1) exp(-rate x)`.
    fn gamma(&mut self, shape: f64, rate: f64) -> Result<f64> {
        if !(shape > 0.0) || !shape.is_finite() {
            return Err(Error::InvalidParameter {
                name: "shape",
                value: shape,
                reason: "gamma shape must be positive and finite",
            });
        }
        if !(rate > 0.0) || !rate.is_finite() {
            return Err(Error::InvalidParameter {
                name: "rate",
                value: rate,
                reason: "gamma rate must be positive and finite",
            });
        }
        Ok(self.standard_gamma(shape) / rate)
    }
}

/// Size in bytes of a serialized [`Rng`].
pub const STATE_BYTES: usize = 49;

/// Deterministic xoshiro256++ generator.
///
/// The state is plain data: [`Rng::to_bytes`] and [`Rng::from_bytes`]
/// snapshot and restore it, including the cached second normal deviate of
/// the polar method.
#[derive(Debug, Clone, PartialEq)]
pub struct Rng {
    seed: u64,
    s: [u64; 4],
    spare: Option<f64>,
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        let mut sm = seed;
        let s = [
            splitmix64(&mut sm),
            splitmix64(&mut sm),
            splitmix64(&mut sm),
            splitmix64(&mut sm),
        ];
        Rng {
            seed,
            s,
            spare: None,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn next_u64(&mut self) -> u64 {
        let s = &mut self.s;
        let result = s[0].wrapping_add(s[3]).rotate_left(23).wrapping_add(s[0]);
        let t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = s[3].rotate_left(45);
        result
    }

    /// Uniform draw on the open interval `(0, 1)`.
    pub fn uniform_open(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    pub fn to_bytes(&self) -> [u8; STATE_BYTES] {
        let mut out = [0u8; STATE_BYTES];
        out[..8].copy_from_slice(&self.seed.to_le_bytes());
        for (i, w) in self.s.iter().enumerate() {
            out[8 + 8 * i..16 + 8 * i].copy_from_slice(&w.to_le_bytes());
        }
        if let Some(z) = self.spare {
            out[40] = 1;
            out[41..].copy_from_slice(&z.to_bits().to_le_bytes());
        }
        out
    }

    /// Restores a generator from [`Rng::to_bytes`] output. Returns `None` for
    /// an all-zero xoshiro state or a malformed spare flag.
    pub fn from_bytes(bytes: &[u8; STATE_BYTES]) -> Option<Self> {
        let word = |at: usize| {
            let mut w = [0u8; 8];
            w.copy_from_slice(&bytes[at..at + 8]);
            u64::from_le_bytes(w)
        };
        let s = [word(8), word(16), word(24), word(32)];
        if s == [0; 4] {
            return None;
        }
        let spare = match bytes[40] {
            0 => None,
            1 => Some(f64::from_bits(word(41))),
            _ => return None,
        };
        Some(Rng {
            seed: word(0),
            s,
            spare,
        })
    }
}

impl Variates for Rng {
    fn seed(&self) -> Option<u64> {
        Some(self.seed)
    }

    fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    fn standard_normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        loop {
            let u = 2.0 * self.uniform() - 1.0;
            let v = 2.0 * self.uniform() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let factor = libm::sqrt(-2.0 * libm::log(s) / s);
                self.spare = Some(v * factor);
                return u * factor;
            }
        }
    }

    fn standard_gamma(&mut self, shape: f64) -> f64 {
        if shape < 1.0 {
            // Boost: if G ~ Gamma(a + 1) and U ~ U(0,1) then G U^(1/a) ~ Gamma(a).
            let g = self.standard_gamma(shape + 1.0);
            return g * libm::pow(self.uniform_open(), 1.0 / shape);
        }
        let d = shape - 1.0 / 3.0;
        let c = 1.0 / libm::sqrt(9.0 * d);
        loop {
            let x = self.standard_normal();
            let t = 1.0 + c * x;
            if t <= 0.0 {
                continue;
            }
            let v = t * t * t;
            let u = self.uniform_open();
            let x2 = x * x;
            if u < 1.0 - 0.0331 * x2 * x2 {
                return d * v;
            }
            if libm::log(u) < 0.5 * x2 + d * (1.0 - v + libm::log(v)) {
                return d * v;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    fn moments(draws: impl Iterator<Item = f64>) -> (f64, f64, usize) {
        let v: Vec<f64> = draws.collect();
        let n = v.len() as f64;
        let mean = v.iter().sum::<f64>() / n;
        let var = v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
        (mean, var, v.len())
    }

    #[test]
    fn same_seed_same_stream() {
        let mut a = Rng::new(1976);
        let mut b = Rng::new(1976);
        for _ in 0..1000 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
        for _ in 0..100 {
            assert_eq!(a.standard_normal().to_bits(), b.standard_normal().to_bits());
            assert_eq!(
                a.standard_gamma(2.5).to_bits(),
                b.standard_gamma(2.5).to_bits()
            );
        }
    }

    #[test]
    fn distinct_seeds_differ() {
        let mut a = Rng::new(1);
        let mut b = Rng::new(2);
        let differs = (0..100).any(|_| a.uniform() != b.uniform());
        assert!(differs);
    }

    #[test]
    fn snapshot_restores_stream() {
        let mut rng = Rng::new(7);
        for _ in 0..17 {
            rng.standard_normal();
        }
        assert!(rng.spare.is_some());
        let snap = rng.to_bytes();
        let mut restored = Rng::from_bytes(&snap).unwrap();
        assert_eq!(restored, rng);
        for _ in 0..50 {
            assert_eq!(rng.standard_normal(), restored.standard_normal());
        }
        assert!(Rng::from_bytes(&[0u8; STATE_BYTES]).is_none());
    }

    #[test]
    fn uniform_moments_and_range() {
        let mut rng = Rng::new(11);
        let mut draws = Vec::with_capacity(1_000_000);
        for _ in 0..1_000_000 {
            let u = rng.uniform();
            assert!((0.0..1.0).contains(&u));
            draws.push(u);
        }
        let (mean, var, _) = moments(draws.into_iter());
        assert!((mean - 0.5).abs() < 0.002, "mean {mean}");
        assert!((var - 1.0 / 12.0).abs() < 0.002, "var {var}");
    }

    #[test]
    fn normal_moments() {
        let mut rng = Rng::new(12);
        let (mean, var, _) = moments((0..1_000_000).map(|_| rng.normal(0.0, 1.0).unwrap()));
        assert!(mean.abs() < 0.005, "mean {mean}");
        assert!((var - 1.0).abs() < 0.01, "var {var}");
    }

    #[test]
    fn normal_empirical_cdf() {
        // Phi(-1.96), Phi(0), Phi(1.96)
        let points = [(-1.96, 0.024_997_895_148_220_435), (0.0, 0.5), (1.96, 0.975_002_104_851_779_6)];
        let mut rng = Rng::new(13);
        let n = 1_000_000;
        let mut counts = [0usize; 3];
        for _ in 0..n {
            let z = rng.standard_normal();
            for (c, (x, _)) in counts.iter_mut().zip(points.iter()) {
                if z <= *x {
                    *c += 1;
                }
            }
        }
        for (c, (_, phi)) in counts.iter().zip(points.iter()) {
            let ecdf = *c as f64 / n as f64;
            assert!((ecdf - phi).abs() < 0.005, "ecdf {ecdf} vs {phi}");
        }
    }

    #[test]
    fn location_shift_of_normal_stream() {
        let mut a = Rng::new(5);
        let mut b = Rng::new(5);
        for _ in 0..100 {
            let x = a.normal(5.0, 1.0).unwrap();
            let z = b.normal(0.0, 1.0).unwrap();
            assert_eq!(x, 5.0 + z);
        }
    }

    #[test]
    fn parameter_errors() {
        let mut rng = Rng::new(1);
        assert!(rng.normal(0.0, 0.0).is_err());
        assert!(rng.normal(0.0, -1.0).is_err());
        assert!(rng.gamma(0.0, 1.0).is_err());
        assert!(rng.gamma(1.0, 0.0).is_err());
        assert!(rng.gamma(-2.0, 1.0).is_err());
    }

    #[test]
    fn gamma_moments_within_three_standard_errors() {
        let cases = [(2.5, 2.0), (4.5, 22.0), (1.0, 1.0), (0.4, 3.0)];
        for (i, &(shape, rate)) in cases.iter().enumerate() {
            let mut rng = Rng::new(100 + i as u64);
            let draws: Vec<f64> = (0..1_000_000).map(|_| rng.gamma(shape, rate).unwrap()).collect();
            assert!(draws.iter().all(|&g| g > 0.0));
            let (mean, var, n) = moments(draws.iter().copied());
            let n = n as f64;
            let true_mean = shape / rate;
            let true_var = shape / (rate * rate);
            // Var of the sample variance uses the fourth central moment 6a/r^4 + 3a^2/r^4.
            let mu4 = (6.0 * shape + 3.0 * shape * shape) / libm::pow(rate, 4.0);
            let se_mean = libm::sqrt(true_var / n);
            let se_var = libm::sqrt((mu4 - true_var * true_var) / n);
            assert!((mean - true_mean).abs() < 3.0 * se_mean, "{shape},{rate}: mean {mean}");
            assert!((var - true_var).abs() < 3.0 * se_var, "{shape},{rate}: var {var}");
            assert!((mean - true_mean).abs() < 0.01 * true_mean);
        }
    }
}
