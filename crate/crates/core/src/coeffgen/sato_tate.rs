//! Synthetic local data with Sato–Tate distributed angles.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::LocalData;
use crate::primes::primes_up_to;
use crate::satake::{UnramifiedClass, RAMANUJAN_EXPONENT};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub seed: u64,
    /// Probability that a prime gets a nontempered class.
    pub nontempered_fraction: f64,
    /// Cap on `t'` in `|α₁| = p^{t'}`; at most `7/64`.
    pub t_cap: f64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig { seed: 7, nontempered_fraction: 0.0, t_cap: RAMANUJAN_EXPONENT }
    }
}

impl SamplerConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.nontempered_fraction) {
            return Err(Error::InvalidParameter(format!(
                "nontempered fraction {} outside [0, 1]",
                self.nontempered_fraction
            )));
        }
        if !(self.t_cap > 0.0 && self.t_cap <= RAMANUJAN_EXPONENT) {
            return Err(Error::InvalidParameter(format!("t cap {} outside (0, 7/64]", self.t_cap)));
        }
        Ok(())
    }
}

/// Inverse of the Sato–Tate distribution function
/// `(θ − sin θ cos θ)/π` by bisection.
pub fn sato_tate_angle(u: f64) -> f64 {
    // the density is symmetric about π/2; bisect on the lower half where
    // the distribution function keeps full relative precision
    if u > 0.5 {
        return PI - sato_tate_angle(1.0 - u);
    }
    let cdf = |t: f64| (t - t.sin() * t.cos()) / PI;
    let (mut lo, mut hi) = (0.0, PI);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if cdf(mid) < u {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn sample_class(cfg: &SamplerConfig, p: u64) -> UnramifiedClass {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(p);
    let pick: f64 = rng.random();
    let u: f64 = rng.random();
    if pick < cfg.nontempered_fraction {
        let t_prime = cfg.t_cap * (1.0 - u);
        UnramifiedClass::nontempered(t_prime * (p as f64).ln(), 0.0, p).expect("positive t")
    } else {
        UnramifiedClass::tempered(sato_tate_angle(u), p)
    }
}

/// One class per prime `≤ x`, each drawn from its own `(seed, p)` stream.
pub fn sato_tate_source(cfg: &SamplerConfig, x: u64) -> Result<LocalData> {
    cfg.validate()?;
    let classes = primes_up_to(x).into_par_iter().map(|p| sample_class(cfg, p)).collect();
    LocalData::from_classes(x, classes, format!("sato-tate(seed={}, nontempered={})", cfg.seed, cfg.nontempered_fraction))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::satake::{LocalParameters, LocalShape};

    #[test]
    fn inverse_cdf_endpoints() {
        assert!(sato_tate_angle(0.0) < 1e-11);
        assert!((sato_tate_angle(1.0) - PI).abs() < 1e-11);
        assert!((sato_tate_angle(0.5) - PI / 2.0).abs() < 1e-11);
    }

    #[test]
    fn second_moment() {
        let local = sato_tate_source(&SamplerConfig::default(), 100_000).unwrap();
        let classes: Vec<_> = local.unramified_upto(100_000).collect();
        let mean = classes.iter().map(|c| c.power_sum(1).norm_sqr()).sum::<f64>() / classes.len() as f64;
        assert!((mean - 1.0).abs() < 0.02, "mean {mean}");
    }

    #[test]
    fn all_nontempered() {
        let cfg = SamplerConfig { nontempered_fraction: 1.0, ..Default::default() };
        let local = sato_tate_source(&cfg, 10_000).unwrap();
        for c in local.unramified_upto(10_000) {
            assert!(c.power_sum(1).norm() > 2.0);
            assert!(c.shape().within_bound_at(c.prime()));
            assert!(matches!(c.shape(), LocalShape::NonTempered { .. }));
        }
    }

    #[test]
    fn bad_config_rejected() {
        let cfg = SamplerConfig { nontempered_fraction: 1.5, ..Default::default() };
        assert!(sato_tate_source(&cfg, 10).is_err());
        let cfg = SamplerConfig { t_cap: 0.2, ..Default::default() };
        assert!(cfg.validate().is_err());
    }
}
