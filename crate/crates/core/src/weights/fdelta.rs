//! `F_δ(y) = (δ(y²−1) − |y|^{2δ} + 1)/(y²−1)²` and its reciprocal.
//!
//! With `s = y² − 1`, `|y|^{2δ} = Σ_k C(δ,k) s^k`, so
//! `F_δ = −Σ_{k≥2} C(δ,k) s^{k−2}` near `y = 1`. For `0 < δ < 1` every
//! `|C(δ,k)| ≤ 1/k`, which bounds the tail after two terms by
//! `s²/(4(1−|s|))` and the tail of `dF/ds` after one term by `|s|/(1−|s|)`.

use crate::bnb::Objective;
use crate::interval::{Diff, Interval, Ring, Scalar};

/// Radius in `s` of the series zone.
const SERIES_ZONE: f64 = 0.25;

/// Radius in `y` around `1` where point values use the Taylor polynomial.
pub const TAYLOR_RADIUS: f64 = 1e-4;

fn binom(delta: f64, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (delta - i as f64) / (i + 1) as f64)
}

fn binom_interval(delta: f64, k: u32) -> Interval {
    let d = Interval::point(delta);
    (0..k).fold(Interval::point(1.0), |acc, i| acc * (d - Interval::point(i as f64)) / Interval::point((i + 1) as f64))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FDelta {
    pub delta: f64,
}

impl FDelta {
    pub fn new(delta: f64) -> Self {
        assert!(delta > 0.0 && delta < 1.0, "δ must lie in (0, 1)");
        FDelta { delta }
    }

    /// Value at the removable singularity, `δ(1−δ)/2`.
    pub fn at_one(&self) -> f64 {
        -binom(self.delta, 2)
    }

    fn direct<S: Scalar>(&self, y: S) -> S {
        let s = y.sqr() - S::constant(1.0);
        (S::constant(self.delta) * s - y.pow_abs(2.0 * self.delta) + S::constant(1.0)) / s.sqr()
    }

    fn s_of(y: Interval) -> Interval {
        // (y−1)(y+1) is tighter than y²−1 next to 1
        (y - Interval::point(1.0)) * (y + Interval::point(1.0))
    }

    /// Value and `dF/ds` enclosures on `|s| ≤ 1/4`.
    fn series(&self, s: Interval) -> (Interval, Interval) {
        let a = s.abs().hi();
        let ai = Interval::point(a);
        let one_minus = Interval::point(1.0) - ai;
        let rem = (ai.sqr() / (Interval::point(4.0) * one_minus)).hi();
        let drem = (ai / one_minus).hi();
        let c2 = binom_interval(self.delta, 2);
        let c3 = binom_interval(self.delta, 3);
        let value = -c2 - c3 * s + Interval::new(-rem, rem);
        let slope = -c3 + Interval::new(-drem, drem);
        (value, slope)
    }

    fn in_series_zone(s: Interval) -> bool {
        s.lo() >= -SERIES_ZONE && s.hi() <= SERIES_ZONE
    }
}

impl Objective for FDelta {
    fn point(&self, y: f64) -> f64 {
        let y = y.abs();
        if (y - 1.0).abs() < TAYLOR_RADIUS {
            let s = (y - 1.0) * (y + 1.0);
            -binom(self.delta, 2) - binom(self.delta, 3) * s - binom(self.delta, 4) * s * s
        } else {
            self.direct(y)
        }
    }

    fn enclose(&self, y: Interval) -> Interval {
        let y = y.abs();
        let s = Self::s_of(y);
        if Self::in_series_zone(s) {
            self.series(s).0
        } else {
            self.direct(y)
        }
    }

    fn derivative(&self, y: Interval) -> Option<Interval> {
        if y.lo() < 0.0 {
            return None;
        }
        let s = Self::s_of(y);
        if Self::in_series_zone(s) {
            Some(self.series(s).1 * Interval::point(2.0) * y)
        } else {
            Some(self.direct(Diff::variable(y)).d)
        }
    }
}

/// `(y²−1)²/(δ(y²−1) − |y|^{2δ} + 1) = 1/F_δ(y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Omega1Ratio {
    pub f: FDelta,
}

impl Omega1Ratio {
    pub fn new(delta: f64) -> Self {
        Omega1Ratio { f: FDelta::new(delta) }
    }
}

impl Objective for Omega1Ratio {
    fn point(&self, y: f64) -> f64 {
        1.0 / self.f.point(y)
    }

    /// `F_δ > 0` by Bernoulli's inequality `(1+s)^δ < 1 + δs`, so only the
    /// upper end of the enclosure of `F_δ` matters.
    fn enclose(&self, y: Interval) -> Interval {
        let f = self.f.enclose(y);
        if f.lo() > 0.0 {
            f.recip()
        } else {
            Interval::new((Interval::point(1.0) / Interval::point(f.hi())).lo(), f64::INFINITY)
        }
    }

    fn derivative(&self, y: Interval) -> Option<Interval> {
        let v = self.f.enclose(y);
        let d = self.f.derivative(y)?;
        Some(-d / v.sqr())
    }

    /// For `y ≥ 1`, `|y|^{2δ} ≥ 1` gives `F_δ ≤ δ/(y²−1)`.
    fn tail_lower_bound(&self, from: f64) -> Option<f64> {
        if from <= 1.0 {
            return None;
        }
        let s = Interval::point(from).sqr() - Interval::constant(1.0);
        Some((s / Interval::point(self.f.delta)).lo())
    }
}
