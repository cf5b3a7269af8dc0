//! Compensated summation.
//!
//! All sums in the harness run in a fixed order through [`Neumaier`], so
//! results are bit-stable regardless of thread count.

/// Neumaier (improved Kahan–Babuška) accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl Extend<f64> for Neumaier {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for v in iter {
            self.add(v);
        }
    }
}

pub fn compensated_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    let mut acc = Neumaier::new();
    acc.extend(iter);
    acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_mass() {
        let vals = [1e16, 1.0, -1e16, 1.0];
        assert_eq!(compensated_sum(vals), 2.0);
        let naive: f64 = vals.iter().sum();
        assert_ne!(naive, 2.0);
    }

    #[test]
    fn harmonic_sum_is_accurate() {
        let s = compensated_sum((1..=1_000_000).map(|n| 1.0 / n as f64));
        // H_n = ln n + gamma + 1/(2n) - ...
        let exact = (1e6f64).ln() + 0.577_215_664_901_532_9 + 0.5e-6 - 1.0 / 12e12;
        assert!((s - exact).abs() < 1e-13);
    }
}
