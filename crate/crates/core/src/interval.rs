//! Outward-rounded interval arithmetic on `f64`.
//!
//! Every basic operation is evaluated in round-to-nearest and the endpoints
//! are then pushed one ulp outward, which is enough to contain the exact
//! result since the nearest-rounded value is within half an ulp of it.
//! Library transcendental functions (`powf`, `exp`, `ln`) are not correctly
//! rounded, so their endpoints are widened by [`LIBM_ULPS`] instead.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Ulps of outward widening after calls into the platform math library.
pub const LIBM_ULPS: u32 = 4;

fn down(x: f64, n: u32) -> f64 {
    (0..n).fold(x, |v, _| v.next_down())
}

fn up(x: f64, n: u32) -> f64 {
    (0..n).fold(x, |v, _| v.next_up())
}

/// Product with the interval convention `0 · ∞ = 0`.
fn mul0(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        0.0
    } else {
        a * b
    }
}

/// A closed interval `[lo, hi]`, possibly unbounded.
#[derive(Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Interval {
    pub const ENTIRE: Interval = Interval { lo: f64::NEG_INFINITY, hi: f64::INFINITY };

    /// # Panics
    ///
    /// If `lo > hi` or either endpoint is NaN.
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "invalid interval [{lo}, {hi}]");
        Self { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Self::new(x, x)
    }

    /// Enclosure of the real number `num / den`.
    pub fn ratio(num: f64, den: f64) -> Self {
        Self::point(num) / Self::point(den)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn mid(&self) -> f64 {
        if self.lo.is_finite() && self.hi.is_finite() {
            let m = 0.5 * self.lo + 0.5 * self.hi;
            m.clamp(self.lo, self.hi)
        } else if self.lo.is_finite() {
            self.lo.max(0.0) * 2.0 + 1.0
        } else if self.hi.is_finite() {
            self.hi.min(0.0) * 2.0 - 1.0
        } else {
            0.0
        }
    }

    /// Upper bound on the width.
    pub fn width(&self) -> f64 {
        up(self.hi - self.lo, 1)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval { lo: self.lo.min(other.lo), hi: self.hi.max(other.hi) }
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }

    /// Splits at the midpoint.
    pub fn bisect(&self) -> (Interval, Interval) {
        let m = self.mid();
        (Interval { lo: self.lo, hi: m }, Interval { lo: m, hi: self.hi })
    }

    pub fn abs(self) -> Interval {
        if self.lo >= 0.0 {
            self
        } else if self.hi <= 0.0 {
            -self
        } else {
            Interval { lo: 0.0, hi: (-self.lo).max(self.hi) }
        }
    }

    pub fn sqr(self) -> Interval {
        let a = self.abs();
        Interval { lo: down(a.lo * a.lo, 1).max(0.0), hi: up(mul0(a.hi, a.hi), 1) }
    }

    /// Integer power. Even powers are bounded through `|x|`, odd powers are
    /// monotone, so only the endpoint powers are needed.
    pub fn powi(self, n: i32) -> Interval {
        if n == 0 {
            return Interval::point(1.0);
        }
        if n < 0 {
            return self.powi(-n).recip();
        }
        let n = n as u32;
        if n.is_multiple_of(2) {
            let a = self.abs();
            Interval { lo: endpoint_pow(a.lo, n).lo.max(0.0), hi: endpoint_pow(a.hi, n).hi }
        } else {
            Interval { lo: endpoint_pow(self.lo, n).lo, hi: endpoint_pow(self.hi, n).hi }
        }
    }

    /// `|x|^e` for `e > 0`.
    pub fn pow_abs(self, e: f64) -> Interval {
        assert!(e > 0.0, "pow_abs needs a positive exponent");
        let a = self.abs();
        let lo = if a.lo == 0.0 { 0.0 } else { down(a.lo.powf(e), LIBM_ULPS).max(0.0) };
        let hi = if a.hi == f64::INFINITY { f64::INFINITY } else { up(a.hi.powf(e), LIBM_ULPS) };
        Interval { lo, hi }
    }

    pub fn exp(self) -> Interval {
        Interval { lo: down(self.lo.exp(), LIBM_ULPS).max(0.0), hi: up(self.hi.exp(), LIBM_ULPS) }
    }

    /// # Panics
    ///
    /// If the interval is not strictly positive.
    pub fn ln(self) -> Interval {
        assert!(self.lo > 0.0, "ln of a non-positive interval {self:?}");
        Interval { lo: down(self.lo.ln(), LIBM_ULPS), hi: up(self.hi.ln(), LIBM_ULPS) }
    }

    pub fn sqrt(self) -> Interval {
        let lo = if self.lo <= 0.0 { 0.0 } else { down(self.lo.sqrt(), 1) };
        Interval { lo, hi: up(self.hi.max(0.0).sqrt(), 1) }
    }

    pub fn recip(self) -> Interval {
        Interval::point(1.0) / self
    }

    pub fn min(self, other: Interval) -> Interval {
        Interval { lo: self.lo.min(other.lo), hi: self.hi.min(other.hi) }
    }

    pub fn max(self, other: Interval) -> Interval {
        Interval { lo: self.lo.max(other.lo), hi: self.hi.max(other.hi) }
    }
}

fn endpoint_pow(x: f64, n: u32) -> Interval {
    if !x.is_finite() {
        let v = x.powi(n as i32);
        return Interval { lo: v, hi: v };
    }
    let p = Interval::point(x);
    let mut acc = Interval::point(1.0);
    let mut base = p;
    let mut k = n;
    while k > 0 {
        if k & 1 == 1 {
            acc = acc * base;
        }
        k >>= 1;
        if k > 0 {
            base = base.sqr();
        }
    }
    acc
}

impl From<f64> for Interval {
    fn from(x: f64) -> Self {
        Interval::point(x)
    }
}

impl Neg for Interval {
    type Output = Interval;

    fn neg(self) -> Interval {
        Interval { lo: -self.hi, hi: -self.lo }
    }
}

impl Add for Interval {
    type Output = Interval;

    fn add(self, rhs: Interval) -> Interval {
        Interval { lo: down(self.lo + rhs.lo, 1), hi: up(self.hi + rhs.hi, 1) }
    }
}

impl Sub for Interval {
    type Output = Interval;

    fn sub(self, rhs: Interval) -> Interval {
        Interval { lo: down(self.lo - rhs.hi, 1), hi: up(self.hi - rhs.lo, 1) }
    }
}

impl Mul for Interval {
    type Output = Interval;

    fn mul(self, rhs: Interval) -> Interval {
        let p = [
            mul0(self.lo, rhs.lo),
            mul0(self.lo, rhs.hi),
            mul0(self.hi, rhs.lo),
            mul0(self.hi, rhs.hi),
        ];
        let lo = p.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Interval { lo: down(lo, 1), hi: up(hi, 1) }
    }
}

impl Div for Interval {
    type Output = Interval;

    fn div(self, rhs: Interval) -> Interval {
        if rhs.contains_zero() {
            return Interval::ENTIRE;
        }
        let q = [self.lo / rhs.lo, self.lo / rhs.hi, self.hi / rhs.lo, self.hi / rhs.hi];
        let q = q.map(|v| if v.is_nan() { 0.0 } else { v });
        let lo = q.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = q.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Interval { lo: down(lo, 1), hi: up(hi, 1) }
    }
}

macro_rules! scalar_rhs {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr<f64> for Interval {
            type Output = Interval;
            fn $f(self, rhs: f64) -> Interval {
                self.$f(Interval::point(rhs))
            }
        }
        impl $tr<Interval> for f64 {
            type Output = Interval;
            fn $f(self, rhs: Interval) -> Interval {
                Interval::point(self).$f(rhs)
            }
        }
    )*};
}

scalar_rhs!(Add add, Sub sub, Mul mul, Div div);

/// Commutative ring operations shared by every evaluation type.
pub trait Ring:
    Clone + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    /// An exactly representable constant.
    fn constant(c: f64) -> Self;

    /// The rational number `num / den`.
    fn ratio(num: f64, den: f64) -> Self;

    fn pow(&self, n: u32) -> Self {
        let mut acc = Self::constant(1.0);
        for _ in 0..n {
            acc = acc * self.clone();
        }
        acc
    }
}

/// Field-like operations needed for pointwise and interval evaluation.
pub trait Scalar: Ring + Copy + Div<Output = Self> {
    fn abs(self) -> Self;
    fn sqr(self) -> Self;
    /// `|x|^e` for `e > 0`.
    fn pow_abs(self, e: f64) -> Self;
    fn recip(self) -> Self;
}

impl Ring for f64 {
    fn constant(c: f64) -> Self {
        c
    }

    fn ratio(num: f64, den: f64) -> Self {
        num / den
    }

    fn pow(&self, n: u32) -> Self {
        self.powi(n as i32)
    }
}

impl Scalar for f64 {
    fn abs(self) -> Self {
        f64::abs(self)
    }

    fn sqr(self) -> Self {
        self * self
    }

    fn pow_abs(self, e: f64) -> Self {
        f64::abs(self).powf(e)
    }

    fn recip(self) -> Self {
        1.0 / self
    }
}

impl Ring for Interval {
    fn constant(c: f64) -> Self {
        Interval::point(c)
    }

    fn ratio(num: f64, den: f64) -> Self {
        Interval::ratio(num, den)
    }

    fn pow(&self, n: u32) -> Self {
        self.powi(n as i32)
    }
}

impl Scalar for Interval {
    fn abs(self) -> Self {
        Interval::abs(self)
    }

    fn sqr(self) -> Self {
        Interval::sqr(self)
    }

    fn pow_abs(self, e: f64) -> Self {
        Interval::pow_abs(self, e)
    }

    fn recip(self) -> Self {
        Interval::recip(self)
    }
}

/// Interval value together with an interval enclosure of its derivative
/// with respect to a single variable.
///
/// At kinks (`abs`) the derivative is replaced by the hull of the one-sided
/// derivatives, which keeps the mean-value inclusion valid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diff {
    pub v: Interval,
    pub d: Interval,
}

impl Diff {
    pub fn variable(x: Interval) -> Self {
        Diff { v: x, d: Interval::point(1.0) }
    }

    pub fn constant_interval(v: Interval) -> Self {
        Diff { v, d: Interval::point(0.0) }
    }
}

impl Neg for Diff {
    type Output = Diff;

    fn neg(self) -> Diff {
        Diff { v: -self.v, d: -self.d }
    }
}

impl Add for Diff {
    type Output = Diff;

    fn add(self, rhs: Diff) -> Diff {
        Diff { v: self.v + rhs.v, d: self.d + rhs.d }
    }
}

impl Sub for Diff {
    type Output = Diff;

    fn sub(self, rhs: Diff) -> Diff {
        Diff { v: self.v - rhs.v, d: self.d - rhs.d }
    }
}

impl Mul for Diff {
    type Output = Diff;

    fn mul(self, rhs: Diff) -> Diff {
        Diff { v: self.v * rhs.v, d: self.d * rhs.v + self.v * rhs.d }
    }
}

impl Div for Diff {
    type Output = Diff;

    fn div(self, rhs: Diff) -> Diff {
        let v = self.v / rhs.v;
        Diff { v, d: (self.d - v * rhs.d) / rhs.v }
    }
}

impl Ring for Diff {
    fn constant(c: f64) -> Self {
        Diff::constant_interval(Interval::point(c))
    }

    fn ratio(num: f64, den: f64) -> Self {
        Diff::constant_interval(Interval::ratio(num, den))
    }

    fn pow(&self, n: u32) -> Self {
        if n == 0 {
            return Self::constant(1.0);
        }
        let dv = Interval::point(n as f64) * self.v.powi(n as i32 - 1);
        Diff { v: self.v.powi(n as i32), d: dv * self.d }
    }
}

impl Scalar for Diff {
    fn abs(self) -> Self {
        if self.v.lo() > 0.0 {
            self
        } else if self.v.hi() < 0.0 {
            -self
        } else {
            Diff { v: self.v.abs(), d: self.d.hull(&-self.d) }
        }
    }

    fn sqr(self) -> Self {
        Diff { v: self.v.sqr(), d: Interval::point(2.0) * self.v * self.d }
    }

    fn pow_abs(self, e: f64) -> Self {
        let v = self.v.pow_abs(e);
        let a = self.v.abs();
        // derivative magnitude e·|x|^{e-1}
        let slope = if a.lo() > 0.0 || e >= 1.0 {
            Interval::point(e) * a.powf_nonneg(e - 1.0)
        } else {
            Interval::new(0.0, f64::INFINITY)
        };
        let sign = if self.v.lo() > 0.0 {
            Interval::point(1.0)
        } else if self.v.hi() < 0.0 {
            Interval::point(-1.0)
        } else {
            Interval::new(-1.0, 1.0)
        };
        Diff { v, d: slope * sign * self.d }
    }

    fn recip(self) -> Self {
        Diff::constant(1.0) / self
    }
}

impl Interval {
    /// `x^e` for `x ≥ 0` with any real `e`; needs `x > 0` when `e < 0`.
    pub fn powf_nonneg(self, e: f64) -> Interval {
        assert!(self.lo >= 0.0, "powf_nonneg of a negative interval");
        if e == 0.0 {
            return Interval::point(1.0);
        }
        if e > 0.0 {
            return self.pow_abs(e);
        }
        assert!(self.lo > 0.0, "negative power of an interval touching zero");
        let lo = if self.hi == f64::INFINITY { 0.0 } else { down(self.hi.powf(e), LIBM_ULPS).max(0.0) };
        Interval { lo, hi: up(self.lo.powf(e), LIBM_ULPS) }
    }
}

/// Laurent polynomial `Σ c_k x^k` with exact rational coefficients.
///
/// Used to expand rational functions of `x` and `1/x` so that their growth
/// on a half-line `[Y, ∞)` can be bounded from the leading coefficient.
/// Exact coefficients let cancelling leading terms vanish.
#[derive(Debug, Clone, PartialEq)]
pub struct Laurent {
    min_pow: i32,
    coeffs: Vec<BigRational>,
}

fn exact(c: f64) -> BigRational {
    BigRational::from_float(c).expect("finite constant")
}

/// Outward enclosure of a rational.
fn enclose_rational(r: &BigRational) -> Interval {
    let f = r.to_f64().expect("rational converts to f64");
    if BigRational::from_float(f).as_ref() == Some(r) {
        Interval::point(f)
    } else {
        Interval { lo: down(f, 1), hi: up(f, 1) }
    }
}

impl Laurent {
    /// The monomial `x^k`.
    pub fn monomial(k: i32) -> Self {
        Laurent { min_pow: k, coeffs: vec![BigRational::one()] }
    }

    pub fn coeff(&self, k: i32) -> Interval {
        self.exact_coeff(k).map_or(Interval::point(0.0), enclose_rational)
    }

    fn exact_coeff(&self, k: i32) -> Option<&BigRational> {
        let i = k - self.min_pow;
        if i < 0 {
            None
        } else {
            self.coeffs.get(i as usize)
        }
    }

    pub fn min_pow(&self) -> i32 {
        self.min_pow
    }

    pub fn max_pow(&self) -> i32 {
        self.min_pow + self.coeffs.len() as i32 - 1
    }

    pub fn eval(&self, x: Interval) -> Interval {
        (self.min_pow..=self.max_pow())
            .fold(Interval::point(0.0), |acc, k| acc + self.coeff(k) * x.powi(k))
    }

    /// Lower bound of the polynomial on `[y, ∞)`, `y ≥ 1`.
    ///
    /// Takes the top nonzero power, which must be positive, and absorbs every
    /// negative lower term into it using `x^k ≤ x^K·y^{k-K}`. Returns `None`
    /// if no such bound is positive.
    pub fn lower_bound_from(&self, y: f64) -> Option<f64> {
        assert!(y >= 1.0, "tail bound needs y >= 1");
        let top = (self.min_pow..=self.max_pow())
            .rev()
            .find(|&k| self.exact_coeff(k).is_some_and(|c| !c.is_zero()))?;
        let lead = self.coeff(top);
        if lead.lo() <= 0.0 {
            return None;
        }
        let yi = Interval::point(y);
        let mut bracket = Interval::point(lead.lo());
        for k in self.min_pow..top {
            let c = self.coeff(k).lo();
            if c < 0.0 {
                bracket = bracket - Interval::point(-c) * yi.powi(k - top);
            }
        }
        if bracket.lo() <= 0.0 {
            return None;
        }
        Some((bracket * yi.powi(top)).lo())
    }

    fn trim(mut self) -> Self {
        while self.coeffs.len() > 1 && self.coeffs[self.coeffs.len() - 1].is_zero() {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take(self.coeffs.len() - 1).take_while(|c| c.is_zero()).count();
        self.coeffs.drain(..lead);
        self.min_pow += lead as i32;
        self
    }

    fn combine(&self, other: &Laurent, f: impl Fn(&BigRational, &BigRational) -> BigRational) -> Laurent {
        let zero = BigRational::zero();
        let lo = self.min_pow.min(other.min_pow);
        let hi = self.max_pow().max(other.max_pow());
        let coeffs = (lo..=hi)
            .map(|k| f(self.exact_coeff(k).unwrap_or(&zero), other.exact_coeff(k).unwrap_or(&zero)))
            .collect();
        Laurent { min_pow: lo, coeffs }.trim()
    }
}

impl Add for Laurent {
    type Output = Laurent;

    fn add(self, rhs: Laurent) -> Laurent {
        self.combine(&rhs, |a, b| a + b)
    }
}

impl Sub for Laurent {
    type Output = Laurent;

    fn sub(self, rhs: Laurent) -> Laurent {
        self.combine(&rhs, |a, b| a - b)
    }
}

impl Neg for Laurent {
    type Output = Laurent;

    fn neg(self) -> Laurent {
        Laurent { min_pow: self.min_pow, coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

impl Mul for Laurent {
    type Output = Laurent;

    fn mul(self, rhs: Laurent) -> Laurent {
        let mut coeffs = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Laurent { min_pow: self.min_pow + rhs.min_pow, coeffs }.trim()
    }
}

impl Ring for Laurent {
    fn constant(c: f64) -> Self {
        Laurent { min_pow: 0, coeffs: vec![exact(c)] }
    }

    fn ratio(num: f64, den: f64) -> Self {
        Laurent { min_pow: 0, coeffs: vec![exact(num) / exact(den)] }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_tenth_is_enclosed() {
        let t = Interval::ratio(1.0, 10.0);
        assert!(t.lo() < 0.1 && 0.1 < t.hi() || t.contains(0.1));
        assert!(t.width() < 1e-16);
        let s = (0..10).fold(Interval::point(0.0), |acc, _| acc + t);
        assert!(s.contains(1.0));
    }

    #[test]
    fn zero_times_infinity_is_zero() {
        let z = Interval::point(0.0) * Interval::new(0.0, f64::INFINITY);
        assert_eq!(z.lo(), down(0.0, 1));
        assert!(z.hi() >= 0.0 && z.hi() < 1e-300);
    }

    #[test]
    fn division_by_zero_straddler_is_entire() {
        let q = Interval::point(1.0) / Interval::new(-1.0, 1.0);
        assert_eq!(q, Interval::ENTIRE);
    }

    #[test]
    fn even_power_of_straddler() {
        let p = Interval::new(-2.0, 1.0).powi(4);
        assert_eq!(p.lo(), 0.0);
        assert!(p.contains(16.0) && p.hi() < 16.0 + 1e-12);
        let c = Interval::new(-1.0, 2.0).powi(3);
        assert!(c.contains(-1.0) && c.contains(8.0) && c.lo() > -1.0 - 1e-12);
    }

    #[test]
    fn pow_abs_at_zero() {
        let p = Interval::new(-0.25, 0.0).pow_abs(0.5);
        assert_eq!(p.lo(), 0.0);
        assert!(p.contains(0.5));
    }

    #[test]
    fn diff_tracks_derivative() {
        let x = Diff::variable(Interval::point(3.0));
        let f = x.pow(3) - Diff::constant(2.0) * x;
        assert!(f.v.contains(21.0));
        assert!(f.d.contains(25.0));
        let r = Diff::constant(1.0) / x;
        assert!(r.d.contains(-1.0 / 9.0));
    }

    #[test]
    fn diff_abs_hull_at_kink() {
        let x = Diff::variable(Interval::new(-1.0, 1.0));
        let a = Scalar::abs(x);
        assert_eq!(a.d.lo(), -1.0);
        assert_eq!(a.d.hi(), 1.0);
    }

    #[test]
    fn laurent_product_and_tail() {
        let x = Laurent::monomial(1);
        let xi = Laurent::monomial(-1);
        let s = x.clone() + xi.clone();
        let sq = s.clone() * s;
        assert!(sq.coeff(2).contains(1.0) && sq.coeff(0).contains(2.0) && sq.coeff(-2).contains(1.0));
        let f = x.pow(2) - Laurent::constant(3.0) * x;
        assert!(f.lower_bound_from(2.0).is_none());
        let lb = f.lower_bound_from(4.0).unwrap();
        assert!(lb > 0.0 && lb <= 4.0);
        assert!(f.eval(Interval::point(5.0)).contains(10.0));
    }
}
