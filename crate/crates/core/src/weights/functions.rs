//! The auxiliary polynomials in `x = y` (tempered, `x ∈ [0, 1]`) and in
//! `x = p^t` (nontempered, `x ≥ 1`).

use serde::{Deserialize, Serialize};

use crate::bnb::UnivariateFn;
use crate::interval::{Laurent, Ring, Scalar};

/// How the displayed formulas are read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum Variant {
    /// `g` applied to `|a(Sym^k π)|`, the `Ad × Sym⁴` product as
    /// `(4x²−1)(16x⁴−12x²+1)`, and `a(Ad)/1000` subtracted in the second
    /// function of each pair.
    #[default]
    Reconciled,
    /// As [`Variant::Reconciled`] but with `g` applied without the
    /// absolute value.
    Literal,
    /// As [`Variant::Reconciled`] but with the typed terms
    /// `16x⁴−2x²+1` and `+a(Ad)/1000`.
    Display,
}

impl Variant {
    pub fn as_str(&self) -> &'static str {
        match self {
            Variant::Reconciled => "reconciled",
            Variant::Literal => "literal",
            Variant::Display => "display",
        }
    }
}

/// `g(y) = (y − 1)²/2`.
pub fn g<R: Ring>(y: R) -> R {
    let t = y - R::constant(1.0);
    t.clone() * t * R::ratio(1.0, 2.0)
}

fn c<R: Ring>(v: f64) -> R {
    R::constant(v)
}

fn per<R: Ring>(v: R, den: f64) -> R {
    v * R::ratio(1.0, den)
}

fn abs_if<S: Scalar>(v: S, variant: Variant) -> S {
    if variant == Variant::Literal {
        v
    } else {
        v.abs()
    }
}

pub fn h11<S: Scalar>(x: S, variant: Variant) -> S {
    let x2 = x.sqr();
    let x4 = x2.sqr();
    let s2 = c::<S>(4.0) * x2 - c(1.0);
    g(abs_if(s2, variant)) + per(c::<S>(2.0) * x - c(1.0), 1000.0)
        - per(c::<S>(12.0) * x2 - c(3.0), 200.0)
        - per(c::<S>(3.0) * s2.sqr() - c(3.0), 200.0)
        + per(c::<S>(16.0) * x4 - c::<S>(8.0) * x2, 32.0)
        - per(c::<S>(3.0) * (c::<S>(16.0) * x4 - c::<S>(12.0) * x2 + c(1.0)), 200.0)
        - per(c::<S>(16.0) * x4 - c(2.0), 1000.0)
}

pub fn h12<S: Scalar>(x: S, variant: Variant) -> S {
    h11(x, variant) - per(c::<S>(2.0) * x - c(1.0), 1000.0)
}

fn sym3_abs<S: Scalar>(x: S, variant: Variant) -> S {
    abs_if(c::<S>(8.0) * x.sqr() * x - c::<S>(4.0) * x, variant)
}

pub fn h31<S: Scalar>(x: S, variant: Variant) -> S {
    let x2 = x.sqr();
    let x4 = x2.sqr();
    let s2 = c::<S>(4.0) * x2 - c(1.0);
    let s3 = c::<S>(8.0) * x2 * x - c::<S>(4.0) * x;
    let mid = if variant == Variant::Display { 2.0 } else { 12.0 };
    let sym4 = c::<S>(16.0) * x4 - c::<S>(12.0) * x2 + c(1.0);
    let pi_sym2 = c::<S>(8.0) * x2 * x - c::<S>(2.0) * x;
    c::<S>(1000.0) * g(sym3_abs(x, variant)) - per(c::<S>(18.0) * x - c(9.0), 1000.0) - per(s2, 25.0)
        + per(s2 * (c::<S>(16.0) * x4 - c::<S>(mid) * x2 + c(1.0)), 200.0)
        - per(s2.sqr() - c(1.0), 100.0)
        - per(c::<S>(16.0) * x4 - c(2.0), 250.0)
        - per(pi_sym2.sqr() - c(2.0), 200.0)
        + per(c::<S>(16.0) * x4 - c::<S>(8.0) * x2, 20.0)
        - per(c::<S>(43.0) * sym4, 1000.0)
        + per(c::<S>(2.0) * (c::<S>(16.0) * x4 - c::<S>(4.0) * x2) - c(2.0), 125.0)
        - per(s3.sqr() - c(1.0), 100.0)
}

pub fn h32<S: Scalar>(x: S, variant: Variant) -> S {
    let s2 = c::<S>(4.0) * x.sqr() - c(1.0);
    let ad = if variant == Variant::Display { per(s2, 1000.0) } else { -per(s2, 1000.0) };
    h31(x, variant) - c::<S>(998.0) * g(sym3_abs(x, variant)) - per(c::<S>(2.0) * x - c(1.0), 1000.0) + ad
}

struct Nontempered<R> {
    a: R,
    ad: R,
    sym3: R,
    sym4: R,
    pi_sym2: R,
    pi_sym3: R,
    square_plus_two: R,
}

impl<R: Ring> Nontempered<R> {
    fn new(x: R, xi: R) -> Self {
        let x2 = x.clone() * x.clone();
        let xi2 = xi.clone() * xi.clone();
        let x4 = x2.clone() * x2.clone();
        let xi4 = xi2.clone() * xi2.clone();
        let x3 = x2.clone() * x.clone();
        let xi3 = xi2.clone() * xi.clone();
        let a = x.clone() + xi.clone();
        let p2 = x2 + xi2;
        let ad = p2.clone() + c(1.0);
        let sym3 = x3.clone() + xi3.clone() + a.clone();
        let sym4 = x4.clone() + xi4.clone() + p2.clone() + c(1.0);
        let pi_sym2 = x3 + xi3 + c::<R>(2.0) * a.clone();
        let pi_sym3 = x4 + xi4 + c::<R>(2.0) * p2.clone() + c(2.0);
        let square_plus_two = p2 + c(2.0);
        Nontempered { a, ad, sym3, sym4, pi_sym2, pi_sym3, square_plus_two }
    }
}

pub fn h21<R: Ring>(x: R, xi: R) -> R {
    let t = Nontempered::new(x, xi);
    let a4 = t.a.pow(4);
    g(t.ad.clone()) + per(t.a.clone() - c(1.0), 1000.0) - per(a4 - c(2.0), 1000.0)
        - per(c::<R>(3.0) * t.ad.pow(2) - c(3.0), 200.0)
        + per(t.pi_sym3, 32.0)
        - per(c::<R>(3.0) * t.sym4, 200.0)
        - per(c::<R>(3.0) * t.ad, 200.0)
}

pub fn h22<R: Ring>(x: R, xi: R) -> R {
    let a = x.clone() + xi.clone();
    h21(x, xi) - per(a - c(1.0), 1000.0)
}

pub fn h41<R: Ring>(x: R, xi: R) -> R {
    let t = Nontempered::new(x, xi);
    c::<R>(1000.0) * g(t.sym3.clone()) - per(c::<R>(9.0) * (t.a.clone() - c(1.0)), 1000.0) - per(t.ad.clone(), 25.0)
        + per(t.ad.clone() * t.sym4.clone(), 200.0)
        - per(t.a.pow(4) - c(2.0), 250.0)
        - per(t.ad.pow(2) - c(1.0), 100.0)
        + per(c::<R>(2.0) * t.square_plus_two * t.ad.clone() - c(2.0), 125.0)
        + per(t.pi_sym3, 20.0)
        - per(t.sym3.pow(2) - c(1.0), 100.0)
        - per(c::<R>(43.0) * t.sym4, 1000.0)
        - per(t.pi_sym2.pow(2) - c(2.0), 200.0)
}

pub fn h42<R: Ring>(x: R, xi: R, variant: Variant) -> R {
    let t = Nontempered::new(x.clone(), xi.clone());
    let ad = if variant == Variant::Display { per(t.ad, 1000.0) } else { -per(t.ad, 1000.0) };
    h41(x, xi) - c::<R>(998.0) * g(t.sym3) - per(t.a - c(1.0), 1000.0) + ad
}

/// Which member of the family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HKind {
    H11,
    H12,
    H21,
    H22,
    H31,
    H32,
    H41,
    H42,
}

impl HKind {
    pub fn is_tempered(&self) -> bool {
        matches!(self, HKind::H11 | HKind::H12 | HKind::H31 | HKind::H32)
    }

    fn laurent(&self, variant: Variant) -> Option<Laurent> {
        let (x, xi) = (Laurent::monomial(1), Laurent::monomial(-1));
        match self {
            HKind::H21 => Some(h21(x, xi)),
            HKind::H22 => Some(h22(x, xi)),
            HKind::H41 => Some(h41(x, xi)),
            HKind::H42 => Some(h42(x, xi, variant)),
            _ => None,
        }
    }
}

/// One h-function under a reading.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HFunction {
    pub kind: HKind,
    pub variant: Variant,
}

impl HFunction {
    pub fn new(kind: HKind, variant: Variant) -> Self {
        HFunction { kind, variant }
    }

    /// Laurent expansion in `x` for the nontempered members.
    pub fn laurent(&self) -> Option<Laurent> {
        self.kind.laurent(self.variant)
    }
}

impl UnivariateFn for HFunction {
    fn eval<S: Scalar>(&self, x: S) -> S {
        let v = self.variant;
        match self.kind {
            HKind::H11 => h11(x, v),
            HKind::H12 => h12(x, v),
            HKind::H31 => h31(x, v),
            HKind::H32 => h32(x, v),
            HKind::H21 => h21(x, x.recip()),
            HKind::H22 => h22(x, x.recip()),
            HKind::H41 => h41(x, x.recip()),
            HKind::H42 => h42(x, x.recip(), v),
        }
    }

    fn tail_lower_bound(&self, from: f64) -> Option<f64> {
        self.laurent()?.lower_bound_from(from)
    }
}

/// `num − (c_num/c_den)·den`, the function whose nonnegativity is
/// equivalent to `num/den ≥ c` where `den > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Margin {
    pub num: HFunction,
    pub den: HFunction,
    pub ratio: (f64, f64),
}

impl UnivariateFn for Margin {
    fn eval<S: Scalar>(&self, x: S) -> S {
        self.num.eval(x) - S::ratio(self.ratio.0, self.ratio.1) * self.den.eval(x)
    }

    fn tail_lower_bound(&self, from: f64) -> Option<f64> {
        let l = self.num.laurent()? - Laurent::ratio(self.ratio.0, self.ratio.1) * self.den.laurent()?;
        l.lower_bound_from(from)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::Interval;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn hand_values() {
        assert!(close(h11(0.0, Variant::Reconciled), 0.001, 1e-15));
        assert!(close(h31(0.5, Variant::Reconciled), 0.001, 1e-13));
        assert!(close(g(3.0), 2.0, 0.0));
    }

    #[test]
    fn h21_h22_difference() {
        for x in [1.0, 1.5, 3.0, 9.0] {
            let d = h21(x, 1.0 / x) - h22(x, 1.0 / x);
            assert!(close(d, (x + 1.0 / x - 1.0) / 1000.0, 1e-9 * h21(x, 1.0 / x).abs().max(1.0)));
        }
    }

    #[test]
    fn laurent_matches_pointwise() {
        for kind in [HKind::H21, HKind::H22, HKind::H41, HKind::H42] {
            let f = HFunction::new(kind, Variant::Reconciled);
            let l = f.laurent().unwrap();
            for x in [1.0, 1.7, 4.0] {
                let v = l.eval(Interval::point(x));
                let p: f64 = f.eval(x);
                assert!(v.lo() - 1e-9 * p.abs() <= p && p <= v.hi() + 1e-9 * p.abs(), "{kind:?} at {x}");
            }
        }
    }

    #[test]
    fn interval_encloses_points() {
        for kind in [HKind::H11, HKind::H12, HKind::H31, HKind::H32] {
            let f = HFunction::new(kind, Variant::Reconciled);
            let box_ = Interval::new(0.2, 0.3);
            let e: Interval = f.eval(box_);
            for i in 0..=10 {
                let x = 0.2 + 0.01 * i as f64;
                let p: f64 = f.eval(x);
                assert!(e.contains(p), "{kind:?} at {x}");
            }
        }
    }

    #[test]
    fn display_variant_differs() {
        let r = h31(0.3, Variant::Reconciled);
        let d = h31(0.3, Variant::Display);
        assert!((r - d).abs() > 1e-6);
        assert!(!close(h11(0.1, Variant::Literal), h11(0.1, Variant::Reconciled), 1e-6));
    }
}
