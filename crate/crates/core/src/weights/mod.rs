//! Auxiliary weight functions and their certified minima.

mod fdelta;
mod functions;
mod report;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bnb::{certify_min, certify_min_half_line, BnbConfig, CertifiedMin, Enclosure, Objective, UnivariateFn};
use crate::interval::Interval;
use crate::{Error, Result};

pub use fdelta::{FDelta, Omega1Ratio, TAYLOR_RADIUS};
pub use functions::{g, h11, h12, h21, h22, h31, h32, h41, h42, HFunction, HKind, Margin, Variant};
pub use report::{
    default_r_grid, exponent_constants, omega1_plus, suite, suite_row, supplementary, CertificationRow, Claim, ExponentConstants,
    Omega1PlusReport, Omega1PlusRow, RowParams, SuiteConfig,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WeightFunctionId {
    G,
    FDelta,
    OmegaDeltaR,
    Omega1,
    Omega1Minus,
    Omega1Plus,
    H11,
    H12,
    H21,
    H22,
    H31,
    H32,
    H41,
    H42,
    RatioH11H12,
    RatioH31H32,
    RatioH41H42,
}

impl WeightFunctionId {
    pub const ALL: [WeightFunctionId; 17] = [
        WeightFunctionId::G,
        WeightFunctionId::FDelta,
        WeightFunctionId::OmegaDeltaR,
        WeightFunctionId::Omega1,
        WeightFunctionId::Omega1Minus,
        WeightFunctionId::Omega1Plus,
        WeightFunctionId::H11,
        WeightFunctionId::H12,
        WeightFunctionId::H21,
        WeightFunctionId::H22,
        WeightFunctionId::H31,
        WeightFunctionId::H32,
        WeightFunctionId::H41,
        WeightFunctionId::H42,
        WeightFunctionId::RatioH11H12,
        WeightFunctionId::RatioH31H32,
        WeightFunctionId::RatioH41H42,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            WeightFunctionId::G => "g",
            WeightFunctionId::FDelta => "F_delta",
            WeightFunctionId::OmegaDeltaR => "omega_delta_R",
            WeightFunctionId::Omega1 => "omega1",
            WeightFunctionId::Omega1Minus => "omega1_minus",
            WeightFunctionId::Omega1Plus => "omega1_plus",
            WeightFunctionId::H11 => "h11",
            WeightFunctionId::H12 => "h12",
            WeightFunctionId::H21 => "h21",
            WeightFunctionId::H22 => "h22",
            WeightFunctionId::H31 => "h31",
            WeightFunctionId::H32 => "h32",
            WeightFunctionId::H41 => "h41",
            WeightFunctionId::H42 => "h42",
            WeightFunctionId::RatioH11H12 => "ratio_h11_h12",
            WeightFunctionId::RatioH31H32 => "ratio_h31_h32",
            WeightFunctionId::RatioH41H42 => "ratio_h41_h42",
        }
    }

    pub fn h_kind(&self) -> Option<HKind> {
        Some(match self {
            WeightFunctionId::H11 => HKind::H11,
            WeightFunctionId::H12 => HKind::H12,
            WeightFunctionId::H21 => HKind::H21,
            WeightFunctionId::H22 => HKind::H22,
            WeightFunctionId::H31 => HKind::H31,
            WeightFunctionId::H32 => HKind::H32,
            WeightFunctionId::H41 => HKind::H41,
            WeightFunctionId::H42 => HKind::H42,
            _ => return None,
        })
    }

    /// Numerator, denominator and claimed lower bound `num/den` of a ratio.
    pub fn ratio_parts(&self) -> Option<(HKind, HKind, (f64, f64))> {
        match self {
            WeightFunctionId::RatioH11H12 => Some((HKind::H11, HKind::H12, (1.0, 2.0))),
            WeightFunctionId::RatioH31H32 => Some((HKind::H31, HKind::H32, (999.0, 1000.0))),
            WeightFunctionId::RatioH41H42 => Some((HKind::H41, HKind::H42, (2.0, 1.0))),
            _ => None,
        }
    }
}

impl fmt::Display for WeightFunctionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for WeightFunctionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        WeightFunctionId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::UnknownFunction(s.to_string()))
    }
}

/// Parameters shared by the weight functions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightParams {
    pub delta: f64,
    pub r: f64,
    pub variant: Variant,
}

impl Default for WeightParams {
    fn default() -> Self {
        WeightParams { delta: 0.5, r: 10.0, variant: Variant::Reconciled }
    }
}

impl WeightParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::InvalidParameter(format!("δ = {} outside (0, 1)", self.delta)));
        }
        if !(self.r >= 2.0) || !self.r.is_finite() {
            return Err(Error::InvalidParameter(format!("R = {} must be finite and at least 2", self.r)));
        }
        Ok(())
    }
}

/// Point evaluation in double precision.
pub fn eval_weight(id: WeightFunctionId, params: &WeightParams, x: f64) -> Result<f64> {
    params.validate()?;
    let need = |ok: bool, what: &str| -> Result<()> {
        if ok {
            Ok(())
        } else {
            Err(Error::Domain(format!("{id} is defined for {what}, got x = {x}")))
        }
    };
    if let Some(kind) = id.h_kind() {
        if kind.is_tempered() {
            need((0.0..=1.0).contains(&x), "x in [0, 1]")?;
        } else {
            need(x >= 1.0 && x.is_finite(), "x >= 1")?;
        }
        return Ok(HFunction::new(kind, params.variant).eval(x));
    }
    if let Some((num, den, _)) = id.ratio_parts() {
        let n = HFunction::new(num, params.variant);
        let d = HFunction::new(den, params.variant);
        if num.is_tempered() {
            need((0.0..=1.0).contains(&x), "x in [0, 1]")?;
        } else {
            need(x >= 1.0 && x.is_finite(), "x >= 1")?;
        }
        return Ok(n.eval(x) / d.eval(x));
    }
    match id {
        WeightFunctionId::G => {
            need(x.is_finite(), "finite x")?;
            Ok(g(x))
        }
        WeightFunctionId::FDelta => {
            need(x.is_finite(), "finite x")?;
            Ok(FDelta::new(params.delta).point(x))
        }
        WeightFunctionId::Omega1 => {
            need(x.is_finite(), "finite x")?;
            Ok(Omega1Ratio::new(params.delta).point(x))
        }
        WeightFunctionId::Omega1Minus => Ok(omega1_minus(params.delta)),
        WeightFunctionId::OmegaDeltaR | WeightFunctionId::Omega1Plus => Err(Error::Domain(format!(
            "{id} is an infimum over y, not a pointwise function; use the certifier"
        ))),
        _ => unreachable!("h and ratio ids handled above"),
    }
}

/// Domain searched for a function: `(lo, hi)` with `hi = ∞` for half-lines.
pub fn natural_domain(id: WeightFunctionId, params: &WeightParams) -> (f64, f64) {
    if let Some(kind) = id.h_kind().or(id.ratio_parts().map(|p| p.0)) {
        return if kind.is_tempered() { (0.0, 1.0) } else { (1.0, f64::INFINITY) };
    }
    match id {
        WeightFunctionId::FDelta | WeightFunctionId::OmegaDeltaR => (0.0, params.r),
        WeightFunctionId::G => (0.0, params.r),
        _ => (0.0, f64::INFINITY),
    }
}

/// Certified minimum of a pointwise function over `[lo, hi]` (`hi` may be
/// infinite for functions with a tail bound).
pub fn certify_function(
    id: WeightFunctionId,
    params: &WeightParams,
    domain: (f64, f64),
    cfg: &BnbConfig,
) -> Result<CertifiedMin> {
    params.validate()?;
    let obj: Box<dyn Objective> = if let Some(kind) = id.h_kind() {
        Box::new(HFunction::new(kind, params.variant))
    } else {
        match id {
            WeightFunctionId::G => Box::new(GFn),
            WeightFunctionId::FDelta | WeightFunctionId::OmegaDeltaR => Box::new(FDelta::new(params.delta)),
            WeightFunctionId::Omega1 => Box::new(Omega1Ratio::new(params.delta)),
            other => {
                return Err(Error::InvalidParameter(format!("{other} has no direct minimization; see the report")))
            }
        }
    };
    let r = if domain.1.is_infinite() {
        certify_min_half_line(obj.as_ref(), domain.0, cfg)?
    } else {
        certify_min(obj.as_ref(), domain.0, domain.1, cfg)?
    };
    Ok(r.with_label(id.as_str()))
}

struct GFn;

impl UnivariateFn for GFn {
    fn eval<S: crate::interval::Scalar>(&self, x: S) -> S {
        g(x)
    }
}

/// `ω(δ;R) = inf_{|y|≤R} F_δ(y)`, searched on `[0, R]` by symmetry.
pub fn omega_delta_r(delta: f64, r: f64, cfg: &BnbConfig) -> Result<CertifiedMin> {
    let params = WeightParams { delta, r, ..Default::default() };
    certify_function(WeightFunctionId::OmegaDeltaR, &params, (0.0, r), cfg)
}

/// `ω₁(δ) = inf_y (y²−1)²/(δ(y²−1) − |y|^{2δ} + 1)`.
pub fn omega1(delta: f64, cfg: &BnbConfig) -> Result<CertifiedMin> {
    let params = WeightParams { delta, ..Default::default() };
    certify_function(WeightFunctionId::Omega1, &params, (0.0, f64::INFINITY), cfg)
}

/// `ω₁⁻(δ) = 1.04⁻¹ + 36^{δ−2}`.
pub fn omega1_minus(delta: f64) -> f64 {
    1.0 / 1.04 + 36f64.powf(delta - 2.0)
}

/// Enclosure of `ω₁⁻(δ)`.
pub fn omega1_minus_enclosure(delta: f64) -> Enclosure {
    let v = Interval::ratio(100.0, 104.0) + Interval::point(36.0).powf_nonneg(delta - 2.0);
    v.into()
}

/// Outcome of a ratio certification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioCertificate {
    pub numerator: String,
    pub denominator: String,
    pub claimed_bound: f64,
    pub denominator_min: CertifiedMin,
    /// Certified minimum of `num − c·den`.
    pub margin: CertifiedMin,
    pub holds: bool,
}

/// Certifies `num/den ≥ c` on the domain through `num − c·den ≥ 0`.
///
/// The denominator is certified positive first; otherwise the ratio bound
/// does not follow and [`Error::DenominatorNotPositive`] is returned.
pub fn certify_ratio(
    num: HFunction,
    den: HFunction,
    domain: (f64, f64),
    claimed: (f64, f64),
    cfg: &BnbConfig,
) -> Result<RatioCertificate> {
    let run = |obj: &dyn Objective| {
        if domain.1.is_infinite() {
            certify_min_half_line(obj, domain.0, cfg)
        } else {
            certify_min(obj, domain.0, domain.1, cfg)
        }
    };
    let den_min = run(&den)?.with_label(format!("{:?}", den.kind).to_lowercase());
    if !(den_min.min.lo > 0.0) {
        return Err(Error::DenominatorNotPositive {
            lower_bound: den_min.min.lo,
            lo: domain.0,
            hi: domain.1,
        });
    }
    let margin = run(&Margin { num, den, ratio: claimed })?.with_label("margin");
    Ok(RatioCertificate {
        numerator: format!("{:?}", num.kind).to_lowercase(),
        denominator: format!("{:?}", den.kind).to_lowercase(),
        claimed_bound: claimed.0 / claimed.1,
        holds: margin.min.lo >= 0.0,
        denominator_min: den_min,
        margin,
    })
}

/// `ω₁(δ)` on a grid, in grid order.
pub fn omega1_grid(deltas: &[f64], cfg: &BnbConfig) -> Result<Vec<(f64, CertifiedMin)>> {
    deltas.par_iter().map(|&d| omega1(d, cfg).map(|r| (d, r))).collect()
}

/// `ω(δ;R)` on a grid of `R`, in grid order.
pub fn omega_delta_r_grid(delta: f64, rs: &[f64], cfg: &BnbConfig) -> Result<Vec<(f64, CertifiedMin)>> {
    rs.par_iter().map(|&r| omega_delta_r(delta, r, cfg).map(|m| (r, m))).collect()
}

/// Closed form `ω(1/2;R) = 1/(2(R+1)²)`.
pub fn omega_half_closed_form(r: f64) -> f64 {
    1.0 / (2.0 * (r + 1.0) * (r + 1.0))
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_roundtrip() {
        for id in WeightFunctionId::ALL {
            assert_eq!(id.as_str().parse::<WeightFunctionId>().unwrap(), id);
        }
        assert!(matches!("h99".parse::<WeightFunctionId>(), Err(Error::UnknownFunction(_))));
    }

    #[test]
    fn point_examples() {
        let p = WeightParams::default();
        assert!((eval_weight(WeightFunctionId::FDelta, &p, 0.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((eval_weight(WeightFunctionId::H11, &p, 0.0).unwrap() - 0.001).abs() < 1e-15);
        assert!((eval_weight(WeightFunctionId::H31, &p, 0.5).unwrap() - 0.001).abs() < 1e-13);
        assert!(matches!(eval_weight(WeightFunctionId::H11, &p, 1.5), Err(Error::Domain(_))));
        assert!(matches!(eval_weight(WeightFunctionId::H21, &p, 0.5), Err(Error::Domain(_))));
        let bad = WeightParams { delta: 1.5, ..p };
        assert!(eval_weight(WeightFunctionId::G, &bad, 0.0).is_err());
    }

    #[test]
    fn omega1_minus_examples() {
        assert!((omega1_minus(0.5) - 0.966_168_1).abs() < 1e-7);
        assert!((omega1_minus(1.0 - 1e-12) - 0.989_316_2).abs() < 1e-6);
        let mut prev = 0.0;
        for k in 1..100 {
            let v = omega1_minus(k as f64 / 100.0);
            assert!(v > prev && v < 1.0);
            assert!(omega1_minus_enclosure(k as f64 / 100.0).contains(v));
            prev = v;
        }
    }

    #[test]
    fn omega_half_small_r() {
        let cfg = BnbConfig::with_tol(1e-10);
        let r = omega_delta_r(0.5, 2.0, &cfg).unwrap();
        assert!(r.min.contains(1.0 / 18.0));
        assert!(r.min.lo > 0.0);
    }

    #[test]
    fn h21_h22_ratio_certifies() {
        let cfg = BnbConfig::with_tol(1e-9);
        let num = HFunction::new(HKind::H21, Variant::Reconciled);
        let den = HFunction::new(HKind::H22, Variant::Reconciled);
        let cert = certify_ratio(num, den, (1.0, f64::INFINITY), (1.0, 1.0), &cfg).unwrap();
        assert!(cert.holds);
        assert!(cert.margin.min.contains(0.001));
    }

    #[test]
    fn h11_ratio_aborts_on_nonpositive_denominator() {
        let cfg = BnbConfig::with_tol(1e-9);
        let num = HFunction::new(HKind::H11, Variant::Reconciled);
        let den = HFunction::new(HKind::H12, Variant::Reconciled);
        let err = certify_ratio(num, den, (0.0, 1.0), (1.0, 2.0), &cfg).unwrap_err();
        assert!(matches!(err, Error::DenominatorNotPositive { .. }));
    }
}
