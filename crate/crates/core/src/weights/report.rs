//! Suite of certifications compared against the published constants.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    certify_function, certify_ratio, omega1_minus_enclosure, omega_delta_r, omega_half_closed_form, FDelta,
    HFunction, HKind, Margin, Variant, WeightFunctionId, WeightParams,
};
use crate::bnb::{certify_min, certify_min_half_line, BnbConfig, CertifiedMin, Enclosure, Objective};
use crate::interval::Interval;
use crate::{Error, Result};

/// What a published statement asserts about a certified quantity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Claim {
    /// The value is `value` up to `tol` (absolute).
    Near { value: f64, tol: f64 },
    /// The value is at least `bound`.
    AtLeast { bound: f64 },
    /// The value is strictly positive.
    Positive,
    /// The value lies strictly between 0 and 1.
    UnitInterval,
}

impl Claim {
    pub fn agrees(&self, e: &Enclosure) -> bool {
        match *self {
            Claim::Near { value, tol } => e.lo >= value - tol && e.hi <= value + tol,
            Claim::AtLeast { bound } => e.lo >= bound,
            Claim::Positive => e.lo > 0.0,
            Claim::UnitInterval => e.lo > 0.0 && e.hi < 1.0,
        }
    }

    fn value(&self) -> Option<f64> {
        match *self {
            Claim::Near { value, .. } => Some(value),
            Claim::AtLeast { bound } => Some(bound),
            Claim::Positive | Claim::UnitInterval => None,
        }
    }

    fn describe(&self) -> String {
        match *self {
            Claim::Near { value, tol } => format!("≈ {value} (±{tol:e})"),
            Claim::AtLeast { bound } => format!("≥ {bound}"),
            Claim::Positive => "> 0".into(),
            Claim::UnitInterval => "in (0, 1)".into(),
        }
    }
}

/// One line of the certification report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificationRow {
    pub function: String,
    pub params: RowParams,
    /// `[lo, hi]`; `hi` is `None` on half-lines.
    pub domain: (f64, Option<f64>),
    pub min_lo: f64,
    pub min_hi: f64,
    pub argmin_lo: Option<f64>,
    pub argmin_hi: Option<f64>,
    pub paper_value: Option<f64>,
    pub paper_location: Option<f64>,
    pub paper_claim: String,
    pub agrees: bool,
    pub subdivisions: usize,
    pub complete: bool,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RowParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub claimed_ratio: Option<f64>,
}

impl CertificationRow {
    fn from_min(m: &CertifiedMin, params: RowParams, claim: Claim, location: Option<f64>, note: String) -> Self {
        CertificationRow {
            function: m.function.clone(),
            params,
            domain: (m.domain.0, m.domain.1.is_finite().then_some(m.domain.1)),
            min_lo: m.min.lo,
            min_hi: m.min.hi,
            argmin_lo: Some(m.argmin_bracket.lo),
            argmin_hi: Some(m.argmin_bracket.hi),
            paper_value: claim.value(),
            paper_location: location,
            paper_claim: claim.describe(),
            agrees: claim.agrees(&m.min) && m.complete,
            subdivisions: m.subdivisions,
            complete: m.complete,
            note,
        }
    }

    fn from_value(function: &str, params: RowParams, value: Enclosure, claim: Claim, note: String) -> Self {
        CertificationRow {
            function: function.into(),
            params,
            domain: (f64::NAN, None),
            min_lo: value.lo,
            min_hi: value.hi,
            argmin_lo: None,
            argmin_hi: None,
            paper_value: claim.value(),
            paper_location: None,
            paper_claim: claim.describe(),
            agrees: claim.agrees(&value),
            subdivisions: 0,
            complete: true,
            note,
        }
    }

    pub fn min(&self) -> Enclosure {
        Enclosure { lo: self.min_lo, hi: self.min_hi }
    }

    pub fn argmin(&self) -> Option<Enclosure> {
        Some(Enclosure { lo: self.argmin_lo?, hi: self.argmin_hi? })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub tol: f64,
    pub delta: f64,
    pub r: f64,
    pub omega1_delta: f64,
    pub r_grid: Vec<f64>,
}

/// `R = 2, 2.5, …, 20` then `25, 30, …, 200`.
pub fn default_r_grid() -> Vec<f64> {
    let mut g: Vec<f64> = (4..=40).map(|k| k as f64 / 2.0).collect();
    g.extend((5..=40).map(|k| 5.0 * k as f64));
    g
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { tol: 1e-9, delta: 0.5, r: 10.0, omega1_delta: 0.047_083_3, r_grid: default_r_grid() }
    }
}

fn h_params(variant: Variant) -> RowParams {
    RowParams { variant: Some(variant.as_str().into()), ..Default::default() }
}

/// Published claims for the h-functions: `(claim, argmin)`.
fn h_claim(kind: HKind) -> (Claim, Option<f64>) {
    match kind {
        HKind::H11 => (Claim::Near { value: 0.001, tol: 1e-4 }, Some(0.000_037_233)),
        HKind::H12 => (Claim::Near { value: 0.0019, tol: 1e-4 }, Some(0.025_057_7)),
        HKind::H31 => (Claim::Near { value: 0.000_999_73, tol: 5e-5 }, Some(0.499_989)),
        HKind::H32 => (Claim::Near { value: 0.000_999_71, tol: 5e-5 }, Some(0.499_988)),
        HKind::H21 | HKind::H22 => (Claim::Positive, None),
        HKind::H41 | HKind::H42 => (Claim::AtLeast { bound: 1.0 }, None),
    }
}

fn h_id(kind: HKind) -> WeightFunctionId {
    match kind {
        HKind::H11 => WeightFunctionId::H11,
        HKind::H12 => WeightFunctionId::H12,
        HKind::H21 => WeightFunctionId::H21,
        HKind::H22 => WeightFunctionId::H22,
        HKind::H31 => WeightFunctionId::H31,
        HKind::H32 => WeightFunctionId::H32,
        HKind::H41 => WeightFunctionId::H41,
        HKind::H42 => WeightFunctionId::H42,
    }
}

fn h_row(kind: HKind, variant: Variant, domain: (f64, f64), cfg: &BnbConfig, note: &str) -> Result<CertificationRow> {
    let params = WeightParams { variant, ..Default::default() };
    let m = certify_function(h_id(kind), &params, domain, cfg)?;
    let (claim, loc) = h_claim(kind);
    Ok(CertificationRow::from_min(&m, h_params(variant), claim, loc, note.to_string()))
}

fn ratio_row(id: WeightFunctionId, variant: Variant, cfg: &BnbConfig) -> Result<CertificationRow> {
    let (num, den, c) = id.ratio_parts().expect("ratio id");
    let (n, d) = (HFunction::new(num, variant), HFunction::new(den, variant));
    let domain = if num.is_tempered() { (0.0, 1.0) } else { (1.0, f64::INFINITY) };
    let bound = c.0 / c.1;
    let params = RowParams { variant: Some(variant.as_str().into()), claimed_ratio: Some(bound), ..Default::default() };
    let claim = Claim::AtLeast { bound: 0.0 };
    let location = match id {
        WeightFunctionId::RatioH11H12 => Some(0.0),
        WeightFunctionId::RatioH31H32 => Some(0.499_999),
        _ => None,
    };
    let mut row = match certify_ratio(n, d, domain, c, cfg) {
        Ok(cert) => {
            let note = format!(
                "min of num - {bound}*den; denominator min in [{:.6e}, {:.6e}]",
                cert.denominator_min.min.lo, cert.denominator_min.min.hi
            );
            CertificationRow::from_min(&cert.margin, params, claim, location, note)
        }
        Err(Error::DenominatorNotPositive { lower_bound, .. }) => {
            let margin = Margin { num: n, den: d, ratio: c };
            let m = run_domain(&margin, domain, cfg)?;
            let den_min = run_domain(&d, domain, cfg)?;
            let note = format!(
                "denominator not certifiably positive (lower bound {lower_bound:.6e}, certified min in [{:.6e}, {:.6e}] near x = {:.6}); ratio bound does not follow. Reported: min of num - {bound}*den",
                den_min.min.lo, den_min.min.hi, den_min.argmin_bracket.mid()
            );
            let mut row = CertificationRow::from_min(&m, params, claim, location, note);
            row.agrees = false;
            row
        }
        Err(e) => return Err(e),
    };
    row.function = id.as_str().into();
    row.paper_value = Some(bound);
    row.paper_claim = format!("{}/{} ≥ {bound}", n_name(num), n_name(den));
    Ok(row)
}

fn n_name(k: HKind) -> String {
    format!("{k:?}").to_lowercase()
}

fn run_domain(obj: &dyn Objective, domain: (f64, f64), cfg: &BnbConfig) -> Result<CertifiedMin> {
    if domain.1.is_infinite() {
        certify_min_half_line(obj, domain.0, cfg)
    } else {
        certify_min(obj, domain.0, domain.1, cfg)
    }
}

/// The seventeen-row certification table.
pub fn suite(sc: &SuiteConfig) -> Result<Vec<CertificationRow>> {
    let cfg = BnbConfig::with_tol(sc.tol);
    WeightFunctionId::ALL.par_iter().map(|&id| suite_row(id, sc, &cfg)).collect()
}

/// One row of [`suite`].
pub fn suite_row(id: WeightFunctionId, sc: &SuiteConfig, cfg: &BnbConfig) -> Result<CertificationRow> {
    let (delta, r) = (sc.delta, sc.r);
    let dr = RowParams { delta: Some(delta), r: Some(r), ..Default::default() };
    let d_only = RowParams { delta: Some(delta), ..Default::default() };
    if let Some(kind) = id.h_kind() {
        let domain = if kind.is_tempered() { (0.0, 1.0) } else { (1.0, f64::INFINITY) };
        return h_row(kind, Variant::Reconciled, domain, cfg, "");
    }
    if id.ratio_parts().is_some() {
        return ratio_row(id, Variant::Reconciled, cfg);
    }
    Ok(match id {
        WeightFunctionId::G => {
            let params = WeightParams { delta, r, ..Default::default() };
            let m = certify_function(id, &params, (0.0, r), cfg)?;
            CertificationRow::from_min(&m, RowParams { r: Some(r), ..Default::default() }, Claim::Near { value: 0.0, tol: sc.tol }, Some(1.0), "g(y) = (y-1)^2/2".into())
        }
        WeightFunctionId::FDelta => {
            let f = FDelta::new(delta);
            let at_one: Enclosure = f.enclose(Interval::point(1.0)).into();
            let paper = 2.0 * delta * (1.0 - delta);
            let note = format!(
                "value at the removable singularity y = 1: series value delta(1-delta)/2 = {:.9}; the stated limit delta(1-delta) = {:.9} and the stated F(1) = 2delta(1-delta) = {:.9} disagree with it",
                f.at_one(),
                delta * (1.0 - delta),
                paper
            );
            let mut row = CertificationRow::from_value(id.as_str(), d_only, at_one, Claim::Near { value: paper, tol: sc.tol }, note);
            row.domain = (1.0, Some(1.0));
            row.paper_location = Some(1.0);
            row
        }
        WeightFunctionId::OmegaDeltaR => {
            let m = omega_delta_r(delta, r, cfg)?;
            let asym = delta / (r * r);
            let mut note = format!(
                "positivity claim; asymptotic delta/R^2 = {asym:.6e}, certified/asymptotic = {:.4}",
                m.min.mid() / asym
            );
            if delta == 0.5 {
                note.push_str(&format!("; closed form 1/(2(R+1)^2) = {:.9e}", omega_half_closed_form(r)));
            }
            CertificationRow::from_min(&m, dr, Claim::Positive, None, note)
        }
        WeightFunctionId::Omega1 => {
            let m = super::omega1(sc.omega1_delta, cfg)?;
            let note = format!("1/(1-delta) = {:.9}", 1.0 / (1.0 - sc.omega1_delta));
            CertificationRow::from_min(
                &m,
                RowParams { delta: Some(sc.omega1_delta), ..Default::default() },
                Claim::Near { value: 1.04941, tol: 1e-5 },
                Some(0.0),
                note,
            )
        }
        WeightFunctionId::Omega1Minus => CertificationRow::from_value(
            id.as_str(),
            d_only,
            omega1_minus_enclosure(delta),
            Claim::UnitInterval,
            "1/1.04 + 36^(delta-2)".into(),
        ),
        WeightFunctionId::Omega1Plus => {
            let rep = omega1_plus(delta, &sc.r_grid, cfg)?;
            let claim = if delta == 0.5 { Claim::AtLeast { bound: 0.007 } } else { Claim::Positive };
            let mut row = CertificationRow::from_value(id.as_str(), d_only, rep.grid_max, claim, rep.note.clone());
            row.domain = (rep.rows.first().map_or(2.0, |x| x.r), rep.rows.last().map(|x| x.r));
            row.argmin_lo = Some(rep.grid_max_r);
            row.argmin_hi = Some(rep.grid_max_r);
            row.paper_location = (delta == 0.5).then_some(10.0);
            row.subdivisions = rep.rows.len();
            row
        }
        _ => unreachable!("h and ratio ids handled above"),
    })
}

/// Extra rows: the basins holding the published minima, the literal reading
/// and the typed display variant.
pub fn supplementary(sc: &SuiteConfig) -> Result<Vec<CertificationRow>> {
    let cfg = BnbConfig::with_tol(sc.tol);
    let jobs: Vec<(HKind, Variant, (f64, f64), &str)> = vec![
        (HKind::H11, Variant::Reconciled, (0.0, 0.25), "local basin near 0"),
        (HKind::H12, Variant::Reconciled, (0.0, 0.25), "local basin near 0"),
        (HKind::H31, Variant::Reconciled, (0.4, 0.6), "local basin near 1/2"),
        (HKind::H32, Variant::Reconciled, (0.4, 0.6), "local basin near 1/2"),
        (HKind::H11, Variant::Literal, (0.0, 1.0), "literal reading, g without absolute value"),
        (HKind::H12, Variant::Literal, (0.0, 1.0), "literal reading, g without absolute value"),
        (HKind::H31, Variant::Literal, (0.0, 1.0), "literal reading, g without absolute value"),
        (HKind::H32, Variant::Literal, (0.0, 1.0), "literal reading, g without absolute value"),
        (HKind::H31, Variant::Display, (0.0, 1.0), "typed display terms"),
        (HKind::H32, Variant::Display, (0.0, 1.0), "typed display terms"),
        (HKind::H42, Variant::Display, (1.0, f64::INFINITY), "typed display terms"),
    ];
    let mut rows: Vec<CertificationRow> = jobs
        .par_iter()
        .map(|&(k, v, dom, note)| {
            let mut row = h_row(k, v, dom, &cfg, note)?;
            row.function = format!("{}[{}]", row.function, note.split(',').next().unwrap_or(note));
            Ok(row)
        })
        .collect::<Result<_>>()?;
    let mut row = ratio_row(WeightFunctionId::RatioH31H32, Variant::Display, &cfg)?;
    row.function = format!("{}[typed display terms]", row.function);
    rows.push(row);
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Omega1PlusRow {
    pub r: f64,
    pub omega: Enclosure,
    /// `ω(δ;R) − (21δ + 21ω(δ;R)R² + 21R^{1+δ})/R⁶`.
    pub bracket: Enclosure,
    /// `ω(δ;R)R⁶ > 21δ + 21ω(δ;R)R² + 21R^{1+δ}`, certified.
    pub inequality_holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Omega1PlusReport {
    pub delta: f64,
    pub rows: Vec<Omega1PlusRow>,
    /// Largest bracket over the grid.
    pub grid_max: Enclosure,
    pub grid_max_r: f64,
    /// `sup_T inf_{R ≥ T}` restricted to the grid.
    pub literal_sup_inf: Enclosure,
    /// Smallest grid `R` from which the inequality holds at every larger grid point.
    pub inequality_threshold: Option<f64>,
    pub remark_value: f64,
    /// True when neither reading reaches the remark's value.
    pub flagged: bool,
    pub note: String,
}

/// The bracket of the `ω₁⁺` definition over a grid of `R`.
pub fn omega1_plus(delta: f64, r_grid: &[f64], cfg: &BnbConfig) -> Result<Omega1PlusReport> {
    if r_grid.is_empty() {
        return Err(Error::EmptyInput("R grid"));
    }
    let mut grid = r_grid.to_vec();
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    if grid[0] < 2.0 || grid[grid.len() - 1] > 200.0 {
        return Err(Error::InvalidParameter("R grid must lie in [2, 200]".into()));
    }
    let rows: Vec<Omega1PlusRow> = grid
        .par_iter()
        .map(|&r| {
            let m = omega_delta_r(delta, r, cfg)?;
            Ok(bracket_row(delta, r, m.min))
        })
        .collect::<Result<_>>()?;

    let (grid_max_r, grid_max) = rows
        .iter()
        .map(|row| (row.r, row.bracket))
        .fold((grid[0], Enclosure { lo: f64::NEG_INFINITY, hi: f64::NEG_INFINITY }), |best, cur| {
            if cur.1.hi > best.1.hi {
                cur
            } else {
                best
            }
        });
    let grid_max = Enclosure {
        lo: rows.iter().map(|r| r.bracket.lo).fold(f64::NEG_INFINITY, f64::max),
        hi: grid_max.hi,
    };

    let mut suffix_lo = f64::INFINITY;
    let mut suffix_hi = f64::INFINITY;
    let mut lit = Enclosure { lo: f64::NEG_INFINITY, hi: f64::NEG_INFINITY };
    for row in rows.iter().rev() {
        suffix_lo = suffix_lo.min(row.bracket.lo);
        suffix_hi = suffix_hi.min(row.bracket.hi);
        lit.lo = lit.lo.max(suffix_lo);
        lit.hi = lit.hi.max(suffix_hi);
    }

    let mut threshold = None;
    for row in rows.iter().rev() {
        if row.inequality_holds {
            threshold = Some(row.r);
        } else {
            break;
        }
    }

    let remark = 0.007;
    let flagged = !(grid_max.lo >= remark) || !(lit.lo >= remark);
    let note = format!(
        "max over grid {:.6e} at R = {grid_max_r}; literal sup-inf over the grid {:.6e} (tends to 0 as the grid extends); remark value {remark}{}",
        grid_max.hi,
        lit.hi,
        if flagged { "; DISCREPANCY: no reading reaches the remark value" } else { "" }
    );
    Ok(Omega1PlusReport {
        delta,
        rows,
        grid_max,
        grid_max_r,
        literal_sup_inf: lit,
        inequality_threshold: threshold,
        remark_value: remark,
        flagged,
        note,
    })
}

fn bracket_row(delta: f64, r: f64, omega: Enclosure) -> Omega1PlusRow {
    let w: Interval = omega.into();
    let ri = Interval::point(r);
    let d = Interval::point(delta);
    let c21 = Interval::point(21.0);
    let r2 = ri.sqr();
    let r6 = ri.powi(6);
    let r1d = ri.powf_nonneg(1.0 + delta);
    let rhs = c21 * d + c21 * w * r2 + c21 * r1d;
    let bracket = w - rhs / r6;
    let lhs = w * r6;
    Omega1PlusRow { r, omega, bracket: bracket.into(), inequality_holds: lhs.lo() > rhs.hi() }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentConstants {
    pub omega1_plus_half: f64,
    pub omega2: f64,
    pub gamma: f64,
    pub omega3: f64,
    pub omega12: f64,
    pub floor_omega2: f64,
    pub floor_omega3: f64,
    pub floor_omega12: f64,
    pub pass_omega2: bool,
    pub pass_omega3: bool,
    pub pass_omega12: bool,
}

/// Final exponent arithmetic from a value of `ω₁⁺(1/2)`.
pub fn exponent_constants(omega1_plus_half: f64) -> Result<ExponentConstants> {
    let x = omega1_plus_half;
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::InvalidParameter(format!("ω₁⁺(1/2) = {x} must lie in (0, 1)")));
    }
    let omega2 = x / 500.0;
    let gamma = 0.099 / (1000.0 - 2.0 * 0.999);
    let omega3 = gamma * x;
    let omega12 = 1.0 - (1.0 - x).powf(2.0 / 3.0);
    let (f2, f3, f12) = (1.4e-5, 6.9e-7, 4.5e-3);
    // the floors are printed to two significant digits
    let pass = |v: f64, f: f64| v >= f * (1.0 - 1e-12);
    Ok(ExponentConstants {
        omega1_plus_half: x,
        omega2,
        gamma,
        omega3,
        omega12,
        floor_omega2: f2,
        floor_omega3: f3,
        floor_omega12: f12,
        pass_omega2: pass(omega2, f2),
        pass_omega3: pass(omega3, f3),
        pass_omega12: pass(omega12, f12),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_from_remark_value() {
        let c = exponent_constants(0.007).unwrap();
        assert!((c.omega2 - 1.4e-5).abs() < 1e-18 && c.pass_omega2);
        assert!((c.omega3 - 6.944e-7).abs() < 1e-10 && c.pass_omega3);
        assert!((c.omega12 - 4.67e-3).abs() < 1e-5 && c.pass_omega12);
        let low = exponent_constants(0.003447).unwrap();
        assert!((low.omega2 - 6.894e-6).abs() < 1e-9 && !low.pass_omega2);
        assert!(exponent_constants(0.0).is_err());
        assert!(exponent_constants(-1.0).is_err());
    }

    #[test]
    fn bracket_spot_values() {
        let row = bracket_row(0.5, 10.0, Enclosure { lo: 1.0 / 242.0, hi: 1.0 / 242.0 });
        assert!((row.bracket.mid() - 0.003_449).abs() < 1e-5);
        assert!(row.inequality_holds);
        let row = bracket_row(0.5, 7.5, Enclosure { lo: 1.0 / 144.5, hi: 1.0 / 144.5 });
        assert!((row.bracket.mid() - 0.004_392).abs() < 1e-5);
    }

    #[test]
    fn claims() {
        let e = Enclosure { lo: 0.00099, hi: 0.00101 };
        assert!(Claim::Near { value: 0.001, tol: 1e-4 }.agrees(&e));
        assert!(!Claim::AtLeast { bound: 0.007 }.agrees(&e));
        assert!(Claim::Positive.agrees(&e));
        assert!(!Claim::Positive.agrees(&Enclosure { lo: 0.0, hi: 1.0 }));
    }
}
