//! Prime and integer partial sums over generated coefficient data.
//!
//! Summands are computed in parallel into an ordered buffer and then
//! accumulated sequentially with [`Neumaier`], so every series is
//! bit-identical across thread counts.

use std::io::Write;
use std::ops::RangeInclusive;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coeffgen::{CoefficientTable, LocalData, LocalFactor};
use crate::primes::primes_up_to;
use crate::satake::{adjoint_eigenvalue, sym_power, twist, LocalParameters, UnramifiedClass};
use crate::summation::{compensated_sum, Neumaier};
use crate::{Error, Result};

/// Relative allowance for rounding when comparing two sums that satisfy a
/// termwise inequality.
pub const ROUNDING_SLACK: f64 = 1e-12;

/// Partial sums of one quantity at increasing checkpoints.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SumSeries {
    pub descriptor: String,
    pub checkpoints: Vec<u64>,
    pub values: Vec<f64>,
}

impl SumSeries {
    pub fn last(&self) -> f64 {
        *self.values.last().expect("nonempty series")
    }

    /// The series `S(X)·log^ω X / X`.
    pub fn log_ratio(&self, omega: f64) -> SumSeries {
        let values = self
            .checkpoints
            .iter()
            .zip(&self.values)
            .map(|(&x, &s)| {
                let x = x as f64;
                s * x.ln().powf(omega) / x
            })
            .collect();
        SumSeries {
            descriptor: format!("({})·log^{omega} X / X", self.descriptor),
            checkpoints: self.checkpoints.clone(),
            values,
        }
    }

    /// `c·S(X)`.
    pub fn scaled(&self, c: f64, descriptor: impl Into<String>) -> SumSeries {
        SumSeries {
            descriptor: descriptor.into(),
            checkpoints: self.checkpoints.clone(),
            values: self.values.iter().map(|v| c * v).collect(),
        }
    }

    /// Writes `X,value` rows.
    pub fn write_csv(&self, w: impl Write) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["X", "value"])?;
        for (x, v) in self.checkpoints.iter().zip(&self.values) {
            out.write_record([x.to_string(), format!("{v:e}")])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Least-squares line through `(log log X, S(X))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegressionFit {
    pub slope: f64,
    pub intercept: f64,
    pub max_residual: f64,
    pub points: usize,
}

/// Checkpoints `10^a, 10^{a+s}, …, 10^b` rounded to integers.
pub fn log_checkpoints(from_exp: f64, to_exp: f64, step: f64) -> Vec<u64> {
    let n = ((to_exp - from_exp) / step + 1e-9).floor() as usize;
    let mut v: Vec<u64> = (0..=n).map(|i| 10f64.powf(from_exp + step * i as f64).round() as u64).collect();
    v.dedup();
    v
}

/// `10³, 10^{3.5}, …, 10⁶`.
pub fn default_checkpoints() -> Vec<u64> {
    log_checkpoints(3.0, 6.0, 0.5)
}

fn validate_checkpoints(checkpoints: &[u64], bound: u64) -> Result<u64> {
    let last = *checkpoints.last().ok_or(Error::EmptyInput("checkpoints"))?;
    if checkpoints[0] == 0 || checkpoints.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("checkpoints must be positive and strictly increasing".into()));
    }
    if last > bound {
        return Err(Error::CheckpointBeyondData { checkpoint: last, bound });
    }
    Ok(last)
}

/// Accumulates `(n, summand)` pairs sorted by `n` into a series.
fn accumulate(descriptor: String, terms: &[(u64, f64)], checkpoints: &[u64]) -> SumSeries {
    let mut acc = Neumaier::new();
    let mut values = Vec::with_capacity(checkpoints.len());
    let mut it = terms.iter().peekable();
    for &x in checkpoints {
        while let Some(&&(n, v)) = it.peek() {
            if n > x {
                break;
            }
            acc.add(v);
            it.next();
        }
        values.push(acc.value());
    }
    SumSeries { descriptor, checkpoints: checkpoints.to_vec(), values }
}

/// Per-prime summand of a prime sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PrimeWeight {
    /// `|a_p|^e / p`.
    AbsPow(f64),
    /// `|a_p|^e / p` over `|a_p| ≤ R`.
    AbsPowAtMost { e: f64, r: f64 },
    /// `1/p` over `|a_p| > R`.
    Above(f64),
    /// `|a_p(Ad π)|² / p`.
    AdjointSq,
    /// `|a_p(Ad π)|² / p` over `|a_p| > R`.
    AdjointSqAbove(f64),
    /// `a_p(Ad π) / p`.
    Adjoint,
    /// `a_p(ω⁻² ⊗ Sym⁴π) / p`.
    Sym4Twist,
}

impl PrimeWeight {
    pub fn describe(&self) -> String {
        match *self {
            PrimeWeight::AbsPow(e) => format!("Σ|a_p|^{e}/p"),
            PrimeWeight::AbsPowAtMost { e, r } => format!("Σ_{{|a_p|≤{r}}}|a_p|^{e}/p"),
            PrimeWeight::Above(r) => format!("Σ_{{|a_p|>{r}}}1/p"),
            PrimeWeight::AdjointSq => "Σ|a_p(Adπ)|²/p".into(),
            PrimeWeight::AdjointSqAbove(r) => format!("Σ_{{|a_p|>{r}}}|a_p(Adπ)|²/p"),
            PrimeWeight::Adjoint => "Σa_p(Adπ)/p".into(),
            PrimeWeight::Sym4Twist => "Σa_p(ω⁻²Sym⁴π)/p".into(),
        }
    }

    fn term(&self, a: Complex64, class: &UnramifiedClass) -> f64 {
        let p = class.prime() as f64;
        let m = a.norm();
        let v = match *self {
            PrimeWeight::AbsPow(e) => m.powf(e),
            PrimeWeight::AbsPowAtMost { e, r } => {
                if m <= r {
                    m.powf(e)
                } else {
                    0.0
                }
            }
            PrimeWeight::Above(r) => f64::from(m > r),
            PrimeWeight::AdjointSq => adjoint_eigenvalue(class, 1).powi(2),
            PrimeWeight::AdjointSqAbove(r) => {
                if m > r {
                    adjoint_eigenvalue(class, 1).powi(2)
                } else {
                    0.0
                }
            }
            PrimeWeight::Adjoint => adjoint_eigenvalue(class, 1),
            PrimeWeight::Sym4Twist => sym4_twist(class),
        };
        v / p
    }
}

fn sym4_twist(class: &UnramifiedClass) -> f64 {
    let w = class.central_character().inv();
    let w2 = w.powi(2) / w.powi(2).norm();
    twist(&sym_power(class, 4).expect("k = 4"), w2).expect("unit twist").power_sum(1).re
}

/// `Σ_{p ≤ X} w(p)` at each checkpoint, over unramified primes.
///
/// `a_p` is the coefficient of the tabulated representation; the adjoint
/// and Sym⁴ weights use the underlying GL(2) class.
pub fn prime_sum(local: &LocalData, weight: PrimeWeight, checkpoints: &[u64]) -> Result<SumSeries> {
    let x = validate_checkpoints(checkpoints, local.bound())?;
    let upto = local.factors().partition_point(|f| f.prime() <= x);
    let terms: Vec<(u64, f64)> = local.factors()[..upto]
        .par_iter()
        .filter_map(|f| match f {
            LocalFactor::Unramified { class, .. } => Some((class.prime(), weight.term(f.a(1), class))),
            LocalFactor::Ramified { .. } => None,
        })
        .collect();
    Ok(accumulate(format!("{} [{}]", weight.describe(), local.label()), &terms, checkpoints))
}

/// Convergence data for `Σ_p |a_{p^l}|²·log²p / p^l`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrimePowerSeries {
    pub l: u32,
    pub series: SumSeries,
    /// Contribution of `p ∈ (X/10, X]` at the last checkpoint.
    pub last_decade_increment: f64,
}

/// `Σ_{p ≤ X} |a_{p^l}|²·log²p / p^l` for each `l` in the range.
pub fn prime_power_sum(local: &LocalData, l_range: RangeInclusive<u32>, checkpoints: &[u64]) -> Result<Vec<PrimePowerSeries>> {
    if *l_range.start() < 2 {
        return Err(Error::InvalidParameter("prime-power sums need l >= 2".into()));
    }
    let x = validate_checkpoints(checkpoints, local.bound())?;
    let upto = local.factors().partition_point(|f| f.prime() <= x);
    let factors = &local.factors()[..upto];
    l_range
        .map(|l| {
            let terms: Vec<(u64, f64)> = factors
                .par_iter()
                .filter(|f| f.class().is_some())
                .map(|f| {
                    let p = f.prime() as f64;
                    (f.prime(), f.a(l).norm_sqr() * p.ln().powi(2) / p.powi(l as i32))
                })
                .collect();
            let series = accumulate(format!("Σ_p|a_{{p^{l}}}|²log²p/p^{l} [{}]", local.label()), &terms, checkpoints);
            let last_decade_increment = compensated_sum(terms.iter().filter(|t| t.0 * 10 > x).map(|t| t.1));
            Ok(PrimePowerSeries { l, series, last_decade_increment })
        })
        .collect()
}

/// `Σ_{p^l ≤ X} |a_{p^l}|² / p^l` split into the `l = 1` part and the `l ≥ 2` tail.
pub fn prime_power_split(local: &LocalData, checkpoints: &[u64]) -> Result<(SumSeries, SumSeries)> {
    let x = validate_checkpoints(checkpoints, local.bound())?;
    let upto = local.factors().partition_point(|f| f.prime() <= x);
    let mut tail: Vec<(u64, f64)> = local.factors()[..upto]
        .par_iter()
        .filter(|f| f.class().is_some())
        .flat_map_iter(|f| {
            let p = f.prime();
            std::iter::successors(Some((p * p, 2u32)), move |&(q, l)| q.checked_mul(p).map(|q| (q, l + 1)))
                .take_while(move |&(q, _)| q <= x)
                .map(move |(q, l)| (q, f.a(l).norm_sqr() / q as f64))
        })
        .collect();
    tail.sort_by_key(|t| t.0);
    let head = prime_sum(local, PrimeWeight::AbsPow(2.0), checkpoints)?;
    let tail = accumulate(format!("Σ_{{p^l≤X, l≥2}}|a_{{p^l}}|²/p^l [{}]", local.label()), &tail, checkpoints);
    Ok((head, tail))
}

/// Exponent bookkeeping behind the convergence of the prime-power sums.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentCheck {
    pub m: u32,
    pub theta: f64,
    pub l0: u32,
    /// `(1 − 2θ)·l₀`.
    pub exponent: f64,
    pub holds: bool,
}

/// `l₀ = ⌊(m²+1)/2⌋` and whether `(1 − 2θ)·l > 1` for all `l ≥ l₀`.
pub fn hypothesis_h_exponent(m: u32, theta: f64) -> ExponentCheck {
    let l0 = (m * m).div_ceil(2);
    let exponent = (1.0 - 2.0 * theta) * l0 as f64;
    ExponentCheck { m, theta, l0, exponent, holds: theta < 0.5 && exponent > 1.0 }
}

fn abs_pow(z: Complex64, e: f64) -> f64 {
    if e == 1.0 {
        z.norm()
    } else if e == 2.0 {
        z.norm_sqr()
    } else {
        z.norm().powf(e)
    }
}

fn validate_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::InvalidParameter(format!("δ = {delta} must be positive")));
    }
    Ok(())
}

/// `Σ_{n ≤ X} |λ_n|^{2δ}` at each checkpoint.
pub fn dirichlet_sum(table: &CoefficientTable, delta: f64, checkpoints: &[u64]) -> Result<SumSeries> {
    validate_delta(delta)?;
    validate_checkpoints(checkpoints, table.bound() as u64)?;
    let mut acc = Neumaier::new();
    let mut values = Vec::with_capacity(checkpoints.len());
    let mut n = 1usize;
    for &x in checkpoints {
        let x = x as usize;
        let chunk: Vec<f64> = (n..=x).into_par_iter().map(|k| abs_pow(table.get(k), 2.0 * delta)).collect();
        acc.extend(chunk);
        n = x + 1;
        values.push(acc.value());
    }
    Ok(SumSeries {
        descriptor: format!("Σ_{{n≤X}}|λ_n|^{} [{}]", 2.0 * delta, table.label()),
        checkpoints: checkpoints.to_vec(),
        values,
    })
}

/// Prime powers `p^l ≤ x` with `log p`, in increasing order.
fn prime_powers(x: u64) -> Vec<(u64, f64)> {
    let mut v: Vec<(u64, f64)> = primes_up_to(x)
        .into_iter()
        .flat_map(|p| {
            let lp = (p as f64).ln();
            std::iter::successors(Some(p), move |&q| q.checked_mul(p)).take_while(move |&q| q <= x).map(move |q| (q, lp))
        })
        .collect();
    v.sort_by_key(|t| t.0);
    v
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElliottReport {
    pub delta: f64,
    /// `y⁻¹·Σ_{p^l ≤ y}|λ_{p^l}|^{2δ}·log p` at each checkpoint.
    pub series: SumSeries,
    pub value: f64,
    pub attained_at: u64,
    pub bound: f64,
    pub holds: bool,
}

/// `max_y y⁻¹·Σ_{p^l ≤ y}|λ_{p^l}|^{2δ}·log p` over checkpoints `y`.
pub fn elliott_delta(table: &CoefficientTable, delta: f64, checkpoints: &[u64]) -> Result<ElliottReport> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!("δ = {delta} outside (0, 1)")));
    }
    let x = validate_checkpoints(checkpoints, table.bound() as u64)?;
    let terms: Vec<(u64, f64)> =
        prime_powers(x).into_par_iter().map(|(q, lp)| (q, abs_pow(table.get(q as usize), 2.0 * delta) * lp)).collect();
    let sums = accumulate(String::new(), &terms, checkpoints);
    let values: Vec<f64> = checkpoints.iter().zip(&sums.values).map(|(&y, &s)| s / y as f64).collect();
    let (i, &value) =
        values.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).expect("nonempty checkpoints");
    Ok(ElliottReport {
        delta,
        series: SumSeries {
            descriptor: format!("y⁻¹Σ_{{p^l≤y}}|λ_{{p^l}}|^{}log p [{}]", 2.0 * delta, table.label()),
            checkpoints: checkpoints.to_vec(),
            values,
        },
        value,
        attained_at: checkpoints[i],
        bound: 2.0,
        holds: value <= 2.0,
    })
}

/// `S(X) / [(X/log X)·exp(Σ_{p ≤ X, |a_p| ≤ R} |a_p|^{2δ}/p)]`.
pub fn lower_bound_ratio(
    table: &CoefficientTable,
    local: &LocalData,
    delta: f64,
    r: f64,
    checkpoints: &[u64],
) -> Result<SumSeries> {
    if !(r >= 2.0) {
        return Err(Error::InvalidParameter(format!("R = {r} must be at least 2")));
    }
    let s = dirichlet_sum(table, delta, checkpoints)?;
    let e = prime_sum(local, PrimeWeight::AbsPowAtMost { e: 2.0 * delta, r }, checkpoints)?;
    let values = checkpoints
        .iter()
        .zip(s.values.iter().zip(&e.values))
        .map(|(&x, (&s, &e))| {
            let x = x as f64;
            s / (x / x.ln() * e.exp())
        })
        .collect();
    Ok(SumSeries {
        descriptor: format!("S(X)/[(X/log X)exp({})], δ={delta}, R={r}", e.descriptor),
        checkpoints: checkpoints.to_vec(),
        values,
    })
}

/// One finite-sum inequality `lhs ≤ rhs` checked at every checkpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityCheck {
    pub name: String,
    pub lhs: SumSeries,
    pub rhs: SumSeries,
    /// `min (rhs − lhs)` over checkpoints.
    pub min_slack: f64,
    pub violations: usize,
}

impl InequalityCheck {
    fn new(name: impl Into<String>, lhs: SumSeries, rhs: SumSeries) -> Self {
        let mut min_slack = f64::INFINITY;
        let mut violations = 0;
        for (l, r) in lhs.values.iter().zip(&rhs.values) {
            min_slack = min_slack.min(r - l);
            if !(*l <= r + ROUNDING_SLACK * r.abs().max(l.abs())) {
                violations += 1;
            }
        }
        InequalityCheck { name: name.into(), lhs, rhs, min_slack, violations }
    }

    pub fn holds(&self) -> bool {
        self.violations == 0
    }
}

/// The Rankin-trick chains
/// `Σ_{|a_p|>R} 1/p ≤ R⁻⁸·Σ|a_p|⁸/p` and
/// `Σ_{|a_p|>R} |a_p(Ad π)|²/p ≤ R⁻⁴·Σ|a_p|⁸/p`.
pub fn threshold_chains(local: &LocalData, r: f64, checkpoints: &[u64]) -> Result<Vec<InequalityCheck>> {
    if !(r >= 2.0) {
        return Err(Error::InvalidParameter(format!("R = {r} must be at least 2")));
    }
    let eighth = prime_sum(local, PrimeWeight::AbsPow(8.0), checkpoints)?;
    let above = prime_sum(local, PrimeWeight::Above(r), checkpoints)?;
    let ad_above = prime_sum(local, PrimeWeight::AdjointSqAbove(r), checkpoints)?;
    let b8 = eighth.scaled(r.powi(-8), format!("R⁻⁸{}", eighth.descriptor));
    let b4 = eighth.scaled(r.powi(-4), format!("R⁻⁴{}", eighth.descriptor));
    Ok(vec![
        InequalityCheck::new(format!("threshold ≤ R⁻⁸·eighth moment, R={r}"), above, b8),
        InequalityCheck::new(format!("adjoint above threshold ≤ R⁻⁴·eighth moment, R={r}"), ad_above, b4),
    ])
}

/// `Σ|a₁a₂|/p ≤ [Σ|a₁a₂|²/p · Σ|a₁|/p · Σ|a₂|/p]^{1/3}`.
pub fn holder_check(a: &LocalData, b: &LocalData, checkpoints: &[u64]) -> Result<InequalityCheck> {
    validate_checkpoints(checkpoints, a.bound().min(b.bound()))?;
    let ab = a.rankin_selberg(b)?;
    let lhs = prime_sum(&ab, PrimeWeight::AbsPow(1.0), checkpoints)?;
    let sq = prime_sum(&ab, PrimeWeight::AbsPow(2.0), checkpoints)?;
    let sa = restricted_abs_sum(a, &ab, checkpoints)?;
    let sb = restricted_abs_sum(b, &ab, checkpoints)?;
    let rhs = SumSeries {
        descriptor: format!("[{} · Σ|a₁|/p · Σ|a₂|/p]^(1/3)", sq.descriptor),
        checkpoints: checkpoints.to_vec(),
        values: (0..checkpoints.len()).map(|i| (sq.values[i] * sa.values[i] * sb.values[i]).cbrt()).collect(),
    };
    Ok(InequalityCheck::new(format!("Hölder [{} | {}]", a.label(), b.label()), lhs, rhs))
}

/// `Σ|a_p|/p` over the primes unramified in the product data.
fn restricted_abs_sum(single: &LocalData, product: &LocalData, checkpoints: &[u64]) -> Result<SumSeries> {
    let x = *checkpoints.last().expect("validated");
    let upto = product.factors().partition_point(|f| f.prime() <= x);
    let terms: Vec<(u64, f64)> = product.factors()[..upto]
        .par_iter()
        .filter(|f| f.class().is_some())
        .map(|f| {
            let p = f.prime();
            let a = single.factor(p).expect("prime present").a(1);
            (p, a.norm() / p as f64)
        })
        .collect();
    Ok(accumulate(format!("Σ|a_p|/p [{}]", single.label()), &terms, checkpoints))
}

/// `Σ|a_p|⁴/p` against `2Σ1/p + 3Σa_p(Ad π)/p + Σa_p(ω⁻² ⊗ Sym⁴π)/p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Degree4Aggregate {
    pub lhs: SumSeries,
    pub rhs: SumSeries,
    /// `max |lhs − rhs| / max(1, |lhs|)`.
    pub max_relative_residual: f64,
}

/// The fourth-moment identity summed over primes, for the standard classes.
pub fn degree4_aggregate(local: &LocalData, checkpoints: &[u64]) -> Result<Degree4Aggregate> {
    let std = local.lifted(crate::coeffgen::Representation::Standard)?;
    let lhs = prime_sum(&std, PrimeWeight::AbsPow(4.0), checkpoints)?;
    let one = prime_sum(&std, PrimeWeight::AbsPow(0.0), checkpoints)?;
    let ad = prime_sum(&std, PrimeWeight::Adjoint, checkpoints)?;
    let s4 = prime_sum(&std, PrimeWeight::Sym4Twist, checkpoints)?;
    let values: Vec<f64> = (0..checkpoints.len()).map(|i| 2.0 * one.values[i] + 3.0 * ad.values[i] + s4.values[i]).collect();
    let max_relative_residual = lhs
        .values
        .iter()
        .zip(&values)
        .map(|(l, r)| (l - r).abs() / l.abs().max(1.0))
        .fold(0.0, f64::max);
    Ok(Degree4Aggregate {
        rhs: SumSeries {
            descriptor: "2Σ1/p + 3Σa_p(Adπ)/p + Σa_p(ω⁻²Sym⁴π)/p".into(),
            checkpoints: checkpoints.to_vec(),
            values,
        },
        lhs,
        max_relative_residual,
    })
}

/// Least-squares fit of `S(X)` against `log log X` over checkpoints `X ≥ 100`.
pub fn fit_loglog(series: &SumSeries) -> Result<RegressionFit> {
    let pts: Vec<(f64, f64)> = series
        .checkpoints
        .iter()
        .zip(&series.values)
        .filter(|(&x, _)| x >= 100)
        .map(|(&x, &v)| ((x as f64).ln().ln(), v))
        .collect();
    if pts.len() < 4 {
        return Err(Error::InsufficientCheckpoints { needed: 4, got: pts.len() });
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let max_residual = pts.iter().map(|p| (p.1 - intercept - slope * p.0).abs()).fold(0.0, f64::max);
    Ok(RegressionFit { slope, intercept, max_residual, points: pts.len() })
}
