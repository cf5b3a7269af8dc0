//! Dirichlet coefficients from local data.
//!
//! Prime-power coefficients come from the Newton-type recursion
//! `l·λ_{p^l} = Σ_{j=1}^{l} a_{p^j} λ_{p^{l-j}}`; the rest of the table is
//! filled by multiplicativity over a smallest-prime-factor sieve.

mod delta;
mod export;
mod ingest;
mod sato_tate;

use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::primes::{primes_up_to, smallest_prime_factors};
use crate::satake::{adjoint_class, sym_power, LocalParameters, UnramifiedClass};
use crate::{Error, Result};

pub use delta::{
    delta_local_data, delta_local_from_table, delta_source, delta_table_from_tau, ramanujan_tau, DELTA_LIMIT,
};
pub use export::{write_local_csv, write_table_csv};
pub use ingest::{ingest, ingest_reader};
pub use sato_tate::{sato_tate_angle, sato_tate_source, SamplerConfig};

/// Which automorphic object the coefficients belong to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Representation {
    Standard,
    SymPower(u32),
    Adjoint,
    RankinSelberg,
}

impl Representation {
    /// Parses the CLI lift names `std`, `sym2`, `sym3`, `sym4`, `adjoint`.
    pub fn from_lift(name: &str) -> Result<Self> {
        match name {
            "std" => Ok(Representation::Standard),
            "sym2" => Ok(Representation::SymPower(2)),
            "sym3" => Ok(Representation::SymPower(3)),
            "sym4" => Ok(Representation::SymPower(4)),
            "adjoint" => Ok(Representation::Adjoint),
            other => Err(Error::InvalidParameter(format!("unknown lift `{other}`"))),
        }
    }

    /// Satake parameters of this lift of a GL(2) class.
    pub fn lift(&self, class: &UnramifiedClass) -> Result<Vec<Complex64>> {
        match *self {
            Representation::Standard => Ok(class.params().to_vec()),
            Representation::SymPower(k) => Ok(sym_power(class, k)?.params().to_vec()),
            Representation::Adjoint => Ok(adjoint_class(class).params().to_vec()),
            Representation::RankinSelberg => {
                Err(Error::InvalidParameter("Rankin–Selberg data is built from two sources".into()))
            }
        }
    }
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Representation::Standard => write!(f, "π"),
            Representation::SymPower(k) => write!(f, "Sym^{k}π"),
            Representation::Adjoint => write!(f, "Adπ"),
            Representation::RankinSelberg => write!(f, "π₁×π₂"),
        }
    }
}

/// Local component at one prime.
#[derive(Debug, Clone, PartialEq)]
pub enum LocalFactor {
    /// An unramified GL(2) class together with the parameters of the
    /// representation being tabulated.
    Unramified { class: UnramifiedClass, params: Vec<Complex64> },
    /// A ramified prime with supplied `a_{p}, a_{p^2}, …` (possibly none).
    Ramified { p: u64, supplied: Vec<Complex64> },
}

impl LocalFactor {
    pub fn prime(&self) -> u64 {
        match self {
            LocalFactor::Unramified { class, .. } => class.prime(),
            LocalFactor::Ramified { p, .. } => *p,
        }
    }

    pub fn class(&self) -> Option<&UnramifiedClass> {
        match self {
            LocalFactor::Unramified { class, .. } => Some(class),
            LocalFactor::Ramified { .. } => None,
        }
    }

    /// `a_{p^l}` of the tabulated representation; zero past supplied data.
    pub fn a(&self, l: u32) -> Complex64 {
        match self {
            LocalFactor::Unramified { params, .. } => params.iter().map(|a| a.powu(l)).sum(),
            LocalFactor::Ramified { supplied, .. } => {
                supplied.get(l as usize - 1).copied().unwrap_or_default()
            }
        }
    }

    /// `λ_{p}, …, λ_{p^L}`.
    pub fn tower(&self, len: u32) -> Vec<Complex64> {
        match self {
            LocalFactor::Unramified { .. } => {
                let a: Vec<Complex64> = (1..=len).map(|l| self.a(l)).collect();
                lambda_prime_tower(&a).unwrap_or_default()
            }
            LocalFactor::Ramified { supplied, .. } => {
                let n = supplied.len().min(len as usize);
                let mut t = if n == 0 { Vec::new() } else { lambda_prime_tower(&supplied[..n]).expect("nonempty") };
                t.resize(len as usize, Complex64::default());
                t
            }
        }
    }
}

/// Local data for every prime up to a bound.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalData {
    bound: u64,
    factors: Vec<LocalFactor>,
    representation: Representation,
    label: String,
}

impl LocalData {
    /// Builds local data from factors sorted by prime.
    ///
    /// Every prime up to `bound` must appear exactly once.
    pub fn new(bound: u64, mut factors: Vec<LocalFactor>, label: impl Into<String>) -> Result<Self> {
        factors.sort_by_key(|f| f.prime());
        let expected = primes_up_to(bound);
        let mut it = factors.iter().map(|f| f.prime()).peekable();
        for &p in &expected {
            match it.next() {
                Some(q) if q == p => {}
                Some(q) if q > p => return Err(Error::MissingPrime(p)),
                Some(q) => {
                    return Err(Error::InvalidParameter(format!("prime {q} listed twice or not prime")));
                }
                None => return Err(Error::MissingPrime(p)),
            }
        }
        factors.retain(|f| f.prime() <= bound);
        Ok(LocalData { bound, factors, representation: Representation::Standard, label: label.into() })
    }

    pub fn from_classes(bound: u64, classes: Vec<UnramifiedClass>, label: impl Into<String>) -> Result<Self> {
        let factors = classes
            .into_iter()
            .map(|c| LocalFactor::Unramified { params: c.params().to_vec(), class: c })
            .collect();
        LocalData::new(bound, factors, label)
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn representation(&self) -> Representation {
        self.representation
    }

    pub fn factors(&self) -> &[LocalFactor] {
        &self.factors
    }

    pub fn factor(&self, p: u64) -> Option<&LocalFactor> {
        self.factors.binary_search_by_key(&p, |f| f.prime()).ok().map(|i| &self.factors[i])
    }

    /// Unramified factors with prime `≤ x`.
    pub fn unramified_upto(&self, x: u64) -> impl Iterator<Item = &UnramifiedClass> {
        self.factors.iter().take_while(move |f| f.prime() <= x).filter_map(|f| f.class())
    }

    /// The same classes with coefficients of a lift.
    pub fn lifted(&self, rep: Representation) -> Result<LocalData> {
        let factors = self
            .factors
            .iter()
            .map(|f| match f {
                LocalFactor::Unramified { class, .. } => {
                    Ok(LocalFactor::Unramified { class: *class, params: rep.lift(class)? })
                }
                LocalFactor::Ramified { p, .. } => Ok(LocalFactor::Ramified { p: *p, supplied: Vec::new() }),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LocalData { bound: self.bound, factors, representation: rep, label: format!("{rep} of {}", self.label) })
    }

    /// Local data of `π₁ × π₂`; primes ramified in either are ramified.
    pub fn rankin_selberg(&self, other: &LocalData) -> Result<LocalData> {
        let bound = self.bound.min(other.bound);
        let mut factors = Vec::new();
        for f in self.factors.iter().take_while(|f| f.prime() <= bound) {
            let p = f.prime();
            let g = other.factor(p).ok_or(Error::MissingPrime(p))?;
            factors.push(match (f, g) {
                (LocalFactor::Unramified { class, params: a }, LocalFactor::Unramified { params: b, .. }) => {
                    let params = a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect();
                    LocalFactor::Unramified { class: *class, params }
                }
                _ => LocalFactor::Ramified { p, supplied: Vec::new() },
            });
        }
        Ok(LocalData {
            bound,
            factors,
            representation: Representation::RankinSelberg,
            label: format!("{} × {}", self.label, other.label),
        })
    }
}

/// `λ_{p^1..p^L}` from `a_{p^1..p^L}` by the Newton-type recursion.
pub fn lambda_prime_tower(a: &[Complex64]) -> Result<Vec<Complex64>> {
    if a.is_empty() {
        return Err(Error::EmptyInput("a_{p^l} sequence"));
    }
    let mut lam = Vec::with_capacity(a.len() + 1);
    lam.push(Complex64::new(1.0, 0.0));
    for l in 1..=a.len() {
        let s: Complex64 = (1..=l).map(|j| a[j - 1] * lam[l - j]).sum();
        lam.push(s / l as f64);
    }
    lam.remove(0);
    Ok(lam)
}

/// Table of `λ_n`, `1 ≤ n ≤ X`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTable {
    values: Vec<Complex64>,
    label: String,
}

impl CoefficientTable {
    /// `values[0]` is ignored; `values[n]` is `λ_n`.
    pub fn from_values(values: Vec<Complex64>, label: impl Into<String>) -> Self {
        assert!(values.len() >= 2, "table needs λ_1");
        CoefficientTable { values, label: label.into() }
    }

    /// The table `λ_n ≡ 1`.
    pub fn trivial(x: usize) -> Self {
        let mut v = vec![Complex64::new(1.0, 0.0); x + 1];
        v[0] = Complex64::default();
        CoefficientTable { values: v, label: "1".into() }
    }

    pub fn bound(&self) -> usize {
        self.values.len() - 1
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// # Panics
    ///
    /// If `n` is zero or beyond the bound.
    pub fn get(&self, n: usize) -> Complex64 {
        assert!(n >= 1 && n < self.values.len(), "index {n} outside table");
        self.values[n]
    }

    /// `(n, λ_n)` for `n = 1..=X`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        self.values.iter().copied().enumerate().skip(1)
    }
}

/// `λ_n` for `n ≤ x` from local data.
pub fn assemble(local: &LocalData, x: u64) -> Result<CoefficientTable> {
    if x > local.bound {
        if let Some(p) = primes_up_to(x).into_iter().find(|&p| local.factor(p).is_none()) {
            return Err(Error::MissingPrime(p));
        }
    }
    let n = x as usize;
    let spf = smallest_prime_factors(n);
    let upto = local.factors.partition_point(|f| f.prime() <= x);
    let towers: Vec<(u64, Vec<Complex64>)> = local.factors[..upto]
        .par_iter()
        .map(|f| {
            let p = f.prime();
            let mut len = 0u32;
            let mut q = 1u64;
            while q <= x / p {
                q *= p;
                len += 1;
            }
            (p, f.tower(len))
        })
        .collect();
    let mut slot = vec![u32::MAX; n + 1];
    for (i, (p, _)) in towers.iter().enumerate() {
        slot[*p as usize] = i as u32;
    }
    let mut values = vec![Complex64::default(); n + 1];
    if n >= 1 {
        values[1] = Complex64::new(1.0, 0.0);
    }
    for m in 2..=n {
        let p = spf[m] as usize;
        let mut rest = m;
        let mut e = 0usize;
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        let tower = &towers[slot[p] as usize].1;
        values[m] = values[rest] * tower[e - 1];
    }
    Ok(CoefficientTable { values, label: local.label.clone() })
}
