//! Local data from CSV.
//!
//! Header `p,kind,param1,param2[,omega]`. Kinds:
//!
//! * `ap`: `param1 + i·param2` is `a_p`; the class solves `x² − a_p x + ω_p = 0`.
//! * `tempered`: `param1` is `θ`; the class is `u·e^{±iθ}` with `u² = ω_p`.
//! * `nontempered`: `param1` is `t'`, `param2` the phase of `u`; the class
//!   is `u·p^{±t'}`.
//! * `ramified`: `param1 + i·param2` is the next supplied `a_{p^l}`; leave
//!   both empty to mark the prime ramified without data.
//!
//! `omega` defaults to `1` and accepts a real number or `re+imi`.

use std::collections::BTreeMap;
use std::io::Read;
use std::path::Path;

use num_complex::Complex64;

use super::{LocalData, LocalFactor};
use crate::primes::is_prime;
use crate::satake::{LocalParameters, UnramifiedClass, RAMANUJAN_EXPONENT};
use crate::{Error, Result};

const HEADER: [&str; 4] = ["p", "kind", "param1", "param2"];

pub fn ingest(path: impl AsRef<Path>) -> Result<LocalData> {
    let path = path.as_ref();
    let file = std::fs::File::open(path)?;
    ingest_reader(file, &path.display().to_string())
}

pub fn ingest_reader(reader: impl Read, name: &str) -> Result<LocalData> {
    let fail = |line: u64, message: String| Error::Ingest { path: name.to_string(), line, message };
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr.headers()?.clone();
    let names: Vec<&str> = headers.iter().collect();
    let header_ok = names.len() >= 4
        && names.len() <= 5
        && names[..4] == HEADER
        && (names.len() == 4 || names[4] == "omega");
    if !header_ok {
        return Err(fail(1, format!("expected header `p,kind,param1,param2[,omega]`, found `{}`", names.join(","))));
    }

    let mut factors: BTreeMap<u64, LocalFactor> = BTreeMap::new();
    for row in rdr.records() {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line());
        let field = |i: usize| row.get(i).unwrap_or("");
        let p: u64 = field(0).parse().map_err(|_| fail(line, format!("bad prime `{}`", field(0))))?;
        if !is_prime(p) {
            return Err(fail(line, format!("{p} is not prime")));
        }
        let kind = field(1);
        let real = |i: usize, what: &str| -> Result<f64> {
            field(i).parse::<f64>().map_err(|_| fail(line, format!("bad {what} `{}`", field(i))))
        };
        let omega = match field(4) {
            "" => Complex64::new(1.0, 0.0),
            s => parse_complex(s).ok_or_else(|| fail(line, format!("bad omega `{s}`")))?,
        };

        if kind == "ramified" {
            let entry = factors.entry(p).or_insert(LocalFactor::Ramified { p, supplied: Vec::new() });
            let LocalFactor::Ramified { supplied, .. } = entry else {
                return Err(fail(line, format!("prime {p} already has an unramified class")));
            };
            if !(field(2).is_empty() && field(3).is_empty()) {
                let im = if field(3).is_empty() { 0.0 } else { real(3, "param2")? };
                supplied.push(Complex64::new(real(2, "param1")?, im));
            }
            continue;
        }

        let class = match kind {
            "ap" => {
                let a = Complex64::new(real(2, "param1")?, if field(3).is_empty() { 0.0 } else { real(3, "param2")? });
                let disc = (a * a - 4.0 * omega).sqrt();
                UnramifiedClass::new((a + disc) / 2.0, (a - disc) / 2.0, p)
            }
            "tempered" => {
                let theta = real(2, "param1")?;
                let u = omega.sqrt();
                UnramifiedClass::new(u * Complex64::from_polar(1.0, theta), u * Complex64::from_polar(1.0, -theta), p)
            }
            "nontempered" => {
                let t_prime = real(2, "param1")?;
                let phase = if field(3).is_empty() { 0.0 } else { real(3, "param2")? };
                if !(t_prime > 0.0 && t_prime <= RAMANUJAN_EXPONENT) {
                    return Err(fail(line, format!("t' = {t_prime} outside (0, 7/64]")));
                }
                UnramifiedClass::nontempered(t_prime * (p as f64).ln(), phase, p)
            }
            other => return Err(fail(line, format!("unknown kind `{other}`"))),
        }
        .map_err(|e| fail(line, e.to_string()))?;
        if factors.contains_key(&p) {
            return Err(fail(line, format!("duplicate row for prime {p}")));
        }
        factors.insert(p, LocalFactor::Unramified { params: class.params().to_vec(), class });
    }

    let bound = *factors.keys().next_back().ok_or(Error::EmptyInput("no data rows"))?;
    LocalData::new(bound, factors.into_values().collect(), name)
}

/// Parses `x`, `x+yi`, `x-yi` or `yi`.
fn parse_complex(s: &str) -> Option<Complex64> {
    if let Ok(x) = s.parse::<f64>() {
        return Some(Complex64::new(x, 0.0));
    }
    let body = s.strip_suffix('i')?;
    let split = body
        .char_indices()
        .skip(1)
        .filter(|&(i, c)| (c == '+' || c == '-') && !matches!(body.as_bytes()[i - 1], b'e' | b'E'))
        .map(|(i, _)| i)
        .last();
    match split {
        Some(i) => Some(Complex64::new(body[..i].parse().ok()?, body[i..].parse().ok()?)),
        None => Some(Complex64::new(0.0, body.parse().ok()?)),
    }
}
