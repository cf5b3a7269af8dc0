//! Exact Ramanujan τ and the normalized coefficients of Δ.
//!
//! `Δ = q·P(q)^8` with `P = Π(1 − q^m)^3 = Σ_k (−1)^k (2k+1) q^{k(k+1)/2}`.
//! Writing `P^8 = Σ f_n q^n`, logarithmic differentiation gives
//! `n·f_n = Σ_{j≥1} (9j − n)·P_j·f_{n−j}`, where only the `O(√n)`
//! triangular `j` contribute. The recurrence runs modulo four primes below
//! `2^31` and the residues are recombined exactly, which covers
//! `|τ(n)| ≤ d(n)·n^{11/2} < 2^{123}` for every `n ≤ 10^6`.

use num_complex::Complex64;
use rayon::prelude::*;

use super::{CoefficientTable, LocalData};
use crate::primes::primes_up_to;
use crate::satake::UnramifiedClass;
use crate::{Error, Result};

/// Largest `N` accepted by the Δ source.
pub const DELTA_LIMIT: u64 = 1_000_000;

const MODULI: [u64; 4] = [2_147_483_647, 2_147_483_629, 2_147_483_587, 2_147_483_579];

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, m: u64) -> u64 {
    pow_mod(a, m - 2, m)
}

/// `(j, P_j)` for triangular `1 ≤ j ≤ n`.
fn jacobi_terms(n: usize) -> Vec<(usize, i64)> {
    (1..)
        .map(|k: usize| (k * (k + 1) / 2, if k.is_multiple_of(2) { 2 * k as i64 + 1 } else { -(2 * k as i64 + 1) }))
        .take_while(|&(j, _)| j <= n)
        .collect()
}

fn inverses(len: usize, m: u64) -> Vec<u64> {
    let mut inv = vec![0u64; len + 1];
    if len >= 1 {
        inv[1] = 1;
    }
    for i in 2..=len {
        inv[i] = (m - (m / i as u64) * inv[(m % i as u64) as usize] % m) % m;
    }
    inv
}

/// `f_0..f_len` of `P^8` modulo every entry of [`MODULI`].
///
/// The four residues of each coefficient sit side by side so one memory
/// access serves all moduli.
fn series_mod(len: usize, terms: &[(usize, i64)]) -> Vec<[u32; 4]> {
    let inv: Vec<Vec<u64>> = MODULI.par_iter().map(|&m| inverses(len, m)).collect();
    // split (9j − n)·P_j so both weights reduce once, outside the inner loop
    let weights: Vec<(usize, [u64; 4], [u64; 4])> = terms
        .iter()
        .map(|&(j, g)| {
            let g = MODULI.map(|m| g.rem_euclid(m as i64) as u64);
            let w = std::array::from_fn(|i| 9 * j as u64 % MODULI[i] * g[i] % MODULI[i]);
            (j, w, g)
        })
        .collect();
    let mut f = vec![[0u32; 4]; len + 1];
    f[0] = [1; 4];
    for n in 1..=len {
        let mut a = [0u128; 4];
        let mut b = [0u128; 4];
        for (j, w, g) in weights.iter().take_while(|t| t.0 <= n) {
            let v = f[n - j];
            for i in 0..4 {
                a[i] += (w[i] * v[i] as u64) as u128;
                b[i] += (g[i] * v[i] as u64) as u128;
            }
        }
        f[n] = std::array::from_fn(|i| {
            let m = MODULI[i];
            let a = (a[i] % m as u128) as u64;
            let b = (b[i] % m as u128) as u64 * (n as u64 % m) % m;
            ((a + m - b) % m * inv[i][n] % m) as u32
        });
    }
    f
}

fn garner(r: [u64; 4]) -> i128 {
    let [m1, m2, m3, m4] = MODULI;
    let x1 = r[0] as u128;
    let c2 = ((r[1] + m2 - (x1 as u64 % m2)) % m2) * inv_mod(m1 % m2, m2) % m2;
    let x2 = x1 + m1 as u128 * c2 as u128;
    let p12 = m1 as u128 * m2 as u128;
    let c3 = ((r[2] + m3 - (x2 % m3 as u128) as u64) % m3) * inv_mod((p12 % m3 as u128) as u64, m3) % m3;
    let x3 = x2 + p12 * c3 as u128;
    let p123 = p12 * m3 as u128;
    let c4 = ((r[3] + m4 - (x3 % m4 as u128) as u64) % m4) * inv_mod((p123 % m4 as u128) as u64, m4) % m4;
    let x4 = x3 + p123 * c4 as u128;
    let modulus = p123 * m4 as u128;
    if x4 > modulus / 2 {
        -((modulus - x4) as i128)
    } else {
        x4 as i128
    }
}

/// `τ(0..=n)` with `τ(0) = 0`.
pub fn ramanujan_tau(n: u64) -> Result<Vec<i128>> {
    if n > DELTA_LIMIT {
        return Err(Error::TooLarge { requested: n, limit: DELTA_LIMIT });
    }
    let n = n as usize;
    if n == 0 {
        return Ok(vec![0]);
    }
    let terms = jacobi_terms(n);
    let residues = series_mod(n - 1, &terms);
    let mut tau = vec![0i128; n + 1];
    tau[1..].par_iter_mut().zip(&residues).for_each(|(t, r)| *t = garner(r.map(u64::from)));
    Ok(tau)
}

/// `λ_n = τ(n)/n^{11/2}` for `n ≤ N`.
pub fn delta_source(n: u64) -> Result<CoefficientTable> {
    Ok(delta_table_from_tau(&ramanujan_tau(n)?))
}

/// `λ_n = τ(n)/n^{11/2}` from `τ(0..=N)`.
pub fn delta_table_from_tau(tau: &[i128]) -> CoefficientTable {
    let values = tau
        .iter()
        .enumerate()
        .map(|(k, &t)| if k == 0 { Complex64::default() } else { Complex64::new(t as f64 / (k as f64).powf(5.5), 0.0) })
        .collect();
    CoefficientTable::from_values(values, "Δ")
}

/// Tempered classes of Δ at every prime `≤ N`, with `2cos θ_p = λ_p`.
pub fn delta_local_data(n: u64) -> Result<LocalData> {
    delta_local_from_table(&delta_source(n)?)
}

/// Tempered classes read off a table of a real Hecke eigenform with
/// `|λ_p| ≤ 2`.
pub fn delta_local_from_table(table: &CoefficientTable) -> Result<LocalData> {
    let n = table.bound() as u64;
    let classes = primes_up_to(n)
        .into_iter()
        .map(|p| {
            let half = (table.get(p as usize).re / 2.0).clamp(-1.0, 1.0);
            UnramifiedClass::tempered(half.acos(), p)
        })
        .collect();
    LocalData::from_classes(n, classes, table.label())
}
