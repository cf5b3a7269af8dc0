//! Sieves shared by the coefficient engine and the sum harness.

/// Smallest-prime-factor table for `0..=n`; `spf[0] = spf[1] = 0`.
pub fn smallest_prime_factors(n: usize) -> Vec<u32> {
    let mut spf = vec![0u32; n + 1];
    let mut primes: Vec<u32> = Vec::new();
    for i in 2..=n {
        if spf[i] == 0 {
            spf[i] = i as u32;
            primes.push(i as u32);
        }
        let si = spf[i];
        for &p in &primes {
            let m = i * p as usize;
            if p > si || m > n {
                break;
            }
            spf[m] = p;
        }
    }
    spf
}

/// Primes up to and including `n`, in increasing order.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Decomposes `n` into `(p, e)` pairs using a smallest-prime-factor table.
pub fn factorize(mut n: usize, spf: &[u32]) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    while n > 1 {
        let p = spf[n] as usize;
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        out.push((p as u64, e));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sieves_agree() {
        let spf = smallest_prime_factors(10_000);
        let primes = primes_up_to(10_000);
        assert_eq!(primes.len(), 1229);
        for n in 2..=10_000u64 {
            assert_eq!(spf[n as usize] as u64 == n, is_prime(n), "n = {n}");
        }
        assert_eq!(factorize(360, &spf), vec![(2, 3), (3, 2), (5, 1)]);
    }
}
