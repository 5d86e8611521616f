//! Small integer number theory: factorization, primality, prime powers.
//!
//! Everything here works on `u64` by trial division. The inputs that reach
//! these routines (field orders, group orders, dimensions) stay far below
//! the range where that becomes a problem.

/// Prime factorization of `n` as `(prime, exponent)` pairs in increasing
/// prime order. Returns an empty vector for `n <= 1`.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n <= 1 {
        return out;
    }
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut p = 3u64;
    while p.saturating_mul(p) <= n {
        if n % p == 0 {
            return false;
        }
        p += 2;
    }
    true
}

/// Smallest prime `>= n`.
pub fn smallest_prime_geq(n: u64) -> u64 {
    let mut m = n.max(2);
    while !is_prime(m) {
        m += 1;
    }
    m
}

/// Distinct prime divisors of `n`.
pub fn prime_divisors(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

/// Integer partitions of `n` in non-increasing part order, listed in
/// reverse lexicographic order (`[n]` first, `[1, 1, ..., 1]` last).
pub fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn rec(remaining: u32, max_part: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if remaining == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=remaining.min(max_part)).rev() {
            prefix.push(part);
            rec(remaining - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}
