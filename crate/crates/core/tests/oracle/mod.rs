//! Reference implementations for the integration tests. Everything here is
//! written from the definitions with plain loops, sharing no code with the
//! library beyond its public types.

#![allow(dead_code)]

use num_bigint::BigUint;

/// Euclidean algorithm on `k/n`, last term at least 2 when the length is 2+.
pub fn euclid(k: u64, n: u64) -> Vec<u64> {
    let (mut num, mut den) = (n, k);
    let mut terms = Vec::new();
    while den != 0 {
        terms.push(num / den);
        let r = num % den;
        num = den;
        den = r;
    }
    terms
}

/// `[..., a] -> [..., a - 1, 1]`, or `[..., a, 1] -> [..., a + 1]`.
pub fn other_rep(terms: &[u64]) -> Option<Vec<u64>> {
    let mut out = terms.to_vec();
    let last = *out.last()?;
    if last >= 2 {
        *out.last_mut().unwrap() -= 1;
        out.push(1);
        Some(out)
    } else if out.len() >= 2 {
        out.pop();
        *out.last_mut().unwrap() += 1;
        Some(out)
    } else {
        None
    }
}

/// `(p, q)` with `p/q = [0; terms]`, evaluated from the back.
pub fn value(terms: &[u64]) -> (u128, u128) {
    let (mut p, mut q) = (0u128, 1u128);
    for &a in terms.iter().rev() {
        // 1 / (a + p/q) = q / (a q + p)
        let next_q = a as u128 * q + p;
        p = q;
        q = next_q;
    }
    (p, q)
}

/// Denominator of `[0; terms]`.
pub fn denominator(terms: &[u64]) -> u128 {
    value(terms).1
}

/// Same, without overflow.
pub fn denominator_big(terms: &[u64]) -> BigUint {
    let (mut p, mut q) = (BigUint::from(0u8), BigUint::from(1u8));
    for &a in terms.iter().rev() {
        let next_q = &q * a + &p;
        p = q;
        q = next_q;
    }
    q
}

pub fn avg_ok(terms: &[u64], b: u64) -> bool {
    let mut sum = 0u64;
    terms.iter().enumerate().all(|(i, &a)| {
        sum += a;
        sum <= b * (i as u64 + 1)
    })
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `F_0 .. F_k` for `F_j = b F_{j-1} + F_{j-2}`.
pub fn pell(b: u64, k: usize) -> Vec<BigUint> {
    let mut f = vec![BigUint::from(0u8), BigUint::from(1u8)];
    while f.len() <= k {
        let j = f.len();
        let next = &f[j - 1] * b + &f[j - 2];
        f.push(next);
    }
    f.truncate(k + 1);
    f
}

/// Every sequence (of any length) with denominator at most `n`. Appending a
/// term never lowers the denominator, so a prefix above `n` is a dead end.
pub fn sequences_up_to(n: u64, keep: &dyn Fn(&[u64]) -> bool, visit: &mut dyn FnMut(&[u64])) {
    fn go(prefix: &mut Vec<u64>, n: u64, keep: &dyn Fn(&[u64]) -> bool, visit: &mut dyn FnMut(&[u64])) {
        for a in 1..=n {
            prefix.push(a);
            if denominator(prefix) > n as u128 {
                prefix.pop();
                break;
            }
            if keep(prefix) {
                visit(prefix);
                go(prefix, n, keep, visit);
            }
            prefix.pop();
        }
    }
    go(&mut Vec::new(), n, keep, visit);
}

/// Number of average-`b`-bounded sequences with denominator at most `n`.
pub fn count_avg(n: u64, b: u64) -> u64 {
    let mut c = 0;
    // a prefix that breaks the average bound cannot be repaired later
    sequences_up_to(n, &|s| avg_ok(s, b), &mut |_| c += 1);
    c
}

/// Same with every term at most `b`.
pub fn count_uniform(n: u64, b: u64) -> u64 {
    let mut c = 0;
    sequences_up_to(n, &|s| *s.last().unwrap() <= b, &mut |_| c += 1);
    c
}

/// Length-`m` sequences bounded in average by `b`, by brute force.
pub fn count_length(m: usize, b: u64) -> u64 {
    fn go(depth: usize, sum: u64, m: usize, b: u64) -> u64 {
        if depth == m {
            return 1;
        }
        let t = depth as u64 + 1;
        (1..=b * t - sum).map(|a| go(depth + 1, sum + a, m, b)).sum()
    }
    go(0, 0, m, b)
}

/// `binomial(2j, j) / (j + 1)`.
pub fn catalan(j: u64) -> BigUint {
    let mut c = BigUint::from(1u8);
    for i in 0..j {
        c = c * (2 * (2 * i + 1)) / (i + 2);
    }
    c
}

/// Smallest coprime `k` such that one of the two expansions of `k/n` is
/// bounded in average by `b`, scanning canonical before alternate.
pub fn first_witness(n: u64, b: u64) -> Option<(u64, Vec<u64>, bool)> {
    (1..n).filter(|&k| gcd(k, n) == 1).find_map(|k| {
        let canon = euclid(k, n);
        if avg_ok(&canon, b) {
            return Some((k, canon, true));
        }
        let alt = other_rep(&canon)?;
        avg_ok(&alt, b).then_some((k, alt, false))
    })
}
