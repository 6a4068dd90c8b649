//! Finite continued fractions `[0; a_1, ..., a_m]` of rationals in `(0, 1)`.
//!
//! Partial quotients are stored without the leading zero. Continuants follow
//! the usual recurrence `q_j = a_j q_{j-1} + q_{j-2}` seeded with
//! `q_{-1} = 0`, `q_0 = 1`; numerators use `p_{-1} = 1`, `p_0 = 0`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{CfError, Result};
use crate::scalar::Scalar;

/// Nonempty sequence of positive partial quotients `(a_1, ..., a_m)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(into = "String")]
pub struct PartialQuotientSeq(Vec<u64>);

#[allow(clippy::len_without_is_empty)]
impl PartialQuotientSeq {
    pub fn new(terms: Vec<u64>) -> Result<Self> {
        if terms.is_empty() {
            return Err(CfError::EmptySequence);
        }
        if let Some(index) = terms.iter().position(|&a| a == 0) {
            return Err(CfError::ZeroTerm { index: index + 1 });
        }
        Ok(PartialQuotientSeq(terms))
    }

    /// Builds a sequence from terms already known to be valid.
    pub(crate) fn from_valid(terms: Vec<u64>) -> Self {
        debug_assert!(!terms.is_empty() && terms.iter().all(|&a| a > 0));
        PartialQuotientSeq(terms)
    }

    pub fn terms(&self) -> &[u64] {
        &self.0
    }

    pub fn into_terms(self) -> Vec<u64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn first(&self) -> u64 {
        self.0[0]
    }

    pub fn last(&self) -> u64 {
        self.0[self.0.len() - 1]
    }

    pub fn sum(&self) -> u128 {
        self.0.iter().map(|&a| u128::from(a)).sum()
    }

    /// `(a_2, ..., a_m)`, or `None` for a single term.
    pub fn tail(&self) -> Option<Self> {
        (self.0.len() > 1).then(|| PartialQuotientSeq(self.0[1..].to_vec()))
    }

    /// `(a, a_1, ..., a_m)`.
    pub fn prepend(&self, a: u64) -> Result<Self> {
        let mut terms = Vec::with_capacity(self.0.len() + 1);
        terms.push(a);
        terms.extend_from_slice(&self.0);
        PartialQuotientSeq::new(terms)
    }

    /// `(a_1, ..., a_m, a)`.
    pub fn append(&self, a: u64) -> Result<Self> {
        let mut terms = self.0.clone();
        terms.push(a);
        PartialQuotientSeq::new(terms)
    }

    /// Weighted sum `sum_j j * a_j`, the loop variant of the shifting process.
    pub fn weighted_sum(&self) -> u128 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &a)| (i as u128 + 1) * u128::from(a))
            .sum()
    }
}

impl fmt::Display for PartialQuotientSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

impl From<PartialQuotientSeq> for String {
    fn from(s: PartialQuotientSeq) -> String {
        s.to_string()
    }
}

impl FromStr for PartialQuotientSeq {
    type Err = CfError;

    /// Parses comma-separated positive integers, e.g. `"1,2,2"`.
    fn from_str(s: &str) -> Result<Self> {
        let terms = s
            .split(',')
            .map(|t| t.trim().parse::<u64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| CfError::Parse(s.to_string()))?;
        PartialQuotientSeq::new(terms)
    }
}

impl TryFrom<Vec<u64>> for PartialQuotientSeq {
    type Error = CfError;

    fn try_from(terms: Vec<u64>) -> Result<Self> {
        PartialQuotientSeq::new(terms)
    }
}

/// Reduced fraction `k/n` with `1 <= k < n` and `gcd(k, n) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ReducedFraction<T> {
    k: T,
    n: T,
}

impl<T: Scalar> ReducedFraction<T> {
    pub fn new(k: T, n: T) -> Result<Self> {
        if k.is_zero() || k >= n {
            return Err(CfError::FractionRange {
                k: k.to_string(),
                n: n.to_string(),
            });
        }
        if !k.gcd(&n).is_one() {
            return Err(CfError::NotCoprime {
                k: k.to_string(),
                n: n.to_string(),
            });
        }
        Ok(ReducedFraction { k, n })
    }

    pub fn numerator(&self) -> &T {
        &self.k
    }

    pub fn denominator(&self) -> &T {
        &self.n
    }
}

impl<T: fmt::Display> fmt::Display for ReducedFraction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.k, self.n)
    }
}

/// Average bound `B >= 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct BoundParameter(u64);

impl BoundParameter {
    pub fn new(b: u64) -> Result<Self> {
        if b < 2 {
            return Err(CfError::BoundTooSmall(b));
        }
        Ok(BoundParameter(b))
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

impl Default for BoundParameter {
    fn default() -> Self {
        BoundParameter(2)
    }
}

impl fmt::Display for BoundParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Prefix continuants `q_0, ..., q_m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContinuantTrace<T>(Vec<T>);

impl<T: Scalar> ContinuantTrace<T> {
    pub fn values(&self) -> &[T] {
        &self.0
    }

    /// `q_m`, the continuant of the whole sequence.
    pub fn last(&self) -> &T {
        &self.0[self.0.len() - 1]
    }
}

impl<T: Scalar> fmt::Display for ContinuantTrace<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, q) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{q}")?;
        }
        Ok(())
    }
}

/// Canonical Euclidean expansion of `k/n`; the last term is at least 2.
///
/// Fails with [`CfError::Overflow`] only when a partial quotient exceeds
/// `u64::MAX`, which needs `n > 2^64`.
pub fn expand<T: Scalar>(f: &ReducedFraction<T>) -> Result<PartialQuotientSeq> {
    let mut num = f.n.clone();
    let mut den = f.k.clone();
    let mut terms = Vec::new();
    while !den.is_zero() {
        let (a, r) = num.div_rem(&den);
        terms.push(a.to_u64().ok_or(CfError::Overflow)?);
        num = den;
        den = r;
    }
    Ok(PartialQuotientSeq::from_valid(terms))
}

/// The other continued fraction of the same rational:
/// `(.., a_m)` with `a_m >= 2` becomes `(.., a_m - 1, 1)` and vice versa.
pub fn alternate_rep(s: &PartialQuotientSeq) -> Result<PartialQuotientSeq> {
    let mut terms = s.0.clone();
    let m = terms.len();
    if terms[m - 1] >= 2 {
        terms[m - 1] -= 1;
        terms.push(1);
    } else if m >= 2 {
        terms.pop();
        terms[m - 2] = terms[m - 2].checked_add(1).ok_or(CfError::Overflow)?;
    } else {
        return Err(CfError::UnitSequence);
    }
    Ok(PartialQuotientSeq::from_valid(terms))
}

/// `K(a_1, ..., a_m)`.
pub fn continuant<T: Scalar>(s: &PartialQuotientSeq) -> Result<T> {
    continuant_of_terms(s.terms())
}

/// Continuant of a raw term slice; the empty slice has continuant 1.
pub(crate) fn continuant_of_terms<T: Scalar>(terms: &[u64]) -> Result<T> {
    let mut prev = T::zero();
    let mut cur = T::one();
    for &a in terms {
        let next = T::mul_add(a, &cur, &prev).ok_or(CfError::Overflow)?;
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(cur)
}

/// Exact continuant as a [`Natural`](crate::Natural), using `u64` arithmetic
/// until it would overflow.
pub fn continuant_natural(s: &PartialQuotientSeq) -> BigUint {
    match continuant::<u64>(s) {
        Ok(q) => BigUint::from(q),
        Err(_) => continuant::<BigUint>(s).expect("unbounded continuant cannot overflow"),
    }
}

pub fn continuant_trace<T: Scalar>(s: &PartialQuotientSeq) -> Result<ContinuantTrace<T>> {
    let mut values = Vec::with_capacity(s.len() + 1);
    let mut prev = T::zero();
    values.push(T::one());
    for &a in s.terms() {
        let cur = &values[values.len() - 1];
        let next = T::mul_add(a, cur, &prev).ok_or(CfError::Overflow)?;
        prev = cur.clone();
        values.push(next);
    }
    Ok(ContinuantTrace(values))
}

/// Numerator and denominator of `[0; a_1, ..., a_m]`, including `(1) -> 1/1`.
pub fn convergent_pair<T: Scalar>(s: &PartialQuotientSeq) -> Result<(T, T)> {
    let (mut p_prev, mut p) = (T::one(), T::zero());
    let (mut q_prev, mut q) = (T::zero(), T::one());
    for &a in s.terms() {
        let p_next = T::mul_add(a, &p, &p_prev).ok_or(CfError::Overflow)?;
        let q_next = T::mul_add(a, &q, &q_prev).ok_or(CfError::Overflow)?;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
    }
    Ok((p, q))
}

/// The rational `[0; a_1, ..., a_m]` in lowest terms.
pub fn convergent<T: Scalar>(s: &PartialQuotientSeq) -> Result<ReducedFraction<T>> {
    if s.terms() == [1] {
        return Err(CfError::UnitSequence);
    }
    let (k, n) = convergent_pair::<T>(s)?;
    debug_assert!(k.gcd(&n).is_one());
    Ok(ReducedFraction { k, n })
}

/// Every prefix mean is at most `B`: `sum_{i<=t} a_i <= B t` for all `t`.
pub fn is_avg_bounded(s: &PartialQuotientSeq, bound: BoundParameter) -> bool {
    max_prefix_excess(s, bound) <= 0
}

/// `max_t (sum_{i<=t} a_i - B t)`.
pub fn max_prefix_excess(s: &PartialQuotientSeq, bound: BoundParameter) -> i128 {
    let b = i128::from(bound.get());
    let mut sum = 0i128;
    let mut best = i128::MIN;
    for (i, &a) in s.terms().iter().enumerate() {
        sum += i128::from(a);
        best = best.max(sum - b * (i as i128 + 1));
    }
    best
}

/// Every term is at most `B`.
pub fn is_uniformly_bounded(s: &PartialQuotientSeq, bound: BoundParameter) -> bool {
    s.terms().iter().all(|&a| a <= bound.get())
}
