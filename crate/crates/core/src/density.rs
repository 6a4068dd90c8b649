//! Denominators `n` admitting a coprime `k < n` whose continued fraction is
//! bounded in average by `B`, and the fraction set used to show they are
//! plentiful for `B = 2`.
//!
//! A rational has two continued fractions; `k/n` qualifies when either one
//! is bounded in average. Witness search prefers the smallest `k`, and for a
//! given `k` the canonical expansion over the alternate one.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use crate::cf::{
    alternate_rep, continuant, convergent, convergent_pair, expand, is_avg_bounded,
    BoundParameter, PartialQuotientSeq, ReducedFraction,
};
use crate::enumeration::{count_avg_bounded_by_continuant, round6, visit_sequences, Constraint};
use crate::error::{CfError, Result};
use crate::parallel::Shard;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Representation {
    Canonical,
    Alternate,
}

impl Representation {
    pub fn as_str(&self) -> &'static str {
        match self {
            Representation::Canonical => "canonical",
            Representation::Alternate => "alternate",
        }
    }
}

/// Evidence that `n` belongs to the set for some bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessRecord<T> {
    pub n: T,
    pub k: T,
    pub sequence: PartialQuotientSeq,
    pub representation: Representation,
}

impl<T: Scalar> WitnessRecord<T> {
    /// Re-checks coprimality, the value of the sequence, which representation
    /// it is, and the average bound, from scratch.
    pub fn revalidate(&self, bound: BoundParameter) -> bool {
        let Ok(f) = ReducedFraction::new(self.k.clone(), self.n.clone()) else {
            return false;
        };
        let value_ok = convergent::<T>(&self.sequence).is_ok_and(|c| c == f);
        let canonical = expand(&f);
        let rep_ok = match self.representation {
            Representation::Canonical => canonical.as_ref() == Ok(&self.sequence),
            Representation::Alternate => canonical
                .and_then(|c| alternate_rep(&c))
                .is_ok_and(|alt| alt == self.sequence),
        };
        value_ok && rep_ok && is_avg_bounded(&self.sequence, bound)
    }
}

/// First `k` (ascending, coprime to `n`) with a representation of `k/n`
/// bounded in average by `B`.
pub fn find_witness<T: Scalar>(n: &T, bound: BoundParameter) -> Result<Option<WitnessRecord<T>>> {
    if *n < T::from_u8(2).expect("2 fits every scalar") {
        return Err(CfError::OutOfRange("witness search needs n >= 2".into()));
    }
    let mut k = T::one();
    while k < *n {
        if k.gcd(n).is_one() {
            let f = ReducedFraction::new(k.clone(), n.clone())?;
            let canonical = expand(&f)?;
            if is_avg_bounded(&canonical, bound) {
                return Ok(Some(witness(f, canonical, Representation::Canonical)));
            }
            let alternate = alternate_rep(&canonical)?;
            if is_avg_bounded(&alternate, bound) {
                return Ok(Some(witness(f, alternate, Representation::Alternate)));
            }
        }
        k = k + T::one();
    }
    Ok(None)
}

fn witness<T: Scalar>(
    f: ReducedFraction<T>,
    sequence: PartialQuotientSeq,
    representation: Representation,
) -> WitnessRecord<T> {
    WitnessRecord {
        n: f.denominator().clone(),
        k: f.numerator().clone(),
        sequence,
        representation,
    }
}

/// Witnesses for every member of the set in `[2, n_max]`, sorted by `n`.
pub fn f_set(n_max: u64, bound: BoundParameter) -> Result<Vec<WitnessRecord<u64>>> {
    f_set_shard(n_max, bound, Shard::whole())
}

/// The part of [`f_set`] owned by `shard`; position `i` is `n = i + 2`.
pub fn f_set_shard(
    n_max: u64,
    bound: BoundParameter,
    shard: Shard,
) -> Result<Vec<WitnessRecord<u64>>> {
    if n_max < 2 {
        return Err(CfError::OutOfRange("survey needs N >= 2".into()));
    }
    let found: Vec<Option<WitnessRecord<u64>>> = (2..=n_max)
        .into_par_iter()
        .filter(|n| shard.owns((n - 2) as usize))
        .map(|n| find_witness(&n, bound))
        .collect::<Result<_>>()?;
    Ok(found.into_iter().flatten().collect())
}

/// Merges shard outputs into one list sorted by `n`.
pub fn merge_witnesses(parts: Vec<Vec<WitnessRecord<u64>>>) -> Vec<WitnessRecord<u64>> {
    let mut all: Vec<_> = parts.into_iter().flatten().collect();
    all.sort_by_key(|w| w.n);
    all
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensitySummary {
    pub n_max: u64,
    pub bound: BoundParameter,
    pub count: u64,
    /// `ln(count) / ln(N)` to 6 decimals.
    pub exponent: Option<f64>,
}

impl DensitySummary {
    pub fn from_witnesses(
        n_max: u64,
        bound: BoundParameter,
        witnesses: &[WitnessRecord<u64>],
    ) -> Self {
        let count = witnesses.len() as u64;
        let exponent = (count > 0).then(|| round6((count as f64).ln() / (n_max as f64).ln()));
        DensitySummary {
            n_max,
            bound,
            count,
            exponent,
        }
    }
}

/// Size of the set in `[2, N]` and its pointwise exponent.
pub fn density_report(n_max: u64, bound: BoundParameter) -> Result<DensitySummary> {
    let witnesses = f_set(n_max, bound)?;
    Ok(DensitySummary::from_witnesses(n_max, bound, &witnesses))
}

/// A fraction `p/q` with `1 < p < q` whose sequence and sequence tail are both
/// bounded in average by 2.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct USetEntry {
    pub fraction: ReducedFraction<u64>,
    pub sequence: PartialQuotientSeq,
    pub tail: PartialQuotientSeq,
}

/// All such fractions with `q <= n`, one entry per rational (the canonical
/// representation when both qualify), sorted by `(q, p)`.
pub fn u_set(n: u64) -> Result<Vec<USetEntry>> {
    if n < 3 {
        return Err(CfError::OutOfRange("the fraction set needs n >= 3".into()));
    }
    let mut by_value: BTreeMap<(u64, u64), USetEntry> = BTreeMap::new();
    let mut prefix = Vec::new();
    walk_u(&mut prefix, 0, 0, (1, 0), (0, 1), n, &mut |terms, p, q| {
        if p <= 1 {
            return;
        }
        let sequence = PartialQuotientSeq::new(terms.to_vec()).expect("walk emits valid terms");
        let tail = PartialQuotientSeq::new(terms[1..].to_vec()).expect("length >= 2");
        let fraction = ReducedFraction::new(p, q).expect("convergents are reduced");
        let entry = USetEntry {
            fraction,
            sequence,
            tail,
        };
        by_value
            .entry((q, p))
            .and_modify(|e| {
                if e.sequence.last() == 1 && entry.sequence.last() >= 2 {
                    *e = entry.clone();
                }
            })
            .or_insert(entry);
    });
    Ok(by_value.into_values().collect())
}

/// Walks sequences with continuant at most `n` that are bounded in average by
/// 2 and whose tails are too; `p` and `q` carry `(previous, current)` pairs.
fn walk_u(
    prefix: &mut Vec<u64>,
    slack: u64,
    tail_slack: u64,
    p: (u64, u64),
    q: (u64, u64),
    n: u64,
    emit: &mut dyn FnMut(&[u64], u64, u64),
) {
    let depth = prefix.len();
    let mut a_hi = (slack + 2).min((n - q.0) / q.1);
    if depth >= 1 {
        a_hi = a_hi.min(tail_slack + 2);
    }
    for a in 1..=a_hi {
        let p_next = a * p.1 + p.0;
        let q_next = a * q.1 + q.0;
        prefix.push(a);
        if depth >= 1 {
            emit(prefix, p_next, q_next);
        }
        let next_tail = if depth >= 1 { tail_slack + 2 - a } else { 0 };
        walk_u(prefix, slack + 2 - a, next_tail, (p.1, p_next), (q.1, q_next), n, emit);
        prefix.pop();
    }
}

/// Which sub-claim a sequence broke.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CorollaryClaim {
    /// Prepending 1 or 2 keeps the average bound.
    PrependBounded,
    /// `K(a) = a_1 q' + p' <= 3 q' <= n`.
    ContinuantBound,
    /// `[a] = p/q` implies `[a'] = (q - a_1 p)/p`.
    TailIdentity,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorollaryViolation {
    pub tail: PartialQuotientSeq,
    pub first_term: u64,
    pub claim: CorollaryClaim,
}

/// Sub-claims checked over every tail `a'` with `K(a') <= n / 3`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorollaryClaims {
    pub n: u64,
    pub checked: u64,
    pub violations: Vec<CorollaryViolation>,
}

/// Sub-claims plus the counting inequality `S̄_{n/3}(2) <= |S ∩ [n]|^2`,
/// with `S` the denominators of [`u_set`]`(n)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorollaryReport {
    pub claims: CorollaryClaims,
    pub sbar_third: BigUint,
    pub denominators: u64,
    pub denominators_squared: BigUint,
    pub inequality_holds: bool,
}

/// Checks the three sub-claims for every average-2-bounded `a'` with
/// `K(a') <= floor(n / 3)` and each first term `a_1` in `{1, 2}`.
pub fn corollary_claims(n: u64) -> Result<CorollaryClaims> {
    if n < 9 {
        return Err(CfError::OutOfRange("the corollary check needs n >= 9".into()));
    }
    let bound = BoundParameter::default();
    let mut checked = 0u64;
    let mut violations = Vec::new();
    visit_sequences(n / 3, bound, Constraint::Average, &mut |terms, q_tail| {
        checked += 1;
        let tail = PartialQuotientSeq::new(terms.to_vec()).expect("walk emits valid terms");
        let (p_tail, q_tail_check) =
            convergent_pair::<u64>(&tail).expect("continuants stay below n");
        debug_assert_eq!(q_tail, q_tail_check);
        for a1 in [1u64, 2] {
            let a = tail.prepend(a1).expect("positive first term");
            let mut fail = |claim| {
                violations.push(CorollaryViolation {
                    tail: tail.clone(),
                    first_term: a1,
                    claim,
                })
            };
            if !is_avg_bounded(&a, bound) {
                fail(CorollaryClaim::PrependBounded);
            }
            let k_a = continuant::<u64>(&a).expect("continuant stays below n");
            if k_a != a1 * q_tail + p_tail || k_a > 3 * q_tail || 3 * q_tail > n {
                fail(CorollaryClaim::ContinuantBound);
            }
            let (p, q) = convergent_pair::<u64>(&a).expect("continuant stays below n");
            if q < a1 * p || (q - a1 * p, p) != (p_tail, q_tail) {
                fail(CorollaryClaim::TailIdentity);
            }
        }
    });
    Ok(CorollaryClaims {
        n,
        checked,
        violations,
    })
}

pub fn corollary_chain_check(n: u64) -> Result<CorollaryReport> {
    let claims = corollary_claims(n)?;
    let sbar_third = count_avg_bounded_by_continuant(&(n / 3), BoundParameter::default())?;
    let denominators: BTreeSet<u64> = u_set(n)?
        .iter()
        .map(|e| *e.fraction.denominator())
        .collect();
    let size = denominators.len() as u64;
    let squared = BigUint::from(size) * size;
    Ok(CorollaryReport {
        claims,
        inequality_holds: sbar_third <= squared,
        sbar_third,
        denominators: size,
        denominators_squared: squared,
    })
}
