//! Property suite behind the `verify` command.
//!
//! Each check enumerates its whole domain and counts violations; a healthy
//! build reports zero everywhere. [`Scale::Full`] uses the documented
//! domains, [`Scale::Quick`] shrinks them for smoke runs.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Integer;
use serde::Serialize;

use crate::cf::{
    alternate_rep, continuant, continuant_trace, convergent, expand, is_avg_bounded,
    BoundParameter, PartialQuotientSeq, ReducedFraction,
};
use crate::density::{corollary_claims, f_set, WitnessRecord};
use crate::enumeration::{
    catalan, count_avg_bounded_by_continuant, count_avg_bounded_length, count_by_continuant,
    count_uniform_bounded_by_continuant, visit_sequences, Constraint,
};
use crate::error::Result;
use crate::growth::{
    max_admissible_length, pell_like, tail_identity_check, uniform_bound_holds,
    uniform_continuant,
};
use crate::parallel::Shard;
use crate::shifting::normalize;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scale {
    Quick,
    Full,
}

impl Scale {
    fn pick<T>(self, quick: T, full: T) -> T {
        match self {
            Scale::Quick => quick,
            Scale::Full => full,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub cases: u64,
    pub violations: u64,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

struct Tally {
    name: &'static str,
    cases: u64,
    violations: u64,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally {
            name,
            cases: 0,
            violations: 0,
        }
    }

    fn record(&mut self, ok: bool) {
        self.cases += 1;
        if !ok {
            self.violations += 1;
        }
    }

    fn finish(self) -> CheckOutcome {
        CheckOutcome {
            name: self.name,
            cases: self.cases,
            violations: self.violations,
        }
    }
}

fn b2() -> BoundParameter {
    BoundParameter::default()
}

fn bounds_2_to_5() -> impl Iterator<Item = BoundParameter> {
    (2..=5).map(|b| BoundParameter::new(b).expect("b >= 2"))
}

pub fn run_all(scale: Scale) -> Result<Vec<CheckOutcome>> {
    Ok(vec![
        round_trip(scale.pick(200, 2000)),
        two_representations(scale.pick(20, 60)),
        recursion_identity(scale.pick(4, 6)),
        trace_monotone(scale.pick(200, 2000)),
        uniform_is_maximal(scale.pick(7, 10))?,
        uniform_growth_bound(scale.pick(40, 200))?,
        uniform_agreement(60)?,
        tail_identity(20)?,
        admissible_inverse(scale.pick(2000, 100_000))?,
        length_count_oracle(scale.pick(8, 12))?,
        pruning_soundness(scale.pick(60, 500))?,
        shard_merge(scale.pick(2000, 20_000))?,
        count_dominance(&[10, 100, 1000, scale.pick(3000, 10_000)])?,
        corollary_chain(scale.pick(300, 2000))?,
        witness_survey(scale.pick(300, 2000))?,
    ])
}

fn coprime_pairs(n_max: u64) -> impl Iterator<Item = (u64, u64)> {
    (2..=n_max).flat_map(|n| (1..n).filter(move |k| k.gcd(&n) == 1).map(move |k| (k, n)))
}

/// `convergent(expand(k/n)) = k/n` and `K(expand(k/n)) = n`.
pub fn round_trip(n_max: u64) -> CheckOutcome {
    let mut t = Tally::new("round_trip");
    for (k, n) in coprime_pairs(n_max) {
        let f = ReducedFraction::new(k, n).expect("coprime pair");
        let ok = expand(&f).is_ok_and(|s| {
            convergent::<u64>(&s).is_ok_and(|c| c == f) && continuant::<u64>(&s) == Ok(n)
        });
        t.record(ok);
    }
    t.finish()
}

/// Every sequence whose value is `k/n` is the expansion or its alternate.
pub fn two_representations(n_max: u64) -> CheckOutcome {
    let mut t = Tally::new("two_representations");
    let mut reps: BTreeMap<(u64, u64), Vec<Vec<u64>>> = BTreeMap::new();
    // terms never exceed the continuant, so a uniform bound of n_max sees all
    let all = BoundParameter::new(n_max.max(2)).expect("n_max >= 2");
    visit_sequences(n_max, all, Constraint::Uniform, &mut |terms, _| {
        if terms != [1] {
            let s = PartialQuotientSeq::new(terms.to_vec()).expect("valid terms");
            let c = convergent::<u64>(&s).expect("small continuant");
            reps.entry((*c.numerator(), *c.denominator()))
                .or_default()
                .push(terms.to_vec());
        }
    });
    for (k, n) in coprime_pairs(n_max) {
        let f = ReducedFraction::new(k, n).expect("coprime pair");
        let canonical = expand(&f).expect("small fraction");
        let alternate = alternate_rep(&canonical).expect("k/n < 1");
        let mut expected = vec![canonical.into_terms(), alternate.into_terms()];
        expected.sort();
        let mut found = reps.remove(&(k, n)).unwrap_or_default();
        found.sort();
        t.record(found == expected);
    }
    t.record(reps.is_empty());
    t.finish()
}

fn all_sequences(max_term: u64, max_len: usize, f: &mut dyn FnMut(&[u64])) {
    fn go(prefix: &mut Vec<u64>, max_term: u64, max_len: usize, f: &mut dyn FnMut(&[u64])) {
        if !prefix.is_empty() {
            f(prefix);
        }
        if prefix.len() == max_len {
            return;
        }
        for a in 1..=max_term {
            prefix.push(a);
            go(prefix, max_term, max_len, f);
            prefix.pop();
        }
    }
    go(&mut Vec::new(), max_term, max_len, f);
}

/// `K(y, c_1..c_r) = y K(c_1..c_r) + K(c_2..c_r)` for entries at most 4.
pub fn recursion_identity(max_r: usize) -> CheckOutcome {
    let mut t = Tally::new("recursion_identity");
    all_sequences(4, max_r + 1, &mut |terms| {
        if terms.len() < 2 {
            return;
        }
        let k = |ts: &[u64]| -> BigUint {
            crate::cf::continuant_of_terms(ts).expect("unbounded")
        };
        let y = terms[0];
        t.record(k(terms) == k(&terms[1..]) * y + k(&terms[2..]));
    });
    t.finish()
}

/// Traces are nondecreasing, strictly increasing from `q_2`, and appending
/// never lowers the continuant.
pub fn trace_monotone(n_max: u64) -> CheckOutcome {
    let mut t = Tally::new("trace_monotone");
    for (k, n) in coprime_pairs(n_max) {
        let s = expand(&ReducedFraction::new(k, n).expect("coprime")).expect("small");
        let tr = continuant_trace::<u64>(&s).expect("small");
        let q = tr.values();
        let ok = q.windows(2).all(|w| w[0] <= w[1])
            && q.windows(2).skip(1).all(|w| w[0] < w[1])
            && (1..=3).all(|a| {
                continuant::<u64>(&s.append(a).expect("positive")).is_ok_and(|c| c >= n)
            });
        t.record(ok);
    }
    t.finish()
}

/// Every sequence of length `<= max_len`, terms `<= 6`, bounded in average
/// by 2 has continuant at most `K(2, ..., 2)`, and shifting reaches a
/// uniformly bounded sequence without lowering the continuant.
pub fn uniform_is_maximal(max_len: usize) -> Result<CheckOutcome> {
    let mut t = Tally::new("uniform_is_maximal");
    let mut failure = None;
    walk_bounded(&mut Vec::new(), max_len, 6, 2, &mut |terms| {
        let s = PartialQuotientSeq::new(terms.to_vec()).expect("valid terms");
        let k: BigUint = continuant(&s).expect("unbounded");
        let cap: BigUint = uniform_continuant(b2(), terms.len()).expect("unbounded");
        let ok = match normalize(&s, b2()) {
            Ok((out, steps)) => {
                steps.iter().all(|st| {
                    st.continuant_after >= st.continuant_before
                        && is_avg_bounded(&st.after, b2())
                        && st.after.sum() == st.before.sum()
                        && st.after.len() == st.before.len()
                }) && out.terms().iter().all(|&a| a <= 2)
                    && continuant::<BigUint>(&out).is_ok_and(|c| c >= k)
            }
            Err(e) => {
                failure.get_or_insert(e);
                false
            }
        };
        t.record(ok && k <= cap);
    });
    match failure {
        Some(e) if e.is_internal() => Err(e),
        _ => Ok(t.finish()),
    }
}

/// Visits sequences of length `1..=max_len` with terms `<= max_term` whose
/// prefix sums stay at or below `b t`.
pub(crate) fn walk_bounded(
    prefix: &mut Vec<u64>,
    max_len: usize,
    max_term: u64,
    b: u64,
    f: &mut dyn FnMut(&[u64]),
) {
    if !prefix.is_empty() {
        f(prefix);
    }
    if prefix.len() == max_len {
        return;
    }
    let t = prefix.len() as u64 + 1;
    let top = (b * t - prefix.iter().sum::<u64>()).min(max_term);
    for a in 1..=top {
        prefix.push(a);
        walk_bounded(prefix, max_len, max_term, b, f);
        prefix.pop();
    }
}

/// `F_{m+1} <= phi_B^{m+1}` at 30 significant digits, `B` in 2..=5.
pub fn uniform_growth_bound(max_m: usize) -> Result<CheckOutcome> {
    let mut t = Tally::new("uniform_growth_bound");
    for bound in bounds_2_to_5() {
        for m in 1..=max_m {
            t.record(uniform_bound_holds(bound, m)?);
        }
    }
    Ok(t.finish())
}

/// `K(B x m)` from the recurrence agrees with the explicit continuant.
pub fn uniform_agreement(max_m: usize) -> Result<CheckOutcome> {
    let mut t = Tally::new("uniform_agreement");
    for bound in bounds_2_to_5() {
        for m in 1..=max_m {
            let explicit: BigUint =
                continuant(&PartialQuotientSeq::new(vec![bound.get(); m])?)?;
            t.record(uniform_continuant::<BigUint>(bound, m)? == explicit);
        }
    }
    Ok(t.finish())
}

pub fn tail_identity(max: usize) -> Result<CheckOutcome> {
    let mut t = Tally::new("tail_identity");
    for bound in bounds_2_to_5() {
        for k in 1..=max {
            for x in 1..=max as u64 {
                t.record(tail_identity_check(bound, k, x)?);
            }
        }
    }
    Ok(t.finish())
}

/// `F_{m+1} <= n < F_{m+2}` for the returned `m`, whenever `n >= B`.
pub fn admissible_inverse(n_max: u64) -> Result<CheckOutcome> {
    let mut t = Tally::new("admissible_inverse");
    for bound in bounds_2_to_5() {
        for n in bound.get()..=n_max {
            let m = max_admissible_length(bound, &n)?;
            let lo: u64 = pell_like(bound, m + 1)?;
            let hi: u64 = pell_like(bound, m + 2)?;
            t.record(lo <= n && n < hi);
        }
    }
    Ok(t.finish())
}

/// Length counts against brute force, and against `C_{m+1}` for `B = 2`.
pub fn length_count_oracle(max_m: usize) -> Result<CheckOutcome> {
    let mut t = Tally::new("length_count_oracle");
    let mut brute = vec![0u64; max_m + 1];
    walk_bounded(&mut Vec::new(), max_m, u64::MAX, 2, &mut |terms| {
        brute[terms.len()] += 1;
    });
    for (m, &expected) in brute.iter().enumerate().skip(1) {
        let counted = count_avg_bounded_length(m, b2())?;
        t.record(counted == BigUint::from(expected) && counted == catalan(m as u64 + 1));
    }
    Ok(t.finish())
}

/// Lower bound `max(prod a_i, Fib(m + 1))` for `K(a_1..a_m)`; both factors
/// only grow as terms are appended.
fn continuant_floor(terms: &[u64]) -> u128 {
    let product = terms
        .iter()
        .try_fold(1u128, |acc, &a| acc.checked_mul(u128::from(a)))
        .unwrap_or(u128::MAX);
    let (mut f0, mut f1) = (1u128, 1u128);
    for _ in 1..terms.len() {
        (f0, f1) = (f1, f0.saturating_add(f1));
    }
    product.max(f1)
}

/// Naive count: walk sequences up to length `2 ceil(log2 n) + 4`, pruning
/// only on [`continuant_floor`], and test each one from scratch.
pub fn naive_count(n: u64, bound: BoundParameter, constraint: Constraint) -> u64 {
    fn go(
        prefix: &mut Vec<u64>,
        cap: usize,
        n: u64,
        bound: BoundParameter,
        constraint: Constraint,
        count: &mut u64,
    ) {
        if !prefix.is_empty() {
            let s = PartialQuotientSeq::new(prefix.clone()).expect("positive terms");
            let shape_ok = match constraint {
                Constraint::Average => is_avg_bounded(&s, bound),
                Constraint::Uniform => prefix.iter().all(|&a| a <= bound.get()),
            };
            if shape_ok && continuant::<BigUint>(&s).is_ok_and(|q| q <= BigUint::from(n)) {
                *count += 1;
            }
        }
        if prefix.len() == cap {
            return;
        }
        for a in 1..=n {
            prefix.push(a);
            if continuant_floor(prefix) > u128::from(n) {
                prefix.pop();
                break;
            }
            go(prefix, cap, n, bound, constraint, count);
            prefix.pop();
        }
    }
    let log2 = 64 - (n.max(1) - 1).leading_zeros() as usize;
    let cap = 2 * log2 + 4;
    let mut count = 0;
    go(&mut Vec::new(), cap, n, bound, constraint, &mut count);
    count
}

/// Pruned search equals the naive count for every `n <= n_max` up to 60,
/// then on a sparse grid up to `n_max`.
pub fn pruning_soundness(n_max: u64) -> Result<CheckOutcome> {
    let mut t = Tally::new("pruning_soundness");
    let grid = (1..=n_max.min(60)).chain([100, 250, 500].into_iter().filter(|&n| n <= n_max));
    for n in grid {
        for constraint in [Constraint::Average, Constraint::Uniform] {
            let pruned = count_by_continuant(&n, b2(), constraint, Shard::whole())?;
            t.record(pruned == BigUint::from(naive_count(n, b2(), constraint)));
        }
    }
    Ok(t.finish())
}

/// Sharded counts add up to the single-shard count.
pub fn shard_merge(n: u64) -> Result<CheckOutcome> {
    let mut t = Tally::new("shard_merge");
    for constraint in [Constraint::Average, Constraint::Uniform] {
        let whole = count_by_continuant(&n, b2(), constraint, Shard::whole())?;
        for shards in [2, 3, 8, 64] {
            let mut sum = BigUint::default();
            for shard in Shard::all(shards)? {
                sum += count_by_continuant(&n, b2(), constraint, shard)?;
            }
            t.record(sum == whole);
        }
    }
    Ok(t.finish())
}

/// `S̄_n(2) >= S_n(2)` and both counts nondecreasing along the grid.
pub fn count_dominance(grid: &[u64]) -> Result<CheckOutcome> {
    let mut t = Tally::new("count_dominance");
    let mut last = (BigUint::default(), BigUint::default());
    for &n in grid {
        let avg = count_avg_bounded_by_continuant(&n, b2())?;
        let uni = count_uniform_bounded_by_continuant(&n, b2())?;
        t.record(avg >= uni && avg >= last.0 && uni >= last.1);
        last = (avg, uni);
    }
    Ok(t.finish())
}

/// Zero sub-claim violations for every `n` in `9..=n_max`.
pub fn corollary_chain(n_max: u64) -> Result<CheckOutcome> {
    let mut t = Tally::new("corollary_chain");
    for n in 9..=n_max {
        let claims = corollary_claims(n)?;
        t.record(claims.violations.is_empty());
    }
    Ok(t.finish())
}

/// Each witness revalidates, and each omitted `n` has no `k` with either
/// representation bounded in average by 2.
pub fn witness_survey(n_max: u64) -> Result<CheckOutcome> {
    let mut t = Tally::new("witness_survey");
    let witnesses = f_set(n_max, b2())?;
    let found: BTreeMap<u64, &WitnessRecord<u64>> = witnesses.iter().map(|w| (w.n, w)).collect();
    for n in 2..=n_max {
        let ok = match found.get(&n) {
            Some(w) => w.revalidate(b2()),
            None => (1..n).filter(|k| k.gcd(&n) == 1).all(|k| {
                let s = expand(&ReducedFraction::new(k, n).expect("coprime")).expect("small");
                !is_avg_bounded(&s, b2())
                    && !alternate_rep(&s).is_ok_and(|alt| is_avg_bounded(&alt, b2()))
            }),
        };
        t.record(ok);
    }
    Ok(t.finish())
}
