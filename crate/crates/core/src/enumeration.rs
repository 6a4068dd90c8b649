//! Exact counts of bounded sequences.
//!
//! * by length: sequences `(a_1, ..., a_m)` whose prefix sums stay at or
//!   below `B t` (a ballot-style count, Catalan numbers for `B = 2`);
//! * by continuant: every sequence of any length `m >= 1` with continuant at
//!   most `n`, bounded in average (`S̄_n(B)`) or uniformly (`S_n(B)`).
//!
//! The continuant count walks the tree of prefixes carrying
//! `(B j - sum, q_{j-1}, q_j)` and prunes as soon as the continuant passes
//! `n`, which is sound because appending a term never lowers it.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::cf::{continuant_of_terms, BoundParameter};
use crate::error::{CfError, Result};
use crate::growth::max_admissible_length;
use crate::parallel::Shard;
use crate::scalar::Scalar;

/// Minimum number of independent subtrees a counting run is split into.
pub const SEARCH_TASKS: usize = 256;

/// Which per-sequence constraint the continuant search enforces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Constraint {
    /// Every prefix mean at most `B`.
    Average,
    /// Every term at most `B`.
    Uniform,
}

/// Catalan number `C_j = binom(2j, j) / (j + 1)`.
pub fn catalan(j: u64) -> BigUint {
    // C_{i+1} = C_i * 2(2i + 1) / (i + 2), exact at every step
    let mut c = BigUint::one();
    for i in 0..j {
        c = c * (2 * (2 * i + 1)) / (i + 2);
    }
    c
}

/// Number of positive length-`m` sequences with `sum_{i<=t} a_i <= B t`.
///
/// Counts by the slack `B t - sum_{i<=t} a_i`: from slack `s` the next term
/// may be anything in `1..=s + B`, leaving slack `s + B - a`.
pub fn count_avg_bounded_length(m: usize, bound: BoundParameter) -> Result<BigUint> {
    if m == 0 {
        return Err(CfError::OutOfRange("length must be at least 1".into()));
    }
    let b = usize::try_from(bound.get())
        .map_err(|_| CfError::OutOfRange("bound too large for a length count".into()))?;
    let width = m
        .checked_mul(b - 1)
        .and_then(|w| w.checked_add(1))
        .ok_or_else(|| CfError::OutOfRange("length count table too large".into()))?;
    let mut ways = vec![BigUint::zero(); width];
    ways[0] = BigUint::one();
    let mut reach = 0;
    for _ in 0..m {
        // new slack s' is reachable from any s >= s' - (B - 1)
        let mut next = vec![BigUint::zero(); width];
        let mut suffix = BigUint::zero();
        let new_reach = reach + b - 1;
        let mut sums = vec![BigUint::zero(); reach + 2];
        for s in (0..=reach).rev() {
            suffix += &ways[s];
            sums[s] = suffix.clone();
        }
        for (s_new, slot) in next.iter_mut().enumerate().take(new_reach + 1) {
            let lo = s_new.saturating_sub(b - 1);
            if lo <= reach {
                *slot = sums[lo].clone();
            }
        }
        ways = next;
        reach = new_reach;
    }
    Ok(ways.into_iter().sum())
}

#[derive(Clone, Debug)]
struct Node<T> {
    slack: u64,
    q_prev: T,
    q: T,
}

struct Search<'a, T> {
    limit: &'a T,
    bound: u64,
    constraint: Constraint,
}

impl<T: Scalar> Search<'_, T> {
    fn root(&self) -> Node<T> {
        Node {
            slack: 0,
            q_prev: T::zero(),
            q: T::one(),
        }
    }

    /// `(a_hi, a_rec)`: terms `1..=a_hi` give sequences within the limit,
    /// and terms `1..=a_rec` (a subset) leave room for a further term.
    fn child_ranges(&self, node: &Node<T>) -> (u64, u64) {
        let by_constraint = match self.constraint {
            Constraint::Average => node.slack.saturating_add(self.bound),
            Constraint::Uniform => self.bound,
        };
        let (n, q, qp) = (self.limit, &node.q, &node.q_prev);
        if *qp > *n {
            return (0, 0);
        }
        let by_limit = ((n.clone() - qp.clone()) / q.clone()).saturating_u64();
        let a_hi = by_constraint.min(by_limit);
        // the cheapest grandchild appends 1: a q + q_prev + q <= n
        let used = qp.clone() + q.clone();
        let a_rec = if used > *n {
            0
        } else {
            ((n.clone() - used) / q.clone()).saturating_u64().min(a_hi)
        };
        (a_hi, a_rec)
    }

    fn child(&self, node: &Node<T>, a: u64) -> Node<T> {
        let q = T::mul_add(a, &node.q, &node.q_prev).expect("child continuant is below the limit");
        Node {
            slack: match self.constraint {
                Constraint::Average => node.slack + self.bound - a,
                Constraint::Uniform => 0,
            },
            q_prev: node.q.clone(),
            q,
        }
    }

    /// Number of proper extensions of `node` within the limit.
    fn count_below(&self, node: &Node<T>) -> u128 {
        let (a_hi, a_rec) = self.child_ranges(node);
        let mut total = u128::from(a_hi);
        for a in 1..=a_rec {
            total += self.count_below(&self.child(node, a));
        }
        total
    }

    /// Splits the tree into at least `min_tasks` subtrees where possible.
    /// Returns the number of sequences above the frontier and the frontier.
    fn plan(&self, min_tasks: usize) -> (u128, Vec<Node<T>>) {
        let mut head = 0u128;
        let mut tasks = vec![self.root()];
        while !tasks.is_empty() && tasks.len() < min_tasks {
            let mut next = Vec::new();
            for node in &tasks {
                let (a_hi, a_rec) = self.child_ranges(node);
                head += u128::from(a_hi);
                next.extend((1..=a_rec).map(|a| self.child(node, a)));
            }
            tasks = next;
        }
        (head, tasks)
    }

    fn count(&self, shard: Shard) -> u128 {
        let (head, tasks) = self.plan(SEARCH_TASKS);
        let below: u128 = tasks
            .par_iter()
            .enumerate()
            .filter(|(i, _)| shard.owns(*i))
            .map(|(_, node)| self.count_below(node))
            .sum();
        if shard.is_lead() {
            head + below
        } else {
            below
        }
    }
}

fn run_count<T: Scalar>(n: &T, bound: BoundParameter, constraint: Constraint, shard: Shard) -> u128 {
    Search {
        limit: n,
        bound: bound.get(),
        constraint,
    }
    .count(shard)
}

/// Shard `shard` of the count of sequences with continuant at most `n`.
/// Summing the results over all shards of a split gives the full count.
pub fn count_by_continuant<T: Scalar>(
    n: &T,
    bound: BoundParameter,
    constraint: Constraint,
    shard: Shard,
) -> Result<BigUint> {
    if n.is_zero() {
        return Err(CfError::OutOfRange("n must be at least 1".into()));
    }
    // q <= n throughout, so u64 arithmetic cannot overflow when n fits
    let total = match n.to_u64() {
        Some(small) => run_count(&small, bound, constraint, shard),
        None => run_count(&n.to_natural(), bound, constraint, shard),
    };
    Ok(BigUint::from(total))
}

/// `S̄_n(B)`: sequences bounded in average by `B` with continuant at most `n`.
pub fn count_avg_bounded_by_continuant<T: Scalar>(n: &T, bound: BoundParameter) -> Result<BigUint> {
    count_by_continuant(n, bound, Constraint::Average, Shard::whole())
}

/// `S_n(B)`: sequences bounded uniformly by `B` with continuant at most `n`.
pub fn count_uniform_bounded_by_continuant<T: Scalar>(
    n: &T,
    bound: BoundParameter,
) -> Result<BigUint> {
    count_by_continuant(n, bound, Constraint::Uniform, Shard::whole())
}

/// Calls `visit(terms, continuant)` for every sequence with continuant at
/// most `n` satisfying `constraint`, in lexicographic depth-first order.
pub fn visit_sequences(
    n: u64,
    bound: BoundParameter,
    constraint: Constraint,
    visit: &mut dyn FnMut(&[u64], u64),
) {
    #[allow(clippy::too_many_arguments)]
    fn walk(
        prefix: &mut Vec<u64>,
        slack: u64,
        q_prev: u64,
        q: u64,
        n: u64,
        b: u64,
        constraint: Constraint,
        visit: &mut dyn FnMut(&[u64], u64),
    ) {
        let by_constraint = match constraint {
            Constraint::Average => slack + b,
            Constraint::Uniform => b,
        };
        let a_hi = by_constraint.min((n - q_prev) / q);
        for a in 1..=a_hi {
            let next = a * q + q_prev;
            prefix.push(a);
            visit(prefix, next);
            let child_slack = match constraint {
                Constraint::Average => slack + b - a,
                Constraint::Uniform => 0,
            };
            walk(prefix, child_slack, q, next, n, b, constraint, visit);
            prefix.pop();
        }
    }
    if n == 0 {
        return;
    }
    walk(&mut Vec::new(), 0, 0, 1, n, bound.get(), constraint, visit);
}

/// `ln(count) / ln(n)` rounded to 6 decimals; undefined for `n = 1`.
pub fn pointwise_exponent(count: &BigUint, n: &BigUint) -> Option<f64> {
    if *n <= BigUint::one() || count.is_zero() {
        return None;
    }
    Some(round6(count.ln() / n.ln()))
}

pub(crate) fn round6(x: f64) -> f64 {
    (x * 1e6).round() / 1e6
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CountRecord {
    pub n: BigUint,
    pub bound: BoundParameter,
    pub avg_count: BigUint,
    pub uniform_count: BigUint,
    pub avg_exponent: Option<f64>,
    pub uniform_exponent: Option<f64>,
}

impl CountRecord {
    fn new(n: BigUint, bound: BoundParameter, avg_count: BigUint, uniform_count: BigUint) -> Self {
        CountRecord {
            avg_exponent: pointwise_exponent(&avg_count, &n),
            uniform_exponent: pointwise_exponent(&uniform_count, &n),
            n,
            bound,
            avg_count,
            uniform_count,
        }
    }
}

fn check_grid<T: Scalar>(grid: &[T]) -> Result<()> {
    if grid.is_empty() {
        return Err(CfError::OutOfRange("grid must not be empty".into()));
    }
    if grid[0].is_zero() {
        return Err(CfError::OutOfRange("grid points must be at least 1".into()));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CfError::OutOfRange("grid must be strictly ascending".into()));
    }
    Ok(())
}

/// One [`CountRecord`] per grid point.
pub fn exponent_table<T: Scalar>(grid: &[T], bound: BoundParameter) -> Result<Vec<CountRecord>> {
    exponent_table_shard(grid, bound, Shard::whole())
}

/// Like [`exponent_table`] but with partial counts for one shard; summing
/// the counts of all shards row by row gives the full table.
pub fn exponent_table_shard<T: Scalar>(
    grid: &[T],
    bound: BoundParameter,
    shard: Shard,
) -> Result<Vec<CountRecord>> {
    check_grid(grid)?;
    grid.iter()
        .map(|n| {
            let avg = count_by_continuant(n, bound, Constraint::Average, shard)?;
            let uniform = count_by_continuant(n, bound, Constraint::Uniform, shard)?;
            Ok(CountRecord::new(n.to_natural(), bound, avg, uniform))
        })
        .collect()
}

/// Sums per-shard tables row by row and recomputes the exponents.
pub fn merge_tables(parts: &[Vec<CountRecord>]) -> Result<Vec<CountRecord>> {
    let Some(first) = parts.first() else {
        return Err(CfError::OutOfRange("nothing to merge".into()));
    };
    let mut merged = Vec::with_capacity(first.len());
    for (row, base) in first.iter().enumerate() {
        let mut avg = BigUint::zero();
        let mut uniform = BigUint::zero();
        for part in parts {
            let r = part
                .get(row)
                .filter(|r| r.n == base.n && r.bound == base.bound)
                .ok_or_else(|| CfError::OutOfRange("shard tables disagree".into()))?;
            avg += &r.avg_count;
            uniform += &r.uniform_count;
        }
        merged.push(CountRecord::new(base.n.clone(), base.bound, avg, uniform));
    }
    Ok(merged)
}

/// Least-squares slope of `ln(count)` against `ln(n)` over the records with
/// `n > 1`; needs two distinct points.
pub fn fitted_exponent(records: &[CountRecord]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = records
        .iter()
        .filter(|r| r.n > BigUint::one() && !r.avg_count.is_zero())
        .map(|r| (r.n.ln(), r.avg_count.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let len = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / len;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / len;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    (sxx > 0.0).then(|| round6(sxy / sxx))
}

/// Constructive lower bound for `S̄_n(2)`: every length-`m` sequence bounded
/// in average by 2 has continuant at most `K(2 x m) <= n`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LowerBoundCertificate {
    pub n: BigUint,
    pub m: usize,
    pub sequence_count: BigUint,
    pub implied_exponent: Option<f64>,
}

impl LowerBoundCertificate {
    /// Checks the continuants of up to `limit` counted sequences from each
    /// end of the lexicographic order against `n`.
    pub fn spot_verify(&self, limit: usize) -> bool {
        let within = |terms: &[u64]| {
            continuant_of_terms::<BigUint>(terms).is_ok_and(|q| q <= self.n)
        };
        [false, true].into_iter().all(|descending| {
            let mut budget = limit;
            walk_length(&mut Vec::with_capacity(self.m), self.m, 2, descending, &mut budget, &within)
        })
    }
}

/// Depth-first walk over length-`m` sequences bounded in average by `b`,
/// visiting at most `budget` of them. False as soon as `check` fails.
fn walk_length(
    prefix: &mut Vec<u64>,
    m: usize,
    b: u64,
    descending: bool,
    budget: &mut usize,
    check: &dyn Fn(&[u64]) -> bool,
) -> bool {
    if prefix.len() == m {
        *budget = budget.saturating_sub(1);
        return check(prefix);
    }
    let t = prefix.len() as u64 + 1;
    let top = b * t - prefix.iter().sum::<u64>();
    for i in 0..top {
        if *budget == 0 {
            break;
        }
        prefix.push(if descending { top - i } else { i + 1 });
        let ok = walk_length(prefix, m, b, descending, budget, check);
        prefix.pop();
        if !ok {
            return false;
        }
    }
    true
}

/// Certificate for `n >= 5`: the longest `m` with `K(2 x m) <= n` and the
/// number of length-`m` sequences bounded in average by 2.
pub fn lower_bound_certificate<T: Scalar>(n: &T) -> Result<LowerBoundCertificate> {
    let n = n.to_natural();
    if n < BigUint::from(5u8) {
        return Err(CfError::OutOfRange(
            "the certificate needs n >= 5".into(),
        ));
    }
    let bound = BoundParameter::default();
    let m = max_admissible_length(bound, &n)?;
    let sequence_count = count_avg_bounded_length(m, bound)?;
    Ok(LowerBoundCertificate {
        implied_exponent: pointwise_exponent(&sequence_count, &n),
        n,
        m,
        sequence_count,
    })
}
