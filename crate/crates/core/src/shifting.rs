//! Shifting a sequence bounded in average by `B` towards the all-`B`
//! sequence, one unit at a time, without decreasing its continuant.
//!
//! At the first index `t` with `a_t > B` one of two moves applies:
//!
//! * case I (`a_t >= B + 2` or `a_{t-1} < B`): move one unit from `a_t` to
//!   `a_{t-1}`;
//! * case II (`a_t = B + 1` after a run `a_s = .. = a_{t-1} = B` with
//!   `a_{s-1} < B`): move one unit from `a_t` to `a_{s-1}`.
//!
//! Both moves keep the sequence bounded in average and strictly decrease
//! `sum_j j a_j`, which bounds the number of steps. Case I usually raises the
//! continuant but can leave it unchanged, e.g. `(1, 1, 3) -> (1, 2, 2)`.

use num_bigint::BigUint;
use serde::Serialize;

use crate::cf::{continuant_natural, is_avg_bounded, BoundParameter, PartialQuotientSeq};
use crate::error::{CfError, Result};

/// Which move applies. Indices are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "case")]
pub enum ShiftCase {
    CaseI { t: usize },
    CaseII { s: usize, t: usize },
    Fixpoint,
}

impl ShiftCase {
    pub fn tag(&self) -> &'static str {
        match self {
            ShiftCase::CaseI { .. } => "CaseI",
            ShiftCase::CaseII { .. } => "CaseII",
            ShiftCase::Fixpoint => "Fixpoint",
        }
    }

    pub fn t(&self) -> Option<usize> {
        match *self {
            ShiftCase::CaseI { t } | ShiftCase::CaseII { t, .. } => Some(t),
            ShiftCase::Fixpoint => None,
        }
    }

    pub fn s(&self) -> Option<usize> {
        match *self {
            ShiftCase::CaseII { s, .. } => Some(s),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftStepReport {
    pub case: ShiftCase,
    pub before: PartialQuotientSeq,
    pub after: PartialQuotientSeq,
    pub continuant_before: BigUint,
    pub continuant_after: BigUint,
}

fn require_bounded(s: &PartialQuotientSeq, bound: BoundParameter) -> Result<()> {
    if is_avg_bounded(s, bound) {
        Ok(())
    } else {
        Err(CfError::NotAvgBounded(s.to_string(), bound.get()))
    }
}

/// Smallest 1-based `t` with `a_t > B`.
pub fn first_violation(s: &PartialQuotientSeq, bound: BoundParameter) -> Result<Option<usize>> {
    require_bounded(s, bound)?;
    Ok(first_violation_unchecked(s.terms(), bound.get()))
}

fn first_violation_unchecked(terms: &[u64], b: u64) -> Option<usize> {
    terms.iter().position(|&a| a > b).map(|i| i + 1)
}

pub fn classify(s: &PartialQuotientSeq, bound: BoundParameter) -> Result<ShiftCase> {
    require_bounded(s, bound)?;
    Ok(classify_unchecked(s.terms(), bound.get()))
}

fn classify_unchecked(a: &[u64], b: u64) -> ShiftCase {
    let Some(t) = first_violation_unchecked(a, b) else {
        return ShiftCase::Fixpoint;
    };
    // a_1 <= B follows from the first prefix bound
    debug_assert!(t >= 2);
    let at = a[t - 1];
    let prev = a[t - 2];
    if at >= b + 2 || prev < b {
        return ShiftCase::CaseI { t };
    }
    // a_t = B + 1 and a_{t-1} = B; walk back over the run of B's
    let mut s = t - 1;
    while s > 1 && a[s - 2] == b {
        s -= 1;
    }
    debug_assert!(s >= 2 && a[s - 2] < b);
    ShiftCase::CaseII { s, t }
}

/// Applies one shifting move.
pub fn shift_step(s: &PartialQuotientSeq, bound: BoundParameter) -> Result<ShiftStepReport> {
    let case = classify(s, bound)?;
    apply(s, case)
}

fn apply(s: &PartialQuotientSeq, case: ShiftCase) -> Result<ShiftStepReport> {
    let mut terms = s.terms().to_vec();
    let (receiver, t) = match case {
        ShiftCase::CaseI { t } => (t - 1, t),
        ShiftCase::CaseII { s, t } => (s - 1, t),
        ShiftCase::Fixpoint => return Err(CfError::Fixpoint),
    };
    terms[receiver - 1] += 1;
    terms[t - 1] -= 1;
    let after = PartialQuotientSeq::from_valid(terms);
    Ok(ShiftStepReport {
        case,
        continuant_before: continuant_natural(s),
        continuant_after: continuant_natural(&after),
        before: s.clone(),
        after,
    })
}

/// Runs shifting steps until every term is at most `B`.
///
/// The number of steps is capped at `sum_j j a_j` of the input; exceeding
/// the cap is reported as [`CfError::BudgetExceeded`].
pub fn normalize(
    s: &PartialQuotientSeq,
    bound: BoundParameter,
) -> Result<(PartialQuotientSeq, Vec<ShiftStepReport>)> {
    require_bounded(s, bound)?;
    let budget = s.weighted_sum();
    let mut current = s.clone();
    let mut steps = Vec::new();
    loop {
        let case = classify_unchecked(current.terms(), bound.get());
        if case == ShiftCase::Fixpoint {
            return Ok((current, steps));
        }
        if steps.len() as u128 >= budget {
            return Err(CfError::BudgetExceeded(budget));
        }
        let step = apply(&current, case)?;
        current = step.after.clone();
        steps.push(step);
    }
}
