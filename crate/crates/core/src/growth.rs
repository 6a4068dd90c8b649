//! Growth of the uniform continuant `K(B, ..., B)`.
//!
//! `F_0 = 0`, `F_1 = 1`, `F_k = B F_{k-1} + F_{k-2}` gives
//! `K(B, ..., B, x) = F_{k+1} x + F_k` with `k` copies of `B`, and in
//! particular `K(B x m) = F_{m+1}`. These grow like `phi_B^m` with
//! `phi_B = (B + sqrt(B^2 + 4)) / 2`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::cf::{continuant_of_terms, BoundParameter};
use crate::error::{CfError, Result};
use crate::scalar::Scalar;

/// Fractional digits carried by [`growth_root`].
pub const GROWTH_ROOT_SCALE: u32 = 40;

/// Significant digits used when checking `F_{m+1} <= phi_B^{m+1}`.
pub const BOUND_CHECK_DIGITS: u32 = 30;

/// `F_0, ..., F_K` for one bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PellLikeTable<T> {
    bound: BoundParameter,
    values: Vec<T>,
}

impl<T: Scalar> PellLikeTable<T> {
    /// Table up to and including `F_{k_max}`.
    pub fn build(bound: BoundParameter, k_max: usize) -> Result<Self> {
        let mut values = Vec::with_capacity(k_max + 1);
        values.push(T::zero());
        if k_max >= 1 {
            values.push(T::one());
        }
        for k in 2..=k_max {
            let next = T::mul_add(bound.get(), &values[k - 1], &values[k - 2])
                .ok_or(CfError::Overflow)?;
            values.push(next);
        }
        Ok(PellLikeTable { bound, values })
    }

    pub fn bound(&self) -> BoundParameter {
        self.bound
    }

    pub fn get(&self, k: usize) -> Option<&T> {
        self.values.get(k)
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }
}

/// `F_k` for the given bound.
pub fn pell_like<T: Scalar>(bound: BoundParameter, k: usize) -> Result<T> {
    let (mut prev, mut cur) = (T::zero(), T::one());
    if k == 0 {
        return Ok(prev);
    }
    for _ in 1..k {
        let next = T::mul_add(bound.get(), &cur, &prev).ok_or(CfError::Overflow)?;
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(cur)
}

/// `K(B, ..., B)` with `m >= 1` terms, i.e. `F_{m+1}`.
pub fn uniform_continuant<T: Scalar>(bound: BoundParameter, m: usize) -> Result<T> {
    if m == 0 {
        return Err(CfError::OutOfRange("uniform continuant needs m >= 1".into()));
    }
    pell_like(bound, m + 1)
}

/// Checks `K(B x k, x) = F_{k+1} x + F_k` with exact arithmetic.
pub fn tail_identity_check(bound: BoundParameter, k: usize, x: u64) -> Result<bool> {
    if k == 0 || x == 0 {
        return Err(CfError::OutOfRange("tail identity needs k >= 1 and x >= 1".into()));
    }
    let mut terms = vec![bound.get(); k];
    terms.push(x);
    let lhs: BigUint = continuant_of_terms(&terms)?;
    let f_k: BigUint = pell_like(bound, k)?;
    let f_k1: BigUint = pell_like(bound, k + 1)?;
    Ok(lhs == f_k1 * x + f_k)
}

/// Largest `m` with `K(B x m) <= n`; 0 when even `K(B) = B` exceeds `n`.
pub fn max_admissible_length<T: Scalar>(bound: BoundParameter, n: &T) -> Result<usize> {
    if n.is_zero() {
        return Err(CfError::OutOfRange("n must be at least 1".into()));
    }
    // invariant: cur = F_{m+1} <= n
    let (mut prev, mut cur) = (T::zero(), T::one());
    let mut m = 0;
    loop {
        match T::mul_add(bound.get(), &cur, &prev) {
            Some(next) if next <= *n => {
                prev = std::mem::replace(&mut cur, next);
                m += 1;
            }
            _ => return Ok(m),
        }
    }
}

/// Nonnegative decimal `mantissa / 10^scale`. Every operation truncates, so
/// a `Decimal` is always a lower bound for the real number it approximates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decimal {
    mantissa: BigUint,
    scale: u32,
}

impl Decimal {
    pub fn new(mantissa: BigUint, scale: u32) -> Self {
        Decimal { mantissa, scale }
    }

    pub fn mantissa(&self) -> &BigUint {
        &self.mantissa
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    /// Number of significant decimal digits in the mantissa.
    pub fn significant_digits(&self) -> u32 {
        if self.mantissa.is_zero() {
            0
        } else {
            self.mantissa.to_str_radix(10).len() as u32
        }
    }

    /// Keeps the leading `digits` significant digits, rounding down.
    pub fn truncate_significant(&self, digits: u32) -> Decimal {
        let have = self.significant_digits();
        if have <= digits {
            return self.clone();
        }
        let drop = have - digits;
        let unit = BigUint::from(10u8).pow(drop);
        Decimal {
            mantissa: &self.mantissa / &unit * &unit,
            scale: self.scale,
        }
    }

    /// Exact power; the scale multiplies.
    pub fn pow(&self, exp: u32) -> Decimal {
        Decimal {
            mantissa: self.mantissa.pow(exp),
            scale: self.scale * exp,
        }
    }

    /// Exact comparison against an integer.
    pub fn cmp_integer(&self, n: &BigUint) -> Ordering {
        let lifted = n * BigUint::from(10u8).pow(self.scale);
        self.mantissa.cmp(&lifted)
    }

    pub fn to_f64(&self) -> f64 {
        let s = self.to_string();
        s.parse().unwrap_or_else(|_| self.mantissa.to_f64().unwrap_or(f64::NAN))
    }
}

impl fmt::Display for Decimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = self.mantissa.to_str_radix(10);
        let scale = self.scale as usize;
        if scale == 0 {
            return f.write_str(&digits);
        }
        let padded = if digits.len() <= scale {
            format!("{}{}", "0".repeat(scale + 1 - digits.len()), digits)
        } else {
            digits
        };
        let (int, frac) = padded.split_at(padded.len() - scale);
        write!(f, "{int}.{frac}")
    }
}

/// `(B + sqrt(B^2 + 4)) / 2` with [`GROWTH_ROOT_SCALE`] fractional digits,
/// rounded down.
pub fn growth_root(bound: BoundParameter) -> Decimal {
    let b = BigUint::from(bound.get());
    let unit = BigUint::from(10u8).pow(GROWTH_ROOT_SCALE);
    let radicand = (&b * &b + 4u8) * &unit * &unit;
    let mantissa = (&b * &unit + radicand.sqrt()) / 2u8;
    Decimal::new(mantissa, GROWTH_ROOT_SCALE)
}

/// `F_{m+1} <= phi_B^{m+1}` where `phi_B` and its power are both truncated to
/// [`BOUND_CHECK_DIGITS`] significant digits.
pub fn uniform_bound_holds(bound: BoundParameter, m: usize) -> Result<bool> {
    let root = growth_root(bound).truncate_significant(BOUND_CHECK_DIGITS);
    let exp = u32::try_from(m + 1).map_err(|_| CfError::OutOfRange("m too large".into()))?;
    let rhs = root.pow(exp).truncate_significant(BOUND_CHECK_DIGITS);
    let lhs: BigUint = pell_like(bound, m + 1)?;
    Ok(rhs.cmp_integer(&lhs) != Ordering::Less)
}
