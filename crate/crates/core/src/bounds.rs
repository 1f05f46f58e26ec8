//! Upper and lower bounds on van der Waerden numbers expressed through the
//! base-`r` exponent `n` of `W(r, k)`.
//!
//! Every inequality that has an exact integer form is decided in that form:
//! powers are compared through exponents, square roots through squares. Only
//! the real-valued factor `a(r, k) = (n + 1) ln r / ln k` and the logarithm
//! columns use floating point.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::expansion::{exponent_n, ExpansionError};
use crate::registry::{Registry, VdwRecord};

/// Relative tolerance used for the real-valued identities.
pub const REAL_TOLERANCE: f64 = 1e-9;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum BoundsError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("no registry record for W({r}, {k})")]
    MissingRecord { r: u64, k: u64 },
    #[error(transparent)]
    Expansion(#[from] ExpansionError),
}

/// The symbolic power `base^exp`. It is only turned into an integer on request
/// and only when small.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PowerBound {
    pub base: u64,
    pub exp: u64,
}

/// Largest bit length [`PowerBound::to_biguint`] will produce.
pub const MAX_MATERIALIZED_BITS: u64 = 4096;

impl PowerBound {
    pub fn new(base: u64, exp: u64) -> Result<Self, BoundsError> {
        if base < 2 {
            return Err(BoundsError::Domain(format!("power base must be at least 2, got {base}")));
        }
        Ok(Self { base, exp })
    }

    /// `w < base^exp`, decided as `exponent_n(w, base) < exp`.
    pub fn exceeds(&self, w: u64) -> bool {
        match exponent_n(w, self.base) {
            Ok(n) => u64::from(n) < self.exp,
            // w = 0 is below every power.
            Err(_) => true,
        }
    }

    /// `base^exp <= w`.
    pub fn at_most(&self, w: u64) -> bool {
        !self.exceeds(w)
    }

    pub fn to_u128(&self) -> Option<u128> {
        u32::try_from(self.exp)
            .ok()
            .and_then(|e| u128::from(self.base).checked_pow(e))
    }

    /// The exact value, unless it would need more than [`MAX_MATERIALIZED_BITS`] bits.
    pub fn to_biguint(&self) -> Option<BigUint> {
        let bits_per_factor = 64 - u64::from(self.base.leading_zeros());
        if self.exp.saturating_mul(bits_per_factor) > MAX_MATERIALIZED_BITS {
            return None;
        }
        Some(BigUint::from(self.base).pow(self.exp as u32))
    }
}

impl fmt::Display for PowerBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{{{}}}", self.base, self.exp)
    }
}

/// `r^(n+1)` with `n = exponent_n(w, r)`, so that `r^n <= w < r^(n+1)`.
pub fn exponent_upper_bound(w: u64, r: u64) -> Result<PowerBound, BoundsError> {
    if r < 2 {
        return Err(BoundsError::Domain(format!("r must be at least 2, got {r}")));
    }
    if w <= r {
        return Err(BoundsError::Domain(format!("need W > r, got W = {w}, r = {r}")));
    }
    let n = exponent_n(w, r)?;
    PowerBound::new(r, u64::from(n) + 1)
}

/// Both sides of the equivalence `n < k^2 - 1  <=>  k > sqrt(n + 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareTest {
    /// `n < k^2 - 1`
    pub lhs: bool,
    /// `k^2 > n + 1`
    pub rhs: bool,
}

impl SquareTest {
    pub fn agree(&self) -> bool {
        self.lhs == self.rhs
    }

    pub fn holds(&self) -> bool {
        self.lhs && self.rhs
    }
}

pub fn square_test(n: u64, k: u64) -> SquareTest {
    let k2 = i128::from(k) * i128::from(k);
    SquareTest {
        lhs: i128::from(n) < k2 - 1,
        rhs: k2 > i128::from(n) + 1,
    }
}

/// `w < r^(k^2)` without materializing the power.
pub fn w_lt_r_pow_k_squared(w: u64, r: u64, k: u64) -> Result<bool, BoundsError> {
    let n = exponent_n(w, r)?;
    Ok(u128::from(n) < u128::from(k) * u128::from(k))
}

fn check_rk(r: u64, k: u64) -> Result<(), BoundsError> {
    if r < 2 {
        return Err(BoundsError::Domain(format!("r must be at least 2, got {r}")));
    }
    if k < 2 {
        return Err(BoundsError::Domain(format!(
            "a(r, k) needs k >= 2 (ln k = 0 for k = {k})"
        )));
    }
    Ok(())
}

/// `a(r, k) = (n + 1) ln r / ln k`.
pub fn a_of(n: u64, r: u64, k: u64) -> Result<f64, BoundsError> {
    check_rk(r, k)?;
    Ok((n as f64 + 1.0) * (r as f64).ln() / (k as f64).ln())
}

/// Solves `a = (n + 1) ln r / ln k` for `n`.
pub fn n_from_a(a: f64, r: u64, k: u64) -> Result<f64, BoundsError> {
    check_rk(r, k)?;
    if a.is_nan() || a <= 0.0 {
        return Err(BoundsError::Domain(format!("a must be positive, got {a}")));
    }
    Ok(a * (k as f64).ln() / (r as f64).ln() - 1.0)
}

/// Solves `a = (n + 1) ln r / ln k` for `k`.
pub fn k_from_a(a: f64, r: u64, n: u64) -> Result<f64, BoundsError> {
    if r < 2 {
        return Err(BoundsError::Domain(format!("r must be at least 2, got {r}")));
    }
    if a.is_nan() || a <= 0.0 {
        return Err(BoundsError::Domain(format!("a must be positive, got {a}")));
    }
    Ok((r as f64).powf((n as f64 + 1.0) / a))
}

pub fn relative_eq(x: f64, y: f64, tol: f64) -> bool {
    (x - y).abs() <= tol * x.abs().max(y.abs()).max(1.0)
}

/// The ordering of `r` against `k` and whether `a` sits on the matching side of `n + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Trichotomy {
    pub r_vs_k: Ordering,
    pub holds: bool,
}

pub fn trichotomy_check(a: f64, n: u64, r: u64, k: u64) -> Trichotomy {
    let n1 = n as f64 + 1.0;
    let r_vs_k = r.cmp(&k);
    let holds = match r_vs_k {
        Ordering::Less => a < n1,
        Ordering::Equal => relative_eq(a, n1, REAL_TOLERANCE),
        Ordering::Greater => a > n1,
    };
    Trichotomy { r_vs_k, holds }
}

/// `n > ln k / ln r - 1`, in the exact form `k < r^(n+1)`.
pub fn condition1_check(n: u64, r: u64, k: u64) -> bool {
    if r < 2 {
        return false;
    }
    match n.checked_add(1) {
        Some(exp) => PowerBound { base: r, exp }.exceeds(k),
        None => true,
    }
}

/// The finite form of the `k^(1/(n+1)) = O(r)` condition: again `k < r^(n+1)`.
pub fn condition2_check(n: u64, r: u64, k: u64) -> bool {
    condition1_check(n, r, k)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SqrtImplication {
    /// `ln r > a ln(n + 1) / (2 (n + 1))`
    pub premise: bool,
    /// `k > sqrt(n + 1)`, i.e. `k^2 > n + 1`
    pub conclusion: bool,
}

impl SqrtImplication {
    /// The implication `premise => conclusion`.
    pub fn holds(&self) -> bool {
        !self.premise || self.conclusion
    }
}

pub fn sqrt_implication_check(r: u64, k: u64, n: u64, a: f64) -> SqrtImplication {
    let n1 = n as f64 + 1.0;
    let (lhs, rhs) = ((r as f64).ln(), a * n1.ln() / (2.0 * n1));
    // Sides equal up to rounding are not strictly ordered; with the exact
    // a(r, k) they coincide precisely when k^2 = n + 1.
    let premise = lhs > rhs && !relative_eq(lhs, rhs, REAL_TOLERANCE);
    let conclusion = u128::from(k) * u128::from(k) > u128::from(n) + 1;
    SqrtImplication {
        premise,
        conclusion,
    }
}

/// Finite stand-in for the asymptotic claim: every record has `k^2 > n + 1`.
pub fn all_k_squared_exceed_exponent(records: &[VdwRecord]) -> bool {
    records.iter().all(|rec| match exponent_n(rec.w, rec.r) {
        Ok(n) => u128::from(rec.k) * u128::from(rec.k) > u128::from(n) + 1,
        Err(_) => false,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinaryPowerCheck {
    /// `w < 2^(n+1)` and `n + 1 <= k^2`.
    pub holds: bool,
    /// `n + 1 < k^2`.
    pub strict: bool,
}

/// `W(2, k) < 2^(n+1) <= 2^(k^2)`.
pub fn binary_power_check(w: u64, k: u64) -> Result<BinaryPowerCheck, BoundsError> {
    let n = u64::from(exponent_n(w, 2)?);
    let k2 = u128::from(k) * u128::from(k);
    let upper = PowerBound { base: 2, exp: n + 1 };
    Ok(BinaryPowerCheck {
        holds: upper.exceeds(w) && u128::from(n + 1) <= k2,
        strict: u128::from(n + 1) < k2,
    })
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeCaseReport {
    pub p: u64,
    pub k: u64,
    /// `p 2^p`
    pub lower: BigUint,
    /// `2^((p+1)^2)`
    pub upper: PowerBound,
    pub w: u64,
    pub n: u32,
    /// `p + 1 > sqrt(n + 1)`
    pub premise_ok: bool,
    /// `p 2^p < w < 2^((p+1)^2)`
    pub interval_ok: bool,
}

/// Checks `p 2^p < W(2, p + 1) < 2^((p+1)^2)` against the registry value.
pub fn prime_case(p: u64, registry: &Registry) -> Result<PrimeCaseReport, BoundsError> {
    if p >= 1 << 32 {
        return Err(BoundsError::Domain(format!("p must be below 2^32, got {p}")));
    }
    if !is_prime(p) {
        return Err(BoundsError::NotPrime(p));
    }
    let k = p + 1;
    let rec = registry
        .lookup(2, k)
        .ok_or(BoundsError::MissingRecord { r: 2, k })?;
    let w = rec.w;
    let n = exponent_n(w, 2)?;
    let lower = BigUint::from(p) << p;
    let upper = PowerBound::new(2, k * k)?;
    let premise_ok = u128::from(k) * u128::from(k) > u128::from(n) + 1;
    let interval_ok = lower < BigUint::from(w) && u64::from(n) < k * k;
    Ok(PrimeCaseReport {
        p,
        k,
        lower,
        upper,
        w,
        n,
        premise_ok,
        interval_ok,
    })
}

/// A tower level, saturating once it passes `u64::MAX`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Level {
    Finite(u64),
    Huge,
}

fn two_pow(level: Level) -> Level {
    match level {
        Level::Finite(e) if e < 64 => Level::Finite(1 << e),
        _ => Level::Huge,
    }
}

/// Does the five-level tower `2^2^2^2^2^(k+9)` dominate `2^(k^2)`?
///
/// Compares exponents: `k^2` against `2^2^2^2^(k+9)`.
pub fn tower_bound_dominates(k: u64) -> Result<bool, BoundsError> {
    if !(1..=64).contains(&k) {
        return Err(BoundsError::Domain(format!("k must lie in [1, 64], got {k}")));
    }
    let mut level = Level::Finite(k + 9);
    for _ in 0..4 {
        level = two_pow(level);
    }
    Ok(Level::Finite(k * k) <= level)
}

/// Every derived quantity and verdict for one `(r, k, W)` triple.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub r: u64,
    pub k: u64,
    pub w: u64,
    pub n: u32,
    pub a: Option<f64>,
    pub log_r: f64,
    pub log_k: f64,
    pub upper: PowerBound,
    pub bracket_ok: bool,
    pub square_test_ok: bool,
    pub cond1_ok: bool,
    pub cond2_ok: bool,
    pub trichotomy_ok: bool,
    pub sqrt_premise_ok: bool,
    pub sqrt_conclusion_ok: bool,
    pub k_gt_sqrt_ok: bool,
    pub w_lt_r_pow_k2: bool,
    pub discrepancy_notes: Vec<String>,
}

impl BoundReport {
    pub fn compute(r: u64, k: u64, w: u64) -> Result<Self, BoundsError> {
        if r < 2 {
            return Err(BoundsError::Domain(format!("r must be at least 2, got {r}")));
        }
        let n = exponent_n(w, r)?;
        let n64 = u64::from(n);
        let upper = PowerBound::new(r, n64 + 1)?;
        let bracket_ok = upper.exceeds(w) && PowerBound::new(r, n64)?.at_most(w);
        let sq = square_test(n64, k);
        let a = if k >= 2 { Some(a_of(n64, r, k)?) } else { None };
        let (trichotomy_ok, implication) = match a {
            Some(a) => (
                trichotomy_check(a, n64, r, k).holds,
                sqrt_implication_check(r, k, n64, a),
            ),
            None => (
                false,
                SqrtImplication {
                    premise: false,
                    conclusion: sq.rhs,
                },
            ),
        };
        Ok(Self {
            r,
            k,
            w,
            n,
            a,
            log_r: (r as f64).ln(),
            log_k: (k as f64).ln(),
            upper,
            bracket_ok,
            square_test_ok: sq.holds() && sq.agree(),
            cond1_ok: condition1_check(n64, r, k),
            cond2_ok: condition2_check(n64, r, k),
            trichotomy_ok,
            sqrt_premise_ok: implication.premise,
            sqrt_conclusion_ok: implication.conclusion,
            k_gt_sqrt_ok: sq.rhs,
            w_lt_r_pow_k2: w_lt_r_pow_k_squared(w, r, k)?,
            discrepancy_notes: Vec::new(),
        })
    }

    /// The implication `premise => k^2 > n + 1`.
    pub fn sqrt_implication_ok(&self) -> bool {
        !self.sqrt_premise_ok || self.sqrt_conclusion_ok
    }
}
