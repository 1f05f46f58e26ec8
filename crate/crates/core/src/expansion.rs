//! Exact base-`r` positional expansions.
//!
//! `N = b_n r^n + ... + b_1 r + b_0` with every `b_i` in `[0, r-1]` and the
//! leading digit `b_n` in `[1, r-1]`. The exponent `n` is found by repeated
//! integer division only; floating-point logarithms misplace it near exact
//! powers of `r`.

use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ExpansionError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid expansion: {0}")]
    Invariant(String),
}

/// Digits of an integer in base `base`, least significant first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Expansion {
    base: u64,
    digits: Vec<u64>,
}

impl Expansion {
    /// Builds an expansion from least-significant-first digits, checking every invariant.
    pub fn new(base: u64, digits: Vec<u64>) -> Result<Self, ExpansionError> {
        let e = Self { base, digits };
        e.validate()?;
        Ok(e)
    }

    fn validate(&self) -> Result<(), ExpansionError> {
        if self.base < 2 {
            return Err(ExpansionError::Invariant(format!(
                "base must be at least 2, got {}",
                self.base
            )));
        }
        let Some(&leading) = self.digits.last() else {
            return Err(ExpansionError::Invariant("no digits".into()));
        };
        if let Some((i, d)) = self
            .digits
            .iter()
            .enumerate()
            .find(|(_, &d)| d >= self.base)
        {
            return Err(ExpansionError::Invariant(format!(
                "digit {d} at power {i} is not below base {}",
                self.base
            )));
        }
        if leading == 0 {
            return Err(ExpansionError::Invariant(
                "leading digit must lie in [1, base-1]".into(),
            ));
        }
        Ok(())
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    /// `digits()[i]` is the coefficient of `base^i`.
    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    /// The exponent `n` of the leading term.
    pub fn exponent(&self) -> u32 {
        (self.digits.len() - 1) as u32
    }

    pub fn leading_digit(&self) -> u64 {
        *self.digits.last().expect("non-empty digits")
    }
}

/// Most significant digit first; digits of bases above ten are comma separated.
impl fmt::Display for Expansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.base > 10 { "," } else { "" };
        let rendered: Vec<String> = self.digits.iter().rev().map(|d| d.to_string()).collect();
        f.write_str(&rendered.join(sep))
    }
}

fn check_domain(n: u64, r: u64) -> Result<(), ExpansionError> {
    if n < 1 {
        return Err(ExpansionError::Domain(format!("N must be at least 1, got {n}")));
    }
    if r < 2 {
        return Err(ExpansionError::Domain(format!("base must be at least 2, got {r}")));
    }
    Ok(())
}

/// Expands `n` in base `r` by repeated division.
pub fn expand(n: u64, r: u64) -> Result<Expansion, ExpansionError> {
    check_domain(n, r)?;
    let mut digits = Vec::new();
    let mut rest = n;
    while rest > 0 {
        digits.push(rest % r);
        rest /= r;
    }
    Ok(Expansion { base: r, digits })
}

/// The exponent `n` with `r^n <= N < r^(n+1)`.
pub fn exponent_n(n: u64, r: u64) -> Result<u32, ExpansionError> {
    check_domain(n, r)?;
    let mut exp = 0;
    let mut rest = n / r;
    while rest > 0 {
        exp += 1;
        rest /= r;
    }
    Ok(exp)
}

/// `sum(digits[i] * base^i)` in arbitrary precision.
pub fn reconstruct(e: &Expansion) -> Result<BigUint, ExpansionError> {
    e.validate()?;
    let base = BigUint::from(e.base);
    let mut acc = BigUint::zero();
    for &d in e.digits.iter().rev() {
        acc = acc * &base + d;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_in_base_two() {
        let e = expand(9, 2).unwrap();
        assert_eq!(e.digits(), &[1, 0, 0, 1]);
        assert_eq!(e.exponent(), 3);
        assert_eq!(e.to_string(), "1001");
    }

    #[test]
    fn base_itself() {
        let e = expand(2, 2).unwrap();
        assert_eq!(e.digits(), &[0, 1]);
        assert_eq!(e.exponent(), 1);
    }

    #[test]
    fn seventy_six_in_base_four() {
        let e = expand(76, 4).unwrap();
        assert_eq!(e.digits(), &[0, 3, 0, 1]);
        assert_eq!(e.exponent(), 3);
        assert_eq!(exponent_n(76, 4).unwrap(), 3);
    }

    #[test]
    fn table_exponents() {
        assert_eq!(exponent_n(1132, 2).unwrap(), 10);
        assert_eq!(exponent_n(35, 2).unwrap(), 5);
        assert_eq!(exponent_n(178, 2).unwrap(), 7);
        assert_eq!(exponent_n(27, 3).unwrap(), 3);
        assert_eq!(exponent_n(1, 2).unwrap(), 0);
    }

    #[test]
    fn exact_powers_do_not_slip() {
        for r in 2u64..=16 {
            let mut p = 1u64;
            for m in 0..64 / (64 - r.leading_zeros()) {
                assert_eq!(exponent_n(p, r).unwrap(), m, "{r}^{m}");
                if p > 1 {
                    assert_eq!(exponent_n(p - 1, r).unwrap(), m - 1);
                }
                p *= r;
            }
        }
        assert_eq!(exponent_n(u64::MAX, 2).unwrap(), 63);
    }

    #[test]
    fn reconstruct_examples() {
        let nine = Expansion::new(2, vec![1, 0, 0, 1]).unwrap();
        assert_eq!(reconstruct(&nine).unwrap(), BigUint::from(9u32));
        let pure = Expansion::new(3, vec![0, 0, 0, 1]).unwrap();
        assert_eq!(reconstruct(&pure).unwrap(), BigUint::from(27u32));
        let e = Expansion::new(4, vec![0, 3, 0, 1]).unwrap();
        assert_eq!(reconstruct(&e).unwrap(), BigUint::from(76u32));
    }

    #[test]
    fn invariant_violations() {
        assert!(matches!(
            Expansion::new(2, vec![1, 2]),
            Err(ExpansionError::Invariant(_))
        ));
        assert!(Expansion::new(3, vec![1, 0]).is_err());
        assert!(Expansion::new(3, vec![]).is_err());
        assert!(Expansion::new(1, vec![0]).is_err());
        let forged: Expansion = serde_json::from_str(r#"{"base":4,"digits":[0,3,0,0]}"#).unwrap();
        assert!(matches!(reconstruct(&forged), Err(ExpansionError::Invariant(_))));
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(expand(0, 2), Err(ExpansionError::Domain(_))));
        assert!(matches!(expand(5, 1), Err(ExpansionError::Domain(_))));
        assert!(exponent_n(0, 10).is_err());
    }

    #[test]
    fn wide_bases_render_with_separators() {
        assert_eq!(expand(200, 16).unwrap().to_string(), "12,8");
    }
}
