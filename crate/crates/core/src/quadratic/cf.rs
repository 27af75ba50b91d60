//! Continued fraction of `(P0 + sqrt D)/2` for a real quadratic discriminant
//! `D`, the signed values of its period and the principal-ideal test built
//! on them.
//!
//! With `P0 = D mod 2`, `Q0 = 2` the quantity `(-1)^i Q_i / 2` runs through
//! the values of the principal form attained at the convergents, normalized
//! so that for `D = 4d` they are values of `x^2 - d y^2` and for odd `D` they
//! are values of `(x^2 - d y^2)/4`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::QuadraticField;
use crate::arith::{is_square, isqrt};
use crate::error::{Error, Result};

/// Safety valve on the period length; periods at desk scale are far shorter.
const MAX_PERIOD: usize = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FormCycle {
    pub disc: i64,
    /// `d` with `D = d` or `D = 4d`.
    pub radicand: i64,
    /// `(P_i, Q_i, a_i)` for `i = 0..=period`.
    pub states: Vec<(i64, i64, i64)>,
    pub period: usize,
    /// `(-1)^i Q_i / 2` for `i = 1..=L`, `L` the period or twice an odd one.
    pub values: Vec<i64>,
    /// Convergent-derived `(x, y)` with `x^2 - d y^2 = values[i-1]`, scaled
    /// by 4 on the right for odd `D`.
    #[serde(skip)]
    witnesses: Vec<(BigInt, BigInt)>,
    /// Fundamental unit `(x, y)` in the same normalization, and its norm.
    pub unit: (String, String),
    pub unit_norm: i64,
}

impl FormCycle {
    pub fn new(disc: i64) -> Result<Self> {
        if disc <= 0 || !matches!(disc.rem_euclid(4), 0 | 1) || is_square(disc as u64) {
            return Err(Error::domain(format!("{disc} is not a nonsquare positive discriminant")));
        }
        let s = isqrt(disc as u64) as i64;
        let p0 = disc % 2;
        let q0 = 2i64;
        let a_of = |p: i64, q: i64| (p + s).div_euclid(q);
        let mut states = vec![(p0, q0, a_of(p0, q0))];
        loop {
            let &(p, q, a) = states.last().unwrap();
            let p_next = a * q - p;
            let q_next = (disc - p_next * p_next) / q;
            debug_assert_eq!((disc - p_next * p_next) % q, 0);
            if q_next % 2 != 0 {
                return Err(Error::Internal(format!("odd Q in expansion for D = {disc}")));
            }
            let next = (p_next, q_next, a_of(p_next, q_next));
            if states.len() > 1 && (p_next, q_next) == (states[1].0, states[1].1) {
                break;
            }
            states.push(next);
            if states.len() > MAX_PERIOD {
                return Err(Error::OutOfRange(format!("period of D = {disc} too long")));
            }
        }
        let period = states.len() - 1;
        let span = if period % 2 == 1 { 2 * period } else { period };
        let q_at = |i: usize| states[1 + (i - 1) % period].1;
        let a_at = |i: usize| if i == 0 { states[0].2 } else { states[1 + (i - 1) % period].2 };

        // convergents h_{i-1}/k_{i-1} for i = 1..=span
        let (mut h_prev, mut k_prev) = (BigInt::one(), BigInt::zero());
        let (mut h, mut k) = (BigInt::from(a_at(0)), BigInt::one());
        let mut values = Vec::with_capacity(span);
        let mut witnesses = Vec::with_capacity(span);
        for i in 1..=span {
            let q_i = q_at(i);
            let sign = if i % 2 == 0 { 1 } else { -1 };
            values.push(sign * q_i / 2);
            let big_x = BigInt::from(2) * &h - BigInt::from(p0) * &k;
            let x = if disc % 2 == 0 { big_x / 2 } else { big_x };
            witnesses.push((x, k.clone()));
            let a = BigInt::from(a_at(i));
            let h_next = &a * &h + &h_prev;
            let k_next = &a * &k + &k_prev;
            h_prev = std::mem::replace(&mut h, h_next);
            k_prev = std::mem::replace(&mut k, k_next);
        }
        let radicand = if disc % 2 == 0 { disc / 4 } else { disc };
        let (ux, uy) = witnesses[period - 1].clone();
        let unit_norm = values[period - 1];
        Ok(FormCycle {
            disc,
            radicand,
            states,
            period,
            values,
            witnesses,
            unit: (ux.to_string(), uy.to_string()),
            unit_norm,
        })
    }

    /// Scale applied to `m` on the right of `x^2 - d y^2 = scale * m`.
    pub fn scale(&self) -> i64 {
        if self.disc % 2 == 0 {
            1
        } else {
            4
        }
    }

    pub fn value_set(&self) -> BTreeSet<i64> {
        self.values.iter().copied().collect()
    }

    /// Witness `(x, y)` for the first occurrence of `value`.
    pub fn witness_for(&self, value: i64) -> Option<(BigInt, BigInt)> {
        self.values.iter().position(|&v| v == value).map(|i| self.witnesses[i].clone())
    }
}

/// Answer of [`represents_principal`]: whether `x^2 - d y^2 = scale * m`
/// has an integer solution, i.e. whether some principal ideal has norm `|m|`
/// with the sign of `m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Representation {
    pub d: i64,
    pub m: i64,
    /// Equation decided, e.g. `x^2 - 79y^2 = 3`.
    pub equation: String,
    pub represented: bool,
    pub witness: Option<(String, String)>,
    /// Signed period values scanned.
    pub period_values: Vec<i64>,
    /// Values `m / g^2` looked up in the period.
    pub candidates: Vec<i64>,
}

/// Decides `x^2 - d y^2 = m` (`= 4m` for `d = 1 mod 4`) for `4 m^2 < D`.
/// In that range every primitive solution appears among the convergents, so
/// scanning one period of signed values is exact.
pub fn represents_principal(k: &QuadraticField, m: i64) -> Result<Representation> {
    if !k.is_real() {
        return Err(Error::domain("represents_principal needs a real quadratic field"));
    }
    if m == 0 || 4 * (m as i128) * (m as i128) >= k.disc as i128 {
        return Err(Error::OutOfRange(format!(
            "|m| = {} outside the exact range 0 < 4m^2 < {}; use forms::principal_represents instead",
            m.unsigned_abs(),
            k.disc
        )));
    }
    let cycle = FormCycle::new(k.disc)?;
    let values = cycle.value_set();
    let scale = cycle.scale();
    let mut candidates = Vec::new();
    let mut witness = None;
    let mut g = 1i64;
    while g * g <= m.abs() {
        if m % (g * g) == 0 {
            let target = m / (g * g);
            candidates.push(target);
            if witness.is_none() && values.contains(&target) {
                let (x, y) = cycle.witness_for(target).expect("value present");
                let (x, y) = (x * g, y * g);
                debug_assert_eq!(&x * &x - BigInt::from(k.d) * &y * &y, BigInt::from(scale * m));
                witness = Some((x.to_string(), y.to_string()));
            }
        }
        g += 1;
    }
    let rhs = if scale == 1 { m.to_string() } else { format!("4*{m}") };
    Ok(Representation {
        d: k.d,
        m,
        equation: format!("x^2 - {}y^2 = {rhs}", k.d),
        represented: witness.is_some(),
        witness,
        period_values: cycle.values.clone(),
        candidates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_79() {
        let c = FormCycle::new(316).unwrap();
        assert_eq!(c.period, 4);
        let a: Vec<i64> = c.states[1..].iter().map(|s| s.2).collect();
        assert_eq!(a, vec![1, 7, 1, 16]);
        assert_eq!(c.values, vec![-15, 2, -15, 1]);
        assert_eq!(c.unit, ("80".to_string(), "9".to_string()));
        assert_eq!(c.unit_norm, 1);
        let (x, y) = c.witness_for(2).unwrap();
        assert_eq!((x, y), (BigInt::from(9), BigInt::from(1)));
    }

    #[test]
    fn odd_period_and_odd_disc() {
        // sqrt 2: period 1, unit 1 + sqrt 2 of norm -1
        let c = FormCycle::new(8).unwrap();
        assert_eq!((c.period, c.unit_norm), (1, -1));
        assert_eq!(c.values, vec![-1, 1]);
        // (1 + sqrt 5)/2: x^2 - 5y^2 = -4 at (1, 1)
        let c = FormCycle::new(5).unwrap();
        assert_eq!(c.unit_norm, -1);
        assert_eq!(c.unit, ("1".to_string(), "1".to_string()));
    }

    #[test]
    fn principal_tests_79() {
        let k = QuadraticField::new(79).unwrap();
        let r = represents_principal(&k, 3).unwrap();
        assert!(!r.represented);
        assert!(!represents_principal(&k, -3).unwrap().represented);
        let r = represents_principal(&k, 2).unwrap();
        assert_eq!(r.witness, Some(("9".to_string(), "1".to_string())));
        assert!(represents_principal(&k, 1).unwrap().represented);
        assert!(represents_principal(&k, 9).is_err());
    }
}
