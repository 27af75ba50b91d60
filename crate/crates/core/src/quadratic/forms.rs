//! Indefinite binary quadratic forms `a x^2 + b xy + c y^2` of nonsquare
//! discriminant `b^2 - 4ac > 0`: reduction, rho-cycles and representation.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{is_square, isqrt};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct IndefiniteForm {
    pub a: i128,
    pub b: i128,
    pub c: i128,
}

/// Proper (determinant 1) substitution `(x, y) -> M (x, y)`.
pub type Transform = [[BigInt; 2]; 2];

pub fn identity() -> Transform {
    [[BigInt::one(), BigInt::zero()], [BigInt::zero(), BigInt::one()]]
}

fn compose(m: &Transform, n: &Transform) -> Transform {
    let e = |i: usize, j: usize| &m[i][0] * &n[0][j] + &m[i][1] * &n[1][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

/// Largest form-reduction step count before giving up; reduction of any form
/// met at desk scale takes far fewer steps.
const MAX_STEPS: usize = 1 << 20;

fn root_floor(disc: i128) -> i128 {
    isqrt(disc as u64) as i128
}

impl IndefiniteForm {
    pub fn new(a: i128, b: i128, c: i128) -> Self {
        IndefiniteForm { a, b, c }
    }

    /// `(1, delta, (delta^2 - D)/4)` with `delta = D mod 2`.
    pub fn principal(disc: i128) -> Self {
        let delta = disc.rem_euclid(2);
        IndefiniteForm { a: 1, b: delta, c: (delta * delta - disc) / 4 }
    }

    pub fn disc(&self) -> i128 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        x * x * BigInt::from(self.a) + x * y * BigInt::from(self.b) + y * y * BigInt::from(self.c)
    }

    pub fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.c) == 1
    }

    /// `|sqrt D - 2|a|| < b < sqrt D`.
    pub fn is_reduced(&self) -> bool {
        let disc = self.disc();
        let s = root_floor(disc);
        let two_a = 2 * self.a.abs();
        let b = self.b;
        if b <= 0 || b > s {
            return false;
        }
        let sum = b + two_a;
        let diff = two_a - b;
        sum * sum > disc && (diff <= 0 || diff * diff < disc)
    }

    /// One reduction step `(a, b, c) -> (c, b', c')` with `b' = -b + 2ct`;
    /// returns the new form and `t`. The substitution is `[[0, -1], [1, t]]`.
    pub fn rho(&self) -> (Self, i128) {
        let disc = self.disc();
        let s = root_floor(disc);
        let c = self.c;
        let m = 2 * c.abs();
        let b_new = if c.abs() <= s {
            s - (s + self.b).rem_euclid(m)
        } else {
            let r = (-self.b).rem_euclid(m);
            if r > c.abs() {
                r - m
            } else {
                r
            }
        };
        let t = (b_new + self.b) / (2 * c);
        let c_new = (b_new * b_new - disc) / (4 * c);
        (IndefiniteForm { a: c, b: b_new, c: c_new }, t)
    }

    fn rho_matrix(t: i128) -> Transform {
        [[BigInt::zero(), -BigInt::one()], [BigInt::one(), BigInt::from(t)]]
    }

    /// Reduces the form, returning `(g, T)` with `g = f o T` reduced.
    pub fn reduce(&self) -> Result<(Self, Transform)> {
        let mut f = *self;
        let mut t = identity();
        for _ in 0..MAX_STEPS {
            if f.is_reduced() {
                return Ok((f, t));
            }
            let (g, step) = f.rho();
            t = compose(&t, &Self::rho_matrix(step));
            f = g;
        }
        Err(Error::Internal(format!("reduction of {self:?} did not terminate")))
    }
}

fn check_disc(disc: i128) -> Result<()> {
    if disc <= 0 || !matches!(disc.rem_euclid(4), 0 | 1) || disc > u64::MAX as i128 || is_square(disc as u64) {
        return Err(Error::domain(format!("{disc} is not a nonsquare positive discriminant")));
    }
    Ok(())
}

/// The rho-cycle of a reduced form, each entry with `T` such that
/// `entry = start o T`.
pub fn cycle_of(start: IndefiniteForm) -> Vec<(IndefiniteForm, Transform)> {
    let mut out = vec![(start, identity())];
    let (mut f, mut t) = (start, identity());
    loop {
        let (g, step) = f.rho();
        t = compose(&t, &IndefiniteForm::rho_matrix(step));
        if g == start {
            return out;
        }
        out.push((g, t.clone()));
        f = g;
    }
}

/// The cycle of the principal class, with transforms from the principal form.
pub fn principal_cycle(disc: i128) -> Result<Vec<(IndefiniteForm, Transform)>> {
    check_disc(disc)?;
    let (start, r) = IndefiniteForm::principal(disc).reduce()?;
    Ok(cycle_of(start).into_iter().map(|(f, t)| (f, compose(&r, &t))).collect())
}

/// All primitive reduced forms of discriminant `disc`.
pub fn reduced_forms(disc: i128) -> BTreeSet<IndefiniteForm> {
    let s = root_floor(disc);
    let mut out = BTreeSet::new();
    let mut b = if disc % 2 == 0 { 2 } else { 1 };
    while b <= s {
        let n = (disc - b * b) / 4;
        let mut a = 1;
        while a * a <= n {
            if n % a == 0 {
                for x in [a, n / a] {
                    for sign in [1, -1] {
                        let f = IndefiniteForm { a: sign * x, b, c: -n / (sign * x) };
                        if f.is_reduced() && f.is_primitive() {
                            out.insert(f);
                        }
                    }
                }
            }
            a += 1;
        }
        b += 2;
    }
    out
}

/// Partition of the primitive reduced forms into rho-cycles; their number is
/// the narrow class number.
pub fn reduced_cycles(disc: i128) -> Vec<Vec<IndefiniteForm>> {
    let mut left = reduced_forms(disc);
    let mut cycles = Vec::new();
    while let Some(&start) = left.iter().next() {
        let cyc: Vec<IndefiniteForm> = cycle_of(start).into_iter().map(|(f, _)| f).collect();
        for f in &cyc {
            left.remove(f);
        }
        cycles.push(cyc);
    }
    cycles
}

/// How a value was found to be represented by the principal form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FormWitness {
    /// `principal(x, y) = m`.
    pub x: String,
    pub y: String,
    /// `gcd(x, y)`.
    pub content: i128,
}

/// Decides whether the principal form of discriminant `disc` represents `m`
/// (`m != 0`), primitively or not.
///
/// A primitive representation of `M` exists iff some form `(M, b, c)` with
/// `b^2 = D mod 4|M|` is properly equivalent to the principal form, which is
/// decided by reducing it and searching the principal cycle. Imprimitive
/// representations are primitive representations of `M / g^2`.
pub fn principal_represents(disc: i128, m: i128) -> Result<Option<FormWitness>> {
    check_disc(disc)?;
    if m == 0 {
        return Err(Error::domain("representation of 0"));
    }
    let cycle: BTreeMap<IndefiniteForm, Transform> = principal_cycle(disc)?.into_iter().collect();
    let principal = IndefiniteForm::principal(disc);
    let mut g = 1i128;
    while g * g <= m.abs() {
        if m % (g * g) == 0 {
            if let Some((x, y)) = primitive_rep(disc, m / (g * g), &cycle)? {
                let (x, y) = (x * g, y * g);
                debug_assert_eq!(principal.eval(&x, &y), BigInt::from(m));
                return Ok(Some(FormWitness { x: x.to_string(), y: y.to_string(), content: g }));
            }
        }
        g += 1;
    }
    Ok(None)
}

fn primitive_rep(disc: i128, m: i128, cycle: &BTreeMap<IndefiniteForm, Transform>) -> Result<Option<(BigInt, BigInt)>> {
    let modulus = 4 * m.abs();
    for b in 0..2 * m.abs() {
        if (b * b - disc).rem_euclid(modulus) != 0 {
            continue;
        }
        let f = IndefiniteForm { a: m, b, c: (b * b - disc) / (4 * m) };
        let (red, t) = f.reduce()?;
        if let Some(s) = cycle.get(&red) {
            // red = f o T = principal o S, so principal(S T^-1 e1) = f(e1) = m
            let v = [t[1][1].clone(), -t[1][0].clone()];
            let x = &s[0][0] * &v[0] + &s[0][1] * &v[1];
            let y = &s[1][0] * &v[0] + &s[1][1] * &v[1];
            return Ok(Some((x, y)));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rho_cycle_79() {
        let cyc = principal_cycle(316).unwrap();
        let principal = IndefiniteForm::principal(316);
        for (f, t) in &cyc {
            assert!(f.is_reduced());
            // f(x, y) = principal(T (x, y)) at (1, 0)
            assert_eq!(principal.eval(&t[0][0], &t[1][0]), BigInt::from(f.a));
        }
        let firsts: BTreeSet<i128> = cyc.iter().map(|(f, _)| f.a).collect();
        assert!(firsts.contains(&1) && firsts.contains(&2) && firsts.contains(&-15));
        assert!(!firsts.contains(&-1) && !firsts.contains(&3) && !firsts.contains(&-3));
    }

    #[test]
    fn representations() {
        let w = principal_represents(316, 2).unwrap().unwrap();
        let (x, y): (i64, i64) = (w.x.parse().unwrap(), w.y.parse().unwrap());
        assert_eq!(x as i128 * x as i128 - 79 * y as i128 * y as i128, 2);
        assert!(principal_represents(316, 3).unwrap().is_none());
        assert!(principal_represents(316, -3).unwrap().is_none());
        // 4 = 2^2 * 1, imprimitive
        assert!(principal_represents(316, 4).unwrap().is_some());
        // x^2 + xy - 3y^2 (D = 13) represents -1 at (1, 1)
        assert!(principal_represents(13, -1).unwrap().is_some());
        assert!(principal_represents(16, 1).is_err());
    }

    #[test]
    fn narrow_cycle_counts() {
        assert_eq!(reduced_cycles(316).len(), 6);
        assert_eq!(reduced_cycles(5).len(), 1);
        assert_eq!(reduced_cycles(12).len(), 2);
    }
}
