//! Pell-type norm equations: the two insolubility families for radicands
//! `n^2 + 1` and `n^2 + 4`, positive definite norm searches and ideal
//! factorizations of elements `x + y sqrt d` read off their norms.

use num_bigint::BigInt;
use serde::Serialize;

use super::forms::{principal_cycle, principal_represents};
use super::{QuadraticField, Splitting};
use crate::arith::{factorize, gcd, is_square};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum PellKind {
    /// `x^2 - (n^2 + 1) y^2 = +-m` with `m` nonsquare, `m < 2n`.
    P4,
    /// `x^2 - (n^2 + 4) y^2 = +-4m` with `m` nonsquare, `n >= 2`, `m < n`.
    P5,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SignedOutcome {
    pub equation: String,
    pub solution: Option<(String, String)>,
}

/// Outcome of deciding both signs of a Pell-family equation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PellCertificate {
    pub kind: PellKind,
    pub n: u64,
    pub m: u64,
    pub radicand: u64,
    /// Discriminant of the principal form the equation reduces to.
    pub form_discriminant: i128,
    /// Length of the rho-cycle of the principal form.
    pub cycle_length: usize,
    /// First coefficients along the principal cycle.
    pub cycle_values: Vec<i128>,
    pub outcomes: Vec<SignedOutcome>,
    pub insoluble: bool,
}

/// Decides `x^2 - (n^2+1) y^2 = +-m` (P4) or `x^2 - (n^2+4) y^2 = +-4m` (P5)
/// exactly and reports whether both are insoluble.
///
/// P4 is the principal form of discriminant `4(n^2+1)` representing `+-m`.
/// For P5, `X^2 - (n^2+4)Y^2 = 4m` forces `X = nY mod 2`, so with
/// `X = 2x + ny` it is `x^2 + nxy - y^2 = m`, the principal form of
/// discriminant `n^2 + 4`.
pub fn pell_family_insoluble(kind: PellKind, n: u64, m: u64) -> Result<PellCertificate> {
    let violated = |why: String| Err(Error::HypothesesViolated(why));
    if m == 0 || is_square(m) {
        return violated(format!("m = {m} is a square"));
    }
    let (radicand, disc) = match kind {
        PellKind::P4 => {
            if n == 0 || m >= 2 * n {
                return violated(format!("need m < 2n, got n = {n}, m = {m}"));
            }
            let r = n as i128 * n as i128 + 1;
            (r, 4 * r)
        }
        PellKind::P5 => {
            if n < 2 || m >= n {
                return violated(format!("need n >= 2 and m < n, got n = {n}, m = {m}"));
            }
            let r = n as i128 * n as i128 + 4;
            (r, r)
        }
    };
    if radicand > u32::MAX as i128 {
        return Err(Error::OutOfRange(format!("n = {n} too large")));
    }
    let cycle = principal_cycle(disc)?;
    let mut outcomes = Vec::new();
    for sign in [1i128, -1] {
        let target = sign * m as i128;
        let hit = principal_represents(disc, target)?;
        let (equation, solution) = match kind {
            PellKind::P4 => {
                let sol = hit.map(|w| (w.x, w.y));
                (format!("x^2 - {radicand}y^2 = {target}"), sol)
            }
            PellKind::P5 => {
                // (x, y) on x^2 + nxy - y^2 relative to the reduced principal
                // form (1, n mod 2, .); undo x -> x + (n div 2) y first
                let sol = hit.map(|w| {
                    let x: BigInt = w.x.parse().expect("integer");
                    let y: BigInt = w.y.parse().expect("integer");
                    let shift = BigInt::from(n / 2);
                    let xs = x - &shift * &y;
                    let big_x = BigInt::from(2) * xs + BigInt::from(n) * &y;
                    (big_x.to_string(), y.to_string())
                });
                (format!("x^2 - {radicand}y^2 = {}", 4 * target), sol)
            }
        };
        outcomes.push(SignedOutcome { equation, solution });
    }
    let insoluble = outcomes.iter().all(|o| o.solution.is_none());
    Ok(PellCertificate {
        kind,
        n,
        m,
        radicand: radicand as u64,
        form_discriminant: disc,
        cycle_length: cycle.len(),
        cycle_values: cycle.iter().map(|(f, _)| f.a).collect(),
        outcomes,
        insoluble,
    })
}

/// Result of a finite search for `x^2 + q y^2 = t`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NormSearch {
    pub q: u64,
    pub t: u64,
    /// Largest `y` examined; beyond it `q y^2 > t`.
    pub y_bound: u64,
    pub witness: Option<(u64, u64)>,
}

impl NormSearch {
    pub fn found(&self) -> bool {
        self.witness.is_some()
    }
}

/// Decides `x^2 + q y^2 = t` over the integers by scanning `q y^2 <= t`.
pub fn imaginary_norm_search(q: u64, t: u64) -> Result<NormSearch> {
    if q == 0 {
        return Err(Error::domain("q must be positive"));
    }
    let (q128, t128) = (q as u128, t as u128);
    let mut y = 0u64;
    let mut witness = None;
    while q128 * (y as u128) * (y as u128) <= t128 {
        let rest = t128 - q128 * (y as u128) * (y as u128);
        if rest <= u64::MAX as u128 && is_square(rest as u64) {
            witness = Some((crate::arith::isqrt(rest as u64), y));
            break;
        }
        y += 1;
    }
    let y_bound = crate::arith::isqrt(t / q);
    Ok(NormSearch { q, t, y_bound, witness })
}

/// One prime ideal dividing `(x + y sqrt d)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdealFactor {
    pub p: u64,
    pub exponent: u32,
    pub splitting: Splitting,
    /// The ideal is `(p, sqrt d - r)`.
    pub r: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ElementFactorization {
    pub d: i64,
    pub x: i64,
    pub y: i64,
    pub norm: i128,
    pub factors: Vec<IdealFactor>,
    /// Shape such as `𝔭3^2·𝔭7`; which of two conjugate primes occurs is
    /// recorded in `factors`.
    pub shape: String,
}

/// Factors the principal ideal `(x + y sqrt d)` for coprime `x, y` by norm
/// accounting. Coprimality rules out inert divisors, so each `p | N` yields
/// exactly one prime `(p, sqrt d - r)` with `x + y r = 0 mod p`, to the power
/// `v_p(N)`.
pub fn element_ideal_factorization(k: &QuadraticField, x: i64, y: i64) -> Result<ElementFactorization> {
    if gcd(x.unsigned_abs(), y.unsigned_abs()) != 1 {
        return Err(Error::domain(format!("x = {x}, y = {y} are not coprime")));
    }
    let norm = k.norm(x, y);
    let abs = norm.unsigned_abs();
    if abs > u64::MAX as u128 {
        return Err(Error::OutOfRange(format!("norm {norm} too large")));
    }
    let mut factors = Vec::new();
    for (p, e) in factorize(abs as u64)?.factors() {
        let p = *p;
        let splitting = k.splitting_type(p)?.kind;
        if y.rem_euclid(p as i64) == 0 {
            return Err(Error::Internal(format!("{p} divides y and the norm but not x")));
        }
        let y_inv = crate::arith::mod_inverse(y.rem_euclid(p as i64) as u64, p).expect("p does not divide y");
        let minus_x = (-(x as i128)).rem_euclid(p as i128) as u64;
        let r = ((minus_x as u128 * y_inv as u128) % p as u128) as u64;
        factors.push(IdealFactor { p, exponent: *e, splitting, r });
    }
    let shape = if factors.is_empty() {
        "(1)".to_string()
    } else {
        factors
            .iter()
            .map(|f| if f.exponent == 1 { format!("𝔭{}", f.p) } else { format!("𝔭{}^{}", f.p, f.exponent) })
            .collect::<Vec<_>>()
            .join("·")
    };
    Ok(ElementFactorization { d: k.d, x, y, norm, factors, shape })
}
