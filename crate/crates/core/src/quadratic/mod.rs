//! Quadratic fields `Q(sqrt d)`: discriminants, splitting, class numbers,
//! Minkowski bounds, principal-ideal tests and Pell-type equations.

pub mod cf;
pub mod forms;
pub mod pell;

use num_rational::Ratio;
use serde::Serialize;

use crate::arith::{is_prime, is_squarefree_signed, isqrt, kronecker};
use crate::error::{Error, Result};

pub use cf::{represents_principal, FormCycle, Representation};
pub use forms::{principal_represents, IndefiniteForm};
pub use pell::{element_ideal_factorization, imaginary_norm_search, pell_family_insoluble, PellKind};

/// Largest `|D|` accepted by [`QuadraticField::class_number`].
pub const MAX_CLASS_NUMBER_DISC: i64 = 10_000_000;

/// `Q(sqrt d)` with `d` squarefree, `d != 0, 1`, and its maximal order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QuadraticField {
    pub d: i64,
    pub disc: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Splitting {
    Split,
    Inert,
    Ramified,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplittingType {
    pub p: u64,
    pub kind: Splitting,
    pub residue_degree: u32,
    pub shape: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClassNumber {
    /// Classes modulo totally positive principal ideals; equal to `wide`
    /// for imaginary fields.
    pub narrow: u64,
    pub wide: u64,
    /// Whether a unit of norm -1 exists (real fields only).
    pub norm_minus_one_unit: Option<bool>,
}

/// `multiplier * sqrt(radicand)`, divided by `pi` when `over_pi` is set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinkowskiBound {
    pub multiplier: String,
    pub radicand: u64,
    pub over_pi: bool,
    pub floor: u64,
}

/// Rational bounds `lo < pi < hi`, tightening down the list.
const PI_BOUNDS: [((i64, i64), (i64, i64)); 4] = [
    ((333, 106), (355, 113)),
    ((103_993, 33_102), (104_348, 33_215)),
    ((208_341, 66_317), (312_689, 99_532)),
    ((833_719, 265_381), (1_146_408, 364_913)),
];

pub fn is_fundamental_discriminant(disc: i64) -> bool {
    if disc == 0 || disc == 1 {
        return false;
    }
    match disc.rem_euclid(4) {
        1 => is_squarefree_signed(disc).unwrap_or(false),
        0 => {
            let m = disc / 4;
            matches!(m.rem_euclid(4), 2 | 3) && is_squarefree_signed(m).unwrap_or(false)
        }
        _ => false,
    }
}

impl QuadraticField {
    pub fn new(d: i64) -> Result<Self> {
        if d == 0 || d == 1 {
            return Err(Error::domain(format!("d = {d} does not define a quadratic field")));
        }
        if d.unsigned_abs() > (i64::MAX / 8) as u64 || !is_squarefree_signed(d)? {
            return Err(Error::domain(format!("d = {d} is not squarefree")));
        }
        let disc = if d.rem_euclid(4) == 1 { d } else { 4 * d };
        Ok(QuadraticField { d, disc })
    }

    pub fn from_discriminant(disc: i64) -> Result<Self> {
        if !is_fundamental_discriminant(disc) {
            return Err(Error::domain(format!("{disc} is not a fundamental discriminant")));
        }
        QuadraticField::new(if disc.rem_euclid(4) == 0 { disc / 4 } else { disc })
    }

    pub fn is_real(&self) -> bool {
        self.d > 0
    }

    pub fn splitting_type(&self, p: u64) -> Result<SplittingType> {
        if !is_prime(p) {
            return Err(Error::domain(format!("{p} is not prime")));
        }
        let (kind, residue_degree, shape) = match kronecker(self.disc, p) {
            1 => (Splitting::Split, 1, "𝔭𝔭′"),
            -1 => (Splitting::Inert, 2, "𝔭"),
            _ => (Splitting::Ramified, 1, "𝔭²"),
        };
        Ok(SplittingType { p, kind, residue_degree, shape: shape.into() })
    }

    /// `x^2 - d y^2`, the norm of `x + y sqrt d`.
    pub fn norm(&self, x: i64, y: i64) -> i128 {
        let (x, y) = (x as i128, y as i128);
        x * x - self.d as i128 * y * y
    }

    pub fn class_number(&self) -> Result<ClassNumber> {
        if self.disc.abs() > MAX_CLASS_NUMBER_DISC {
            return Err(Error::OutOfRange(format!("|D| = {} exceeds {MAX_CLASS_NUMBER_DISC}", self.disc.abs())));
        }
        if self.disc < 0 {
            let h = imaginary_class_number(self.disc);
            return Ok(ClassNumber { narrow: h, wide: h, norm_minus_one_unit: None });
        }
        let disc = self.disc as i128;
        let narrow = forms::reduced_cycles(disc).len() as u64;
        let minus_one = forms::principal_cycle(disc)?.iter().any(|(f, _)| f.a == -1);
        let wide = if minus_one { narrow } else { narrow / 2 };
        Ok(ClassNumber { narrow, wide, norm_minus_one_unit: Some(minus_one) })
    }

    /// Minkowski bound: `sqrt(D)/2` for real fields, `(2/pi) sqrt|D|` for
    /// imaginary ones, with a certified floor.
    pub fn minkowski_bound(&self) -> MinkowskiBound {
        let radicand = self.disc.unsigned_abs();
        if self.is_real() {
            return MinkowskiBound { multiplier: "1/2".into(), radicand, over_pi: false, floor: isqrt(radicand) / 2 };
        }
        MinkowskiBound { multiplier: "2".into(), radicand, over_pi: true, floor: imaginary_minkowski_floor(radicand) }
    }
}

/// Largest `k` with `pi^2 k^2 <= 4 |D|`, decided with rational bounds on `pi`.
fn imaginary_minkowski_floor(abs_disc: u64) -> u64 {
    let four_d = Ratio::from_integer(4 * abs_disc as i128);
    for &((ln, ld), (hn, hd)) in &PI_BOUNDS {
        let lo = Ratio::new(ln as i128, ld as i128);
        let hi = Ratio::new(hn as i128, hd as i128);
        let fits = |pi: &Ratio<i128>, k: u64| {
            let k = Ratio::from_integer(k as i128);
            pi * pi * k * k <= four_d
        };
        // largest k certified to fit under the upper bound
        let mut k = 0;
        while fits(&hi, k + 1) {
            k += 1;
        }
        // k + 1 must be certified too large under the lower bound
        if !fits(&lo, k + 1) {
            return k;
        }
    }
    unreachable!("pi bounds too coarse for |D| = {abs_disc}")
}

/// Counts reduced positive definite forms `(a, b, c)` of discriminant `disc`.
fn imaginary_class_number(disc: i64) -> u64 {
    let n = -disc;
    let mut h = 0;
    let mut a = 1i64;
    while 3 * a * a <= n {
        for b in -a + 1..=a {
            if (b - disc).rem_euclid(2) != 0 || (b * b - disc) % (4 * a) != 0 {
                continue;
            }
            let c = (b * b - disc) / (4 * a);
            if c < a || (b < 0 && a == c) {
                continue;
            }
            if num_integer::gcd(num_integer::gcd(a, b), c) == 1 {
                h += 1;
            }
        }
        a += 1;
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitting_examples() {
        let k = QuadraticField::new(79).unwrap();
        assert_eq!(k.splitting_type(3).unwrap().kind, Splitting::Split);
        assert_eq!(k.splitting_type(2).unwrap().kind, Splitting::Ramified);
        assert_eq!(k.splitting_type(5).unwrap().kind, Splitting::Split);
        assert_eq!(k.splitting_type(7).unwrap().kind, Splitting::Split);
        let k = QuadraticField::new(-23).unwrap();
        assert_eq!(k.splitting_type(2).unwrap().kind, Splitting::Split);
        assert_eq!(k.splitting_type(5).unwrap().kind, Splitting::Inert);
    }

    #[test]
    fn class_numbers() {
        let h = |d| QuadraticField::new(d).unwrap().class_number().unwrap().wide;
        assert_eq!(h(-23), 3);
        assert_eq!(h(79), 3);
        assert_eq!(h(257), 3);
        assert_eq!(h(1229), 3);
        assert_eq!(h(-3), 1);
        assert_eq!(h(-1), 1);
        assert_eq!(h(-5), 2);
        assert_eq!(h(2), 1);
        assert_eq!(h(10), 2);
        assert_eq!(h(3), 1);
        let c = QuadraticField::new(79).unwrap().class_number().unwrap();
        assert_eq!((c.narrow, c.norm_minus_one_unit), (6, Some(false)));
        let c = QuadraticField::new(2).unwrap().class_number().unwrap();
        assert_eq!((c.narrow, c.norm_minus_one_unit), (1, Some(true)));
    }

    #[test]
    fn minkowski_floors() {
        assert_eq!(QuadraticField::new(79).unwrap().minkowski_bound().floor, 8);
        assert_eq!(QuadraticField::new(-23).unwrap().minkowski_bound().floor, 3);
        assert_eq!(QuadraticField::new(2).unwrap().minkowski_bound().floor, 1);
        assert_eq!(QuadraticField::new(-1).unwrap().minkowski_bound().floor, 1);
    }

    #[test]
    fn discriminants() {
        assert_eq!(QuadraticField::new(79).unwrap().disc, 316);
        assert_eq!(QuadraticField::new(-23).unwrap().disc, -23);
        assert!(QuadraticField::new(12).is_err());
        assert!(QuadraticField::new(1).is_err());
        assert!(is_fundamental_discriminant(-4) && is_fundamental_discriminant(5));
        assert!(!is_fundamental_discriminant(-12) && !is_fundamental_discriminant(20));
        assert_eq!(QuadraticField::from_discriminant(-4).unwrap().d, -1);
    }

    #[test]
    fn norms() {
        let k = QuadraticField::new(79).unwrap();
        assert_eq!(k.norm(4, 1), -63);
        assert_eq!(k.norm(3, 1), -70);
        assert_eq!(k.norm(80, 9), 1);
    }
}
