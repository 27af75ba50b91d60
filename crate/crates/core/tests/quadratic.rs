//! Quadratic engine against independent oracles: brute-force form reduction,
//! bounded norm-equation search and Euler's criterion.

use std::collections::BTreeSet;

use annihil::arith::{is_prime, kronecker, mod_pow, primes_between};
use annihil::quadratic::cf::FormCycle;
use annihil::quadratic::forms::principal_represents;
use annihil::quadratic::{
    is_fundamental_discriminant, pell_family_insoluble, represents_principal, PellKind, QuadraticField,
};
use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{One, ToPrimitive, Zero};

/// Gauss reduction of a positive definite form, written independently of the
/// library: normalize `b` into `(-a, a]`, swap when `a > c`, repeat.
fn gauss_reduce(mut a: i64, mut b: i64, mut c: i64) -> (i64, i64, i64) {
    loop {
        if b > a || b <= -a {
            let k = (a - b).div_euclid(2 * a);
            let nb = b + 2 * a * k;
            c += a * k * k + b * k;
            b = nb;
        }
        if a > c {
            std::mem::swap(&mut a, &mut c);
            b = -b;
            continue;
        }
        if a == c && b < 0 {
            b = -b;
        }
        return (a, b, c);
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    num_integer::gcd(a, b)
}

/// Orbit count of primitive forms with `a <= sqrt(|D|/3)`, `|b| <= a`, which
/// meets every class.
fn class_number_oracle(disc: i64) -> u64 {
    let n = -disc;
    let mut seen = BTreeSet::new();
    let mut a = 1;
    while 3 * a * a <= n {
        for b in -a..=a {
            if (b * b - disc) % (4 * a) != 0 {
                continue;
            }
            let c = (b * b - disc) / (4 * a);
            if gcd(gcd(a, b), c) == 1 {
                seen.insert(gauss_reduce(a, b, c));
            }
        }
        a += 1;
    }
    seen.len() as u64
}

#[test]
fn imaginary_class_numbers_match_oracle() {
    for disc in -9_999..0i64 {
        if !is_fundamental_discriminant(disc) {
            continue;
        }
        let k = QuadraticField::from_discriminant(disc).unwrap();
        assert_eq!(k.class_number().unwrap().wide, class_number_oracle(disc), "D = {disc}");
    }
}

/// Fundamental solution of `x^2 - d y^2 = 1` from the textbook expansion of
/// `sqrt d`.
fn fundamental_pell(d: i64) -> (BigInt, BigInt) {
    let a0 = d.sqrt();
    let (mut m, mut den, mut a) = (0i64, 1i64, a0);
    let (mut h1, mut h) = (BigInt::one(), BigInt::from(a0));
    let (mut k1, mut k) = (BigInt::zero(), BigInt::one());
    loop {
        if &h * &h - BigInt::from(d) * &k * &k == BigInt::one() {
            return (h, k);
        }
        m = den * a - m;
        den = (d - m * m) / den;
        a = (a0 + m) / den;
        let hn = BigInt::from(a) * &h + &h1;
        let kn = BigInt::from(a) * &k + &k1;
        h1 = std::mem::replace(&mut h, hn);
        k1 = std::mem::replace(&mut k, kn);
    }
}

/// Decides `x^2 - d y^2 = n` by scanning `y` up to the classical bound
/// `y^2 <= y1^2 |n| / (2 (x1 +- 1))`; `None` when that bound is too large.
fn brute_norm(d: i64, n: i64, limit: u64) -> Option<bool> {
    let (x1, y1) = fundamental_pell(d);
    let shift = if n > 0 { 1 } else { -1 };
    let bound_sq = &y1 * &y1 * BigInt::from(n.abs()) / (BigInt::from(2) * (&x1 + BigInt::from(shift)));
    let bound = bound_sq.sqrt().to_u64().filter(|&b| b <= limit)?;
    for y in 0..=bound {
        let rhs = n as i128 + d as i128 * (y as i128) * (y as i128);
        if rhs >= 0 {
            let x = (rhs as u128).sqrt();
            if x * x == rhs as u128 {
                return Some(true);
            }
        }
    }
    Some(false)
}

#[test]
fn principal_representation_matches_oracles() {
    let mut brute_checked = 0;
    for disc in 5..2000i64 {
        if !is_fundamental_discriminant(disc) {
            continue;
        }
        let k = QuadraticField::from_discriminant(disc).unwrap();
        let cycle = FormCycle::new(disc).unwrap();
        // recurrence and period
        for w in cycle.states.windows(2) {
            let ((p, q, a), (p2, q2, _)) = (w[0], w[1]);
            assert_eq!(p2, a * q - p);
            assert_eq!(q2 * q, disc - p2 * p2);
        }
        let scale = if disc % 2 == 0 { 1 } else { 4 };
        let mut m = 1i64;
        while 4 * m * m < disc {
            for target in [m, -m] {
                let r = represents_principal(&k, target).unwrap();
                if let Some((x, y)) = &r.witness {
                    let (x, y): (BigInt, BigInt) = (x.parse().unwrap(), y.parse().unwrap());
                    assert_eq!(&x * &x - BigInt::from(k.d) * &y * &y, BigInt::from(scale * target));
                }
                let forms = principal_represents(disc as i128, target as i128).unwrap();
                assert_eq!(r.represented, forms.is_some(), "D = {disc}, m = {target}");
                if let Some(brute) = brute_norm(k.d, scale * target, 200_000) {
                    assert_eq!(r.represented, brute, "D = {disc}, m = {target}");
                    brute_checked += 1;
                }
            }
            m += 1;
        }
    }
    assert!(brute_checked > 1000);
}

#[test]
fn pell_families_exhaustive() {
    for n in 2..=40u64 {
        for m in 1..2 * n {
            if annihil::arith::is_square(m) {
                continue;
            }
            assert!(pell_family_insoluble(PellKind::P4, n, m).unwrap().insoluble, "P4 n = {n}, m = {m}");
            if m < n {
                assert!(pell_family_insoluble(PellKind::P5, n, m).unwrap().insoluble, "P5 n = {n}, m = {m}");
            }
        }
    }
}

#[test]
fn pell_family_brute_force_small() {
    // direct scan of x^2 - (n^2+1) y^2 = +-m for small y agrees
    for n in 2..=12i64 {
        let d = n * n + 1;
        for m in 1..2 * n {
            let found = (0..2000i64).any(|y| {
                [m, -m].iter().any(|&t| {
                    let rhs = t + d * y * y;
                    rhs >= 0 && (rhs as u64).sqrt().pow(2) == rhs as u64
                })
            });
            let square = (m as u64).sqrt().pow(2) == m as u64;
            if square {
                assert!(found);
            } else {
                assert!(!found, "n = {n}, m = {m}");
            }
        }
    }
}

#[test]
fn kronecker_matches_euler_criterion() {
    for p in primes_between(3, 500) {
        for a in -60i64..60 {
            let euler = mod_pow(a, (p - 1) / 2, p).unwrap();
            let expected = if a.rem_euclid(p as i64) == 0 {
                0
            } else if euler == 1 {
                1
            } else {
                -1
            };
            assert_eq!(kronecker(a, p), expected, "({a}/{p})");
        }
    }
}

#[test]
fn quadratic_reciprocity() {
    let primes = primes_between(3, 200);
    for &p in &primes {
        for &q in &primes {
            if p == q {
                continue;
            }
            let lhs = kronecker(p as i64, q) * kronecker(q as i64, p);
            let sign = if (p - 1) / 2 * ((q - 1) / 2) % 2 == 0 { 1 } else { -1 };
            assert_eq!(lhs, sign, "p = {p}, q = {q}");
        }
    }
    assert!(is_prime(199));
}

#[test]
fn worked_fields() {
    let h = |d| QuadraticField::new(d).unwrap().class_number().unwrap().wide;
    assert_eq!([h(-23), h(79), h(257), h(1229)], [3, 3, 3, 3]);
    let k = QuadraticField::new(79).unwrap();
    assert!(!represents_principal(&k, 3).unwrap().represented);
    assert_eq!(represents_principal(&k, 2).unwrap().witness, Some(("9".into(), "1".into())));
}
