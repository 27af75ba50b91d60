//! Exact elementary number theory on machine integers.
//!
//! Every routine works on `u64`/`i64` inputs with `u128` intermediates, so no
//! operation can overflow. Primality is deterministic over the whole `u64`
//! range; factorization is capped at [`FACTOR_LIMIT`].

use num_integer::Integer;

use crate::error::{Error, Result};

/// Largest value [`factorize`] accepts.
pub const FACTOR_LIMIT: u64 = 1_000_000_000_000;

const SMALL_PRIMES: [u64; 25] =
    [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97];

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// `base^exp mod modulus`, reduced into `[0, modulus)`.
pub fn mod_pow(base: i64, exp: u64, modulus: u64) -> Result<u64> {
    if modulus == 0 {
        return Err(Error::domain("mod_pow with modulus 0"));
    }
    let b = (base as i128).rem_euclid(modulus as i128) as u64;
    Ok(pow_mod_u64(b, exp, modulus))
}

pub(crate) fn pow_mod_u64(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, modulus);
        }
        base = mul_mod(base, base, modulus);
        exp >>= 1;
    }
    acc
}

/// Modular inverse of `a` modulo `m`, if it exists.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    if m == 0 {
        return None;
    }
    let e = (a as i128).extended_gcd(&(m as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m as i128) as u64)
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Smallest `k >= 1` with `a^k = 1 (mod n)`.
///
/// Starts from `phi(n)` and strips prime factors while the power stays 1.
pub fn mult_order(a: u64, n: u64) -> Result<u64> {
    if n < 2 {
        return Err(Error::domain(format!("mult_order needs n >= 2, got {n}")));
    }
    if gcd(a % n, n) != 1 {
        return Err(Error::domain(format!("gcd({a}, {n}) != 1")));
    }
    let phi = euler_phi(n)?;
    let mut k = phi;
    for &(p, _) in factorize(phi)?.factors() {
        while k % p == 0 && pow_mod_u64(a, k / p, n) == 1 {
            k /= p;
        }
    }
    Ok(k)
}

/// Kronecker symbol `(a | n)` for `n >= 1`, via the reciprocity recursion.
pub fn kronecker(a: i64, n: u64) -> i8 {
    debug_assert!(n >= 1);
    if n == 0 {
        return if a.unsigned_abs() == 1 { 1 } else { 0 };
    }
    let mut n = n;
    let mut sign = 1i8;
    let tz = n.trailing_zeros();
    if tz > 0 {
        if a.rem_euclid(2) == 0 {
            return 0;
        }
        n >>= tz;
        if tz % 2 == 1 {
            // (a|2) = (2|a) for odd a
            let r = a.rem_euclid(8);
            if r == 3 || r == 5 {
                sign = -sign;
            }
        }
    }
    sign * jacobi((a as i128).rem_euclid(n as i128) as u64, n)
}

/// Jacobi symbol for odd `n`, `0 <= a`.
fn jacobi(mut a: u64, mut n: u64) -> i8 {
    debug_assert!(n % 2 == 1);
    a %= n;
    let mut t = 1i8;
    while a != 0 {
        let tz = a.trailing_zeros();
        a >>= tz;
        if tz % 2 == 1 && (n % 8 == 3 || n % 8 == 5) {
            t = -t;
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// Prime factorization `value = prod p^e`, primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    value: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    pub fn euler_phi(&self) -> u64 {
        self.factors.iter().map(|&(p, e)| (p - 1) * p.pow(e - 1)).product()
    }

    /// All positive divisors in ascending order.
    pub fn divisors(&self) -> Vec<u64> {
        let mut out = vec![1u64];
        for &(p, e) in &self.factors {
            let len = out.len();
            let mut pk = 1;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    out.push(out[i] * pk);
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn is_prime_power(&self) -> bool {
        self.factors.len() == 1
    }
}

impl std::fmt::Display for Factorization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> =
            self.factors.iter().map(|&(p, e)| if e == 1 { p.to_string() } else { format!("{p}^{e}") }).collect();
        write!(f, "{}", parts.join("*"))
    }
}

pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::domain("factorize(0)"));
    }
    if n > FACTOR_LIMIT {
        return Err(Error::FactorizationIncomplete(n));
    }
    let mut primes = Vec::new();
    let mut rest = n;
    for &p in &SMALL_PRIMES {
        while rest.is_multiple_of(p) {
            primes.push(p);
            rest /= p;
        }
    }
    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime(m) {
            primes.push(m);
            continue;
        }
        let d = pollard_rho(m);
        stack.push(d);
        stack.push(m / d);
    }
    primes.sort_unstable();
    let mut factors: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match factors.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => factors.push((p, 1)),
        }
    }
    Ok(Factorization { value: n, factors })
}

// m is odd, composite and has no factor below 100.
fn pollard_rho(m: u64) -> u64 {
    let r = isqrt(m);
    if r * r == m {
        return r;
    }
    for c in 1u64.. {
        let f = |x: u64| (mul_mod(x, x, m) + c) % m;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd(x.abs_diff(y), m);
        }
        if d != m {
            return d;
        }
    }
    unreachable!()
}

/// Deterministic Miller-Rabin over the full `u64` range.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &SMALL_PRIMES[..12] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &SMALL_PRIMES[..12] {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn is_squarefree(n: u64) -> Result<bool> {
    Ok(factorize(n)?.is_squarefree())
}

pub fn euler_phi(n: u64) -> Result<u64> {
    Ok(factorize(n)?.euler_phi())
}

/// Squarefree test for signed values (sign ignored).
pub fn is_squarefree_signed(n: i64) -> Result<bool> {
    is_squarefree(n.unsigned_abs())
}

pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u64;
    while x.checked_mul(x).is_none_or(|v| v > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|v| v <= n) {
        x += 1;
    }
    x
}

pub fn is_square(n: u64) -> bool {
    let r = isqrt(n);
    r * r == n
}

/// Primes in `[lo, hi]`.
pub fn primes_between(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&n| is_prime(n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mod_pow_examples() {
        assert_eq!(mod_pow(2, 11, 23).unwrap(), 1);
        assert_eq!(mod_pow(2, 8, 257).unwrap(), 256);
        assert_eq!(mod_pow(17, 0, 5).unwrap(), 1);
        assert_eq!(mod_pow(-3, 3, 7).unwrap(), 1); // -27 = 1 mod 7
        assert!(mod_pow(2, 3, 0).is_err());
    }

    #[test]
    fn mult_order_examples() {
        assert_eq!(mult_order(2, 23).unwrap(), 11);
        assert_eq!(mult_order(2, 257).unwrap(), 16);
        assert_eq!(mult_order(1, 91).unwrap(), 1);
        assert!(mult_order(6, 9).is_err());
        assert!(mult_order(1, 1).is_err());
    }

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker(3, 23), 1);
        assert_eq!(kronecker(2, 23), 1);
        assert_eq!(kronecker(49, 23), 1);
        assert_eq!(kronecker(-23, 3), 1);
        assert_eq!(kronecker(316, 2), 0);
        assert_eq!(kronecker(-23, 2), 1);
        assert_eq!(kronecker(5, 2), -1);
        assert_eq!(kronecker(0, 1), 1);
    }

    #[test]
    fn factorize_examples() {
        let f = factorize(1228).unwrap();
        assert_eq!(f.factors(), &[(2, 2), (307, 1)]);
        assert!(is_squarefree(1229).unwrap());
        assert_eq!(euler_phi(8101).unwrap(), 8100);
        assert!(factorize(0).is_err());
        assert_eq!(factorize(FACTOR_LIMIT + 1), Err(Error::FactorizationIncomplete(FACTOR_LIMIT + 1)));
        // two six-digit primes exercise the rho path
        let f = factorize(999_983 * 999_979).unwrap();
        assert_eq!(f.factors(), &[(999_979, 1), (999_983, 1)]);
        assert_eq!(factorize(1).unwrap().factors(), &[]);
    }

    #[test]
    fn miller_rabin_large() {
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to 2,3,5,7
        assert!(is_prime(2_305_843_009_213_693_951));
    }

    #[test]
    fn divisors_sorted() {
        assert_eq!(factorize(12).unwrap().divisors(), vec![1, 2, 3, 4, 6, 12]);
    }

    #[test]
    fn isqrt_edges() {
        assert_eq!(isqrt(u64::MAX), 4_294_967_295);
        assert_eq!(isqrt(316), 17);
        assert!(is_square(0) && is_square(1) && !is_square(2));
    }
}
