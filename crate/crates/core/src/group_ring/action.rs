//! Symbolic action of `Z[G]` on ideals supported on one Galois orbit of primes.
//!
//! The primes above a fixed unramified prime are indexed by the left cosets
//! `gD` of their decomposition group `D`, with `sigma(gP) = (sigma g)P`. A
//! formal product of these primes is its exponent vector, so the action of a
//! group-ring element is exact integer linear algebra.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::{cyclic_subgroups_of_order, intersect_subgroups, same_group, Group, Subgroup};

use super::admissible::{factor_through, WitnessView};
use super::element::IntElement;

/// Exponents of the primes `gP`, one per left coset of the decomposition group.
#[derive(Debug, Clone, PartialEq)]
pub struct IdealExponentVector {
    decomposition: Subgroup,
    orbit: Vec<Vec<usize>>,
    coset_of: Vec<usize>,
    exponents: Vec<BigInt>,
}

impl IdealExponentVector {
    pub fn zero(decomposition: &Subgroup) -> Self {
        let (orbit, coset_of) = decomposition.coset_map();
        let exponents = vec![BigInt::zero(); orbit.len()];
        IdealExponentVector { decomposition: decomposition.clone(), orbit, coset_of, exponents }
    }

    /// The prime `P` itself: exponent 1 at the coset `D`.
    pub fn prime(decomposition: &Subgroup) -> Self {
        let mut v = Self::zero(decomposition);
        let home = v.coset_of[decomposition.group().identity()];
        v.exponents[home] = BigInt::one();
        v
    }

    pub fn from_exponents(decomposition: &Subgroup, exponents: Vec<BigInt>) -> Result<Self> {
        let mut v = Self::zero(decomposition);
        if exponents.len() != v.exponents.len() {
            return Err(Error::domain(format!(
                "{} exponents for an orbit of size {}",
                exponents.len(),
                v.exponents.len()
            )));
        }
        v.exponents = exponents;
        Ok(v)
    }

    pub fn group(&self) -> &Group {
        self.decomposition.group()
    }

    pub fn decomposition(&self) -> &Subgroup {
        &self.decomposition
    }

    /// Orbit labels: the sorted left cosets `gD`.
    pub fn orbit(&self) -> &[Vec<usize>] {
        &self.orbit
    }

    pub fn exponents(&self) -> &[BigInt] {
        &self.exponents
    }

    /// Whether every exponent equals `c`, i.e. the vector is the extension of
    /// the rational prime raised to `c`.
    pub fn is_constant(&self, c: &BigInt) -> bool {
        self.exponents.iter().all(|e| e == c)
    }
}

/// `theta(a) = prod sigma(a)^{n_sigma}` on exponent vectors.
pub fn act(theta: &IntElement, v: &IdealExponentVector) -> Result<IdealExponentVector> {
    let g = v.group();
    if !same_group(theta.group(), g) {
        return Err(Error::GroupMismatch);
    }
    let mut out = IdealExponentVector::zero(&v.decomposition);
    for sigma in theta.support() {
        let n = theta.coeff(sigma);
        for (c, coset) in v.orbit.iter().enumerate() {
            if v.exponents[c].is_zero() {
                continue;
            }
            let target = v.coset_of[g.mul(sigma, coset[0])];
            out.exponents[target] += n * &v.exponents[c];
        }
    }
    Ok(out)
}

/// The chain `theta = N_T * theta'`, `N_T(P) = p O_L`, `theta'(P) = P^{[D:H]}`
/// checked for one decomposition group `D`.
#[derive(Debug, Clone, Serialize)]
pub struct DecompositionCheck {
    pub decomposition: Vec<String>,
    pub witness: Option<WitnessView>,
    /// `theta = N_T * theta'` in the group ring.
    pub factorization_holds: bool,
    /// `N_T` sends `P` to the extension of the rational prime.
    pub trace_image_is_extension: bool,
    /// `theta'` fixes `P` up to the exponent `[D:H]`.
    pub inner_image_is_power: bool,
    /// Exponents of `theta(P)` over the orbit.
    pub image: Vec<i64>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnnihilationCertificate {
    pub f: usize,
    pub h_order: usize,
    /// `f / |H|`: `theta(P) = (p O_L)^multiplier` for every `D`.
    pub multiplier: usize,
    pub set: Vec<String>,
    pub is_transversal: bool,
    pub checks: Vec<DecompositionCheck>,
    pub pass: bool,
}

/// Verifies symbolically that `theta_f(S)` sends every prime of residue degree
/// `f` to a power of an extended ideal, for every cyclic `D` of order `f`.
pub fn annihilation_certificate(group: &Group, f: usize, set: &[usize]) -> Result<AnnihilationCertificate> {
    let subgroups = cyclic_subgroups_of_order(group, f);
    if subgroups.is_empty() {
        return Err(Error::NotResidueDegreeCandidate(f));
    }
    if set.iter().any(|&s| s >= group.order()) {
        return Err(Error::domain("set element out of range"));
    }
    let h = intersect_subgroups(&subgroups)?;
    let multiplier = f / h.order();
    let big_multiplier = BigInt::from(multiplier);
    let theta = IntElement::from_support(group, set);
    let is_transversal = h.is_left_transversal(set);

    let mut checks = Vec::with_capacity(subgroups.len());
    for d in &subgroups {
        let prime = IdealExponentVector::prime(d);
        let image = act(&theta, &prime)?;
        let image_ok = image.is_constant(&big_multiplier);
        let mut check = DecompositionCheck {
            decomposition: d.labels(),
            witness: None,
            factorization_holds: false,
            trace_image_is_extension: false,
            inner_image_is_power: false,
            image: image.exponents.iter().map(|e| i64::try_from(e).unwrap_or(i64::MAX)).collect(),
            pass: false,
        };
        if is_transversal {
            if let Some((t, t_prime)) = factor_through(set, d, &h) {
                let n_t = IntElement::from_support(group, &t);
                let inner = IntElement::from_support(group, &t_prime);
                check.factorization_holds = n_t.mul(&inner)? == theta;
                check.trace_image_is_extension = act(&n_t, &prime)?.is_constant(&BigInt::one());
                let inner_image = act(&inner, &prime)?;
                check.inner_image_is_power = inner_image == {
                    let mut p = prime.clone();
                    p.exponents.iter_mut().for_each(|e| *e *= &big_multiplier);
                    p
                };
                check.witness = Some(super::admissible::Witness { subgroup: d.clone(), t, t_prime }.view());
            }
        }
        check.pass =
            check.factorization_holds && check.trace_image_is_extension && check.inner_image_is_power && image_ok;
        checks.push(check);
    }
    let pass = is_transversal && checks.iter().all(|c| c.pass);
    Ok(AnnihilationCertificate {
        f,
        h_order: h.order(),
        multiplier,
        set: set.iter().map(|&s| group.label(s).to_string()).collect(),
        is_transversal,
        checks,
        pass,
    })
}

/// Lifts a 0/1 element `sum sigma_i` of `Z[G]` to `sum_i sum_j s_i tau_j` in
/// `Z[E]`, where `quotient: E -> G` has kernel `kernel = {tau_j}` and `s_i` is
/// the smallest preimage of `sigma_i`.
pub fn lift_annihilator(theta: &IntElement, quotient: &[usize], kernel: &Subgroup) -> Result<IntElement> {
    let small = theta.group();
    let big = kernel.group();
    if quotient.len() != big.order() || quotient.iter().any(|&x| x >= small.order()) {
        return Err(Error::domain("quotient map has the wrong shape"));
    }
    if !theta.is_zero_one() {
        return Err(Error::domain("only 0/1 elements can be lifted"));
    }
    for a in big.elements() {
        for b in big.elements() {
            if quotient[big.mul(a, b)] != small.mul(quotient[a], quotient[b]) {
                return Err(Error::domain("quotient map is not a homomorphism"));
            }
        }
    }
    let mut preimage = vec![None; small.order()];
    for x in big.elements() {
        preimage[quotient[x]].get_or_insert(x);
    }
    if preimage.iter().any(Option::is_none) {
        return Err(Error::domain("quotient map is not surjective"));
    }
    let e = small.identity();
    let kernel_ok = big.elements().all(|x| (quotient[x] == e) == kernel.contains(x));
    if !kernel_ok {
        return Err(Error::domain("supplied subgroup is not the kernel of the quotient map"));
    }
    let support: Vec<usize> = theta
        .support()
        .into_iter()
        .flat_map(|s| {
            let lift = preimage[s].expect("checked surjective");
            kernel.members().iter().map(move |&t| big.mul(lift, t))
        })
        .collect();
    Ok(IntElement::from_support(big, &support))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::mod_pow;
    use crate::groups::FiniteGroup;

    fn residues(g: &Group, rs: &[i64]) -> Vec<usize> {
        rs.iter().map(|&r| g.element_of_residue(r).unwrap()).collect()
    }

    #[test]
    fn trace_sends_prime_to_extension() {
        let g = FiniteGroup::units(23, false).unwrap();
        let d = crate::groups::decomposition_subgroup_in(&g, 2).unwrap();
        let p = IdealExponentVector::prime(&d);
        let image = act(&IntElement::g_trace(&g), &p).unwrap();
        assert!(image.is_constant(&BigInt::from(11)));
        let theta = IntElement::from_support(&g, &residues(&g, &[1, 5]));
        assert_eq!(act(&theta, &p).unwrap().exponents(), &[BigInt::one(), BigInt::one()]);
        let s5 = IntElement::basis(&g, g.element_of_residue(5).unwrap());
        assert_eq!(act(&s5, &p).unwrap().exponents(), &[BigInt::zero(), BigInt::one()]);
    }

    #[test]
    fn certificates_for_examples() {
        let g = FiniteGroup::units(23, false).unwrap();
        let cert = annihilation_certificate(&g, 11, &residues(&g, &[1, 5])).unwrap();
        assert!(cert.pass);
        assert_eq!(cert.multiplier, 1);

        let q8 = FiniteGroup::quaternion();
        let set: Vec<usize> = ["1", "i", "j", "k"].iter().map(|l| q8.find_label(l).unwrap()).collect();
        let cert = annihilation_certificate(&q8, 4, &set).unwrap();
        assert!(cert.pass);
        assert_eq!(cert.checks.len(), 3);
        assert_eq!(cert.multiplier, 2);

        let c6 = FiniteGroup::cyclic(6).unwrap();
        let all: Vec<usize> = c6.elements().collect();
        let cert = annihilation_certificate(&c6, 1, &all).unwrap();
        assert!(cert.pass && cert.multiplier == 1);
    }

    #[test]
    fn non_transversal_fails() {
        let g = FiniteGroup::units(23, false).unwrap();
        let cert = annihilation_certificate(&g, 11, &residues(&g, &[1, 2])).unwrap();
        assert!(!cert.pass);
        assert!(cert.checks.iter().any(|c| !c.pass));
    }

    #[test]
    fn lift_through_order_three_kernel() {
        // C66 -> (Z/23)^*, k -> 5^k; 5 generates (Z/23)^*
        let big = FiniteGroup::cyclic(66).unwrap();
        let small = FiniteGroup::units(23, false).unwrap();
        let quotient: Vec<usize> =
            (0..66u64).map(|k| small.element_of_residue(mod_pow(5, k, 23).unwrap() as i64).unwrap()).collect();
        let kernel = Subgroup::cyclic(&big, 22);
        let theta = IntElement::from_support(&small, &residues(&small, &[1, 5]));
        let lifted = lift_annihilator(&theta, &quotient, &kernel).unwrap();
        assert_eq!(lifted.to_text(), "1*s0 + 1*s1 + 1*s22 + 1*s23 + 1*s44 + 1*s45");

        let n = lift_annihilator(&IntElement::g_trace(&small), &quotient, &kernel).unwrap();
        assert!(n.is_trace());

        let wrong = Subgroup::cyclic(&big, 33);
        assert!(lift_annihilator(&theta, &quotient, &wrong).is_err());
    }

    #[test]
    fn lift_through_trivial_kernel() {
        let g = FiniteGroup::units(23, false).unwrap();
        let identity: Vec<usize> = g.elements().collect();
        let theta = IntElement::from_support(&g, &residues(&g, &[1, 5]));
        let lifted = lift_annihilator(&theta, &identity, &Subgroup::trivial(&g)).unwrap();
        assert_eq!(lifted, theta);
    }
}
