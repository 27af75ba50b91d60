//! Property-based checks of the algebraic invariants.

use annihil::arith::{euler_phi, gcd, kronecker, mult_order};
use annihil::group_ring::{admissible_sets, annihilation_certificate, IntElement};
use annihil::groups::{cyclic_subgroups_of_order, FiniteGroup, Group, Subgroup};
use annihil::hnf::{hnf, membership, Matrix};
use annihil::rset::residue_degree;
use annihil::stickelberger::{scaled_coefficient_sum, stickelberger_element};
use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

fn element(g: &Group, coeffs: &[i64]) -> IntElement {
    let v = (0..g.order()).map(|i| BigInt::from(coeffs[i % coeffs.len()])).collect();
    IntElement::from_coeffs(g, v).unwrap()
}

fn group_strategy() -> impl Strategy<Value = Group> {
    prop_oneof![
        (1usize..=12).prop_map(|n| FiniteGroup::cyclic(n).unwrap()),
        (3u64..=40).prop_map(|n| FiniteGroup::units(n, false).unwrap()),
        Just(FiniteGroup::quaternion()),
    ]
}

fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    a.iter()
        .map(|row| (0..b[0].len()).map(|j| row.iter().zip(b).fold(BigInt::zero(), |s, (x, r)| s + x * &r[j])).collect())
        .collect()
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    proptest::collection::vec(proptest::collection::vec(-6i64..=6, cols), rows)
        .prop_map(|m| m.into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn group_axioms(g in group_strategy()) {
        let e = g.identity();
        for a in g.elements() {
            prop_assert_eq!(g.mul(a, e), a);
            prop_assert_eq!(g.mul(a, g.inv(a)), e);
            prop_assert_eq!(g.order() % g.element_order(a), 0);
            for b in g.elements() {
                for c in g.elements().step_by(3) {
                    prop_assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
                }
            }
        }
    }

    #[test]
    fn group_ring_ring_laws(
        g in group_strategy(),
        x in proptest::collection::vec(-5i64..=5, 1..8),
        y in proptest::collection::vec(-5i64..=5, 1..8),
        z in proptest::collection::vec(-5i64..=5, 1..8),
    ) {
        let (x, y, z) = (element(&g, &x), element(&g, &y), element(&g, &z));
        prop_assert_eq!(x.mul(&y).unwrap().mul(&z).unwrap(), x.mul(&y.mul(&z).unwrap()).unwrap());
        prop_assert_eq!(
            x.mul(&y.add(&z).unwrap()).unwrap(),
            x.mul(&y).unwrap().add(&x.mul(&z).unwrap()).unwrap()
        );
        // N absorbs: x * N = (sum of coefficients) N
        let trace = IntElement::g_trace(&g);
        let sum: BigInt = x.coeffs().iter().sum();
        prop_assert_eq!(x.mul(&trace).unwrap(), trace.scalar_mul(&sum));
        prop_assert!(x.sub(&x).unwrap().is_zero());
    }

    #[test]
    fn element_text_round_trips(g in group_strategy(), x in proptest::collection::vec(-9i64..=9, 1..8)) {
        let x = element(&g, &x);
        let text = if x.is_zero() { "0".to_string() } else { x.to_text() };
        prop_assert_eq!(IntElement::parse(&g, &text).unwrap(), x);
    }

    #[test]
    fn hnf_is_idempotent_and_transform_is_exact(m in matrix(4, 5)) {
        let h = hnf(&m, 5);
        prop_assert_eq!(mat_mul(&h.transform, &m), h.rows.clone());
        let again = hnf(&h.rows, 5);
        prop_assert_eq!(&again.rows, &h.rows);
        // every input row is a member
        for row in &m {
            prop_assert!(membership(&h, row).is_member());
        }
    }

    #[test]
    fn hnf_is_invariant_under_unimodular_row_operations(
        m in matrix(4, 5),
        i in 0usize..4,
        j in 0usize..4,
        k in -4i64..=4,
    ) {
        let mut n = m.clone();
        if i != j {
            let add: Vec<BigInt> = n[j].iter().map(|x| x * k).collect();
            n[i].iter_mut().zip(add).for_each(|(a, b)| *a += b);
        }
        n.swap(0, 3);
        n[1].iter_mut().for_each(|x| *x = -x.clone());
        prop_assert_eq!(hnf(&m, 5).rows, hnf(&n, 5).rows);
    }

    #[test]
    fn residue_degree_is_an_order(n in 3u64..500, p in prop::sample::select(vec![2u64, 3, 5, 7, 11, 13])) {
        prop_assume!(gcd(n, p) == 1);
        let f = residue_degree(p, n, false).unwrap();
        prop_assert_eq!(f, mult_order(p, n).unwrap());
        prop_assert_eq!(euler_phi(n).unwrap() % f, 0);
        let fr = residue_degree(p, n, true).unwrap();
        prop_assert!(f == fr || f == 2 * fr);
    }

    #[test]
    fn kronecker_is_multiplicative(a in -200i64..200, b in -200i64..200, n in (1u64..200).prop_map(|k| 2 * k + 1)) {
        prop_assert_eq!(kronecker(a * b, n), kronecker(a, n) * kronecker(b, n));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn admissible_sets_certify(n in 2usize..=16, pick in 0usize..8) {
        let g = FiniteGroup::cyclic(n).unwrap();
        let divisors: Vec<usize> = (1..=n).filter(|f| n % f == 0).collect();
        let f = divisors[pick % divisors.len()];
        let sys = admissible_sets(&g, f, 500).unwrap();
        prop_assert!(!sys.sets.is_empty());
        for s in &sys.sets {
            prop_assert_eq!(s.members.len() * sys.h.order(), n);
            let cert = annihilation_certificate(&g, f, &s.members).unwrap();
            prop_assert!(cert.pass);
            prop_assert_eq!(cert.multiplier * cert.h_order, f);
        }
    }

    #[test]
    fn decomposition_groups_are_cyclic_of_order_f(n in 3u64..60) {
        let g = FiniteGroup::units(n, false).unwrap();
        for f in (1..=g.order()).filter(|f| g.order().is_multiple_of(*f)) {
            for d in cyclic_subgroups_of_order(&g, f) {
                prop_assert_eq!(d.order(), f);
                let gen = d.generator().unwrap();
                prop_assert_eq!(g.element_order(gen), f);
                prop_assert_eq!(Subgroup::cyclic(&g, gen), d);
            }
        }
    }

    #[test]
    fn stickelberger_coefficient_sum(p in prop::sample::select(vec![3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31])) {
        let theta = stickelberger_element(p).unwrap();
        prop_assert_eq!(scaled_coefficient_sum(&theta, p), BigInt::from(p * (p - 1) / 2));
        prop_assert!(theta.coeffs().iter().all(|c| (c * BigInt::from(p)).is_integer()));
    }
}
