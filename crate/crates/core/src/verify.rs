//! The golden suite: every quoted numeric claim re-derived from scratch, with
//! one pass/fail item per claim group. Items run concurrently; the report
//! order is fixed and the payload carries no timestamps.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::arith::{is_square, kronecker, mod_pow, primes_between};
use crate::catalog::Catalog;
use crate::error::Result;
use crate::group_ring::{admissible_sets, annihilation_certificate, IntElement};
use crate::groups::{FiniteGroup, Group};
use crate::quadratic::forms::principal_represents;
use crate::quadratic::{
    element_ideal_factorization, is_fundamental_discriminant, pell_family_insoluble, represents_principal, PellKind,
    QuadraticField,
};
use crate::rset::{
    biquadratic_certificate, corollary_checks, mt1_certificate, residue_degree, Hypothesis, Overall, Status,
};
use crate::stickelberger::{report_23, Contradiction};

/// Admissible-set enumeration cap used by the suite.
const ENUMERATION_CAP: usize = 10_000;

/// `(p, n, f)`: primes above `p` in `Q(zeta_n)^+` have residue degree `f`.
pub const RESIDUE_DEGREE_CLAIMS: [(u64, u64, u64); 15] = [
    (2, 257, 8),
    (2, 577, 72),
    (2, 1601, 200),
    (5, 8101, 2025),
    (7, 1229, 307),
    (3, 2029, 169),
    (5, 2029, 507),
    (3, 3253, 271),
    (19, 3253, 813),
    (3, 1093, 7),
    (11, 1093, 13),
    (5, 7229, 1807),
    (17, 7229, 139),
    (5, 9029, 61),
    (19, 9029, 2257),
];

#[derive(Debug, Clone, Serialize)]
pub struct VerifyItem {
    pub id: u8,
    pub title: &'static str,
    /// The claim being checked, quoted as stated.
    pub claim: &'static str,
    pub pass: bool,
    /// A discrepancy in the source data that is reported but not fatal.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub known_anomaly: Option<String>,
    pub details: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub items: Vec<VerifyItem>,
    pub passed: bool,
}

pub const ITEM_COUNT: u8 = 8;

/// Runs all items.
pub fn verify_paper(cat: &Catalog) -> VerifyReport {
    let items: Vec<VerifyItem> = (1..=ITEM_COUNT).into_par_iter().map(|id| run_item(cat, id)).collect();
    let passed = items.iter().all(|i| i.pass);
    VerifyReport { items, passed }
}

/// Runs one item by number, `1..=ITEM_COUNT`.
pub fn run_item(cat: &Catalog, id: u8) -> VerifyItem {
    let (title, claim) = match id {
        1 => ("R-set of Q(zeta_23)", "R_{Q(zeta_23)/Q} = {1, 11}"),
        2 => ("real cyclotomic residue degrees", "primes above p in Q(zeta_n)^+ have the stated residue degree"),
        3 => ("Stickelberger non-membership", "theta_11 = sigma_1 + sigma_5 is not in the Stickelberger ideal"),
        4 => ("quadratic field values", "h = 3 for Q(sqrt -23), Q(sqrt 79), Q(sqrt 257), Q(sqrt 1229)"),
        5 => ("Pell families", "x^2 - (n^2+1)y^2 = +-m and x^2 - (n^2+4)y^2 = +-4m have no solutions"),
        6 => ("theta_f(S) annihilators", "theta_f(S) annihilates primes of residue degree f"),
        7 => ("oracle equivalences", "engine agrees with independent brute-force oracles"),
        8 => ("biquadratic fields", "R_{F/Q} and R_{F/Q(sqrt 79)} contain {1, 2}"),
        _ => ("unknown item", ""),
    };
    let outcome = match id {
        1 => item_rset_23(cat),
        2 => item_residue_degrees(),
        3 => item_stickelberger(),
        4 => item_quadratic(),
        5 => item_pell(),
        6 => item_theta(),
        7 => item_oracles(),
        8 => item_biquadratic(cat),
        _ => Ok(Outcome::fail(json!({"error": format!("no item {id}")}))),
    };
    let Outcome { pass, known_anomaly, details } =
        outcome.unwrap_or_else(|e| Outcome::fail(json!({"error": e.to_string()})));
    VerifyItem { id, title, claim, pass, known_anomaly, details }
}

struct Outcome {
    pass: bool,
    known_anomaly: Option<String>,
    details: Value,
}

impl Outcome {
    fn new(pass: bool, details: Value) -> Self {
        Outcome { pass, known_anomaly: None, details }
    }

    fn fail(details: Value) -> Self {
        Outcome::new(false, details)
    }
}

fn hypothesis<'a>(hs: &'a [Hypothesis], name: &str) -> Option<&'a Value> {
    hs.iter().find(|h| h.name == name).and_then(|h| match &h.status {
        Status::Computed { value, .. } | Status::AssumedFromTable { value, .. } => Some(value),
        Status::Failed { .. } => None,
    })
}

fn item_rset_23(cat: &Catalog) -> Result<Outcome> {
    let c = mt1_certificate(cat, 23);
    let hs = &c.hypotheses;
    let det_expected = (BigInt::from(3) * BigInt::from(23).pow(10)).to_string();
    let maillet = hypothesis(hs, "h_q^- by Maillet determinant");
    let checks = [
        ("overall Valid", c.overall == Overall::Valid),
        ("memberships {1, 11}", c.members("Q") == [1, 11]),
        ("2 excluded", c.excluded().contains(&2)),
        ("h(Q(sqrt -23)) = 3", hypothesis(hs, "h(Q(sqrt(-q)))") == Some(&json!(3))),
        ("h_23^- = 3", maillet.map(|v| v["h_minus"] == json!(3)).unwrap_or(false)),
        (
            "|det| = 3 * 23^10",
            maillet
                .and_then(|v| v["determinant"].as_str())
                .map(|d| d.trim_start_matches('-') == det_expected)
                .unwrap_or(false),
        ),
        ("h_23^+ = 1", hypothesis(hs, "h_q^+ from tables") == Some(&json!(1))),
        ("gcd(11, 3) = 1", hypothesis(hs, "gcd((q-1)/2, h(Q(sqrt(-q)))) = 1") == Some(&json!(1))),
        ("Gica prime 3", hypothesis(hs, "Gica prime") == Some(&json!(3))),
        ("x^2 + 23y^2 = 12 insoluble", hypothesis(hs, "x^2 + q y^2 = 4p insoluble").is_some()),
        ("x^2 + 23y^2 in {2, 8} insoluble", hypothesis(hs, "x^2 + q y^2 in {2, 8} insoluble").is_some()),
    ];
    let corollaries = corollary_checks(cat, 23, &c.members("Q"), false)?;
    let consistent = corollaries.iter().all(|k| k.consistent != Some(false));
    let failed: Vec<&str> = checks.iter().filter(|(_, ok)| !ok).map(|(name, _)| *name).collect();
    Ok(Outcome::new(
        failed.is_empty() && consistent,
        json!({
            "members": c.members("Q"),
            "excluded": c.excluded(),
            "overall": c.overall,
            "failed_checks": failed,
            "corollaries_consistent": consistent,
            "corollaries": corollaries,
        }),
    ))
}

fn item_residue_degrees() -> Result<Outcome> {
    let mut rows = Vec::new();
    let mut pass = true;
    for (p, n, f) in RESIDUE_DEGREE_CLAIMS {
        let got = residue_degree(p, n, true)?;
        pass &= got == f;
        rows.push(json!({"p": p, "n": n, "expected": f, "computed": got}));
    }
    Ok(Outcome::new(pass, Value::Array(rows)))
}

fn item_stickelberger() -> Result<Outcome> {
    let r = report_23()?;
    let pattern = r.elimination.refutations.iter().any(|f| {
        f.deductions.iter().any(|d| d.equations == ["s11", "s22"])
            && f.contradiction == Contradiction::ConflictingValues { variable: "a11".into(), first: -1, second: 0 }
    });
    let pass = !r.member_of_tabulated_lattice
        && !r.member_of_generator_lattice
        && r.tabulated_vectors_in_generator_lattice.iter().all(|&b| b)
        && pattern;
    let known_anomaly = (!r.tabulated_basis_duplicates.is_empty()).then(|| {
        let pairs: Vec<String> = r.tabulated_basis_duplicates.iter().map(|(i, j)| format!("I{i} = I{j}")).collect();
        format!(
            "tabulated basis has duplicate index sets ({}); rank {} instead of {}",
            pairs.join(", "),
            r.tabulated_basis_rank,
            r.tabulated_vectors_in_generator_lattice.len()
        )
    });
    Ok(Outcome {
        pass,
        known_anomaly,
        details: json!({
            "member_of_tabulated_lattice": r.member_of_tabulated_lattice,
            "member_of_generator_lattice": r.member_of_generator_lattice,
            "tabulated_vectors_in_generator_lattice": r.tabulated_vectors_in_generator_lattice,
            "tabulated_basis_rank": r.tabulated_basis_rank,
            "generator_rank": r.generator_rank,
            "contradiction_pattern_found": pattern,
            "refutations": r.elimination.refutations.len(),
        }),
    })
}

fn item_quadratic() -> Result<Outcome> {
    let mut details = serde_json::Map::new();
    let mut pass = true;
    for d in [-23, 79, 257, 1229] {
        let h = QuadraticField::new(d)?.class_number()?.wide;
        pass &= h == 3;
        details.insert(format!("h({d})"), json!(h));
    }
    let k79 = QuadraticField::new(79)?;
    let r3 = represents_principal(&k79, 3)?;
    let r2 = represents_principal(&k79, 2)?;
    pass &= !r3.represented && r2.witness == Some(("9".into(), "1".into()));
    details.insert("represents(79, 3)".into(), json!(r3.represented));
    details.insert("represents(79, 2)".into(), json!(r2.witness));
    let m79 = k79.minkowski_bound().floor;
    let m23 = QuadraticField::new(-23)?.minkowski_bound().floor;
    pass &= m79 == 8 && m23 == 3;
    details.insert("minkowski".into(), json!({"79": m79, "-23": m23}));
    let n4 = element_ideal_factorization(&k79, 4, 1)?.norm;
    let n3 = element_ideal_factorization(&k79, 3, 1)?.norm;
    pass &= n4 == -63 && n3 == -70;
    details.insert("norms".into(), json!({"4+sqrt79": n4.to_string(), "3+sqrt79": n3.to_string()}));
    Ok(Outcome::new(pass, Value::Object(details)))
}

fn item_pell() -> Result<Outcome> {
    let mut instances = 0u64;
    let mut solutions = Vec::new();
    for n in 2..=40u64 {
        for m in (1..2 * n).filter(|&m| !is_square(m)) {
            let mut kinds = vec![PellKind::P4];
            if m < n {
                kinds.push(PellKind::P5);
            }
            for kind in kinds {
                instances += 1;
                let c = pell_family_insoluble(kind, n, m)?;
                if !c.insoluble {
                    solutions.push(json!({"kind": kind, "n": n, "m": m, "outcomes": c.outcomes}));
                }
            }
        }
    }
    Ok(Outcome::new(solutions.is_empty(), json!({"instances": instances, "solutions": solutions})))
}

/// The other members of the `H`-coset of `x`.
fn coset_mates(group: &Group, h: &[usize], x: usize) -> Vec<usize> {
    h.iter().map(|&y| group.mul(x, y)).filter(|&z| z != x).collect()
}

fn item_theta() -> Result<Outcome> {
    let mut failures = Vec::new();

    let q8 = FiniteGroup::quaternion();
    let sys = admissible_sets(&q8, 4, ENUMERATION_CAP)?;
    let mut target: Vec<usize> = ["1", "i", "j", "k"].iter().filter_map(|l| q8.find_label(l)).collect();
    target.sort_unstable();
    let q8_ok = sys.sets.iter().any(|s| s.members == target);
    if !q8_ok {
        failures.push(json!("{1, i, j, k} not admissible in Q8 for f = 4"));
    }

    let (mut certified, mut perturbed) = (0u64, 0u64);
    for n in 1..=24usize {
        let g = FiniteGroup::cyclic(n)?;
        for f in (1..=n).filter(|f| n % f == 0) {
            let sys = admissible_sets(&g, f, ENUMERATION_CAP)?;
            let h = sys.h.members().to_vec();
            for s in &sys.sets {
                let cert = annihilation_certificate(&g, f, &s.members)?;
                certified += 1;
                if !cert.pass || cert.multiplier * sys.h.order() != f {
                    failures.push(json!({"group": g.name(), "f": f, "set": cert.set}));
                }
                // swap one element for a coset mate of another member
                if let (Some(&x), Some(&y)) = (s.members.first(), s.members.get(1)) {
                    if let Some(&z) = coset_mates(&g, &h, y).first() {
                        let mut bad: Vec<usize> = s.members.iter().copied().filter(|&e| e != x).collect();
                        bad.push(z);
                        perturbed += 1;
                        if annihilation_certificate(&g, f, &bad)?.pass {
                            failures.push(json!({"group": g.name(), "f": f, "perturbed_passed": bad}));
                        }
                    }
                }
            }
        }
    }

    let mut trace_checks = 0u64;
    for q in (2..=50u64).filter(|&q| is_cyclic_conductor(q)) {
        let g = FiniteGroup::units(q, false)?;
        let order = g.order();
        let trace = IntElement::g_trace(&g);
        for f in (2..=order).filter(|f| order % f == 0) {
            let sys = admissible_sets(&g, f, ENUMERATION_CAP)?;
            for s in &sys.sets {
                trace_checks += 1;
                if IntElement::from_support(&g, &s.members) == trace {
                    failures.push(json!({"conductor": q, "f": f, "theta_is_norm": true}));
                }
            }
        }
    }

    Ok(Outcome::new(
        failures.is_empty(),
        json!({
            "q8_contains_1ijk": q8_ok,
            "certified_sets": certified,
            "perturbed_sets": perturbed,
            "theta_vs_norm_checks": trace_checks,
            "failures": failures,
        }),
    ))
}

/// Prime powers with cyclic unit group: odd `p^r`, 2 and 4.
fn is_cyclic_conductor(q: u64) -> bool {
    if q == 2 || q == 4 {
        return true;
    }
    if q.is_multiple_of(2) {
        return false;
    }
    crate::arith::factorize(q).map(|f| f.factors().len() == 1).unwrap_or(false)
}

fn item_oracles() -> Result<Outcome> {
    let mut mismatches = Vec::new();
    let mut counts = [0u64; 3];
    for disc in -9_999..0i64 {
        if is_fundamental_discriminant(disc) {
            counts[0] += 1;
            let h = QuadraticField::from_discriminant(disc)?.class_number()?.wide;
            let oracle = oracle::imaginary_class_number(disc);
            if h != oracle {
                mismatches.push(json!({"class_number": disc, "engine": h, "oracle": oracle}));
            }
        }
    }
    for p in primes_between(3, 499) {
        for a in -60i64..60 {
            counts[1] += 1;
            let e = mod_pow(a, (p - 1) / 2, p)?;
            let euler = if a.rem_euclid(p as i64) == 0 {
                0
            } else if e == 1 {
                1
            } else {
                -1
            };
            if kronecker(a, p) != euler {
                mismatches.push(json!({"kronecker": [a, p]}));
            }
        }
    }
    for disc in (5..2000i64).filter(|&d| is_fundamental_discriminant(d)) {
        let k = QuadraticField::from_discriminant(disc)?;
        let scale = if disc % 2 == 0 { 1 } else { 4 };
        let mut m = 1i64;
        while 4 * m * m < disc {
            for t in [m, -m] {
                counts[2] += 1;
                let r = represents_principal(&k, t)?.represented;
                let forms = principal_represents(disc as i128, t as i128)?.is_some();
                let brute = oracle::bounded_norm_search(k.d, scale * t, 200_000);
                if r != forms || brute.is_some_and(|b| b != r) {
                    mismatches.push(json!({"represents": [disc, t]}));
                }
            }
            m += 1;
        }
    }
    Ok(Outcome::new(
        mismatches.is_empty(),
        json!({
            "class_numbers": counts[0],
            "kronecker_pairs": counts[1],
            "representations": counts[2],
            "mismatches": mismatches,
        }),
    ))
}

fn item_biquadratic(cat: &Catalog) -> Result<Outcome> {
    let rows_ok = cat.u_table.len() == 63
        && cat
            .u_table
            .iter()
            .all(|r| r.u.rem_euclid(3) == 2 && crate::arith::is_squarefree_signed(r.u).unwrap_or(false));
    let c = biquadratic_certificate(cat, 2);
    let base = format!("Q(sqrt {})", cat.biquadratic_base);
    let pipeline = [
        "splitting of 2",
        "splitting of 3",
        "splitting of 5",
        "splitting of 7",
        "prime above 2 principal (order divides gcd(2, 3))",
        "prime above 3 nonprincipal by the factorization chain",
        "x^2 - 79y^2 = +-3 insoluble",
    ];
    let missing: Vec<&str> = pipeline.iter().copied().filter(|s| hypothesis(&c.hypotheses, s).is_none()).collect();
    let abs: BTreeSet<u64> = c.members("Q").into_iter().collect();
    let rel: BTreeSet<u64> = c.members(&base).into_iter().collect();
    let pass = rows_ok
        && c.overall == Overall::Conditional
        && abs.is_superset(&BTreeSet::from([1, 2]))
        && rel.is_superset(&BTreeSet::from([1, 2]))
        && missing.is_empty();
    Ok(Outcome::new(
        pass,
        json!({
            "rows": cat.u_table.len(),
            "rows_valid": rows_ok,
            "overall": c.overall,
            "members_over_Q": abs,
            "members_over_base": rel,
            "pipeline_steps_missing": missing,
        }),
    ))
}

/// Brute-force oracles written independently of the quadratic engine.
pub mod oracle {
    use std::collections::BTreeSet;

    use num_bigint::BigInt;
    use num_integer::{Integer, Roots};
    use num_traits::{One, ToPrimitive, Zero};

    /// Gauss reduction of a positive definite form.
    pub fn gauss_reduce(mut a: i64, mut b: i64, mut c: i64) -> (i64, i64, i64) {
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

    /// Distinct reduced forms among primitive `(a, b, c)` with
    /// `3a^2 <= |D|`, `|b| <= a`.
    pub fn imaginary_class_number(disc: i64) -> u64 {
        let n = -disc;
        let mut seen = BTreeSet::new();
        let mut a = 1;
        while 3 * a * a <= n {
            for b in -a..=a {
                if (b * b - disc) % (4 * a) == 0 {
                    let c = (b * b - disc) / (4 * a);
                    if a.gcd(&b).gcd(&c) == 1 {
                        seen.insert(gauss_reduce(a, b, c));
                    }
                }
            }
            a += 1;
        }
        seen.len() as u64
    }

    /// Fundamental solution of `x^2 - d y^2 = 1` from the expansion of `sqrt d`.
    pub fn fundamental_pell(d: i64) -> (BigInt, BigInt) {
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
    /// `y^2 <= y1^2 |n| / (2 (x1 +- 1))`; `None` when the bound exceeds `limit`.
    pub fn bounded_norm_search(d: i64, n: i64, limit: u64) -> Option<bool> {
        let (x1, y1) = fundamental_pell(d);
        let shift = if n > 0 { 1 } else { -1 };
        let bound_sq = &y1 * &y1 * BigInt::from(n.abs()) / (BigInt::from(2) * (&x1 + BigInt::from(shift)));
        let bound = bound_sq.sqrt().to_u64().filter(|&b| b <= limit)?;
        Some((0..=bound).any(|y| {
            let rhs = n as i128 + d as i128 * (y as i128) * (y as i128);
            rhs >= 0 && {
                let x = (rhs as u128).sqrt();
                x * x == rhs as u128
            }
        }))
    }
}
