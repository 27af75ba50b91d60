//! Acceptance criteria 1 to 8, one PASS/FAIL line each with the time taken
//! against its limit. Expected values are literals; the checks call the
//! library directly. Run with `--nocapture` to see the lines.

use std::time::{Duration, Instant};

use annihil::arith::{is_square, is_squarefree_signed};
use annihil::catalog::embedded;
use annihil::quadratic::{
    element_ideal_factorization, pell_family_insoluble, represents_principal, PellKind, QuadraticField,
};
use annihil::rset::{biquadratic_certificate, minus_class_number, mt1_certificate, residue_degree, Overall, Status};
use annihil::stickelberger::{report_23, Contradiction};
use annihil::verify::run_item;
use num_bigint::BigInt;

struct Criterion {
    id: u8,
    limit: Duration,
    check: fn() -> Result<(), String>,
}

fn ensure(ok: bool, what: &str) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what.to_string())
    }
}

fn hypothesis_value(c: &annihil::rset::RSetCertificate, name: &str) -> Option<serde_json::Value> {
    c.hypotheses.iter().find(|h| h.name == name).and_then(|h| match &h.status {
        Status::Computed { value, .. } => Some(value.clone()),
        _ => None,
    })
}

fn criterion_1() -> Result<(), String> {
    let c = mt1_certificate(embedded(), 23);
    ensure(c.overall == Overall::Valid, "mt1(23) is not Valid")?;
    ensure(c.members("Q") == [1, 11], "memberships differ from {1, 11}")?;
    ensure(c.excluded().contains(&2), "2 is not excluded")?;
    ensure(
        QuadraticField::new(-23).map_err(|e| e.to_string())?.class_number().map_err(|e| e.to_string())?.wide == 3,
        "h(Q(sqrt -23)) != 3",
    )?;
    let m = minus_class_number(23).map_err(|e| e.to_string())?;
    let det: BigInt = m.determinant.parse().map_err(|_| "bad determinant")?;
    ensure(m.h_minus == 3, "h_23^- != 3")?;
    ensure(det.magnitude() == (BigInt::from(3) * BigInt::from(23).pow(10)).magnitude(), "|det| != 3 * 23^10")?;
    ensure(hypothesis_value(&c, "h_q^+ from tables") == Some(1.into()), "h_23^+ != 1")?;
    ensure(hypothesis_value(&c, "gcd((q-1)/2, h(Q(sqrt(-q)))) = 1") == Some(1.into()), "gcd(11, 3) != 1")?;
    ensure(hypothesis_value(&c, "Gica prime") == Some(3.into()), "Gica prime != 3")?;
    for t in [12u64, 2, 8] {
        let solvable = (0..=2u64).any(|y| 23 * y * y <= t && is_square(t - 23 * y * y));
        ensure(!solvable, "x^2 + 23y^2 hits {12, 2, 8}")?;
    }
    Ok(())
}

fn criterion_2() -> Result<(), String> {
    let claims = [
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
    for (p, n, f) in claims {
        let got = residue_degree(p, n, true).map_err(|e| e.to_string())?;
        ensure(got == f, &format!("({p}, {n}) gave {got}, expected {f}"))?;
    }
    Ok(())
}

fn criterion_3() -> Result<(), String> {
    let r = report_23().map_err(|e| e.to_string())?;
    ensure(!r.member_of_tabulated_lattice, "sigma_1 + sigma_5 in the tabulated lattice")?;
    ensure(!r.member_of_generator_lattice, "sigma_1 + sigma_5 in the generator lattice")?;
    ensure(r.tabulated_vectors_in_generator_lattice.len() == 12, "expected f_1..f_11 and N")?;
    ensure(
        r.tabulated_vectors_in_generator_lattice.iter().all(|&b| b),
        "a tabulated vector is outside the generator lattice",
    )?;
    let pattern = r.elimination.refutations.iter().any(|f| {
        f.deductions.iter().any(|d| d.equations == ["s11", "s22"])
            && f.contradiction == Contradiction::ConflictingValues { variable: "a11".into(), first: -1, second: 0 }
    });
    ensure(pattern, "contradiction pattern not found")?;
    // the anomaly is reported, not fatal
    ensure(r.tabulated_basis_rank == 11 && r.tabulated_basis_duplicates == [(1, 4)], "basis rank report changed")?;
    Ok(())
}

fn criterion_4() -> Result<(), String> {
    let err = |e: annihil::Error| e.to_string();
    for d in [-23, 79, 257, 1229] {
        ensure(QuadraticField::new(d).map_err(err)?.class_number().map_err(err)?.wide == 3, &format!("h({d}) != 3"))?;
    }
    let k = QuadraticField::new(79).map_err(err)?;
    ensure(!represents_principal(&k, 3).map_err(err)?.represented, "79 represents 3")?;
    let two = represents_principal(&k, 2).map_err(err)?;
    ensure(two.witness == Some(("9".into(), "1".into())), "witness for 2 is not (9, 1)")?;
    ensure(k.minkowski_bound().floor == 8, "Minkowski floor for 79 != 8")?;
    ensure(QuadraticField::new(-23).map_err(err)?.minkowski_bound().floor == 3, "Minkowski floor for -23 != 3")?;
    ensure(element_ideal_factorization(&k, 4, 1).map_err(err)?.norm == -63, "N(4 + sqrt 79) != -63")?;
    ensure(element_ideal_factorization(&k, 3, 1).map_err(err)?.norm == -70, "N(3 + sqrt 79) != -70")?;
    Ok(())
}

fn criterion_5() -> Result<(), String> {
    let mut instances = 0;
    for n in 2..=40u64 {
        for m in (1..2 * n).filter(|&m| !is_square(m)) {
            instances += 1;
            let c = pell_family_insoluble(PellKind::P4, n, m).map_err(|e| e.to_string())?;
            ensure(c.insoluble, &format!("P4 n = {n}, m = {m} has a solution"))?;
            if m < n {
                instances += 1;
                let c = pell_family_insoluble(PellKind::P5, n, m).map_err(|e| e.to_string())?;
                ensure(c.insoluble, &format!("P5 n = {n}, m = {m} has a solution"))?;
            }
        }
    }
    ensure(instances > 1500, "too few instances")
}

fn criterion_6() -> Result<(), String> {
    let item = run_item(embedded(), 6);
    ensure(item.pass, &item.details.to_string())?;
    ensure(item.details["q8_contains_1ijk"] == true, "{1, i, j, k} missing")?;
    ensure(item.details["perturbed_sets"].as_u64().unwrap_or(0) > 0, "no perturbed sets tried")
}

fn criterion_7() -> Result<(), String> {
    let item = run_item(embedded(), 7);
    ensure(item.pass, &item.details["mismatches"].to_string())?;
    // fundamental discriminants -10^4 < D < 0
    ensure(item.details["class_numbers"] == 3_043, "unexpected discriminant count")
}

fn criterion_8() -> Result<(), String> {
    let cat = embedded();
    ensure(cat.u_table.len() == 63, "u-table does not have 63 rows")?;
    for row in &cat.u_table {
        ensure(row.u.rem_euclid(3) == 2, &format!("u = {} is not 2 mod 3", row.u))?;
        ensure(is_squarefree_signed(row.u).unwrap_or(false), &format!("u = {} is not squarefree", row.u))?;
    }
    let c = biquadratic_certificate(cat, 2);
    ensure(c.overall == Overall::Conditional, "biquadratic(2) is not Conditional")?;
    ensure(c.members("Q").starts_with(&[1, 2]), "R_{F/Q} lacks {1, 2}")?;
    ensure(c.members("Q(sqrt 79)").starts_with(&[1, 2]), "R_{F/Q(sqrt 79)} lacks {1, 2}")?;
    for step in ["splitting of 2", "splitting of 3", "splitting of 5", "splitting of 7", "x^2 - 79y^2 = +-3 insoluble"]
    {
        ensure(hypothesis_value(&c, step).is_some(), &format!("step {step:?} missing"))?;
    }
    Ok(())
}

#[test]
fn acceptance_criteria() {
    let criteria = [
        Criterion { id: 1, limit: Duration::from_secs(1), check: criterion_1 },
        Criterion { id: 2, limit: Duration::from_secs(5), check: criterion_2 },
        Criterion { id: 3, limit: Duration::from_secs(1), check: criterion_3 },
        Criterion { id: 4, limit: Duration::from_secs(1), check: criterion_4 },
        Criterion { id: 5, limit: Duration::from_secs(10), check: criterion_5 },
        Criterion { id: 6, limit: Duration::from_secs(20), check: criterion_6 },
        Criterion { id: 7, limit: Duration::from_secs(20), check: criterion_7 },
        Criterion { id: 8, limit: Duration::from_secs(2), check: criterion_8 },
    ];
    let mut failures = Vec::new();
    for c in &criteria {
        let start = Instant::now();
        let result = (c.check)();
        let elapsed = start.elapsed();
        let verdict = match (&result, elapsed <= c.limit) {
            (Ok(()), true) => "PASS".to_string(),
            (Ok(()), false) => format!("FAIL (over time limit {:?})", c.limit),
            (Err(why), _) => format!("FAIL ({why})"),
        };
        println!("criterion {}: {verdict} [{:.3}s / {}s]", c.id, elapsed.as_secs_f64(), c.limit.as_secs());
        if !verdict.starts_with("PASS") {
            failures.push(c.id);
        }
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
