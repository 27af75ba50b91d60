//! The Stickelberger ideal of `Q(zeta_p)` as an integer lattice in `Z[G]`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::arith::{is_prime, mod_inverse};
use crate::catalog;
use crate::error::{Error, Result};
use crate::group_ring::{Coefficient, IntElement, RatElement};
use crate::groups::{FiniteGroup, Group};
use crate::hnf::{hnf, membership, Hnf, Membership};

fn check_prime(p: u64) -> Result<()> {
    if p < 3 || !is_prime(p) {
        return Err(Error::domain(format!("{p} is not an odd prime")));
    }
    Ok(())
}

/// `theta = (1/p) sum_{a=1}^{p-1} a sigma_a^{-1}` over `(Z/pZ)^*`.
pub fn stickelberger_element(p: u64) -> Result<RatElement> {
    check_prime(p)?;
    let g = FiniteGroup::units(p, false)?;
    stickelberger_in(&g, p)
}

fn stickelberger_in(g: &Group, p: u64) -> Result<RatElement> {
    let mut coeffs = vec![BigRational::zero(); g.order()];
    for a in 1..p {
        let inv = mod_inverse(a, p).expect("p prime");
        let idx = g.element_of_residue(inv as i64).expect("unit residue");
        coeffs[idx] = BigRational::new(BigInt::from(a), BigInt::from(p));
    }
    RatElement::from_coeffs(g, coeffs)
}

/// A sublattice of `Z[G]` for `G = (Z/pZ)^*`, coordinates in ascending
/// residue order `sigma_1, ..., sigma_{p-1}`.
#[derive(Debug, Clone)]
pub struct StickelbergerLattice {
    pub p: u64,
    pub group: Group,
    pub names: Vec<String>,
    pub generators: Vec<IntElement>,
    pub hnf: Hnf,
}

impl StickelbergerLattice {
    pub fn from_generators(group: &Group, p: u64, names: Vec<String>, generators: Vec<IntElement>) -> Self {
        let rows: Vec<Vec<BigInt>> = generators.iter().map(IntElement::to_vec).collect();
        let hnf = hnf(&rows, group.order());
        StickelbergerLattice { p, group: group.clone(), names, generators, hnf }
    }

    pub fn rank(&self) -> usize {
        self.hnf.rank()
    }

    pub fn to_json(&self) -> Value {
        let m = |rows: &[Vec<BigInt>]| -> Value {
            rows.iter().map(|r| r.iter().map(Coefficient::to_json).collect::<Vec<_>>()).collect()
        };
        let basis: Vec<Vec<BigInt>> = self.generators.iter().map(IntElement::to_vec).collect();
        json!({
            "p": self.p,
            "columns": self.group.elements().map(|g| self.group.label(g).to_string()).collect::<Vec<_>>(),
            "generators": self.names,
            "basis": m(&basis),
            "hnf": m(&self.hnf.rows),
            "rank": self.rank(),
        })
    }
}

/// Lattice spanned by `(c - sigma_c) theta` for `2 <= c <= p + 1`, `p ∤ c`.
///
/// `c = p + 1` contributes `p * theta`, which together with the others spans
/// the whole Stickelberger ideal.
pub fn generator_lattice(p: u64) -> Result<StickelbergerLattice> {
    check_prime(p)?;
    let g = FiniteGroup::units(p, false)?;
    let theta = stickelberger_in(&g, p)?;
    let mut names = Vec::new();
    let mut gens = Vec::new();
    for c in (2..=p + 1).filter(|c| c % p != 0) {
        let sigma_c = RatElement::basis(&g, g.element_of_residue(c as i64).expect("unit"));
        let scalar = RatElement::basis(&g, g.identity()).scalar_mul(&BigRational::from_integer(c.into()));
        let x = scalar.sub(&sigma_c)?.mul(&theta)?;
        let coeffs = x
            .coeffs()
            .iter()
            .map(|q| {
                if q.is_integer() {
                    Ok(q.to_integer())
                } else {
                    Err(Error::Internal(format!("(c - sigma_c) theta not integral for c = {c}")))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        names.push(format!("theta_{c}"));
        gens.push(IntElement::from_coeffs(&g, coeffs)?);
    }
    Ok(StickelbergerLattice::from_generators(&g, p, names, gens))
}

/// `f_1, ..., f_11` from the embedded index sets, followed by the trace `N`.
pub fn tabulated_basis_23() -> Result<Vec<IntElement>> {
    let g = FiniteGroup::units(23, false)?;
    let sets = &catalog::embedded().stickelberger_23;
    let mut out = Vec::with_capacity(sets.index_sets.len() + 1);
    for set in &sets.index_sets {
        let support: Vec<usize> =
            set.iter().map(|&i| g.element_of_residue(i as i64).expect("validated index")).collect();
        out.push(IntElement::from_support(&g, &support));
    }
    out.push(IntElement::g_trace(&g));
    Ok(out)
}

pub fn tabulated_lattice_23() -> Result<StickelbergerLattice> {
    let basis = tabulated_basis_23()?;
    let group = basis[0].group().clone();
    let mut names: Vec<String> = (1..basis.len()).map(|j| format!("f_{j}")).collect();
    names.push("N".into());
    Ok(StickelbergerLattice::from_generators(&group, 23, names, basis))
}

#[derive(Debug, Clone, Serialize)]
pub struct MembershipReport {
    pub member: bool,
    /// Integer coordinates over the generators, when a member.
    pub coordinates: Option<Vec<String>>,
    /// First column the HNF reduction could not clear, when not a member.
    pub stuck_column: Option<String>,
    pub residue: Option<Vec<String>>,
}

pub fn lattice_membership(lattice: &StickelbergerLattice, x: &IntElement) -> Result<MembershipReport> {
    if !crate::groups::same_group(x.group(), &lattice.group) {
        return Err(Error::GroupMismatch);
    }
    let strings = |v: &[BigInt]| v.iter().map(ToString::to_string).collect::<Vec<_>>();
    Ok(match membership(&lattice.hnf, &x.to_vec()) {
        Membership::Member { coordinates } => MembershipReport {
            member: true,
            coordinates: Some(strings(&coordinates)),
            stuck_column: None,
            residue: None,
        },
        Membership::NonMember { column, residue } => MembershipReport {
            member: false,
            coordinates: None,
            stuck_column: Some(lattice.group.label(column).to_string()),
            residue: Some(strings(&residue)),
        },
    })
}

/// One deduction in the coefficient-comparison argument.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Deduction {
    /// Coordinates whose equations were compared.
    pub equations: Vec<String>,
    /// The equations, with earlier deductions substituted.
    pub statements: Vec<String>,
    pub variable: String,
    pub value: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Contradiction {
    /// Two deductions assign different values to one variable.
    ConflictingValues { variable: String, first: i64, second: i64 },
    /// All variables of an equation are fixed and it fails.
    ViolatedEquation { equation: String, statement: String },
}

/// A chain of deductions ending in a contradiction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Refutation {
    pub deductions: Vec<Deduction>,
    pub contradiction: Contradiction,
}

/// Refutations of `x = sum a_j b_j` by comparing coefficients: an equation
/// with one unknown fixes it, and two equations whose left sides differ in a
/// single variable fix it by subtraction. Every refutation of the smallest
/// size found is listed, earliest equations first; an empty list means the
/// comparison argument is inconclusive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EliminationCertificate {
    pub refutations: Vec<Refutation>,
}

impl EliminationCertificate {
    pub fn is_refuted(&self) -> bool {
        !self.refutations.is_empty()
    }
}

struct Equation {
    label: String,
    coeffs: Vec<i64>,
    rhs: i64,
}

impl Equation {
    fn render(&self, names: &[String], known: &BTreeMap<usize, i64>) -> String {
        let mut constant = 0i64;
        let mut terms = Vec::new();
        for (j, &c) in self.coeffs.iter().enumerate() {
            match (c, known.get(&j)) {
                (0, _) => {}
                (_, Some(v)) => constant += c * v,
                (1, None) => terms.push(names[j].clone()),
                (_, None) => terms.push(format!("{c}*{}", names[j])),
            }
        }
        let mut lhs = Vec::new();
        if constant != 0 || terms.is_empty() {
            lhs.push(constant.to_string());
        }
        lhs.extend(terms);
        format!("{}={}", lhs.join("+"), self.rhs)
    }
}

#[derive(Clone)]
struct Fact {
    var: usize,
    value: i64,
    equations: Vec<usize>,
    deps: Vec<usize>,
}

struct System {
    names: Vec<String>,
    eqs: Vec<Equation>,
}

impl System {
    fn closure(facts: &[Fact], roots: &[usize]) -> Vec<usize> {
        let mut keep = vec![false; facts.len()];
        let mut stack = roots.to_vec();
        while let Some(f) = stack.pop() {
            if !std::mem::replace(&mut keep[f], true) {
                stack.extend(facts[f].deps.iter().copied());
            }
        }
        (0..facts.len()).filter(|&f| keep[f]).collect()
    }

    fn deductions<'a>(&self, chain: impl Iterator<Item = &'a Fact>) -> Vec<Deduction> {
        let mut substituted: BTreeMap<usize, i64> = BTreeMap::new();
        let mut out = Vec::new();
        for fact in chain {
            let mut shown = substituted.clone();
            shown.remove(&fact.var);
            out.push(Deduction {
                equations: fact.equations.iter().map(|&i| self.eqs[i].label.clone()).collect(),
                statements: fact.equations.iter().map(|&i| self.eqs[i].render(&self.names, &shown)).collect(),
                variable: self.names[fact.var].clone(),
                value: fact.value,
            });
            substituted.entry(fact.var).or_insert(fact.value);
        }
        out
    }
}

/// Runs the coefficient-comparison argument for `x` against `basis`; the
/// variables are `a1, ..., ak` in basis order.
pub fn elimination_certificate(basis: &[IntElement], x: &IntElement) -> Result<EliminationCertificate> {
    let g = x.group().clone();
    let small = |v: &BigInt| {
        v.to_i64()
            .filter(|c| c.abs() < 1 << 20)
            .ok_or_else(|| Error::OutOfRange("elimination needs small coefficients".into()))
    };
    let k = basis.len();
    let names: Vec<String> = (1..=k).map(|j| format!("a{j}")).collect();
    let mut eqs = Vec::with_capacity(g.order());
    for col in g.elements() {
        let coeffs = basis.iter().map(|b| small(b.coeff(col))).collect::<Result<Vec<_>>>()?;
        eqs.push(Equation { label: g.label(col).to_string(), coeffs, rhs: small(x.coeff(col))? });
    }
    let sys = System { names, eqs };
    let eqs = &sys.eqs;

    // subtraction facts need no earlier deductions
    let mut pair_facts = Vec::new();
    for (i1, e1) in eqs.iter().enumerate() {
        for (i2, e2) in eqs.iter().enumerate().skip(i1 + 1) {
            let mut diff = (0..k).filter(|&j| e1.coeffs[j] != e2.coeffs[j]);
            let (Some(j), None) = (diff.next(), diff.next()) else { continue };
            let d = e1.coeffs[j] - e2.coeffs[j];
            if (e1.rhs - e2.rhs) % d == 0 {
                pair_facts.push(Fact { var: j, value: (e1.rhs - e2.rhs) / d, equations: vec![i1, i2], deps: vec![] });
            }
        }
    }

    let mut facts: Vec<Fact> = Vec::new();
    let mut known: BTreeMap<usize, usize> = BTreeMap::new();
    let mut used_pairs = vec![false; pair_facts.len()];
    loop {
        // propagate single-unknown equations to a fixpoint
        let violated = loop {
            let bad = eqs.iter().position(|e| {
                (0..k).all(|j| e.coeffs[j] == 0 || known.contains_key(&j))
                    && (0..k).filter(|&j| e.coeffs[j] != 0).map(|j| e.coeffs[j] * facts[known[&j]].value).sum::<i64>()
                        != e.rhs
            });
            if bad.is_some() {
                break bad;
            }
            let unit = eqs.iter().enumerate().find_map(|(i, e)| {
                let mut unknown = (0..k).filter(|&j| e.coeffs[j] != 0 && !known.contains_key(&j));
                let (Some(j), None) = (unknown.next(), unknown.next()) else { return None };
                let deps: Vec<usize> = (0..k).filter(|&l| l != j && e.coeffs[l] != 0).map(|l| known[&l]).collect();
                let num = e.rhs - deps.iter().map(|&f| e.coeffs[facts[f].var] * facts[f].value).sum::<i64>();
                (num % e.coeffs[j] == 0).then(|| Fact { var: j, value: num / e.coeffs[j], equations: vec![i], deps })
            });
            let Some(fact) = unit else { break None };
            known.insert(fact.var, facts.len());
            facts.push(fact);
        };

        let mut candidates: Vec<(usize, Vec<usize>, Refutation)> = Vec::new();
        if let Some(i) = violated {
            let roots: Vec<usize> = (0..k).filter(|&j| eqs[i].coeffs[j] != 0).map(|j| known[&j]).collect();
            let chain = System::closure(&facts, &roots);
            let contradiction = Contradiction::ViolatedEquation {
                equation: eqs[i].label.clone(),
                statement: eqs[i].render(&sys.names, &BTreeMap::new()),
            };
            let mut key: Vec<usize> = chain.iter().flat_map(|&f| facts[f].equations.clone()).collect();
            key.push(i);
            let deductions = sys.deductions(chain.iter().map(|&f| &facts[f]));
            candidates.push((chain.len(), key, Refutation { deductions, contradiction }));
        }
        for pf in &pair_facts {
            let Some(&fi) = known.get(&pf.var) else { continue };
            if facts[fi].value == pf.value {
                continue;
            }
            let chain = System::closure(&facts, &[fi]);
            let contradiction = Contradiction::ConflictingValues {
                variable: sys.names[pf.var].clone(),
                first: facts[fi].value,
                second: pf.value,
            };
            let mut key: Vec<usize> = chain.iter().flat_map(|&f| facts[f].equations.clone()).collect();
            key.extend(&pf.equations);
            let deductions = sys.deductions(chain.iter().map(|&f| &facts[f]).chain(std::iter::once(pf)));
            candidates.push((chain.len() + 1, key, Refutation { deductions, contradiction }));
        }
        if let Some(min) = candidates.iter().map(|c| c.0).min() {
            candidates.retain(|c| c.0 == min);
            candidates.sort_by(|a, b| a.1.cmp(&b.1));
            candidates.dedup_by(|a, b| a.2 == b.2);
            return Ok(EliminationCertificate { refutations: candidates.into_iter().map(|c| c.2).collect() });
        }

        let fresh = (0..pair_facts.len()).find(|&pi| !used_pairs[pi] && !known.contains_key(&pair_facts[pi].var));
        let Some(pi) = fresh else { return Ok(EliminationCertificate { refutations: vec![] }) };
        used_pairs[pi] = true;
        known.insert(pair_facts[pi].var, facts.len());
        facts.push(pair_facts[pi].clone());
    }
}

/// The full non-membership report for `sigma_1 + sigma_5` at `p = 23`.
#[derive(Debug, Clone, Serialize)]
pub struct Report23 {
    pub tabulated_basis_rank: usize,
    pub tabulated_basis_duplicates: Vec<(usize, usize)>,
    pub generator_rank: usize,
    pub member_of_tabulated_lattice: bool,
    pub member_of_generator_lattice: bool,
    pub tabulated_vectors_in_generator_lattice: Vec<bool>,
    pub elimination: EliminationCertificate,
}

pub fn report_23() -> Result<Report23> {
    let tab = tabulated_lattice_23()?;
    let gen = generator_lattice(23)?;
    let g = &gen.group;
    let theta = IntElement::parse(g, "s1+s5")?;
    let theta = IntElement::from_coeffs(&tab.group, theta.to_vec())?;
    let theta_gen = IntElement::from_coeffs(g, theta.to_vec())?;
    let mut duplicates = Vec::new();
    for i in 0..tab.generators.len() {
        for j in i + 1..tab.generators.len() {
            if tab.generators[i] == tab.generators[j] {
                duplicates.push((i + 1, j + 1));
            }
        }
    }
    let in_gen = tab
        .generators
        .iter()
        .map(|b| {
            let b = IntElement::from_coeffs(g, b.to_vec())?;
            Ok(lattice_membership(&gen, &b)?.member)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Report23 {
        tabulated_basis_rank: tab.rank(),
        tabulated_basis_duplicates: duplicates,
        generator_rank: gen.rank(),
        member_of_tabulated_lattice: lattice_membership(&tab, &theta)?.member,
        member_of_generator_lattice: lattice_membership(&gen, &theta_gen)?.member,
        tabulated_vectors_in_generator_lattice: in_gen,
        elimination: elimination_certificate(&tab.generators, &theta)?,
    })
}

/// Sum of coefficients of `p * theta`, equal to `p(p-1)/2`.
pub fn scaled_coefficient_sum(theta: &RatElement, p: u64) -> BigInt {
    theta
        .coeffs()
        .iter()
        .map(|c| (c * BigRational::from_integer(p.into())).to_integer())
        .fold(BigInt::zero(), |a, b| a + b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn element_small_primes() {
        let t = stickelberger_element(3).unwrap();
        assert_eq!(t.to_text(), "1/3*s1 + 2/3*s2");
        let t = stickelberger_element(5).unwrap();
        assert_eq!(t.to_text(), "1/5*s1 + 3/5*s2 + 2/5*s3 + 4/5*s4");
        assert_eq!(scaled_coefficient_sum(&stickelberger_element(23).unwrap(), 23), BigInt::from(253));
        assert!(stickelberger_element(9).is_err());
        assert!(stickelberger_element(2).is_err());
    }

    #[test]
    fn generators_small_primes() {
        let l = generator_lattice(3).unwrap();
        assert_eq!(l.generators[0].to_vec(), ints(&[0, 1]));
        assert!(generator_lattice(5).is_ok());
    }

    #[test]
    fn membership_examples() {
        let l = tabulated_lattice_23().unwrap();
        let g = l.group.clone();
        let f3 = l.generators[2].clone();
        let r = lattice_membership(&l, &f3).unwrap();
        assert!(r.member);
        let theta = IntElement::parse(&g, "s1+s5").unwrap();
        let r = lattice_membership(&l, &theta).unwrap();
        assert!(!r.member && r.stuck_column.is_some());
        let sum = l.generators[0].add(&l.generators[11]).unwrap();
        assert!(lattice_membership(&l, &sum).unwrap().member);
    }

    #[test]
    fn p23_report() {
        let r = report_23().unwrap();
        assert_eq!(r.tabulated_basis_rank, 11);
        assert_eq!(r.tabulated_basis_duplicates, vec![(1, 4)]);
        assert_eq!(r.generator_rank, 12);
        assert!(!r.member_of_tabulated_lattice && !r.member_of_generator_lattice);
        assert!(r.tabulated_vectors_in_generator_lattice.iter().all(|&b| b));
        let refs = &r.elimination.refutations;
        assert!(!refs.is_empty());
        let tab = refs
            .iter()
            .find(|f| f.deductions.iter().any(|d| d.equations == ["s11", "s22"]))
            .expect("the s11/s22 comparison is among the smallest refutations");
        let d = &tab.deductions;
        assert_eq!(d.len(), 3);
        assert_eq!((d[0].equations.clone(), d[0].variable.as_str(), d[0].value), (vec!["s1".to_string()], "a12", 1));
        assert_eq!((d[1].equations.clone(), d[1].variable.as_str(), d[1].value), (vec!["s12".to_string()], "a11", -1));
        assert_eq!(
            tab.contradiction,
            Contradiction::ConflictingValues { variable: "a11".into(), first: -1, second: 0 }
        );
        assert_eq!(d[2].statements, ["1+a1+a2+a3+a4+a5+a6+a7+a8+a9+a10=0", "1+a1+a2+a3+a4+a5+a6+a7+a8+a9+a10+a11=0"]);
    }
}
