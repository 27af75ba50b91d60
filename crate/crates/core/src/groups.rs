//! Finite groups with subgroup and coset machinery.
//!
//! Elements are indices `0..order`. Three laws are supported: an explicit
//! multiplication table (order <= 64), the additive cyclic group `Z/nZ`, and
//! the unit group `(Z/nZ)*` optionally taken modulo `{1, -1}`. For unit
//! groups the element index follows the residues in ascending order, so
//! index 0 is always the residue 1.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;

use crate::arith;
use crate::error::{Error, Result};

pub const MAX_TABLE_ORDER: usize = 64;
pub const MAX_UNIT_MODULUS: u64 = 1_000_000;

const Q8_TABLE: &str = include_str!("../data/q8.txt");

pub type Group = Arc<FiniteGroup>;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Law {
    Table { table: Vec<u8>, identity: usize },
    Cyclic,
    Units { modulus: u64, plus_minus: bool, residues: Vec<u64>, index: Vec<u32> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    law: Law,
    labels: Vec<String>,
    name: String,
}

impl FiniteGroup {
    /// Builds a group from a multiplication table, checking the group axioms
    /// exhaustively.
    pub fn from_table(labels: Vec<String>, rows: Vec<Vec<usize>>) -> Result<Group> {
        let n = rows.len();
        if n == 0 || n > MAX_TABLE_ORDER {
            return Err(Error::domain(format!("table groups must have order 1..={MAX_TABLE_ORDER}, got {n}")));
        }
        if labels.len() != n {
            return Err(Error::domain("label count differs from table order"));
        }
        let mut table = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::domain(format!("row {i} has {} entries", row.len())));
            }
            for &x in row {
                if x >= n {
                    return Err(Error::domain(format!("row {i} has out-of-range entry {x}")));
                }
                table.push(x as u8);
            }
        }
        let at = |a: usize, b: usize| table[a * n + b] as usize;
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or_else(|| Error::domain("table has no two-sided identity"))?;
        for a in 0..n {
            if !(0..n).any(|b| at(a, b) == identity && at(b, a) == identity) {
                return Err(Error::domain(format!("element {a} has no two-sided inverse")));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = at(a, b);
                for c in 0..n {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(Error::domain(format!("associativity fails at ({a}, {b}, {c})")));
                    }
                }
            }
        }
        Ok(Arc::new(FiniteGroup { order: n, law: Law::Table { table, identity }, labels, name: format!("table({n})") }))
    }

    /// Parses the plain-text table format: the order on the first line, then
    /// `order^2` whitespace-separated indices. Lines starting with `#` are
    /// comments.
    pub fn parse_table(text: &str) -> Result<Group> {
        let mut tokens = text.lines().filter(|l| !l.trim_start().starts_with('#')).flat_map(str::split_whitespace);
        let order: usize = tokens
            .next()
            .ok_or_else(|| Error::Parse("empty table".into()))?
            .parse()
            .map_err(|e| Error::Parse(format!("bad order: {e}")))?;
        if order == 0 || order > MAX_TABLE_ORDER {
            return Err(Error::Parse(format!("order {order} out of range")));
        }
        let mut rows = vec![Vec::with_capacity(order); order];
        for (k, row) in (0..order * order).map(|k| (k, k / order)) {
            let tok = tokens.next().ok_or_else(|| Error::Parse(format!("table truncated at entry {k}")))?;
            rows[row].push(tok.parse().map_err(|e| Error::Parse(format!("entry {k}: {e}")))?);
        }
        if tokens.next().is_some() {
            return Err(Error::Parse("trailing entries after the table".into()));
        }
        Self::from_table((0..order).map(|i| i.to_string()).collect(), rows)
    }

    /// The quaternion group with elements `1, -1, i, -i, j, -j, k, -k`.
    pub fn quaternion() -> Group {
        let g = Self::parse_table(Q8_TABLE).expect("embedded Q8 table is valid");
        let mut g = Arc::try_unwrap(g).expect("fresh Arc");
        g.labels = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"].iter().map(|s| s.to_string()).collect();
        g.name = "Q8".into();
        Arc::new(g)
    }

    /// Additive cyclic group `Z/nZ`; element `k` is labelled `s<k>`.
    pub fn cyclic(n: usize) -> Result<Group> {
        if n == 0 {
            return Err(Error::domain("cyclic group of order 0"));
        }
        Ok(Arc::new(FiniteGroup {
            order: n,
            law: Law::Cyclic,
            labels: (0..n).map(|k| format!("s{k}")).collect(),
            name: format!("C{n}"),
        }))
    }

    /// `(Z/nZ)*`, or its quotient by `{1, -1}` when `plus_minus` is set.
    /// Residue `r` is labelled `s<r>`; in the quotient the smaller of `r` and
    /// `n - r` represents the class.
    pub fn units(n: u64, plus_minus: bool) -> Result<Group> {
        if n == 0 || n > MAX_UNIT_MODULUS {
            return Err(Error::domain(format!("unit groups supported for 1 <= n <= {MAX_UNIT_MODULUS}, got {n}")));
        }
        if plus_minus && n <= 2 {
            return Err(Error::domain("quotient by {1, -1} needs n > 2"));
        }
        let mut residues = Vec::new();
        let mut index = vec![u32::MAX; n as usize];
        for r in 0..n {
            if arith::gcd(r, n) != 1 {
                continue;
            }
            if n == 1 && r != 0 {
                continue;
            }
            if plus_minus && r > n - r {
                index[r as usize] = index[(n - r) as usize];
                continue;
            }
            index[r as usize] = residues.len() as u32;
            residues.push(r);
        }
        // n = 1: the trivial group, represented by the residue 0 = 1.
        let labels = residues.iter().map(|r| format!("s{}", if n == 1 { 1 } else { *r })).collect();
        let name = if plus_minus { format!("(Z/{n}Z)*/{{1,-1}}") } else { format!("(Z/{n}Z)*") };
        Ok(Arc::new(FiniteGroup {
            order: residues.len(),
            law: Law::Units { modulus: n, plus_minus, residues, index },
            labels,
            name,
        }))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn identity(&self) -> usize {
        match &self.law {
            Law::Table { identity, .. } => *identity,
            _ => 0,
        }
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.law {
            Law::Table { table, .. } => table[a * self.order + b] as usize,
            Law::Cyclic => (a + b) % self.order,
            Law::Units { modulus, residues, index, .. } => {
                let r = arith::mul_mod(residues[a], residues[b], *modulus);
                index[r as usize] as usize
            }
        }
    }

    pub fn inv(&self, a: usize) -> usize {
        match &self.law {
            Law::Cyclic => (self.order - a) % self.order,
            Law::Units { modulus, residues, index, .. } => {
                if *modulus == 1 {
                    return 0;
                }
                let r = arith::mod_inverse(residues[a], *modulus).expect("unit");
                index[r as usize] as usize
            }
            Law::Table { .. } => {
                let e = self.identity();
                self.elements().find(|&b| self.mul(a, b) == e).expect("validated")
            }
        }
    }

    pub fn pow(&self, a: usize, mut k: u64) -> usize {
        let mut acc = self.identity();
        let mut base = a;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    pub fn element_order(&self, a: usize) -> usize {
        match &self.law {
            Law::Units { modulus, plus_minus, residues, .. } if *modulus > 2 => {
                let r = residues[a];
                let ord = arith::mult_order(r, *modulus).expect("unit") as usize;
                if *plus_minus
                    && ord.is_multiple_of(2)
                    && arith::pow_mod_u64(r, ord as u64 / 2, *modulus) == modulus - 1
                {
                    ord / 2
                } else {
                    ord
                }
            }
            Law::Cyclic => self.order / num_integer::gcd(a, self.order),
            _ => {
                let e = self.identity();
                let mut x = a;
                let mut k = 1;
                while x != e {
                    x = self.mul(x, a);
                    k += 1;
                }
                k
            }
        }
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn find_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Index of the residue `r` in a unit group.
    pub fn element_of_residue(&self, r: i64) -> Option<usize> {
        match &self.law {
            Law::Units { modulus, index, .. } => {
                let r = r.rem_euclid(*modulus as i64) as usize;
                match index[r] {
                    u32::MAX => None,
                    i => Some(i as usize),
                }
            }
            Law::Cyclic => Some(r.rem_euclid(self.order as i64) as usize),
            Law::Table { .. } => None,
        }
    }

    /// The residue represented by element `a` of a unit group.
    pub fn residue(&self, a: usize) -> Option<u64> {
        match &self.law {
            Law::Units { modulus: 1, .. } => Some(1),
            Law::Units { residues, .. } => Some(residues[a]),
            _ => None,
        }
    }

    /// `(modulus, plus_minus)` for unit groups.
    pub fn unit_modulus(&self) -> Option<(u64, bool)> {
        match &self.law {
            Law::Units { modulus, plus_minus, .. } => Some((*modulus, *plus_minus)),
            _ => None,
        }
    }

    pub fn is_abelian(&self) -> bool {
        match &self.law {
            Law::Table { .. } => self.elements().all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a))),
            _ => true,
        }
    }

    pub fn is_cyclic(&self) -> bool {
        self.elements().any(|a| self.element_order(a) == self.order)
    }
}

impl fmt::Display for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}

pub fn same_group(a: &Group, b: &Group) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// A subgroup given by its sorted member indices.
#[derive(Debug, Clone)]
pub struct Subgroup {
    group: Group,
    members: Vec<usize>,
    mask: Vec<bool>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        same_group(&self.group, &other.group) && self.members == other.members
    }
}

impl Eq for Subgroup {}

impl Subgroup {
    /// Validates closure, identity and inverses.
    pub fn from_members(group: &Group, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let set: BTreeSet<usize> = members.into_iter().collect();
        if set.iter().any(|&x| x >= group.order()) {
            return Err(Error::domain("subgroup member out of range"));
        }
        let sub = Self::new_unchecked(group, set.into_iter().collect());
        if !sub.contains(group.identity()) {
            return Err(Error::domain("subset lacks the identity"));
        }
        for &a in &sub.members {
            if !sub.contains(group.inv(a)) {
                return Err(Error::domain("subset not closed under inverses"));
            }
            for &b in &sub.members {
                if !sub.contains(group.mul(a, b)) {
                    return Err(Error::domain("subset not closed under multiplication"));
                }
            }
        }
        Ok(sub)
    }

    fn new_unchecked(group: &Group, members: Vec<usize>) -> Self {
        let mut mask = vec![false; group.order()];
        for &m in &members {
            mask[m] = true;
        }
        Subgroup { group: group.clone(), members, mask }
    }

    pub fn cyclic(group: &Group, generator: usize) -> Self {
        let e = group.identity();
        let mut members = vec![e];
        let mut x = generator;
        while x != e {
            members.push(x);
            x = group.mul(x, generator);
        }
        members.sort_unstable();
        Self::new_unchecked(group, members)
    }

    pub fn trivial(group: &Group) -> Self {
        Self::new_unchecked(group, vec![group.identity()])
    }

    pub fn whole(group: &Group) -> Self {
        Self::new_unchecked(group, group.elements().collect())
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn index(&self) -> usize {
        self.group.order() / self.order()
    }

    pub fn contains(&self, a: usize) -> bool {
        self.mask.get(a).copied().unwrap_or(false)
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&m| other.contains(m))
    }

    pub fn labels(&self) -> Vec<String> {
        self.members.iter().map(|&m| self.group.label(m).to_string()).collect()
    }

    /// Some element generating this subgroup, if it is cyclic.
    pub fn generator(&self) -> Option<usize> {
        self.members.iter().copied().find(|&a| self.group.element_order(a) == self.order())
    }

    /// Left cosets `gH`, each sorted, ordered by smallest element.
    pub fn left_cosets(&self) -> Vec<Vec<usize>> {
        let g = &self.group;
        let mut seen = vec![false; g.order()];
        let mut out = Vec::with_capacity(self.index());
        for x in g.elements() {
            if seen[x] {
                continue;
            }
            let mut coset: Vec<usize> = self.members.iter().map(|&h| g.mul(x, h)).collect();
            coset.sort_unstable();
            for &y in &coset {
                seen[y] = true;
            }
            out.push(coset);
        }
        out
    }

    /// `coset_of[x]` is the position of `xH` in [`Self::left_cosets`].
    pub fn coset_map(&self) -> (Vec<Vec<usize>>, Vec<usize>) {
        let cosets = self.left_cosets();
        let mut map = vec![0; self.group.order()];
        for (i, c) in cosets.iter().enumerate() {
            for &x in c {
                map[x] = i;
            }
        }
        (cosets, map)
    }

    /// Whether `set` meets every left coset of this subgroup exactly once.
    pub fn is_left_transversal(&self, set: &[usize]) -> bool {
        if set.len() != self.index() {
            return false;
        }
        let (_, map) = self.coset_map();
        let mut hit = vec![false; self.index()];
        for &s in set {
            if s >= map.len() || std::mem::replace(&mut hit[map[s]], true) {
                return false;
            }
        }
        true
    }
}

impl fmt::Display for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.labels().join(", "))
    }
}

/// Every cyclic subgroup of order exactly `order`, each once, sorted by
/// member indices.
pub fn cyclic_subgroups_of_order(group: &Group, order: usize) -> Vec<Subgroup> {
    if order == 0 || !group.order().is_multiple_of(order) {
        return Vec::new();
    }
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut out = Vec::new();
    for a in group.elements() {
        if group.element_order(a) != order {
            continue;
        }
        let sub = Subgroup::cyclic(group, a);
        if found.insert(sub.members.clone()) {
            out.push(sub);
        }
    }
    out.sort_by(|a, b| a.members.cmp(&b.members));
    out
}

pub fn intersect_subgroups(list: &[Subgroup]) -> Result<Subgroup> {
    let first = list.first().ok_or_else(|| Error::domain("intersection of an empty list"))?;
    if list.iter().any(|s| !same_group(&s.group, &first.group)) {
        return Err(Error::GroupMismatch);
    }
    let members = first.members.iter().copied().filter(|&m| list.iter().all(|s| s.contains(m)));
    Subgroup::from_members(&first.group, members)
}

/// Complete left-coset representative sets of `h` in its group.
#[derive(Debug, Clone)]
pub struct CosetRepSets {
    pub cosets: Vec<Vec<usize>>,
    pub sets: Vec<Vec<usize>>,
    /// `|H|^[G:H]`, the number of transversals.
    pub total: BigUint,
    pub truncated: bool,
}

/// Enumerates transversals lexicographically (one element chosen per coset,
/// cosets in order of their smallest element), stopping after `cap` sets.
pub fn coset_rep_sets(h: &Subgroup, cap: usize) -> CosetRepSets {
    let cosets = h.left_cosets();
    let total = BigUint::from(h.order()).pow(cosets.len() as u32);
    let mut sets = Vec::new();
    let mut it = Transversals::new(&cosets);
    while sets.len() < cap {
        match it.next() {
            Some(s) => sets.push(s),
            None => break,
        }
    }
    let truncated = BigUint::from(sets.len()) < total;
    CosetRepSets { cosets, sets, total, truncated }
}

/// Lexicographic odometer over the choices of one element per coset.
pub(crate) struct Transversals<'a> {
    cosets: &'a [Vec<usize>],
    digits: Vec<usize>,
    done: bool,
}

impl<'a> Transversals<'a> {
    pub(crate) fn new(cosets: &'a [Vec<usize>]) -> Self {
        Transversals { cosets, digits: vec![0; cosets.len()], done: cosets.is_empty() }
    }
}

impl Iterator for Transversals<'_> {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.digits.iter().zip(self.cosets).map(|(&d, c)| c[d]).collect();
        let mut i = self.digits.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            self.digits[i] += 1;
            if self.digits[i] < self.cosets[i].len() {
                break;
            }
            self.digits[i] = 0;
        }
        Some(out)
    }
}

/// The decomposition group of an unramified `p` in `Q(zeta_n)` (or its real
/// subfield): the cyclic subgroup generated by the residue `p`.
pub fn decomposition_subgroup(p: u64, n: u64, real_subfield: bool) -> Result<Subgroup> {
    let group = FiniteGroup::units(n, real_subfield)?;
    decomposition_subgroup_in(&group, p)
}

pub fn decomposition_subgroup_in(group: &Group, p: u64) -> Result<Subgroup> {
    let (n, _) = group.unit_modulus().ok_or_else(|| Error::domain("decomposition groups live in unit groups"))?;
    if arith::gcd(p, n) != 1 {
        return Err(Error::Ramified { p, n });
    }
    let g = group.element_of_residue((p % n) as i64).expect("coprime residue");
    Ok(Subgroup::cyclic(group, g))
}

/// For abelian `G` and `H1` with `gcd(|H1|, [G:H1]) = 1`, the unique subgroup
/// `H2` of order `[G:H1]`; it is a transversal of `H1`.
pub fn complement_coset_reps(h1: &Subgroup) -> Result<Subgroup> {
    let g = h1.group();
    if !g.is_abelian() {
        return Err(Error::LemmaHypothesis("group is not abelian".into()));
    }
    let r = h1.order();
    let s = h1.index();
    if num_integer::gcd(r, s) != 1 {
        return Err(Error::LemmaHypothesis(format!("gcd({r}, {s}) != 1")));
    }
    let h2 = Subgroup::from_members(g, g.elements().map(|x| g.pow(x, r as u64)))?;
    if h2.order() != s || !h1.is_left_transversal(&h2.members) {
        return Err(Error::Internal("complement is not a transversal".into()));
    }
    Ok(h2)
}
