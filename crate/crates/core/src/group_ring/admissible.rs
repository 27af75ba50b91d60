//! The admissible system: transversals `S` of `H = ∩ H_f^i` that factor as
//! `T_i · T_i'` for every cyclic subgroup `H_f^i` of order `f`.

use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::{cyclic_subgroups_of_order, intersect_subgroups, Group, Subgroup, Transversals};

use super::element::IntElement;

pub const DEFAULT_CAP: usize = 10_000;

/// Search spaces up to this many transversals are scanned in full so the
/// exact number of admissible sets can be reported.
pub const FULL_COUNT_LIMIT: u64 = 1 << 16;

/// `S = T · T'` with `T` a left transversal of `subgroup` in `G` and `T'` a
/// left transversal of `H` in `subgroup`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub subgroup: Subgroup,
    pub t: Vec<usize>,
    pub t_prime: Vec<usize>,
}

impl Witness {
    pub fn view(&self) -> WitnessView {
        let g = self.subgroup.group();
        WitnessView {
            subgroup: self.subgroup.labels(),
            t: self.t.iter().map(|&x| g.label(x).to_string()).collect(),
            t_prime: self.t_prime.iter().map(|&x| g.label(x).to_string()).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct WitnessView {
    pub subgroup: Vec<String>,
    pub t: Vec<String>,
    pub t_prime: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibleSet {
    /// Sorted element indices.
    pub members: Vec<usize>,
    /// One witness per cyclic subgroup, in subgroup order.
    pub witnesses: Vec<Witness>,
}

#[derive(Debug, Clone)]
pub struct AdmissibleSystem {
    pub group: Group,
    pub f: usize,
    pub subgroups: Vec<Subgroup>,
    pub h: Subgroup,
    pub sets: Vec<AdmissibleSet>,
    /// Number of transversals of `H` in `G`.
    pub search_space: BigUint,
    /// Exact number of admissible sets, when the space was scanned in full.
    pub total_admissible: Option<u64>,
    pub truncated: bool,
}

/// A `theta_f(S)` together with the data that makes it an annihilator.
#[derive(Debug, Clone)]
pub struct Annihilator {
    pub element: IntElement,
    pub f: usize,
    pub h: Subgroup,
    pub witnesses: Vec<Witness>,
}

/// Tries to write `set` as `T · T'` for the cyclic subgroup `k` containing `h`.
///
/// Every block `t·T'` lies in the single coset `tK`, so `set ∩ K` fixes `T'` up
/// to a left translate inside `K`, and each other coset must then contain a
/// translate of the same `T'`.
pub fn factor_through(set: &[usize], k: &Subgroup, h: &Subgroup) -> Option<(Vec<usize>, Vec<usize>)> {
    let g = k.group();
    if !h.is_subset_of(k) || set.len() != k.index() * (k.order() / h.order()) {
        return None;
    }
    let (cosets, map) = k.coset_map();
    let mut parts: Vec<Vec<usize>> = vec![Vec::new(); cosets.len()];
    for &s in set {
        parts[map[s]].push(s);
    }
    let block = k.order() / h.order();
    if parts.iter().any(|p| p.len() != block) {
        return None;
    }
    let home = map[g.identity()];
    let (_, h_map) = h.coset_map();
    'candidate: for &t0 in k.members() {
        let t0_inv = g.inv(t0);
        let mut t_prime: Vec<usize> = parts[home].iter().map(|&s| g.mul(t0_inv, s)).collect();
        t_prime.sort_unstable();
        let mut seen = std::collections::BTreeSet::new();
        if !t_prime.iter().all(|&x| k.contains(x) && seen.insert(h_map[x])) {
            continue;
        }
        let mut t = Vec::with_capacity(cosets.len());
        for (c, coset) in cosets.iter().enumerate() {
            let mut target = parts[c].clone();
            target.sort_unstable();
            let found = coset.iter().copied().find(|&x| {
                let mut block: Vec<usize> = t_prime.iter().map(|&y| g.mul(x, y)).collect();
                block.sort_unstable();
                block == target
            });
            match found {
                Some(x) => t.push(x),
                None => continue 'candidate,
            }
        }
        t.sort_unstable();
        return Some((t, t_prime));
    }
    None
}

/// Checks conditions (i) and (ii) for a candidate set and returns witnesses.
pub fn admissible_witnesses(set: &[usize], subgroups: &[Subgroup], h: &Subgroup) -> Option<Vec<Witness>> {
    if !h.is_left_transversal(set) {
        return None;
    }
    subgroups
        .iter()
        .map(|k| factor_through(set, k, h).map(|(t, t_prime)| Witness { subgroup: k.clone(), t, t_prime }))
        .collect()
}

/// Enumerates admissible sets in lexicographic transversal order, keeping at
/// most `cap` of them.
pub fn admissible_sets(group: &Group, f: usize, cap: usize) -> Result<AdmissibleSystem> {
    let subgroups = cyclic_subgroups_of_order(group, f);
    if subgroups.is_empty() {
        return Err(Error::NotResidueDegreeCandidate(f));
    }
    let h = intersect_subgroups(&subgroups)?;
    let cosets = h.left_cosets();
    let search_space = BigUint::from(h.order()).pow(cosets.len() as u32);
    let full_scan = search_space <= BigUint::from(FULL_COUNT_LIMIT);

    let mut sets = Vec::new();
    let mut count = 0u64;
    let mut exhausted = true;
    for mut candidate in Transversals::new(&cosets) {
        if !full_scan && sets.len() >= cap {
            exhausted = false;
            break;
        }
        candidate.sort_unstable();
        if let Some(witnesses) = admissible_witnesses(&candidate, &subgroups, &h) {
            count += 1;
            if sets.len() < cap {
                sets.push(AdmissibleSet { members: candidate, witnesses });
            }
        }
    }
    let total_admissible = exhausted.then_some(count);
    let truncated = total_admissible.is_none_or(|t| t as usize > sets.len());
    Ok(AdmissibleSystem { group: group.clone(), f, subgroups, h, sets, search_space, total_admissible, truncated })
}

/// `theta_f(S) = sum_{s in S} s`.
pub fn theta_of(system: &AdmissibleSystem, set: &AdmissibleSet) -> Annihilator {
    Annihilator {
        element: IntElement::from_support(&system.group, &set.members),
        f: system.f,
        h: system.h.clone(),
        witnesses: set.witnesses.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::FiniteGroup;

    #[test]
    fn quaternion_order_four() {
        let q8 = FiniteGroup::quaternion();
        let sys = admissible_sets(&q8, 4, DEFAULT_CAP).unwrap();
        assert_eq!(sys.h.labels(), vec!["1", "-1"]);
        let target: Vec<usize> = ["1", "i", "j", "k"].iter().map(|l| q8.find_label(l).unwrap()).collect();
        let mut target_sorted = target.clone();
        target_sorted.sort_unstable();
        let set = sys.sets.iter().find(|s| s.members == target_sorted).expect("{1,i,j,k} admissible");
        let w = set.witnesses[0].view();
        assert_eq!(w.subgroup, vec!["1", "-1", "i", "-i"]);
        assert_eq!(w.t, vec!["1", "k"]);
        assert_eq!(w.t_prime, vec!["1", "i"]);
        let theta = theta_of(&sys, set);
        assert_eq!(theta.element.to_text(), "1*1 + 1*i + 1*j + 1*k");
        assert!(sys.total_admissible.is_some());
    }

    #[test]
    fn units_mod_23_order_eleven() {
        let g = FiniteGroup::units(23, false).unwrap();
        let sys = admissible_sets(&g, 11, DEFAULT_CAP).unwrap();
        assert_eq!(sys.h.order(), 11);
        // every transversal of H is admissible when G is cyclic
        assert_eq!(sys.total_admissible, Some(121));
        let s1 = g.element_of_residue(1).unwrap();
        let s5 = g.element_of_residue(5).unwrap();
        let set = sys.sets.iter().find(|s| s.members == vec![s1, s5]).unwrap();
        assert_eq!(theta_of(&sys, set).element.to_text(), "1*s1 + 1*s5");
    }

    #[test]
    fn order_one_gives_trace() {
        let g = FiniteGroup::cyclic(6).unwrap();
        let sys = admissible_sets(&g, 1, DEFAULT_CAP).unwrap();
        assert_eq!(sys.total_admissible, Some(1));
        let theta = theta_of(&sys, &sys.sets[0]);
        assert!(theta.element.is_trace());
    }

    #[test]
    fn no_subgroup_of_order() {
        let g = FiniteGroup::cyclic(6).unwrap();
        assert_eq!(admissible_sets(&g, 4, 10).unwrap_err(), Error::NotResidueDegreeCandidate(4));
    }

    #[test]
    fn cap_truncates_large_spaces() {
        let g = FiniteGroup::cyclic(60).unwrap();
        let sys = admissible_sets(&g, 2, 5).unwrap();
        assert_eq!(sys.sets.len(), 5);
        assert!(sys.truncated && sys.total_admissible.is_none());
    }
}
