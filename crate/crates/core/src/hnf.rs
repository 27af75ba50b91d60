//! Row-style Hermite normal form over `Z` and lattice membership.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type Matrix = Vec<Vec<BigInt>>;

/// `transform * input = rows` (zero rows of the full form dropped).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hnf {
    pub rows: Matrix,
    /// Column of the leading entry of each row, strictly increasing.
    pub pivots: Vec<usize>,
    /// Unimodular `m x m` matrix; its first `rank` rows produce `rows`.
    pub transform: Matrix,
    pub columns: usize,
}

impl Hnf {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }
}

/// Computes the HNF: upper echelon, positive pivots, entries above each pivot
/// reduced into `[0, pivot)`.
pub fn hnf(input: &[Vec<BigInt>], columns: usize) -> Hnf {
    let m = input.len();
    let mut a: Matrix = input.to_vec();
    let mut u: Matrix =
        (0..m).map(|i| (0..m).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..columns {
        if r == m {
            break;
        }
        loop {
            let best = (r..m).filter(|&i| !a[i][c].is_zero()).min_by(|&i, &j| a[i][c].abs().cmp(&a[j][c].abs()));
            let Some(best) = best else { break };
            a.swap(r, best);
            u.swap(r, best);
            let mut done = true;
            for i in r + 1..m {
                if a[i][c].is_zero() {
                    continue;
                }
                let q = a[i][c].div_floor(&a[r][c]);
                sub_row(&mut a, i, r, &q);
                sub_row(&mut u, i, r, &q);
                if !a[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a.get(r).is_none_or(|row| row[c].is_zero()) {
            continue;
        }
        if a[r][c].is_negative() {
            negate_row(&mut a, r);
            negate_row(&mut u, r);
        }
        for i in 0..r {
            let q = a[i][c].div_floor(&a[r][c]);
            if !q.is_zero() {
                sub_row(&mut a, i, r, &q);
                sub_row(&mut u, i, r, &q);
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    Hnf { rows: a, pivots, transform: u, columns }
}

fn sub_row(a: &mut Matrix, target: usize, source: usize, q: &BigInt) {
    let (t, s) = if target < source {
        let (lo, hi) = a.split_at_mut(source);
        (&mut lo[target], &hi[0])
    } else {
        let (lo, hi) = a.split_at_mut(target);
        (&mut hi[0], &lo[source])
    };
    for (x, y) in t.iter_mut().zip(s) {
        *x -= q * y;
    }
}

fn negate_row(a: &mut Matrix, r: usize) {
    for x in a[r].iter_mut() {
        *x = -std::mem::take(x);
    }
}

/// Outcome of reducing a vector against an HNF.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    /// `x = sum coords[i] * generator[i]` over the original generators.
    Member { coordinates: Vec<BigInt> },
    /// Reduction got stuck: `residue` is `x` minus a lattice vector, and its
    /// first nonzero entry sits at `column`, which no pivot can clear.
    NonMember { column: usize, residue: Vec<BigInt> },
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member { .. })
    }
}

/// Decides whether `x` lies in the row lattice of the generators behind `h`.
pub fn membership(h: &Hnf, x: &[BigInt]) -> Membership {
    let mut residue = x.to_vec();
    let mut hnf_coords = Vec::with_capacity(h.rank());
    let mut next_pivot = 0;
    for c in 0..h.columns {
        if residue[c].is_zero() {
            if next_pivot < h.pivots.len() && h.pivots[next_pivot] == c {
                hnf_coords.push(BigInt::zero());
                next_pivot += 1;
            }
            continue;
        }
        if next_pivot >= h.pivots.len() || h.pivots[next_pivot] != c {
            return Membership::NonMember { column: c, residue };
        }
        let row = &h.rows[next_pivot];
        let (q, rem) = residue[c].div_rem(&row[c]);
        if !rem.is_zero() {
            return Membership::NonMember { column: c, residue };
        }
        for (r, v) in residue.iter_mut().zip(row) {
            *r -= &q * v;
        }
        hnf_coords.push(q);
        next_pivot += 1;
    }
    hnf_coords.resize(h.rank(), BigInt::zero());
    let m = h.transform.len();
    let coordinates = (0..m).map(|j| hnf_coords.iter().zip(&h.transform).map(|(c, u)| c * &u[j]).sum()).collect();
    Membership::Member { coordinates }
}
