//! Searches for `t ∈ H` such that `Z(D^t ∩ L)` contains a diagonal element
//! `(η, ..., η)σ` with `η ≠ 1`, for `D = K^m` or `D = K wr S_m`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{sym_compose, symmetric_group, BaseSubgroup, WreathElem};
use crate::error::{Error, Result};
use crate::group::{algo, Elem, GroupTable, Subgroup};

/// An element `(x, ..., x)σ` of `L`, with `σ` given by its index in
/// [`symmetric_group`] order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct DiagElem {
    pub x: Elem,
    pub sigma: usize,
}

/// `D^t ∩ L` for `t = (t_1, ..., t_m)` with trivial permutation part, sorted
/// `x`-major then by `σ`.
///
/// `(x,...,x)σ ∈ D^t` iff `t (x,...,x)σ t^-1 = (t_i x t_{iσ}^-1)_i σ ∈ D`, so `x`
/// ranges over `t_1^-1 K t_{1σ}` and the remaining coordinates are tested.
pub fn diag_intersection(
    g: &GroupTable,
    d: &BaseSubgroup,
    t: &[Elem],
    sym: &[Vec<u8>],
) -> Vec<DiagElem> {
    let m = t.len();
    let tinv: Vec<Elem> = t.iter().map(|&x| g.inv(x)).collect();
    let mut out = Vec::new();
    for (si, s) in sym.iter().enumerate() {
        if !d.swap && si != 0 {
            continue;
        }
        for &k in d.k.members() {
            let x = g.mul(g.mul(tinv[0], k), t[s[0] as usize]);
            let ok = (1..m).all(|i| {
                let y = g.mul(g.mul(t[i], x), tinv[s[i] as usize]);
                d.k.contains(y)
            });
            if ok {
                out.push(DiagElem { x, sigma: si });
            }
        }
    }
    out.sort_unstable();
    out
}

/// Central elements of a diagonal subgroup with `x ≠ 1`, in enumeration order.
///
/// `L ≅ T × S_m`, so `(x,σ)` is central iff `x` centralizes every
/// `T`-coordinate and `σ` every `S_m`-coordinate.
pub fn central_diagonals(g: &GroupTable, elems: &[DiagElem], sym: &[Vec<u8>]) -> Vec<DiagElem> {
    let mut xs: Vec<Elem> = elems.iter().map(|e| e.x).collect();
    xs.sort_unstable();
    xs.dedup();
    let mut ss: Vec<usize> = elems.iter().map(|e| e.sigma).collect();
    ss.sort_unstable();
    ss.dedup();
    elems
        .iter()
        .copied()
        .filter(|e| e.x != 0)
        .filter(|e| xs.iter().all(|&y| g.commutes(e.x, y)))
        .filter(|e| {
            let s = &sym[e.sigma];
            ss.iter()
                .all(|&j| sym_compose(s, &sym[j]) == sym_compose(&sym[j], s))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TShape {
    /// `t = (1, ..., 1, s)`.
    Last,
    /// `t = (1, ..., 1, r, r, s)`.
    PairThenSingle,
    /// `t = (1, s_2, ..., s_m)` with `s_2 ≤ ... ≤ s_m`.
    General,
}

/// `t` together with the first central diagonal element of `D^t ∩ L`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CentralWitness {
    pub t: Vec<Elem>,
    pub eta: Elem,
    pub sigma: Vec<u8>,
    pub shape: TShape,
    pub intersection_order: usize,
}

impl CentralWitness {
    pub fn t_elem(&self) -> WreathElem {
        WreathElem::base(self.t.clone())
    }
}

/// Checks a stored witness: `(η,...,η)σ` lies in `Z(D^t ∩ L)` and `η ≠ 1`.
pub fn verify_central(g: &GroupTable, d: &BaseSubgroup, w: &CentralWitness) -> bool {
    let sym = symmetric_group(w.t.len());
    let Some(si) = sym.iter().position(|s| *s == w.sigma) else {
        return false;
    };
    let elems = diag_intersection(g, d, &w.t, &sym);
    let target = DiagElem {
        x: w.eta,
        sigma: si,
    };
    elems.contains(&target) && central_diagonals(g, &elems, &sym).contains(&target)
}

fn try_t(
    g: &GroupTable,
    d: &BaseSubgroup,
    t: Vec<Elem>,
    sym: &[Vec<u8>],
    shape: TShape,
) -> Option<CentralWitness> {
    let elems = diag_intersection(g, d, &t, sym);
    let c = central_diagonals(g, &elems, sym).into_iter().next()?;
    Some(CentralWitness {
        t,
        eta: c.x,
        sigma: sym[c.sigma].clone(),
        shape,
        intersection_order: elems.len(),
    })
}

/// Upper limit on multisets tried by the general shape.
const GENERAL_LIMIT: usize = 200_000;

fn multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0usize; k];
    if k == 0 {
        return vec![vec![]];
    }
    loop {
        out.push(cur.clone());
        if out.len() > GENERAL_LIMIT {
            return out;
        }
        let Some(i) = (0..k).rev().find(|&i| cur[i] + 1 < n) else {
            return out;
        };
        let v = cur[i] + 1;
        for c in &mut cur[i..] {
            *c = v;
        }
    }
}

/// Searches `t` in the order `Last`, `PairThenSingle`, `General`, with coset
/// representatives of `K` in index order. No maximality requirement on `K`.
pub fn search_central_t(g: &GroupTable, d: &BaseSubgroup, m: usize) -> Option<CentralWitness> {
    let sym = symmetric_group(m);
    let reps = algo::right_coset_reps(g, &d.k);
    let pad = |tail: &[Elem]| {
        let mut t = vec![0; m - tail.len()];
        t.extend_from_slice(tail);
        t
    };
    let last = reps
        .par_iter()
        .map(|&s| try_t(g, d, pad(&[s]), &sym, TShape::Last))
        .find_first(|w| w.is_some())
        .flatten();
    if last.is_some() {
        return last;
    }
    if m >= 3 {
        let pairs: Vec<(Elem, Elem)> = reps
            .iter()
            .flat_map(|&r| reps.iter().map(move |&s| (r, s)))
            .filter(|&(r, s)| r != s)
            .collect();
        let hit = pairs
            .par_iter()
            .map(|&(r, s)| try_t(g, d, pad(&[r, r, s]), &sym, TShape::PairThenSingle))
            .find_first(|w| w.is_some())
            .flatten();
        if hit.is_some() {
            return hit;
        }
    }
    multisets(reps.len(), m - 1)
        .par_iter()
        .map(|ms| {
            let tail: Vec<Elem> = ms.iter().map(|&i| reps[i]).collect();
            try_t(g, d, pad(&tail), &sym, TShape::General)
        })
        .find_first(|w| w.is_some())
        .flatten()
}

/// As [`search_central_t`], for `D = K wr S_m` with `K` required to be maximal
/// in `T`; a hit certifies `|T:K|^m` as a subdegree.
pub fn find_witness_t(g: &GroupTable, k: &Subgroup, m: usize) -> Result<Option<CentralWitness>> {
    if !algo::is_maximal(g, k) {
        return Err(Error::NotMaximal {
            order: k.order(),
            parent: g.order(),
        });
    }
    Ok(search_central_t(g, &BaseSubgroup::wreath(k.clone()), m))
}

/// Searches the pair shape `t = (1, ..., 1, r, r, s)` for given `r, s` only.
pub fn pair_shape_witness(
    g: &GroupTable,
    d: &BaseSubgroup,
    m: usize,
    r: Elem,
    s: Elem,
) -> Option<CentralWitness> {
    let sym = symmetric_group(m);
    let mut t = vec![0; m - 3];
    t.extend_from_slice(&[r, r, s]);
    try_t(g, d, t, &sym, TShape::PairThenSingle)
}
