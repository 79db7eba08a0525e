//! Scans over enumerated groups: centralizers, normalizers, classes, cosets,
//! maximality and the conjugate-counting identity for maximal subgroups.

use std::collections::{BTreeSet, HashSet};

use super::subgroup::{closure, ElemSet, IsoFingerprint, Subgroup};
use super::table::{Elem, GroupTable};
use crate::error::{Error, Result};

pub fn generate(g: &GroupTable, gens: &[Elem]) -> Subgroup {
    Subgroup::generate(g, gens)
}

pub fn centralizer(g: &GroupTable, x: Elem) -> Subgroup {
    let members = g.elements().filter(|&y| g.commutes(x, y)).collect();
    Subgroup::from_members(g, members)
}

/// Centralizer of a whole subgroup (elements commuting with its generators).
pub fn centralizer_of(g: &GroupTable, s: &Subgroup) -> Subgroup {
    let members = g
        .elements()
        .filter(|&y| s.generators().iter().all(|&x| g.commutes(x, y)))
        .collect();
    Subgroup::from_members(g, members)
}

pub fn normalizer(g: &GroupTable, s: &Subgroup) -> Subgroup {
    let members = g
        .elements()
        .filter(|&x| s.generators().iter().all(|&h| s.contains(g.conj(h, x))))
        .collect();
    Subgroup::from_members(g, members)
}

/// Normalizer of `s` inside `within`.
pub fn normalizer_in(g: &GroupTable, within: &Subgroup, s: &Subgroup) -> Subgroup {
    let members = within
        .members()
        .iter()
        .copied()
        .filter(|&x| s.generators().iter().all(|&h| s.contains(g.conj(h, x))))
        .collect();
    Subgroup::from_members(g, members)
}

/// The conjugacy class of `x`, sorted.
pub fn conjugacy_class(g: &GroupTable, x: Elem) -> Vec<Elem> {
    let mut seen = ElemSet::new(g.order());
    seen.insert(x);
    let mut out = vec![x];
    let mut i = 0;
    while i < out.len() {
        let y = out[i];
        for &s in g.generators() {
            let z = g.conj(y, s);
            if seen.insert(z) {
                out.push(z);
            }
        }
        i += 1;
    }
    out.sort_unstable();
    out
}

pub fn intersect(g: &GroupTable, a: &Subgroup, b: &Subgroup) -> Result<Subgroup> {
    if a.parent_id() != b.parent_id() {
        return Err(Error::ParentMismatch);
    }
    let (x, y) = (a.members(), b.members());
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < x.len() && j < y.len() {
        match x[i].cmp(&y[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(x[i]);
                i += 1;
                j += 1;
            }
        }
    }
    Ok(Subgroup::from_members(g, out))
}

pub fn center(g: &GroupTable, s: &Subgroup) -> Subgroup {
    let members = s
        .members()
        .iter()
        .copied()
        .filter(|&x| s.generators().iter().all(|&h| g.commutes(x, h)))
        .collect();
    Subgroup::from_members(g, members)
}

pub fn fingerprint(g: &GroupTable, s: &Subgroup) -> IsoFingerprint {
    s.fingerprint(g)
}

/// First element of each right coset `Sx`, in index order.
pub fn right_coset_reps(g: &GroupTable, s: &Subgroup) -> Vec<Elem> {
    let mut seen = ElemSet::new(g.order());
    let mut reps = Vec::with_capacity(g.order() / s.order());
    for x in g.elements() {
        if seen.contains(x) {
            continue;
        }
        reps.push(x);
        for &h in s.members() {
            seen.insert(g.mul(h, x));
        }
    }
    reps
}

/// The double coset `AxB`, sorted.
pub fn double_coset(g: &GroupTable, a: &Subgroup, x: Elem, b: &Subgroup) -> Vec<Elem> {
    let mut seen = ElemSet::new(g.order());
    seen.insert(x);
    let mut out = vec![x];
    let mut i = 0;
    while i < out.len() {
        let y = out[i];
        for &h in a.generators() {
            let z = g.mul(h, y);
            if seen.insert(z) {
                out.push(z);
            }
        }
        for &h in b.generators() {
            let z = g.mul(y, h);
            if seen.insert(z) {
                out.push(z);
            }
        }
        i += 1;
    }
    out.sort_unstable();
    out
}

/// Representatives (first in index order) and sizes of the double cosets `AxB`.
pub fn double_coset_reps(g: &GroupTable, a: &Subgroup, b: &Subgroup) -> Vec<(Elem, usize)> {
    let mut seen = ElemSet::new(g.order());
    let mut out = Vec::new();
    for x in g.elements() {
        if seen.contains(x) {
            continue;
        }
        let dc = double_coset(g, a, x, b);
        for &y in &dc {
            seen.insert(y);
        }
        out.push((x, dc.len()));
    }
    out
}

/// True iff `m` is a maximal subgroup of `g`.
///
/// `<M, x>` only depends on the double coset `MxM`, so one representative per
/// double coset is tested. A closure stops early once it exceeds `|G|/2`, at
/// which point it must be all of `G`.
pub fn is_maximal(g: &GroupTable, m: &Subgroup) -> bool {
    let n = g.order();
    if m.order() >= n {
        return false;
    }
    let mut seen = ElemSet::new(n);
    for &x in m.members() {
        seen.insert(x);
    }
    let mut gens = m.generators().to_vec();
    for x in g.elements() {
        if seen.contains(x) {
            continue;
        }
        gens.push(x);
        let proper = closure(g, &gens, n / 2).is_some();
        gens.pop();
        if proper {
            return false;
        }
        for y in double_coset(g, m, x, m) {
            seen.insert(y);
        }
    }
    true
}

/// Normal closure of `x` in `g`.
pub fn normal_closure(g: &GroupTable, x: Elem) -> Subgroup {
    let class = conjugacy_class(g, x);
    Subgroup::generate(g, &class)
}

/// Outcome of counting conjugates of a maximal subgroup `K` that contain `R`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OvergroupCount {
    /// Number of conjugates of `K` containing `R`, found by direct scan.
    pub y: usize,
    /// Number of conjugates of `R` contained in `K`.
    pub x: usize,
    pub normalizer_r: usize,
    pub order_k: usize,
}

impl OvergroupCount {
    /// Right-hand side `x * |N_T(R)| / |K|` of the counting identity, as a rational.
    pub fn predicted(&self) -> (usize, usize) {
        (self.x * self.normalizer_r, self.order_k)
    }
}

/// Counts conjugates of the maximal subgroup `k` containing `r`, and checks the
/// double-counting identity `y |K| = x |N_T(R)|`, with both sides computed
/// by independent scans.
pub fn count_conjugate_overgroups(
    t: &GroupTable,
    k: &Subgroup,
    r: &Subgroup,
) -> Result<OvergroupCount> {
    k.check_parent(t)?;
    r.check_parent(t)?;
    if !r.is_subgroup_of(k) {
        return Err(Error::Invariant("R is not contained in K".into()));
    }
    if !is_maximal(t, k) {
        return Err(Error::NotMaximal {
            order: k.order(),
            parent: t.order(),
        });
    }
    let nk = normalizer(t, k);
    let y = right_coset_reps(t, &nk)
        .into_iter()
        .filter(|&s| {
            // R <= K^s  iff  s R s^-1 <= K
            let si = t.inv(s);
            r.generators().iter().all(|&h| k.contains(t.conj(h, si)))
        })
        .count();
    let nr = normalizer(t, r);
    let x = right_coset_reps(t, &nr)
        .into_iter()
        .filter(|&u| r.generators().iter().all(|&h| k.contains(t.conj(h, u))))
        .count();
    let out = OvergroupCount {
        y,
        x,
        normalizer_r: nr.order(),
        order_k: k.order(),
    };
    if y * k.order() != x * nr.order() {
        return Err(Error::Invariant(format!(
            "double counting failed: y={y}, x={x}, |N(R)|={}, |K|={}",
            nr.order(),
            k.order()
        )));
    }
    Ok(out)
}

/// Distinct cyclic subgroups of order `n`, each given by its smallest generator.
pub fn cyclic_subgroups(g: &GroupTable, n: u32) -> Vec<Subgroup> {
    let mut seen: HashSet<Vec<Elem>> = HashSet::new();
    let mut out = Vec::new();
    for x in g.elements().filter(|&x| g.elem_order(x) == n) {
        let c = Subgroup::generate(g, &[x]);
        if seen.insert(c.members().to_vec()) {
            out.push(c);
        }
    }
    out
}

/// Orbits of a family of subgroups under conjugation by `g`, as member lists.
pub fn conjugacy_orbits(g: &GroupTable, family: &[Subgroup]) -> Vec<Vec<Vec<Elem>>> {
    let mut assigned: HashSet<Vec<Elem>> = HashSet::new();
    let mut orbits = Vec::new();
    for s in family {
        if assigned.contains(s.members()) {
            continue;
        }
        let mut orbit: BTreeSet<Vec<Elem>> = BTreeSet::new();
        let mut queue = vec![s.clone()];
        orbit.insert(s.members().to_vec());
        while let Some(cur) = queue.pop() {
            for &x in g.generators() {
                let c = cur.conjugate(g, x);
                if orbit.insert(c.members().to_vec()) {
                    queue.push(c);
                }
            }
        }
        for m in &orbit {
            assigned.insert(m.clone());
        }
        orbits.push(orbit.into_iter().collect());
    }
    orbits
}

/// Number of conjugacy classes of dihedral subgroups of order `2d` in `T = PSL(2,q)`,
/// found by building every `<c, j>` with `c` of order `d` and `j` an involution
/// inverting `c`.
pub fn dihedral_class_census(t: &GroupTable, q: u32, d: usize) -> Result<usize> {
    let k = if q % 2 == 1 { 2 } else { 1 };
    let plus = (q as usize + 1) / k;
    let minus = (q as usize - 1) / k;
    if d <= 2 || (!plus.is_multiple_of(d) && !minus.is_multiple_of(d)) {
        return Err(Error::NoSuchSubgroup { q, d });
    }
    let involutions: Vec<Elem> = t.elements().filter(|&x| t.is_involution(x)).collect();
    let mut seen: HashSet<Vec<Elem>> = HashSet::new();
    let mut family = Vec::new();
    for c in cyclic_subgroups(t, d as u32) {
        let gen = c.generators()[0];
        let inv = t.inv(gen);
        for &j in &involutions {
            if t.conj(gen, j) == inv {
                let dih = Subgroup::generate(t, &[gen, j]);
                if seen.insert(dih.members().to_vec()) {
                    family.push(dih);
                }
            }
        }
    }
    Ok(conjugacy_orbits(t, &family).len())
}

/// First subgroup of `within` (by generator pair in index order) with the
/// requested fingerprint and satisfying `accept`.
pub fn find_subgroup(
    g: &GroupTable,
    within: &Subgroup,
    target: &IsoFingerprint,
    accept: impl Fn(&Subgroup) -> bool,
) -> Option<Subgroup> {
    let order = target.order;
    let cands: Vec<Elem> = within
        .members()
        .iter()
        .copied()
        .filter(|&x| order.is_multiple_of(g.elem_order(x) as usize))
        .collect();
    if order == 1 {
        return Some(Subgroup::trivial(g));
    }
    for (i, &a) in cands.iter().enumerate() {
        if let Some(s) = Subgroup::generate_bounded(g, &[a], order) {
            if s.order() == order && s.fingerprint(g) == *target && accept(&s) {
                return Some(s);
            }
        }
        for &b in &cands[i + 1..] {
            let Some(s) = Subgroup::generate_bounded(g, &[a, b], order) else {
                continue;
            };
            if s.order() == order && s.fingerprint(g) == *target && accept(&s) {
                return Some(s);
            }
        }
    }
    None
}
