//! Named subgroups of `PSL(2,q)` and intersection searches over conjugates.

use std::fmt;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{algo, Elem, GroupTable, IsoFingerprint, Subgroup};
use crate::projline::Psl;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AtlasLabel {
    P1,
    /// `D_{2(q+1)/(2,q-1)}`.
    DihedralPlus,
    /// `D_{2(q-1)/(2,q-1)}`.
    DihedralMinus,
    A4,
    S4,
    A5,
}

impl AtlasLabel {
    pub const ALL: [AtlasLabel; 6] = [
        AtlasLabel::P1,
        AtlasLabel::DihedralPlus,
        AtlasLabel::DihedralMinus,
        AtlasLabel::A4,
        AtlasLabel::S4,
        AtlasLabel::A5,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AtlasLabel::P1 => "P1",
            AtlasLabel::DihedralPlus => "DihedralPlus",
            AtlasLabel::DihedralMinus => "DihedralMinus",
            AtlasLabel::A4 => "A4",
            AtlasLabel::S4 => "S4",
            AtlasLabel::A5 => "A5",
        }
    }

    pub fn parse(s: &str) -> Option<AtlasLabel> {
        Self::ALL
            .into_iter()
            .find(|l| l.name().eq_ignore_ascii_case(s))
    }

    /// Whether `PSL(2,q)` has a subgroup of this type.
    pub fn exists_in(self, q: u32) -> bool {
        let odd = q % 2 == 1;
        match self {
            AtlasLabel::P1 | AtlasLabel::DihedralPlus => true,
            AtlasLabel::DihedralMinus => q > 3,
            AtlasLabel::A4 => odd || q.trailing_zeros().is_multiple_of(2),
            AtlasLabel::S4 => odd && matches!(q % 8, 1 | 7),
            AtlasLabel::A5 => q.is_multiple_of(5) || (q as u64 * q as u64) % 5 == 1,
        }
    }

    /// Expected isomorphism type inside `PSL(2,q)`; `None` for `P1`, which is
    /// checked by order only.
    pub fn fingerprint(self, q: u32) -> Option<IsoFingerprint> {
        let k = if q % 2 == 1 { 2 } else { 1 };
        Some(match self {
            AtlasLabel::P1 => return None,
            AtlasLabel::DihedralPlus => IsoFingerprint::dihedral(2 * (q + 1) / k),
            AtlasLabel::DihedralMinus => IsoFingerprint::dihedral(2 * (q - 1) / k),
            AtlasLabel::A4 => IsoFingerprint::alternating4(),
            AtlasLabel::S4 => IsoFingerprint::symmetric4(),
            AtlasLabel::A5 => IsoFingerprint::alternating5(),
        })
    }
}

impl fmt::Display for AtlasLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone)]
pub struct AtlasEntry {
    pub label: AtlasLabel,
    pub subgroup: Subgroup,
    pub maximal: bool,
}

impl AtlasEntry {
    pub fn index(&self, t: &GroupTable) -> usize {
        t.order() / self.subgroup.order()
    }
}

/// Deterministic construction of a named subgroup: the first candidate in
/// element-index order.
pub fn find_named_subgroup(t: &Psl, label: AtlasLabel) -> Result<AtlasEntry> {
    let q = t.q();
    let g = &t.group;
    let missing = || Error::NotPresent {
        label: label.name().to_string(),
        q,
    };
    if !label.exists_in(q) {
        return Err(missing());
    }
    let k = if q % 2 == 1 { 2 } else { 1 };
    let subgroup = match label {
        AtlasLabel::P1 => t.p1.clone(),
        AtlasLabel::DihedralPlus => dihedral_from_cycle(g, (q + 1) / k).ok_or_else(missing)?,
        AtlasLabel::DihedralMinus => dihedral_from_cycle(g, (q - 1) / k).ok_or_else(missing)?,
        AtlasLabel::A4 => triangle_subgroup(g, 3, 12).ok_or_else(missing)?,
        AtlasLabel::S4 => triangle_subgroup(g, 4, 24).ok_or_else(missing)?,
        AtlasLabel::A5 => triangle_subgroup(g, 5, 60).ok_or_else(missing)?,
    };
    let expected = label.fingerprint(q);
    if expected.is_some_and(|fp| subgroup.fingerprint(g) != fp) {
        return Err(Error::Invariant(format!(
            "{label} in PSL(2,{q}) has fingerprint {}",
            subgroup.fingerprint(g)
        )));
    }
    let maximal = algo::is_maximal(g, &subgroup);
    Ok(AtlasEntry {
        label,
        subgroup,
        maximal,
    })
}

/// `N_T(<c>)` for the first `c` of order `d`, cut down to `<c, j>` when the
/// normalizer is larger than `D_{2d}`.
fn dihedral_from_cycle(g: &GroupTable, d: u32) -> Option<Subgroup> {
    let c = g.elements().find(|&x| g.elem_order(x) == d)?;
    let cyc = Subgroup::generate(g, &[c]);
    let n = algo::normalizer(g, &cyc);
    if n.order() == 2 * d as usize {
        return Some(n);
    }
    let ci = g.inv(c);
    let j = n
        .members()
        .iter()
        .copied()
        .find(|&j| g.is_involution(j) && g.conj(c, j) == ci && !cyc.contains(j))?;
    Some(Subgroup::generate(g, &[c, j]))
}

/// `<a, b>` with `a` the first involution, `b` the first element of order 3
/// such that `ab` has order `n`; this is a quotient of the `(2,3,n)` triangle
/// group, so it is `A4`, `S4` or `A5` once its order is right.
fn triangle_subgroup(g: &GroupTable, n: u32, order: usize) -> Option<Subgroup> {
    let threes: Vec<Elem> = g.elements().filter(|&x| g.elem_order(x) == 3).collect();
    for a in g.elements().filter(|&x| g.is_involution(x)) {
        for &b in &threes {
            if g.elem_order(g.mul(a, b)) != n {
                continue;
            }
            if let Some(s) = Subgroup::generate_bounded(g, &[a, b], order) {
                if s.order() == order {
                    return Some(s);
                }
            }
        }
    }
    None
}

/// `K ∩ K^s` where `K^s = s^-1 K s`.
pub fn intersect_conjugate(g: &GroupTable, k: &Subgroup, s: Elem) -> Vec<Elem> {
    let si = g.inv(s);
    k.members()
        .iter()
        .copied()
        .filter(|&x| k.contains(g.conj(x, si)))
        .collect()
}

fn fingerprint_of(g: &GroupTable, members: Vec<Elem>) -> IsoFingerprint {
    Subgroup::from_members(g, members).fingerprint(g)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionWitness {
    pub kind: String,
    /// `[t]` for pairwise searches, `[r, s]` for triple searches.
    pub elements: Vec<Elem>,
    pub achieved: IsoFingerprint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(IntersectionWitness),
    /// Certified negative: every candidate was examined.
    NotFound {
        scanned: usize,
    },
}

impl SearchOutcome {
    pub fn witness(&self) -> Option<&IntersectionWitness> {
        match self {
            SearchOutcome::Found(w) => Some(w),
            SearchOutcome::NotFound { .. } => None,
        }
    }
}

/// First right-coset representative `s` of `K` (index order) with
/// `K ∩ K^s` of the target type.
pub fn search_intersection(
    g: &GroupTable,
    k: &Subgroup,
    target: &IsoFingerprint,
    kind: &str,
) -> SearchOutcome {
    let reps = algo::right_coset_reps(g, k);
    let hit = reps.par_iter().position_first(|&s| {
        let m = intersect_conjugate(g, k, s);
        m.len() == target.order && fingerprint_of(g, m) == *target
    });
    match hit {
        Some(i) => SearchOutcome::Found(IntersectionWitness {
            kind: kind.to_string(),
            elements: vec![reps[i]],
            achieved: target.clone(),
        }),
        None => SearchOutcome::NotFound {
            scanned: reps.len(),
        },
    }
}

/// First pair `(r, s)` of coset representatives with `K ∩ K^r ∩ K^s` of the
/// target type, subject to `r, s, sr^-1 ∉ K`.
pub fn search_triple_intersection(
    g: &GroupTable,
    k: &Subgroup,
    target: &IsoFingerprint,
    kind: &str,
) -> SearchOutcome {
    let reps = algo::right_coset_reps(g, k);
    let pairs: Vec<(Elem, Elem)> = reps
        .iter()
        .enumerate()
        .flat_map(|(i, &r)| reps[i + 1..].iter().map(move |&s| (r, s)))
        .filter(|&(r, s)| !k.contains(r) && !k.contains(s))
        .collect();
    let hit = pairs.par_iter().position_first(|&(r, s)| {
        let kr = Subgroup::from_members(g, intersect_conjugate(g, k, r));
        let m = intersect_conjugate(g, &kr, s)
            .into_iter()
            .filter(|&x| k.contains(g.conj(x, g.inv(s))))
            .collect::<Vec<_>>();
        m.len() == target.order && fingerprint_of(g, m) == *target
    });
    match hit {
        Some(i) => {
            let (r, s) = pairs[i];
            debug_assert!(!k.contains(g.mul(s, g.inv(r))));
            SearchOutcome::Found(IntersectionWitness {
                kind: kind.to_string(),
                elements: vec![r, s],
                achieved: target.clone(),
            })
        }
        None => SearchOutcome::NotFound {
            scanned: pairs.len(),
        },
    }
}

/// `K ∩ K^{e_1} ∩ ... ∩ K^{e_n}` for a stored witness.
pub fn replay_intersection(g: &GroupTable, k: &Subgroup, elements: &[Elem]) -> IsoFingerprint {
    let mut members = k.members().to_vec();
    for &e in elements {
        let ei = g.inv(e);
        members.retain(|&x| k.contains(g.conj(x, ei)));
    }
    fingerprint_of(g, members)
}

/// Side conditions for a triple witness: `r, s, sr^-1 ∉ K`.
pub fn triple_side_conditions(g: &GroupTable, k: &Subgroup, r: Elem, s: Elem) -> bool {
    !k.contains(r) && !k.contains(s) && !k.contains(g.mul(s, g.inv(r)))
}

/// True iff every coset `P_1 s` with `s ∉ P_1` contains an involution.
pub fn coset_involution_check(g: &GroupTable, p1: &Subgroup) -> bool {
    algo::right_coset_reps(g, p1)
        .into_par_iter()
        .filter(|&s| !p1.contains(s))
        .all(|s| p1.members().iter().any(|&p| g.is_involution(g.mul(p, s))))
}

/// One stored witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub q: u32,
    pub label: String,
    pub lemma: String,
    pub element_indices: Vec<Elem>,
    pub fingerprint: IsoFingerprint,
}

/// Witness cache persisted as a JSON list of [`WitnessRecord`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WitnessCache {
    pub records: Vec<WitnessRecord>,
}

impl WitnessCache {
    pub fn load(path: &Path) -> Result<WitnessCache> {
        if !path.exists() {
            return Ok(WitnessCache::default());
        }
        let text = std::fs::read_to_string(path)?;
        Ok(WitnessCache {
            records: serde_json::from_str(&text)?,
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(&self.records)?;
        std::fs::write(path, text)?;
        Ok(())
    }

    pub fn get(&self, q: u32, label: &str, lemma: &str) -> Option<&WitnessRecord> {
        self.records
            .iter()
            .find(|r| r.q == q && r.label == label && r.lemma == lemma)
    }

    pub fn insert(&mut self, record: WitnessRecord) {
        self.records
            .retain(|r| !(r.q == record.q && r.label == record.label && r.lemma == record.lemma));
        self.records.push(record);
        self.records
            .sort_by(|a, b| (a.q, &a.lemma, &a.label).cmp(&(b.q, &b.lemma, &b.label)));
    }
}

/// Runs a pairwise or triple search, consulting and filling the cache.
/// Cached witnesses are replayed before use.
pub fn cached_search(
    t: &Psl,
    entry: &AtlasEntry,
    target: &IsoFingerprint,
    lemma: &str,
    triple: bool,
    cache: Option<&mut WitnessCache>,
) -> SearchOutcome {
    let g = &t.group;
    let label = entry.label.name();
    if let Some(c) = cache.as_deref() {
        if let Some(rec) = c.get(t.q(), label, lemma) {
            let ok = rec
                .element_indices
                .iter()
                .all(|&e| (e as usize) < g.order())
                && replay_intersection(g, &entry.subgroup, &rec.element_indices) == *target;
            if ok {
                return SearchOutcome::Found(IntersectionWitness {
                    kind: lemma.to_string(),
                    elements: rec.element_indices.clone(),
                    achieved: target.clone(),
                });
            }
        }
    }
    let out = if triple {
        search_triple_intersection(g, &entry.subgroup, target, lemma)
    } else {
        search_intersection(g, &entry.subgroup, target, lemma)
    };
    if let (Some(c), SearchOutcome::Found(w)) = (cache, &out) {
        c.insert(WitnessRecord {
            q: t.q(),
            label: label.to_string(),
            lemma: lemma.to_string(),
            element_indices: w.elements.clone(),
            fingerprint: w.achieved.clone(),
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_subgroups_at_q7() {
        let t = Psl::new(7).unwrap();
        let s4 = find_named_subgroup(&t, AtlasLabel::S4).unwrap();
        assert_eq!(s4.index(&t.group), 7);
        assert!(s4.maximal);
        let dp = find_named_subgroup(&t, AtlasLabel::DihedralPlus).unwrap();
        assert_eq!(dp.subgroup.order(), 8);
        assert!(matches!(
            find_named_subgroup(&t, AtlasLabel::A5),
            Err(Error::NotPresent { .. })
        ));
    }

    #[test]
    fn existence_conditions() {
        assert!(AtlasLabel::A5.exists_in(11));
        assert!(AtlasLabel::A5.exists_in(9));
        assert!(AtlasLabel::A5.exists_in(4));
        assert!(!AtlasLabel::A5.exists_in(13));
        assert!(AtlasLabel::S4.exists_in(17));
        assert!(!AtlasLabel::S4.exists_in(11));
        assert!(!AtlasLabel::A4.exists_in(8));
        assert!(AtlasLabel::A4.exists_in(16));
    }

    #[test]
    fn identity_pair_gives_k() {
        let t = Psl::new(11).unwrap();
        let a5 = find_named_subgroup(&t, AtlasLabel::A5).unwrap();
        assert_eq!(
            replay_intersection(&t.group, &a5.subgroup, &[0, 0]),
            IsoFingerprint::alternating5()
        );
    }

    #[test]
    fn cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("w.json");
        let mut c = WitnessCache::default();
        c.insert(WitnessRecord {
            q: 7,
            label: "S4".into(),
            lemma: "3.5a".into(),
            element_indices: vec![3],
            fingerprint: IsoFingerprint::klein_four(),
        });
        c.save(&path).unwrap();
        assert_eq!(WitnessCache::load(&path).unwrap(), c);
    }
}
