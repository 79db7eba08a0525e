use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::table::{Elem, GroupTable};
use crate::error::{Error, Result};

/// Fixed-size membership bitmap over the elements of a parent group.
#[derive(Clone, PartialEq, Eq)]
pub struct ElemSet {
    words: Vec<u64>,
}

impl ElemSet {
    pub fn new(n: usize) -> ElemSet {
        ElemSet {
            words: vec![0; n.div_ceil(64)],
        }
    }

    #[inline]
    pub fn contains(&self, e: Elem) -> bool {
        self.words[e as usize >> 6] >> (e & 63) & 1 == 1
    }

    /// Returns true if `e` was newly inserted.
    #[inline]
    pub fn insert(&mut self, e: Elem) -> bool {
        let w = &mut self.words[e as usize >> 6];
        let bit = 1u64 << (e & 63);
        let fresh = *w & bit == 0;
        *w |= bit;
        fresh
    }
}

/// A subgroup of an enumerated group, stored as its sorted member indices.
#[derive(Clone)]
pub struct Subgroup {
    parent: u64,
    members: Vec<Elem>,
    mask: ElemSet,
    gens: Vec<Elem>,
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Subgroup")
            .field("order", &self.members.len())
            .field("gens", &self.gens)
            .finish()
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.parent == other.parent && self.members == other.members
    }
}
impl Eq for Subgroup {}

/// BFS closure of `gens` in `g`; `None` once the closure exceeds `cap` elements.
pub fn closure(g: &GroupTable, gens: &[Elem], cap: usize) -> Option<Vec<Elem>> {
    let mut seen = ElemSet::new(g.order());
    let mut out = vec![0];
    seen.insert(0);
    let mut i = 0;
    while i < out.len() {
        let x = out[i];
        for &s in gens {
            let y = g.mul(x, s);
            if seen.insert(y) {
                out.push(y);
                if out.len() > cap {
                    return None;
                }
            }
        }
        i += 1;
    }
    out.sort_unstable();
    Some(out)
}

impl Subgroup {
    /// The subgroup generated by `gens`.
    pub fn generate(g: &GroupTable, gens: &[Elem]) -> Subgroup {
        let members = closure(g, gens, usize::MAX).unwrap();
        let gens = gens.iter().copied().filter(|&x| x != 0).collect();
        Self::assemble(g, members, gens)
    }

    /// Generation with an order cap, for bounded searches.
    pub fn generate_bounded(g: &GroupTable, gens: &[Elem], cap: usize) -> Option<Subgroup> {
        let members = closure(g, gens, cap)?;
        let gens = gens.iter().copied().filter(|&x| x != 0).collect();
        Some(Self::assemble(g, members, gens))
    }

    pub fn whole(g: &GroupTable) -> Subgroup {
        Self::assemble(g, g.elements().collect(), g.generators().to_vec())
    }

    pub fn trivial(g: &GroupTable) -> Subgroup {
        Self::assemble(g, vec![0], Vec::new())
    }

    /// Builds a subgroup from a member list that is already known to be closed.
    /// A small generating set is chosen greedily in index order.
    pub fn from_members(g: &GroupTable, mut members: Vec<Elem>) -> Subgroup {
        members.sort_unstable();
        members.dedup();
        let mut gens = Vec::new();
        let mut span = ElemSet::new(g.order());
        span.insert(0);
        let mut span_len = 1;
        for &x in &members {
            if span_len == members.len() {
                break;
            }
            if !span.contains(x) {
                gens.push(x);
                let c = closure(g, &gens, usize::MAX).unwrap();
                span_len = c.len();
                for y in c {
                    span.insert(y);
                }
            }
        }
        debug_assert_eq!(span_len, members.len(), "member list is not a subgroup");
        Self::assemble(g, members, gens)
    }

    fn assemble(g: &GroupTable, members: Vec<Elem>, gens: Vec<Elem>) -> Subgroup {
        let mut mask = ElemSet::new(g.order());
        for &m in &members {
            mask.insert(m);
        }
        Subgroup {
            parent: g.id(),
            members,
            mask,
            gens,
        }
    }

    pub fn parent_id(&self) -> u64 {
        self.parent
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[Elem] {
        &self.members
    }

    pub fn generators(&self) -> &[Elem] {
        &self.gens
    }

    #[inline]
    pub fn contains(&self, e: Elem) -> bool {
        self.mask.contains(e)
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.parent == other.parent && self.gens.iter().all(|&x| other.contains(x))
    }

    /// `S^x = x^-1 S x`.
    pub fn conjugate(&self, g: &GroupTable, x: Elem) -> Subgroup {
        let members = self
            .members
            .iter()
            .map(|&s| g.conj(s, x))
            .collect::<Vec<_>>();
        let gens = self.gens.iter().map(|&s| g.conj(s, x)).collect();
        let mut members = members;
        members.sort_unstable();
        Self::assemble(g, members, gens)
    }

    pub fn is_abelian(&self, g: &GroupTable) -> bool {
        self.gens
            .iter()
            .enumerate()
            .all(|(i, &a)| self.gens[i + 1..].iter().all(|&b| g.commutes(a, b)))
    }

    pub fn is_normal_in(&self, g: &GroupTable, over: &Subgroup) -> bool {
        over.gens
            .iter()
            .all(|&x| self.gens.iter().all(|&s| self.contains(g.conj(s, x))))
    }

    pub fn fingerprint(&self, g: &GroupTable) -> IsoFingerprint {
        IsoFingerprint::new(
            self.members.iter().map(|&e| g.elem_order(e)),
            self.is_abelian(g),
        )
    }

    pub fn check_parent(&self, g: &GroupTable) -> Result<()> {
        if self.parent == g.id() {
            Ok(())
        } else {
            Err(Error::ParentMismatch)
        }
    }
}

/// Isomorphism invariant used to name the small groups arising here:
/// order, multiset of element orders and commutativity.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IsoFingerprint {
    pub order: usize,
    /// Sorted element orders.
    pub element_orders: Vec<u32>,
    pub abelian: bool,
}

impl IsoFingerprint {
    pub fn new(orders: impl Iterator<Item = u32>, abelian: bool) -> IsoFingerprint {
        let mut element_orders: Vec<u32> = orders.collect();
        element_orders.sort_unstable();
        IsoFingerprint {
            order: element_orders.len(),
            element_orders,
            abelian,
        }
    }

    pub fn histogram(&self) -> BTreeMap<u32, usize> {
        let mut h = BTreeMap::new();
        for &o in &self.element_orders {
            *h.entry(o).or_insert(0) += 1;
        }
        h
    }

    /// Cyclic group of order n.
    pub fn cyclic(n: u32) -> IsoFingerprint {
        let orders = (0..n).map(|k| n / gcd(n, k));
        IsoFingerprint::new(orders, true)
    }

    /// Dihedral group of order 2n (`D_{2n}` in the notation used throughout).
    pub fn dihedral(two_n: u32) -> IsoFingerprint {
        let n = two_n / 2;
        let rot = (0..n).map(|k| n / gcd(n, k));
        let refl = std::iter::repeat_n(2, n as usize);
        IsoFingerprint::new(rot.chain(refl), n <= 2)
    }

    pub fn klein_four() -> IsoFingerprint {
        IsoFingerprint::new([1, 2, 2, 2].into_iter(), true)
    }

    pub fn alternating4() -> IsoFingerprint {
        Self::from_counts(&[(1, 1), (2, 3), (3, 8)], false)
    }

    pub fn symmetric4() -> IsoFingerprint {
        Self::from_counts(&[(1, 1), (2, 9), (3, 8), (4, 6)], false)
    }

    pub fn alternating5() -> IsoFingerprint {
        Self::from_counts(&[(1, 1), (2, 15), (3, 20), (5, 24)], false)
    }

    pub fn from_counts(counts: &[(u32, usize)], abelian: bool) -> IsoFingerprint {
        let orders = counts.iter().flat_map(|&(o, c)| std::iter::repeat_n(o, c));
        IsoFingerprint::new(orders, abelian)
    }

    /// Short human-readable name when the fingerprint matches a standard group.
    pub fn name(&self) -> String {
        let n = self.order as u32;
        if *self == Self::cyclic(n) {
            return format!("C{n}");
        }
        if *self == Self::klein_four() {
            return "C2^2".into();
        }
        if n.is_multiple_of(2) && *self == Self::dihedral(n) {
            return format!("D{n}");
        }
        if *self == Self::alternating4() {
            return "A4".into();
        }
        if *self == Self::symmetric4() {
            return "S4".into();
        }
        if *self == Self::alternating5() {
            return "A5".into();
        }
        let hist: Vec<String> = self
            .histogram()
            .iter()
            .map(|(o, c)| format!("{o}^{c}"))
            .collect();
        format!(
            "[{}; {}{}]",
            n,
            hist.join(" "),
            if self.abelian { "; abelian" } else { "" }
        )
    }
}

impl fmt::Debug for IsoFingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

impl fmt::Display for IsoFingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_fingerprints() {
        assert_eq!(
            IsoFingerprint::klein_four().element_orders,
            vec![1, 2, 2, 2]
        );
        assert_eq!(
            IsoFingerprint::dihedral(8).element_orders,
            vec![1, 2, 2, 2, 2, 2, 4, 4]
        );
        assert!(!IsoFingerprint::dihedral(8).abelian);
        assert!(IsoFingerprint::dihedral(4).abelian);
        let a5 = IsoFingerprint::alternating5();
        assert_eq!(a5.order, 60);
        assert_eq!(a5.histogram()[&5], 24);
        assert_eq!(IsoFingerprint::cyclic(6).name(), "C6");
        assert_eq!(IsoFingerprint::dihedral(6).name(), "D6");
        assert_eq!(IsoFingerprint::dihedral(4).name(), "C2^2");
    }

    #[test]
    fn elemset_basic() {
        let mut s = ElemSet::new(130);
        assert!(s.insert(129));
        assert!(!s.insert(129));
        assert!(s.contains(129));
        assert!(!s.contains(64));
    }
}
