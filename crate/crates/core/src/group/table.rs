use std::collections::VecDeque;
use std::sync::atomic::{AtomicU64, Ordering};

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::perm::Perm;

/// Index of an element inside a [`GroupTable`].
pub type Elem = u32;

/// Groups of at most this order get a full multiplication table.
const MUL_TABLE_LIMIT: usize = 2500;

/// Hard cap on enumerated group orders.
pub const MAX_GROUP_ORDER: usize = 10_000_000;

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

enum Lookup {
    /// Images of the base points, 16 bits each.
    Packed(FxHashMap<u128, Elem>),
    Full(FxHashMap<Box<[u16]>, Elem>),
}

/// A fully enumerated permutation group.
///
/// Elements are numbered by breadth-first search from the identity (index 0),
/// expanding queued elements in FIFO order and multiplying by the generators in
/// the order given. The numbering is therefore a pure function of the generator
/// list.
pub struct GroupTable {
    id: u64,
    degree: usize,
    images: Vec<u16>,
    generators: Vec<Elem>,
    inverse: Vec<Elem>,
    orders: Vec<u32>,
    base: Vec<u16>,
    lookup: Lookup,
    mul_table: Option<Vec<Elem>>,
}

impl std::fmt::Debug for GroupTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GroupTable")
            .field("degree", &self.degree)
            .field("order", &self.order())
            .field("generators", &self.generators)
            .finish()
    }
}

impl GroupTable {
    pub fn generate(degree: usize, gens: &[Perm]) -> Result<GroupTable> {
        Self::generate_with_limit(degree, gens, MAX_GROUP_ORDER)
    }

    pub fn generate_with_limit(degree: usize, gens: &[Perm], limit: usize) -> Result<GroupTable> {
        assert!(degree <= u16::MAX as usize);
        for g in gens {
            assert_eq!(g.degree(), degree, "generator degree mismatch");
        }
        let mut images: Vec<u16> = (0..degree as u16).collect();
        let mut seen: FxHashMap<Box<[u16]>, Elem> = FxHashMap::default();
        seen.insert(images.clone().into_boxed_slice(), 0);
        let mut queue = VecDeque::from([0usize]);
        let mut scratch = vec![0u16; degree];
        while let Some(e) = queue.pop_front() {
            for g in gens {
                for (i, s) in scratch.iter_mut().enumerate() {
                    let mid = images[e * degree + i];
                    *s = g.images()[mid as usize];
                }
                if !seen.contains_key(scratch.as_slice()) {
                    let idx = seen.len();
                    if idx >= limit {
                        return Err(Error::TooLarge {
                            what: "group order",
                            size: idx as u128 + 1,
                            limit: limit as u128,
                        });
                    }
                    seen.insert(scratch.clone().into_boxed_slice(), idx as Elem);
                    images.extend_from_slice(&scratch);
                    queue.push_back(idx);
                }
            }
        }
        let n = seen.len();
        let generators = gens.iter().map(|g| seen[g.images()]).collect::<Vec<_>>();

        let base = compute_base(degree, n, &images);
        let lookup = if base.len() <= 8 {
            let mut map = FxHashMap::default();
            map.reserve(n);
            for e in 0..n {
                let row = &images[e * degree..(e + 1) * degree];
                map.insert(pack(base.iter().map(|&b| row[b as usize])), e as Elem);
            }
            Lookup::Packed(map)
        } else {
            Lookup::Full(seen)
        };

        let mut table = GroupTable {
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            degree,
            images,
            generators,
            inverse: Vec::new(),
            orders: Vec::new(),
            base,
            lookup,
            mul_table: None,
        };
        table.inverse = (0..n as Elem)
            .map(|e| {
                table
                    .index_of(&table.perm(e).inverse())
                    .expect("closed group")
            })
            .collect();
        if n <= MUL_TABLE_LIMIT {
            let mut mul = vec![0; n * n];
            for a in 0..n {
                for b in 0..n {
                    mul[a * n + b] = table.mul_by_lookup(a as Elem, b as Elem);
                }
            }
            table.mul_table = Some(mul);
        }
        table.orders = (0..n as Elem)
            .map(|e| {
                let mut x = e;
                let mut k = 1;
                while x != 0 {
                    x = table.mul(x, e);
                    k += 1;
                }
                k
            })
            .collect();
        Ok(table)
    }

    /// Unique identity of this table, used to detect subgroups of different parents.
    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.images.len() / self.degree.max(1)
    }

    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        0..self.order() as Elem
    }

    pub fn base(&self) -> &[u16] {
        &self.base
    }

    #[inline]
    pub fn images(&self, e: Elem) -> &[u16] {
        let d = self.degree;
        &self.images[e as usize * d..(e as usize + 1) * d]
    }

    pub fn perm(&self, e: Elem) -> Perm {
        Perm::from_images(self.images(e).to_vec()).expect("stored permutations are valid")
    }

    #[inline]
    pub fn apply(&self, e: Elem, point: usize) -> usize {
        self.images[e as usize * self.degree + point] as usize
    }

    pub fn index_of(&self, p: &Perm) -> Option<Elem> {
        if p.degree() != self.degree {
            return None;
        }
        match &self.lookup {
            Lookup::Packed(map) => {
                let e = *map.get(&pack(self.base.iter().map(|&b| p.images()[b as usize])))?;
                (self.images(e) == p.images()).then_some(e)
            }
            Lookup::Full(map) => map.get(p.images()).copied(),
        }
    }

    pub fn contains(&self, p: &Perm) -> bool {
        self.index_of(p).is_some()
    }

    fn mul_by_lookup(&self, a: Elem, b: Elem) -> Elem {
        let ra = self.images(a);
        let rb = self.images(b);
        match &self.lookup {
            Lookup::Packed(map) => {
                map[&pack(self.base.iter().map(|&x| rb[ra[x as usize] as usize]))]
            }
            Lookup::Full(map) => {
                let prod: Vec<u16> = ra.iter().map(|&i| rb[i as usize]).collect();
                map[prod.as_slice()]
            }
        }
    }

    /// The product `ab` (apply `a`, then `b`).
    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.mul_table {
            Some(t) => t[a as usize * self.order() + b as usize],
            None => self.mul_by_lookup(a, b),
        }
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inverse[a as usize]
    }

    /// `a^g = g^-1 a g`.
    #[inline]
    pub fn conj(&self, a: Elem, g: Elem) -> Elem {
        self.mul(self.mul(self.inv(g), a), g)
    }

    #[inline]
    pub fn commutes(&self, a: Elem, b: Elem) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    #[inline]
    pub fn elem_order(&self, a: Elem) -> u32 {
        self.orders[a as usize]
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut acc = 0;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn is_involution(&self, a: Elem) -> bool {
        self.orders[a as usize] == 2
    }
}

fn pack(points: impl Iterator<Item = u16>) -> u128 {
    points.fold(0u128, |acc, p| (acc << 16) | p as u128)
}

/// Greedy base: points are added while they still cut down the pointwise
/// stabilizer of the points chosen so far.
fn compute_base(degree: usize, n: usize, images: &[u16]) -> Vec<u16> {
    let mut live: Vec<usize> = (1..n).collect();
    let mut base = Vec::new();
    for pt in 0..degree {
        if live.is_empty() {
            break;
        }
        let before = live.len();
        live.retain(|&e| images[e * degree + pt] as usize == pt);
        if live.len() < before {
            base.push(pt as u16);
        }
    }
    base
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(n: usize) -> GroupTable {
        let mut cyc: Vec<u16> = (1..n as u16).collect();
        cyc.push(0);
        let mut tr: Vec<u16> = (0..n as u16).collect();
        tr.swap(0, 1);
        GroupTable::generate(
            n,
            &[
                Perm::from_images(cyc).unwrap(),
                Perm::from_images(tr).unwrap(),
            ],
        )
        .unwrap()
    }

    #[test]
    fn symmetric_group_orders() {
        assert_eq!(sym(3).order(), 6);
        assert_eq!(sym(5).order(), 120);
    }

    #[test]
    fn table_is_closed_and_consistent() {
        let g = sym(5);
        assert!(g.perm(0).is_identity());
        for a in g.elements() {
            assert_eq!(g.mul(a, g.inv(a)), 0);
            assert_eq!(g.perm(a).order() as u32, g.elem_order(a));
            for b in g.elements().step_by(7) {
                let p = g.perm(a).then(&g.perm(b));
                assert_eq!(g.index_of(&p), Some(g.mul(a, b)));
            }
        }
    }

    #[test]
    fn order_limit() {
        let mut cyc: Vec<u16> = (1..6u16).collect();
        cyc.push(0);
        let mut tr: Vec<u16> = (0..6u16).collect();
        tr.swap(0, 1);
        let err = GroupTable::generate_with_limit(
            6,
            &[
                Perm::from_images(cyc).unwrap(),
                Perm::from_images(tr).unwrap(),
            ],
            100,
        )
        .unwrap_err();
        assert!(matches!(err, Error::TooLarge { .. }));
    }

    #[test]
    fn large_base_uses_full_lookup() {
        // The elementary abelian group generated by 9 disjoint transpositions needs a base of 9.
        let gens: Vec<Perm> = (0..9)
            .map(|k| {
                let mut v: Vec<u16> = (0..18).collect();
                v.swap(2 * k, 2 * k + 1);
                Perm::from_images(v).unwrap()
            })
            .collect();
        let g = GroupTable::generate(18, &gens).unwrap();
        assert_eq!(g.order(), 512);
        assert_eq!(g.base().len(), 9);
        for a in g.elements().step_by(13) {
            assert_eq!(g.index_of(&g.perm(a)), Some(a));
        }
    }
}
