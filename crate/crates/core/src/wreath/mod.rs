//! `H = T wr S_m`, the diagonal subgroup `L`, and the twisted functions on which
//! `H` acts.
//!
//! Convention: `(t_1..t_m)σ · (u_1..u_m)τ = (t_i u_{iσ})_i στ`, with permutations
//! acting on the right (`i(στ) = (iσ)τ`). For `m = 2` this gives
//! `ι(c,d) = (d,c)ι`.

pub mod alpha;
pub mod certificate;
pub mod obstruction;
pub mod witness;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Elem, GroupTable, Subgroup};
use crate::perm::Perm;

/// Limit on `|H| = 2|T|^2` for full scans of `H`.
pub const MAX_SCAN_ORDER: u64 = 3_000_000;

/// Limit on `|L| = |T| m!`.
pub const MAX_DIAGONAL_ORDER: u64 = 10_000_000;

/// All permutations of `0..m` in lexicographic order of image lists.
pub fn symmetric_group(m: usize) -> Vec<Vec<u8>> {
    let mut cur: Vec<u8> = (0..m as u8).collect();
    let mut out = vec![cur.clone()];
    // next_permutation
    loop {
        let Some(i) = (1..m).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..m).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}

/// `στ`: apply `σ` then `τ`.
pub fn sym_compose(s: &[u8], t: &[u8]) -> Vec<u8> {
    s.iter().map(|&i| t[i as usize]).collect()
}

pub fn sym_inverse(s: &[u8]) -> Vec<u8> {
    let mut inv = vec![0u8; s.len()];
    for (i, &j) in s.iter().enumerate() {
        inv[j as usize] = i as u8;
    }
    inv
}

pub fn sym_is_identity(s: &[u8]) -> bool {
    s.iter().enumerate().all(|(i, &j)| i == j as usize)
}

fn factorial(m: usize) -> u64 {
    (1..=m as u64).product()
}

/// An element `(t_1, ..., t_m)σ` of `T wr S_m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WreathElem {
    pub parts: Vec<Elem>,
    pub perm: Vec<u8>,
}

impl WreathElem {
    pub fn identity(m: usize) -> WreathElem {
        WreathElem {
            parts: vec![0; m],
            perm: (0..m as u8).collect(),
        }
    }

    pub fn base(parts: Vec<Elem>) -> WreathElem {
        let m = parts.len();
        WreathElem {
            parts,
            perm: (0..m as u8).collect(),
        }
    }

    /// The diagonal element `(x, ..., x)σ` of `L`.
    pub fn diagonal(x: Elem, perm: Vec<u8>) -> WreathElem {
        WreathElem {
            parts: vec![x; perm.len()],
            perm,
        }
    }

    pub fn m(&self) -> usize {
        self.parts.len()
    }

    pub fn mul(&self, t: &GroupTable, other: &WreathElem) -> WreathElem {
        let parts = self
            .parts
            .iter()
            .zip(&self.perm)
            .map(|(&a, &s)| t.mul(a, other.parts[s as usize]))
            .collect();
        WreathElem {
            parts,
            perm: sym_compose(&self.perm, &other.perm),
        }
    }

    pub fn inv(&self, t: &GroupTable) -> WreathElem {
        let pinv = sym_inverse(&self.perm);
        let parts = pinv
            .iter()
            .map(|&j| t.inv(self.parts[j as usize]))
            .collect();
        WreathElem { parts, perm: pinv }
    }

    pub fn is_identity(&self) -> bool {
        self.parts.iter().all(|&p| p == 0) && sym_is_identity(&self.perm)
    }

    /// `Some(x)` if all coordinates equal `x`.
    pub fn diagonal_part(&self) -> Option<Elem> {
        let x = self.parts[0];
        self.parts.iter().all(|&p| p == x).then_some(x)
    }

    pub fn to_wr2(&self) -> Result<Wr2> {
        if self.m() != 2 {
            return Err(Error::WrongDegree {
                expected: 2,
                got: self.m(),
            });
        }
        Ok(Wr2 {
            a: self.parts[0],
            b: self.parts[1],
            swap: self.perm[0] == 1,
        })
    }
}

/// Compact element `(a, b)ι^k` of `T wr S_2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Wr2 {
    pub a: Elem,
    pub b: Elem,
    pub swap: bool,
}

impl Wr2 {
    pub const IDENTITY: Wr2 = Wr2 {
        a: 0,
        b: 0,
        swap: false,
    };
    pub const IOTA: Wr2 = Wr2 {
        a: 0,
        b: 0,
        swap: true,
    };

    pub fn new(a: Elem, b: Elem, swap: bool) -> Wr2 {
        Wr2 { a, b, swap }
    }

    #[inline]
    pub fn mul(self, t: &GroupTable, o: Wr2) -> Wr2 {
        let (c, d) = if self.swap { (o.b, o.a) } else { (o.a, o.b) };
        Wr2 {
            a: t.mul(self.a, c),
            b: t.mul(self.b, d),
            swap: self.swap ^ o.swap,
        }
    }

    #[inline]
    pub fn inv(self, t: &GroupTable) -> Wr2 {
        if self.swap {
            Wr2::new(t.inv(self.b), t.inv(self.a), true)
        } else {
            Wr2::new(t.inv(self.a), t.inv(self.b), false)
        }
    }

    pub fn order(self, t: &GroupTable) -> u32 {
        let mut x = self;
        let mut k = 1;
        while x != Wr2::IDENTITY {
            x = x.mul(t, self);
            k += 1;
        }
        k
    }

    /// Position in the enumeration order of `H`: swap bit, then `a`, then `b`.
    pub fn index(self, n: usize) -> usize {
        (self.swap as usize * n + self.a as usize) * n + self.b as usize
    }

    pub fn from_index(n: usize, idx: usize) -> Wr2 {
        Wr2 {
            a: ((idx / n) % n) as Elem,
            b: (idx % n) as Elem,
            swap: idx >= n * n,
        }
    }

    pub fn to_elem(self) -> WreathElem {
        WreathElem {
            parts: vec![self.a, self.b],
            perm: if self.swap { vec![1, 0] } else { vec![0, 1] },
        }
    }
}

/// Size data for `H = T wr S_m` and its diagonal subgroup `L`.
#[derive(Debug, Clone)]
pub struct WreathGroup {
    pub m: usize,
    pub t_order: usize,
    pub l: DiagonalL,
}

impl WreathGroup {
    pub fn order(&self) -> BigUint {
        BigUint::from(self.t_order).pow(self.m as u32) * BigUint::from(factorial(self.m))
    }

    /// Whether `H` can be scanned element by element.
    pub fn enumerable(&self) -> bool {
        self.m == 2 && 2 * (self.t_order as u64).pow(2) <= MAX_SCAN_ORDER
    }
}

pub fn wreath_group(t: &GroupTable, m: usize) -> Result<WreathGroup> {
    if m < 2 {
        return Err(Error::WrongDegree {
            expected: 2,
            got: m,
        });
    }
    let l_order = (t.order() as u64).saturating_mul(factorial(m.min(20)));
    if m > 10 || l_order > MAX_DIAGONAL_ORDER {
        return Err(Error::TooLarge {
            what: "diagonal subgroup L",
            size: l_order as u128,
            limit: MAX_DIAGONAL_ORDER as u128,
        });
    }
    Ok(WreathGroup {
        m,
        t_order: t.order(),
        l: DiagonalL::new(t.order(), m),
    })
}

/// `L = {(x, ..., x)σ}`, enumerated `x`-major with `σ` in lexicographic order.
#[derive(Debug, Clone)]
pub struct DiagonalL {
    pub n: usize,
    pub m: usize,
    pub sym: Vec<Vec<u8>>,
}

impl DiagonalL {
    pub fn new(n: usize, m: usize) -> DiagonalL {
        DiagonalL {
            n,
            m,
            sym: symmetric_group(m),
        }
    }

    pub fn order(&self) -> usize {
        self.n * self.sym.len()
    }

    pub fn elements(&self) -> impl Iterator<Item = WreathElem> + '_ {
        (0..self.n as Elem).flat_map(move |x| {
            self.sym
                .iter()
                .map(move |s| WreathElem::diagonal(x, s.clone()))
        })
    }

    /// `φ((x,...,x)σ) = x`, standing for conjugation by `x`.
    pub fn phi(&self, l: &WreathElem) -> Option<Elem> {
        l.diagonal_part()
    }
}

/// `K^m` (`swap = false`) or `K wr S_m` (`swap = true`) for `K ≤ T`.
#[derive(Debug, Clone)]
pub struct BaseSubgroup {
    pub k: Subgroup,
    pub swap: bool,
}

impl BaseSubgroup {
    pub fn product(k: Subgroup) -> BaseSubgroup {
        BaseSubgroup { k, swap: false }
    }

    pub fn wreath(k: Subgroup) -> BaseSubgroup {
        BaseSubgroup { k, swap: true }
    }

    pub fn contains(&self, w: &WreathElem) -> bool {
        (self.swap || sym_is_identity(&w.perm)) && w.parts.iter().all(|&p| self.k.contains(p))
    }

    #[inline]
    pub fn contains2(&self, w: Wr2) -> bool {
        (self.swap || !w.swap) && self.k.contains(w.a) && self.k.contains(w.b)
    }

    /// Order of the subgroup for the given `m`.
    pub fn order(&self, m: usize) -> BigUint {
        let base = BigUint::from(self.k.order()).pow(m as u32);
        if self.swap {
            base * BigUint::from(factorial(m))
        } else {
            base
        }
    }

    /// Members for `m = 2`.
    pub fn members2(&self) -> impl Iterator<Item = Wr2> + '_ {
        let ks = self.k.members();
        let swaps: &[bool] = if self.swap { &[false, true] } else { &[false] };
        swaps.iter().flat_map(move |&s| {
            ks.iter()
                .flat_map(move |&a| ks.iter().map(move |&b| Wr2::new(a, b, s)))
        })
    }
}

/// `T wr S_2` (or `T × T` without the swap) as a permutation group on two
/// copies of the projective line: point `i` of copy `c` is `c·d + i`.
pub fn permutation_model(t: &GroupTable, with_swap: bool) -> Result<GroupTable> {
    let gens = model_generators(t, with_swap);
    GroupTable::generate(2 * t.degree(), &gens)
}

fn model_generators(t: &GroupTable, with_swap: bool) -> Vec<Perm> {
    let mut gens = Vec::new();
    for &g in t.generators() {
        gens.push(model_perm(t, Wr2::new(g, 0, false)));
        gens.push(model_perm(t, Wr2::new(0, g, false)));
    }
    if with_swap {
        gens.push(model_perm(t, Wr2::IOTA));
    }
    gens
}

/// The permutation of `2d` points induced by `(a, b)ι^k`.
pub fn model_perm(t: &GroupTable, w: Wr2) -> Perm {
    let d = t.degree();
    let mut images = vec![0u16; 2 * d];
    for i in 0..d {
        let (ia, ib) = (t.apply(w.a, i), t.apply(w.b, i));
        let (ca, cb) = if w.swap { (d, 0) } else { (0, d) };
        images[i] = (ca + ia) as u16;
        images[d + i] = (cb + ib) as u16;
    }
    Perm::from_images(images).expect("wreath action is a permutation")
}
