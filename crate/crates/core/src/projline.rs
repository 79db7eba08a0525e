//! The projective line over GF(q) and `T = PSL(2,q)` acting on it.

use crate::error::{Error, Result};
use crate::field::{Field, FieldElem};
use crate::group::{GroupTable, Subgroup, MAX_GROUP_ORDER};
use crate::perm::Perm;

/// A point of `P^1(GF(q))`: index `i < q` is `[i : 1]`, index `q` is `[1 : 0]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint(pub u32);

impl ProjPoint {
    pub fn infinity(q: u32) -> ProjPoint {
        ProjPoint(q)
    }

    pub fn is_infinity(self, q: u32) -> bool {
        self.0 == q
    }
}

/// `|PSL(2,q)| = q(q^2 - 1)/(2, q - 1)`.
pub fn psl_order(q: u64) -> u64 {
    q * (q * q - 1) / if q % 2 == 1 { 2 } else { 1 }
}

/// `|P_1| = q(q - 1)/(2, q - 1)`.
pub fn borel_order(q: u64) -> u64 {
    q * (q - 1) / if q % 2 == 1 { 2 } else { 1 }
}

fn map_points(field: &Field, f: impl Fn(FieldElem) -> Option<FieldElem>, inf: u32) -> Perm {
    let q = field.order();
    let mut images: Vec<u16> = field
        .elements()
        .map(|x| f(x).map_or(q, |y| y.value()) as u16)
        .collect();
    images.push(inf as u16);
    Perm::from_images(images).expect("Mobius maps permute the projective line")
}

/// `x -> x + b`, fixing infinity.
pub fn translation(field: &Field, b: FieldElem) -> Perm {
    map_points(field, |x| Some(field.add(x, b)), field.order())
}

/// `x -> -1/x`, swapping 0 and infinity.
pub fn negative_inversion(field: &Field) -> Perm {
    map_points(field, |x| field.inv(x).ok().map(|y| field.neg(y)), 0)
}

/// `x -> a x` for `a ≠ 0`, fixing infinity; lies in `PSL(2,q)` iff `a` is a
/// square.
pub fn scaling(field: &Field, a: FieldElem) -> Perm {
    map_points(field, |x| Some(field.mul(a, x)), field.order())
}

/// Frobenius `x -> x^p` on the projective line; normalizes `PSL(2,q)`.
pub fn frobenius(field: &Field) -> Perm {
    map_points(field, |x| Some(field.frobenius(x)), field.order())
}

/// Generators of `PSL(2,q)` on the projective line, in fixed order:
/// `x -> x + 1`, `x -> -1/x`, then `x -> x + e` for the remaining basis
/// elements `e = x^i`, `i = 1..f`. The first two alone generate only
/// `PSL(2,p)` when `q = p^f` with `f > 1`.
pub fn psl_generators(field: &Field) -> Vec<Perm> {
    let mut gens = vec![
        translation(field, FieldElem::ONE),
        negative_inversion(field),
    ];
    for &b in field.basis().iter().skip(1) {
        gens.push(translation(field, b));
    }
    gens
}

/// `T = PSL(2,q)` enumerated by BFS over [`psl_generators`].
pub fn psl_group(field: &Field) -> Result<GroupTable> {
    let q = field.order() as u64;
    if q < 4 {
        return Err(Error::BadOrder(q));
    }
    let order = psl_order(q);
    if order > MAX_GROUP_ORDER as u64 {
        return Err(Error::TooLarge {
            what: "PSL(2,q) order",
            size: order as u128,
            limit: MAX_GROUP_ORDER as u128,
        });
    }
    let t = GroupTable::generate(q as usize + 1, &psl_generators(field))?;
    if t.order() as u64 != order {
        return Err(Error::Invariant(format!(
            "generated group has order {}, expected {order}",
            t.order()
        )));
    }
    Ok(t)
}

/// Stabilizer of `pt` in `t`.
pub fn point_stabilizer(t: &GroupTable, pt: ProjPoint) -> Subgroup {
    let p = pt.0 as usize;
    let members = t.elements().filter(|&e| t.apply(e, p) == p).collect();
    Subgroup::from_members(t, members)
}

/// A field together with its enumerated `PSL(2,q)` and the stabilizer `P_1` of infinity.
pub struct Psl {
    pub field: Field,
    pub group: GroupTable,
    pub p1: Subgroup,
}

impl Psl {
    pub fn new(q: u32) -> Result<Psl> {
        let field = Field::with_order(q as u64)?;
        let group = psl_group(&field)?;
        let p1 = point_stabilizer(&group, ProjPoint::infinity(q));
        Ok(Psl { field, group, p1 })
    }

    pub fn q(&self) -> u32 {
        self.field.order()
    }
}
