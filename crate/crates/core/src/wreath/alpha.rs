//! Elements of `N` for `m = 2`, stored as `α(t) = f((t, 1))`, and their
//! stabilizers in `H = T wr S_2`.
//!
//! `f((a, b)ι^k) = α(ab^-1)^b` and `f^h(z) = f(hz)`, which gives
//! `α^{(x,y)}(t) = α(x t y^-1)^y` and `α^{(x,y)ι}(t) = α(x t^-1 y^-1)^{yt}`.

use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};

use super::witness::{central_diagonals, DiagElem};
use super::{symmetric_group, BaseSubgroup, Wr2, MAX_SCAN_ORDER};
use crate::error::{Error, Result};
use crate::group::{algo, Elem, GroupTable, IsoFingerprint, Subgroup};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AlphaFn {
    values: Vec<Elem>,
}

impl AlphaFn {
    pub fn identity(n: usize) -> AlphaFn {
        AlphaFn { values: vec![0; n] }
    }

    pub fn from_values(values: Vec<Elem>) -> AlphaFn {
        AlphaFn { values }
    }

    #[inline]
    pub fn get(&self, t: Elem) -> Elem {
        self.values[t as usize]
    }

    pub fn values(&self) -> &[Elem] {
        &self.values
    }

    pub fn is_identity(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    /// `f(z)` for an arbitrary `z ∈ H`.
    #[inline]
    pub fn eval(&self, g: &GroupTable, z: Wr2) -> Elem {
        g.conj(self.get(g.mul(z.a, g.inv(z.b))), z.b)
    }

    /// Whether `h` fixes `f`, with early exit.
    #[inline]
    pub fn fixed_by(&self, g: &GroupTable, h: Wr2) -> bool {
        let (x, y) = (h.a, h.b);
        let yi = g.inv(y);
        if h.swap {
            (0..self.values.len() as Elem).all(|t| {
                let arg = g.mul(g.mul(x, g.inv(t)), yi);
                g.conj(self.get(arg), g.mul(y, t)) == self.get(t)
            })
        } else {
            (0..self.values.len() as Elem).all(|t| {
                let arg = g.mul(g.mul(x, t), yi);
                g.conj(self.get(arg), y) == self.get(t)
            })
        }
    }
}

/// `α` of `f^h`.
pub fn act_alpha(g: &GroupTable, alpha: &AlphaFn, h: Wr2) -> AlphaFn {
    let (x, y) = (h.a, h.b);
    let yi = g.inv(y);
    let values = g
        .elements()
        .map(|t| {
            if h.swap {
                let arg = g.mul(g.mul(x, g.inv(t)), yi);
                g.conj(alpha.get(arg), g.mul(y, t))
            } else {
                g.conj(alpha.get(g.mul(g.mul(x, t), yi)), y)
            }
        })
        .collect();
    AlphaFn { values }
}

/// Exact stabilizer `H_f`.
#[derive(Debug, Clone)]
pub struct Stabilizer {
    pub order: u64,
    pub h_order: u64,
    /// Sorted by [`Wr2::index`]; present when requested.
    pub members: Option<Vec<Wr2>>,
}

impl Stabilizer {
    pub fn index(&self) -> u64 {
        self.h_order / self.order
    }

    /// `H_f ∩ T^2`, projected to the two coordinates, and whether it is the
    /// full product of the projections.
    pub fn shape(&self) -> Option<StabShape> {
        let members = self.members.as_ref()?;
        let mut left: Vec<Elem> = Vec::new();
        let mut right: Vec<Elem> = Vec::new();
        let mut base = 0u64;
        let mut swap = false;
        for w in members {
            if w.swap {
                swap = true;
                continue;
            }
            base += 1;
            if w.b == 0 {
                left.push(w.a);
            }
            if w.a == 0 {
                right.push(w.b);
            }
        }
        left.sort_unstable();
        right.sort_unstable();
        let product = base == (left.len() * right.len()) as u64
            && members
                .iter()
                .filter(|w| !w.swap)
                .all(|w| left.binary_search(&w.a).is_ok() && right.binary_search(&w.b).is_ok());
        Some(StabShape {
            left,
            right,
            product,
            swap,
        })
    }

    /// `H_f = X × Y`.
    pub fn is_product(&self, x: &Subgroup, y: &Subgroup) -> bool {
        self.order == (x.order() * y.order()) as u64
            && self.members.as_ref().is_some_and(|ms| {
                ms.iter()
                    .all(|w| !w.swap && x.contains(w.a) && y.contains(w.b))
            })
    }

    /// `H_f = K wr S_2`.
    pub fn is_wreath(&self, k: &Subgroup) -> bool {
        self.order == 2 * (k.order() * k.order()) as u64
            && self
                .members
                .as_ref()
                .is_some_and(|ms| ms.iter().all(|w| k.contains(w.a) && k.contains(w.b)))
    }

    /// Isomorphism fingerprint of `H_f`; only for stabilizers up to `limit`.
    pub fn fingerprint(&self, g: &GroupTable, limit: usize) -> Option<IsoFingerprint> {
        let ms = self.members.as_ref()?;
        if ms.len() > limit {
            return None;
        }
        let orders = ms.iter().map(|w| w.order(g));
        let gens = greedy_generators(g, ms);
        let abelian = gens
            .iter()
            .enumerate()
            .all(|(i, &a)| gens[i + 1..].iter().all(|&b| a.mul(g, b) == b.mul(g, a)));
        Some(IsoFingerprint::new(orders, abelian))
    }

    /// Short description such as `D8 wr S2` or `[21; ...] x [21; ...]`.
    pub fn describe(&self, g: &GroupTable) -> String {
        let Some(shape) = self.shape() else {
            return format!("order {}", self.order);
        };
        let name = |v: &[Elem]| {
            let s = Subgroup::from_members(g, v.to_vec());
            s.fingerprint(g).name()
        };
        if shape.product {
            let (l, r) = (name(&shape.left), name(&shape.right));
            let expected =
                if shape.swap { 2 } else { 1 } * (shape.left.len() * shape.right.len()) as u64;
            if shape.swap && shape.left == shape.right && expected == self.order {
                return format!("{l} wr S2");
            }
            if !shape.swap {
                return format!("{l} x {r}");
            }
        }
        format!("order {}", self.order)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabShape {
    pub left: Vec<Elem>,
    pub right: Vec<Elem>,
    pub product: bool,
    pub swap: bool,
}

fn greedy_generators(g: &GroupTable, members: &[Wr2]) -> Vec<Wr2> {
    let mut span: FxHashSet<Wr2> = FxHashSet::default();
    span.insert(Wr2::IDENTITY);
    let mut gens = Vec::new();
    for &x in members {
        if span.len() == members.len() {
            break;
        }
        if span.contains(&x) {
            continue;
        }
        gens.push(x);
        let mut queue: Vec<Wr2> = span.iter().copied().collect();
        while let Some(y) = queue.pop() {
            for &s in &gens {
                let z = y.mul(g, s);
                if span.insert(z) {
                    queue.push(z);
                }
            }
        }
    }
    gens
}

fn h_order(g: &GroupTable) -> u64 {
    2 * (g.order() as u64).pow(2)
}

/// `H_f` by scanning every element of `H`.
pub fn stabilizer_full(g: &GroupTable, alpha: &AlphaFn, keep_members: bool) -> Result<Stabilizer> {
    let n = g.order();
    let total = h_order(g);
    if total > MAX_SCAN_ORDER {
        return Err(Error::TooLarge {
            what: "stabilizer scan",
            size: total as u128,
            limit: MAX_SCAN_ORDER as u128,
        });
    }
    let rows: Vec<(bool, Elem)> = [false, true]
        .into_iter()
        .flat_map(|s| (0..n as Elem).map(move |a| (s, a)))
        .collect();
    let count = AtomicU64::new(0);
    let found: Vec<Vec<Wr2>> = rows
        .par_iter()
        .map(|&(swap, a)| {
            let mut local = Vec::new();
            for b in 0..n as Elem {
                let h = Wr2::new(a, b, swap);
                if alpha.fixed_by(g, h) {
                    count.fetch_add(1, Ordering::Relaxed);
                    if keep_members {
                        local.push(h);
                    }
                }
            }
            local
        })
        .collect();
    Ok(Stabilizer {
        order: count.into_inner(),
        h_order: total,
        members: keep_members.then(|| found.into_iter().flatten().collect()),
    })
}

/// `H_f` as a union of `(K × K)`-double cosets `(KaK × KbK)ι^k`; requires
/// `K × K ≤ H_f`.
pub fn stabilizer_by_double_cosets(
    g: &GroupTable,
    alpha: &AlphaFn,
    k: &Subgroup,
    keep_members: bool,
) -> Result<Stabilizer> {
    if !check_xy_conditions(g, alpha, k, k) {
        return Err(Error::Invariant("K x K does not fix f".into()));
    }
    let reps = algo::double_coset_reps(g, k, k);
    let triples: Vec<(usize, usize, bool)> = (0..reps.len())
        .flat_map(|i| (0..reps.len()).flat_map(move |j| [(i, j, false), (i, j, true)]))
        .collect();
    let fixing: Vec<(usize, usize, bool)> = triples
        .into_par_iter()
        .filter(|&(i, j, s)| alpha.fixed_by(g, Wr2::new(reps[i].0, reps[j].0, s)))
        .collect();
    let order = fixing
        .iter()
        .map(|&(i, j, _)| (reps[i].1 * reps[j].1) as u64)
        .sum();
    let members = keep_members.then(|| {
        let cosets: Vec<Vec<Elem>> = reps
            .iter()
            .map(|&(a, _)| algo::double_coset(g, k, a, k))
            .collect();
        let mut out: Vec<Wr2> = fixing
            .iter()
            .flat_map(|&(i, j, s)| {
                let right = &cosets[j];
                cosets[i]
                    .iter()
                    .flat_map(move |&a| right.iter().map(move |&b| Wr2::new(a, b, s)))
            })
            .collect();
        out.sort_unstable_by_key(|w| w.index(g.order()));
        out
    });
    Ok(Stabilizer {
        order,
        h_order: h_order(g),
        members,
    })
}

/// `X × Y ≤ H_f` iff `α(xt) = α(t)` and `α(ty) = α(t)^y` for all `t`;
/// generators of `X` and `Y` suffice since both conditions compose.
pub fn check_xy_conditions(g: &GroupTable, alpha: &AlphaFn, x: &Subgroup, y: &Subgroup) -> bool {
    g.elements().all(|t| {
        let at = alpha.get(t);
        x.generators().iter().all(|&a| alpha.get(g.mul(a, t)) == at)
            && y.generators()
                .iter()
                .all(|&b| alpha.get(g.mul(t, b)) == g.conj(at, b))
    })
}

/// `K wr S_2 ≤ H_f` and `f ≠ id`: `α(kt) = α(t)`, `α(t) = α(t^-1)^t`, and
/// `α` is not identically `1`.
pub fn check_wreath_conditions(g: &GroupTable, alpha: &AlphaFn, k: &Subgroup) -> bool {
    let left = g.elements().all(|t| {
        let at = alpha.get(t);
        k.generators().iter().all(|&a| alpha.get(g.mul(a, t)) == at)
    });
    let swap = g
        .elements()
        .all(|t| alpha.get(t) == g.conj(alpha.get(g.inv(t)), t));
    left && swap && !alpha.is_identity()
}

/// `D^t ∩ L` for `m = 2` and arbitrary `t`, by filtering `L`.
pub fn diag_intersection2(g: &GroupTable, d: &BaseSubgroup, t: Wr2) -> Vec<DiagElem> {
    let ti = t.inv(g);
    let mut out = Vec::new();
    for x in g.elements() {
        for (si, swap) in [(0usize, false), (1, true)] {
            let l = Wr2::new(x, x, swap);
            if d.contains2(t.mul(g, l).mul(g, ti)) {
                out.push(DiagElem { x, sigma: si });
            }
        }
    }
    out
}

/// `α_g` for the function `g(dtℓ) = η^{φ(ℓ)}`, `g = 1` off `DtL`.
///
/// For `dt = (a, b)ι^k` the unique `ℓ` with `dtℓ = (ab^-1, 1)` is
/// `(b^-1, b^-1)ι^k`, so `α(ab^-1) = η^{b^-1}`. When `|D||L|` is small every
/// pair `(d, ℓ)` is enumerated and all implied values are cross-checked.
pub fn build_g(
    g: &GroupTable,
    d: &BaseSubgroup,
    t: Wr2,
    eta: Elem,
    sigma_swap: bool,
) -> Result<AlphaFn> {
    let not_central = || Error::NotCentral {
        eta,
        perm: sigma_swap as usize,
    };
    if eta == 0 {
        return Err(not_central());
    }
    let elems = diag_intersection2(g, d, t);
    let target = DiagElem {
        x: eta,
        sigma: sigma_swap as usize,
    };
    let sym = symmetric_group(2);
    if !elems.contains(&target) || !central_diagonals(g, &elems, &sym).contains(&target) {
        return Err(not_central());
    }
    let n = g.order();
    let mut values: Vec<Option<Elem>> = vec![None; n];
    let mut record = |point: Elem, v: Elem| -> Result<()> {
        match values[point as usize] {
            Some(old) if old != v => Err(Error::Inconsistent {
                point,
                first: old,
                second: v,
            }),
            _ => {
                values[point as usize] = Some(v);
                Ok(())
            }
        }
    };
    let d_size = d.k.order() * d.k.order() * if d.swap { 2 } else { 1 };
    let exhaustive = d_size * 2 * n <= 20_000_000;
    for dd in d.members2() {
        let dt = dd.mul(g, t);
        if exhaustive {
            for x in g.elements() {
                for swap in [false, true] {
                    let z = dt.mul(g, Wr2::new(x, x, swap));
                    let v = g.conj(eta, x);
                    // f(z) = α(ab^-1)^b
                    record(g.mul(z.a, g.inv(z.b)), g.conj(v, g.inv(z.b)))?;
                }
            }
        } else {
            let bi = g.inv(dt.b);
            record(g.mul(dt.a, bi), g.conj(eta, bi))?;
        }
    }
    let alpha = AlphaFn {
        values: values.into_iter().map(|v| v.unwrap_or(0)).collect(),
    };
    debug_assert!(!alpha.is_identity());
    Ok(alpha)
}

/// `α_h` for `γ ≠ 1`: `D = C_T(γ) wr S_2`, `t = 1`, `η = γ`.
pub fn build_h(g: &GroupTable, gamma: Elem) -> Result<(AlphaFn, Subgroup)> {
    if gamma == 0 {
        return Err(Error::TrivialElement);
    }
    let c = algo::centralizer(g, gamma);
    let alpha = build_g(
        g,
        &BaseSubgroup::wreath(c.clone()),
        Wr2::IDENTITY,
        gamma,
        false,
    )?;
    Ok((alpha, c))
}

/// All `α` with `X × Y ≤ H_f`: free values at representatives `t` of
/// `X\T/Y`, constrained to `C_T(X^t ∩ Y)`, propagated by `α(xty) = α(t)^y`.
#[derive(Debug, Clone)]
pub struct XySolutionSpace {
    pub x: Subgroup,
    pub y: Subgroup,
    /// Double-coset representative and its allowed values (identity first).
    pub slots: Vec<(Elem, Vec<Elem>)>,
}

impl XySolutionSpace {
    pub fn new(g: &GroupTable, x: &Subgroup, y: &Subgroup) -> XySolutionSpace {
        let slots = algo::double_coset_reps(g, x, y)
            .into_iter()
            .map(|(t, _)| {
                let ti = g.inv(t);
                // X^t ∩ Y = {y ∈ Y : t y t^-1 ∈ X}
                let stab: Vec<Elem> = y
                    .members()
                    .iter()
                    .copied()
                    .filter(|&b| x.contains(g.conj(b, ti)))
                    .collect();
                let allowed = g
                    .elements()
                    .filter(|&v| stab.iter().all(|&b| g.commutes(v, b)))
                    .collect();
                (t, allowed)
            })
            .collect();
        XySolutionSpace {
            x: x.clone(),
            y: y.clone(),
            slots,
        }
    }

    /// Number of solutions, identity included.
    pub fn count(&self) -> u128 {
        self.slots.iter().map(|(_, a)| a.len() as u128).product()
    }

    /// The solution choosing `slots[i].1[choice[i]]` at each representative.
    pub fn build(&self, g: &GroupTable, choice: &[usize]) -> AlphaFn {
        let mut values = vec![0; g.order()];
        for ((t, allowed), &c) in self.slots.iter().zip(choice) {
            let v = allowed[c];
            for &a in self.x.members() {
                let at = g.mul(a, *t);
                for &b in self.y.members() {
                    values[g.mul(at, b) as usize] = g.conj(v, b);
                }
            }
        }
        AlphaFn { values }
    }

    /// Every solution, in lexicographic order of choices.
    pub fn all(&self, g: &GroupTable) -> Vec<AlphaFn> {
        let mut out = Vec::new();
        let mut choice = vec![0usize; self.slots.len()];
        loop {
            out.push(self.build(g, &choice));
            let Some(i) = (0..choice.len())
                .rev()
                .find(|&i| choice[i] + 1 < self.slots[i].1.len())
            else {
                return out;
            };
            choice[i] += 1;
            for c in &mut choice[i + 1..] {
                *c = 0;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projline::Psl;

    #[test]
    fn identity_alpha_is_fixed_by_everything() {
        let t = Psl::new(4).unwrap();
        let a = AlphaFn::identity(60);
        let s = stabilizer_full(&t.group, &a, false).unwrap();
        assert_eq!(s.index(), 1);
        assert_eq!(act_alpha(&t.group, &a, Wr2::new(3, 8, true)), a);
    }

    #[test]
    fn lemma_t_t_forces_identity() {
        let t = Psl::new(7).unwrap();
        let whole = Subgroup::whole(&t.group);
        let space = XySolutionSpace::new(&t.group, &whole, &whole);
        assert_eq!(space.count(), 1);
    }

    #[test]
    fn build_g_rejects_noncentral() {
        let t = Psl::new(7).unwrap();
        let d = BaseSubgroup::product(t.p1.clone());
        assert!(matches!(
            build_g(&t.group, &d, Wr2::IDENTITY, 0, false),
            Err(Error::NotCentral { .. })
        ));
    }
}
