//! Maximal subgroups of `T wr S_2` and `T × T`, checked by overgroup tests in
//! a permutation model, plus a random sample of proper subgroups that must
//! each lie in a conjugate of one of them.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::atlas::{find_named_subgroup, AtlasLabel};
use crate::error::{Error, Result};
use crate::group::{algo, Elem, GroupTable, Subgroup};
use crate::perm::Perm;
use crate::projline::{frobenius, psl_generators, scaling, Psl};
use crate::wreath::{model_perm, permutation_model, Wr2};

/// `Aut(T) = PΓL(2,q)` as maps `t -> t^σ` on element indices, identity first.
pub fn automorphisms(t: &Psl) -> Result<Vec<Vec<Elem>>> {
    let g = &t.group;
    let field = &t.field;
    let mut gens = psl_generators(field);
    let q = field.order();
    let prim = field
        .elements()
        .find(|&a| field.mult_order(a) == Some(q - 1))
        .ok_or_else(|| Error::Invariant(format!("GF({q}) has no primitive element")))?;
    gens.push(scaling(field, prim));
    gens.push(frobenius(field));
    let aut = GroupTable::generate(g.degree(), &gens)?;
    let perms: Vec<Perm> = g.elements().map(|x| g.perm(x)).collect();
    aut.elements()
        .map(|a| {
            let p = aut.perm(a);
            let pi = p.inverse();
            perms
                .iter()
                .map(|x| {
                    g.index_of(&pi.then(x).then(&p))
                        .ok_or_else(|| Error::Invariant("PΓL(2,q) does not normalize T".into()))
                })
                .collect()
        })
        .collect()
}

/// Maximal subgroups of `T` available from the atlas, one per conjugacy class.
pub fn maximal_classes(t: &Psl) -> Vec<(String, Subgroup)> {
    let g = &t.group;
    let mut out: Vec<(String, Subgroup)> = Vec::new();
    for label in AtlasLabel::ALL {
        let Ok(e) = find_named_subgroup(t, label) else {
            continue;
        };
        if !e.maximal {
            continue;
        }
        let dup = out.iter().any(|(_, k)| {
            k.order() == e.subgroup.order() && conjugate_subgroups(g, k, &e.subgroup)
        });
        if !dup {
            out.push((label.name().to_string(), e.subgroup));
        }
    }
    out
}

fn conjugate_subgroups(g: &GroupTable, a: &Subgroup, b: &Subgroup) -> bool {
    g.elements()
        .any(|x| a.conjugate(g, x).members() == b.members())
}

#[derive(Debug, Clone, Serialize)]
pub struct CensusEntry {
    pub kind: String,
    pub order: usize,
    pub maximal: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SampleReport {
    pub sampled: usize,
    pub covered: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Census {
    pub q: u32,
    pub wreath_order: usize,
    pub product_order: usize,
    /// Number of automorphisms `σ`.
    pub automorphisms: usize,
    pub wreath: Vec<CensusEntry>,
    pub product: Vec<CensusEntry>,
    pub wreath_samples: SampleReport,
    pub product_samples: SampleReport,
}

struct Model {
    group: GroupTable,
}

impl Model {
    fn new(t: &GroupTable, with_swap: bool) -> Result<Model> {
        Ok(Model {
            group: permutation_model(t, with_swap)?,
        })
    }

    fn elem(&self, t: &GroupTable, w: Wr2) -> Elem {
        self.group
            .index_of(&model_perm(t, w))
            .expect("model contains every element of H")
    }

    fn generate(&self, t: &GroupTable, gens: &[Wr2]) -> Subgroup {
        let gs: Vec<Elem> = gens.iter().map(|&w| self.elem(t, w)).collect();
        Subgroup::generate(&self.group, &gs)
    }
}

fn entry(model: &Model, kind: String, x: &Subgroup) -> CensusEntry {
    CensusEntry {
        kind,
        order: x.order(),
        maximal: algo::is_maximal(&model.group, x),
    }
}

/// First `(a, b)` in index order such that `(a, b)ι` normalizes
/// `S = {(x, x^σ)}` and squares into it.
fn swap_normalizer(g: &GroupTable, sigma: &[Elem]) -> Option<Wr2> {
    let n = g.order() as Elem;
    let in_s = |w: Wr2| !w.swap && sigma[w.a as usize] == w.b;
    let s_gens: Vec<Wr2> = g
        .generators()
        .iter()
        .map(|&x| Wr2::new(x, sigma[x as usize], false))
        .collect();
    (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .find_map(|(a, b)| {
            let w = Wr2::new(a, b, true);
            let wi = w.inv(g);
            let normal = s_gens.iter().all(|&s| in_s(wi.mul(g, s).mul(g, w)));
            (normal && in_s(w.mul(g, w))).then_some(w)
        })
}

/// Whether `Y = <gens>` lies in some conjugate of one of `reps`.
fn covered(model: &GroupTable, reps: &[Subgroup], gens: &[Elem]) -> bool {
    reps.iter().any(|x| {
        algo::right_coset_reps(model, x).into_iter().any(|r| {
            let ri = model.inv(r);
            gens.iter()
                .all(|&y| x.contains(model.mul(model.mul(r, y), ri)))
        })
    })
}

fn sample(model: &GroupTable, reps: &[Subgroup], samples: usize, rng: &mut StdRng) -> SampleReport {
    let n = model.order();
    let mut sampled = 0;
    let mut covered_count = 0;
    let mut attempts = 0;
    while sampled < samples && attempts < 20 * samples {
        attempts += 1;
        let k = 1 + attempts % 2;
        let gens: Vec<Elem> = (0..k).map(|_| rng.gen_range(0..n as Elem)).collect();
        let Some(_) = Subgroup::generate_bounded(model, &gens, n / 2) else {
            continue;
        };
        sampled += 1;
        if covered(model, reps, &gens) {
            covered_count += 1;
        }
    }
    SampleReport {
        sampled,
        covered: covered_count,
    }
}

/// Runs the census for `T = PSL(2,q)`.
pub fn maximality_census(t: &Psl, samples: usize, seed: u64) -> Result<Census> {
    let g = &t.group;
    let auts = automorphisms(t)?;
    let maxes = maximal_classes(t);
    let mut rng = StdRng::seed_from_u64(seed);

    let wr = Model::new(g, true)?;
    let base_gens = |left: bool| -> Vec<Wr2> {
        g.generators()
            .iter()
            .map(|&x| {
                if left {
                    Wr2::new(x, 0, false)
                } else {
                    Wr2::new(0, x, false)
                }
            })
            .collect()
    };
    let diag_gens = |sigma: &[Elem]| -> Vec<Wr2> {
        g.generators()
            .iter()
            .map(|&x| Wr2::new(x, sigma[x as usize], false))
            .collect()
    };

    let mut wreath = Vec::new();
    let mut wreath_reps = Vec::new();
    let mut tt = base_gens(true);
    tt.extend(base_gens(false));
    let type1 = wr.generate(g, &tt);
    wreath.push(entry(&wr, "type1".into(), &type1));
    wreath_reps.push(type1);
    for (i, sigma) in auts.iter().enumerate() {
        let Some(w) = swap_normalizer(g, sigma) else {
            continue;
        };
        let mut gens = diag_gens(sigma);
        gens.push(w);
        let x = wr.generate(g, &gens);
        wreath.push(entry(&wr, format!("type2.sigma{i}"), &x));
        wreath_reps.push(x);
    }
    for (name, k) in &maxes {
        let mut gens: Vec<Wr2> = k
            .generators()
            .iter()
            .map(|&a| Wr2::new(a, 0, false))
            .collect();
        gens.extend(k.generators().iter().map(|&a| Wr2::new(0, a, false)));
        gens.push(Wr2::IOTA);
        let x = wr.generate(g, &gens);
        wreath.push(entry(&wr, format!("type3.{name}"), &x));
        wreath_reps.push(x);
    }
    let wreath_samples = sample(&wr.group, &wreath_reps, samples, &mut rng);

    let pr = Model::new(g, false)?;
    let mut product = Vec::new();
    let mut product_reps = Vec::new();
    for (name, k) in &maxes {
        for (side, left) in [("left", true), ("right", false)] {
            let mut gens: Vec<Wr2> = k
                .generators()
                .iter()
                .map(|&a| {
                    if left {
                        Wr2::new(a, 0, false)
                    } else {
                        Wr2::new(0, a, false)
                    }
                })
                .collect();
            gens.extend(base_gens(!left));
            let x = pr.generate(g, &gens);
            product.push(entry(&pr, format!("type1.{name}.{side}"), &x));
            product_reps.push(x);
        }
    }
    for (i, sigma) in auts.iter().enumerate() {
        let x = pr.generate(g, &diag_gens(sigma));
        product.push(entry(&pr, format!("type2.sigma{i}"), &x));
        product_reps.push(x);
    }
    let product_samples = sample(&pr.group, &product_reps, samples, &mut rng);

    Ok(Census {
        q: t.q(),
        wreath_order: wr.group.order(),
        product_order: pr.group.order(),
        automorphisms: auts.len(),
        wreath,
        product,
        wreath_samples,
        product_samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aut_psl24_is_s5() {
        let t = Psl::new(4).unwrap();
        let auts = automorphisms(&t).unwrap();
        assert_eq!(auts.len(), 120);
        let g = &t.group;
        for s in auts.iter().take(10) {
            for a in g.elements().take(20) {
                for b in g.elements().take(20) {
                    assert_eq!(s[g.mul(a, b) as usize], g.mul(s[a as usize], s[b as usize]));
                }
            }
        }
    }

    #[test]
    fn maximal_classes_q4() {
        let t = Psl::new(4).unwrap();
        let orders: Vec<usize> = maximal_classes(&t).iter().map(|(_, k)| k.order()).collect();
        assert_eq!(orders, vec![12, 10, 6]);
    }
}
