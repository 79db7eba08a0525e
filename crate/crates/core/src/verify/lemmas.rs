//! Named checks dispatched by `twdeg lemma <id>`.

use num_bigint::BigUint;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::json;

use super::census::maximality_census;
use super::{run_check, run_jobs, CheckResult, Context, Job, Outcome};
use crate::atlas::{
    cached_search, coset_involution_check, find_named_subgroup, triple_side_conditions, AtlasEntry,
    AtlasLabel, SearchOutcome,
};
use crate::error::{Error, Result};
use crate::field::is_prime;
use crate::group::{algo, GroupTable, IsoFingerprint, Subgroup};
use crate::projline::Psl;
use crate::wreath::alpha::{
    act_alpha, build_g, check_wreath_conditions, check_xy_conditions, stabilizer_by_double_cosets,
    AlphaFn, XySolutionSpace,
};
use crate::wreath::certificate::{CertKind, SubdegreeCertificate};
use crate::wreath::obstruction::obstruction_checks;
use crate::wreath::witness::{pair_shape_witness, search_central_t};
use crate::wreath::{BaseSubgroup, Wr2};

pub const LEMMA_IDS: &[&str] = &[
    "overgroup-count",
    "coset-involution",
    "a5-pairwise",
    "s4-pairwise",
    "dihedral-pairwise",
    "triple-intersection",
    "dickson-census",
    "alpha-action",
    "maximality-census",
    "product-conditions",
    "wreath-conditions",
    "obstruction",
    "a5-exclusion",
];

/// Samples per property in `alpha-action`.
pub const ALPHA_SAMPLES: usize = 10_000;
/// Random proper subgroups tested per group in `maximality-census`.
pub const CENSUS_SAMPLES: usize = 200;
const SEED: u64 = 0x0074_7764_6567;

pub fn run_lemma(ctx: &Context, id: &str) -> Result<Vec<CheckResult>> {
    let jobs = match id {
        "overgroup-count" => overgroup_count(ctx),
        "coset-involution" => coset_involution(ctx),
        "a5-pairwise" => a5_pairwise(ctx),
        "s4-pairwise" => s4_pairwise(ctx),
        "dihedral-pairwise" => dihedral_pairwise(ctx),
        "triple-intersection" => triple_intersection(ctx),
        "dickson-census" => dickson_census(ctx),
        "alpha-action" => alpha_action(ctx),
        "maximality-census" => census(ctx),
        "product-conditions" => product_conditions(ctx),
        "wreath-conditions" => wreath_conditions(ctx),
        "obstruction" => obstruction(ctx),
        "a5-exclusion" => a5_exclusion(ctx),
        _ => return Err(Error::UnknownLemma(id.to_string())),
    };
    let out = run_jobs(ctx, jobs);
    ctx.save_cache()?;
    Ok(out)
}

/// `q` values for a check: the configured list (or `default`), with values
/// in `long_only` skipped unless the run is long.
fn q_values(ctx: &Context, default: &[u32], long_only: &[u32]) -> (Vec<u32>, Vec<u32>) {
    let mut d = default.to_vec();
    if ctx.long() {
        d.extend_from_slice(long_only);
    }
    let qs = ctx.config.q_or(&d);
    let (skip, run): (Vec<u32>, Vec<u32>) = qs
        .into_iter()
        .partition(|q| long_only.contains(q) && !ctx.long());
    (run, skip)
}

fn skipped_jobs<'a>(name: &'a str, skip: Vec<u32>) -> Vec<Job<'a>> {
    skip.into_iter()
        .map(|q| -> Job<'a> {
            Box::new(move || vec![CheckResult::skipped(format!("{name}.q{q}"), "long run")])
        })
        .collect()
}

fn with_group(
    ctx: &Context,
    id: String,
    q: u32,
    f: impl FnOnce(&Psl) -> Vec<CheckResult>,
) -> Vec<CheckResult> {
    match ctx.psl(q) {
        Ok(t) => f(&t),
        Err(e) => vec![run_check(id, || Err(e))],
    }
}

/// A pairwise or triple search through the shared witness cache.
fn search(
    ctx: &Context,
    t: &Psl,
    entry: &AtlasEntry,
    target: &IsoFingerprint,
    lemma: &str,
    triple: bool,
) -> SearchOutcome {
    let mut local = ctx.witnesses.lock().expect("cache poisoned").clone();
    let before = local.records.len();
    let out = cached_search(t, entry, target, lemma, triple, Some(&mut local));
    if local.records.len() != before || out.witness().is_some() {
        let mut shared = ctx.witnesses.lock().expect("cache poisoned");
        for r in local.records {
            if shared.get(r.q, &r.label, &r.lemma).is_none() {
                shared.insert(r);
            }
        }
    }
    out
}

fn outcome_text(o: &SearchOutcome, name: &str) -> String {
    match o {
        SearchOutcome::Found(_) => format!("found {name}"),
        SearchOutcome::NotFound { .. } => "not-found".into(),
    }
}

fn outcome_json(o: &SearchOutcome) -> serde_json::Value {
    match o {
        SearchOutcome::Found(w) => json!({ "elements": w.elements, "achieved": w.achieved.name() }),
        SearchOutcome::NotFound { scanned } => json!({ "scanned": scanned }),
    }
}

fn pairwise_check(
    ctx: &Context,
    t: &Psl,
    id: String,
    entry: &AtlasEntry,
    target: IsoFingerprint,
    lemma: &str,
    expect_found: bool,
) -> CheckResult {
    run_check(id, || {
        let name = target.name();
        let o = search(ctx, t, entry, &target, lemma, false);
        let expected = if expect_found {
            format!("found {name}")
        } else {
            "not-found".into()
        };
        Ok(Outcome::new(expected, outcome_text(&o, &name)).with_witness(outcome_json(&o)))
    })
}

fn overgroup_count(ctx: &Context) -> Vec<Job<'_>> {
    let (run, skip) = q_values(ctx, &[7, 11], &[19]);
    let mut jobs = skipped_jobs("overgroup-count", skip);
    for q in run {
        jobs.push(Box::new(move || {
            with_group(ctx, format!("overgroup-count.q{q}"), q, |t| {
                let g = &t.group;
                let (label, rs): (AtlasLabel, Vec<(&str, IsoFingerprint)>) = if AtlasLabel::S4.exists_in(q) && is_prime(q as u64) {
                    (
                        AtlasLabel::S4,
                        vec![
                            ("C2", IsoFingerprint::cyclic(2)),
                            ("C2xC2", IsoFingerprint::klein_four()),
                            ("S3", IsoFingerprint::dihedral(6)),
                            ("D8", IsoFingerprint::dihedral(8)),
                        ],
                    )
                } else if AtlasLabel::A5.exists_in(q) && q > 5 {
                    (
                        AtlasLabel::A5,
                        vec![
                            ("C2", IsoFingerprint::cyclic(2)),
                            ("S3", IsoFingerprint::dihedral(6)),
                            ("D10", IsoFingerprint::dihedral(10)),
                            ("C2xC2", IsoFingerprint::klein_four()),
                        ],
                    )
                } else {
                    return Vec::new();
                };
                let k = match find_named_subgroup(t, label) {
                    Ok(e) => e.subgroup,
                    Err(e) => return vec![run_check(format!("overgroup-count.q{q}"), || Err(e))],
                };
                let mut out = Vec::new();
                for (rname, fp) in rs {
                    let mut count = None;
                    out.push(run_check(format!("overgroup-count.q{q}.{label}.{rname}"), || {
                        let r = algo::find_subgroup(g, &k, &fp, |_| true)
                            .ok_or_else(|| Error::Invariant(format!("{label} has no subgroup {rname}")))?;
                        let c = algo::count_conjugate_overgroups(g, &k, &r)?;
                        count = Some(c.y);
                        Ok(Outcome::new(c.y * c.order_k, c.x * c.normalizer_r).with_witness(json!({
                            "y": c.y, "x": c.x, "normalizer_r": c.normalizer_r, "order_k": c.order_k,
                        })))
                    }));
                    if q == 19 && rname == "C2" {
                        out.push(run_check(format!("overgroup-count.q{q}.{label}.{rname}.y"), || {
                            let y = count.ok_or_else(|| Error::Invariant("count unavailable".into()))?;
                            Ok(Outcome::new(5, y))
                        }));
                    }
                }
                out
            })
        }));
    }
    jobs
}

fn coset_involution(ctx: &Context) -> Vec<Job<'_>> {
    let (run, _) = q_values(ctx, &[4, 5, 7, 8, 9, 11, 13], &[]);
    run.into_iter()
        .map(|q| -> Job {
            Box::new(move || {
                with_group(ctx, format!("coset-involution.q{q}"), q, |t| {
                    vec![run_check(format!("coset-involution.q{q}"), || {
                        Ok(Outcome::new(true, coset_involution_check(&t.group, &t.p1)))
                    })]
                })
            })
        })
        .collect()
}

fn maximal_entry(t: &Psl, label: AtlasLabel) -> Result<AtlasEntry> {
    let e = find_named_subgroup(t, label)?;
    if !e.maximal {
        return Err(Error::NotMaximal {
            order: e.subgroup.order(),
            parent: t.group.order(),
        });
    }
    Ok(e)
}

fn a5_pairwise(ctx: &Context) -> Vec<Job<'_>> {
    let (run, skip) = q_values(ctx, &[11], &[19]);
    let mut jobs = skipped_jobs("a5-pairwise", skip);
    for q in run
        .into_iter()
        .filter(|&q| q >= 11 && AtlasLabel::A5.exists_in(q))
    {
        jobs.push(Box::new(move || {
            let id = format!("a5-pairwise.q{q}.c2");
            with_group(ctx, id.clone(), q, |t| {
                match maximal_entry(t, AtlasLabel::A5) {
                    Ok(e) => vec![pairwise_check(
                        ctx,
                        t,
                        id,
                        &e,
                        IsoFingerprint::cyclic(2),
                        "a5-pairwise",
                        q > 11,
                    )],
                    Err(err) => vec![run_check(id, || Err(err))],
                }
            })
        }));
    }
    jobs
}

fn s4_pairwise(ctx: &Context) -> Vec<Job<'_>> {
    let (run, _) = q_values(ctx, &[7, 23], &[]);
    run.into_iter()
        .filter(|&q| is_prime(q as u64) && AtlasLabel::S4.exists_in(q))
        .map(|q| -> Job {
            Box::new(move || {
                let id = format!("s4-pairwise.q{q}");
                with_group(ctx, id.clone(), q, |t| {
                    match maximal_entry(t, AtlasLabel::S4) {
                        Ok(e) => {
                            let mut out = vec![pairwise_check(
                                ctx,
                                t,
                                format!("{id}.c2xc2"),
                                &e,
                                IsoFingerprint::klein_four(),
                                "s4-pairwise",
                                true,
                            )];
                            if q >= 17 {
                                out.push(pairwise_check(
                                    ctx,
                                    t,
                                    format!("{id}.c2"),
                                    &e,
                                    IsoFingerprint::cyclic(2),
                                    "s4-pairwise-c2",
                                    true,
                                ));
                            }
                            out
                        }
                        Err(err) => vec![run_check(id, || Err(err))],
                    }
                })
            })
        })
        .collect()
}

fn dihedral_pairwise(ctx: &Context) -> Vec<Job<'_>> {
    let (run, _) = q_values(ctx, &[4, 8], &[]);
    run.into_iter()
        .filter(|q| q % 2 == 0)
        .map(|q| -> Job {
            Box::new(move || {
                let id = format!("dihedral-pairwise.q{q}.c2");
                with_group(ctx, id.clone(), q, |t| {
                    match maximal_entry(t, AtlasLabel::DihedralPlus) {
                        Ok(e) => vec![pairwise_check(
                            ctx,
                            t,
                            id,
                            &e,
                            IsoFingerprint::cyclic(2),
                            "dihedral-pairwise",
                            true,
                        )],
                        Err(err) => vec![run_check(id, || Err(err))],
                    }
                })
            })
        })
        .collect()
}

fn triple_intersection(ctx: &Context) -> Vec<Job<'_>> {
    let (run, _) = q_values(ctx, &[11], &[]);
    run.into_iter()
        .filter(|&q| AtlasLabel::A5.exists_in(q) && q > 5)
        .map(|q| -> Job {
            Box::new(move || {
                let id = format!("triple-intersection.q{q}");
                with_group(ctx, id.clone(), q, |t| {
                    let g = &t.group;
                    let e = match maximal_entry(t, AtlasLabel::A5) {
                        Ok(e) => e,
                        Err(err) => return vec![run_check(id, || Err(err))],
                    };
                    let mut pair = None;
                    let mut out = vec![run_check(id.clone(), || {
                        let o = search(
                            ctx,
                            t,
                            &e,
                            &IsoFingerprint::cyclic(2),
                            "triple-intersection",
                            true,
                        );
                        let expected = "found C2 with r, s, sr^-1 outside K";
                        let actual = match &o {
                            SearchOutcome::Found(w) => {
                                let (r, s) = (w.elements[0], w.elements[1]);
                                pair = Some((r, s));
                                if triple_side_conditions(g, &e.subgroup, r, s) {
                                    expected.to_string()
                                } else {
                                    "found C2, side conditions violated".into()
                                }
                            }
                            SearchOutcome::NotFound { .. } => "not-found".into(),
                        };
                        Ok(Outcome::new(expected, actual).with_witness(outcome_json(&o)))
                    })];
                    let Some((r, s)) = pair else {
                        return out;
                    };
                    let m = 6;
                    let d = BaseSubgroup::wreath(e.subgroup.clone());
                    let mut witness = None;
                    out.push(run_check(format!("{id}.m{m}.intersection"), || {
                        let w = pair_shape_witness(g, &d, m, r, s).ok_or_else(|| {
                            Error::Invariant("no central element for t = (1,...,1,r,r,s)".into())
                        })?;
                        // (K ∩ K^r ∩ K^s) × (C2 × S_{m-3})
                        let expected = 2 * 2 * (1..=m - 3).product::<usize>();
                        let actual = w.intersection_order;
                        witness = Some(w);
                        Ok(Outcome::new(expected, actual))
                    }));
                    if let Some(w) = witness {
                        out.push(run_check(format!("{id}.m{m}.subdegree"), || {
                            let value = BigUint::from(g.order() / e.subgroup.order()).pow(m as u32);
                            let cert = SubdegreeCertificate::constructed(
                                q,
                                m,
                                CertKind::CentralWitness,
                                value.clone(),
                                &d,
                                &w,
                            );
                            let actual = if cert.replay(t)? {
                                value.to_string()
                            } else {
                                "mismatch".into()
                            };
                            let expected = BigUint::from(g.order() as u64 / 60).pow(m as u32);
                            Ok(Outcome::new(expected, actual)
                                .with_witness(json!({ "certificate": cert })))
                        }));
                    }
                    out
                })
            })
        })
        .collect()
}

/// `(q, d, classes)` for dihedral subgroups of order `2d`, as claimed. The
/// claimed count is 2 for every odd `d`.
pub const DICKSON_CASES: &[(u32, usize, usize)] = &[(11, 3, 2), (11, 5, 2), (13, 6, 1), (13, 7, 2)];

/// Classes of `D_{2d}` in `PSL(2,q)`, `q` odd, `d > 2`: two when
/// `((q ± 1)/2)/d` is even for the torus order `d` divides, otherwise one.
pub fn dihedral_classes_by_parity(q: u32, d: usize) -> Option<usize> {
    let e = if q % 2 == 1 { 2 } else { 1 };
    [(q as usize - 1) / e, (q as usize + 1) / e]
        .into_iter()
        .find(|n| d > 2 && n % d == 0)
        .map(|n| if (n / d).is_multiple_of(2) { 2 } else { 1 })
}

fn dickson_census(ctx: &Context) -> Vec<Job<'_>> {
    DICKSON_CASES
        .iter()
        .filter(|(q, _, _)| ctx.config.q.is_empty() || ctx.config.q.contains(q))
        .map(|&(q, d, classes)| -> Job {
            Box::new(move || {
                let id = format!("dickson-census.q{q}.d{d}");
                with_group(ctx, id.clone(), q, |t| {
                    let census = algo::dihedral_class_census(&t.group, q, d);
                    let parity = dihedral_classes_by_parity(q, d);
                    vec![
                        run_check(id.clone(), || Ok(Outcome::new(classes, census.clone()?))),
                        run_check(format!("{id}.parity"), || {
                            let p = parity.ok_or(Error::NoSuchSubgroup { q, d })?;
                            Ok(Outcome::new(p, census?))
                        }),
                    ]
                })
            })
        })
        .collect()
}

fn random_alpha(g: &GroupTable, rng: &mut StdRng) -> AlphaFn {
    let n = g.order() as u32;
    AlphaFn::from_values((0..n).map(|_| rng.gen_range(0..n)).collect())
}

fn random_h(g: &GroupTable, rng: &mut StdRng) -> Wr2 {
    let n = g.order() as u32;
    Wr2::new(rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_bool(0.5))
}

/// Failures of `(f^{h1})^{h2} = f^{h1 h2}` over random samples.
pub fn action_axiom_failures(g: &GroupTable, samples: usize, seed: u64) -> usize {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..samples)
        .filter(|_| {
            let a = random_alpha(g, &mut rng);
            let (h1, h2) = (random_h(g, &mut rng), random_h(g, &mut rng));
            act_alpha(g, &act_alpha(g, &a, h1), h2) != act_alpha(g, &a, h1.mul(g, h2))
        })
        .count()
}

/// Failures of the round trip `α -> f -> α` and of `f(zℓ) = f(z)^x` for
/// `ℓ = (x,x)ι^k ∈ L`, over random samples.
pub fn round_trip_failures(g: &GroupTable, samples: usize, seed: u64) -> usize {
    let mut rng = StdRng::seed_from_u64(seed);
    let n = g.order() as u32;
    (0..samples)
        .filter(|_| {
            let a = random_alpha(g, &mut rng);
            let back = g
                .elements()
                .all(|t| a.eval(g, Wr2::new(t, 0, false)) == a.get(t));
            let z = random_h(g, &mut rng);
            let x = rng.gen_range(0..n);
            let l = Wr2::new(x, x, rng.gen_bool(0.5));
            let twisted = a.eval(g, z.mul(g, l)) == g.conj(a.eval(g, z), x);
            !(back && twisted)
        })
        .count()
}

/// Number of functions fixed by `T × T`, and how many random nonidentity
/// samples are fixed by it.
pub fn product_constraint(g: &GroupTable, samples: usize, seed: u64) -> (u128, usize) {
    let whole = Subgroup::whole(g);
    let solutions = XySolutionSpace::new(g, &whole, &whole).count();
    let mut rng = StdRng::seed_from_u64(seed);
    let fixed = (0..samples)
        .filter(|_| {
            let a = random_alpha(g, &mut rng);
            !a.is_identity() && check_xy_conditions(g, &a, &whole, &whole)
        })
        .count();
    (solutions, fixed)
}

fn alpha_action(ctx: &Context) -> Vec<Job<'_>> {
    let (run, _) = q_values(ctx, &[4, 5], &[]);
    run.into_iter()
        .map(|q| -> Job {
            Box::new(move || {
                let id = format!("alpha-action.q{q}");
                with_group(ctx, id.clone(), q, |t| {
                    let g = &t.group;
                    let n = ALPHA_SAMPLES;
                    vec![
                        run_check(format!("{id}.axiom"), || {
                            Ok(Outcome::new(
                                format!("0/{n}"),
                                format!("{}/{n}", action_axiom_failures(g, n, SEED)),
                            ))
                        }),
                        run_check(format!("{id}.round-trip"), || {
                            Ok(Outcome::new(
                                format!("0/{n}"),
                                format!("{}/{n}", round_trip_failures(g, n, SEED + 1)),
                            ))
                        }),
                        run_check(format!("{id}.product-constraint"), || {
                            let (sol, fixed) = product_constraint(g, n, SEED + 2);
                            Ok(Outcome::new(
                                "solutions=1 fixed=0",
                                format!("solutions={sol} fixed={fixed}"),
                            ))
                        }),
                    ]
                })
            })
        })
        .collect()
}

fn census(ctx: &Context) -> Vec<Job<'_>> {
    let (run, _) = q_values(ctx, &[4], &[]);
    run.into_iter()
        .map(|q| -> Job {
            Box::new(move || {
                let id = format!("maximality-census.q{q}");
                with_group(ctx, id.clone(), q, |t| {
                    let mut result = None;
                    let mut out = vec![run_check(format!("{id}.run"), || {
                        let c = maximality_census(t, CENSUS_SAMPLES, SEED)?;
                        let w = serde_json::to_value(&c)?;
                        result = Some(c);
                        Ok(Outcome::new("done", "done").with_witness(w))
                    })];
                    let Some(c) = result else { return out };
                    let n = t.group.order();
                    let fixed =
                        |id: String, e: String, a: String| run_check(id, || Ok(Outcome::new(e, a)));
                    out.push(fixed(
                        format!("{id}.wr.order"),
                        (2 * n * n).to_string(),
                        c.wreath_order.to_string(),
                    ));
                    out.push(fixed(
                        format!("{id}.prod.order"),
                        (n * n).to_string(),
                        c.product_order.to_string(),
                    ));
                    let describe = |order: usize| format!("maximal, order {order}");
                    let mut emit =
                        |prefix: &str,
                         entries: &[super::census::CensusEntry],
                         expected_order: &dyn Fn(&str) -> Option<usize>| {
                            let mut type2 = (0, 0);
                            for e in entries {
                                if e.kind.starts_with("type2") {
                                    type2.0 += 1;
                                    if e.maximal && Some(e.order) == expected_order(&e.kind) {
                                        type2.1 += 1;
                                    }
                                    continue;
                                }
                                let want = expected_order(&e.kind).unwrap_or(0);
                                let actual = if e.maximal {
                                    describe(e.order)
                                } else {
                                    format!("not maximal, order {}", e.order)
                                };
                                out.push(fixed(
                                    format!("{id}.{prefix}.{}", e.kind),
                                    describe(want),
                                    actual,
                                ));
                            }
                            out.push(fixed(
                                format!("{id}.{prefix}.type2"),
                                format!(
                                    "{} of {} maximal, order {}",
                                    c.automorphisms,
                                    c.automorphisms,
                                    expected_order("type2").unwrap_or(0)
                                ),
                                format!(
                                    "{} of {} maximal, order {}",
                                    type2.1,
                                    type2.0,
                                    expected_order("type2").unwrap_or(0)
                                ),
                            ));
                        };
                    let maxes = super::census::maximal_classes(t);
                    let kord = |kind: &str| -> Option<usize> {
                        maxes
                            .iter()
                            .find(|(name, _)| kind.contains(&format!(".{name}")))
                            .map(|(_, k)| k.order())
                    };
                    emit("wr", &c.wreath, &|kind| match kind {
                        "type1" => Some(n * n),
                        k if k.starts_with("type2") => Some(2 * n),
                        k => kord(k).map(|o| 2 * o * o),
                    });
                    emit("prod", &c.product, &|kind| {
                        if kind.starts_with("type2") {
                            Some(n)
                        } else {
                            kord(kind).map(|o| o * n)
                        }
                    });
                    for (prefix, s) in [("wr", &c.wreath_samples), ("prod", &c.product_samples)] {
                        out.push(fixed(
                            format!("{id}.{prefix}.samples"),
                            format!("{0}/{0} covered", s.sampled),
                            format!("{}/{} covered", s.covered, s.sampled),
                        ));
                    }
                    out
                })
            })
        })
        .collect()
}

fn congruence_ok(q: u32) -> bool {
    q.is_multiple_of(2) || q % 4 == 3
}

fn product_conditions(ctx: &Context) -> Vec<Job<'_>> {
    let (run, _) = q_values(ctx, &[7, 8, 11], &[]);
    run.into_iter()
        .filter(|&q| congruence_ok(q))
        .map(|q| -> Job {
            Box::new(move || {
                let id = format!("product-conditions.q{q}");
                with_group(ctx, id.clone(), q, |t| {
                    let g = &t.group;
                    let p1 = &t.p1;
                    vec![
                        run_check(format!("{id}.constructed"), || {
                            let d = BaseSubgroup::product(p1.clone());
                            let w = search_central_t(g, &d, 2)
                                .ok_or_else(|| Error::Invariant("no witness for P1 x P1".into()))?;
                            let a = build_g(
                                g,
                                &d,
                                Wr2::new(w.t[0], w.t[1], false),
                                w.eta,
                                w.sigma[0] == 1,
                            )?;
                            Ok(Outcome::new(
                                "conditions hold",
                                if check_xy_conditions(g, &a, p1, p1) {
                                    "conditions hold"
                                } else {
                                    "conditions fail"
                                },
                            ))
                        }),
                        run_check(format!("{id}.exact"), || {
                            let space = XySolutionSpace::new(g, p1, p1);
                            let all: Vec<AlphaFn> = space
                                .all(g)
                                .into_iter()
                                .filter(|a| !a.is_identity())
                                .collect();
                            let mut good = 0;
                            for a in &all {
                                let s = stabilizer_by_double_cosets(g, a, p1, true)?;
                                if s.is_product(p1, p1) {
                                    good += 1;
                                }
                            }
                            let k = all.len();
                            Ok(Outcome::new(
                                format!("{k} of {k} with H_f = P1 x P1"),
                                format!("{good} of {k} with H_f = P1 x P1"),
                            ))
                        }),
                    ]
                })
            })
        })
        .collect()
}

fn wreath_conditions(ctx: &Context) -> Vec<Job<'_>> {
    let (run, _) = q_values(ctx, &[7, 11], &[]);
    run.into_iter()
        .map(|q| -> Job {
            Box::new(move || {
                with_group(ctx, format!("wreath-conditions.q{q}"), q, |t| {
                    let g = &t.group;
                    let mut out = Vec::new();
                    for label in [
                        AtlasLabel::S4,
                        AtlasLabel::A5,
                        AtlasLabel::DihedralPlus,
                        AtlasLabel::DihedralMinus,
                    ] {
                        let Ok(e) = find_named_subgroup(t, label) else {
                            continue;
                        };
                        if !e.maximal {
                            continue;
                        }
                        let d = BaseSubgroup::wreath(e.subgroup.clone());
                        let Some(w) = search_central_t(g, &d, 2) else {
                            continue;
                        };
                        out.push(run_check(format!("wreath-conditions.q{q}.{label}"), || {
                            let k = &e.subgroup;
                            let a = build_g(
                                g,
                                &d,
                                Wr2::new(w.t[0], w.t[1], false),
                                w.eta,
                                w.sigma[0] == 1,
                            )?;
                            let expected = format!("conditions hold, H_f = {label} wr S2");
                            let cond = check_wreath_conditions(g, &a, k);
                            let s = stabilizer_by_double_cosets(g, &a, k, true)?;
                            let actual = match (cond, s.is_wreath(k)) {
                                (true, true) => expected.clone(),
                                (c, _) => format!(
                                    "conditions {}, H_f = {}",
                                    if c { "hold" } else { "fail" },
                                    s.describe(g)
                                ),
                            };
                            Ok(Outcome::new(expected, actual))
                        }));
                    }
                    out
                })
            })
        })
        .collect()
}

fn obstruction(ctx: &Context) -> Vec<Job<'_>> {
    let (run, _) = q_values(ctx, &[7, 8, 11], &[]);
    run.into_iter()
        .filter(|&q| congruence_ok(q))
        .map(|q| -> Job {
            Box::new(move || {
                let id = format!("obstruction.q{q}");
                with_group(ctx, id.clone(), q, |t| {
                    vec![run_check(id, || {
                        let r = obstruction_checks(t)?;
                        Ok(Outcome::new(true, r.passed()).with_witness(serde_json::to_value(&r)?))
                    })]
                })
            })
        })
        .collect()
}

fn conjugates(g: &GroupTable, k: &Subgroup) -> Vec<Subgroup> {
    let mut out: Vec<Subgroup> = Vec::new();
    for x in g.elements() {
        let c = k.conjugate(g, x);
        if !out.iter().any(|s| s.members() == c.members()) {
            out.push(c);
        }
    }
    out
}

/// Nonidentity functions fixed by some `X × Y ≤ T × T` of index 36 in
/// `PSL(2,9) ≅ A_6`. Subgroup orders of `A_6` rule out index 18, so these
/// pairs are `A_5 × A_5'` (either class on each side) and `T × D_10` up to
/// the swap; a stabilizer of index 36 in `T wr S_2` meets `T × T` in one of them.
pub fn a5_exclusion_fixed(t: &Psl) -> Result<usize> {
    let g = &t.group;
    let whole = Subgroup::whole(g);
    let a5 = IsoFingerprint::alternating5();
    let k0 = algo::find_subgroup(g, &whole, &a5, |_| true)
        .ok_or_else(|| Error::Invariant("no A5 in T".into()))?;
    let class0 = conjugates(g, &k0);
    let k1 = algo::find_subgroup(g, &whole, &a5, |s| {
        !class0.iter().any(|u| u.members() == s.members())
    })
    .ok_or_else(|| Error::Invariant("A5 has one class in T".into()))?;
    let all_a5: Vec<Subgroup> = class0.iter().cloned().chain(conjugates(g, &k1)).collect();
    let d10 = algo::find_subgroup(g, &whole, &IsoFingerprint::dihedral(10), |_| true)
        .ok_or_else(|| Error::Invariant("no D10 in T".into()))?;
    let mut pairs: Vec<(Subgroup, Subgroup)> = Vec::new();
    for x in [&k0, &k1] {
        pairs.extend(all_a5.iter().map(|y| (x.clone(), y.clone())));
    }
    pairs.extend(conjugates(g, &d10).into_iter().map(|y| (whole.clone(), y)));
    Ok(pairs
        .iter()
        .map(|(x, y)| {
            XySolutionSpace::new(g, x, y)
                .all(g)
                .iter()
                .filter(|a| !a.is_identity())
                .count()
        })
        .sum())
}

fn a5_exclusion(ctx: &Context) -> Vec<Job<'_>> {
    let (run, _) = q_values(ctx, &[9], &[]);
    run.into_iter()
        .filter(|&q| q == 9)
        .map(|q| -> Job {
            Box::new(move || {
                let id = format!("a5-exclusion.q{q}.m2");
                with_group(ctx, id.clone(), q, |t| {
                    vec![run_check(id, || {
                        let fixed = a5_exclusion_fixed(t)?;
                        Ok(Outcome::new(
                            "6^2 not a subdegree",
                            if fixed == 0 {
                                "6^2 not a subdegree".to_string()
                            } else {
                                format!("{fixed} fixed functions")
                            },
                        ))
                    })]
                })
            })
        })
        .collect()
}
