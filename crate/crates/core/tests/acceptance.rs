//! Acceptance criteria 1-10, each run at its stated time bound. Prints one
//! `PASS`/`FAIL` line per criterion.
//!
//! Criterion 7 is expected to fail: two of its four class counts are wrong,
//! and an independent brute-force count below confirms the computed values.

use std::collections::BTreeSet;
use std::io::Write;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_integer::Integer;
use twdeg::atlas::{
    coset_involution_check, find_named_subgroup, replay_intersection, search_intersection,
    search_triple_intersection, triple_side_conditions, AtlasLabel, SearchOutcome,
};
use twdeg::group::{algo, Elem, GroupTable, IsoFingerprint, Subgroup};
use twdeg::projline::Psl;
use twdeg::verify::census::maximality_census;
use twdeg::verify::lemmas::{action_axiom_failures, product_constraint, round_trip_failures};
use twdeg::wreath::alpha::{
    build_g, build_h, stabilizer_by_double_cosets, stabilizer_full, AlphaFn,
};
use twdeg::wreath::certificate::{CertKind, SubdegreeCertificate};
use twdeg::wreath::obstruction::obstruction_checks;
use twdeg::wreath::witness::{pair_shape_witness, search_central_t};
use twdeg::wreath::{BaseSubgroup, Wr2};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn single_threaded<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .expect("thread pool")
        .install(f)
}

fn with_workers<T: Send>(n: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .expect("thread pool")
        .install(f)
}

fn element_of_order(g: &GroupTable, n: u32) -> Elem {
    g.elements()
        .find(|&x| g.elem_order(x) == n)
        .expect("element of requested order")
}

fn psl_order(q: u64) -> u64 {
    q * (q * q - 1) / (q - 1).gcd(&2)
}

fn wreath_alpha(t: &Psl, d: &BaseSubgroup) -> AlphaFn {
    let g = &t.group;
    let w = search_central_t(g, d, 2).expect("central witness");
    build_g(
        g,
        d,
        Wr2::new(w.t[0], w.t[1], false),
        w.eta,
        w.sigma[0] == 1,
    )
    .expect("alpha")
}

fn criterion_1() -> Check {
    let mut parts = Vec::new();
    for q in [4u64, 7, 8, 9, 11, 13] {
        let t = Psl::new(q as u32).map_err(|e| e.to_string())?;
        let e = if q % 2 == 1 { 2 } else { 1 };
        ensure(t.group.order() as u64 == q * (q * q - 1) / e, || {
            format!("|T| wrong at q={q}")
        })?;
        ensure(t.group.order() as u64 == psl_order(q), || {
            format!("|T| wrong at q={q}")
        })?;
        ensure(t.p1.order() as u64 == q * (q - 1) / e, || {
            format!("|P1| wrong at q={q}")
        })?;
        let fixes_inf =
            t.p1.members()
                .iter()
                .all(|&x| t.group.apply(x, q as usize) == q as usize);
        ensure(fixes_inf, || format!("P1 moves infinity at q={q}"))?;
        parts.push(format!("{}", t.group.order()));
    }
    Ok(format!("|T| = {}", parts.join(", ")))
}

fn criterion_2() -> Check {
    let mut parts = Vec::new();
    for (q, order) in [(7u32, 8u32), (11, 12), (9, 8), (13, 12)] {
        let t = Psl::new(q).map_err(|e| e.to_string())?;
        let g = &t.group;
        let gamma = element_of_order(g, 2);
        let c = algo::centralizer(g, gamma);
        ensure(c.fingerprint(g) == IsoFingerprint::dihedral(order), || {
            format!("C_T(involution) at q={q} is {}", c.fingerprint(g).name())
        })?;
        // Oracle: brute-force commuting elements.
        let brute = g.elements().filter(|&x| g.commutes(x, gamma)).count();
        ensure(brute == order as usize, || {
            format!("brute centralizer {brute} at q={q}")
        })?;
        parts.push(format!("q={q}: D{order}"));
    }
    Ok(parts.join(", "))
}

fn criterion_3() -> Check {
    let t = Psl::new(7).map_err(|e| e.to_string())?;
    let g = &t.group;
    let (inv, _) = build_h(g, element_of_order(g, 2)).map_err(|e| e.to_string())?;
    let (uni, _) = build_h(g, element_of_order(g, 7)).map_err(|e| e.to_string())?;
    let p1 = BaseSubgroup::product(t.p1.clone());
    let s4 = find_named_subgroup(&t, AtlasLabel::S4)
        .map_err(|e| e.to_string())?
        .subgroup;
    let f = wreath_alpha(&t, &p1);
    let gfn = wreath_alpha(&t, &BaseSubgroup::wreath(s4.clone()));
    let [a, b, c, d] = single_threaded(|| {
        [&inv, &uni, &f, &gfn].map(|x| stabilizer_full(g, x, true).expect("scan"))
    });
    let got = [a.index(), b.index(), c.index(), d.index()];
    ensure(got == [441, 576, 128, 49], || format!("subdegrees {got:?}"))?;
    ensure(c.is_product(&t.p1, &t.p1), || "H_f is not P1 x P1".into())?;
    ensure(d.is_wreath(&s4), || "H_g is not S4 wr S2".into())?;
    ensure(49u64.gcd(&576) == 1 && 441u64.gcd(&128) == 1, || {
        "gcd".into()
    })?;
    Ok("441, 576, 128 (P1 x P1), 49 (S4 wr S2); gcds 1".into())
}

fn q11_pairs() -> Result<[u64; 4], String> {
    let t = Psl::new(11).map_err(|e| e.to_string())?;
    let g = &t.group;
    let a5 = find_named_subgroup(&t, AtlasLabel::A5)
        .map_err(|e| e.to_string())?
        .subgroup;
    let (uni, _) = build_h(g, element_of_order(g, 11)).map_err(|e| e.to_string())?;
    let (inv, cent) = build_h(g, element_of_order(g, 2)).map_err(|e| e.to_string())?;
    let g_a5 = wreath_alpha(&t, &BaseSubgroup::wreath(a5.clone()));
    let f_p1 = wreath_alpha(&t, &BaseSubgroup::product(t.p1.clone()));
    let full = |x: &AlphaFn| stabilizer_full(g, x, false).expect("scan").index();
    let out = [full(&g_a5), full(&uni), full(&f_p1), full(&inv)];
    // Cross-check against double cosets.
    let dc = stabilizer_by_double_cosets(g, &inv, &cent, false).map_err(|e| e.to_string())?;
    ensure(dc.index() == out[3], || {
        "double-coset index disagrees".into()
    })?;
    Ok(out)
}

fn criterion_4() -> Check {
    let start = Instant::now();
    let single = single_threaded(q11_pairs)?;
    let single_time = start.elapsed();
    let start = Instant::now();
    let multi = with_workers(8, q11_pairs)?;
    let multi_time = start.elapsed();
    ensure(single == [121, 3600, 288, 3025], || {
        format!("single-core {single:?}")
    })?;
    ensure(multi == single, || format!("8 workers {multi:?}"))?;
    ensure(121u64.gcd(&3600) == 1 && 288u64.gcd(&3025) == 1, || {
        "gcd".into()
    })?;
    ensure(single_time < Duration::from_secs(300), || {
        format!("single-core {single_time:?}")
    })?;
    ensure(multi_time < Duration::from_secs(60), || {
        format!("8 workers {multi_time:?}")
    })?;
    Ok(format!(
        "(121, 3600), (288, 3025); 1 worker {:.1}s, 8 workers {:.1}s",
        single_time.as_secs_f64(),
        multi_time.as_secs_f64()
    ))
}

fn expect_found(t: &Psl, label: AtlasLabel, target: IsoFingerprint) -> Result<(), String> {
    let k = find_named_subgroup(t, label)
        .map_err(|e| e.to_string())?
        .subgroup;
    match search_intersection(&t.group, &k, &target, "acceptance") {
        SearchOutcome::Found(w) => {
            let replayed = replay_intersection(&t.group, &k, &w.elements);
            ensure(replayed == target, || {
                format!("{label} at q={} replays as {}", t.q(), replayed.name())
            })
        }
        SearchOutcome::NotFound { .. } => Err(format!(
            "no {} witness for {label} at q={}",
            target.name(),
            t.q()
        )),
    }
}

fn criterion_5() -> Check {
    let mut timings = Vec::new();
    let mut timed = |name: &str, f: &dyn Fn() -> Result<(), String>| -> Result<(), String> {
        let start = Instant::now();
        f()?;
        let e = start.elapsed();
        ensure(e < Duration::from_secs(120), || {
            format!("{name} took {e:?}")
        })?;
        timings.push(e);
        Ok(())
    };
    for q in [7u32, 23] {
        timed("S4 C2xC2", &|| {
            let t = Psl::new(q).map_err(|e| e.to_string())?;
            expect_found(&t, AtlasLabel::S4, IsoFingerprint::klein_four())
        })?;
    }
    for q in [4u32, 8] {
        timed("dihedral C2", &|| {
            let t = Psl::new(q).map_err(|e| e.to_string())?;
            expect_found(&t, AtlasLabel::DihedralPlus, IsoFingerprint::cyclic(2))
        })?;
    }
    timed("A5 q=11", &|| {
        let t = Psl::new(11).map_err(|e| e.to_string())?;
        let k = find_named_subgroup(&t, AtlasLabel::A5)
            .map_err(|e| e.to_string())?
            .subgroup;
        match search_intersection(&t.group, &k, &IsoFingerprint::cyclic(2), "acceptance") {
            SearchOutcome::NotFound { scanned } => {
                // Oracle: every coset representative, scanned directly.
                let g = &t.group;
                let any = algo::right_coset_reps(g, &k).into_iter().any(|s| {
                    let c = algo::intersect(g, &k, &k.conjugate(g, s)).expect("same parent");
                    c.order() == 2
                });
                ensure(scanned == 11 && !any, || {
                    format!("scanned {scanned}, oracle found {any}")
                })
            }
            SearchOutcome::Found(_) => Err("A5 C2 witness at q=11".into()),
        }
    })?;
    timed("A5 q=19", &|| {
        let t = Psl::new(19).map_err(|e| e.to_string())?;
        expect_found(&t, AtlasLabel::A5, IsoFingerprint::cyclic(2))
    })?;
    timed("triple q=11", &|| {
        let t = Psl::new(11).map_err(|e| e.to_string())?;
        let g = &t.group;
        let k = find_named_subgroup(&t, AtlasLabel::A5)
            .map_err(|e| e.to_string())?
            .subgroup;
        let SearchOutcome::Found(w) =
            search_triple_intersection(g, &k, &IsoFingerprint::cyclic(2), "acceptance")
        else {
            return Err("no triple witness".into());
        };
        let (r, s) = (w.elements[0], w.elements[1]);
        ensure(triple_side_conditions(g, &k, r, s), || {
            "side conditions".into()
        })?;
        ensure(
            !k.contains(r) && !k.contains(s) && !k.contains(g.mul(s, g.inv(r))),
            || "oracle".into(),
        )?;
        ensure(
            replay_intersection(g, &k, &[r, s]) == IsoFingerprint::cyclic(2),
            || "replay".into(),
        )?;
        let d = BaseSubgroup::wreath(k.clone());
        let pw = pair_shape_witness(g, &d, 6, r, s).ok_or("no m=6 central element")?;
        ensure(pw.intersection_order == 24, || {
            format!("|D^t ∩ L| = {}", pw.intersection_order)
        })
    })?;
    let total: Duration = timings.iter().sum();
    Ok(format!(
        "7 searches, max {:.2}s, total {:.2}s",
        timings.iter().max().unwrap().as_secs_f64(),
        total.as_secs_f64()
    ))
}

/// Conjugates of `k` containing `r`, by listing all conjugates.
fn overgroups_oracle(g: &GroupTable, k: &Subgroup, r: &Subgroup) -> usize {
    let mut seen: BTreeSet<Vec<Elem>> = BTreeSet::new();
    for x in g.elements() {
        let c = k.conjugate(g, x);
        if r.members().iter().all(|&e| c.contains(e)) {
            seen.insert(c.members().to_vec());
        }
    }
    seen.len()
}

fn criterion_6() -> Check {
    let cases: [(u32, AtlasLabel, Vec<IsoFingerprint>); 3] = [
        (
            11,
            AtlasLabel::A5,
            vec![
                IsoFingerprint::cyclic(2),
                IsoFingerprint::dihedral(6),
                IsoFingerprint::dihedral(10),
                IsoFingerprint::klein_four(),
            ],
        ),
        (
            7,
            AtlasLabel::S4,
            vec![
                IsoFingerprint::cyclic(2),
                IsoFingerprint::klein_four(),
                IsoFingerprint::dihedral(6),
                IsoFingerprint::dihedral(8),
            ],
        ),
        (19, AtlasLabel::A5, vec![IsoFingerprint::cyclic(2)]),
    ];
    let mut n = 0;
    for (q, label, rs) in cases {
        let t = Psl::new(q).map_err(|e| e.to_string())?;
        let g = &t.group;
        let k = find_named_subgroup(&t, label)
            .map_err(|e| e.to_string())?
            .subgroup;
        for fp in rs {
            let r = algo::find_subgroup(g, &k, &fp, |_| true)
                .ok_or_else(|| format!("no {} in {label}", fp.name()))?;
            let c = algo::count_conjugate_overgroups(g, &k, &r).map_err(|e| e.to_string())?;
            ensure(c.y * c.order_k == c.x * c.normalizer_r, || {
                format!("identity fails at q={q} R={}", fp.name())
            })?;
            let y = overgroups_oracle(g, &k, &r);
            ensure(y == c.y, || format!("oracle y={y}, computed {}", c.y))?;
            if q == 19 {
                ensure(c.y == 5, || format!("y = {} at q=19", c.y))?;
            }
            n += 1;
        }
    }
    Ok(format!("{n} (K, R) pairs; y = 5 at q=19"))
}

/// Classes of dihedral subgroups of order `2d`, from pairs of involutions.
fn dihedral_classes_oracle(g: &GroupTable, d: usize) -> usize {
    let invs: Vec<Elem> = g.elements().filter(|&x| g.is_involution(x)).collect();
    let mut subs: BTreeSet<Vec<Elem>> = BTreeSet::new();
    for (i, &a) in invs.iter().enumerate() {
        for &b in &invs[i + 1..] {
            if g.elem_order(g.mul(a, b)) as usize == d {
                subs.insert(Subgroup::generate(g, &[a, b]).members().to_vec());
            }
        }
    }
    let mut seen: BTreeSet<Vec<Elem>> = BTreeSet::new();
    let mut classes = 0;
    for s in &subs {
        if seen.insert(s.clone()) {
            classes += 1;
            for x in g.elements() {
                let mut c: Vec<Elem> = s.iter().map(|&y| g.conj(y, x)).collect();
                c.sort_unstable();
                seen.insert(c);
            }
        }
    }
    classes
}

const CLAIMED_DIHEDRAL: [(u32, usize, usize); 4] = [(11, 3, 2), (11, 5, 2), (13, 6, 1), (13, 7, 2)];

fn criterion_7() -> Check {
    let mut wrong = Vec::new();
    for (q, d, claimed) in CLAIMED_DIHEDRAL {
        let t = Psl::new(q).map_err(|e| e.to_string())?;
        let got = algo::dihedral_class_census(&t.group, q, d).map_err(|e| e.to_string())?;
        let oracle = dihedral_classes_oracle(&t.group, d);
        if got != oracle {
            return Err(format!(
                "census {got} disagrees with brute force {oracle} at q={q} d={d}"
            ));
        }
        if got != claimed {
            wrong.push(format!("(q={q}, d={d}) expected {claimed}, computed {got}"));
        }
    }
    if wrong.is_empty() {
        Ok("2, 2, 1, 2".into())
    } else {
        Err(wrong.join("; "))
    }
}

fn criterion_8() -> Check {
    for q in [4u32, 5, 7, 8, 9, 11, 13] {
        let t = Psl::new(q).map_err(|e| e.to_string())?;
        ensure(coset_involution_check(&t.group, &t.p1), || {
            format!("fails at q={q}")
        })?;
    }
    // Oracle at q=7: every element outside P1 over every coset.
    let t = Psl::new(7).map_err(|e| e.to_string())?;
    let g = &t.group;
    let ok = g
        .elements()
        .filter(|&s| !t.p1.contains(s))
        .all(|s| t.p1.members().iter().any(|&p| g.is_involution(g.mul(p, s))));
    ensure(ok, || "oracle fails at q=7".into())?;
    Ok("q = 4, 5, 7, 8, 9, 11, 13".into())
}

fn criterion_9() -> Check {
    for q in [7u32, 8, 11] {
        let t = Psl::new(q).map_err(|e| e.to_string())?;
        let r = obstruction_checks(&t).map_err(|e| e.to_string())?;
        ensure(r.passed(), || format!("obstruction fails at q={q}: {r:?}"))?;
    }
    let n = 10_000;
    for q in [4u32, 5] {
        let t = Psl::new(q).map_err(|e| e.to_string())?;
        let g = &t.group;
        ensure(action_axiom_failures(g, n, 1) == 0, || {
            format!("action axiom at q={q}")
        })?;
        ensure(round_trip_failures(g, n, 2) == 0, || {
            format!("round trip at q={q}")
        })?;
        let (solutions, fixed) = product_constraint(g, n, 3);
        ensure(solutions == 1 && fixed == 0, || {
            format!("T x T fixes {solutions} functions at q={q}")
        })?;
    }
    Ok(format!(
        "obstructions at q = 7, 8, 11; {n} samples per property at q = 4, 5"
    ))
}

fn criterion_10() -> Check {
    let t = Psl::new(4).map_err(|e| e.to_string())?;
    let c = maximality_census(&t, 200, 7).map_err(|e| e.to_string())?;
    ensure(c.wreath_order == 7200 && c.product_order == 3600, || {
        "model orders".into()
    })?;
    ensure(c.automorphisms == 120, || {
        format!("|Aut T| = {}", c.automorphisms)
    })?;
    for e in c.wreath.iter().chain(&c.product) {
        ensure(e.maximal, || {
            format!("{} (order {}) not maximal", e.kind, e.order)
        })?;
    }
    let count = |v: &[twdeg::verify::census::CensusEntry], p: &str| {
        v.iter().filter(|e| e.kind.starts_with(p)).count()
    };
    ensure(
        count(&c.wreath, "type1") == 1
            && count(&c.wreath, "type2") == 120
            && count(&c.wreath, "type3") == 3,
        || "wreath types".into(),
    )?;
    ensure(
        count(&c.product, "type1") == 6 && count(&c.product, "type2") == 120,
        || "product types".into(),
    )?;
    for s in [&c.wreath_samples, &c.product_samples] {
        ensure(s.sampled == 200 && s.covered == s.sampled, || {
            format!("samples {s:?}")
        })?;
    }
    Ok(
        "type 1/2/3 maximal in T wr S2 (7200), types maximal in T x T (3600), 400 samples covered"
            .into(),
    )
}

/// Certificate values at `q = 29` and at `m = 6`, asserted with gcds.
fn certificates() -> Check {
    let t = Psl::new(29).map_err(|e| e.to_string())?;
    let g = &t.group;
    let a5 = find_named_subgroup(&t, AtlasLabel::A5)
        .map_err(|e| e.to_string())?
        .subgroup;
    let r = BigUint::from(30u32).pow(2);
    let d = BigUint::from(g.order() / a5.order()).pow(2);
    ensure(d == BigUint::from(203u32 * 203), || {
        format!("|T:A5|^2 = {d}")
    })?;
    ensure(r.gcd(&d) == BigUint::from(1u32), || {
        "gcd(30^2, 203^2)".into()
    })?;
    let wa =
        search_central_t(g, &BaseSubgroup::wreath(a5.clone()), 2).ok_or("no A5 witness at q=29")?;
    let cert = SubdegreeCertificate::constructed(
        29,
        2,
        CertKind::CentralWitness,
        d,
        &BaseSubgroup::wreath(a5),
        &wa,
    );
    ensure(cert.replay(&t).map_err(|e| e.to_string())?, || {
        "203^2 certificate does not replay".into()
    })?;

    let t = Psl::new(11).map_err(|e| e.to_string())?;
    let g = &t.group;
    let a5 = find_named_subgroup(&t, AtlasLabel::A5)
        .map_err(|e| e.to_string())?
        .subgroup;
    let base = BaseSubgroup::wreath(a5);
    let w = search_central_t(g, &base, 6).ok_or("no m=6 witness at q=11")?;
    let v = BigUint::from(11u32).pow(6);
    let c6 =
        SubdegreeCertificate::constructed(11, 6, CertKind::CentralWitness, v.clone(), &base, &w);
    ensure(c6.replay(&t).map_err(|e| e.to_string())?, || {
        "11^6 certificate does not replay".into()
    })?;
    ensure(
        v.gcd(&BigUint::from(60u32).pow(6)) == BigUint::from(1u32),
        || "gcd(11^6, 60^6)".into(),
    )?;
    Ok("203^2 and 30^2 at q=29, 11^6 with 60^6 at q=11".into())
}

fn report(n: &str, bound: Duration, f: fn() -> Check) -> (String, bool, String) {
    let start = Instant::now();
    let res = f();
    let elapsed = start.elapsed();
    let (ok, detail) = match res {
        Ok(d) if elapsed <= bound => (true, d),
        Ok(d) => (false, format!("{d}; took {elapsed:?}, bound {bound:?}")),
        Err(e) => (false, e),
    };
    let line = format!(
        "criterion {n:<12} {}  {:>8.2}s  {detail}",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    // Written past the test harness capture so it always shows.
    let _ = writeln!(std::io::stderr().lock(), "{line}");
    (n.to_string(), ok, detail)
}

#[test]
fn acceptance_criteria() {
    let s = Duration::from_secs;
    let _ = writeln!(std::io::stderr().lock());
    let results = [
        report("1", s(1), criterion_1),
        report("2", s(1), criterion_2),
        report("3", s(30), criterion_3),
        report("4", s(360), criterion_4),
        report("5", s(14 * 60), criterion_5),
        report("6", s(60), criterion_6),
        report("7", s(60), criterion_7),
        report("8", s(10), criterion_8),
        report("9", s(60), criterion_9),
        report("10", s(120), criterion_10),
        report("certificates", s(120), certificates),
    ];
    let failed: Vec<&(String, bool, String)> = results.iter().filter(|r| !r.1).collect();
    // Criterion 7 fails for (11,5) and (13,7): with d = (q ± 1)/2 the
    // dihedral group is the full torus normalizer and forms one class.
    let expected_failure = "(q=11, d=5) expected 2, computed 1; (q=13, d=7) expected 2, computed 1";
    for (n, _, detail) in &failed {
        assert!(
            n == "7" && detail == expected_failure,
            "criterion {n} failed: {detail}"
        );
    }
    assert_eq!(
        failed.len(),
        1,
        "criterion 7 is expected to fail as analyzed"
    );
}
