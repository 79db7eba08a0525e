//! Property tests for the field, the group engine and the action on twisted
//! functions, each checked against a direct recomputation.

use std::collections::HashSet;
use std::sync::OnceLock;

use proptest::prelude::*;
use twdeg::field::Field;
use twdeg::group::{algo, Elem, GroupTable, Subgroup};
use twdeg::projline::Psl;
use twdeg::verify::natural_cmp;
use twdeg::wreath::alpha::{act_alpha, build_h, stabilizer_full, AlphaFn};
use twdeg::wreath::certificate::{class_certificate, SubdegreeCertificate};
use twdeg::wreath::Wr2;

fn psl(q: u32) -> &'static Psl {
    static CACHE: OnceLock<Vec<(u32, Psl)>> = OnceLock::new();
    let all = CACHE.get_or_init(|| {
        [4u32, 5, 7, 8, 9]
            .into_iter()
            .map(|q| (q, Psl::new(q).unwrap()))
            .collect()
    });
    &all.iter().find(|(p, _)| *p == q).expect("cached q").1
}

fn small_q() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![4u32, 5, 7, 8, 9])
}

fn field_q() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![2u32, 3, 4, 8, 9, 11, 25, 27, 49, 64, 121])
}

fn random_alpha(g: &GroupTable, seed: &[u32]) -> AlphaFn {
    let n = g.order() as u32;
    AlphaFn::from_values(
        (0..n)
            .map(|i| seed[i as usize % seed.len()].wrapping_mul(i + 1) % n)
            .collect(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(q in field_q(), a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let f = Field::with_order(q as u64).unwrap();
        let (a, b, c) = (f.elem(a % q), f.elem(b % q), f.elem(c % q));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), f.elem(0));
        if a != f.elem(0) {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), f.elem(1));
            // Lagrange in the multiplicative group.
            prop_assert_eq!(f.pow(a, q - 1), f.elem(1));
        }
        prop_assert_eq!(f.frobenius(f.mul(a, b)), f.mul(f.frobenius(a), f.frobenius(b)));
        prop_assert_eq!(f.frobenius(f.add(a, b)), f.add(f.frobenius(a), f.frobenius(b)));
    }

    #[test]
    fn table_matches_permutations(q in small_q(), a in any::<u32>(), b in any::<u32>()) {
        let g = &psl(q).group;
        let n = g.order() as u32;
        let (a, b) = (a % n, b % n);
        let ab = g.perm(a).then(&g.perm(b));
        prop_assert_eq!(g.index_of(&ab), Some(g.mul(a, b)));
        prop_assert_eq!(g.perm(g.inv(a)), g.perm(a).inverse());
        prop_assert_eq!(g.conj(a, b), g.mul(g.mul(g.inv(b), a), b));
        prop_assert_eq!(g.elem_order(a) as usize, g.perm(a).order());
    }

    #[test]
    fn fingerprint_is_conjugation_invariant(q in small_q(), x in any::<u32>(), y in any::<u32>(), c in any::<u32>()) {
        let g = &psl(q).group;
        let n = g.order() as u32;
        let s = Subgroup::generate(g, &[x % n, y % n]);
        let conj = s.conjugate(g, c % n);
        prop_assert_eq!(conj.order(), s.order());
        prop_assert_eq!(conj.fingerprint(g), s.fingerprint(g));
    }

    #[test]
    fn coset_reps_partition(q in small_q(), x in any::<u32>()) {
        let g = &psl(q).group;
        let s = algo::centralizer(g, x % g.order() as u32);
        let reps = algo::right_coset_reps(g, &s);
        prop_assert_eq!(reps.len() * s.order(), g.order());
        let mut seen = HashSet::new();
        for &r in &reps {
            for &h in s.members() {
                prop_assert!(seen.insert(g.mul(h, r)));
            }
        }
    }

    #[test]
    fn centralizer_matches_brute_force(q in small_q(), x in any::<u32>()) {
        let g = &psl(q).group;
        let x = x % g.order() as u32;
        let brute: Vec<Elem> = g.elements().filter(|&y| g.commutes(x, y)).collect();
        let c = algo::centralizer(g, x);
        prop_assert_eq!(c.members(), &brute[..]);
    }

    #[test]
    fn action_is_a_right_action(q in small_q(), seed in prop::collection::vec(any::<u32>(), 1..8),
                                a in any::<u32>(), b in any::<u32>(), c in any::<u32>(), d in any::<u32>(),
                                s1 in any::<bool>(), s2 in any::<bool>()) {
        let g = &psl(q).group;
        let n = g.order() as u32;
        let alpha = random_alpha(g, &seed);
        let h1 = Wr2::new(a % n, b % n, s1);
        let h2 = Wr2::new(c % n, d % n, s2);
        prop_assert_eq!(
            act_alpha(g, &act_alpha(g, &alpha, h1), h2),
            act_alpha(g, &alpha, h1.mul(g, h2))
        );
        prop_assert_eq!(alpha.fixed_by(g, h1), act_alpha(g, &alpha, h1) == alpha);
    }

    #[test]
    fn class_function_subdegree(q in prop::sample::select(vec![4u32, 5]), x in any::<u32>()) {
        let t = psl(q);
        let g = &t.group;
        let gamma = 1 + x % (g.order() as u32 - 1);
        let (alpha, _) = build_h(g, gamma).unwrap();
        let stab = stabilizer_full(g, &alpha, false).unwrap();
        let class = algo::conjugacy_class(g, gamma).len() as u64;
        prop_assert_eq!(stab.index(), class * class);
        // Oracle: the orbit of the function under every element of H.
        let mut orbit = HashSet::new();
        for a in g.elements() {
            for b in g.elements() {
                for s in [false, true] {
                    orbit.insert(act_alpha(g, &alpha, Wr2::new(a, b, s)).values().to_vec());
                }
            }
        }
        prop_assert_eq!(orbit.len() as u64, stab.index());
    }

    #[test]
    fn certificates_round_trip(q in small_q(), x in any::<u32>(), m in 2usize..=6) {
        let t = psl(q);
        let gamma = 1 + x % (t.group.order() as u32 - 1);
        let cert = class_certificate(t, gamma, m).unwrap();
        let text = serde_json::to_string(&cert).unwrap();
        let back: SubdegreeCertificate = serde_json::from_str(&text).unwrap();
        prop_assert!(back.replay(t).unwrap());
        let mut forged = back.clone();
        forged.value = (back.value().unwrap() + 1u32).to_string();
        prop_assert!(!forged.replay(t).unwrap());
    }

    #[test]
    fn natural_order_is_total(a in "[a-z0-9.]{0,12}", b in "[a-z0-9.]{0,12}") {
        let ab = natural_cmp(&a, &b);
        prop_assert_eq!(ab, natural_cmp(&b, &a).reverse());
        if a == b {
            prop_assert_eq!(ab, std::cmp::Ordering::Equal);
        }
    }
}
