mod common;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use zerocycle::codec::{self, AnyGraph};
use zerocycle::constructive::{lemma_one_solve, theorem_main_solve, LemmaResult};
use zerocycle::graph::{derived_weighting, normalize_vertex_weights, quotient_weighting};
use zerocycle::group::{classify_near_ap, omega as group_omega, shift_set, NearApClass};
use zerocycle::witness::{check_family, check_zero_cycle};
use zerocycle::{GroupSpec, ResidueSet, WeightedAdjacency, WeightedDigraph};

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 128,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn shift_set_is_translation_invariant(k in 2u32..=16, mask in any::<u64>(), t in 0u32..16) {
        let mask = mask & ((1u64 << k) - 1);
        let a = ResidueSet::from_mask(k, mask);
        let moved = ResidueSet::new(k, a.members().iter().map(|&x| ((x + t) % k) as i64)).unwrap();
        prop_assert_eq!(shift_set(&a), shift_set(&moved));
        prop_assert_eq!(
            classify_near_ap(&a).unwrap().class == NearApClass::NotNearAp,
            classify_near_ap(&moved).unwrap().class == NearApClass::NotNearAp
        );
    }

    #[test]
    fn omega_matches_trial_division(m in 2i64..=100, n in 2i64..=100) {
        prop_assert_eq!(group_omega(m * n).unwrap() as usize, omega((m * n) as u64));
        prop_assert_eq!(group_omega(m * n).unwrap(), group_omega(m).unwrap() + group_omega(n).unwrap());
    }

    #[test]
    fn normalization_preserves_cycle_weights(seed in any::<u64>(), k in 2u32..=7, n in 2usize..=6) {
        let z = GroupSpec::cyclic(k).unwrap();
        let g = random_digraph(&mut rng(seed), &z, n, 0.8);
        let h = normalize_vertex_weights(&g);
        prop_assert!(h.has_zero_vertex_weights());
        let all: Vec<usize> = (0..n).collect();
        let before = all_cycles(&g, &all, 2);
        let after = all_cycles(&h, &all, 2);
        prop_assert_eq!(before, after);
    }

    #[test]
    fn derived_weighting_preserves_cycles_avoiding_the_sink(seed in any::<u64>(), k in 2u32..=7, n in 3usize..=7) {
        let z = GroupSpec::cyclic(k).unwrap();
        let mut r = rng(seed);
        let g = random_complete_digraph(&mut r, &z, n);
        let u = r.gen_range(0..n);
        let d = derived_weighting(&g, u, &[]).unwrap();
        let rest: Vec<usize> = (0..n).filter(|&x| x != u).collect();
        prop_assert_eq!(all_cycles(&g, &rest, 2), all_cycles(&d, &rest, 2));
    }

    #[test]
    fn quotient_zero_cycles_lift(seed in any::<u64>(), n in 3usize..=7) {
        // Z_6 with d = 2 or 3: derived weights forced into d Z_6 by choosing
        // w(xy) = d * s(xy) + t(y) - t(x) style inputs.
        for d in [2u32, 3] {
            let z = GroupSpec::cyclic(6).unwrap();
            let mut r = rng(seed ^ d as u64);
            let pot: Vec<i64> = (0..n).map(|_| r.gen_range(0..6)).collect();
            let g = WeightedDigraph::complete_with(z.clone(), n, |x, y| {
                z.elem(d as i64 * r.gen_range(0..6) + pot[x] - pot[y])
            });
            let u = r.gen_range(0..n);
            let q = quotient_weighting(&g, u, d, &[]).unwrap();
            prop_assert_eq!(q.group().order(), 6 / d);
            let rest: Vec<usize> = (0..n).filter(|&x| x != u).collect();
            for (cycle, w) in all_cycles(&q, &rest, 2) {
                if w.iter().all(|&x| x == 0) {
                    prop_assert!(residue_weight(&g, &cycle, true).unwrap().iter().all(|&x| x == 0));
                }
            }
        }
    }

    #[test]
    fn codec_round_trip(seed in any::<u64>(), n in 0usize..=6, directed in any::<bool>(), two in any::<bool>()) {
        let z = if two { GroupSpec::new(vec![2, 4]).unwrap() } else { GroupSpec::cyclic(5).unwrap() };
        let mut r = rng(seed);
        let g = if directed {
            AnyGraph::Directed(random_digraph(&mut r, &z, n, 0.5))
        } else {
            AnyGraph::Undirected(random_graph(&mut r, &z, n, 0.5))
        };
        let text = codec::serialize(&g);
        let back = codec::parse(&text).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(codec::serialize(&back), text);
    }

    #[test]
    fn lemma_outcome_is_valid_and_matches_brute_force(seed in any::<u64>(), k in 2u32..=5, r_frac in 0.0f64..1.0) {
        let z = GroupSpec::cyclic(k).unwrap();
        let r = 1 + (r_frac * (k - 1) as f64) as usize;
        let n = (r + 2 * omega(k as u64)).max(3);
        let mut g_rng = rng(seed);
        let g = random_complete_digraph(&mut g_rng, &z, n);
        let (u, v) = (0, 1);
        let out = lemma_one_solve(&g, u, v, r).unwrap();
        let all: Vec<usize> = (0..n).collect();
        let inner: Vec<usize> = (2..n).collect();
        let brute_cycle = has_zero_cycle(&g, &inner, 2);
        let brute_family = path_weights(&g, v, u, &all, 3).len() >= r;
        prop_assert!(brute_cycle || brute_family);
        match out.result {
            LemmaResult::ZeroCycle(c) => {
                prop_assert!(brute_cycle);
                prop_assert!(check_zero_cycle(&g, &c, 2, Some(&inner)).is_ok());
            }
            LemmaResult::Family(f) => {
                prop_assert!(brute_family);
                prop_assert_eq!((f.source, f.target), (v, u));
                prop_assert!(check_family(&g, &f, r, 3, None).is_ok());
            }
        }
    }

    #[test]
    fn theorem_solver_returns_valid_cycles(seed in any::<u64>(), k in 2u32..=8) {
        let z = GroupSpec::cyclic(k).unwrap();
        let n = k as usize + 2 * omega(k as u64);
        let g = random_complete_digraph(&mut rng(seed), &z, n);
        let out = theorem_main_solve(&g).unwrap();
        prop_assert!(check_zero_cycle(&g, &out.cycle, 2, None).is_ok());
        prop_assert!(residue_weight(&g, &out.cycle.vertices, true).unwrap().iter().all(|&x| x == 0));
        prop_assert_eq!(out.fallbacks(), 0);
    }
}
