//! Acceptance suite. One line per criterion; exits non-zero if any fails.
//! Run with `cargo test -p zerocycle --test acceptance`.

mod common;

use std::time::{Duration, Instant};

use common::*;
use rand::Rng;
use zerocycle::constructive::{
    build_extremal_digraph, build_extremal_undirected, lemma_one_solve, path_tree, theorem_main_solve, LemmaResult,
};
use zerocycle::explorer::{run_experiment, ExperimentConfig, Outcome, Strategy, Task};
use zerocycle::group::{classify_near_ap, NearApClass};
use zerocycle::oracle::find_zero_cycle;
use zerocycle::undirected::theorem_undirected_solve;
use zerocycle::witness::{check_family, check_zero_cycle};
use zerocycle::{GroupSpec, ResidueSet, SearchBudget, WeightedAdjacency, WeightedDigraph, WeightedGraph};

const LIMIT_LEMMA_INC: Duration = Duration::from_secs(120);
const LIMIT_THEOREM_MAIN: Duration = Duration::from_secs(600);
const LIMIT_F_BOUND: Duration = Duration::from_secs(1800);
const LIMIT_Q1: Duration = Duration::from_secs(600);
const SEEDS: u64 = 1000;
const LEMMA_SEEDS: u64 = 500;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn zero(w: &[u32]) -> bool {
    w.iter().all(|&x| x == 0)
}

/// Shift set by definition on residue lists.
fn brute_shifts(a: &[u32], k: u32) -> Vec<u32> {
    (0..k)
        .filter(|&x| {
            a.iter()
                .any(|&b| a.iter().filter(|&&y| y != b).all(|&y| a.contains(&((y + x) % k))))
        })
        .collect()
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let mut near = 0u64;
    for k in 2u32..=12 {
        for mask in 0u64..1 << k {
            let a: Vec<u32> = (0..k).filter(|&i| mask >> i & 1 == 1).collect();
            let shifts = brute_shifts(&a, k);
            let is_near = a.len() >= 2 && a.len() + 2 <= k as usize && shifts.iter().any(|&x| x != 0);
            let got = classify_near_ap(&ResidueSet::from_mask(k, mask)).map_err(|e| format!("k={k} {a:?}: {e}"))?;
            let ok = match (is_near, &got.class) {
                (false, NearApClass::NotNearAp) => true,
                (true, NearApClass::DivisorCase { d }) => {
                    *d > 1 && *d < k && k % d == 0 && shifts.iter().all(|x| x % d == 0)
                }
                (true, NearApClass::UnitCase { a: u }) => {
                    gcd(*u, k) == 1 && shifts.iter().all(|&x| x == 0 || x == *u || x == k - u)
                }
                _ => false,
            };
            ensure(ok, || format!("k={k} A={a:?} classified {:?}", got.class))?;
            ensure(got.shift_set.members() == shifts.as_slice(), || {
                format!("k={k} A={a:?} shift set mismatch")
            })?;
            near += u64::from(is_near);
        }
    }
    let rep = run_experiment(
        &ExperimentConfig {
            k_max: Some(12),
            ..ExperimentConfig::new(Task::LemmaInc)
        },
        0,
    )
    .map_err(|e| e.to_string())?;
    ensure(rep.outcome == Outcome::ExhaustedNoWitness, || {
        "explorer reported a violation".into()
    })?;
    let t = start.elapsed();
    ensure(t < LIMIT_LEMMA_INC, || format!("took {t:?}"))?;
    Ok(format!(
        "{near} near-APs over k<=12, 0 violations, {:.1}s",
        t.as_secs_f64()
    ))
}

fn criterion_2() -> Check {
    let start = Instant::now();
    let mut fallbacks = 0;
    for k in 2u32..=6 {
        let z = GroupSpec::cyclic(k).unwrap();
        let n = k as usize + 2 * omega(k as u64);
        for seed in 0..SEEDS {
            let g = random_complete_digraph(&mut rng(seed * 31 + k as u64), &z, n);
            let c = find_zero_cycle(&g, 2, SearchBudget::unlimited())
                .map_err(|e| e.to_string())?
                .found()
                .ok_or_else(|| format!("oracle: no zero cycle, k={k} seed={seed}"))?;
            ensure(zero(&residue_weight(&g, &c.vertices, true).unwrap()), || {
                format!("oracle cycle not zero, k={k} seed={seed}")
            })?;
            let out = theorem_main_solve(&g).map_err(|e| format!("k={k} seed={seed}: {e}"))?;
            ensure(
                check_zero_cycle(&g, &out.cycle, 2, None).is_ok()
                    && zero(&residue_weight(&g, &out.cycle.vertices, true).unwrap()),
                || format!("solver cycle invalid, k={k} seed={seed}"),
            )?;
            fallbacks += out.fallbacks();
        }
    }
    let t = start.elapsed();
    ensure(t < LIMIT_THEOREM_MAIN, || format!("took {t:?}"))?;
    Ok(format!(
        "5x{SEEDS} instances, 100% validated, {fallbacks} oracle fallbacks, {:.1}s",
        t.as_secs_f64()
    ))
}

fn complete_undirected(z: &GroupSpec, n: usize, mut digit: impl FnMut() -> i64) -> WeightedGraph {
    let mut g = WeightedGraph::empty(z.clone(), n);
    for v in 0..n {
        g.set_vertex_weight(v, z.elem(digit())).unwrap();
    }
    for a in 0..n {
        for b in a + 1..n {
            g.set_edge(a, b, z.elem(digit())).unwrap();
        }
    }
    g
}

fn exhaustive_complete(k: u32, n: usize) -> impl Iterator<Item = WeightedGraph> {
    let z = GroupSpec::cyclic(k).unwrap();
    let slots = (n + n * (n - 1) / 2) as u32;
    (0..(k as u64).pow(slots)).map(move |mut idx| {
        complete_undirected(&z, n, || {
            let d = idx % k as u64;
            idx /= k as u64;
            d as i64
        })
    })
}

fn criterion_3() -> Check {
    let mut count = 0;
    let all5: Vec<usize> = (0..5).collect();
    for g in exhaustive_complete(2, 5) {
        ensure(has_zero_cycle(&g, &all5, 3), || format!("k=2 counterexample {g:?}"))?;
        count += 1;
    }
    let z = GroupSpec::cyclic(3).unwrap();
    let all6: Vec<usize> = (0..6).collect();
    for seed in 0..SEEDS {
        let mut r = rng(seed);
        let g = complete_undirected(&z, 6, || r.gen_range(0..3));
        ensure(has_zero_cycle(&g, &all6, 3), || {
            format!("k=3 seed={seed} has no zero cycle")
        })?;
        count += 1;
    }
    Ok(format!(
        "k=2 all {} weightings of K_5, k=3 {SEEDS} seeds of K_6; 0 failures",
        count - SEEDS
    ))
}

fn solve_undirected(g: &WeightedGraph, what: &str) -> Result<usize, String> {
    let out = theorem_undirected_solve(g).map_err(|e| format!("{what}: {e}"))?;
    ensure(
        check_zero_cycle(g, &out.cycle, 3, None).is_ok()
            && zero(&residue_weight(g, &out.cycle.vertices, true).unwrap()),
        || format!("{what}: invalid cycle"),
    )?;
    Ok(out.fallbacks())
}

fn min_degree_graph(r: &mut rand_chacha::ChaCha8Rng, z: &GroupSpec, n: usize, d: usize) -> WeightedGraph {
    let mut keep: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let mut deg = vec![n - 1; n];
    for _ in 0..n * n {
        let i = r.gen_range(0..keep.len());
        let (a, b) = keep[i];
        if deg[a] > d && deg[b] > d && r.gen_bool(0.5) {
            deg[a] -= 1;
            deg[b] -= 1;
            keep.swap_remove(i);
        }
    }
    let mut g = WeightedGraph::empty(z.clone(), n);
    for v in 0..n {
        g.set_vertex_weight(v, z.elem(r.gen_range(0..z.order() as i64)))
            .unwrap();
    }
    for (a, b) in keep {
        g.set_edge(a, b, z.elem(r.gen_range(0..z.order() as i64))).unwrap();
    }
    g
}

fn criterion_4() -> Check {
    let mut fallbacks = 0;
    let mut k4 = 0;
    for g in exhaustive_complete(2, 4) {
        fallbacks += solve_undirected(&g, "K_4")?;
        k4 += 1;
    }
    let z = GroupSpec::cyclic(3).unwrap();
    for seed in 0..SEEDS {
        let mut r = rng(seed);
        let g = complete_undirected(&z, 6, || r.gen_range(0..3));
        fallbacks += solve_undirected(&g, &format!("K_6 seed={seed}"))?;
        let mut r = rng((seed + 1) << 32);
        let n = r.gen_range(6..=8);
        let g = min_degree_graph(&mut r, &z, n, 5);
        ensure(g.min_degree() >= 5, || "generator broke min degree".into())?;
        fallbacks += solve_undirected(&g, &format!("min-degree-5 seed={seed}"))?;
    }
    Ok(format!(
        "K_4 all {k4} weightings, k=3 {SEEDS} K_6 + {SEEDS} min-degree-5 graphs; {fallbacks} oracle fallbacks"
    ))
}

/// Every labeled tree on `t` vertices, via Prüfer sequences.
fn labeled_trees(t: usize) -> Vec<Vec<(usize, usize)>> {
    if t == 2 {
        return vec![vec![(0, 1)]];
    }
    let mut out = Vec::new();
    for code in 0..t.pow(t as u32 - 2) {
        let mut seq: Vec<usize> = (0..t - 2).map(|i| code / t.pow(i as u32) % t).collect();
        let mut deg = vec![1; t];
        for &s in &seq {
            deg[s] += 1;
        }
        let mut edges = Vec::new();
        for s in seq.drain(..) {
            let leaf = (0..t).find(|&v| deg[v] == 1).unwrap();
            edges.push((leaf.min(s), leaf.max(s)));
            deg[leaf] -= 1;
            deg[s] -= 1;
        }
        let rest: Vec<usize> = (0..t).filter(|&v| deg[v] == 1).collect();
        edges.push((rest[0], rest[1]));
        out.push(edges);
    }
    out
}

fn criterion_5() -> Check {
    for k in 2u32..=9 {
        let g: WeightedDigraph = build_extremal_digraph(k).map_err(|e| e.to_string())?;
        let all: Vec<usize> = (0..g.order()).collect();
        ensure(!has_zero_cycle(&g, &all, 2), || {
            format!("extremal digraph k={k} has a zero cycle")
        })?;
    }
    let mut built = 0;
    for k in 2u32..=6 {
        for t in 2..=5 {
            for tree in labeled_trees(t) {
                let g = build_extremal_undirected(k, &tree).map_err(|e| e.to_string())?;
                ensure(g.min_degree() == k as usize, || {
                    format!("k={k} tree={tree:?}: min degree {}", g.min_degree())
                })?;
                let free = if g.order() <= 8 {
                    !has_zero_cycle(&g, &(0..g.order()).collect::<Vec<_>>(), 3)
                } else {
                    find_zero_cycle(&g, 3, SearchBudget::unlimited())
                        .unwrap()
                        .found()
                        .is_none()
                };
                ensure(free, || format!("k={k} tree={tree:?}: zero cycle"))?;
                built += 1;
            }
            let g = build_extremal_undirected(k, &path_tree(t)).map_err(|e| e.to_string())?;
            let n = g.order() as i64;
            let k = k as i64;
            ensure(g.edge_count() as i64 == k * n - k * (k + 1) / 2, || {
                format!("edge identity fails for k={k}, path on {t} vertices")
            })?;
        }
    }
    Ok(format!("digraphs k=2..9 zero-cycle free; {built} tree constructions (k<=6, 2<=t<=5) min degree k, zero-cycle free; edge identity holds"))
}

fn criterion_6() -> Check {
    let mut fallbacks = 0;
    let mut by_tag = [0u64; 2];
    for k in 2u32..=5 {
        let z = GroupSpec::cyclic(k).unwrap();
        for r in 1..k as usize {
            let n = r + 2 * omega(k as u64);
            let all: Vec<usize> = (0..n).collect();
            let inner: Vec<usize> = (2..n).collect();
            for seed in 0..LEMMA_SEEDS {
                let g = random_complete_digraph(&mut rng(seed ^ (k as u64) << 40 ^ (r as u64) << 48), &z, n);
                let out = lemma_one_solve(&g, 0, 1, r).map_err(|e| format!("k={k} r={r} seed={seed}: {e}"))?;
                fallbacks += out.fallbacks();
                let cycle = has_zero_cycle(&g, &inner, 2);
                let family = path_weights(&g, 1, 0, &all, 3).len() >= r;
                let ok = match &out.result {
                    LemmaResult::ZeroCycle(c) => {
                        by_tag[0] += 1;
                        cycle && check_zero_cycle(&g, c, 2, Some(&inner)).is_ok()
                    }
                    LemmaResult::Family(f) => {
                        by_tag[1] += 1;
                        family && (f.source, f.target) == (1, 0) && check_family(&g, f, r, 3, None).is_ok()
                    }
                };
                ensure(ok, || {
                    format!(
                        "k={k} r={r} seed={seed}: tag {} disagrees or fails validation",
                        out.result.tag()
                    )
                })?;
            }
        }
    }
    Ok(format!(
        "{} zero_cycle + {} family outcomes match brute force, 0 validation failures, {fallbacks} oracle fallbacks",
        by_tag[0], by_tag[1]
    ))
}

/// Does some `Z_k` weighting of the complete digraph on `n` vertices avoid
/// zero cycles? Plain enumeration without pruning.
fn brute_free_exists(k: u32, n: usize) -> bool {
    let z = GroupSpec::cyclic(k).unwrap();
    let slots = n * (n - 1);
    let all: Vec<usize> = (0..n).collect();
    (0..(k as u64).pow(slots as u32)).any(|mut idx| {
        let g = WeightedDigraph::complete_with(z.clone(), n, |_, _| {
            let d = idx % k as u64;
            idx /= k as u64;
            z.elem(d as i64)
        });
        !has_zero_cycle(&g, &all, 2)
    })
}

fn criterion_7() -> Check {
    let start = Instant::now();
    let mut notes = Vec::new();
    for (k, n, expect_witness) in [(2u32, 2usize, Some(true)), (3, 3, Some(true)), (3, 4, None)] {
        let rep = run_experiment(
            &ExperimentConfig {
                k: Some(k),
                n: Some(n),
                strategy: Some(Strategy::Exhaustive),
                ..ExperimentConfig::new(Task::FBound)
            },
            0,
        )
        .map_err(|e| e.to_string())?;
        ensure(
            rep.evidence == "exhaustive" && rep.counters.budget_exceeded == 0,
            || format!("(k={k},n={n}) not decided exhaustively"),
        )?;
        let found = rep.outcome == Outcome::WitnessFound;
        if let Some(want) = expect_witness {
            ensure(found == want, || format!("(k={k},n={n}) witness expected"))?;
        }
        ensure(found == brute_free_exists(k, n), || {
            format!("(k={k},n={n}) disagrees with plain enumeration")
        })?;
        notes.push(format!(
            "({k},{n}): {}",
            if found { "zero-cycle-free weighting" } else { "none" }
        ));
    }
    let t = start.elapsed();
    ensure(t < LIMIT_F_BOUND, || format!("took {t:?}"))?;
    Ok(format!("{}; {:.1}s", notes.join(", "), t.as_secs_f64()))
}

/// Plain check for n = 3: any `{0, 1, -1}` weighting lacking both a zero
/// cycle and a one-signed Hamiltonian path.
fn brute_q1(n: usize) -> bool {
    let m = 2 * n as u32 + 1;
    let z = GroupSpec::cyclic(m).unwrap();
    let values = [0i64, 1, -1];
    let all: Vec<usize> = (0..n).collect();
    (0..3u64.pow((n * (n - 1)) as u32)).any(|mut idx| {
        let g = WeightedDigraph::complete_with(z.clone(), n, |_, _| {
            let d = idx % 3;
            idx /= 3;
            z.elem(values[d as usize])
        });
        !has_zero_cycle(&g, &all, 2) && !has_mono_ham_path(&g, &all, &[1]) && !has_mono_ham_path(&g, &all, &[m - 1])
    })
}

fn criterion_8() -> Check {
    let start = Instant::now();
    let mut notes = Vec::new();
    for (n, space) in [(3usize, 729u64), (4, 531_441)] {
        let rep = run_experiment(
            &ExperimentConfig {
                n: Some(n),
                strategy: Some(Strategy::Exhaustive),
                ..ExperimentConfig::new(Task::Question1)
            },
            0,
        )
        .map_err(|e| e.to_string())?;
        ensure(rep.counters.instances_total == space, || {
            format!("n={n}: space {}", rep.counters.instances_total)
        })?;
        ensure(rep.outcome != Outcome::BudgetExhausted, || {
            format!("n={n} did not complete")
        })?;
        let found = rep.outcome == Outcome::WitnessFound;
        if n == 3 {
            ensure(found == brute_q1(3), || "n=3 disagrees with plain enumeration".into())?;
        }
        notes.push(format!(
            "n={n}: {}",
            if found {
                "counterexample (re-validated)"
            } else {
                "no counterexample"
            }
        ));
    }
    let t = start.elapsed();
    ensure(t < LIMIT_Q1, || format!("took {t:?}"))?;
    Ok(format!("{}; {:.1}s", notes.join(", "), t.as_secs_f64()))
}

fn criterion_9() -> Check {
    let configs = [
        ExperimentConfig {
            k: Some(5),
            strategy: Some(Strategy::Random),
            seed: Some(42),
            trials: Some(400),
            ..ExperimentConfig::new(Task::TheoremMain)
        },
        ExperimentConfig {
            k: Some(3),
            n: Some(4),
            strategy: Some(Strategy::LocalSearch),
            seed: Some(42),
            trials: Some(30),
            steps: Some(100),
            ..ExperimentConfig::new(Task::FBound)
        },
        ExperimentConfig {
            k: Some(3),
            seed: Some(42),
            trials: Some(300),
            ..ExperimentConfig::new(Task::Question2)
        },
        ExperimentConfig {
            k: Some(3),
            n: Some(3),
            strategy: Some(Strategy::Random),
            seed: Some(42),
            trials: Some(5000),
            ..ExperimentConfig::new(Task::FBound)
        },
    ];
    for c in &configs {
        let a = run_experiment(c, 1).map_err(|e| e.to_string())?.deterministic_json();
        let b = run_experiment(c, 0).map_err(|e| e.to_string())?.deterministic_json();
        let again = run_experiment(c, 1).map_err(|e| e.to_string())?.deterministic_json();
        ensure(a == b && a == again, || {
            format!("{:?} report differs between runs", c.task)
        })?;
    }
    Ok(format!(
        "{} seeded configs byte-identical across repeat and serial/parallel runs",
        configs.len()
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("near-AP classification exhaustive, k <= 12", criterion_1),
        ("directed theorem at threshold, k = 2..6", criterion_2),
        ("corollary at threshold, k = 2, 3", criterion_3),
        ("undirected theorem suite", criterion_4),
        ("extremal constructions", criterion_5),
        ("lemma solver vs brute force", criterion_6),
        ("exact small f(k) bounds", criterion_7),
        ("question 1 exhaustive n = 3, 4", criterion_8),
        ("determinism", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
