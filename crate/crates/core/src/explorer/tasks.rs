use std::collections::BTreeMap;
use std::ops::ControlFlow;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::codec::{self, AnyGraph};
use crate::constructive::{build_extremal_undirected, path_tree, theorem_main_solve_with};
use crate::error::{domain, Error, Result};
use crate::graph::{CycleWitness, WeightedAdjacency, WeightedDigraph, WeightedGraph};
use crate::group::{classify_near_ap, gcd, omega, GroupSpec, NearApClass, ResidueSet};
use crate::oracle::{find_zero_cycle_with_stats, mono_hamiltonian_path, visit_cycles, Search, SearchBudget};
use crate::undirected::theorem_undirected_solve_with;
use crate::witness::check_zero_cycle;

use super::canon::{decode, ArcSpace};
use super::scan::{instance_rng, scan, ScanOutcome};
use super::{BoundReport, Counters, ExperimentConfig, Outcome, Strategy, Task, Timing};

pub fn run_experiment(cfg: &ExperimentConfig, jobs: usize) -> Result<BoundReport> {
    match cfg.task {
        Task::FBound => probe_f_lower(cfg, jobs),
        Task::TheoremMain | Task::TheoremCorollary | Task::TheoremUndirected => verify_theorem_sweep(cfg, jobs),
        Task::LemmaInc => verify_lemma_inc(cfg, jobs),
        Task::Question1 => question1_search(cfg, jobs),
        Task::Question2 => question2_probe(cfg, jobs),
    }
}

fn budget(cfg: &ExperimentConfig) -> SearchBudget {
    cfg.budget.map_or(SearchBudget::unlimited(), SearchBudget::nodes)
}

fn report(
    cfg: &ExperimentConfig,
    started: Instant,
    strategy: Strategy,
    s: ScanOutcome<Value>,
    findings: Value,
) -> BoundReport {
    let outcome = if s.first.is_some() {
        Outcome::WitnessFound
    } else if s.counters.budget_exceeded > 0 {
        Outcome::BudgetExhausted
    } else {
        Outcome::ExhaustedNoWitness
    };
    BoundReport {
        task: cfg.clone(),
        outcome,
        evidence: if strategy == Strategy::Exhaustive {
            "exhaustive"
        } else {
            "sampled"
        },
        counters: s.counters,
        findings,
        witness: s.first.map(|(_, w)| w),
        timing: Some(Timing {
            wall_seconds: started.elapsed().as_secs_f64(),
        }),
    }
}

/// Oracle zero-cycle search that feeds the counters.
fn zero_cycle<G: WeightedAdjacency>(
    g: &G,
    min_len: usize,
    b: SearchBudget,
    c: &mut Counters,
) -> Result<Search<CycleWitness>> {
    let verts: Vec<usize> = (0..g.order()).collect();
    let (res, stats) = find_zero_cycle_with_stats(g, &verts, min_len, usize::MAX, b)?;
    c.cycles_enumerated += stats.cycles;
    if res == Search::BudgetExceeded {
        c.budget_exceeded += 1;
    }
    Ok(res)
}

fn zero_cycle_count(g: &WeightedDigraph, b: SearchBudget, c: &mut Counters) -> Option<u64> {
    let zero = g.group().zero();
    let verts: Vec<usize> = (0..g.order()).collect();
    let mut hits = 0;
    let (res, stats) = visit_cycles(g, &verts, 2, usize::MAX, b, |_, w| {
        if w == zero {
            hits += 1;
        }
        ControlFlow::Continue(())
    });
    c.cycles_enumerated += stats.cycles;
    (res != Search::BudgetExceeded).then_some(hits)
}

fn digraph_from(z: &GroupSpec, space: &ArcSpace, digits: &[u32], value: impl Fn(u32) -> i64) -> WeightedDigraph {
    let mut g = WeightedDigraph::empty(z.clone(), space.n);
    for (&(a, b), &d) in space.pairs.iter().zip(digits) {
        g.set_edge(a, b, z.elem(value(d))).expect("in range");
    }
    g
}

fn directed_value(g: &WeightedDigraph) -> Value {
    codec::to_value(&AnyGraph::Directed(g.clone()))
}

fn undirected_value(g: &WeightedGraph) -> Value {
    codec::to_value(&AnyGraph::Undirected(g.clone()))
}

/// Complete graph `K_n` with vertex weights from the first `n` digits and
/// edge weights (pairs `a < b` in order) from the rest.
fn complete_undirected(z: &GroupSpec, n: usize, digits: &[u32]) -> WeightedGraph {
    let mut g = WeightedGraph::empty(z.clone(), n);
    for (v, &d) in digits[..n].iter().enumerate() {
        g.set_vertex_weight(v, z.elem(d as i64)).expect("in range");
    }
    let mut it = digits[n..].iter();
    for a in 0..n {
        for b in a + 1..n {
            g.set_edge(a, b, z.elem(*it.next().expect("enough digits") as i64))
                .expect("in range");
        }
    }
    g
}

/// Random graph on `n` vertices with minimum degree at least `min_deg`:
/// start from `K_n` and drop each edge (in random order) with probability
/// one half when both ends can spare it. Weights are uniform.
pub(crate) fn random_min_degree_graph(rng: &mut ChaCha8Rng, z: &GroupSpec, n: usize, min_deg: usize) -> WeightedGraph {
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    pairs.shuffle(rng);
    let mut deg = vec![n - 1; n];
    let mut keep = Vec::with_capacity(pairs.len());
    for (a, b) in pairs {
        if deg[a] > min_deg && deg[b] > min_deg && rng.gen_bool(0.5) {
            deg[a] -= 1;
            deg[b] -= 1;
        } else {
            keep.push((a, b));
        }
    }
    keep.sort_unstable();
    let order = z.order() as i64;
    let mut g = WeightedGraph::empty(z.clone(), n);
    for v in 0..n {
        g.set_vertex_weight(v, z.elem(rng.gen_range(0..order)))
            .expect("in range");
    }
    for (a, b) in keep {
        g.set_edge(a, b, z.elem(rng.gen_range(0..order))).expect("in range");
    }
    g
}

fn random_digits(rng: &mut ChaCha8Rng, base: u32, digits: &mut [u32]) {
    for d in digits.iter_mut() {
        *d = rng.gen_range(0..base);
    }
}

/// Zero-cycle-free weighting of the complete digraph on `n` vertices over
/// `Z_k`. An exhaustive run without witness certifies `f(k) < n`.
pub fn probe_f_lower(cfg: &ExperimentConfig, jobs: usize) -> Result<BoundReport> {
    let started = Instant::now();
    let k = cfg.need_k()?;
    let n = match cfg.n {
        Some(n) if n >= 2 => n,
        _ => return domain("f_bound needs n >= 2"),
    };
    let strategy = cfg.strategy_or(Strategy::Exhaustive);
    let seed = cfg.need_seed(strategy)?;
    let z = GroupSpec::cyclic(k)?;
    let space = ArcSpace::new(n, k, cfg.prune && strategy == Strategy::Exhaustive);
    let b = budget(cfg);
    let free = |g: &WeightedDigraph, i: u64| -> Result<Value> {
        match find_zero_cycle_with_stats(g, &(0..n).collect::<Vec<_>>(), 2, usize::MAX, SearchBudget::unlimited())?.0 {
            Search::Exhausted => Ok(json!({ "index": i, "graph": directed_value(g) })),
            _ => Err(Error::LemmaViolation(format!("witness {i} fails re-validation"))),
        }
    };
    let total;
    let s = match strategy {
        Strategy::Exhaustive => {
            total = cfg.check_cap(space.total(), "f_bound weightings")?;
            scan(total, jobs, |i, c| {
                let mut digits = vec![0; space.slots()];
                space.decode(i, &mut digits);
                if !space.is_canonical(&digits) {
                    c.pruned += 1;
                    return Ok(None);
                }
                c.instances_tested += 1;
                let g = digraph_from(&z, &space, &digits, |d| d as i64);
                match zero_cycle(&g, 2, b, c)? {
                    Search::Exhausted => free(&g, i).map(Some),
                    _ => Ok(None),
                }
            })?
        }
        Strategy::Random => {
            total = cfg.need_trials()?;
            scan(total, jobs, |i, c| {
                let mut rng = instance_rng(seed, i);
                let mut digits = vec![0; space.slots()];
                random_digits(&mut rng, k, &mut digits);
                c.instances_tested += 1;
                let g = digraph_from(&z, &space, &digits, |d| d as i64);
                match zero_cycle(&g, 2, b, c)? {
                    Search::Exhausted => free(&g, i).map(Some),
                    _ => Ok(None),
                }
            })?
        }
        Strategy::LocalSearch => {
            total = cfg.need_trials()?;
            let steps = cfg.steps.unwrap_or(2000);
            scan(total, jobs, |i, c| {
                let mut rng = instance_rng(seed, i);
                let mut digits = vec![0; space.slots()];
                random_digits(&mut rng, k, &mut digits);
                c.instances_tested += 1;
                let mut g = digraph_from(&z, &space, &digits, |d| d as i64);
                let Some(mut best) = zero_cycle_count(&g, b, c) else {
                    c.budget_exceeded += 1;
                    return Ok(None);
                };
                for _ in 0..steps {
                    if best == 0 {
                        break;
                    }
                    let slot = rng.gen_range(0..space.slots());
                    let old = digits[slot];
                    let new = (old + rng.gen_range(1..k)) % k;
                    let (a, bb) = space.pairs[slot];
                    g.set_edge(a, bb, z.elem(new as i64))?;
                    match zero_cycle_count(&g, b, c) {
                        Some(v) if v <= best => {
                            best = v;
                            digits[slot] = new;
                        }
                        _ => g.set_edge(a, bb, z.elem(old as i64))?,
                    }
                }
                if best == 0 {
                    free(&g, i).map(Some)
                } else {
                    Ok(None)
                }
            })?
        }
    };
    let bound = match (&s.first, strategy, s.counters.budget_exceeded) {
        (Some(_), _, _) => json!(format!("f({k}) >= {n}")),
        (None, Strategy::Exhaustive, 0) => json!(format!("f({k}) < {n}")),
        _ => Value::Null,
    };
    let findings = json!({ "k": k, "n": n, "space": total, "bound": bound });
    Ok(report(cfg, started, strategy, s, findings))
}

fn failure(i: u64, reason: impl Into<String>, graph: Value) -> Option<Value> {
    Some(json!({ "index": i, "reason": reason.into(), "graph": graph }))
}

/// Seeded (or exhaustive) instances at a theorem's exact threshold; any
/// instance without a validated zero cycle is reported as a counterexample.
pub fn verify_theorem_sweep(cfg: &ExperimentConfig, jobs: usize) -> Result<BoundReport> {
    let started = Instant::now();
    let strategy = cfg.strategy_or(Strategy::Random);
    if strategy == Strategy::LocalSearch {
        return domain("theorem sweeps support exhaustive and random strategies");
    }
    let seed = cfg.need_seed(strategy)?;
    let b = budget(cfg);
    let (s, findings) = match cfg.task {
        Task::TheoremMain => sweep_main(cfg, jobs, strategy, seed, b)?,
        Task::TheoremCorollary => sweep_corollary(cfg, jobs, strategy, seed, b)?,
        Task::TheoremUndirected => sweep_undirected(cfg, jobs, strategy, seed, b)?,
        other => return domain(format!("{other:?} is not a theorem sweep")),
    };
    Ok(report(cfg, started, strategy, s, findings))
}

fn threshold_n(cfg: &ExperimentConfig, threshold: usize) -> Result<usize> {
    match cfg.n {
        None => Ok(threshold),
        Some(n) if n >= threshold => Ok(n),
        Some(n) => domain(format!("n = {n} is below the theorem threshold {threshold}")),
    }
}

fn sweep_main(
    cfg: &ExperimentConfig,
    jobs: usize,
    strategy: Strategy,
    seed: u64,
    b: SearchBudget,
) -> Result<(ScanOutcome<Value>, Value)> {
    let k = cfg.need_k()?;
    let n = threshold_n(cfg, k as usize + 2 * omega(k as i64)? as usize)?;
    let z = GroupSpec::cyclic(k)?;
    let space = ArcSpace::new(n, k, cfg.prune && strategy == Strategy::Exhaustive);
    let total = match strategy {
        Strategy::Exhaustive => cfg.check_cap(space.total(), "theorem_main weightings")?,
        _ => cfg.need_trials()?,
    };
    let verts: Vec<usize> = (0..n).collect();
    let s = scan(total, jobs, |i, c| {
        let mut digits = vec![0; space.slots()];
        if strategy == Strategy::Exhaustive {
            space.decode(i, &mut digits);
            if !space.is_canonical(&digits) {
                c.pruned += 1;
                return Ok(None);
            }
        } else {
            random_digits(&mut instance_rng(seed, i), k, &mut digits);
        }
        c.instances_tested += 1;
        let g = digraph_from(&z, &space, &digits, |d| d as i64);
        match zero_cycle(&g, 2, b, c)? {
            Search::Found(cy) => {
                if let Err(e) = check_zero_cycle(&g, &cy, 2, None) {
                    return Ok(failure(i, format!("oracle witness invalid: {e}"), directed_value(&g)));
                }
            }
            Search::Exhausted => return Ok(failure(i, "no zero cycle exists", directed_value(&g))),
            Search::BudgetExceeded => return Ok(None),
        }
        match theorem_main_solve_with(&g, &verts, b) {
            Ok(out) => {
                c.oracle_fallbacks += out.fallbacks() as u64;
                match check_zero_cycle(&g, &out.cycle, 2, None) {
                    Ok(()) => Ok(None),
                    Err(e) => Ok(failure(i, format!("solver witness invalid: {e}"), directed_value(&g))),
                }
            }
            Err(Error::BudgetExceeded(_)) => {
                c.budget_exceeded += 1;
                Ok(None)
            }
            Err(e) => Ok(failure(i, format!("solver failed: {e}"), directed_value(&g))),
        }
    })?;
    let findings = json!({ "theorem": "main", "k": k, "n": n, "counterexample": s.first.is_some() });
    Ok((s, findings))
}

fn sweep_corollary(
    cfg: &ExperimentConfig,
    jobs: usize,
    strategy: Strategy,
    seed: u64,
    b: SearchBudget,
) -> Result<(ScanOutcome<Value>, Value)> {
    let k = cfg.need_k()?;
    let n = threshold_n(cfg, k as usize + 1 + 2 * omega(k as i64)? as usize)?;
    let z = GroupSpec::cyclic(k)?;
    let slots = n + n * (n - 1) / 2;
    let total = match strategy {
        Strategy::Exhaustive => cfg.check_cap((k as u64).checked_pow(slots as u32), "corollary weightings")?,
        _ => cfg.need_trials()?,
    };
    let s = scan(total, jobs, |i, c| {
        let mut digits = vec![0; slots];
        if strategy == Strategy::Exhaustive {
            decode(i, k, &mut digits);
        } else {
            random_digits(&mut instance_rng(seed, i), k, &mut digits);
        }
        c.instances_tested += 1;
        let g = complete_undirected(&z, n, &digits);
        Ok(match zero_cycle(&g, 3, b, c)? {
            Search::Found(cy) => match check_zero_cycle(&g, &cy, 3, None) {
                Ok(()) => None,
                Err(e) => failure(i, format!("oracle witness invalid: {e}"), undirected_value(&g)),
            },
            Search::Exhausted => failure(i, "no zero cycle of length >= 3", undirected_value(&g)),
            Search::BudgetExceeded => None,
        })
    })?;
    let findings = json!({ "theorem": "corollary", "k": k, "n": n, "counterexample": s.first.is_some() });
    Ok((s, findings))
}

fn sweep_undirected(
    cfg: &ExperimentConfig,
    jobs: usize,
    strategy: Strategy,
    seed: u64,
    b: SearchBudget,
) -> Result<(ScanOutcome<Value>, Value)> {
    let z = match &cfg.group {
        Some(f) => GroupSpec::new(f.clone())?,
        None => GroupSpec::cyclic(cfg.need_k()?)?,
    };
    let order = z.order();
    let kk = order as usize;
    let complete_n = 2 * kk;
    let n_max = cfg.n.unwrap_or(complete_n + 2);
    if n_max < complete_n {
        return domain(format!("n = {n_max} is below 2|Γ| = {complete_n}"));
    }
    let slots = complete_n + complete_n * (complete_n - 1) / 2;
    let total = match strategy {
        Strategy::Exhaustive => cfg.check_cap((order as u64).checked_pow(slots as u32), "K_2k weightings")?,
        _ => 2 * cfg.need_trials()?,
    };
    let s = scan(total, jobs, |i, c| {
        let g = if strategy == Strategy::Exhaustive {
            let mut digits = vec![0; slots];
            decode(i, order, &mut digits);
            complete_undirected(&z, complete_n, &digits)
        } else {
            let mut rng = instance_rng(seed, i);
            if i % 2 == 0 {
                let mut digits = vec![0; slots];
                random_digits(&mut rng, order, &mut digits);
                complete_undirected(&z, complete_n, &digits)
            } else {
                let n = rng.gen_range(complete_n..=n_max);
                random_min_degree_graph(&mut rng, &z, n, 2 * kk - 1)
            }
        };
        c.instances_tested += 1;
        match theorem_undirected_solve_with(&g, b) {
            Ok(out) => {
                c.oracle_fallbacks += out.fallbacks() as u64;
                match check_zero_cycle(&g, &out.cycle, 3, None) {
                    Ok(()) => Ok(None),
                    Err(e) => Ok(failure(i, format!("solver witness invalid: {e}"), undirected_value(&g))),
                }
            }
            Err(Error::BudgetExceeded(_)) => {
                c.budget_exceeded += 1;
                Ok(None)
            }
            Err(e) => Ok(failure(i, format!("solver failed: {e}"), undirected_value(&g))),
        }
    })?;
    let findings = json!({
        "theorem": "undirected",
        "group": z.factors(),
        "min_degree": 2 * kk - 1,
        "complete_order": complete_n,
        "max_order": n_max,
        "counterexample": s.first.is_some(),
    });
    Ok((s, findings))
}

fn rotate(mask: u64, x: u32, k: u32) -> u64 {
    let full = (1u64 << k) - 1;
    if x == 0 {
        mask
    } else {
        ((mask << x) | (mask >> (k - x))) & full
    }
}

/// Shift set by the definition, on bitmasks.
fn brute_shift_set(mask: u64, k: u32) -> Vec<u32> {
    (0..k)
        .filter(|&x| {
            (0..k)
                .filter(|&b| mask >> b & 1 == 1)
                .any(|b| rotate(mask & !(1 << b), x, k) & !mask == 0)
        })
        .collect()
}

fn brute_near_ap(mask: u64, k: u32) -> bool {
    let size = mask.count_ones();
    size >= 2 && size + 2 <= k && brute_shift_set(mask, k).iter().any(|&x| x != 0)
}

/// Every subset of `Z_k` for `2 <= k <= k_max`: near-APs must land in the
/// divisor or unit case consistently with the brute-force shift set.
pub fn verify_lemma_inc(cfg: &ExperimentConfig, jobs: usize) -> Result<BoundReport> {
    let started = Instant::now();
    let k_max = match cfg.k_max {
        Some(k) if (2..=16).contains(&k) => k,
        Some(k) => return domain(format!("k_max must lie in 2..=16, got {k}")),
        None => return domain("lemma_inc needs k_max"),
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Domain(format!("thread pool: {e}")))?;
    type PerK = (Value, u64, Option<(u64, String)>);
    let per_k: Vec<Result<PerK>> = pool.install(|| {
        (2..=k_max)
            .into_par_iter()
            .map(|k| -> Result<PerK> {
                let mut near = 0u64;
                let mut unit = 0u64;
                let mut divisor: BTreeMap<u32, u64> = BTreeMap::new();
                let mut first: Option<(u64, String)> = None;
                for mask in 0..(1u64 << k) {
                    let shifts = brute_shift_set(mask, k);
                    let is_near = brute_near_ap(mask, k);
                    let cls = classify_near_ap(&ResidueSet::from_mask(k, mask));
                    let problem = match (&cls, is_near) {
                        (Err(e), _) => Some(e.to_string()),
                        (Ok(c), false) => (c.class != NearApClass::NotNearAp).then(|| "non-near-AP classified".into()),
                        (Ok(c), true) => {
                            near += 1;
                            if c.shift_set.members() != shifts.as_slice() {
                                Some(format!(
                                    "shift set {:?} != brute force {shifts:?}",
                                    c.shift_set.members()
                                ))
                            } else {
                                match c.class {
                                    NearApClass::DivisorCase { d } => {
                                        *divisor.entry(d).or_default() += 1;
                                        let ok = d > 1 && d < k && k % d == 0 && shifts.iter().all(|x| x % d == 0);
                                        (!ok).then(|| format!("divisor case d = {d} inconsistent"))
                                    }
                                    NearApClass::UnitCase { a } => {
                                        unit += 1;
                                        let ok = a != 0
                                            && gcd(a as u64, k as u64) == 1
                                            && shifts.iter().all(|&x| x == 0 || x == a || x == k - a);
                                        (!ok).then(|| format!("unit case a = {a} inconsistent"))
                                    }
                                    NearApClass::NotNearAp => Some("near-AP classified as not near-AP".into()),
                                }
                            }
                        }
                    };
                    if let Some(p) = problem {
                        if first.is_none() {
                            first = Some((mask, p));
                        }
                    }
                }
                let violations = u64::from(first.is_some());
                let row = json!({
                    "k": k,
                    "subsets": 1u64 << k,
                    "near_ap": near,
                    "divisor_case": divisor,
                    "unit_case": unit,
                });
                Ok((row, violations, first))
            })
            .collect()
    });
    let mut rows = Vec::new();
    let mut witness = None;
    let mut counters = Counters::default();
    for (k, r) in (2..=k_max).zip(per_k) {
        let (row, _, first) = r?;
        counters.instances_total += 1u64 << k;
        counters.instances_tested += 1u64 << k;
        rows.push(row);
        if witness.is_none() {
            if let Some((mask, reason)) = first {
                let members: Vec<u32> = (0..k).filter(|&b| mask >> b & 1 == 1).collect();
                witness = Some(json!({ "k": k, "set": members, "reason": reason }));
            }
        }
    }
    let findings = json!({ "k_max": k_max, "per_k": rows, "violation": witness.is_some() });
    Ok(BoundReport {
        task: cfg.clone(),
        outcome: if witness.is_some() {
            Outcome::WitnessFound
        } else {
            Outcome::ExhaustedNoWitness
        },
        evidence: "exhaustive",
        counters,
        findings,
        witness,
        timing: Some(Timing {
            wall_seconds: started.elapsed().as_secs_f64(),
        }),
    })
}

const Q1_VALUES: [i64; 3] = [0, 1, -1];

/// `Some(true)` when a zero cycle or a one-signed Hamiltonian path exists.
fn q1_holds(g: &WeightedDigraph, b: SearchBudget, c: &mut Counters) -> Result<Option<bool>> {
    match zero_cycle(g, 2, b, c)? {
        Search::Found(_) => return Ok(Some(true)),
        Search::BudgetExceeded => return Ok(None),
        Search::Exhausted => {}
    }
    let verts: Vec<usize> = (0..g.order()).collect();
    let mut unknown = false;
    for v in [1, -1] {
        match mono_hamiltonian_path(g, &verts, g.group().elem(v), b)? {
            Search::Found(_) => return Ok(Some(true)),
            Search::BudgetExceeded => unknown = true,
            Search::Exhausted => {}
        }
    }
    if unknown {
        c.budget_exceeded += 1;
        return Ok(None);
    }
    Ok(Some(false))
}

/// Weights in `{0, 1, -1}` with integer sums, checked in `Z_{2n+1}`: a
/// simple cycle's integer weight has absolute value at most `n`, so it is
/// zero exactly when its residue is.
pub fn question1_search(cfg: &ExperimentConfig, jobs: usize) -> Result<BoundReport> {
    let started = Instant::now();
    let n = match cfg.n {
        Some(n) if n >= 2 => n,
        _ => return domain("question1 needs n >= 2"),
    };
    let strategy = cfg.strategy_or(Strategy::Exhaustive);
    let seed = cfg.need_seed(strategy)?;
    let modulus = 2 * n as u32 + 1;
    let z = GroupSpec::cyclic(modulus)?;
    let space = ArcSpace::new(n, 3, cfg.prune && strategy == Strategy::Exhaustive);
    let b = budget(cfg);
    let value = |d: u32| Q1_VALUES[d as usize];
    let witness = |g: &WeightedDigraph, digits: &[u32], i: u64| -> Result<Value> {
        if q1_holds(g, SearchBudget::unlimited(), &mut Counters::default())? != Some(false) {
            return Err(Error::LemmaViolation(format!("counterexample {i} fails re-validation")));
        }
        let mut m = vec![vec![Value::Null; n]; n];
        for (&(a, bb), &d) in space.pairs.iter().zip(digits) {
            m[a][bb] = json!(value(d));
        }
        Ok(json!({ "index": i, "weights": m }))
    };
    let total;
    let s = match strategy {
        Strategy::Exhaustive | Strategy::Random => {
            total = match strategy {
                Strategy::Exhaustive => cfg.check_cap(space.total(), "question1 weightings")?,
                _ => cfg.need_trials()?,
            };
            scan(total, jobs, |i, c| {
                let mut digits = vec![0; space.slots()];
                if strategy == Strategy::Exhaustive {
                    space.decode(i, &mut digits);
                    if !space.is_canonical(&digits) {
                        c.pruned += 1;
                        return Ok(None);
                    }
                } else {
                    random_digits(&mut instance_rng(seed, i), 3, &mut digits);
                }
                c.instances_tested += 1;
                let g = digraph_from(&z, &space, &digits, value);
                match q1_holds(&g, b, c)? {
                    Some(false) => witness(&g, &digits, i).map(Some),
                    _ => Ok(None),
                }
            })?
        }
        Strategy::LocalSearch => {
            total = cfg.need_trials()?;
            let steps = cfg.steps.unwrap_or(2000);
            scan(total, jobs, |i, c| {
                let mut rng = instance_rng(seed, i);
                let mut digits = vec![0; space.slots()];
                random_digits(&mut rng, 3, &mut digits);
                c.instances_tested += 1;
                // Objective: zero cycles, plus one while a one-signed path exists.
                let score = |g: &WeightedDigraph, c: &mut Counters| -> Result<Option<u64>> {
                    let Some(zc) = zero_cycle_count(g, b, c) else {
                        return Ok(None);
                    };
                    if zc > 0 {
                        return Ok(Some(zc + 1));
                    }
                    Ok(q1_holds(g, b, c)?.map(u64::from))
                };
                let mut g = digraph_from(&z, &space, &digits, value);
                let Some(mut best) = score(&g, c)? else {
                    c.budget_exceeded += 1;
                    return Ok(None);
                };
                for _ in 0..steps {
                    if best == 0 {
                        break;
                    }
                    let slot = rng.gen_range(0..space.slots());
                    let new = (digits[slot] + rng.gen_range(1..3)) % 3;
                    let (a, bb) = space.pairs[slot];
                    g.set_edge(a, bb, z.elem(value(new)))?;
                    match score(&g, c)? {
                        Some(v) if v <= best => {
                            best = v;
                            digits[slot] = new;
                        }
                        _ => g.set_edge(a, bb, z.elem(value(digits[slot])))?,
                    }
                }
                if best == 0 {
                    witness(&g, &digits, i).map(Some)
                } else {
                    Ok(None)
                }
            })?
        }
    };
    let findings = json!({
        "n": n,
        "space": total,
        "embedding_modulus": modulus,
        "counterexample": s.first.is_some(),
    });
    Ok(report(cfg, started, strategy, s, findings))
}

/// Edge masks over the pairs `a < b` of `n` vertices, one per isomorphism
/// class, with minimum degree at least `min_deg`.
fn min_degree_graph_classes(n: usize, min_deg: usize) -> Vec<Vec<(usize, usize)>> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let index = |a: usize, b: usize| pairs.iter().position(|&p| p == (a.min(b), a.max(b))).expect("pair");
    let perms = {
        let mut all = vec![(0..n).collect::<Vec<_>>()];
        // Heap's algorithm.
        let mut p: Vec<usize> = (0..n).collect();
        let mut c = vec![0; n];
        let mut i = 0;
        while i < n {
            if c[i] < i {
                if i % 2 == 0 {
                    p.swap(0, i);
                } else {
                    p.swap(c[i], i);
                }
                all.push(p.clone());
                c[i] += 1;
                i = 0;
            } else {
                c[i] = 0;
                i += 1;
            }
        }
        all
    };
    let images: Vec<Vec<usize>> = perms
        .iter()
        .map(|p| pairs.iter().map(|&(a, b)| index(p[a], p[b])).collect())
        .collect();
    let mut out = Vec::new();
    for mask in 0u64..(1 << pairs.len()) {
        let mut deg = vec![0; n];
        for (j, &(a, b)) in pairs.iter().enumerate() {
            if mask >> j & 1 == 1 {
                deg[a] += 1;
                deg[b] += 1;
            }
        }
        if deg.iter().any(|&d| d < min_deg) {
            continue;
        }
        let canonical = images.iter().all(|img| {
            let mut m = 0u64;
            for (j, &t) in img.iter().enumerate() {
                if mask >> j & 1 == 1 {
                    m |= 1 << t;
                }
            }
            m >= mask
        });
        if canonical {
            out.push(
                pairs
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| mask >> j & 1 == 1)
                    .map(|(_, &p)| p)
                    .collect(),
            );
        }
    }
    out
}

/// Minimum degree `k + 1` graphs over `Z_k` without a zero cycle. The
/// degree-`k` tree-plus-clique construction is re-checked first as the known
/// boundary.
pub fn question2_probe(cfg: &ExperimentConfig, jobs: usize) -> Result<BoundReport> {
    let started = Instant::now();
    let k = cfg.need_k()?;
    let strategy = cfg.strategy_or(Strategy::Random);
    if strategy == Strategy::LocalSearch {
        return domain("question2 supports exhaustive and random strategies");
    }
    let seed = cfg.need_seed(strategy)?;
    let z = GroupSpec::cyclic(k)?;
    let b = budget(cfg);

    let mut boundary = Vec::new();
    let trees: Vec<(&str, Vec<(usize, usize)>)> = vec![
        ("path2", path_tree(2)),
        ("path3", path_tree(3)),
        ("path4", path_tree(4)),
        ("star4", vec![(0, 1), (0, 2), (0, 3)]),
    ];
    for (name, tree) in trees {
        let g = build_extremal_undirected(k, &tree)?;
        let n = g.order() as i64;
        let identity = k as i64 * n - (k as i64 * (k as i64 + 1)) / 2;
        let free = zero_cycle(&g, 3, SearchBudget::unlimited(), &mut Counters::default())? == Search::Exhausted;
        if g.min_degree() != k as usize || g.edge_count() as i64 != identity || !free {
            return Err(Error::LemmaViolation(format!(
                "extremal construction fails its checks for tree {name}"
            )));
        }
        boundary.push(json!({
            "tree": name,
            "n": n,
            "min_degree": g.min_degree(),
            "edges": g.edge_count(),
            "kn_minus_k(k+1)/2": identity,
            "zero_cycle": "none",
        }));
    }

    let min_deg = k as usize + 1;
    let n_min = k as usize + 2;
    let mut extra = json!({});
    let s = match strategy {
        Strategy::Exhaustive => {
            let n_max = cfg.n.unwrap_or(n_min + 1);
            if n_max > 6 {
                return domain("exhaustive question2 enumerates graphs on at most 6 vertices");
            }
            let mut classes = Vec::new();
            for n in n_min..=n_max {
                classes.extend(min_degree_graph_classes(n, min_deg).into_iter().map(|e| (n, e)));
            }
            let mut offsets = Vec::with_capacity(classes.len() + 1);
            let mut acc: Option<u64> = Some(0);
            offsets.push(0);
            for (n, edges) in &classes {
                let size = (k as u64).checked_pow((n + edges.len()) as u32);
                acc = acc.zip(size).and_then(|(a, s)| a.checked_add(s));
                offsets.push(acc.unwrap_or(u64::MAX));
            }
            let total = cfg.check_cap(acc, "question2 instances")?;
            extra = json!({ "graph_classes": classes.len(), "space": total });
            scan(total, jobs, |i, c| {
                let class = offsets.partition_point(|&o| o <= i) - 1;
                let (n, edges) = &classes[class];
                let mut digits = vec![0; n + edges.len()];
                decode(i - offsets[class], k, &mut digits);
                let mut g = WeightedGraph::empty(z.clone(), *n);
                for (v, &d) in digits[..*n].iter().enumerate() {
                    g.set_vertex_weight(v, z.elem(d as i64))?;
                }
                for (j, &(a, bb)) in edges.iter().enumerate() {
                    g.set_edge(a, bb, z.elem(digits[n + j] as i64))?;
                }
                c.instances_tested += 1;
                q2_check(&g, i, b, c)
            })?
        }
        _ => {
            let n_max = cfg.n.unwrap_or(8).max(n_min);
            extra = json!({ "max_order": n_max });
            scan(cfg.need_trials()?, jobs, |i, c| {
                let mut rng = instance_rng(seed, i);
                let n = rng.gen_range(n_min..=n_max);
                let g = random_min_degree_graph(&mut rng, &z, n, min_deg);
                c.instances_tested += 1;
                q2_check(&g, i, b, c)
            })?
        }
    };
    let mut findings = json!({
        "k": k,
        "min_degree": min_deg,
        "boundary": boundary,
        "refutation": s.first.is_some(),
    });
    if let (Value::Object(f), Value::Object(e)) = (&mut findings, extra) {
        f.extend(e);
    }
    Ok(report(cfg, started, strategy, s, findings))
}

fn q2_check(g: &WeightedGraph, i: u64, b: SearchBudget, c: &mut Counters) -> Result<Option<Value>> {
    if zero_cycle(g, 3, b, c)? != Search::Exhausted {
        return Ok(None);
    }
    if zero_cycle(g, 3, SearchBudget::unlimited(), &mut Counters::default())? != Search::Exhausted {
        return Err(Error::LemmaViolation(format!("witness {i} fails re-validation")));
    }
    Ok(Some(json!({ "index": i, "graph": undirected_value(g) })))
}
