//! Undirected machinery: clique pairs `(G, K)`, the four configuration
//! types, the reduction recursion and the minimum-degree theorem driver.
//!
//! All counts `|N(x) ∩ V(K)|` and all paths refer to the graph of the pair;
//! paths live in `G - V(K)`. Path and cycle weights include vertex weights.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::ops::ControlFlow;

use serde::Serialize;

use crate::error::{domain, precondition, Error, Result};
use crate::graph::{CycleWitness, WeightedAdjacency, WeightedGraph};
use crate::group::GroupElem;
use crate::oracle::{distinct_weight_paths_in, find_zero_cycle_in, Search, SearchBudget};
use crate::witness::check_zero_cycle;

/// A graph together with a proper complete subgraph `K` (possibly empty).
#[derive(Clone, Debug)]
pub struct CliquePair {
    graph: WeightedGraph,
    clique: Vec<usize>,
    in_clique: Vec<bool>,
}

impl CliquePair {
    pub fn new(graph: WeightedGraph, clique: &[usize]) -> Result<Self> {
        let n = graph.order();
        let mut clique = clique.to_vec();
        clique.sort_unstable();
        clique.dedup();
        if clique.iter().any(|&c| c >= n) {
            return domain("clique vertex out of range");
        }
        if clique.len() == n {
            return domain("K must be a proper subgraph");
        }
        for (i, &a) in clique.iter().enumerate() {
            for &b in &clique[i + 1..] {
                if !graph.has_edge(a, b) {
                    return domain(format!("K is not complete: {a} and {b} are not adjacent"));
                }
            }
        }
        let mut in_clique = vec![false; n];
        for &c in &clique {
            in_clique[c] = true;
        }
        Ok(CliquePair {
            graph,
            clique,
            in_clique,
        })
    }

    pub fn graph(&self) -> &WeightedGraph {
        &self.graph
    }

    pub fn clique(&self) -> &[usize] {
        &self.clique
    }

    pub fn in_clique(&self, v: usize) -> bool {
        self.in_clique[v]
    }

    /// Vertices of `G - V(K)`, ascending.
    pub fn outside(&self) -> Vec<usize> {
        (0..self.graph.order()).filter(|&v| !self.in_clique[v]).collect()
    }

    /// `|N(x) ∩ V(K)|`.
    pub fn clique_neighbors(&self, x: usize) -> usize {
        self.clique.iter().filter(|&&c| self.graph.has_edge(x, c)).count()
    }

    fn k(&self) -> usize {
        self.graph.group().order() as usize
    }

    fn with_clique(&self, clique: &[usize]) -> CliquePair {
        CliquePair::new(self.graph.clone(), clique).expect("caller keeps K a proper clique")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConfigD {
    pub rank: usize,
    pub x: usize,
    pub y: usize,
    pub z: usize,
    pub x_prime: usize,
    pub y_prime: usize,
    pub z_prime: usize,
    /// `x` to `x_prime`; a single vertex when trivial.
    pub path_x: Vec<usize>,
    pub path_y: Vec<usize>,
    pub path_z: Vec<usize>,
    /// `x`-`y` paths with distinct weights.
    pub paths: Vec<Vec<usize>>,
}

impl ConfigD {
    /// Interchange the roles of `x, x'` and `y, y'`.
    fn swapped(&self) -> ConfigD {
        ConfigD {
            rank: self.rank,
            x: self.y,
            y: self.x,
            z: self.z,
            x_prime: self.y_prime,
            y_prime: self.x_prime,
            z_prime: self.z_prime,
            path_x: self.path_y.clone(),
            path_y: self.path_x.clone(),
            path_z: self.path_z.clone(),
            paths: self.paths.iter().map(|p| p.iter().rev().copied().collect()).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type")]
pub enum Configuration {
    A {
        x: usize,
    },
    B {
        x: usize,
        y: usize,
        path: Vec<usize>,
    },
    C {
        rank: usize,
        x: usize,
        y: usize,
        paths: Vec<Vec<usize>>,
    },
    D(ConfigD),
}

impl Configuration {
    pub fn kind(&self) -> &'static str {
        match self {
            Configuration::A { .. } => "A",
            Configuration::B { .. } => "B",
            Configuration::C { .. } => "C",
            Configuration::D(_) => "D",
        }
    }

    fn map_vertices(&self, f: impl Fn(usize) -> usize) -> Configuration {
        let seq = |p: &Vec<usize>| p.iter().map(|&v| f(v)).collect::<Vec<_>>();
        match self {
            Configuration::A { x } => Configuration::A { x: f(*x) },
            Configuration::B { x, y, path } => Configuration::B {
                x: f(*x),
                y: f(*y),
                path: seq(path),
            },
            Configuration::C { rank, x, y, paths } => Configuration::C {
                rank: *rank,
                x: f(*x),
                y: f(*y),
                paths: paths.iter().map(seq).collect(),
            },
            Configuration::D(d) => Configuration::D(ConfigD {
                rank: d.rank,
                x: f(d.x),
                y: f(d.y),
                z: f(d.z),
                x_prime: f(d.x_prime),
                y_prime: f(d.y_prime),
                z_prime: f(d.z_prime),
                path_x: seq(&d.path_x),
                path_y: seq(&d.path_y),
                path_z: seq(&d.path_z),
                paths: d.paths.iter().map(seq).collect(),
            }),
        }
    }
}

fn path_ok(pair: &CliquePair, seq: &[usize], a: usize, b: usize) -> std::result::Result<(), String> {
    let g = &pair.graph;
    if seq.first() != Some(&a) || seq.last() != Some(&b) {
        return Err(format!("path {seq:?} does not run {a}..{b}"));
    }
    let mut seen = vec![false; g.order()];
    for &v in seq {
        if v >= g.order() || pair.in_clique[v] {
            return Err(format!("path {seq:?} leaves G - V(K) at {v}"));
        }
        if std::mem::replace(&mut seen[v], true) {
            return Err(format!("path {seq:?} repeats {v}"));
        }
    }
    match seq.windows(2).find(|e| !g.has_edge(e[0], e[1])) {
        Some(e) => Err(format!("missing edge {}-{}", e[0], e[1])),
        None => Ok(()),
    }
}

fn weight(g: &WeightedGraph, seq: &[usize]) -> GroupElem {
    g.walk_weight(seq, false).expect("edges checked")
}

fn family_ok(pair: &CliquePair, paths: &[Vec<usize>], x: usize, y: usize) -> std::result::Result<(), String> {
    if x == y {
        return Err("family endpoints coincide".into());
    }
    for p in paths {
        path_ok(pair, p, x, y)?;
    }
    let mut ws: Vec<GroupElem> = paths.iter().map(|p| weight(&pair.graph, p)).collect();
    ws.sort_unstable();
    ws.dedup();
    if ws.len() != paths.len() {
        return Err("family weights are not distinct".into());
    }
    Ok(())
}

/// Clause-by-clause check of a configuration; the error names the first
/// failed clause.
pub fn check_configuration(pair: &CliquePair, cfg: &Configuration) -> std::result::Result<(), String> {
    let k = pair.k() as i64;
    let n = pair.graph.order();
    let cnt = |v: usize| pair.clique_neighbors(v) as i64;
    let outside = |v: usize| v < n && !pair.in_clique[v];
    let need = |v: usize, bound: i64, what: &str| {
        if !outside(v) {
            Err(format!("{what} = {v} is not outside K"))
        } else if cnt(v) < bound {
            Err(format!("{what} = {v} has {} clique neighbours, needs {bound}", cnt(v)))
        } else {
            Ok(())
        }
    };
    match cfg {
        Configuration::A { x } => need(*x, 2 * k - 1, "x"),
        Configuration::B { x, y, path } => {
            need(*x, 2 * k - 2, "x")?;
            need(*y, 2 * k - 2, "y")?;
            if x == y {
                return Err("x = y".into());
            }
            path_ok(pair, path, *x, *y)
        }
        Configuration::C { rank, x, y, paths } => {
            let r = *rank as i64;
            if !(2..=k).contains(&r) {
                return Err(format!("rank {r} outside 2..={k}"));
            }
            need(*x, 2 * (k - r) + 1, "x")?;
            need(*y, 2 * (k - r) + 1, "y")?;
            if paths.len() != *rank {
                return Err(format!("{} paths for rank {rank}", paths.len()));
            }
            family_ok(pair, paths, *x, *y)
        }
        Configuration::D(d) => {
            let r = d.rank as i64;
            if !(2..k).contains(&r) {
                return Err(format!("rank {r} outside 2..{k}"));
            }
            for (v, what) in [(d.x, "x"), (d.y, "y"), (d.z, "z")] {
                if !outside(v) {
                    return Err(format!("{what} = {v} is not outside K"));
                }
            }
            if d.x == d.y || d.x == d.z || d.y == d.z {
                return Err("x, y, z must be distinct".into());
            }
            if !pair.graph.has_edge(d.x, d.z) || !pair.graph.has_edge(d.y, d.z) {
                return Err("xz and yz must be edges".into());
            }
            need(d.x_prime, 2 * (k - r) - 1, "x'")?;
            need(d.y_prime, 2 * (k - r), "y'")?;
            need(d.z_prime, 2 * (k - r), "z'")?;
            path_ok(pair, &d.path_x, d.x, d.x_prime)?;
            path_ok(pair, &d.path_y, d.y, d.y_prime)?;
            path_ok(pair, &d.path_z, d.z, d.z_prime)?;
            let mut owner = vec![false; n];
            for p in [&d.path_x, &d.path_y, &d.path_z] {
                for &v in p {
                    if std::mem::replace(&mut owner[v], true) {
                        return Err(format!("P_x, P_y, P_z share vertex {v}"));
                    }
                }
            }
            if d.paths.len() != d.rank {
                return Err(format!("{} paths for rank {}", d.paths.len(), d.rank));
            }
            family_ok(pair, &d.paths, d.x, d.y)?;
            for p in &d.paths {
                if let Some(&v) = p[1..p.len() - 1].iter().find(|&&v| owner[v]) {
                    return Err(format!("path {p:?} meets P_x, P_y or P_z at {v}"));
                }
            }
            Ok(())
        }
    }
}

pub fn verify_configuration(pair: &CliquePair, cfg: &Configuration) -> bool {
    check_configuration(pair, cfg).is_ok()
}

/// Counts path extensions against a budget across many small searches.
struct Nodes {
    used: u64,
    budget: SearchBudget,
}

impl Nodes {
    fn spend(&mut self) -> bool {
        self.used += 1;
        self.used > self.budget.max_nodes
            || (self.used & 0xfff == 0 && self.budget.deadline.is_some_and(|d| std::time::Instant::now() >= d))
    }
}

/// Every simple path from `start` inside `allowed`, including the trivial one.
fn each_path_from(
    g: &WeightedGraph,
    start: usize,
    allowed: &[bool],
    nodes: &mut Nodes,
    visit: &mut dyn FnMut(&[usize], &mut Nodes) -> ControlFlow<bool>,
) -> ControlFlow<bool> {
    fn go(
        g: &WeightedGraph,
        allowed: &[bool],
        path: &mut Vec<usize>,
        on: &mut [bool],
        nodes: &mut Nodes,
        visit: &mut dyn FnMut(&[usize], &mut Nodes) -> ControlFlow<bool>,
    ) -> ControlFlow<bool> {
        if nodes.spend() {
            return ControlFlow::Break(false);
        }
        visit(path, nodes)?;
        let last = *path.last().expect("nonempty");
        for next in g.neighbors(last).collect::<Vec<_>>() {
            if allowed[next] && !on[next] {
                on[next] = true;
                path.push(next);
                let r = go(g, allowed, path, on, nodes, visit);
                path.pop();
                on[next] = false;
                r?;
            }
        }
        ControlFlow::Continue(())
    }
    let mut on = vec![false; g.order()];
    on[start] = true;
    go(g, allowed, &mut vec![start], &mut on, nodes, visit)
}

fn bfs_path(pair: &CliquePair, a: usize, b: usize) -> Option<Vec<usize>> {
    let g = &pair.graph;
    let mut prev = vec![usize::MAX; g.order()];
    prev[a] = a;
    let mut queue = VecDeque::from([a]);
    while let Some(x) = queue.pop_front() {
        if x == b {
            let mut path = vec![b];
            while *path.last().unwrap() != a {
                path.push(prev[*path.last().unwrap()]);
            }
            path.reverse();
            return Some(path);
        }
        for y in g.neighbors(x) {
            if !pair.in_clique[y] && prev[y] == usize::MAX {
                prev[y] = x;
                queue.push_back(y);
            }
        }
    }
    None
}

/// Search for a configuration: A, then B, then C by descending rank, then D
/// by descending rank. Exhaustive under an unlimited budget.
pub fn detect_configuration(pair: &CliquePair, budget: SearchBudget) -> Result<Search<Configuration>> {
    let k = pair.k() as i64;
    let out = pair.outside();
    let cnt: Vec<i64> = (0..pair.graph.order())
        .map(|v| pair.clique_neighbors(v) as i64)
        .collect();
    let mut exceeded = false;

    if let Some(&x) = out.iter().find(|&&x| cnt[x] >= 2 * k - 1) {
        return Ok(Search::Found(Configuration::A { x }));
    }
    for (i, &x) in out.iter().enumerate() {
        for &y in &out[i + 1..] {
            if cnt[x] >= 2 * k - 2 && cnt[y] >= 2 * k - 2 {
                if let Some(path) = bfs_path(pair, x, y) {
                    return Ok(Search::Found(Configuration::B { x, y, path }));
                }
            }
        }
    }
    for r in (2..=k).rev() {
        let bound = 2 * (k - r) + 1;
        for (i, &x) in out.iter().enumerate() {
            for &y in &out[i + 1..] {
                if cnt[x] < bound || cnt[y] < bound {
                    continue;
                }
                let s = distinct_weight_paths_in(&pair.graph, x, y, r as usize, &out, 2, budget)?;
                match s.outcome {
                    Search::Found(f) => {
                        let paths = f.paths.into_iter().map(|p| p.vertices).collect();
                        return Ok(Search::Found(Configuration::C {
                            rank: r as usize,
                            x,
                            y,
                            paths,
                        }));
                    }
                    Search::BudgetExceeded => exceeded = true,
                    Search::Exhausted => {}
                }
            }
        }
    }
    let mut nodes = Nodes { used: 0, budget };
    for r in (2..k).rev() {
        match detect_d(pair, &out, &cnt, r, &mut nodes)? {
            Search::Found(d) => return Ok(Search::Found(Configuration::D(d))),
            Search::BudgetExceeded => exceeded = true,
            Search::Exhausted => {}
        }
    }
    Ok(if exceeded {
        Search::BudgetExceeded
    } else {
        Search::Exhausted
    })
}

fn detect_d(pair: &CliquePair, out: &[usize], cnt: &[i64], r: i64, nodes: &mut Nodes) -> Result<Search<ConfigD>> {
    let g = &pair.graph;
    let k = pair.k() as i64;
    let n = g.order();
    let (bx, by, bz) = (2 * (k - r) - 1, 2 * (k - r), 2 * (k - r));
    if !out.iter().any(|&v| cnt[v] >= bx) {
        return Ok(Search::Exhausted);
    }
    let mut base = vec![false; n];
    for &v in out {
        base[v] = true;
    }
    let mut found: Option<ConfigD> = None;
    let mut failure: Option<Error> = None;
    for &x in out {
        for &y in out {
            for &z in out {
                if x == y || z == x || z == y || !g.has_edge(x, z) || !g.has_edge(y, z) {
                    continue;
                }
                let mut allowed_x = base.clone();
                allowed_x[y] = false;
                allowed_x[z] = false;
                let res = each_path_from(g, x, &allowed_x, nodes, &mut |px, nodes| {
                    let xp = *px.last().unwrap();
                    if cnt[xp] < bx {
                        return ControlFlow::Continue(());
                    }
                    let mut allowed_y = allowed_x.clone();
                    for &v in px {
                        allowed_y[v] = false;
                    }
                    allowed_y[y] = true;
                    each_path_from(g, y, &allowed_y, nodes, &mut |py, nodes| {
                        let yp = *py.last().unwrap();
                        if cnt[yp] < by {
                            return ControlFlow::Continue(());
                        }
                        let mut allowed_z = allowed_y.clone();
                        for &v in py {
                            allowed_z[v] = false;
                        }
                        allowed_z[z] = true;
                        each_path_from(g, z, &allowed_z, nodes, &mut |pz, nodes| {
                            let zp = *pz.last().unwrap();
                            if cnt[zp] < bz {
                                return ControlFlow::Continue(());
                            }
                            let mut inner = allowed_z.clone();
                            for &v in pz {
                                inner[v] = false;
                            }
                            inner[x] = true;
                            inner[y] = true;
                            let verts: Vec<usize> = (0..n).filter(|&v| inner[v]).collect();
                            let remaining = nodes.budget.max_nodes.saturating_sub(nodes.used);
                            let sub = SearchBudget {
                                max_nodes: remaining.max(1),
                                deadline: nodes.budget.deadline,
                            };
                            match distinct_weight_paths_in(g, x, y, r as usize, &verts, 2, sub) {
                                Err(e) => {
                                    failure = Some(e);
                                    ControlFlow::Break(true)
                                }
                                Ok(s) => match s.outcome {
                                    Search::Found(f) => {
                                        found = Some(ConfigD {
                                            rank: r as usize,
                                            x,
                                            y,
                                            z,
                                            x_prime: xp,
                                            y_prime: yp,
                                            z_prime: zp,
                                            path_x: px.to_vec(),
                                            path_y: py.to_vec(),
                                            path_z: pz.to_vec(),
                                            paths: f.paths.into_iter().map(|p| p.vertices).collect(),
                                        });
                                        ControlFlow::Break(true)
                                    }
                                    Search::BudgetExceeded => ControlFlow::Break(false),
                                    Search::Exhausted => ControlFlow::Continue(()),
                                },
                            }
                        })
                    })
                });
                if let Some(e) = failure.take() {
                    return Err(e);
                }
                if let Some(d) = found.take() {
                    return Ok(Search::Found(d));
                }
                if res == ControlFlow::Break(false) {
                    return Ok(Search::BudgetExceeded);
                }
            }
        }
    }
    Ok(Search::Exhausted)
}

/// `f(v)` = lowest vertex of `K` not adjacent to `v`, for every outside
/// neighbour `v` of `u`.
pub fn lowest_non_neighbor_map(pair: &CliquePair, u: usize) -> Result<BTreeMap<usize, usize>> {
    let g = &pair.graph;
    let mut f = BTreeMap::new();
    for v in g.neighbors(u).filter(|&v| !pair.in_clique[v]) {
        match pair.clique.iter().find(|&&c| !g.has_edge(v, c)) {
            Some(&c) => {
                f.insert(v, c);
            }
            None => return domain(format!("vertex {v} is adjacent to all of K")),
        }
    }
    Ok(f)
}

/// Delete `u ∈ K` and join every outside neighbour `v` of `u` to `f(v)` by a
/// weight-0 edge. Returns `(G', K - u)` and, for each vertex of `G'`, its
/// index in `G`.
pub fn clique_peel_step(pair: &CliquePair, u: usize, f: &BTreeMap<usize, usize>) -> Result<(CliquePair, Vec<usize>)> {
    let g = &pair.graph;
    if u >= g.order() || !pair.in_clique[u] {
        return domain(format!("{u} is not a vertex of K"));
    }
    let (mut h, old) = g.remove_vertex(u);
    let mut new_index = vec![usize::MAX; g.order()];
    for (i, &o) in old.iter().enumerate() {
        new_index[o] = i;
    }
    let zero = g.group().zero();
    for v in g.neighbors(u).filter(|&v| !pair.in_clique[v]) {
        let Some(&fv) = f.get(&v) else {
            return domain(format!("f is undefined at {v}"));
        };
        if fv >= g.order() || !pair.in_clique[fv] || fv == u {
            return domain(format!("f({v}) = {fv} is not a vertex of K - u"));
        }
        if g.has_edge(v, fv) {
            return domain(format!("f({v}) = {fv} is adjacent to {v}"));
        }
        h.set_edge(new_index[v], new_index[fv], zero)?;
    }
    let clique: Vec<usize> = pair.clique.iter().filter(|&&c| c != u).map(|&c| new_index[c]).collect();
    Ok((CliquePair::new(h, &clique)?, old))
}

/// Steps of the reduction recursion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ReductionStep {
    BaseA,
    Case1_1,
    Case1_2,
    Case1_3,
    Case1_4,
    Case2,
    OracleFallback,
}

impl fmt::Display for ReductionStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Serialize for ReductionStep {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Reduction {
    /// A zero cycle in `G - V(K)`.
    ZeroCycle {
        cycle: CycleWitness,
    },
    Configuration {
        configuration: Configuration,
    },
}

#[derive(Clone, Debug)]
pub struct ReductionOutcome {
    pub result: Reduction,
    pub trace: Vec<ReductionStep>,
}

impl ReductionOutcome {
    pub fn fallbacks(&self) -> usize {
        self.trace
            .iter()
            .filter(|s| **s == ReductionStep::OracleFallback)
            .count()
    }
}

#[derive(Clone, Debug)]
pub struct UndirectedOutcome {
    pub cycle: CycleWitness,
    pub trace: Vec<ReductionStep>,
}

impl UndirectedOutcome {
    pub fn fallbacks(&self) -> usize {
        self.trace
            .iter()
            .filter(|s| **s == ReductionStep::OracleFallback)
            .count()
    }
}

pub fn lemma_reduction_solve(pair: &CliquePair) -> Result<ReductionOutcome> {
    lemma_reduction_solve_with(pair, SearchBudget::unlimited())
}

/// Either a zero cycle in `G - V(K)` or a configuration of `(G, K)`. Every
/// vertex outside `K` must have degree at least `2|Γ| - 1`.
pub fn lemma_reduction_solve_with(pair: &CliquePair, budget: SearchBudget) -> Result<ReductionOutcome> {
    let k = pair.k();
    for v in pair.outside() {
        if pair.graph.degree(v) < 2 * k - 1 {
            return precondition(format!(
                "vertex {v} has degree {} < 2|Γ| - 1 = {}",
                pair.graph.degree(v),
                2 * k - 1
            ));
        }
    }
    let mut r = Reducer {
        budget,
        trace: Vec::new(),
    };
    let result = r.reduce(pair)?;
    Ok(ReductionOutcome { result, trace: r.trace })
}

pub fn theorem_undirected_solve(g: &WeightedGraph) -> Result<UndirectedOutcome> {
    theorem_undirected_solve_with(g, SearchBudget::unlimited())
}

/// Zero cycle in a graph of minimum degree at least `2|Γ| - 1`.
pub fn theorem_undirected_solve_with(g: &WeightedGraph, budget: SearchBudget) -> Result<UndirectedOutcome> {
    let k = g.group().order() as usize;
    if g.order() == 0 || g.min_degree() < 2 * k - 1 {
        return precondition(format!(
            "minimum degree {} below 2|Γ| - 1 = {}",
            g.min_degree(),
            2 * k - 1
        ));
    }
    let pair = CliquePair::new(g.clone(), &[])?;
    let out = lemma_reduction_solve_with(&pair, budget)?;
    match out.result {
        Reduction::ZeroCycle { cycle } => Ok(UndirectedOutcome {
            cycle,
            trace: out.trace,
        }),
        Reduction::Configuration { configuration } => Err(Error::LemmaViolation(format!(
            "configuration {} reported with empty K",
            configuration.kind()
        ))),
    }
}

fn cycle_of(g: &WeightedGraph, vertices: Vec<usize>) -> CycleWitness {
    let weight = g.walk_weight(&vertices, true).expect("edges present");
    CycleWitness {
        vertices,
        directed: false,
        weight,
    }
}

fn rev(p: &[usize]) -> Vec<usize> {
    p.iter().rev().copied().collect()
}

fn cat(parts: &[&[usize]]) -> Vec<usize> {
    parts.concat()
}

/// First `r` paths of distinct weight, if there are that many.
fn distinct(g: &WeightedGraph, paths: Vec<Vec<usize>>, r: usize) -> Option<Vec<Vec<usize>>> {
    let mut seen = Vec::new();
    let mut out = Vec::new();
    for p in paths {
        let w = weight(g, &p);
        if !seen.contains(&w) {
            seen.push(w);
            out.push(p);
            if out.len() == r {
                return Some(out);
            }
        }
    }
    None
}

struct Reducer {
    budget: SearchBudget,
    trace: Vec<ReductionStep>,
}

impl Reducer {
    fn reduce(&mut self, pair: &CliquePair) -> Result<Reduction> {
        let g = &pair.graph;
        let out = pair.outside();
        let attempt = if out.len() == 1 {
            self.trace.push(ReductionStep::BaseA);
            Some(Reduction::Configuration {
                configuration: Configuration::A { x: out[0] },
            })
        } else if let Some(&v) = out.iter().find(|&&v| pair.clique.iter().all(|&c| g.has_edge(v, c))) {
            let mut bigger = pair.clique.clone();
            bigger.push(v);
            let sub = self.reduce(&pair.with_clique(&bigger))?;
            match sub {
                Reduction::ZeroCycle { cycle } => Some(Reduction::ZeroCycle { cycle }),
                Reduction::Configuration { configuration } => self.lift(pair, v, configuration),
            }
        } else {
            self.trace.push(ReductionStep::Case2);
            let u = pair.clique[0];
            let f = lowest_non_neighbor_map(pair, u)?;
            let (peeled, old) = clique_peel_step(pair, u, &f)?;
            Some(match self.reduce(&peeled)? {
                Reduction::ZeroCycle { cycle } => Reduction::ZeroCycle {
                    cycle: cycle_of(g, cycle.vertices.iter().map(|&i| old[i]).collect()),
                },
                Reduction::Configuration { configuration } => Reduction::Configuration {
                    configuration: configuration.map_vertices(|i| old[i]),
                },
            })
        };

        let diagnostic = match &attempt {
            Some(Reduction::ZeroCycle { cycle }) => {
                check_zero_cycle(g, cycle, 3, Some(&out)).err().map(|e| e.to_string())
            }
            Some(Reduction::Configuration { configuration }) => check_configuration(pair, configuration).err(),
            None => Some("case analysis did not close".into()),
        };
        match (attempt, diagnostic) {
            (Some(res), None) => Ok(res),
            (_, Some(msg)) => {
                log::warn!("reduction step failed ({msg}); using the oracle");
                self.oracle(pair)
            }
            (None, None) => unreachable!(),
        }
    }

    fn oracle(&mut self, pair: &CliquePair) -> Result<Reduction> {
        self.trace.push(ReductionStep::OracleFallback);
        match find_zero_cycle_in(&pair.graph, &pair.outside(), 3, self.budget)? {
            Search::Found(cycle) => return Ok(Reduction::ZeroCycle { cycle }),
            Search::BudgetExceeded => return Err(Error::BudgetExceeded("oracle cycle search".into())),
            Search::Exhausted => {}
        }
        match detect_configuration(pair, self.budget)? {
            Search::Found(configuration) => Ok(Reduction::Configuration { configuration }),
            Search::BudgetExceeded => Err(Error::BudgetExceeded("configuration search".into())),
            Search::Exhausted => Err(Error::LemmaViolation(
                "neither a zero cycle outside K nor a configuration".into(),
            )),
        }
    }

    /// Turn a configuration of `(G, K + v)` into a result for `(G, K)`.
    fn lift(&mut self, pair: &CliquePair, v: usize, cfg: Configuration) -> Option<Reduction> {
        let g = &pair.graph;
        let adj = |a: usize| g.has_edge(v, a);
        let conf = |c: Configuration| Some(Reduction::Configuration { configuration: c });
        match cfg {
            Configuration::A { x } => {
                self.trace.push(ReductionStep::Case1_1);
                if adj(x) {
                    conf(Configuration::B {
                        x,
                        y: v,
                        path: vec![x, v],
                    })
                } else {
                    conf(Configuration::A { x })
                }
            }
            Configuration::B { x, y, path } => {
                self.trace.push(ReductionStep::Case1_2);
                match (adj(x), adj(y)) {
                    (false, false) => conf(Configuration::B { x, y, path }),
                    (true, false) => conf(Configuration::B {
                        x: v,
                        y,
                        path: cat(&[&[v], &path]),
                    }),
                    (false, true) => conf(Configuration::B {
                        x,
                        y: v,
                        path: cat(&[&path, &[v]]),
                    }),
                    (true, true) => {
                        let pairs = [
                            (x, y, path.clone(), vec![x, v, y]),
                            (v, y, cat(&[&[v], &path]), vec![v, y]),
                            (x, v, cat(&[&path, &[v]]), vec![x, v]),
                        ];
                        for (a, b, p1, p2) in pairs {
                            if weight(g, &p1) != weight(g, &p2) {
                                return conf(Configuration::C {
                                    rank: 2,
                                    x: a,
                                    y: b,
                                    paths: vec![p1, p2],
                                });
                            }
                        }
                        Some(Reduction::ZeroCycle {
                            cycle: cycle_of(g, cat(&[&[v], &path])),
                        })
                    }
                }
            }
            Configuration::C { rank, x, y, paths } => {
                self.trace.push(ReductionStep::Case1_3);
                match (adj(x), adj(y)) {
                    (false, false) => conf(Configuration::C { rank, x, y, paths }),
                    (true, false) => conf(Configuration::C {
                        rank,
                        x: v,
                        y,
                        paths: paths.iter().map(|p| cat(&[&[v], p])).collect(),
                    }),
                    (false, true) => conf(Configuration::C {
                        rank,
                        x,
                        y: v,
                        paths: paths.iter().map(|p| cat(&[p, &[v]])).collect(),
                    }),
                    (true, true) if rank == pair.k() => paths
                        .iter()
                        .map(|p| cycle_of(g, cat(&[&[v], p])))
                        .find(|c| c.weight == g.group().zero())
                        .map(|cycle| Reduction::ZeroCycle { cycle }),
                    (true, true) => conf(Configuration::D(ConfigD {
                        rank,
                        x,
                        y,
                        z: v,
                        x_prime: x,
                        y_prime: y,
                        z_prime: v,
                        path_x: vec![x],
                        path_y: vec![y],
                        path_z: vec![v],
                        paths,
                    })),
                }
            }
            Configuration::D(mut d) => {
                self.trace.push(ReductionStep::Case1_4);
                match (adj(d.x_prime), adj(d.y_prime), adj(d.z_prime)) {
                    (false, false, false) => conf(Configuration::D(d)),
                    (true, false, false) => {
                        d.path_x.push(v);
                        d.x_prime = v;
                        conf(Configuration::D(d))
                    }
                    (false, true, false) => {
                        d.path_y.push(v);
                        d.y_prime = v;
                        conf(Configuration::D(d))
                    }
                    (false, false, true) => {
                        d.path_z.push(v);
                        d.z_prime = v;
                        conf(Configuration::D(d))
                    }
                    (true, true, false) => {
                        // x' becomes v, then x and y trade places.
                        d.path_x.push(v);
                        d.x_prime = v;
                        conf(Configuration::D(d.swapped()))
                    }
                    (true, _, true) => self.families(g, v, &d),
                    (false, true, true) => self.families(g, v, &d.swapped()),
                }
            }
        }
    }

    /// The `Q`, `S`, `T` families when `v` sees `x'` and `z'`.
    fn families(&self, g: &WeightedGraph, v: usize, d: &ConfigD) -> Option<Reduction> {
        let r = d.rank;
        let px_rev = rev(&d.path_x);
        let pz_rev = rev(&d.path_z);
        let py_tail = &d.path_y[1..];
        let mut q = Vec::with_capacity(2 * r);
        let mut s = Vec::with_capacity(2 * r);
        let mut t = Vec::with_capacity(r + 1);
        for p in &d.paths {
            let qi = cat(&[&[v], &px_rev, &p[1..], py_tail]);
            let qi2 = cat(&[&[v], &pz_rev, p, py_tail]);
            s.push(cat(&[&[d.z_prime], &qi]));
            s.push(qi2[1..].to_vec());
            t.push(cat(&[&[v], &px_rev, &p[1..], &d.path_z]));
            q.push(qi);
            q.push(qi2);
        }
        let c = |x, y, paths| {
            Some(Reduction::Configuration {
                configuration: Configuration::C {
                    rank: r + 1,
                    x,
                    y,
                    paths,
                },
            })
        };
        if let Some(paths) = distinct(g, q, r + 1) {
            return c(v, d.y_prime, paths);
        }
        if let Some(paths) = distinct(g, s, r + 1) {
            return c(d.z_prime, d.y_prime, paths);
        }
        let closing = t
            .iter()
            .map(|p| cycle_of(g, p.clone()))
            .find(|cy| cy.weight == g.group().zero());
        if let Some(cycle) = closing {
            return Some(Reduction::ZeroCycle { cycle });
        }
        t.push(vec![v, d.z_prime]);
        distinct(g, t, r + 1).and_then(|paths| c(v, d.z_prime, paths))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;

    fn complete(k: u32, n: usize) -> WeightedGraph {
        let z = GroupSpec::cyclic(k).unwrap();
        WeightedGraph::complete_with(z.clone(), n, |_, _| z.zero())
    }

    #[test]
    fn configuration_a_boundary() {
        // k = 2: clique {0, 1, 2}, vertex 3 adjacent to all three.
        let pair = CliquePair::new(complete(2, 4), &[0, 1, 2]).unwrap();
        assert!(verify_configuration(&pair, &Configuration::A { x: 3 }));
        assert!(!verify_configuration(&pair, &Configuration::A { x: 0 }));
    }

    #[test]
    fn b_path_through_clique_rejected() {
        let pair = CliquePair::new(complete(2, 6), &[0, 1]).unwrap();
        let bad = Configuration::B {
            x: 4,
            y: 5,
            path: vec![4, 0, 5],
        };
        assert!(!verify_configuration(&pair, &bad));
    }

    #[test]
    fn empty_clique_has_no_configuration() {
        let pair = CliquePair::new(complete(3, 6), &[]).unwrap();
        assert_eq!(
            detect_configuration(&pair, SearchBudget::unlimited()).unwrap(),
            Search::Exhausted
        );
    }

    #[test]
    fn single_outside_vertex_is_a() {
        let pair = CliquePair::new(complete(2, 4), &[0, 1, 2]).unwrap();
        let out = lemma_reduction_solve(&pair).unwrap();
        assert_eq!(out.trace, vec![ReductionStep::BaseA]);
        assert_eq!(
            out.result,
            Reduction::Configuration {
                configuration: Configuration::A { x: 3 }
            }
        );
    }

    #[test]
    fn peel_keeps_outside_graph() {
        // Clique {0, 1}; vertex 2 sees 0 only, vertex 3 sees 1 only.
        let z = GroupSpec::cyclic(2).unwrap();
        let mut g = WeightedGraph::empty(z.clone(), 5);
        for (a, b) in [(0, 1), (0, 2), (1, 3), (2, 3), (3, 4), (2, 4)] {
            g.set_edge(a, b, z.elem(1)).unwrap();
        }
        let pair = CliquePair::new(g, &[0, 1]).unwrap();
        let f = lowest_non_neighbor_map(&pair, 0).unwrap();
        assert_eq!(f.get(&2), Some(&1));
        let (peeled, old) = clique_peel_step(&pair, 0, &f).unwrap();
        assert_eq!(old, vec![1, 2, 3, 4]);
        assert_eq!(peeled.clique(), &[0]);
        for v in peeled.outside() {
            assert_eq!(peeled.clique_neighbors(v), pair.clique_neighbors(old[v]));
        }
        let mut bad = f.clone();
        bad.insert(2, 0);
        assert!(clique_peel_step(&pair, 0, &bad).is_err());
    }

    #[test]
    fn k4_zero_weights() {
        let out = theorem_undirected_solve(&complete(2, 4)).unwrap();
        assert_eq!(out.cycle.vertices.len(), 3);
        assert_eq!(out.fallbacks(), 0);
    }

    #[test]
    fn low_degree_rejected() {
        assert!(matches!(
            theorem_undirected_solve(&complete(3, 5)),
            Err(Error::Precondition(_))
        ));
    }
}
