//! Constructive form of the path-family lemma and of the main directed
//! theorem.
//!
//! `lemma_one_solve(G, u, v, r)` on a complete `Z_k`-weighted digraph of order
//! at least `r + 2 Omega(k)` returns either a zero cycle avoiding `u` and `v`,
//! or `r` simple `v`-`u` paths of order at least 3 with distinct weights. The
//! recursion mirrors the existence proof: it descends in `(k, r, |V|)` and
//! every step validates its witness. A step whose case assumption does not
//! materialize falls back to the brute-force oracle and records
//! [`Step::OracleFallback`].

use std::fmt;

use serde::Serialize;

use crate::error::{domain, precondition, Error, Result};
use crate::graph::{
    derived_weighting, quotient_weighting, CycleWitness, PathFamily, PathWitness, WeightedAdjacency, WeightedDigraph,
};
use crate::group::{classify_near_ap, omega, shift_set, GroupElem, GroupSpec, NearApClass, ResidueSet};
use crate::oracle::{
    distinct_weight_paths_in, find_heavy_triple, find_zero_cycle_in, find_zero_cycle_with_stats, Search, SearchBudget,
};
use crate::witness::{check_family, check_zero_cycle};

use super::dominating::{dominating_order_hampath, zero_arc_order, DominatingStructure};

const MAX_DEPTH: usize = 10_000;

/// One recursion step, in the order taken.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Step {
    /// `r = 1`: the path `v, x, u`.
    Base1,
    /// `r = 2`: the `x, y` case split.
    Base2,
    /// Recurse for `r - 1` paths to an inner vertex and append its arc to `u`.
    Append,
    /// The exhaustive weight set already holds `r` weights.
    DirectFamily,
    /// A zero 2-cycle read off directly.
    TwoCycle,
    /// A derived weight outside the shift set forced a sub-recursion.
    ShiftRecursion,
    /// Divisor case: descend to `Z_{k/d}`.
    Quotient(u32),
    /// Unit case with a heavy triple.
    HeavyTriple,
    /// Unit case: the zero arcs of the derived weighting contain a cycle.
    ZeroArcCycle,
    /// Unit case with a single nonzero sign: topological order path.
    AcyclicOrder,
    /// Unit case with both signs: dominating-arc Hamiltonian path.
    DominatingEdge,
    /// Unit case without the dominating structure: a zero cycle of length at most 4.
    ShortZeroCycle,
    OracleFallback,
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Quotient(d) => write!(f, "Quotient({d})"),
            other => write!(f, "{other:?}"),
        }
    }
}

impl Serialize for Step {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LemmaResult {
    /// Zero cycle avoiding `u` and `v`.
    ZeroCycle(CycleWitness),
    /// `r` `v`-`u` paths with pairwise-distinct weights.
    Family(PathFamily),
}

impl LemmaResult {
    pub fn tag(&self) -> &'static str {
        match self {
            LemmaResult::ZeroCycle(_) => "zero_cycle",
            LemmaResult::Family(_) => "family",
        }
    }
}

#[derive(Clone, Debug)]
pub struct LemmaOneOutcome {
    pub result: LemmaResult,
    pub trace: Vec<Step>,
}

impl LemmaOneOutcome {
    pub fn fallbacks(&self) -> usize {
        self.trace.iter().filter(|s| **s == Step::OracleFallback).count()
    }
}

#[derive(Clone, Debug)]
pub struct TheoremOutcome {
    pub cycle: CycleWitness,
    pub trace: Vec<Step>,
}

impl TheoremOutcome {
    pub fn fallbacks(&self) -> usize {
        self.trace.iter().filter(|s| **s == Step::OracleFallback).count()
    }
}

pub fn lemma_one_solve(g: &WeightedDigraph, u: usize, v: usize, r: usize) -> Result<LemmaOneOutcome> {
    let verts: Vec<usize> = (0..g.order()).collect();
    lemma_one_solve_with(g, &verts, u, v, r, SearchBudget::unlimited())
}

/// Lemma solver on the complete subgraph induced by `verts`. `budget` bounds
/// every exhaustive enumeration the solver performs.
pub fn lemma_one_solve_with(
    g: &WeightedDigraph,
    verts: &[usize],
    u: usize,
    v: usize,
    r: usize,
    budget: SearchBudget,
) -> Result<LemmaOneOutcome> {
    let mut s = Solver::new(budget);
    let mut verts = verts.to_vec();
    verts.sort_unstable();
    verts.dedup();
    let result = s.lemma(g, &verts, u, v, r)?;
    Ok(LemmaOneOutcome { result, trace: s.trace })
}

pub fn theorem_main_solve(g: &WeightedDigraph) -> Result<TheoremOutcome> {
    let verts: Vec<usize> = (0..g.order()).collect();
    theorem_main_solve_with(g, &verts, SearchBudget::unlimited())
}

pub fn theorem_main_solve_with(g: &WeightedDigraph, verts: &[usize], budget: SearchBudget) -> Result<TheoremOutcome> {
    let mut s = Solver::new(budget);
    let mut verts = verts.to_vec();
    verts.sort_unstable();
    verts.dedup();
    let cycle = s.theorem(g, &verts)?;
    Ok(TheoremOutcome { cycle, trace: s.trace })
}

fn without(verts: &[usize], drop: &[usize]) -> Vec<usize> {
    verts.iter().copied().filter(|v| !drop.contains(v)).collect()
}

fn arc(g: &WeightedDigraph, a: usize, b: usize) -> GroupElem {
    g.edge(a, b).expect("completeness checked on entry")
}

fn path_in(g: &WeightedDigraph, vertices: Vec<usize>) -> PathWitness {
    let weight = g.walk_weight(&vertices, false).expect("arcs present");
    PathWitness { vertices, weight }
}

fn cycle_in(g: &WeightedDigraph, vertices: Vec<usize>) -> CycleWitness {
    let weight = g.walk_weight(&vertices, true).expect("arcs present");
    CycleWitness {
        vertices,
        directed: true,
        weight,
    }
}

fn family_in(g: &WeightedDigraph, source: usize, target: usize, paths: Vec<Vec<usize>>) -> PathFamily {
    PathFamily {
        source,
        target,
        paths: paths.into_iter().map(|p| path_in(g, p)).collect(),
    }
}

/// First `r` paths of pairwise-distinct weight, if there are that many.
fn pick_distinct(paths: Vec<PathWitness>, r: usize) -> Option<Vec<PathWitness>> {
    let mut out: Vec<PathWitness> = Vec::with_capacity(r);
    for p in paths {
        if out.len() == r {
            break;
        }
        if out.iter().all(|q| q.weight != p.weight) {
            out.push(p);
        }
    }
    (out.len() == r).then_some(out)
}

struct Solver {
    budget: SearchBudget,
    trace: Vec<Step>,
    depth: usize,
}

impl Solver {
    fn new(budget: SearchBudget) -> Self {
        Solver {
            budget,
            trace: Vec::new(),
            depth: 0,
        }
    }

    fn check_instance(&self, g: &WeightedDigraph, verts: &[usize]) -> Result<u32> {
        let Some(k) = g.group().cyclic_modulus() else {
            return domain("the directed solvers need a cyclic group Z_k");
        };
        let zero = g.group().zero();
        for &a in verts {
            if a >= g.order() {
                return domain(format!("vertex {a} out of range"));
            }
            if g.vertex_weight(a) != zero {
                return precondition("vertex weights must be zero (normalize first)");
            }
            for &b in verts {
                if a != b && !g.has_edge(a, b) {
                    return precondition(format!("graph is not complete: missing arc {a}->{b}"));
                }
            }
        }
        Ok(k)
    }

    fn theorem(&mut self, g: &WeightedDigraph, verts: &[usize]) -> Result<CycleWitness> {
        let k = self.check_instance(g, verts)?;
        let need = k as usize + 2 * omega(k as i64)? as usize;
        if verts.len() < need {
            return precondition(format!("order {} below k + 2 Omega(k) = {need}", verts.len()));
        }
        let grp = g.group().clone();
        let (x, mut y, mut z) = (verts[0], verts[1], verts[2]);
        if arc(g, x, y) == grp.add(arc(g, x, z), arc(g, z, y)) {
            if arc(g, x, z) == grp.add(arc(g, x, y), arc(g, y, z)) {
                self.trace.push(Step::TwoCycle);
                let c = cycle_in(g, vec![y, z]);
                return match check_zero_cycle(g, &c, 2, Some(verts)) {
                    Ok(()) => Ok(c),
                    Err(e) => Err(Error::LemmaViolation(format!("two-cycle closure failed: {e}"))),
                };
            }
            std::mem::swap(&mut y, &mut z);
        }
        // w(xy) != w(xz) + w(zy): look for k - 1 y-x paths in G - z.
        let rest = without(verts, &[z]);
        let res = self.lemma(g, &rest, x, y, k as usize - 1)?;
        let cycle = match res {
            LemmaResult::ZeroCycle(c) => c,
            LemmaResult::Family(f) => {
                let t1 = grp.neg(arc(g, x, y));
                let t2 = grp.neg(grp.add(arc(g, x, z), arc(g, z, y)));
                if let Some(p) = f.paths.iter().find(|p| p.weight == t1) {
                    cycle_in(g, p.vertices.clone())
                } else if let Some(p) = f.paths.iter().find(|p| p.weight == t2) {
                    let mut seq = p.vertices.clone();
                    seq.push(z);
                    cycle_in(g, seq)
                } else {
                    return Err(Error::LemmaViolation(
                        "k - 1 distinct path weights missed both closing targets".into(),
                    ));
                }
            }
        };
        check_zero_cycle(g, &cycle, 2, Some(verts))
            .map_err(|e| Error::LemmaViolation(format!("theorem closure produced an invalid cycle: {e}")))?;
        Ok(cycle)
    }

    fn lemma(&mut self, g: &WeightedDigraph, verts: &[usize], u: usize, v: usize, r: usize) -> Result<LemmaResult> {
        let k = self.check_instance(g, verts)?;
        if u == v || !verts.contains(&u) || !verts.contains(&v) {
            return domain("u and v must be distinct vertices of the instance");
        }
        if r < 1 || r >= k as usize {
            return precondition(format!("need 1 <= r < k, got r = {r}, k = {k}"));
        }
        let need = r + 2 * omega(k as i64)? as usize;
        if verts.len() < need {
            return precondition(format!("order {} below r + 2 Omega(k) = {need}", verts.len()));
        }
        if self.depth >= MAX_DEPTH {
            return Err(Error::LemmaViolation("recursion depth bound exceeded".into()));
        }
        self.depth += 1;
        let attempt = self.lemma_steps(g, verts, u, v, r, k);
        self.depth -= 1;
        let inner = without(verts, &[u, v]);
        let attempt = match attempt {
            Err(Error::Precondition(msg) | Error::Domain(msg)) => {
                log::warn!("lemma sub-step rejected its input ({msg})");
                None
            }
            other => other?,
        };
        if let Some(res) = attempt {
            let valid = match &res {
                LemmaResult::ZeroCycle(c) => check_zero_cycle(g, c, 2, Some(&inner)),
                LemmaResult::Family(f) if f.source == v && f.target == u => check_family(g, f, r, 3, Some(verts)),
                LemmaResult::Family(_) => Err(crate::witness::WitnessError::Orientation),
            };
            match valid {
                Ok(()) => return Ok(res),
                Err(e) => log::warn!("lemma step produced an invalid witness ({e}); using the oracle"),
            }
        } else {
            log::warn!(
                "lemma case analysis did not close (k={k}, r={r}, n={}); using the oracle",
                verts.len()
            );
        }
        self.oracle(g, verts, u, v, r)
    }

    fn oracle(&mut self, g: &WeightedDigraph, verts: &[usize], u: usize, v: usize, r: usize) -> Result<LemmaResult> {
        self.trace.push(Step::OracleFallback);
        let inner = without(verts, &[u, v]);
        match find_zero_cycle_in(g, &inner, 2, self.budget)? {
            Search::Found(c) => return Ok(LemmaResult::ZeroCycle(c)),
            Search::BudgetExceeded => return Err(Error::BudgetExceeded("oracle cycle search".into())),
            Search::Exhausted => {}
        }
        match distinct_weight_paths_in(g, v, u, r, verts, 3, self.budget)?.outcome {
            Search::Found(f) => Ok(LemmaResult::Family(f)),
            Search::BudgetExceeded => Err(Error::BudgetExceeded("oracle path search".into())),
            Search::Exhausted => Err(Error::LemmaViolation(format!(
                "no zero cycle and fewer than {r} path weights (n = {})",
                verts.len()
            ))),
        }
    }

    /// The proof's case analysis. `Ok(None)` means a case assumption failed
    /// and the caller should consult the oracle.
    fn lemma_steps(
        &mut self,
        g: &WeightedDigraph,
        verts: &[usize],
        u: usize,
        v: usize,
        r: usize,
        k: u32,
    ) -> Result<Option<LemmaResult>> {
        let grp = g.group().clone();
        let inner = without(verts, &[u, v]);

        if r == 1 {
            self.trace.push(Step::Base1);
            return Ok(Some(LemmaResult::Family(family_in(
                g,
                v,
                u,
                vec![vec![v, inner[0], u]],
            ))));
        }
        if r == 2 {
            self.trace.push(Step::Base2);
            let (x, y) = (inner[0], inner[1]);
            for (a, b) in [(x, y), (y, x)] {
                if arc(g, a, u) != grp.add(arc(g, a, b), arc(g, b, u)) {
                    return Ok(Some(LemmaResult::Family(family_in(
                        g,
                        v,
                        u,
                        vec![vec![v, a, u], vec![v, a, b, u]],
                    ))));
                }
            }
            return Ok(Some(LemmaResult::ZeroCycle(cycle_in(g, vec![x, y]))));
        }

        // r >= 3: r - 1 paths from v to x in G - u, extended by x -> u.
        let x0 = inner[0];
        self.trace.push(Step::Append);
        if let LemmaResult::ZeroCycle(c) = self.lemma(g, &without(verts, &[u]), x0, v, r - 1)? {
            return Ok(Some(LemmaResult::ZeroCycle(c)));
        }

        let search = distinct_weight_paths_in(g, v, u, r, verts, 3, self.budget)?;
        match search.outcome {
            Search::Found(f) => {
                self.trace.push(Step::DirectFamily);
                return Ok(Some(LemmaResult::Family(f)));
            }
            Search::BudgetExceeded => return Err(Error::BudgetExceeded("achieved weight set".into())),
            Search::Exhausted => {}
        }
        if search.achieved.len() != r - 1 {
            return Ok(None);
        }
        let weights = ResidueSet::new(k, search.achieved.iter().map(|p| p.weight.index() as i64))?;
        let shifts = shift_set(&weights);

        // Every derived weight must be a shift of the weight set unless a
        // smaller instance yields a zero cycle.
        for &x in &inner {
            for &y in &inner {
                if x == y {
                    continue;
                }
                let e1 = grp.sub(grp.add(arc(g, x, y), arc(g, y, u)), arc(g, x, u));
                if !shifts.contains(e1.index()) {
                    self.trace.push(Step::ShiftRecursion);
                    return Ok(match self.lemma(g, &without(verts, &[u, y]), x, v, r - 2)? {
                        LemmaResult::ZeroCycle(c) => Some(LemmaResult::ZeroCycle(c)),
                        LemmaResult::Family(_) => None,
                    });
                }
                let e2 = grp.sub(grp.add(arc(g, v, y), arc(g, y, x)), arc(g, v, x));
                if !shifts.contains(e2.index()) {
                    self.trace.push(Step::ShiftRecursion);
                    return Ok(match self.lemma(g, &without(verts, &[v, y]), u, x, r - 2)? {
                        LemmaResult::ZeroCycle(c) => Some(LemmaResult::ZeroCycle(c)),
                        LemmaResult::Family(_) => None,
                    });
                }
            }
        }

        match classify_near_ap(&weights)?.class {
            NearApClass::NotNearAp => {
                for &x in &inner {
                    for &y in &inner {
                        if x < y && grp.add(arc(g, x, y), arc(g, y, x)) == grp.zero() {
                            self.trace.push(Step::TwoCycle);
                            return Ok(Some(LemmaResult::ZeroCycle(cycle_in(g, vec![x, y]))));
                        }
                    }
                }
                Ok(None)
            }
            NearApClass::DivisorCase { d } => self.divisor_case(g, verts, &inner, u, v, r, k, d),
            NearApClass::UnitCase { a } => self.unit_case(g, verts, &inner, u, v, r, grp.elem(a as i64)),
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn divisor_case(
        &mut self,
        g: &WeightedDigraph,
        verts: &[usize],
        inner: &[usize],
        u: usize,
        v: usize,
        r: usize,
        k: u32,
        d: u32,
    ) -> Result<Option<LemmaResult>> {
        self.trace.push(Step::Quotient(d));
        let m = k / d;
        let outside: Vec<usize> = (0..g.order()).filter(|x| *x != u && !inner.contains(x)).collect();
        if r >= m as usize {
            // Zero cycle of the quotient on G - {u, v} lifts to G.
            let q = match quotient_weighting(g, u, d, &outside) {
                Ok(q) => q,
                Err(Error::Precondition(_)) => return Ok(None),
                Err(e) => return Err(e),
            };
            let c = self.theorem(&q, inner)?;
            return Ok(Some(LemmaResult::ZeroCycle(cycle_in(g, c.vertices))));
        }

        // r < k/d: re-weight the boundary so that w(P) = d * w'(P) + a0 for
        // every v-u path P of order at least 3, then recurse over Z_{k/d}.
        let grp = g.group();
        let q = GroupSpec::cyclic(m)?;
        let a0 = grp.add(arc(g, v, inner[0]), arc(g, inner[0], u)).index() % d;
        let mut h = WeightedDigraph::complete_with(q.clone(), g.order(), |_, _| q.zero());
        for &x in inner {
            let s = grp.add(arc(g, v, x), arc(g, x, u)).index();
            let s = (s + k - a0) % k;
            if !s.is_multiple_of(d) {
                return Ok(None);
            }
            h.set_edge(v, x, q.elem((s / d) as i64))?;
            for &y in inner {
                if x == y {
                    continue;
                }
                let e1 = grp.sub(grp.add(arc(g, x, y), arc(g, y, u)), arc(g, x, u)).index();
                if !e1.is_multiple_of(d) {
                    return Ok(None);
                }
                h.set_edge(x, y, q.elem((e1 / d) as i64))?;
            }
        }
        Ok(Some(match self.lemma(&h, verts, u, v, r)? {
            LemmaResult::ZeroCycle(c) => LemmaResult::ZeroCycle(cycle_in(g, c.vertices)),
            LemmaResult::Family(f) => {
                LemmaResult::Family(family_in(g, v, u, f.paths.into_iter().map(|p| p.vertices).collect()))
            }
        }))
    }

    #[allow(clippy::too_many_arguments)]
    fn unit_case(
        &mut self,
        g: &WeightedDigraph,
        verts: &[usize],
        inner: &[usize],
        u: usize,
        v: usize,
        r: usize,
        a: GroupElem,
    ) -> Result<Option<LemmaResult>> {
        let outside: Vec<usize> = (0..g.order()).filter(|x| *x != u && !inner.contains(x)).collect();
        let w = derived_weighting(g, u, &outside)?;
        let triple = match find_heavy_triple(&w, inner, a) {
            Ok(t) => t,
            Err(Error::Domain(_)) => return Ok(None),
            Err(e) => return Err(e),
        };

        if let Some(t) = triple {
            self.trace.push(Step::HeavyTriple);
            let (x, y, z) = (t.x, t.y, t.z);
            if r == 3 {
                return Ok(Some(LemmaResult::Family(family_in(
                    g,
                    v,
                    u,
                    vec![vec![v, x, u], vec![v, x, y, u], vec![v, x, y, z, u]],
                ))));
            }
            let f = match self.lemma(g, &without(verts, &[u, y, z]), x, v, r - 3)? {
                LemmaResult::ZeroCycle(c) => return Ok(Some(LemmaResult::ZeroCycle(c))),
                LemmaResult::Family(f) => f,
            };
            let mut candidates = Vec::with_capacity(4 * f.paths.len());
            for p in &f.paths {
                for tail in [&[u][..], &[y, u], &[z, u], &[y, z, u]] {
                    let mut seq = p.vertices.clone();
                    seq.extend_from_slice(tail);
                    candidates.push(path_in(g, seq));
                }
            }
            return Ok(pick_distinct(candidates, r).map(|paths| {
                LemmaResult::Family(PathFamily {
                    source: v,
                    target: u,
                    paths,
                })
            }));
        }

        let Some(order) = zero_arc_order(&w, inner) else {
            self.trace.push(Step::ZeroArcCycle);
            let zero = g.group().zero();
            let mut zero_arcs = WeightedDigraph::empty(g.group().clone(), g.order());
            for (p, q, e) in w.edges() {
                if e == zero {
                    zero_arcs.set_edge(p, q, zero)?;
                }
            }
            return Ok(find_zero_cycle_in(&zero_arcs, inner, 2, self.budget)?
                .found()
                .map(|c| LemmaResult::ZeroCycle(cycle_in(g, c.vertices))));
        };

        let zero = g.group().zero();
        let mut signs: Vec<GroupElem> = w.edges().map(|(_, _, e)| e).filter(|e| *e != zero).collect();
        signs.sort_unstable();
        signs.dedup();
        let ham = if signs.len() <= 1 {
            self.trace.push(Step::AcyclicOrder);
            order
        } else if let Some(s) = DominatingStructure::find(&w, inner) {
            self.trace.push(Step::DominatingEdge);
            match dominating_order_hampath(&s, &w) {
                Ok(p) => p.vertices,
                Err(_) => return Ok(None),
            }
        } else {
            self.trace.push(Step::ShortZeroCycle);
            let (hit, _) = find_zero_cycle_with_stats(&w, inner, 2, 4, self.budget)?;
            return Ok(hit.found().map(|c| LemmaResult::ZeroCycle(cycle_in(g, c.vertices))));
        };
        if ham.len() < r {
            return Ok(None);
        }
        let paths = (1..=r)
            .map(|i| {
                let mut seq = vec![v];
                seq.extend_from_slice(&ham[..i]);
                seq.push(u);
                seq
            })
            .collect();
        Ok(Some(LemmaResult::Family(family_in(g, v, u, paths))))
    }
}
