//! Independent brute-force oracles for the integration tests. Weights are
//! recomputed from residue vectors, cycles and paths come from plain
//! permutation enumeration.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zerocycle::{GroupSpec, WeightedAdjacency, WeightedDigraph, WeightedGraph};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_complete_digraph(rng: &mut ChaCha8Rng, z: &GroupSpec, n: usize) -> WeightedDigraph {
    let order = z.order() as i64;
    WeightedDigraph::complete_with(z.clone(), n, |_, _| z.elem(rng.gen_range(0..order)))
}

/// Directed graph with each arc present with probability `p`, random vertex weights.
pub fn random_digraph(rng: &mut ChaCha8Rng, z: &GroupSpec, n: usize, p: f64) -> WeightedDigraph {
    let order = z.order() as i64;
    let mut g = WeightedDigraph::empty(z.clone(), n);
    for v in 0..n {
        g.set_vertex_weight(v, z.elem(rng.gen_range(0..order))).unwrap();
    }
    for a in 0..n {
        for b in 0..n {
            if a != b && rng.gen_bool(p) {
                g.set_edge(a, b, z.elem(rng.gen_range(0..order))).unwrap();
            }
        }
    }
    g
}

pub fn random_graph(rng: &mut ChaCha8Rng, z: &GroupSpec, n: usize, p: f64) -> WeightedGraph {
    let order = z.order() as i64;
    let mut g = WeightedGraph::empty(z.clone(), n);
    for v in 0..n {
        g.set_vertex_weight(v, z.elem(rng.gen_range(0..order))).unwrap();
    }
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p) {
                g.set_edge(a, b, z.elem(rng.gen_range(0..order))).unwrap();
            }
        }
    }
    g
}

fn add_res(z: &GroupSpec, acc: &mut [u32], r: &[u32]) {
    for ((a, &b), &k) in acc.iter_mut().zip(r).zip(z.factors()) {
        *a = (*a + b) % k;
    }
}

/// Weight of `seq` as a residue vector: vertex weights plus consecutive
/// edges, closed back to the start when `closed`. `None` if an edge is missing.
pub fn residue_weight<G: WeightedAdjacency>(g: &G, seq: &[usize], closed: bool) -> Option<Vec<u32>> {
    let z = g.group();
    let mut acc = vec![0; z.factors().len()];
    for &v in seq {
        add_res(z, &mut acc, &z.residues(g.vertex_weight(v)));
    }
    for w in seq.windows(2) {
        add_res(z, &mut acc, &z.residues(g.edge(w[0], w[1])?));
    }
    if closed {
        add_res(z, &mut acc, &z.residues(g.edge(*seq.last()?, seq[0])?));
    }
    Some(acc)
}

fn permutations_of(items: &[usize], out: &mut Vec<Vec<usize>>) {
    fn go(rest: &mut Vec<usize>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(cur.clone());
            return;
        }
        for i in 0..rest.len() {
            let x = rest.remove(i);
            cur.push(x);
            go(rest, cur, out);
            cur.pop();
            rest.insert(i, x);
        }
    }
    go(&mut items.to_vec(), &mut Vec::new(), out);
}

/// Every simple cycle of length at least `min_len` inside `allowed`, as
/// vertex sequences starting at their least vertex, with residue weights.
/// Undirected cycles appear once per direction.
pub fn all_cycles<G: WeightedAdjacency>(g: &G, allowed: &[usize], min_len: usize) -> Vec<(Vec<usize>, Vec<u32>)> {
    let n = allowed.len();
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        let len = mask.count_ones() as usize;
        if len < min_len.max(if g.is_directed() { 2 } else { 3 }) {
            continue;
        }
        let members: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| allowed[i]).collect();
        let mut perms = Vec::new();
        permutations_of(&members[1..], &mut perms);
        for p in perms {
            let mut seq = vec![members[0]];
            seq.extend(p);
            if let Some(w) = residue_weight(g, &seq, true) {
                out.push((seq, w));
            }
        }
    }
    out
}

pub fn has_zero_cycle<G: WeightedAdjacency>(g: &G, allowed: &[usize], min_len: usize) -> bool {
    all_cycles(g, allowed, min_len)
        .iter()
        .any(|(_, w)| w.iter().all(|&x| x == 0))
}

/// Residue weights of every simple `from`-`to` path of order at least
/// `min_order` inside `allowed`.
pub fn path_weights<G: WeightedAdjacency>(
    g: &G,
    from: usize,
    to: usize,
    allowed: &[usize],
    min_order: usize,
) -> std::collections::BTreeSet<Vec<u32>> {
    let inner: Vec<usize> = allowed.iter().copied().filter(|&x| x != from && x != to).collect();
    let mut out = std::collections::BTreeSet::new();
    for mask in 0u32..(1 << inner.len()) {
        let members: Vec<usize> = (0..inner.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| inner[i])
            .collect();
        if members.len() + 2 < min_order {
            continue;
        }
        let mut perms = Vec::new();
        permutations_of(&members, &mut perms);
        for p in perms {
            let mut seq = vec![from];
            seq.extend(p);
            seq.push(to);
            if let Some(w) = residue_weight(g, &seq, false) {
                out.insert(w);
            }
        }
    }
    out
}

/// Hamiltonian path on `allowed` whose arcs all carry residue vector `c`.
pub fn has_mono_ham_path<G: WeightedAdjacency>(g: &G, allowed: &[usize], c: &[u32]) -> bool {
    let z = g.group();
    let mut perms = Vec::new();
    permutations_of(allowed, &mut perms);
    perms.iter().any(|p| {
        p.windows(2)
            .all(|w| g.edge(w[0], w[1]).is_some_and(|e| z.residues(e) == c))
    })
}

pub fn omega(mut k: u64) -> usize {
    let mut count = 0;
    let mut p = 2;
    while p * p <= k {
        while k.is_multiple_of(p) {
            k /= p;
            count += 1;
        }
        p += 1;
    }
    count + usize::from(k > 1)
}
