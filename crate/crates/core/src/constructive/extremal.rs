use crate::error::{domain, Result};
use crate::graph::{WeightedDigraph, WeightedGraph};
use crate::group::GroupSpec;

/// Complete digraph on `0..k` with `w(i -> j) = 0` for `i < j` and `1`
/// otherwise. A simple cycle weighs its number of descending arcs, which lies
/// in `1..k`.
pub fn build_extremal_digraph(k: u32) -> Result<WeightedDigraph> {
    if k < 2 {
        return domain(format!("k must be at least 2, got {k}"));
    }
    let z = GroupSpec::cyclic(k)?;
    Ok(WeightedDigraph::complete_with(z.clone(), k as usize, |i, j| {
        if i < j {
            z.zero()
        } else {
            z.elem(1)
        }
    }))
}

/// Edges of the path `0 - 1 - ... - (t-1)`.
pub fn path_tree(t: usize) -> Vec<(usize, usize)> {
    (1..t).map(|i| (i - 1, i)).collect()
}

fn check_tree(tree: &[(usize, usize)]) -> Result<usize> {
    let t = tree.len() + 1;
    if tree.is_empty() {
        return domain("the tree needs at least one edge");
    }
    let mut parent: Vec<usize> = (0..t).collect();
    fn root(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for &(a, b) in tree {
        if a >= t || b >= t {
            return domain(format!(
                "tree vertex out of range in edge ({a}, {b}); expected vertices 0..{t}"
            ));
        }
        let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
        if ra == rb {
            return domain(format!("edge ({a}, {b}) closes a cycle; not a tree"));
        }
        parent[ra] = rb;
    }
    Ok(t)
}

/// Join of a tree on `0..t` with a clique of order `k - 1` on `t..t+k-1`.
/// Clique vertices weigh 1, all edges and tree vertices weigh 0. Minimum
/// degree is `k` and every cycle meets between 1 and `k - 1` clique vertices.
pub fn build_extremal_undirected(k: u32, tree: &[(usize, usize)]) -> Result<WeightedGraph> {
    if k < 2 {
        return domain(format!("k must be at least 2, got {k}"));
    }
    let t = check_tree(tree)?;
    let z = GroupSpec::cyclic(k)?;
    let n = t + k as usize - 1;
    let mut g = WeightedGraph::empty(z.clone(), n);
    for &(a, b) in tree {
        g.set_edge(a, b, z.zero())?;
    }
    for c in t..n {
        g.set_vertex_weight(c, z.elem(1))?;
        for other in 0..c {
            g.set_edge(other, c, z.zero())?;
        }
    }
    Ok(g)
}
