use serde::Serialize;

use crate::error::{domain, Result};
use crate::graph::{PathWitness, WeightedAdjacency, WeightedDigraph};
use crate::group::GroupElem;

/// Structure of a derived weighting with values in `{0, a, -a}`, both signs
/// present, no zero cycle and no heavy triple: zero arcs form a DAG, the
/// zero arc `x -> y` dominates every other vertex, and `y -> x` is the only
/// arc of weight `-c`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DominatingStructure {
    /// Vertex order in which every zero arc points backwards.
    pub order: Vec<usize>,
    pub x: usize,
    pub y: usize,
    #[serde(serialize_with = "ser_elem")]
    pub c: GroupElem,
}

fn ser_elem<S: serde::Serializer>(e: &GroupElem, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_u32(e.index())
}

/// Order of `verts` with every zero arc `a -> b` having `a` after `b`;
/// `None` when the zero arcs contain a cycle. Smallest ready vertex first.
pub(crate) fn zero_arc_order(w: &WeightedDigraph, verts: &[usize]) -> Option<Vec<usize>> {
    let zero = w.group().zero();
    let m = verts.len();
    // b must precede a for each zero arc a -> b: count, per vertex a, the
    // zero arcs leaving it that are still unplaced.
    let mut pending: Vec<usize> = verts
        .iter()
        .map(|&a| verts.iter().filter(|&&b| b != a && w.edge(a, b) == Some(zero)).count())
        .collect();
    let mut placed = vec![false; m];
    let mut order = Vec::with_capacity(m);
    for _ in 0..m {
        let i = (0..m).find(|&i| !placed[i] && pending[i] == 0)?;
        placed[i] = true;
        order.push(verts[i]);
        for j in 0..m {
            if !placed[j] && w.edge(verts[j], verts[i]) == Some(zero) {
                pending[j] -= 1;
            }
        }
    }
    Some(order)
}

impl DominatingStructure {
    /// First dominating arc in lexicographic `(x, y)` order, if the
    /// structure holds.
    pub fn find(w: &WeightedDigraph, verts: &[usize]) -> Option<Self> {
        let grp = w.group();
        let zero = grp.zero();
        let order = zero_arc_order(w, verts)?;
        for &x in verts {
            'cand: for &y in verts {
                if x == y || w.edge(x, y) != Some(zero) {
                    continue;
                }
                for &z in verts {
                    if z == x || z == y {
                        continue;
                    }
                    let zx = w.edge(z, x) == Some(zero);
                    let yz = w.edge(y, z) == Some(zero);
                    if zx == yz {
                        continue 'cand;
                    }
                }
                let Some(yx) = w.edge(y, x) else { continue };
                if yx == zero {
                    continue;
                }
                let c = grp.neg(yx);
                for &p in verts {
                    for &q in verts {
                        if p == q || (p, q) == (y, x) {
                            continue;
                        }
                        match w.edge(p, q) {
                            Some(e) if e == zero || e == c => {}
                            _ => continue 'cand,
                        }
                    }
                }
                return Some(DominatingStructure {
                    order: order.clone(),
                    x,
                    y,
                    c,
                });
            }
        }
        None
    }
}

/// Hamiltonian path with every arc of weight `c`, read off the zero-arc order
/// around the dominating arc. The order must place `y` immediately before `x`.
pub fn dominating_order_hampath(s: &DominatingStructure, w: &WeightedDigraph) -> Result<PathWitness> {
    let l = s.order.len();
    if l < 3 {
        return domain("dominating structure needs at least 3 vertices");
    }
    let Some(i) = s.order.iter().position(|&v| v == s.y) else {
        return domain("y is not in the order");
    };
    if i + 1 >= l || s.order[i + 1] != s.x {
        return domain("the order does not place y immediately before x");
    }
    let vertices: Vec<usize> = if i + 2 == l {
        // x is last: move it to the front.
        std::iter::once(s.order[l - 1])
            .chain(s.order[..l - 1].iter().copied())
            .collect()
    } else {
        // Move y to the end (for i = 0 this is a rotation).
        s.order[..i]
            .iter()
            .chain(&s.order[i + 1..])
            .copied()
            .chain(std::iter::once(s.y))
            .collect()
    };
    for pair in vertices.windows(2) {
        if w.edge(pair[0], pair[1]) != Some(s.c) {
            return domain(format!("arc {}->{} does not weigh c", pair[0], pair[1]));
        }
    }
    let weight = w.walk_weight(&vertices, false).expect("arcs present");
    Ok(PathWitness { vertices, weight })
}
