//! Witness checkers. Each one recomputes everything from the graph and
//! trusts nothing recorded in the witness.

use std::collections::HashSet;

use thiserror::Error;

use crate::graph::{CycleWitness, PathFamily, PathWitness, WeightedAdjacency};
use crate::group::GroupElem;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WitnessError {
    #[error("repeated vertex {0}")]
    RepeatedVertex(usize),
    #[error("vertex {0} not allowed here")]
    ForbiddenVertex(usize),
    #[error("missing edge {0}->{1}")]
    MissingEdge(usize, usize),
    #[error("length {len} below minimum {min}")]
    TooShort { len: usize, min: usize },
    #[error("recorded weight {recorded} differs from recomputed {actual}")]
    WeightMismatch { recorded: GroupElem, actual: GroupElem },
    #[error("weight {0} is not the identity")]
    NonZero(GroupElem),
    #[error("path runs {found:?}, expected endpoints {expected:?}")]
    Endpoints {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("paths {0} and {1} share a weight")]
    DuplicateWeight(usize, usize),
    #[error("expected {expected} paths, found {found}")]
    FamilySize { expected: usize, found: usize },
    #[error("orientation mismatch")]
    Orientation,
}

fn simple(seq: &[usize], n: usize, allowed: Option<&[usize]>) -> Result<(), WitnessError> {
    let mut seen = HashSet::new();
    for &v in seq {
        if v >= n || allowed.is_some_and(|a| !a.contains(&v)) {
            return Err(WitnessError::ForbiddenVertex(v));
        }
        if !seen.insert(v) {
            return Err(WitnessError::RepeatedVertex(v));
        }
    }
    Ok(())
}

fn weigh<G: WeightedAdjacency>(g: &G, seq: &[usize], closed: bool) -> Result<GroupElem, WitnessError> {
    for pair in seq.windows(2) {
        if !g.has_edge(pair[0], pair[1]) {
            return Err(WitnessError::MissingEdge(pair[0], pair[1]));
        }
    }
    if closed {
        let (a, b) = (seq[seq.len() - 1], seq[0]);
        if !g.has_edge(a, b) {
            return Err(WitnessError::MissingEdge(a, b));
        }
    }
    Ok(g.walk_weight(seq, closed).expect("edges checked"))
}

/// Zero cycle of length at least `min_len` using only `allowed` vertices
/// (all vertices when `None`).
pub fn check_zero_cycle<G: WeightedAdjacency>(
    g: &G,
    c: &CycleWitness,
    min_len: usize,
    allowed: Option<&[usize]>,
) -> Result<(), WitnessError> {
    if c.directed != g.is_directed() {
        return Err(WitnessError::Orientation);
    }
    let floor = if g.is_directed() { 2 } else { 3 };
    let min = min_len.max(floor);
    if c.vertices.len() < min {
        return Err(WitnessError::TooShort {
            len: c.vertices.len(),
            min,
        });
    }
    simple(&c.vertices, g.order(), allowed)?;
    let w = weigh(g, &c.vertices, true)?;
    if w != c.weight {
        return Err(WitnessError::WeightMismatch {
            recorded: c.weight,
            actual: w,
        });
    }
    if w != g.group().zero() {
        return Err(WitnessError::NonZero(w));
    }
    Ok(())
}

pub fn check_path<G: WeightedAdjacency>(
    g: &G,
    p: &PathWitness,
    endpoints: (usize, usize),
    min_order: usize,
    allowed: Option<&[usize]>,
) -> Result<(), WitnessError> {
    let found = match (p.vertices.first(), p.vertices.last()) {
        (Some(&a), Some(&b)) => (a, b),
        _ => (usize::MAX, usize::MAX),
    };
    if found != endpoints {
        return Err(WitnessError::Endpoints {
            expected: endpoints,
            found,
        });
    }
    if p.vertices.len() < min_order {
        return Err(WitnessError::TooShort {
            len: p.vertices.len(),
            min: min_order,
        });
    }
    simple(&p.vertices, g.order(), allowed)?;
    let w = weigh(g, &p.vertices, false)?;
    if w != p.weight {
        return Err(WitnessError::WeightMismatch {
            recorded: p.weight,
            actual: w,
        });
    }
    Ok(())
}

/// Exactly `r` simple source-target paths of order at least `min_order`
/// with pairwise-distinct weights.
pub fn check_family<G: WeightedAdjacency>(
    g: &G,
    f: &PathFamily,
    r: usize,
    min_order: usize,
    allowed: Option<&[usize]>,
) -> Result<(), WitnessError> {
    if f.paths.len() != r {
        return Err(WitnessError::FamilySize {
            expected: r,
            found: f.paths.len(),
        });
    }
    for p in &f.paths {
        check_path(g, p, (f.source, f.target), min_order, allowed)?;
    }
    for i in 0..r {
        for j in i + 1..r {
            if f.paths[i].weight == f.paths[j].weight {
                return Err(WitnessError::DuplicateWeight(i, j));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::WeightedDigraph;
    use crate::group::GroupSpec;

    #[test]
    fn rejects_forged_cycle() {
        let z = GroupSpec::cyclic(3).unwrap();
        let g = WeightedDigraph::complete_with(z.clone(), 3, |_, _| z.elem(1));
        let good = CycleWitness {
            vertices: vec![0, 1, 2],
            directed: true,
            weight: z.zero(),
        };
        assert!(check_zero_cycle(&g, &good, 2, None).is_ok());
        let forged = CycleWitness {
            vertices: vec![0, 1],
            directed: true,
            weight: z.zero(),
        };
        assert!(matches!(
            check_zero_cycle(&g, &forged, 2, None),
            Err(WitnessError::WeightMismatch { .. })
        ));
        let repeated = CycleWitness {
            vertices: vec![0, 1, 0],
            directed: true,
            weight: z.zero(),
        };
        assert_eq!(
            check_zero_cycle(&g, &repeated, 2, None),
            Err(WitnessError::RepeatedVertex(0))
        );
        assert_eq!(
            check_zero_cycle(&g, &good, 2, Some(&[0, 1])),
            Err(WitnessError::ForbiddenVertex(2))
        );
    }
}
