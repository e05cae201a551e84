//! Constructive solvers that follow the directed existence proofs step by
//! step, and the extremal constructions that show the bounds are near tight.

mod dominating;
mod extremal;
mod lemma;

pub use dominating::{dominating_order_hampath, DominatingStructure};
pub use extremal::{build_extremal_digraph, build_extremal_undirected, path_tree};
pub use lemma::{
    lemma_one_solve, lemma_one_solve_with, theorem_main_solve, theorem_main_solve_with, LemmaOneOutcome, LemmaResult,
    Step, TheoremOutcome,
};
