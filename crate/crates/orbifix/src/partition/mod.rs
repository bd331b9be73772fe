//! Branch-and-cut for weighted graph partitioning.
//!
//! Minimize the total weight of edges whose endpoints share a part, over
//! partitions of the node set into at most `q` interchangeable parts. The
//! assignment variables form a column-symmetric 0/1 matrix, which makes the
//! fixing machinery of the rest of the crate directly applicable at every
//! tree node.

mod clique;
mod instance;
mod model;
mod solver;

pub use clique::{clique_rhs, min_intra_pairs_bruteforce, separate_clique, CliqueCut};
pub use instance::{
    brute_force_optimum, format_instance, generate_instance, parse_instance, star_weight_order,
    PartitionInstance,
};
pub use model::{build_model, ModelLayout};
pub use solver::{
    compare_winners, isoprune_check, solve, IsoOutcome, SolveDiagnostics, SolveReport,
    SolverConfig, SymmetryMode, Winner,
};
