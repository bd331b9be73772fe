//! Symmetry-aware 0/1 optimization toolkit built around column-symmetric
//! assignment matrices.
//!
//! The crate provides, in rough dependency order:
//!
//! * [`shape`] — the reduced index set of a `p x q` assignment matrix with
//!   full column symmetry, diagonal coordinates, and bit-vector cell sets;
//! * [`vertex`] — characterization and enumeration of the lexicographically
//!   maximal one-entry-per-row matrices (the orbitope vertices);
//! * [`face`] — cube faces `(I0, I1)` of fixed variables and their
//!   serialization;
//! * [`fixing`] — simultaneous variable fixing over those vertex sets in
//!   linear time, together with a brute-force reference oracle;
//! * [`packing`] — the same fixing for at-most-one-entry-per-row matrices by
//!   embedding into a one-larger shape;
//! * [`sci`] — shifted column inequalities: validity, enumeration and exact
//!   linear-time separation;
//! * [`seqfix`] — single-inequality (knapsack) fixing, sequential fixing to a
//!   fixpoint, and the affine variants restricted to the row-sum hull;
//! * [`covering`] — the vertex-cover reduction showing fixing for
//!   at-least-one-entry-per-row matrices is intractable, as an executable
//!   construction with a tiny-scale certifier;
//! * [`lp`] — a self-contained bounded-variable primal simplex solver;
//! * [`partition`] — a branch-and-cut solver for weighted graph partitioning
//!   with pluggable symmetry handling and clique cut separation;
//! * [`mod@bench`] — the experiment driver producing per-variant comparison
//!   tables.

pub mod bench;
pub mod covering;
pub mod error;
pub mod face;
pub mod fixing;
pub mod lp;
pub mod packing;
pub mod partition;
pub mod sci;
pub mod seqfix;
pub mod shape;
pub mod vertex;

pub use error::Error;
pub use face::{check_face, complete_face, CubeFace, FaceCheck};
pub use fixing::{orbitopal_fix, FixStats, FixingOutcome};
pub use shape::{CellIndex, CellSet, DiagonalCoord, OrbitopeShape};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
