//! Protein folding in the hydrophobic-polar (HP) model on the cubic lattice.
//!
//! Conformations are encoded as paths over a 150-symbol alphabet of
//! three-step fragment blocks. The crate provides the block table and
//! decoder, a composite energy that penalizes overlapping walks, and four
//! searches over the block-path space:
//!
//! * best-improvement hill climbing ([`local_search::climb`]),
//! * simulated annealing ([`local_search::sa_run`]),
//! * Max-Min ant colony optimization on the layered block graph ([`aco::aco_run`]),
//! * hybrid Monte Carlo ACO, which perturbs a model solution with
//!   pheromone-biased block replacements and accepts elites by the
//!   Metropolis rule ([`hmcaco::hmcaco_run`]).
//!
//! [`oracle::exhaustive_search`] enumerates small instances exactly and
//! [`bench`] drives seeded multi-run comparisons.

pub mod aco;
pub mod bench;
pub mod blocks;
pub mod error;
pub mod hmcaco;
pub mod lattice;
pub mod local_search;
pub mod oracle;
pub mod path;
pub mod pheromone;
pub mod run;
pub mod scoring;
pub mod sequence;

pub use blocks::{build_block_table, Block, BlockTable, N_BLOCKS};
pub use error::{HpError, Result};
pub use lattice::{Direction, Point3, Symmetry};
pub use path::{decode, path_len, Conformation, Path};
pub use run::{Budget, RunOutcome};
pub use scoring::{energy, Evaluator, ScoreBreakdown};
pub use sequence::{parse_sequence, HpSequence, Residue};
