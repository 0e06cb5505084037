//! Linear locally repairable codes over small finite fields.
//!
//! Field and matrix arithmetic, exhaustive code properties (minimum
//! distance, `(r, δ)` locality, optimality), random and greedy generator
//! constructions, and the enlarge/puncture transforms that move between
//! parameter sets.

pub mod code_core;
pub mod codefile;
pub mod construct;
pub mod error;
pub mod finite_field;
pub mod matrix;
pub mod transforms;

pub use code_core::{
    check_group_repairability, d_opt, has_all_symbol_locality, minimum_distance, optimality, sphere_size, Budget,
    ConstructionReport, LinearCode, LocalityStructure, LocalityVerdict, LocalityWitness, Optimality,
};
pub use codefile::CodeDocument;
pub use construct::{
    compute_z, distance_bound, greedy_lrc, monte_carlo, partition_lengths, random_lrc, Construction,
    ConstructionConfig, GroupPlan, LrcParams, MonteCarloRow,
};
pub use error::{Error, Result};
pub use finite_field::{FieldElement, FieldSpec, Symbol};
pub use matrix::Matrix;
pub use transforms::{enlarge, find_deep_hole, puncture, DeepHoleStrategy, EnlargeOptions, EnlargeReport};
