//! Finite certificates for the cone-over-Steiner-pairs construction: exact and
//! numeric Lagrangians of 3-graphs, the apex-weight analysis of cones over
//! sparse 3-graphs, Steiner triple system pairs and the resulting witnesses.

pub mod cone;
pub mod configuration;
pub mod designs;
pub mod error;
pub mod exact;
pub mod exec;
pub mod graph;
pub mod lagrangian;
pub mod seeds;
pub mod simplex;
pub mod sparsity;
pub mod witness;

pub use error::{Error, Result};
pub use exec::Exec;
pub use graph::{canonicalize, codegree_profile, induced_subgraph, ThreeGraph, Triple};
pub use lagrangian::{evaluate_p, maximize_lagrangian, LagrangianEstimate, LagrangianOptions, WeightVector};
pub use sparsity::{check_sparse, SparsityMode, SparsityVerdict};
