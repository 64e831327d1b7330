//! Hierarchical random graphs grown from network motifs.
//!
//! `Λ_k` is built by gluing `q` copies of `Λ_{k-1}` at their external nodes
//! and overlaying the motif on the new externals as *decorating* bonds, each
//! of which is realized independently with probability `p`. The crate
//! provides:
//!
//! - [`hierarchy`]: the deterministic underlying graph and its level tags,
//! - [`sampler`]: reproducible realizations and exact subset enumeration,
//! - [`metrics`]: closed-form and empirical structure (degrees, clustering,
//!   diameters, pattern counts),
//! - [`ising`]: the annealed renormalization map of the Ising model on the
//!   M1 family with its fixed points and critical couplings,
//! - [`oracle`]: brute-force partition functions used to validate the map,
//! - [`cli`]: the command-line front end behind the `hiergraph` binary.
//!
//! See the `examples/` directory for one runnable program per capability.

pub mod cli;
pub mod error;
pub mod hierarchy;
pub mod ising;
pub mod metrics;
pub mod motif;
pub mod oracle;
pub mod sampler;

pub use error::{Error, Result};
pub use hierarchy::{build, level_census, boundary_ratio, UnderlyingGraph};
pub use motif::{automorphisms, get_motif, Motif, MotifId};
pub use sampler::{enumerate_weighted, sample, RealizedGraph};
