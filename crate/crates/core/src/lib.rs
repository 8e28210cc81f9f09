//! Exact strata sums for fine compactified universal Jacobians over moduli
//! of stable curves.
//!
//! The pipeline enumerates pairs `(Γ, Γ₀)` of a stable graph and a connected
//! spanning subgraph ([`graphs`]), computes the Picard torsors of `Γ₀`
//! ([`picard`]), and adds up per-stratum Hodge–Deligne classes
//! ([`assembly`]) built from a λ-ring of Tate classes, local systems on
//! `M_{1,1}` and cusp-form symbols ([`motives`], [`equivariant`],
//! [`interior`]). The [`bijections`] module constructs the automorphism
//! equivariant bijections between Picard torsors of different degrees that
//! make the result independent of the degree.

pub mod assembly;
pub mod bijections;
pub mod equivariant;
pub mod error;
pub mod graphs;
pub mod interior;
pub mod motives;
pub mod picard;
pub mod selftest;

pub use error::{Error, Result};
pub use graphs::{Color, GraphAutomorphism, Multigraph, SpanningSubgraph, StableGraph};
pub use picard::{Multidegree, PicClass, PicardGroup};

/// Stamp for persisted results; bump when outputs change.
pub const ENGINE_VERSION: &str = concat!("ujac-core/", env!("CARGO_PKG_VERSION"), "+1");
