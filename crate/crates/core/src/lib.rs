//! Probabilistic zero forcing on graphs: exact absorbing-chain computation and
//! seeded Monte Carlo estimation of expected propagation time, ℓ-round
//! probability, confidence propagation time and throttling numbers.
//!
//! Graphs come from [`family::FamilySpec`] or an edge list; vertex sets are
//! [`VertexSet`] bitsets. Exact results use [`Rational`]; the chain engine is
//! generic over [`prob::Weight`] so `f64` can stand in when denominators grow.

pub mod bitset;
pub mod closed_forms;
pub mod derived;
pub mod error;
pub mod exact;
pub mod family;
pub mod graph;
pub mod kernels;
pub mod montecarlo;
pub mod prob;
pub mod search;

pub use bitset::VertexSet;
pub use error::{Error, Result};
pub use exact::{build_chain, confidence_time, ept_exact, ept_graph, lround_probability, Caps, StateChain};
pub use family::FamilySpec;
pub use graph::Graph;
pub use kernels::{is_zero_forcing_set, propagation_time, Rule};
pub use montecarlo::{EstimateReport, McConfig};
pub use prob::{Rational, Weight};
