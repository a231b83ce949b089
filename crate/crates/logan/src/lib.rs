//! Logic-bounded evaluation and generation of finite graphs.
//!
//! The crate measures how far a graph is from a target property along two
//! complementary axes: a budgeted Ehrenfeucht-Fraisse probe that reports how
//! many game rounds a graph survives against reference prototypes, and exact
//! property certificates that either confirm a property or return a minimal
//! violating substructure. Both feed a composite loss that drives a
//! repair-based generator, and a reproduction harness replays the three
//! reference experiments end to end.
//!
//! Everything downstream of a seed is deterministic: samplers draw from a
//! counter-derived ChaCha stream, probe budgets are explicit, and experiment
//! outputs are byte-stable across runs.

pub mod builder;
pub mod certificates;
pub mod ef;
pub mod graph;
pub mod harness;
pub mod loss;
pub mod seed;
pub mod wl;

pub use certificates::{check, certificate_loss, PropertyTheory, Witness};
pub use ef::{approx_round_resilience, exact_round_resilience, ProbeBudget};
pub use graph::Graph;
pub use seed::Seed;
