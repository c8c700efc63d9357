//! Exact bounds on edge and subgraph probabilities in uniform random graphs
//! with a prescribed degree sequence, plus the enumeration and switching
//! oracles used to check them.

pub mod bipartite;
pub mod bound;
pub mod degree;
pub mod diagnostics;
pub mod exec;
pub mod families;
pub mod generic;
pub mod model;
pub mod oracle;
pub mod problem;
pub mod rational;

pub use bound::{BoundError, EdgeOrder, OrderPolicy, ProbabilityBound, Theorem};
pub use model::{BipartiteGraph, DegreeSequence, Edge, LabelledGraph, Part};
pub use rational::Rational;
