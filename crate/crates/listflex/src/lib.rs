//! Exact toolkit for flexibility of list colorings.
//!
//! A request assigns preferred colors to some vertices; a graph with a list
//! assignment is epsilon-flexible when every request can be honored on an
//! epsilon fraction of its domain by some proper list coloring. This crate
//! computes such quantities exactly: flexibility values by enumeration,
//! weighted flexibility by rational linear programming with dual certificates,
//! the randomized peeling procedures with provable marginal bounds, the
//! knapsack gadget construction separating weighted from unweighted
//! flexibility, and the graph-polynomial coefficient machinery behind
//! single-request satisfiability on degenerate graphs.

pub mod catalog;
pub mod cli;
pub mod coloring;
pub mod flexibility;
pub mod gadget;
pub mod graph;
pub mod instance;
pub mod lp;
pub mod nullstellensatz;
pub mod rational;
pub mod sampler;

pub use graph::{Coloring, Graph, ListAssignment, Request, WeightedRequest};
pub use rational::Rational;
