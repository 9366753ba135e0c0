//! Degree-constrained 2-partitions of graphs.
//!
//! Exact and polynomial-time solvers for (δ≥k1, δ≥k2)-partitions and a few
//! connectivity-constrained variants, the SAT-to-graph reductions that show
//! the hard cases, and a harness that checks those reductions and the
//! polynomial characterizations against brute force on small instances.

pub mod cnf;
pub mod gadgets;
pub mod graph;
pub mod reductions;
pub mod ring;
pub mod solvers;
pub mod verification;
