//! Approximation algorithms for latency-style covering problems.
//!
//! The crate covers four families of algorithms together with the exhaustive
//! oracles used to check them at desk scale:
//!
//! * [`ranking`]: adaptive residual greedy for submodular ranking.
//! * [`orienteering`] and [`mlsc`]: minimum latency submodular cover on a metric,
//!   built from a pluggable submodular orienteering solver.
//! * [`lcst`]: the latency covering Steiner tree LP pipeline (tree embedding,
//!   knapsack-cover separation, cutting planes, dependent rounding).
//! * [`stochastic`]: adaptive greedy for weighted stochastic submodular ranking.
//!
//! Shared data types live in [`instances`]; the command line front end is in
//! [`app`].

pub mod app;
pub mod error;
pub mod instances;
pub mod lcst;
pub mod mlsc;
pub mod orienteering;
pub mod par;
pub mod rational;
pub mod ranking;
pub mod stochastic;

pub use error::{Error, Result};
pub use instances::{ElemSet, Metric, Valuation, ValuationSet};
pub use rational::Rational;
