//! Metrics, grouped trees, valuation oracles, generators and the instance
//! file format.

pub mod format;
pub mod generate;
mod metric;
mod set;
mod tree;
mod valuation;

pub use format::{Instance, InstanceKind};
pub use generate::{random_instance, GenSpec};
pub use metric::Metric;
pub use set::{ElemSet, MAX_ELEMENTS};
pub use tree::{Group, GroupedTree, RawTree};
pub use valuation::{
    check_submodular, compute_epsilon, compute_epsilon_of, Bound, ExplicitTable, Residual, SetFunction,
    TruncatedCoverage, TruncatedTerm, Valuation, ValuationSet, EXPLICIT_MAX,
};
