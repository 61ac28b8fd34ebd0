//! Motivic integrals and stringy invariants from simple normal crossing
//! resolution data.

mod integral;
mod resolution;

pub use integral::{
    k_equivalence_check, motivic_integral_snc, resolution_independence_check, stringy_phi_snc,
    KEquivalenceReport,
};
pub use resolution::{
    closed_from_open, open_from_closed, parse_subset, subset_label, Component, SncResolution,
    StrataKind, Subset, MAX_COMPONENTS,
};
