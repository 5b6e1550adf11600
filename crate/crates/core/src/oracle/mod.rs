//! Exhaustive ground truth and test inputs.

pub mod brute_chains;
pub mod brute_prism;
pub mod canonical;
pub mod corpus;
pub mod planar_code;
