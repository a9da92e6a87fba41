//! Symbolic and numerical tools for real polynomial map germs
//! (ℝ^m, 0) → (ℝ^p, 0): singular loci and Milnor sets as determinantal
//! ideals, witness searches for ρ-regularity, Milnor-fibre statistics,
//! image-germ probes and composition checks.

pub mod germ;
pub mod determinantal;
pub mod parse;
pub mod numerics;
pub mod analyzers;
pub mod report;
pub mod cli;
