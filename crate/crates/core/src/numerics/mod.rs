//! Floating-point machinery: solver, samplers, penalty minimization,
//! clustering and dimension estimates. Every routine is a pure function of
//! its inputs and an [`RngSpec`].

pub mod cluster;
pub mod compiled;
pub mod dimension;
pub mod lm;
pub mod penalty;
pub mod region;
pub mod rng;
pub mod sampling;
pub use sampling::sample_annulus;

pub use cluster::{find_plateau, median_nn_distance, plateau_scan, single_linkage, Clustering, PlateauScan};
pub use compiled::{EquationSystem, Normalization, Residuals, Stacked};
pub use dimension::{local_dim, ClusterTooSmall, DimConfig};
pub use lm::{levenberg_marquardt, lm_solve, solve, Failure, LmOutcome, SolveConfig, Status};
pub use penalty::{constrained_min, constrained_min_each, ConstrainedMin, NoFeasiblePoint, PenaltyConfig, PenaltyStage};
pub use region::{distance, norm, Annulus};
pub use rng::{fan_out, RngSpec};
pub use sampling::{sample_sphere, variety_sample, variety_sample_until, AdaptiveSample};
