//! Finite-block-length rate regions for RIS-aided MISO broadcast channels.
//!
//! The crate computes max-min rates and rate-region boundaries of a
//! multi-antenna base station serving single-antenna users through a
//! reconfigurable intelligent surface, for three surface architectures:
//!
//! - locally passive diagonal (`lp-d`): unit-modulus reflection coefficients,
//! - globally passive diagonal (`gp-d`): diagonal, total reflected power bounded,
//! - globally passive beyond-diagonal (`gp-bd`): symmetric, total power bounded,
//!
//! plus a random-phase surface and a direct-link baseline without a surface.
//!
//! The optimizer alternates between the beamformers and the surface. Each
//! block linearizes the convex SINR numerators around the current point and
//! solves the resulting multiple-ratio max-min program with a generalized
//! Dinkelbach iteration; every parametric subproblem is a convex program in
//! second-order-cone form handled by [`subproblem::solver`].
//!
//! Module map:
//!
//! - [`channel`]: scenario geometry and Rician / Rayleigh channel draws.
//! - [`fbl`]: normal-approximation rate, dispersion, monotonicity threshold.
//! - [`architectures`]: feasible sets, passivity functional, feasibility checks.
//! - [`subproblem`]: convex subproblem assembly and the conic solvers.
//! - [`optimizer`]: alternating optimization with Dinkelbach inner loops.
//! - [`region`]: SINR-profile and rate-profile boundary computation.
//! - [`experiments`]: Monte Carlo sweeps, CSV / SVG output.
//! - [`cli`]: configuration files, overrides and subcommands.

pub mod architectures;
pub mod channel;
pub mod cli;
mod error;
pub mod experiments;
pub mod fbl;
pub mod linalg;
pub mod optimizer;
pub mod region;
pub mod subproblem;

pub use architectures::{Architecture, RisState};
pub use channel::{ChannelSet, Scenario, SystemConfig};
pub use error::{Error, Result};
pub use fbl::FblParams;
pub use optimizer::{BeamformerSet, OptimizerConfig, OptimizerTrace};
