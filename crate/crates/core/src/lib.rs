//! Radial profiles of a vortex in the Abelian-Higgs model coupled to a
//! neutral scalar condensate.
//!
//! The three profile equations are solved by shooting with bisection on the
//! central data, coupled through a relaxed fixed-point iteration on the Higgs
//! modulus. [`analysis`] holds independent checks: residuals, far-field fits,
//! a collocation Newton solver and a phase-diagram scan.

pub mod analysis;
pub mod error;
pub mod fixedpoint;
pub mod grid;
pub mod integrate;
pub mod outcome;
pub mod params;
pub mod profile;
pub mod shoot;
pub mod special;

pub use analysis::{DecayField, DecayFit, PhaseDiagram};
pub use error::{Result, Stage, VortexError};
pub use fixedpoint::{solve_vortex, InitialGuess, OuterConfig};
pub use grid::{make_grid, RadialGrid};
pub use outcome::{Classification, CondensateBranch, ShootingOutcome, VortexSolution};
pub use params::{ModelParams, ALPHA_CRIT};
pub use profile::{Profile, ProfileKind};
pub use shoot::ShootConfig;
