//! Source-type spreading of power-law thin liquid films.
//!
//! The crate computes self-similar drop profiles of the film equation
//! `u_t + (u^{λ+2}|u_xxx|^{λ-1}u_xxx)_x = 0` in planar and radial geometry by
//! shooting on a singular third-order ODE, classifies the traveling-wave front
//! behaviours of the equation, and evolves the PDE itself on a uniform grid to
//! compare generic drops with the similarity profiles.
//!
//! Modules, bottom up:
//!
//! - [`params`]: the rheology exponent and every exponent derived from it
//! - [`ode`]: adaptive Dormand–Prince integrator used throughout
//! - [`profile`]: rescaled similarity ODEs, event detection, local expansions
//! - [`shooting`]: contact-angle targeting, `δ → 0` continuation, physical units
//! - [`traveling_wave`]: phase-plane analysis and front reconstruction
//! - [`pde`]: conservative evolution of the film equation
//! - [`cli`]: run configurations, manifests and file output behind the binary

pub mod cli;
pub mod error;
pub mod ode;
pub mod params;
pub mod pde;
pub mod profile;
pub mod shooting;
pub mod traveling_wave;

pub use error::{Error, Result};
pub use params::{gamma_to_kappa, kappa_to_gamma, Rheology};
pub use profile::{Geometry, OutcomeKind, ProfileState, ShotConfig, ShotOutcome};
