//! Rheology exponent and the exponents derived from it.
//!
//! Everything downstream is parameterised by the power-law index `λ` of the
//! Ostwald–de Waele fluid. The film equation
//!
//! ```text
//! u_t + (u^{λ+2} |u_xxx|^{λ-1} u_xxx)_x = 0
//! ```
//!
//! admits source-type solutions `u = A t^{-β} U(x / t^β)`; the similarity
//! exponent `β`, the amplitude `A`, the traveling-wave exponents and the
//! zero-contact-angle front exponent are all closed-form functions of `λ`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Power-law rheology together with all derived constants.
///
/// Any `λ > 0` is accepted: interfaces only exist for shear-thinning fluids
/// (`λ > 1`), and the solvers that need that restriction enforce it themselves.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rheology {
    lambda: f64,
    a: f64,
    beta_planar: f64,
    beta_radial: f64,
    amp_a: f64,
    tw_alpha: f64,
    tw_beta: f64,
    p_front: f64,
}

impl Rheology {
    pub fn new(lambda: f64) -> Result<Self> {
        if !lambda.is_finite() || lambda <= 0.0 {
            return Err(Error::Domain(format!(
                "rheology exponent must be positive and finite, got {lambda}"
            )));
        }
        let beta_planar = 1.0 / (5.0 * lambda + 2.0);
        Ok(Self {
            lambda,
            a: 1.0 / lambda,
            beta_planar,
            beta_radial: 1.0 / (7.0 * lambda + 3.0),
            // A^{2λ+1} = 1/(5λ+2)
            amp_a: (beta_planar.ln() / (2.0 * lambda + 1.0)).exp(),
            tw_alpha: (lambda - 1.0) / (3.0 * lambda),
            tw_beta: (lambda + 2.0) / (3.0 * lambda),
            p_front: 3.0 * lambda / (2.0 * lambda + 1.0),
        })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// `a = 1/λ`, the exponent appearing in the rescaled profile equation.
    pub fn a(&self) -> f64 {
        self.a
    }

    /// Similarity exponent of planar source solutions, `1/(5λ+2)`.
    pub fn beta_planar(&self) -> f64 {
        self.beta_planar
    }

    /// Similarity exponent of radially symmetric source solutions, `1/(7λ+3)`.
    pub fn beta_radial(&self) -> f64 {
        self.beta_radial
    }

    /// Amplitude `A` of the similarity ansatz.
    pub fn amp_a(&self) -> f64 {
        self.amp_a
    }

    /// Traveling-wave exponent `α = (λ-1)/(3λ)` used in `y = f^{-α} f'`.
    pub fn tw_alpha(&self) -> f64 {
        self.tw_alpha
    }

    /// Traveling-wave exponent `β = (λ+2)/(3λ)` used in `z = f^{β} f''`.
    pub fn tw_beta(&self) -> f64 {
        self.tw_beta
    }

    /// Exponent of the zero-contact-angle front, `3λ/(2λ+1) = 3/(2+a)`.
    pub fn p_front(&self) -> f64 {
        self.p_front
    }

    /// True when the fluid is shear-thinning (`λ > 1`, equivalently `a < 1`).
    pub fn is_shear_thinning(&self) -> bool {
        self.a < 1.0
    }

    /// Similarity exponent for the given geometry.
    pub fn similarity_beta(&self, geom: crate::profile::Geometry) -> f64 {
        match geom {
            crate::profile::Geometry::Planar => self.beta_planar,
            crate::profile::Geometry::Radial => self.beta_radial,
        }
    }

    /// Exponent of the `(2+a)/2`-type power linking `γ` and `κ`:
    /// `γ = κ^{-(3+a)/2}`.
    fn kappa_power(&self) -> f64 {
        -(3.0 + self.a) / 2.0
    }
}

/// Shooting parameter `γ` to initial curvature `κ`, `κ = γ^{-2λ/(3λ+1)}`.
pub fn gamma_to_kappa(gamma: f64, r: &Rheology) -> Result<f64> {
    if !gamma.is_finite() || gamma <= 0.0 {
        return Err(Error::Domain(format!(
            "curvature is only defined for gamma > 0, got {gamma}"
        )));
    }
    Ok(gamma.powf(1.0 / r.kappa_power()))
}

/// Inverse of [`gamma_to_kappa`]: `γ = κ^{-(3+1/λ)/2}`.
pub fn kappa_to_gamma(kappa: f64, r: &Rheology) -> Result<f64> {
    if !kappa.is_finite() || kappa <= 0.0 {
        return Err(Error::Domain(format!(
            "curvature must be positive, got {kappa}"
        )));
    }
    Ok(kappa.powf(r.kappa_power()))
}
