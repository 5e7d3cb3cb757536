//! Coupling constants of the reduced vortex equations.

use serde::Serialize;

use crate::error::{check_finite, Result, VortexError};

/// Critical mass ratio separating the Abelian regime (`g ≡ 0`) from the
/// regime where a condensate may form in the core.
pub const ALPHA_CRIT: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Mass ratios `alpha = m_chi / m_phi` and `beta = m_gamma / m_phi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams {
    alpha: f64,
    beta: f64,
}

impl ModelParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        check_finite("alpha", alpha)?;
        check_finite("beta", beta)?;
        if alpha <= 0.0 || beta <= 0.0 {
            return Err(VortexError::InvalidArgument(format!(
                "alpha and beta must be positive, got ({alpha}, {beta})"
            )));
        }
        Ok(Self { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn alpha_crit(&self) -> f64 {
        ALPHA_CRIT
    }

    /// Upper bound `sqrt(max(0, 1 - 2 alpha^2))` on the condensate.
    pub fn g_cap(&self) -> f64 {
        if self.is_abelian() {
            0.0
        } else {
            (1.0 - 2.0 * self.alpha * self.alpha).max(0.0).sqrt()
        }
    }

    /// True when the condensate is forced to vanish identically.
    pub fn is_abelian(&self) -> bool {
        self.alpha >= ALPHA_CRIT
    }

    /// Decay rate `min(1, 2 alpha, 2 beta)` of `1 - f` in the far field.
    pub fn gamma(&self) -> f64 {
        1.0_f64.min(2.0 * self.alpha).min(2.0 * self.beta)
    }
}
