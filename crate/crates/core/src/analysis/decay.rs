//! Log-linear fits of the far-field decay.

use serde::Serialize;

use crate::error::{Result, VortexError};
use crate::params::ModelParams;
use crate::profile::Profile;

/// Field magnitude below which the far field is treated as numerically zero.
const NEGLIGIBLE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DecayField {
    /// Fits `ln(a / √r)`.
    A,
    /// Fits `ln g`.
    G,
    /// Fits `ln(1 - f)`.
    OneMinusF,
}

impl DecayField {
    pub fn name(self) -> &'static str {
        match self {
            DecayField::A => "a",
            DecayField::G => "g",
            DecayField::OneMinusF => "1-f",
        }
    }

    /// Asymptotic rate: `β`, `α` or `min(1, 2α, 2β)`.
    pub fn expected_exponent(self, params: &ModelParams) -> f64 {
        match self {
            DecayField::A => params.beta(),
            DecayField::G => params.alpha(),
            DecayField::OneMinusF => params.gamma(),
        }
    }

    fn magnitude(self, v: f64) -> f64 {
        match self {
            DecayField::A | DecayField::G => v,
            DecayField::OneMinusF => 1.0 - v,
        }
    }

    fn log_model(self, r: f64, v: f64) -> f64 {
        match self {
            DecayField::A => (v / r.sqrt()).ln(),
            DecayField::G => v.ln(),
            DecayField::OneMinusF => (1.0 - v).ln(),
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct DecayFit {
    pub field: DecayField,
    pub window: (f64, f64),
    pub fitted_exponent: f64,
    pub expected_exponent: f64,
    pub r_squared: f64,
}

impl DecayFit {
    pub fn relative_error(&self) -> f64 {
        (self.fitted_exponent / self.expected_exponent - 1.0).abs()
    }
}

/// Fit on the default window from `r_max / 2` up to the last node before
/// the field magnitude first drops below `1e-12` (or `r_max`).
pub fn fit_decay(p: &Profile, field: DecayField, params: &ModelParams) -> Result<DecayFit> {
    let nodes = p.grid().nodes();
    let r_lo = 0.5 * p.r_max();
    let r_hi = nodes
        .iter()
        .zip(p.values())
        .position(|(&r, &v)| r >= r_lo && field.magnitude(v).abs() < NEGLIGIBLE)
        .map_or(p.r_max(), |i| nodes[i.saturating_sub(1)]);
    if r_hi < r_lo {
        return Err(VortexError::InvalidArgument(format!(
            "{} is negligible throughout [{r_lo}, {}]",
            field.name(),
            p.r_max()
        )));
    }
    fit_decay_window(p, field, params, (r_lo, r_hi))
}

/// Least-squares slope of the log-linear model over `window`.
pub fn fit_decay_window(
    p: &Profile,
    field: DecayField,
    params: &ModelParams,
    window: (f64, f64),
) -> Result<DecayFit> {
    let (r_lo, r_hi) = window;
    let mut pts = Vec::new();
    for (&r, &v) in p.grid().nodes().iter().zip(p.values()) {
        if r < r_lo || r > r_hi {
            continue;
        }
        if !(field.magnitude(v) > 0.0) {
            return Err(VortexError::InvalidArgument(format!(
                "{} is not positive at r = {r} inside the fit window",
                field.name()
            )));
        }
        pts.push((r, field.log_model(r, v)));
    }
    if pts.len() < 3 {
        return Err(VortexError::InvalidArgument(format!(
            "fit window [{r_lo}, {r_hi}] holds {} nodes",
            pts.len()
        )));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for &(x, y) in &pts {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    let slope = sxy / sxx;
    let r_squared = if syy > 0.0 {
        sxy * sxy / (sxx * syy)
    } else {
        1.0
    };
    Ok(DecayFit {
        field,
        window,
        fitted_exponent: -slope,
        expected_exponent: field.expected_exponent(params),
        r_squared,
    })
}
