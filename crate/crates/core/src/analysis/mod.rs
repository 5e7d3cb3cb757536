//! Checks on computed solutions: residuals, far-field fits, an independent
//! collocation solver, closed-form special cases and the phase scan.

mod collocation;
mod decay;
mod invariants;
mod oracles;
mod origin;
mod residual;
mod scan;
mod stencil;

pub use collocation::{collocation_oracle, CollocationConfig, CollocationResult};
pub use decay::{fit_decay, fit_decay_window, DecayField, DecayFit};
pub use invariants::invariant_violations;
pub use oracles::{analytic_a_oracle, bessel_zero_oracle};
pub use origin::{origin_bounds, OriginBounds};
pub use residual::{pointwise_residuals, residual_norms, residuals_of};
pub use scan::{
    find_boundary, g0_at, scan_phase, BoundarySearch, PhaseDiagram, PointStatus, DEFAULT_THRESHOLD,
};

use crate::outcome::VortexSolution;

/// Fill in residual norms and far-field exponents.
pub fn attach_diagnostics(sol: &mut VortexSolution) {
    sol.residuals = residual_norms(sol);
    let fields = [
        (DecayField::A, &sol.a),
        (DecayField::G, &sol.g),
        (DecayField::OneMinusF, &sol.f),
    ];
    sol.decay_fits = fields.map(|(field, p)| {
        fit_decay(p, field, &sol.params)
            .ok()
            .map(|fit| fit.fitted_exponent)
    });
}
