//! Dormand–Prince 5(4) step with its continuous extension.

use super::{RadialOde, State};
use crate::error::{Result, VortexError};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// fifth-order weights minus embedded fourth-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

// continuous extension (Hairer, Nørsett & Wanner)
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

type Vec2 = [f64; 2];

#[inline]
fn axpy(y: Vec2, h: f64, terms: &[(f64, Vec2)]) -> Vec2 {
    let mut out = y;
    for &(c, k) in terms {
        out[0] += h * c * k[0];
        out[1] += h * c * k[1];
    }
    out
}

#[inline]
pub(crate) fn deriv<O: RadialOde + ?Sized>(ode: &O, r: f64, y: Vec2) -> Vec2 {
    [y[1], ode.accel(r, y[0], y[1])]
}

/// One accepted-or-not Dormand–Prince step.
#[derive(Debug, Clone)]
pub struct StepResult {
    pub state: State,
    /// Componentwise local error estimate `(y, y')`.
    pub error: Vec2,
    pub(crate) dense: Dense,
}

/// Coefficients of the fourth-order interpolant over one step.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Dense {
    r0: f64,
    h: f64,
    c1: Vec2,
    c2: Vec2,
    c3: Vec2,
    c4: Vec2,
    c5: Vec2,
}

impl Dense {
    /// Interpolated `(y, y')` at `r` inside the step.
    pub(crate) fn at(&self, r: f64) -> Vec2 {
        let t = ((r - self.r0) / self.h).clamp(0.0, 1.0);
        let s = 1.0 - t;
        let mut out = [0.0; 2];
        for i in 0..2 {
            out[i] = self.c1[i]
                + t * (self.c2[i] + s * (self.c3[i] + t * (self.c4[i] + s * self.c5[i])));
        }
        out
    }
}

/// One Dormand–Prince 5(4) step of size `h` from `state`.
pub fn step_rk<O: RadialOde + ?Sized>(ode: &O, state: State, h: f64) -> Result<StepResult> {
    if !(h > 0.0) {
        return Err(VortexError::InvalidArgument(format!(
            "step must be positive, got {h}"
        )));
    }
    let k1 = deriv(ode, state.r, [state.y, state.yp]);
    let (step, _) = dp5(ode, state, k1, h);
    if !step.state.is_finite() {
        return Err(VortexError::NonFinite { r: state.r + h });
    }
    Ok(step)
}

/// Step with a precomputed first stage; returns the last stage (FSAL).
pub(crate) fn dp5<O: RadialOde + ?Sized>(
    ode: &O,
    state: State,
    k1: Vec2,
    h: f64,
) -> (StepResult, Vec2) {
    let r = state.r;
    let y = [state.y, state.yp];
    let k2 = deriv(ode, r + C2 * h, axpy(y, h, &[(A21, k1)]));
    let k3 = deriv(ode, r + C3 * h, axpy(y, h, &[(A31, k1), (A32, k2)]));
    let k4 = deriv(
        ode,
        r + C4 * h,
        axpy(y, h, &[(A41, k1), (A42, k2), (A43, k3)]),
    );
    let k5 = deriv(
        ode,
        r + C5 * h,
        axpy(y, h, &[(A51, k1), (A52, k2), (A53, k3), (A54, k4)]),
    );
    let k6 = deriv(
        ode,
        r + h,
        axpy(
            y,
            h,
            &[(A61, k1), (A62, k2), (A63, k3), (A64, k4), (A65, k5)],
        ),
    );
    let y1 = axpy(
        y,
        h,
        &[(A71, k1), (A73, k3), (A74, k4), (A75, k5), (A76, k6)],
    );
    let r1 = r + h;
    let k7 = deriv(ode, r1, y1);
    let error = axpy(
        [0.0; 2],
        h,
        &[(E1, k1), (E3, k3), (E4, k4), (E5, k5), (E6, k6), (E7, k7)],
    );

    let mut dense = Dense {
        r0: r,
        h,
        c1: y,
        c2: [0.0; 2],
        c3: [0.0; 2],
        c4: [0.0; 2],
        c5: [0.0; 2],
    };
    for i in 0..2 {
        let dy = y1[i] - y[i];
        let bspl = h * k1[i] - dy;
        dense.c2[i] = dy;
        dense.c3[i] = bspl;
        dense.c4[i] = dy - h * k7[i] - bspl;
        dense.c5[i] =
            h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
    }
    (
        StepResult {
            state: State {
                r: r1,
                y: y1[0],
                yp: y1[1],
            },
            error,
            dense,
        },
        k7,
    )
}
