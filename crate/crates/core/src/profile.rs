//! Sampled radial profiles with monotone cubic interpolation.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Result, VortexError};
use crate::grid::RadialGrid;

/// Which field a profile holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ProfileKind {
    GaugeA,
    CondensateG,
    HiggsF,
}

/// Node values of one profile function on a shared [`RadialGrid`].
///
/// Between nodes the profile is a piecewise cubic Hermite interpolant whose
/// node slopes are three-point estimates clipped to three times the smaller
/// neighbouring secant, so the interpolant is exact on quadratics and never
/// overshoots the node data on monotone spans.
#[derive(Debug, Clone)]
pub struct Profile {
    grid: Arc<RadialGrid>,
    values: Vec<f64>,
    slopes: Vec<f64>,
    kind: ProfileKind,
}

impl Profile {
    pub fn new(grid: Arc<RadialGrid>, values: Vec<f64>, kind: ProfileKind) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(VortexError::InvalidArgument(format!(
                "{} values for a grid of {} nodes",
                values.len(),
                grid.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(VortexError::NonFinite { r: grid.nodes()[i] });
        }
        let slopes = pchip_slopes(grid.nodes(), &values);
        Ok(Self {
            grid,
            values,
            slopes,
            kind,
        })
    }

    /// Profile sampled from a closure at every node.
    pub fn from_fn(
        grid: Arc<RadialGrid>,
        kind: ProfileKind,
        f: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        let values = grid.nodes().iter().map(|&r| f(r)).collect();
        Self::new(grid, values, kind)
    }

    pub fn zeros(grid: Arc<RadialGrid>, kind: ProfileKind) -> Self {
        let n = grid.len();
        Self {
            grid,
            values: vec![0.0; n],
            slopes: vec![0.0; n],
            kind,
        }
    }

    pub fn grid(&self) -> &Arc<RadialGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn kind(&self) -> ProfileKind {
        self.kind
    }

    pub fn r_max(&self) -> f64 {
        self.grid.r_max()
    }

    /// Interpolated value at `r ∈ [0, r_max]`.
    pub fn eval(&self, r: f64) -> Result<f64> {
        if !(0.0..=self.grid.r_max()).contains(&r) {
            return Err(VortexError::OutOfDomain {
                r,
                r_max: self.grid.r_max(),
            });
        }
        Ok(self.eval_in_domain(r))
    }

    /// Value at `r`, holding the end values outside the domain.
    pub fn eval_clamped(&self, r: f64) -> f64 {
        if r <= 0.0 {
            self.values[0]
        } else if r >= self.grid.r_max() {
            self.values[self.values.len() - 1]
        } else {
            self.eval_in_domain(r)
        }
    }

    fn eval_in_domain(&self, r: f64) -> f64 {
        let nodes = self.grid.nodes();
        let i = self.grid.interval(r);
        let (x0, x1) = (nodes[i], nodes[i + 1]);
        let h = x1 - x0;
        let t = (r - x0) / h;
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let (d0, d1) = (self.slopes[i] * h, self.slopes[i + 1] * h);
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * y0 + h10 * d0 + h01 * y1 + h11 * d1
    }

    /// Same grid and kind, new values.
    pub fn with_values(&self, values: Vec<f64>) -> Result<Self> {
        Self::new(Arc::clone(&self.grid), values, self.kind)
    }

    /// Largest node-wise absolute difference to `other`.
    pub fn sup_distance(&self, other: &Profile) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn is_strictly_decreasing(&self) -> bool {
        self.values.windows(2).all(|w| w[1] < w[0])
    }

    pub fn is_strictly_increasing(&self) -> bool {
        self.values.windows(2).all(|w| w[1] > w[0])
    }

    pub fn is_identically_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }
}

/// Node slopes of the monotone piecewise-cubic Hermite interpolant.
fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<f64> = (0..n - 1).map(|k| (y[k + 1] - y[k]) / h[k]).collect();
    let mut d = vec![0.0; n];
    if n == 2 {
        d[0] = delta[0];
        d[1] = delta[0];
        return d;
    }
    for k in 1..n - 1 {
        let (a, b) = (delta[k - 1], delta[k]);
        if a == 0.0 || b == 0.0 || a.signum() != b.signum() {
            d[k] = 0.0;
        } else {
            // three-point slope, clipped to keep both adjacent spans monotone
            let three = (h[k] * a + h[k - 1] * b) / (h[k - 1] + h[k]);
            let cap = 3.0 * a.abs().min(b.abs());
            d[k] = three.signum() * three.abs().min(cap);
        }
    }
    d[0] = edge_slope(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = edge_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    d
}

/// One-sided three-point end slope, limited to keep the end span monotone.
fn edge_slope(h0: f64, h1: f64, m0: f64, m1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * m0 - h0 * m1) / (h0 + h1);
    if d.signum() != m0.signum() || m0 == 0.0 {
        0.0
    } else if m0.signum() != m1.signum() && d.abs() > 3.0 * m0.abs() {
        3.0 * m0
    } else {
        d
    }
}
