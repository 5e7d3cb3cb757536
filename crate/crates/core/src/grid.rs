//! Stretched radial meshes on `[0, r_max]`.

use serde::Serialize;

use crate::error::{check_finite, Result, VortexError};

/// Largest admissible first interior node; the series starts are only
/// accurate close to the origin.
pub const MAX_R_START: f64 = 1e-2;

/// Strictly increasing mesh with `nodes[0] = 0` and `nodes[n-1] = r_max`.
///
/// Spacing grows geometrically: `nodes[i+1] - nodes[i] = h1 * stretch^i`.
/// The first interior node `nodes[1] = h1` is where every shot starts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialGrid {
    r_max: f64,
    stretch: f64,
    nodes: Vec<f64>,
}

/// Checked constructor for production meshes (`n >= 16`, `r_max >= 10`,
/// first node no larger than [`MAX_R_START`]).
pub fn make_grid(r_max: f64, n_nodes: usize, stretch: f64) -> Result<RadialGrid> {
    if n_nodes < 16 {
        return Err(VortexError::InvalidArgument(format!(
            "need at least 16 nodes, got {n_nodes}"
        )));
    }
    if !(r_max >= 10.0) {
        return Err(VortexError::InvalidArgument(format!(
            "r_max must be at least 10, got {r_max}"
        )));
    }
    let grid = RadialGrid::geometric(r_max, n_nodes, stretch)?;
    if grid.r_start() > MAX_R_START {
        return Err(VortexError::InvalidArgument(format!(
            "first node {} exceeds {MAX_R_START}; add nodes or increase stretch",
            grid.r_start()
        )));
    }
    Ok(grid)
}

impl RadialGrid {
    /// Geometric mesh without the production-size checks of [`make_grid`].
    pub fn geometric(r_max: f64, n_nodes: usize, stretch: f64) -> Result<Self> {
        check_finite("r_max", r_max)?;
        check_finite("stretch", stretch)?;
        if r_max <= 0.0 {
            return Err(VortexError::InvalidArgument(format!(
                "r_max must be positive, got {r_max}"
            )));
        }
        if n_nodes < 3 {
            return Err(VortexError::InvalidArgument(format!(
                "need at least 3 nodes, got {n_nodes}"
            )));
        }
        if stretch < 1.0 {
            return Err(VortexError::InvalidArgument(format!(
                "stretch must be >= 1, got {stretch}"
            )));
        }
        let intervals = n_nodes - 1;
        let mut nodes = Vec::with_capacity(n_nodes);
        if stretch == 1.0 {
            let h = r_max / intervals as f64;
            nodes.extend((0..n_nodes).map(|i| i as f64 * h));
        } else {
            // r_i = r_max * (s^i - 1) / (s^N - 1)
            let ln_s = stretch.ln();
            let denom = (intervals as f64 * ln_s).exp_m1();
            nodes.extend((0..n_nodes).map(|i| r_max * (i as f64 * ln_s).exp_m1() / denom));
        }
        nodes[intervals] = r_max;
        if !nodes.windows(2).all(|w| w[1] > w[0]) {
            return Err(VortexError::InvalidArgument(
                "stretch too large: mesh spacing underflows".into(),
            ));
        }
        Ok(Self {
            r_max,
            stretch,
            nodes,
        })
    }

    /// Mesh with every interval split in two (`2n - 1` nodes, stretch
    /// `sqrt(stretch)`); the old nodes are kept up to rounding.
    pub fn refined(&self) -> Result<Self> {
        Self::geometric(self.r_max, 2 * self.nodes.len() - 1, self.stretch.sqrt())
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn r_start(&self) -> f64 {
        self.nodes[1]
    }

    pub fn stretch(&self) -> f64 {
        self.stretch
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Index `i` of the interval `[nodes[i], nodes[i+1]]` containing `r`.
    pub fn interval(&self, r: f64) -> usize {
        let upper = self.nodes.partition_point(|&x| x <= r);
        upper.clamp(1, self.nodes.len() - 1) - 1
    }
}

impl Default for RadialGrid {
    /// 3000 nodes on `[0, 25]` with stretch 1.001 (first node ~1.3e-3).
    fn default() -> Self {
        make_grid(25.0, 3000, 1.001).expect("default grid parameters are valid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_five_nodes() {
        let g = RadialGrid::geometric(20.0, 5, 1.0).unwrap();
        assert_eq!(g.nodes(), &[0.0, 5.0, 10.0, 15.0, 20.0]);
    }

    #[test]
    fn uniform_hundredth_spacing() {
        let g = make_grid(20.0, 2001, 1.0).unwrap();
        assert!((g.r_start() - 0.01).abs() < 1e-15);
        for w in g.nodes().windows(2) {
            assert!((w[1] - w[0] - 0.01).abs() < 1e-12);
        }
    }

    #[test]
    fn stretched_spacing_ratio() {
        let g = make_grid(30.0, 1501, 1.002).unwrap();
        let n = g.nodes();
        let first = n[1] - n[0];
        let last = n[n.len() - 1] - n[n.len() - 2];
        // independent product of 1499 stretch factors
        let mut expected = 1.0;
        for _ in 0..1499 {
            expected *= 1.002;
        }
        assert!((last / first / expected - 1.0).abs() < 1e-9);
        assert_eq!(n[0], 0.0);
        assert_eq!(*n.last().unwrap(), 30.0);
    }

    #[test]
    fn default_grid_is_valid() {
        let g = RadialGrid::default();
        assert_eq!(g.len(), 3000);
        assert!(g.r_start() > 1e-3 && g.r_start() < 2e-3);
    }

    #[test]
    fn refinement_keeps_old_nodes() {
        let g = make_grid(25.0, 400, 1.01).unwrap();
        let fine = g.refined().unwrap();
        assert_eq!(fine.len(), 799);
        for (i, &r) in g.nodes().iter().enumerate() {
            assert!((fine.nodes()[2 * i] - r).abs() < 1e-12 * (1.0 + r));
        }
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(make_grid(25.0, 15, 1.0).is_err());
        assert!(make_grid(5.0, 100, 1.0).is_err());
        assert!(make_grid(25.0, 100, 0.9).is_err());
        assert!(make_grid(f64::INFINITY, 100, 1.0).is_err());
        // first node 0.25 is far from the origin
        assert!(make_grid(25.0, 101, 1.0).is_err());
    }

    #[test]
    fn construction_is_deterministic() {
        let a = make_grid(25.0, 3000, 1.003).unwrap();
        let b = make_grid(25.0, 3000, 1.003).unwrap();
        assert!(a
            .nodes()
            .iter()
            .zip(b.nodes())
            .all(|(x, y)| x.to_bits() == y.to_bits()));
    }

    #[test]
    fn interval_lookup() {
        let g = RadialGrid::geometric(20.0, 5, 1.0).unwrap();
        assert_eq!(g.interval(0.0), 0);
        assert_eq!(g.interval(4.9), 0);
        assert_eq!(g.interval(5.0), 1);
        assert_eq!(g.interval(20.0), 3);
    }
}
