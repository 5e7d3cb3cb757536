//! Closed-form special cases.

use crate::special::{bessel_k1, j0_first_zero};

/// `β r K₁(β r)`: the gauge profile for `f ≡ 1` with `a(0) = 1`.
pub fn analytic_a_oracle(beta: f64, r: f64) -> f64 {
    let x = beta * r;
    if x == 0.0 {
        1.0
    } else {
        x * bessel_k1(x)
    }
}

/// First zero `j₀ / √μ` of the regular solution of `h'' + h'/r + μh = 0`.
/// `NaN` unless `mu > 0`.
pub fn bessel_zero_oracle(mu: f64) -> f64 {
    if mu > 0.0 {
        j0_first_zero() / mu.sqrt()
    } else {
        f64::NAN
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauge_oracle() {
        assert!((analytic_a_oracle(1.0, 1e-9) - 1.0).abs() < 1e-12);
        assert!((analytic_a_oracle(1.0, 1.0) - 0.601_907_230_2).abs() < 1e-10);
        // √(π/2x) x e^{-x} with its first correction
        let x = 30.0;
        let lead = (std::f64::consts::PI / (2.0 * x)).sqrt() * x * (-x).exp();
        assert!((analytic_a_oracle(1.0, x) / (lead * (1.0 + 3.0 / (8.0 * x))) - 1.0).abs() < 1e-3);
    }

    #[test]
    fn zero_oracle() {
        assert!((bessel_zero_oracle(1.0) - 2.404_825_558).abs() < 1e-8);
        assert!((bessel_zero_oracle(4.0) - 0.5 * bessel_zero_oracle(1.0)).abs() < 1e-15);
        assert!(bessel_zero_oracle(0.0).is_nan());
    }
}
