//! Bessel functions needed by the gauge start and the analytic oracles.
//!
//! Power series for small arguments. `K₀`, `K₁` use the series up to
//! [`SERIES_UP_TO`], the integral `∫₀^∞ e^{-x cosh t} cosh(νt) dt` by the
//! trapezoidal rule up to [`ASYMPTOTIC_FROM`], and the Hankel asymptotic
//! expansion beyond.

use std::f64::consts::PI;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const SERIES_UP_TO: f64 = 2.0;
const ASYMPTOTIC_FROM: f64 = 12.0;
const SERIES_TERMS: usize = 200;

/// Modified Bessel function `I₀(x)`.
pub fn bessel_i0(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let (mut term, mut sum) = (1.0, 1.0);
    for k in 1..SERIES_TERMS {
        term *= q / (k * k) as f64;
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    sum
}

/// Modified Bessel function `I₁(x)`.
pub fn bessel_i1(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 0.5 * x;
    let mut sum = term;
    for k in 1..SERIES_TERMS {
        term *= q / (k * (k + 1)) as f64;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// Modified Bessel function of the second kind `K₀(x)`, `x > 0`.
pub fn bessel_k0(x: f64) -> f64 {
    if x >= ASYMPTOTIC_FROM {
        return hankel_k(0.0, x);
    }
    if x > SERIES_UP_TO {
        return cosh_integral_k(0.0, x);
    }
    let q = 0.25 * x * x;
    let mut psi = -EULER_GAMMA;
    let mut term = 1.0;
    let mut sum = psi;
    for k in 1..SERIES_TERMS {
        psi += 1.0 / k as f64;
        term *= q / (k * k) as f64;
        sum += term * psi;
        if term * psi.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum - (0.5 * x).ln() * bessel_i0(x)
}

/// Modified Bessel function of the second kind `K₁(x)`, `x > 0`.
pub fn bessel_k1(x: f64) -> f64 {
    if x >= ASYMPTOTIC_FROM {
        return hankel_k(1.0, x);
    }
    if x > SERIES_UP_TO {
        return cosh_integral_k(1.0, x);
    }
    let q = 0.25 * x * x;
    // psi(k + 1) + psi(k + 2)
    let mut psi_k = -EULER_GAMMA;
    let mut psi_k1 = 1.0 - EULER_GAMMA;
    let mut term = 1.0;
    let mut sum = psi_k + psi_k1;
    for k in 1..SERIES_TERMS {
        psi_k += 1.0 / k as f64;
        psi_k1 += 1.0 / (k + 1) as f64;
        term *= q / (k * (k + 1)) as f64;
        let t = term * (psi_k + psi_k1);
        sum += t;
        if t.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    1.0 / x + (0.5 * x).ln() * bessel_i1(x) - 0.25 * x * sum
}

fn cosh_integral_k(nu: f64, x: f64) -> f64 {
    // integrand below e^{-x} · 1e-17 beyond t_max
    let t_max = (1.0 + 40.0 / x).acosh();
    let h = 0.02;
    let n = (t_max / h).ceil() as usize;
    let mut sum = 0.5 * (-x).exp();
    for k in 1..=n {
        let t = k as f64 * h;
        sum += (-x * t.cosh()).exp() * (nu * t).cosh();
    }
    h * sum
}

fn hankel_k(nu: f64, x: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..60 {
        let odd = (2 * k - 1) as f64;
        let next = term * (mu - odd * odd) / (k as f64 * 8.0 * x);
        if next.abs() >= term.abs() {
            break;
        }
        term = next;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    (PI / (2.0 * x)).sqrt() * (-x).exp() * sum
}

/// Bessel function `J₀(x)` by its power series; intended for `|x| ≲ 10`.
pub fn bessel_j0(x: f64) -> f64 {
    let q = -0.25 * x * x;
    let (mut term, mut sum) = (1.0, 1.0);
    for k in 1..SERIES_TERMS {
        term *= q / (k * k) as f64;
        sum += term;
        if term.abs() < 1e-18 {
            break;
        }
    }
    sum
}

/// First positive zero of `J₀`, by bisection on the series.
pub fn j0_first_zero() -> f64 {
    let (mut lo, mut hi) = (2.0_f64, 3.0_f64);
    while hi - lo > 1e-15 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if bessel_j0(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
