//! The three profile equations with frozen coefficient profiles.

use super::RadialOde;
use crate::params::ModelParams;
use crate::profile::Profile;

/// `a'' - a'/r - beta^2 f^2 a = 0`, integrated in `a` itself so the far
/// field is not swamped by rounding of `1 - a`.
pub struct GaugeEquation<'a> {
    pub beta: f64,
    pub f: &'a Profile,
    pub r_start: f64,
}

impl RadialOde for GaugeEquation<'_> {
    fn singular_weight(&self) -> f64 {
        -1.0
    }

    #[inline]
    fn source(&self, r: f64, a: f64) -> f64 {
        let f = self.f.eval_clamped(r);
        self.beta * self.beta * f * f * a
    }

    fn r_start(&self) -> f64 {
        self.r_start
    }
}

/// `g'' + g'/r - alpha^2 g - (f^2 + g^2 - 1) g / 2 = 0`.
pub struct CondensateEquation<'a> {
    pub params: ModelParams,
    pub f: &'a Profile,
    pub r_start: f64,
}

impl RadialOde for CondensateEquation<'_> {
    fn singular_weight(&self) -> f64 {
        1.0
    }

    #[inline]
    fn source(&self, r: f64, g: f64) -> f64 {
        let f = self.f.eval_clamped(r);
        let alpha = self.params.alpha();
        (alpha * alpha + 0.5 * (f * f + g * g - 1.0)) * g
    }

    fn r_start(&self) -> f64 {
        self.r_start
    }
}

/// `f'' + f'/r - a^2 f / r^2 - (f^2 + g^2 - 1) f / 2 = 0`.
pub struct HiggsEquation<'a> {
    pub a: &'a Profile,
    pub g: &'a Profile,
    pub r_start: f64,
}

impl RadialOde for HiggsEquation<'_> {
    fn singular_weight(&self) -> f64 {
        1.0
    }

    #[inline]
    fn source(&self, r: f64, f: f64) -> f64 {
        let a = self.a.eval_clamped(r);
        let g = self.g.eval_clamped(r);
        a * a * f / (r * r) + 0.5 * (f * f + g * g - 1.0) * f
    }

    fn r_start(&self) -> f64 {
        self.r_start
    }
}

/// Closure-backed equation, mostly for tests and comparison problems.
pub struct FnOde<F> {
    pub weight: f64,
    pub r_start: f64,
    pub source: F,
}

impl<F: Fn(f64, f64) -> f64 + Sync> RadialOde for FnOde<F> {
    fn singular_weight(&self) -> f64 {
        self.weight
    }

    fn source(&self, r: f64, y: f64) -> f64 {
        (self.source)(r, y)
    }

    fn r_start(&self) -> f64 {
        self.r_start
    }
}
