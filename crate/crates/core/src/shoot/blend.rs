//! Profile reconstruction from a bracketing undershoot/overshoot pair.
//!
//! Once the bracket is at floating-point width the two trajectories agree
//! until the growing far-field mode, seeded by the parameter error, becomes
//! visible. Up to that point the solution is the combination of the pair
//! that cancels the growing mode; past it the profile is continued by an
//! exponential fitted to the trusted part.

use crate::error::{Result, Stage, VortexError};
use crate::integrate::Trajectory;
use crate::profile::ProfileKind;

/// Relative separation below which the undershoot alone is accurate.
const TIGHT: f64 = 1e-6;
/// Absolute separation (in units of the field scale) up to which both
/// trajectories stay in the linear regime around the solution.
const LINEAR: f64 = 1e-5;

pub(crate) struct Combined {
    /// Values on the nodes from the trajectories' first node to `r_max`.
    pub values: Vec<f64>,
    pub trust_radius: f64,
}

/// Map the field to the quantity that decays to zero, with its slope.
pub(crate) fn distance(kind: ProfileKind, y: f64, yp: f64) -> (f64, f64) {
    match kind {
        ProfileKind::HiggsF => (1.0 - y, -yp),
        ProfileKind::GaugeA | ProfileKind::CondensateG => (y, yp),
    }
}

fn from_distance(kind: ProfileKind, d: f64) -> f64 {
    match kind {
        ProfileKind::HiggsF => 1.0 - d,
        ProfileKind::GaugeA | ProfileKind::CondensateG => d,
    }
}

/// Power of `r` in the far-field form `r^p e^{-κ r}`.
fn tail_power(kind: ProfileKind) -> f64 {
    match kind {
        ProfileKind::GaugeA => 0.5,
        ProfileKind::CondensateG | ProfileKind::HiggsF => -0.5,
    }
}

fn unresolved(reason: String) -> VortexError {
    VortexError::Unresolved {
        stage: Stage::Gauge,
        reason,
    }
}

pub(crate) fn combine(
    under: &Trajectory,
    over: &Trajectory,
    nodes: &[f64],
    kind: ProfileKind,
    far_scale: f64,
    eps_bc: f64,
) -> Result<Combined> {
    let first = under.first_node;
    if over.first_node != first {
        return Err(unresolved(
            "bracketing trajectories start on different nodes".into(),
        ));
    }
    let n = nodes.len();
    let common = under.end_node().min(over.end_node()).min(n);
    let at = |t: &Trajectory, k: usize| distance(kind, t.values[k - first], t.slopes[k - first]);

    let mut tight = None;
    let mut linear = None;
    for k in first..common {
        let (du, _) = at(under, k);
        let (dover, _) = at(over, k);
        let sep = (dover - du).abs();
        if !(sep <= LINEAR * far_scale) {
            break;
        }
        linear = Some(k);
        if sep <= TIGHT * du.abs() && (k == first || tight == Some(k - 1)) {
            tight = Some(k);
        }
    }
    let Some(k_far) = linear else {
        return Err(unresolved(format!(
            "bracketing shots separate at the first node r = {}",
            nodes[first]
        )));
    };
    let p = tail_power(kind);

    let blended = match kind {
        ProfileKind::GaugeA | ProfileKind::CondensateG => {
            cancel_growing(&at(under, k_far), &at(over, k_far), nodes[k_far], p)
        }
        ProfileKind::HiggsF => straighten(|k| (at(under, k), at(over, k)), nodes, first, k_far, p),
    }
    .map(|(t, kappa)| (t, k_far, Some(kappa)));
    let (theta, trust, kappa) = match (blended, tight) {
        (Some(b), _) => b,
        (None, Some(k)) => (0.5, k, None),
        (None, None) => (0.5, first, None),
    };

    let mut dist: Vec<f64> = (first..=trust)
        .map(|k| {
            let (du, _) = at(under, k);
            let (dov, _) = at(over, k);
            du + theta * (dov - du)
        })
        .collect();

    if trust + 1 < n {
        let r_t = nodes[trust];
        let d_t = *dist.last().unwrap();
        if !(d_t > 0.0 && d_t <= eps_bc * far_scale) {
            return Err(unresolved(format!(
                "shots separate at r = {r_t} where the field {d_t:e} is not yet small; \
                 tighten param_tol or integration_tol"
            )));
        }
        let kappa = match kappa {
            Some(k) => k,
            None => fit_rate(&nodes[first..=trust], &dist, p, r_t)?,
        };
        for &r in &nodes[trust + 1..] {
            dist.push(d_t * (r / r_t).powf(p) * (-kappa * (r - r_t)).exp());
        }
    }
    Ok(Combined {
        values: dist.into_iter().map(|d| from_distance(kind, d)).collect(),
        trust_radius: nodes[trust],
    })
}

/// Homogeneous far field: the separation of the pair is the growing mode,
/// with log-derivative `p/r + κ`, and the solution is the decaying mode with
/// `p/r - κ`. Returns the overshoot weight that leaves only the latter.
fn cancel_growing(u: &(f64, f64), o: &(f64, f64), r: f64, p: f64) -> Option<(f64, f64)> {
    let (du, dup) = *u;
    let (d, dp) = (o.0 - du, o.1 - dup);
    let kappa = dp / d - p / r;
    let log_slope = p / r - kappa;
    let t = (log_slope * du - dup) / (dp - log_slope * d);
    (t.is_finite() && (-0.5..=1.5).contains(&t) && kappa > 0.0).then_some((t, kappa))
}

/// Sourced far field (`1 - f` is driven by `g²` and `a²/r²` and may decay
/// slower than its own mass): choose the weight for which `ln(d / r^p)` ends
/// with the same slope it has on average over the last few units of radius,
/// i.e. shows neither the upturn of an undershoot nor the plunge of an
/// overshoot. Returns the weight and the local decay rate.
fn straighten(
    at: impl Fn(usize) -> ((f64, f64), (f64, f64)),
    nodes: &[f64],
    first: usize,
    k_far: usize,
    p: f64,
) -> Option<(f64, f64)> {
    let r_far = nodes[k_far];
    let width = (0.2 * r_far).max(2.0);
    let k_lo = (first..=k_far).find(|&k| nodes[k] >= r_far - width)?;
    if k_far - k_lo < 4 {
        return None;
    }
    // end slope minus window slope of ln(d / r^p); None where d ≤ 0
    let mismatch = |t: f64| -> Option<(f64, f64)> {
        let mut pts = Vec::with_capacity(k_far - k_lo + 1);
        for k in k_lo..=k_far {
            let ((du, _), (dov, _)) = at(k);
            let y = du + t * (dov - du);
            if !(y > 0.0) {
                return None;
            }
            pts.push((nodes[k], (y / nodes[k].powf(p)).ln()));
        }
        let ((du, dup), (dov, dovp)) = at(k_far);
        let y = du + t * (dov - du);
        let end = (dup + t * (dovp - dup)) / y - p / r_far;
        Some((end - lsq_slope(&pts), end))
    };
    let (mut lo, mut hi) = (-0.5, 1.5);
    let m_lo = mismatch(lo);
    let m_hi = mismatch(hi);
    // an overshoot weight can make d negative in the window: pull in `hi`
    let (mut m_lo, mut m_hi) = (
        m_lo?,
        match m_hi {
            Some(m) => m,
            None => {
                let mut t = hi;
                loop {
                    t = 0.5 * (t + lo);
                    if t <= 0.0 {
                        return None;
                    }
                    if let Some(m) = mismatch(t) {
                        hi = t;
                        break m;
                    }
                }
            }
        },
    );
    if !(m_lo.0 > 0.0 && m_hi.0 < 0.0) {
        return None;
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let m = mismatch(mid)?;
        if m.0 > 0.0 {
            lo = mid;
            m_lo = m;
        } else {
            hi = mid;
            m_hi = m;
        }
    }
    let (t, end) = if m_lo.0.abs() < m_hi.0.abs() {
        (lo, m_lo.1)
    } else {
        (hi, m_hi.1)
    };
    let kappa = -end;
    (kappa > 0.0).then_some((t, kappa))
}

fn lsq_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|q| q.0).sum::<f64>() / n;
    let my = pts.iter().map(|q| q.1).sum::<f64>() / n;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for &(x, y) in pts {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    sxy / sxx
}

/// Least-squares decay rate of `ln(d / r^p)` over a window ending at `r_t`.
fn fit_rate(nodes: &[f64], dist: &[f64], p: f64, r_t: f64) -> Result<f64> {
    let width = (0.2 * r_t).max(1.0);
    let (mut n, mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (&r, &d) in nodes.iter().zip(dist).rev() {
        if r < r_t - width {
            break;
        }
        if !(d > 0.0) {
            continue;
        }
        let y = (d / r.powf(p)).ln();
        n += 1.0;
        sx += r;
        sy += y;
        sxx += r * r;
        sxy += r * y;
    }
    let denom = n * sxx - sx * sx;
    let kappa = -(n * sxy - sx * sy) / denom;
    if n < 3.0 || !(kappa > 0.0) || !kappa.is_finite() {
        return Err(unresolved(format!(
            "no decaying tail to continue from r = {r_t} (rate {kappa})"
        )));
    }
    Ok(kappa)
}
