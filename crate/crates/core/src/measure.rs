//! Desk-scale realization of the proof's measure constructions.
//!
//! The outer measure of an open geodesic cap `G` is the sup of
//! `Ṽ(f) = ∫ theta(f) dm` over bumps `f` supported in `G`; the content of a
//! closed cap `K` is the inf over bumps that equal `lambda` on `K`. Both are
//! searched over the two-parameter trapezoidal bump family (plateau height
//! and shoulder) by grid search plus golden-section refinement.
//!
//! Bump integrands are zonal (functions of the geodesic angle to the cap
//! center alone), so `Ṽ(f)` reduces exactly to a one-dimensional integral
//! `sigma_{n-2} ∫ theta(profile(phi)) sin^{n-2}(phi) dphi`, evaluated with
//! Gauss–Legendre panels per smooth segment. This keeps steep shoulders
//! fully resolved at any quadrature degree; a product rule over the sphere
//! cannot localize the cap boundary sharply enough for the 5% oracle
//! tolerances (see the bump tests for the cross-check against the raw
//! rule).

use crate::body::GeodesicCap;
use crate::quadrature::{gauss_legendre, neumaier_sum, SphereQuadrature};
use crate::sphere::surface_measure;
use crate::theta::{ThetaError, ThetaFunction};
use serde::Serialize;
use thiserror::Error;

/// Relative width floor of the bump shoulder: keeps the family inside the
/// open cap (`f ≺ G` needs support strictly controlled by `G`) and bounds
/// the plateau/ramp bias reported alongside each estimate.
pub const SHOULDER_FLOOR: f64 = 1e-6;

/// Gauss–Legendre panel order for the zonal segments.
const ZONAL_ORDER: usize = 48;

#[derive(Debug, Error)]
pub enum MeasureError {
    #[error("theta must carry the positive flag (theta >= 0, theta(0) = 0)")]
    ThetaNotPositive,
    #[error("dimension mismatch: cap has n = {cap}, rule has n = {rule}")]
    DimensionMismatch { cap: usize, rule: usize },
    #[error("height lambda = {lambda} exceeds the theta domain bound {bound}")]
    DomainExceeded { lambda: f64, bound: f64 },
    #[error("optimizer budget must be at least 4, got {0}")]
    InsufficientBudget(usize),
    #[error("need at least 3 caps, got {0}")]
    TooFewCaps(usize),
    #[error("cap leaves no room for a shoulder (angle {0})")]
    NoShoulderRoom(f64),
    #[error("lambda must be finite and nonnegative, got {0}")]
    InvalidLambda(f64),
    #[error(transparent)]
    Theta(#[from] ThetaError),
}

/// One bump evaluation in the optimizer trace.
#[derive(Debug, Clone, Serialize)]
pub struct BumpTrial {
    pub height: f64,
    pub inner_angle: f64,
    pub outer_angle: f64,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MeasureTarget {
    /// Sup of `Ṽ(f)` over `f / lambda ≺ G`.
    Outer { cap: GeodesicCap, lambda: f64 },
    /// Inf of `Ṽ(f)` over `K ≺ f / lambda`.
    Content { cap: GeodesicCap, lambda: f64 },
}

/// Result of one sup/inf search over the bump family.
#[derive(Debug, Clone, Serialize)]
pub struct MeasureEstimate {
    pub target: MeasureTarget,
    pub value: f64,
    pub best: BumpTrial,
    pub trace: Vec<BumpTrial>,
    pub budget: usize,
    pub evaluations_used: usize,
    pub theta: String,
    /// Bound on the gap to the ideal family limit induced by the finite
    /// shoulder of the best bump.
    pub bias_bound: f64,
}

/// Ratios `content / m(cap)` against the direct value `theta(lambda)`.
#[derive(Debug, Clone, Serialize)]
pub struct ProportionalityReport {
    pub lambda: f64,
    pub cap_angles: Vec<f64>,
    pub ratios: Vec<f64>,
    /// Mean ratio: the estimated proportionality constant.
    pub theta_estimate: f64,
    pub max_relative_deviation: f64,
    /// `theta(lambda)` evaluated directly for the cross-check.
    pub theta_direct: f64,
}

/// One row of the vanishing check: an outer estimate against the
/// absolute-continuity bound `vartheta_lambda * m(G)`.
#[derive(Debug, Clone, Serialize)]
pub struct VanishingRow {
    pub cap_angle: f64,
    pub cap_measure: f64,
    pub bound: f64,
    pub estimate: f64,
}

/// `Ṽ` of the trapezoidal bump with the given profile, by exact zonal
/// reduction. Panels: `[0, inner]` (plateau), `[inner, outer]` (ramp); the
/// profile vanishes beyond `outer`.
pub fn bump_valuation(
    theta: &ThetaFunction,
    n: usize,
    inner_angle: f64,
    outer_angle: f64,
    height: f64,
) -> Result<f64, MeasureError> {
    if height > theta.bound() {
        return Err(MeasureError::DomainExceeded {
            lambda: height,
            bound: theta.bound(),
        });
    }
    // sigma_{n-2}: the measure of S^{n-2} (2 points for n = 2).
    let sigma_prev = if n == 2 {
        2.0
    } else {
        surface_measure(n - 1).expect("n >= 3")
    };
    let plateau = theta.eval_in_domain(height)
        * sigma_prev
        * panel_integral(0.0, inner_angle, n, |_| 1.0);
    let width = outer_angle - inner_angle;
    let ramp = sigma_prev
        * panel_integral(inner_angle, outer_angle, n, |phi| {
            theta.eval_in_domain(height * (outer_angle - phi) / width)
        });
    Ok(plateau + ramp)
}

/// `∫_a^b g(phi) sin^{n-2}(phi) dphi` by a single Gauss–Legendre panel.
fn panel_integral(a: f64, b: f64, n: usize, g: impl Fn(f64) -> f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let (x, w) = gl_cached();
    let half = (b - a) / 2.0;
    let mid = (a + b) / 2.0;
    let terms = x
        .iter()
        .zip(w)
        .map(|(xi, wi)| {
            let phi = mid + half * xi;
            wi * half * g(phi) * phi.sin().powi(n as i32 - 2)
        })
        .collect::<Vec<_>>();
    neumaier_sum(terms.into_iter())
}

fn gl_cached() -> (&'static [f64], &'static [f64]) {
    use std::sync::OnceLock;
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    let (x, w) = RULE.get_or_init(|| gauss_legendre(ZONAL_ORDER));
    (x, w)
}

struct Tracker<'a> {
    theta: &'a ThetaFunction,
    n: usize,
    budget: usize,
    trace: Vec<BumpTrial>,
}

impl Tracker<'_> {
    fn try_eval(&mut self, height: f64, inner: f64, outer: f64) -> Option<f64> {
        if self.trace.len() >= self.budget {
            return None;
        }
        let value = bump_valuation(self.theta, self.n, inner, outer, height).ok()?;
        self.trace.push(BumpTrial {
            height,
            inner_angle: inner,
            outer_angle: outer,
            value,
        });
        Some(value)
    }

    fn remaining(&self) -> usize {
        self.budget - self.trace.len()
    }
}

fn precheck(
    theta: &ThetaFunction,
    lambda: f64,
    budget: usize,
) -> Result<(), MeasureError> {
    if !theta.is_positive() {
        return Err(MeasureError::ThetaNotPositive);
    }
    if !(lambda.is_finite() && lambda >= 0.0) {
        return Err(MeasureError::InvalidLambda(lambda));
    }
    if lambda > theta.bound() {
        return Err(MeasureError::DomainExceeded {
            lambda,
            bound: theta.bound(),
        });
    }
    if budget < 4 {
        return Err(MeasureError::InsufficientBudget(budget));
    }
    Ok(())
}

/// Largest nested grid size `2^k + 1` that fits the allowance, so larger
/// budgets search supersets of smaller budgets' grids.
fn nested_grid_len(allowance: usize) -> usize {
    let mut len = 3;
    while 2 * len - 1 <= allowance {
        len = 2 * len - 1;
    }
    len
}

/// Estimates the outer measure `mu*_{V,lambda}(G) = sup { Ṽ(f) : f/lambda ≺ G }`
/// over the bump family `{ make_bump(G, h, s) : 0 <= h <= lambda, s in (0,1) }`.
///
/// Grid search over heights at the widest admissible plateau, golden-section
/// refinement of the height, and a shoulder sweep. The returned value is the
/// best evaluation seen: a lower bound of the family sup.
pub fn estimate_outer_measure(
    theta: &ThetaFunction,
    cap: &GeodesicCap,
    lambda: f64,
    budget: usize,
    q: &SphereQuadrature,
) -> Result<MeasureEstimate, MeasureError> {
    precheck(theta, lambda, budget)?;
    if cap.dim() != q.dim() {
        return Err(MeasureError::DimensionMismatch {
            cap: cap.dim(),
            rule: q.dim(),
        });
    }
    let n = q.dim();
    let alpha = cap.angle();
    let s_hi = 1.0 - SHOULDER_FLOOR;
    let mut tracker = Tracker {
        theta,
        n,
        budget,
        trace: Vec::new(),
    };

    // Stage A: nested height grid at the widest plateau.
    let reserve = (budget / 8).clamp(2, 12);
    let grid_len = nested_grid_len((budget - reserve) / 2).min(budget - reserve);
    let mut best_h = 0.0;
    let mut best_val = f64::NEG_INFINITY;
    for i in 0..grid_len {
        let h = lambda * i as f64 / (grid_len - 1) as f64;
        if let Some(v) = tracker.try_eval(h, s_hi * alpha, alpha) {
            if v > best_val || (v == best_val && h < best_h) {
                best_val = v;
                best_h = h;
            }
        }
    }

    // Stage B: golden-section refinement of the height around the grid max.
    let spacing = lambda / (grid_len - 1) as f64;
    let lo = (best_h - spacing).max(0.0);
    let hi = (best_h + spacing).min(lambda);
    let golden_budget = tracker.remaining().saturating_sub(reserve);
    golden_max(
        lo,
        hi,
        golden_budget,
        |h, t| t.try_eval(h, s_hi * alpha, alpha),
        &mut tracker,
    );

    // Stage C: shoulder sweep at the refined height.
    let h_star = best_of(&tracker.trace, true).height;
    for s in [0.25, 0.5, 0.75, 0.9] {
        tracker.try_eval(h_star, s * alpha, alpha);
    }

    let best = best_of(&tracker.trace, true).clone();
    let theta_max = theta_max_on(theta, lambda);
    let bias_bound =
        theta_max * (cap.measure() - crate::body::cap_measure(n, best.inner_angle));
    let evaluations_used = tracker.trace.len();
    Ok(MeasureEstimate {
        target: MeasureTarget::Outer {
            cap: cap.clone(),
            lambda,
        },
        value: best.value,
        best,
        evaluations_used,
        trace: tracker.trace,
        budget,
        theta: theta.label(),
        bias_bound,
    })
}

/// Estimates the content `zeta_lambda(K) = inf { Ṽ(f) : K ≺ f/lambda }` over
/// bumps with plateau exactly covering `K` and a shrinking outer shoulder.
///
/// The returned value is the best (smallest) evaluation seen: an upper bound
/// of the family inf.
pub fn estimate_content(
    theta: &ThetaFunction,
    cap: &GeodesicCap,
    lambda: f64,
    budget: usize,
    q: &SphereQuadrature,
) -> Result<MeasureEstimate, MeasureError> {
    precheck(theta, lambda, budget)?;
    if cap.dim() != q.dim() {
        return Err(MeasureError::DimensionMismatch {
            cap: cap.dim(),
            rule: q.dim(),
        });
    }
    let n = q.dim();
    let alpha = cap.angle();
    let w_floor = SHOULDER_FLOOR * alpha;
    let w_max = (std::f64::consts::PI - alpha).min(alpha.max(0.25));
    if w_max <= w_floor {
        return Err(MeasureError::NoShoulderRoom(alpha));
    }
    let mut tracker = Tracker {
        theta,
        n,
        budget,
        trace: Vec::new(),
    };

    // Stage A: nested shoulder-width grid.
    let grid_len = nested_grid_len(budget / 2).min(budget);
    for i in 0..grid_len {
        let w = w_floor + (w_max - w_floor) * i as f64 / (grid_len - 1) as f64;
        tracker.try_eval(lambda, alpha, alpha + w);
    }
    let best_w = best_of(&tracker.trace, false).outer_angle - alpha;
    let spacing = (w_max - w_floor) / (grid_len - 1) as f64;

    // Stage B: golden-section refinement of the width around the grid min.
    let lo = (best_w - spacing).max(w_floor);
    let hi = (best_w + spacing).min(w_max);
    golden_min(
        lo,
        hi,
        tracker.remaining(),
        |w, t| t.try_eval(lambda, alpha, alpha + w),
        &mut tracker,
    );

    let best = best_of(&tracker.trace, false).clone();
    let theta_max = theta_max_on(theta, lambda);
    let bias_bound =
        theta_max * (crate::body::cap_measure(n, best.outer_angle) - cap.measure());
    let evaluations_used = tracker.trace.len();
    Ok(MeasureEstimate {
        target: MeasureTarget::Content {
            cap: cap.clone(),
            lambda,
        },
        value: best.value,
        best,
        evaluations_used,
        trace: tracker.trace,
        budget,
        theta: theta.label(),
        bias_bound,
    })
}

/// Argmax/argmin over the trace; ties break toward the smaller parameter
/// vector `(height, inner, outer)` lexicographically, so reductions are
/// deterministic regardless of evaluation order.
fn best_of(trace: &[BumpTrial], maximize: bool) -> &BumpTrial {
    trace
        .iter()
        .reduce(|best, t| {
            let better = if maximize {
                t.value > best.value
            } else {
                t.value < best.value
            };
            let tie = t.value == best.value
                && (t.height, t.inner_angle, t.outer_angle)
                    < (best.height, best.inner_angle, best.outer_angle);
            if better || tie {
                t
            } else {
                best
            }
        })
        .expect("trace is nonempty: budget >= 4")
}

fn golden_max(
    mut a: f64,
    mut b: f64,
    evals: usize,
    mut f: impl FnMut(f64, &mut Tracker<'_>) -> Option<f64>,
    tracker: &mut Tracker<'_>,
) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    if evals < 2 || b <= a {
        return;
    }
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = match f(x1, tracker) {
        Some(v) => v,
        None => return,
    };
    let mut f2 = match f(x2, tracker) {
        Some(v) => v,
        None => return,
    };
    for _ in 2..evals {
        if (b - a).abs() < 1e-14 {
            break;
        }
        if f1 > f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = match f(x1, tracker) {
                Some(v) => v,
                None => return,
            };
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = match f(x2, tracker) {
                Some(v) => v,
                None => return,
            };
        }
    }
}

fn golden_min(
    a: f64,
    b: f64,
    evals: usize,
    mut f: impl FnMut(f64, &mut Tracker<'_>) -> Option<f64>,
    tracker: &mut Tracker<'_>,
) {
    golden_max(a, b, evals, |x, t| f(x, t).map(|v| -v), tracker)
}

/// Interior maximum of `theta` on `[0, lambda]`: dense grid plus a golden
/// polish. Used for reported bias bounds and the vanishing bound.
pub fn theta_max_on(theta: &ThetaFunction, lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return theta.eval_in_domain(0.0);
    }
    let grid = 4096;
    let mut best_x = 0.0;
    let mut best = f64::NEG_INFINITY;
    for i in 0..=grid {
        let x = lambda * i as f64 / grid as f64;
        let v = theta.eval_in_domain(x);
        if v > best {
            best = v;
            best_x = x;
        }
    }
    let h = lambda / grid as f64;
    let (mut a, mut b) = ((best_x - h).max(0.0), (best_x + h).min(lambda));
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    for _ in 0..60 {
        let x1 = b - INV_PHI * (b - a);
        let x2 = a + INV_PHI * (b - a);
        if theta.eval_in_domain(x1) > theta.eval_in_domain(x2) {
            b = x2;
        } else {
            a = x1;
        }
    }
    best.max(theta.eval_in_domain((a + b) / 2.0))
}

/// Runs the content estimator on each cap and reports the ratios to the cap
/// measures: the proportionality constant of `nu_lambda = theta(lambda) m`.
pub fn proportionality_check(
    theta: &ThetaFunction,
    lambda: f64,
    caps: &[GeodesicCap],
    budget: usize,
    q: &SphereQuadrature,
) -> Result<ProportionalityReport, MeasureError> {
    if caps.len() < 3 {
        return Err(MeasureError::TooFewCaps(caps.len()));
    }
    let mut ratios = Vec::with_capacity(caps.len());
    let mut cap_angles = Vec::with_capacity(caps.len());
    for cap in caps {
        let est = estimate_content(theta, cap, lambda, budget, q)?;
        ratios.push(est.value / cap.measure());
        cap_angles.push(cap.angle());
    }
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let scale = mean.abs().max(1e-12);
    let max_relative_deviation = ratios
        .iter()
        .map(|r| (r - mean).abs() / scale)
        .fold(0.0f64, f64::max);
    Ok(ProportionalityReport {
        lambda,
        cap_angles,
        ratios,
        theta_estimate: mean,
        max_relative_deviation,
        theta_direct: theta.eval_in_domain(lambda),
    })
}

/// Outer estimates for a shrinking cap sequence against the
/// absolute-continuity bound `Ṽ(f) <= vartheta_lambda m(G)` with
/// `vartheta_lambda = max theta on [0, lambda]`.
pub fn vanishing_check(
    theta: &ThetaFunction,
    lambda: f64,
    caps: &[GeodesicCap],
    budget: usize,
    q: &SphereQuadrature,
) -> Result<Vec<VanishingRow>, MeasureError> {
    let vartheta = theta_max_on(theta, lambda);
    let mut rows = Vec::with_capacity(caps.len());
    for cap in caps {
        let est = estimate_outer_measure(theta, cap, lambda, budget, q)?;
        let cap_measure = cap.measure();
        rows.push(VanishingRow {
            cap_angle: cap.angle(),
            cap_measure,
            bound: vartheta * cap_measure,
            estimate: est.value,
        });
    }
    Ok(rows)
}
