//! Integral valuations `V(K) = ∫ theta(rho_K) dm`, dual quermassintegrals,
//! and residual checkers for the identities a radial-continuous
//! rotation-invariant valuation must satisfy.
//!
//! All checkers return residual magnitudes; thresholds belong to callers.

use crate::body::{BodyError, StarBody};
use crate::quadrature::{map_nodes, neumaier_sum, reduce_weighted, SphereQuadrature};
use crate::sphere::{surface_measure, Rotation, SphereError};
use crate::theta::{ThetaError, ThetaFunction};
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ValuationError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error(
        "radial value {value} at node {index} exceeds the theta domain bound {bound}; \
         refusing to extrapolate"
    )]
    DomainExceeded {
        value: f64,
        bound: f64,
        index: usize,
    },
    #[error("quermassintegral index k = {k} out of range 0..={n}")]
    IndexOutOfRange { k: u32, n: usize },
    #[error("inclusion-exclusion needs between 2 and 5 bodies, got {0}")]
    BadBodyCount(usize),
    #[error("black-box valuation: {0}")]
    BlackBox(String),
    #[error(transparent)]
    Sphere(#[from] SphereError),
    #[error(transparent)]
    Body(#[from] BodyError),
    #[error(transparent)]
    Theta(#[from] ThetaError),
}

/// Evaluates `V(K) = ∫ theta(rho_K(t)) dm(t)` over the rule `q`.
///
/// Every nodal radial value must stay within the theta domain bound; a
/// value beyond `M` is an error rather than an extrapolation.
pub fn eval_valuation(
    theta: &ThetaFunction,
    body: &StarBody,
    q: &SphereQuadrature,
) -> Result<f64, ValuationError> {
    check_dims(body, q)?;
    let bound = theta.bound();
    let rho = map_nodes(q, |u| body.radial(u))?;
    for (index, &value) in rho.iter().enumerate() {
        if value > bound {
            return Err(ValuationError::DomainExceeded {
                value,
                bound,
                index,
            });
        }
    }
    let values: Vec<f64> = rho.par_iter().map(|&r| theta.eval_in_domain(r)).collect();
    for (index, &value) in values.iter().enumerate() {
        if !value.is_finite() {
            return Err(SphereError::NonFiniteIntegrand { value, index }.into());
        }
    }
    Ok(reduce_weighted(q, &values))
}

/// `∫ rho_K^k dm` without any domain bound (used by quermassintegrals).
pub(crate) fn radial_power_integral(
    body: &StarBody,
    k: u32,
    q: &SphereQuadrature,
) -> Result<f64, ValuationError> {
    check_dims(body, q)?;
    let values = map_nodes(q, |u| body.radial(u).powi(k as i32))?;
    Ok(reduce_weighted(q, &values))
}

/// Dual quermassintegral `W̃_{n-k}(K) = (1/n) ∫ rho_K^k dm` for `0 <= k <= n`.
///
/// `k = 0` uses the convention `rho^0 = 1` everywhere and returns the
/// constant `sigma_{n-1} / n` (the volume of the unit ball).
pub fn dual_quermassintegral(
    body: &StarBody,
    k: u32,
    q: &SphereQuadrature,
) -> Result<f64, ValuationError> {
    check_dims(body, q)?;
    let n = body.dim();
    if k as usize > n {
        return Err(ValuationError::IndexOutOfRange { k, n });
    }
    if k == 0 {
        return Ok(surface_measure(n)? / n as f64);
    }
    Ok(radial_power_integral(body, k, q)? / n as f64)
}

/// Polynomial valuation `∫ density(t) rho_K^k(t) dm(t)`: the degree-`k`
/// homogeneous valuation induced by the absolutely continuous signed
/// measure `density dm`.
pub fn polynomial_valuation<F>(
    k: u32,
    density: F,
    body: &StarBody,
    q: &SphereQuadrature,
) -> Result<f64, ValuationError>
where
    F: Fn(&crate::sphere::Direction) -> f64 + Sync,
{
    check_dims(body, q)?;
    let values = map_nodes(q, |u| density(u) * body.radial(u).powi(k as i32))?;
    Ok(reduce_weighted(q, &values))
}

type BodyEvaluator = Box<dyn Fn(&StarBody) -> Result<f64, ValuationError> + Send + Sync>;

/// A deterministic valuation probe: maps star bodies to reals.
pub struct BlackBoxValuation {
    n: usize,
    bound: f64,
    label: String,
    eval: BodyEvaluator,
}

impl std::fmt::Debug for BlackBoxValuation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BlackBoxValuation")
            .field("n", &self.n)
            .field("bound", &self.bound)
            .field("label", &self.label)
            .finish_non_exhaustive()
    }
}

impl BlackBoxValuation {
    pub fn new<F>(n: usize, bound: f64, label: impl Into<String>, eval: F) -> Self
    where
        F: Fn(&StarBody) -> Result<f64, ValuationError> + Send + Sync + 'static,
    {
        Self {
            n,
            bound,
            label: label.into(),
            eval: Box::new(eval),
        }
    }

    /// Wraps a theta-backed integral valuation as a black box.
    pub fn from_theta(theta: ThetaFunction, q: SphereQuadrature) -> Self {
        let n = q.dim();
        let bound = theta.bound();
        let label = format!("integral[{}]", theta.label());
        Self::new(n, bound, label, move |body| eval_valuation(&theta, body, &q))
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Declared sup-norm bound of admissible bodies.
    pub fn bound(&self) -> f64 {
        self.bound
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn evaluate(&self, body: &StarBody) -> Result<f64, ValuationError> {
        if body.dim() != self.n {
            return Err(ValuationError::DimensionMismatch {
                expected: self.n,
                got: body.dim(),
            });
        }
        (self.eval)(body)
    }
}

/// Either a theta-backed integral valuation or a black-box probe.
#[derive(Debug)]
pub enum ValuationKind<'a> {
    Theta(&'a ThetaFunction),
    BlackBox(&'a BlackBoxValuation),
}

impl ValuationKind<'_> {
    pub fn evaluate(&self, body: &StarBody, q: &SphereQuadrature) -> Result<f64, ValuationError> {
        match self {
            ValuationKind::Theta(theta) => eval_valuation(theta, body, q),
            ValuationKind::BlackBox(v) => v.evaluate(body),
        }
    }

    pub fn label(&self) -> String {
        match self {
            ValuationKind::Theta(theta) => format!("integral[{}]", theta.label()),
            ValuationKind::BlackBox(v) => v.label().to_string(),
        }
    }
}

/// Residual of the valuation axiom:
/// `|V(K ∪ L) + V(K ∩ L) - V(K) - V(L)|`.
///
/// For theta-backed valuations the identity holds pointwise at every node
/// (`theta(a ∨ b) + theta(a ∧ b) = theta(a) + theta(b)` exactly), so the
/// residual is pure summation rounding.
pub fn check_valuation_axiom(
    v: &ValuationKind<'_>,
    k: &StarBody,
    l: &StarBody,
    q: &SphereQuadrature,
) -> Result<f64, ValuationError> {
    let union = k.union(l)?;
    let intersection = k.intersection(l)?;
    let lhs = v.evaluate(&union, q)? + v.evaluate(&intersection, q)?;
    let rhs = v.evaluate(k, q)? + v.evaluate(l, q)?;
    Ok((lhs - rhs).abs())
}

/// Residual of the inclusion–exclusion identity over suprema:
/// `V(∨ f_i) = Σ V(f_i) - Σ V(f_i ∧ f_j) + ... + (-1)^{N-1} V(f_1 ∧ ... ∧ f_N)`.
pub fn inclusion_exclusion_residual(
    theta: &ThetaFunction,
    bodies: &[StarBody],
    q: &SphereQuadrature,
) -> Result<f64, ValuationError> {
    let n_bodies = bodies.len();
    if !(2..=5).contains(&n_bodies) {
        return Err(ValuationError::BadBodyCount(n_bodies));
    }
    let mut join = bodies[0].clone();
    for b in &bodies[1..] {
        join = join.union(b)?;
    }
    let lhs = eval_valuation(theta, &join, q)?;

    let mut terms = Vec::with_capacity((1usize << n_bodies) - 1);
    for mask in 1u32..(1 << n_bodies) {
        let mut meet: Option<StarBody> = None;
        for (i, body) in bodies.iter().enumerate() {
            if mask & (1 << i) != 0 {
                meet = Some(match meet {
                    None => body.clone(),
                    Some(m) => m.intersection(body)?,
                });
            }
        }
        let sign = if mask.count_ones() % 2 == 1 { 1.0 } else { -1.0 };
        terms.push(sign * eval_valuation(theta, &meet.expect("nonempty mask"), q)?);
    }
    let rhs = neumaier_sum(terms.into_iter());
    Ok((lhs - rhs).abs())
}

/// Max over the given rotations of `|V(R K) - V(K)|`.
pub fn check_rotation_invariance(
    v: &ValuationKind<'_>,
    body: &StarBody,
    rotations: &[Rotation],
    q: &SphereQuadrature,
) -> Result<f64, ValuationError> {
    let base = v.evaluate(body, q)?;
    let mut worst = 0.0f64;
    for r in rotations {
        let rotated = body.rotate(r)?;
        worst = worst.max((v.evaluate(&rotated, q)? - base).abs());
    }
    Ok(worst)
}

/// Outcome of the continuity bound `|V(K) - V(L)| <= omega(eta) sigma_{n-1}`
/// for `L = K +̃ eta B` (so `delta(K, L) = eta`).
#[derive(Debug, Clone, serde::Serialize)]
pub struct ContinuityCheck {
    pub eta: f64,
    pub difference: f64,
    pub bound: f64,
    pub satisfied: bool,
}

pub fn continuity_modulus_check(
    theta: &ThetaFunction,
    body: &StarBody,
    eta: f64,
    q: &SphereQuadrature,
) -> Result<ContinuityCheck, ValuationError> {
    if !(eta.is_finite() && eta >= 0.0) {
        return Err(BodyError::InvalidRadius(eta).into());
    }
    let perturbed = body.radial_sum(&StarBody::ball(body.dim(), eta)?)?;
    let v_base = eval_valuation(theta, body, q)?;
    let v_pert = eval_valuation(theta, &perturbed, q)?;
    let difference = (v_base - v_pert).abs();
    let bound = theta.modulus(eta) * surface_measure(body.dim())?;
    // Rounding guard: the bound is attained exactly for linear theta.
    let satisfied = difference <= bound + 1e-12 * (1.0 + bound);
    Ok(ContinuityCheck {
        eta,
        difference,
        bound,
        satisfied,
    })
}

fn check_dims(body: &StarBody, q: &SphereQuadrature) -> Result<(), ValuationError> {
    if body.dim() != q.dim() {
        return Err(ValuationError::DimensionMismatch {
            expected: q.dim(),
            got: body.dim(),
        });
    }
    Ok(())
}
