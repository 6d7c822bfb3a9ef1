//! Theta recovery and uniform approximation by dual quermassintegrals.
//!
//! Recovery rests on the identity `V(lambda B) = theta(lambda) m(S^{n-1})`.
//! The approximation pipeline fits `theta` by a degree-`l` Chebyshev
//! interpolant `p`, with grid-sup fit error `eps`; the displayed chain
//!
//! ```text
//! |V(K) - Σ a_k n W̃_{n-k}(K)| <= ∫ |theta(rho_K) - p(rho_K)| dm <= eps m(S^{n-1})
//! ```
//!
//! then certifies the valuation error for every body with
//! `||rho_K||_inf <= M`.

use crate::body::StarBody;
use crate::chebyshev::{
    chebyshev_coefficients, chebyshev_nodes, chebyshev_to_monomial, horner, MAX_FIT_DEGREE,
};
use crate::quadrature::{neumaier_sum, SphereQuadrature};
use crate::sphere::surface_measure;
use crate::theta::{ThetaError, ThetaFunction};
use crate::valuation::{radial_power_integral, BlackBoxValuation, ValuationError, ValuationKind};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Samples per fit-degree unit when measuring the sup error.
pub const FIT_SAMPLE_FACTOR: usize = 50;

/// Default quadrature tolerance entering the certificate slack
/// `eps sigma_{n-1} + 10 * quadrature_tol`.
pub const DEFAULT_QUADRATURE_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum ApproxError {
    #[error("fit degree {0} exceeds the configured maximum {MAX_FIT_DEGREE}")]
    DegreeTooLarge(usize),
    #[error("recovery grid must have at least 2 points, got {0}")]
    GridTooSmall(usize),
    #[error("bound M must be finite and positive, got {0}")]
    InvalidBound(f64),
    #[error("valuation evaluation failed at lambda = {lambda}: {source}")]
    SourceFailure {
        lambda: f64,
        source: ValuationError,
    },
    #[error("probe {index} out of bounds: sup bound {sup_bound} > M = {bound}")]
    ProbeOutOfBounds {
        index: usize,
        sup_bound: f64,
        bound: f64,
    },
    #[error(transparent)]
    Valuation(#[from] ValuationError),
    #[error(transparent)]
    Theta(#[from] ThetaError),
}

/// Anything evaluable as `theta` on `[0, M]`.
pub trait ThetaSource {
    fn theta_at(&self, lambda: f64) -> Result<f64, ApproxError>;
    fn label(&self) -> String;
}

impl ThetaSource for ThetaFunction {
    fn theta_at(&self, lambda: f64) -> Result<f64, ApproxError> {
        Ok(self.eval(lambda)?)
    }

    fn label(&self) -> String {
        ThetaFunction::label(self)
    }
}

/// A black box probed on balls: `theta(lambda) = V(lambda B) / sigma_{n-1}`.
impl ThetaSource for BlackBoxValuation {
    fn theta_at(&self, lambda: f64) -> Result<f64, ApproxError> {
        let sigma = surface_measure(self.dim()).map_err(ValuationError::from)?;
        let ball =
            StarBody::ball(self.dim(), lambda).map_err(ValuationError::from)?;
        let value = self
            .evaluate(&ball)
            .map_err(|source| ApproxError::SourceFailure { lambda, source })?;
        Ok(value / sigma)
    }

    fn label(&self) -> String {
        format!("recovered[{}]", BlackBoxValuation::label(self))
    }
}

/// Grid samples of `theta` recovered from a black-box valuation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ThetaRecovery {
    pub lambda_grid: Vec<f64>,
    pub theta_values: Vec<f64>,
    /// Label of the black box the samples came from.
    pub source: String,
}

impl ThetaRecovery {
    /// Piecewise-linear proxy of the recovered samples. A grid-resolution
    /// approximation: prefer fitting through the live source when available.
    pub fn to_piecewise(&self, positive: bool) -> Result<ThetaFunction, ThetaError> {
        ThetaFunction::piecewise(
            self.lambda_grid.clone(),
            self.theta_values.clone(),
            *self.lambda_grid.last().unwrap_or(&1.0),
            positive,
        )
    }
}

/// Evaluates `V` on the balls `lambda_i B` for a uniform grid of
/// `grid_size` points including 0 and `M`, and divides by `sigma_{n-1}`.
pub fn recover_theta(
    v: &BlackBoxValuation,
    m_bound: f64,
    grid_size: usize,
) -> Result<ThetaRecovery, ApproxError> {
    if grid_size < 2 {
        return Err(ApproxError::GridTooSmall(grid_size));
    }
    if !(m_bound.is_finite() && m_bound > 0.0) {
        return Err(ApproxError::InvalidBound(m_bound));
    }
    let mut lambda_grid = Vec::with_capacity(grid_size);
    let mut theta_values = Vec::with_capacity(grid_size);
    for i in 0..grid_size {
        let lambda = m_bound * i as f64 / (grid_size - 1) as f64;
        lambda_grid.push(lambda);
        theta_values.push(v.theta_at(lambda)?);
    }
    Ok(ThetaRecovery {
        lambda_grid,
        theta_values,
        source: BlackBoxValuation::label(v).to_string(),
    })
}

/// A degree-`l` monomial fit with its measured sup error on the sample grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolynomialFit {
    pub degree: usize,
    pub coefficients: Vec<f64>,
    /// Max deviation over the dense sample grid; an estimate of the true
    /// sup-norm error on `[0, M]`.
    pub fit_error: f64,
}

/// Chebyshev interpolation of the source on `[0, M]`, re-expanded in the
/// monomial basis, with the sup error measured on a grid of
/// `FIT_SAMPLE_FACTOR * (degree + 1) + 1` uniform points.
pub fn fit_polynomial<S: ThetaSource + ?Sized>(
    source: &S,
    m_bound: f64,
    degree: usize,
) -> Result<PolynomialFit, ApproxError> {
    if degree > MAX_FIT_DEGREE {
        return Err(ApproxError::DegreeTooLarge(degree));
    }
    if !(m_bound.is_finite() && m_bound > 0.0) {
        return Err(ApproxError::InvalidBound(m_bound));
    }
    let nodes = chebyshev_nodes(degree, m_bound);
    let mut values = Vec::with_capacity(nodes.len());
    for &x in &nodes {
        // Chebyshev nodes can exceed M by one rounding ulp; clamp.
        values.push(source.theta_at(x.min(m_bound))?);
    }
    let coefficients = chebyshev_to_monomial(&chebyshev_coefficients(&values), m_bound);

    let samples = FIT_SAMPLE_FACTOR * (degree + 1) + 1;
    let mut fit_error = 0.0f64;
    for i in 0..samples {
        let x = m_bound * i as f64 / (samples - 1) as f64;
        let deviation = (source.theta_at(x)? - horner(&coefficients, x)).abs();
        fit_error = fit_error.max(deviation);
    }
    Ok(PolynomialFit {
        degree,
        coefficients,
        fit_error,
    })
}

/// `Σ_k a_k n W̃_{n-k}(K) = Σ_k a_k ∫ rho_K^k dm`, the linear combination of
/// dual quermassintegrals with the given monomial coefficients.
///
/// Indices beyond `k = n` use the same radial-power integrals (the dual
/// quermassintegrals extend to all orders); the degree cap is
/// [`MAX_FIT_DEGREE`]. The constant term uses the exact `sigma_{n-1}`.
pub fn quermass_combination(
    coefficients: &[f64],
    body: &StarBody,
    q: &SphereQuadrature,
) -> Result<f64, ApproxError> {
    if coefficients.len() > MAX_FIT_DEGREE + 1 {
        return Err(ApproxError::DegreeTooLarge(coefficients.len() - 1));
    }
    let mut terms = Vec::with_capacity(coefficients.len());
    for (k, &a) in coefficients.iter().enumerate() {
        let integral = if k == 0 {
            surface_measure(body.dim()).map_err(ValuationError::from)?
        } else {
            radial_power_integral(body, k as u32, q)?
        };
        terms.push(a * integral);
    }
    Ok(neumaier_sum(terms.into_iter()))
}

/// The full approximation certificate for one fit over a probe family.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ApproxReport {
    pub degree: usize,
    pub coefficients: Vec<f64>,
    /// Sup error of the fit on the sample grid.
    pub fit_error: f64,
    /// `fit_error * sigma_{n-1}`: the certified valuation error.
    pub valuation_error_bound: f64,
    /// Max over probes of `|V(K) - Σ a_k n W̃_{n-k}(K)|`.
    pub empirical_max_residual: f64,
    /// Domain bound `M` of the fit.
    pub bound: f64,
    pub probe_family: String,
    pub probe_count: usize,
    /// Quadrature slack entering the certificate check.
    pub quadrature_tol: f64,
    /// Whether `empirical_max_residual <= valuation_error_bound + 10 quadrature_tol`.
    pub certified: bool,
}

/// Runs the fit and checks the certificate over the probe family.
///
/// Every probe must satisfy `||rho||_inf <= M`, enforced through the
/// certified sup bound carried by the body.
pub fn approximation_report(
    source: &ValuationKind<'_>,
    m_bound: f64,
    degree: usize,
    probes: &[StarBody],
    probe_family: &str,
    q: &SphereQuadrature,
) -> Result<ApproxReport, ApproxError> {
    for (index, probe) in probes.iter().enumerate() {
        if probe.sup_bound() > m_bound * (1.0 + 1e-12) {
            return Err(ApproxError::ProbeOutOfBounds {
                index,
                sup_bound: probe.sup_bound(),
                bound: m_bound,
            });
        }
    }
    let fit = match source {
        ValuationKind::Theta(theta) => fit_polynomial(*theta, m_bound, degree)?,
        ValuationKind::BlackBox(v) => fit_polynomial(*v, m_bound, degree)?,
    };
    let n = q.dim();
    let sigma = surface_measure(n).map_err(ValuationError::from)?;
    let mut empirical_max_residual = 0.0f64;
    for probe in probes {
        let exact = source.evaluate(probe, q)?;
        let approx = quermass_combination(&fit.coefficients, probe, q)?;
        empirical_max_residual = empirical_max_residual.max((exact - approx).abs());
    }
    let valuation_error_bound = fit.fit_error * sigma;
    let certified =
        empirical_max_residual <= valuation_error_bound + 10.0 * DEFAULT_QUADRATURE_TOL;
    Ok(ApproxReport {
        degree,
        coefficients: fit.coefficients,
        fit_error: fit.fit_error,
        valuation_error_bound,
        empirical_max_residual,
        bound: m_bound,
        probe_family: probe_family.to_string(),
        probe_count: probes.len(),
        quadrature_tol: DEFAULT_QUADRATURE_TOL,
        certified,
    })
}
