//! Quadrature rules realizing integration against the surface measure `m`.
//!
//! Two families are provided. For `n = 2, 3` a product Gauss–Legendre /
//! uniform-angle rule with a polynomial exactness certificate; for any
//! `n >= 2` a seeded Monte Carlo rule with equal weights. Both are
//! deterministic for fixed parameters, and integration reduces in fixed
//! node order with compensated summation so results are bit-reproducible
//! across runs and thread counts.

use crate::sphere::{surface_measure, Direction, SphereError};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Relative tolerance on the weight-sum invariant `sum w_i = sigma_{n-1}`.
pub const WEIGHT_SUM_RTOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadScheme {
    /// Gauss–Legendre in the polar coordinate times uniform azimuths
    /// (`n = 2`: uniform angles on the circle). Certified exact degree.
    ProductGauss,
    /// I.i.d. uniform nodes from a seeded ChaCha stream, equal weights.
    MonteCarlo,
}

impl std::fmt::Display for QuadScheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            QuadScheme::ProductGauss => write!(f, "product-gauss"),
            QuadScheme::MonteCarlo => write!(f, "monte-carlo"),
        }
    }
}

impl std::str::FromStr for QuadScheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "product-gauss" => Ok(QuadScheme::ProductGauss),
            "monte-carlo" => Ok(QuadScheme::MonteCarlo),
            other => Err(format!(
                "unknown scheme `{other}` (expected `product-gauss` or `monte-carlo`)"
            )),
        }
    }
}

/// Nodes and positive weights approximating the surface measure on `S^{n-1}`.
#[derive(Debug, Clone, Serialize)]
pub struct SphereQuadrature {
    n: usize,
    nodes: Vec<Direction>,
    weights: Vec<f64>,
    /// Maximal total polynomial degree integrated exactly (0 for Monte Carlo).
    exact_degree: u32,
    scheme_id: String,
}

impl SphereQuadrature {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nodes(&self) -> &[Direction] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn exact_degree(&self) -> u32 {
        self.exact_degree
    }

    pub fn scheme_id(&self) -> &str {
        &self.scheme_id
    }
}

/// Builds a quadrature rule on `S^{n-1}`.
///
/// For `product-gauss` (supported for `n = 2, 3`) `param` is the target
/// exact degree. For `monte-carlo` (any `n >= 2`) `param` is the node count
/// and `seed` selects the stream (default 0).
pub fn build_quadrature(
    n: usize,
    param: u32,
    scheme: QuadScheme,
    seed: Option<u64>,
) -> Result<SphereQuadrature, SphereError> {
    if n < 2 {
        return Err(SphereError::InvalidDimension(n));
    }
    let rule = match scheme {
        QuadScheme::ProductGauss => match n {
            2 => circle_rule(param),
            3 => product_rule_s2(param),
            _ => {
                return Err(SphereError::UnsupportedScheme {
                    scheme: scheme.to_string(),
                    n,
                })
            }
        },
        QuadScheme::MonteCarlo => monte_carlo_rule(n, param.max(1) as usize, seed.unwrap_or(0))?,
    };
    validate_rule(&rule)?;
    Ok(rule)
}

fn validate_rule(rule: &SphereQuadrature) -> Result<(), SphereError> {
    if rule.nodes.is_empty() {
        return Err(SphereError::EmptyRule);
    }
    debug_assert!(rule.weights.iter().all(|&w| w > 0.0));
    let sigma = surface_measure(rule.n)?;
    let sum = neumaier_sum(rule.weights.iter().copied());
    if ((sum - sigma) / sigma).abs() > WEIGHT_SUM_RTOL {
        return Err(SphereError::WeightSumMismatch {
            got: sum,
            expected: sigma,
        });
    }
    Ok(())
}

/// Equally spaced nodes on the circle; exact for total degree `N - 1`.
fn circle_rule(target_degree: u32) -> SphereQuadrature {
    let count = (target_degree as usize + 1).max(4);
    let w = 2.0 * std::f64::consts::PI / count as f64;
    let mut nodes = Vec::with_capacity(count);
    for j in 0..count {
        let t = 2.0 * std::f64::consts::PI * j as f64 / count as f64;
        nodes.push(Direction::new(vec![t.cos(), t.sin()]).expect("unit circle node"));
    }
    SphereQuadrature {
        n: 2,
        nodes,
        weights: vec![w; count],
        exact_degree: count as u32 - 1,
        scheme_id: format!("product-gauss-n2-d{target_degree}"),
    }
}

/// Gauss–Legendre in `z` times uniform azimuths on `S^2`.
///
/// Sized at `degree + 1` points per factor: exactness needs only
/// `ceil((d+1)/2)` polar points, but the extra resolution keeps smooth
/// non-polynomial integrands (ellipsoid radial powers) well below 1e-6
/// relative error at moderate degrees.
fn product_rule_s2(target_degree: u32) -> SphereQuadrature {
    let d = target_degree as usize;
    let n_polar = (d + 1).max(1);
    let n_azimuth = (d + 1).max(4);
    let (z, wz) = gauss_legendre(n_polar);
    let w_az = 2.0 * std::f64::consts::PI / n_azimuth as f64;
    let mut nodes = Vec::with_capacity(n_polar * n_azimuth);
    let mut weights = Vec::with_capacity(n_polar * n_azimuth);
    for (zi, wzi) in z.iter().zip(&wz) {
        let s = (1.0 - zi * zi).max(0.0).sqrt();
        for j in 0..n_azimuth {
            let psi = 2.0 * std::f64::consts::PI * j as f64 / n_azimuth as f64;
            nodes.push(
                Direction::normalized(vec![s * psi.cos(), s * psi.sin(), *zi])
                    .expect("product node"),
            );
            weights.push(wzi * w_az);
        }
    }
    let exact_degree = ((2 * n_polar - 1).min(n_azimuth - 1)) as u32;
    SphereQuadrature {
        n: 3,
        nodes,
        weights,
        exact_degree,
        scheme_id: format!("product-gauss-n3-d{target_degree}"),
    }
}

fn monte_carlo_rule(n: usize, count: usize, seed: u64) -> Result<SphereQuadrature, SphereError> {
    let sigma = surface_measure(n)?;
    let w = sigma / count as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut nodes = Vec::with_capacity(count);
    while nodes.len() < count {
        let mut v = vec![0.0f64; n];
        for c in v.iter_mut() {
            *c = rng.sample(StandardNormal);
        }
        match Direction::normalized(v) {
            Ok(d) => nodes.push(d),
            Err(_) => continue, // zero-norm draw, probability ~ 0
        }
    }
    Ok(SphereQuadrature {
        n,
        nodes,
        weights: vec![w; count],
        exact_degree: 0,
        scheme_id: format!("monte-carlo-n{n}-N{count}-seed{seed}"),
    })
}

/// Gauss–Legendre nodes and weights on `[-1, 1]` by Newton iteration.
pub(crate) fn gauss_legendre(k: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(k >= 1);
    let mut nodes = vec![0.0; k];
    let mut weights = vec![0.0; k];
    for i in 0..k {
        // Tricomi initial guess for the i-th root (descending order).
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (k as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(k, x);
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(k, x);
        nodes[k - 1 - i] = x; // ascending order
        weights[k - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

/// `(P_k(x), P_k'(x))` via the three-term recurrence.
fn legendre_with_derivative(k: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    for j in 2..=k {
        let jf = j as f64;
        let p_next = ((2.0 * jf - 1.0) * x * p - (jf - 1.0) * p_prev) / jf;
        p_prev = p;
        p = p_next;
    }
    if k == 0 {
        return (1.0, 0.0);
    }
    let d = k as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, d)
}

/// Neumaier compensated summation in iteration order.
pub(crate) fn neumaier_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Evaluates `g` at every node (in parallel) and returns the values in node
/// order, reporting the first non-finite value deterministically.
pub(crate) fn map_nodes<F>(q: &SphereQuadrature, g: F) -> Result<Vec<f64>, SphereError>
where
    F: Fn(&Direction) -> f64 + Sync,
{
    let values: Vec<f64> = q.nodes.par_iter().map(g).collect();
    for (index, &value) in values.iter().enumerate() {
        if !value.is_finite() {
            return Err(SphereError::NonFiniteIntegrand { value, index });
        }
    }
    Ok(values)
}

/// Reduces node values against the weights with compensated summation in
/// fixed node order.
pub(crate) fn reduce_weighted(q: &SphereQuadrature, values: &[f64]) -> f64 {
    neumaier_sum(q.weights.iter().zip(values).map(|(w, v)| w * v))
}

/// `∫ g dm ≈ Σ w_i g(node_i)`, compensated, in fixed node order.
///
/// Node evaluations may run in parallel; the reduction order never changes,
/// so the result is bit-identical across thread counts.
pub fn integrate<F>(q: &SphereQuadrature, g: F) -> Result<f64, SphereError>
where
    F: Fn(&Direction) -> f64 + Sync,
{
    let values = map_nodes(q, g)?;
    Ok(reduce_weighted(q, &values))
}
