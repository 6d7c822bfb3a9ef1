//! Profile functions `theta: [0, M] -> R` with evaluable moduli of
//! continuity.
//!
//! A continuous `theta` with `theta(0) = 0` induces the valuation
//! `V(K) = ∫ theta(rho_K) dm`; the positive direction of the
//! representation theorem additionally needs `theta >= 0` on `[0, M]`,
//! tracked by the `positive` flag. Values are never extrapolated beyond
//! the declared domain bound `M`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Grid density used for construction-time positivity checks.
const VALIDATION_GRID: usize = 2048;

#[derive(Debug, Error)]
pub enum ThetaError {
    #[error("domain bound M must be finite and positive, got {0}")]
    InvalidBound(f64),
    #[error("argument {value} exceeds the declared domain bound {bound}")]
    DomainExceeded { value: f64, bound: f64 },
    #[error("argument {0} is negative")]
    NegativeArgument(f64),
    #[error("theta is flagged positive but theta(0) = {0}")]
    NonzeroAtOrigin(f64),
    #[error("theta is flagged positive but theta({at}) = {value} < 0")]
    NegativeValue { at: f64, value: f64 },
    #[error("piecewise grid must start at 0, be strictly increasing, and cover [0, M]")]
    BadPiecewiseGrid,
    #[error("piecewise grid and value lists must have equal length >= 2")]
    BadPiecewiseLength,
    #[error("power exponent must be >= 1 for continuity control, got {0}")]
    BadExponent(f64),
    #[error("builtin `{id}` flagged positive needs M <= {max_bound}, got {bound}")]
    BoundTooLargeForPositivity {
        id: &'static str,
        max_bound: f64,
        bound: f64,
    },
    #[error("coefficients and sample values must be finite")]
    NonFinite,
    #[error("unknown builtin id `{0}`")]
    UnknownBuiltin(String),
    #[error("theta spec is not valid JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("theta spec: {0}")]
    Spec(String),
}

/// Built-in profile functions.
#[derive(Debug, Clone, PartialEq)]
pub enum BuiltinTheta {
    /// `theta(x) = x^p`, `p >= 1`.
    Power { exponent: f64 },
    /// `theta(x) = sin x` (nonnegative for `M <= pi`).
    Sin,
    /// `theta(x) = e^x - 1`.
    ExpMinusOne,
    /// A smooth positive hump vanishing at 0 and peaking at `x = 1`:
    /// `4 (s(1-s) - s0(1-s0))` with `s = logistic(4(x-1))`, `s0 = s(0)`.
    /// Nonnegative exactly on `[0, 2]`.
    LogisticHump,
}

impl BuiltinTheta {
    pub fn id(&self) -> &'static str {
        match self {
            BuiltinTheta::Power { .. } => "power",
            BuiltinTheta::Sin => "sin",
            BuiltinTheta::ExpMinusOne => "exp-minus-one",
            BuiltinTheta::LogisticHump => "logistic-hump",
        }
    }

    fn eval(&self, x: f64) -> f64 {
        match self {
            BuiltinTheta::Power { exponent } => {
                if exponent.fract() == 0.0 && *exponent <= 64.0 {
                    x.powi(*exponent as i32)
                } else {
                    x.powf(*exponent)
                }
            }
            BuiltinTheta::Sin => x.sin(),
            BuiltinTheta::ExpMinusOne => x.exp_m1(),
            BuiltinTheta::LogisticHump => {
                let s = 1.0 / (1.0 + (-4.0 * (x - 1.0)).exp());
                let s0 = 1.0 / (1.0 + 4.0f64.exp());
                4.0 * (s * (1.0 - s) - s0 * (1.0 - s0))
            }
        }
    }

    /// Lipschitz constant on `[0, M]`.
    fn lipschitz(&self, m: f64) -> f64 {
        match self {
            BuiltinTheta::Power { exponent } => {
                if *exponent == 1.0 {
                    1.0
                } else {
                    exponent * m.powf(exponent - 1.0)
                }
            }
            BuiltinTheta::Sin => 1.0,
            BuiltinTheta::ExpMinusOne => m.exp(),
            // |theta'| = 4 |s'(1 - 2s)| <= 4 * 1 * 1 with s' = 4 s (1-s) <= 1.
            BuiltinTheta::LogisticHump => 4.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ThetaKind {
    /// Monomial coefficients `a_0..a_l`, evaluated by Horner.
    Polynomial { coeffs: Vec<f64> },
    /// Piecewise-linear interpolation of samples on a strictly increasing
    /// grid starting at 0 and covering `[0, M]`.
    Piecewise { grid: Vec<f64>, values: Vec<f64> },
    Builtin(BuiltinTheta),
}

/// A continuous profile function on `[0, M]` with a modulus of continuity.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaFunction {
    kind: ThetaKind,
    bound: f64,
    positive: bool,
}

impl ThetaFunction {
    pub fn polynomial(coeffs: Vec<f64>, bound: f64, positive: bool) -> Result<Self, ThetaError> {
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(ThetaError::NonFinite);
        }
        Self::build(ThetaKind::Polynomial { coeffs }, bound, positive)
    }

    pub fn piecewise(
        grid: Vec<f64>,
        values: Vec<f64>,
        bound: f64,
        positive: bool,
    ) -> Result<Self, ThetaError> {
        if grid.len() != values.len() || grid.len() < 2 {
            return Err(ThetaError::BadPiecewiseLength);
        }
        if grid.iter().chain(values.iter()).any(|v| !v.is_finite()) {
            return Err(ThetaError::NonFinite);
        }
        if grid[0] != 0.0 || grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(ThetaError::BadPiecewiseGrid);
        }
        if *grid.last().unwrap() < bound {
            return Err(ThetaError::BadPiecewiseGrid);
        }
        Self::build(ThetaKind::Piecewise { grid, values }, bound, positive)
    }

    pub fn builtin(builtin: BuiltinTheta, bound: f64, positive: bool) -> Result<Self, ThetaError> {
        if let BuiltinTheta::Power { exponent } = builtin {
            if !(exponent.is_finite() && exponent >= 1.0) {
                return Err(ThetaError::BadExponent(exponent));
            }
        }
        if positive {
            let cap = match builtin {
                BuiltinTheta::Sin => Some(std::f64::consts::PI),
                BuiltinTheta::LogisticHump => Some(2.0),
                _ => None,
            };
            if let Some(max_bound) = cap {
                if bound > max_bound {
                    return Err(ThetaError::BoundTooLargeForPositivity {
                        id: builtin.id(),
                        max_bound,
                        bound,
                    });
                }
            }
        }
        Self::build(ThetaKind::Builtin(builtin), bound, positive)
    }

    fn build(kind: ThetaKind, bound: f64, positive: bool) -> Result<Self, ThetaError> {
        if !(bound.is_finite() && bound > 0.0) {
            return Err(ThetaError::InvalidBound(bound));
        }
        let theta = Self {
            kind,
            bound,
            positive,
        };
        if positive {
            let at_zero = theta.eval_in_domain(0.0);
            if at_zero != 0.0 {
                return Err(ThetaError::NonzeroAtOrigin(at_zero));
            }
            let scale = 1.0 + theta.modulus(bound);
            for i in 0..=VALIDATION_GRID {
                let x = bound * i as f64 / VALIDATION_GRID as f64;
                let v = theta.eval_in_domain(x);
                if !v.is_finite() {
                    return Err(ThetaError::NonFinite);
                }
                if v < -1e-12 * scale {
                    return Err(ThetaError::NegativeValue { at: x, value: v });
                }
            }
        }
        Ok(theta)
    }

    pub fn kind(&self) -> &ThetaKind {
        &self.kind
    }

    /// The declared domain bound `M`.
    pub fn bound(&self) -> f64 {
        self.bound
    }

    pub fn is_positive(&self) -> bool {
        self.positive
    }

    /// Evaluation without the domain gate. The formula is total; callers in
    /// valuation code check `x <= M` per node first.
    pub fn eval_in_domain(&self, x: f64) -> f64 {
        match &self.kind {
            ThetaKind::Polynomial { coeffs } => horner(coeffs, x),
            ThetaKind::Piecewise { grid, values } => piecewise_eval(grid, values, x),
            ThetaKind::Builtin(b) => b.eval(x),
        }
    }

    /// Domain-checked evaluation on `[0, M]`.
    pub fn eval(&self, x: f64) -> Result<f64, ThetaError> {
        if x < 0.0 {
            return Err(ThetaError::NegativeArgument(x));
        }
        if x > self.bound {
            return Err(ThetaError::DomainExceeded {
                value: x,
                bound: self.bound,
            });
        }
        Ok(self.eval_in_domain(x))
    }

    /// Modulus of continuity: `|theta(x) - theta(y)| <= modulus(|x - y|)`
    /// on `[0, M]`. Monotone nondecreasing with `modulus(0) = 0`.
    pub fn modulus(&self, eta: f64) -> f64 {
        let lip = match &self.kind {
            ThetaKind::Polynomial { coeffs } => coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, a)| k as f64 * a.abs() * self.bound.powi(k as i32 - 1))
                .sum(),
            ThetaKind::Piecewise { grid, values } => grid
                .windows(2)
                .zip(values.windows(2))
                .map(|(g, v)| ((v[1] - v[0]) / (g[1] - g[0])).abs())
                .fold(0.0f64, f64::max),
            ThetaKind::Builtin(b) => b.lipschitz(self.bound),
        };
        lip * eta.max(0.0)
    }

    /// Short human-readable description, used in reports.
    pub fn label(&self) -> String {
        match &self.kind {
            ThetaKind::Polynomial { coeffs } => format!("polynomial{coeffs:?}"),
            ThetaKind::Piecewise { grid, .. } => format!("piecewise[{} knots]", grid.len()),
            ThetaKind::Builtin(BuiltinTheta::Power { exponent }) => format!("power({exponent})"),
            ThetaKind::Builtin(b) => b.id().to_string(),
        }
    }
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    let mut acc = 0.0;
    for &c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn piecewise_eval(grid: &[f64], values: &[f64], x: f64) -> f64 {
    if x <= grid[0] {
        return values[0];
    }
    if x >= *grid.last().unwrap() {
        return *values.last().unwrap();
    }
    let idx = match grid.binary_search_by(|g| g.partial_cmp(&x).unwrap()) {
        Ok(i) => return values[i],
        Err(i) => i,
    };
    let (x0, x1) = (grid[idx - 1], grid[idx]);
    let (y0, y1) = (values[idx - 1], values[idx]);
    y0 + (y1 - y0) * (x - x0) / (x1 - x0)
}

/// Serialized form of a theta function (`.theta.json`).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThetaSpec {
    /// One of `polynomial`, `piecewise`, `builtin`.
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    /// Builtin id: `power`, `sin`, `exp-minus-one`, `logistic-hump`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponent: Option<f64>,
    #[serde(rename = "M")]
    pub bound: f64,
    pub positive: bool,
}

/// Parses a `.theta.json` document.
pub fn parse_theta(text: &str) -> Result<ThetaFunction, ThetaError> {
    let spec: ThetaSpec = serde_json::from_str(text)?;
    theta_from_spec(&spec)
}

pub fn theta_from_spec(spec: &ThetaSpec) -> Result<ThetaFunction, ThetaError> {
    match spec.kind.as_str() {
        "polynomial" => {
            let coeffs = spec
                .coeffs
                .clone()
                .ok_or_else(|| ThetaError::Spec("polynomial kind requires `coeffs`".into()))?;
            ThetaFunction::polynomial(coeffs, spec.bound, spec.positive)
        }
        "piecewise" => {
            let grid = spec
                .grid
                .clone()
                .ok_or_else(|| ThetaError::Spec("piecewise kind requires `grid`".into()))?;
            let values = spec
                .values
                .clone()
                .ok_or_else(|| ThetaError::Spec("piecewise kind requires `values`".into()))?;
            ThetaFunction::piecewise(grid, values, spec.bound, spec.positive)
        }
        "builtin" => {
            let id = spec
                .id
                .clone()
                .ok_or_else(|| ThetaError::Spec("builtin kind requires `id`".into()))?;
            let builtin = match id.as_str() {
                "power" => BuiltinTheta::Power {
                    exponent: spec.exponent.ok_or_else(|| {
                        ThetaError::Spec("builtin `power` requires `exponent`".into())
                    })?,
                },
                "sin" => BuiltinTheta::Sin,
                "exp-minus-one" => BuiltinTheta::ExpMinusOne,
                "logistic-hump" => BuiltinTheta::LogisticHump,
                other => return Err(ThetaError::UnknownBuiltin(other.to_string())),
            };
            ThetaFunction::builtin(builtin, spec.bound, spec.positive)
        }
        other => Err(ThetaError::Spec(format!("unknown kind `{other}`"))),
    }
}

/// Serializes a theta function back to its spec form.
pub fn theta_to_spec(theta: &ThetaFunction) -> ThetaSpec {
    let mut spec = ThetaSpec {
        kind: String::new(),
        coeffs: None,
        grid: None,
        values: None,
        id: None,
        exponent: None,
        bound: theta.bound(),
        positive: theta.is_positive(),
    };
    match theta.kind() {
        ThetaKind::Polynomial { coeffs } => {
            spec.kind = "polynomial".into();
            spec.coeffs = Some(coeffs.clone());
        }
        ThetaKind::Piecewise { grid, values } => {
            spec.kind = "piecewise".into();
            spec.grid = Some(grid.clone());
            spec.values = Some(values.clone());
        }
        ThetaKind::Builtin(b) => {
            spec.kind = "builtin".into();
            spec.id = Some(b.id().to_string());
            if let BuiltinTheta::Power { exponent } = b {
                spec.exponent = Some(*exponent);
            }
        }
    }
    spec
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn polynomial_eval_and_modulus() {
        let sq = ThetaFunction::polynomial(vec![0.0, 0.0, 1.0], 2.0, true).unwrap();
        assert_eq!(sq.eval(1.5).unwrap(), 2.25);
        assert_eq!(sq.eval_in_domain(0.0), 0.0);
        // Lipschitz bound 2 M = 4 on [0, 2].
        assert_relative_eq!(sq.modulus(0.1), 0.4);
        assert!(matches!(
            sq.eval(2.5),
            Err(ThetaError::DomainExceeded { .. })
        ));
        assert!(matches!(sq.eval(-0.1), Err(ThetaError::NegativeArgument(_))));

        // theta = x(1-x) is nonnegative on [0, 1] but not on [0, 2].
        assert!(ThetaFunction::polynomial(vec![0.0, 1.0, -1.0], 1.0, true).is_ok());
        assert!(ThetaFunction::polynomial(vec![0.0, 1.0, -1.0], 2.0, true).is_err());
        // positive flag demands theta(0) = 0.
        assert!(ThetaFunction::polynomial(vec![0.5], 1.0, true).is_err());
        assert!(ThetaFunction::polynomial(vec![0.5], 1.0, false).is_ok());
    }

    #[test]
    fn builtins_vanish_at_zero_and_respect_moduli() {
        let m = 2.0;
        let thetas = [
            BuiltinTheta::Power { exponent: 1.0 },
            BuiltinTheta::Power { exponent: 2.0 },
            BuiltinTheta::Power { exponent: 3.0 },
            BuiltinTheta::Sin,
            BuiltinTheta::ExpMinusOne,
            BuiltinTheta::LogisticHump,
        ];
        for b in thetas {
            let theta = ThetaFunction::builtin(b, m, true).unwrap();
            assert_eq!(theta.eval_in_domain(0.0), 0.0, "{}", theta.label());
            // Modulus bound on a dense grid of adjacent pairs.
            let grid: Vec<f64> = (0..=400).map(|i| m * i as f64 / 400.0).collect();
            for w in grid.windows(2) {
                let d = (theta.eval_in_domain(w[1]) - theta.eval_in_domain(w[0])).abs();
                assert!(
                    d <= theta.modulus(w[1] - w[0]) * (1.0 + 1e-12) + 1e-15,
                    "{} modulus violated",
                    theta.label()
                );
            }
        }
        assert!(ThetaFunction::builtin(BuiltinTheta::Sin, 4.0, true).is_err());
        assert!(ThetaFunction::builtin(BuiltinTheta::Sin, 4.0, false).is_ok());
        assert!(
            ThetaFunction::builtin(BuiltinTheta::Power { exponent: 0.5 }, 1.0, false).is_err()
        );
    }

    #[test]
    fn piecewise_interpolation() {
        let pl =
            ThetaFunction::piecewise(vec![0.0, 1.0, 2.0], vec![0.0, 0.5, 0.25], 2.0, true).unwrap();
        assert_eq!(pl.eval(1.0).unwrap(), 0.5);
        assert_relative_eq!(pl.eval(1.5).unwrap(), 0.375);
        assert_relative_eq!(pl.modulus(1.0), 0.5);
        assert!(ThetaFunction::piecewise(vec![0.0, 1.0], vec![0.0], 1.0, true).is_err());
        assert!(ThetaFunction::piecewise(vec![0.5, 1.0], vec![0.0, 0.1], 1.0, true).is_err());
        assert!(
            ThetaFunction::piecewise(vec![0.0, 0.5], vec![0.0, 0.1], 1.0, true).is_err(),
            "grid must cover [0, M]"
        );
    }

    #[test]
    fn spec_round_trip() {
        let text = r#"{"kind":"builtin","id":"power","exponent":3,"M":2,"positive":true}"#;
        let theta = parse_theta(text).unwrap();
        assert_eq!(theta.eval(2.0).unwrap(), 8.0);
        let spec = theta_to_spec(&theta);
        let again = theta_from_spec(&spec).unwrap();
        assert_eq!(theta, again);

        assert!(parse_theta(r#"{"kind":"builtin","id":"nope","M":1,"positive":false}"#).is_err());
        assert!(parse_theta(r#"{"kind":"polynomial","M":1,"positive":false}"#).is_err());
    }
}
