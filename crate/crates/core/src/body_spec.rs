//! The `.body.json` format: a discriminated union over primitives and
//! combinators. Validation failures carry a JSON-pointer-style path.

use crate::body::{BodyError, StarBody};
use crate::sphere::{Direction, Rotation};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Serialized form of a star body expression tree.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum BodySpec {
    Ball {
        radius: f64,
    },
    Ellipsoid {
        semi_axes: Vec<f64>,
    },
    Harmonic {
        coeffs: Vec<f64>,
    },
    CapBump {
        center: Vec<f64>,
        inner_angle: f64,
        outer_angle: f64,
        height: f64,
    },
    Max {
        args: Vec<BodySpec>,
    },
    Min {
        args: Vec<BodySpec>,
    },
    Sum {
        args: Vec<BodySpec>,
    },
    Scale {
        factor: f64,
        body: Box<BodySpec>,
    },
    Rotate {
        /// Row-major rotation matrix.
        matrix: Vec<Vec<f64>>,
        body: Box<BodySpec>,
    },
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("body spec is not valid JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("invalid body spec at `{path}`: {reason}")]
    Invalid { path: String, reason: String },
}

impl ParseError {
    fn invalid(path: &str, err: impl std::fmt::Display) -> Self {
        ParseError::Invalid {
            path: if path.is_empty() {
                "/".to_string()
            } else {
                path.to_string()
            },
            reason: err.to_string(),
        }
    }
}

/// Parses a `.body.json` document into a star body of dimension `n`.
pub fn parse_body(text: &str, n: usize) -> Result<StarBody, ParseError> {
    let spec: BodySpec = serde_json::from_str(text)?;
    build_body(&spec, n, "")
}

/// Builds a star body from an already-deserialized spec.
pub fn body_from_spec(spec: &BodySpec, n: usize) -> Result<StarBody, ParseError> {
    build_body(spec, n, "")
}

fn build_body(spec: &BodySpec, n: usize, path: &str) -> Result<StarBody, ParseError> {
    match spec {
        BodySpec::Ball { radius } => {
            StarBody::ball(n, *radius).map_err(|e| ParseError::invalid(path, e))
        }
        BodySpec::Ellipsoid { semi_axes } => {
            check_len(semi_axes.len(), n, &format!("{path}/semi_axes"))?;
            StarBody::ellipsoid(semi_axes.clone()).map_err(|e| ParseError::invalid(path, e))
        }
        BodySpec::Harmonic { coeffs } => {
            StarBody::harmonic(n, coeffs.clone()).map_err(|e| ParseError::invalid(path, e))
        }
        BodySpec::CapBump {
            center,
            inner_angle,
            outer_angle,
            height,
        } => {
            check_len(center.len(), n, &format!("{path}/center"))?;
            let center = Direction::normalized(center.clone())
                .map_err(|e| ParseError::invalid(&format!("{path}/center"), e))?;
            StarBody::cap_bump(center, *inner_angle, *outer_angle, *height)
                .map_err(|e| ParseError::invalid(path, e))
        }
        BodySpec::Max { args } => fold_args(args, n, path, StarBody::union),
        BodySpec::Min { args } => fold_args(args, n, path, StarBody::intersection),
        BodySpec::Sum { args } => fold_args(args, n, path, StarBody::radial_sum),
        BodySpec::Scale { factor, body } => {
            let inner = build_body(body, n, &format!("{path}/body"))?;
            inner
                .scale(*factor)
                .map_err(|e| ParseError::invalid(path, e))
        }
        BodySpec::Rotate { matrix, body } => {
            let rotation = Rotation::from_rows(matrix.clone())
                .map_err(|e| ParseError::invalid(&format!("{path}/matrix"), e))?;
            if rotation.dim() != n {
                return Err(ParseError::invalid(
                    &format!("{path}/matrix"),
                    BodyError::DimensionMismatch {
                        expected: n,
                        got: rotation.dim(),
                    },
                ));
            }
            let inner = build_body(body, n, &format!("{path}/body"))?;
            inner
                .rotate(&rotation)
                .map_err(|e| ParseError::invalid(path, e))
        }
    }
}

fn fold_args(
    args: &[BodySpec],
    n: usize,
    path: &str,
    op: impl Fn(&StarBody, &StarBody) -> Result<StarBody, BodyError>,
) -> Result<StarBody, ParseError> {
    if args.len() < 2 {
        return Err(ParseError::invalid(
            &format!("{path}/args"),
            format!("combinator needs at least 2 arguments, got {}", args.len()),
        ));
    }
    let mut acc = build_body(&args[0], n, &format!("{path}/args/0"))?;
    for (i, arg) in args.iter().enumerate().skip(1) {
        let next = build_body(arg, n, &format!("{path}/args/{i}"))?;
        acc = op(&acc, &next).map_err(|e| ParseError::invalid(&format!("{path}/args/{i}"), e))?;
    }
    Ok(acc)
}

fn check_len(got: usize, n: usize, path: &str) -> Result<(), ParseError> {
    if got != n {
        return Err(ParseError::invalid(
            path,
            BodyError::DimensionMismatch { expected: n, got },
        ));
    }
    Ok(())
}
