//! Star bodies as radial-function expression trees.
//!
//! A star body is any set star-shaped at the origin whose radial function
//! `rho(u) = sup { c >= 0 : c u in K }` is continuous. Here bodies are
//! built from nonnegative continuous primitives and combinators that
//! preserve nonnegativity and continuity, so every constructed tree is a
//! valid star body. Each node carries a certified upper bound on
//! `||rho||_inf`.

use crate::harmonics;
use crate::quadrature::SphereQuadrature;
use crate::sphere::{surface_measure, Direction, Rotation, SphereError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BodyError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("ball radius must be finite and nonnegative, got {0}")]
    InvalidRadius(f64),
    #[error("ellipsoid semi-axes must be finite and positive, got {0}")]
    InvalidAxis(f64),
    #[error("scale factor must be finite and positive, got {0}")]
    InvalidScale(f64),
    #[error("harmonic bodies are only supported for n = 2 or 3, got n = {0}")]
    UnsupportedHarmonicDimension(usize),
    #[error("harmonic coefficient list has invalid length {got} for n = {n}")]
    InvalidHarmonicLength { n: usize, got: usize },
    #[error("harmonic coefficients must be finite")]
    NonFiniteCoefficient,
    #[error("cap angles must satisfy 0 <= inner < outer <= pi, got ({inner}, {outer})")]
    InvalidCapAngles { inner: f64, outer: f64 },
    #[error("bump height must be finite and nonnegative, got {0}")]
    InvalidHeight(f64),
    #[error("shoulder must lie strictly inside (0, 1), got {0}")]
    InvalidShoulder(f64),
    #[error("cap angle must lie in (0, pi), got {0}")]
    InvalidCapAngle(f64),
    #[error("radial function evaluated to a non-finite value")]
    MalformedBody,
    #[error(transparent)]
    Sphere(#[from] SphereError),
}

/// A geodesic cap: the metric ball on `S^{n-1}` around `center` of the
/// given angular radius. The canonical open/compact test set for the
/// measure constructions.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct GeodesicCap {
    center: Direction,
    angle: f64,
}

impl GeodesicCap {
    pub fn new(center: Direction, angle: f64) -> Result<Self, BodyError> {
        if !(angle.is_finite() && angle > 0.0 && angle < std::f64::consts::PI) {
            return Err(BodyError::InvalidCapAngle(angle));
        }
        Ok(Self { center, angle })
    }

    pub fn center(&self) -> &Direction {
        &self.center
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    pub fn dim(&self) -> usize {
        self.center.dim()
    }

    /// Surface measure of the cap.
    ///
    /// Closed forms for `n = 2` (`2 alpha`) and `n = 3`
    /// (`2 pi (1 - cos alpha)`); for higher dimensions
    /// `sigma_{n-2} ∫_0^alpha sin^{n-2}`, by Gauss–Legendre.
    pub fn measure(&self) -> f64 {
        cap_measure(self.dim(), self.angle)
    }
}

pub(crate) fn cap_measure(n: usize, angle: f64) -> f64 {
    match n {
        2 => 2.0 * angle,
        3 => 2.0 * std::f64::consts::PI * (1.0 - angle.cos()),
        _ => {
            let sigma_prev = surface_measure(n - 1).expect("n >= 4 here");
            let (x, w) = crate::quadrature::gauss_legendre(64);
            let half = angle / 2.0;
            let integral: f64 = x
                .iter()
                .zip(&w)
                .map(|(xi, wi)| {
                    let phi = half * (xi + 1.0);
                    wi * half * phi.sin().powi(n as i32 - 2)
                })
                .sum();
            sigma_prev * integral
        }
    }
}

#[derive(Debug, Clone)]
enum BodyExpr {
    Ball {
        radius: f64,
    },
    Ellipsoid {
        semi_axes: Vec<f64>,
    },
    /// Harmonic expansion clamped at 0 to keep the radial function
    /// nonnegative (clamping preserves continuity).
    Harmonic {
        coeffs: Vec<f64>,
    },
    CapBump {
        center: Direction,
        inner_angle: f64,
        outer_angle: f64,
        height: f64,
    },
    Max(Box<BodyExpr>, Box<BodyExpr>),
    Min(Box<BodyExpr>, Box<BodyExpr>),
    Sum(Box<BodyExpr>, Box<BodyExpr>),
    Scale {
        factor: f64,
        inner: Box<BodyExpr>,
    },
    Rotate {
        rotation: Rotation,
        inner: Box<BodyExpr>,
    },
}

/// A star body: an evaluable continuous nonnegative radial function with a
/// certified sup-norm bound. Immutable after construction.
#[derive(Debug, Clone)]
pub struct StarBody {
    n: usize,
    sup_bound: f64,
    expr: BodyExpr,
}

impl StarBody {
    /// The ball of radius `r` (`r = 0` encodes the degenerate body `{0}`).
    pub fn ball(n: usize, radius: f64) -> Result<Self, BodyError> {
        if n < 2 {
            return Err(SphereError::InvalidDimension(n).into());
        }
        if !(radius.is_finite() && radius >= 0.0) {
            return Err(BodyError::InvalidRadius(radius));
        }
        Ok(Self {
            n,
            sup_bound: radius,
            expr: BodyExpr::Ball { radius },
        })
    }

    /// Axis-aligned ellipsoid with `rho(u) = (sum u_i^2 / a_i^2)^{-1/2}`.
    pub fn ellipsoid(semi_axes: Vec<f64>) -> Result<Self, BodyError> {
        let n = semi_axes.len();
        if n < 2 {
            return Err(SphereError::InvalidDimension(n).into());
        }
        for &a in &semi_axes {
            if !(a.is_finite() && a > 0.0) {
                return Err(BodyError::InvalidAxis(a));
            }
        }
        let sup = semi_axes.iter().cloned().fold(0.0f64, f64::max);
        Ok(Self {
            n,
            sup_bound: sup,
            expr: BodyExpr::Ellipsoid { semi_axes },
        })
    }

    /// Harmonic expansion, pointwise clamped at 0.
    ///
    /// For `n = 3` the coefficients are flat over real spherical harmonics
    /// (length `(L+1)^2`); for `n = 2` over the Fourier basis (odd length).
    pub fn harmonic(n: usize, coeffs: Vec<f64>) -> Result<Self, BodyError> {
        if n != 2 && n != 3 {
            return Err(BodyError::UnsupportedHarmonicDimension(n));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(BodyError::NonFiniteCoefficient);
        }
        let valid_len = match n {
            2 => !coeffs.is_empty() && coeffs.len() % 2 == 1,
            3 => {
                let l = (coeffs.len() as f64).sqrt() as usize;
                l >= 1 && l * l == coeffs.len()
            }
            _ => unreachable!(),
        };
        if !valid_len {
            return Err(BodyError::InvalidHarmonicLength {
                n,
                got: coeffs.len(),
            });
        }
        let sup = harmonics::expansion_sup_bound(n, &coeffs);
        Ok(Self {
            n,
            sup_bound: sup,
            expr: BodyExpr::Harmonic { coeffs },
        })
    }

    /// Trapezoidal cap bump: `rho = height` within `inner_angle` of the
    /// center, 0 beyond `outer_angle`, linear in the geodesic angle between.
    pub fn cap_bump(
        center: Direction,
        inner_angle: f64,
        outer_angle: f64,
        height: f64,
    ) -> Result<Self, BodyError> {
        if !(inner_angle.is_finite()
            && outer_angle.is_finite()
            && 0.0 <= inner_angle
            && inner_angle < outer_angle
            && outer_angle <= std::f64::consts::PI)
        {
            return Err(BodyError::InvalidCapAngles {
                inner: inner_angle,
                outer: outer_angle,
            });
        }
        if !(height.is_finite() && height >= 0.0) {
            return Err(BodyError::InvalidHeight(height));
        }
        Ok(Self {
            n: center.dim(),
            sup_bound: height,
            expr: BodyExpr::CapBump {
                center,
                inner_angle,
                outer_angle,
                height,
            },
        })
    }

    /// The `f ≺ G` / `K ≺ f` bump over an open cap `G`: plateau of the
    /// given height on the closed cap of angle `shoulder * G.angle`, zero
    /// outside `G`, linear ramp between.
    pub fn make_bump(cap: &GeodesicCap, height: f64, shoulder: f64) -> Result<Self, BodyError> {
        if !(shoulder.is_finite() && shoulder > 0.0 && shoulder < 1.0) {
            return Err(BodyError::InvalidShoulder(shoulder));
        }
        Self::cap_bump(
            cap.center().clone(),
            shoulder * cap.angle(),
            cap.angle(),
            height,
        )
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Certified upper bound on `||rho||_inf`.
    pub fn sup_bound(&self) -> f64 {
        self.sup_bound
    }

    fn check_dims(&self, other: &StarBody) -> Result<(), BodyError> {
        if self.n != other.n {
            return Err(BodyError::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        Ok(())
    }

    /// `K ∪ L`: pointwise max of radial functions.
    pub fn union(&self, other: &StarBody) -> Result<Self, BodyError> {
        self.check_dims(other)?;
        Ok(Self {
            n: self.n,
            sup_bound: self.sup_bound.max(other.sup_bound),
            expr: BodyExpr::Max(Box::new(self.expr.clone()), Box::new(other.expr.clone())),
        })
    }

    /// `K ∩ L`: pointwise min of radial functions.
    pub fn intersection(&self, other: &StarBody) -> Result<Self, BodyError> {
        self.check_dims(other)?;
        Ok(Self {
            n: self.n,
            sup_bound: self.sup_bound.min(other.sup_bound),
            expr: BodyExpr::Min(Box::new(self.expr.clone()), Box::new(other.expr.clone())),
        })
    }

    /// Radial sum `K +̃ L`: pointwise sum of radial functions.
    pub fn radial_sum(&self, other: &StarBody) -> Result<Self, BodyError> {
        self.check_dims(other)?;
        Ok(Self {
            n: self.n,
            sup_bound: self.sup_bound + other.sup_bound,
            expr: BodyExpr::Sum(Box::new(self.expr.clone()), Box::new(other.expr.clone())),
        })
    }

    /// Dilation `c K` for `c > 0`.
    pub fn scale(&self, factor: f64) -> Result<Self, BodyError> {
        if !(factor.is_finite() && factor > 0.0) {
            return Err(BodyError::InvalidScale(factor));
        }
        Ok(Self {
            n: self.n,
            sup_bound: factor * self.sup_bound,
            expr: BodyExpr::Scale {
                factor,
                inner: Box::new(self.expr.clone()),
            },
        })
    }

    /// Rotated body: `rho_{R K}(u) = rho_K(R^T u)`.
    pub fn rotate(&self, rotation: &Rotation) -> Result<Self, BodyError> {
        if rotation.dim() != self.n {
            return Err(BodyError::DimensionMismatch {
                expected: self.n,
                got: rotation.dim(),
            });
        }
        Ok(Self {
            n: self.n,
            sup_bound: self.sup_bound,
            expr: BodyExpr::Rotate {
                rotation: rotation.clone(),
                inner: Box::new(self.expr.clone()),
            },
        })
    }

    /// Radial function value at a unit direction. Total and nonnegative.
    pub fn radial(&self, u: &Direction) -> f64 {
        debug_assert_eq!(u.dim(), self.n);
        eval_expr(&self.expr, u.coords())
    }

    /// Checked evaluation: dimension match and finiteness.
    pub fn eval_radial(&self, u: &Direction) -> Result<f64, BodyError> {
        if u.dim() != self.n {
            return Err(BodyError::DimensionMismatch {
                expected: self.n,
                got: u.dim(),
            });
        }
        let v = self.radial(u);
        if !v.is_finite() {
            return Err(BodyError::MalformedBody);
        }
        Ok(v)
    }
}

fn eval_expr(expr: &BodyExpr, u: &[f64]) -> f64 {
    match expr {
        BodyExpr::Ball { radius } => *radius,
        BodyExpr::Ellipsoid { semi_axes } => {
            let q: f64 = u
                .iter()
                .zip(semi_axes)
                .map(|(ui, ai)| (ui / ai) * (ui / ai))
                .sum();
            1.0 / q.sqrt()
        }
        BodyExpr::Harmonic { coeffs } => {
            let raw = match u.len() {
                2 => harmonics::eval_circ_expansion(coeffs, u),
                3 => harmonics::eval_sph_expansion(coeffs, u),
                _ => unreachable!("validated at construction"),
            };
            raw.max(0.0)
        }
        BodyExpr::CapBump {
            center,
            inner_angle,
            outer_angle,
            height,
        } => {
            let cos_angle: f64 = u.iter().zip(center.coords()).map(|(a, b)| a * b).sum();
            let phi = cos_angle.clamp(-1.0, 1.0).acos();
            if phi <= *inner_angle {
                *height
            } else if phi >= *outer_angle {
                0.0
            } else {
                height * (outer_angle - phi) / (outer_angle - inner_angle)
            }
        }
        BodyExpr::Max(a, b) => eval_expr(a, u).max(eval_expr(b, u)),
        BodyExpr::Min(a, b) => eval_expr(a, u).min(eval_expr(b, u)),
        BodyExpr::Sum(a, b) => eval_expr(a, u) + eval_expr(b, u),
        BodyExpr::Scale { factor, inner } => factor * eval_expr(inner, u),
        BodyExpr::Rotate { rotation, inner } => {
            let mut pulled = vec![0.0; u.len()];
            rotation.apply_transpose_raw(u, &mut pulled);
            eval_expr(inner, &pulled)
        }
    }
}

/// Radial metric `delta(K, L) = ||rho_K - rho_L||_inf`, estimated as the max
/// over the grid of quadrature nodes. A lower bound of the true sup-norm;
/// tightens under grid refinement.
pub fn radial_distance(
    k: &StarBody,
    l: &StarBody,
    grid: &SphereQuadrature,
) -> Result<f64, BodyError> {
    k.check_dims(l)?;
    if grid.dim() != k.dim() {
        return Err(BodyError::DimensionMismatch {
            expected: k.dim(),
            got: grid.dim(),
        });
    }
    let mut best = 0.0f64;
    for u in grid.nodes() {
        let d = (k.radial(u) - l.radial(u)).abs();
        if !d.is_finite() {
            return Err(BodyError::MalformedBody);
        }
        best = best.max(d);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{build_quadrature, QuadScheme};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn dir3(x: f64, y: f64, z: f64) -> Direction {
        Direction::normalized(vec![x, y, z]).unwrap()
    }

    #[test]
    fn primitive_evaluations() {
        let ball = StarBody::ball(3, 2.0).unwrap();
        assert_eq!(ball.radial(&dir3(0.0, 1.0, 0.0)), 2.0);

        let unit = StarBody::ellipsoid(vec![1.0, 1.0, 1.0]).unwrap();
        assert_eq!(unit.radial(&dir3(1.0, 2.0, -2.0)), 1.0);

        let e = StarBody::ellipsoid(vec![2.0, 1.0, 1.0]).unwrap();
        assert_relative_eq!(e.radial(&dir3(1.0, 0.0, 0.0)), 2.0, max_relative = 1e-15);
        assert_relative_eq!(e.radial(&dir3(0.0, 1.0, 0.0)), 1.0, max_relative = 1e-15);
    }

    #[test]
    fn union_intersection_and_sum() {
        let e = StarBody::ellipsoid(vec![2.0, 1.0, 1.0]).unwrap();
        let b = StarBody::ball(3, 1.5).unwrap();
        let u = e.union(&b).unwrap();
        assert_relative_eq!(u.radial(&dir3(1.0, 0.0, 0.0)), 2.0);
        assert_relative_eq!(u.radial(&dir3(0.0, 1.0, 0.0)), 1.5);

        let inner = StarBody::ball(3, 1.0)
            .unwrap()
            .intersection(&StarBody::ball(3, 2.0).unwrap())
            .unwrap();
        assert_eq!(inner.radial(&dir3(0.0, 0.0, 1.0)), 1.0);

        let s = StarBody::ball(3, 1.0)
            .unwrap()
            .radial_sum(&StarBody::ball(3, 2.0).unwrap())
            .unwrap();
        assert_eq!(s.radial(&dir3(1.0, 1.0, 1.0)), 3.0);

        let zero = StarBody::ball(3, 0.0).unwrap();
        let same = e.radial_sum(&zero).unwrap();
        let u0 = dir3(0.3, -0.4, 0.86);
        assert_eq!(same.radial(&u0), e.radial(&u0));

        let mismatch = StarBody::ball(2, 1.0).unwrap();
        assert!(e.union(&mismatch).is_err());
    }

    #[test]
    fn scaling_and_rotation() {
        let e = StarBody::ellipsoid(vec![2.0, 1.0, 1.0]).unwrap();
        let half = e.scale(0.5).unwrap();
        assert_relative_eq!(half.radial(&dir3(1.0, 0.0, 0.0)), 1.0);
        assert!(e.scale(-1.0).is_err());
        assert!(e.scale(0.0).is_err());

        // Rotation mapping e1 -> e2 moves the long axis onto e2.
        let r = Rotation::from_rows(vec![
            vec![0.0, -1.0, 0.0],
            vec![1.0, 0.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ])
        .unwrap();
        let rotated = e.rotate(&r).unwrap();
        assert_relative_eq!(
            rotated.radial(&dir3(0.0, 1.0, 0.0)),
            2.0,
            max_relative = 1e-14
        );

        // rotate then rotate back is the identity pointwise.
        let back = rotated.rotate(&r.inverse()).unwrap();
        let q = build_quadrature(3, 8, QuadScheme::ProductGauss, None).unwrap();
        for u in q.nodes().iter().step_by(7) {
            assert!((back.radial(u) - e.radial(u)).abs() < 1e-12);
        }

        let ball = StarBody::ball(3, 1.25).unwrap();
        let rb = ball.rotate(&r).unwrap();
        for u in q.nodes().iter().step_by(11) {
            assert_eq!(rb.radial(u), 1.25);
        }
    }

    #[test]
    fn bump_profile_and_support() {
        let cap = GeodesicCap::new(dir3(0.0, 0.0, 1.0), PI / 4.0).unwrap();
        let bump = StarBody::make_bump(&cap, 1.0, 0.5).unwrap();
        // Plateau at the center.
        assert_eq!(bump.radial(&dir3(0.0, 0.0, 1.0)), 1.0);
        // Midpoint of the ramp between pi/8 and pi/4.
        let phi = 3.0 * PI / 16.0;
        let u = dir3(phi.sin(), 0.0, phi.cos());
        assert_relative_eq!(bump.radial(&u), 0.5, epsilon = 1e-12);
        // Exactly zero outside the open cap.
        let outside = dir3((PI / 4.0).sin() + 1e-9, 0.0, (PI / 4.0).cos());
        assert_eq!(bump.radial(&outside), 0.0);
        assert_eq!(bump.radial(&dir3(0.0, 0.0, -1.0)), 0.0);

        // Zero height encodes {0}.
        let zero = StarBody::make_bump(&cap, 0.0, 0.5).unwrap();
        assert_eq!(zero.radial(&dir3(1.0, 0.0, 0.0)), 0.0);
        assert_eq!(zero.sup_bound(), 0.0);

        assert!(StarBody::make_bump(&cap, 1.0, 0.0).is_err());
        assert!(StarBody::make_bump(&cap, 1.0, 1.0).is_err());
    }

    #[test]
    fn radial_distance_cases() {
        let q = build_quadrature(3, 40, QuadScheme::ProductGauss, None).unwrap();
        let b1 = StarBody::ball(3, 1.0).unwrap();
        let b3 = StarBody::ball(3, 3.0).unwrap();
        assert_eq!(radial_distance(&b1, &b1, &q).unwrap(), 0.0);
        assert_relative_eq!(radial_distance(&b1, &b3, &q).unwrap(), 2.0);

        let e = StarBody::ellipsoid(vec![2.0, 1.0, 1.0]).unwrap();
        let d = radial_distance(&b1, &e, &q).unwrap();
        assert!(d <= 1.0 + 1e-12, "grid max is a lower bound of the sup");
        assert!(d > 0.9, "fine grid comes close to the true sup 1");
    }

    #[test]
    fn harmonic_clamp_and_bound() {
        // Pure Y_00 term: rho = c / sqrt(4 pi).
        let c = (4.0 * PI).sqrt();
        let h = StarBody::harmonic(3, vec![c, 0.0, 0.0, 0.0]).unwrap();
        assert_relative_eq!(h.radial(&dir3(0.57, -0.3, 0.76)), 1.0, epsilon = 1e-12);
        assert_relative_eq!(h.sup_bound(), 1.0, epsilon = 1e-12);

        // A negative-mean expansion clamps to zero.
        let neg = StarBody::harmonic(3, vec![-c, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(neg.radial(&dir3(1.0, 0.0, 0.0)), 0.0);

        assert!(StarBody::harmonic(3, vec![1.0, 2.0]).is_err());
        assert!(StarBody::harmonic(4, vec![1.0]).is_err());
        assert!(StarBody::harmonic(3, vec![f64::NAN, 0.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn cap_measure_formulas() {
        let cap3 = GeodesicCap::new(dir3(0.0, 0.0, 1.0), PI / 3.0).unwrap();
        assert_relative_eq!(
            cap3.measure(),
            2.0 * PI * (1.0 - (PI / 3.0).cos()),
            max_relative = 1e-14
        );
        let cap2 = GeodesicCap::new(
            Direction::normalized(vec![1.0, 0.0]).unwrap(),
            PI / 5.0,
        )
        .unwrap();
        assert_relative_eq!(cap2.measure(), 2.0 * PI / 5.0, max_relative = 1e-14);
        // n = 4 hemisphere: half the total measure.
        let half = cap_measure(4, PI / 2.0);
        assert_relative_eq!(
            half,
            surface_measure(4).unwrap() / 2.0,
            max_relative = 1e-12
        );
        assert!(GeodesicCap::new(dir3(0.0, 0.0, 1.0), 0.0).is_err());
        assert!(GeodesicCap::new(dir3(0.0, 0.0, 1.0), PI).is_err());
    }
}
