//! Directions on the unit sphere, rotations, and the surface measure.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Absolute tolerance for unit-norm and orthogonality checks.
pub const GEOMETRY_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum SphereError {
    #[error("dimension must be at least 2, got {0}")]
    InvalidDimension(usize),
    #[error("direction norm deviates from 1 by {0:.3e}")]
    NotUnitNorm(f64),
    #[error("cannot normalize a zero or non-finite vector")]
    DegenerateVector,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is not a rotation: {0}")]
    NotARotation(String),
    #[error("scheme `{scheme}` is unsupported in dimension {n}")]
    UnsupportedScheme { scheme: String, n: usize },
    #[error("quadrature rule must have at least one node")]
    EmptyRule,
    #[error("integrand returned non-finite value {value} at node {index}")]
    NonFiniteIntegrand { value: f64, index: usize },
    #[error("weight sum {got:.17e} deviates from surface measure {expected:.17e}")]
    WeightSumMismatch { got: f64, expected: f64 },
}

/// A unit vector in `R^n`, i.e. a point of `S^{n-1}`.
///
/// Invariants: `n >= 2` and the Euclidean norm equals 1 within
/// [`GEOMETRY_TOL`]. Deserialization normalizes the coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Direction {
    coords: Vec<f64>,
}

impl Direction {
    /// Wraps coordinates that are already unit-norm.
    pub fn new(coords: Vec<f64>) -> Result<Self, SphereError> {
        if coords.len() < 2 {
            return Err(SphereError::InvalidDimension(coords.len()));
        }
        let norm = norm(&coords);
        if !norm.is_finite() {
            return Err(SphereError::DegenerateVector);
        }
        let excess = (norm - 1.0).abs();
        if excess > GEOMETRY_TOL {
            return Err(SphereError::NotUnitNorm(excess));
        }
        Ok(Self { coords })
    }

    /// Normalizes arbitrary nonzero coordinates to a unit vector.
    pub fn normalized(mut coords: Vec<f64>) -> Result<Self, SphereError> {
        if coords.len() < 2 {
            return Err(SphereError::InvalidDimension(coords.len()));
        }
        let norm = norm(&coords);
        if !norm.is_finite() || norm <= 0.0 {
            return Err(SphereError::DegenerateVector);
        }
        for c in &mut coords {
            *c /= norm;
        }
        Ok(Self { coords })
    }

    /// The `i`-th standard basis vector in `R^n`.
    pub fn axis(n: usize, i: usize) -> Result<Self, SphereError> {
        if n < 2 {
            return Err(SphereError::InvalidDimension(n));
        }
        assert!(i < n, "axis index out of range");
        let mut coords = vec![0.0; n];
        coords[i] = 1.0;
        Ok(Self { coords })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dot(&self, other: &Direction) -> f64 {
        dot(&self.coords, &other.coords)
    }

    /// Geodesic angle to `other`, in `[0, pi]`.
    pub fn angle_to(&self, other: &Direction) -> f64 {
        self.dot(other).clamp(-1.0, 1.0).acos()
    }
}

impl TryFrom<Vec<f64>> for Direction {
    type Error = SphereError;

    fn try_from(coords: Vec<f64>) -> Result<Self, Self::Error> {
        Direction::normalized(coords)
    }
}

impl From<Direction> for Vec<f64> {
    fn from(d: Direction) -> Vec<f64> {
        d.coords
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

/// A proper rotation of `R^n`: an orthogonal matrix with determinant +1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct Rotation {
    n: usize,
    /// Row-major `n x n` entries.
    matrix: Vec<f64>,
}

impl Rotation {
    /// Validates orthogonality (`max |R^T R - I| <= 1e-12`) and `det R = +1`.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self, SphereError> {
        let n = rows.len();
        if n < 2 {
            return Err(SphereError::InvalidDimension(n));
        }
        let mut matrix = Vec::with_capacity(n * n);
        for row in &rows {
            if row.len() != n {
                return Err(SphereError::NotARotation(format!(
                    "row length {} in a {}-row matrix",
                    row.len(),
                    n
                )));
            }
            matrix.extend_from_slice(row);
        }
        let r = Self { n, matrix };
        r.validate()?;
        Ok(r)
    }

    pub fn identity(n: usize) -> Result<Self, SphereError> {
        if n < 2 {
            return Err(SphereError::InvalidDimension(n));
        }
        let mut matrix = vec![0.0; n * n];
        for i in 0..n {
            matrix[i * n + i] = 1.0;
        }
        Ok(Self { n, matrix })
    }

    fn validate(&self) -> Result<(), SphereError> {
        let n = self.n;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                // (R^T R)_{ij} = column_i . column_j
                let mut s = 0.0;
                for k in 0..n {
                    s += self.matrix[k * n + i] * self.matrix[k * n + j];
                }
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((s - target).abs());
            }
        }
        if worst > GEOMETRY_TOL {
            return Err(SphereError::NotARotation(format!(
                "orthogonality defect {worst:.3e}"
            )));
        }
        let det = self.determinant();
        if (det - 1.0).abs() > GEOMETRY_TOL {
            return Err(SphereError::NotARotation(format!("determinant {det}")));
        }
        Ok(())
    }

    fn determinant(&self) -> f64 {
        // Gaussian elimination with partial pivoting on a copy.
        let n = self.n;
        let mut a = self.matrix.clone();
        let mut det = 1.0;
        for col in 0..n {
            let mut pivot = col;
            for row in col + 1..n {
                if a[row * n + col].abs() > a[pivot * n + col].abs() {
                    pivot = row;
                }
            }
            if a[pivot * n + col] == 0.0 {
                return 0.0;
            }
            if pivot != col {
                for k in 0..n {
                    a.swap(col * n + k, pivot * n + k);
                }
                det = -det;
            }
            let d = a[col * n + col];
            det *= d;
            for row in col + 1..n {
                let f = a[row * n + col] / d;
                for k in col..n {
                    a[row * n + k] -= f * a[col * n + k];
                }
            }
        }
        det
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Row-major matrix entries.
    pub fn entries(&self) -> &[f64] {
        &self.matrix
    }

    /// The inverse rotation (the transpose).
    pub fn inverse(&self) -> Rotation {
        let n = self.n;
        let mut matrix = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                matrix[i * n + j] = self.matrix[j * n + i];
            }
        }
        Self { n, matrix }
    }

    pub(crate) fn apply_raw(&self, v: &[f64], out: &mut [f64]) {
        let n = self.n;
        for (i, o) in out.iter_mut().enumerate() {
            *o = dot(&self.matrix[i * n..(i + 1) * n], v);
        }
    }

    /// Applies the inverse rotation: `out = R^T v`.
    pub(crate) fn apply_transpose_raw(&self, v: &[f64], out: &mut [f64]) {
        let n = self.n;
        for o in out.iter_mut() {
            *o = 0.0;
        }
        for (j, &vj) in v.iter().enumerate() {
            let row = &self.matrix[j * n..(j + 1) * n];
            for (o, &r) in out.iter_mut().zip(row) {
                *o += r * vj;
            }
        }
    }
}

impl TryFrom<Vec<Vec<f64>>> for Rotation {
    type Error = SphereError;

    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self, Self::Error> {
        Rotation::from_rows(rows)
    }
}

impl From<Rotation> for Vec<Vec<f64>> {
    fn from(r: Rotation) -> Vec<Vec<f64>> {
        (0..r.n)
            .map(|i| r.matrix[i * r.n..(i + 1) * r.n].to_vec())
            .collect()
    }
}

/// Applies a rotation to a direction; the result is renormalized.
pub fn apply_rotation(r: &Rotation, u: &Direction) -> Result<Direction, SphereError> {
    if r.dim() != u.dim() {
        return Err(SphereError::DimensionMismatch {
            expected: r.dim(),
            got: u.dim(),
        });
    }
    let mut out = vec![0.0; r.dim()];
    r.apply_raw(u.coords(), &mut out);
    Direction::normalized(out)
}

/// Surface measure `sigma_{n-1} = 2 pi^{n/2} / Gamma(n/2)` of `S^{n-1}`.
///
/// Computed by the recurrence `sigma_{d} = 2 pi sigma_{d-2} / (d - 2)`
/// (indices as ambient dimensions), which is exact for integer and
/// half-integer Gamma arguments.
pub fn surface_measure(n: usize) -> Result<f64, SphereError> {
    if n < 2 {
        return Err(SphereError::InvalidDimension(n));
    }
    // s[d] = surface of S^{d-1} in R^d; s[1] = 2 (two points), s[2] = 2 pi.
    let mut prev = 2.0; // d = 1
    let mut cur = 2.0 * std::f64::consts::PI; // d = 2
    for d in 3..=n {
        let next = 2.0 * std::f64::consts::PI * prev / (d as f64 - 2.0);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Haar-distributed rotation, deterministic per seed.
///
/// Draws a Gaussian matrix from a ChaCha stream, orthonormalizes its columns
/// with two passes of modified Gram–Schmidt (the positive-diagonal QR
/// convention), and flips the last column if the determinant is -1.
pub fn random_rotation(n: usize, seed: u64) -> Result<Rotation, SphereError> {
    if n < 2 {
        return Err(SphereError::InvalidDimension(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        // Columns stored contiguously: col[j][i] = a[j * n + i].
        let mut a = vec![0.0f64; n * n];
        for v in a.iter_mut() {
            *v = rng.sample(StandardNormal);
        }
        if let Some(rot) = gram_schmidt_rotation(n, &mut a) {
            return Ok(rot);
        }
        // Numerically rank-deficient draw (probability ~ 0); redraw.
    }
}

fn gram_schmidt_rotation(n: usize, cols: &mut [f64]) -> Option<Rotation> {
    for _pass in 0..2 {
        for j in 0..n {
            for k in 0..j {
                let proj = column_dot(cols, n, k, j);
                for i in 0..n {
                    cols[j * n + i] -= proj * cols[k * n + i];
                }
            }
            let nrm = column_dot(cols, n, j, j).sqrt();
            if nrm < 1e-12 {
                return None;
            }
            for i in 0..n {
                cols[j * n + i] /= nrm;
            }
        }
    }
    // Row-major matrix from columns.
    let mut matrix = vec![0.0; n * n];
    for j in 0..n {
        for i in 0..n {
            matrix[i * n + j] = cols[j * n + i];
        }
    }
    let mut rot = Rotation { n, matrix };
    if rot.determinant() < 0.0 {
        for i in 0..n {
            rot.matrix[i * n + (n - 1)] = -rot.matrix[i * n + (n - 1)];
        }
    }
    rot.validate().ok()?;
    Some(rot)
}

fn column_dot(cols: &[f64], n: usize, a: usize, b: usize) -> f64 {
    (0..n).map(|i| cols[a * n + i] * cols[b * n + i]).sum()
}
