//! Rotation-invariant radial-continuous valuations on star bodies.
//!
//! A star body `K` in `R^n` is described by its radial function
//! `rho_K: S^{n-1} -> [0, oo)`. A valuation of the form
//!
//! ```text
//! V(K) = ∫_{S^{n-1}} theta(rho_K(t)) dm(t)
//! ```
//!
//! with `theta` continuous and `m` the (non-normalized) surface measure is
//! radial-continuous, rotation invariant, and satisfies the valuation
//! identity `V(K ∪ L) + V(K ∩ L) = V(K) + V(L)`. This crate provides:
//!
//! * [`sphere`] / [`quadrature`] — directions, rotations, and deterministic
//!   quadrature rules realizing integration against `m` (product
//!   Gauss–Legendre for `n = 2, 3`, seeded Monte Carlo for any `n`);
//! * [`body`] — star bodies as expression trees over primitives (balls,
//!   ellipsoids, clamped harmonic expansions, geodesic cap bumps) with the
//!   lattice operations `∪`, `∩`, radial sum, scaling, and rotation;
//! * [`theta`] — the profile functions `theta` with domain bounds and
//!   evaluable moduli of continuity;
//! * [`valuation`] — evaluation of integral valuations, dual
//!   quermassintegrals, and residual checkers for the valuation axiom,
//!   inclusion–exclusion, rotation invariance, and continuity;
//! * [`hadwiger`] — recovery of `theta` from a black-box valuation via
//!   `V(lambda B) = theta(lambda) m(S^{n-1})`, Chebyshev polynomial fits,
//!   and certified uniform approximation by linear combinations of dual
//!   quermassintegrals;
//! * [`measure`] — desk-scale outer-measure and content estimators over a
//!   trapezoidal bump family on geodesic caps, with proportionality and
//!   vanishing checks against the Lebesgue measure.

pub mod body;
pub mod body_spec;
pub mod chebyshev;
pub mod hadwiger;
pub mod harmonics;
pub mod measure;
pub mod quadrature;
pub mod sphere;
pub mod theta;
pub mod valuation;

pub use body::{radial_distance, GeodesicCap, StarBody};
pub use body_spec::{parse_body, BodySpec, ParseError};
pub use hadwiger::{
    approximation_report, fit_polynomial, quermass_combination, recover_theta, ApproxError,
    ApproxReport, PolynomialFit, ThetaRecovery, ThetaSource,
};
pub use measure::{
    estimate_content, estimate_outer_measure, proportionality_check, vanishing_check,
    MeasureEstimate, MeasureError, ProportionalityReport,
};
pub use quadrature::{build_quadrature, integrate, QuadScheme, SphereQuadrature};
pub use sphere::{
    apply_rotation, random_rotation, surface_measure, Direction, Rotation, SphereError,
};
pub use theta::{parse_theta, BuiltinTheta, ThetaFunction, ThetaKind};
pub use valuation::{
    check_rotation_invariance, check_valuation_axiom, continuity_modulus_check,
    dual_quermassintegral, eval_valuation, inclusion_exclusion_residual, polynomial_valuation,
    BlackBoxValuation, ContinuityCheck, ValuationError, ValuationKind,
};
