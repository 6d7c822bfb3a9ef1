//! Shared oracles and generators for the integration and acceptance suites.
//!
//! Everything here is independent of the quadrature/optimizer paths it is
//! used to check: moments come from the closed-form Gamma formula, maxima
//! from brute-force 1-D grids, and expected values from hand algebra.

#![allow(dead_code)]

use rand::Rng;
use starval::harmonics::sph_sup_bound;
use starval::theta::{BuiltinTheta, ThetaFunction};
use starval::{Direction, GeodesicCap, StarBody};
use std::f64::consts::PI;

/// `Gamma(k/2)` for integer `k >= 1`, exact by recurrence.
pub fn gamma_half(k: u32) -> f64 {
    match k {
        0 => panic!("Gamma(0) undefined"),
        1 => PI.sqrt(),
        2 => 1.0,
        _ => (k as f64 / 2.0 - 1.0) * gamma_half(k - 2),
    }
}

/// Closed-form monomial moment over the unit sphere:
/// `∫ t_1^{a_1} ... t_n^{a_n} dm = 2 ∏ Gamma(b_i) / Gamma(Σ b_i)` with
/// `b_i = (a_i + 1)/2` when every exponent is even, and 0 otherwise.
pub fn sphere_moment(exponents: &[u32]) -> f64 {
    if exponents.iter().any(|a| a % 2 == 1) {
        return 0.0;
    }
    let mut numerator = 2.0;
    let mut b_sum = 0u32;
    for &a in exponents {
        numerator *= gamma_half(a + 1);
        b_sum += a + 1;
    }
    numerator / gamma_half(b_sum)
}

/// A random sparse polynomial on R^n restricted to the sphere:
/// `(coefficient, multi-index)` terms of total degree at most `max_degree`.
pub fn random_sphere_polynomial(
    rng: &mut impl Rng,
    n: usize,
    max_degree: u32,
    terms: usize,
) -> Vec<(f64, Vec<u32>)> {
    (0..terms)
        .map(|_| {
            let coeff = rng.gen_range(-1.0..1.0);
            let mut remaining = rng.gen_range(0..=max_degree);
            let mut exps = vec![0u32; n];
            for e in exps.iter_mut().take(n - 1) {
                *e = rng.gen_range(0..=remaining);
                remaining -= *e;
            }
            exps[n - 1] = remaining;
            (coeff, exps)
        })
        .collect()
}

pub fn eval_sphere_polynomial(terms: &[(f64, Vec<u32>)], u: &Direction) -> f64 {
    terms
        .iter()
        .map(|(c, exps)| {
            c * exps
                .iter()
                .zip(u.coords())
                .map(|(&a, &x)| x.powi(a as i32))
                .product::<f64>()
        })
        .sum()
}

pub fn polynomial_moment_oracle(terms: &[(f64, Vec<u32>)]) -> f64 {
    terms.iter().map(|(c, exps)| c * sphere_moment(exps)).sum()
}

/// Brute-force max of `theta` on `[0, lambda]` over a dense uniform grid.
pub fn brute_theta_max(theta: &ThetaFunction, lambda: f64, grid: usize) -> f64 {
    (0..=grid)
        .map(|i| theta.eval_in_domain(lambda * i as f64 / grid as f64))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Brute-force sup-norm error of the best degree-1 fit of `f` on `[a, b]`.
pub fn brute_minimax_degree1(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let xs: Vec<f64> = (0..=400).map(|i| a + (b - a) * i as f64 / 400.0).collect();
    let fs: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let mut best = f64::INFINITY;
    for i in 0..=80 {
        let c0 = -1.0 + 2.0 * i as f64 / 80.0;
        for j in 0..=80 {
            let c1 = -1.0 + 2.0 * j as f64 / 80.0;
            let err = xs
                .iter()
                .zip(&fs)
                .map(|(&x, &fx)| (fx - (c0 + c1 * x)).abs())
                .fold(0.0f64, f64::max);
            best = best.min(err);
        }
    }
    best
}

/// The six suite theta functions on `[0, 2]`, all positive-flagged.
pub fn suite_thetas() -> Vec<ThetaFunction> {
    vec![
        ThetaFunction::builtin(BuiltinTheta::Power { exponent: 1.0 }, 2.0, true).unwrap(),
        ThetaFunction::builtin(BuiltinTheta::Power { exponent: 2.0 }, 2.0, true).unwrap(),
        ThetaFunction::builtin(BuiltinTheta::Power { exponent: 3.0 }, 2.0, true).unwrap(),
        ThetaFunction::builtin(BuiltinTheta::Sin, 2.0, true).unwrap(),
        ThetaFunction::builtin(BuiltinTheta::ExpMinusOne, 2.0, true).unwrap(),
        ThetaFunction::builtin(BuiltinTheta::LogisticHump, 2.0, true).unwrap(),
    ]
}

/// The five builtins named by the valuation-axiom criterion.
pub fn five_builtin_thetas() -> Vec<ThetaFunction> {
    let mut t = suite_thetas();
    t.truncate(5);
    t
}

pub fn random_direction(rng: &mut impl Rng, n: usize) -> Direction {
    loop {
        let coords: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        if let Ok(d) = Direction::normalized(coords) {
            return d;
        }
    }
}

/// A strictly positive random spherical-harmonic body: the constant term
/// dominates the certified tail bound, so the clamp never activates and the
/// radial function is a genuine polynomial of degree `l_max` on the sphere.
/// The certified sup bound is at most `sup_cap`.
pub fn random_harmonic_body(rng: &mut impl Rng, l_max: usize, sup_cap: f64) -> StarBody {
    let len = (l_max + 1) * (l_max + 1);
    let mut coeffs: Vec<f64> = (0..len).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let mut tail_bound = 0.0;
    for l in 1..=l_max {
        for m in 0..(2 * l + 1) {
            tail_bound += coeffs[l * l + m].abs() * sph_sup_bound(l);
        }
    }
    let y00 = 1.0 / (4.0 * PI).sqrt();
    coeffs[0] = (tail_bound + 0.05) / y00;
    let body = StarBody::harmonic(3, coeffs).unwrap();
    let factor = sup_cap / body.sup_bound() * rng.gen_range(0.4..1.0);
    body.scale(factor).unwrap()
}

pub fn random_ellipsoid(rng: &mut impl Rng, n: usize, lo: f64, hi: f64) -> StarBody {
    StarBody::ellipsoid((0..n).map(|_| rng.gen_range(lo..hi)).collect()).unwrap()
}

pub fn random_cap_bump(rng: &mut impl Rng, max_height: f64) -> StarBody {
    let center = random_direction(rng, 3);
    let outer = rng.gen_range(0.2..2.5);
    let cap = GeodesicCap::new(center, outer).unwrap();
    let shoulder = rng.gen_range(0.2..0.9);
    StarBody::make_bump(&cap, rng.gen_range(0.0..max_height), shoulder).unwrap()
}

/// A random body from the acceptance mix (harmonics, ellipsoids, cap bumps)
/// with certified sup bound at most `sup_cap`.
pub fn random_mixed_body(rng: &mut impl Rng, sup_cap: f64) -> StarBody {
    match rng.gen_range(0..3) {
        0 => random_harmonic_body(rng, 6, sup_cap),
        1 => random_ellipsoid(rng, 3, 0.25 * sup_cap, sup_cap),
        _ => random_cap_bump(rng, sup_cap),
    }
}

/// A richer probe family (adds unions and scaled radial sums), still with
/// certified sup bound at most `sup_cap`.
pub fn random_probe_body(rng: &mut impl Rng, sup_cap: f64) -> StarBody {
    match rng.gen_range(0..5) {
        0..=2 => random_mixed_body(rng, sup_cap),
        3 => {
            let a = random_mixed_body(rng, sup_cap);
            let b = random_mixed_body(rng, sup_cap);
            a.union(&b).unwrap()
        }
        _ => {
            let a = random_mixed_body(rng, sup_cap).scale(0.5).unwrap();
            let b = random_mixed_body(rng, sup_cap).scale(0.5).unwrap();
            a.radial_sum(&b).unwrap()
        }
    }
}
