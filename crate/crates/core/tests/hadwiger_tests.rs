//! Recovery and approximation pipeline: round trips, the certified
//! inequality chain, and fit-quality behavior.

mod common;

use common::{brute_minimax_degree1, random_probe_body, suite_thetas};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use starval::theta::ThetaFunction;
use starval::{
    approximation_report, build_quadrature, eval_valuation, fit_polynomial, quermass_combination,
    recover_theta, BlackBoxValuation, QuadScheme, StarBody, ThetaSource, ValuationKind,
};
use std::f64::consts::PI;

#[test]
fn recovery_round_trip_all_builtins() {
    let q = build_quadrature(3, 16, QuadScheme::ProductGauss, None).unwrap();
    for theta in suite_thetas() {
        let v = BlackBoxValuation::from_theta(theta.clone(), q.clone());
        let rec = recover_theta(&v, 2.0, 17).unwrap();
        for (lam, val) in rec.lambda_grid.iter().zip(&rec.theta_values) {
            let expected = theta.eval_in_domain(*lam);
            assert!(
                (val - expected).abs() <= 1e-12 * (1.0 + expected.abs()),
                "{}: recovered {val} at {lam}, expected {expected}",
                theta.label()
            );
        }
        // Recovered values are nonnegative to rounding, with theta(0) = 0.
        assert_eq!(rec.theta_values[0], 0.0);
        assert!(rec.theta_values.iter().all(|&v| v >= -1e-12));
    }
}

#[test]
fn poor_fit_is_reported_not_hidden() {
    // theta = |x - 1| on [0, 2]: the best possible degree-1 sup error
    // (brute-force minimax oracle) is >= 0.4, so the fit error must be too.
    let kink = ThetaFunction::piecewise(
        vec![0.0, 1.0, 2.0],
        vec![1.0, 0.0, 1.0],
        2.0,
        false,
    )
    .unwrap();
    let oracle = brute_minimax_degree1(|x| (x - 1.0).abs(), 0.0, 2.0);
    assert!(oracle >= 0.4, "minimax oracle {oracle}");
    let fit = fit_polynomial(&kink, 2.0, 1).unwrap();
    assert!(fit.fit_error >= oracle * (1.0 - 1e-9));
}

#[test]
fn fit_error_monotone_in_degree_for_smooth_builtins() {
    for theta in suite_thetas() {
        let mut last = f64::INFINITY;
        for degree in [2usize, 4, 6, 8, 12] {
            let fit = fit_polynomial(&theta, 2.0, degree).unwrap();
            // Monotone improvement until the rounding floor of the
            // monomial re-expansion (~1e-13).
            assert!(
                fit.fit_error <= last.max(1e-13),
                "{} degree {degree}: {} > {}",
                theta.label(),
                fit.fit_error,
                last
            );
            last = fit.fit_error;
        }
    }
}

#[test]
fn certified_chain_over_probes() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let q = build_quadrature(3, 18, QuadScheme::ProductGauss, None).unwrap();
    let sin = &suite_thetas()[3];
    let probes: Vec<StarBody> = (0..50).map(|_| random_probe_body(&mut rng, 2.0)).collect();
    let report = approximation_report(
        &ValuationKind::Theta(sin),
        2.0,
        8,
        &probes,
        "50 random probes",
        &q,
    )
    .unwrap();
    assert!(report.certified);
    assert!(report.empirical_max_residual <= report.valuation_error_bound + 1e-8);
    // The chain holds for every probe individually, not just at the max.
    let fit = fit_polynomial(sin, 2.0, 8).unwrap();
    for probe in &probes {
        let exact = eval_valuation(sin, probe, &q).unwrap();
        let approx = quermass_combination(&fit.coefficients, probe, &q).unwrap();
        assert!((exact - approx).abs() <= fit.fit_error * 4.0 * PI + 1e-8);
    }
}

#[test]
fn recovered_fit_through_live_source() {
    // Fitting through the black box evaluates it at the Chebyshev nodes, so
    // polynomial thetas are reproduced to rounding even though the recovery
    // grid itself is coarse.
    let theta = ThetaFunction::polynomial(vec![0.0, 0.0, 0.0, 2.5], 2.0, true).unwrap();
    let q = build_quadrature(3, 12, QuadScheme::ProductGauss, None).unwrap();
    let v = BlackBoxValuation::from_theta(theta, q);
    let rec = recover_theta(&v, 2.0, 5).unwrap();
    let fit = fit_polynomial(&v, 2.0, 3).unwrap();
    for (i, want) in [0.0, 0.0, 0.0, 2.5].iter().enumerate() {
        assert!(
            (fit.coefficients[i] - want).abs() < 1e-10,
            "coefficient {i}: {} vs {want}",
            fit.coefficients[i]
        );
    }
    // The piecewise proxy built from the coarse grid is far rougher; its
    // label records the provenance.
    let proxy = rec.to_piecewise(true).unwrap();
    assert!(proxy.theta_at(1.0).is_ok());
}

#[test]
fn report_serialization_round_trip() {
    let q = build_quadrature(3, 10, QuadScheme::ProductGauss, None).unwrap();
    let cube = &suite_thetas()[2];
    let probes = vec![StarBody::ball(3, 1.0).unwrap()];
    let report = approximation_report(
        &ValuationKind::Theta(cube),
        2.0,
        3,
        &probes,
        "single ball",
        &q,
    )
    .unwrap();
    let text = serde_json::to_string(&report).unwrap();
    let back: starval::ApproxReport = serde_json::from_str(&text).unwrap();
    assert_eq!(report.coefficients, back.coefficients);
    assert_eq!(report.empirical_max_residual, back.empirical_max_residual);
    assert_eq!(report.certified, back.certified);
}
