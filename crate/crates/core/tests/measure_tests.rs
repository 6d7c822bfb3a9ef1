//! Measure-lab oracle agreement and the set-function properties the
//! estimators inherit from the constructions they realize.

mod common;

use common::{brute_theta_max, suite_thetas};
use starval::theta::ThetaFunction;
use starval::{
    build_quadrature, estimate_content, estimate_outer_measure, vanishing_check, Direction,
    GeodesicCap, QuadScheme,
};
use std::f64::consts::PI;

fn pole_cap(angle: f64) -> GeodesicCap {
    GeodesicCap::new(Direction::new(vec![0.0, 0.0, 1.0]).unwrap(), angle).unwrap()
}

/// Independent 1-D oracles: outer/m(G) -> max theta on [0, lambda], and
/// content/m(K) -> theta(lambda), for every suite theta.
#[test]
fn oracle_agreement_on_suite() {
    let q = build_quadrature(3, 40, QuadScheme::ProductGauss, None).unwrap();
    let cap = pole_cap(PI / 6.0);
    for theta in suite_thetas() {
        let lambda = 1.0;
        let outer = estimate_outer_measure(&theta, &cap, lambda, 200, &q).unwrap();
        let outer_oracle = brute_theta_max(&theta, lambda, 20_000);
        let ratio = outer.value / cap.measure();
        assert!(
            (ratio - outer_oracle).abs() <= 0.05 * outer_oracle.max(1e-6),
            "{}: outer ratio {ratio} vs oracle {outer_oracle}",
            theta.label()
        );

        let content = estimate_content(&theta, &cap, lambda, 200, &q).unwrap();
        let content_oracle = theta.eval_in_domain(lambda);
        let ratio = content.value / cap.measure();
        assert!(
            (ratio - content_oracle).abs() <= 0.05 * outer_oracle.max(1e-6),
            "{}: content ratio {ratio} vs oracle {content_oracle}",
            theta.label()
        );
    }
}

/// Subadditivity on disjoint caps: the sum of outer estimates for two
/// disjoint caps is dominated by the estimate of a cap containing both.
#[test]
fn outer_subadditivity_on_disjoint_caps() {
    let q = build_quadrature(3, 40, QuadScheme::ProductGauss, None).unwrap();
    let lin = &suite_thetas()[0];
    // Two caps of angle pi/12 at +/- 30 degrees from the pole are disjoint
    // and contained in the pole cap of angle pi/2.
    let tilt = PI / 6.0;
    let c1 = GeodesicCap::new(
        Direction::normalized(vec![tilt.sin(), 0.0, tilt.cos()]).unwrap(),
        PI / 12.0,
    )
    .unwrap();
    let c2 = GeodesicCap::new(
        Direction::normalized(vec![-tilt.sin(), 0.0, tilt.cos()]).unwrap(),
        PI / 12.0,
    )
    .unwrap();
    let big = pole_cap(PI / 2.0);
    let e1 = estimate_outer_measure(lin, &c1, 1.0, 120, &q).unwrap();
    let e2 = estimate_outer_measure(lin, &c2, 1.0, 120, &q).unwrap();
    let eb = estimate_outer_measure(lin, &big, 1.0, 120, &q).unwrap();
    assert!(e1.value + e2.value <= eb.value + 1e-9);
}

/// The content can vanish while the outer measure does not: the
/// double-measure phenomenon for non-monotone theta.
#[test]
fn content_and_outer_can_disagree() {
    let q = build_quadrature(3, 40, QuadScheme::ProductGauss, None).unwrap();
    let hump = ThetaFunction::polynomial(vec![0.0, 1.0, -1.0], 1.0, true).unwrap();
    let cap = pole_cap(PI / 5.0);
    let outer = estimate_outer_measure(&hump, &cap, 1.0, 200, &q).unwrap();
    let content = estimate_content(&hump, &cap, 1.0, 200, &q).unwrap();
    assert!(outer.value / cap.measure() > 0.2, "outer sees the interior max");
    assert!(content.value / cap.measure() < 0.01, "content sees theta(1) = 0");
}

#[test]
fn vanishing_bound_holds_for_suite() {
    let q = build_quadrature(3, 40, QuadScheme::ProductGauss, None).unwrap();
    let caps: Vec<GeodesicCap> = [PI / 8.0, PI / 16.0, PI / 32.0]
        .iter()
        .map(|&a| pole_cap(a))
        .collect();
    for theta in suite_thetas() {
        let rows = vanishing_check(&theta, 1.0, &caps, 150, &q).unwrap();
        let vartheta = brute_theta_max(&theta, 1.0, 20_000);
        for row in &rows {
            assert!(
                row.estimate <= vartheta * row.cap_measure * (1.0 + 1e-9) + 1e-15,
                "{}: {} > {}",
                theta.label(),
                row.estimate,
                vartheta * row.cap_measure
            );
        }
        for pair in rows.windows(2) {
            assert!(
                pair[0].estimate >= pair[1].estimate,
                "{}: estimates must shrink with the caps",
                theta.label()
            );
        }
    }
}

/// The estimator trace honors its budget and records the best trial it
/// reports.
#[test]
fn trace_is_consistent() {
    let q = build_quadrature(3, 20, QuadScheme::ProductGauss, None).unwrap();
    let sq = &suite_thetas()[1];
    let est = estimate_outer_measure(sq, &pole_cap(PI / 4.0), 1.5, 60, &q).unwrap();
    assert!(est.evaluations_used <= 60);
    assert_eq!(est.trace.len(), est.evaluations_used);
    let max_in_trace = est
        .trace
        .iter()
        .map(|t| t.value)
        .fold(f64::NEG_INFINITY, f64::max);
    assert_eq!(est.value, max_in_trace);
    assert_eq!(est.value, est.best.value);
    assert!(est.bias_bound >= 0.0);
}
