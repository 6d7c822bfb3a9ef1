//! Chebyshev interpolation on `[0, M]` with monomial re-expansion.
//!
//! Interpolation at Chebyshev points of the first kind is a near-minimax
//! fit with a deterministic construction. Re-expansion into the monomial
//! basis is well conditioned for the moderate degrees used here (hard cap
//! 32).

/// Maximal fit degree for the monomial re-expansion.
pub const MAX_FIT_DEGREE: usize = 32;

/// Chebyshev points of the first kind mapped to `[0, m]`, in node order
/// `j = 0..=degree`.
pub fn chebyshev_nodes(degree: usize, m: f64) -> Vec<f64> {
    let count = degree + 1;
    (0..count)
        .map(|j| {
            let x = (std::f64::consts::PI * (2 * j + 1) as f64 / (2 * count) as f64).cos();
            m * (x + 1.0) / 2.0
        })
        .collect()
}

/// Chebyshev coefficients of the interpolant through values at the nodes
/// returned by [`chebyshev_nodes`].
pub fn chebyshev_coefficients(values: &[f64]) -> Vec<f64> {
    let count = values.len();
    let mut coeffs = vec![0.0; count];
    for (k, c) in coeffs.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (j, v) in values.iter().enumerate() {
            acc += v
                * (std::f64::consts::PI * k as f64 * (2 * j + 1) as f64 / (2 * count) as f64)
                    .cos();
        }
        *c = 2.0 * acc / count as f64;
    }
    coeffs[0] /= 2.0;
    coeffs
}

/// Re-expands Chebyshev coefficients on `[0, m]` into monomial coefficients
/// in the original variable, via `T_{k+1}(u) = 2 u T_k(u) - T_{k-1}(u)` with
/// `u = 2 x / m - 1`.
pub fn chebyshev_to_monomial(coeffs: &[f64], m: f64) -> Vec<f64> {
    let degree = coeffs.len().saturating_sub(1);
    let mut out = vec![0.0; degree + 1];
    if coeffs.is_empty() {
        return out;
    }
    // u(x) = -1 + (2/m) x as a monomial polynomial.
    let u = [-1.0, 2.0 / m];
    let mut t_prev = vec![1.0]; // T_0
    let mut t_cur = vec![u[0], u[1]]; // T_1
    out[0] += coeffs[0];
    if degree >= 1 {
        accumulate(&mut out, coeffs[1], &t_cur);
    }
    for &coeff in coeffs.iter().skip(2) {
        // T_k = 2 u T_{k-1} - T_{k-2}
        let mut t_next = vec![0.0; t_cur.len() + 1];
        for (i, &c) in t_cur.iter().enumerate() {
            t_next[i] += 2.0 * u[0] * c;
            t_next[i + 1] += 2.0 * u[1] * c;
        }
        for (i, &c) in t_prev.iter().enumerate() {
            t_next[i] -= c;
        }
        accumulate(&mut out, coeff, &t_next);
        t_prev = t_cur;
        t_cur = t_next;
    }
    out
}

fn accumulate(out: &mut [f64], scale: f64, poly: &[f64]) {
    for (o, &p) in out.iter_mut().zip(poly) {
        *o += scale * p;
    }
}

/// Horner evaluation of monomial coefficients `a_0..a_l`.
pub fn horner(coeffs: &[f64], x: f64) -> f64 {
    let mut acc = 0.0;
    for &c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn interpolates_polynomials_exactly() {
        // f(x) = 2 - x + 0.5 x^3 on [0, 2], degree 3 fit.
        let f = |x: f64| 2.0 - x + 0.5 * x * x * x;
        let nodes = chebyshev_nodes(3, 2.0);
        let values: Vec<f64> = nodes.iter().map(|&x| f(x)).collect();
        let cheb = chebyshev_coefficients(&values);
        let mono = chebyshev_to_monomial(&cheb, 2.0);
        for (got, want) in mono.iter().zip(&[2.0, -1.0, 0.0, 0.5]) {
            assert_relative_eq!(got, want, epsilon = 1e-13);
        }
        for i in 0..=40 {
            let x = 2.0 * i as f64 / 40.0;
            assert_relative_eq!(horner(&mono, x), f(x), epsilon = 1e-12);
        }
    }

    #[test]
    fn sin_fit_error_decays_with_degree() {
        let m = 2.0;
        let mut last = f64::INFINITY;
        for degree in [2usize, 4, 8] {
            let nodes = chebyshev_nodes(degree, m);
            let values: Vec<f64> = nodes.iter().map(|&x| x.sin()).collect();
            let mono = chebyshev_to_monomial(&chebyshev_coefficients(&values), m);
            let mut worst = 0.0f64;
            for i in 0..=500 {
                let x = m * i as f64 / 500.0;
                worst = worst.max((horner(&mono, x) - x.sin()).abs());
            }
            assert!(worst < last, "error should shrink with degree");
            last = worst;
        }
        assert!(last < 1e-6);
    }
}
