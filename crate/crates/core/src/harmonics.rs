//! Real harmonic bases on `S^1` and `S^2`.
//!
//! Degree-`l` basis functions are restrictions of homogeneous harmonic
//! polynomials, so a truncated expansion is a spherical polynomial of total
//! degree equal to the truncation degree. The certified sup bounds come from
//! the addition theorem: `sum_m Y_lm(u)^2 = (2l+1)/(4 pi)` on `S^2`.

use std::f64::consts::PI;

/// Number of real spherical harmonics through degree `l_max` on `S^2`.
pub fn sph_basis_len(l_max: usize) -> usize {
    (l_max + 1) * (l_max + 1)
}

/// Sup bound on `S^2`: `|Y_lm| <= sqrt((2l+1)/(4 pi))` for every `m`.
pub fn sph_sup_bound(l: usize) -> f64 {
    ((2 * l + 1) as f64 / (4.0 * PI)).sqrt()
}

/// Sup bound of the circular basis function with flat index `k`.
pub fn circ_sup_bound(k: usize) -> f64 {
    if k == 0 {
        1.0 / (2.0 * PI).sqrt()
    } else {
        1.0 / PI.sqrt()
    }
}

/// Evaluates a real spherical-harmonic expansion at a unit vector.
///
/// Coefficients are flat over `(l, m)` with `l = 0..=l_max`, `m = -l..=l`,
/// so the slice length must be `(l_max + 1)^2`. The basis is orthonormal
/// with respect to the (non-normalized) surface measure.
pub fn eval_sph_expansion(coeffs: &[f64], u: &[f64]) -> f64 {
    debug_assert_eq!(u.len(), 3);
    let len = coeffs.len();
    let l_max = (len as f64).sqrt() as usize - 1;
    debug_assert_eq!(sph_basis_len(l_max), len);

    let z = u[2].clamp(-1.0, 1.0);
    let rxy = (u[0] * u[0] + u[1] * u[1]).sqrt();
    let (cos_phi, sin_phi) = if rxy > 0.0 {
        (u[0] / rxy, u[1] / rxy)
    } else {
        (1.0, 0.0) // at the poles all m != 0 terms vanish
    };

    // cos(m phi), sin(m phi) by the angle-addition recurrence.
    let mut cos_m = vec![0.0; l_max + 1];
    let mut sin_m = vec![0.0; l_max + 1];
    cos_m[0] = 1.0;
    for m in 1..=l_max {
        cos_m[m] = cos_m[m - 1] * cos_phi - sin_m[m - 1] * sin_phi;
        sin_m[m] = sin_m[m - 1] * cos_phi + cos_m[m - 1] * sin_phi;
    }

    // Associated Legendre P_l^m(z) for the current m, rolled over l.
    let sqrt2 = std::f64::consts::SQRT_2;
    let mut acc = 0.0;
    let s = (1.0 - z * z).max(0.0).sqrt();
    for m in 0..=l_max {
        let mut p_mm = 1.0; // P_m^m up to the (2m-1)!! s^m factor, built below
        for k in 1..=m {
            p_mm *= -((2 * k - 1) as f64) * s;
        }
        let mut p_prev = p_mm; // P_m^m
        let mut p_cur = if m < l_max {
            z * (2 * m + 1) as f64 * p_mm // P_{m+1}^m
        } else {
            0.0
        };
        for l in m..=l_max {
            let p_lm = if l == m {
                p_prev
            } else if l == m + 1 {
                p_cur
            } else {
                let lf = l as f64;
                let mf = m as f64;
                let next =
                    ((2.0 * lf - 1.0) * z * p_cur - (lf + mf - 1.0) * p_prev) / (lf - mf);
                p_prev = p_cur;
                p_cur = next;
                next
            };
            let norm = sph_norm(l, m);
            let base = l * l + l; // flat index of (l, m = 0)
            if m == 0 {
                acc += coeffs[base] * norm * p_lm;
            } else {
                let y = sqrt2 * norm * p_lm;
                acc += coeffs[base + m] * y * cos_m[m];
                acc += coeffs[base - m] * y * sin_m[m];
            }
        }
    }
    acc
}

/// `sqrt((2l+1)/(4 pi) * (l-m)!/(l+m)!)`.
fn sph_norm(l: usize, m: usize) -> f64 {
    let mut ratio = 1.0;
    for k in (l - m + 1)..=(l + m) {
        ratio *= k as f64;
    }
    ((2 * l + 1) as f64 / (4.0 * PI) / ratio).sqrt()
}

/// Evaluates a circular-harmonic (Fourier) expansion at a unit vector in R^2.
///
/// Flat layout: `[a_0, a_1 cos, b_1 sin, a_2 cos, b_2 sin, ...]` against the
/// orthonormal basis `1/sqrt(2 pi)`, `cos(k t)/sqrt(pi)`, `sin(k t)/sqrt(pi)`.
pub fn eval_circ_expansion(coeffs: &[f64], u: &[f64]) -> f64 {
    debug_assert_eq!(u.len(), 2);
    debug_assert!(coeffs.len() % 2 == 1);
    let k_max = coeffs.len() / 2;
    let norm = (u[0] * u[0] + u[1] * u[1]).sqrt();
    let (c1, s1) = if norm > 0.0 {
        (u[0] / norm, u[1] / norm)
    } else {
        (1.0, 0.0)
    };
    let mut acc = coeffs[0] / (2.0 * PI).sqrt();
    let inv_sqrt_pi = 1.0 / PI.sqrt();
    let mut ck = 1.0;
    let mut sk = 0.0;
    for k in 1..=k_max {
        let c_next = ck * c1 - sk * s1;
        let s_next = sk * c1 + ck * s1;
        ck = c_next;
        sk = s_next;
        acc += coeffs[2 * k - 1] * ck * inv_sqrt_pi;
        acc += coeffs[2 * k] * sk * inv_sqrt_pi;
    }
    acc
}

/// Certified sup bound of an expansion: `sum |c_k| * sup |basis_k|`.
pub fn expansion_sup_bound(n: usize, coeffs: &[f64]) -> f64 {
    match n {
        2 => coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c.abs() * circ_sup_bound(k))
            .sum(),
        3 => {
            let l_max = (coeffs.len() as f64).sqrt() as usize - 1;
            let mut acc = 0.0;
            for l in 0..=l_max {
                let b = sph_sup_bound(l);
                for m in 0..(2 * l + 1) {
                    acc += coeffs[l * l + m].abs() * b;
                }
            }
            acc
        }
        _ => unreachable!("harmonic expansions only exist for n = 2, 3"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{build_quadrature, integrate, QuadScheme};
    use approx::assert_relative_eq;

    fn unit_coeff(len: usize, idx: usize) -> Vec<f64> {
        let mut c = vec![0.0; len];
        c[idx] = 1.0;
        c
    }

    #[test]
    fn sph_orthonormality_under_quadrature() {
        let l_max = 4;
        let len = sph_basis_len(l_max);
        let q = build_quadrature(3, 2 * l_max as u32, QuadScheme::ProductGauss, None).unwrap();
        for i in [0usize, 2, 5, 11, 18, 24] {
            for j in [0usize, 2, 5, 11, 18, 24] {
                let ci = unit_coeff(len, i);
                let cj = unit_coeff(len, j);
                let ip = integrate(&q, |u| {
                    eval_sph_expansion(&ci, u.coords()) * eval_sph_expansion(&cj, u.coords())
                })
                .unwrap();
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!(
                    (ip - expected).abs() < 1e-10,
                    "<Y_{i}, Y_{j}> = {ip}, expected {expected}"
                );
            }
        }
    }

    #[test]
    fn addition_theorem_bound() {
        let l = 5usize;
        let len = sph_basis_len(l);
        let u = [0.3, -0.5, (1.0f64 - 0.09 - 0.25).sqrt()];
        let mut sum_sq = 0.0;
        for m in 0..(2 * l + 1) {
            let c = unit_coeff(len, l * l + m);
            let y = eval_sph_expansion(&c, &u);
            assert!(y.abs() <= sph_sup_bound(l) + 1e-12);
            sum_sq += y * y;
        }
        assert_relative_eq!(
            sum_sq,
            (2 * l + 1) as f64 / (4.0 * std::f64::consts::PI),
            max_relative = 1e-10
        );
    }

    #[test]
    fn circ_orthonormality_under_quadrature() {
        let q = build_quadrature(2, 16, QuadScheme::ProductGauss, None).unwrap();
        for i in 0..5usize {
            for j in 0..5usize {
                let ci = unit_coeff(7, i);
                let cj = unit_coeff(7, j);
                let ip = integrate(&q, |u| {
                    eval_circ_expansion(&ci, u.coords()) * eval_circ_expansion(&cj, u.coords())
                })
                .unwrap();
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((ip - expected).abs() < 1e-12);
            }
        }
    }
}
