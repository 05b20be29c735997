//! Complete elliptic integrals K(m), E(m), the nome, and Jacobi functions.
//!
//! All functions take the parameter m = k². The AGM iteration is used
//! throughout: it converges quadratically and needs no tables.

use crate::error::{domain, Result};
use std::f64::consts::{FRAC_PI_2, PI};

const MAX_ITER: usize = 64;

/// Arithmetic-geometric mean of a and b.
fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..MAX_ITER {
        if (a - b).abs() <= f64::EPSILON * a {
            break;
        }
        let an = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = an;
    }
    a
}

/// Complete elliptic integral of the first kind K(m).
///
/// ```text
/// K(m) = π / (2 AGM(1, √(1-m)))
/// ```
pub fn complete_k(m: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&m) {
        return Err(domain(format!("K(m) needs 0 <= m < 1, got {m}")));
    }
    Ok(k_from_complement(1.0 - m))
}

/// K as a function of the complementary parameter m1 = 1 - m. Keeps full
/// relative precision when m is within rounding of 1.
pub(crate) fn k_from_complement(m1: f64) -> f64 {
    FRAC_PI_2 / agm(1.0, m1.sqrt())
}

/// Complete elliptic integral of the second kind E(m).
///
/// Gauss' series: E = K · (1 - Σ 2^(n-1) c_n²), with c_0 = √m and
/// c_n = (a_{n-1} - b_{n-1})/2 along the AGM.
pub fn complete_e(m: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&m) {
        return Err(domain(format!("E(m) needs 0 <= m <= 1, got {m}")));
    }
    if m == 1.0 {
        return Ok(1.0);
    }
    Ok(k_and_e(m).1)
}

/// K(m) and E(m) from a single AGM pass. Caller guarantees 0 <= m < 1.
pub(crate) fn k_and_e(m: f64) -> (f64, f64) {
    let mut a = 1.0;
    let mut b = (1.0 - m).sqrt();
    let mut sum = 0.5 * m;
    let mut pow2 = 0.5;
    for _ in 0..MAX_ITER {
        let c = 0.5 * (a - b);
        if c.abs() <= f64::EPSILON * a {
            break;
        }
        let an = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = an;
        pow2 *= 2.0;
        sum += pow2 * c * c;
    }
    let k = FRAC_PI_2 / a;
    (k, k * (1.0 - sum))
}

/// dK/dm = (E - (1-m)K) / (2m(1-m)).
pub fn dk_dm(m: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&m) {
        return Err(domain(format!("dK/dm needs 0 <= m < 1, got {m}")));
    }
    if m == 0.0 {
        return Ok(PI / 8.0);
    }
    let (k, e) = k_and_e(m);
    Ok((e - (1.0 - m) * k) / (2.0 * m * (1.0 - m)))
}

/// dE/dm = (E - K) / (2m).
pub fn de_dm(m: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&m) {
        return Err(domain(format!("dE/dm needs 0 <= m < 1, got {m}")));
    }
    if m == 0.0 {
        return Ok(-PI / 8.0);
    }
    let (k, e) = k_and_e(m);
    Ok((e - k) / (2.0 * m))
}

/// Nome a(m) = exp(-π K(1-m) / K(m)).
///
/// This is the q of the Jacobi theta series for parameter m, so the
/// Fourier coefficients of sn, cn, dn decay like powers of it.
pub fn nome_ratio(m: f64) -> Result<f64> {
    if !(m > 0.0 && m < 1.0) {
        return Err(domain(format!("nome needs 0 < m < 1, got {m}")));
    }
    // K(1-m)/K(m) = AGM(1, √(1-m)) / AGM(1, √m)
    let ratio = agm(1.0, (1.0 - m).sqrt()) / agm(1.0, m.sqrt());
    Ok((-PI * ratio).exp())
}

/// Jacobi elliptic functions (sn, cn, dn)(u | m) by descending Landen
/// transformation. Caller guarantees 0 <= m < 1.
pub(crate) fn jacobi_sn_cn_dn(u: f64, m: f64) -> (f64, f64, f64) {
    if m < 1e-300 {
        return (u.sin(), u.cos(), 1.0);
    }
    let mut a = [0.0f64; MAX_ITER + 1];
    let mut c = [0.0f64; MAX_ITER + 1];
    a[0] = 1.0;
    let mut b = (1.0 - m).sqrt();
    c[0] = m.sqrt();
    let mut n = 0;
    while n < MAX_ITER {
        if c[n].abs() <= f64::EPSILON * a[n] {
            break;
        }
        let an = 0.5 * (a[n] + b);
        c[n + 1] = 0.5 * (a[n] - b);
        b = (a[n] * b).sqrt();
        a[n + 1] = an;
        n += 1;
    }
    let mut phi = 2f64.powi(n as i32) * a[n] * u;
    for i in (1..=n).rev() {
        phi = 0.5 * (phi + (c[i] / a[i] * phi.sin()).asin());
    }
    let (s, co) = phi.sin_cos();
    // dn² = cn² + (1-m)sn²: no cancellation, stays accurate at u = K
    let dn = (co * co + (1.0 - m) * s * s).sqrt();
    (s, co, dn)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        assert!((complete_k(0.0).unwrap() - FRAC_PI_2).abs() < 1e-16);
        assert!((complete_k(0.5).unwrap() - 1.854_074_677_301_372).abs() < 1e-14);
        assert!((complete_e(0.5).unwrap() - 1.350_643_881_047_675_5).abs() < 1e-14);
        assert_eq!(complete_e(1.0).unwrap(), 1.0);
        assert!(complete_k(1.0).is_err());
        assert!(complete_k(-0.1).is_err());
        assert!(complete_e(1.1).is_err());
    }

    #[test]
    fn nome_at_half_is_e_to_minus_pi() {
        let a = nome_ratio(0.5).unwrap();
        assert!((a - (-PI).exp()).abs() < 1e-15);
        assert!(nome_ratio(0.0).is_err());
        assert!(nome_ratio(1.0).is_err());
    }

    #[test]
    fn derivatives_match_differences() {
        for &m in &[0.1, 0.5, 0.9] {
            let h = 1e-4;
            // fourth-order central differences
            let fd = |f: &dyn Fn(f64) -> f64| {
                (f(m - 2.0 * h) - 8.0 * f(m - h) + 8.0 * f(m + h) - f(m + 2.0 * h)) / (12.0 * h)
            };
            let fd_k = fd(&|x| complete_k(x).unwrap());
            let fd_e = fd(&|x| complete_e(x).unwrap());
            assert!((fd_k - dk_dm(m).unwrap()).abs() < 1e-8 * fd_k.abs());
            assert!((fd_e - de_dm(m).unwrap()).abs() < 1e-8 * fd_e.abs().max(1.0));
        }
    }
    #[test]
    fn jacobi_identities() {
        for &m in &[0.0, 0.3, 0.9, 0.999_999] {
            for i in 0..50 {
                let u = -3.0 + 0.17 * i as f64;
                let (s, c, d) = jacobi_sn_cn_dn(u, m);
                assert!((s * s + c * c - 1.0).abs() < 1e-15 * 4.0);
                assert!((d * d + m * s * s - 1.0).abs() < 2e-13);
            }
        }
        // sn(K) = 1, cn(K) = 0, dn(K) = √(1-m)
        let m = 0.7;
        let k = complete_k(m).unwrap();
        let (s, c, d) = jacobi_sn_cn_dn(k, m);
        assert!((s - 1.0).abs() < 1e-14 && c.abs() < 1e-14);
        assert!((d - (1.0f64 - m).sqrt()).abs() < 1e-14);
    }
}
