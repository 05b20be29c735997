//! Globally adaptive Gauss–Kronrod (7/15) quadrature.

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_INTERVALS: usize = 4000;

/// (integral, error estimate, integral of |f|) on [a, b].
fn kronrod<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    let mut kabs = fc.abs() * WGK[7];
    for j in 0..7 {
        let dx = h * XGK[j];
        let (f1, f2) = (f(c - dx), f(c + dx));
        k += WGK[j] * (f1 + f2);
        kabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            g += WG[j / 2] * (f1 + f2);
        }
    }
    (k * h, ((k - g) * h).abs(), kabs * h.abs())
}

/// Accuracy below this many ulps of ∫|f| is treated as met: the summed
/// error estimates of many small intervals cannot drop further.
const ROUNDOFF_ULPS: f64 = 1000.0;

/// ∫_a^b f(x) dx to max(abs_tol, rel_tol·|I|).
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<f64> {
    let (v, e, va) = kronrod(&mut f, a, b);
    let mut parts = vec![(a, b, v, e, va)];
    let mut total = v;
    let mut err = e;
    let mut total_abs = va;
    while err > abs_tol.max(rel_tol * total.abs()).max(ROUNDOFF_ULPS * f64::EPSILON * total_abs) {
        if parts.len() >= MAX_INTERVALS {
            return Err(Error::QuadratureFailure(format!(
                "error estimate {err:e} after {MAX_INTERVALS} subintervals"
            )));
        }
        let (i, _) = parts
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .unwrap();
        let (lo, hi, v0, e0, a0) = parts.swap_remove(i);
        let mid = 0.5 * (lo + hi);
        let (v1, e1, a1) = kronrod(&mut f, lo, mid);
        let (v2, e2, a2) = kronrod(&mut f, mid, hi);
        if !(v1 + v2).is_finite() {
            return Err(Error::QuadratureFailure("non-finite integrand".into()));
        }
        total += v1 + v2 - v0;
        err += e1 + e2 - e0;
        total_abs += a1 + a2 - a0;
        parts.push((lo, mid, v1, e1, a1));
        parts.push((mid, hi, v2, e2, a2));
    }
    // re-sum to shed the accumulated update error
    Ok(parts.iter().map(|p| p.2).sum())
}

/// Periodic trapezoid rule over one period [a, a + len); spectrally accurate
/// for smooth periodic integrands.
pub fn periodic_trapezoid<F: FnMut(f64) -> f64>(mut f: F, a: f64, len: f64, n: usize) -> f64 {
    let h = len / n as f64;
    (0..n).map(|i| f(a + h * i as f64)).sum::<f64>() * h
}
