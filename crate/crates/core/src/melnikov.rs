//! First-order Melnikov theory for the separatrix loops of the saddle.
//!
//! The forced equation is first transformed by ξ = x - x1(t), which moves
//! the forcing onto the ξ² term and keeps the origin an exact saddle:
//!
//! ```text
//! ξ'' - ξ + ξ³ = ε[(p1 + p2ξ - ξ²)ξ' + (3p3/(1+p4²)) ξ² sin(p4 t)]
//! ```
//!
//! Along the loops x0 = ±√2 sech t the Melnikov distance is
//!
//! ```text
//! Δ1(t0) = 2((2/3)p1 ± (π√2/8)p2 - 8/15) + C(p4)·p3·cos(p4 t0)
//! ```
//!
//! The conventional coefficient C = 3πp4/(2cosh(πp4/2)) is the default. The
//! integral itself evaluates to √2·πp4/cosh(πp4/2), about 6% smaller; both
//! are available through [`AmplitudeCoefficient`].

use crate::autonomous::Side;
use crate::error::{domain, Error, Result};
use std::f64::consts::{PI, SQRT_2};
use std::fmt;

/// Loop of the figure-eight: Right is x > 0.
pub type LoopSide = Side;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AmplitudeCoefficient {
    /// 3πp4 / (2 cosh(πp4/2))
    #[default]
    Published,
    /// √2 πp4 / cosh(πp4/2), the value of the Melnikov integral
    Exact,
}

impl AmplitudeCoefficient {
    pub fn value(self, p4: f64) -> f64 {
        let ch = (0.5 * PI * p4).cosh();
        match self {
            AmplitudeCoefficient::Published => 3.0 * PI * p4 / (2.0 * ch),
            AmplitudeCoefficient::Exact => SQRT_2 * PI * p4 / ch,
        }
    }
}

/// x1(t) = -p3 sin(p4 t)/(1 + p4²), the forced response removed by the
/// transformation.
pub fn x1_correction(t: f64, p3: f64, p4: f64) -> f64 {
    -p3 / (1.0 + p4 * p4) * (p4 * t).sin()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Transversal,
    Tangent,
    NoIntersection,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Transversal => "TRANSVERSAL",
            Verdict::Tangent => "TANGENT",
            Verdict::NoIntersection => "NO_INTERSECTION",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MelnikovResult {
    pub mean: f64,
    pub amplitude: f64,
    pub verdict: Verdict,
}

impl MelnikovResult {
    pub fn new(mean: f64, amplitude: f64) -> Self {
        let gap = amplitude.abs() - mean.abs();
        let verdict = if gap.abs() <= 1e-9 * mean.abs().max(1.0) {
            Verdict::Tangent
        } else if gap > 0.0 {
            Verdict::Transversal
        } else {
            Verdict::NoIntersection
        };
        Self { mean, amplitude, verdict }
    }

    pub fn at(&self, t0: f64, p4: f64) -> f64 {
        self.mean + self.amplitude * (p4 * t0).cos()
    }

    pub fn max(&self) -> f64 {
        self.mean + self.amplitude.abs()
    }

    pub fn min(&self) -> f64 {
        self.mean - self.amplitude.abs()
    }
}

/// (2/3)p1 ± (π√2/8)p2 - 8/15, written so that p1 = 4/5 cancels exactly.
fn half_mean(p1: f64, p2: f64, side: LoopSide) -> f64 {
    (2.0 * p1 - 1.6) / 3.0 + side.sign() * PI * SQRT_2 / 8.0 * p2
}

/// Constant part of Δ1 on a loop.
pub fn loop_mean(p1: f64, p2: f64, side: LoopSide) -> f64 {
    2.0 * half_mean(p1, p2, side)
}

/// Δ1(t0) and its decomposition.
pub fn delta1(
    t0: f64,
    p1: f64,
    p2: f64,
    p3: f64,
    p4: f64,
    side: LoopSide,
    coef: AmplitudeCoefficient,
) -> (f64, MelnikovResult) {
    let r = MelnikovResult::new(loop_mean(p1, p2, side), coef.value(p4) * p3);
    (r.at(t0, p4), r)
}

/// Melnikov integral ∫ y0(s)·g(s + t0) ds with the loop at its vertex
/// x = ±√2 when s = 0. Unlike [`delta1`] it keeps the sign of the
/// forcing term, which flips between the loops; use it to compare phases
/// with direct numerics.
pub fn melnikov_integral(t0: f64, p1: f64, p2: f64, p3: f64, p4: f64, side: LoopSide) -> f64 {
    loop_mean(p1, p2, side) - side.sign() * AmplitudeCoefficient::Exact.value(p4) * p3 * (p4 * t0).cos()
}

/// p3* = |mean| / C(p4): above it the loop splits transversally.
pub fn threshold_p3_star(p1: f64, p2: f64, p4: f64, side: LoopSide, coef: AmplitudeCoefficient) -> Result<f64> {
    if p4 == 0.0 || !p4.is_finite() {
        return Err(domain(format!("p3* needs a nonzero forcing frequency, got p4 = {p4}")));
    }
    Ok((loop_mean(p1, p2, side) / coef.value(p4)).abs())
}

/// Distance of (p1, p2) from the right-loop condition, as the Δ1 mean.
pub fn right_loop_residual(p1: f64, p2: f64) -> f64 {
    loop_mean(p1, p2, Side::Right)
}

/// Δ1 on the left loop when the right loop persists, i.e. the p1 term is
/// eliminated with the right-loop condition:
///
/// ```text
/// Δ1 = -(π√2/2)p2 + C(p4)·p3·cos(p4 t0)
/// ```
pub fn left_loop_delta1(t0: f64, p2: f64, p3: f64, p4: f64, coef: AmplitudeCoefficient) -> (f64, MelnikovResult) {
    let r = MelnikovResult::new(-PI * SQRT_2 / 2.0 * p2, coef.value(p4) * p3);
    (r.at(t0, p4), r)
}

/// [`left_loop_delta1`] after checking that (p1, p2) lies on the
/// right-loop condition to `tol`.
pub fn left_loop_delta1_checked(
    t0: f64,
    p1: f64,
    p2: f64,
    p3: f64,
    p4: f64,
    coef: AmplitudeCoefficient,
    tol: f64,
) -> Result<(f64, MelnikovResult)> {
    let res = right_loop_residual(p1, p2);
    if res.abs() > tol {
        return Err(Error::PreconditionWarning(format!(
            "right-loop condition violated by {res:e} at p1 = {p1}, p2 = {p2}"
        )));
    }
    Ok(left_loop_delta1(t0, p2, p3, p4, coef))
}

/// p3 where the left-loop balance |(π√2/2)p2| = C(p4)·p3 holds.
pub fn left_loop_tangency_p3(p2: f64, p4: f64, coef: AmplitudeCoefficient) -> f64 {
    (PI * SQRT_2 / 2.0 * p2).abs() / coef.value(p4)
}

/// One straight tangency line p3 = intercept + slope·p2 on p2 ∈ range,
/// p3 >= 0.
#[derive(Debug, Clone, PartialEq)]
pub struct TangencyLine {
    pub label: String,
    pub side: LoopSide,
    pub slope: f64,
    pub intercept: f64,
    pub p2_range: (f64, f64),
}

impl TangencyLine {
    pub fn p3_at(&self, p2: f64) -> Option<f64> {
        (p2 >= self.p2_range.0 && p2 <= self.p2_range.1).then_some(self.intercept + self.slope * p2)
    }
}

/// Letter used for a diagram at this p1: M below the big-loop value 4/5,
/// N on it, R above.
pub fn family_letter(p1: f64) -> char {
    let a = 2.0 * p1 - 1.6;
    if a < 0.0 {
        'M'
    } else if a == 0.0 {
        'N'
    } else {
        'R'
    }
}

/// The |mean| = C·p3 lines of both loops on the half plane p2 >= 0, up to
/// p2_max. The diagrams are symmetric under p2 -> -p2 with the loops
/// swapped, see [`mirror_lines`].
///
/// * p1 < 4/5: M1 left loop; M2, M3 right loop increasing/decreasing,
///   meeting on the p2 axis.
/// * p1 = 4/5: both loops give the same line N1.
/// * p1 > 4/5: R1 right loop; R2, R3 left loop increasing/decreasing.
pub fn analytic_tangency_lines(p1: f64, p4: f64, p2_max: f64, coef: AmplitudeCoefficient) -> Vec<TangencyLine> {
    let c = coef.value(p4);
    let a = loop_mean(p1, 0.0, Side::Right);
    let k = 2.0 * PI * SQRT_2 / 8.0;
    // mean = a ± k p2; zero crossing of the right mean at p2 = -a/k
    let line = |label: &str, side, sgn: f64, lo: f64, hi: f64| {
        // p3 = sgn·mean/C
        let s = Side::sign(side);
        TangencyLine {
            label: label.to_string(),
            side,
            slope: sgn * s * k / c,
            intercept: sgn * a / c,
            p2_range: (lo, hi),
        }
    };
    let z = (a / k).abs();
    match family_letter(p1) {
        'M' => vec![
            line("M1", Side::Left, -1.0, 0.0, p2_max),
            line("M2", Side::Right, 1.0, z, p2_max),
            line("M3", Side::Right, -1.0, 0.0, z),
        ],
        'N' => vec![line("N1", Side::Right, 1.0, 0.0, p2_max), line("N1", Side::Left, -1.0, 0.0, p2_max)],
        _ => vec![
            line("R1", Side::Right, 1.0, 0.0, p2_max),
            line("R2", Side::Left, -1.0, z, p2_max),
            line("R3", Side::Left, 1.0, 0.0, z),
        ],
    }
}

/// Lines of the p2 <= 0 half plane: reflect p2 and swap loops.
pub fn mirror_lines(lines: &[TangencyLine]) -> Vec<TangencyLine> {
    lines
        .iter()
        .map(|l| TangencyLine {
            label: format!("{}'", l.label),
            side: l.side.mirror(),
            slope: -l.slope,
            intercept: l.intercept,
            p2_range: (-l.p2_range.1, -l.p2_range.0),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn correction_values() {
        assert_eq!(x1_correction(0.0, 1.0, 1.0), 0.0);
        assert_eq!(x1_correction(1.3, 0.0, 2.0), 0.0);
        assert!((x1_correction(PI / 2.0, 1.0, 1.0) + 0.5).abs() < 1e-15);
    }

    #[test]
    fn decomposition_is_exact() {
        for i in 0..20 {
            let t0 = 0.31 * i as f64;
            let (v, r) = delta1(t0, 0.7, 0.3, 0.8, 4.0, Side::Left, AmplitudeCoefficient::Published);
            assert_eq!(v, r.mean + r.amplitude * (4.0 * t0).cos());
        }
    }

    #[test]
    fn right_loop_point() {
        let m = loop_mean(0.755_119_562_1, 0.053_875_454, Side::Right) / 2.0;
        assert!(m.abs() < 1e-5);
    }

    #[test]
    fn threshold_is_root_of_extremes() {
        let (p1, p2, p4) = (1.0, 0.0, 4.0);
        for coef in [AmplitudeCoefficient::Published, AmplitudeCoefficient::Exact] {
            let s = threshold_p3_star(p1, p2, p4, Side::Right, coef).unwrap();
            let (_, r) = delta1(0.0, p1, p2, s, p4, Side::Right, coef);
            assert!((r.max() * r.min()).abs() < 1e-12);
            assert_eq!(r.verdict, Verdict::Tangent);
            let (_, above) = delta1(0.0, p1, p2, 1.01 * s, p4, Side::Right, coef);
            assert_eq!(above.verdict, Verdict::Transversal);
        }
        assert!(threshold_p3_star(p1, p2, 0.0, Side::Right, AmplitudeCoefficient::Published).is_err());
        let a = threshold_p3_star(0.9, 0.4, 3.0, Side::Right, AmplitudeCoefficient::Published).unwrap();
        let b = threshold_p3_star(0.9, -0.4, 3.0, Side::Left, AmplitudeCoefficient::Published).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn coincidence_at_four_fifths() {
        let l = analytic_tangency_lines(0.8, 4.0, 3.0, AmplitudeCoefficient::Published);
        assert_eq!(l[0].slope - l[1].slope, 0.0);
        assert_eq!(l[0].intercept - l[1].intercept, 0.0);
    }

    #[test]
    fn left_precondition() {
        let ok = left_loop_delta1_checked(0.0, 0.755_119_562_1, 0.053_875_454, 1.0, 4.0, AmplitudeCoefficient::Published, 1e-4);
        assert!(ok.is_ok());
        let bad = left_loop_delta1_checked(0.0, 0.9, 0.053_875_454, 1.0, 4.0, AmplitudeCoefficient::Published, 1e-4);
        assert!(matches!(bad, Err(Error::PreconditionWarning(_))));
    }
}
