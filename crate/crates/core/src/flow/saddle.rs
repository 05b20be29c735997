//! Saddle fixed point of the stroboscopic map.

use super::field::State;
use super::map::StroboscopicMap;
use crate::error::{Error, Result};

const MAX_NEWTON: usize = 30;
const RESIDUAL_TOL: f64 = 1e-11;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaddleFixedPoint {
    pub location: State,
    /// (λu, λs) with |λu| > 1 > |λs|.
    pub eigenvalues: (f64, f64),
    /// Unit eigenvectors (unstable, stable), oriented with a positive
    /// x component.
    pub eigenvectors: (State, State),
    /// |P(z*) - z*|.
    pub residual: f64,
    pub jacobian: [[f64; 2]; 2],
}

impl SaddleFixedPoint {
    /// ‖(J - λI)v‖ for both pairs.
    pub fn eigen_residual(&self) -> f64 {
        let r = |l: f64, v: State| {
            let j = &self.jacobian;
            let a = j[0][0] * v[0] + j[0][1] * v[1] - l * v[0];
            let b = j[1][0] * v[0] + j[1][1] * v[1] - l * v[1];
            a.hypot(b)
        };
        r(self.eigenvalues.0, self.eigenvectors.0).max(r(self.eigenvalues.1, self.eigenvectors.1))
    }
}

/// Real eigenpairs of a 2×2 matrix, larger modulus first.
pub(crate) fn eigen2(j: &[[f64; 2]; 2]) -> Option<[(f64, State); 2]> {
    let tr = j[0][0] + j[1][1];
    let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    let disc = 0.25 * tr * tr - det;
    if disc <= 0.0 {
        return None;
    }
    let sq = disc.sqrt();
    // avoid cancellation in the smaller root
    let l1 = 0.5 * tr + sq.copysign(tr);
    let l2 = if l1 != 0.0 { det / l1 } else { 0.5 * tr - sq.copysign(tr) };
    let vec = |l: f64| -> State {
        // rows of (J - λI); take the better-conditioned one
        let a = [j[0][1], l - j[0][0]];
        let b = [l - j[1][1], j[1][0]];
        let v = if a[0].hypot(a[1]) >= b[0].hypot(b[1]) { a } else { b };
        let n = v[0].hypot(v[1]);
        let s = if v[0] < 0.0 || (v[0] == 0.0 && v[1] < 0.0) { -1.0 } else { 1.0 };
        [s * v[0] / n, s * v[1] / n]
    };
    let (big, small) = if l1.abs() >= l2.abs() { (l1, l2) } else { (l2, l1) };
    Some([(big, vec(big)), (small, vec(small))])
}

/// Newton iteration on P(z) - z seeded at the origin, with the Jacobian
/// from the variational equations.
pub fn find_saddle(map: &StroboscopicMap) -> Result<SaddleFixedPoint> {
    let mut z: State = [0.0, 0.0];
    let mut last = f64::INFINITY;
    for _ in 0..MAX_NEWTON {
        let (pz, j) = map.jacobian(z)?;
        let r = [pz[0] - z[0], pz[1] - z[1]];
        let res = r[0].hypot(r[1]);
        if res < RESIDUAL_TOL || (res >= last && res < 1e3 * RESIDUAL_TOL) {
            return finish(z, res, j);
        }
        last = res;
        let a = [[j[0][0] - 1.0, j[0][1]], [j[1][0], j[1][1] - 1.0]];
        let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
        if det == 0.0 || !det.is_finite() {
            return Err(Error::NoConvergence("singular Newton matrix at the saddle".into()));
        }
        z[0] -= (a[1][1] * r[0] - a[0][1] * r[1]) / det;
        z[1] -= (-a[1][0] * r[0] + a[0][0] * r[1]) / det;
        if !(z[0].is_finite() && z[1].is_finite()) || z[0].hypot(z[1]) > 1.0 {
            return Err(Error::NoConvergence(format!("saddle continuation left the neighbourhood of the origin: {z:?}")));
        }
    }
    Err(Error::NoConvergence(format!("Newton on P(z) = z stalled at residual {last:e}")))
}

fn finish(z: State, residual: f64, j: [[f64; 2]; 2]) -> Result<SaddleFixedPoint> {
    let [(lu, vu), (ls, vs)] =
        eigen2(&j).ok_or_else(|| Error::NoConvergence("fixed point is not a saddle".into()))?;
    if !(lu.abs() > 1.0 && ls.abs() < 1.0 && ls != 0.0) {
        return Err(Error::NoConvergence(format!("fixed point is not a saddle: λ = ({lu}, {ls})")));
    }
    Ok(SaddleFixedPoint { location: z, eigenvalues: (lu, ls), eigenvectors: (vu, vs), residual, jacobian: j })
}
