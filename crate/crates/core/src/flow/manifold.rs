//! One-dimensional invariant manifolds of the map's saddle.
//!
//! A branch point is labelled by σ = k + s (0 ≤ s < 1): it is
//! Pᵏ(z* + δ·λ^s·v) for the unstable side, with P⁻¹ and 1/λs for the
//! stable side. Consecutive points closer than the spacing bound need no
//! insertion; otherwise σ is bisected and the new point is recomputed from
//! its seed, so accuracy never depends on interpolation.

use super::field::State;
use super::map::StroboscopicMap;
use super::saddle::SaddleFixedPoint;
use crate::error::{domain, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Unstable,
    Stable,
}

impl Branch {
    pub fn name(self) -> &'static str {
        match self {
            Branch::Unstable => "unstable",
            Branch::Stable => "stable",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthOptions {
    /// Seeding distance from the saddle.
    pub delta: f64,
    /// Upper bound on the distance between consecutive points.
    pub spacing: f64,
    /// Stop once the polyline is this long.
    pub arclength: f64,
    /// Hard cap on stored points.
    pub max_points: usize,
    /// Points farther than this from the saddle end the branch.
    pub escape_radius: f64,
}

impl Default for GrowthOptions {
    fn default() -> Self {
        Self { delta: 1e-7, spacing: 0.01, arclength: 6.0, max_points: 200_000, escape_radius: 4.0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ManifoldBranch {
    pub branch: Branch,
    /// +1 or -1: which half of the eigenline was seeded.
    pub sign: f64,
    pub points: Vec<State>,
    pub sigma: Vec<f64>,
    pub arclength: f64,
}

impl ManifoldBranch {
    pub fn max_gap(&self) -> f64 {
        self.points.windows(2).map(|w| dist(w[0], w[1])).fold(0.0, f64::max)
    }
}

fn dist(a: State, b: State) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

struct Grower<'a> {
    map: &'a StroboscopicMap,
    origin: State,
    dir: State,
    lambda: f64,
    delta: f64,
    backward: bool,
}

impl Grower<'_> {
    fn seed(&self, s: f64) -> State {
        let r = self.delta * self.lambda.powf(s);
        [self.origin[0] + r * self.dir[0], self.origin[1] + r * self.dir[1]]
    }

    fn step(&self, z: State) -> Result<State> {
        if self.backward {
            self.map.inverse(z)
        } else {
            self.map.apply(z)
        }
    }

    fn point(&self, sigma: f64) -> Result<State> {
        let k = sigma.floor();
        let mut z = self.seed(sigma - k);
        for _ in 0..k as usize {
            z = self.step(z)?;
        }
        Ok(z)
    }
}

/// Grow one branch until its arclength budget is spent or it leaves the
/// escape radius.
///
/// Errors: `BudgetExhausted` when `max_points` is hit first,
/// `FoldResolutionFailure` when σ-bisection cannot meet the spacing bound
/// (a fold sharper than the parameterization can resolve).
pub fn grow_manifold(
    map: &StroboscopicMap,
    fp: &SaddleFixedPoint,
    branch: Branch,
    sign: f64,
    opts: &GrowthOptions,
) -> Result<ManifoldBranch> {
    if !(opts.delta > 0.0 && opts.spacing > 0.0 && opts.arclength > 0.0) {
        return Err(domain("manifold growth needs positive delta, spacing and arclength"));
    }
    let (lambda, v, backward) = match branch {
        Branch::Unstable => (fp.eigenvalues.0, fp.eigenvectors.0, false),
        Branch::Stable => (1.0 / fp.eigenvalues.1, fp.eigenvectors.1, true),
    };
    if lambda <= 1.0 {
        return Err(domain(format!("orientation-reversing saddle (λ = {lambda}) is not supported")));
    }
    let sgn = if sign < 0.0 { -1.0 } else { 1.0 };
    let g = Grower { map, origin: fp.location, dir: [sgn * v[0], sgn * v[1]], lambda, delta: opts.delta, backward };

    // fundamental domain σ ∈ [0, 1], then its images
    let n0 = 8;
    let mut sigma: Vec<f64> = (0..=n0).map(|i| i as f64 / n0 as f64).collect();
    let mut pts: Vec<State> = sigma.iter().map(|&s| g.seed(s)).collect();
    let mut out_sigma = vec![sigma[0]];
    let mut out_pts = vec![pts[0]];
    let mut length = 0.0;
    let mut k = 0usize;
    loop {
        // refine this domain
        let mut i = 0;
        while i + 1 < pts.len() {
            if dist(pts[i], pts[i + 1]) <= opts.spacing {
                i += 1;
                continue;
            }
            let mid = 0.5 * (sigma[i] + sigma[i + 1]);
            if mid <= sigma[i] || mid >= sigma[i + 1] || sigma[i + 1] - sigma[i] < 1e-12 {
                return Err(Error::FoldResolutionFailure(format!(
                    "gap {:.3e} at σ = {} cannot be bisected further",
                    dist(pts[i], pts[i + 1]),
                    sigma[i]
                )));
            }
            let z = g.point(mid)?;
            sigma.insert(i + 1, mid);
            pts.insert(i + 1, z);
            if out_pts.len() + pts.len() > opts.max_points {
                return Err(Error::BudgetExhausted(format!("{} points before reaching arclength", opts.max_points)));
            }
        }
        for j in 1..pts.len() {
            let z = pts[j];
            length += dist(*out_pts.last().unwrap(), z);
            out_pts.push(z);
            out_sigma.push(sigma[j]);
            let r = dist(z, fp.location);
            if length >= opts.arclength || r > opts.escape_radius || !r.is_finite() {
                return Ok(ManifoldBranch { branch, sign: sgn, points: out_pts, sigma: out_sigma, arclength: length });
            }
        }
        // image of the domain; keep only the coarse skeleton that is
        // needed, refinement happens on the next pass
        k += 1;
        let mut next_sigma = Vec::with_capacity(pts.len());
        let mut next_pts = Vec::with_capacity(pts.len());
        for (s, z) in sigma.iter().zip(&pts) {
            next_sigma.push(s + 1.0);
            next_pts.push(g.step(*z)?);
        }
        sigma = next_sigma;
        pts = next_pts;
        if k > 10_000 {
            return Err(Error::BudgetExhausted("iteration count".into()));
        }
    }
}

/// Seeding check: the branch point reached from δ after k steps, against
/// the one reached from δ/λ after k + 1 steps. Both sit at the same linear
/// coordinate, so the distance measures the error of the linear seed.
pub fn seeding_defect(map: &StroboscopicMap, fp: &SaddleFixedPoint, branch: Branch, sign: f64, delta: f64, k: usize) -> Result<f64> {
    let (lambda, v, backward) = match branch {
        Branch::Unstable => (fp.eigenvalues.0, fp.eigenvectors.0, false),
        Branch::Stable => (1.0 / fp.eigenvalues.1, fp.eigenvectors.1, true),
    };
    let g = Grower { map, origin: fp.location, dir: [sign * v[0], sign * v[1]], lambda, delta, backward };
    let a = g.point(k as f64)?;
    let g2 = Grower { delta: delta / lambda, ..g };
    let b = g2.point((k + 1) as f64)?;
    Ok(dist(a, b))
}

/// Distance from a point to a polyline.
pub fn distance_to_polyline(p: State, line: &[State]) -> f64 {
    let mut best = f64::INFINITY;
    for w in line.windows(2) {
        let (a, b) = (w[0], w[1]);
        let d = [b[0] - a[0], b[1] - a[1]];
        let l2 = d[0] * d[0] + d[1] * d[1];
        let t = if l2 > 0.0 { (((p[0] - a[0]) * d[0] + (p[1] - a[1]) * d[1]) / l2).clamp(0.0, 1.0) } else { 0.0 };
        best = best.min(dist(p, [a[0] + t * d[0], a[1] + t * d[1]]));
    }
    if line.len() == 1 {
        best = dist(p, line[0]);
    }
    best
}

/// Proper crossings between two polylines.
pub fn polyline_crossings(a: &[State], b: &[State]) -> Vec<State> {
    let mut out = Vec::new();
    for u in a.windows(2) {
        let (ux0, ux1) = (u[0][0].min(u[1][0]), u[0][0].max(u[1][0]));
        let (uy0, uy1) = (u[0][1].min(u[1][1]), u[0][1].max(u[1][1]));
        for w in b.windows(2) {
            if w[0][0].max(w[1][0]) < ux0 || w[0][0].min(w[1][0]) > ux1 {
                continue;
            }
            if w[0][1].max(w[1][1]) < uy0 || w[0][1].min(w[1][1]) > uy1 {
                continue;
            }
            if let Some(p) = segment_crossing(u[0], u[1], w[0], w[1]) {
                out.push(p);
            }
        }
    }
    out
}

pub(crate) fn segment_crossing(p0: State, p1: State, q0: State, q1: State) -> Option<State> {
    let r = [p1[0] - p0[0], p1[1] - p0[1]];
    let s = [q1[0] - q0[0], q1[1] - q0[1]];
    let den = r[0] * s[1] - r[1] * s[0];
    if den == 0.0 {
        return None;
    }
    let qp = [q0[0] - p0[0], q0[1] - p0[1]];
    let t = (qp[0] * s[1] - qp[1] * s[0]) / den;
    let u = (qp[0] * r[1] - qp[1] * r[0]) / den;
    if (0.0..1.0).contains(&t) && (0.0..1.0).contains(&u) {
        Some([p0[0] + t * r[0], p0[1] + t * r[1]])
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::{find_saddle, Tolerance, Variant};
    use crate::params::Params;

    #[test]
    fn crossing_of_diagonals() {
        let c = polyline_crossings(&[[0.0, 0.0], [1.0, 1.0]], &[[0.0, 1.0], [1.0, 0.0]]);
        assert_eq!(c.len(), 1);
        assert!((c[0][0] - 0.5).abs() < 1e-15);
        assert!((distance_to_polyline([0.0, 1.0], &[[0.0, 0.0], [1.0, 0.0]]) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn unperturbed_branch_is_the_separatrix() {
        let m = StroboscopicMap::new(Params::new(0.0, 0.0, 0.0, 0.0, 4.0), Variant::Original, Tolerance::FINE).unwrap();
        let fp = find_saddle(&m).unwrap();
        let opts = GrowthOptions { arclength: 2.0, spacing: 0.02, ..Default::default() };
        let b = grow_manifold(&m, &fp, Branch::Unstable, 1.0, &opts).unwrap();
        assert!(b.max_gap() <= opts.spacing);
        let worst = b
            .points
            .iter()
            .map(|p| crate::geometry::hamiltonian(p[0], p[1]).abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-9, "{worst}");
    }
}
