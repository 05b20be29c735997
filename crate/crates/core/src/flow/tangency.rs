//! Numeric homoclinic-tangency curves in the (p2, p3) plane.
//!
//! For fixed p2 the splitting of a connection is disjoint at p3 = 0 (off
//! the connection) and transversal for large p3; the tangency value is
//! bracketed by bisection on the verdict. The graph p3*(p2) touches the p2
//! axis where the autonomous connection exists; it is cut there into
//! separately labelled curves.

use super::connection::{locate_connections, ConnectionKind};
use super::field::{ForcedField, Variant};
use super::manifold::segment_crossing;
use super::splitting::{phase_splitting, SplittingOptions, SplittingVerdict};
use crate::error::{domain, Error, Result};
use crate::melnikov::{analytic_tangency_lines, family_letter, AmplitudeCoefficient, TangencyLine};
use crate::params::Params;
use std::collections::BTreeSet;

/// Bracket width in p3 at which bisection stops.
pub const P3_BRACKET: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceSpec {
    pub eps: f64,
    pub p1: f64,
    pub p4: f64,
    pub kind: ConnectionKind,
    /// Upper end of the p3 search.
    pub p3_max: f64,
    pub splitting: SplittingOptions,
}

impl TraceSpec {
    pub fn new(eps: f64, p1: f64, p4: f64, kind: ConnectionKind) -> Self {
        let mut splitting = SplittingOptions { phases: 32, ..SplittingOptions::default() };
        splitting.trace.tol = super::ode::Tolerance::new(1e-10, 1e-12);
        Self { eps, p1, p4, kind, p3_max: 3.0, splitting }
    }

    fn verdict(&self, p2: f64, p3: f64) -> Result<(SplittingVerdict, f64)> {
        let field = ForcedField::new(Params::new(self.eps, self.p1, p2, p3, self.p4), Variant::Transformed);
        let prof = phase_splitting(&field, self.kind, &self.splitting)?;
        Ok((prof.verdict, 0.5 * (prof.max + prof.min)))
    }
}

/// Result of the bisection at one p2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TangencySample {
    /// Tangency at p3 (midpoint of the final bracket). `side` is the sign
    /// of the splitting at p3 = 0.
    Found { p2: f64, p3: f64, side: f64 },
    /// Transversal already at p3 = 0: on the connection itself.
    OnConnection { p2: f64 },
    /// Still disjoint at p3_max.
    Beyond { p2: f64 },
    /// A branch misses its section somewhere in the search.
    Undefined { p2: f64 },
}

impl TangencySample {
    pub fn p2(&self) -> f64 {
        match *self {
            TangencySample::Found { p2, .. }
            | TangencySample::OnConnection { p2 }
            | TangencySample::Beyond { p2 }
            | TangencySample::Undefined { p2 } => p2,
        }
    }
}

/// Bisect p3 ∈ [0, p3_max] on the verdict flip DISJOINT → TRANSVERSAL.
pub fn tangency_sample(spec: &TraceSpec, p2: f64) -> Result<TangencySample> {
    let lo_v = match spec.verdict(p2, 0.0) {
        Ok(v) => v,
        Err(Error::SectionAmbiguity(_)) => return Ok(TangencySample::Undefined { p2 }),
        Err(e) => return Err(e),
    };
    if lo_v.0 != SplittingVerdict::Disjoint {
        return Ok(TangencySample::OnConnection { p2 });
    }
    let side = lo_v.1.signum();
    match spec.verdict(p2, spec.p3_max) {
        Ok((SplittingVerdict::Disjoint, _)) => return Ok(TangencySample::Beyond { p2 }),
        Ok(_) => {}
        Err(Error::SectionAmbiguity(_)) => return Ok(TangencySample::Undefined { p2 }),
        Err(e) => return Err(e),
    }
    let (mut lo, mut hi) = (0.0, spec.p3_max);
    while hi - lo > P3_BRACKET {
        let mid = 0.5 * (lo + hi);
        match spec.verdict(p2, mid) {
            Ok((SplittingVerdict::Disjoint, _)) => lo = mid,
            Ok(_) => hi = mid,
            Err(Error::SectionAmbiguity(m)) => {
                return Err(Error::BisectionAmbiguity(format!("p2 = {p2}, p3 = {mid}: {m}")))
            }
            Err(e) => return Err(e),
        }
    }
    Ok(TangencySample::Found { p2, p3: 0.5 * (lo + hi), side })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TangencyCurve {
    pub label: String,
    pub kind: ConnectionKind,
    /// (p2, p3) ordered by p2; ends on the p2 axis where the curve meets it.
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Intersection {
    pub a: String,
    pub b: String,
    pub p2: f64,
    pub p3: f64,
}

/// Cut samples (sorted by p2) into curves: at undefined or beyond samples,
/// and where the p3 = 0 splitting changes sign (there the curve is
/// closed on the axis at the autonomous connection, or at the linearly
/// interpolated zero of ±p3 when the connection cannot be located).
pub fn assemble_curves(spec: &TraceSpec, samples: &[TangencySample], first_index: usize) -> Vec<TangencyCurve> {
    let letter = family_letter(spec.p1);
    let mut curves: Vec<Vec<(f64, f64)>> = Vec::new();
    let mut cur: Vec<(f64, f64)> = Vec::new();
    let mut last: Option<(f64, f64, f64)> = None;
    for s in samples {
        match *s {
            TangencySample::Found { p2, p3, side } => {
                if let Some((q2, q3, qs)) = last {
                    if qs != side {
                        // signed p3 goes through zero between the samples
                        let a = qs * q3;
                        let b = side * p3;
                        let z = axis_point(spec, q2, p2).unwrap_or(q2 + (p2 - q2) * a / (a - b));
                        cur.push((z, 0.0));
                        curves.push(std::mem::take(&mut cur));
                        cur.push((z, 0.0));
                    }
                }
                cur.push((p2, p3));
                last = Some((p2, p3, side));
            }
            TangencySample::OnConnection { p2 } => {
                cur.push((p2, 0.0));
                curves.push(std::mem::take(&mut cur));
                cur.push((p2, 0.0));
                last = None;
            }
            _ => {
                curves.push(std::mem::take(&mut cur));
                last = None;
            }
        }
    }
    curves.push(cur);
    curves
        .into_iter()
        .filter(|c| c.iter().filter(|p| p.1 > 0.0).count() >= 1 && c.len() >= 2)
        .enumerate()
        .map(|(i, points)| TangencyCurve { label: format!("{letter}{}", first_index + i), kind: spec.kind, points })
        .collect()
}

/// The autonomous connection between two p2 samples, if it is there.
fn axis_point(spec: &TraceSpec, lo: f64, hi: f64) -> Option<f64> {
    locate_connections(spec.eps, spec.p1, spec.kind, (lo, hi), 2, &spec.splitting.trace)
        .ok()
        .and_then(|r| r.first().copied())
}

/// Number of distinct analytic line labels, so numeric curves continue the
/// numbering.
pub fn analytic_count(p1: f64, p4: f64) -> usize {
    analytic_tangency_lines(p1, p4, 1.0, AmplitudeCoefficient::default())
        .iter()
        .map(|l| l.label.clone())
        .collect::<BTreeSet<_>>()
        .len()
}

/// Serial trace over a p2 grid. Callers wanting parallelism map
/// [`tangency_sample`] themselves and then call [`assemble_curves`].
pub fn trace_tangency_curve(spec: &TraceSpec, p2_grid: &[f64]) -> Result<Vec<TangencyCurve>> {
    if p2_grid.len() < 2 {
        return Err(domain("tangency trace needs at least two p2 values"));
    }
    let samples = p2_grid.iter().map(|&p2| tangency_sample(spec, p2)).collect::<Result<Vec<_>>>()?;
    Ok(assemble_curves(spec, &samples, analytic_count(spec.p1, spec.p4) + 1))
}

/// Sampled polyline of an analytic line.
pub fn line_polyline(line: &TangencyLine, n: usize) -> Vec<(f64, f64)> {
    let (a, b) = line.p2_range;
    (0..n.max(2))
        .map(|i| {
            let p2 = a + (b - a) * i as f64 / (n.max(2) - 1) as f64;
            (p2, line.intercept + line.slope * p2)
        })
        .collect()
}

/// Pairwise crossings between labelled polylines: double tangencies.
pub fn intersections(curves: &[(String, Vec<(f64, f64)>)]) -> Vec<Intersection> {
    let mut out = Vec::new();
    for i in 0..curves.len() {
        for j in i + 1..curves.len() {
            if curves[i].0 == curves[j].0 {
                continue;
            }
            for u in curves[i].1.windows(2) {
                for w in curves[j].1.windows(2) {
                    let c = segment_crossing([u[0].0, u[0].1], [u[1].0, u[1].1], [w[0].0, w[0].1], [w[1].0, w[1].1]);
                    if let Some([p2, p3]) = c {
                        if p3 > 0.0 {
                            out.push(Intersection { a: curves[i].0.clone(), b: curves[j].0.clone(), p2, p3 });
                        }
                    }
                }
            }
        }
    }
    out
}
