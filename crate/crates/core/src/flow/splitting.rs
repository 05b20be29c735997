//! Separatrix splitting as a function of the forcing phase.
//!
//! For each seeding time the unstable half-branch is run forward and the
//! stable one backward to the section of the connection; the crossing
//! time modulo the period gives the phase at the section and H gives the
//! position along it. The splitting S(φ) = Hu(φ) - Hs(φ) is the first-order
//! analogue of ε·Δ1, and its sign changes are transversal intersections.

use super::connection::{section_trace, ConnectionKind, SectionHit, TraceOptions};
use super::field::ForcedField;
use super::ode::Tolerance;
use crate::error::{domain, Error, Result};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SplittingVerdict {
    Transversal,
    Tangent,
    Disjoint,
}

impl SplittingVerdict {
    pub fn label(self) -> &'static str {
        match self {
            SplittingVerdict::Transversal => "TRANSVERSAL",
            SplittingVerdict::Tangent => "TANGENT",
            SplittingVerdict::Disjoint => "DISJOINT",
        }
    }
}

impl fmt::Display for SplittingVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplittingOptions {
    /// Seeding times per period.
    pub phases: usize,
    pub trace: TraceOptions,
    /// |extremum of S| below this is a grazing contact.
    pub tangent_tol: f64,
}

impl Default for SplittingOptions {
    fn default() -> Self {
        Self {
            phases: 64,
            trace: TraceOptions { delta: 1e-6, tol: Tolerance::new(1e-12, 1e-14), t_max: 200.0, escape: 10.0 },
            tangent_tol: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SplittingProfile {
    pub kind: ConnectionKind,
    /// Uniform phase grid on [0, T).
    pub phases: Vec<f64>,
    pub unstable: Vec<f64>,
    pub stable: Vec<f64>,
    /// S = Hu - Hs on the grid.
    pub splitting: Vec<f64>,
    pub max: f64,
    pub min: f64,
    pub verdict: SplittingVerdict,
}

impl SplittingProfile {
    /// Phase of maximal splitting.
    pub fn argmax(&self) -> f64 {
        let i = (0..self.splitting.len()).max_by(|&a, &b| self.splitting[a].total_cmp(&self.splitting[b])).unwrap_or(0);
        self.phases[i]
    }
}

/// Time from the loop vertex (x = ±√2) to the section x = ±√2/2 along the
/// unperturbed loop √2 sech t: acosh 2.
pub fn vertex_to_section_time() -> f64 {
    2f64.acosh()
}

/// Periodic Lagrange interpolation through four neighbouring nodes.
/// `nodes` must be sorted by phase within [0, period).
fn periodic_interp(nodes: &[(f64, f64)], period: f64, phi: f64) -> f64 {
    let n = nodes.len() as isize;
    let j = nodes.partition_point(|p| p.0 <= phi) as isize - 1;
    let at = |i: isize| {
        let k = i.rem_euclid(n);
        let wrap = (i - k) / n;
        (nodes[k as usize].0 + wrap as f64 * period, nodes[k as usize].1)
    };
    let pts = [at(j - 1), at(j), at(j + 1), at(j + 2)];
    let mut sum = 0.0;
    for (i, &(xi, yi)) in pts.iter().enumerate() {
        let mut w = 1.0;
        for (k, &(xk, _)) in pts.iter().enumerate() {
            if k != i {
                w *= (phi - xk) / (xi - xk);
            }
        }
        sum += w * yi;
    }
    sum
}

/// (phase at the section, H) for every seeding time.
fn traces(field: &ForcedField, kind: ConnectionKind, unstable: bool, opts: &SplittingOptions) -> Result<Vec<(f64, f64)>> {
    let period = field.params.period();
    let n = opts.phases;
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let ts = period * i as f64 / n as f64;
        match section_trace(field, kind, unstable, ts, &opts.trace)? {
            SectionHit::Hit { t, energy, .. } => out.push((t.rem_euclid(period), energy)),
            other => {
                return Err(Error::SectionAmbiguity(format!(
                    "{} {} branch seeded at t = {ts:.6} did not reach the section ({other:?})",
                    kind,
                    if unstable { "unstable" } else { "stable" }
                )))
            }
        }
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out.dedup_by(|a, b| a.0 == b.0);
    if out.len() < 4 {
        return Err(Error::SectionAmbiguity("fewer than four distinct section phases".into()));
    }
    Ok(out)
}

/// Splitting profile of one connection of the forced flow. The origin must
/// be a saddle of `field` (transformed form, or no forcing).
pub fn phase_splitting(field: &ForcedField, kind: ConnectionKind, opts: &SplittingOptions) -> Result<SplittingProfile> {
    if opts.phases < 4 {
        return Err(domain("phase splitting needs at least four phases"));
    }
    let period = field.params.period();
    let u = traces(field, kind, true, opts)?;
    let s = traces(field, kind, false, opts)?;
    let n = opts.phases;
    let phases: Vec<f64> = (0..n).map(|i| period * i as f64 / n as f64).collect();
    let unstable: Vec<f64> = phases.iter().map(|&p| periodic_interp(&u, period, p)).collect();
    let stable: Vec<f64> = phases.iter().map(|&p| periodic_interp(&s, period, p)).collect();
    let splitting: Vec<f64> = unstable.iter().zip(&stable).map(|(a, b)| a - b).collect();
    // extrema on a finer grid of the same interpolants
    let fine = 8 * n;
    let (mut max, mut min) = (f64::NEG_INFINITY, f64::INFINITY);
    for i in 0..fine {
        let p = period * i as f64 / fine as f64;
        let v = periodic_interp(&u, period, p) - periodic_interp(&s, period, p);
        max = max.max(v);
        min = min.min(v);
    }
    let verdict = classify(max, min, opts.tangent_tol);
    Ok(SplittingProfile { kind, phases, unstable, stable, splitting, max, min, verdict })
}

fn classify(max: f64, min: f64, tol: f64) -> SplittingVerdict {
    let graze = if max > 0.0 && min < 0.0 { max.min(-min) } else { max.abs().min(min.abs()) };
    if graze <= tol {
        SplittingVerdict::Tangent
    } else if max > 0.0 && min < 0.0 {
        SplittingVerdict::Transversal
    } else {
        SplittingVerdict::Disjoint
    }
}
