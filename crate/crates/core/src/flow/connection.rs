//! Separatrix connections of the saddle at the origin.
//!
//! Each connection kind pairs an unstable half-branch, a stable
//! half-branch and a section line transverse to both. The defect is
//! H(unstable) - H(stable) at the section: zero means the branches meet.

use super::field::{ForcedField, State, Variant};
use super::ode::{find_crossing, Crossing, Tolerance};
use crate::error::{domain, Result};
use crate::geometry::hamiltonian;
use crate::params::Params;
use crate::roots::brent;
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConnectionKind {
    /// Loop around the right centre.
    RightLoop,
    /// Loop around the left centre.
    LeftLoop,
    /// Leaves to the right, returns from the left, enclosing both centres.
    BigLoopRight,
    /// Mirror image of [`ConnectionKind::BigLoopRight`].
    BigLoopLeft,
}

pub const ALL_KINDS: [ConnectionKind; 4] =
    [ConnectionKind::RightLoop, ConnectionKind::LeftLoop, ConnectionKind::BigLoopRight, ConnectionKind::BigLoopLeft];

impl ConnectionKind {
    pub fn label(self) -> &'static str {
        match self {
            ConnectionKind::RightLoop => "RIGHT_LOOP",
            ConnectionKind::LeftLoop => "LEFT_LOOP",
            ConnectionKind::BigLoopRight => "BIG_LOOP_RIGHT",
            ConnectionKind::BigLoopLeft => "BIG_LOOP_LEFT",
        }
    }

    /// Half of the unstable eigenline that is followed (+1: x > 0).
    pub fn unstable_sign(self) -> f64 {
        match self {
            ConnectionKind::RightLoop | ConnectionKind::BigLoopRight => 1.0,
            _ => -1.0,
        }
    }

    pub fn stable_sign(self) -> f64 {
        match self {
            ConnectionKind::RightLoop | ConnectionKind::BigLoopLeft => 1.0,
            _ => -1.0,
        }
    }

    /// Section x = x_s crossed with sign(y) = y_s.
    pub fn section(self) -> (f64, f64) {
        match self {
            ConnectionKind::RightLoop => (FRAC_1_SQRT_2, -1.0),
            ConnectionKind::LeftLoop => (-FRAC_1_SQRT_2, 1.0),
            ConnectionKind::BigLoopRight => (-FRAC_1_SQRT_2, 1.0),
            ConnectionKind::BigLoopLeft => (FRAC_1_SQRT_2, -1.0),
        }
    }

    pub fn mirror(self) -> Self {
        match self {
            ConnectionKind::RightLoop => ConnectionKind::LeftLoop,
            ConnectionKind::LeftLoop => ConnectionKind::RightLoop,
            ConnectionKind::BigLoopRight => ConnectionKind::BigLoopLeft,
            ConnectionKind::BigLoopLeft => ConnectionKind::BigLoopRight,
        }
    }

    pub fn is_big(self) -> bool {
        matches!(self, ConnectionKind::BigLoopRight | ConnectionKind::BigLoopLeft)
    }
}

impl fmt::Display for ConnectionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceOptions {
    pub delta: f64,
    pub tol: Tolerance,
    /// Longest integration time per branch.
    pub t_max: f64,
    /// |x| or |y| beyond this counts as escape.
    pub escape: f64,
}

impl Default for TraceOptions {
    fn default() -> Self {
        Self { delta: 1e-7, tol: Tolerance::new(1e-10, 1e-12), t_max: 200.0, escape: 10.0 }
    }
}

/// Where a half-branch first meets its section.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SectionHit {
    Hit { t: f64, state: State, energy: f64 },
    /// Ran out of time (captured by an attractor, or a very slow passage).
    Missed,
    Escaped,
}

impl SectionHit {
    pub fn energy(&self) -> Option<f64> {
        match self {
            SectionHit::Hit { energy, .. } => Some(*energy),
            _ => None,
        }
    }
}

/// Unit eigenvectors (unstable, stable) of the linearization at the origin,
/// [[0, 1], [1, εp1]], both with positive x component.
pub fn origin_eigenvectors(eps: f64, p1: f64) -> (State, State) {
    let a = eps * p1;
    let sq = (a * a + 4.0).sqrt();
    // λu·λs = -1; take the root without cancellation first
    let (lu, ls) = if a >= 0.0 {
        let lu = 0.5 * (a + sq);
        (lu, -1.0 / lu)
    } else {
        let ls = 0.5 * (a - sq);
        (-1.0 / ls, ls)
    };
    let n = |l: f64| {
        let r = (1.0 + l * l).sqrt();
        [1.0 / r, l / r]
    };
    (n(lu), n(ls))
}

fn check_origin_saddle(field: &ForcedField) -> Result<()> {
    if field.variant == Variant::Original && field.params.p3 != 0.0 && field.params.eps != 0.0 {
        return Err(domain("the origin is a saddle of the forced flow only in the transformed form"));
    }
    Ok(())
}

/// Follow one half-branch seeded at time `t_start` at distance δ from the
/// origin until it crosses the section of `kind`. Unstable branches run
/// forward in time, stable ones backward.
pub fn section_trace(
    field: &ForcedField,
    kind: ConnectionKind,
    unstable: bool,
    t_start: f64,
    opts: &TraceOptions,
) -> Result<SectionHit> {
    check_origin_saddle(field)?;
    let (vu, vs) = origin_eigenvectors(field.params.eps, field.params.p1);
    let (v, sign, dir) = if unstable {
        (vu, kind.unstable_sign(), 1.0)
    } else {
        (vs, kind.stable_sign(), -1.0)
    };
    let y0 = [sign * opts.delta * v[0], sign * opts.delta * v[1]];
    let (xs, ys) = kind.section();
    let f = |t: f64, s: &State| field.rhs(t, s);
    let escape = opts.escape;
    let c = find_crossing(
        &f,
        t_start,
        y0,
        t_start + dir * opts.t_max,
        opts.tol,
        |_, s| s[0] - xs,
        |s| s[1] * ys > 0.0,
        |_, s| s[0].abs() > escape || s[1].abs() > escape,
    )?;
    Ok(match c {
        Crossing::Hit { t, y } => SectionHit::Hit { t, state: y, energy: hamiltonian(y[0], y[1]) },
        Crossing::NotFound { .. } => SectionHit::Missed,
        Crossing::Aborted { .. } => SectionHit::Escaped,
    })
}

/// Defect of one connection for the autonomous flow (p3 = 0); `None`
/// when a branch misses the section (e.g. it turns back before it).
pub fn connection_defect(eps: f64, p1: f64, p2: f64, kind: ConnectionKind, opts: &TraceOptions) -> Result<Option<f64>> {
    let field = ForcedField::new(Params::autonomous(eps, p1, p2), Variant::Original);
    let u = section_trace(&field, kind, true, 0.0, opts)?;
    let Some(hu) = u.energy() else { return Ok(None) };
    let s = section_trace(&field, kind, false, 0.0, opts)?;
    Ok(s.energy().map(|hs| hu - hs))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionReport {
    /// The connection with the smallest |defect|, if within tolerance.
    pub kind: Option<ConnectionKind>,
    pub defects: Vec<(ConnectionKind, Option<f64>)>,
}

impl ConnectionReport {
    pub fn label(&self) -> &'static str {
        self.kind.map_or("NONE", |k| k.label())
    }

    pub fn defect(&self, kind: ConnectionKind) -> Option<f64> {
        self.defects.iter().find(|(k, _)| *k == kind).and_then(|(_, d)| *d)
    }
}

/// Classify (p1, p2) by which separatrix connection (if any) the
/// autonomous flow has, to within `tol` in the energy defect.
pub fn autonomous_connection(eps: f64, p1: f64, p2: f64, tol: f64, opts: &TraceOptions) -> Result<ConnectionReport> {
    let mut defects = Vec::with_capacity(4);
    for kind in ALL_KINDS {
        defects.push((kind, connection_defect(eps, p1, p2, kind, opts)?));
    }
    let kind = defects
        .iter()
        .filter_map(|(k, d)| d.map(|d| (*k, d.abs())))
        .filter(|(_, d)| *d <= tol)
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(k, _)| k);
    Ok(ConnectionReport { kind, defects })
}

/// Roots in p2 of one connection defect, found by a scan over
/// `[lo, hi]` followed by Brent. Sign changes across a gap (a branch
/// missing its section) or with a large residual are discarded: those are
/// jumps, not connections.
pub fn locate_connections(
    eps: f64,
    p1: f64,
    kind: ConnectionKind,
    (lo, hi): (f64, f64),
    n_scan: usize,
    opts: &TraceOptions,
) -> Result<Vec<f64>> {
    let n = n_scan.max(2);
    let grid: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
    let vals = grid
        .iter()
        .map(|&p2| connection_defect(eps, p1, p2, kind, opts))
        .collect::<Result<Vec<_>>>()?;
    let mut roots = Vec::new();
    for i in 0..n - 1 {
        let (Some(a), Some(b)) = (vals[i], vals[i + 1]) else { continue };
        if a == 0.0 {
            roots.push(grid[i]);
            continue;
        }
        if a.signum() == b.signum() {
            continue;
        }
        let mut failed = false;
        let f = |p2: f64| match connection_defect(eps, p1, p2, kind, opts) {
            Ok(Some(d)) => d,
            _ => {
                failed = true;
                f64::NAN
            }
        };
        let Ok(r) = brent(f, grid[i], grid[i + 1], 1e-9) else { continue };
        if failed {
            continue;
        }
        let scale = a.abs().max(b.abs());
        if let Some(d) = connection_defect(eps, p1, r, kind, opts)? {
            if d.abs() <= 1e-6 * scale.max(1e-3) {
                roots.push(r);
            }
        }
    }
    Ok(roots)
}

/// Big-loop points on the p2 axis: roots of both big-loop defects.
pub fn locate_big_loops(eps: f64, p1: f64, range: (f64, f64), n_scan: usize, opts: &TraceOptions) -> Result<Vec<(ConnectionKind, f64)>> {
    let mut out = Vec::new();
    for kind in [ConnectionKind::BigLoopRight, ConnectionKind::BigLoopLeft] {
        for r in locate_connections(eps, p1, kind, range, n_scan, opts)? {
            out.push((kind, r));
        }
    }
    out.sort_by(|a, b| a.1.total_cmp(&b.1));
    Ok(out)
}
