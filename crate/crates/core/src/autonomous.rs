//! Limit cycles of the unforced equation (p3 = 0) from the zeros of the
//! Poincaré–Pontryagin generating functions, and the bifurcation structure
//! of the (p1, p2) plane.
//!
//! ```text
//! B1±(ρ) = 4/(30π(2-ρ)^{5/2}) · B10±(ρ)
//! B10± = 2(5p1-1)(ρ-1)(2-ρ)K + [5p1(2-ρ)² - 4(ρ²-ρ+1)]E ± (15√2/16)π p2 ρ² √(2-ρ)
//! B2(ρ)  = 8/(30π(2ρ-1)^{5/2}) · B20(ρ)
//! B20  = [5p1(2ρ-1)(1-ρ) - 2(ρ-1)(2-ρ)]K + [5p1(2ρ-1)² - 4(ρ²-ρ+1)]E
//! ```
//!
//! With these prefactors B equals (1/2π)∮(p1 + p2x - x²) y dx exactly.
//! B10± is linear in (p1, p2): B10 = p1·u(ρ) + v(ρ) ± p2·w(ρ). All three
//! basis functions vanish like ρ², so for small ρ they are evaluated from
//! the K/E power series divided by ρ² ("scaled" values) to avoid
//! catastrophic cancellation.

use crate::elliptic::k_and_e;
use crate::error::{domain, Error, Result};
use crate::geometry::{level_from_rho, DomainTag};
use crate::roots::brent;
use std::collections::BTreeMap;
use std::f64::consts::{PI, SQRT_2};
use std::fmt;
use std::sync::OnceLock;

/// (15√2/16)π, the p2 coefficient of the separatrix-loop lines.
pub const LOOP_P2_COEF: f64 = 15.0 * SQRT_2 * PI / 16.0;

const SERIES_TERMS: usize = 64;
const SERIES_CUTOFF: f64 = 0.25;
const SCAN_POINTS: usize = 2000;
const CLIP: f64 = 1e-6;
const NEAR_SEPARATRIX: f64 = 1e-4;

/// Which well: Right is G1+ (x > 0), Left is G1- (x < 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Right,
    Left,
}

impl Side {
    pub fn sign(self) -> f64 {
        match self {
            Side::Right => 1.0,
            Side::Left => -1.0,
        }
    }

    pub fn domain(self) -> DomainTag {
        match self {
            Side::Right => DomainTag::G1Plus,
            Side::Left => DomainTag::G1Minus,
        }
    }

    pub fn mirror(self) -> Side {
        match self {
            Side::Right => Side::Left,
            Side::Left => Side::Right,
        }
    }
}

struct Series {
    u: [f64; SERIES_TERMS],
    v: [f64; SERIES_TERMS],
}

/// Power-series coefficients of u(ρ) and v(ρ) from
/// K = (π/2)Σκ_n ρⁿ, E = (π/2)Σκ_n ρⁿ/(1-2n), κ_n = ((2n-1)!!/(2n)!!)².
fn series() -> &'static Series {
    static S: OnceLock<Series> = OnceLock::new();
    S.get_or_init(|| {
        let n = SERIES_TERMS + 2;
        let mut k = vec![0.0; n];
        let mut e = vec![0.0; n];
        let mut kappa = 1.0;
        for i in 0..n {
            if i > 0 {
                let r = (2 * i - 1) as f64 / (2 * i) as f64;
                kappa *= r * r;
            }
            k[i] = 0.5 * PI * kappa;
            e[i] = 0.5 * PI * kappa / (1.0 - 2.0 * i as f64);
        }
        let at = |c: &Vec<f64>, i: isize| if i < 0 { 0.0 } else { c[i as usize] };
        let mut s = Series { u: [0.0; SERIES_TERMS], v: [0.0; SERIES_TERMS] };
        for i in 0..SERIES_TERMS {
            let j = (i + 2) as isize;
            // (ρ-1)(2-ρ) = -2 + 3ρ - ρ²,  (2-ρ)² = 4 - 4ρ + ρ²,  ρ²-ρ+1
            let pk = -2.0 * at(&k, j) + 3.0 * at(&k, j - 1) - at(&k, j - 2);
            let qe = 4.0 * at(&e, j) - 4.0 * at(&e, j - 1) + at(&e, j - 2);
            let re = at(&e, j) - at(&e, j - 1) + at(&e, j - 2);
            s.u[i] = 10.0 * pk + 5.0 * qe;
            s.v[i] = -2.0 * pk - 4.0 * re;
        }
        s
    })
}

/// Coefficients of ρ⁰ and ρ¹ in u and v; both must vanish (used in tests).
pub fn low_order_series_coefficients() -> [f64; 4] {
    let n = 4;
    let mut kappa = [1.0; 4];
    for i in 1..n {
        let r = (2 * i - 1) as f64 / (2 * i) as f64;
        kappa[i] = kappa[i - 1] * r * r;
    }
    let k = |i: usize| 0.5 * PI * kappa[i];
    let e = |i: usize| 0.5 * PI * kappa[i] / (1.0 - 2.0 * i as f64);
    let u0 = 10.0 * (-2.0 * k(0)) + 5.0 * 4.0 * e(0);
    let v0 = -2.0 * (-2.0 * k(0)) - 4.0 * e(0);
    let u1 = 10.0 * (-2.0 * k(1) + 3.0 * k(0)) + 5.0 * (4.0 * e(1) - 4.0 * e(0));
    let v1 = -2.0 * (-2.0 * k(1) + 3.0 * k(0)) - 4.0 * (e(1) - e(0));
    [u0, v0, u1, v1]
}

/// K, E and their ρ-derivatives.
fn kek(rho: f64) -> (f64, f64, f64, f64) {
    let (k, e) = k_and_e(rho);
    if rho == 0.0 {
        return (k, e, PI / 8.0, -PI / 8.0);
    }
    let dk = (e - (1.0 - rho) * k) / (2.0 * rho * (1.0 - rho));
    let de = (e - k) / (2.0 * rho);
    (k, e, dk, de)
}

/// Scaled G1 basis: B10±/ρ² = p1·u + v ± p2·w, with ρ-derivatives.
#[derive(Debug, Clone, Copy)]
pub struct G1Basis {
    pub u: f64,
    pub v: f64,
    pub w: f64,
    pub du: f64,
    pub dv: f64,
    pub dw: f64,
}

impl G1Basis {
    pub fn at(rho: f64) -> G1Basis {
        let sq = (2.0 - rho).sqrt();
        let w = LOOP_P2_COEF * sq;
        let dw = -LOOP_P2_COEF * 0.5 / sq;
        if rho < SERIES_CUTOFF {
            let s = series();
            let (mut u, mut v, mut du, mut dv) = (0.0, 0.0, 0.0, 0.0);
            for i in (0..SERIES_TERMS).rev() {
                u = u * rho + s.u[i];
                v = v * rho + s.v[i];
                if i > 0 {
                    du = du * rho + i as f64 * s.u[i];
                    dv = dv * rho + i as f64 * s.v[i];
                }
            }
            return G1Basis { u, v, w, du, dv, dw };
        }
        let (k, e, dk, de) = kek(rho);
        let a = (rho - 1.0) * (2.0 - rho);
        let da = 3.0 - 2.0 * rho;
        let b = (2.0 - rho) * (2.0 - rho);
        let db = -2.0 * (2.0 - rho);
        let c = rho * rho - rho + 1.0;
        let dc = 2.0 * rho - 1.0;
        let uu = 10.0 * a * k + 5.0 * b * e;
        let vv = -2.0 * a * k - 4.0 * c * e;
        let duu = 10.0 * (da * k + a * dk) + 5.0 * (db * e + b * de);
        let dvv = -2.0 * (da * k + a * dk) - 4.0 * (dc * e + c * de);
        let r2 = rho * rho;
        G1Basis {
            u: uu / r2,
            v: vv / r2,
            w,
            du: duu / r2 - 2.0 * uu / (r2 * rho),
            dv: dvv / r2 - 2.0 * vv / (r2 * rho),
            dw,
        }
    }

    pub fn value(&self, p1: f64, p2: f64, side: Side) -> f64 {
        p1 * self.u + self.v + side.sign() * p2 * self.w
    }

    pub fn derivative(&self, p1: f64, p2: f64, side: Side) -> f64 {
        p1 * self.du + self.dv + side.sign() * p2 * self.dw
    }
}

/// G2 basis: B20 = p1·U + V, with ρ-derivatives.
#[derive(Debug, Clone, Copy)]
pub struct G2Basis {
    pub u: f64,
    pub v: f64,
    pub du: f64,
    pub dv: f64,
}

impl G2Basis {
    pub fn at(rho: f64) -> G2Basis {
        let (k, e, dk, de) = kek(rho);
        let a = (2.0 * rho - 1.0) * (1.0 - rho);
        let da = 3.0 - 4.0 * rho;
        let b = (2.0 * rho - 1.0) * (2.0 * rho - 1.0);
        let db = 4.0 * (2.0 * rho - 1.0);
        let g = (rho - 1.0) * (2.0 - rho);
        let dg = 3.0 - 2.0 * rho;
        let c = rho * rho - rho + 1.0;
        let dc = 2.0 * rho - 1.0;
        G2Basis {
            u: 5.0 * a * k + 5.0 * b * e,
            v: -2.0 * g * k - 4.0 * c * e,
            du: 5.0 * (da * k + a * dk) + 5.0 * (db * e + b * de),
            dv: -2.0 * (dg * k + g * dk) - 4.0 * (dc * e + c * de),
        }
    }

    pub fn value(&self, p1: f64) -> f64 {
        p1 * self.u + self.v
    }

    pub fn derivative(&self, p1: f64) -> f64 {
        p1 * self.du + self.dv
    }
}

fn check_g1(rho: f64) -> Result<()> {
    if rho > 0.0 && rho < 1.0 {
        Ok(())
    } else {
        Err(domain(format!("G1 generating function needs 0 < rho < 1, got {rho}")))
    }
}

fn check_g2(rho: f64) -> Result<()> {
    if rho > 0.5 && rho < 1.0 {
        Ok(())
    } else {
        Err(domain(format!("G2 generating function needs 1/2 < rho < 1, got {rho}")))
    }
}

/// Bracketed part B10±(ρ) (no prefactor).
pub fn b10(rho: f64, p1: f64, p2: f64, side: Side) -> Result<f64> {
    check_g1(rho)?;
    Ok(rho * rho * G1Basis::at(rho).value(p1, p2, side))
}

/// B1±(ρ) including the positive prefactor 4/(30π(2-ρ)^{5/2}).
pub fn b1(rho: f64, p1: f64, p2: f64, side: Side) -> Result<f64> {
    Ok(b1_prefactor(rho) * b10(rho, p1, p2, side)?)
}

pub fn b1_prefactor(rho: f64) -> f64 {
    4.0 / (30.0 * PI * (2.0 - rho).powf(2.5))
}

/// Bracketed part B20(ρ) (no prefactor); independent of p2.
pub fn b20(rho: f64, p1: f64) -> Result<f64> {
    check_g2(rho)?;
    Ok(G2Basis::at(rho).value(p1))
}

/// B2(ρ) including the positive prefactor 8/(30π(2ρ-1)^{5/2}).
pub fn b2(rho: f64, p1: f64) -> Result<f64> {
    Ok(b2_prefactor(rho) * b20(rho, p1)?)
}

pub fn b2_prefactor(rho: f64) -> f64 {
    8.0 / (30.0 * PI * (2.0 * rho - 1.0).powf(2.5))
}

/// Signed generating function of the level's domain (with prefactor).
pub fn generating_function(rho: f64, p1: f64, p2: f64, dom: DomainTag) -> Result<f64> {
    match dom {
        DomainTag::G1Plus => b1(rho, p1, p2, Side::Right),
        DomainTag::G1Minus => b1(rho, p1, p2, Side::Left),
        DomainTag::G2 => b2(rho, p1),
    }
}

// ---------------------------------------------------------------------------
// cycle census

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Multiplicity {
    Simple,
    Double,
}

/// One limit cycle of the autonomous equation (first order in ε).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cycle {
    pub domain: DomainTag,
    pub rho: f64,
    pub h: f64,
    pub multiplicity: Multiplicity,
    /// Orbital stability from the sign of dB/dh; `None` for a double
    /// (semi-stable) cycle.
    pub stable: Option<bool>,
}

/// (i, j, k): cycles in the right loop, left loop, and outside.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CensusType {
    pub i: u8,
    pub j: u8,
    pub k: u8,
}

impl CensusType {
    pub const fn new(i: u8, j: u8, k: u8) -> Self {
        Self { i, j, k }
    }

    /// At most two cycles per domain, three in total.
    pub fn respects_bounds(&self) -> bool {
        self.i <= 2 && self.j <= 2 && self.k <= 2 && self.i + self.j + self.k <= 3
    }

    /// Census of the mirror-image parameters (p2 -> -p2).
    pub fn mirrored(&self) -> Self {
        Self { i: self.j, j: self.i, k: self.k }
    }
}

impl fmt::Display for CensusType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.i, self.j, self.k)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CycleCensus {
    pub cycles: Vec<Cycle>,
    /// A root was found with ρ > 1 - 1e-4, where the elliptic functions
    /// blow up and the first-order theory is least reliable.
    pub near_separatrix: bool,
}

impl CycleCensus {
    pub fn counts(&self) -> CensusType {
        let n = |d| self.cycles.iter().filter(|c| c.domain == d).count() as u8;
        CensusType::new(n(DomainTag::G1Plus), n(DomainTag::G1Minus), n(DomainTag::G2))
    }
}

struct ScanTable {
    g1_rho: Vec<f64>,
    g1: Vec<[f64; 3]>,
    g2_rho: Vec<f64>,
    g2: Vec<[f64; 2]>,
}

fn scan_table() -> &'static ScanTable {
    static T: OnceLock<ScanTable> = OnceLock::new();
    T.get_or_init(|| {
        let grid = |lo: f64, hi: f64| -> Vec<f64> {
            (0..SCAN_POINTS)
                .map(|i| lo + (hi - lo) * i as f64 / (SCAN_POINTS - 1) as f64)
                .collect()
        };
        let g1_rho = grid(CLIP, 1.0 - CLIP);
        let g2_rho = grid(0.5 + CLIP, 1.0 - CLIP);
        let g1 = g1_rho
            .iter()
            .map(|&r| {
                let b = G1Basis::at(r);
                [b.u, b.v, b.w]
            })
            .collect();
        let g2 = g2_rho
            .iter()
            .map(|&r| {
                let b = G2Basis::at(r);
                [b.u, b.v]
            })
            .collect();
        ScanTable { g1_rho, g1, g2_rho, g2 }
    })
}

/// Limits of the scaled functions at the ends of the ρ interval.
fn g1_limits(p1: f64, p2: f64, side: Side) -> (f64, f64) {
    let s = side.sign();
    // ρ -> 0: (15π/8)(p1 ± p2 - 1);  ρ -> 1: 5p1 - 4 ± (15√2π/16)p2
    (15.0 * PI / 8.0 * (p1 + s * p2 - 1.0), 5.0 * p1 - 4.0 + s * LOOP_P2_COEF * p2)
}

fn g2_limits(p1: f64) -> (f64, f64) {
    (G2Basis::at(0.5).value(p1), 5.0 * p1 - 4.0)
}

fn sign_changes(values: impl Iterator<Item = f64>) -> u8 {
    let mut n = 0;
    let mut prev = 0.0f64;
    for v in values {
        if v == 0.0 || !v.is_finite() {
            continue;
        }
        if prev != 0.0 && v.signum() != prev.signum() {
            n += 1;
        }
        prev = v;
    }
    n
}

/// Fast census by sign counting on the precomputed scan grid (simple
/// roots only). Used for large random samples and plane sweeps.
pub fn census_type(p1: f64, p2: f64) -> CensusType {
    let t = scan_table();
    let side_count = |side: Side| {
        let s = side.sign();
        let (l0, l1) = g1_limits(p1, p2, side);
        sign_changes(
            std::iter::once(l0)
                .chain(t.g1.iter().map(|b| p1 * b[0] + b[1] + s * p2 * b[2]))
                .chain(std::iter::once(l1)),
        )
    };
    let (m0, m1) = g2_limits(p1);
    let k = sign_changes(
        std::iter::once(m0)
            .chain(t.g2.iter().map(|b| p1 * b[0] + b[1]))
            .chain(std::iter::once(m1)),
    );
    CensusType::new(side_count(Side::Right), side_count(Side::Left), k)
}

/// All limit cycles for (p1, p2): sign scan, Brent polishing, and
/// detection of double roots at sign-preserving extrema.
pub fn find_cycles(p1: f64, p2: f64) -> CycleCensus {
    let t = scan_table();
    let mut cycles = Vec::new();
    for side in [Side::Right, Side::Left] {
        let f = move |r: f64| G1Basis::at(r).value(p1, p2, side);
        let df = move |r: f64| G1Basis::at(r).derivative(p1, p2, side);
        let vals: Vec<f64> = t.g1.iter().map(|b| p1 * b[0] + b[1] + side.sign() * p2 * b[2]).collect();
        let lim = g1_limits(p1, p2, side);
        let scale = p1.abs() * 10.0 + p2.abs() * LOOP_P2_COEF + 5.0;
        collect_roots(&t.g1_rho, &vals, lim, (0.0, 1.0), &f, &df, scale, side.domain(), &mut cycles);
    }
    let f = move |r: f64| G2Basis::at(r).value(p1);
    let df = move |r: f64| G2Basis::at(r).derivative(p1);
    let vals: Vec<f64> = t.g2.iter().map(|b| p1 * b[0] + b[1]).collect();
    let scale = p1.abs() * 5.0 + 5.0;
    collect_roots(&t.g2_rho, &vals, g2_limits(p1), (0.5, 1.0), &f, &df, scale, DomainTag::G2, &mut cycles);
    let near_separatrix = cycles.iter().any(|c| c.rho > 1.0 - NEAR_SEPARATRIX);
    CycleCensus { cycles, near_separatrix }
}

#[allow(clippy::too_many_arguments)]
fn collect_roots(
    grid: &[f64],
    vals: &[f64],
    limits: (f64, f64),
    ends: (f64, f64),
    f: &dyn Fn(f64) -> f64,
    df: &dyn Fn(f64) -> f64,
    scale: f64,
    dom: DomainTag,
    out: &mut Vec<Cycle>,
) {
    // ρ increases with h in G1 and decreases in G2.
    let drho_dh_sign = if dom == DomainTag::G2 { -1.0 } else { 1.0 };
    let push = |rho: f64, mult: Multiplicity, out: &mut Vec<Cycle>| {
        let h = level_from_rho(rho, dom).map(|l| l.h).unwrap_or(f64::NAN);
        let stable = match mult {
            Multiplicity::Double => None,
            Multiplicity::Simple => Some(df(rho) * drho_dh_sign < 0.0),
        };
        out.push(Cycle { domain: dom, rho, h, multiplicity: mult, stable });
    };
    let n = grid.len();
    // end intervals between the analytic limit and the first/last grid point
    let lo_end = ends.0 + 1e-300;
    let hi_end = 1.0 - 1e-15;
    if limits.0 != 0.0 && vals[0] != 0.0 && limits.0.signum() != vals[0].signum() {
        let r = brent(f, lo_end.max(ends.0 + 1e-15), grid[0], 1e-16).unwrap_or(0.5 * (ends.0 + grid[0]));
        push(r, Multiplicity::Simple, out);
    }
    for i in 0..n - 1 {
        let (a, b) = (vals[i], vals[i + 1]);
        if a == 0.0 {
            push(grid[i], Multiplicity::Simple, out);
            continue;
        }
        if a.signum() != b.signum() && b != 0.0 {
            if let Ok(r) = brent(f, grid[i], grid[i + 1], 1e-15) {
                push(r, Multiplicity::Simple, out);
            }
            continue;
        }
        // sign-preserving local extremum of |B|: candidate double root
        if i > 0 {
            let prev = vals[i - 1];
            let is_min_abs = a.abs() < prev.abs() && a.abs() < b.abs() && prev.signum() == a.signum();
            if is_min_abs && a.abs() < 1e-6 * scale {
                if let Ok(r) = brent(df, grid[i - 1], grid[i + 1], 1e-15) {
                    if f(r).abs() <= 1e-10 * scale {
                        push(r, Multiplicity::Double, out);
                    }
                }
            }
        }
    }
    let last = vals[n - 1];
    if limits.1 != 0.0 && last != 0.0 && limits.1.signum() != last.signum() {
        let r = brent(f, grid[n - 1], hi_end, 1e-16).unwrap_or(hi_end);
        push(r, Multiplicity::Simple, out);
    }
}

// ---------------------------------------------------------------------------
// bifurcation lines

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LineName {
    L1Plus,
    L1Minus,
    L2Plus,
    L2Minus,
    L3,
    L4,
    DoubleCycleG1,
}

impl LineName {
    pub fn label(self) -> &'static str {
        match self {
            LineName::L1Plus => "L1+",
            LineName::L1Minus => "L1-",
            LineName::L2Plus => "L2+",
            LineName::L2Minus => "L2-",
            LineName::L3 => "L3",
            LineName::L4 => "L4",
            LineName::DoubleCycleG1 => "DC+",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LineShape {
    /// a·p1 + b·p2 + c = 0
    Linear { a: f64, b: f64, c: f64 },
    /// Ordered (p1, p2) points.
    Polyline(Vec<(f64, f64)>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct BifurcationLine {
    pub name: LineName,
    pub shape: LineShape,
}

impl BifurcationLine {
    /// p1 where the line crosses the horizontal p2 = const, if it does.
    pub fn p1_at(&self, p2: f64) -> Option<f64> {
        match &self.shape {
            LineShape::Linear { a, b, c } => {
                if *a == 0.0 {
                    None
                } else {
                    Some(-(b * p2 + c) / a)
                }
            }
            LineShape::Polyline(_) if self.name == LineName::DoubleCycleG1 => double_cycle_p1_at(p2),
            LineShape::Polyline(pts) => pts.windows(2).find_map(|w| {
                let ((x0, y0), (x1, y1)) = (w[0], w[1]);
                if (y0 - p2) * (y1 - p2) <= 0.0 && y0 != y1 {
                    Some(x0 + (x1 - x0) * (p2 - y0) / (y1 - y0))
                } else {
                    None
                }
            }),
        }
    }
}

/// Simultaneous zero of B20 and dB20/dρ: the minimum of p1(ρ) = -V/U.
/// Returns (p1, ρ).
pub fn l3_locus() -> Result<(f64, f64)> {
    // d/dρ(-V/U) = 0  <=>  V'U - VU' = 0
    let g = |r: f64| {
        let b = G2Basis::at(r);
        b.dv * b.u - b.v * b.du
    };
    let grid: Vec<f64> = (1..400).map(|i| 0.5 + 0.5 * i as f64 / 400.0).collect();
    let mut best: Option<(f64, f64)> = None;
    for w in grid.windows(2) {
        if g(w[0]).signum() != g(w[1]).signum() {
            let r = brent(g, w[0], w[1], 1e-15)?;
            let b = G2Basis::at(r);
            let p1 = -b.v / b.u;
            if best.is_none_or(|(bp, _)| p1 < bp) {
                best = Some((p1, r));
            }
        }
    }
    best.ok_or_else(|| Error::NoSolution("no extremum of the G2 double-root curve".into()))
}

/// Point (p1, p2) of the G1+ double-cycle curve at parameter ρ ∈ [0, 1).
/// The linear system degenerates at ρ = 0 (both rows become multiples of
/// L1+), so tiny ρ returns the extrapolated focus endpoint.
pub fn double_cycle_point(rho: f64) -> Result<(f64, f64)> {
    if !(0.0..1.0).contains(&rho) {
        return Err(domain(format!("double-cycle curve needs 0 <= rho < 1, got {rho}")));
    }
    if rho < DC_FOCUS_CUT {
        return double_cycle_focus_endpoint();
    }
    double_cycle_solve(rho)
}

const DC_FOCUS_CUT: f64 = 1e-6;

fn double_cycle_solve(rho: f64) -> Result<(f64, f64)> {
    let b = G1Basis::at(rho);
    // p1 u + p2 w = -v ;  p1 u' + p2 w' = -v'
    let det = b.u * b.dw - b.w * b.du;
    if det == 0.0 {
        return Err(Error::NoSolution(format!("singular double-cycle system at rho = {rho}")));
    }
    let p1 = (-b.v * b.dw + b.w * b.dv) / det;
    let p2 = (-b.u * b.dv + b.v * b.du) / det;
    Ok((p1, p2))
}

/// Focus endpoint of the double-cycle curve, by Richardson extrapolation
/// of interior points ρ = h, h/2, h/4 to ρ = 0.
pub fn double_cycle_focus_endpoint() -> Result<(f64, f64)> {
    let h = 1e-3;
    let a = double_cycle_solve(h)?;
    let b = double_cycle_solve(h / 2.0)?;
    let c = double_cycle_solve(h / 4.0)?;
    // second-order Richardson on a smooth function of ρ
    let rich = |x: f64, y: f64, z: f64| {
        let r1 = 2.0 * y - x;
        let r2 = 2.0 * z - y;
        (4.0 * r2 - r1) / 3.0
    };
    Ok((rich(a.0, b.0, c.0), rich(a.1, b.1, c.1)))
}

/// Separatrix endpoint of the double-cycle curve. The curve approaches it
/// only logarithmically in 1-ρ, so the (p1, p2) points for ρ = 1 - 10^-k
/// are extrapolated along the curve to p1 = 0.
pub fn double_cycle_separatrix_endpoint() -> Result<(f64, f64)> {
    let pts: Vec<(f64, f64)> = (10..=14)
        .map(|k| double_cycle_point(1.0 - 10f64.powi(-k)))
        .collect::<Result<_>>()?;
    // quadratic through the last three points, evaluated at p1 = 0
    let (x0, y0) = pts[2];
    let (x1, y1) = pts[3];
    let (x2, y2) = pts[4];
    let l0 = (0.0 - x1) * (0.0 - x2) / ((x0 - x1) * (x0 - x2));
    let l1 = (0.0 - x0) * (0.0 - x2) / ((x1 - x0) * (x1 - x2));
    let l2 = (0.0 - x0) * (0.0 - x1) / ((x2 - x0) * (x2 - x1));
    Ok((0.0, l0 * y0 + l1 * y1 + l2 * y2))
}

/// p1 of the double-cycle curve at height p2 (p2 is monotone along it).
pub fn double_cycle_p1_at(p2: f64) -> Option<f64> {
    let lo = 0.0;
    let hi = 1.0 - 1e-14;
    let g = |r: f64| double_cycle_point(r).map(|p| p.1 - p2).unwrap_or(f64::NAN);
    let (glo, ghi) = (g(lo), g(hi));
    if !(glo.is_finite() && ghi.is_finite()) || glo.signum() == ghi.signum() {
        return None;
    }
    let r = brent(g, lo, hi, 1e-15).ok()?;
    double_cycle_point(r).ok().map(|p| p.0)
}

/// The double-cycle curve sampled at `n` values of ρ in (0, 1).
pub fn double_cycle_curve(n: usize) -> Result<Vec<(f64, f64)>> {
    let mut pts = vec![double_cycle_focus_endpoint()?];
    for i in 1..n {
        // cluster towards ρ = 1 where the curve moves logarithmically
        let t = i as f64 / n as f64;
        let rho = 1.0 - (1.0 - t).powi(3);
        pts.push(double_cycle_point(rho.min(1.0 - 1e-12))?);
    }
    Ok(pts)
}

/// All bifurcation lines of the first-order theory. L4 (big separatrix
/// loop) is the vertical p1 = 4/5 to first order; its ε-dependent shape
/// comes from `flow::connection`.
pub fn bifurcation_lines() -> Result<Vec<BifurcationLine>> {
    let (l3, _) = l3_locus()?;
    let lin = |name, a, b, c| BifurcationLine { name, shape: LineShape::Linear { a, b, c } };
    Ok(vec![
        lin(LineName::L1Plus, 1.0, 1.0, -1.0),
        lin(LineName::L1Minus, 1.0, -1.0, -1.0),
        lin(LineName::L2Plus, 5.0, LOOP_P2_COEF, -4.0),
        lin(LineName::L2Minus, 5.0, -LOOP_P2_COEF, -4.0),
        lin(LineName::L3, 1.0, 0.0, -l3),
        lin(LineName::L4, 1.0, 0.0, -0.8),
        BifurcationLine { name: LineName::DoubleCycleG1, shape: LineShape::Polyline(double_cycle_curve(400)?) },
    ])
}

// ---------------------------------------------------------------------------
// domain probes

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DomainLabel {
    D1,
    D2,
    D3,
    D4,
    D5,
    D6,
    D7,
    D8,
    D9,
    D10,
    D11,
    D12,
    D13,
}

impl DomainLabel {
    pub const ALL: [DomainLabel; 13] = [
        DomainLabel::D1,
        DomainLabel::D2,
        DomainLabel::D3,
        DomainLabel::D4,
        DomainLabel::D5,
        DomainLabel::D6,
        DomainLabel::D7,
        DomainLabel::D8,
        DomainLabel::D9,
        DomainLabel::D10,
        DomainLabel::D11,
        DomainLabel::D12,
        DomainLabel::D13,
    ];

    /// Census type of the domain in the upper half plane.
    pub fn census_type(self) -> CensusType {
        use DomainLabel::*;
        let (i, j, k) = match self {
            D1 => (0, 0, 0),
            D2 => (0, 0, 2),
            D3 => (0, 0, 1),
            D4 => (0, 1, 1),
            D5 => (0, 0, 1),
            D6 => (1, 1, 1),
            D7 => (1, 0, 1),
            D8 => (1, 0, 2),
            D9 => (0, 0, 2),
            D10 => (0, 0, 0),
            D11 => (1, 0, 0),
            D12 => (2, 0, 0),
            D13 => (1, 0, 0),
        };
        CensusType::new(i, j, k)
    }
}

impl fmt::Display for DomainLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = DomainLabel::ALL.iter().position(|d| d == self).unwrap() + 1;
        write!(f, "D{n}")
    }
}

/// Name the domain containing (p1, p2), p2 > 0, given its census type.
/// Types shared by two domains are told apart by their position relative
/// to the analytic lines.
pub fn label_domain(p1: f64, p2: f64, t: CensusType) -> Option<DomainLabel> {
    use DomainLabel::*;
    let l1p = p1 + p2 - 1.0;
    let l1m = p1 - p2 - 1.0;
    let l2p = 5.0 * p1 + LOOP_P2_COEF * p2 - 4.0;
    // L1+ and L2+ cross at p2 = 1/(5 - LOOP_P2_COEF)
    let crossing = 1.0 / (5.0 - LOOP_P2_COEF);
    let label = match (t.i, t.j, t.k) {
        (0, 0, 0) if l1p < 0.0 && l2p < 0.0 => D10,
        (0, 0, 0) => D1,
        (0, 0, 2) if l2p < 0.0 => D9,
        (0, 0, 2) => D2,
        (0, 0, 1) if l1m > 0.0 => D5,
        (0, 0, 1) => D3,
        (0, 1, 1) => D4,
        (1, 1, 1) => D6,
        (1, 0, 1) => D7,
        (1, 0, 2) => D8,
        (2, 0, 0) => D12,
        (1, 0, 0) if p2 > crossing => D13,
        (1, 0, 0) => D11,
        _ => return None,
    };
    Some(label)
}

/// A certified probe point for each of the 13 upper-half-plane domains.
///
/// Horizontal rows p2 = const are cut at every bifurcation line; each
/// resulting interval's midpoint is classified, and per domain the
/// midpoint of the widest interval is kept. Each choice is re-certified by
/// a 20000-point sign scan of all three generating functions.
pub fn locate_domain_samples() -> Result<BTreeMap<DomainLabel, (f64, f64)>> {
    const ROWS: [f64; 16] =
        [0.01, 0.02, 0.04, 0.06, 0.08, 0.15, 0.3, 0.6, 1.0, 1.05, 1.1, 1.15, 1.25, 1.3, 1.6, 2.0];
    let lines = bifurcation_lines()?;
    let (lo, hi) = (-1.5, 2.5);
    let mut best: BTreeMap<DomainLabel, ((f64, f64), f64)> = BTreeMap::new();
    for &p2 in &ROWS {
        let mut cuts: Vec<f64> = lines.iter().filter_map(|l| l.p1_at(p2)).filter(|x| *x > lo && *x < hi).collect();
        cuts.push(lo);
        cuts.push(hi);
        cuts.sort_by(f64::total_cmp);
        for w in cuts.windows(2) {
            let width = w[1] - w[0];
            if width < 1e-9 {
                continue;
            }
            let p1 = 0.5 * (w[0] + w[1]);
            let t = census_type(p1, p2);
            if let Some(label) = label_domain(p1, p2, t) {
                if t != label.census_type() {
                    continue;
                }
                let e = best.entry(label).or_insert(((p1, p2), -1.0));
                if width > e.1 {
                    *e = ((p1, p2), width);
                }
            }
        }
    }
    let mut out = BTreeMap::new();
    for label in DomainLabel::ALL {
        let (pt, _) = best.get(&label).ok_or_else(|| Error::ProbeNotFound(label.to_string()))?;
        if brute_force_census(pt.0, pt.1, 20_000) != label.census_type() {
            return Err(Error::ProbeNotFound(format!("{label}: certification failed at {pt:?}")));
        }
        out.insert(label, *pt);
    }
    Ok(out)
}

/// Independent census: sign scan of the *unscaled* closed forms (with
/// prefactors) on an n-point grid, without the precomputed table.
pub fn brute_force_census(p1: f64, p2: f64, n: usize) -> CensusType {
    let count = |f: &dyn Fn(f64) -> f64, lo: f64, hi: f64| {
        sign_changes((0..n).map(|i| f(lo + (hi - lo) * (i as f64 + 0.5) / n as f64)))
    };
    let i = count(&|r| b1(r, p1, p2, Side::Right).unwrap(), 0.0, 1.0);
    let j = count(&|r| b1(r, p1, p2, Side::Left).unwrap(), 0.0, 1.0);
    let k = count(&|r| b2(r, p1).unwrap(), 0.5, 1.0);
    CensusType::new(i, j, k)
}
