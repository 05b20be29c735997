//! Resonance zones of the forced equation.
//!
//! At a level where ω(I) = (q/p)·p4 the slow phase v = pθ - qφ obeys, after
//! averaging, a damped pendulum
//!
//! ```text
//! v'' - b (p3·A·cos(pv) + B) = μ σ v',     μ = √ε
//! ```
//!
//! with b = (1/ω)dω/dI, B the generating function of the level, σ the orbit
//! average of the damping, and A a Fourier amplitude of the orbit velocity
//! that decays like a power of the nome. The cos term is present only for
//! q = 1 (and odd p on the outer orbits).

use crate::autonomous::{b1, find_cycles, generating_function, Multiplicity, Side};
use crate::elliptic::{complete_e, complete_k, nome_ratio};
use crate::error::{domain, Error, Result};
use crate::geometry::{frequency, level_from_rho, orbit_solution, time_average, DomainTag, EnergyLevel};
use crate::params::Params;
use crate::quadrature::periodic_trapezoid;
use crate::roots::brent;
use std::f64::consts::{PI, SQRT_2};
use std::fmt;

/// Resonance ω = (q/p)·p4 with coprime p, q >= 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ResonancePair {
    p: u32,
    q: u32,
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl ResonancePair {
    pub fn new(p: u32, q: u32) -> Result<Self> {
        if p == 0 || q == 0 || gcd(p, q) != 1 {
            return Err(domain(format!("resonance ({p},{q}) must be coprime positive integers")));
        }
        Ok(Self { p, q })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Target orbit frequency (q/p)·p4.
    pub fn frequency(&self, p4: f64) -> f64 {
        self.q as f64 * p4 / self.p as f64
    }
}

impl fmt::Display for ResonancePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.p, self.q)
    }
}

/// Level with ω = (q/p)·p4, by bracketing on ρ (ω is monotone in ρ on
/// each domain).
pub fn resonance_level(pair: ResonancePair, p4: f64, dom: DomainTag) -> Result<EnergyLevel> {
    let target = pair.frequency(p4);
    let (lo, hi) = dom.rho_range();
    let range = if dom.is_inner() { "(0, sqrt 2)" } else { "(0, inf)" };
    if !(target > 0.0 && target.is_finite()) || (dom.is_inner() && target >= SQRT_2) {
        return Err(Error::NoResonance { omega: target, range });
    }
    let w = |r: f64| frequency(&level_from_rho(r, dom).expect("bracket inside domain")) - target;
    let (a, b) = (lo + 1e-15, hi - 1e-15);
    if w(a).signum() == w(b).signum() {
        return Err(Error::NoResonance { omega: target, range });
    }
    let rho = brent(w, a, b, 1e-16)?;
    level_from_rho(rho, dom)
}

/// Closed-form averaged coefficients at a resonance level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZoneCoefficients {
    /// (1/ω)·dω/dI.
    pub b: f64,
    /// Orbit average of the damping without the p2·x term.
    pub sigma: f64,
    /// Amplitude of the cos(pv) harmonic per unit p3.
    pub amplitude: f64,
}

fn require(level: &EnergyLevel, inner: bool) -> Result<()> {
    if level.domain.is_inner() != inner {
        return Err(domain(format!("level in {} not accepted here", level.domain.name())));
    }
    Ok(())
}

/// Coefficients on an inner level (one well).
///
/// ```text
/// b1 = (π/2)(2-ρ)^{3/2} [2(1-ρ)K - (2-ρ)E] / (ρ²(1-ρ)K²)
/// σ1 = p1 - 2E/((2-ρ)K)
/// A1 = -√2 p4 aᵖ/(1 + a^{2p})
/// ```
///
/// On the left well the amplitude changes sign (the orbit is reflected).
pub fn coefficients_case1(level: &EnergyLevel, p1: f64, p: u32, p4: f64) -> Result<ZoneCoefficients> {
    require(level, true)?;
    let r = level.rho;
    let k = complete_k(r)?;
    let e = complete_e(r)?;
    let b = 0.5 * PI * (2.0 - r).powf(1.5) * (2.0 * (1.0 - r) * k - (2.0 - r) * e) / (r * r * (1.0 - r) * k * k);
    let sigma = p1 - 2.0 * e / ((2.0 - r) * k);
    let a = nome_ratio(r)?;
    let ap = a.powi(p as i32);
    let mut amplitude = -SQRT_2 * p4 * ap / (1.0 + ap * ap);
    if level.domain == DomainTag::G1Minus {
        amplitude = -amplitude;
    }
    Ok(ZoneCoefficients { b, sigma, amplitude })
}

/// Coefficients on an outer level. The amplitude is nonzero only for odd p.
///
/// ```text
/// b2 = (π/4)(2ρ-1)^{3/2} [(1-ρ)K + (2ρ-1)E] / (ρ(1-ρ)K²)
/// σ2 = p1 - 2(E + (ρ-1)K)/((2ρ-1)K)
/// A2 = -2√2 p4 a^{p/2}/(1 + aᵖ)
/// ```
pub fn coefficients_case2(level: &EnergyLevel, p1: f64, p: u32, p4: f64) -> Result<ZoneCoefficients> {
    require(level, false)?;
    let r = level.rho;
    let k = complete_k(r)?;
    let e = complete_e(r)?;
    let b = 0.25 * PI * (2.0 * r - 1.0).powf(1.5) * ((1.0 - r) * k + (2.0 * r - 1.0) * e) / (r * (1.0 - r) * k * k);
    let sigma = p1 - 2.0 * (e + (r - 1.0) * k) / ((2.0 * r - 1.0) * k);
    let amplitude = if p % 2 == 1 {
        let a = nome_ratio(r)?;
        -2.0 * SQRT_2 * p4 * a.powf(0.5 * p as f64) / (1.0 + a.powi(p as i32))
    } else {
        0.0
    };
    Ok(ZoneCoefficients { b, sigma, amplitude })
}

/// Whether the averaged forcing keeps its cos(pv) harmonic.
pub fn has_cos_term(pair: ResonancePair, dom: DomainTag) -> bool {
    pair.q == 1 && (dom.is_inner() || pair.p % 2 == 1)
}

/// Averaged energy forcing A0(v) by direct quadrature over the resonant
/// torus. θ = 0 is the turning point at ±x_max.
///
/// ```text
/// A0(v) = (1/2πp) ∫_0^{2πp} (f(x)y + p3 sin φ) y / ω dφ,   θ = (q/p)φ + v
/// ```
pub fn a0_numeric(level: &EnergyLevel, pair: ResonancePair, v: f64, params: &Params) -> Result<f64> {
    let w = frequency(level);
    let (p, q) = (pair.p as f64, pair.q as f64);
    let f = |phi: f64| {
        let th = q * phi / p + v;
        let pt = orbit_solution(level, th / w);
        (params.damping(pt.x) * pt.y + params.p3 * phi.sin()) * pt.y / w
    };
    let len = 2.0 * PI * p;
    let mut n = 64 * pair.p as usize;
    let mut prev = periodic_trapezoid(f, 0.0, len, n) / len;
    for _ in 0..12 {
        n *= 2;
        let cur = periodic_trapezoid(f, 0.0, len, n) / len;
        if (cur - prev).abs() <= 1e-14 * cur.abs().max(1.0) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::QuadratureFailure(format!("A0 trapezoid not converged at rho = {}", level.rho)))
}

/// Mean, cos(pv) and sin(pv) coefficients of A0 from eight samples over
/// one period 2π/p in v (A0 is a trigonometric polynomial of degree p).
pub fn a0_harmonics(level: &EnergyLevel, pair: ResonancePair, params: &Params) -> Result<(f64, f64, f64)> {
    const M: usize = 8;
    let p = pair.p as f64;
    let (mut m, mut c, mut s) = (0.0, 0.0, 0.0);
    for j in 0..M {
        let pv = 2.0 * PI * j as f64 / M as f64;
        let a = a0_numeric(level, pair, pv / p, params)?;
        m += a;
        c += a * pv.cos();
        s += a * pv.sin();
    }
    let n = M as f64;
    Ok((m / n, 2.0 * c / n, 2.0 * s / n))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Classification {
    Passable,
    PartiallyPassable,
    Impassable,
}

impl Classification {
    pub fn label(self) -> &'static str {
        match self {
            Classification::Passable => "PASSABLE",
            Classification::PartiallyPassable => "PARTIALLY_PASSABLE",
            Classification::Impassable => "IMPASSABLE",
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResonanceZone {
    pub pair: ResonancePair,
    pub level: EnergyLevel,
    /// (1/ω)·dω/dI, as in the pendulum model.
    pub b: f64,
    /// Closed-form σ (no p2 term).
    pub sigma: f64,
    /// σ as the quadrature time average of p1 + p2x - x² on the orbit.
    pub sigma_quadrature: f64,
    /// Amplitude per unit p3; zero when the cos term is absent.
    pub amplitude_a: f64,
    pub b_value: f64,
    pub classification: Classification,
    /// |B| < |p3·A|: A0 has simple zeros.
    pub splittable: bool,
}

/// Build and classify the zone of `pair` in `dom`.
pub fn resonance_zone(pair: ResonancePair, dom: DomainTag, params: &Params) -> Result<ResonanceZone> {
    let level = resonance_level(pair, params.p4, dom)?;
    let c = if dom.is_inner() {
        coefficients_case1(&level, params.p1, pair.p, params.p4)?
    } else {
        coefficients_case2(&level, params.p1, pair.p, params.p4)?
    };
    let amplitude_a = if has_cos_term(pair, dom) { c.amplitude } else { 0.0 };
    let b_value = generating_function(level.rho, params.p1, params.p2, dom)?;
    let sigma_quadrature = time_average(&level, |x| params.damping(x))?;
    let mut zone = ResonanceZone {
        pair,
        level,
        b: c.b,
        sigma: c.sigma,
        sigma_quadrature,
        amplitude_a,
        b_value,
        classification: Classification::Passable,
        splittable: false,
    };
    zone.classification = classify(&zone, params.p3, params.eps)?;
    zone.splittable = (zone.b_value).abs() < (params.p3 * zone.amplitude_a).abs();
    Ok(zone)
}

/// |B| below which the pendulum's separatrix loops enclose the cylinder:
/// the energy fed by B over one cell, 2π|bB|/p, is less than the damping
/// work along the separatrix, μ|σ|·8√(|b p3 A|/p)/p.
pub fn impassable_threshold(zone: &ResonanceZone, p3: f64, eps: f64) -> f64 {
    let p = zone.pair.p as f64;
    let mu = eps.sqrt();
    mu * zone.sigma.abs() * (4.0 / PI) * ((p3 * zone.amplitude_a).abs() / (p * zone.b.abs())).sqrt()
}

/// Decision table for a populated zone.
///
/// * cos term absent: PASSABLE, unless B = 0 (degenerate).
/// * |B| >= |p3·A|: no equilibria in v, PASSABLE.
/// * otherwise IMPASSABLE if |B| is within the damping band of zero,
///   PARTIALLY_PASSABLE beyond it.
pub fn classify(zone: &ResonanceZone, p3: f64, eps: f64) -> Result<Classification> {
    let forcing = (p3 * zone.amplitude_a).abs();
    let bb = zone.b_value.abs();
    if forcing == 0.0 {
        if bb == 0.0 {
            return Err(Error::DegenerateCase);
        }
        return Ok(Classification::Passable);
    }
    if bb >= forcing {
        return Ok(Classification::Passable);
    }
    if bb <= impassable_threshold(zone, p3, eps) {
        Ok(Classification::Impassable)
    } else {
        Ok(Classification::PartiallyPassable)
    }
}

/// Averaged pendulum v'' = b(p3·A·cos(pv) + B) + μσv' in slow time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PendulumModel {
    pub b: f64,
    pub a: f64,
    pub big_b: f64,
    pub sigma: f64,
    pub p: u32,
    pub p3: f64,
    pub mu: f64,
}

pub fn pendulum_model(zone: &ResonanceZone, p3: f64, eps: f64) -> PendulumModel {
    PendulumModel {
        b: zone.b,
        a: zone.amplitude_a,
        big_b: zone.b_value,
        sigma: zone.sigma,
        p: zone.pair.p,
        p3,
        mu: eps.sqrt(),
    }
}

impl PendulumModel {
    pub fn acceleration(&self, v: f64, w: f64) -> f64 {
        self.b * (self.p3 * self.a * (self.p as f64 * v).cos() + self.big_b) + self.mu * self.sigma * w
    }

    /// Equilibria v in [0, 2π): roots of p3·A·cos(pv) + B = 0.
    pub fn equilibria(&self) -> Vec<f64> {
        let pa = self.p3 * self.a;
        if pa == 0.0 || self.big_b.abs() > pa.abs() {
            return Vec::new();
        }
        let p = self.p as f64;
        let c = (-self.big_b / pa).acos();
        let mut out = Vec::new();
        for k in 0..self.p {
            let base = 2.0 * PI * k as f64;
            for s in [c, 2.0 * PI - c] {
                let v = (base + s) / p;
                if !out.iter().any(|&u: &f64| (u - v).abs() < 1e-14) {
                    out.push(v);
                }
            }
        }
        out.sort_by(f64::total_cmp);
        out
    }

    /// Fixed-step RK4 trajectory (v, v') sampled every step.
    pub fn simulate(&self, v0: f64, w0: f64, tau: f64, steps: usize) -> Vec<(f64, f64, f64)> {
        let h = tau / steps as f64;
        let mut out = Vec::with_capacity(steps + 1);
        let (mut v, mut w) = (v0, w0);
        out.push((0.0, v, w));
        for i in 0..steps {
            let k1 = (w, self.acceleration(v, w));
            let k2 = (w + 0.5 * h * k1.1, self.acceleration(v + 0.5 * h * k1.0, w + 0.5 * h * k1.1));
            let k3 = (w + 0.5 * h * k2.1, self.acceleration(v + 0.5 * h * k2.0, w + 0.5 * h * k2.1));
            let k4 = (w + h * k3.1, self.acceleration(v + h * k3.0, w + h * k3.1));
            v += h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
            w += h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
            out.push(((i + 1) as f64 * h, v, w));
        }
        out
    }
}

/// Limit cycles aligned with two resonances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Alignment {
    pub p1: f64,
    pub rho1: f64,
    pub rho2: f64,
    pub p4: f64,
}

fn right_well_roots(p1: f64, p2: f64) -> Vec<f64> {
    let mut r: Vec<f64> = find_cycles(p1, p2)
        .cycles
        .into_iter()
        .filter(|c| c.domain == DomainTag::G1Plus && c.multiplicity == Multiplicity::Simple)
        .map(|c| c.rho)
        .collect();
    r.sort_by(f64::total_cmp);
    r
}

/// Find p1 so that the two right-well limit cycles at ρ1 < ρ2 sit on the
/// resonances `first` and `second` of one forcing frequency p4:
/// ω(ρ1) = (q1/p1')p4 and ω(ρ2) = (q2/p2')p4.
pub fn align_cycles_with_resonances(p2: f64, first: ResonancePair, second: ResonancePair) -> Result<Alignment> {
    let k1 = first.p as f64 / first.q as f64;
    let k2 = second.p as f64 / second.q as f64;
    let w = |r: f64| frequency(&level_from_rho(r, DomainTag::G1Plus).expect("rho in (0,1)"));
    let mismatch = |p1: f64| -> Option<(f64, f64, f64)> {
        let r = right_well_roots(p1, p2);
        if r.len() != 2 {
            return None;
        }
        Some((k1 * w(r[0]) - k2 * w(r[1]), r[0], r[1]))
    };
    // two right-well cycles exist between the double-cycle curve and L1+
    let hi = 1.0 - p2;
    let lo = crate::autonomous::double_cycle_p1_at(p2)
        .ok_or_else(|| Error::NoSolution(format!("no double-cycle point at p2 = {p2}")))?;
    let (lo, hi) = (lo.min(hi), lo.max(hi));
    let n = 64;
    let grid: Vec<f64> = (1..n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect();
    let vals: Vec<Option<f64>> = grid.iter().map(|&x| mismatch(x).map(|m| m.0)).collect();
    for i in 0..grid.len() - 1 {
        if let (Some(a), Some(b)) = (vals[i], vals[i + 1]) {
            if a.signum() != b.signum() {
                let p1 = brent(|x| mismatch(x).map_or(f64::NAN, |m| m.0), grid[i], grid[i + 1], 1e-13)?;
                let (_, rho1, rho2) = mismatch(p1).ok_or_else(|| Error::NoSolution("cycles lost".into()))?;
                return Ok(Alignment { p1, rho1, rho2, p4: k1 * w(rho1) });
            }
        }
    }
    Err(Error::NoSolution(format!("no two-cycle alignment at p2 = {p2}")))
}

/// Residual check: |B1+| at both radii (with prefactor).
pub fn alignment_residual(al: &Alignment, p2: f64) -> Result<f64> {
    let r1 = b1(al.rho1, al.p1, p2, Side::Right)?;
    let r2 = b1(al.rho2, al.p1, p2, Side::Right)?;
    Ok(r1.abs().max(r2.abs()))
}

/// Zones (p, 1), p = 1..=p_max, in `dom`; levels that do not exist are
/// skipped. As p grows the levels approach the separatrix, where aᵖ tends
/// to e^{-π p4/2}: the count of splittable levels is finite only when
/// |B| at the separatrix exceeds |p3·A| there.
pub fn splittable_census(params: &Params, dom: DomainTag, p_max: u32) -> Result<Vec<ResonanceZone>> {
    let mut out = Vec::new();
    for p in 1..=p_max {
        let pair = ResonancePair::new(p, 1)?;
        match resonance_zone(pair, dom, params) {
            Ok(z) => out.push(z),
            Err(Error::NoResonance { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}
