//! The integrable system x'' - x + x³ = 0: energy levels, closed-form
//! orbits, frequency and action.
//!
//! Inside the figure-eight (G1±, -1/4 < h < 0) the orbits are dn-type and
//! stay in one well; outside (G2, h > 0) they are cn-type and encircle
//! both centres. Levels are parameterised by the elliptic parameter ρ.

use crate::elliptic::{complete_k, jacobi_sn_cn_dn};
use crate::error::{domain, Error, Result};
use crate::quadrature;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, SQRT_2};

const QUAD_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DomainTag {
    /// Right well, x > 0.
    G1Plus,
    /// Left well, x < 0.
    G1Minus,
    /// Outside the figure-eight.
    G2,
}

impl DomainTag {
    pub fn is_inner(self) -> bool {
        !matches!(self, DomainTag::G2)
    }

    /// Open ρ interval of the domain.
    pub fn rho_range(self) -> (f64, f64) {
        match self {
            DomainTag::G2 => (0.5, 1.0),
            _ => (0.0, 1.0),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            DomainTag::G1Plus => "G1+",
            DomainTag::G1Minus => "G1-",
            DomainTag::G2 => "G2",
        }
    }
}

/// One unperturbed closed orbit H = h.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyLevel {
    pub domain: DomainTag,
    pub h: f64,
    pub rho: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitPoint {
    pub x: f64,
    pub y: f64,
    pub t: f64,
}

/// H(x, y) = y²/2 - x²/2 + x⁴/4.
#[inline]
pub fn hamiltonian(x: f64, y: f64) -> f64 {
    0.5 * y * y - 0.5 * x * x + 0.25 * x * x * x * x
}

/// Level with energy h. h = 0 is the separatrix and belongs to no domain.
pub fn level_from_h(h: f64, domain_tag: DomainTag) -> Result<EnergyLevel> {
    let ok = match domain_tag {
        DomainTag::G2 => h > 0.0 && h.is_finite(),
        _ => h > -0.25 && h < 0.0,
    };
    if !ok {
        return Err(domain(format!("h = {h} outside {}", domain_tag.name())));
    }
    let s = (1.0 + 4.0 * h).sqrt();
    let rho = match domain_tag {
        DomainTag::G2 => (1.0 + s) / (2.0 * s),
        _ => 2.0 * s / (1.0 + s),
    };
    Ok(EnergyLevel { domain: domain_tag, h, rho })
}

/// Level with parameter ρ. The ρ -> h map is inverted in closed form:
/// s = √(1+4h) = ρ/(2-ρ) in G1 and 1/(2ρ-1) in G2.
pub fn level_from_rho(rho: f64, domain_tag: DomainTag) -> Result<EnergyLevel> {
    let (lo, hi) = domain_tag.rho_range();
    if !(rho > lo && rho < hi) {
        return Err(domain(format!("rho = {rho} outside ({lo}, {hi}) for {}", domain_tag.name())));
    }
    let s = s_of_rho(rho, domain_tag);
    Ok(EnergyLevel { domain: domain_tag, h: 0.25 * (s * s - 1.0), rho })
}

fn s_of_rho(rho: f64, domain_tag: DomainTag) -> f64 {
    match domain_tag {
        DomainTag::G2 => 1.0 / (2.0 * rho - 1.0),
        _ => rho / (2.0 - rho),
    }
}

impl EnergyLevel {
    fn s(&self) -> f64 {
        s_of_rho(self.rho, self.domain)
    }

    /// Largest |x| on the orbit, √(1+s).
    pub fn x_max(&self) -> f64 {
        (1.0 + self.s()).sqrt()
    }

    /// Smallest |x| on an inner orbit, √(1-s); zero for G2.
    pub fn x_min(&self) -> f64 {
        match self.domain {
            DomainTag::G2 => 0.0,
            // 1 - s = 2(1-ρ)/(2-ρ), without the cancellation
            _ => (2.0 * (1.0 - self.rho) / (2.0 - self.rho)).sqrt(),
        }
    }

    /// Time scale λ in x = x_max·dn(λt) or x_max·cn(λt).
    pub fn lambda(&self) -> f64 {
        match self.domain {
            DomainTag::G2 => 1.0 / (2.0 * self.rho - 1.0).sqrt(),
            _ => 1.0 / (2.0 - self.rho).sqrt(),
        }
    }

    pub fn frequency(&self) -> f64 {
        frequency(self)
    }

    pub fn period(&self) -> f64 {
        2.0 * PI / frequency(self)
    }
}

/// Closed-form orbit through the turning point x = ±x_max at t = 0.
///
/// ```text
/// G1±: x = ±x_max dn(λt | ρ),  λ = 1/√(2-ρ),  x_max² = 2/(2-ρ)
/// G2 : x =  x_max cn(λt | ρ),  λ = 1/√(2ρ-1), x_max² = 2ρ/(2ρ-1)
/// ```
pub fn orbit_solution(level: &EnergyLevel, t: f64) -> OrbitPoint {
    let lam = level.lambda();
    let xm = level.x_max();
    let (sn, cn, dn) = jacobi_sn_cn_dn(lam * t, level.rho);
    let (x, y) = match level.domain {
        DomainTag::G2 => (xm * cn, -xm * lam * sn * dn),
        _ => (xm * dn, -xm * lam * level.rho * sn * cn),
    };
    match level.domain {
        DomainTag::G1Minus => OrbitPoint { x: -x, y: -y, t },
        _ => OrbitPoint { x, y, t },
    }
}

/// ω = 2π/T: π/(√(2-ρ)K) in G1, π/(2√(2ρ-1)K) in G2.
pub fn frequency(level: &EnergyLevel) -> f64 {
    let k = complete_k(level.rho).expect("level invariant: 0 < rho < 1");
    match level.domain {
        DomainTag::G2 => PI / (2.0 * (2.0 * level.rho - 1.0).sqrt() * k),
        _ => PI / ((2.0 - level.rho).sqrt() * k),
    }
}

/// Supremum of ω over the domain (infimum is 0 at the separatrix).
pub fn frequency_sup(domain_tag: DomainTag) -> f64 {
    match domain_tag {
        DomainTag::G2 => f64::INFINITY,
        _ => SQRT_2,
    }
}

/// Half-loop integral ∫ over the upper arc in the turning-point substitution.
/// `with_y` selects ∫ g y dx (true) or ∫ g dx / y (false), both over
/// x_lo..x_hi for the G1+ or G2 canonical orbit.
fn half_loop<G: Fn(f64) -> f64>(level: &EnergyLevel, g: G, with_y: bool) -> Result<f64> {
    match level.domain {
        DomainTag::G2 => {
            let xm = level.x_max();
            // x_max² - 2 = 2(1-ρ)/(2ρ-1)
            let off = 2.0 * (1.0 - level.rho) / (2.0 * level.rho - 1.0);
            let f = |th: f64| {
                let (s, c) = th.sin_cos();
                let x = xm * s;
                let r = (0.5 * (x * x + off)).sqrt();
                if with_y {
                    g(x) * r * xm * xm * c * c
                } else {
                    g(x) / r
                }
            };
            quadrature::integrate(f, -FRAC_PI_2, FRAC_PI_2, QUAD_TOL, QUAD_TOL)
        }
        _ => {
            let xa = level.x_max();
            let xb = level.x_min();
            let d = 0.5 * (xa - xb);
            let f = |th: f64| {
                let co = th.cos();
                // x - x_min = d(1 + sin θ) = 2d sin²(θ/2 + π/4)
                let sn = (0.5 * th + FRAC_PI_4).sin();
                let above = 2.0 * d * sn * sn;
                let x = xb + above;
                let r = (0.5 * (xa + x) * (2.0 * xb + above)).sqrt();
                if with_y {
                    g(x) * r * d * d * co * co
                } else {
                    g(x) / r
                }
            };
            quadrature::integrate(f, -FRAC_PI_2, FRAC_PI_2, QUAD_TOL, QUAD_TOL)
        }
    }
}

fn oriented<G: Fn(f64) -> f64>(level: &EnergyLevel, g: G) -> impl Fn(f64) -> f64 {
    let flip = level.domain == DomainTag::G1Minus;
    move |x| if flip { g(-x) } else { g(x) }
}

/// (1/2π) ∮ g(x) y dx around the orbit in the flow direction.
///
/// With g = p1 + p2 x - x² this is the Pontryagin integral of the
/// dissipation, i.e. the first-order energy gain per unit of 2π.
pub fn pontryagin_integral<G: Fn(f64) -> f64>(level: &EnergyLevel, g: G) -> Result<f64> {
    Ok(2.0 * half_loop(level, oriented(level, g), true)? / (2.0 * PI))
}

/// Period ∮ dx/y by quadrature; independent of the closed-form ω.
pub fn period_quadrature(level: &EnergyLevel) -> Result<f64> {
    Ok(2.0 * half_loop(level, |_| 1.0, false)?)
}

/// Time average (1/T) ∮ g(x(t)) dt by quadrature.
pub fn time_average<G: Fn(f64) -> f64>(level: &EnergyLevel, g: G) -> Result<f64> {
    let num = half_loop(level, oriented(level, g), false)?;
    let den = half_loop(level, |_| 1.0, false)?;
    Ok(num / den)
}

/// Action I = (1/2π) ∮ y dx.
pub fn action(level: &EnergyLevel) -> Result<f64> {
    pontryagin_integral(level, |_| 1.0)
}

/// b = dω/dI as (dω/dρ)/(dI/dρ), both by five-point differences in ρ.
/// An independent check of the closed forms in the resonance module.
pub fn domega_di(level: &EnergyLevel) -> Result<f64> {
    let (lo, hi) = level.domain.rho_range();
    let rho = level.rho;
    let h = (1e-3 * rho.min(1.0 - rho)).min(0.2 * (rho - lo)).min(0.2 * (hi - rho));
    if h < 1e-9 {
        return Err(Error::StepUnderflow { rho });
    }
    let at = |r: f64| level_from_rho(r, level.domain);
    let mut dw = 0.0;
    let mut di = 0.0;
    for (k, c) in [(-2.0, 1.0), (-1.0, -8.0), (1.0, 8.0), (2.0, -1.0)] {
        let l = at(rho + k * h)?;
        dw += c * frequency(&l);
        di += c * action(&l)?;
    }
    Ok(dw / di)
}
