//! Closed forms against independent quadrature.

use dvdp_core::autonomous::generating_function;
use dvdp_core::geometry::{frequency, level_from_rho, period_quadrature, pontryagin_integral, DomainTag};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn levels() -> Vec<(DomainTag, f64, f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut out = Vec::new();
    for i in 0..200 {
        let dom = [DomainTag::G1Plus, DomainTag::G1Minus, DomainTag::G2][i % 3];
        let (lo, hi) = dom.rho_range();
        // keep clear of the separatrix where the quadrature itself degrades
        let rho = lo + (hi - lo) * rng.gen_range(0.01..0.995);
        out.push((dom, rho, rng.gen_range(-1.5..1.5), rng.gen_range(-2.0..2.0)));
    }
    out
}

#[test]
fn generating_function_matches_pontryagin_quadrature() {
    let mut worst = 0.0f64;
    for (dom, rho, p1, p2) in levels() {
        let level = level_from_rho(rho, dom).unwrap();
        let closed = generating_function(rho, p1, p2, dom).unwrap();
        let quad = pontryagin_integral(&level, |x| p1 + p2 * x - x * x).unwrap();
        let err = (closed - quad).abs() / quad.abs().max(1.0);
        worst = worst.max(err);
        assert!(err <= 1e-8, "{dom:?} rho={rho} p=({p1},{p2}): {closed} vs {quad}");
    }
    assert!(worst.is_finite());
}

#[test]
fn frequency_matches_period_quadrature() {
    for (dom, rho, _, _) in levels() {
        let level = level_from_rho(rho, dom).unwrap();
        let w = frequency(&level);
        let wq = 2.0 * PI / period_quadrature(&level).unwrap();
        assert!((w - wq).abs() <= 1e-8 * w, "{dom:?} rho={rho}: {w} vs {wq}");
    }
}
