use dvdp_core::geometry::{domega_di, frequency, level_from_rho, DomainTag};
use dvdp_core::resonance::*;
use dvdp_core::Params;

fn pair(p: u32, q: u32) -> ResonancePair {
    ResonancePair::new(p, q).unwrap()
}

#[test]
fn closed_form_b_matches_difference_quotient() {
    for dom in [DomainTag::G1Plus, DomainTag::G1Minus, DomainTag::G2] {
        let (lo, hi) = dom.rho_range();
        for i in 1..10 {
            let rho = lo + (hi - lo) * i as f64 / 10.0;
            let l = level_from_rho(rho, dom).unwrap();
            let c = if dom.is_inner() {
                coefficients_case1(&l, 0.5, 1, 1.0).unwrap()
            } else {
                coefficients_case2(&l, 0.5, 1, 1.0).unwrap()
            };
            // the closed form is the logarithmic derivative (1/ω)dω/dI
            let fd = domega_di(&l).unwrap();
            let b = c.b * frequency(&l);
            assert!(((b - fd) / fd).abs() < 1e-5, "{dom:?} rho={rho}: {b} vs {fd}");
        }
    }
}

#[test]
fn amplitude_matches_fourier_coefficient() {
    let cases = [
        (DomainTag::G1Plus, 2, 2.5),
        (DomainTag::G1Minus, 2, 2.5),
        (DomainTag::G1Plus, 3, 2.5),
        (DomainTag::G2, 3, 3.0),
        (DomainTag::G2, 1, 1.2),
        (DomainTag::G2, 5, 3.36),
    ];
    for (dom, p, p4) in cases {
        let pr = pair(p, 1);
        let l = resonance_level(pr, p4, dom).unwrap();
        let params = Params::new(0.1, 0.9, 0.2, 1.0, p4);
        let (mean, c, s) = a0_harmonics(&l, pr, &params).unwrap();
        let cf = if dom.is_inner() {
            coefficients_case1(&l, params.p1, p, p4).unwrap()
        } else {
            coefficients_case2(&l, params.p1, p, p4).unwrap()
        };
        let b = dvdp_core::autonomous::generating_function(l.rho, params.p1, params.p2, dom).unwrap();
        assert!((c - cf.amplitude).abs() < 1e-6, "{dom:?} p={p}: {c} vs {}", cf.amplitude);
        assert!(s.abs() < 1e-10);
        assert!((mean - b).abs() < 1e-8, "{dom:?} mean {mean} vs B {b}");
    }
}

#[test]
fn cos_term_absent_for_even_outer_and_q_above_one() {
    for (dom, pr, p4) in [(DomainTag::G2, pair(2, 1), 3.0), (DomainTag::G1Plus, pair(3, 2), 1.5), (DomainTag::G2, pair(3, 2), 3.0)] {
        let params = Params::new(0.1, 0.9, 0.2, 1.0, p4);
        let l = resonance_level(pr, p4, dom).unwrap();
        let vals: Vec<f64> = (0..6).map(|j| a0_numeric(&l, pr, j as f64 * 0.37, &params).unwrap()).collect();
        let spread = vals.iter().cloned().fold(f64::MIN, f64::max) - vals.iter().cloned().fold(f64::MAX, f64::min);
        assert!(spread < 1e-10, "{dom:?} {pr}: spread {spread:e}");
    }
}

#[test]
fn a0_is_periodic_in_v() {
    let pr = pair(2, 1);
    let params = Params::new(0.1, 1.0, -0.1, 0.5, 2.5);
    let l = resonance_level(pr, 2.5, DomainTag::G1Plus).unwrap();
    for v in [0.1, 0.9, 2.0] {
        let a = a0_numeric(&l, pr, v, &params).unwrap();
        let b = a0_numeric(&l, pr, v + std::f64::consts::PI, &params).unwrap();
        assert!((a - b).abs() < 1e-10);
    }
}

#[test]
fn reference_zones_classify() {
    let expect = [
        (Params::new(0.1, 1.0, -0.1, 0.5, 2.5), 2, DomainTag::G1Plus, Classification::Impassable),
        (Params::new(0.1, 1.0, -0.02, 0.5, 2.5), 2, DomainTag::G1Plus, Classification::PartiallyPassable),
        (Params::new(0.1, 1.0, 0.03, 1.0, 3.36), 3, DomainTag::G2, Classification::Impassable),
        (Params::new(0.1, 1.0, 0.03, 1.0, 3.0), 3, DomainTag::G2, Classification::PartiallyPassable),
    ];
    for (params, p, dom, class) in expect {
        let z = resonance_zone(pair(p, 1), dom, &params).unwrap();
        assert_eq!(z.classification, class, "{z:?}");
        let flipped = Params { p3: -params.p3, ..params };
        assert_eq!(resonance_zone(pair(p, 1), dom, &flipped).unwrap().classification, class);
    }
}

#[test]
fn no_forcing_is_passable() {
    let params = Params::new(0.1, 1.0, -0.1, 0.0, 2.5);
    let z = resonance_zone(pair(2, 1), DomainTag::G1Plus, &params).unwrap();
    assert_eq!(z.classification, Classification::Passable);
    assert!(pendulum_model(&z, 0.0, 0.1).equilibria().is_empty());
}

#[test]
fn census_decays_geometrically() {
    // |B| stays above |p3·A| near the separatrix, so the count is finite
    let params = Params::new(0.1, 1.0, -0.1, 0.2, 2.5);
    let zones = splittable_census(&params, DomainTag::G1Plus, 12).unwrap();
    assert!(zones[0].splittable);
    assert_eq!(zones[0].pair.p(), 2);
    let n_split = |pm: u32| splittable_census(&params, DomainTag::G1Plus, pm).unwrap().iter().filter(|z| z.splittable).count();
    assert_eq!(n_split(12), n_split(20));
    // fixed level: successive amplitudes shrink by the nome
    let l = zones[0].level;
    let a = dvdp_core::elliptic::nome_ratio(l.rho).unwrap();
    let amp = |p| coefficients_case1(&l, 1.0, p, 2.5).unwrap().amplitude;
    let ratio = amp(11) / amp(10);
    assert!((ratio - a).abs() < 1e-6);
}

#[test]
fn resonance_frequency_is_exact() {
    for (dom, p, q, p4) in [(DomainTag::G1Plus, 2, 1, 2.5), (DomainTag::G2, 3, 1, 3.0), (DomainTag::G2, 1, 3, 0.2)] {
        let l = resonance_level(pair(p, q), p4, dom).unwrap();
        assert!((frequency(&l) - q as f64 * p4 / p as f64).abs() < 1e-10);
    }
}

#[test]
fn two_cycle_alignment() {
    let al = align_cycles_with_resonances(1.22, pair(2, 1), pair(3, 1)).unwrap();
    eprintln!("{al:?}");
    assert!((al.p1 + 0.221).abs() < 0.003);
    assert!((al.rho2 - 0.98).abs() < 0.005);
    assert!(alignment_residual(&al, 1.22).unwrap() < 1e-8);
    let w1 = frequency(&level_from_rho(al.rho1, DomainTag::G1Plus).unwrap());
    let w2 = frequency(&level_from_rho(al.rho2, DomainTag::G1Plus).unwrap());
    assert!((w1 / w2 - 1.5).abs() < 1e-8);
}
