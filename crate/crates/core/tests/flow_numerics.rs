//! Saddle, manifolds, splitting and connections of the forced flow.

use dvdp_core::autonomous::Side;
use dvdp_core::flow::connection::{
    autonomous_connection, connection_defect, locate_connections, ConnectionKind, TraceOptions,
};
use dvdp_core::flow::manifold::{grow_manifold, polyline_crossings, seeding_defect, Branch, GrowthOptions};
use dvdp_core::flow::ode::{integrate, Tolerance};
use dvdp_core::flow::splitting::{phase_splitting, vertex_to_section_time, SplittingOptions, SplittingVerdict};
use dvdp_core::flow::{find_saddle, ForcedField, StroboscopicMap, Variant};
use dvdp_core::geometry::hamiltonian;
use dvdp_core::melnikov::{melnikov_integral, threshold_p3_star, AmplitudeCoefficient};
use dvdp_core::Params;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const FIG9A: Params = Params { eps: 0.1, p1: 0.78549, p2: 1.6, p3: 1.02, p4: 4.0 };

#[test]
fn saddle_determinant_follows_the_divergence() {
    let map = StroboscopicMap::new(FIG9A, Variant::Original, Tolerance::FINE).unwrap();
    let s = find_saddle(&map).unwrap();
    assert!(s.residual < 1e-11);
    assert!(s.eigen_residual() < 1e-9);
    assert!(s.location[0].hypot(s.location[1]) < 3.0 * FIG9A.eps);
    // det DP = exp ∮ div along the periodic saddle orbit
    let field = *map.field();
    let f = |t: f64, z: &[f64; 3]| {
        let r = field.rhs(t, &[z[0], z[1]]);
        [r[0], r[1], field.divergence(z[0])]
    };
    let z = integrate(&f, 0.0, [s.location[0], s.location[1], 0.0], FIG9A.period(), Tolerance::FINE).unwrap();
    let det = s.eigenvalues.0 * s.eigenvalues.1;
    assert!((det - z[2].exp()).abs() < 1e-8 * det, "{det} vs {}", z[2].exp());
    // departure from area preservation is first order in ε
    let first_order = FIG9A.eps * FIG9A.p1 * FIG9A.period();
    assert!(((det - 1.0) / first_order - 1.0).abs() < 0.5);
}

#[test]
fn unperturbed_manifold_traces_the_separatrix() {
    let map = StroboscopicMap::new(Params::new(0.0, 0.0, 0.0, 0.0, 4.0), Variant::Original, Tolerance::FINE).unwrap();
    let fp = find_saddle(&map).unwrap();
    let opts = GrowthOptions { arclength: 3.2, spacing: 0.01, ..Default::default() };
    for (branch, sign) in [(Branch::Unstable, 1.0), (Branch::Stable, -1.0)] {
        let b = grow_manifold(&map, &fp, branch, sign, &opts).unwrap();
        assert!(b.max_gap() <= opts.spacing);
        for p in &b.points {
            let grad = (p[0] * p[0] * p[0] - p[0]).hypot(p[1]);
            let dist = hamiltonian(p[0], p[1]).abs() / grad.max(1e-300);
            assert!(dist < 1e-6, "{branch:?} {p:?}: {dist:e}");
        }
    }
    assert!(seeding_defect(&map, &fp, Branch::Unstable, 1.0, 1e-7, 6).unwrap() < 1e-8);
}

#[test]
fn big_loop_right_unstable_meets_left_stable() {
    for (p, kind) in [(FIG9A, ConnectionKind::BigLoopRight), (FIG9A.mirrored(), ConnectionKind::BigLoopLeft)] {
        let field = ForcedField::new(p, Variant::Transformed);
        let prof = phase_splitting(&field, kind, &SplittingOptions { phases: 32, ..Default::default() }).unwrap();
        assert_eq!(prof.verdict, SplittingVerdict::Transversal, "{kind}: [{}, {}]", prof.min, prof.max);
    }
    // the same seen on the manifolds themselves
    let map = StroboscopicMap::new(FIG9A, Variant::Transformed, Tolerance::FINE).unwrap();
    let fp = find_saddle(&map).unwrap();
    assert!(fp.location[0].abs() < 1e-12 && fp.location[1].abs() < 1e-12);
    let opts = GrowthOptions { arclength: 8.0, spacing: 0.02, ..Default::default() };
    let u = grow_manifold(&map, &fp, Branch::Unstable, 1.0, &opts).unwrap();
    let s = grow_manifold(&map, &fp, Branch::Stable, -1.0, &GrowthOptions { arclength: 3.0, ..opts }).unwrap();
    assert!(!polyline_crossings(&u.points, &s.points).is_empty());
}

#[test]
fn verdicts_far_from_and_without_forcing() {
    let (p1, p2, p4) = (0.3, 0.4, 2.0);
    let star = threshold_p3_star(p1, p2, p4, Side::Right, AmplitudeCoefficient::Exact).unwrap();
    let opts = SplittingOptions { phases: 32, ..Default::default() };
    let far = ForcedField::new(Params::new(0.005, p1, p2, 3.0 * star, p4), Variant::Transformed);
    assert_eq!(phase_splitting(&far, ConnectionKind::RightLoop, &opts).unwrap().verdict, SplittingVerdict::Transversal);
    let none = ForcedField::new(Params::new(0.005, p1, p2, 0.0, p4), Variant::Transformed);
    assert_eq!(phase_splitting(&none, ConnectionKind::RightLoop, &opts).unwrap().verdict, SplittingVerdict::Disjoint);
    // the untransformed forced equation has no saddle at the origin
    let orig = ForcedField::new(Params::new(0.005, p1, p2, 1.0, p4), Variant::Original);
    assert!(phase_splitting(&orig, ConnectionKind::RightLoop, &opts).is_err());
}

#[test]
fn splitting_sign_matches_melnikov_on_both_loops() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let eps = 0.005;
    let offset = vertex_to_section_time();
    for i in 0..10 {
        let side = if i % 2 == 0 { Side::Right } else { Side::Left };
        let kind = if side == Side::Right { ConnectionKind::RightLoop } else { ConnectionKind::LeftLoop };
        let p4 = rng.gen_range(1.5..3.0);
        let p1 = rng.gen_range(0.5..0.9);
        let p2 = rng.gen_range(-0.3..0.3);
        let p3 = rng.gen_range(0.2..1.0);
        let field = ForcedField::new(Params::new(eps, p1, p2, p3, p4), Variant::Transformed);
        let prof = phase_splitting(&field, kind, &SplittingOptions { phases: 32, ..Default::default() }).unwrap();
        let m: Vec<f64> = prof.phases.iter().map(|&ph| melnikov_integral(ph - offset, p1, p2, p3, p4, side)).collect();
        let scale = m.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        for (s, mv) in prof.splitting.iter().zip(&m) {
            if mv.abs() > 0.1 * scale {
                assert_eq!(s.signum(), mv.signum(), "sample {i} {kind}: S = {s:e}, εM = {:e}", eps * mv);
            }
        }
    }
}

#[test]
fn right_loop_point_is_a_connection() {
    let opts = TraceOptions::default();
    let (p1, p2) = (0.7551195621, 0.053875454);
    let eps = 0.01;
    let r = autonomous_connection(eps, p1, p2, 1e-3 * eps, &opts).unwrap();
    assert_eq!(r.kind, Some(ConnectionKind::RightLoop), "{r:?}");
    // residual is second order: shrinks ~4x when ε halves
    let d1 = r.defect(ConnectionKind::RightLoop).unwrap();
    let d2 = connection_defect(eps / 2.0, p1, p2, ConnectionKind::RightLoop, &opts).unwrap().unwrap();
    assert!(d1.abs() < eps * eps, "{d1:e}");
    assert!((d1 / d2).abs() > 3.0, "{d1:e} {d2:e}");
    let far = autonomous_connection(eps, 0.2, 0.5, 1e-3 * eps, &opts).unwrap();
    assert_eq!(far.label(), "NONE");
}

#[test]
fn big_loop_defect_is_mirror_symmetric() {
    let opts = TraceOptions::default();
    for &p2 in &[1.5, 1.9] {
        let a = connection_defect(0.12, 0.8, p2, ConnectionKind::BigLoopRight, &opts).unwrap().unwrap();
        let b = connection_defect(0.12, 0.8, -p2, ConnectionKind::BigLoopLeft, &opts).unwrap().unwrap();
        assert!((a - b).abs() < 1e-9, "{a} {b}");
    }
    let r = locate_connections(0.12, 0.8, ConnectionKind::BigLoopRight, (1.6, 2.0), 3, &opts).unwrap();
    assert_eq!(r.len(), 1);
    assert!((r[0] - 1.788).abs() < 0.01);
}

#[test]
fn listed_tangency_settings_lie_near_traced_tangencies() {
    use dvdp_core::flow::tangency::{tangency_sample, TangencySample, TraceSpec};
    use ConnectionKind::*;
    // (kind, ε, p1, p2, p3) quoted to two or three digits
    for (kind, eps, p1, p2, p3) in [
        (BigLoopRight, 0.175, 0.7850145, 0.5, 0.57),
        (RightLoop, 0.12, 0.6, 0.1, 2.34),
        (LeftLoop, 0.12, 0.86, 0.25, 2.96),
        (RightLoop, 0.12, 0.8, 0.2, 3.34),
        (LeftLoop, 0.12, 0.8, 0.2, 3.34),
    ] {
        let mut spec = TraceSpec::new(eps, p1, 4.0, kind);
        spec.p3_max = 6.0;
        match tangency_sample(&spec, p2).unwrap() {
            TangencySample::Found { p3: q, .. } => assert!((q - p3).abs() < 0.03 * p3, "{kind} p1={p1}: {q} vs {p3}"),
            other => panic!("{kind} p1={p1}: {other:?}"),
        }
    }
}
