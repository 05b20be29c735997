//! resonance, melnikov

use super::{params, require_eps, Context, Outcome, RunError};
use crate::config::{key, ConfigError, KeySpec, Resolved};
use crate::output::{color, num, Svg, Table};
use crate::pool::par_map;
use dvdp_core::autonomous::Side;
use dvdp_core::geometry::DomainTag;
use dvdp_core::melnikov::{
    delta1, left_loop_delta1_checked, left_loop_tangency_p3, melnikov_integral, threshold_p3_star,
    AmplitudeCoefficient,
};
use dvdp_core::resonance::{impassable_threshold, pendulum_model, resonance_zone, ResonancePair};
use dvdp_core::Error;
use std::f64::consts::PI;

pub(super) const RESONANCE_KEYS: &[KeySpec] = &[
    key("eps", "0.1"),
    key("p1", "1"),
    key("p2", "-0.1"),
    key("p3", "0.5"),
    key("p4", "2.5"),
    key("p_max", "6"),
    key("q_max", "3"),
    key("portrait", "false"),
    key("portrait_n", "8"),
    key("portrait_tau", "40"),
    key("portrait_steps", "4000"),
];

pub(super) const MELNIKOV_KEYS: &[KeySpec] = &[
    key("p1", "0.7551195621"),
    key("p2", "0.053875454"),
    key("p3", "1.7"),
    key("p4", "4"),
    key("coef", "published"),
    key("samples", "256"),
];

pub(crate) fn coefficient(cfg: &Resolved) -> Result<AmplitudeCoefficient, ConfigError> {
    match cfg.raw("coef") {
        "published" => Ok(AmplitudeCoefficient::Published),
        "exact" => Ok(AmplitudeCoefficient::Exact),
        other => Err(ConfigError::Value { key: "coef".into(), message: format!("expected published|exact, got `{other}`") }),
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(super) fn resonance(ctx: &mut Context) -> Result<Outcome, RunError> {
    let prm = params(&ctx.cfg)?;
    require_eps(&prm)?;
    if prm.p4 <= 0.0 {
        return Err(ConfigError::Value { key: "p4".into(), message: "must be > 0".into() }.into());
    }
    let p_max: u32 = ctx.cfg.get("p_max")?;
    let q_max: u32 = ctx.cfg.get("q_max")?;
    if p_max < 1 || q_max < 1 {
        return Err(ConfigError::Invalid("p_max and q_max must be at least 1".into()).into());
    }
    let mut jobs = Vec::new();
    for dom in [DomainTag::G1Plus, DomainTag::G1Minus, DomainTag::G2] {
        for p in 1..=p_max {
            for q in 1..=q_max {
                if gcd(p, q) == 1 {
                    jobs.push((dom, ResonancePair::new(p, q).expect("coprime")));
                }
            }
        }
    }
    let zones = par_map(&jobs, ctx.workers, |&(dom, pair)| resonance_zone(pair, dom, &prm));

    let mut table = Table::new(&[
        "domain", "p", "q", "rho", "h", "omega", "b", "sigma", "sigma_quadrature", "amplitude", "B", "threshold",
        "class", "splittable",
    ]);
    let mut absent = 0;
    let mut summary = Vec::new();
    let mut populated = Vec::new();
    for ((dom, pair), z) in jobs.iter().zip(zones) {
        let pre = vec![dom.name().to_string(), pair.p().to_string(), pair.q().to_string()];
        match z {
            Ok(z) => {
                let thr = if z.amplitude_a != 0.0 { impassable_threshold(&z, prm.p3, prm.eps) } else { 0.0 };
                let mut row = pre;
                row.extend([
                    num(z.level.rho),
                    num(z.level.h),
                    num(pair.frequency(prm.p4)),
                    num(z.b),
                    num(z.sigma),
                    num(z.sigma_quadrature),
                    num(z.amplitude_a),
                    num(z.b_value),
                    num(thr),
                    z.classification.label().to_string(),
                    z.splittable.to_string(),
                ]);
                table.push(row);
                summary.push(format!("{:>3} {pair}: rho = {:.6}, {}", dom.name(), z.level.rho, z.classification));
                populated.push(z);
            }
            Err(Error::NoResonance { .. }) => absent += 1,
            Err(Error::DegenerateCase) => {
                let mut row = pre;
                row.extend(std::iter::repeat_n(String::new(), 9));
                row.extend(["DEGENERATE".to_string(), "false".to_string()]);
                table.push(row);
            }
            Err(e) => {
                let mut row = pre;
                row.extend(std::iter::repeat_n(String::new(), 10));
                row.push(format!("error: {e}"));
                table.failures += 1;
                table.push(row);
            }
        }
    }
    ctx.sink.table("resonance.csv", &table, &ctx.cfg)?;
    summary.push(format!("{absent} pairs without a resonance level"));

    if ctx.cfg.bool("portrait")? {
        let n = ctx.cfg.usize("portrait_n")?.max(1);
        let tau = ctx.cfg.positive("portrait_tau")?;
        let steps = ctx.cfg.usize("portrait_steps")?.max(1);
        let mut pt = Table::new(&["domain", "p", "q", "trajectory", "tau", "v", "w"]);
        for z in populated.iter().filter(|z| z.amplitude_a != 0.0) {
            let m = pendulum_model(z, prm.p3, prm.eps);
            let cell = 2.0 * PI / z.pair.p() as f64;
            let wscale = (m.b * m.p3 * m.a).abs().sqrt().max(1e-6);
            let name = format!("pendulum_{}_{}_{}.svg", z.level.domain.name().replace('+', "p").replace('-', "m"), z.pair.p(), z.pair.q());
            let mut svg = Svg::new(&format!("averaged pendulum {} {} ({})", z.level.domain.name(), z.pair, z.classification), (0.0, cell), (-3.0 * wscale, 3.0 * wscale));
            for i in 0..n {
                let v0 = cell * (i as f64 + 0.5) / n as f64;
                for (j, w0) in [-1.5 * wscale, 0.0, 1.5 * wscale].into_iter().enumerate() {
                    let traj = m.simulate(v0, w0, tau, steps);
                    let id = i * 3 + j;
                    for &(t, v, w) in traj.iter().step_by((steps / 400).max(1)) {
                        pt.push(vec![
                            z.level.domain.name().to_string(),
                            z.pair.p().to_string(),
                            z.pair.q().to_string(),
                            id.to_string(),
                            num(t),
                            num(v),
                            num(w),
                        ]);
                    }
                    // fold v into one cell for drawing, breaking the line at wraps
                    let mut seg: Vec<(f64, f64)> = Vec::new();
                    for &(_, v, w) in &traj {
                        let vv = v.rem_euclid(cell);
                        if let Some(&(pv, _)) = seg.last() {
                            if (vv - pv).abs() > 0.5 * cell {
                                svg.polyline(&seg, color(id), None);
                                seg.clear();
                            }
                        }
                        seg.push((vv, w));
                    }
                    svg.polyline(&seg, color(id), None);
                }
            }
            let eq: Vec<(f64, f64)> = m.equilibria().into_iter().filter(|v| *v < cell).map(|v| (v, 0.0)).collect();
            svg.points(&eq, "black", 4.0);
            ctx.sink.svg(&name, &svg)?;
        }
        ctx.sink.table("pendulum.csv", &pt, &ctx.cfg)?;
    }
    Ok(Outcome { failures: table.failures, summary })
}

pub(super) fn melnikov(ctx: &mut Context) -> Result<Outcome, RunError> {
    let (p1, p2, p3, p4) = (ctx.cfg.f64("p1")?, ctx.cfg.f64("p2")?, ctx.cfg.f64("p3")?, ctx.cfg.positive("p4")?);
    let coef = coefficient(&ctx.cfg)?;
    let n = ctx.cfg.usize("samples")?;
    if n < 2 {
        return Err(ConfigError::Invalid("samples must be at least 2".into()).into());
    }
    let period = 2.0 * PI / p4;
    let ts: Vec<f64> = (0..n).map(|i| period * i as f64 / n as f64).collect();
    let mut table = Table::new(&["t0", "delta1_right", "delta1_left", "integral_right", "integral_left"]);
    let rows = par_map(&ts, ctx.workers, |&t0| {
        vec![
            num(t0),
            num(delta1(t0, p1, p2, p3, p4, Side::Right, coef).0),
            num(delta1(t0, p1, p2, p3, p4, Side::Left, coef).0),
            num(melnikov_integral(t0, p1, p2, p3, p4, Side::Right)),
            num(melnikov_integral(t0, p1, p2, p3, p4, Side::Left)),
        ]
    });
    for r in rows {
        table.push(r);
    }
    ctx.sink.table("melnikov.csv", &table, &ctx.cfg)?;

    let mut summary = Vec::new();
    for side in [Side::Right, Side::Left] {
        let (_, r) = delta1(0.0, p1, p2, p3, p4, side, coef);
        let star = threshold_p3_star(p1, p2, p4, side, coef)?;
        summary.push(format!(
            "{:<5} loop: mean = {:.10}, amplitude = {:.10}, p3* = {:.10}, verdict = {}",
            if side == Side::Right { "right" } else { "left" },
            r.mean,
            r.amplitude,
            star,
            r.verdict
        ));
    }
    match left_loop_delta1_checked(0.0, p1, p2, p3, p4, coef, 1e-5) {
        Ok((_, r)) => summary.push(format!(
            "right-loop condition holds: left-loop tangency at p3 = {:.6} (verdict here {})",
            left_loop_tangency_p3(p2, p4, coef),
            r.verdict
        )),
        Err(e) => summary.push(format!("left-loop balance not applicable: {e}")),
    }
    let curve = |side| ts.iter().map(|&t| (t, delta1(t, p1, p2, p3, p4, side, coef).0)).collect::<Vec<_>>();
    let (r, l) = (curve(Side::Right), curve(Side::Left));
    let ((x0, x1), (y0, y1)) = Svg::bounds(r.iter().chain(&l));
    let mut svg = Svg::new("Melnikov function over one forcing period", (x0, x1), (y0.min(0.0), y1.max(0.0)));
    svg.polyline(&r, color(0), Some("right loop"));
    svg.polyline(&l, color(1), Some("left loop"));
    ctx.sink.svg("melnikov.svg", &svg)?;
    Ok(Outcome { summary, failures: 0 })
}
