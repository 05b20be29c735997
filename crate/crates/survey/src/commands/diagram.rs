//! diagram: tangency lines in the (p2, p3) plane

use super::forced::coefficient;
use super::{Context, Outcome, RunError};
use crate::config::{key, ConfigError, KeySpec, Resolved};
use crate::output::{color, num, Svg, Table};
use crate::pool::par_map;
use dvdp_core::flow::tangency::{
    analytic_count, assemble_curves, intersections, line_polyline, tangency_sample, TangencySample, TraceSpec,
};
use dvdp_core::flow::ConnectionKind;
use dvdp_core::melnikov::{analytic_tangency_lines, mirror_lines};

pub(super) const DIAGRAM_KEYS: &[KeySpec] = &[
    key("eps", "0.12"),
    key("p1", "0.78"),
    key("p4", "4"),
    key("p2_max", "3"),
    key("p2_n", "31"),
    key("p3_max", "3"),
    key("coef", "published"),
    key("analytic", "true"),
    key("numeric", "false"),
    key("mirror", "false"),
    key("kind", "big-right"),
    key("phases", "32"),
];

fn kind(cfg: &Resolved) -> Result<ConnectionKind, ConfigError> {
    match cfg.raw("kind") {
        "big-right" => Ok(ConnectionKind::BigLoopRight),
        "big-left" => Ok(ConnectionKind::BigLoopLeft),
        "right" => Ok(ConnectionKind::RightLoop),
        "left" => Ok(ConnectionKind::LeftLoop),
        k => Err(ConfigError::Value { key: "kind".into(), message: format!("expected big-right|big-left|right|left, got `{k}`") }),
    }
}

pub(super) fn diagram(ctx: &mut Context) -> Result<Outcome, RunError> {
    let cfg = &ctx.cfg;
    let (eps, p1, p4) = (cfg.positive("eps")?, cfg.f64("p1")?, cfg.positive("p4")?);
    let p2_max = cfg.positive("p2_max")?;
    let p3_max = cfg.positive("p3_max")?;
    let coef = coefficient(cfg)?;
    let mirror = cfg.bool("mirror")?;
    let mut polylines: Vec<(String, Vec<(f64, f64)>)> = Vec::new();
    let mut summary = Vec::new();
    let mut failures = 0;

    if cfg.bool("analytic")? {
        let mut lines = analytic_tangency_lines(p1, p4, p2_max, coef);
        if mirror {
            let m = mirror_lines(&lines);
            lines.extend(m);
        }
        let mut t = Table::new(&["label", "loop", "slope", "intercept", "p2_from", "p2_to"]);
        for l in &lines {
            t.push(vec![
                l.label.clone(),
                format!("{:?}", l.side).to_lowercase(),
                num(l.slope),
                num(l.intercept),
                num(l.p2_range.0),
                num(l.p2_range.1),
            ]);
            summary.push(format!("{}: p3 = {:.6} {:+.6}·p2 on [{:.4}, {:.4}]", l.label, l.intercept, l.slope, l.p2_range.0, l.p2_range.1));
            polylines.push((l.label.clone(), line_polyline(l, 2)));
        }
        ctx.sink.table("analytic_lines.csv", &t, &ctx.cfg)?;
    }

    if ctx.cfg.bool("numeric")? {
        let kind = kind(&ctx.cfg)?;
        let mut spec = TraceSpec::new(eps, p1, p4, kind);
        spec.p3_max = p3_max;
        spec.splitting.phases = ctx.cfg.usize("phases")?.max(4);
        let n = ctx.cfg.usize("p2_n")?;
        if n < 2 {
            return Err(ConfigError::Invalid("p2_n must be at least 2".into()).into());
        }
        let grid: Vec<f64> = (0..n).map(|i| p2_max * i as f64 / (n - 1) as f64).collect();
        let results = par_map(&grid, ctx.workers, |&p2| tangency_sample(&spec, p2));
        let mut st = Table::new(&["p2", "status", "p3"]);
        let mut samples = Vec::new();
        for (&p2, r) in grid.iter().zip(results) {
            let (status, p3) = match &r {
                Ok(TangencySample::Found { p3, .. }) => ("found".to_string(), num(*p3)),
                Ok(TangencySample::OnConnection { .. }) => ("on_connection".into(), num(0.0)),
                Ok(TangencySample::Beyond { .. }) => ("beyond".into(), String::new()),
                Ok(TangencySample::Undefined { .. }) => ("undefined".into(), String::new()),
                Err(e) => {
                    failures += 1;
                    st.failures += 1;
                    (format!("error: {e}"), String::new())
                }
            };
            st.push(vec![num(p2), status, p3]);
            // a failed sample cuts the curve like an undefined one
            samples.push(r.unwrap_or(TangencySample::Undefined { p2 }));
        }
        ctx.sink.table("tangency_samples.csv", &st, &ctx.cfg)?;

        let curves = assemble_curves(&spec, &samples, analytic_count(p1, p4) + 1);
        let mut ct = Table::new(&["label", "kind", "p2", "p3"]);
        for c in &curves {
            for &(p2, p3) in &c.points {
                ct.push(vec![c.label.clone(), c.kind.label().into(), num(p2), num(p3)]);
            }
            summary.push(format!("{} ({}): {} points", c.label, c.kind, c.points.len()));
            polylines.push((c.label.clone(), c.points.clone()));
            if mirror {
                // p2 -> -p2 maps each connection onto its mirror image
                let pts = c.points.iter().map(|&(a, b)| (-a, b)).collect();
                polylines.push((format!("{}'", c.label), pts));
            }
        }
        ctx.sink.table("numeric_curves.csv", &ct, &ctx.cfg)?;
    }

    let cross = intersections(&polylines);
    let mut it = Table::new(&["a", "b", "p2", "p3"]);
    for c in &cross {
        it.push(vec![c.a.clone(), c.b.clone(), num(c.p2), num(c.p3)]);
    }
    ctx.sink.table("intersections.csv", &it, &ctx.cfg)?;
    summary.push(format!("{} intersections", cross.len()));

    let x0 = if mirror { -p2_max } else { 0.0 };
    let mut svg = Svg::new(&format!("tangency lines, eps = {eps}, p1 = {p1}, p4 = {p4}"), (x0, p2_max), (0.0, p3_max));
    for (i, (label, pts)) in polylines.iter().enumerate() {
        svg.polyline(pts, color(i), Some(label));
    }
    let pts: Vec<(f64, f64)> = cross.iter().map(|c| (c.p2, c.p3)).collect();
    svg.points(&pts, "black", 3.0);
    ctx.sink.svg("diagram.svg", &svg)?;
    Ok(Outcome { summary, failures })
}
