//! poincare, separatrix, portrait

use super::{params, Context, Outcome, RunError};
use crate::config::{key, ConfigError, KeySpec, Resolved};
use crate::output::{color, num, Svg, Table};
use crate::pool::par_map;
use dvdp_core::autonomous::{census_type, locate_domain_samples, DomainLabel};
use dvdp_core::flow::connection::origin_eigenvectors;
use dvdp_core::flow::manifold::{polyline_crossings, GrowthOptions};
use dvdp_core::flow::ode::{find_crossing, trajectory, Crossing};
use dvdp_core::flow::splitting::SplittingOptions;
use dvdp_core::flow::{
    find_saddle, grow_manifold, phase_splitting, Branch, ForcedField, ManifoldBranch, State,
    StroboscopicMap, Tolerance, Variant,
};
use dvdp_core::flow::connection::ALL_KINDS;
use dvdp_core::{Error, Params};

pub(super) const POINCARE_KEYS: &[KeySpec] = &[
    key("eps", "0.01"),
    key("p1", "-0.221"),
    key("p2", "1.22"),
    key("p3", "1"),
    key("p4", "2.782"),
    key("x_min", "-1.6"),
    key("x_max", "1.6"),
    key("x_n", "9"),
    key("y_min", "-1"),
    key("y_max", "1"),
    key("y_n", "5"),
    key("iterations", "200"),
    key("tol", "1e-9"),
    key("escape", "4"),
    key("variant", "original"),
];

pub(super) const SEPARATRIX_KEYS: &[KeySpec] = &[
    key("eps", "0.1"),
    key("p1", "0.78549"),
    key("p2", "1.6"),
    key("p3", "1.02"),
    key("p4", "4"),
    key("variant", "transformed"),
    key("delta", "1e-7"),
    key("spacing", "0.01"),
    key("arclength", "6"),
    key("escape", "4"),
    key("tol", "1e-11"),
    key("phases", "64"),
];

pub(super) const PORTRAIT_KEYS: &[KeySpec] = &[
    key("domain", "D1"),
    key("eps", "0.1"),
    key("p1", ""),
    key("p2", ""),
    key("grid", "5"),
    key("t_max", "80"),
    key("escape", "3"),
];

fn variant(cfg: &Resolved) -> Result<Variant, ConfigError> {
    match cfg.raw("variant") {
        "original" => Ok(Variant::Original),
        "transformed" => Ok(Variant::Transformed),
        v => Err(ConfigError::Value { key: "variant".into(), message: format!("expected original|transformed, got `{v}`") }),
    }
}

fn tolerance(cfg: &Resolved) -> Result<Tolerance, ConfigError> {
    let t = cfg.positive("tol")?;
    Ok(Tolerance::new(t, t))
}

pub(super) fn poincare(ctx: &mut Context) -> Result<Outcome, RunError> {
    let prm = params(&ctx.cfg)?;
    let map = StroboscopicMap::new(prm, variant(&ctx.cfg)?, tolerance(&ctx.cfg)?)?;
    let xs = ctx.cfg.axis("x")?;
    let ys = ctx.cfg.axis("y")?;
    let n = ctx.cfg.usize("iterations")?;
    let escape = ctx.cfg.positive("escape")?;
    let seeds: Vec<State> = ys.iter().flat_map(|&y| xs.iter().map(move |&x| [x, y])).collect();

    // one orbit per seed; stops at escape or the first integrator failure
    let orbits = par_map(&seeds, ctx.workers, |&s| {
        let mut pts = vec![s];
        let mut cur = s;
        for _ in 0..n {
            match map.apply(cur) {
                Ok(next) if next[0].abs() > escape || next[1].abs() > escape => return (pts, "escaped".to_string()),
                Ok(next) => {
                    pts.push(next);
                    cur = next;
                }
                Err(e) => return (pts, format!("error: {e}")),
            }
        }
        (pts, "ok".to_string())
    });

    let mut table = Table::new(&["seed", "iterate", "x", "y", "status"]);
    let mut svg = Svg::new(&format!("stroboscopic map, {} form", map.field().variant.name()), (-escape.min(2.0), escape.min(2.0)), (-escape.min(1.5), escape.min(1.5)));
    let (mut escaped, mut failed) = (0, 0);
    for (i, (pts, status)) in orbits.iter().enumerate() {
        if status == "escaped" {
            escaped += 1;
        } else if status != "ok" {
            failed += 1;
        }
        for (k, p) in pts.iter().enumerate() {
            table.push(vec![i.to_string(), k.to_string(), num(p[0]), num(p[1]), status.clone()]);
        }
        let tail: Vec<(f64, f64)> = pts.iter().skip(pts.len() / 4).map(|p| (p[0], p[1])).collect();
        svg.points(&tail, color(i), 1.2);
    }
    table.failures = failed;
    ctx.sink.table("poincare.csv", &table, &ctx.cfg)?;
    ctx.sink.svg("poincare.svg", &svg)?;
    Ok(Outcome {
        summary: vec![format!("{} seeds, {n} iterations: {escaped} escaped, {failed} failed", seeds.len())],
        failures: failed,
    })
}

pub(super) fn separatrix(ctx: &mut Context) -> Result<Outcome, RunError> {
    let prm = params(&ctx.cfg)?;
    let var = variant(&ctx.cfg)?;
    let map = StroboscopicMap::new(prm, var, tolerance(&ctx.cfg)?)?;
    let opts = GrowthOptions {
        delta: ctx.cfg.positive("delta")?,
        spacing: ctx.cfg.positive("spacing")?,
        arclength: ctx.cfg.positive("arclength")?,
        escape_radius: ctx.cfg.positive("escape")?,
        ..GrowthOptions::default()
    };
    let fp = find_saddle(&map)?;
    let mut summary = vec![format!(
        "saddle at ({:.3e}, {:.3e}), residual {:.1e}; multipliers {:.6} / {:.6e}",
        fp.location[0], fp.location[1], fp.residual, fp.eigenvalues.0, fp.eigenvalues.1
    )];

    let jobs = [(Branch::Unstable, 1.0), (Branch::Unstable, -1.0), (Branch::Stable, 1.0), (Branch::Stable, -1.0)];
    let grown = par_map(&jobs, ctx.workers, |&(b, s)| grow_manifold(&map, &fp, b, s, &opts));
    let mut failures = 0;
    let mut branches: Vec<ManifoldBranch> = Vec::new();
    let mut table = Table::new(&["branch", "sign", "index", "sigma", "x", "y"]);
    for ((b, s), g) in jobs.iter().zip(grown) {
        match g {
            Ok(m) => {
                for (i, (p, sg)) in m.points.iter().zip(&m.sigma).enumerate() {
                    table.push(vec![b.name().into(), num(*s), i.to_string(), num(*sg), num(p[0]), num(p[1])]);
                }
                summary.push(format!("{} {:+}: {} points, arclength {:.3}", b.name(), s, m.points.len(), m.arclength));
                branches.push(m);
            }
            Err(e) => {
                failures += 1;
                table.failures += 1;
                table.push(vec![b.name().into(), num(*s), String::new(), String::new(), String::new(), format!("error: {e}")]);
                summary.push(format!("{} {:+}: {e}", b.name(), s));
            }
        }
    }
    ctx.sink.table("manifolds.csv", &table, &ctx.cfg)?;

    let find = |b: Branch, s: f64| branches.iter().find(|m| m.branch == b && m.sign == s);
    let mut crossings = Table::new(&["kind", "x", "y"]);
    let mut split = Table::new(&["kind", "max", "min", "verdict"]);
    let field = ForcedField::new(prm, Variant::Transformed);
    let sopts = SplittingOptions { phases: ctx.cfg.usize("phases")?.max(4), ..SplittingOptions::default() };
    let profiles = par_map(&ALL_KINDS, ctx.workers, |&k| phase_splitting(&field, k, &sopts));
    for (&kind, prof) in ALL_KINDS.iter().zip(profiles) {
        if let (Some(u), Some(s)) = (find(Branch::Unstable, kind.unstable_sign()), find(Branch::Stable, kind.stable_sign())) {
            let c = polyline_crossings(&u.points, &s.points);
            for p in &c {
                crossings.push(vec![kind.label().into(), num(p[0]), num(p[1])]);
            }
            summary.push(format!("{kind}: {} manifold crossings", c.len()));
        }
        // the splitting is measured on the form where the origin is fixed
        let verdict = if var == Variant::Original && prm.p3 != 0.0 && prm.eps != 0.0 {
            split.push(vec![kind.label().into(), String::new(), String::new(), "N/A".into()]);
            "N/A (original form)".to_string()
        } else {
            match prof {
                Ok(p) => {
                    split.push(vec![kind.label().into(), num(p.max), num(p.min), p.verdict.label().into()]);
                    p.verdict.label().to_string()
                }
                Err(Error::SectionAmbiguity(m)) => {
                    split.push(vec![kind.label().into(), String::new(), String::new(), "UNDEFINED".into()]);
                    format!("UNDEFINED ({m})")
                }
                Err(e) => {
                    failures += 1;
                    split.failures += 1;
                    split.push(vec![kind.label().into(), String::new(), String::new(), format!("error: {e}")]);
                    format!("error: {e}")
                }
            }
        };
        summary.push(format!("{kind}: splitting {verdict}"));
    }
    ctx.sink.table("crossings.csv", &crossings, &ctx.cfg)?;
    ctx.sink.table("splitting.csv", &split, &ctx.cfg)?;

    let mut svg = Svg::new(&format!("invariant manifolds, {} form", var.name()), (-2.0, 2.0), (-1.5, 1.5));
    for m in &branches {
        let pts: Vec<(f64, f64)> = m.points.iter().map(|p| (p[0], p[1])).collect();
        let c = if m.branch == Branch::Unstable { "crimson" } else { "steelblue" };
        svg.polyline(&pts, c, Some(&format!("{} {:+}", m.branch.name(), m.sign)));
    }
    svg.points(&[(fp.location[0], fp.location[1])], "black", 3.0);
    ctx.sink.svg("manifolds.svg", &svg)?;
    Ok(Outcome { summary, failures })
}

/// Parameters of the portrait: the certified probe of `domain`, unless
/// p1/p2 are given explicitly.
fn portrait_point(cfg: &Resolved) -> Result<(String, f64, f64), RunError> {
    let explicit = !cfg.raw("p1").is_empty() || !cfg.raw("p2").is_empty();
    if explicit {
        return Ok(("custom".into(), cfg.f64("p1")?, cfg.f64("p2")?));
    }
    let name = cfg.raw("domain").to_string();
    let label = DomainLabel::ALL
        .into_iter()
        .find(|d| d.to_string() == name)
        .ok_or_else(|| ConfigError::Value { key: "domain".into(), message: format!("expected D1..D13, got `{name}`") })?;
    let (p1, p2) = locate_domain_samples()?[&label];
    Ok((name, p1, p2))
}

pub(super) fn portrait(ctx: &mut Context) -> Result<Outcome, RunError> {
    let (name, p1, p2) = portrait_point(&ctx.cfg)?;
    let eps = ctx.cfg.positive("eps")?;
    let g = ctx.cfg.usize("grid")?.max(1);
    let t_max = ctx.cfg.positive("t_max")?;
    let escape = ctx.cfg.positive("escape")?;
    let field = ForcedField::new(Params::autonomous(eps, p1, p2), Variant::Original);
    let f = |t: f64, s: &State| field.rhs(t, s);
    let tol = Tolerance::SWEEP;

    // seeds on both axes of a box around the figure-eight
    let mut seeds: Vec<(String, State, f64)> = Vec::new();
    for i in 0..g {
        let u = (i as f64 + 0.5) / g as f64;
        seeds.push((format!("orbit{}", seeds.len()), [-1.8 + 3.6 * u, 0.0], t_max));
        seeds.push((format!("orbit{}", seeds.len()), [0.0, -1.2 + 2.4 * u], t_max));
    }
    let (vu, vs) = origin_eigenvectors(eps, p1);
    for s in [1.0, -1.0] {
        seeds.push((format!("unstable{s:+}"), [s * 1e-6 * vu[0], s * 1e-6 * vu[1]], t_max));
        seeds.push((format!("stable{s:+}"), [s * 1e-6 * vs[0], s * 1e-6 * vs[1]], -t_max));
    }

    let runs = par_map(&seeds, ctx.workers, |(_, y0, t1)| -> dvdp_core::Result<Vec<(f64, State)>> {
        // stop at the box first so escaping orbits do not blow up
        let end = match find_crossing(&f, 0.0, *y0, *t1, tol, |_, _| 1.0, |_| false, |_, s| s[0].abs() > escape || s[1].abs() > escape)? {
            Crossing::Aborted { t, .. } | Crossing::NotFound { t, .. } | Crossing::Hit { t, .. } => t,
        };
        trajectory(&f, 0.0, *y0, end, tol)
    });

    let t = census_type(p1, p2);
    let mut table = Table::new(&["curve", "t", "x", "y"]);
    let mut svg = Svg::new(&format!("{name}: p1 = {p1:.4}, p2 = {p2:.4}, census {t}"), (-escape.min(2.0), escape.min(2.0)), (-escape.min(1.5), escape.min(1.5)));
    let mut failures = 0;
    for (i, ((label, _, _), run)) in seeds.iter().zip(runs).enumerate() {
        match run {
            Ok(pts) => {
                for (tt, s) in &pts {
                    table.push(vec![label.clone(), num(*tt), num(s[0]), num(s[1])]);
                }
                let line: Vec<(f64, f64)> = pts.iter().map(|(_, s)| (s[0], s[1])).collect();
                let c = if label.starts_with("unstable") {
                    "crimson"
                } else if label.starts_with("stable") {
                    "steelblue"
                } else {
                    color(i)
                };
                svg.polyline(&line, c, None);
            }
            Err(e) => {
                failures += 1;
                table.failures += 1;
                table.push(vec![label.clone(), String::new(), String::new(), format!("error: {e}")]);
            }
        }
    }
    ctx.sink.table("portrait.csv", &table, &ctx.cfg)?;
    ctx.sink.svg("portrait.svg", &svg)?;
    Ok(Outcome {
        summary: vec![format!("{name}: p1 = {p1:.10}, p2 = {p2:.10}, census type {t}")],
        failures,
    })
}
