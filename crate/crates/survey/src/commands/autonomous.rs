//! census-plane, cycles

use super::{Context, Outcome, RunError};
use crate::config::{key, KeySpec};
use crate::output::{color, num, Svg, Table};
use crate::pool::par_map;
use dvdp_core::autonomous::{
    bifurcation_lines, census_type, find_cycles, label_domain, CensusType, LineShape, Multiplicity,
};
use std::collections::BTreeMap;

pub(super) const CENSUS_KEYS: &[KeySpec] = &[
    key("p1_min", "-1.5"),
    key("p1_max", "1.5"),
    key("p1_n", "121"),
    key("p2_min", "0"),
    key("p2_max", "2"),
    key("p2_n", "81"),
];

pub(super) const CYCLES_KEYS: &[KeySpec] = &[key("p1", "0.76"), key("p2", "0.1")];

/// Domain name, primed in the lower half plane.
fn domain_name(p1: f64, p2: f64, t: CensusType) -> String {
    if p2 >= 0.0 {
        label_domain(p1, p2, t).map_or_else(|| "?".into(), |d| d.to_string())
    } else {
        label_domain(p1, -p2, t.mirrored()).map_or_else(|| "?".into(), |d| format!("{d}'"))
    }
}

pub(super) fn census_plane(ctx: &mut Context) -> Result<Outcome, RunError> {
    let p1s = ctx.cfg.axis("p1")?;
    let p2s = ctx.cfg.axis("p2")?;
    let cells: Vec<(f64, f64)> = p2s.iter().flat_map(|&p2| p1s.iter().map(move |&p1| (p1, p2))).collect();
    let types = par_map(&cells, ctx.workers, |&(p1, p2)| census_type(p1, p2));

    let mut table = Table::new(&["p1", "p2", "i", "j", "k", "type", "domain"]);
    let mut palette: BTreeMap<CensusType, usize> = BTreeMap::new();
    for (&(p1, p2), t) in cells.iter().zip(&types) {
        let n = palette.len();
        palette.entry(*t).or_insert(n);
        table.push(vec![
            num(p1),
            num(p2),
            t.i.to_string(),
            t.j.to_string(),
            t.k.to_string(),
            t.to_string(),
            domain_name(p1, p2, *t),
        ]);
    }
    ctx.sink.table("census_plane.csv", &table, &ctx.cfg)?;

    // a single cell is drawn 0.1 wide
    let step = |v: &[f64]| if v.len() > 1 { (v[v.len() - 1] - v[0]) / (v.len() - 1) as f64 } else { 0.1 };
    let (dx, dy) = (step(&p1s), step(&p2s));
    let (x0, x1) = (p1s[0] - 0.5 * dx, *p1s.last().unwrap() + 0.5 * dx);
    let (y0, y1) = (p2s[0] - 0.5 * dy, *p2s.last().unwrap() + 0.5 * dy);
    let mut svg = Svg::new("cycle census on (p1, p2)", (x0, x1), (y0, y1));
    for (&(p1, p2), t) in cells.iter().zip(&types) {
        svg.cell(p1, p2, dx, dy, color(palette[t]));
    }
    for (t, i) in &palette {
        svg.legend_entry(&t.to_string(), color(*i));
    }
    for line in bifurcation_lines()? {
        for mirror in [1.0, -1.0] {
            let pts: Vec<(f64, f64)> = match &line.shape {
                LineShape::Linear { a, b, c } if *a != 0.0 => (0..=200)
                    .map(|i| {
                        let p2 = mirror * (y0.abs().max(y1.abs())) * i as f64 / 200.0;
                        // mirror maps the line for p2 to the one for -p2
                        (-(b * p2 * mirror + c) / a, p2)
                    })
                    .collect(),
                LineShape::Linear { b, c, .. } => vec![(x0, -c / b * mirror), (x1, -c / b * mirror)],
                LineShape::Polyline(p) => p.iter().map(|&(a, b)| (a, mirror * b)).collect(),
            };
            let pts: Vec<(f64, f64)> = pts
                .into_iter()
                .filter(|&(a, b)| a >= x0 && a <= x1 && b >= y0 && b <= y1)
                .collect();
            svg.polyline(&pts, "black", None);
            if let (Some(&(a, b)), 1.0) = (pts.last(), mirror) {
                svg.label(a, b, line.name.label());
            }
        }
    }
    ctx.sink.svg("census_plane.svg", &svg)?;
    let mut summary = vec![format!("{} cells, {} census types", cells.len(), palette.len())];
    summary.extend(palette.keys().map(|t| format!("  type {t}")));
    Ok(Outcome { summary, failures: 0 })
}

pub(super) fn cycles(ctx: &mut Context) -> Result<Outcome, RunError> {
    let p1 = ctx.cfg.f64("p1")?;
    let p2 = ctx.cfg.f64("p2")?;
    let census = find_cycles(p1, p2);
    let mut table = Table::new(&["domain", "rho", "h", "multiplicity", "stability"]);
    for c in &census.cycles {
        table.push(vec![
            c.domain.name().to_string(),
            num(c.rho),
            num(c.h),
            match c.multiplicity {
                Multiplicity::Simple => "simple",
                Multiplicity::Double => "double",
            }
            .to_string(),
            match c.stable {
                Some(true) => "stable",
                Some(false) => "unstable",
                None => "semi-stable",
            }
            .to_string(),
        ]);
    }
    ctx.sink.table("cycles.csv", &table, &ctx.cfg)?;
    let t = census.counts();
    let mut summary = vec![format!("type {t}, domain {}", domain_name(p1, p2, t))];
    if census.near_separatrix {
        summary.push("warning: a cycle lies within 1e-4 of the separatrix in rho".into());
    }
    Ok(Outcome { summary, failures: 0 })
}
