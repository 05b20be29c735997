//! CSV tables with a provenance header, and minimal SVG plots.

use crate::config::Resolved;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Round-trip formatting: 17 significant digits.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// Rows of string cells under one header. Rows with a failure are kept
/// and counted; the header then records the run as partial.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub failures: usize,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new(), failures: 0 }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write(&self, path: &Path, cfg: &Resolved) -> std::io::Result<()> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(f, "# dvdp-survey {VERSION}")?;
        writeln!(f, "# command = {}", cfg.command)?;
        for line in cfg.echo() {
            writeln!(f, "# {line}")?;
        }
        if self.failures > 0 {
            writeln!(f, "# status = partial ({} failed rows)", self.failures)?;
        } else {
            writeln!(f, "# status = complete")?;
        }
        let mut w = csv::Writer::from_writer(f);
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        w.flush()?;
        Ok(())
    }
}

const PALETTE: [&str; 10] =
    ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"];

pub fn color(i: usize) -> &'static str {
    PALETTE[i % PALETTE.len()]
}

/// A plot in data coordinates, drawn as polylines and markers only.
#[derive(Debug, Clone)]
pub struct Svg {
    title: String,
    x: (f64, f64),
    y: (f64, f64),
    body: String,
    legend: Vec<(String, &'static str)>,
}

const W: f64 = 800.0;
const H: f64 = 600.0;
const M: f64 = 50.0;

impl Svg {
    pub fn new(title: &str, x: (f64, f64), y: (f64, f64)) -> Self {
        let pad = |(a, b): (f64, f64)| if a < b { (a, b) } else { (a - 0.5, b + 0.5) };
        Self { title: title.to_string(), x: pad(x), y: pad(y), body: String::new(), legend: Vec::new() }
    }

    /// Bounds of a point cloud, with a small margin.
    pub fn bounds<'a>(pts: impl IntoIterator<Item = &'a (f64, f64)>) -> ((f64, f64), (f64, f64)) {
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for &(x, y) in pts {
            if x.is_finite() && y.is_finite() {
                x0 = x0.min(x);
                x1 = x1.max(x);
                y0 = y0.min(y);
                y1 = y1.max(y);
            }
        }
        if !x0.is_finite() {
            return ((-1.0, 1.0), (-1.0, 1.0));
        }
        let mx = 0.05 * (x1 - x0).max(1e-9);
        let my = 0.05 * (y1 - y0).max(1e-9);
        ((x0 - mx, x1 + mx), (y0 - my, y1 + my))
    }

    fn px(&self, x: f64) -> f64 {
        M + (x - self.x.0) / (self.x.1 - self.x.0) * (W - 2.0 * M)
    }

    fn py(&self, y: f64) -> f64 {
        H - M - (y - self.y.0) / (self.y.1 - self.y.0) * (H - 2.0 * M)
    }

    pub fn polyline(&mut self, pts: &[(f64, f64)], stroke: &'static str, label: Option<&str>) {
        if pts.len() < 2 {
            return;
        }
        let mut d = String::new();
        for &(x, y) in pts {
            let _ = write!(d, "{:.2},{:.2} ", self.px(x), self.py(y));
        }
        let _ = writeln!(self.body, r#"<polyline fill="none" stroke="{stroke}" stroke-width="1.2" points="{}"/>"#, d.trim_end());
        if let Some(l) = label {
            self.legend.push((l.to_string(), stroke));
        }
    }

    pub fn points(&mut self, pts: &[(f64, f64)], fill: &'static str, r: f64) {
        for &(x, y) in pts {
            if x.is_finite() && y.is_finite() {
                let _ = writeln!(self.body, r#"<circle cx="{:.2}" cy="{:.2}" r="{r}" fill="{fill}"/>"#, self.px(x), self.py(y));
            }
        }
    }

    /// Filled square cell centred at (x, y) with data-size (w, h).
    pub fn cell(&mut self, x: f64, y: f64, w: f64, h: f64, fill: &'static str) {
        let (x0, y0) = (self.px(x - 0.5 * w), self.py(y + 0.5 * h));
        let (x1, y1) = (self.px(x + 0.5 * w), self.py(y - 0.5 * h));
        let _ = writeln!(
            self.body,
            r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{fill}" fill-opacity="0.5"/>"#,
            x0,
            y0,
            x1 - x0,
            y1 - y0
        );
    }

    pub fn label(&mut self, x: f64, y: f64, text: &str) {
        let _ = writeln!(self.body, r#"<text x="{:.2}" y="{:.2}" font-size="11">{}</text>"#, self.px(x), self.py(y), escape(text));
    }

    pub fn legend_entry(&mut self, text: &str, c: &'static str) {
        self.legend.push((text.to_string(), c));
    }

    /// Render; `timestamp` adds a generation comment (the only
    /// nondeterministic byte range).
    pub fn render(&self, timestamp: bool) -> String {
        let mut s = String::new();
        let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#);
        let _ = writeln!(s, "<!-- dvdp-survey {VERSION} -->");
        if timestamp {
            let secs = std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0);
            let _ = writeln!(s, "<!-- generated at unix time {secs} -->");
        }
        let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<rect x="{M}" y="{M}" width="{}" height="{}" fill="none" stroke="black"/>"#,
            W - 2.0 * M,
            H - 2.0 * M
        );
        let _ = writeln!(s, r#"<text x="{M}" y="30" font-size="14">{}</text>"#, escape(&self.title));
        let _ = writeln!(
            s,
            r#"<text x="{M}" y="{}" font-size="10">x: [{:.4}, {:.4}]  y: [{:.4}, {:.4}]</text>"#,
            H - 15.0,
            self.x.0,
            self.x.1,
            self.y.0,
            self.y.1
        );
        // axes through zero when visible
        if self.x.0 < 0.0 && self.x.1 > 0.0 {
            let x = self.px(0.0);
            let _ = writeln!(s, r##"<line x1="{x:.2}" y1="{M}" x2="{x:.2}" y2="{}" stroke="#ccc"/>"##, H - M);
        }
        if self.y.0 < 0.0 && self.y.1 > 0.0 {
            let y = self.py(0.0);
            let _ = writeln!(s, r##"<line x1="{M}" y1="{y:.2}" x2="{}" y2="{y:.2}" stroke="#ccc"/>"##, W - M);
        }
        s.push_str(&self.body);
        for (i, (t, c)) in self.legend.iter().enumerate() {
            let y = M + 15.0 + 14.0 * i as f64;
            let _ = writeln!(s, r#"<text x="{}" y="{y:.0}" font-size="11" fill="{c}">{}</text>"#, W - M - 150.0, escape(t));
        }
        s.push_str("</svg>\n");
        s
    }

    pub fn write(&self, path: &Path, timestamp: bool) -> std::io::Result<()> {
        std::fs::write(path, self.render(timestamp))
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Output directory plus the list of files written so far.
#[derive(Debug, Clone)]
pub struct Sink {
    pub dir: PathBuf,
    pub timestamp: bool,
    pub written: Vec<PathBuf>,
}

impl Sink {
    pub fn new(dir: impl Into<PathBuf>, timestamp: bool) -> std::io::Result<Self> {
        let dir = dir.into();
        std::fs::create_dir_all(&dir)?;
        Ok(Self { dir, timestamp, written: Vec::new() })
    }

    pub fn table(&mut self, name: &str, t: &Table, cfg: &Resolved) -> std::io::Result<()> {
        let p = self.dir.join(name);
        t.write(&p, cfg)?;
        self.written.push(p);
        Ok(())
    }

    pub fn svg(&mut self, name: &str, s: &Svg) -> std::io::Result<()> {
        let p = self.dir.join(name);
        s.write(&p, self.timestamp)?;
        self.written.push(p);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for v in [0.1, -1.0 / 3.0, 1e-300, 123456.789] {
            assert_eq!(num(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn svg_timestamp_is_the_only_difference() {
        let mut s = Svg::new("t", (0.0, 1.0), (0.0, 1.0));
        s.polyline(&[(0.0, 0.0), (1.0, 1.0)], color(0), Some("a<b"));
        let a = s.render(false);
        assert_eq!(a, s.render(false));
        assert!(a.contains("a&lt;b"));
        let b = s.render(true);
        let stripped: String = b.lines().filter(|l| !l.contains("generated at")).map(|l| format!("{l}\n")).collect();
        assert_eq!(stripped, a);
    }
}
