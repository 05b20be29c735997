use std::collections::BTreeMap;
use std::path::Path;
use std::process::{Command, Output};

fn survey(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dvdp-survey"))
        .arg("--no-timestamp")
        .arg("--out")
        .arg(out)
        .args(args)
        .env_remove("DVDP_WORKERS")
        .output()
        .expect("binary runs")
}

fn ok(out: &Path, args: &[&str]) -> String {
    let o = survey(out, args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout).unwrap()
}

/// Data rows (after the `#` header and the column names) as string maps.
fn rows(path: &Path) -> Vec<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path).unwrap();
    let body: String = text.lines().filter(|l| !l.starts_with('#')).map(|l| format!("{l}\n")).collect();
    let mut r = csv::Reader::from_reader(body.as_bytes());
    let header = r.headers().unwrap().clone();
    r.records().map(|rec| header.iter().zip(rec.unwrap().iter()).map(|(h, v)| (h.to_string(), v.to_string())).collect()).collect()
}

fn files(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap())
        })
        .collect()
}

#[test]
fn empty_invocation_is_a_usage_error() {
    let o = Command::new(env!("CARGO_BIN_EXE_dvdp-survey")).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_errors_exit_with_two() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(survey(d.path(), &["cycles", "--set", "bogus=1"]).status.code(), Some(2));
    assert_eq!(survey(d.path(), &["census-plane", "--set", "p1_n=1"]).status.code(), Some(2));
    assert_eq!(survey(d.path(), &["--repro", "fig99"]).status.code(), Some(2));
    assert_eq!(survey(d.path(), &["melnikov", "--set", "coef=maybe"]).status.code(), Some(2));
}

#[test]
fn config_file_and_overrides_layer() {
    let d = tempfile::tempdir().unwrap();
    let cfg = d.path().join("run.cfg");
    std::fs::write(&cfg, "# cycles at a D8 point\np1 = 0.76\np2 = 0.3\n").unwrap();
    let out = d.path().join("o");
    ok(&out, &["cycles", "--config", cfg.to_str().unwrap(), "--set", "p2=0.1"]);
    let text = std::fs::read_to_string(out.join("cycles.csv")).unwrap();
    assert!(text.contains("# p2 = 0.1\n"), "{text}");
    assert!(text.contains("# status = complete\n"));
    assert!(!text.contains("workers"), "execution keys stay out of the echo");
}

#[test]
fn identical_configs_give_identical_bytes() {
    let d = tempfile::tempdir().unwrap();
    let args = ["census-plane", "--set", "p1_n=15", "--set", "p2_n=9"];
    ok(&d.path().join("a"), &args);
    ok(&d.path().join("b"), &args);
    assert_eq!(files(&d.path().join("a")), files(&d.path().join("b")));
}

#[test]
fn worker_count_does_not_change_output() {
    let d = tempfile::tempdir().unwrap();
    for args in [
        &["census-plane", "--set", "p1_n=13", "--set", "p2_n=7"][..],
        &["resonance", "--portrait", "--set", "portrait_steps=400"][..],
        &["poincare", "--set", "iterations=10"][..],
        &["separatrix", "--set", "arclength=2", "--set", "phases=16"][..],
    ] {
        let (a, b) = (d.path().join(format!("{}-1", args[0])), d.path().join(format!("{}-4", args[0])));
        ok(&a, &[args, &["--workers", "1"]].concat());
        ok(&b, &[args, &["--workers", "4"]].concat());
        assert_eq!(files(&a), files(&b), "{args:?}");
    }
}

#[test]
fn single_cell_at_the_two_right_cycle_probe() {
    let d = tempfile::tempdir().unwrap();
    // probe of the (2,0,0) domain
    let (p1, p2) = dvdp_core::autonomous::locate_domain_samples().unwrap()[&dvdp_core::autonomous::DomainLabel::D12];
    let (p1, p2) = (p1.to_string(), p2.to_string());
    let set = |k: &str, v: &str| format!("{k}={v}");
    ok(
        d.path(),
        &[
            "census-plane",
            "--set",
            &set("p1_min", &p1),
            "--set",
            &set("p1_max", &p1),
            "--set",
            "p1_n=1",
            "--set",
            &set("p2_min", &p2),
            "--set",
            &set("p2_max", &p2),
            "--set",
            "p2_n=1",
        ],
    );
    let r = rows(&d.path().join("census_plane.csv"));
    assert_eq!(r.len(), 1);
    assert_eq!((r[0]["i"].as_str(), r[0]["j"].as_str(), r[0]["k"].as_str()), ("2", "0", "0"));
    assert_eq!(r[0]["domain"], "D12");
}

#[test]
fn lower_half_plane_mirrors_the_upper() {
    let d = tempfile::tempdir().unwrap();
    let (up, down) = (d.path().join("up"), d.path().join("down"));
    let grid = ["--set", "p1_min=-1", "--set", "p1_max=1.4", "--set", "p1_n=25", "--set", "p2_n=6"];
    ok(&up, &[&["census-plane", "--set", "p2_min=0.05", "--set", "p2_max=1.3"][..], &grid].concat());
    ok(&down, &[&["census-plane", "--set", "p2_min=-1.3", "--set", "p2_max=-0.05"][..], &grid].concat());
    let (u, w) = (rows(&up.join("census_plane.csv")), rows(&down.join("census_plane.csv")));
    assert_eq!(u.len(), w.len());
    let key = |r: &BTreeMap<String, String>| (r["p1"].parse::<f64>().unwrap().to_bits(), (r["p2"].parse::<f64>().unwrap().abs() * 1e9).round() as i64);
    let lower: BTreeMap<_, _> = w.iter().map(|r| (key(r), r)).collect();
    for r in &u {
        let m = lower[&key(r)];
        assert_eq!((&r["i"], &r["j"], &r["k"]), (&m["j"], &m["i"], &m["k"]));
        if r["domain"] != "?" {
            assert_eq!(format!("{}'", r["domain"]), m["domain"]);
        }
    }
}

fn zone<'a>(r: &'a [BTreeMap<String, String>], dom: &str, p: &str) -> &'a BTreeMap<String, String> {
    r.iter().find(|z| z["domain"] == dom && z["p"] == p && z["q"] == "1").unwrap_or_else(|| panic!("{dom} {p}:1 missing"))
}

#[test]
fn resonance_presets_classify_their_zones() {
    let d = tempfile::tempdir().unwrap();
    for (preset, dom, p, class) in [
        ("fig6a", "G1+", "2", "IMPASSABLE"),
        ("fig6b", "G1+", "2", "PARTIALLY_PASSABLE"),
        ("fig6c", "G2", "3", "IMPASSABLE"),
        ("fig6d", "G2", "3", "PARTIALLY_PASSABLE"),
    ] {
        let out = d.path().join(preset);
        ok(&out, &["--repro", preset]);
        let r = rows(&out.join("resonance.csv"));
        assert_eq!(zone(&r, dom, p)["class"], class, "{preset}");
    }
}

#[test]
fn fast_forcing_leaves_the_wells_without_resonances() {
    let d = tempfile::tempdir().unwrap();
    // every ω = q·p4/p >= 10/6 exceeds the inner-orbit bound √2
    ok(d.path(), &["resonance", "--set", "p4=10", "--set", "p_max=6"]);
    let r = rows(&d.path().join("resonance.csv"));
    assert!(r.iter().all(|z| z["domain"] == "G2"), "{r:?}");
    assert!(!r.is_empty());
}

#[test]
fn melnikov_preset_reports_the_left_loop_balance() {
    let d = tempfile::tempdir().unwrap();
    let s = ok(d.path(), &["melnikov", "--repro", "fig8b"]);
    assert!(s.contains("left-loop tangency at p3 = 1.70"), "{s}");
    let r = rows(&d.path().join("melnikov.csv"));
    assert_eq!(r.len(), 256);
}

#[test]
fn separatrix_preset_finds_the_big_loop_crossing() {
    let d = tempfile::tempdir().unwrap();
    let s = ok(d.path(), &["--repro", "fig9a", "--set", "phases=32"]);
    assert!(s.contains("BIG_LOOP_RIGHT: splitting TRANSVERSAL"), "{s}");
    let r = rows(&d.path().join("crossings.csv"));
    assert!(r.iter().any(|c| c["kind"] == "BIG_LOOP_RIGHT"));
}

#[test]
fn analytic_diagram_at_the_coincidence_value() {
    let d = tempfile::tempdir().unwrap();
    ok(d.path(), &["--repro", "fig13"]);
    let r = rows(&d.path().join("analytic_lines.csv"));
    assert_eq!(r.len(), 2);
    assert!(r.iter().all(|l| l["label"] == "N1"));
    assert_eq!(r[0]["slope"].parse::<f64>().unwrap(), r[1]["slope"].parse::<f64>().unwrap());
    assert_eq!(r[0]["intercept"].parse::<f64>().unwrap(), r[1]["intercept"].parse::<f64>().unwrap());
}

#[test]
fn portrait_of_a_domain_probe() {
    let d = tempfile::tempdir().unwrap();
    let s = ok(d.path(), &["--repro", "fig4l", "--set", "grid=2", "--set", "t_max=20"]);
    assert!(s.contains("census type (2,0,0)"), "{s}");
    assert!(d.path().join("portrait.svg").exists());
}

#[test]
fn presets_are_listed() {
    let o = Command::new(env!("CARGO_BIN_EXE_dvdp-survey")).arg("presets").output().unwrap();
    let s = String::from_utf8(o.stdout).unwrap();
    assert!(s.lines().count() >= 40);
    assert!(s.contains("fig14    diagram"));
}
