//! Parameter sets of the reference figures, by name (`--repro fig6a`).

use crate::config::ConfigError;
use std::collections::BTreeMap;

/// (name, suggested command, key/value pairs)
type Preset = (&'static str, &'static str, &'static [(&'static str, &'static str)]);

const LOOP_P1: &str = "0.7551195621";
const LOOP_P2: &str = "0.053875454";

static PRESETS: &[Preset] = &[
    ("fig2", "census-plane", &[("p1_min", "-1.5"), ("p1_max", "1.5"), ("p2_min", "0"), ("p2_max", "2")]),
    ("fig3", "census-plane", &[("p1_min", "0.5"), ("p1_max", "1.1"), ("p2_min", "0"), ("p2_max", "1.4")]),
    ("fig4a", "portrait", &[("domain", "D1")]),
    ("fig4b", "portrait", &[("domain", "D2")]),
    ("fig4c", "portrait", &[("domain", "D3")]),
    ("fig4d", "portrait", &[("domain", "D4")]),
    ("fig4e", "portrait", &[("domain", "D5")]),
    ("fig4f", "portrait", &[("domain", "D6")]),
    ("fig4g", "portrait", &[("domain", "D7")]),
    ("fig4h", "portrait", &[("domain", "D8")]),
    ("fig4i", "portrait", &[("domain", "D9")]),
    ("fig4j", "portrait", &[("domain", "D10")]),
    ("fig4k", "portrait", &[("domain", "D11")]),
    ("fig4l", "portrait", &[("domain", "D12")]),
    ("fig4m", "portrait", &[("domain", "D13")]),
    ("fig5", "resonance", &[("eps", "0.1"), ("p1", "1"), ("p2", "-0.1"), ("p3", "0.5"), ("p4", "2.5"), ("portrait", "true")]),
    ("fig6a", "resonance", &[("eps", "0.1"), ("p1", "1"), ("p2", "-0.1"), ("p3", "0.5"), ("p4", "2.5")]),
    ("fig6b", "resonance", &[("eps", "0.1"), ("p1", "1"), ("p2", "-0.02"), ("p3", "0.5"), ("p4", "2.5")]),
    ("fig6c", "resonance", &[("eps", "0.1"), ("p1", "1"), ("p2", "0.03"), ("p3", "1"), ("p4", "3.36")]),
    ("fig6d", "resonance", &[("eps", "0.1"), ("p1", "1"), ("p2", "0.03"), ("p3", "1"), ("p4", "3")]),
    ("fig7", "poincare", &[("eps", "0.01"), ("p1", "-0.221"), ("p2", "1.22"), ("p3", "1"), ("p4", "2.782")]),
    ("fig8a", "separatrix", &[("eps", "0.3"), ("p1", LOOP_P1), ("p2", LOOP_P2), ("p3", "1.13"), ("p4", "4")]),
    ("fig8b", "separatrix", &[("eps", "0.3"), ("p1", LOOP_P1), ("p2", LOOP_P2), ("p3", "1.7"), ("p4", "4")]),
    ("fig8c", "separatrix", &[("eps", "0.3"), ("p1", LOOP_P1), ("p2", LOOP_P2), ("p3", "2.83"), ("p4", "4")]),
    ("fig9a", "separatrix", &[("eps", "0.1"), ("p1", "0.78549"), ("p2", "1.6"), ("p3", "1.02"), ("p4", "4")]),
    ("fig9b", "separatrix", &[("eps", "0.1"), ("p1", "0.78549"), ("p2", "-1.6"), ("p3", "1.02"), ("p4", "4")]),
    ("fig10a", "separatrix", &[("eps", "0.175"), ("p1", "0.78549"), ("p2", "1.6"), ("p3", "1.02"), ("p4", "4")]),
    ("fig10b", "separatrix", &[("eps", "0.175"), ("p1", "0.78549"), ("p2", "-1.6"), ("p3", "1.02"), ("p4", "4")]),
    ("fig10c", "separatrix", &[("eps", "0.175"), ("p1", "0.7850145"), ("p2", "0.5"), ("p3", "0.57"), ("p4", "4")]),
    ("fig10d", "separatrix", &[("eps", "0.175"), ("p1", "0.7850145"), ("p2", "-0.5"), ("p3", "0.57"), ("p4", "4")]),
    ("fig11a", "separatrix", &[("eps", "0.12"), ("p1", "0.7"), ("p2", "0.3"), ("p3", "3"), ("p4", "4")]),
    ("fig11b", "separatrix", &[("eps", "0.12"), ("p1", "0.86"), ("p2", "0.2"), ("p3", "4.55"), ("p4", "4")]),
    ("fig11c", "separatrix", &[("eps", "0.12"), ("p1", "0.6"), ("p2", "0.1"), ("p3", "2.34"), ("p4", "4")]),
    ("fig11d", "separatrix", &[("eps", "0.12"), ("p1", "0.86"), ("p2", "0.25"), ("p3", "2.96"), ("p4", "4")]),
    ("fig11e", "separatrix", &[("eps", "0.12"), ("p1", "1"), ("p2", "0.1"), ("p3", "2.32"), ("p4", "4")]),
    ("fig11f", "separatrix", &[("eps", "0.12"), ("p1", "0.7"), ("p2", "0"), ("p3", "2"), ("p4", "4")]),
    ("fig11g", "separatrix", &[("eps", "0.12"), ("p1", "0.8"), ("p2", "0.2"), ("p3", "3.34"), ("p4", "4")]),
    ("fig11h", "separatrix", &[("eps", "0.12"), ("p1", "0.9"), ("p2", "0"), ("p3", "1.98"), ("p4", "4")]),
    ("fig11i", "separatrix", &[("eps", "0.12"), ("p1", "0.65"), ("p2", "0.35"), ("p3", "2.82"), ("p4", "4")]),
    ("fig11j", "separatrix", &[("eps", "0.12"), ("p1", "0.9"), ("p2", "0.3"), ("p3", "2.97"), ("p4", "4")]),
    ("fig12", "diagram", &[("eps", "0.12"), ("p1", "0.78"), ("p4", "4")]),
    ("fig13", "diagram", &[("eps", "0.12"), ("p1", "0.8"), ("p4", "4")]),
    ("fig14", "diagram", &[("eps", "0.12"), ("p1", "0.82"), ("p4", "4")]),
];

pub fn names() -> impl Iterator<Item = (&'static str, &'static str)> {
    PRESETS.iter().map(|p| (p.0, p.1))
}

/// Key/value layer and the command the preset was made for.
pub fn lookup(name: &str) -> Result<(&'static str, BTreeMap<String, String>), ConfigError> {
    let p = PRESETS
        .iter()
        .find(|p| p.0 == name)
        .ok_or_else(|| ConfigError::UnknownPreset(name.to_string()))?;
    Ok((p.1, p.2.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fig8b_is_the_left_loop_setting() {
        let (cmd, kv) = lookup("fig8b").unwrap();
        assert_eq!(cmd, "separatrix");
        assert_eq!(kv["p3"], "1.7");
        assert!(lookup("fig99").is_err());
    }
}
