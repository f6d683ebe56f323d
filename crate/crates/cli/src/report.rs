//! Plain-text summary of a design manifest and an optional simulation.

use std::fmt::Write;

use scff_core::harness::SimulationSummary;
use scff_core::io::DesignManifest;
use scff_core::scff::Part;

fn row(out: &mut String, label: &str, value: impl std::fmt::Display) {
    let _ = writeln!(out, "  {label:<28} {value}");
}

fn percent(x: f64) -> String {
    format!("{:.2}%", 100.0 * x)
}

pub fn render(m: &DesignManifest, summary: Option<&SimulationSummary>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "design");
    row(&mut out, "construction", &m.provenance.construction);
    row(&mut out, "kind", m.kind);
    row(&mut out, "cover bound r", m.r);
    row(&mut out, "items", m.cols);
    row(&mut out, "tests", m.rows);
    if let Some(c) = m.provenance.colours {
        row(&mut out, "colour classes", c);
    }
    row(&mut out, "pool size cap", m.lmax.map_or("none".to_string(), |l| l.to_string()));
    for (part, label) in [(Part::EdgeCode, "edge-code tests"), (Part::ItemCode, "item-code tests")] {
        let count = m.row_origin.iter().filter(|o| o.part == part).count();
        if count > 0 {
            row(&mut out, label, count);
        }
    }
    let saved = if m.cols == 0 { 0.0 } else { 1.0 - m.rows as f64 / m.cols as f64 };
    row(&mut out, "tests saved vs individual", percent(saved));
    if let Some(s) = summary {
        let _ = writeln!(out, "simulation");
        row(&mut out, "scenarios", s.scenarios);
        row(&mut out, "seed", s.seed);
        row(&mut out, "edges per scenario", format!("1..={}", s.r));
        row(&mut out, "exact recovery", percent(s.exact_recovery_rate));
        row(&mut out, "false positive rate", percent(s.false_positive_rate));
        row(&mut out, "false negative rate", percent(s.false_negative_rate));
        row(&mut out, "edge cover rate", percent(s.edge_cover_rate));
        row(&mut out, "tests used / individual", format!("{} / {}", s.tests_used, s.tests_individual));
    }
    out
}
