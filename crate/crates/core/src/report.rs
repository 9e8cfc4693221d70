//! Plain-text report formatting.

use std::fmt::Write;

use crate::graph::ValidationReport;
use crate::trees::MinimalFormResult;

/// Decimal rendering with 17 significant digits, which round-trips every
/// `f64`. Very large or small magnitudes fall back to scientific notation.
pub fn fmt_real(x: f64) -> String {
    if x == 0.0 {
        return "0.0000000000000000".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..17).contains(&exp) {
        let decimals = (16 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.16e}")
    }
}

pub fn validation_report(r: &ValidationReport) -> String {
    let mut out = String::new();
    writeln!(out, "connected={}", r.connected).unwrap();
    writeln!(out, "beta={}", r.betti).unwrap();
    writeln!(out, "flux_rank={}", r.flux_rank).unwrap();
    writeln!(out, "flux_surjective={}", r.flux_surjective).unwrap();
    writeln!(out, "degree_max={}", r.degree_max).unwrap();
    for m in &r.messages {
        writeln!(out, "message {m}").unwrap();
    }
    writeln!(out, "valid={}", r.is_valid()).unwrap();
    out
}

/// `d=`, `beta=`, `I=`, `tree_edges=`, then one
/// `edge <id> + value <n_1> .. <n_d>` line per support edge, where `<id>`
/// is the 0-based edge position and `+` the stored orientation.
pub fn minimal_form_report(r: &MinimalFormResult) -> String {
    let mut out = String::new();
    writeln!(out, "d={}", r.dim).unwrap();
    writeln!(out, "beta={}", r.betti).unwrap();
    writeln!(out, "I={}", r.invariant).unwrap();
    let tree: Vec<String> = r.tree.tree_edges.iter().map(usize::to_string).collect();
    writeln!(out, "tree_edges={}", tree.join(" ")).unwrap();
    for e in r.form.support() {
        let v: Vec<String> = r
            .form
            .value(e)
            .entries()
            .iter()
            .map(i64::to_string)
            .collect();
        writeln!(out, "edge {e} + value {}", v.join(" ")).unwrap();
    }
    out
}
