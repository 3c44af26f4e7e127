//! CSV outputs. Every file has a header row; quoting follows RFC 4180 via the
//! `csv` crate. Numbers use the shortest representation that round-trips.

use std::path::Path;

use enpp_core::diagnostics::{BlowupMonitor, Invariant, InvariantReport, LP_EXPONENTS};
use enpp_core::BesovSpec;

use crate::error::{AppError, AppResult};

/// Shortest round-trip decimal, switching to exponent form for very small
/// or very large magnitudes.
pub fn fmt_f64(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-4..1e15).contains(&a) {
        x.to_string()
    } else {
        format!("{x:e}")
    }
}

fn exponent_label(x: f64) -> String {
    if x.is_infinite() {
        "inf".into()
    } else {
        x.to_string()
    }
}

/// Column label of a Besov norm, e.g. `s2.6_p2_rinf`.
pub fn spec_label(spec: &BesovSpec) -> String {
    format!("s{}_p{}_r{}", spec.s, exponent_label(spec.p), exponent_label(spec.r))
}

/// Stable name of an invariant.
pub fn invariant_name(inv: Invariant) -> String {
    match inv {
        Invariant::Divergence => "divergence".into(),
        Invariant::MassN => "mass_n".into(),
        Invariant::MassP => "mass_p".into(),
        Invariant::PositivityN => "positivity_n".into(),
        Invariant::PositivityP => "positivity_p".into(),
        Invariant::LpDecay(k) => format!("lp_decay_{}", LP_EXPONENTS[k]),
        Invariant::Potential => "potential_bound".into(),
        Invariant::KineticEnergy => "kinetic_energy".into(),
    }
}

fn writer(path: &Path) -> AppResult<csv::Writer<std::fs::File>> {
    let file = std::fs::File::create(path).map_err(|e| AppError::io(path, e))?;
    Ok(csv::Writer::from_writer(file))
}

/// `report.csv`: one row per sample. When `blowup` is given it must have
/// been fed the same samples.
pub fn write_report(path: &Path, report: &InvariantReport, blowup: Option<&BlowupMonitor>) -> AppResult<()> {
    let mut w = writer(path)?;
    let mut header: Vec<String> = ["t", "div_u_norm", "min_n", "min_p", "mass_n", "mass_p"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    header.extend(LP_EXPONENTS.iter().map(|a| format!("lp_sum_{a}")));
    header.extend(["grad_phi_l2", "grad_phi_linf", "kinetic_energy"].map(String::from));
    for spec in &report.specs {
        let label = spec_label(spec);
        header.extend(["u", "n", "p"].map(|q| format!("besov_{q}_{label}")));
    }
    if blowup.is_some() {
        header.extend(["grad_u_sup", "blowup_integral"].map(String::from));
    }
    w.write_record(&header)?;
    for (k, s) in report.samples.iter().enumerate() {
        let mut row = vec![s.t, s.div_u, s.min_n, s.min_p, s.mass_n, s.mass_p];
        row.extend(s.lp_sums);
        row.extend([s.grad_phi_l2, s.grad_phi_linf, s.kinetic_energy]);
        for b in &s.besov {
            row.extend(b);
        }
        if let Some(m) = blowup {
            row.push(m.gradient_sup()[k]);
            row.push(m.integral()[k]);
        }
        w.write_record(row.into_iter().map(fmt_f64))?;
    }
    w.flush().map_err(|e| AppError::io(path, e))
}

/// `violations.csv`: first violation of each invariant.
pub fn write_violations(path: &Path, report: &InvariantReport) -> AppResult<()> {
    let mut w = writer(path)?;
    w.write_record(["invariant", "t", "value", "bound"])?;
    for v in &report.violations {
        w.write_record([invariant_name(v.invariant), fmt_f64(v.t), fmt_f64(v.value), fmt_f64(v.bound)])?;
    }
    w.flush().map_err(|e| AppError::io(path, e))
}

/// Write rows of numbers under `header`.
pub fn write_table(path: &Path, header: &[&str], rows: &[Vec<f64>]) -> AppResult<()> {
    let mut w = writer(path)?;
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.iter().map(|x| fmt_f64(*x)))?;
    }
    w.flush().map_err(|e| AppError::io(path, e))
}
