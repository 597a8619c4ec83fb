//! Comma-separated fallback format.
//!
//! One line per row: `position, intensity, gamma_foreign, gamma_self,
//! lower_state_energy, temp_exponent[, branch]`. Blank rows and rows starting
//! with `#` are skipped, as is a header row whose first field starts with a
//! letter.

use std::io::BufRead;

use super::record::parse_real;
use super::{Branch, LineTable, ParseDiagnostic, ParsedRecord, Severity, SpectralLine};
use crate::error::Result;
use crate::units::Window;

const NAMES: [&str; 6] = [
    "wavenumber",
    "intensity",
    "foreign halfwidth",
    "self halfwidth",
    "lower-state energy",
    "temperature exponent",
];

pub fn parse_csv_line(
    index: usize,
    row: &str,
) -> std::result::Result<ParsedRecord, ParseDiagnostic> {
    let diag = |severity, message: String| ParseDiagnostic {
        record_index: index,
        severity,
        message,
    };
    let fields: Vec<&str> = row.trim_end_matches(['\r', '\n']).split(',').collect();
    if fields.len() < NAMES.len() {
        return Err(diag(
            Severity::Fatal,
            format!("too few fields: {} (expected at least 6)", fields.len()),
        ));
    }
    let mut values = [0.0; 6];
    for (i, name) in NAMES.iter().enumerate() {
        // Accept the Unicode minus sign some spreadsheets emit.
        let text = fields[i].trim().replace('\u{2212}', "-");
        values[i] = parse_real(&text).ok_or_else(|| {
            diag(
                Severity::Fatal,
                format!("non-numeric {name} field `{}`", fields[i].trim()),
            )
        })?;
    }
    let [position, intensity, gamma_foreign, gamma_self, energy, n] = values;
    let mut warnings = Vec::new();
    let branch = match fields.get(6) {
        None => Branch::Unknown,
        Some(tag) => Branch::parse(tag).unwrap_or_else(|| {
            warnings.push(diag(
                Severity::Warning,
                format!("unrecognized branch tag `{}`", tag.trim()),
            ));
            Branch::Unknown
        }),
    };
    if fields.len() > 7 {
        warnings.push(diag(
            Severity::Warning,
            format!("{} extra fields ignored", fields.len() - 7),
        ));
    }
    let line = SpectralLine::new(position, intensity, gamma_foreign)
        .with_self_width(gamma_self)
        .with_lower_state_energy(energy)
        .with_temp_exponent(n)
        .with_branch(branch)
        .with_ids(0, 0);
    line.check_invariants()
        .map_err(|m| diag(Severity::Fatal, m))?;
    Ok(ParsedRecord { line, warnings })
}

pub fn parse_csv<R: BufRead>(reader: R, window: Option<Window>, source: &str) -> Result<LineTable> {
    let mut lines = Vec::new();
    let mut diagnostics = Vec::new();
    let mut seen_data = false;
    for (i, row) in reader.lines().enumerate() {
        let row = row?;
        let index = i + 1;
        let t = row.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        if !seen_data && t.starts_with(|c: char| c.is_ascii_alphabetic()) {
            seen_data = true;
            continue;
        }
        seen_data = true;
        match parse_csv_line(index, &row) {
            Ok(parsed) => {
                if window.is_none_or(|w| w.contains(parsed.line.position)) {
                    diagnostics.extend(parsed.warnings);
                    lines.push(parsed.line);
                }
            }
            Err(d) => {
                let pos = t.split(',').next().and_then(parse_real);
                if let (Some(w), Some(p)) = (window, pos) {
                    if p > 0.0 && !w.contains(p) {
                        continue;
                    }
                }
                diagnostics.push(d);
            }
        }
    }
    Ok(LineTable::with_diagnostics(lines, source, diagnostics))
}
