use std::cmp::Ordering;
use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::ops::Range;
use std::path::Path;

use flate2::read::GzDecoder;

use super::record::{parse_record, peek_position};
use super::{parse_csv, ParseDiagnostic, Severity, SpectralLine};
use crate::error::{Error, Result};
use crate::units::Window;

/// Immutable set of lines sorted by ascending position.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LineTable {
    lines: Vec<SpectralLine>,
    source: String,
    diagnostics: Vec<ParseDiagnostic>,
}

/// Total order on lines: position first, then every other field, so that the
/// sorted table does not depend on input order.
fn line_order(a: &SpectralLine, b: &SpectralLine) -> Ordering {
    a.position
        .total_cmp(&b.position)
        .then(a.intensity_ref.total_cmp(&b.intensity_ref))
        .then(a.gamma_foreign_ref.total_cmp(&b.gamma_foreign_ref))
        .then(a.gamma_self_ref.total_cmp(&b.gamma_self_ref))
        .then(a.lower_state_energy.total_cmp(&b.lower_state_energy))
        .then(a.temp_exponent.total_cmp(&b.temp_exponent))
        .then(a.molecule_id.cmp(&b.molecule_id))
        .then(a.isotopologue_id.cmp(&b.isotopologue_id))
        .then((a.branch as u8).cmp(&(b.branch as u8)))
        .then(a.raw.cmp(&b.raw))
}

impl LineTable {
    pub fn new(lines: Vec<SpectralLine>, source: impl Into<String>) -> Self {
        Self::with_diagnostics(lines, source, Vec::new())
    }

    pub fn with_diagnostics(
        mut lines: Vec<SpectralLine>,
        source: impl Into<String>,
        diagnostics: Vec<ParseDiagnostic>,
    ) -> Self {
        lines.sort_by(line_order);
        LineTable {
            lines,
            source: source.into(),
            diagnostics,
        }
    }

    pub fn lines(&self) -> &[SpectralLine] {
        &self.lines
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn diagnostics(&self) -> &[ParseDiagnostic] {
        &self.diagnostics
    }

    pub fn fatal_count(&self) -> usize {
        self.count(Severity::Fatal)
    }

    pub fn warning_count(&self) -> usize {
        self.count(Severity::Warning)
    }

    fn count(&self, severity: Severity) -> usize {
        self.diagnostics
            .iter()
            .filter(|d| d.severity == severity)
            .count()
    }

    /// Index range of lines with `lo <= position <= hi`.
    pub fn index_range(&self, lo: f64, hi: f64) -> Range<usize> {
        let start = self.lines.partition_point(|l| l.position < lo);
        let end = self.lines.partition_point(|l| l.position <= hi);
        start..end.max(start)
    }

    pub fn in_window(&self, window: Window) -> &[SpectralLine] {
        &self.lines[self.index_range(window.lo, window.hi)]
    }

    /// Union of two tables, re-sorted. Diagnostics are concatenated.
    pub fn concat(&self, other: &LineTable) -> LineTable {
        let mut lines = self.lines.clone();
        lines.extend(other.lines.iter().cloned());
        let mut diagnostics = self.diagnostics.clone();
        diagnostics.extend(other.diagnostics.iter().cloned());
        LineTable::with_diagnostics(
            lines,
            format!("{}+{}", self.source, other.source),
            diagnostics,
        )
    }

    /// Write every line as a 160-character record.
    pub fn write_records<W: Write>(&self, mut out: W) -> Result<()> {
        for line in &self.lines {
            let rec = line.to_record().map_err(Error::Format)?;
            writeln!(out, "{rec}")?;
        }
        Ok(())
    }
}

/// Parse a stream of 160-character records.
///
/// Records whose position lies outside `window` are dropped without a
/// diagnostic. A malformed record is reported as fatal unless its position
/// can be decoded and lies outside the window. Zero-length lines are not
/// records and are skipped.
pub fn parse_linelist<R: BufRead>(
    reader: R,
    window: Option<Window>,
    source: &str,
) -> Result<LineTable> {
    let mut lines = Vec::new();
    let mut diagnostics = Vec::new();
    for (i, chunk) in reader.split(b'\n').enumerate() {
        let bytes = chunk?;
        if bytes.is_empty() || bytes == b"\r" {
            continue;
        }
        let index = i + 1;
        let text = String::from_utf8_lossy(&bytes);
        match parse_record(index, &text) {
            Ok(parsed) => {
                if window.is_none_or(|w| w.contains(parsed.line.position)) {
                    diagnostics.extend(parsed.warnings);
                    lines.push(parsed.line);
                }
            }
            Err(diag) => {
                if let (Some(w), Some(p)) = (window, peek_position(&text)) {
                    if !w.contains(p) {
                        continue;
                    }
                }
                diagnostics.push(diag);
            }
        }
    }
    Ok(LineTable::with_diagnostics(lines, source, diagnostics))
}

/// Read a line-list file. `.csv` selects the comma-separated format and a
/// trailing `.gz` enables gzip decompression (`lines.par.gz`, `lines.csv.gz`).
pub fn read_linelist(path: &Path, window: Option<Window>) -> Result<LineTable> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().to_ascii_lowercase())
        .unwrap_or_default();
    let (stem, gz) = match name.strip_suffix(".gz") {
        Some(s) => (s.to_string(), true),
        None => (name, false),
    };
    let reader: Box<dyn Read> = if gz {
        Box::new(GzDecoder::new(file))
    } else {
        Box::new(file)
    };
    let reader = BufReader::new(reader);
    let source = path.display().to_string();
    let table = if stem.ends_with(".csv") {
        parse_csv(reader, window, &source)
    } else {
        parse_linelist(reader, window, &source)
    };
    table.map_err(|e| match e {
        Error::Stream(io) => Error::io(path, io),
        other => other,
    })
}
