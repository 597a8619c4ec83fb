//! Spectroscopic line lists: parsing, validation and the sorted line table.

mod csv;
mod record;
mod table;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use self::csv::{parse_csv, parse_csv_line};
pub use self::record::{parse_record, serialize_record, RECORD_LEN};
pub use self::table::{parse_linelist, read_linelist, LineTable};

/// Rotational branch of a transition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    P,
    Q,
    R,
    Head,
    #[default]
    Unknown,
}

impl Branch {
    pub fn parse(tag: &str) -> Option<Branch> {
        match tag.trim().to_ascii_lowercase().as_str() {
            "p" => Some(Branch::P),
            "q" => Some(Branch::Q),
            "r" => Some(Branch::R),
            "head" => Some(Branch::Head),
            "" | "unknown" => Some(Branch::Unknown),
            _ => None,
        }
    }
}

/// One transition.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralLine {
    pub molecule_id: u16,
    pub isotopologue_id: u8,
    /// Line position ω_i (cm⁻¹).
    pub position: f64,
    /// Intensity at 296 K, cm⁻¹/(molecule·cm⁻²).
    pub intensity_ref: f64,
    /// Foreign-broadening halfwidth coefficient at 296 K (cm⁻¹/atm).
    pub gamma_foreign_ref: f64,
    /// Self-broadening halfwidth coefficient at 296 K (cm⁻¹/atm).
    pub gamma_self_ref: f64,
    /// Lower-state energy E″ (cm⁻¹).
    pub lower_state_energy: f64,
    /// Temperature exponent of the halfwidth.
    pub temp_exponent: f64,
    pub branch: Branch,
    /// The record this line was decoded from, if any.
    pub(crate) raw: Option<Box<str>>,
}

impl SpectralLine {
    /// A synthetic line with no backing record. Self width defaults to the
    /// foreign width, E″ to zero and the temperature exponent to 0.75.
    pub fn new(position: f64, intensity_ref: f64, gamma_foreign_ref: f64) -> Self {
        SpectralLine {
            molecule_id: 2,
            isotopologue_id: 1,
            position,
            intensity_ref,
            gamma_foreign_ref,
            gamma_self_ref: gamma_foreign_ref,
            lower_state_energy: 0.0,
            temp_exponent: 0.75,
            branch: Branch::Unknown,
            raw: None,
        }
    }

    pub fn with_self_width(mut self, gamma_self_ref: f64) -> Self {
        self.gamma_self_ref = gamma_self_ref;
        self
    }

    pub fn with_lower_state_energy(mut self, energy: f64) -> Self {
        self.lower_state_energy = energy;
        self
    }

    pub fn with_temp_exponent(mut self, n: f64) -> Self {
        self.temp_exponent = n;
        self
    }

    pub fn with_branch(mut self, branch: Branch) -> Self {
        self.branch = branch;
        self
    }

    pub fn with_ids(mut self, molecule_id: u16, isotopologue_id: u8) -> Self {
        self.molecule_id = molecule_id;
        self.isotopologue_id = isotopologue_id;
        self
    }

    /// The record text this line was parsed from.
    pub fn raw_record(&self) -> Option<&str> {
        self.raw.as_deref()
    }

    /// Encode as a 160-character record.
    pub fn to_record(&self) -> Result<String, String> {
        serialize_record(self)
    }

    pub fn check_invariants(&self) -> Result<(), String> {
        if !(self.position > 0.0) {
            return Err(format!("non-positive wavenumber {}", self.position));
        }
        if !(self.intensity_ref >= 0.0) {
            return Err(format!("negative intensity {}", self.intensity_ref));
        }
        if !(self.gamma_foreign_ref > 0.0) {
            return Err(format!(
                "non-positive foreign halfwidth {}",
                self.gamma_foreign_ref
            ));
        }
        if !(self.lower_state_energy >= 0.0) {
            return Err(format!(
                "negative lower-state energy {}",
                self.lower_state_energy
            ));
        }
        if !self.temp_exponent.is_finite() {
            return Err("non-finite temperature exponent".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Warning,
    Fatal,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Warning => "warning",
            Severity::Fatal => "fatal",
        })
    }
}

/// A problem with one input record. Fatal diagnostics mean the record was
/// dropped.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParseDiagnostic {
    /// 1-based record (line) number in the input stream.
    pub record_index: usize,
    pub severity: Severity,
    pub message: String,
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "record {}: {}: {}",
            self.record_index, self.severity, self.message
        )
    }
}

/// A successfully decoded line and any non-fatal findings.
#[derive(Debug, Clone)]
pub struct ParsedRecord {
    pub line: SpectralLine,
    pub warnings: Vec<ParseDiagnostic>,
}
