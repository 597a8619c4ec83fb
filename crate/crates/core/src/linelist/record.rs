//! Fixed-width 160-character line records (HITRAN-2004 layout).
//!
//! Only the fields needed for line-by-line summation are decoded. Every other
//! column is kept verbatim so that a parsed record re-serializes byte for
//! byte.
//!
//! | columns | width | field                         | format |
//! |---------|-------|-------------------------------|--------|
//! | 1–2     | 2     | molecule id                   | I2     |
//! | 3       | 1     | isotopologue id               | I1     |
//! | 4–15    | 12    | wavenumber ω_i (cm⁻¹)         | F12.6  |
//! | 16–25   | 10    | intensity S at 296 K          | E10.3  |
//! | 36–40   | 5     | foreign (air) halfwidth       | F5.4   |
//! | 41–45   | 5     | self halfwidth                | F5.3   |
//! | 46–55   | 10    | lower-state energy E″ (cm⁻¹)  | F10.4  |
//! | 56–59   | 4     | temperature exponent n        | F4.2   |
//! | 113–127 | 15    | lower local quanta (branch)   | A15    |

use std::ops::Range;

use super::{Branch, ParseDiagnostic, ParsedRecord, Severity, SpectralLine};

pub const RECORD_LEN: usize = 160;

const MOLECULE: Range<usize> = 0..2;
const ISOTOPOLOGUE: Range<usize> = 2..3;
const POSITION: Range<usize> = 3..15;
const INTENSITY: Range<usize> = 15..25;
const GAMMA_FOREIGN: Range<usize> = 35..40;
const GAMMA_SELF: Range<usize> = 40..45;
const LOWER_ENERGY: Range<usize> = 45..55;
const TEMP_EXPONENT: Range<usize> = 55..59;
const UPPER_LOCAL_QUANTA: Range<usize> = 97..112;
const LOWER_LOCAL_QUANTA: Range<usize> = 112..127;

/// Strip one trailing `\n` or `\r\n`.
fn strip_newline(record: &str) -> &str {
    let r = record.strip_suffix('\n').unwrap_or(record);
    r.strip_suffix('\r').unwrap_or(r)
}

pub(crate) fn parse_real(field: &str) -> Option<f64> {
    let t = field.trim();
    if t.is_empty() {
        return None;
    }
    // Fortran double-precision exponents.
    let v = if t.contains(['D', 'd']) {
        t.replace(['D', 'd'], "E").parse::<f64>().ok()?
    } else {
        t.parse::<f64>().ok()?
    };
    v.is_finite().then_some(v)
}

fn parse_molecule(field: &str) -> Option<u16> {
    field.trim().parse().ok()
}

/// HITRAN writes isotopologue 10 as `0` and 11.. as `A`, `B`, ...
fn parse_isotopologue(field: &str) -> Option<u8> {
    match field.as_bytes()[0] {
        b'0' => Some(10),
        c @ b'1'..=b'9' => Some(c - b'0'),
        c @ b'A'..=b'Z' => Some(c - b'A' + 11),
        _ => None,
    }
}

fn isotopologue_char(iso: u8) -> Option<char> {
    match iso {
        1..=9 => Some((b'0' + iso) as char),
        10 => Some('0'),
        11..=36 => Some((b'A' + iso - 11) as char),
        _ => None,
    }
}

/// Recognize `P 12e`, `R  4`, `Q 30f`-style local quanta.
fn branch_from_quanta(field: &str) -> Option<Branch> {
    let t = field.trim_start();
    let mut chars = t.chars();
    let branch = match chars.next()? {
        'P' => Branch::P,
        'Q' => Branch::Q,
        'R' => Branch::R,
        _ => return None,
    };
    chars
        .as_str()
        .trim_start()
        .starts_with(|c: char| c.is_ascii_digit())
        .then_some(branch)
}

/// Decode one 160-character record. `index` is only used to label
/// diagnostics.
pub fn parse_record(index: usize, record: &str) -> Result<ParsedRecord, ParseDiagnostic> {
    let fatal = |message: String| ParseDiagnostic {
        record_index: index,
        severity: Severity::Fatal,
        message,
    };
    let rec = strip_newline(record);
    if !rec.is_ascii() {
        return Err(fatal("non-ASCII characters in record".into()));
    }
    if rec.len() != RECORD_LEN {
        return Err(fatal(format!(
            "wrong record length: {} (expected {RECORD_LEN})",
            rec.len()
        )));
    }

    let real = |range: Range<usize>, name: &str| {
        parse_real(&rec[range.clone()]).ok_or_else(|| {
            fatal(format!(
                "non-numeric {name} field `{}` (columns {}-{})",
                &rec[range.clone()],
                range.start + 1,
                range.end
            ))
        })
    };

    let molecule_id = parse_molecule(&rec[MOLECULE])
        .ok_or_else(|| fatal(format!("non-numeric molecule field `{}`", &rec[MOLECULE])))?;
    let isotopologue_id = parse_isotopologue(&rec[ISOTOPOLOGUE]).ok_or_else(|| {
        fatal(format!(
            "non-numeric isotopologue field `{}`",
            &rec[ISOTOPOLOGUE]
        ))
    })?;
    let position = real(POSITION, "wavenumber")?;
    let intensity_ref = real(INTENSITY, "intensity")?;
    let gamma_foreign_ref = real(GAMMA_FOREIGN, "foreign halfwidth")?;
    let gamma_self_ref = real(GAMMA_SELF, "self halfwidth")?;
    let lower_state_energy = real(LOWER_ENERGY, "lower-state energy")?;
    let temp_exponent = real(TEMP_EXPONENT, "temperature exponent")?;

    let branch = branch_from_quanta(&rec[LOWER_LOCAL_QUANTA])
        .or_else(|| branch_from_quanta(&rec[UPPER_LOCAL_QUANTA]))
        .unwrap_or(Branch::Unknown);

    let line = SpectralLine {
        molecule_id,
        isotopologue_id,
        position,
        intensity_ref,
        gamma_foreign_ref,
        gamma_self_ref,
        lower_state_energy,
        temp_exponent,
        branch,
        raw: Some(rec.into()),
    };
    line.check_invariants().map_err(fatal)?;

    let mut warnings = Vec::new();
    if gamma_self_ref <= 0.0 {
        warnings.push(ParseDiagnostic {
            record_index: index,
            severity: Severity::Warning,
            message: format!("non-positive self halfwidth {gamma_self_ref}"),
        });
    }
    Ok(ParsedRecord { line, warnings })
}

/// Decode only the wavenumber of a record, if it is at least that long.
pub(crate) fn peek_position(record: &str) -> Option<f64> {
    strip_newline(record)
        .get(POSITION)
        .and_then(parse_real)
        .filter(|w| *w > 0.0)
}

/// Right-align `text` in `width` columns.
fn pad(text: &str, width: usize) -> Option<String> {
    (text.len() <= width).then(|| format!("{text:>width$}"))
}

/// Fortran `Fw.d`, dropping the leading zero and then decimals until the
/// value fits.
fn fortran_fixed(value: f64, width: usize, decimals: usize) -> Option<String> {
    for d in (0..=decimals).rev() {
        let mut s = format!("{value:.d$}");
        if s.len() > width {
            if let Some(rest) = s.strip_prefix("0.") {
                s = format!(".{rest}");
            } else if let Some(rest) = s.strip_prefix("-0.") {
                s = format!("-.{rest}");
            }
        }
        if let Some(p) = pad(&s, width) {
            return Some(p);
        }
    }
    None
}

/// `1.000E-19` with a signed two-digit exponent, right-aligned in `width`.
fn fortran_exp(value: f64, width: usize, decimals: usize) -> Option<String> {
    let s = format!("{value:.decimals$E}");
    let (mantissa, exp) = s.split_once('E')?;
    let exp: i32 = exp.parse().ok()?;
    let sign = if exp < 0 { '-' } else { '+' };
    pad(&format!("{mantissa}E{sign}{:02}", exp.abs()), width)
}

fn keep_or_format<T: PartialEq>(
    out: &mut String,
    raw: Option<&str>,
    range: Range<usize>,
    value: T,
    decode: impl Fn(&str) -> Option<T>,
    encode: impl Fn(&T) -> Option<String>,
) -> Result<(), String> {
    if let Some(raw) = raw {
        let original = &raw[range.clone()];
        if decode(original).as_ref() == Some(&value) {
            out.replace_range(range, original);
            return Ok(());
        }
    }
    let text = encode(&value)
        .filter(|t| t.len() == range.len())
        .ok_or_else(|| {
            format!(
                "value does not fit in columns {}-{}",
                range.start + 1,
                range.end
            )
        })?;
    out.replace_range(range, &text);
    Ok(())
}

/// Re-encode a line as a 160-character record.
///
/// Fields whose value still matches the text of the record the line was
/// parsed from are copied verbatim; changed or synthetic fields are written
/// in the standard Fortran formats. Unconsumed columns come from the original
/// record, or are blank for synthetic lines.
pub fn serialize_record(line: &SpectralLine) -> Result<String, String> {
    let raw = line.raw.as_deref();
    let mut out = match raw {
        Some(r) => r.to_string(),
        None => " ".repeat(RECORD_LEN),
    };
    keep_or_format(
        &mut out,
        raw,
        MOLECULE,
        line.molecule_id,
        parse_molecule,
        |v| pad(&v.to_string(), 2),
    )?;
    keep_or_format(
        &mut out,
        raw,
        ISOTOPOLOGUE,
        line.isotopologue_id,
        parse_isotopologue,
        |v| isotopologue_char(*v).map(String::from),
    )?;
    keep_or_format(&mut out, raw, POSITION, line.position, parse_real, |v| {
        fortran_fixed(*v, 12, 6)
    })?;
    keep_or_format(
        &mut out,
        raw,
        INTENSITY,
        line.intensity_ref,
        parse_real,
        |v| fortran_exp(*v, 10, 3),
    )?;
    keep_or_format(
        &mut out,
        raw,
        GAMMA_FOREIGN,
        line.gamma_foreign_ref,
        parse_real,
        |v| fortran_fixed(*v, 5, 4),
    )?;
    keep_or_format(
        &mut out,
        raw,
        GAMMA_SELF,
        line.gamma_self_ref,
        parse_real,
        |v| fortran_fixed(*v, 5, 3),
    )?;
    keep_or_format(
        &mut out,
        raw,
        LOWER_ENERGY,
        line.lower_state_energy,
        parse_real,
        |v| fortran_fixed(*v, 10, 4),
    )?;
    keep_or_format(
        &mut out,
        raw,
        TEMP_EXPONENT,
        line.temp_exponent,
        parse_real,
        |v| fortran_fixed(*v, 4, 2),
    )?;
    if raw.is_none() {
        let quanta = match line.branch {
            Branch::P => "P",
            Branch::Q => "Q",
            Branch::R => "R",
            Branch::Head | Branch::Unknown => "",
        };
        if !quanta.is_empty() {
            // Branch letter without J; enough to round-trip the tag.
            out.replace_range(LOWER_LOCAL_QUANTA, &format!("     {quanta}  0     "));
        }
    }
    Ok(out)
}
