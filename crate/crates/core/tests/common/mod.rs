//! Fixtures shared by the integration tests and the acceptance suite.

#![allow(dead_code)]

use std::ops::Range;
use std::path::{Path, PathBuf};

use rand::Rng;

pub const RECORD_LEN: usize = 160;

pub const POSITION: Range<usize> = 3..15;
pub const INTENSITY: Range<usize> = 15..25;
pub const GAMMA_FOREIGN: Range<usize> = 35..40;
pub const GAMMA_SELF: Range<usize> = 40..45;
pub const LOWER_ENERGY: Range<usize> = 45..55;
pub const TEMP_EXPONENT: Range<usize> = 55..59;

/// Fields decoded by the parser, as (columns, name).
pub const NUMERIC_FIELDS: [(Range<usize>, &str); 6] = [
    (POSITION, "wavenumber"),
    (INTENSITY, "intensity"),
    (GAMMA_FOREIGN, "foreign halfwidth"),
    (GAMMA_SELF, "self halfwidth"),
    (LOWER_ENERGY, "lower-state energy"),
    (TEMP_EXPONENT, "temperature exponent"),
];

pub fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("data")
}

fn filler<R: Rng>(rng: &mut R, n: usize) -> String {
    const ALPHABET: &[u8] = b" 0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefxyz.-+";
    (0..n)
        .map(|_| ALPHABET[rng.gen_range(0..ALPHABET.len())] as char)
        .collect()
}

fn exp_field(value: f64) -> String {
    let s = format!("{value:.3E}");
    let (m, e) = s.split_once('E').unwrap();
    let e: i32 = e.parse().unwrap();
    format!(
        "{:>10}",
        format!("{m}E{}{:02}", if e < 0 { '-' } else { '+' }, e.abs())
    )
}

/// A valid record assembled column by column, with random text in every
/// column the parser does not decode.
pub fn random_record<R: Rng>(rng: &mut R) -> String {
    let gamma = rng.gen_range(0.01..0.0999);
    let fields = [
        format!("{:>2}", rng.gen_range(1..=99)),
        rng.gen_range(1..=9).to_string(),
        format!("{:12.6}", rng.gen_range(10.0..99999.0)),
        exp_field(rng.gen_range(1.0..10.0) * 10f64.powi(rng.gen_range(-30..-17))),
        filler(rng, 10),
        format!("{gamma:.4}")[1..].to_string(),
        format!("{:5.3}", rng.gen_range(0.01..0.999)),
        format!("{:10.4}", rng.gen_range(0.0..9999.0)),
        format!("{:4.2}", rng.gen_range(0.3..0.99)),
        filler(rng, RECORD_LEN - 59),
    ];
    let rec: String = fields.concat();
    assert_eq!(rec.len(), RECORD_LEN);
    rec
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mutation {
    Length,
    NonNumeric,
    Sign,
}

/// Corrupt `rec` so that it can no longer be decoded.
pub fn mutate<R: Rng>(rec: &str, kind: Mutation, rng: &mut R) -> String {
    let mut bytes = rec.as_bytes().to_vec();
    match kind {
        Mutation::Length => {
            if rng.gen_bool(0.5) {
                bytes.truncate(rng.gen_range(1..RECORD_LEN));
            } else {
                let extra = rng.gen_range(1..40);
                bytes.extend(std::iter::repeat_n(b'x', extra));
            }
        }
        Mutation::NonNumeric => {
            let (range, _) = &NUMERIC_FIELDS[rng.gen_range(0..NUMERIC_FIELDS.len())];
            let digits: Vec<usize> = range
                .clone()
                .filter(|&i| bytes[i].is_ascii_digit())
                .collect();
            let at = digits[rng.gen_range(0..digits.len())];
            bytes[at] = b"xq#/"[rng.gen_range(0..4)];
        }
        Mutation::Sign => {
            // Fields whose values must not be negative; all of them carry a
            // leading blank or a leading `.` that can take a minus sign.
            let fields = [POSITION, INTENSITY, GAMMA_FOREIGN];
            let range = fields[rng.gen_range(0..fields.len())].clone();
            let first = range.clone().find(|&i| bytes[i] != b' ').unwrap();
            if first > range.start {
                bytes[first - 1] = b'-';
            } else {
                bytes[first] = b'-';
            }
        }
    }
    String::from_utf8(bytes).unwrap()
}

/// Relative difference, exact zero when both are zero.
pub fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        ((a - b) / b).abs()
    }
}
