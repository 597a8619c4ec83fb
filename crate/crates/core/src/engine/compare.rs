use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tabulated α(ω), ascending in ω.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Curve {
    pub omega: Vec<f64>,
    pub alpha: Vec<f64>,
}

impl Curve {
    pub fn new(omega: Vec<f64>, alpha: Vec<f64>) -> Result<Self> {
        if omega.len() != alpha.len() {
            return Err(Error::config(format!(
                "curve has {} wavenumbers but {} values",
                omega.len(),
                alpha.len()
            )));
        }
        if omega.is_empty() {
            return Err(Error::config("curve is empty"));
        }
        if omega.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::config(
                "curve wavenumbers are not strictly ascending",
            ));
        }
        Ok(Curve { omega, alpha })
    }

    /// Read two numeric columns `ω, α` from CSV text. Lines starting with
    /// `#` and a non-numeric header row are skipped.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut omega = Vec::new();
        let mut alpha = Vec::new();
        for (i, row) in text.lines().enumerate() {
            let row = row.trim();
            if row.is_empty() || row.starts_with('#') {
                continue;
            }
            let mut fields = row.split(',').map(str::trim);
            let parsed = match (fields.next(), fields.next()) {
                (Some(w), Some(a)) => w.parse::<f64>().ok().zip(a.parse::<f64>().ok()),
                _ => None,
            };
            match parsed {
                Some((w, a)) => {
                    omega.push(w);
                    alpha.push(a);
                }
                None if omega.is_empty() && i == 0 => continue,
                None => {
                    return Err(Error::Format(format!(
                        "curve row {}: expected `omega, alpha`",
                        i + 1
                    )))
                }
            }
        }
        Curve::new(omega, alpha)
    }

    pub fn lo(&self) -> f64 {
        self.omega[0]
    }

    pub fn hi(&self) -> f64 {
        self.omega[self.omega.len() - 1]
    }

    /// Linear interpolation; `None` outside the tabulated range.
    pub fn interpolate(&self, w: f64) -> Option<f64> {
        if w < self.lo() || w > self.hi() {
            return None;
        }
        let k = self.omega.partition_point(|&x| x < w);
        if self.omega[k] == w {
            return Some(self.alpha[k]);
        }
        let (w0, w1) = (self.omega[k - 1], self.omega[k]);
        let (a0, a1) = (self.alpha[k - 1], self.alpha[k]);
        Some(a0 + (w - w0) / (w1 - w0) * (a1 - a0))
    }
}

/// Pointwise comparison over the overlap of two curves.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub omega: Vec<f64>,
    /// `α / α_ref`; 1 where both are zero.
    pub ratio: Vec<f64>,
    /// `α − α_ref`.
    pub difference: Vec<f64>,
    pub max_abs_rel_deviation: f64,
    pub mean_abs_rel_deviation: f64,
}

/// Compare `curve` with `reference`, interpolating the reference onto the
/// points of `curve` that fall inside its range.
pub fn compare_to_reference(curve: &Curve, reference: &Curve) -> Result<ResidualReport> {
    let mut omega = Vec::new();
    let mut ratio = Vec::new();
    let mut difference = Vec::new();
    let mut max_dev: f64 = 0.0;
    let mut sum_dev = 0.0;
    for (&w, &a) in curve.omega.iter().zip(&curve.alpha) {
        let Some(r) = reference.interpolate(w) else {
            continue;
        };
        let (q, dev) = if a == r {
            (1.0, 0.0)
        } else {
            (a / r, ((a - r) / r).abs())
        };
        omega.push(w);
        ratio.push(q);
        difference.push(a - r);
        max_dev = max_dev.max(dev);
        sum_dev += dev;
    }
    if omega.is_empty() {
        return Err(Error::DisjointRanges {
            a_lo: curve.lo(),
            a_hi: curve.hi(),
            b_lo: reference.lo(),
            b_hi: reference.hi(),
        });
    }
    let mean = sum_dev / omega.len() as f64;
    Ok(ResidualReport {
        omega,
        ratio,
        difference,
        max_abs_rel_deviation: max_dev,
        mean_abs_rel_deviation: mean,
    })
}
