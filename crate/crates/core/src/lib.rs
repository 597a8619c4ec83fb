//! Line-by-line absorption spectra with saturating collisional halfwidths and
//! a piecewise narrowing function.
//!
//! The crate takes a line list (fixed-width 160-character records or CSV),
//! resolves each line's halfwidth at the requested pressure, and sums
//! Lorentzian contributions over a spectral grid. Above the critical
//! pressure every line is multiplied by a narrowing function that enhances
//! the core up to fourfold and suppresses the far wing.
//!
//! ```
//! use narrowline::scenario::builtin;
//!
//! let scenario = builtin("comb_demo").unwrap();
//! let spectrum = scenario.run(&Default::default()).unwrap();
//! assert_eq!(spectrum.len(), scenario.grid.len());
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod engine;
pub mod error;
pub mod halfwidth;
pub mod linelist;
pub mod narrowing;
pub mod profile;
pub mod scenario;
pub mod units;

pub use error::{Error, Result};
