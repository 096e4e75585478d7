//! Sweep file formats.
//!
//! CSV: header `theta,phi,delta_e`, one row per grid cell in θ-outer order,
//! numbers printed like C's `%.17g` so they parse back bit-exactly.
//!
//! JSON: an envelope with the generating configuration, the Wigner angle,
//! the grid shape `[n_theta, n_phi]`, both axes and the flat value array:
//!
//! ```json
//! {
//!   "format": "spinboost-sweep",
//!   "version": 1,
//!   "config": { "family": "s1", "alpha": 0.785..., "boost": {...},
//!               "partition": "1vs3", "theta_grid": {...}, "phi_grid": {...} },
//!   "omega": 0.392...,
//!   "shape": [121, 241],
//!   "theta": [...], "phi": [...],
//!   "values": [...]
//! }
//! ```

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sweep::{Surface, SweepConfig, SweepResult};

pub const CSV_HEADER: &str = "theta,phi,delta_e";
pub const JSON_FORMAT_TAG: &str = "spinboost-sweep";
pub const JSON_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            _ => Err(Error::UnknownName {
                kind: "output format",
                name: s.to_string(),
            }),
        }
    }
}

/// Formats `x` exactly as C's `printf("%.17g", x)`.
pub fn format_g17(x: f64) -> String {
    const PRECISION: i32 = 17;
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    // `{:.16e}` rounds to 17 significant digits: "d.dddddddddddddddde<exp>"
    let sci = format!("{:.16e}", x.abs());
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    let sign = if x < 0.0 { "-" } else { "" };

    if (-4..PRECISION).contains(&exp) {
        let (int_part, frac_part) = if exp >= 0 {
            let split = exp as usize + 1;
            (digits[..split].to_string(), digits[split..].to_string())
        } else {
            ("0".to_string(), "0".repeat((-exp - 1) as usize) + &digits)
        };
        let frac = frac_part.trim_end_matches('0');
        if frac.is_empty() {
            format!("{sign}{int_part}")
        } else {
            format!("{sign}{int_part}.{frac}")
        }
    } else {
        let frac = digits[1..].trim_end_matches('0');
        let mut out = format!("{sign}{}", &digits[..1]);
        if !frac.is_empty() {
            out.push('.');
            out.push_str(frac);
        }
        let _ = write!(out, "e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs());
        out
    }
}

pub fn to_csv(surface: &Surface) -> String {
    let mut out = String::with_capacity(64 * surface.values.len());
    out.push_str(CSV_HEADER);
    out.push('\n');
    for (theta, phi, v) in surface.cells() {
        let _ = writeln!(out, "{},{},{}", format_g17(theta), format_g17(phi), format_g17(v));
    }
    out
}

/// Rebuilds the grid from CSV rows. The θ axis is read from the row blocks
/// and every block must repeat the same φ axis.
pub fn parse_csv(text: &str) -> Result<Surface> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    match lines.next() {
        Some(h) if h.trim() == CSV_HEADER => {}
        Some(h) => return Err(Error::Parse(format!("unexpected CSV header `{h}`"))),
        None => return Err(Error::Parse("empty CSV".into())),
    }
    let mut rows = Vec::new();
    for (n, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            return Err(Error::Parse(format!("row {}: expected 3 fields", n + 2)));
        }
        let mut vals = [0.0; 3];
        for (slot, f) in vals.iter_mut().zip(&fields) {
            *slot = f
                .trim()
                .parse()
                .map_err(|e| Error::Parse(format!("row {}: `{f}`: {e}", n + 2)))?;
        }
        rows.push(vals);
    }
    if rows.is_empty() {
        return Err(Error::Parse("CSV has no data rows".into()));
    }

    let mut thetas: Vec<f64> = Vec::new();
    for r in &rows {
        if thetas.last() != Some(&r[0]) {
            thetas.push(r[0]);
        }
    }
    let n_phi = rows.len() / thetas.len();
    if n_phi * thetas.len() != rows.len() {
        return Err(Error::Parse("rows do not form a rectangular grid".into()));
    }
    let phis: Vec<f64> = rows[..n_phi].iter().map(|r| r[1]).collect();
    for (k, r) in rows.iter().enumerate() {
        if r[0] != thetas[k / n_phi] || r[1] != phis[k % n_phi] {
            return Err(Error::Parse(format!("row {} breaks the θ-outer grid order", k + 2)));
        }
    }
    Surface::new(thetas, phis, rows.iter().map(|r| r[2]).collect())
}

/// JSON envelope of a sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepDocument {
    pub format: String,
    pub version: u32,
    pub config: SweepConfig,
    pub omega: f64,
    pub shape: [usize; 2],
    pub theta: Vec<f64>,
    pub phi: Vec<f64>,
    pub values: Vec<f64>,
}

impl SweepDocument {
    pub fn from_result(result: &SweepResult) -> Self {
        let s = &result.surface;
        Self {
            format: JSON_FORMAT_TAG.into(),
            version: JSON_VERSION,
            config: result.config.clone(),
            omega: result.omega,
            shape: [s.thetas.len(), s.phis.len()],
            theta: s.thetas.clone(),
            phi: s.phis.clone(),
            values: s.values.clone(),
        }
    }

    pub fn into_result(self) -> Result<SweepResult> {
        if self.format != JSON_FORMAT_TAG {
            return Err(Error::Parse(format!("not a sweep document: format `{}`", self.format)));
        }
        if self.shape != [self.theta.len(), self.phi.len()] {
            return Err(Error::Parse("shape does not match the axes".into()));
        }
        Ok(SweepResult {
            config: self.config,
            omega: self.omega,
            surface: Surface::new(self.theta, self.phi, self.values)?,
        })
    }
}

pub fn to_json(result: &SweepResult) -> Result<String> {
    let mut s = serde_json::to_string_pretty(&SweepDocument::from_result(result))?;
    s.push('\n');
    Ok(s)
}

pub fn render(result: &SweepResult, format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Csv => Ok(to_csv(&result.surface)),
        OutputFormat::Json => to_json(result),
    }
}

pub fn write_sweep(result: &SweepResult, path: &Path, format: OutputFormat) -> Result<()> {
    fs::write(path, render(result, format)?)?;
    Ok(())
}

/// A surface read back from disk; JSON files also carry their sweep metadata.
#[derive(Clone, Debug)]
pub enum LoadedSweep {
    Csv(Surface),
    Json(SweepResult),
}

impl LoadedSweep {
    pub fn surface(&self) -> &Surface {
        match self {
            Self::Csv(s) => s,
            Self::Json(r) => &r.surface,
        }
    }
}

/// Reads a CSV or JSON sweep file, telling them apart by content.
pub fn read_sweep(path: &Path) -> Result<LoadedSweep> {
    let text = fs::read_to_string(path)?;
    if text.trim_start().starts_with('{') {
        let doc: SweepDocument = serde_json::from_str(&text)?;
        Ok(LoadedSweep::Json(doc.into_result()?))
    } else {
        Ok(LoadedSweep::Csv(parse_csv(&text)?))
    }
}
