//! Experimental per-element data and periodic-table structure.
//!
//! CSV schema: `z,symbol,ip_ev,alpha_A3,period,group,noble_ref_z`, an empty
//! field marks a missing value. Everything is converted to atomic units on
//! load.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// eV per hartree.
pub const HARTREE_EV: f64 = 27.211386245988;
/// Å³ per atomic unit of polarizability (bohr³).
pub const AU_POLARIZABILITY_A3: f64 = 0.14818471;

pub const NOBLE_GASES: [u32; 6] = [2, 10, 18, 36, 54, 86];

const HEADER: [&str; 7] = ["z", "symbol", "ip_ev", "alpha_A3", "period", "group", "noble_ref_z"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElementRecord {
    pub z: u32,
    pub symbol: String,
    /// First ionization potential, hartree.
    pub ip: Option<f64>,
    /// Static dipole polarizability, bohr³.
    pub alpha_d: Option<f64>,
    pub period: u32,
    pub group: u32,
    pub noble_ref_z: u32,
}

#[derive(Debug, Error)]
pub enum PeriodicError {
    #[error("row {row}: {message}")]
    Schema { row: usize, message: String },
    #[error("row {row} ({symbol}): non-physical {quantity} {value}")]
    NonPhysical {
        row: usize,
        symbol: String,
        quantity: &'static str,
        value: f64,
    },
    #[error("Z = {0} outside 1..=102")]
    OutOfRange(u32),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub fn ev_to_hartree(ev: f64) -> f64 {
    ev / HARTREE_EV
}

pub fn hartree_to_ev(h: f64) -> f64 {
    h * HARTREE_EV
}

pub fn a3_to_au(a3: f64) -> f64 {
    a3 / AU_POLARIZABILITY_A3
}

pub fn au_to_a3(au: f64) -> f64 {
    au * AU_POLARIZABILITY_A3
}

/// Noble gas closing the period of `z`. Elements past radon map to 86, the
/// last inert gas inside `Z ≤ 102`.
pub fn noble_reference(z: u32) -> Result<u32, PeriodicError> {
    if !(1..=102).contains(&z) {
        return Err(PeriodicError::OutOfRange(z));
    }
    Ok(NOBLE_GASES.iter().copied().find(|&n| z <= n).unwrap_or(86))
}

/// Period (row) of `z` for `1 ≤ z ≤ 118`.
pub fn period_of(z: u32) -> Option<u32> {
    const ENDS: [u32; 7] = [2, 10, 18, 36, 54, 86, 118];
    if z == 0 {
        return None;
    }
    ENDS.iter().position(|&e| z <= e).map(|i| i as u32 + 1)
}

/// Alkali metals plus hydrogen: the first element of each period.
pub fn is_group_one(z: u32) -> bool {
    matches!(z, 1 | 3 | 11 | 19 | 37 | 55 | 87)
}

pub fn load_elements<R: Read>(input: R) -> Result<Vec<ElementRecord>, PeriodicError> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let headers = reader.headers()?.clone();
    if headers.iter().ne(HEADER.iter().copied()) {
        return Err(PeriodicError::Schema {
            row: 0,
            message: format!("expected header `{}`, got `{}`", HEADER.join(","), headers.iter().collect::<Vec<_>>().join(",")),
        });
    }
    let mut out: Vec<ElementRecord> = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let row = i + 1;
        let rec = rec?;
        let schema = |message: String| PeriodicError::Schema { row, message };
        if rec.len() != HEADER.len() {
            return Err(schema(format!("expected {} fields, got {}", HEADER.len(), rec.len())));
        }
        let int = |idx: usize| -> Result<u32, PeriodicError> {
            rec[idx]
                .parse()
                .map_err(|_| schema(format!("invalid {} `{}`", HEADER[idx], &rec[idx])))
        };
        let real = |idx: usize| -> Result<Option<f64>, PeriodicError> {
            if rec[idx].is_empty() {
                return Ok(None);
            }
            rec[idx]
                .parse()
                .map(Some)
                .map_err(|_| schema(format!("invalid {} `{}`", HEADER[idx], &rec[idx])))
        };
        let z = int(0)?;
        let symbol = rec[1].to_string();
        if symbol.is_empty() {
            return Err(schema("empty symbol".into()));
        }
        let ip_ev = real(2)?;
        let alpha = real(3)?;
        let nonphysical = |quantity, value| PeriodicError::NonPhysical {
            row,
            symbol: symbol.clone(),
            quantity,
            value,
        };
        if let Some(v) = ip_ev.filter(|v| !(*v > 0.0 && v.is_finite())) {
            return Err(nonphysical("ionization potential", v));
        }
        if let Some(v) = alpha.filter(|v| !(*v > 0.0 && v.is_finite())) {
            return Err(nonphysical("polarizability", v));
        }
        let period = int(4)?;
        let group = int(5)?;
        let noble_ref_z = int(6)?;
        if z == 0 {
            return Err(schema("z must be positive".into()));
        }
        if !(1..=7).contains(&period) {
            return Err(schema(format!("period {period} outside 1..=7")));
        }
        if !(1..=18).contains(&group) {
            return Err(schema(format!("group {group} outside 1..=18")));
        }
        if !NOBLE_GASES.contains(&noble_ref_z) {
            return Err(schema(format!("noble_ref_z {noble_ref_z} is not a noble gas")));
        }
        if out.iter().any(|r| r.z == z) {
            return Err(schema(format!("duplicate z {z}")));
        }
        out.push(ElementRecord {
            z,
            symbol,
            ip: ip_ev.map(ev_to_hartree),
            alpha_d: alpha.map(a3_to_au),
            period,
            group,
            noble_ref_z,
        });
    }
    out.sort_by_key(|r| r.z);
    Ok(out)
}

/// Writes records back in the input schema (eV, Å³).
pub fn write_elements<W: Write>(records: &[ElementRecord], out: W) -> Result<(), PeriodicError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for r in records {
        let opt = |v: Option<f64>, f: fn(f64) -> f64| v.map(|x| f(x).to_string()).unwrap_or_default();
        w.write_record([
            r.z.to_string(),
            r.symbol.clone(),
            opt(r.ip, hartree_to_ev),
            opt(r.alpha_d, au_to_a3),
            r.period.to_string(),
            r.group.to_string(),
            r.noble_ref_z.to_string(),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}
