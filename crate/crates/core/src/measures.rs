//! Shannon, Fisher and Onicescu measures of a density and the composite
//! measures built from a conjugate pair of densities.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::basis::AtomWavefunction;
use crate::densities::{momentum_density, position_density_with, radial_moment, DensityError, RadialDensity};
use crate::radial::{QuadratureError, QuadratureSpec};

/// Fisher integrand contributions vanish below this density.
pub const FISHER_DENSITY_FLOOR: f64 = 1e-300;

/// Lower bound on `S_r + S_k` in three dimensions: `3(1 + ln π)`.
pub fn bbm_bound() -> f64 {
    3.0 * (1.0 + PI.ln())
}

/// Lower bound on `I_r · I_k` in three dimensions.
pub const FISHER_PRODUCT_BOUND: f64 = 36.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeasureError {
    #[error("{measure}: {source}")]
    Quadrature {
        measure: &'static str,
        source: QuadratureError,
    },
    #[error("{measure} of {atom}: {source}")]
    Density {
        atom: String,
        measure: &'static str,
        source: DensityError,
    },
    #[error("omega needs positive inputs, got I_T(Z) = {i_t_z}, I_T(ref) = {i_t_ref}")]
    NonPositive { i_t_z: f64, i_t_ref: f64 },
}

fn quad(measure: &'static str) -> impl Fn(QuadratureError) -> MeasureError {
    move |source| MeasureError::Quadrature { measure, source }
}

/// `−4π ∫ d ln d x² dx` with `0 ln 0 = 0`.
pub fn shannon(d: &RadialDensity, spec: &QuadratureSpec) -> Result<f64, MeasureError> {
    d.integrate(spec, |_, v, _| if v > 0.0 { -v * v.ln() } else { 0.0 })
        .map_err(quad("shannon"))
}

/// `4π ∫ d'(x)² / d(x) x² dx`.
pub fn fisher(d: &RadialDensity, spec: &QuadratureSpec) -> Result<f64, MeasureError> {
    d.integrate(spec, |_, v, dv| if v < FISHER_DENSITY_FLOOR { 0.0 } else { dv * dv / v })
        .map_err(quad("fisher"))
}

/// `4π ∫ d(x)² x² dx`.
pub fn onicescu(d: &RadialDensity, spec: &QuadratureSpec) -> Result<f64, MeasureError> {
    d.integrate(spec, |_, v, _| v * v).map_err(quad("onicescu"))
}

/// Every scalar measure of one atom.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureSet {
    pub z: u32,
    pub symbol: String,
    pub s_r: f64,
    pub s_k: f64,
    pub s_t: f64,
    pub i_r: f64,
    pub i_k: f64,
    pub i_t: f64,
    pub e_r: f64,
    pub e_k: f64,
    pub e_t: f64,
    /// `S_T · E_T`
    pub c_lmc: f64,
    /// `E_T / I_T`
    pub c_fisher: f64,
    /// `⟨r²⟩`
    pub v_r: f64,
    /// `⟨k²⟩`
    pub v_k: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub omega: Option<f64>,
}

impl MeasureSet {
    /// Composes the set from the two conjugate densities.
    pub fn from_densities(
        z: u32,
        symbol: &str,
        position: &RadialDensity,
        momentum: &RadialDensity,
        spec: &QuadratureSpec,
    ) -> Result<Self, MeasureError> {
        let s_r = shannon(position, spec)?;
        let s_k = shannon(momentum, spec)?;
        let i_r = fisher(position, spec)?;
        let i_k = fisher(momentum, spec)?;
        let e_r = onicescu(position, spec)?;
        let e_k = onicescu(momentum, spec)?;
        let moment = |d: &RadialDensity, measure| {
            radial_moment(d, 2, spec).map_err(|source| MeasureError::Density {
                atom: symbol.to_string(),
                measure,
                source,
            })
        };
        let v_r = moment(position, "v_r")?;
        let v_k = moment(momentum, "v_k")?;
        let s_t = s_r + s_k;
        let i_t = i_r * i_k;
        let e_t = e_r * e_k;
        Ok(Self {
            z,
            symbol: symbol.to_string(),
            s_r,
            s_k,
            s_t,
            i_r,
            i_k,
            i_t,
            e_r,
            e_k,
            e_t,
            c_lmc: s_t * e_t,
            c_fisher: e_t / i_t,
            v_r,
            v_k,
            omega: None,
        })
    }

    pub fn bounds(&self) -> BoundReport {
        BoundReport {
            bbm_margin: self.s_t - bbm_bound(),
            cramer_rao_r: self.i_r * self.v_r - 1.0,
            cramer_rao_k: self.i_k * self.v_k - 1.0,
            fisher_product_margin: self.i_t - FISHER_PRODUCT_BOUND,
        }
    }

    /// Values in the fixed CSV column order of [`MeasureSet::CSV_HEADER`].
    pub fn csv_row(&self) -> String {
        let omega = self.omega.map(|v| v.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.z,
            self.symbol,
            self.s_r,
            self.s_k,
            self.s_t,
            self.i_r,
            self.i_k,
            self.i_t,
            self.e_r,
            self.e_k,
            self.e_t,
            self.c_lmc,
            self.c_fisher,
            self.v_r,
            self.v_k,
            omega
        )
    }

    pub const CSV_HEADER: &'static str =
        "z,symbol,s_r,s_k,s_t,i_r,i_k,i_t,e_r,e_k,e_t,c_lmc,c_fisher,v_r,v_k,omega";
}

/// Margins of the uncertainty-type inequalities; each is `≥ 0` when the
/// bound holds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    /// `S_T − 3(1 + ln π)`
    pub bbm_margin: f64,
    /// `I_r ⟨r²⟩ − 1`
    pub cramer_rao_r: f64,
    /// `I_k ⟨k²⟩ − 1`
    pub cramer_rao_k: f64,
    /// `I_T − 36`
    pub fisher_product_margin: f64,
}

impl BoundReport {
    pub fn all_hold(&self) -> bool {
        self.bbm_margin >= 0.0
            && self.cramer_rao_r >= 0.0
            && self.cramer_rao_k >= 0.0
            && self.fisher_product_margin >= 0.0
    }
}

/// Builds both densities of `atom` and evaluates every measure.
pub fn measure_set(atom: &AtomWavefunction, spec: &QuadratureSpec) -> Result<MeasureSet, MeasureError> {
    let density_err = |measure| {
        move |source| MeasureError::Density {
            atom: format!("{} (Z={})", atom.symbol, atom.z),
            measure,
            source,
        }
    };
    let position = position_density_with(atom, spec).map_err(density_err("position density"))?;
    let momentum = momentum_density(atom, spec).map_err(density_err("momentum density"))?;
    MeasureSet::from_densities(atom.z, &atom.symbol, &position, &momentum, spec).map_err(|e| match e {
        MeasureError::Quadrature { measure, source } => MeasureError::Density {
            atom: format!("{} (Z={})", atom.symbol, atom.z),
            measure,
            source: DensityError::Quadrature { atom: atom.symbol.clone(), source },
        },
        other => other,
    })
}

/// `Ω = 1 − I_T(ref) / I_T(Z)`; negative when the atom is more compact than
/// its reference.
pub fn omega(i_t_z: f64, i_t_ref: f64) -> Result<f64, MeasureError> {
    if !(i_t_z > 0.0 && i_t_ref > 0.0) {
        return Err(MeasureError::NonPositive { i_t_z, i_t_ref });
    }
    Ok(1.0 - i_t_ref / i_t_z)
}
