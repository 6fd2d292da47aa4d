//! Spherically averaged one-particle densities `ρ(r)` and `n(k)`, each
//! normalized to unity and carrying its radial derivative.

use std::f64::consts::PI;
use std::io::Write;
use std::sync::Arc;

use thiserror::Error;

use crate::basis::AtomWavefunction;
use crate::radial::{
    integrate_to, sbt, sto_radial, Domain, MomentumOrbital, QuadratureError, QuadratureSpec,
    RadialFunction, SbtError, StoRadial,
};

/// Densities whose norm misses one by more than this are rejected.
pub const DENSITY_NORMALIZATION_TOLERANCE: f64 = 1e-6;

type Evaluator = dyn Fn(f64) -> (f64, f64) + Send + Sync;

/// A radial density with its derivative, in position or momentum space.
#[derive(Clone)]
pub struct RadialDensity {
    space: Domain,
    eval: Arc<Evaluator>,
    electron_count: f64,
    length_scale: f64,
    support: f64,
}

impl std::fmt::Debug for RadialDensity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RadialDensity")
            .field("space", &self.space)
            .field("electron_count", &self.electron_count)
            .field("length_scale", &self.length_scale)
            .field("support", &self.support)
            .finish_non_exhaustive()
    }
}

impl RadialDensity {
    /// Wraps a closed-form density. `length_scale` sets the quadrature map;
    /// `support` bounds the integration range (`f64::INFINITY` for none).
    pub fn from_fn<F>(space: Domain, electron_count: f64, length_scale: f64, support: f64, eval: F) -> Self
    where
        F: Fn(f64) -> (f64, f64) + Send + Sync + 'static,
    {
        Self {
            space,
            eval: Arc::new(eval),
            electron_count,
            length_scale,
            support,
        }
    }

    pub fn space(&self) -> Domain {
        self.space
    }

    pub fn value(&self, x: f64) -> f64 {
        (self.eval)(x).0
    }

    pub fn derivative(&self, x: f64) -> f64 {
        (self.eval)(x).1
    }

    pub fn value_and_derivative(&self, x: f64) -> (f64, f64) {
        (self.eval)(x)
    }

    pub fn electron_count(&self) -> f64 {
        self.electron_count
    }

    pub fn length_scale(&self) -> f64 {
        self.length_scale
    }

    /// Upper end of the integration range.
    pub fn support(&self) -> f64 {
        self.support
    }

    /// `4π ∫ g(x, d(x), d'(x)) x² dx` over the support.
    pub fn integrate<G>(&self, spec: &QuadratureSpec, g: G) -> Result<f64, QuadratureError>
    where
        G: Fn(f64, f64, f64) -> f64,
    {
        let spec = spec.with_scale(self.length_scale);
        integrate_to(
            |x| {
                let (v, d) = (self.eval)(x);
                g(x, v, d) * x * x
            },
            self.support,
            &spec,
        )
        .map(|i| 4.0 * PI * i.value)
    }

    /// Writes `x,value,derivative` rows for the given grid.
    pub fn write_csv<W: Write>(&self, grid: &[f64], mut out: W) -> std::io::Result<()> {
        writeln!(out, "x,value,derivative")?;
        for &x in grid {
            let (v, d) = (self.eval)(x);
            writeln!(out, "{x},{v},{d}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DensityError {
    #[error("{space} density of {atom} has norm {norm}, expected 1")]
    Normalization { atom: String, space: Domain, norm: f64 },
    #[error("{atom}: {source}")]
    Transform { atom: String, source: SbtError },
    #[error("{atom}: {source}")]
    Quadrature { atom: String, source: QuadratureError },
    #[error("moment order {0} outside [-2, 4]")]
    MomentOrder(i32),
}

fn atom_label(atom: &AtomWavefunction) -> String {
    format!("{} (Z={})", atom.symbol, atom.z)
}

fn occupied_orbitals(atom: &AtomWavefunction) -> Vec<(f64, Arc<StoRadial>)> {
    atom.subshells
        .iter()
        .filter(|s| s.occupation > 0.0)
        .map(|s| (s.occupation, Arc::new(sto_radial(s))))
        .collect()
}

fn check_norm(d: RadialDensity, atom: &AtomWavefunction, spec: &QuadratureSpec) -> Result<RadialDensity, DensityError> {
    let norm = radial_moment(&d, 0, spec).map_err(|e| match e {
        DensityError::Quadrature { source, .. } => DensityError::Quadrature { atom: atom_label(atom), source },
        other => other,
    })?;
    if (norm - 1.0).abs() > DENSITY_NORMALIZATION_TOLERANCE {
        return Err(DensityError::Normalization {
            atom: atom_label(atom),
            space: d.space,
            norm,
        });
    }
    Ok(d)
}

/// `ρ(r) = Σ_i occ_i R_i(r)² / (4π N)`.
pub fn position_density(atom: &AtomWavefunction) -> Result<RadialDensity, DensityError> {
    position_density_with(atom, &QuadratureSpec::default())
}

pub fn position_density_with(atom: &AtomWavefunction, spec: &QuadratureSpec) -> Result<RadialDensity, DensityError> {
    let orbitals = occupied_orbitals(atom);
    let electrons = atom.electron_count();
    let prefactor = 1.0 / (4.0 * PI * electrons);
    let scale = orbitals
        .iter()
        .map(|(_, o)| o.extent().typical)
        .fold(0.0, f64::max);
    let eval = move |r: f64| {
        let mut v = 0.0;
        let mut d = 0.0;
        for (occ, orb) in &orbitals {
            let (f, df) = orb.value_and_derivative(r);
            v += occ * f * f;
            d += 2.0 * occ * f * df;
        }
        (v * prefactor, d * prefactor)
    };
    let density = RadialDensity::from_fn(Domain::Position, electrons, scale, f64::INFINITY, eval);
    check_norm(density, atom, spec)
}

/// `n(k) = Σ_i occ_i R̃_i(k)² / (4π N)` with `R̃_i` from the spherical Bessel
/// transform; `n'(k)` uses the transform's own k-derivative.
pub fn momentum_density(atom: &AtomWavefunction, spec: &QuadratureSpec) -> Result<RadialDensity, DensityError> {
    let orbitals: Vec<(f64, MomentumOrbital<StoRadial>)> = occupied_orbitals(atom)
        .into_iter()
        .map(|(occ, orb)| {
            let l = orb.l();
            sbt(orb, l, spec).map(|m| (occ, m))
        })
        .collect::<Result<_, _>>()
        .map_err(|source| DensityError::Transform { atom: atom_label(atom), source })?;

    let support = orbitals
        .iter()
        .map(|(_, m)| m.extent().cutoff)
        .fold(0.0, f64::max);
    let scale = orbitals
        .iter()
        .map(|(_, m)| m.extent().typical)
        .fold(f64::INFINITY, f64::min);
    for (_, m) in &orbitals {
        let panels = m.panel_count(support);
        if panels > spec.max_panels {
            return Err(DensityError::Transform {
                atom: atom_label(atom),
                source: SbtError::NonConvergence { k: support, error: f64::NAN, panels },
            });
        }
    }

    let electrons = atom.electron_count();
    let prefactor = 1.0 / (4.0 * PI * electrons);
    let eval = move |k: f64| {
        let mut v = 0.0;
        let mut d = 0.0;
        for (occ, m) in &orbitals {
            let (f, df) = m.value_and_derivative(k);
            v += occ * f * f;
            d += 2.0 * occ * f * df;
        }
        (v * prefactor, d * prefactor)
    };
    let density = RadialDensity::from_fn(Domain::Momentum, electrons, scale, support, eval);
    check_norm(density, atom, spec)
}

/// `4π ∫ d(x) x^(p+2) dx`; `p = 0` is the norm, `p = 2` the variance used in
/// the Cramér–Rao check.
pub fn radial_moment(d: &RadialDensity, p: i32, spec: &QuadratureSpec) -> Result<f64, DensityError> {
    if !(-2..=4).contains(&p) {
        return Err(DensityError::MomentOrder(p));
    }
    d.integrate(spec, |x, v, _| if p == 0 { v } else { v * x.powi(p) })
        .map_err(|source| DensityError::Quadrature { atom: String::from("density"), source })
}
