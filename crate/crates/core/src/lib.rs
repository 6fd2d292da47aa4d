//! Information-theoretic measures of atomic electron densities.
//!
//! Position and momentum densities are assembled from analytic Hartree–Fock
//! wavefunctions expanded in Slater-type orbitals. From them the crate
//! evaluates Shannon entropies, Fisher informations, Onicescu energies, their
//! conjugate-space composites and two complexity measures, checks the
//! associated uncertainty inequalities, and builds per-Z series for
//! comparison with experimental ionization potentials and polarizabilities.
//!
//! ```no_run
//! use atomkit::{basis, measures, radial::QuadratureSpec};
//!
//! let catalog = basis::parse_catalog(atomkit::data::BUNDLED_CATALOG).unwrap();
//! let neon = catalog.get(10).unwrap();
//! let m = measures::measure_set(neon, &QuadratureSpec::default()).unwrap();
//! println!("I_T(Ne) = {}", m.i_t);
//! ```

pub mod analysis;
pub mod basis;
pub mod data;
pub mod densities;
pub mod measures;
pub mod periodic;
pub mod radial;

pub use analysis::{build_series, correlate, figure_series, trend_checks, CorrelationMethod, SeriesTable};
pub use basis::{parse_catalog, AtomWavefunction, BasisCatalog, StoPrimitive, StoSubshell};
pub use densities::{momentum_density, position_density, RadialDensity};
pub use measures::{measure_set, MeasureSet};
pub use periodic::{load_elements, ElementRecord};
pub use radial::QuadratureSpec;
