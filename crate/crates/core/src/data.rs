//! Data files compiled into the crate.

/// Minimal-basis STO catalog for Z = 1–18.
pub const BUNDLED_CATALOG: &str = include_str!("../data/catalog.txt");

/// Ionization potentials (eV) and polarizabilities (Å³) for Z = 1–18.
pub const BUNDLED_ELEMENTS: &str = include_str!("../data/elements.csv");
