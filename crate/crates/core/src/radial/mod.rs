//! Numerical backbone: semi-infinite quadrature, spherical Bessel functions,
//! analytic STO radial orbitals and their momentum-space transforms.

pub mod bessel;
pub mod quadrature;
pub mod sbt;
pub mod sto;

pub use bessel::spherical_bessel_j;
pub use quadrature::{
    integrate_semi_infinite, integrate_to, Integral, Mapping, QuadratureError, QuadratureSpec,
};
pub use sbt::{sbt, MomentumOrbital, SbtError, SbtValue};
pub use sto::{sto_radial, StoRadial};

/// Which conjugate space a radial function lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Position,
    Momentum,
}

impl std::fmt::Display for Domain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Domain::Position => "position",
            Domain::Momentum => "momentum",
        })
    }
}

/// Length scales that let integrators place panels without sampling first.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extent {
    /// Smallest feature size near the origin.
    pub finest: f64,
    /// Scale for the `[0, ∞)` coordinate map.
    pub typical: f64,
    /// Beyond this argument the function is negligible.
    pub cutoff: f64,
}

/// A radial function on `(0, ∞)` with its first derivative.
pub trait RadialFunction: Send + Sync {
    fn value(&self, x: f64) -> f64;

    fn derivative(&self, x: f64) -> f64;

    fn value_and_derivative(&self, x: f64) -> (f64, f64) {
        (self.value(x), self.derivative(x))
    }

    fn domain(&self) -> Domain;

    fn extent(&self) -> Extent;
}
