//! Spherical Bessel transform of position-space radial orbitals:
//! `R̃(k) = sqrt(2/π) ∫ R(r) j_l(kr) r² dr`.
//!
//! The radial axis is cut into panels no wider than half a period of the
//! kernel (`π/k`) and no wider than half the distance to the origin plus the
//! finest orbital scale. Each panel is integrated with two Gauss–Legendre
//! rules; their difference is the reported error. `dR̃/dk` is obtained by
//! differentiating under the integral sign.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex};

use thiserror::Error;

use super::bessel::{derivative_from_orders, spherical_bessel_j_upto, MAX_ORDER};
use super::quadrature::{gauss_legendre, QuadratureSpec};
use super::{Domain, Extent, RadialFunction};

/// Momentum-space support expressed in multiples of the largest exponent.
/// The Fisher integrand of a cusped orbital decays as `k⁻⁴`, so the tail
/// beyond `2000 ζ` is below 1e-8 of the total.
pub const SUPPORT_PER_ZETA: f64 = 2000.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SbtValue {
    pub value: f64,
    pub derivative: f64,
    /// Estimated absolute error of `value`.
    pub error: f64,
    pub panels: usize,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SbtError {
    #[error("Bessel transform did not converge at k = {k}: {panels} panels exceed the cap, achieved error {error:e}")]
    NonConvergence { k: f64, error: f64, panels: usize },
    #[error("angular momentum l = {0} exceeds the supported maximum")]
    UnsupportedL(u32),
}

/// Momentum-space image of a position-space orbital. Transforms are
/// memoised per `k`, so repeated integrals over the same nodes are cheap.
pub struct MomentumOrbital<F: RadialFunction> {
    orbital: Arc<F>,
    l: usize,
    spec: QuadratureSpec,
    source: Extent,
    cache: Mutex<HashMap<u64, SbtValue>>,
}

impl<F: RadialFunction> std::fmt::Debug for MomentumOrbital<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MomentumOrbital")
            .field("l", &self.l)
            .field("source", &self.source)
            .finish_non_exhaustive()
    }
}

/// Builds the momentum-space orbital of angular momentum `l`.
pub fn sbt<F: RadialFunction>(
    orbital: Arc<F>,
    l: u32,
    spec: &QuadratureSpec,
) -> Result<MomentumOrbital<F>, SbtError> {
    if l as usize + 1 > MAX_ORDER {
        return Err(SbtError::UnsupportedL(l));
    }
    let source = orbital.extent();
    Ok(MomentumOrbital {
        orbital,
        l: l as usize,
        spec: *spec,
        source,
        cache: Mutex::new(HashMap::new()),
    })
}

impl<F: RadialFunction> MomentumOrbital<F> {
    pub fn l(&self) -> u32 {
        self.l as u32
    }

    /// Transform and its k-derivative at `k ≥ 0`.
    pub fn transform(&self, k: f64) -> Result<SbtValue, SbtError> {
        let key = k.to_bits();
        if let Some(v) = self.cache.lock().expect("transform cache poisoned").get(&key) {
            return Ok(*v);
        }
        let v = self.compute(k)?;
        self.cache
            .lock()
            .expect("transform cache poisoned")
            .insert(key, v);
        Ok(v)
    }

    /// Number of panels the transform at `k` will use.
    pub fn panel_count(&self, k: f64) -> usize {
        let mut n = 0;
        self.for_each_panel(k, |_, _| {
            n += 1;
            true
        });
        n
    }

    fn for_each_panel(&self, k: f64, mut visit: impl FnMut(f64, f64) -> bool) {
        let r_max = self.source.cutoff;
        let half_period = if k > 0.0 { PI / k } else { f64::INFINITY };
        let mut a = 0.0;
        while a < r_max {
            let shape_end = a + 0.5 * (a + self.source.finest);
            let wave_end = if half_period.is_finite() {
                ((a / half_period + 1e-9).floor() + 1.0) * half_period
            } else {
                f64::INFINITY
            };
            let b = shape_end.min(wave_end).min(r_max);
            if !visit(a, b) {
                return;
            }
            a = b;
        }
    }

    fn compute(&self, k: f64) -> Result<SbtValue, SbtError> {
        let fine = gauss_legendre(self.spec.oscillatory_order);
        let coarse = gauss_legendre((self.spec.oscillatory_order / 2).max(1));
        let subdivisions = self.spec.sbt_subdivisions.max(1);
        let l = self.l;
        let mut j = [0.0; MAX_ORDER + 1];

        let mut eval = |r: f64| -> (f64, f64) {
            let radial = self.orbital.value(r);
            spherical_bessel_j_upto(l + 1, k * r, &mut j);
            let r2 = r * r;
            (radial * j[l] * r2, radial * derivative_from_orders(l, &j) * r2 * r)
        };

        let mut value = 0.0;
        let mut derivative = 0.0;
        let mut error = 0.0;
        let mut panels = 0;
        let mut capped = false;
        self.for_each_panel(k, |a, b| {
            panels += 1;
            if panels > self.spec.max_panels {
                capped = true;
                return false;
            }
            let width = (b - a) / subdivisions as f64;
            for s in 0..subdivisions {
                let lo = a + s as f64 * width;
                let hi = if s + 1 == subdivisions { b } else { lo + width };
                let half = 0.5 * (hi - lo);
                let mid = 0.5 * (hi + lo);
                let (mut fv, mut fd) = (0.0, 0.0);
                for (x, w) in fine.nodes.iter().zip(&fine.weights) {
                    let (v, d) = eval(mid + half * x);
                    fv += w * v;
                    fd += w * d;
                }
                let mut cv = 0.0;
                for (x, w) in coarse.nodes.iter().zip(&coarse.weights) {
                    cv += w * eval(mid + half * x).0;
                }
                value += fv * half;
                derivative += fd * half;
                error += (fv - cv).abs() * half;
            }
            true
        });

        let norm = (2.0 / PI).sqrt();
        if capped {
            return Err(SbtError::NonConvergence {
                k,
                error: error * norm,
                panels: self.spec.max_panels,
            });
        }
        Ok(SbtValue {
            value: value * norm,
            derivative: derivative * norm,
            error: error * norm,
            panels,
        })
    }
}

impl<F: RadialFunction> RadialFunction for MomentumOrbital<F> {
    /// NaN when the transform fails; integrators report non-finite samples.
    fn value(&self, k: f64) -> f64 {
        self.transform(k).map(|v| v.value).unwrap_or(f64::NAN)
    }

    fn derivative(&self, k: f64) -> f64 {
        self.transform(k).map(|v| v.derivative).unwrap_or(f64::NAN)
    }

    fn value_and_derivative(&self, k: f64) -> (f64, f64) {
        self.transform(k)
            .map(|v| (v.value, v.derivative))
            .unwrap_or((f64::NAN, f64::NAN))
    }

    fn domain(&self) -> Domain {
        Domain::Momentum
    }

    fn extent(&self) -> Extent {
        Extent {
            finest: 1.0 / self.source.cutoff,
            typical: 1.0 / self.source.typical,
            cutoff: SUPPORT_PER_ZETA / self.source.finest,
        }
    }
}
