//! Gauss–Legendre panel quadrature on `[0, ∞)` through a coordinate map.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use thiserror::Error;

/// Coordinate map from `t ∈ [0, 1)` onto `r ∈ [0, ∞)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mapping {
    /// `r = s·t/(1−t)`
    Rational { scale: f64 },
    /// `r = −s·ln(1−t)`; exact for pure exponential tails, slow for
    /// polynomial prefactors because of the logarithm at `t = 1`.
    Exponential { scale: f64 },
}

impl Mapping {
    pub fn scale(&self) -> f64 {
        match *self {
            Mapping::Rational { scale } | Mapping::Exponential { scale } => scale,
        }
    }

    pub fn with_scale(&self, scale: f64) -> Self {
        match self {
            Mapping::Rational { .. } => Mapping::Rational { scale },
            Mapping::Exponential { .. } => Mapping::Exponential { scale },
        }
    }

    /// Returns `(r, dr/dt)`.
    #[inline]
    fn forward(&self, t: f64) -> (f64, f64) {
        match *self {
            Mapping::Rational { scale } => {
                let u = 1.0 - t;
                (scale * t / u, scale / (u * u))
            }
            Mapping::Exponential { scale } => {
                let u = 1.0 - t;
                (-scale * (-t).ln_1p(), scale / u)
            }
        }
    }

    fn inverse(&self, r: f64) -> f64 {
        if r.is_infinite() {
            return 1.0;
        }
        match *self {
            Mapping::Rational { scale } => r / (scale + r),
            Mapping::Exponential { scale } => -(-r / scale).exp_m1(),
        }
    }
}

/// Parameters of every numerical integral in the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Gauss–Legendre order per panel for non-oscillatory integrals.
    pub order: usize,
    /// Gauss–Legendre order per half-period panel in the Bessel transform.
    pub oscillatory_order: usize,
    pub mapping: Mapping,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_panels: usize,
    /// Each Bessel-transform panel is split into this many equal sub-panels.
    pub sbt_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            order: 64,
            oscillatory_order: 16,
            mapping: Mapping::Rational { scale: 1.0 },
            abs_tol: 1e-14,
            rel_tol: 1e-12,
            max_panels: 1 << 20,
            sbt_subdivisions: 1,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<(), QuadratureError> {
        let ok = self.order >= 2
            && self.oscillatory_order >= 2
            && self.abs_tol > 0.0
            && self.rel_tol > 0.0
            && self.max_panels >= 2
            && self.sbt_subdivisions >= 1
            && self.mapping.scale() > 0.0
            && self.mapping.scale().is_finite();
        if ok {
            Ok(())
        } else {
            Err(QuadratureError::InvalidSpec(format!("{self:?}")))
        }
    }

    /// Same spec with the coordinate map stretched to `scale`.
    pub fn with_scale(&self, scale: f64) -> Self {
        Self {
            mapping: self.mapping.with_scale(scale),
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    /// Estimated absolute error.
    pub error: f64,
    /// Panel count of the accepted estimate.
    pub panels: usize,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error("no convergence within {panels} panels: best estimate {best:e}, achieved error {error:e}")]
    NonConvergence { best: f64, error: f64, panels: usize },
    #[error("integrand is not finite at r = {at:e}")]
    NonFinite { at: f64 },
    #[error("invalid quadrature spec: {0}")]
    InvalidSpec(String),
}

/// Nodes and weights of an n-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre order must be positive");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            // Tricomi's initial guess, then Newton on P_n.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    /// Integral of `f` over `[a, b]`.
    #[inline]
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Shared rule of order `n`; rules are built once per process.
pub fn gauss_legendre(n: usize) -> &'static GaussLegendre {
    static RULES: OnceLock<Mutex<HashMap<usize, &'static GaussLegendre>>> = OnceLock::new();
    let mut rules = RULES
        .get_or_init(|| Mutex::new(HashMap::new()))
        .lock()
        .expect("quadrature rule cache poisoned");
    rules
        .entry(n)
        .or_insert_with(|| Box::leak(Box::new(GaussLegendre::new(n))))
}

/// Integrates `f` over `[0, ∞)`.
pub fn integrate_semi_infinite<F>(f: F, spec: &QuadratureSpec) -> Result<Integral, QuadratureError>
where
    F: Fn(f64) -> f64,
{
    integrate_to(f, f64::INFINITY, spec)
}

/// Integrates `f` over `[0, upper]` (`upper` may be infinite), mapping the
/// interval onto `[0, t_max]` and doubling the number of equal panels in
/// `t` until two successive estimates agree.
pub fn integrate_to<F>(f: F, upper: f64, spec: &QuadratureSpec) -> Result<Integral, QuadratureError>
where
    F: Fn(f64) -> f64,
{
    spec.validate()?;
    if upper.is_nan() || upper <= 0.0 {
        return Ok(Integral { value: 0.0, error: 0.0, panels: 0 });
    }
    let rule = gauss_legendre(spec.order);
    let t_max = spec.mapping.inverse(upper);
    let estimate = |panels: usize| -> Result<f64, QuadratureError> {
        let width = t_max / panels as f64;
        let mut total = 0.0;
        for p in 0..panels {
            let a = p as f64 * width;
            let b = if p + 1 == panels { t_max } else { a + width };
            let mut bad = None;
            let s = rule.integrate(a, b, |t| {
                let (r, jac) = spec.mapping.forward(t);
                let v = f(r);
                if !v.is_finite() {
                    bad.get_or_insert(r);
                }
                v * jac
            });
            if let Some(at) = bad {
                return Err(QuadratureError::NonFinite { at });
            }
            total += s;
        }
        Ok(total)
    };

    let mut panels = 2;
    let mut previous = estimate(panels)?;
    loop {
        let next_panels = panels * 2;
        if next_panels > spec.max_panels {
            return Err(QuadratureError::NonConvergence {
                best: previous,
                error: f64::NAN,
                panels,
            });
        }
        let current = estimate(next_panels)?;
        let error = (current - previous).abs();
        if error <= spec.abs_tol.max(spec.rel_tol * current.abs()) {
            return Ok(Integral { value: current, error, panels: next_panels });
        }
        if next_panels * 2 > spec.max_panels {
            return Err(QuadratureError::NonConvergence {
                best: current,
                error,
                panels: next_panels,
            });
        }
        panels = next_panels;
        previous = current;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn rule_integrates_polynomials_exactly() {
        let rule = GaussLegendre::new(8);
        let v = rule.integrate(0.0, 2.0, |x| x.powi(15));
        assert!((v - 2f64.powi(16) / 16.0).abs() < 1e-9);
        assert!((rule.weights.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn high_order_rule_weights_sum_to_two() {
        for n in [16, 32, 64, 65] {
            let rule = GaussLegendre::new(n);
            assert!((rule.weights.iter().sum::<f64>() - 2.0).abs() < 1e-13, "n={n}");
        }
    }

    #[test]
    fn exponential_decay() {
        let v = integrate_semi_infinite(|r| (-r).exp(), &QuadratureSpec::default()).unwrap();
        assert!((v.value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn gamma_moment() {
        let v = integrate_semi_infinite(|r| r * r * (-2.0 * r).exp(), &QuadratureSpec::default())
            .unwrap();
        assert!((v.value - 0.25).abs() < 1e-10);
    }

    #[test]
    fn rational_integrand_beta_identity() {
        let v = integrate_semi_infinite(|k| k.powi(4) / (1.0 + k * k).powi(6), &QuadratureSpec::default())
            .unwrap();
        assert!((v.value - 3.0 * PI / 512.0).abs() < 1e-10);
    }

    #[test]
    fn exponential_mapping_agrees() {
        let spec = QuadratureSpec {
            mapping: Mapping::Exponential { scale: 2.0 },
            ..Default::default()
        };
        // e^(−r) and e^(−3r) map to polynomials in t
        let v = integrate_semi_infinite(|r| (-r).exp(), &spec).unwrap();
        assert!((v.value - 1.0).abs() < 1e-13);
        let v = integrate_semi_infinite(|r| (-3.0 * r).exp(), &spec).unwrap();
        assert!((v.value - 1.0 / 3.0).abs() < 1e-13);
    }

    #[test]
    fn finite_upper_limit() {
        let v = integrate_to(|r| r, 2.0, &QuadratureSpec::default()).unwrap();
        assert!((v.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn nan_integrand_is_reported() {
        let err = integrate_semi_infinite(|r| if r > 1.0 { f64::NAN } else { r }, &QuadratureSpec::default())
            .unwrap_err();
        assert!(matches!(err, QuadratureError::NonFinite { at } if at > 1.0));
    }

    #[test]
    fn panel_cap_reports_best_estimate() {
        let spec = QuadratureSpec { max_panels: 4, order: 2, ..Default::default() };
        let err = integrate_semi_infinite(|r| (-r).exp() * (10.0 * r).cos(), &spec).unwrap_err();
        assert!(matches!(err, QuadratureError::NonConvergence { best, .. } if best.is_finite()));
    }

    #[test]
    fn invalid_spec_rejected() {
        let spec = QuadratureSpec { abs_tol: 0.0, ..Default::default() };
        assert!(integrate_semi_infinite(|r| (-r).exp(), &spec).is_err());
    }
}
