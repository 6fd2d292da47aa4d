use super::{Domain, Extent, RadialFunction};
use crate::basis::StoSubshell;

/// Values below this bound `|c N r^(n+2) e^(−ζr)|` are treated as zero when
/// choosing the outer radius.
const TAIL_EPSILON: f64 = 1e-17;

#[derive(Debug, Clone, Copy, PartialEq)]
struct Term {
    /// `c · N`
    prefactor: f64,
    n: i32,
    zeta: f64,
}

/// `R(r) = Σ_j c_j N_j r^(n_j−1) e^(−ζ_j r)` with its exact derivative.
#[derive(Debug, Clone, PartialEq)]
pub struct StoRadial {
    l: u32,
    terms: Vec<Term>,
    extent: Extent,
}

/// Radial orbital of a subshell in position space.
pub fn sto_radial(subshell: &StoSubshell) -> StoRadial {
    let terms: Vec<Term> = subshell
        .primitives
        .iter()
        .map(|p| Term {
            prefactor: p.coefficient * p.normalization(),
            n: p.n as i32,
            zeta: p.zeta,
        })
        .collect();
    let zeta_max = terms.iter().map(|t| t.zeta).fold(0.0, f64::max);
    let typical = terms
        .iter()
        .map(|t| 0.5 * t.n as f64 / t.zeta)
        .fold(0.0, f64::max);
    let cutoff = terms.iter().map(tail_radius).fold(0.0, f64::max);
    StoRadial {
        l: subshell.l,
        terms,
        extent: Extent {
            finest: 1.0 / zeta_max,
            typical,
            cutoff,
        },
    }
}

fn tail_radius(t: &Term) -> f64 {
    let g = |r: f64| t.prefactor.abs() * r.powi(t.n + 2) * (-t.zeta * r).exp();
    let mut lo = (t.n + 2) as f64 / t.zeta;
    if g(lo) < TAIL_EPSILON {
        return lo;
    }
    let mut hi = 2.0 * lo;
    while g(hi) >= TAIL_EPSILON {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if g(mid) >= TAIL_EPSILON {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

impl StoRadial {
    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn zeta_max(&self) -> f64 {
        1.0 / self.extent.finest
    }
}

impl RadialFunction for StoRadial {
    #[inline]
    fn value(&self, r: f64) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                let e = t.prefactor * (-t.zeta * r).exp();
                if t.n == 1 {
                    e
                } else {
                    e * r.powi(t.n - 1)
                }
            })
            .sum()
    }

    fn derivative(&self, r: f64) -> f64 {
        self.value_and_derivative(r).1
    }

    #[inline]
    fn value_and_derivative(&self, r: f64) -> (f64, f64) {
        let mut v = 0.0;
        let mut d = 0.0;
        for t in &self.terms {
            let e = t.prefactor * (-t.zeta * r).exp();
            if t.n == 1 {
                v += e;
                d -= t.zeta * e;
            } else {
                let p = r.powi(t.n - 2);
                v += e * p * r;
                d += e * p * ((t.n - 1) as f64 - t.zeta * r);
            }
        }
        (v, d)
    }

    fn domain(&self) -> Domain {
        Domain::Position
    }

    fn extent(&self) -> Extent {
        self.extent
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{StoPrimitive, StoSubshell};

    fn subshell(label: &str, l: u32, prims: &[(u32, f64, f64)]) -> StoSubshell {
        StoSubshell {
            label: label.into(),
            l,
            occupation: 1.0,
            primitives: prims
                .iter()
                .map(|&(n, zeta, coefficient)| StoPrimitive { n, zeta, coefficient })
                .collect(),
        }
    }

    #[test]
    fn hydrogen_1s_values() {
        let r = sto_radial(&subshell("1s", 0, &[(1, 1.0, 1.0)]));
        assert!((r.value(0.0) - 2.0).abs() < 1e-15);
        let e1 = (-1f64).exp();
        assert!((r.value(1.0) - 2.0 * e1).abs() < 1e-15);
        assert!((r.value(1.0) - 0.735_758_882_342_884_6).abs() < 1e-12);
        assert!((r.derivative(1.0) + 2.0 * e1).abs() < 1e-15);
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let r = sto_radial(&subshell(
            "3s",
            0,
            &[(1, 9.0, -0.1), (2, 3.0, 0.4), (3, 1.1, 0.9)],
        ));
        for &x in &[0.05, 0.7, 2.0, 6.0] {
            let h = 1e-6;
            let fd = (r.value(x + h) - r.value(x - h)) / (2.0 * h);
            assert!((r.derivative(x) - fd).abs() < 1e-5 * fd.abs().max(1.0), "r={x}");
        }
    }

    #[test]
    fn cutoff_leaves_negligible_tail() {
        let r = sto_radial(&subshell("2p", 1, &[(2, 0.5, 1.0)]));
        let c = r.extent().cutoff;
        assert!(r.value(c).abs() * c.powi(3) < 1e-16);
        assert!(c > 50.0);
    }
}
