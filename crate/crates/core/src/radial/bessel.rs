//! Spherical Bessel functions of the first kind, `j_l(x)` for small `l`.
//!
//! Power series below `x = 1`, Miller's downward recurrence for `1 ≤ x < l`
//! and the upward recurrence from `j_0`, `j_1` once `x ≥ l`.

/// Highest order supported (f shells need `l + 1 = 4`; headroom to 7).
pub const MAX_ORDER: usize = 7;

const SERIES_LIMIT: f64 = 1.0;

/// `j_l(x)` for `x ≥ 0`.
pub fn spherical_bessel_j(l: usize, x: f64) -> f64 {
    let mut out = [0.0; MAX_ORDER + 1];
    spherical_bessel_j_upto(l, x, &mut out);
    out[l]
}

/// Fills `out[0..=lmax]` with `j_0(x) … j_lmax(x)`.
///
/// Panics if `lmax > MAX_ORDER`, `out` is too short or `x` is negative.
pub fn spherical_bessel_j_upto(lmax: usize, x: f64, out: &mut [f64]) {
    assert!(lmax <= MAX_ORDER, "spherical Bessel order {lmax} > {MAX_ORDER}");
    assert!(out.len() > lmax);
    assert!(x >= 0.0, "spherical Bessel argument must be non-negative, got {x}");

    if x == 0.0 {
        out[0] = 1.0;
        out[1..=lmax].iter_mut().for_each(|v| *v = 0.0);
        return;
    }
    if x < SERIES_LIMIT {
        for (l, v) in out.iter_mut().enumerate().take(lmax + 1) {
            *v = series(l, x);
        }
        return;
    }

    let (s, c) = x.sin_cos();
    let j0 = s / x;
    out[0] = j0;
    if lmax == 0 {
        return;
    }
    let j1 = (j0 - c) / x;

    if x >= lmax as f64 {
        out[1] = j1;
        for l in 1..lmax {
            out[l + 1] = (2 * l + 1) as f64 / x * out[l] - out[l - 1];
        }
        return;
    }

    // Miller: start well above lmax with an arbitrary seed, recur down and
    // normalise against whichever of j_0, j_1 is larger in magnitude.
    let start = lmax + 16 + x as usize;
    let mut above = 0.0;
    let mut current = 1e-30;
    let mut f0 = 0.0;
    let mut f1 = 0.0;
    for l in (1..=start).rev() {
        let below = (2 * l + 1) as f64 / x * current - above;
        above = current;
        current = below;
        // keep the unnormalised sequence in range
        if current.abs() > 1e250 {
            current *= 1e-250;
            above *= 1e-250;
            out[..=lmax].iter_mut().for_each(|v| *v *= 1e-250);
            f1 *= 1e-250;
        }
        if l - 1 <= lmax {
            out[l - 1] = current;
        }
        match l {
            2 => f1 = current,
            1 => f0 = current,
            _ => {}
        }
    }
    let scale = if j0.abs() >= j1.abs() { j0 / f0 } else { j1 / f1 };
    out[..=lmax].iter_mut().for_each(|v| *v *= scale);
}

/// `j_l(x) = x^l Σ_k (−x²/2)^k / (k! (2l+2k+1)!!)`
fn series(l: usize, x: f64) -> f64 {
    let mut dfact = 1.0;
    for m in 1..=l {
        dfact *= (2 * m + 1) as f64;
    }
    let lead = x.powi(l as i32) / dfact;
    let y = -0.5 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..40 {
        term *= y / (k as f64 * (2 * (l + k) + 1) as f64);
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    lead * sum
}

/// Derivative `j_l'(x)` from neighbouring orders:
/// `(l j_{l−1} − (l+1) j_{l+1}) / (2l+1)`, with `j_0' = −j_1`.
#[inline]
pub fn derivative_from_orders(l: usize, j: &[f64]) -> f64 {
    if l == 0 {
        -j[1]
    } else {
        (l as f64 * j[l - 1] - (l + 1) as f64 * j[l + 1]) / (2 * l + 1) as f64
    }
}
