//! Acceptance suite. Each test writes one `[PASS]`/`[FAIL]` line to stderr
//! (uncaptured) and then asserts.

use std::f64::consts::PI;
use std::io::Write as _;
use std::process::Command;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use atomkit::analysis::{trend_checks, SeriesTable};
use atomkit::basis::{builtin_hydrogenic, parse_catalog, BasisCatalog};
use atomkit::densities::radial_moment;
use atomkit::measures::{bbm_bound, fisher, onicescu, shannon, MeasureSet};
use atomkit::radial::{integrate_to, sbt, sto_radial, Domain, RadialFunction};
use atomkit::{
    build_series, correlate, load_elements, measure_set, momentum_density, position_density, CorrelationMethod,
    QuadratureSpec, RadialDensity,
};

fn report(criterion: u32, passed: bool, detail: &str) {
    let line = format!(
        "acceptance criterion {criterion}: [{}] {detail}\n",
        if passed { "PASS" } else { "FAIL" }
    );
    // bypasses the test harness capture so the line always shows
    let _ = std::io::stderr().write_all(line.as_bytes());
}

fn catalog() -> &'static BasisCatalog {
    static CATALOG: OnceLock<BasisCatalog> = OnceLock::new();
    CATALOG.get_or_init(|| parse_catalog(atomkit::data::BUNDLED_CATALOG).unwrap())
}

/// Measure sets of Z = 1–18, computed once for criteria 2–4.
fn all_measures() -> &'static [MeasureSet] {
    static SETS: OnceLock<Vec<MeasureSet>> = OnceLock::new();
    SETS.get_or_init(|| {
        let spec = QuadratureSpec::default();
        catalog().atoms().map(|a| measure_set(a, &spec).unwrap()).collect()
    })
}

fn gaussian(space: Domain) -> RadialDensity {
    let c = PI.powf(-1.5);
    RadialDensity::from_fn(space, 1.0, 1.0, f64::INFINITY, move |x| {
        let v = c * (-x * x).exp();
        (v, -2.0 * x * v)
    })
}

fn conjugate_gaussians() -> MeasureSet {
    let spec = QuadratureSpec::default();
    MeasureSet::from_densities(0, "G", &gaussian(Domain::Position), &gaussian(Domain::Momentum), &spec).unwrap()
}

fn close(got: f64, want: f64, tol: f64) -> bool {
    (got - want).abs() <= tol
}

#[test]
fn criterion_1_hydrogen_exact_suite() {
    let start = Instant::now();
    let spec = QuadratureSpec::default();
    let h = builtin_hydrogenic(1).unwrap();
    let m = measure_set(&h, &spec).unwrap();
    let rho = position_density(&h).unwrap();
    let n = momentum_density(&h, &spec).unwrap();
    let r1 = radial_moment(&rho, 1, &spec).unwrap();
    let r2 = radial_moment(&rho, 2, &spec).unwrap();
    let k2 = radial_moment(&n, 2, &spec).unwrap();
    let elapsed = start.elapsed();

    // closed forms, cross-checked with an independent arbitrary-precision evaluation
    let checks = [
        ("S_r", m.s_r, 3.0 + PI.ln(), 1e-8),
        ("I_r", m.i_r, 4.0, 1e-8),
        ("I_k", m.i_k, 12.0, 1e-6),
        ("I_T", m.i_t, 48.0, 1e-5),
        ("E_r", m.e_r, 1.0 / (8.0 * PI), 1e-10),
        ("E_k", m.e_k, 33.0 / (16.0 * PI * PI), 1e-8),
        ("<r>", r1, 1.5, 1e-8),
        ("<r2>", r2, 3.0, 1e-8),
        ("<k2>", k2, 1.0, 1e-8),
    ];
    let mut detail = String::new();
    let mut ok = elapsed < Duration::from_secs(5);
    for (name, got, want, tol) in checks {
        let pass = close(got, want, tol);
        ok &= pass;
        detail += &format!("{name} err {:.1e}{}; ", (got - want).abs(), if pass { "" } else { " (over)" });
    }
    detail += &format!("runtime {:.2}s", elapsed.as_secs_f64());
    report(1, ok, &detail);
    assert!(ok, "{detail}");
}

#[test]
fn criterion_2_bbm_bound() {
    let bound = bbm_bound();
    let mut ok = close(bound, 6.434_189_657_548_2, 1e-12);
    let mut margins = Vec::new();
    for m in all_measures() {
        let margin = m.s_t - bound;
        ok &= margin >= 0.0;
        margins.push(format!("{} {margin:.5}", m.symbol));
    }
    let g = conjugate_gaussians();
    let saturation = (g.s_t - bound).abs();
    ok &= saturation < 1e-8;
    let detail = format!(
        "S_T ≥ {bound:.7} for Z=1–18, margins [{}]; Gaussian |S_T − bound| = {saturation:.1e}",
        margins.join(", ")
    );
    report(2, ok, &detail);
    assert!(ok, "{detail}");
}

#[test]
fn criterion_3_fisher_product_bound() {
    let mut ok = true;
    let mut lowest = (f64::INFINITY, String::new());
    for m in all_measures() {
        ok &= m.i_t >= 36.0;
        if m.i_t < lowest.0 {
            lowest = (m.i_t, m.symbol.clone());
        }
    }
    let g = conjugate_gaussians();
    ok &= close(g.i_t, 36.0, 1e-8);
    let detail = format!(
        "min I_T over Z=1–18 is {:.6} ({}); Gaussian I_T − 36 = {:.1e}",
        lowest.0,
        lowest.1,
        g.i_t - 36.0
    );
    report(3, ok, &detail);
    assert!(ok, "{detail}");
}

#[test]
fn criterion_4_cramer_rao() {
    let mut ok = true;
    let (mut min_r, mut min_k) = (f64::INFINITY, f64::INFINITY);
    for m in all_measures() {
        let (r, k) = (m.i_r * m.v_r, m.i_k * m.v_k);
        ok &= r >= 1.0 && k >= 1.0;
        min_r = min_r.min(r);
        min_k = min_k.min(k);
    }
    let detail = format!("min I_r<r²> = {min_r:.6}, min I_k<k²> = {min_k:.6} over Z=1–18");
    report(4, ok, &detail);
    assert!(ok, "{detail}");
}

#[test]
fn criterion_5_scaling_invariance() {
    let spec = QuadratureSpec::default();
    let mut ok = true;
    let mut worst = [0.0f64; 4];
    for z in [1, 2, 10] {
        let atom = if z == 1 { builtin_hydrogenic(1).unwrap() } else { catalog().get(z).unwrap().clone() };
        let base = measure_set(&atom, &spec).unwrap();
        for lambda in [0.5f64, 2.0] {
            let m = measure_set(&atom.scaled(lambda), &spec).unwrap();
            let errs = [
                (m.s_t - base.s_t).abs(),
                (m.i_t - base.i_t).abs(),
                (m.s_r - (base.s_r - 3.0 * lambda.ln())).abs(),
                (m.i_r - lambda * lambda * base.i_r).abs(),
            ];
            for (w, e) in worst.iter_mut().zip(errs) {
                *w = w.max(e);
                ok &= e <= 1e-6;
            }
        }
    }
    let detail = format!(
        "H, He, Ne at λ ∈ {{0.5, 2}}: max |ΔS_T| {:.1e}, |ΔI_T| {:.1e}, |S_r shift error| {:.1e}, |I_r λ² error| {:.1e}",
        worst[0], worst[1], worst[2], worst[3]
    );
    report(5, ok, &detail);
    assert!(ok, "{detail}");
}

#[test]
fn criterion_6_normalization_and_parseval() {
    let spec = QuadratureSpec::default();
    let mut ok = true;
    let (mut worst_density, mut worst_orbital) = (0.0f64, 0.0f64);
    for atom in catalog().atoms() {
        let rho = position_density(atom).unwrap();
        let n = momentum_density(atom, &spec).unwrap();
        for d in [&rho, &n] {
            let e = (radial_moment(d, 0, &spec).unwrap() - 1.0).abs();
            worst_density = worst_density.max(e);
            ok &= e <= 1e-7;
        }
        for s in &atom.subshells {
            let m = sbt(std::sync::Arc::new(sto_radial(s)), s.l, &spec).unwrap();
            let ext = m.extent();
            let norm = integrate_to(|k| m.value(k).powi(2) * k * k, ext.cutoff, &spec.with_scale(ext.typical))
                .unwrap()
                .value;
            worst_orbital = worst_orbital.max((norm - 1.0).abs());
            ok &= (norm - 1.0).abs() <= 1e-7;
        }
    }
    let detail = format!(
        "Z=1–18: max |∫ρ − 1|, |∫n − 1| = {worst_density:.1e}; max per-subshell momentum norm error {worst_orbital:.1e}"
    );
    report(6, ok, &detail);
    assert!(ok, "{detail}");
}

/// Series for Z = 1–18 with the runtime of building it.
fn timed_series() -> (SeriesTable, Duration) {
    let start = Instant::now();
    let elements = load_elements(atomkit::data::BUNDLED_ELEMENTS.as_bytes()).unwrap();
    let t = build_series(catalog(), &elements, &QuadratureSpec::default()).unwrap();
    (t, start.elapsed())
}

#[test]
fn criterion_7_figure_trends() {
    let start = Instant::now();
    let (t, build) = timed_series();
    let trends = trend_checks(&t).unwrap();
    let spearman = correlate(&t, "i_t", "inv_ip", CorrelationMethod::Spearman).unwrap();
    let pearson = correlate(&t, "i_t", "inv_ip", CorrelationMethod::Pearson).unwrap();
    let elapsed = start.elapsed();

    let v = |name: &str, z: u32| t.value(name, z).unwrap();
    let a = v("i_t", 3) > v("i_t", 2) && v("i_t", 11) > v("i_t", 10);
    let b = spearman.coefficient > 0.0;
    let c = trends.complexity_slope < 0.0
        && trends.get("complexity_oscillates").unwrap().passed
        && trends.get("complexity_decreasing").unwrap().passed;
    let nobles_zero = [2, 10, 18].iter().all(|&z| v("omega", z) == 0.0);
    // stepping from each noble gas to the alkali that follows it
    let rises = |noble: u32| v("omega", noble + 1) > v("omega", noble);
    let d = nobles_zero && rises(2) && rises(10) && trends.get("omega_rises_after_noble_gases").unwrap().passed;
    let fast = elapsed < Duration::from_secs(120);
    let ok = a && b && c && d && fast;
    let detail = format!(
        "(a) {a}: I_T He {:.4} → Li {:.4}, Ne {:.4} → Na {:.4}; (b) {b}: Spearman(I_T, 1/IP) = {:.6} (Pearson {:.6}, n = {}); \
         (c) {c}: slope of ln C = {:.6}, {}; (d) {d}: Ω(He, Ne, Ar) = 0, Ω(Li) = {:.4}, Ω(Na) = {:.4}; runtime {:.1}s (series {:.1}s)",
        v("i_t", 2),
        v("i_t", 3),
        v("i_t", 10),
        v("i_t", 11),
        spearman.coefficient,
        pearson.coefficient,
        spearman.n,
        trends.complexity_slope,
        trends.get("complexity_oscillates").unwrap().detail,
        v("omega", 3),
        v("omega", 11),
        elapsed.as_secs_f64(),
        build.as_secs_f64()
    );
    report(7, ok, &detail);
    assert!(ok, "{detail}");
}

/// Trapezoidal rule on a uniform grid in `u = ln x`, `20 000` points over
/// `[1e-8, x_max]`: `4π ∫ g x³ du`.
fn trapezoid_log(g: impl Fn(f64) -> f64, x_max: f64) -> f64 {
    const POINTS: usize = 20_000;
    let (u0, u1) = (1e-8f64.ln(), x_max.ln());
    let h = (u1 - u0) / (POINTS - 1) as f64;
    let mut sum = 0.0;
    for i in 0..POINTS {
        let x = (u0 + i as f64 * h).exp();
        let w = if i == 0 || i == POINTS - 1 { 0.5 } else { 1.0 };
        sum += w * g(x) * x * x * x;
    }
    4.0 * PI * sum * h
}

/// Closed-form hydrogen-like 1s densities with exponent `ζ` and their
/// `(shannon, fisher, onicescu)` integrands.
fn oracle_measures(zeta: f64) -> [[f64; 3]; 2] {
    let rho = |r: f64| zeta.powi(3) / PI * (-2.0 * zeta * r).exp();
    let drho = |r: f64| -2.0 * zeta * rho(r);
    let n = |k: f64| 8.0 * zeta.powi(5) / (PI * PI * (zeta * zeta + k * k).powi(4));
    let dn = |k: f64| -8.0 * k / (zeta * zeta + k * k) * n(k);
    let triple = |d: &dyn Fn(f64) -> f64, dd: &dyn Fn(f64) -> f64, x_max: f64| {
        [
            trapezoid_log(|x| { let v = d(x); if v > 0.0 { -v * v.ln() } else { 0.0 } }, x_max),
            trapezoid_log(|x| { let v = d(x); if v > 0.0 { dd(x).powi(2) / v } else { 0.0 } }, x_max),
            trapezoid_log(|x| d(x).powi(2), x_max),
        ]
    };
    [triple(&rho, &drho, 60.0 / zeta), triple(&n, &dn, 1e5 * zeta)]
}

#[test]
fn criterion_8_trapezoidal_oracle() {
    let spec = QuadratureSpec::default();
    let mut ok = true;
    let mut worst = 0.0f64;
    let he = catalog().get(2).unwrap().clone();
    for (atom, zeta) in [(builtin_hydrogenic(1).unwrap(), 1.0), (he, 1.6875)] {
        let oracle = oracle_measures(zeta);
        let rho = position_density(&atom).unwrap();
        let n = momentum_density(&atom, &spec).unwrap();
        for (space, d) in [rho, n].iter().enumerate() {
            let got = [
                shannon(d, &spec).unwrap(),
                fisher(d, &spec).unwrap(),
                onicescu(d, &spec).unwrap(),
            ];
            for (g, o) in got.iter().zip(oracle[space]) {
                worst = worst.max((g - o).abs());
                ok &= (g - o).abs() <= 1e-5;
            }
        }
    }
    let detail = format!("H and He, both spaces: max |pipeline − trapezoid| = {worst:.1e}");
    report(8, ok, &detail);
    assert!(ok, "{detail}");
}

fn atomkit() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_atomkit"));
    c.env_remove("ATOMKIT_DATA_DIR");
    c
}

#[test]
fn criterion_9_cli_contract() {
    let clean = atomkit().arg("check").output().unwrap();
    let clean_ok = clean.status.code() == Some(0);

    // Li 1s coefficient doubled
    let corrupted = atomkit::data::BUNDLED_CATALOG.replacen("sto n=1 zeta=2.6906 c=1.0", "sto n=1 zeta=2.6906 c=2.0", 1);
    assert_ne!(corrupted, atomkit::data::BUNDLED_CATALOG);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("corrupted.txt");
    std::fs::write(&path, corrupted).unwrap();
    let bad = atomkit().arg("check").arg("--catalog").arg(&path).output().unwrap();
    let stderr = String::from_utf8_lossy(&bad.stderr);
    let bad_ok = bad.status.code() == Some(1) && stderr.contains("normalization") && stderr.contains("Li");

    let run = || atomkit().args(["table", "--range", "1:18"]).output().unwrap();
    let (first, second) = (run(), run());
    let identical = first.status.success() && first.stdout == second.stdout && !first.stdout.is_empty();

    let ok = clean_ok && bad_ok && identical;
    let detail = format!(
        "check on bundled data exits {:?}; corrupted catalog exits {:?} with `{}`; table 1:18 bit-identical across runs: {identical}",
        clean.status.code(),
        bad.status.code(),
        stderr.lines().next().unwrap_or("").trim()
    );
    report(9, ok, &detail);
    assert!(ok, "{detail}");
}
