//! Per-Z series of measures and experimental data, correlation statistics
//! and the projections behind each figure.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::basis::BasisCatalog;
use crate::measures::{measure_set, omega, MeasureError, MeasureSet};
use crate::periodic::{is_group_one, period_of, ElementRecord, NOBLE_GASES};
use crate::radial::QuadratureSpec;

/// Column order of a full series table.
pub const COLUMNS: [&str; 18] = [
    "s_r", "s_k", "s_t", "i_r", "i_k", "i_t", "inv_i_t", "e_r", "e_k", "e_t", "c_lmc", "c_fisher",
    "v_r", "v_k", "omega", "ip", "inv_ip", "alpha_d",
];

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("need ≥ 3 atoms present in both the catalog and the element data, found {0}")]
    InsufficientOverlap(usize),
    #[error("unknown column `{0}`")]
    UnknownColumn(String),
    #[error("need ≥ 3 complete pairs for `{x}` vs `{y}`, found {n}")]
    TooFewPairs { x: String, y: String, n: usize },
    #[error("column `{0}` has zero variance over the complete pairs")]
    Degenerate(String),
    #[error("figure id {0} is not in 1..=6")]
    UnknownFigure(u32),
    #[error("trend checks need {0}")]
    InsufficientCoverage(String),
    #[error(transparent)]
    Measure(#[from] MeasureError),
}

/// Aligned per-Z columns; `None` marks a missing value.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesTable {
    z_values: Vec<u32>,
    columns: Vec<(String, Vec<Option<f64>>)>,
}

impl SeriesTable {
    /// Panics when lengths disagree or `z_values` is not strictly increasing.
    pub fn new(z_values: Vec<u32>, columns: Vec<(String, Vec<Option<f64>>)>) -> Self {
        assert!(z_values.windows(2).all(|w| w[0] < w[1]), "z values must increase");
        for (name, c) in &columns {
            assert_eq!(c.len(), z_values.len(), "column {name} misaligned");
        }
        Self { z_values, columns }
    }

    pub fn z_values(&self) -> &[u32] {
        &self.z_values
    }

    pub fn column_names(&self) -> impl Iterator<Item = &str> {
        self.columns.iter().map(|(n, _)| n.as_str())
    }

    pub fn column(&self, name: &str) -> Option<&[Option<f64>]> {
        self.columns
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, c)| c.as_slice())
    }

    pub fn value(&self, name: &str, z: u32) -> Option<f64> {
        let row = self.z_values.iter().position(|&v| v == z)?;
        self.column(name)?[row]
    }

    pub fn len(&self) -> usize {
        self.z_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z_values.is_empty()
    }

    /// Subset of columns, in the order given.
    pub fn project(&self, names: &[&str]) -> Result<SeriesTable, AnalysisError> {
        let columns = names
            .iter()
            .map(|&n| {
                self.column(n)
                    .map(|c| (n.to_string(), c.to_vec()))
                    .ok_or_else(|| AnalysisError::UnknownColumn(n.to_string()))
            })
            .collect::<Result<_, _>>()?;
        Ok(SeriesTable {
            z_values: self.z_values.clone(),
            columns,
        })
    }

    /// `z,<columns…>` with empty fields for missing values.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("z");
        for (n, _) in &self.columns {
            out.push(',');
            out.push_str(n);
        }
        out.push('\n');
        for (row, z) in self.z_values.iter().enumerate() {
            let _ = write!(out, "{z}");
            for (_, c) in &self.columns {
                out.push(',');
                if let Some(v) = c[row] {
                    let _ = write!(out, "{v}");
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let doc = SeriesJson {
            z: self.z_values.clone(),
            columns: self.columns.iter().cloned().collect(),
        };
        serde_json::to_string_pretty(&doc).expect("series serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        let doc: SeriesJson = serde_json::from_str(text)?;
        Ok(Self::new(doc.z, doc.columns.into_iter().collect()))
    }
}

#[derive(Serialize, Deserialize)]
struct SeriesJson {
    z: Vec<u32>,
    columns: BTreeMap<String, Vec<Option<f64>>>,
}

/// Computes every measure for each Z present in both inputs (in parallel)
/// and lays them out with the experimental columns.
pub fn build_series(
    catalog: &BasisCatalog,
    elements: &[ElementRecord],
    spec: &QuadratureSpec,
) -> Result<SeriesTable, AnalysisError> {
    let rows: Vec<(&ElementRecord, _)> = catalog
        .atoms()
        .filter_map(|atom| elements.iter().find(|e| e.z == atom.z).map(|e| (e, atom)))
        .collect();
    if rows.len() < 3 {
        return Err(AnalysisError::InsufficientOverlap(rows.len()));
    }
    let measures: Vec<MeasureSet> = rows
        .par_iter()
        .map(|(_, atom)| measure_set(atom, spec))
        .collect::<Result<_, _>>()?;

    let i_t_of = |z: u32| measures.iter().find(|m| m.z == z).map(|m| m.i_t);
    let mut columns: Vec<(String, Vec<Option<f64>>)> =
        COLUMNS.iter().map(|n| (n.to_string(), Vec::with_capacity(rows.len()))).collect();
    for ((element, _), m) in rows.iter().zip(&measures) {
        let omega_value = i_t_of(element.noble_ref_z).and_then(|r| omega(m.i_t, r).ok());
        let values = [
            Some(m.s_r),
            Some(m.s_k),
            Some(m.s_t),
            Some(m.i_r),
            Some(m.i_k),
            Some(m.i_t),
            Some(1.0 / m.i_t),
            Some(m.e_r),
            Some(m.e_k),
            Some(m.e_t),
            Some(m.c_lmc),
            Some(m.c_fisher),
            Some(m.v_r),
            Some(m.v_k),
            omega_value,
            element.ip,
            element.ip.map(|ip| 1.0 / ip),
            element.alpha_d,
        ];
        for ((_, col), v) in columns.iter_mut().zip(values) {
            col.push(v);
        }
    }
    Ok(SeriesTable::new(rows.iter().map(|(e, _)| e.z).collect(), columns))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorrelationMethod {
    Pearson,
    Spearman,
}

impl std::str::FromStr for CorrelationMethod {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "pearson" => Ok(Self::Pearson),
            "spearman" => Ok(Self::Spearman),
            other => Err(format!("unknown correlation method `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub method: CorrelationMethod,
    pub n: usize,
    pub coefficient: f64,
    pub columns: (String, String),
}

/// Correlation of two columns over pairwise-complete rows.
pub fn correlate(
    t: &SeriesTable,
    x: &str,
    y: &str,
    method: CorrelationMethod,
) -> Result<CorrelationReport, AnalysisError> {
    let xs = t.column(x).ok_or_else(|| AnalysisError::UnknownColumn(x.into()))?;
    let ys = t.column(y).ok_or_else(|| AnalysisError::UnknownColumn(y.into()))?;
    let (a, b): (Vec<f64>, Vec<f64>) = xs
        .iter()
        .zip(ys)
        .filter_map(|(p, q)| Some(((*p)?, (*q)?)))
        .unzip();
    if a.len() < 3 {
        return Err(AnalysisError::TooFewPairs { x: x.into(), y: y.into(), n: a.len() });
    }
    let coefficient = match method {
        CorrelationMethod::Pearson => pearson(&a, &b),
        CorrelationMethod::Spearman => pearson(&average_ranks(&a), &average_ranks(&b)),
    }
    .map_err(|which| AnalysisError::Degenerate(if which == 0 { x.into() } else { y.into() }))?;
    Ok(CorrelationReport {
        method,
        n: a.len(),
        coefficient,
        columns: (x.into(), y.into()),
    })
}

/// Err carries the index (0 = x, 1 = y) of a zero-variance input.
fn pearson(x: &[f64], y: &[f64]) -> Result<f64, usize> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(0);
    }
    if syy == 0.0 {
        return Err(1);
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// 1-based ranks; ties share their average rank.
fn average_ranks(v: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..v.len()).collect();
    order.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    let mut ranks = vec![0.0; v.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && v[order[j + 1]] == v[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            ranks[idx] = rank;
        }
        i = j + 1;
    }
    ranks
}

/// Columns plotted against Z in each figure.
pub fn figure_columns(figure_id: u32) -> Result<&'static [&'static str], AnalysisError> {
    Ok(match figure_id {
        1 => &["s_t", "ip"],
        2 => &["i_t", "inv_ip"],
        3 => &["omega", "inv_ip"],
        4 => &["i_t", "alpha_d"],
        5 => &["c_fisher"],
        6 => &["e_t", "inv_i_t"],
        other => return Err(AnalysisError::UnknownFigure(other)),
    })
}

pub fn figure_series(t: &SeriesTable, figure_id: u32) -> Result<SeriesTable, AnalysisError> {
    t.project(figure_columns(figure_id)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendReport {
    pub checks: Vec<TrendCheck>,
    /// Least-squares slope of `ln c_fisher` against Z.
    pub complexity_slope: f64,
}

impl TrendReport {
    pub fn get(&self, name: &str) -> Option<&TrendCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Qualitative shape checks on a table spanning at least Z = 1–18.
pub fn trend_checks(t: &SeriesTable) -> Result<TrendReport, AnalysisError> {
    if t.is_empty() {
        return Err(AnalysisError::InsufficientCoverage("a non-empty table".into()));
    }
    let need = |name: &str, z: u32| {
        t.value(name, z)
            .ok_or_else(|| AnalysisError::InsufficientCoverage(format!("{name} at Z = {z}")))
    };
    for z in 1..=18 {
        for name in ["i_t", "c_fisher", "omega", "alpha_d"] {
            need(name, z)?;
        }
    }
    let mut checks = Vec::new();

    let (he, li, ne, na) = (need("i_t", 2)?, need("i_t", 3)?, need("i_t", 10)?, need("i_t", 11)?);
    checks.push(TrendCheck {
        name: "i_t_jumps_after_noble_gases".into(),
        passed: li > he && na > ne,
        detail: format!("I_T: He {he:.6} → Li {li:.6}; Ne {ne:.6} → Na {na:.6}"),
    });

    let alpha: Vec<(u32, f64)> = t
        .z_values()
        .iter()
        .filter_map(|&z| t.value("alpha_d", z).map(|a| (z, a)))
        .collect();
    let maxima: Vec<u32> = (0..alpha.len())
        .filter(|&i| {
            let left = i == 0 || alpha[i].1 > alpha[i - 1].1;
            let right = i + 1 == alpha.len() || alpha[i].1 > alpha[i + 1].1;
            left && right
        })
        .map(|i| alpha[i].0)
        .collect();
    checks.push(TrendCheck {
        name: "alpha_maxima_at_alkali".into(),
        passed: maxima.iter().all(|&z| is_group_one(z)),
        detail: format!("local maxima of alpha_d at Z = {maxima:?}"),
    });

    let pts: Vec<(f64, f64)> = t
        .z_values()
        .iter()
        .filter_map(|&z| t.value("c_fisher", z).filter(|c| *c > 0.0).map(|c| (z as f64, c.ln())))
        .collect();
    let slope = least_squares_slope(&pts);
    checks.push(TrendCheck {
        name: "complexity_decreasing".into(),
        passed: slope < 0.0,
        detail: format!("slope of ln c_fisher vs Z = {slope:.6}"),
    });

    let monotone_in = |period: u32| {
        let seq: Vec<f64> = t
            .z_values()
            .iter()
            .filter(|&&z| period_of(z) == Some(period))
            .filter_map(|&z| t.value("c_fisher", z))
            .collect();
        let up = seq.windows(2).all(|w| w[1] >= w[0]);
        let down = seq.windows(2).all(|w| w[1] <= w[0]);
        up || down
    };
    let (m2, m3) = (monotone_in(2), monotone_in(3));
    checks.push(TrendCheck {
        name: "complexity_oscillates".into(),
        passed: !m2 && !m3,
        detail: format!("c_fisher monotone within period 2: {m2}, period 3: {m3}"),
    });

    let mut omega_ok = true;
    let mut detail = String::new();
    for noble in NOBLE_GASES.iter().copied().filter(|&n| n <= 10) {
        let at_noble = need("omega", noble)?;
        let next = need("omega", noble + 1)?;
        omega_ok &= at_noble == 0.0 && next > at_noble;
        let _ = write!(detail, "Ω({noble}) = {at_noble}, Ω({}) = {next:.6}; ", noble + 1);
    }
    let ar = need("omega", 18)?;
    omega_ok &= ar == 0.0;
    let _ = write!(detail, "Ω(18) = {ar}");
    checks.push(TrendCheck {
        name: "omega_rises_after_noble_gases".into(),
        passed: omega_ok,
        detail,
    });

    Ok(TrendReport { checks, complexity_slope: slope })
}

fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn table(x: &[f64], y: &[f64]) -> SeriesTable {
        let z = (1..=x.len() as u32).collect();
        SeriesTable::new(
            z,
            vec![
                ("x".into(), x.iter().copied().map(Some).collect()),
                ("y".into(), y.iter().copied().map(Some).collect()),
            ],
        )
    }

    fn coef(t: &SeriesTable, a: &str, b: &str, m: CorrelationMethod) -> f64 {
        correlate(t, a, b, m).unwrap().coefficient
    }

    #[test]
    fn identical_and_reversed_columns() {
        let t = table(&[1.0, 5.0, 2.0, 8.0], &[-1.0, -5.0, -2.0, -8.0]);
        for m in [CorrelationMethod::Pearson, CorrelationMethod::Spearman] {
            assert!((coef(&t, "x", "x", m) - 1.0).abs() < 1e-15);
            assert!((coef(&t, "x", "y", m) + 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn three_point_oracle() {
        // Pearson of (1,2,3) vs (1,4,9): sxy = 8, sxx = 2, syy = 98/3
        let t = table(&[1.0, 2.0, 3.0], &[1.0, 4.0, 9.0]);
        let want = 8.0 / (2f64.sqrt() * (98.0f64 / 3.0).sqrt());
        assert!((coef(&t, "x", "y", CorrelationMethod::Pearson) - want).abs() < 1e-14);
        assert!((want - 0.989_743_318_610_787).abs() < 1e-12);
        assert!((coef(&t, "x", "y", CorrelationMethod::Spearman) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn ties_use_average_ranks() {
        assert_eq!(average_ranks(&[3.0, 1.0, 3.0, 2.0]), vec![3.5, 1.0, 3.5, 2.0]);
    }

    #[test]
    fn missing_values_are_skipped_pairwise() {
        let t = SeriesTable::new(
            vec![1, 2, 3, 4, 5],
            vec![
                ("x".into(), vec![Some(1.0), None, Some(3.0), Some(4.0), Some(5.0)]),
                ("y".into(), vec![Some(2.0), Some(9.0), None, Some(8.0), Some(10.0)]),
            ],
        );
        let r = correlate(&t, "x", "y", CorrelationMethod::Pearson).unwrap();
        assert_eq!(r.n, 3);
        let err = correlate(&t.project(&["x"]).unwrap(), "x", "nope", CorrelationMethod::Pearson).unwrap_err();
        assert!(matches!(err, AnalysisError::UnknownColumn(c) if c == "nope"));
    }

    #[test]
    fn degenerate_and_short_inputs() {
        let t = table(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]);
        assert!(matches!(
            correlate(&t, "x", "y", CorrelationMethod::Pearson),
            Err(AnalysisError::Degenerate(c)) if c == "x"
        ));
        let t = table(&[1.0, 2.0], &[1.0, 2.0]);
        assert!(matches!(
            correlate(&t, "x", "y", CorrelationMethod::Spearman),
            Err(AnalysisError::TooFewPairs { n: 2, .. })
        ));
    }

    #[test]
    fn figure_projections() {
        let cols: Vec<(String, Vec<Option<f64>>)> =
            COLUMNS.iter().map(|c| (c.to_string(), vec![Some(1.0); 3])).collect();
        let t = SeriesTable::new(vec![1, 2, 3], cols);
        let f5 = figure_series(&t, 5).unwrap();
        assert_eq!(f5.column_names().collect::<Vec<_>>(), ["c_fisher"]);
        let f2 = figure_series(&t, 2).unwrap();
        assert_eq!(f2.column_names().collect::<Vec<_>>(), ["i_t", "inv_ip"]);
        assert_eq!(f2.z_values(), t.z_values());
        assert!(matches!(figure_series(&t, 0), Err(AnalysisError::UnknownFigure(0))));
        assert!(matches!(figure_series(&t, 7), Err(AnalysisError::UnknownFigure(7))));
    }

    #[test]
    fn trend_checks_need_coverage() {
        let empty = SeriesTable::new(vec![], vec![]);
        assert!(matches!(trend_checks(&empty), Err(AnalysisError::InsufficientCoverage(_))));
        let t = table(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]);
        assert!(matches!(trend_checks(&t), Err(AnalysisError::InsufficientCoverage(_))));
    }

    #[test]
    fn csv_and_json_layout() {
        let t = SeriesTable::new(
            vec![1, 2],
            vec![("a".into(), vec![Some(0.5), None]), ("b".into(), vec![Some(1.0), Some(2.0)])],
        );
        assert_eq!(t.to_csv(), "z,a,b\n1,0.5,1\n2,,2\n");
        let back = SeriesTable::from_json(&t.to_json()).unwrap();
        assert_eq!(back.column("a").unwrap(), t.column("a").unwrap());
        assert_eq!(back.z_values(), t.z_values());
    }

    #[test]
    fn slope_of_a_line() {
        assert!((least_squares_slope(&[(1.0, 3.0), (2.0, 1.0), (3.0, -1.0)]) + 2.0).abs() < 1e-15);
    }

    fn finite_vec() -> impl Strategy<Value = Vec<(f64, f64)>> {
        proptest::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 4..20)
    }

    proptest! {
        #[test]
        fn spearman_invariant_under_monotone_maps(pts in finite_vec()) {
            let x: Vec<f64> = pts.iter().map(|p| p.0).collect();
            let y: Vec<f64> = pts.iter().map(|p| p.1).collect();
            let t = table(&x, &y);
            let cubed: Vec<f64> = x.iter().map(|v| v.powi(3)).collect();
            let expd: Vec<f64> = y.iter().map(|v| v.exp()).collect();
            let base = correlate(&t, "x", "y", CorrelationMethod::Spearman);
            let mapped = correlate(&table(&cubed, &expd), "x", "y", CorrelationMethod::Spearman);
            match (base, mapped) {
                (Ok(a), Ok(b)) => prop_assert!((a.coefficient - b.coefficient).abs() < 1e-12),
                (Err(_), Err(_)) => {}
                (a, b) => prop_assert!(false, "{:?} vs {:?}", a, b),
            }
        }

        #[test]
        fn pearson_invariant_under_positive_affine_maps(pts in finite_vec(), a in 0.1f64..10.0, b in -10.0f64..10.0) {
            let x: Vec<f64> = pts.iter().map(|p| p.0).collect();
            let y: Vec<f64> = pts.iter().map(|p| p.1).collect();
            let mapped: Vec<f64> = x.iter().map(|v| a * v + b).collect();
            if let (Ok(r1), Ok(r2)) = (
                correlate(&table(&x, &y), "x", "y", CorrelationMethod::Pearson),
                correlate(&table(&mapped, &y), "x", "y", CorrelationMethod::Pearson),
            ) {
                prop_assert!((r1.coefficient - r2.coefficient).abs() < 1e-12);
            }
        }

        #[test]
        fn correlation_is_symmetric(pts in finite_vec()) {
            let x: Vec<f64> = pts.iter().map(|p| p.0).collect();
            let y: Vec<f64> = pts.iter().map(|p| p.1).collect();
            let t = table(&x, &y);
            for m in [CorrelationMethod::Pearson, CorrelationMethod::Spearman] {
                if let (Ok(a), Ok(b)) = (correlate(&t, "x", "y", m), correlate(&t, "y", "x", m)) {
                    prop_assert_eq!(a.coefficient, b.coefficient);
                    prop_assert!(a.coefficient.abs() <= 1.0);
                }
            }
        }

        #[test]
        fn projections_keep_rows(n in 3usize..10) {
            let t = table(&vec![1.0; n], &(0..n).map(|i| i as f64).collect::<Vec<_>>());
            let p = t.project(&["y"]).unwrap();
            prop_assert_eq!(p.z_values(), t.z_values());
            prop_assert_eq!(p.column("y").unwrap(), t.column("y").unwrap());
        }
    }
}
