//! `atomkit` command-line front end.
//!
//! Exit codes: 0 success, 1 bound violation, 2 usage or input error,
//! 3 computation failure.

mod svg;

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use atomkit::analysis::{figure_columns, AnalysisError, CorrelationReport};
use atomkit::basis::{parse_catalog_auto, validate_normalization, BasisCatalog, NormalizationPolicy, NORMALIZATION_TOLERANCE};
use atomkit::densities::DensityError;
use atomkit::measures::{omega, MeasureError, MeasureSet};
use atomkit::periodic::ElementRecord;
use atomkit::{build_series, correlate, figure_series, load_elements, measure_set, CorrelationMethod, QuadratureSpec};
use clap::{Args, Parser, Subcommand, ValueEnum};

const DATA_DIR_ENV: &str = "ATOMKIT_DATA_DIR";
const DENSITY_TOLERANCE: f64 = atomkit::densities::DENSITY_NORMALIZATION_TOLERANCE;

#[derive(Parser)]
#[command(name = "atomkit", version, about = "Information-theoretic measures of atomic densities")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// STO catalog (text or JSON); defaults to $ATOMKIT_DATA_DIR/catalog.txt or the bundled set
    #[arg(long, global = true)]
    catalog: Option<PathBuf>,
    /// Element data CSV; defaults to $ATOMKIT_DATA_DIR/elements.csv or the bundled set
    #[arg(long, global = true)]
    elements: Option<PathBuf>,
    /// Inclusive Z range, `A:B`
    #[arg(long, global = true, value_parser = parse_range)]
    range: Option<(u32, u32)>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Output file (default stdout)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Absolute quadrature tolerance
    #[arg(long, global = true)]
    abs_tol: Option<f64>,
    /// Relative quadrature tolerance
    #[arg(long, global = true)]
    rel_tol: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Every measure of one atom
    Compute {
        #[arg(long, conflicts_with = "symbol", required_unless_present = "symbol")]
        z: Option<u32>,
        #[arg(long)]
        symbol: Option<String>,
    },
    /// Per-Z series table of measures and experimental data
    Table,
    /// Uncertainty bounds and normalization for every atom in range
    Check {
        /// Restrict to these checks
        #[arg(long, value_enum, value_delimiter = ',')]
        only: Vec<Bound>,
    },
    /// Data (or a minimal SVG) behind one figure
    Figure {
        #[arg(long)]
        id: u32,
    },
    /// Correlation between two table columns
    Correlate {
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long, default_value = "pearson")]
        method: CorrelationMethod,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Bound {
    Bbm,
    CramerRao,
    FisherProduct,
    Normalization,
}

impl Bound {
    fn name(self) -> &'static str {
        match self {
            Bound::Bbm => "bbm",
            Bound::CramerRao => "cramer-rao",
            Bound::FisherProduct => "fisher-product",
            Bound::Normalization => "normalization",
        }
    }
}

enum Failure {
    Violation(String),
    Input(String),
    Compute(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Violation(_) => 1,
            Failure::Input(_) => 2,
            Failure::Compute(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Violation(m) | Failure::Input(m) | Failure::Compute(m) => m,
        }
    }
}

impl From<AnalysisError> for Failure {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::InsufficientOverlap(_)
            | AnalysisError::UnknownColumn(_)
            | AnalysisError::UnknownFigure(_)
            | AnalysisError::InsufficientCoverage(_) => Failure::Input(e.to_string()),
            AnalysisError::TooFewPairs { .. } | AnalysisError::Degenerate(_) | AnalysisError::Measure(_) => {
                Failure::Compute(e.to_string())
            }
        }
    }
}

fn parse_range(s: &str) -> Result<(u32, u32), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("expected A:B, got `{s}`"))?;
    let a: u32 = a.trim().parse().map_err(|_| format!("invalid range start `{a}`"))?;
    let b: u32 = b.trim().parse().map_err(|_| format!("invalid range end `{b}`"))?;
    if a == 0 || a > b {
        return Err(format!("range {a}:{b} is empty or starts below 1"));
    }
    Ok((a, b))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("atomkit: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let common = &cli.common;
    let spec = quadrature_spec(common)?;
    let text = match &cli.command {
        Command::Compute { z, symbol } => compute(common, &spec, *z, symbol.as_deref())?,
        Command::Table => table(common, &spec)?,
        Command::Check { only } => return check(common, &spec, only),
        Command::Figure { id } => figure(common, &spec, *id)?,
        Command::Correlate { x, y, method } => correlation(common, &spec, x, y, *method)?,
    };
    emit(common, &text)
}

fn quadrature_spec(common: &Common) -> Result<QuadratureSpec, Failure> {
    let mut spec = QuadratureSpec::default();
    if let Some(t) = common.abs_tol {
        spec.abs_tol = t;
    }
    if let Some(t) = common.rel_tol {
        spec.rel_tol = t;
    }
    spec.validate().map_err(|e| Failure::Input(e.to_string()))?;
    Ok(spec)
}

fn emit(common: &Common, text: &str) -> Result<(), Failure> {
    match &common.out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Failure::Input(format!("stdout: {e}")))
        }
    }
}

/// Explicit flag, then `$ATOMKIT_DATA_DIR/<file>`, then `None` for bundled data.
fn data_source(flag: &Option<PathBuf>, file: &str) -> Option<PathBuf> {
    flag.clone()
        .or_else(|| std::env::var_os(DATA_DIR_ENV).map(|dir| Path::new(&dir).join(file)))
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_catalog(common: &Common, policy: NormalizationPolicy) -> Result<BasisCatalog, Failure> {
    let (text, origin) = match data_source(&common.catalog, "catalog.txt") {
        Some(path) => (read(&path)?, path.display().to_string()),
        None => (atomkit::data::BUNDLED_CATALOG.to_string(), "bundled catalog".to_string()),
    };
    parse_catalog_auto(&text, policy).map_err(|e| Failure::Input(format!("{origin}: {e}")))
}

fn load_element_data(common: &Common) -> Result<Vec<ElementRecord>, Failure> {
    match data_source(&common.elements, "elements.csv") {
        Some(path) => {
            let text = read(&path)?;
            load_elements(text.as_bytes()).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
        }
        None => load_elements(atomkit::data::BUNDLED_ELEMENTS.as_bytes())
            .map_err(|e| Failure::Input(format!("bundled elements: {e}"))),
    }
}

fn in_range(catalog: &BasisCatalog, range: Option<(u32, u32)>) -> BasisCatalog {
    let mut out = BasisCatalog::default();
    out.provenance = catalog.provenance.clone();
    for atom in catalog.atoms() {
        if range.is_none_or(|(a, b)| (a..=b).contains(&atom.z)) {
            out.insert(atom.clone());
        }
    }
    out
}

fn measure_failure(e: MeasureError) -> Failure {
    Failure::Compute(e.to_string())
}

fn compute(common: &Common, spec: &QuadratureSpec, z: Option<u32>, symbol: Option<&str>) -> Result<String, Failure> {
    let catalog = load_catalog(common, NormalizationPolicy::Enforce)?;
    let atom = match (z, symbol) {
        (Some(z), _) => catalog.get(z),
        (None, Some(s)) => catalog.by_symbol(s),
        (None, None) => None,
    }
    .ok_or_else(|| {
        let which = z.map(|z| format!("Z = {z}")).or(symbol.map(String::from)).unwrap_or_default();
        Failure::Input(format!("atom {which} is not in the catalog"))
    })?;
    let mut m = measure_set(atom, spec).map_err(measure_failure)?;

    // Ω needs the reference noble gas; leave it out when that atom is unavailable.
    let elements = load_element_data(common)?;
    if let Some(reference) = elements.iter().find(|e| e.z == atom.z).map(|e| e.noble_ref_z) {
        let i_t_ref = if reference == atom.z {
            Some(m.i_t)
        } else {
            match catalog.get(reference) {
                Some(r) => Some(measure_set(r, spec).map_err(measure_failure)?.i_t),
                None => None,
            }
        };
        m.omega = i_t_ref.map(|r| omega(m.i_t, r)).transpose().map_err(measure_failure)?;
    }

    match common.format.unwrap_or(Format::Json) {
        Format::Json => Ok(pretty(&m)),
        Format::Csv => Ok(format!("{}\n{}\n", MeasureSet::CSV_HEADER, m.csv_row())),
        Format::Svg => Err(Failure::Input("compute supports csv and json".into())),
    }
}

fn pretty<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn series(common: &Common, spec: &QuadratureSpec) -> Result<atomkit::SeriesTable, Failure> {
    let catalog = in_range(&load_catalog(common, NormalizationPolicy::Enforce)?, common.range);
    let elements = load_element_data(common)?;
    Ok(build_series(&catalog, &elements, spec)?)
}

fn table(common: &Common, spec: &QuadratureSpec) -> Result<String, Failure> {
    let t = series(common, spec)?;
    match common.format.unwrap_or(Format::Csv) {
        Format::Csv => Ok(t.to_csv()),
        Format::Json => Ok(t.to_json() + "\n"),
        Format::Svg => Err(Failure::Input("table supports csv and json".into())),
    }
}

fn figure(common: &Common, spec: &QuadratureSpec, id: u32) -> Result<String, Failure> {
    let columns = figure_columns(id)?;
    let t = figure_series(&series(common, spec)?, id)?;
    match common.format.unwrap_or(Format::Csv) {
        Format::Csv => Ok(t.to_csv()),
        Format::Json => Ok(t.to_json() + "\n"),
        Format::Svg => Ok(svg::render(&format!("Figure {id}"), &t, columns)),
    }
}

fn correlation(
    common: &Common,
    spec: &QuadratureSpec,
    x: &str,
    y: &str,
    method: CorrelationMethod,
) -> Result<String, Failure> {
    for name in [x, y] {
        if !atomkit::analysis::COLUMNS.contains(&name) {
            return Err(AnalysisError::UnknownColumn(name.into()).into());
        }
    }
    let t = series(common, spec)?;
    let report: CorrelationReport = correlate(&t, x, y, method)?;
    match common.format.unwrap_or(Format::Json) {
        Format::Json => Ok(pretty(&report)),
        Format::Csv => Ok(format!(
            "x,y,method,n,coefficient\n{},{},{},{},{}\n",
            x,
            y,
            match method {
                CorrelationMethod::Pearson => "pearson",
                CorrelationMethod::Spearman => "spearman",
            },
            report.n,
            report.coefficient
        )),
        Format::Svg => Err(Failure::Input("correlate supports csv and json".into())),
    }
}

#[derive(serde::Serialize)]
struct CheckRow {
    z: u32,
    symbol: String,
    bound: &'static str,
    margin: f64,
    passed: bool,
}

fn check(common: &Common, spec: &QuadratureSpec, only: &[Bound]) -> Result<(), Failure> {
    // Norms are checked here rather than at parse time so a bad catalog is
    // reported as a violation instead of an input error.
    let catalog = in_range(&load_catalog(common, NormalizationPolicy::Defer)?, common.range);
    if catalog.is_empty() {
        return Err(Failure::Input("no catalog atoms in range".into()));
    }
    let wanted = |b: Bound| only.is_empty() || only.contains(&b);
    let mut rows = Vec::new();
    for atom in catalog.atoms() {
        let row = |bound: Bound, margin: f64| CheckRow {
            z: atom.z,
            symbol: atom.symbol.clone(),
            bound: bound.name(),
            margin,
            passed: margin >= 0.0,
        };
        let mut worst = f64::INFINITY;
        for s in &atom.subshells {
            let norm = validate_normalization(s).map_err(|e| Failure::Compute(e.to_string()))?;
            worst = worst.min(NORMALIZATION_TOLERANCE - (norm - 1.0).abs());
        }
        // Measures of an unnormalized atom are meaningless; the density
        // builder refuses them, which is reported as the same violation.
        let measured = if worst >= 0.0 { Some(measure_set(atom, spec)) } else { None };
        let m = match measured {
            Some(Ok(m)) => Some(m),
            Some(Err(MeasureError::Density { source: DensityError::Normalization { norm, .. }, .. })) => {
                worst = worst.min(DENSITY_TOLERANCE - (norm - 1.0).abs());
                None
            }
            Some(Err(e)) => return Err(measure_failure(e)),
            None => None,
        };
        if wanted(Bound::Normalization) || m.is_none() {
            rows.push(row(Bound::Normalization, worst));
        }
        if let Some(m) = m {
            let b = m.bounds();
            if wanted(Bound::Bbm) {
                rows.push(row(Bound::Bbm, b.bbm_margin));
            }
            if wanted(Bound::CramerRao) {
                rows.push(row(Bound::CramerRao, b.cramer_rao_r.min(b.cramer_rao_k)));
            }
            if wanted(Bound::FisherProduct) {
                rows.push(row(Bound::FisherProduct, b.fisher_product_margin));
            }
        }
    }

    let text = match common.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = String::from("z,symbol,bound,margin,status\n");
            for r in &rows {
                let _ = writeln!(s, "{},{},{},{},{}", r.z, r.symbol, r.bound, r.margin, if r.passed { "pass" } else { "FAIL" });
            }
            s
        }
        Format::Json => pretty(&rows),
        Format::Svg => return Err(Failure::Input("check supports csv and json".into())),
    };
    emit(common, &text)?;

    let violations: Vec<String> = rows
        .iter()
        .filter(|r| !r.passed)
        .map(|r| format!("{} bound violated for {} (Z={}), margin {:e}", r.bound, r.symbol, r.z, r.margin))
        .collect();
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Failure::Violation(violations.join("\natomkit: ")))
    }
}
