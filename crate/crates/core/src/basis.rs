//! Catalogs of analytic Hartree–Fock wavefunctions as Slater-type-orbital
//! expansions, in a line-oriented text format and a JSON mirror.
//!
//! ```text
//! provenance free text
//! atom 2 He
//! shell 1s l=0 occ=2
//! sto n=1 zeta=1.6875 c=1.0
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::radial::{integrate_semi_infinite, sto_radial, QuadratureSpec, RadialFunction};

/// Subshell norms must lie this close to one.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StoPrimitive {
    pub n: u32,
    pub zeta: f64,
    #[serde(rename = "coeff")]
    pub coefficient: f64,
}

impl StoPrimitive {
    /// `N = (2ζ)^(n+1/2) / sqrt((2n)!)`
    pub fn normalization(&self) -> f64 {
        let factorial: f64 = (1..=2 * self.n).map(f64::from).product();
        (2.0 * self.zeta).powf(self.n as f64 + 0.5) / factorial.sqrt()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StoSubshell {
    pub label: String,
    pub l: u32,
    pub occupation: f64,
    pub primitives: Vec<StoPrimitive>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomWavefunction {
    pub z: u32,
    pub symbol: String,
    pub subshells: Vec<StoSubshell>,
}

impl AtomWavefunction {
    pub fn electron_count(&self) -> f64 {
        self.subshells.iter().map(|s| s.occupation).sum()
    }

    /// Every exponent multiplied by `lambda`: `R(r) → λ^(3/2) R(λr)`.
    pub fn scaled(&self, lambda: f64) -> Self {
        let mut out = self.clone();
        for p in out.subshells.iter_mut().flat_map(|s| s.primitives.iter_mut()) {
            p.zeta *= lambda;
        }
        out
    }

    pub fn zeta_max(&self) -> f64 {
        self.subshells
            .iter()
            .flat_map(|s| &s.primitives)
            .map(|p| p.zeta)
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct BasisCatalog {
    atoms: BTreeMap<u32, Arc<AtomWavefunction>>,
    pub provenance: String,
}

impl BasisCatalog {
    pub fn get(&self, z: u32) -> Option<&AtomWavefunction> {
        self.atoms.get(&z).map(|a| a.as_ref())
    }

    pub fn by_symbol(&self, symbol: &str) -> Option<&AtomWavefunction> {
        self.atoms
            .values()
            .map(|a| a.as_ref())
            .find(|a| a.symbol.eq_ignore_ascii_case(symbol))
    }

    pub fn atoms(&self) -> impl Iterator<Item = &AtomWavefunction> {
        self.atoms.values().map(|a| a.as_ref())
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn insert(&mut self, atom: AtomWavefunction) {
        self.atoms.insert(atom.z, Arc::new(atom));
    }

    /// Serializes to the text catalog format; numbers keep full precision.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if !self.provenance.is_empty() {
            let _ = writeln!(out, "provenance {}", self.provenance);
        }
        for atom in self.atoms() {
            let _ = writeln!(out, "atom {} {}", atom.z, atom.symbol);
            for s in &atom.subshells {
                let _ = writeln!(out, "shell {} l={} occ={:?}", s.label, s.l, s.occupation);
                for p in &s.primitives {
                    let _ = writeln!(out, "sto n={} zeta={:?} c={:?}", p.n, p.zeta, p.coefficient);
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let doc = CatalogJson {
            atoms: self.atoms().cloned().collect(),
            provenance: self.provenance.clone(),
        };
        serde_json::to_string_pretty(&doc).expect("catalog serialization cannot fail")
    }
}

#[derive(Serialize, Deserialize)]
struct CatalogJson {
    atoms: Vec<AtomWavefunction>,
    #[serde(default)]
    provenance: String,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BasisError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{atom}{}: {quantity} {observed}", subshell.as_ref().map(|s| format!(" {s}")).unwrap_or_default())]
    Invariant {
        atom: String,
        subshell: Option<String>,
        quantity: String,
        observed: String,
    },
    #[error("z must be at least 1, got {0}")]
    InvalidZ(u32),
    #[error("normalization integral failed for {subshell}: {reason}")]
    NonFinite { subshell: String, reason: String },
}

/// Whether per-subshell normalization is enforced while parsing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormalizationPolicy {
    Enforce,
    /// Structural checks only; the caller inspects norms itself.
    Defer,
}

/// Parses and fully validates a text catalog.
pub fn parse_catalog(input: &str) -> Result<BasisCatalog, BasisError> {
    parse_catalog_with(input, NormalizationPolicy::Enforce)
}

pub fn parse_catalog_with(
    input: &str,
    policy: NormalizationPolicy,
) -> Result<BasisCatalog, BasisError> {
    let mut catalog = BasisCatalog::default();
    let mut current: Option<AtomWavefunction> = None;

    let finish = |atom: Option<AtomWavefunction>, catalog: &mut BasisCatalog| {
        if let Some(atom) = atom {
            validate_atom(&atom, policy)?;
            if catalog.atoms.contains_key(&atom.z) {
                return Err(invariant(&atom, None, "duplicate atom Z =", atom.z));
            }
            catalog.insert(atom);
        }
        Ok(())
    };

    for (idx, raw) in input.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.starts_with('#') {
            continue;
        }
        if line.is_empty() {
            finish(current.take(), &mut catalog)?;
            continue;
        }
        let (keyword, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        let col = |needle: &str| raw.find(needle).map_or(1, |i| i + 1);
        match keyword {
            "provenance" => {
                if !catalog.provenance.is_empty() {
                    catalog.provenance.push(' ');
                }
                catalog.provenance.push_str(rest);
            }
            "atom" => {
                finish(current.take(), &mut catalog)?;
                let mut parts = rest.split_whitespace();
                let z = parts
                    .next()
                    .ok_or_else(|| syntax(line_no, col("atom"), "expected `atom <Z> <symbol>`"))?;
                let z: u32 = z
                    .parse()
                    .map_err(|_| syntax(line_no, col(z), format!("invalid Z `{z}`")))?;
                let symbol = parts
                    .next()
                    .ok_or_else(|| syntax(line_no, col("atom"), "missing element symbol"))?;
                if let Some(extra) = parts.next() {
                    return Err(syntax(line_no, col(extra), format!("unexpected `{extra}`")));
                }
                current = Some(AtomWavefunction {
                    z,
                    symbol: symbol.to_string(),
                    subshells: Vec::new(),
                });
            }
            "shell" => {
                let atom = current
                    .as_mut()
                    .ok_or_else(|| syntax(line_no, 1, "`shell` outside an atom block"))?;
                let mut parts = rest.split_whitespace();
                let label = parts
                    .next()
                    .ok_or_else(|| syntax(line_no, col("shell"), "missing shell label"))?;
                let fields = key_values(parts, line_no, raw, &["l", "occ"])?;
                atom.subshells.push(StoSubshell {
                    label: label.to_string(),
                    l: parse_field(&fields[0], line_no, raw)?,
                    occupation: parse_field(&fields[1], line_no, raw)?,
                    primitives: Vec::new(),
                });
            }
            "sto" => {
                let shell = current
                    .as_mut()
                    .and_then(|a| a.subshells.last_mut())
                    .ok_or_else(|| syntax(line_no, 1, "`sto` outside a shell"))?;
                let fields = key_values(rest.split_whitespace(), line_no, raw, &["n", "zeta", "c"])?;
                shell.primitives.push(StoPrimitive {
                    n: parse_field(&fields[0], line_no, raw)?,
                    zeta: parse_field(&fields[1], line_no, raw)?,
                    coefficient: parse_field(&fields[2], line_no, raw)?,
                });
            }
            other => {
                return Err(syntax(line_no, col(other), format!("unknown keyword `{other}`")));
            }
        }
    }
    finish(current.take(), &mut catalog)?;
    Ok(catalog)
}

/// Parses the JSON mirror of the catalog format.
pub fn parse_catalog_json(
    input: &str,
    policy: NormalizationPolicy,
) -> Result<BasisCatalog, BasisError> {
    let doc: CatalogJson = serde_json::from_str(input).map_err(|e| BasisError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let mut catalog = BasisCatalog {
        atoms: BTreeMap::new(),
        provenance: doc.provenance,
    };
    for atom in doc.atoms {
        validate_atom(&atom, policy)?;
        if catalog.atoms.contains_key(&atom.z) {
            return Err(invariant(&atom, None, "duplicate atom Z =", atom.z));
        }
        catalog.insert(atom);
    }
    Ok(catalog)
}

/// Picks the text or JSON reader from the first non-blank character.
pub fn parse_catalog_auto(
    input: &str,
    policy: NormalizationPolicy,
) -> Result<BasisCatalog, BasisError> {
    if input.trim_start().starts_with('{') {
        parse_catalog_json(input, policy)
    } else {
        parse_catalog_with(input, policy)
    }
}

struct Field<'a> {
    key: &'static str,
    value: &'a str,
}

fn key_values<'a>(
    parts: impl Iterator<Item = &'a str>,
    line: usize,
    raw: &str,
    keys: &[&'static str],
) -> Result<Vec<Field<'a>>, BasisError> {
    let mut found: Vec<Option<&'a str>> = vec![None; keys.len()];
    for part in parts {
        let col = raw.find(part).map_or(1, |i| i + 1);
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| syntax(line, col, format!("expected key=value, got `{part}`")))?;
        let slot = keys
            .iter()
            .position(|key| *key == k)
            .ok_or_else(|| syntax(line, col, format!("unknown field `{k}`")))?;
        if found[slot].replace(v).is_some() {
            return Err(syntax(line, col, format!("duplicate field `{k}`")));
        }
    }
    keys.iter()
        .zip(found)
        .map(|(key, v)| {
            v.map(|value| Field { key, value })
                .ok_or_else(|| syntax(line, 1, format!("missing field `{key}`")))
        })
        .collect()
}

fn parse_field<T: std::str::FromStr>(f: &Field<'_>, line: usize, raw: &str) -> Result<T, BasisError> {
    f.value.parse().map_err(|_| {
        let col = raw.find(&format!("{}=", f.key)).map_or(1, |i| i + 1);
        syntax(line, col, format!("invalid value `{}` for `{}`", f.value, f.key))
    })
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> BasisError {
    BasisError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn invariant(
    atom: &AtomWavefunction,
    subshell: Option<&StoSubshell>,
    quantity: &str,
    observed: impl std::fmt::Display,
) -> BasisError {
    BasisError::Invariant {
        atom: format!("{} (Z={})", atom.symbol, atom.z),
        subshell: subshell.map(|s| s.label.clone()),
        quantity: quantity.to_string(),
        observed: observed.to_string(),
    }
}

fn validate_atom(atom: &AtomWavefunction, policy: NormalizationPolicy) -> Result<(), BasisError> {
    if atom.z == 0 {
        return Err(BasisError::InvalidZ(0));
    }
    if atom.subshells.is_empty() {
        return Err(invariant(atom, None, "subshell count", 0));
    }
    for (i, s) in atom.subshells.iter().enumerate() {
        if atom.subshells[..i].iter().any(|o| o.label == s.label) {
            return Err(invariant(atom, Some(s), "duplicate subshell label", &s.label));
        }
        let capacity = 2.0 * (2.0 * s.l as f64 + 1.0);
        if !(s.occupation >= 0.0 && s.occupation <= capacity) {
            return Err(invariant(
                atom,
                Some(s),
                &format!("occupation outside [0, {capacity}]:"),
                s.occupation,
            ));
        }
        if s.primitives.is_empty() {
            return Err(invariant(atom, Some(s), "primitive count", 0));
        }
        for p in &s.primitives {
            if p.n < 1 || p.n < s.l + 1 {
                return Err(invariant(atom, Some(s), &format!("principal number n < l+1 = {}:", s.l + 1), p.n));
            }
            if !(p.zeta > 0.0 && p.zeta.is_finite()) {
                return Err(invariant(atom, Some(s), "non-positive exponent zeta", p.zeta));
            }
            if !p.coefficient.is_finite() {
                return Err(invariant(atom, Some(s), "non-finite coefficient", p.coefficient));
            }
        }
    }
    let count = atom.electron_count();
    if (count - atom.z as f64).abs() > 1e-9 {
        return Err(invariant(atom, None, "electron count", format!("{count} ≠ Z={}", atom.z)));
    }
    if policy == NormalizationPolicy::Enforce {
        for s in &atom.subshells {
            let norm = validate_normalization(s)?;
            if (norm - 1.0).abs() > NORMALIZATION_TOLERANCE {
                return Err(invariant(atom, Some(s), "norm ∫R²r²dr =", norm));
            }
        }
    }
    Ok(())
}

/// `∫ R(r)² r² dr` of a subshell's radial orbital.
pub fn validate_normalization(subshell: &StoSubshell) -> Result<f64, BasisError> {
    let radial = sto_radial(subshell);
    let spec = QuadratureSpec::default().with_scale(radial.extent().typical);
    integrate_semi_infinite(
        |r| {
            let v = radial.value(r);
            v * v * r * r
        },
        &spec,
    )
    .map(|i| i.value)
    .map_err(|e| BasisError::NonFinite {
        subshell: subshell.label.clone(),
        reason: e.to_string(),
    })
}

const SYMBOLS: [&str; 118] = [
    "H", "He", "Li", "Be", "B", "C", "N", "O", "F", "Ne", "Na", "Mg", "Al", "Si", "P", "S", "Cl",
    "Ar", "K", "Ca", "Sc", "Ti", "V", "Cr", "Mn", "Fe", "Co", "Ni", "Cu", "Zn", "Ga", "Ge", "As",
    "Se", "Br", "Kr", "Rb", "Sr", "Y", "Zr", "Nb", "Mo", "Tc", "Ru", "Rh", "Pd", "Ag", "Cd", "In",
    "Sn", "Sb", "Te", "I", "Xe", "Cs", "Ba", "La", "Ce", "Pr", "Nd", "Pm", "Sm", "Eu", "Gd", "Tb",
    "Dy", "Ho", "Er", "Tm", "Yb", "Lu", "Hf", "Ta", "W", "Re", "Os", "Ir", "Pt", "Au", "Hg", "Tl",
    "Pb", "Bi", "Po", "At", "Rn", "Fr", "Ra", "Ac", "Th", "Pa", "U", "Np", "Pu", "Am", "Cm", "Bk",
    "Cf", "Es", "Fm", "Md", "No", "Lr", "Rf", "Db", "Sg", "Bh", "Hs", "Mt", "Ds", "Rg", "Cn", "Nh",
    "Fl", "Mc", "Lv", "Ts", "Og",
];

/// Element symbol for `z`, if known.
pub fn element_symbol(z: u32) -> Option<&'static str> {
    SYMBOLS.get((z as usize).checked_sub(1)?).copied()
}

/// One-electron hydrogen-like 1s atom with `ζ = z`: an exact oracle, not the
/// neutral many-electron atom.
pub fn builtin_hydrogenic(z: u32) -> Result<AtomWavefunction, BasisError> {
    if z == 0 {
        return Err(BasisError::InvalidZ(z));
    }
    let atom = AtomWavefunction {
        z,
        symbol: element_symbol(z).unwrap_or("X").to_string(),
        subshells: vec![StoSubshell {
            label: "1s".into(),
            l: 0,
            occupation: 1.0,
            primitives: vec![StoPrimitive {
                n: 1,
                zeta: z as f64,
                coefficient: 1.0,
            }],
        }],
    };
    Ok(atom)
}
