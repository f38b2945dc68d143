//! Catalog files: JSON descriptions of Lie algebras over ℚ.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize, Serializer};
use vlab_core::lie::{compute_pmap, LieAlgebra, PMap};
use vlab_core::scalar::{format_rational, parse_rational};
use vlab_core::{Matrix, Rational};

pub const SCHEMA_VERSION: u32 = 1;

/// The catalog that ships with the tool.
pub const BUNDLED: &str = include_str!("../catalog.json");

#[derive(Debug, thiserror::Error)]
pub enum CatalogError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid entry {entry:?}: {reason}")]
    Validation { entry: String, reason: String },
    #[error("unknown algebra {0:?}")]
    Unknown(String),
}

/// An exact rational written as `"num/den"`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coeff(pub Rational);

impl Serialize for Coeff {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for Coeff {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map(Coeff).map_err(de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub k: usize,
    pub coeff: Coeff,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketSpec {
    pub i: usize,
    pub j: usize,
    pub terms: Vec<Term>,
}

/// Square matrix stored row-major.
pub type MatrixSpec = Vec<Vec<Coeff>>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case", deny_unknown_fields)]
pub enum Builder {
    Abelian { n: usize },
    Heisenberg {},
    Sl { n: usize },
    RemarkSolvable { n: u32, m: u32 },
    Takiff { base: Box<Builder>, truncation: Vec<u32> },
    Semidirect {
        base: Box<Builder>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        module: Option<Vec<MatrixSpec>>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogEntry {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub brackets: Option<Vec<BracketSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix_rep: Option<Vec<MatrixSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builder: Option<Builder>,
    /// Prime (as a decimal string) to the coordinates of `x_i^[p]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pmap_override: Option<BTreeMap<String, Vec<Vec<u64>>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogFile {
    pub schema: u32,
    pub entries: Vec<CatalogEntry>,
}

/// A validated entry with its algebra built.
#[derive(Debug, Clone)]
pub struct Entry {
    pub spec: CatalogEntry,
    pub algebra: LieAlgebra,
}

impl Entry {
    pub fn name(&self) -> &str {
        &self.spec.name
    }

    /// Canonical JSON of the entry, used for content hashing.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(&self.spec).expect("serializable")
    }

    /// Restricted structure at `p`, from the override table if one is given.
    pub fn pmap(&self, p: u64) -> vlab_core::Result<PMap> {
        match self.spec.pmap_override.as_ref().and_then(|t| t.get(&p.to_string())) {
            Some(images) => PMap::from_images(&self.algebra, p, images.clone()),
            None => compute_pmap(&self.algebra, p),
        }
    }
}

impl fmt::Display for Entry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (dim {})", self.spec.name, self.algebra.dim())
    }
}

fn matrices(specs: &[MatrixSpec]) -> Result<Vec<Matrix<Rational>>, String> {
    specs
        .iter()
        .map(|rows| {
            let n = rows.len();
            if rows.iter().any(|r| r.len() != n) {
                return Err("matrices must be square".to_string());
            }
            Ok(Matrix::from_rows(rows.iter().map(|r| r.iter().map(|c| c.0.clone()).collect()).collect()))
        })
        .collect()
}

fn build(b: &Builder) -> Result<LieAlgebra, String> {
    let alg = match b {
        Builder::Abelian { n } => LieAlgebra::abelian(*n),
        Builder::Heisenberg {} => Ok(LieAlgebra::heisenberg()),
        Builder::Sl { n } => LieAlgebra::sl(*n),
        Builder::RemarkSolvable { n, m } => LieAlgebra::remark_solvable(*n, *m),
        Builder::Takiff { base, truncation } => LieAlgebra::takiff(&build(base)?, truncation),
        Builder::Semidirect { base, module } => {
            let base = build(base)?;
            match module {
                Some(m) => LieAlgebra::semidirect(&base, Some(&matrices(m)?)),
                None => LieAlgebra::semidirect(&base, None),
            }
        }
    };
    alg.map_err(|e| e.to_string())
}

/// Validates an entry and builds its algebra.
pub fn expand(spec: &CatalogEntry) -> Result<Entry, CatalogError> {
    let invalid = |reason: String| CatalogError::Validation { entry: spec.name.clone(), reason };
    let algebra = match (&spec.brackets, &spec.builder) {
        (Some(_), Some(_)) | (None, None) => {
            return Err(invalid("exactly one of brackets and builder must be given".into()));
        }
        (None, Some(b)) => {
            if spec.matrix_rep.is_some() {
                return Err(invalid("matrix_rep comes from the builder".into()));
            }
            build(b).map_err(invalid)?
        }
        (Some(brackets), None) => {
            let basis = spec.basis.clone().ok_or_else(|| invalid("basis is required with brackets".into()))?;
            let dim = spec.dim.ok_or_else(|| invalid("dim is required with brackets".into()))?;
            if basis.len() != dim {
                return Err(invalid(format!("basis has {} labels, dim is {dim}", basis.len())));
            }
            for b in brackets {
                if b.i >= dim || b.j >= dim || b.terms.iter().any(|t| t.k >= dim) {
                    return Err(invalid(format!("bracket index out of range in ({}, {})", b.i, b.j)));
                }
            }
            let rep = spec.matrix_rep.as_deref().map(matrices).transpose().map_err(invalid)?;
            let table = brackets
                .iter()
                .map(|b| (b.i, b.j, b.terms.iter().map(|t| (t.k, t.coeff.0.clone())).collect()))
                .collect();
            LieAlgebra::new(spec.name.clone(), basis, table, rep).map_err(|e| invalid(e.to_string()))?
        }
    };
    if let Some(dim) = spec.dim {
        if dim != algebra.dim() {
            return Err(invalid(format!("dim {dim} does not match the built algebra ({})", algebra.dim())));
        }
    }
    if let Some(basis) = &spec.basis {
        if basis.as_slice() != algebra.labels() {
            return Err(invalid("basis labels do not match the built algebra".into()));
        }
    }
    if let Some(table) = &spec.pmap_override {
        for (p, images) in table {
            let p: u64 = p.parse().map_err(|_| invalid(format!("pmap_override key {p:?} is not a prime")))?;
            PMap::from_images(&algebra, p, images.clone()).map_err(|e| invalid(format!("pmap_override at {p}: {e}")))?;
        }
    }
    let algebra = algebra.with_name(spec.name.clone());
    Ok(Entry { spec: spec.clone(), algebra })
}

/// Parses catalog JSON without building algebras.
pub fn parse_catalog(text: &str) -> Result<CatalogFile, CatalogError> {
    let file: CatalogFile = serde_json::from_str(text).map_err(|e| CatalogError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if file.schema != SCHEMA_VERSION {
        return Err(CatalogError::Parse {
            line: 1,
            column: 1,
            message: format!("unsupported schema {} (expected {SCHEMA_VERSION})", file.schema),
        });
    }
    let mut seen = std::collections::BTreeSet::new();
    for e in &file.entries {
        if !seen.insert(e.name.as_str()) {
            return Err(CatalogError::Validation { entry: e.name.clone(), reason: "duplicate name".into() });
        }
    }
    Ok(file)
}

/// Parses and validates a whole catalog.
pub fn load_catalog_str(text: &str) -> Result<Vec<Entry>, CatalogError> {
    parse_catalog(text)?.entries.iter().map(expand).collect()
}

pub fn load_catalog(path: &Path) -> Result<Vec<Entry>, CatalogError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| CatalogError::Io { path: path.display().to_string(), source })?;
    load_catalog_str(&text)
}

pub fn bundled() -> Vec<Entry> {
    load_catalog_str(BUNDLED).expect("bundled catalog is valid")
}

/// Canonical form: what `serialize(parse(x))` produces.
pub fn normalize(text: &str) -> Result<String, CatalogError> {
    let file = parse_catalog(text)?;
    Ok(serde_json::to_string_pretty(&file).expect("serializable") + "\n")
}

pub fn find<'a>(entries: &'a [Entry], name: &str) -> Result<&'a Entry, CatalogError> {
    entries.iter().find(|e| e.name() == name).ok_or_else(|| CatalogError::Unknown(name.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_catalog_loads() {
        let entries = bundled();
        assert!(entries.len() >= 8);
        for name in [
            "heisenberg",
            "sl2",
            "sl3",
            "takiff_sl2_2",
            "semidirect_sl2_std",
            "remark_solvable_1_1",
            "remark_solvable_1_2",
            "abelian3",
        ] {
            find(&entries, name).unwrap();
        }
    }

    #[test]
    fn bundled_catalog_is_normalized() {
        assert_eq!(normalize(BUNDLED).unwrap(), BUNDLED);
        let again = normalize(&normalize(BUNDLED).unwrap()).unwrap();
        assert_eq!(again, BUNDLED);
    }

    #[test]
    fn out_of_range_bracket() {
        let text = r#"{"schema": 1, "entries": [{"name": "bad", "dim": 2, "basis": ["a", "b"],
            "brackets": [{"i": 0, "j": 5, "terms": []}]}]}"#;
        assert!(matches!(load_catalog_str(text), Err(CatalogError::Validation { .. })));
    }

    #[test]
    fn zero_denominator() {
        let text = r#"{"schema": 1, "entries": [{"name": "bad", "dim": 2, "basis": ["a", "b"],
            "brackets": [{"i": 0, "j": 1, "terms": [{"k": 0, "coeff": "1/0"}]}]}]}"#;
        match load_catalog_str(text) {
            Err(CatalogError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn jacobi_violation_is_rejected() {
        let text = r#"{"schema": 1, "entries": [{"name": "bad", "dim": 3, "basis": ["a", "b", "c"],
            "brackets": [{"i": 0, "j": 1, "terms": [{"k": 0, "coeff": "1"}]},
                         {"i": 1, "j": 2, "terms": [{"k": 1, "coeff": "1"}]},
                         {"i": 0, "j": 2, "terms": [{"k": 1, "coeff": "1"}]}]}]}"#;
        assert!(matches!(load_catalog_str(text), Err(CatalogError::Validation { .. })));
    }

    #[test]
    fn both_or_neither() {
        let text = r#"{"schema": 1, "entries": [{"name": "x"}]}"#;
        assert!(matches!(load_catalog_str(text), Err(CatalogError::Validation { .. })));
    }

    #[test]
    fn builders_match_direct_constructors() {
        let entries = bundled();
        let sl2 = LieAlgebra::sl(2).unwrap();
        let t = find(&entries, "takiff_sl2_2").unwrap();
        assert_eq!(t.algebra.labels(), LieAlgebra::takiff(&sl2, &[2]).unwrap().labels());
        assert_eq!(find(&entries, "sl3").unwrap().algebra.dim(), 8);
    }

    #[test]
    fn override_is_used() {
        let entries = bundled();
        let f = find(&entries, "filiform4").unwrap();
        assert!(f.pmap(5).is_ok());
        assert!(f.pmap(13).is_err());
    }
}
