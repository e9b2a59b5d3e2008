//! Named links with PD codes and expected invariant values.
//!
//! The catalog is a TOML file with one `[[link]]` table per record:
//!
//! ```toml
//! [[link]]
//! name = "trefoil"
//! pd = "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)"
//! freeLoops = 0
//! orientationNote = "as given"
//! source = "standard right-handed diagram"
//!
//! [link.expected.generic]
//! value = "2*p - p^2 + q*r"
//! provenance = "derived: hand skein evaluation"
//! ```
//!
//! `freeLoops` adds crossing-free circles on top of any `O` tokens in `pd`.
//! An `orientationNote` of exactly `search` asks [`verify_catalog`] to try
//! every choice of component orientations before declaring a mismatch.
//! Expected entries are keyed by algebra name (see
//! [`AlgebraInstance::from_name`]) and each needs a provenance string
//! starting with `published:`, `derived:` or `catalog:`.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraInstance, Element};
use crate::diagram::Diagram;
use crate::skein::{invariant, EvalOptions, SkeinError};

/// File name looked up when a catalog path names a directory.
pub const CATALOG_FILE: &str = "catalog.toml";

/// Orientation note that triggers the orientation search.
pub const SEARCH: &str = "search";

pub const PROVENANCE_PREFIXES: [&str; 3] = ["published:", "derived:", "catalog:"];

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("catalog syntax: {0}")]
    Syntax(String),
    #[error("record `{record}`, field `{field}`: {message}")]
    Field { record: String, field: String, message: String },
    #[error("duplicate record `{0}`")]
    Duplicate(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectedValue {
    pub value: String,
    pub provenance: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct RawRecord {
    name: String,
    pd: String,
    #[serde(default)]
    free_loops: usize,
    #[serde(default)]
    orientation_note: String,
    source: String,
    #[serde(default)]
    expected: BTreeMap<String, ExpectedValue>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCatalog {
    #[serde(default)]
    link: Vec<RawRecord>,
}

/// One validated catalog entry.
#[derive(Debug, Clone)]
pub struct LinkRecord {
    pub name: String,
    pub pd: String,
    pub free_loops: usize,
    pub orientation_note: String,
    pub source: String,
    pub expected: BTreeMap<String, ExpectedValue>,
    diagram: Diagram,
}

impl LinkRecord {
    pub fn diagram(&self) -> &Diagram {
        &self.diagram
    }

    pub fn wants_search(&self) -> bool {
        self.orientation_note.trim() == SEARCH
    }

    /// The expected value for `inst`, parsed in its carrier.
    pub fn expected_for(&self, inst: &Arc<AlgebraInstance>) -> Option<Result<Element, CatalogError>> {
        let entry = self.expected.get(&inst.name())?;
        Some(Element::parse(inst, &entry.value).map_err(|e| CatalogError::Field {
            record: self.name.clone(),
            field: format!("expected.{}", inst.name()),
            message: e.to_string(),
        }))
    }
}

/// Reads a catalog file, or `catalog.toml` inside a directory.
pub fn load_catalog(path: impl AsRef<Path>) -> Result<Vec<LinkRecord>, CatalogError> {
    let mut path = path.as_ref().to_path_buf();
    if path.is_dir() {
        path.push(CATALOG_FILE);
    }
    let text = std::fs::read_to_string(&path).map_err(|source| CatalogError::Io { path: path.clone(), source })?;
    parse_catalog(&text)
}

/// Parses and validates catalog text.
pub fn parse_catalog(text: &str) -> Result<Vec<LinkRecord>, CatalogError> {
    let raw: RawCatalog = toml::from_str(text).map_err(|e| CatalogError::Syntax(e.to_string()))?;
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(raw.link.len());
    for r in raw.link {
        if !seen.insert(r.name.clone()) {
            return Err(CatalogError::Duplicate(r.name));
        }
        out.push(validate(r)?);
    }
    Ok(out)
}

fn validate(r: RawRecord) -> Result<LinkRecord, CatalogError> {
    let field = |field: &str, message: String| CatalogError::Field {
        record: r.name.clone(),
        field: field.to_string(),
        message,
    };
    if r.name.trim().is_empty() {
        return Err(field("name", "empty name".into()));
    }
    let loops = " O".repeat(r.free_loops);
    let diagram = Diagram::parse(&format!("{}{loops}", r.pd)).map_err(|e| field("pd", e.to_string()))?;
    if diagram.component_count() == 0 {
        return Err(field("pd", "no components".into()));
    }
    for (alg, ev) in &r.expected {
        let key = format!("expected.{alg}");
        let inst = AlgebraInstance::from_name(alg).map_err(|e| field(&key, e.to_string()))?;
        Element::parse(&inst, &ev.value).map_err(|e| field(&format!("{key}.value"), e.to_string()))?;
        let prov = ev.provenance.trim();
        if !PROVENANCE_PREFIXES.iter().any(|p| prov.starts_with(p) && prov.len() > p.len()) {
            return Err(field(
                &format!("{key}.provenance"),
                format!("missing provenance; expected one of {}", PROVENANCE_PREFIXES.join(" ")),
            ));
        }
    }
    Ok(LinkRecord {
        diagram,
        name: r.name,
        pd: r.pd,
        free_loops: r.free_loops,
        orientation_note: r.orientation_note,
        source: r.source,
        expected: r.expected,
    })
}

/// An orientation choice tried during the search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Orientation {
    /// Indices of the reversed components.
    pub reversed: Vec<usize>,
    pub mirrored: bool,
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rev: Vec<String> = self.reversed.iter().map(usize::to_string).collect();
        write!(f, "reversed [{}]", rev.join(","))?;
        if self.mirrored {
            f.write_str(", mirrored")?;
        }
        Ok(())
    }
}

/// Every reversal pattern of `d`, optionally followed by the same patterns
/// on the mirror image.
pub fn orientations(d: &Diagram, mirror: bool) -> Result<Vec<(Orientation, Diagram)>, SkeinError> {
    let n = d.components().len();
    let mut out = Vec::new();
    let bases: &[bool] = if mirror { &[false, true] } else { &[false] };
    for &mirrored in bases {
        let base = if mirrored { d.mirror() } else { d.clone() };
        for mask in 0u32..(1 << n) {
            let reversed: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            let mut cur = base.clone();
            for &i in &reversed {
                cur = cur.reverse_component(i)?;
            }
            out.push((Orientation { reversed, mirrored }, cur));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    Match,
    Mismatch,
    Error,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyRow {
    pub name: String,
    pub status: RowStatus,
    pub expected: String,
    pub provenance: String,
    /// Value on the diagram as written.
    pub computed: Option<String>,
    /// Orientation that reproduced the expected value, if any.
    pub matched_orientation: Option<Orientation>,
    pub tried: usize,
    pub diagnostic: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub algebra: String,
    pub mirror_retry: bool,
    pub rows: Vec<VerifyRow>,
}

impl VerifyReport {
    pub fn all_match(&self) -> bool {
        self.rows.iter().all(|r| r.status == RowStatus::Match)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            let status = match r.status {
                RowStatus::Match => "match",
                RowStatus::Mismatch => "MISMATCH",
                RowStatus::Error => "ERROR",
            };
            write!(f, "{:<12} {status}", r.name)?;
            if let Some(o) = &r.matched_orientation {
                write!(f, " ({o})")?;
            }
            writeln!(f)?;
            if r.status != RowStatus::Match {
                writeln!(f, "  expected: {}", r.expected)?;
                if let Some(c) = &r.computed {
                    writeln!(f, "  computed: {c}")?;
                }
            }
            if let Some(d) = &r.diagnostic {
                writeln!(f, "  {d}")?;
            }
        }
        Ok(())
    }
}

/// Number of terms in which two values differ.
fn term_distance(a: &Element, b: &Element) -> usize {
    (a.value() - b.value()).num_terms()
}

/// Compares every record carrying an expected value for `inst`.
pub fn verify_catalog(records: &[LinkRecord], inst: &Arc<AlgebraInstance>, mirror_retry: bool) -> VerifyReport {
    let opts = EvalOptions::fast();
    let rows = records
        .iter()
        .filter_map(|r| {
            let entry = r.expected.get(&inst.name())?;
            Some(verify_record(r, entry, inst, &opts, mirror_retry))
        })
        .collect();
    VerifyReport { algebra: inst.name(), mirror_retry, rows }
}

fn verify_record(
    r: &LinkRecord,
    entry: &ExpectedValue,
    inst: &Arc<AlgebraInstance>,
    opts: &EvalOptions,
    mirror_retry: bool,
) -> VerifyRow {
    let mut row = VerifyRow {
        name: r.name.clone(),
        status: RowStatus::Error,
        expected: entry.value.clone(),
        provenance: entry.provenance.clone(),
        computed: None,
        matched_orientation: None,
        tried: 0,
        diagnostic: None,
    };
    let expected = match r.expected_for(inst).expect("entry present") {
        Ok(e) => e,
        Err(e) => {
            row.diagnostic = Some(e.to_string());
            return row;
        }
    };
    let candidates = if r.wants_search() {
        orientations(&r.diagram, mirror_retry)
    } else {
        Ok(vec![(Orientation { reversed: vec![], mirrored: false }, r.diagram.clone())])
    };
    let candidates = match candidates {
        Ok(c) => c,
        Err(e) => {
            row.diagnostic = Some(e.to_string());
            return row;
        }
    };
    let mut closest: Option<(usize, Orientation)> = None;
    for (o, d) in candidates {
        let value = match invariant(&d, inst, opts) {
            Ok(v) => v,
            Err(e) => {
                row.diagnostic = Some(format!("{o}: {e}"));
                return row;
            }
        };
        row.tried += 1;
        if row.computed.is_none() {
            row.computed = Some(value.to_string());
        }
        if value == expected {
            row.status = RowStatus::Match;
            row.computed = Some(value.to_string());
            row.matched_orientation = Some(o);
            return row;
        }
        let dist = term_distance(&value, &expected);
        if closest.as_ref().is_none_or(|(best, _)| dist < *best) {
            closest = Some((dist, o));
        }
    }
    row.status = RowStatus::Mismatch;
    let (dist, o) = closest.expect("at least one candidate");
    let mut diag = format!("no match among {} orientation(s); closest ({o}) differs in {dist} term(s)", row.tried);
    if r.wants_search() && !mirror_retry {
        diag.push_str("; mirror images not tried, rerun with mirror retry");
    }
    row.diagnostic = Some(diag);
    row
}

/// The catalog shipped with the crate.
pub fn bundled_catalog_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(CATALOG_FILE)
}
