//! File formats shared with the command-line tool.
//!
//! Matrices and outcome vectors are plain text (see
//! [`BinaryMatrix::to_text`] and [`OutcomeVector::to_text`]). Hypergraphs,
//! colourings and design manifests are JSON with 1-based vertex and edge
//! numbers:
//!
//! ```text
//! {"n":6,"edges":[[1,2,3],[4,5,6]]}
//! {"classes":[[1],[2]]}
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::binmat::BinaryMatrix;
use crate::error::{Error, Result};
use crate::hypergraph::{EdgeColouring, Hypergraph};
use crate::scff::{DesignKind, DesignProvenance, RowOrigin, StructuredDesign};

pub const MANIFEST_VERSION: &str = "scff/1";

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HypergraphJson {
    n: usize,
    edges: Vec<Vec<usize>>,
}

fn one_based(list: &[usize]) -> Vec<usize> {
    list.iter().map(|v| v + 1).collect()
}

fn zero_based(list: &[usize], what: &str) -> Result<Vec<usize>> {
    list.iter()
        .map(|&v| {
            v.checked_sub(1).ok_or_else(|| Error::InvalidParameter(format!("{what} numbers start at 1, found 0")))
        })
        .collect()
}

pub fn hypergraph_to_json(h: &Hypergraph) -> String {
    let raw = HypergraphJson { n: h.n(), edges: h.edges().iter().map(|e| one_based(e)).collect() };
    let mut s = serde_json::to_string(&raw).expect("plain data serializes");
    s.push('\n');
    s
}

pub fn hypergraph_from_json(text: &str) -> Result<Hypergraph> {
    let raw: HypergraphJson = serde_json::from_str(text)?;
    let edges = raw.edges.iter().map(|e| zero_based(e, "vertex")).collect::<Result<Vec<_>>>()?;
    Hypergraph::new(raw.n, edges)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ColouringJson {
    classes: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    strong: bool,
}

pub fn colouring_to_json(c: &EdgeColouring) -> String {
    let raw =
        ColouringJson { classes: c.classes().iter().map(|cl| one_based(cl)).collect(), strong: c.is_flagged_strong() };
    let mut s = serde_json::to_string(&raw).expect("plain data serializes");
    s.push('\n');
    s
}

/// Parses `{"classes": [[edge, ...], ...]}` for a hypergraph with `m` edges.
pub fn colouring_from_json(text: &str, m: usize) -> Result<EdgeColouring> {
    let raw: ColouringJson = serde_json::from_str(text)?;
    let classes = raw.classes.iter().map(|c| zero_based(c, "edge")).collect::<Result<Vec<_>>>()?;
    EdgeColouring::from_classes(m, classes, raw.strong)
}

/// Describes a design written to disk next to its matrix and hypergraph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignManifest {
    pub version: String,
    /// Matrix file, relative to the manifest's directory.
    pub matrix: String,
    /// Hypergraph file, relative to the manifest's directory.
    pub hypergraph: String,
    pub rows: usize,
    pub cols: usize,
    pub r: usize,
    pub kind: DesignKind,
    pub lmax: Option<usize>,
    pub provenance: DesignProvenance,
    pub row_origin: Vec<RowOrigin>,
}

impl DesignManifest {
    pub fn describe(design: &StructuredDesign, matrix: &str, hypergraph: &str) -> Self {
        DesignManifest {
            version: MANIFEST_VERSION.into(),
            matrix: matrix.into(),
            hypergraph: hypergraph.into(),
            rows: design.rows(),
            cols: design.cols(),
            r: design.r,
            kind: design.kind,
            lmax: design.l_max,
            provenance: design.provenance.clone(),
            row_origin: design.row_origin.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

pub fn read_matrix(path: &Path) -> Result<BinaryMatrix> {
    BinaryMatrix::parse_text(&read(path)?)
}

pub fn read_hypergraph(path: &Path) -> Result<Hypergraph> {
    hypergraph_from_json(&read(path)?)
}

/// Writes `PREFIX.txt`, `PREFIX.hypergraph.json` and `PREFIX.json`; returns
/// the manifest path.
pub fn write_design(design: &StructuredDesign, prefix: &Path) -> Result<PathBuf> {
    let base = prefix
        .file_name()
        .and_then(|s| s.to_str())
        .ok_or_else(|| Error::InvalidParameter(format!("output prefix {} has no file name", prefix.display())))?;
    let dir = prefix.parent().unwrap_or(Path::new(""));
    let matrix_name = format!("{base}.txt");
    let hypergraph_name = format!("{base}.hypergraph.json");
    fs::write(dir.join(&matrix_name), design.matrix.to_text())?;
    fs::write(dir.join(&hypergraph_name), hypergraph_to_json(&design.hypergraph))?;
    let manifest = DesignManifest::describe(design, &matrix_name, &hypergraph_name);
    let manifest_path = dir.join(format!("{base}.json"));
    fs::write(&manifest_path, manifest.to_json())?;
    Ok(manifest_path)
}

/// Loads a design from its manifest, checking the version and dimensions.
pub fn read_design(manifest_path: &Path) -> Result<StructuredDesign> {
    let manifest: DesignManifest = serde_json::from_str(&read(manifest_path)?)?;
    if manifest.version != MANIFEST_VERSION {
        return Err(Error::InvalidParameter(format!(
            "manifest version {:?}, expected {MANIFEST_VERSION:?}",
            manifest.version
        )));
    }
    let dir = manifest_path.parent().unwrap_or(Path::new(""));
    let matrix = read_matrix(&dir.join(&manifest.matrix))?;
    let hypergraph = read_hypergraph(&dir.join(&manifest.hypergraph))?;
    if (matrix.rows(), matrix.cols()) != (manifest.rows, manifest.cols) || matrix.cols() != hypergraph.n() {
        return Err(Error::DimensionMismatch(format!(
            "manifest says {}x{}, matrix is {}x{}, hypergraph has {} vertices",
            manifest.rows,
            manifest.cols,
            matrix.rows(),
            matrix.cols(),
            hypergraph.n()
        )));
    }
    if manifest.row_origin.len() != matrix.rows() {
        return Err(Error::DimensionMismatch(format!(
            "{} row origins for {} rows",
            manifest.row_origin.len(),
            matrix.rows()
        )));
    }
    Ok(StructuredDesign {
        matrix,
        hypergraph,
        r: manifest.r,
        kind: manifest.kind,
        l_max: manifest.lmax,
        provenance: manifest.provenance,
        row_origin: manifest.row_origin,
    })
}
