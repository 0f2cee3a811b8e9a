//! Loading and saving of graphs, partitions, and hierarchies.
//!
//! A graph is described by a JSON manifest naming the node labels and one
//! CSV matrix file per relation:
//!
//! ```json
//! {
//!   "nodes": ["1", "2", "3"],
//!   "relations": [{ "name": "H", "file": "h.csv" }]
//! }
//! ```
//!
//! Matrix CSVs hold one row per line, comma separated, no header. Entries
//! are parsed as exact decimal strings (or `p/q` fractions); the Boolean
//! graph flavour is selected when every entry is exactly 0 or 1, the
//! weighted flavour as soon as any entry lies strictly between. Relation
//! file paths are resolved relative to the manifest's directory.
//!
//! A partition file is a JSON object mapping every node label to a block
//! label: `{"1": "B1", "2": "B2", ...}`. Hierarchies are ordered lists of
//! partition files, fine to coarse.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, MultirelationalGraph, NestedHierarchy, Partition, WeightedMultirelationalGraph};
use crate::matrix::{BoolMatrix, WeightedMatrix};
use crate::weight::Weight;

/// The JSON manifest describing a graph on disk.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub nodes: Vec<String>,
    pub relations: Vec<ManifestRelation>,
}

/// One relation entry of a [`Manifest`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ManifestRelation {
    pub name: String,
    pub file: String,
}

/// Reads a weighted matrix from a headerless CSV file.
pub fn load_matrix_csv(path: &Path) -> Result<Vec<Vec<Weight>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_path(path)
        .map_err(|e| Error::Io {
            path: path.display().to_string(),
            source: std::io::Error::other(e.to_string()),
        })?;
    let mut rows: Vec<Vec<Weight>> = Vec::new();
    for (index, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Io {
            path: path.display().to_string(),
            source: std::io::Error::other(e.to_string()),
        })?;
        let line = index + 1;
        let mut row = Vec::with_capacity(record.len());
        for (column, field) in record.iter().enumerate() {
            let value: Weight = field.parse().map_err(|e: Error| Error::CsvEntry {
                path: path.display().to_string(),
                line,
                column: column + 1,
                message: e.to_string(),
            })?;
            row.push(value);
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Loads a graph from a manifest, selecting the Boolean flavour iff every
/// entry of every relation is exactly 0 or 1.
pub fn load_graph(manifest_path: &Path) -> Result<Graph> {
    let text = fs::read_to_string(manifest_path).map_err(|e| Error::io(manifest_path, e))?;
    let manifest: Manifest = serde_json::from_str(&text).map_err(|e| Error::Json {
        path: manifest_path.display().to_string(),
        message: e.to_string(),
    })?;
    let base = manifest_path.parent().unwrap_or(Path::new("."));
    let n = manifest.nodes.len();

    let mut matrices: Vec<(String, Vec<Vec<Weight>>)> = Vec::new();
    for relation in &manifest.relations {
        let path = base.join(&relation.file);
        let rows = load_matrix_csv(&path)?;
        // Row-length and squareness diagnostics carry file context.
        for (index, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::RowLength {
                    path: path.display().to_string(),
                    line: index + 1,
                    expected: n,
                    found: row.len(),
                });
            }
        }
        if rows.len() != n {
            return Err(Error::DimensionMismatch {
                relation: relation.name.clone(),
                expected: n,
                found: rows.len(),
            });
        }
        matrices.push((relation.name.clone(), rows));
    }

    let all_boolean = matrices
        .iter()
        .flat_map(|(_, rows)| rows.iter().flatten())
        .all(Weight::is_boolean);

    if all_boolean {
        let relations = matrices
            .into_iter()
            .map(|(name, rows)| {
                let byte_rows: Vec<Vec<u8>> = rows
                    .iter()
                    .map(|row| row.iter().map(|w| u8::from(w.is_one())).collect())
                    .collect();
                (name, BoolMatrix::from_rows(&byte_rows))
            })
            .collect();
        Ok(Graph::Boolean(MultirelationalGraph::new(
            manifest.nodes,
            relations,
        )?))
    } else {
        let mut relations = Vec::new();
        for (name, rows) in matrices {
            let matrix = WeightedMatrix::from_rows(rows).map_err(|e| match e {
                Error::EntryRange { row, col, value, .. } => Error::EntryRange {
                    relation: name.clone(),
                    row,
                    col,
                    value,
                },
                other => other,
            })?;
            relations.push((name, matrix));
        }
        Ok(Graph::Weighted(WeightedMultirelationalGraph::new(
            manifest.nodes,
            relations,
        )?))
    }
}

/// Writes a graph as a manifest plus one CSV per relation into `dir`.
///
/// Returns the manifest path. File names are derived from relation names.
pub fn save_graph(graph: &Graph, dir: &Path, manifest_name: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut relations = Vec::new();
    let write_csv = |name: &str, rows: Vec<Vec<String>>| -> Result<String> {
        let file = format!("{}.csv", sanitize_file_stem(name));
        let body = rows
            .iter()
            .map(|row| row.join(","))
            .collect::<Vec<_>>()
            .join("\n");
        let path = dir.join(&file);
        fs::write(&path, body + "\n").map_err(|e| Error::io(&path, e))?;
        Ok(file)
    };
    match graph {
        Graph::Boolean(g) => {
            for (name, matrix) in g.relations() {
                let rows = matrix
                    .to_rows()
                    .into_iter()
                    .map(|row| row.into_iter().map(|v| v.to_string()).collect())
                    .collect();
                relations.push(ManifestRelation {
                    name: name.clone(),
                    file: write_csv(name, rows)?,
                });
            }
        }
        Graph::Weighted(g) => {
            for (name, matrix) in g.relations() {
                relations.push(ManifestRelation {
                    name: name.clone(),
                    file: write_csv(name, matrix.to_string_rows())?,
                });
            }
        }
    }
    let manifest = Manifest {
        nodes: graph.node_labels().to_vec(),
        relations,
    };
    let path = dir.join(manifest_name);
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    fs::write(&path, text + "\n").map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

fn sanitize_file_stem(name: &str) -> String {
    let stem: String = name
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c.to_ascii_lowercase() } else { '_' })
        .collect();
    if stem.is_empty() {
        "relation".into()
    } else {
        stem
    }
}

/// Loads a partition file (node label → block label) against a graph's
/// node set, producing the canonical [`Partition`].
pub fn load_partition(path: &Path, node_labels: &[String]) -> Result<Partition> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mapping: serde_json::Map<String, serde_json::Value> = serde_json::from_str(&text)
        .map_err(|e| Error::Json {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
    partition_from_mapping(&mapping, node_labels)
}

fn partition_from_mapping(
    mapping: &serde_json::Map<String, serde_json::Value>,
    node_labels: &[String],
) -> Result<Partition> {
    for key in mapping.keys() {
        if !node_labels.iter().any(|l| l == key) {
            return Err(Error::UnknownNode { label: key.clone() });
        }
    }
    let mut block_labels: Vec<String> = Vec::new();
    let mut raw = Vec::with_capacity(node_labels.len());
    for label in node_labels {
        let value = mapping
            .get(label)
            .ok_or_else(|| Error::MissingNode {
                label: label.clone(),
            })?;
        let block = match value {
            serde_json::Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        if block.is_empty() {
            return Err(Error::EmptyBlockLabel {
                label: label.clone(),
            });
        }
        let index = match block_labels.iter().position(|b| *b == block) {
            Some(i) => i,
            None => {
                block_labels.push(block);
                block_labels.len() - 1
            }
        };
        raw.push(index);
    }
    Ok(Partition::from_assignment(&raw))
}

/// Writes a partition as a node-label → block-label JSON object, in node
/// order, with canonical block labels `B1..Bm`.
pub fn save_partition(partition: &Partition, node_labels: &[String], path: &Path) -> Result<()> {
    let mut mapping = serde_json::Map::new();
    for (node, label) in node_labels.iter().enumerate() {
        let block = partition.block_of(node) + 1;
        mapping.insert(
            label.clone(),
            serde_json::Value::String(format!("B{block}")),
        );
    }
    let text = serde_json::to_string_pretty(&mapping).expect("mapping serializes");
    fs::write(path, text + "\n").map_err(|e| Error::io(path, e))?;
    Ok(())
}

/// Loads an ordered fine-to-coarse list of partition files as a hierarchy.
pub fn load_hierarchy(paths: &[PathBuf], node_labels: &[String]) -> Result<NestedHierarchy> {
    let levels = paths
        .iter()
        .map(|p| load_partition(p, node_labels))
        .collect::<Result<Vec<_>>>()?;
    NestedHierarchy::new(levels, node_labels.len())
}
