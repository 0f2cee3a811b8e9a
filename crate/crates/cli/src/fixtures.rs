//! Bundled example datasets, available both as in-memory constructors (for
//! tests and the `report` pipeline) and as files materialized by the
//! `fixtures` subcommand.

use std::path::{Path, PathBuf};

use relsg_core::{
    save_graph, save_partition, BoolMatrix, Graph, MultirelationalGraph, Partition,
    WeightedMatrix, WeightedMultirelationalGraph,
};

use crate::CliError;

/// Six-node, two-relation Boolean example: H is a two-generation "oversees"
/// forest, L a reflexive same-group relation.
pub const FIG1: &str = "fig1";

/// 2x2 weighted generators: positive- and negative-affect block densities
/// observed between two factions of a monastery community.
pub const MONKS_DENSITY: &str = "monks-density";

/// Names of every bundled fixture, in listing order.
pub fn names() -> &'static [&'static str] {
    &[FIG1, MONKS_DENSITY]
}

/// One-line description shown by the `fixtures` listing.
pub fn description(name: &str) -> Option<&'static str> {
    match name {
        FIG1 => Some("six nodes, two Boolean relations (oversees / same group), with a three-block partition"),
        MONKS_DENSITY => Some("two 2x2 weighted relations: positive/negative affect densities between two factions"),
        _ => None,
    }
}

fn weight(text: &str) -> relsg_core::Weight {
    text.parse().expect("fixture weights are valid")
}

fn weighted_rows(rows: &[&[&str]]) -> WeightedMatrix {
    WeightedMatrix::from_rows(
        rows.iter()
            .map(|row| row.iter().map(|w| weight(w)).collect())
            .collect(),
    )
    .expect("fixture matrices are well-formed")
}

/// The `fig1` graph.
pub fn fig1_graph() -> Graph {
    let h = BoolMatrix::from_rows(&[
        vec![0, 1, 1, 0, 0, 0],
        vec![0, 0, 0, 1, 0, 0],
        vec![0, 0, 0, 0, 1, 1],
        vec![0, 0, 0, 0, 0, 0],
        vec![0, 0, 0, 0, 0, 0],
        vec![0, 0, 0, 0, 0, 0],
    ]);
    let l = BoolMatrix::from_rows(&[
        vec![1, 0, 0, 0, 0, 0],
        vec![0, 1, 1, 0, 0, 0],
        vec![0, 1, 1, 0, 0, 0],
        vec![0, 0, 0, 1, 1, 1],
        vec![0, 0, 0, 1, 1, 1],
        vec![0, 0, 0, 1, 1, 1],
    ]);
    Graph::Boolean(
        MultirelationalGraph::new(
            (1..=6).map(|i| i.to_string()).collect(),
            vec![("H".into(), h), ("L".into(), l)],
        )
        .expect("fixture graph is well-formed"),
    )
}

/// The three-block partition {1}, {2,3}, {4,5,6} that accompanies `fig1`.
pub fn fig1_three_block_partition() -> Partition {
    Partition::from_blocks(vec![vec![0], vec![1, 2], vec![3, 4, 5]], 6)
        .expect("fixture partition is well-formed")
}

/// The `monks-density` graph.
pub fn monks_density_graph() -> Graph {
    let p = weighted_rows(&[&["0.11", "0.25"], &["0.11", "0.25"]]);
    let n = weighted_rows(&[&["0.17", "0.25"], &["0.19", "0.20"]]);
    Graph::Weighted(
        WeightedMultirelationalGraph::new(
            vec!["F1".into(), "F2".into()],
            vec![("P".into(), p), ("N".into(), n)],
        )
        .expect("fixture graph is well-formed"),
    )
}

/// In-memory constructor lookup by fixture name.
pub fn graph(name: &str) -> Option<Graph> {
    match name {
        FIG1 => Some(fig1_graph()),
        MONKS_DENSITY => Some(monks_density_graph()),
        _ => None,
    }
}

/// Materializes a fixture into `dir`: manifest, one CSV per relation, and —
/// for `fig1` — its three-block partition file. Returns the paths written,
/// manifest first.
pub fn write(name: &str, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let graph = graph(name).ok_or_else(|| {
        CliError::Usage(format!(
            "unknown fixture {name:?}; available: {}",
            names().join(", ")
        ))
    })?;
    let manifest = save_graph(&graph, dir, "manifest.json")?;
    let mut written = vec![manifest];
    for file in relation_file_names(&graph) {
        written.push(dir.join(file));
    }
    if name == FIG1 {
        let path = dir.join("partition3.json");
        save_partition(
            &fig1_three_block_partition(),
            graph.node_labels(),
            &path,
        )?;
        written.push(path);
    }
    Ok(written)
}

/// CSV file names as `save_graph` derives them from relation names.
fn relation_file_names(graph: &Graph) -> Vec<String> {
    graph
        .relation_names()
        .iter()
        .map(|name| format!("{}.csv", crate::output::relation_file_stem(name)))
        .collect()
}
