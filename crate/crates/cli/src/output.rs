//! Artifact writers and renderers: JSON documents, headerless CSV matrices,
//! and the plain-text listings printed by `report` and `truncate`.
//!
//! All JSON is emitted with keys in a fixed order and weights as exact
//! decimal (or `p/q`) strings, so repeated runs produce byte-identical
//! files regardless of thread count.

use std::fs;
use std::path::Path;

use serde_json::{json, Value};

use relsg_core::{
    BoolMatrix, Graph, Partition, Semigroup, SemigroupHom, TruncatedReport, TruncatedSemigroup,
    WeightedMatrix,
};

use crate::CliError;

/// Writes a JSON value pretty-printed with a trailing newline, logging the
/// path to stderr.
pub fn write_json(path: &Path, value: &Value) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("artifact values serialize");
    text.push('\n');
    write_bytes(path, text.as_bytes())
}

/// Writes plain text (a trailing newline is appended if missing), logging
/// the path to stderr.
pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    if text.ends_with('\n') {
        write_bytes(path, text.as_bytes())
    } else {
        let mut owned = text.to_string();
        owned.push('\n');
        write_bytes(path, owned.as_bytes())
    }
}

/// Writes a matrix as headerless CSV, one row per line.
pub fn write_matrix_csv(path: &Path, rows: &[Vec<String>]) -> Result<(), CliError> {
    let body: String = rows
        .iter()
        .map(|row| row.join(","))
        .collect::<Vec<_>>()
        .join("\n");
    write_bytes(path, format!("{body}\n").as_bytes())
}

fn write_bytes(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    eprintln!("wrote {}", path.display());
    Ok(())
}

/// File stem derived from a relation name, matching how graph saving names
/// its CSVs: non-alphanumeric characters become `_`, the rest lowercase.
pub fn relation_file_stem(name: &str) -> String {
    let stem: String = name
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() {
                c.to_ascii_lowercase()
            } else {
                '_'
            }
        })
        .collect();
    if stem.is_empty() {
        "relation".into()
    } else {
        stem
    }
}

/// Boolean matrix as JSON rows of 0/1 integers.
pub fn bool_matrix_json(m: &BoolMatrix) -> Value {
    json!(m.to_rows())
}

/// Weighted matrix as JSON rows of exact decimal (or `p/q`) strings.
pub fn weighted_matrix_json(m: &WeightedMatrix) -> Value {
    json!(m.to_string_rows())
}

/// Boolean matrix as CSV-ready string rows.
pub fn bool_string_rows(m: &BoolMatrix) -> Vec<Vec<String>> {
    m.to_rows()
        .into_iter()
        .map(|row| row.into_iter().map(|v| v.to_string()).collect())
        .collect()
}

/// Shape summary of a graph: node labels, flavour, tie count per relation.
pub fn graph_summary_json(g: &Graph) -> Value {
    let relations: Vec<Value> = match g {
        Graph::Boolean(b) => b
            .relations()
            .iter()
            .map(|(name, m)| json!({"name": name, "ties": m.count_ones()}))
            .collect(),
        Graph::Weighted(w) => w
            .relations()
            .iter()
            .map(|(name, m)| json!({"name": name, "ties": m.positive_pattern().count_ones()}))
            .collect(),
    };
    json!({
        "node_count": g.n(),
        "nodes": g.node_labels(),
        "boolean": g.is_boolean(),
        "relations": relations,
    })
}

/// One-line graph summary for stdout.
pub fn graph_summary_text(g: &Graph) -> String {
    let ties: Vec<String> = match g {
        Graph::Boolean(b) => b
            .relations()
            .iter()
            .map(|(name, m)| format!("{name} ({} ties)", m.count_ones()))
            .collect(),
        Graph::Weighted(w) => w
            .relations()
            .iter()
            .map(|(name, m)| format!("{name} ({} ties)", m.positive_pattern().count_ones()))
            .collect(),
    };
    format!(
        "{} nodes; {} relations: {}; {}",
        g.n(),
        g.r(),
        ties.join(", "),
        if g.is_boolean() { "boolean" } else { "weighted" }
    )
}

/// Partition as readable blocks of node labels, e.g. `{1}  {2, 3}`.
pub fn partition_text(p: &Partition, labels: &[String]) -> String {
    let blocks: Vec<String> = p
        .blocks()
        .iter()
        .map(|block| {
            let members: Vec<&str> = block.iter().map(|&i| labels[i].as_str()).collect();
            format!("{{{}}}", members.join(", "))
        })
        .collect();
    format!("{} blocks: {}", p.num_blocks(), blocks.join("  "))
}

/// Aligns string rows into a two-space-indented, right-justified grid.
pub fn matrix_text(rows: &[Vec<String>]) -> String {
    if rows.is_empty() {
        return String::new();
    }
    let cols = rows[0].len();
    let mut widths = vec![0usize; cols];
    for row in rows {
        for (j, cell) in row.iter().enumerate() {
            widths[j] = widths[j].max(cell.len());
        }
    }
    rows.iter()
        .map(|row| {
            let cells: Vec<String> = row
                .iter()
                .enumerate()
                .map(|(j, cell)| format!("{:>width$}", cell, width = widths[j]))
                .collect();
            format!("  {}", cells.join(" "))
        })
        .collect::<Vec<_>>()
        .join("\n")
}

/// Full semigroup document: generators, elements with words and matrices,
/// and the multiplication table as element indices.
pub fn semigroup_json(s: &Semigroup) -> Value {
    let names = s.generator_names();
    let elements: Vec<Value> = (0..s.len())
        .map(|i| {
            let word: Vec<&str> = s.word(i).iter().map(|&g| names[g].as_str()).collect();
            json!({
                "index": i,
                "label": s.element_label(i),
                "word": word,
                "matrix": bool_matrix_json(s.element(i)),
            })
        })
        .collect();
    let table: Vec<Vec<usize>> = (0..s.len())
        .map(|x| (0..s.len()).map(|y| s.product(x, y)).collect())
        .collect();
    json!({
        "dimension": s.dimension(),
        "generators": names,
        "element_count": s.len(),
        "element_count_without_zero": s.len_without_zero(),
        "zero_index": s.zero_index(),
        "elements": elements,
        "table": table,
    })
}

/// One-line semigroup summary for stdout.
pub fn semigroup_summary_text(s: &Semigroup) -> String {
    match s.zero_index() {
        Some(z) => format!(
            "semigroup closed: {} elements ({} excluding the zero element, first reached by {})",
            s.len(),
            s.len_without_zero(),
            render_generator_word(s.generator_names(), s.word(z)),
        ),
        None => format!("semigroup closed: {} elements (no zero element)", s.len()),
    }
}

fn render_generator_word(names: &[String], word: &[usize]) -> String {
    let parts: Vec<&str> = word.iter().map(|&g| names[g].as_str()).collect();
    if names.iter().all(|n| n.chars().count() == 1) {
        parts.concat()
    } else {
        parts.join("*")
    }
}

/// Full truncated-semigroup document: policy, counts, census, and every
/// element with its shortest word, length, and exact matrix.
pub fn truncated_json(s: &TruncatedSemigroup, report: &TruncatedReport) -> Value {
    let names = s.generator_names();
    let elements: Vec<Value> = (0..s.len())
        .map(|i| {
            let word: Option<Vec<&str>> = s
                .word(i)
                .map(|w| w.iter().map(|&g| names[g].as_str()).collect());
            json!({
                "index": i,
                "label": s.element_label(i),
                "length": s.lengths()[i],
                "word": word,
                "matrix": weighted_matrix_json(s.element(i)),
            })
        })
        .collect();
    json!({
        "k": s.k(),
        "policy": s.policy(),
        "dimension": s.dimension(),
        "generators": names,
        "count_all": report.count_all,
        "count_excluding_generators": report.count_excluding_generators,
        "count_excluding_generators_and_zero": report.count_excluding_generators_and_zero,
        "census": &report.census,
        "stabilization_depth": report.stabilization_depth,
        "zero_status": &report.zero_status,
        "elements": elements,
    })
}

/// Text listing of a truncated semigroup, grouped by word length:
/// generators first, then 2-fold products, 3-fold products, and so on,
/// each element shown with its matrix.
pub fn truncated_listing(s: &TruncatedSemigroup, report: &TruncatedReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "truncated semigroup: k = {}, rounding = {}\n",
        s.k(),
        s.policy().describe()
    ));
    let sink = if s.sink_adjoined() { s.zero_index() } else { None };
    for (length, members) in s.elements_by_length() {
        let members: Vec<usize> = members
            .into_iter()
            .filter(|i| Some(*i) != sink)
            .collect();
        if members.is_empty() {
            continue;
        }
        if length == 1 {
            out.push_str(&format!("generators ({}):\n", members.len()));
        } else {
            out.push_str(&format!("{length}-fold products ({}):\n", members.len()));
        }
        for i in members {
            out.push_str(&format!("{} =\n", s.element_label(i)));
            out.push_str(&matrix_text(&s.element(i).to_string_rows()));
            out.push('\n');
        }
    }
    match (s.zero_index(), s.sink_adjoined()) {
        (Some(z), false) => {
            let word = s.word(z).expect("realized zero has a word");
            let rendered: Vec<&str> = word
                .iter()
                .map(|&g| s.generator_names()[g].as_str())
                .collect();
            out.push_str(&format!(
                "zero: realized; shortest word {} (length {})\n",
                rendered.concat(),
                word.len()
            ));
        }
        (Some(_), true) => out.push_str(
            "zero: adjoined as a sink (every long-enough product truncates to it)\n",
        ),
        (None, _) => out.push_str("zero: absent (the closure is zero-free)\n"),
    }
    out.push_str(&format!(
        "counts: {} all; {} excluding generators; {} excluding generators and zero\n",
        report.count_all,
        report.count_excluding_generators,
        report.count_excluding_generators_and_zero
    ));
    out.push_str(&format!(
        "stabilization depth: {}\n",
        report.stabilization_depth
    ));
    out
}

/// Homomorphism document: element counts, surjectivity, and the mapping as
/// word labels.
pub fn hom_json(h: &SemigroupHom) -> Value {
    let mapping: Vec<Value> = h
        .mapping()
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            json!({
                "from": h.source().element_label(i),
                "to": h.target().element_label(t),
            })
        })
        .collect();
    json!({
        "source_count": h.source().len(),
        "target_count": h.target().len(),
        "surjective": h.is_surjective(),
        "mapping": mapping,
    })
}
