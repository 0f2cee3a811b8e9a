//! Error type shared by every module of the library.
//!
//! Variants are grouped by the phase in which they arise: ingestion and
//! validation of input artifacts, computation preconditions, and
//! verification failures (imperfect blockmodels, non-nested hierarchies,
//! broken homomorphisms). CLI layers map the groups onto distinct exit
//! codes, so the distinction is part of the public contract.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// All errors produced by this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Underlying I/O failure while reading or writing an artifact.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    /// A JSON artifact could not be parsed.
    #[error("invalid JSON in {path}: {message}")]
    Json { path: String, message: String },

    /// A CSV matrix file had a malformed cell.
    #[error("{path}:{line}: cannot parse matrix entry {column}: {message}")]
    CsvEntry {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },

    /// A CSV matrix row had the wrong number of columns.
    #[error("{path}:{line}: row has {found} columns, expected {expected}")]
    RowLength {
        path: String,
        line: usize,
        expected: usize,
        found: usize,
    },

    /// A relation matrix is not square.
    #[error("relation {relation}: matrix is {rows}x{cols}, expected square")]
    NonSquare {
        relation: String,
        rows: usize,
        cols: usize,
    },

    /// Relation matrices disagree in dimension or do not match the node count.
    #[error("relation {relation}: dimension {found} does not match node count {expected}")]
    DimensionMismatch {
        relation: String,
        expected: usize,
        found: usize,
    },

    /// A weight lies outside the unit interval.
    #[error("relation {relation} entry ({row},{col}): value {value} outside [0,1]")]
    EntryRange {
        relation: String,
        row: usize,
        col: usize,
        value: String,
    },

    /// Two relations share a name.
    #[error("duplicate relation name {name:?}")]
    DuplicateRelation { name: String },

    /// A graph must contain at least one relation.
    #[error("graph has no relations")]
    NoRelations,

    /// A numeric string is not a valid nonnegative decimal or fraction.
    #[error("cannot parse weight {input:?}: {message}")]
    InvalidWeight { input: String, message: String },

    /// A partition file referenced a node absent from the graph.
    #[error("partition references unknown node {label:?}")]
    UnknownNode { label: String },

    /// A partition file failed to cover a node of the graph.
    #[error("partition does not assign node {label:?} to a block")]
    MissingNode { label: String },

    /// A partition file mapped a node to an empty block label.
    #[error("node {label:?} is assigned an empty block label")]
    EmptyBlockLabel { label: String },

    /// Raw partition blocks do not form a partition of the index set.
    #[error("blocks do not partition the node set: {message}")]
    InvalidBlocks { message: String },

    /// Two hierarchy levels fail to nest.
    #[error(
        "hierarchy level {level} does not coarsen level {previous}: \
         the block of node indices {{{block}}} straddles two coarser blocks"
    )]
    NotNested {
        level: usize,
        previous: usize,
        block: String,
    },

    /// A node index was out of range.
    #[error("node index {index} out of range for a graph of {size} nodes")]
    IndexOutOfRange { index: usize, size: usize },

    /// A word referenced a relation name the graph lacks.
    #[error("unknown relation {name:?}")]
    UnknownRelation { name: String },

    /// Compound-relation words must mention at least one relation.
    #[error("empty relation word")]
    EmptyWord,

    /// Matrix operands are not conformable.
    #[error("matrix dimensions {left_rows}x{left_cols} and {right_rows}x{right_cols} are not conformable")]
    NotConformable {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },

    /// Closure generation hit the element cap.
    #[error(
        "element cap {cap} exceeded: reached {reached} elements while exploring \
         words of length {word_length}"
    )]
    CapExceeded {
        cap: usize,
        reached: usize,
        word_length: usize,
    },

    /// An operation's numeric parameter was invalid.
    #[error("invalid parameter {name}: {message}")]
    InvalidParameter { name: String, message: String },

    /// Partitions or quotient maps over different base sets were combined.
    #[error("incompatible domains: {message}")]
    IncompatibleDomains { message: String },

    /// A blockmodel required by a reduction is not perfect.
    #[error(
        "blockmodel is not perfect: relation {relation} has density {value} \
         between blocks {row_block} and {col_block}"
    )]
    NotPerfect {
        relation: String,
        row_block: String,
        col_block: String,
        value: String,
    },

    /// A hierarchy level's blockmodel is not perfect.
    #[error("hierarchy level {level}: {source}")]
    ImperfectLevel {
        level: usize,
        #[source]
        source: Box<Error>,
    },

    /// The induced mapping failed the homomorphism law; indicates a bug.
    #[error(
        "homomorphism violation at pair ({left},{right}): image of product is \
         {got}, product of images is {expected}"
    )]
    HomomorphismViolation {
        left: String,
        right: String,
        got: String,
        expected: String,
    },
}

impl Error {
    /// True for errors that represent verification failures rather than
    /// invalid input: imperfect blockmodels, non-nested hierarchies, and
    /// homomorphism violations. CLI layers exit with a distinct status for
    /// these.
    pub fn is_verification_failure(&self) -> bool {
        matches!(
            self,
            Error::NotPerfect { .. }
                | Error::ImperfectLevel { .. }
                | Error::NotNested { .. }
                | Error::HomomorphismViolation { .. }
        )
    }

    pub(crate) fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        Error::Io {
            path: path.display().to_string(),
            source,
        }
    }
}
