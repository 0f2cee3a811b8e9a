//! Positional and role analysis for multirelational graphs.
//!
//! A multirelational graph is a set of nodes carrying several relations at
//! once, each stored as an n×n Boolean or [0,1]-weighted matrix. This crate
//! covers the two classical, complementary ways of compressing such data,
//! and keeps every computation exact (rational arithmetic end to end):
//!
//! * **Positions** — which nodes are interchangeable? Structural
//!   equivalence, profile distances (Euclidean / cosine), complete-linkage
//!   clustering, and the resulting density and image blockmodels
//!   ([`equivalence`], [`blockmodel`]).
//! * **Roles** — how do relations compose? The Boolean semigroup generated
//!   by the relation matrices, its multiplication table, and compound
//!   relation queries ([`semigroup`]); plus the weighted analogue under the
//!   max-times product with truncation depth and rounding policy
//!   ([`trunc`]).
//!
//! The bridge between the two is mechanically verified rather than assumed:
//! a partition whose blockmodel is perfect induces a homomorphism from the
//! graph's semigroup onto the quotient's semigroup
//! ([`semigroup::induced_hom`]), and along a nested hierarchy of such
//! partitions the induced maps compose functorially
//! ([`semigroup::check_functoriality`]).
//!
//! # Example
//!
//! ```
//! use relsg_core::{
//!     agglomerate, density_matrix_bool, distance_matrix, generate_semigroup,
//!     structural_partition, BoolMatrix, Graph, Metric, MultirelationalGraph, Target,
//! };
//!
//! // Two relations on four nodes: a two-level "reports to" forest and a
//! // reflexive same-team relation.
//! let reports = BoolMatrix::from_rows(&[
//!     vec![0, 1, 1, 0],
//!     vec![0, 0, 0, 1],
//!     vec![0, 0, 0, 0],
//!     vec![0, 0, 0, 0],
//! ]);
//! let team = BoolMatrix::from_rows(&[
//!     vec![1, 0, 0, 0],
//!     vec![0, 1, 1, 0],
//!     vec![0, 1, 1, 0],
//!     vec![0, 0, 0, 1],
//! ]);
//! let graph = MultirelationalGraph::new(
//!     vec!["a".into(), "b".into(), "c".into(), "d".into()],
//!     vec![("R".into(), reports), ("T".into(), team)],
//! )?;
//!
//! // Positions: cluster profile distances down to three blocks.
//! let wrapped = Graph::Boolean(graph.clone());
//! let partition = structural_partition(&wrapped, None)?;
//! let distances = distance_matrix(&wrapped, Metric::Euclidean);
//! let clustered = agglomerate(&distances, &Target::NumBlocks(3))?;
//! assert_eq!(clustered.num_blocks(), 3);
//! let densities = density_matrix_bool(graph.relation("R")?, &clustered)?;
//! assert_eq!(densities.n_rows(), 3);
//!
//! // Roles: the Boolean semigroup of compound relations.
//! let semigroup = generate_semigroup(graph.relations(), 1_000)?;
//! assert!(semigroup.is_associative());
//! # let _ = partition;
//! # Ok::<(), relsg_core::Error>(())
//! ```

pub mod blockmodel;
pub mod equivalence;
pub mod error;
pub mod graph;
pub mod io;
pub mod matrix;
pub mod semigroup;
pub mod trunc;
pub mod weight;

pub use blockmodel::{
    blow_up, compose_quotients, default_delta, density_blockmodel, density_matrix,
    density_matrix_bool, image_matrix, lean_fit, permuted_matrix, permuted_matrix_weighted,
    refine_check, DensityBlockmodel,
};
pub use equivalence::{
    agglomerate, distance_matrix, profile_vector, structural_partition, DistanceMatrix, Metric,
    ProfileVector, Target,
};
pub use error::{Error, Result};
pub use graph::{
    Graph, MultirelationalGraph, NestedHierarchy, Partition, QuotientMap,
    WeightedMultirelationalGraph,
};
pub use io::{
    load_graph, load_hierarchy, load_matrix_csv, load_partition, save_graph, save_partition,
    Manifest, ManifestRelation,
};
pub use matrix::{BoolMatrix, WeightedMatrix};
pub use semigroup::{
    bool_product, check_functoriality, compound_exists, evaluate_word, generate_semigroup,
    induced_hom, multiplication_table, FunctorialityReport, Semigroup, SemigroupHom,
    TableRendering, TripleCheck, DEFAULT_CAP,
};
pub use trunc::{
    generate_truncated, max_times, round_matrix, truncated_report, RoundingPolicy,
    TruncatedReport, TruncatedSemigroup, MAX_ROUND_DIGITS,
};
pub use weight::Weight;
