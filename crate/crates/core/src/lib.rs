//! Graphs of the vertex- and edge-truncated cyclic neighborly cubical
//! 4-polytopes, canonical-path routing on the edge-truncated graph, and the
//! expansion and separator bounds that follow from it.
//!
//! The pipeline: [`cube::build_hypercube`] →
//! [`builders::build_cg_prime`] → [`builders::build_cg_doubleprime`], then
//! [`routing::phi_exact`] (or [`routing::phi_sampled`]) feeds
//! [`expansion::sinclair_bound`] and the separator machinery in
//! [`expansion`].

pub mod builders;
pub mod cluster;
pub mod cube;
pub mod error;
pub mod expansion;
pub mod graph;
pub mod io;
pub mod routing;

pub use builders::{build_ccc, build_cg_doubleprime, build_cg_prime, prism_classes, PrismClass};
pub use cluster::{validate_strategy, ClusterGraph, ClusterStrategy, StrategyReport};
pub use cube::{
    build_hypercube, f_vector_ncc, is_first_star_facet, two_face_witness, Direction, FVector,
    FaceVector, SignVector,
};
pub use error::{Error, Result};
pub use graph::{EdgeKind, GraphView, Stage, TypedGraph, VertexLabel};
