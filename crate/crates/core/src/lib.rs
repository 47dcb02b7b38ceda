//! Unsupervised toponym resolution against a GeoNames gazetteer.
//!
//! Three resolvers are provided: context-bound hypotheses ([`resolve_cbh`]),
//! spatial-hierarchy sets ([`resolve_shs`]) and their fusion
//! ([`resolve_chf`]), plus the evaluation harness in [`eval`].

pub mod corpus;
pub mod cover;
pub mod eval;
pub mod gazetteer;
pub mod geo;
pub mod normalize;
pub mod report;
pub mod resolve;
pub mod snapshot;

pub use corpus::{load_corpus, tokenize, Document, GoldAnnotation, MentionGroup, RawMention, ToponymMention};
pub use cover::{brute_force_cover, greedy_cover, Cover, CoverProblem, HierarchySet};
pub use eval::{evaluate, is_correct, tau_sweep, Correctness, EvalConfig, EvalMode, Metrics};
pub use gazetteer::{ingest_geonames, Division, Gazetteer, GazetteerEntry, HierarchyChain, IngestOptions};
pub use geo::{haversine_km, in_bounding_box, BoundingBox, LatLon};
pub use normalize::normalize;
pub use report::{resolve_corpus, DocumentResolutions, ResolutionReport};
pub use resolve::{
    candidates, preliminary_resolve, resolve_cbh, resolve_chf, resolve_document, resolve_shs, CbhConfig, ChfConfig,
    Interpretation, ResolveOptions, ResolvedToponym, ResolverKind, Source,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Ingest(#[from] gazetteer::IngestError),
    #[error(transparent)]
    Corpus(#[from] corpus::CorpusError),
    #[error(transparent)]
    Snapshot(#[from] snapshot::SnapshotError),
    #[error(transparent)]
    Eval(#[from] eval::EvalError),
    #[error(transparent)]
    Cover(#[from] cover::CoverError),
    #[error(transparent)]
    Geo(#[from] geo::GeoError),
}
