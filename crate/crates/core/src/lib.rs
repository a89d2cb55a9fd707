//! Collaborator topic involvement analysis for publication corpora.
//!
//! The pipeline runs in stages:
//!
//! 1. [`ingest`] loads line-delimited publication records into an indexed [`Corpus`].
//! 2. [`cocite`] builds, for each focal scientist, the co-citing network over
//!    their papers (two papers are linked when they share a reference).
//! 3. [`topic`] runs Louvain modularity maximization on that network and turns
//!    the large communities into research topics.
//! 4. [`decompose`] splits the scientist's topic-labelled publication series
//!    into one partial series per collaborator.
//! 5. [`nullmodel`] provides the same-year authorship reshuffling surrogate and
//!    degree-preserving rewiring of collaborator networks.
//! 6. [`metrics`] holds the statistics layered on top (join-next-topic
//!    probabilities, reference similarity, Kendall tau, K-S tests, ...).
//! 7. [`pipeline`] wires everything together and writes figure-keyed tables.
//!
//! [`synth`] generates corpora with planted topics for verification.

pub mod cocite;
pub mod config;
pub mod decompose;
pub mod error;
pub mod figures;
pub mod ingest;
pub mod metrics;
pub mod nullmodel;
pub mod pipeline;
pub mod report;
pub mod seed;
pub mod synth;
pub mod topic;

pub use crate::cocite::{build_cociting, CoCitingNetwork};
pub use crate::config::RunConfig;
pub use crate::decompose::{collaborator_stats, decompose, CollaboratorSeries, CollaboratorStats, DecomposeOptions};
pub use crate::error::{Error, Result};
pub use crate::ingest::{load_corpus, Corpus, PaperRecord, ScientistProfile, ValidationConfig};
pub use crate::report::{StatReport, Table};
pub use crate::topic::{
    assign_topics, colored_series, detect_communities, modularity, ModularityContext, SeriesEntry, TopicAssignment,
};
