//! Statistics computed on top of topic assignments and collaborator series.

pub mod correlation;
pub mod features;
pub mod join;
pub mod ks;
pub mod similarity;
pub mod stratify;

pub use correlation::{kendall_tau, pearson_r, CorrelationResult, Statistic};
pub use features::{initial_collaborator_features, InitialCollaboratorFeatures};
pub use join::{
    join_covariate_tau, join_events, join_probability, pooled_join_probability, wilson_interval, Averaging,
    JoinBinning, JoinCandidate, JoinCovariate, JoinEvent, JoinMode, JoinOptions, JoinRow,
};
pub use ks::{kolmogorov_survival, ks_test, significance_stars, KsResult};
pub use similarity::{
    reference_similarity, set_similarity, similarity_profile, SimilarityMetric, SimilarityProfile, SimilarityVariant,
};
pub use stratify::{deciles, first_career_years, stratify, top_percent, year_bins, Scheme};
