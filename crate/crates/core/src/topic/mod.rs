//! Community detection on co-citing networks and topic labelling.

mod ari;
mod assign;
mod graph;
mod louvain;
mod modularity;

pub use ari::adjusted_rand_index;
pub use assign::{
    assign_topics, colored_series, read_series_csv, write_series_csv, SeriesEntry, TopicAssignment, TopicInfo,
};
pub use graph::WeightedGraph;
pub use louvain::{detect_communities, louvain};
pub use modularity::{modularity, ModularityContext};
