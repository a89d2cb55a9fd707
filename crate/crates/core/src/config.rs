use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::decompose::DecomposeOptions;
use crate::error::{Error, Result};
use crate::ingest::ValidationConfig;
use crate::metrics::{Averaging, JoinOptions};

/// Settings that determine the numbers in the output tables. Everything here
/// is recorded in the run manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisParams {
    pub seed: u64,
    pub min_papers: usize,
    /// A community becomes a topic when it holds strictly more than this
    /// fraction of the scientist's papers.
    pub topic_threshold: f64,
    /// Community detection on shared-reference weights instead of plain links.
    pub weighted: bool,
    pub min_copub: usize,
    pub min_copub_high: usize,
    pub count_minor_papers: bool,
    pub rounds_factor: usize,
    pub surrogate: bool,
    pub recent_window: i32,
    pub join_min_copub: usize,
    pub join_averaging: Averaging,
    pub career_stage_width: i32,
    pub top_k: Vec<u32>,
    pub cohort_window: i32,
    pub cohort_width: i32,
    pub cohort_top_k: u32,
    pub n_rewires: usize,
    pub validation: ValidationConfig,
}

impl Default for AnalysisParams {
    fn default() -> Self {
        Self {
            seed: 0,
            min_papers: 50,
            topic_threshold: 0.05,
            weighted: false,
            min_copub: 2,
            min_copub_high: 10,
            count_minor_papers: true,
            rounds_factor: 4,
            surrogate: false,
            recent_window: 2,
            join_min_copub: 1,
            join_averaging: Averaging::Pooled,
            career_stage_width: 5,
            top_k: vec![1, 5, 10, 20],
            cohort_window: 30,
            cohort_width: 10,
            cohort_top_k: 10,
            n_rewires: 10,
            validation: ValidationConfig::default(),
        }
    }
}

impl AnalysisParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidParameter(msg.to_string()));
        if self.min_papers == 0 {
            return bad("min_papers must be at least 1");
        }
        if !(self.topic_threshold > 0.0 && self.topic_threshold < 1.0) {
            return bad("topic_threshold must lie strictly between 0 and 1");
        }
        if self.min_copub == 0 || self.min_copub_high == 0 || self.join_min_copub == 0 {
            return bad("co-publication minimums must be at least 1");
        }
        if self.rounds_factor == 0 || self.n_rewires == 0 {
            return bad("rounds_factor and n_rewires must be at least 1");
        }
        if self.recent_window < 1 || self.career_stage_width < 1 || self.cohort_window < 1 || self.cohort_width < 1 {
            return bad("window and bin widths must be at least 1");
        }
        if self.top_k.is_empty()
            || self
                .top_k
                .iter()
                .chain([&self.cohort_top_k])
                .any(|&k| k == 0 || k > 100)
        {
            return bad("top-k percentages must lie in 1..=100");
        }
        if self.validation.min_year > self.validation.max_year {
            return bad("min_year exceeds max_year");
        }
        Ok(())
    }

    /// Decomposition keeping every collaborator; thresholds apply later.
    pub fn decompose_options(&self) -> DecomposeOptions {
        DecomposeOptions {
            min_copub: 1,
            count_minor_papers: self.count_minor_papers,
        }
    }

    pub fn join_options(&self) -> JoinOptions {
        JoinOptions {
            min_copub: self.join_min_copub,
            recent_window: self.recent_window,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// One corpus per discipline; the first one feeds the single-discipline tables.
    pub inputs: Vec<PathBuf>,
    pub out_dir: PathBuf,
    /// Worker threads; 0 uses every available core.
    pub workers: usize,
    pub export_intermediates: bool,
    pub params: AnalysisParams,
}

impl RunConfig {
    pub fn new(inputs: Vec<PathBuf>, out_dir: PathBuf, seed: u64) -> Self {
        Self {
            inputs,
            out_dir,
            workers: 0,
            export_intermediates: false,
            params: AnalysisParams {
                seed,
                ..AnalysisParams::default()
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.inputs.is_empty() {
            return Err(Error::InvalidParameter("at least one input corpus is required".into()));
        }
        self.params.validate()
    }
}
