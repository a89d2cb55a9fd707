//! Synthetic corpora with planted topics.
//!
//! Every focal scientist works on `topics_per_focal` topics, each backed by
//! its own pool of reference ids. A paper cites references from its topic's
//! pool only (plus an optional shared pool), so the co-citing network falls
//! apart into one dense block per topic. Topics run over overlapping year
//! ranges, which gives the time-controlled shuffle same-year papers from
//! different topics to swap between.
//!
//! Collaborators are attached to one topic each; a configurable fraction is
//! attached to a second one. Each collaborator also writes a few papers
//! without the focal scientist, some of them before the first joint paper.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng as _;
use rand_distr::{Distribution, LogNormal, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{Corpus, PaperRecord};
use crate::seed::{derive_rng, Rng};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthSpec {
    pub n_focal: usize,
    pub topics_per_focal: usize,
    /// References per topic pool.
    pub pool_size: usize,
    pub papers_per_topic: usize,
    /// Each topic gets `papers_per_topic ± papers_jitter` papers.
    pub papers_jitter: usize,
    pub refs_per_paper: usize,
    pub collaborators_per_topic: usize,
    /// Upper bound on collaborators per focal paper (at least one).
    pub coauthors_per_paper: usize,
    pub multi_topic_fraction: f64,
    /// Probability that a reference comes from a pool shared by all topics.
    pub pool_overlap: f64,
    pub first_year: i32,
    pub last_year: i32,
    /// Years covered by one topic.
    pub topic_span: i32,
    /// Years between consecutive topic starts.
    pub topic_stagger: i32,
    /// Up to this many papers per collaborator without the focal scientist.
    pub solo_papers: usize,
    /// Fraction of collaborators with no papers before their first joint one.
    pub newcomer_fraction: f64,
    /// Per-scientist impact is log-normal with these parameters; paper c10 is
    /// Poisson around it.
    pub c10_mu: f64,
    pub c10_sigma: f64,
    pub seed: u64,
}

impl Default for SynthSpec {
    fn default() -> Self {
        Self {
            n_focal: 20,
            topics_per_focal: 3,
            pool_size: 30,
            papers_per_topic: 20,
            papers_jitter: 0,
            refs_per_paper: 8,
            collaborators_per_topic: 6,
            coauthors_per_paper: 2,
            multi_topic_fraction: 0.3,
            pool_overlap: 0.0,
            first_year: 1970,
            last_year: 2015,
            topic_span: 12,
            topic_stagger: 4,
            solo_papers: 4,
            newcomer_fraction: 0.4,
            c10_mu: 2.0,
            c10_sigma: 0.8,
            seed: 42,
        }
    }
}

impl SynthSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.pool_size < self.refs_per_paper {
            return bad(format!(
                "pool_size ({}) must be at least refs_per_paper ({})",
                self.pool_size, self.refs_per_paper
            ));
        }
        for (name, v) in [
            ("n_focal", self.n_focal),
            ("topics_per_focal", self.topics_per_focal),
            ("papers_per_topic", self.papers_per_topic),
            ("refs_per_paper", self.refs_per_paper),
            ("collaborators_per_topic", self.collaborators_per_topic),
            ("coauthors_per_paper", self.coauthors_per_paper),
        ] {
            if v == 0 {
                return bad(format!("{name} must be positive"));
            }
        }
        if self.papers_jitter >= self.papers_per_topic {
            return bad("papers_jitter must be below papers_per_topic".into());
        }
        for (name, v) in [
            ("multi_topic_fraction", self.multi_topic_fraction),
            ("pool_overlap", self.pool_overlap),
            ("newcomer_fraction", self.newcomer_fraction),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return bad(format!("{name} must be in [0, 1], got {v}"));
            }
        }
        if self.topic_span < 1 || self.topic_stagger < 0 {
            return bad("topic_span must be positive and topic_stagger non-negative".into());
        }
        if self.c10_sigma < 0.0 || !self.c10_mu.is_finite() {
            return bad("c10 distribution parameters are invalid".into());
        }
        let career = self.career_span();
        if self.last_year - self.first_year < career {
            return bad(format!(
                "year range {}..={} cannot hold a {career}-year career",
                self.first_year, self.last_year
            ));
        }
        Ok(())
    }

    fn career_span(&self) -> i32 {
        self.topic_stagger * (self.topics_per_focal as i32 - 1) + self.topic_span
    }

    /// Expected number of papers, for sizing corpora.
    pub fn expected_papers(&self) -> usize {
        let collaborators = self.topics_per_focal * self.collaborators_per_topic;
        self.n_focal * (self.topics_per_focal * self.papers_per_topic + collaborators * self.solo_papers / 2)
    }
}

/// What the generator planted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub focal: Vec<String>,
    /// Focal paper -> planted topic of its author's career.
    pub paper_topic: BTreeMap<String, usize>,
    /// Focal -> collaborator -> topics the two actually wrote papers on.
    pub collaborator_topics: BTreeMap<String, BTreeMap<String, BTreeSet<usize>>>,
}

impl GroundTruth {
    /// Fraction of collaborators with at least `min_copub` joint papers whose
    /// joint papers all sit in one planted topic.
    pub fn planted_single_fraction(&self, corpus: &Corpus, min_copub: usize) -> Option<f64> {
        let (mut single, mut total) = (0usize, 0usize);
        for (focal, collabs) in &self.collaborator_topics {
            let focal_papers = corpus.author_papers(focal).unwrap_or(&[]);
            for (c, topics) in collabs {
                let joint = focal_papers
                    .iter()
                    .filter(|&&p| corpus.paper(p).author_ids.contains(c))
                    .count();
                if joint >= min_copub {
                    total += 1;
                    single += usize::from(topics.len() == 1);
                }
            }
        }
        (total > 0).then(|| single as f64 / total as f64)
    }
}

#[derive(Debug, Clone)]
pub struct SynthCorpus {
    pub corpus: Corpus,
    pub truth: GroundTruth,
}

impl SynthCorpus {
    /// Writes `corpus.jsonl` and `ground_truth.json` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let corpus_path = dir.join("corpus.jsonl");
        let mut out = BufWriter::new(File::create(&corpus_path).map_err(|e| Error::io(&corpus_path, e))?);
        self.corpus.write_jsonl(&mut out)?;
        out.flush().map_err(|e| Error::io(&corpus_path, e))?;
        let truth_path = dir.join("ground_truth.json");
        let mut out = BufWriter::new(File::create(&truth_path).map_err(|e| Error::io(&truth_path, e))?);
        serde_json::to_writer_pretty(&mut out, &self.truth)?;
        out.write_all(b"\n").map_err(|e| Error::io(&truth_path, e))?;
        out.flush().map_err(|e| Error::io(&truth_path, e))?;
        Ok(())
    }
}

pub fn generate(spec: &SynthSpec) -> Result<SynthCorpus> {
    spec.validate()?;
    let width = spec.n_focal.to_string().len().max(4);
    let mut papers = Vec::with_capacity(spec.expected_papers());
    let mut truth = GroundTruth {
        focal: Vec::with_capacity(spec.n_focal),
        paper_topic: BTreeMap::new(),
        collaborator_topics: BTreeMap::new(),
    };
    for f in 0..spec.n_focal {
        let name = format!("F{f:0width$}");
        let mut rng = derive_rng(spec.seed, &["synth", &name]);
        generate_focal(spec, &name, &mut rng, &mut papers, &mut truth)?;
        truth.focal.push(name);
    }
    Ok(SynthCorpus {
        corpus: Corpus::from_records(papers)?,
        truth,
    })
}

fn draw_refs(spec: &SynthSpec, rng: &mut Rng, pool: &[String], shared: &[String]) -> Vec<String> {
    let mut refs: BTreeSet<String> = BTreeSet::new();
    while refs.len() < spec.refs_per_paper {
        let from = if spec.pool_overlap > 0.0 && rng.random_bool(spec.pool_overlap) {
            shared
        } else {
            pool
        };
        refs.insert(from.choose(rng).expect("pools are non-empty").clone());
    }
    refs.into_iter().collect()
}

fn generate_focal(
    spec: &SynthSpec,
    name: &str,
    rng: &mut Rng,
    papers: &mut Vec<PaperRecord>,
    truth: &mut GroundTruth,
) -> Result<()> {
    let k = spec.topics_per_focal;
    let impact = LogNormal::new(spec.c10_mu, spec.c10_sigma)
        .map_err(|e| Error::InvalidParameter(format!("c10 distribution: {e}")))?
        .sample(rng)
        .min(1e6);
    let c10 = Poisson::new(impact.max(1e-9)).map_err(|e| Error::InvalidParameter(format!("c10 distribution: {e}")))?;

    let pool_of = |tag: &str| -> Vec<String> { (0..spec.pool_size).map(|r| format!("{name}-{tag}-r{r:03}")).collect() };
    let pools: Vec<Vec<String>> = (0..k).map(|t| pool_of(&format!("T{t}"))).collect();
    let shared = pool_of("S");

    // rosters: collaborators per topic, some also attached to a second topic
    let mut rosters: Vec<Vec<String>> = vec![Vec::new(); k];
    let mut home: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for (t, roster) in rosters.iter_mut().enumerate() {
        for c in 0..spec.collaborators_per_topic {
            let id = format!("{name}-C{t}-{c:02}");
            roster.push(id.clone());
            home.insert(id, vec![t]);
        }
    }
    if k > 1 {
        for (id, topics) in home.iter_mut() {
            if rng.random_bool(spec.multi_topic_fraction) {
                let mut other = rng.random_range(0..k - 1);
                if other >= topics[0] {
                    other += 1;
                }
                topics.push(other);
                rosters[other].push(id.clone());
            }
        }
    }

    let career = spec.career_span();
    let start = rng.random_range(spec.first_year..=spec.last_year - career);
    let mut order: Vec<usize> = (0..k).collect();
    order.shuffle(rng);

    let mut joint: BTreeMap<String, (i32, BTreeSet<usize>)> = BTreeMap::new();
    for (slot, &t) in order.iter().enumerate() {
        let topic_start = start + spec.topic_stagger * slot as i32;
        let jitter = spec.papers_jitter as i64;
        let n = (spec.papers_per_topic as i64 + rng.random_range(-jitter..=jitter)) as usize;
        let roster = &rosters[t];
        // every roster member appears at least once
        let mut lead: Vec<&String> = roster.iter().collect();
        lead.shuffle(rng);
        for i in 0..n {
            let year = topic_start + rng.random_range(0..spec.topic_span);
            let mut authors = vec![name.to_string()];
            let n_coauthors = rng.random_range(1..=spec.coauthors_per_paper.min(roster.len()));
            let mut chosen: BTreeSet<&String> = BTreeSet::new();
            if let Some(first) = lead.get(i) {
                chosen.insert(first);
            }
            while chosen.len() < n_coauthors {
                chosen.insert(roster.choose(rng).expect("rosters are non-empty"));
            }
            for &c in &chosen {
                let entry = joint.entry(c.clone()).or_insert((year, BTreeSet::new()));
                entry.0 = entry.0.min(year);
                entry.1.insert(t);
                authors.push(c.clone());
            }
            let paper_id = format!("{name}-T{t}-{i:03}");
            truth.paper_topic.insert(paper_id.clone(), t);
            papers.push(PaperRecord {
                paper_id,
                year,
                author_ids: authors,
                reference_ids: draw_refs(spec, rng, &pools[t], &shared),
                c10: c10.sample(rng) as u32,
            });
        }
    }

    // papers the collaborators write on their own
    for (id, (first_joint, topics)) in &joint {
        let newcomer = rng.random_bool(spec.newcomer_fraction);
        let n_solo = rng.random_range(0..=spec.solo_papers);
        for s in 0..n_solo {
            let year = if newcomer {
                first_joint + rng.random_range(0..=5)
            } else if s == 0 {
                first_joint - rng.random_range(1..=10)
            } else {
                first_joint + rng.random_range(-10..=5)
            };
            let topic = **topics
                .iter()
                .collect::<Vec<_>>()
                .choose(rng)
                .expect("joint topics are non-empty");
            papers.push(PaperRecord {
                paper_id: format!("{id}-S{s}"),
                year: year.clamp(spec.first_year, spec.last_year),
                author_ids: vec![id.clone()],
                reference_ids: draw_refs(spec, rng, &pools[topic], &shared),
                c10: c10.sample(rng) as u32,
            });
        }
    }

    truth.collaborator_topics.insert(
        name.to_string(),
        joint.into_iter().map(|(id, (_, topics))| (id, topics)).collect(),
    );
    Ok(())
}
