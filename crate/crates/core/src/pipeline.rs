//! Per-focal stages, on-disk artifacts, and complete runs.
//!
//! The staged commands and [`run_pipeline`] share the per-focal functions
//! below. Staged commands pass data through CSV exports under the output
//! directory; all exported values are integers or strings, so a staged run
//! produces the same tables as a monolithic one.
//!
//! Focal scientists are processed on a worker pool. Results are collected in
//! focal order and every random draw is seeded from the global seed and the
//! author id, so the number of workers does not affect any output.

use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cocite::{build_cociting, CoCitingNetwork};
use crate::config::{AnalysisParams, RunConfig};
use crate::decompose::{decompose_bipartite, write_collaborator_csv, CollaboratorSeries};
use crate::error::{Error, Result};
use crate::figures::build_report;
use crate::ingest::{load_corpus_path, profile, select_focal, Corpus, LoadReport, ScientistProfile};
use crate::metrics::{
    first_career_years, initial_collaborator_features, join_events, similarity_profile, InitialCollaboratorFeatures,
    JoinEvent, SimilarityProfile,
};
use crate::nullmodel::{q_significance, reshuffle_time_controlled, AuthorshipBipartite, CollabNetwork, QSignificance};
use crate::report::{Cell, StatReport, Table};
use crate::seed::derive_seed;
use crate::topic::{
    assign_topics, colored_series, detect_communities, read_series_csv, write_series_csv, SeriesEntry, TopicAssignment,
};

pub const TOPICS_DIR: &str = "topics";
pub const SHUFFLED_DIR: &str = "shuffled";
pub const COLLABORATORS_DIR: &str = "collaborators";
pub const COCITING_DIR: &str = "cociting";
pub const INDEX_FILE: &str = "index.json";
pub const MANIFEST_FILE: &str = "manifest.json";

/// One input corpus and its focal scientists.
#[derive(Debug, Clone)]
pub struct Discipline {
    pub name: String,
    pub file_name: String,
    pub corpus: Corpus,
    pub focal: Vec<String>,
}

/// Names for the inputs: file stems, made unique with a numeric suffix.
pub fn discipline_names(inputs: &[PathBuf]) -> Vec<String> {
    let mut names: Vec<String> = Vec::with_capacity(inputs.len());
    for path in inputs {
        let stem = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "corpus".to_string());
        let mut name = stem.clone();
        let mut k = 2;
        while names.contains(&name) {
            name = format!("{stem}-{k}");
            k += 1;
        }
        names.push(name);
    }
    names
}

pub fn load_input(path: &Path, params: &AnalysisParams) -> Result<LoadReport> {
    let report = load_corpus_path(path, &params.validation)?;
    for r in &report.rejections {
        log::warn!("{}: {r}", path.display());
    }
    Ok(report)
}

pub fn load_disciplines(cfg: &RunConfig) -> Result<Vec<Discipline>> {
    cfg.validate()?;
    let names = discipline_names(&cfg.inputs);
    let mut out = Vec::with_capacity(names.len());
    for (path, name) in cfg.inputs.iter().zip(names) {
        let corpus = load_input(path, &cfg.params)?.corpus;
        let focal = select_focal(&corpus, cfg.params.min_papers);
        if focal.is_empty() {
            return Err(Error::NoFocalScientists {
                min_papers: cfg.params.min_papers,
            });
        }
        log::info!("{name}: {} papers, {} focal scientists", corpus.len(), focal.len());
        out.push(Discipline {
            name,
            file_name: path
                .file_name()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default(),
            corpus,
            focal,
        });
    }
    Ok(out)
}

/// Topic detection result for one focal scientist.
#[derive(Debug, Clone)]
pub struct FocalTopics {
    pub network: CoCitingNetwork,
    pub assignment: TopicAssignment,
    pub series: Vec<SeriesEntry>,
}

pub fn detect_focal_topics(corpus: &Corpus, author: &str, params: &AnalysisParams) -> Result<FocalTopics> {
    let network = build_cociting(corpus, author)?;
    let assignment = if network.n_edges() == 0 {
        TopicAssignment {
            owner: author.to_string(),
            paper_ids: network.paper_ids.clone(),
            years: network.years.clone(),
            topic_of: vec![None; network.n_nodes()],
            major_topics: Vec::new(),
        }
    } else {
        let seed = derive_seed(params.seed, &["louvain", author]);
        let ctx = detect_communities(&network, params.weighted, seed)?;
        assign_topics(&network, &ctx, params.topic_threshold)
    };
    let series = colored_series(corpus, &assignment)?;
    Ok(FocalTopics {
        network,
        assignment,
        series,
    })
}

pub fn shuffle_focal(
    corpus: &Corpus,
    author: &str,
    series: &[SeriesEntry],
    params: &AnalysisParams,
) -> Result<AuthorshipBipartite> {
    let bip = AuthorshipBipartite::from_series(corpus, author, series)?;
    let seed = derive_seed(params.seed, &["shuffle", author, "0"]);
    Ok(reshuffle_time_controlled(&bip, params.rounds_factor, seed))
}

/// Collaborator series restricted to the first `cohort_window` career years.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CohortView {
    pub start_year: i32,
    pub paper_count: usize,
    pub mean_c10: f64,
    pub collaborators: Vec<CollaboratorSeries>,
    pub shuffled: Option<Vec<CollaboratorSeries>>,
}

/// Everything the tables need from one focal scientist.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FocalResult {
    pub author: String,
    pub profile: ScientistProfile,
    pub n_topics: usize,
    /// Every coauthor, sorted by id.
    pub collaborators: Vec<CollaboratorSeries>,
    pub shuffled: Option<Vec<CollaboratorSeries>>,
    pub cohort: CohortView,
    pub join_events: Vec<JoinEvent>,
    /// `None` when no two collaborators share a paper.
    pub q: Option<QSignificance>,
    pub similarity: SimilarityProfile,
    pub features: Vec<InitialCollaboratorFeatures>,
}

pub fn analyze_focal(
    corpus: &Corpus,
    author: &str,
    series: &[SeriesEntry],
    shuffled: Option<&AuthorshipBipartite>,
    params: &AnalysisParams,
) -> Result<FocalResult> {
    let profile = profile(corpus, author)?;
    let topics = TopicAssignment::from_series(author, series);
    let bip = AuthorshipBipartite::from_series(corpus, author, series)?;
    let options = params.decompose_options();
    let collaborators = decompose_bipartite(&bip, series, options);
    let shuffled = shuffled.map(|b| decompose_bipartite(b, series, options));

    let start = profile.career_start_year;
    let end = start + params.cohort_window;
    let truncated = first_career_years(series, start, params.cohort_window);
    let truncate = |list: &[CollaboratorSeries]| -> Vec<CollaboratorSeries> {
        list.iter().filter_map(|c| c.before(end)).collect()
    };
    let cohort = CohortView {
        start_year: start,
        paper_count: truncated.len(),
        mean_c10: if truncated.is_empty() {
            0.0
        } else {
            truncated.iter().map(|e| f64::from(e.c10)).sum::<f64>() / truncated.len() as f64
        },
        collaborators: truncate(&collaborators),
        shuffled: shuffled.as_deref().map(truncate),
    };

    let net = CollabNetwork::from_bipartite(&bip);
    let q = if net.edges.is_empty() {
        None
    } else {
        let seed = derive_seed(params.seed, &["qsig", author]);
        Some(q_significance(&net, params.n_rewires, params.rounds_factor, seed)?)
    };

    Ok(FocalResult {
        author: author.to_string(),
        n_topics: topics.n_topics(),
        join_events: join_events(series, &topics, &collaborators, params.join_options()),
        similarity: similarity_profile(corpus, author, &bip.collaborators)?,
        features: initial_collaborator_features(corpus, &collaborators)?,
        profile,
        collaborators,
        shuffled,
        cohort,
        q,
    })
}

#[derive(Debug, Clone)]
pub struct DisciplineResults {
    pub name: String,
    pub n_papers: usize,
    pub n_authors: usize,
    pub focal: Vec<FocalResult>,
}

fn worker_pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("cannot start worker pool: {e}")))
}

/// `f` over every item on the pool, results in item order.
fn par_map<T, U, F>(pool: &rayon::ThreadPool, items: &[T], f: F) -> Result<Vec<U>>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> Result<U> + Sync,
{
    pool.install(|| items.par_iter().map(&f).collect())
}

// ---------------------------------------------------------------- artifacts

/// Parameters an upstream artifact was produced with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct StageParams {
    seed: u64,
    min_papers: usize,
    topic_threshold: f64,
    weighted: bool,
    rounds_factor: usize,
}

impl StageParams {
    fn of(p: &AnalysisParams) -> Self {
        Self {
            seed: p.seed,
            min_papers: p.min_papers,
            topic_threshold: p.topic_threshold,
            weighted: p.weighted,
            rounds_factor: p.rounds_factor,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct FocalFile {
    author: String,
    file: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct DisciplineIndex {
    name: String,
    checksum: String,
    focal: Vec<FocalFile>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct ArtifactIndex {
    params: StageParams,
    disciplines: Vec<DisciplineIndex>,
}

/// Filesystem-safe name for an author id; ids that need escaping get a
/// digest suffix so distinct ids never collide.
pub fn artifact_file_name(author: &str) -> String {
    let safe: String = author
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect();
    if safe == author && !author.is_empty() {
        format!("{safe}.csv")
    } else {
        let digest = hex::encode(&Sha256::digest(author.as_bytes())[..6]);
        format!("{safe}-{digest}.csv")
    }
}

fn create_file(path: &Path) -> Result<BufWriter<File>> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    Ok(BufWriter::new(File::create(path).map_err(|e| Error::io(path, e))?))
}

fn write_with(path: &Path, f: impl FnOnce(&mut BufWriter<File>) -> Result<()>) -> Result<()> {
    let mut out = create_file(path)?;
    f(&mut out)?;
    out.flush().map_err(|e| Error::io(path, e))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    write_with(path, |out| {
        serde_json::to_writer_pretty(&mut *out, value)?;
        out.write_all(b"\n")?;
        Ok(())
    })
}

fn open_artifact(path: &Path, stage: &'static str) -> Result<BufReader<File>> {
    match File::open(path) {
        Ok(f) => Ok(BufReader::new(f)),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Err(Error::MissingArtifact {
            path: path.to_path_buf(),
            stage,
        }),
        Err(e) => Err(Error::io(path, e)),
    }
}

fn read_index(out_dir: &Path, dir: &str, stage: &'static str, params: &AnalysisParams) -> Result<ArtifactIndex> {
    let path = out_dir.join(dir).join(INDEX_FILE);
    let index: ArtifactIndex = serde_json::from_reader(open_artifact(&path, stage)?)?;
    if index.params != StageParams::of(params) {
        return Err(Error::InvalidParameter(format!(
            "{} was written with different parameters; rerun `{stage}`",
            path.display()
        )));
    }
    Ok(index)
}

/// The index entry matching a loaded discipline.
fn index_entry<'a>(index: &'a ArtifactIndex, d: &Discipline, dir: &str) -> Result<&'a DisciplineIndex> {
    let entry = index
        .disciplines
        .iter()
        .find(|e| e.name == d.name)
        .ok_or_else(|| Error::InvalidParameter(format!("no `{dir}` artifacts for input `{}`", d.name)))?;
    if entry.checksum != d.corpus.checksum() {
        return Err(Error::InvalidParameter(format!(
            "input `{}` changed since its `{dir}` artifacts were written",
            d.name
        )));
    }
    let authors: Vec<&str> = entry.focal.iter().map(|f| f.author.as_str()).collect();
    if authors != d.focal.iter().map(String::as_str).collect::<Vec<_>>() {
        return Err(Error::InvalidParameter(format!(
            "focal scientists of `{}` differ from `{dir}` artifacts",
            d.name
        )));
    }
    Ok(entry)
}

fn build_index(disciplines: &[Discipline], params: &AnalysisParams) -> ArtifactIndex {
    ArtifactIndex {
        params: StageParams::of(params),
        disciplines: disciplines
            .iter()
            .map(|d| DisciplineIndex {
                name: d.name.clone(),
                checksum: d.corpus.checksum(),
                focal: d
                    .focal
                    .iter()
                    .map(|a| FocalFile {
                        author: a.clone(),
                        file: artifact_file_name(a),
                    })
                    .collect(),
            })
            .collect(),
    }
}

fn focal_path(out_dir: &Path, dir: &str, discipline: &str, author: &str) -> PathBuf {
    out_dir.join(dir).join(discipline).join(artifact_file_name(author))
}

fn write_topic_artifacts(out_dir: &Path, d: &Discipline, topics: &[FocalTopics], edges: bool) -> Result<()> {
    for (author, t) in d.focal.iter().zip(topics) {
        write_with(&focal_path(out_dir, TOPICS_DIR, &d.name, author), |out| {
            write_series_csv(out, &t.series)
        })?;
        if edges {
            write_with(&focal_path(out_dir, COCITING_DIR, &d.name, author), |out| {
                t.network.write_edge_list(out)
            })?;
        }
    }
    Ok(())
}

fn read_series(out_dir: &Path, d: &Discipline, author: &str) -> Result<Vec<SeriesEntry>> {
    let path = focal_path(out_dir, TOPICS_DIR, &d.name, author);
    read_series_csv(open_artifact(&path, "detect-topics")?)
}

fn read_shuffled(out_dir: &Path, d: &Discipline, author: &str, series: &[SeriesEntry]) -> Result<AuthorshipBipartite> {
    let path = focal_path(out_dir, SHUFFLED_DIR, &d.name, author);
    AuthorshipBipartite::read_links_csv(author, series, open_artifact(&path, "shuffle")?)
}

// ---------------------------------------------------------------- bundle

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DisciplineSummary {
    pub name: String,
    pub file_name: String,
    pub checksum: String,
    pub n_papers: usize,
    pub n_authors: usize,
    pub n_focal: usize,
}

/// Provenance of a result bundle. Output location, worker count and export
/// flags are left out so that they cannot change the bundle's bytes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub params: AnalysisParams,
    pub disciplines: Vec<DisciplineSummary>,
    pub tables: Vec<String>,
}

fn compute_report(
    cfg: &RunConfig,
    disciplines: &[Discipline],
    results: Vec<Vec<FocalResult>>,
) -> (StatReport, Manifest) {
    let per_discipline: Vec<DisciplineResults> = disciplines
        .iter()
        .zip(results)
        .map(|(d, focal)| DisciplineResults {
            name: d.name.clone(),
            n_papers: d.corpus.len(),
            n_authors: d.corpus.n_authors(),
            focal,
        })
        .collect();
    let report = build_report(&per_discipline, &cfg.params);
    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        params: cfg.params.clone(),
        disciplines: disciplines
            .iter()
            .map(|d| DisciplineSummary {
                name: d.name.clone(),
                file_name: d.file_name.clone(),
                checksum: d.corpus.checksum(),
                n_papers: d.corpus.len(),
                n_authors: d.corpus.n_authors(),
                n_focal: d.focal.len(),
            })
            .collect(),
        tables: report.names().map(str::to_string).collect(),
    };
    (report, manifest)
}

fn write_bundle(out_dir: &Path, report: &StatReport, manifest: &Manifest) -> Result<()> {
    report.write_csv_dir(out_dir)?;
    write_json(&out_dir.join(MANIFEST_FILE), manifest)
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub report: StatReport,
    pub manifest: Manifest,
}

// ---------------------------------------------------------------- entry points

/// Load, detect, shuffle, analyse and write the table bundle in one pass.
pub fn run_pipeline(cfg: &RunConfig) -> Result<RunOutput> {
    let disciplines = load_disciplines(cfg)?;
    let pool = worker_pool(cfg.workers)?;
    let params = &cfg.params;
    let out = &cfg.out_dir;
    let mut results = Vec::with_capacity(disciplines.len());
    for d in &disciplines {
        let per_focal = par_map(&pool, &d.focal, |author| {
            let topics = detect_focal_topics(&d.corpus, author, params)?;
            let shuffled = if params.surrogate {
                Some(shuffle_focal(&d.corpus, author, &topics.series, params)?)
            } else {
                None
            };
            let result = analyze_focal(&d.corpus, author, &topics.series, shuffled.as_ref(), params)?;
            Ok((topics, shuffled, result))
        })?;
        if cfg.export_intermediates {
            let topics: Vec<FocalTopics> = per_focal.iter().map(|(t, _, _)| t.clone()).collect();
            write_topic_artifacts(out, d, &topics, true)?;
            for (author, (_, shuffled, result)) in d.focal.iter().zip(&per_focal) {
                write_with(&focal_path(out, COLLABORATORS_DIR, &d.name, author), |w| {
                    write_collaborator_csv(w, &result.collaborators)
                })?;
                if let Some(bip) = shuffled {
                    write_with(&focal_path(out, SHUFFLED_DIR, &d.name, author), |w| {
                        bip.write_links_csv(w)
                    })?;
                }
            }
        }
        results.push(per_focal.into_iter().map(|(_, _, r)| r).collect());
    }
    if cfg.export_intermediates {
        let index = build_index(&disciplines, params);
        write_json(&out.join(TOPICS_DIR).join(INDEX_FILE), &index)?;
        if params.surrogate {
            write_json(&out.join(SHUFFLED_DIR).join(INDEX_FILE), &index)?;
        }
    }
    let (report, manifest) = compute_report(cfg, &disciplines, results);
    write_bundle(out, &report, &manifest)?;
    Ok(RunOutput { report, manifest })
}

/// Write colored series (and co-citing edge lists with `export_intermediates`).
pub fn stage_detect_topics(cfg: &RunConfig) -> Result<()> {
    let disciplines = load_disciplines(cfg)?;
    let pool = worker_pool(cfg.workers)?;
    for d in &disciplines {
        let topics = par_map(&pool, &d.focal, |a| detect_focal_topics(&d.corpus, a, &cfg.params))?;
        write_topic_artifacts(&cfg.out_dir, d, &topics, cfg.export_intermediates)?;
    }
    write_json(
        &cfg.out_dir.join(TOPICS_DIR).join(INDEX_FILE),
        &build_index(&disciplines, &cfg.params),
    )
}

/// Write per-collaborator summaries from the colored series.
pub fn stage_decompose(cfg: &RunConfig) -> Result<()> {
    let disciplines = load_disciplines(cfg)?;
    let index = read_index(&cfg.out_dir, TOPICS_DIR, "detect-topics", &cfg.params)?;
    let pool = worker_pool(cfg.workers)?;
    for d in &disciplines {
        index_entry(&index, d, TOPICS_DIR)?;
        let lists = par_map(&pool, &d.focal, |author| {
            let series = read_series(&cfg.out_dir, d, author)?;
            let bip = AuthorshipBipartite::from_series(&d.corpus, author, &series)?;
            Ok(decompose_bipartite(&bip, &series, cfg.params.decompose_options()))
        })?;
        for (author, list) in d.focal.iter().zip(&lists) {
            write_with(&focal_path(&cfg.out_dir, COLLABORATORS_DIR, &d.name, author), |w| {
                write_collaborator_csv(w, list)
            })?;
        }
    }
    Ok(())
}

/// Write one time-controlled reshuffled authorship graph per focal scientist.
pub fn stage_shuffle(cfg: &RunConfig) -> Result<()> {
    let disciplines = load_disciplines(cfg)?;
    let index = read_index(&cfg.out_dir, TOPICS_DIR, "detect-topics", &cfg.params)?;
    let pool = worker_pool(cfg.workers)?;
    for d in &disciplines {
        index_entry(&index, d, TOPICS_DIR)?;
        let shuffled = par_map(&pool, &d.focal, |author| {
            let series = read_series(&cfg.out_dir, d, author)?;
            shuffle_focal(&d.corpus, author, &series, &cfg.params)
        })?;
        for (author, bip) in d.focal.iter().zip(&shuffled) {
            write_with(&focal_path(&cfg.out_dir, SHUFFLED_DIR, &d.name, author), |w| {
                bip.write_links_csv(w)
            })?;
        }
    }
    write_json(&cfg.out_dir.join(SHUFFLED_DIR).join(INDEX_FILE), &index)
}

/// Compute the table bundle from exported series (and shuffles with `surrogate`).
pub fn stage_stats(cfg: &RunConfig) -> Result<RunOutput> {
    let disciplines = load_disciplines(cfg)?;
    let topics_index = read_index(&cfg.out_dir, TOPICS_DIR, "detect-topics", &cfg.params)?;
    let shuffled_index = if cfg.params.surrogate {
        Some(read_index(&cfg.out_dir, SHUFFLED_DIR, "shuffle", &cfg.params)?)
    } else {
        None
    };
    let pool = worker_pool(cfg.workers)?;
    let mut results = Vec::with_capacity(disciplines.len());
    for d in &disciplines {
        index_entry(&topics_index, d, TOPICS_DIR)?;
        if let Some(idx) = &shuffled_index {
            index_entry(idx, d, SHUFFLED_DIR)?;
        }
        results.push(par_map(&pool, &d.focal, |author| {
            let series = read_series(&cfg.out_dir, d, author)?;
            let shuffled = if cfg.params.surrogate {
                Some(read_shuffled(&cfg.out_dir, d, author, &series)?)
            } else {
                None
            };
            analyze_focal(&d.corpus, author, &series, shuffled.as_ref(), &cfg.params)
        })?);
    }
    let (report, manifest) = compute_report(cfg, &disciplines, results);
    write_bundle(&cfg.out_dir, &report, &manifest)?;
    Ok(RunOutput { report, manifest })
}

/// Render an existing bundle as `index.csv` and `report.md`.
pub fn stage_report(out_dir: &Path) -> Result<()> {
    let manifest_path = out_dir.join(MANIFEST_FILE);
    let manifest: Manifest = serde_json::from_reader(open_artifact(&manifest_path, "stats")?)?;

    let mut index = Table::new("index", &["table", "file", "rows", "columns"]);
    let mut md = String::new();
    md.push_str(&format!("# {} {} results\n\n", manifest.tool, manifest.version));
    md.push_str(&format!("Seed: {}\n\n", manifest.params.seed));
    md.push_str("| input | file | papers | authors | focal | checksum |\n|---|---|---|---|---|---|\n");
    for d in &manifest.disciplines {
        md.push_str(&format!(
            "| {} | {} | {} | {} | {} | `{}` |\n",
            d.name,
            d.file_name,
            d.n_papers,
            d.n_authors,
            d.n_focal,
            &d.checksum[..16.min(d.checksum.len())]
        ));
    }
    for name in &manifest.tables {
        let file = format!("{name}.csv");
        let path = out_dir.join(&file);
        let mut reader = csv::Reader::from_reader(open_artifact(&path, "stats")?);
        let headers: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
        let rows: Vec<Vec<String>> = reader
            .records()
            .map(|r| r.map(|r| r.iter().map(str::to_string).collect()))
            .collect::<std::result::Result<_, _>>()?;
        index.push(vec![
            Cell::Str(name.clone()),
            Cell::Str(file.clone()),
            Cell::Int(rows.len() as i64),
            Cell::Str(headers.join(";")),
        ]);
        md.push_str(&format!("\n## {name}\n\n"));
        if rows.is_empty() {
            md.push_str("(no rows)\n");
            continue;
        }
        md.push_str(&format!("| {} |\n", headers.join(" | ")));
        md.push_str(&format!("|{}\n", "---|".repeat(headers.len())));
        const MAX_ROWS: usize = 40;
        for r in rows.iter().take(MAX_ROWS) {
            md.push_str(&format!("| {} |\n", r.join(" | ")));
        }
        if rows.len() > MAX_ROWS {
            md.push_str(&format!("\n{} more rows in `{file}`.\n", rows.len() - MAX_ROWS));
        }
    }
    write_with(&out_dir.join("index.csv"), |w| index.write_csv(w))?;
    write_with(&out_dir.join("report.md"), |w| Ok(w.write_all(md.as_bytes())?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_unique() {
        let names = discipline_names(&["a/phys.jsonl".into(), "b/phys.jsonl".into(), "chem.csv".into()]);
        assert_eq!(names, ["phys", "phys-2", "chem"]);
    }

    #[test]
    fn file_names_escape_and_disambiguate() {
        assert_eq!(artifact_file_name("F0001"), "F0001.csv");
        let a = artifact_file_name("a/b");
        let b = artifact_file_name("a_b");
        assert_ne!(a, b);
        assert!(a.starts_with("a_b-") && !a.contains('/'));
    }
}
