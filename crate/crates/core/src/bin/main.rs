use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use collabtopics::config::{AnalysisParams, RunConfig};
use collabtopics::error::{Error, Result};
use collabtopics::ingest::ValidationConfig;
use collabtopics::metrics::Averaging;
use collabtopics::pipeline;
use collabtopics::synth::{generate, SynthSpec};

#[derive(Parser)]
#[command(name = "collabtopics", version, about = "Collaborator topic involvement analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic corpus with planted topics.
    Synth(SynthArgs),
    /// Check input corpora and list rejected records.
    IngestValidate(ValidateArgs),
    /// Detect topics and write colored series per focal scientist.
    DetectTopics(StageArgs),
    /// Write per-collaborator summaries from detected topics.
    Decompose(StageArgs),
    /// Write time-controlled reshuffled authorship graphs.
    Shuffle(StageArgs),
    /// Compute the table bundle from stage outputs.
    Stats(StageArgs),
    /// Render an existing bundle as index.csv and report.md.
    Report(ReportArgs),
    /// Run every stage and write the table bundle.
    Run(StageArgs),
}

#[derive(Args)]
struct OutArg {
    /// Output directory.
    #[arg(long, env = "COLLAB_TOPICS_OUT")]
    out: PathBuf,
}

#[derive(Args)]
struct ValidationArgs {
    /// Abort on the first invalid record.
    #[arg(long)]
    strict: bool,
    #[arg(long, default_value_t = ValidationConfig::default().min_year)]
    min_year: i32,
    #[arg(long, default_value_t = ValidationConfig::default().max_year)]
    max_year: i32,
}

impl ValidationArgs {
    fn config(&self) -> ValidationConfig {
        ValidationConfig {
            min_year: self.min_year,
            max_year: self.max_year,
            strict: self.strict,
        }
    }
}

#[derive(Args)]
struct ValidateArgs {
    /// Corpus file (.jsonl or .csv); repeat for several disciplines.
    #[arg(long = "input", required = true)]
    inputs: Vec<PathBuf>,
    #[command(flatten)]
    validation: ValidationArgs,
}

#[derive(Args)]
struct ReportArgs {
    #[command(flatten)]
    out: OutArg,
}

#[derive(Args)]
struct StageArgs {
    /// Corpus file (.jsonl or .csv); repeat for several disciplines. The
    /// first input feeds the single-discipline tables.
    #[arg(long = "input", required = true)]
    inputs: Vec<PathBuf>,
    #[command(flatten)]
    out: OutArg,
    /// Global seed for every randomized step.
    #[arg(long)]
    seed: u64,
    /// Worker threads (0 uses every core).
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Also write per-scientist series, networks and collaborator tables.
    #[arg(long)]
    export_intermediates: bool,
    #[arg(long, default_value_t = 50)]
    min_papers: usize,
    /// Minimum fraction of papers (exclusive) for a community to be a topic.
    #[arg(long, default_value_t = 0.05)]
    topic_threshold: f64,
    /// Weight co-citing links by the number of shared references.
    #[arg(long)]
    weighted: bool,
    #[arg(long, default_value_t = 2)]
    min_copub: usize,
    #[arg(long, default_value_t = 10)]
    min_copub_high: usize,
    /// Leave papers outside major topics out of co-publication counts.
    #[arg(long)]
    exclude_minor_papers: bool,
    /// Reshuffle swap attempts per authorship link.
    #[arg(long, default_value_t = 4)]
    rounds_factor: usize,
    /// Emit every topic-count table for the reshuffled surrogate too.
    #[arg(long)]
    surrogate: bool,
    /// Years before a topic start that count as recent collaboration.
    #[arg(long, default_value_t = 2)]
    recent_window: i32,
    /// Past co-publications needed to count as an existing collaborator.
    #[arg(long, default_value_t = 1)]
    join_min_copub: usize,
    /// Average join probabilities per focal scientist instead of pooling.
    #[arg(long)]
    per_focal_join: bool,
    #[arg(long, default_value_t = 5)]
    career_stage_width: i32,
    /// Top-k percentages for productivity and impact strata.
    #[arg(long, value_delimiter = ',', default_values_t = [1u32, 5, 10, 20])]
    top_k: Vec<u32>,
    #[arg(long, default_value_t = 30)]
    cohort_window: i32,
    /// Width in years of career-start cohorts.
    #[arg(long, default_value_t = 10)]
    cohort_width: i32,
    #[arg(long, default_value_t = 10)]
    cohort_top_k: u32,
    /// Degree-preserved rewirings per collaborator network.
    #[arg(long, default_value_t = 10)]
    n_rewires: usize,
    #[command(flatten)]
    validation: ValidationArgs,
}

impl StageArgs {
    fn config(self) -> RunConfig {
        RunConfig {
            params: AnalysisParams {
                seed: self.seed,
                min_papers: self.min_papers,
                topic_threshold: self.topic_threshold,
                weighted: self.weighted,
                min_copub: self.min_copub,
                min_copub_high: self.min_copub_high,
                count_minor_papers: !self.exclude_minor_papers,
                rounds_factor: self.rounds_factor,
                surrogate: self.surrogate,
                recent_window: self.recent_window,
                join_min_copub: self.join_min_copub,
                join_averaging: if self.per_focal_join {
                    Averaging::PerFocal
                } else {
                    Averaging::Pooled
                },
                career_stage_width: self.career_stage_width,
                top_k: self.top_k,
                cohort_window: self.cohort_window,
                cohort_width: self.cohort_width,
                cohort_top_k: self.cohort_top_k,
                n_rewires: self.n_rewires,
                validation: self.validation.config(),
            },
            inputs: self.inputs,
            out_dir: self.out.out,
            workers: self.workers,
            export_intermediates: self.export_intermediates,
        }
    }
}

#[derive(Args)]
struct SynthArgs {
    #[command(flatten)]
    out: OutArg,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = SynthSpec::default().n_focal)]
    n_focal: usize,
    #[arg(long, default_value_t = SynthSpec::default().topics_per_focal)]
    topics_per_focal: usize,
    #[arg(long, default_value_t = SynthSpec::default().papers_per_topic)]
    papers_per_topic: usize,
    #[arg(long, default_value_t = SynthSpec::default().papers_jitter)]
    papers_jitter: usize,
    #[arg(long, default_value_t = SynthSpec::default().pool_size)]
    pool_size: usize,
    #[arg(long, default_value_t = SynthSpec::default().refs_per_paper)]
    refs_per_paper: usize,
    #[arg(long, default_value_t = SynthSpec::default().pool_overlap)]
    pool_overlap: f64,
    #[arg(long, default_value_t = SynthSpec::default().collaborators_per_topic)]
    collaborators_per_topic: usize,
    #[arg(long, default_value_t = SynthSpec::default().coauthors_per_paper)]
    coauthors_per_paper: usize,
    #[arg(long, default_value_t = SynthSpec::default().multi_topic_fraction)]
    multi_topic_fraction: f64,
    #[arg(long, default_value_t = SynthSpec::default().solo_papers)]
    solo_papers: usize,
    #[arg(long, default_value_t = SynthSpec::default().newcomer_fraction)]
    newcomer_fraction: f64,
    #[arg(long, default_value_t = SynthSpec::default().first_year)]
    first_year: i32,
    #[arg(long, default_value_t = SynthSpec::default().last_year)]
    last_year: i32,
}

impl SynthArgs {
    fn spec(&self) -> SynthSpec {
        SynthSpec {
            n_focal: self.n_focal,
            topics_per_focal: self.topics_per_focal,
            papers_per_topic: self.papers_per_topic,
            papers_jitter: self.papers_jitter,
            pool_size: self.pool_size,
            refs_per_paper: self.refs_per_paper,
            pool_overlap: self.pool_overlap,
            collaborators_per_topic: self.collaborators_per_topic,
            coauthors_per_paper: self.coauthors_per_paper,
            multi_topic_fraction: self.multi_topic_fraction,
            solo_papers: self.solo_papers,
            newcomer_fraction: self.newcomer_fraction,
            first_year: self.first_year,
            last_year: self.last_year,
            seed: self.seed,
            ..SynthSpec::default()
        }
    }
}

fn validate_inputs(args: &ValidateArgs) -> Result<()> {
    let config = args.validation.config();
    let mut rejected = 0;
    for path in &args.inputs {
        let report = collabtopics::ingest::load_corpus_path(path, &config)?;
        for r in &report.rejections {
            println!("{}: {r}", path.display());
        }
        println!(
            "{}: {} papers, {} authors, {} rejected, checksum {}",
            path.display(),
            report.corpus.len(),
            report.corpus.n_authors(),
            report.rejections.len(),
            report.corpus.checksum()
        );
        rejected += report.rejections.len();
    }
    if rejected > 0 {
        return Err(Error::ValidationFailed(rejected));
    }
    Ok(())
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Synth(args) => {
            let synth = generate(&args.spec())?;
            synth.write(&args.out.out)?;
            println!(
                "wrote {} papers to {}",
                synth.corpus.len(),
                args.out.out.join("corpus.jsonl").display()
            );
        }
        Command::IngestValidate(args) => validate_inputs(&args)?,
        Command::DetectTopics(args) => pipeline::stage_detect_topics(&args.config())?,
        Command::Decompose(args) => pipeline::stage_decompose(&args.config())?,
        Command::Shuffle(args) => pipeline::stage_shuffle(&args.config())?,
        Command::Stats(args) => {
            let out = pipeline::stage_stats(&args.config())?;
            println!("wrote {} tables", out.manifest.tables.len());
        }
        Command::Report(args) => pipeline::stage_report(&args.out.out)?,
        Command::Run(args) => {
            let out = pipeline::run_pipeline(&args.config())?;
            println!("wrote {} tables", out.manifest.tables.len());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
