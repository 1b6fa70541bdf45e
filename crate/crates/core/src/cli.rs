//! Command-line surface: argument parsing, config files and the commands.
//!
//! Every run setting can come from a TOML file (`--config`) or a flag; flags
//! win. Commands are plain functions so they can be driven from tests.

use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bm25::{Bm25Index, Bm25Params};
use crate::corpus::{load_corpus, load_questions, Question};
use crate::error::{Error, Result};
use crate::gateway::{Backend, Gateway, GenerationSettings, HttpBackend, MockBackend, API_KEY_ENV};
use crate::orchestrator::{
    export_trajectories, generate_answer, run_bm25, run_reflection, run_serts, Method,
    RetrievalOutcome, TrajectoryRecord,
};
use crate::report::{QuestionRow, RunReport};
use crate::tree::{SearchConfig, SelectionPolicy, UcbForm};

pub const DEFAULT_SEEDS: [u64; 3] = [42, 43, 44];

pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const CONFIG: i32 = 1;
    pub const IO: i32 = 2;
    pub const ALL_FAILED: i32 = 3;
}

#[derive(Debug, Parser)]
#[command(name = "serts", version, about = "Tree-search retrieval over BM25 with LLM query proposer and evaluator")]
pub struct Cli {
    /// TOML file with run settings; command-line flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the BM25 index and optionally persist it.
    Index(IndexArgs),
    /// Run a retrieval method over every question for every seed.
    Run(RunArgs),
    /// Recompute metrics for a stored report against a questions file.
    Eval(EvalArgs),
    /// Run tree search or reflection and write only the trajectories.
    ExportTrajectories(RunArgs),
}

#[derive(Debug, Args)]
pub struct IndexArgs {
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    /// Where to write the index file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub k1: Option<f64>,
    #[arg(long)]
    pub b: Option<f64>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Report written by `run`.
    #[arg(long)]
    pub report: PathBuf,
    #[arg(long)]
    pub questions: Option<PathBuf>,
    /// Output path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BackendKind {
    Mock,
    Http,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Bm25,
    Reflection,
    Serts,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Bm25 => Method::Bm25,
            MethodArg::Reflection => Method::Reflection,
            MethodArg::Serts => Method::Serts,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    Random,
    MaxUcb,
}

impl From<PolicyArg> for SelectionPolicy {
    fn from(p: PolicyArg) -> Self {
        match p {
            PolicyArg::Random => SelectionPolicy::Random,
            PolicyArg::MaxUcb => SelectionPolicy::MaxUcb,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum UcbFormArg {
    Ratio,
    Standard,
}

impl From<UcbFormArg> for UcbForm {
    fn from(f: UcbFormArg) -> Self {
        match f {
            UcbFormArg::Ratio => UcbForm::Ratio,
            UcbFormArg::Standard => UcbForm::Standard,
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    #[arg(long)]
    pub questions: Option<PathBuf>,
    /// Load a persisted index instead of building one from --corpus.
    #[arg(long)]
    pub index: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
    #[arg(long, value_enum)]
    pub backend: Option<BackendKind>,
    #[arg(long)]
    pub mock_script: Option<PathBuf>,
    #[arg(long)]
    pub base_url: Option<String>,
    #[arg(long)]
    pub model: Option<String>,
    #[arg(long)]
    pub temperature: Option<f64>,
    #[arg(long)]
    pub max_tokens: Option<u32>,
    #[arg(long)]
    pub sim: Option<usize>,
    #[arg(long)]
    pub branch: Option<usize>,
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long)]
    pub exploration_c: Option<f64>,
    #[arg(long, value_enum)]
    pub policy: Option<PolicyArg>,
    #[arg(long, value_enum)]
    pub ucb_form: Option<UcbFormArg>,
    #[arg(long)]
    pub reward_scale: Option<f64>,
    #[arg(long)]
    pub top_k: Option<usize>,
    /// Comma-separated seeds, default 42,43,44.
    #[arg(long, value_delimiter = ',')]
    pub seeds: Option<Vec<u64>>,
    #[arg(long)]
    pub workers: Option<usize>,
    /// Also generate an answer per question from the retrieved documents.
    #[arg(long)]
    pub answer: bool,
    /// Report path (`run`); stdout when omitted.
    #[arg(long = "report")]
    pub out_report: Option<PathBuf>,
    /// Trajectory output path.
    #[arg(long = "trajectories", alias = "out")]
    pub out_trajectories: Option<PathBuf>,
}

/// Settings accepted in the TOML config file.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub corpus: Option<PathBuf>,
    pub questions: Option<PathBuf>,
    pub index: Option<PathBuf>,
    pub method: Option<Method>,
    pub backend: Option<BackendKind>,
    pub mock_script: Option<PathBuf>,
    pub base_url: Option<String>,
    pub model: Option<String>,
    pub temperature: Option<f64>,
    pub max_tokens: Option<u32>,
    pub sim: Option<usize>,
    pub branch: Option<usize>,
    pub depth: Option<usize>,
    pub exploration_c: Option<f64>,
    pub policy: Option<SelectionPolicy>,
    pub ucb_form: Option<UcbForm>,
    pub reward_scale: Option<f64>,
    pub top_k: Option<usize>,
    pub seeds: Option<Vec<u64>>,
    pub workers: Option<usize>,
    pub answer: Option<bool>,
    pub report: Option<PathBuf>,
    pub trajectories: Option<PathBuf>,
    pub k1: Option<f64>,
    pub b: Option<f64>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }
}

/// Fully resolved settings for `run` and `export-trajectories`.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub corpus_path: Option<PathBuf>,
    pub index_path: Option<PathBuf>,
    pub questions_path: PathBuf,
    pub method: Method,
    pub backend: BackendKind,
    pub mock_script_path: Option<PathBuf>,
    pub base_url: Option<String>,
    pub generation: GenerationSettings,
    pub search: SearchConfig,
    pub bm25: Bm25Params,
    pub seeds: Vec<u64>,
    pub workers: usize,
    pub generate_answers: bool,
    pub out_report: Option<PathBuf>,
    pub out_trajectories: Option<PathBuf>,
}

impl RunConfig {
    /// A mock-backed config with default search settings.
    pub fn new(corpus: impl Into<PathBuf>, questions: impl Into<PathBuf>, method: Method) -> Self {
        Self {
            corpus_path: Some(corpus.into()),
            index_path: None,
            questions_path: questions.into(),
            method,
            backend: BackendKind::Mock,
            mock_script_path: None,
            base_url: None,
            generation: GenerationSettings::default(),
            search: SearchConfig::default(),
            bm25: Bm25Params::default(),
            seeds: DEFAULT_SEEDS.to_vec(),
            workers: 1,
            generate_answers: false,
            out_report: None,
            out_trajectories: None,
        }
    }

    /// Merges flags over the config file over defaults.
    pub fn resolve(args: &RunArgs, file: &FileConfig) -> Result<Self> {
        let defaults = SearchConfig::default();
        let generation_defaults = GenerationSettings::default();
        let questions_path = args
            .questions
            .clone()
            .or_else(|| file.questions.clone())
            .ok_or_else(|| Error::Config("a questions file is required (--questions)".into()))?;
        let backend = args.backend.or(file.backend).unwrap_or(BackendKind::Mock);
        let mut generation = GenerationSettings {
            model: args
                .model
                .clone()
                .or_else(|| file.model.clone())
                .unwrap_or(generation_defaults.model),
            temperature: args.temperature.or(file.temperature).unwrap_or(generation_defaults.temperature),
            max_tokens: args.max_tokens.or(file.max_tokens).unwrap_or(generation_defaults.max_tokens),
        };
        if backend == BackendKind::Http && args.model.is_none() && file.model.is_none() {
            generation.model = String::new();
        }
        let config = Self {
            corpus_path: args.corpus.clone().or_else(|| file.corpus.clone()),
            index_path: args.index.clone().or_else(|| file.index.clone()),
            questions_path,
            method: args.method.map(Method::from).or(file.method).unwrap_or(Method::Serts),
            backend,
            mock_script_path: args.mock_script.clone().or_else(|| file.mock_script.clone()),
            base_url: args.base_url.clone().or_else(|| file.base_url.clone()),
            generation,
            search: SearchConfig {
                max_sim: args.sim.or(file.sim).unwrap_or(defaults.max_sim),
                max_branch: args.branch.or(file.branch).unwrap_or(defaults.max_branch),
                max_depth: args.depth.or(file.depth).unwrap_or(defaults.max_depth),
                exploration_c: args.exploration_c.or(file.exploration_c).unwrap_or(defaults.exploration_c),
                top_k: args.top_k.or(file.top_k).unwrap_or(defaults.top_k),
                policy: args.policy.map(Into::into).or(file.policy).unwrap_or(defaults.policy),
                ucb_form: args.ucb_form.map(Into::into).or(file.ucb_form).unwrap_or(defaults.ucb_form),
                reward_scale: args.reward_scale.or(file.reward_scale).unwrap_or(defaults.reward_scale),
            },
            bm25: Bm25Params {
                k1: file.k1.unwrap_or(Bm25Params::default().k1),
                b: file.b.unwrap_or(Bm25Params::default().b),
            },
            seeds: args
                .seeds
                .clone()
                .or_else(|| file.seeds.clone())
                .unwrap_or_else(|| DEFAULT_SEEDS.to_vec()),
            workers: args.workers.or(file.workers).unwrap_or(1),
            generate_answers: args.answer || file.answer.unwrap_or(false),
            out_report: args.out_report.clone().or_else(|| file.report.clone()),
            out_trajectories: args.out_trajectories.clone().or_else(|| file.trajectories.clone()),
        };
        Ok(config)
    }

    pub fn needs_gateway(&self) -> bool {
        self.method != Method::Bm25 || self.generate_answers
    }

    /// Checks every invariant that can be checked before any work starts.
    pub fn validate(&self) -> Result<()> {
        if self.corpus_path.is_none() && self.index_path.is_none() {
            return Err(Error::Config("either --corpus or --index is required".into()));
        }
        if self.seeds.is_empty() {
            return Err(Error::Config("at least one seed is required".into()));
        }
        if self.workers == 0 {
            return Err(Error::Config("workers must be at least 1".into()));
        }
        if self.generation.temperature.is_nan() || self.generation.temperature < 0.0 {
            return Err(Error::Config("temperature must be >= 0".into()));
        }
        if self.generation.max_tokens == 0 {
            return Err(Error::Config("max_tokens must be >= 1".into()));
        }
        if self.bm25.k1.is_nan() || self.bm25.k1 <= 0.0 || !(0.0..=1.0).contains(&self.bm25.b) {
            return Err(Error::Config("BM25 needs k1 > 0 and b in [0, 1]".into()));
        }
        self.search.validate()?;
        if self.needs_gateway() {
            match self.backend {
                BackendKind::Mock if self.mock_script_path.is_none() => {
                    return Err(Error::Config("mock backend requires --mock-script".into()))
                }
                BackendKind::Http => {
                    if self.base_url.is_none() {
                        return Err(Error::Config("http backend requires --base-url".into()));
                    }
                    if std::env::var(API_KEY_ENV).is_err() {
                        return Err(Error::Config(format!("http backend requires {API_KEY_ENV}")));
                    }
                    if self.generation.model.is_empty() {
                        return Err(Error::Config("http backend requires --model".into()));
                    }
                }
                _ => {}
            }
        }
        Ok(())
    }

    fn load_index(&self) -> Result<Bm25Index> {
        match (&self.index_path, &self.corpus_path) {
            (Some(path), _) => Bm25Index::load(path),
            (None, Some(path)) => Ok(Bm25Index::build(Arc::new(load_corpus(path)?), self.bm25)),
            (None, None) => Err(Error::Config("either --corpus or --index is required".into())),
        }
    }

    fn build_gateway(&self) -> Result<Option<Gateway>> {
        if !self.needs_gateway() {
            return Ok(None);
        }
        let backend: Arc<dyn Backend> = match self.backend {
            BackendKind::Mock => {
                let path = self
                    .mock_script_path
                    .as_ref()
                    .ok_or_else(|| Error::Config("mock backend requires --mock-script".into()))?;
                Arc::new(MockBackend::from_file(path)?)
            }
            BackendKind::Http => {
                let url = self
                    .base_url
                    .as_ref()
                    .ok_or_else(|| Error::Config("http backend requires --base-url".into()))?;
                Arc::new(HttpBackend::from_env(url)?)
            }
        };
        Ok(Some(Gateway::new(backend, self.generation.clone())))
    }
}

/// Everything a finished `run` produced.
#[derive(Debug)]
pub struct RunOutput {
    pub report: RunReport,
    pub trajectories: Vec<TrajectoryRecord>,
}

impl RunOutput {
    pub fn all_failed(&self) -> bool {
        let total = self.report.total_rows();
        total > 0 && self.report.failed_rows() == total
    }
}

struct Workspace {
    index: Bm25Index,
    questions: Vec<Question>,
    gateway: Option<Gateway>,
    pool: rayon::ThreadPool,
}

impl Workspace {
    fn open(config: &RunConfig) -> Result<Self> {
        config.validate()?;
        let gateway = config.build_gateway()?;
        let index = config.load_index()?;
        let questions = load_questions(&config.questions_path)?;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.workers)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
        Ok(Self {
            index,
            questions,
            gateway,
            pool,
        })
    }

    fn run_question(
        &self,
        config: &RunConfig,
        question: &Question,
        seed: u64,
    ) -> Result<(RetrievalOutcome, Vec<TrajectoryRecord>)> {
        let gateway = || {
            self.gateway
                .as_ref()
                .ok_or_else(|| Error::Config("no backend configured".into()))
        };
        let (mut outcome, mut records) = match config.method {
            Method::Bm25 => (run_bm25(question, &self.index, config.search.top_k), Vec::new()),
            Method::Reflection => run_reflection(question, &self.index, gateway()?, &config.search, seed)?,
            Method::Serts => run_serts(question, &self.index, gateway()?, &config.search, seed)?,
        };
        if config.generate_answers {
            let resp = generate_answer(question, &outcome.doc_ids, self.index.corpus(), gateway()?, Some(seed))?;
            outcome.llm_calls += 1;
            outcome.prompt_tokens += resp.prompt_tokens;
            outcome.completion_tokens += resp.completion_tokens;
            outcome.answer = Some(resp.text);
        }
        for r in &mut records {
            r.seed = Some(seed);
        }
        if let Some(gw) = &self.gateway {
            gw.usage().record_question();
        }
        Ok((outcome, records))
    }

    fn run_seed(&self, config: &RunConfig, seed: u64) -> Vec<(QuestionRow, Vec<TrajectoryRecord>)> {
        self.pool.install(|| {
            self.questions
                .par_iter()
                .map(|q| match self.run_question(config, q, seed) {
                    Ok((outcome, records)) => (QuestionRow::from_outcome(&outcome), records),
                    Err(e) => {
                        log::error!("seed {seed} question {}: {e}", q.id);
                        (QuestionRow::failed(&q.id, &e), Vec::new())
                    }
                })
                .collect()
        })
    }
}

/// Executes the configured method for every seed and question, then writes the
/// report and trajectories where configured.
pub fn cmd_run(config: &RunConfig) -> Result<RunOutput> {
    let ws = Workspace::open(config)?;
    let mut runs = Vec::with_capacity(config.seeds.len());
    let mut trajectories = Vec::new();
    for &seed in &config.seeds {
        let results = ws.run_seed(config, seed);
        let mut rows = Vec::with_capacity(results.len());
        for (row, records) in results {
            rows.push(row);
            trajectories.extend(records);
        }
        runs.push((seed, rows));
    }
    let uses_tree = config.method == Method::Serts;
    let report = RunReport::assemble(
        config.method,
        uses_tree.then_some(config.search.policy),
        uses_tree.then_some(config.search.exploration_c),
        runs,
        &ws.questions,
    )?;
    if let Some(path) = &config.out_report {
        report.write(path)?;
    }
    if let Some(path) = &config.out_trajectories {
        export_trajectories(&trajectories, path)?;
    }
    Ok(RunOutput {
        report,
        trajectories,
    })
}

/// Runs an LLM-driven method and writes only its trajectories.
pub fn cmd_export_trajectories(config: &RunConfig) -> Result<Vec<TrajectoryRecord>> {
    if config.method == Method::Bm25 {
        return Err(Error::Config("bm25 produces no trajectories; use serts or reflection".into()));
    }
    let out = config
        .out_trajectories
        .as_ref()
        .ok_or_else(|| Error::Config("export-trajectories requires --out".into()))?;
    let config = RunConfig {
        generate_answers: false,
        out_report: None,
        out_trajectories: Some(out.clone()),
        ..config.clone()
    };
    Ok(cmd_run(&config)?.trajectories)
}

/// Corpus statistics printed by `index`.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexStats {
    pub documents: usize,
    pub avg_doc_len: f64,
    pub terms: usize,
}

impl fmt::Display for IndexStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "N={} avgdl={:.4} terms={}",
            self.documents, self.avg_doc_len, self.terms
        )
    }
}

pub fn cmd_index(corpus: &Path, out: Option<&Path>, params: Bm25Params) -> Result<IndexStats> {
    let corpus = Arc::new(load_corpus(corpus)?);
    let index = Bm25Index::build(corpus.clone(), params);
    if let Some(path) = out {
        index.save(path)?;
    }
    Ok(IndexStats {
        documents: corpus.len(),
        avg_doc_len: corpus.avg_doc_len(),
        terms: index.num_terms(),
    })
}

/// Recomputes a stored report's metrics against `questions`.
pub fn cmd_eval(report: &Path, questions: &Path) -> Result<RunReport> {
    let mut report = RunReport::read(report)?;
    let questions = load_questions(questions)?;
    report.rescore(&questions)?;
    Ok(report)
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config(_) => exit::CONFIG,
        _ => exit::IO,
    }
}

fn print_or_write(report: &RunReport, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => report.write(path),
        None => {
            print!("{}", report.to_json()?);
            Ok(())
        }
    }
}

/// Entry point shared by the binary; returns the process exit code.
pub fn main_with(cli: Cli) -> i32 {
    let file = match &cli.config {
        Some(path) => match FileConfig::load(path) {
            Ok(f) => f,
            Err(e) => {
                eprintln!("error: {e}");
                return exit_code(&e);
            }
        },
        None => FileConfig::default(),
    };
    let result = match cli.command {
        Command::Index(args) => (|| {
            let corpus = args
                .corpus
                .or(file.corpus.clone())
                .ok_or_else(|| Error::Config("--corpus is required".into()))?;
            let params = Bm25Params {
                k1: args.k1.or(file.k1).unwrap_or(1.2),
                b: args.b.or(file.b).unwrap_or(0.75),
            };
            let out = args.out.or(file.index.clone());
            let stats = cmd_index(&corpus, out.as_deref(), params)?;
            println!("{stats}");
            Ok(exit::SUCCESS)
        })(),
        Command::Run(args) => (|| {
            let config = RunConfig::resolve(&args, &file)?;
            let output = cmd_run(&config)?;
            if config.out_report.is_none() {
                print_or_write(&output.report, None)?;
            } else {
                let a = &output.report.aggregate;
                eprintln!(
                    "{} questions x {} seeds, {} failed: P={:.2} R={:.2} F1={:.2} Hit={:.2}",
                    a.questions / config.seeds.len().max(1),
                    config.seeds.len(),
                    output.report.failed_rows(),
                    a.precision,
                    a.recall,
                    a.f1,
                    a.hit_rate
                );
            }
            Ok(if output.all_failed() {
                exit::ALL_FAILED
            } else {
                exit::SUCCESS
            })
        })(),
        Command::Eval(args) => (|| {
            let questions = args
                .questions
                .or(file.questions.clone())
                .ok_or_else(|| Error::Config("--questions is required".into()))?;
            let report = cmd_eval(&args.report, &questions)?;
            print_or_write(&report, args.out.as_deref())?;
            Ok(exit::SUCCESS)
        })(),
        Command::ExportTrajectories(args) => (|| {
            let config = RunConfig::resolve(&args, &file)?;
            let records = cmd_export_trajectories(&config)?;
            eprintln!("wrote {} trajectory records", records.len());
            Ok(exit::SUCCESS)
        })(),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("serts").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn flags_override_file() {
        let cli = parse(&["run", "--questions", "q.jsonl", "--corpus", "c.jsonl", "--sim", "6", "--seeds", "1,2"]);
        let Command::Run(args) = cli.command else { panic!() };
        let file: FileConfig = toml::from_str(
            "sim = 4\nbranch = 2\npolicy = \"random\"\nmethod = \"reflection\"\nquestions = \"other.jsonl\"",
        )
        .unwrap();
        let cfg = RunConfig::resolve(&args, &file).unwrap();
        assert_eq!(cfg.search.max_sim, 6);
        assert_eq!(cfg.search.max_branch, 2);
        assert_eq!(cfg.search.policy, SelectionPolicy::Random);
        assert_eq!(cfg.method, Method::Reflection);
        assert_eq!(cfg.questions_path, PathBuf::from("q.jsonl"));
        assert_eq!(cfg.seeds, vec![1, 2]);
    }

    #[test]
    fn defaults() {
        let cli = parse(&["run", "--questions", "q.jsonl", "--corpus", "c.jsonl"]);
        let Command::Run(args) = cli.command else { panic!() };
        let cfg = RunConfig::resolve(&args, &FileConfig::default()).unwrap();
        assert_eq!(cfg.seeds, vec![42, 43, 44]);
        assert_eq!(cfg.search, SearchConfig::default());
        assert_eq!(cfg.generation.temperature, 0.7);
        assert_eq!(cfg.generation.max_tokens, 4096);
        assert_eq!(cfg.method, Method::Serts);
    }

    #[test]
    fn config_invariants() {
        let mut cfg = RunConfig::new("c", "q", Method::Serts);
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));
        cfg.mock_script_path = Some("m".into());
        assert!(cfg.validate().is_ok());
        cfg.backend = BackendKind::Http;
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));
        let mut bm25 = RunConfig::new("c", "q", Method::Bm25);
        assert!(bm25.validate().is_ok());
        bm25.workers = 0;
        assert!(bm25.validate().is_err());
    }

    #[test]
    fn unknown_file_keys_rejected() {
        assert!(toml::from_str::<FileConfig>("simulations = 3").is_err());
    }
}
