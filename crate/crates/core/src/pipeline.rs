//! End-to-end runs: read an input, reduce it, build lattices, write
//! artifacts; and the five-configuration evaluation over a corpus directory.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::cex::{read_cex, write_cex};
use crate::context::FormalContext;
use crate::ingest::{
    context_from_pairs, extract_pairs, filter_triples, parse_dependencies, read_pairs_tsv,
    IngestOptions,
};
use crate::lattice::{build_lattice, export_dot, lattice_stats, LatticeStats};
use crate::reduce::{apply_order, ReduceError, ReductionReport, TechniqueConfig, TechniqueOrder};
use crate::stats::EvalRow;
use crate::wordnet::{Lemmatizer, Pos, RelatednessLexicon, WordNetDb};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("{path}: {message}")]
    Input { path: PathBuf, message: String },
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Reduce(#[from] ReduceError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl PipelineError {
    /// 1 for unreadable or malformed input, 2 for configuration problems.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Input { .. } | PipelineError::Io { .. } => 1,
            PipelineError::Config(_) => 2,
            PipelineError::Reduce(
                ReduceError::MissingLexicon(_) | ReduceError::ThresholdOutOfRange(_),
            ) => 2,
            PipelineError::Reduce(_) => 1,
        }
    }

    fn input(path: &Path, message: impl ToString) -> Self {
        PipelineError::Input {
            path: path.to_path_buf(),
            message: message.to_string(),
        }
    }

    fn io(path: &Path, source: std::io::Error) -> Self {
        PipelineError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputKind {
    /// Typed-dependency parser output.
    Dependencies,
    /// `attribute<TAB>object` lines.
    Pairs,
    Cex,
    Csv,
}

impl InputKind {
    /// Guesses from the extension: `.cex`, `.csv`, `.tsv`; anything else is
    /// read as dependency output.
    pub fn detect(path: &Path) -> Self {
        match path
            .extension()
            .and_then(|e| e.to_str())
            .map(str::to_ascii_lowercase)
            .as_deref()
        {
            Some("cex") => InputKind::Cex,
            Some("csv") => InputKind::Csv,
            Some("tsv") => InputKind::Pairs,
            _ => InputKind::Dependencies,
        }
    }
}

impl FromStr for InputKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "deps" | "dependencies" => Ok(InputKind::Dependencies),
            "pairs" | "tsv" => Ok(InputKind::Pairs),
            "cex" => Ok(InputKind::Cex),
            "csv" => Ok(InputKind::Csv),
            _ => Err(format!(
                "unknown input kind `{s}` (expected deps, pairs, cex or csv)"
            )),
        }
    }
}

/// Lexical resources, usually both backed by one WordNet database.
#[derive(Clone, Copy, Default)]
pub struct Resources<'a> {
    pub lemmatizer: Option<&'a dyn Lemmatizer>,
    pub lexicon: Option<&'a dyn RelatednessLexicon>,
}

impl<'a> Resources<'a> {
    pub fn wordnet(db: &'a WordNetDb) -> Self {
        Self {
            lemmatizer: Some(db),
            lexicon: Some(db),
        }
    }
}

/// Leaves every word as it is.
pub struct Verbatim;

impl Lemmatizer for Verbatim {
    fn lemmatize(&self, _word: &str, _pos: Pos) -> Option<String> {
        None
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LoadOptions {
    pub kind: Option<InputKind>,
    pub ingest: IngestOptions,
    /// Accept `.cex` files whose declared frequencies are wrong.
    pub lenient: bool,
}

/// Reads a context from any supported input. Dependency output goes through
/// filtering, pair extraction and lemmatization (skipped without a
/// lemmatizer).
pub fn load_context(
    path: &Path,
    options: LoadOptions,
    lemmatizer: Option<&dyn Lemmatizer>,
) -> Result<FormalContext, PipelineError> {
    let bytes = fs::read(path).map_err(|e| PipelineError::io(path, e))?;
    let kind = options.kind.unwrap_or_else(|| InputKind::detect(path));
    if kind == InputKind::Cex {
        let doc = read_cex(&bytes).map_err(|e| PipelineError::input(path, e))?;
        if !options.lenient {
            doc.validate().map_err(|e| PipelineError::input(path, e))?;
        }
        return Ok(doc.context);
    }
    let text =
        String::from_utf8(bytes).map_err(|_| PipelineError::input(path, "not UTF-8 text"))?;
    match kind {
        InputKind::Csv => FormalContext::from_csv(&text).map_err(|e| PipelineError::input(path, e)),
        InputKind::Pairs => {
            let pairs =
                read_pairs_tsv(&text, options.ingest).map_err(|e| PipelineError::input(path, e))?;
            Ok(context_from_pairs(&pairs))
        }
        InputKind::Dependencies => {
            let triples = parse_dependencies(&text).map_err(|e| PipelineError::input(path, e))?;
            let lemmatizer = lemmatizer.unwrap_or(&Verbatim);
            let pairs = extract_pairs(&filter_triples(&triples), lemmatizer, options.ingest);
            Ok(context_from_pairs(&pairs))
        }
        InputKind::Cex => unreachable!(),
    }
}

/// Reduces a context and returns it with its lattice statistics.
pub fn reduce_and_measure(
    ctx: &FormalContext,
    technique: &TechniqueConfig,
    lexicon: Option<&dyn RelatednessLexicon>,
) -> Result<(FormalContext, Vec<ReductionReport>, LatticeStats), PipelineError> {
    let (reduced, reports) = apply_order(ctx, technique, lexicon)?;
    let stats = lattice_stats(&build_lattice(&reduced));
    Ok((reduced, reports, stats))
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub input: PathBuf,
    pub load: LoadOptions,
    pub technique: TechniqueConfig,
    pub out_dir: PathBuf,
    /// Write `context.cex` with frequencies.
    pub extended_cex: bool,
    pub emit_dot: bool,
}

impl RunConfig {
    pub fn new(
        input: impl Into<PathBuf>,
        out_dir: impl Into<PathBuf>,
        technique: TechniqueConfig,
    ) -> Self {
        Self {
            input: input.into(),
            load: LoadOptions::default(),
            technique,
            out_dir: out_dir.into(),
            extended_cex: true,
            emit_dot: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunSummary {
    pub original: FormalContext,
    pub reduced: FormalContext,
    pub reports: Vec<ReductionReport>,
    pub original_stats: LatticeStats,
    pub reduced_stats: LatticeStats,
    pub written: Vec<PathBuf>,
}

pub const RUN_STATS_HEADER: &str = "lattice,concepts,edges,height,width_lo,width_hi";

fn describe(ctx: &FormalContext) -> String {
    format!(
        "{} objects, {} attributes, {} incidences",
        ctx.object_count(),
        ctx.attribute_count(),
        ctx.cell_count()
    )
}

fn describe_stats(s: &LatticeStats) -> String {
    let width = if s.width.0 == s.width.1 {
        s.width.0.to_string()
    } else {
        format!("[{}, {}]", s.width.0, s.width.1)
    };
    format!(
        "{} concepts, {} edges, height {}, width {}",
        s.concept_count, s.edge_count, s.height, width
    )
}

/// Runs the whole chain and writes `context.cex`, `reduced.cex`,
/// `lattice.dot` (of the reduced context), `stats.csv` and `report.txt`.
pub fn run_pipeline(
    config: &RunConfig,
    resources: Resources<'_>,
) -> Result<RunSummary, PipelineError> {
    let order = config.technique.order;
    if order.uses_wordnet() && resources.lexicon.is_none() {
        return Err(PipelineError::Config(format!(
            "order `{order}` needs WordNet; pass --wordnet-dir or set WNHOME"
        )));
    }
    let original = load_context(&config.input, config.load, resources.lemmatizer)?;
    let original_stats = lattice_stats(&build_lattice(&original));
    let (reduced, reports) = apply_order(&original, &config.technique, resources.lexicon)?;
    let lattice = build_lattice(&reduced);
    let reduced_stats = lattice_stats(&lattice);

    fs::create_dir_all(&config.out_dir).map_err(|e| PipelineError::io(&config.out_dir, e))?;
    let mut written = Vec::new();
    let mut emit = |name: &str, contents: String| -> Result<(), PipelineError> {
        let path = config.out_dir.join(name);
        fs::write(&path, contents).map_err(|e| PipelineError::io(&path, e))?;
        written.push(path);
        Ok(())
    };
    emit("context.cex", write_cex(&original, config.extended_cex))?;
    emit("reduced.cex", write_cex(&reduced, false))?;
    if config.emit_dot {
        emit("lattice.dot", export_dot(&lattice))?;
    }
    let mut stats = format!("{RUN_STATS_HEADER}\n");
    for (name, s) in [("original", &original_stats), ("reduced", &reduced_stats)] {
        stats.push_str(name);
        stats.push(',');
        stats.push_str(&s.csv_row());
        stats.push('\n');
    }
    emit("stats.csv", stats)?;

    let mut report = String::new();
    let t = &config.technique;
    let _ = writeln!(report, "input: {}", config.input.display());
    let _ = writeln!(
        report,
        "order: {order} (hypernym depth {}, threshold {}%)",
        t.hypernym_depth, t.threshold
    );
    let _ = writeln!(report, "original context: {}", describe(&original));
    let _ = writeln!(report, "reduced context: {}", describe(&reduced));
    let _ = writeln!(
        report,
        "original lattice: {}",
        describe_stats(&original_stats)
    );
    let _ = writeln!(
        report,
        "reduced lattice: {}",
        describe_stats(&reduced_stats)
    );
    for r in &reports {
        report.push('\n');
        report.push_str(&r.to_text());
    }
    emit("report.txt", report)?;

    Ok(RunSummary {
        original,
        reduced,
        reports,
        original_stats,
        reduced_stats,
        written,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusFailure {
    pub corpus: String,
    pub message: String,
}

#[derive(Debug, Clone, Default)]
pub struct EvalOutcome {
    pub rows: Vec<EvalRow>,
    pub failures: Vec<CorpusFailure>,
}

/// Corpus files in a directory, sorted by name; hidden files are skipped.
pub fn corpus_files(dir: &Path) -> Result<Vec<PathBuf>, PipelineError> {
    let entries = fs::read_dir(dir).map_err(|e| PipelineError::io(dir, e))?;
    let mut files = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|e| PipelineError::io(dir, e))?;
        let path = entry.path();
        let hidden = path
            .file_name()
            .and_then(|n| n.to_str())
            .is_some_and(|n| n.starts_with('.'));
        if path.is_file() && !hidden {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

fn corpus_id(path: &Path) -> String {
    path.file_stem()
        .unwrap_or(path.as_os_str())
        .to_string_lossy()
        .into_owned()
}

fn eval_one(
    path: &Path,
    base: &TechniqueConfig,
    options: LoadOptions,
    resources: Resources<'_>,
) -> Result<Vec<EvalRow>, String> {
    let ctx = load_context(path, options, resources.lemmatizer).map_err(|e| e.to_string())?;
    let corpus = corpus_id(path);
    TechniqueOrder::ALL
        .iter()
        .map(|&order| {
            let (_, _, stats) =
                reduce_and_measure(&ctx, &base.with_order(order), resources.lexicon)
                    .map_err(|e| format!("{order}: {e}"))?;
            Ok(EvalRow {
                corpus: corpus.clone(),
                config: order,
                stats,
            })
        })
        .collect()
}

/// Runs every configuration on every corpus file of `dir`. Corpora are
/// processed in parallel; rows come back sorted by (corpus, config). A corpus
/// that fails contributes no rows and one failure.
pub fn eval_corpus(
    dir: &Path,
    base: &TechniqueConfig,
    options: LoadOptions,
    resources: Resources<'_>,
) -> Result<EvalOutcome, PipelineError> {
    if resources.lexicon.is_none() {
        return Err(PipelineError::Config(
            "evaluation runs WordNet configurations; pass --wordnet-dir or set WNHOME".into(),
        ));
    }
    let files = corpus_files(dir)?;
    let results: Vec<(String, Result<Vec<EvalRow>, String>)> = files
        .par_iter()
        .map(|path| (corpus_id(path), eval_one(path, base, options, resources)))
        .collect();
    let mut outcome = EvalOutcome::default();
    for (corpus, result) in results {
        match result {
            Ok(rows) => outcome.rows.extend(rows),
            Err(message) => {
                log::warn!("corpus {corpus} failed: {message}");
                outcome.failures.push(CorpusFailure { corpus, message });
            }
        }
    }
    outcome
        .rows
        .sort_by(|a, b| (&a.corpus, a.config).cmp(&(&b.corpus, b.config)));
    Ok(outcome)
}
