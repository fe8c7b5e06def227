use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::anyhow;
use clap::{Args, Parser, Subcommand, ValueEnum};
use latticeforge::ingest::{
    extract_pairs, filter_triples, parse_dependencies, read_pairs_tsv, write_pairs_tsv,
};
use latticeforge::pipeline::{load_context, InputKind, LoadOptions, Resources, Verbatim};
use latticeforge::reduce::reports_to_csv;
use latticeforge::{
    apply_order, build_lattice, eval_corpus, export_dot, lattice_stats, read_cex, run_pipeline,
    split_sentences, stats_csv, write_cex, FormalContext, IngestOptions, LatticeStats, Lemmatizer,
    Percent, PipelineError, RunConfig, TableFormat, TechniqueConfig, TechniqueOrder, WordNetDb,
};

#[derive(Parser)]
#[command(
    name = "latticeforge",
    version,
    about = "Concept lattices from verb-noun pairs"
)]
struct Cli {
    /// WordNet installation or dictionary directory.
    #[arg(long, global = true, env = "WNHOME", value_name = "PATH")]
    wordnet_dir: Option<PathBuf>,

    /// More log output (repeat for more).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Raw-text utilities.
    #[command(subcommand)]
    Nlp(NlpCommand),
    /// Build a formal context from dependency output or pair lists.
    Ingest {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Apply reduction techniques to a context.
    Reduce {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        technique: TechniqueArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Also write the reduction report as CSV.
        #[arg(long, value_name = "FILE")]
        report: Option<PathBuf>,
    },
    /// Enumerate the concept lattice of a context.
    Lattice {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Lattice statistics of a context, optionally after reduction.
    Stats {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        technique: TechniqueArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run all five technique orders on every corpus file in a directory.
    Eval {
        dir: PathBuf,
        #[arg(long)]
        fold_case: bool,
        #[command(flatten)]
        technique: TechniqueArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Work with .cex files.
    #[command(subcommand)]
    Cex(CexCommand),
    /// Full pipeline: context, reduction, lattice, statistics and report.
    Run {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        technique: TechniqueArgs,
        /// Output directory.
        #[arg(long, default_value = "latticeforge-out")]
        out: PathBuf,
        /// Write context.cex without frequencies.
        #[arg(long)]
        plain_cex: bool,
        /// Skip lattice.dot.
        #[arg(long)]
        no_dot: bool,
    },
}

#[derive(Subcommand)]
enum NlpCommand {
    /// One sentence per line.
    Split { input: Option<PathBuf> },
    /// One token per line (`start end kind text`), sentences separated by blank lines.
    Tokenize { input: Option<PathBuf> },
}

#[derive(Subcommand)]
enum CexCommand {
    /// Check that a .cex file parses and its frequencies are right.
    Validate {
        input: PathBuf,
        /// Report wrong frequencies without failing.
        #[arg(long)]
        lenient: bool,
    },
    /// Convert between context formats.
    Convert {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Args)]
struct InputArgs {
    input: PathBuf,
    /// Input kind; guessed from the extension when absent.
    #[arg(long, value_parser = clap::value_parser!(InputKind))]
    kind: Option<InputKind>,
    /// Lowercase words while ingesting.
    #[arg(long)]
    fold_case: bool,
    /// Recompute wrong .cex frequencies instead of failing.
    #[arg(long)]
    lenient: bool,
}

#[derive(Args)]
struct TechniqueArgs {
    /// Hypernym depth for the WordNet technique.
    #[arg(long, default_value_t = 4)]
    depth: u32,
    /// Frequency threshold in percent.
    #[arg(long, default_value = "2")]
    threshold: Percent,
    /// none, wn, freq, wn-freq or freq-wn.
    #[arg(long, default_value = "none")]
    order: TechniqueOrder,
}

impl TechniqueArgs {
    fn config(&self) -> TechniqueConfig {
        TechniqueConfig {
            hypernym_depth: self.depth,
            threshold: self.threshold,
            order: self.order,
        }
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write frequencies into .cex output.
    #[arg(long)]
    extended: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Cex,
    Csv,
    Dot,
    Tsv,
}

struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl Failure {
    fn input(error: impl Into<anyhow::Error>) -> Self {
        Failure {
            code: 1,
            error: error.into(),
        }
    }

    fn config(error: impl Into<anyhow::Error>) -> Self {
        Failure {
            code: 2,
            error: error.into(),
        }
    }
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        Failure {
            code: e.exit_code() as u8,
            error: e.into(),
        }
    }
}

type CliResult<T = ()> = Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> CliResult<u8> {
    let wordnet = WordNetSource(cli.wordnet_dir);
    match cli.command {
        Command::Nlp(cmd) => nlp(cmd)?,
        Command::Ingest { input, output } => ingest(&wordnet, &input, &output)?,
        Command::Reduce {
            input,
            technique,
            output,
            report,
        } => {
            let db = wordnet.resolve(technique.order.uses_wordnet(), wants_lemmas(&input))?;
            let ctx = load(&input, db.as_ref())?;
            let lexicon = db
                .as_ref()
                .map(|d| d as &dyn latticeforge::RelatednessLexicon);
            let (reduced, reports) = apply_order(&ctx, &technique.config(), lexicon)
                .map_err(|e| Failure::from(PipelineError::from(e)))?;
            for r in &reports {
                log::info!("{}", r.to_text().trim_end());
            }
            if let Some(path) = report {
                write_file(&path, &reports_to_csv(&reports))?;
            }
            emit_context(&reduced, &output)?;
        }
        Command::Lattice { input, output } => {
            let db = wordnet.resolve(false, wants_lemmas(&input))?;
            let ctx = load(&input, db.as_ref())?;
            let lattice = build_lattice(&ctx);
            let text = match output.format.unwrap_or(Format::Dot) {
                Format::Dot => export_dot(&lattice),
                Format::Csv => {
                    let mut out = String::from("concept,extent,intent\n");
                    for i in 0..lattice.len() {
                        out.push_str(&format!(
                            "{i},{},{}\n",
                            csv_field(&lattice.extent_labels(i).join(";")),
                            csv_field(&lattice.intent_labels(i).join(";"))
                        ));
                    }
                    out
                }
                _ => return Err(Failure::config(anyhow!("lattice output is dot or csv"))),
            };
            write_output(&output, &text)?;
        }
        Command::Stats {
            input,
            technique,
            output,
        } => {
            let db = wordnet.resolve(technique.order.uses_wordnet(), wants_lemmas(&input))?;
            let ctx = load(&input, db.as_ref())?;
            let lexicon = db
                .as_ref()
                .map(|d| d as &dyn latticeforge::RelatednessLexicon);
            let (reduced, _) = apply_order(&ctx, &technique.config(), lexicon)
                .map_err(|e| Failure::from(PipelineError::from(e)))?;
            let stats = lattice_stats(&build_lattice(&reduced));
            write_output(
                &output,
                &format!("{}\n{}\n", LatticeStats::CSV_HEADER, stats.csv_row()),
            )?;
        }
        Command::Eval {
            dir,
            fold_case,
            technique,
            output,
        } => {
            let db = wordnet.load()?;
            let options = LoadOptions {
                ingest: IngestOptions { fold_case },
                ..LoadOptions::default()
            };
            let outcome = eval_corpus(&dir, &technique.config(), options, Resources::wordnet(&db))?;
            let format = match output.format {
                None | Some(Format::Csv) => TableFormat::Csv,
                Some(Format::Tsv) => TableFormat::Tsv,
                _ => return Err(Failure::config(anyhow!("eval output is csv or tsv"))),
            };
            write_output(&output, &stats_csv(&outcome.rows, format))?;
            for f in &outcome.failures {
                eprintln!("failed: {}: {}", f.corpus, f.message);
            }
            if !outcome.failures.is_empty() {
                return Ok(3);
            }
        }
        Command::Cex(CexCommand::Validate { input, lenient }) => {
            let bytes = fs::read(&input)
                .map_err(|e| Failure::input(anyhow!("{}: {e}", input.display())))?;
            let mut doc = read_cex(&bytes)
                .map_err(|e| Failure::input(anyhow!("{}: {e}", input.display())))?;
            if let Err(e) = doc.validate() {
                if !lenient {
                    return Err(Failure::input(anyhow!("{}: {e}", input.display())));
                }
                log::warn!("{}: {e}; recomputing", input.display());
                doc.recompute_frequencies();
            }
            let ctx = &doc.context;
            println!(
                "ok: {} objects, {} attributes, {} incidences{}",
                ctx.object_count(),
                ctx.attribute_count(),
                ctx.cell_count(),
                if doc.extended { ", extended" } else { "" }
            );
        }
        Command::Cex(CexCommand::Convert { input, output }) => {
            let db = wordnet.resolve(false, wants_lemmas(&input))?;
            let ctx = load(&input, db.as_ref())?;
            emit_context(&ctx, &output)?;
        }
        Command::Run {
            input,
            technique,
            out,
            plain_cex,
            no_dot,
        } => {
            let db = wordnet.resolve(technique.order.uses_wordnet(), wants_lemmas(&input))?;
            let mut config = RunConfig::new(&input.input, out, technique.config());
            config.load = load_options(&input);
            config.extended_cex = !plain_cex;
            config.emit_dot = !no_dot;
            let resources = db.as_ref().map(Resources::wordnet).unwrap_or_default();
            let summary = run_pipeline(&config, resources)?;
            for path in &summary.written {
                println!("{}", path.display());
            }
        }
    }
    Ok(0)
}

/// Where WordNet comes from: the flag or `WNHOME`.
struct WordNetSource(Option<PathBuf>);

impl WordNetSource {
    fn load(&self) -> CliResult<WordNetDb> {
        let dir = self.0.as_ref().ok_or_else(|| {
            Failure::config(anyhow!(
                "WordNet is required: pass --wordnet-dir or set WNHOME"
            ))
        })?;
        let dict = WordNetDb::locate(dir);
        log::info!("loading WordNet from {}", dict.display());
        WordNetDb::load(&dict).map_err(Failure::config)
    }

    /// Loads WordNet when `required` (failing without a directory), or when
    /// merely `wanted` and a directory is configured.
    fn resolve(&self, required: bool, wanted: bool) -> CliResult<Option<WordNetDb>> {
        if required || wanted && self.0.is_some() {
            return self.load().map(Some);
        }
        if wanted {
            log::warn!("no WordNet directory; words are used as they appear");
        }
        Ok(None)
    }
}

fn kind_of(input: &InputArgs) -> InputKind {
    input
        .kind
        .unwrap_or_else(|| InputKind::detect(&input.input))
}

/// Dependency input is lemmatized with WordNet when one is available.
fn wants_lemmas(input: &InputArgs) -> bool {
    kind_of(input) == InputKind::Dependencies
}

fn load_options(input: &InputArgs) -> LoadOptions {
    LoadOptions {
        kind: input.kind,
        ingest: IngestOptions {
            fold_case: input.fold_case,
        },
        lenient: input.lenient,
    }
}

fn load(input: &InputArgs, db: Option<&WordNetDb>) -> CliResult<FormalContext> {
    Ok(load_context(
        &input.input,
        load_options(input),
        db.map(|d| d as &dyn Lemmatizer),
    )?)
}

fn ingest(wordnet: &WordNetSource, input: &InputArgs, output: &OutputArgs) -> CliResult {
    let db = wordnet.resolve(false, wants_lemmas(input))?;
    if output.format == Some(Format::Tsv) {
        let path = &input.input;
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::input(anyhow!("{}: {e}", path.display())))?;
        let options = IngestOptions {
            fold_case: input.fold_case,
        };
        let pairs = match kind_of(input) {
            InputKind::Dependencies => {
                let triples = parse_dependencies(&text)
                    .map_err(|e| Failure::input(anyhow!("{}: {e}", path.display())))?;
                let lemmatizer: &dyn Lemmatizer = match db.as_ref() {
                    Some(d) => d,
                    None => &Verbatim,
                };
                extract_pairs(&filter_triples(&triples), lemmatizer, options)
            }
            InputKind::Pairs => read_pairs_tsv(&text, options)
                .map_err(|e| Failure::input(anyhow!("{}: {e}", path.display())))?,
            _ => latticeforge::ingest::pairs_from_context(&load(input, None)?),
        };
        return write_output(output, &write_pairs_tsv(&pairs));
    }
    let ctx = load(input, db.as_ref())?;
    emit_context(&ctx, output)
}

fn emit_context(ctx: &FormalContext, output: &OutputArgs) -> CliResult {
    let text = match output.format.unwrap_or(Format::Cex) {
        Format::Cex => write_cex(ctx, output.extended),
        Format::Csv => ctx.to_csv().map_err(Failure::input)?,
        Format::Tsv => write_pairs_tsv(&latticeforge::ingest::pairs_from_context(ctx)),
        Format::Dot => export_dot(&build_lattice(ctx)),
    };
    write_output(output, &text)
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn write_file(path: &Path, text: &str) -> CliResult {
    fs::write(path, text).map_err(|e| Failure::input(anyhow!("{}: {e}", path.display())))
}

fn write_output(output: &OutputArgs, text: &str) -> CliResult {
    match &output.out {
        Some(path) => write_file(path, text),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::input(anyhow!("stdout: {e}"))),
    }
}

fn read_text(input: Option<&Path>) -> CliResult<String> {
    match input {
        Some(path) if path != Path::new("-") => {
            fs::read_to_string(path).map_err(|e| Failure::input(anyhow!("{}: {e}", path.display())))
        }
        _ => {
            let mut text = String::new();
            io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| Failure::input(anyhow!("stdin: {e}")))?;
            Ok(text)
        }
    }
}

fn nlp(cmd: NlpCommand) -> CliResult {
    let mut out = String::new();
    match cmd {
        NlpCommand::Split { input } => {
            for s in split_sentences(&read_text(input.as_deref())?) {
                out.push_str(&s.text.split_whitespace().collect::<Vec<_>>().join(" "));
                out.push('\n');
            }
        }
        NlpCommand::Tokenize { input } => {
            let text = read_text(input.as_deref())?;
            for (k, s) in split_sentences(&text).iter().enumerate() {
                if k > 0 {
                    out.push('\n');
                }
                for t in &s.tokens {
                    out.push_str(&format!("{}\t{}\t{}\t{}\n", t.start, t.end, t.kind, t.text));
                }
            }
        }
    }
    io::stdout()
        .write_all(out.as_bytes())
        .map_err(|e| Failure::input(anyhow!("stdout: {e}")))
}
