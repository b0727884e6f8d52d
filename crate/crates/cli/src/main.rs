use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use gapping::composite::enhance_sentence_composite;
use gapping::conllu::{parse_document, serialize_document, Document};
use gapping::convert::{enhanced_to_basic_orphan, enhanced_to_composite};
use gapping::embeddings::{EmbeddingTable, PosIndicator, SimilarityParams};
use gapping::eval::{corpus_stats, score_enhanced, score_remnant_attachment};
use gapping::orphan::OrphanEnhancer;
use gapping::Enhancement;
use rayon::prelude::*;

/// Reconstruct elided predicates in gapping constructions.
#[derive(Parser)]
#[command(name = "gapping", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Add copy nodes and enhanced edges for gapped conjuncts.
    Enhance(EnhanceArgs),
    /// Turn an enhanced corpus into basic trees.
    Convert(ConvertArgs),
    /// Score a system corpus against a gold corpus.
    Evaluate(EvaluateArgs),
    /// Print corpus statistics.
    Stats(StatsArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    /// Basic trees with `orphan` relations.
    Orphan,
    /// Basic trees with composite relations such as `conj>obj`.
    Composite,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Composite,
    Orphan,
}

#[derive(Clone, Copy, ValueEnum)]
enum Metric {
    /// Precision and recall over copy nodes and their dependents.
    Enhanced,
    /// Attachment scores of remnant heads in the basic trees.
    Remnant,
}

#[derive(clap::Args)]
struct Io {
    /// Input CoNLL-U file; `-` reads standard input.
    #[arg(long, default_value = "-")]
    input: PathBuf,
    /// Output CoNLL-U file; `-` writes standard output.
    #[arg(long, default_value = "-")]
    output: PathBuf,
}

#[derive(clap::Args)]
struct EnhanceArgs {
    #[arg(long, value_enum, default_value = "orphan")]
    method: Method,
    #[command(flatten)]
    io: Io,
    /// Word embeddings in GloVe or word2vec text format, optionally gzipped.
    #[arg(long)]
    embeddings: Option<PathBuf>,
    /// Score added when argument heads have different POS tags.
    #[arg(long, default_value_t = -2.0, allow_negative_numbers = true)]
    pos_penalty: f64,
    /// Score of leaving an argument unaligned.
    #[arg(long, default_value_t = -4.0, allow_negative_numbers = true)]
    gap_penalty: f64,
    /// Apply the POS penalty when tags are equal instead of when they differ.
    #[arg(long)]
    literal_indicator: bool,
    /// Compare arguments by POS tags only.
    #[arg(long)]
    pos_only: bool,
    /// Do not retry out-of-vocabulary words in lowercase.
    #[arg(long)]
    case_sensitive: bool,
}

#[derive(clap::Args)]
struct ConvertArgs {
    #[arg(long, value_enum)]
    to: Target,
    #[command(flatten)]
    io: Io,
}

#[derive(clap::Args)]
struct EvaluateArgs {
    #[arg(long)]
    system: PathBuf,
    #[arg(long)]
    gold: PathBuf,
    #[arg(long, value_enum, default_value = "enhanced")]
    metric: Metric,
}

#[derive(clap::Args)]
struct StatsArgs {
    #[arg(long, default_value = "-")]
    input: PathBuf,
}

fn read_input(path: &Path) -> Result<Document> {
    let text = if path == Path::new("-") {
        let mut text = String::new();
        io::stdin()
            .read_to_string(&mut text)
            .context("reading standard input")?;
        text
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    };
    parse_document(&text).with_context(|| format!("parsing {}", path.display()))
}

fn write_output(path: &Path, doc: &Document) -> Result<()> {
    let text = serialize_document(doc);
    if path == Path::new("-") {
        io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .context("writing standard output")
    } else {
        fs::write(path, text).with_context(|| format!("writing {}", path.display()))
    }
}

fn enhance(args: &EnhanceArgs) -> Result<()> {
    let doc = read_input(&args.io.input)?;

    let results: Vec<Enhancement> = match args.method {
        Method::Composite => doc
            .sentences
            .par_iter()
            .map(enhance_sentence_composite)
            .collect(),
        Method::Orphan => {
            let table = match (&args.embeddings, args.pos_only) {
                (_, true) => None,
                (Some(path), false) => Some(
                    EmbeddingTable::load(path)
                        .with_context(|| format!("loading embeddings {}", path.display()))?,
                ),
                (None, false) => {
                    bail!("the orphan method needs --embeddings unless --pos-only is given")
                }
            };
            let params = SimilarityParams {
                pos_mismatch_penalty: args.pos_penalty,
                gap_penalty: args.gap_penalty,
                lowercase_fallback: !args.case_sensitive,
                indicator: if args.literal_indicator {
                    PosIndicator::Match
                } else {
                    PosIndicator::Mismatch
                },
                use_embeddings: !args.pos_only,
            };
            let enhancer = OrphanEnhancer::new(table.as_ref(), params)?;
            doc.sentences
                .par_iter()
                .map(|s| enhancer.enhance(s))
                .collect()
        }
    };

    let (mut found, mut resolved, mut copies) = (0, 0, 0);
    let mut sentences = Vec::with_capacity(results.len());
    for (idx, result) in results.into_iter().enumerate() {
        for diagnostic in &result.diagnostics {
            eprintln!("sentence {}: {}", idx + 1, diagnostic);
        }
        found += result.gaps_found;
        resolved += result.gaps_resolved;
        copies += result.copies_inserted;
        sentences.push(result.sentence);
    }
    eprintln!(
        "gaps found: {}, gaps resolved: {}, copies inserted: {}",
        found, resolved, copies
    );

    write_output(&args.io.output, &Document::new(sentences))
}

fn convert(args: &ConvertArgs) -> Result<()> {
    let doc = read_input(&args.io.input)?;
    let sentences = doc
        .sentences
        .par_iter()
        .map(|s| match args.to {
            Target::Composite => enhanced_to_composite(s),
            Target::Orphan => enhanced_to_basic_orphan(s),
        })
        .collect::<gapping::Result<Vec<_>>>()?;
    write_output(&args.io.output, &Document::new(sentences))
}

fn evaluate(args: &EvaluateArgs) -> Result<()> {
    let system = read_input(&args.system)?;
    let gold = read_input(&args.gold)?;
    let report = match args.metric {
        Metric::Enhanced => {
            let report = score_enhanced(&system, &gold)?;
            format!("{}\n{}", report, report.key_values())
        }
        Metric::Remnant => {
            let report = score_remnant_attachment(&system, &gold)?;
            format!("{}\n{}", report, report.key_values())
        }
    };
    print!("{}", report);
    Ok(())
}

fn stats(args: &StatsArgs) -> Result<()> {
    let doc = read_input(&args.input)?;
    print!("{}", corpus_stats(&doc));
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Enhance(args) => enhance(args),
        Command::Convert(args) => convert(args),
        Command::Evaluate(args) => evaluate(args),
        Command::Stats(args) => stats(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {:#}", err);
            ExitCode::FAILURE
        }
    }
}
