//! Command-line front end.

use std::collections::{BTreeSet, HashMap};
use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channels::ConfusionTable;
use crate::corrector::{correct, Models, StageDiagnostics, DEFAULT_SMOOTHING};
use crate::document::CleanDocument;
use crate::error::Error;
use crate::metrics::{
    bm25_recall, evaluate_pairs, synthesize_queries, CorrectedText, RetrievalReport, Variant,
};
use crate::pipeline::{
    contaminate_document, read_export, synthesize, with_pool, write_jsonl, CorpusFormat,
    ParallelPair, PromptTemplate,
};
use crate::profile::{load_profile, validate_profile, write_profile, ContaminationProfile};

#[derive(Parser, Debug)]
#[command(
    name = "ocrnoise",
    version,
    about = "Synthesize, correct and evaluate OCR-style text noise"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Contaminate a corpus and emit the noisy text only.
    Contaminate(ContaminateArgs),
    /// Contaminate a corpus and export parallel pairs as JSONL.
    Synthesize(SynthesizeArgs),
    /// Train the lexicon and bigram model used by `correct`.
    TrainLm(TrainArgs),
    /// Correct noisy documents with a trained model.
    Correct(CorrectArgs),
    /// Compare corrected output against the clean side of exported pairs.
    Evaluate(EvaluateArgs),
    /// BM25 recall@k over clean, contaminated and corrected documents.
    RetrievalEval(RetrievalArgs),
    /// Print the default profile, confusion table or prompt.
    DumpDefaults(DumpArgs),
}

#[derive(Args, Debug)]
struct CorpusArgs {
    /// Directory of .txt files or a JSONL file of {"id", "text"} records.
    #[arg(long = "in", value_name = "PATH")]
    input: PathBuf,
    /// Number of leading documents to skip.
    #[arg(long, default_value_t = 0)]
    skip: usize,
    /// Maximum number of documents to read after skipping.
    #[arg(long)]
    limit: Option<usize>,
}

#[derive(Args, Debug)]
struct NoiseArgs {
    /// Contamination profile (TOML).
    #[arg(long)]
    profile: Option<PathBuf>,
    /// Overrides the profile's master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Confusion table replacing the built-in one.
    #[arg(long)]
    confusion: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: u64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum TextFormat {
    Jsonl,
    Text,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Json,
    Text,
}

#[derive(Args, Debug)]
struct ContaminateArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    #[command(flatten)]
    noise: NoiseArgs,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = TextFormat::Jsonl)]
    format: TextFormat,
    /// Include layout and event log in JSONL output.
    #[arg(long)]
    events: bool,
}

#[derive(Args, Debug)]
struct SynthesizeArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    #[command(flatten)]
    noise: NoiseArgs,
    #[arg(long)]
    out: Option<PathBuf>,
    /// System prompt text file replacing the built-in prompt.
    #[arg(long)]
    prompt_file: Option<PathBuf>,
    /// Omit the layout and event log from each record.
    #[arg(long)]
    no_events: bool,
}

#[derive(Args, Debug)]
struct TrainArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    #[arg(long, default_value_t = DEFAULT_SMOOTHING)]
    smoothing: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct CorrectArgs {
    /// Model file written by `train-lm`.
    #[arg(long)]
    models: PathBuf,
    /// Exported pairs or {"id", "text"} JSONL, a directory of .txt files,
    /// or a single text file.
    #[arg(long = "in", value_name = "PATH")]
    input: PathBuf,
    /// Profile whose layout parameters guide column recovery.
    #[arg(long)]
    profile: Option<PathBuf>,
    #[arg(long)]
    confusion: Option<PathBuf>,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = TextFormat::Jsonl)]
    format: TextFormat,
    #[arg(long, default_value_t = 0)]
    skip: usize,
    #[arg(long)]
    limit: Option<usize>,
}

#[derive(Args, Debug)]
struct EvaluateArgs {
    /// JSONL export from `synthesize`.
    #[arg(long)]
    pairs: PathBuf,
    /// JSONL output of `correct`.
    #[arg(long)]
    corrected: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    format: ReportFormat,
}

#[derive(Args, Debug)]
struct RetrievalArgs {
    #[arg(long)]
    pairs: PathBuf,
    #[arg(long)]
    corrected: Option<PathBuf>,
    /// Seed for query sampling.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Cut-offs, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [1usize, 3, 5])]
    k: Vec<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    format: ReportFormat,
}

#[derive(Args, Debug)]
struct DumpArgs {
    /// Print the confusion table instead of the profile.
    #[arg(long, conflicts_with = "prompt")]
    confusion: bool,
    /// Print the system prompt instead of the profile.
    #[arg(long)]
    prompt: bool,
}

/// Parses `argv` (program name first) and runs the subcommand. Returns 0 on
/// success, 1 on usage errors and 2 on data or validation errors.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .try_init();
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = e.print();
                    0
                }
                _ => {
                    let _ = e.print();
                    1
                }
            };
        }
    };
    let result = match cli.command {
        Command::Contaminate(a) => cmd_contaminate(a),
        Command::Synthesize(a) => cmd_synthesize(a),
        Command::TrainLm(a) => cmd_train(a),
        Command::Correct(a) => cmd_correct(a),
        Command::Evaluate(a) => cmd_evaluate(a),
        Command::RetrievalEval(a) => cmd_retrieval(a),
        Command::DumpDefaults(a) => cmd_dump(a),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    }
}

fn open_out(out: &Option<PathBuf>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Writes through `f`, removing a partially written `--out` file on failure.
fn write_out(
    out: &Option<PathBuf>,
    f: impl FnOnce(&mut dyn Write) -> anyhow::Result<()>,
) -> anyhow::Result<()> {
    let mut w = open_out(out)?;
    let res = f(&mut *w).and_then(|()| Ok(w.flush()?));
    if res.is_err() {
        if let Some(p) = out {
            drop(w);
            let _ = std::fs::remove_file(p);
        }
    }
    res
}

fn load_corpus(args: &CorpusArgs) -> anyhow::Result<Vec<CleanDocument>> {
    let docs = crate::pipeline::ingest_corpus(&args.input, CorpusFormat::detect(&args.input))?;
    Ok(window(docs, args.skip, args.limit))
}

fn window<T>(items: Vec<T>, skip: usize, limit: Option<usize>) -> Vec<T> {
    items
        .into_iter()
        .skip(skip)
        .take(limit.unwrap_or(usize::MAX))
        .collect()
}

fn noise_setup(args: &NoiseArgs) -> anyhow::Result<(ContaminationProfile, ConfusionTable)> {
    let mut profile = match &args.profile {
        Some(p) => load_profile(p)?,
        None => ContaminationProfile::default(),
    };
    if let Some(seed) = args.seed {
        profile.master_seed = seed;
    }
    let violations = validate_profile(&profile);
    if !violations.is_empty() {
        return Err(Error::Validation(violations).into());
    }
    let confusion = match &args.confusion {
        Some(p) => ConfusionTable::load(p)?,
        None => ConfusionTable::default(),
    };
    Ok((profile, confusion))
}

#[derive(Serialize)]
struct NoisyText<'a> {
    id: &'a str,
    text: &'a str,
}

fn cmd_contaminate(a: ContaminateArgs) -> anyhow::Result<()> {
    let (profile, confusion) = noise_setup(&a.noise)?;
    let docs = load_corpus(&a.corpus)?;
    let first = a.corpus.skip as u64;
    let results = with_pool(a.noise.jobs as usize, || {
        docs.par_iter()
            .enumerate()
            .map(
                |(i, d)| match contaminate_document(d, first + i as u64, &profile, &confusion) {
                    Ok((_, c)) => Some(c),
                    Err(e) => {
                        log::warn!("skipping document {:?}: {e}", d.id);
                        None
                    }
                },
            )
            .collect::<Vec<_>>()
    })?;
    write_out(&a.out, |w| {
        for c in results.iter().flatten() {
            match a.format {
                TextFormat::Jsonl if a.events => serde_json::to_writer(&mut *w, c)?,
                TextFormat::Jsonl => serde_json::to_writer(
                    &mut *w,
                    &NoisyText {
                        id: &c.id,
                        text: &c.text,
                    },
                )?,
                TextFormat::Text => writeln!(w, "{}", c.text)?,
            }
            writeln!(w)?;
        }
        Ok(())
    })
}

fn cmd_synthesize(a: SynthesizeArgs) -> anyhow::Result<()> {
    let (profile, confusion) = noise_setup(&a.noise)?;
    let template = match &a.prompt_file {
        Some(p) => PromptTemplate::load(p)?,
        None => PromptTemplate::default(),
    };
    let docs = load_corpus(&a.corpus)?;
    let pairs = synthesize(
        &docs,
        a.corpus.skip as u64,
        &profile,
        &confusion,
        a.noise.jobs as usize,
    )?;
    write_out(&a.out, |w| {
        let n = write_jsonl(&pairs, &template, w, !a.no_events)?;
        log::info!("wrote {n} records");
        Ok(())
    })
}

fn cmd_train(a: TrainArgs) -> anyhow::Result<()> {
    let docs = load_corpus(&a.corpus)?;
    let models = Models::train(&docs, a.smoothing)?;
    models.save(&a.out)?;
    log::info!(
        "trained on {} documents: {} word types, {} tokens",
        docs.len(),
        models.lexicon.len(),
        models.lexicon.total()
    );
    Ok(())
}

#[derive(Deserialize)]
struct TextRecord {
    id: String,
    #[serde(default)]
    input: Option<String>,
    #[serde(default)]
    text: Option<String>,
}

/// Reads `(id, text)` documents to correct: JSONL records carrying either
/// `input` (exported pairs) or `text`, a corpus directory, or one text file.
fn read_documents(path: &Path) -> anyhow::Result<Vec<(String, String)>> {
    if path.is_dir() {
        let docs = crate::pipeline::ingest_corpus(path, CorpusFormat::PlainDir)?;
        return Ok(docs.into_iter().map(|d| (d.id, d.text)).collect());
    }
    if path.extension().is_some_and(|e| e == "jsonl") {
        let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
        let mut out = Vec::new();
        for (i, line) in BufReader::new(file).lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let rec: TextRecord = serde_json::from_str(&line).map_err(|e| Error::Parse {
                line: i + 1,
                message: e.to_string(),
            })?;
            let Some(text) = rec.input.or(rec.text) else {
                return Err(Error::Parse {
                    line: i + 1,
                    message: "record has neither \"input\" nor \"text\"".into(),
                }
                .into());
            };
            out.push((rec.id, text));
        }
        return Ok(out);
    }
    let text =
        std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let id = path
        .file_stem()
        .map_or_else(|| "doc".into(), |s| s.to_string_lossy().into_owned());
    Ok(vec![(id, text)])
}

#[derive(Serialize)]
struct CorrectedRecord<'a> {
    id: &'a str,
    text: &'a str,
    chosen_columns_per_section: &'a [usize],
    stage_diagnostics: &'a StageDiagnostics,
}

fn cmd_correct(a: CorrectArgs) -> anyhow::Result<()> {
    let models = Models::load(&a.models)?;
    let profile = a.profile.as_ref().map(load_profile).transpose()?;
    if let Some(p) = &profile {
        let violations = validate_profile(p);
        if !violations.is_empty() {
            return Err(Error::Validation(violations).into());
        }
    }
    let confusion = match &a.confusion {
        Some(p) => ConfusionTable::load(p)?,
        None => ConfusionTable::default(),
    };
    let docs = window(read_documents(&a.input)?, a.skip, a.limit);
    let fixed = with_pool(a.jobs as usize, || {
        docs.par_iter()
            .map(|(_, text)| correct(text, &models, &confusion, profile.as_ref()))
            .collect::<Vec<_>>()
    })?;
    write_out(&a.out, |w| {
        for ((id, _), c) in docs.iter().zip(&fixed) {
            match a.format {
                TextFormat::Jsonl => {
                    let rec = CorrectedRecord {
                        id,
                        text: &c.text,
                        chosen_columns_per_section: &c.chosen_columns_per_section,
                        stage_diagnostics: &c.stage_diagnostics,
                    };
                    serde_json::to_writer(&mut *w, &rec)?;
                    writeln!(w)?;
                }
                TextFormat::Text => writeln!(w, "{}\n", c.text)?,
            }
        }
        Ok(())
    })
}

fn read_corrected(path: &Path) -> anyhow::Result<Vec<CorrectedText>> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|e| Error::Parse {
            line: i + 1,
            message: e.to_string(),
        })?);
    }
    Ok(out)
}

fn read_pairs(path: &Path) -> anyhow::Result<Vec<ParallelPair>> {
    Ok(read_export(path)?
        .into_iter()
        .map(|r| r.into_pair())
        .collect())
}

fn cmd_evaluate(a: EvaluateArgs) -> anyhow::Result<()> {
    let pairs = read_pairs(&a.pairs)?;
    let corrected = read_corrected(&a.corrected)?;
    let report = evaluate_pairs(&corrected, &pairs)?;
    write_out(&a.out, |w| {
        match a.format {
            ReportFormat::Json => writeln!(w, "{}", report.to_json())?,
            ReportFormat::Text => write!(w, "{}", report.to_table())?,
        }
        Ok(())
    })
}

fn cmd_retrieval(a: RetrievalArgs) -> anyhow::Result<()> {
    if a.k.contains(&0) {
        bail!("--k values must be positive");
    }
    let ks: BTreeSet<usize> = a.k.iter().copied().collect();
    let pairs = read_pairs(&a.pairs)?;
    let clean: Vec<CleanDocument> = pairs
        .iter()
        .map(|p| CleanDocument::new(p.id.clone(), p.clean.clone()))
        .collect();
    let queries = synthesize_queries(&clean, a.seed);
    let as_docs = |f: &dyn Fn(&ParallelPair) -> String| -> Vec<(String, String)> {
        pairs.iter().map(|p| (p.id.clone(), f(p))).collect()
    };
    let mut reports = vec![
        bm25_recall(
            &as_docs(&|p| p.clean.clone()),
            &queries,
            &ks,
            Variant::Clean,
        )?,
        bm25_recall(
            &as_docs(&|p| p.contaminated.clone()),
            &queries,
            &ks,
            Variant::Contaminated,
        )?,
    ];
    if let Some(path) = &a.corrected {
        let fixed: HashMap<String, String> = read_corrected(path)?
            .into_iter()
            .map(|c| (c.id, c.text))
            .collect();
        let missing: Vec<String> = pairs
            .iter()
            .filter(|p| !fixed.contains_key(&p.id))
            .map(|p| p.id.clone())
            .collect();
        if !missing.is_empty() {
            return Err(Error::UnmatchedIds(missing).into());
        }
        reports.push(bm25_recall(
            &as_docs(&|p| fixed[&p.id].clone()),
            &queries,
            &ks,
            Variant::Corrected,
        )?);
    }
    write_out(&a.out, |w| {
        match a.format {
            ReportFormat::Json => writeln!(w, "{}", serde_json::to_string_pretty(&reports)?)?,
            ReportFormat::Text => write!(w, "{}", RetrievalReport::to_table(&reports))?,
        }
        Ok(())
    })
}

fn cmd_dump(a: DumpArgs) -> anyhow::Result<()> {
    let text = if a.confusion {
        ConfusionTable::default().to_text()
    } else if a.prompt {
        let mut t = PromptTemplate::default().system_text;
        t.push('\n');
        t
    } else {
        write_profile(&ContaminationProfile::default())
    };
    write_out(&None, |w| Ok(w.write_all(text.as_bytes())?))
}
