//! Command-line interface: `extract`, `split`, `train-align`, `align`,
//! `eval`, `report`, `eval-global` and `lexicon stats`.

use std::collections::BTreeSet;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use idiomeval_core::aligner::{Direction, Heuristic, Prior, TrainConfig};
use idiomeval_core::corpus::{
    build_split, idiom_frequency_table, preprocess_filter, AnnotatedPair, DropReason, FilterThresholds, SplitKind,
};
use idiomeval_core::matcher::{compile_pattern, extract_corpus};
use idiomeval_core::metrics::{corpus_bleu, corpus_chrf, BLEU_MAX_N};
use idiomeval_core::text::tokenize;

use crate::align_io::{load_pharaoh, load_table, render_pharaoh, render_table};
use crate::config::{Config, CONFIG_ENV};
use crate::corpus_io::{
    load_corpus, load_hypotheses, load_idiom_list, load_lines, load_manifest, render_corpus,
    render_frequency_table, render_manifest, write_file, HypothesisFormat,
};
use crate::error::{Error, Result};
use crate::lexicon_io::{default_lemma_table, load_lemma_table, load_lexicon};
use crate::pipeline::{
    align_words, bitext, evaluate, parse_metrics, train_alignments, train_tables, training_ids, AlignMode,
    Alignments, EvalInputs,
};
use crate::report::{render_idiom_tsv, render_table as render_report_table, AlignmentInfo, EvalReport, GlobalScores};

pub const VERSION: &str = concat!(
    env!("CARGO_PKG_VERSION"),
    " (corpus format 1, manifest format 1, alignment table format 1, report format 1)"
);

#[derive(Debug, Parser)]
#[command(name = "idiomeval", version = VERSION, about = "Targeted evaluation of idiom translation")]
pub struct Cli {
    /// `key = value` file; flags override it.
    #[arg(long, global = true, env = CONFIG_ENV)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Annotate idiom occurrences in line-aligned parallel text.
    Extract(ExtractArgs),
    /// Build an idiom-train/idiom-test split manifest.
    Split(SplitArgs),
    /// Train forward and reverse translation tables.
    TrainAlign(TrainAlignArgs),
    /// Write Pharaoh alignments using trained tables.
    Align(AlignArgs),
    /// Score hypotheses: LitTER, APT, BLEU and chrF.
    Eval(EvalArgs),
    /// Render a report as a table and per-idiom TSV.
    Report(ReportArgs),
    /// Corpus BLEU and chrF of plain-text hypotheses.
    EvalGlobal(EvalGlobalArgs),
    /// Dictionary utilities.
    #[command(subcommand)]
    Lexicon(LexiconCommand),
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also print the result on stdout.
    #[arg(long)]
    pub stdout: bool,
}

#[derive(Debug, Args)]
pub struct CorpusArgs {
    /// Annotated corpus, one JSON record per line.
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    /// Check every record and report all malformed lines.
    #[arg(long)]
    pub schema_check: bool,
    /// Restrict span idioms to this list.
    #[arg(long)]
    pub idioms: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    #[arg(long)]
    pub idioms: Option<PathBuf>,
    #[arg(long)]
    pub source: Option<PathBuf>,
    #[arg(long)]
    pub target: Option<PathBuf>,
    /// Lemma table (surface<TAB>lemma[<TAB>POS]); defaults to the built-in one.
    #[arg(long)]
    pub lemmas: Option<PathBuf>,
    /// Idiom frequency table (TSV).
    #[arg(long)]
    pub freq: Option<PathBuf>,
    /// Keep pairs without idioms as regular data.
    #[arg(long)]
    pub all: bool,
    #[arg(long)]
    pub max_len: Option<usize>,
    #[arg(long)]
    pub max_ratio: Option<f64>,
    /// Skip the length and ratio filter.
    #[arg(long)]
    pub no_filter: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SplitArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    /// zero, joint or upsample.
    #[arg(long)]
    pub kind: Option<String>,
    #[arg(long)]
    pub upsample_factor: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct AlignerArgs {
    #[arg(long)]
    pub iterations: Option<usize>,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Diagonal prior strength; 0 gives plain Model 1.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Plain Model 1 (no diagonal prior).
    #[arg(long)]
    pub model1: bool,
}

#[derive(Debug, Args)]
pub struct TrainAlignArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    /// Split manifest; train on regular and idiom-train pairs only.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// With a manifest, also train on idiom-test pairs.
    #[arg(long)]
    pub include_test: bool,
    #[command(flatten)]
    pub aligner: AlignerArgs,
    /// Source-to-target table output.
    #[arg(long)]
    pub fwd_table: Option<PathBuf>,
    /// Target-to-source table output.
    #[arg(long)]
    pub rev_table: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlignDirection {
    Fwd,
    Rev,
    Sym,
}

#[derive(Debug, Args)]
pub struct AlignArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    #[arg(long)]
    pub fwd_table: Option<PathBuf>,
    #[arg(long)]
    pub rev_table: Option<PathBuf>,
    /// Align the source with these translations instead of the reference.
    #[arg(long)]
    pub hypotheses: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = HypothesisFormat::Auto)]
    pub hyp_format: HypothesisFormat,
    #[arg(long, value_enum, default_value_t = AlignDirection::Sym)]
    pub direction: AlignDirection,
    /// intersection, union or grow-diag-final-and.
    #[arg(long)]
    pub heuristic: Option<String>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Structured,
    Tabular,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    #[arg(long)]
    pub hypotheses: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = HypothesisFormat::Auto)]
    pub hyp_format: HypothesisFormat,
    #[arg(long)]
    pub lexicon: Option<PathBuf>,
    /// Comma-separated subset of litter,apt,bleu,chrf.
    #[arg(long)]
    pub metrics: Option<String>,
    /// Pharaoh alignments of source and reference, one line per corpus pair.
    #[arg(long)]
    pub ref_alignments: Option<PathBuf>,
    /// Pharaoh alignments of source and hypothesis, one line per corpus pair.
    #[arg(long)]
    pub hyp_alignments: Option<PathBuf>,
    /// Train the aligner in-process instead of reading alignment files.
    #[arg(long)]
    pub train_aligner: bool,
    /// Extra aligner training data (annotated corpus).
    #[arg(long)]
    pub align_corpus: Option<PathBuf>,
    /// Restricts --align-corpus to regular and idiom-train pairs.
    #[arg(long)]
    pub align_manifest: Option<PathBuf>,
    #[command(flatten)]
    pub aligner: AlignerArgs,
    #[arg(long)]
    pub heuristic: Option<String>,
    #[arg(long, value_enum)]
    pub format: Option<ReportFormat>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Report written by `eval`.
    #[arg(long)]
    pub input: PathBuf,
    /// Per-idiom TSV output.
    #[arg(long)]
    pub tsv: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct EvalGlobalArgs {
    #[arg(long)]
    pub hypotheses: Option<PathBuf>,
    /// Plain-text references, one per line.
    #[arg(long, conflicts_with = "corpus")]
    pub references: Option<PathBuf>,
    /// Take references from an annotated corpus instead.
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Subcommand)]
pub enum LexiconCommand {
    /// Vocabulary size, pair count and skipped lines of a dictionary.
    Stats {
        #[arg(long)]
        lexicon: Option<PathBuf>,
    },
}

/// Fails unless every path names a readable file.
fn check_inputs<'a>(paths: impl IntoIterator<Item = &'a Path>) -> Result<()> {
    for path in paths {
        if !path.is_file() {
            return Err(Error::io(
                path,
                std::io::Error::new(std::io::ErrorKind::NotFound, "input file not found"),
            ));
        }
    }
    Ok(())
}

fn emit(output: &OutputArgs, text: &str) -> Result<()> {
    if let Some(path) = &output.out {
        write_file(path, text)?;
    }
    if output.stdout || output.out.is_none() {
        let mut stdout = std::io::stdout().lock();
        stdout
            .write_all(text.as_bytes())
            .and_then(|_| stdout.flush())
            .map_err(|e| Error::io("<stdout>", e))?;
    }
    Ok(())
}

fn heuristic(cfg: &Config, flag: Option<String>) -> Result<Heuristic> {
    Ok(cfg.pick(flag, "heuristic", "grow-diag-final-and".to_owned())?.parse()?)
}

fn train_config(cfg: &Config, args: &AlignerArgs) -> Result<TrainConfig> {
    let defaults = TrainConfig::default();
    let iterations = cfg.pick(args.iterations, "iterations", defaults.iterations)?;
    let alpha = cfg.pick(args.alpha, "alpha", defaults.alpha)?;
    let model1 = args.model1 || cfg.get::<bool>("model1")?.unwrap_or(false);
    let prior = if model1 {
        Prior::Uniform
    } else {
        Prior::Diagonal {
            lambda: cfg.pick(args.lambda, "lambda", 4.0)?,
        }
    };
    if iterations == 0 {
        return Err(Error::Usage("--iterations must be at least 1".into()));
    }
    Ok(TrainConfig { iterations, alpha, prior })
}

struct ResolvedCorpus {
    corpus: PathBuf,
    idioms: Option<PathBuf>,
    schema_check: bool,
}

fn resolve_corpus(cfg: &Config, args: &CorpusArgs) -> Result<ResolvedCorpus> {
    Ok(ResolvedCorpus {
        corpus: cfg.require_path(args.corpus.clone(), "corpus")?,
        idioms: cfg.pick_path(args.idioms.clone(), "idioms"),
        schema_check: args.schema_check || cfg.get::<bool>("schema_check")?.unwrap_or(false),
    })
}

impl ResolvedCorpus {
    fn paths(&self) -> Vec<&Path> {
        std::iter::once(self.corpus.as_path()).chain(self.idioms.as_deref()).collect()
    }

    fn load(&self) -> Result<Vec<AnnotatedPair>> {
        let idioms = match &self.idioms {
            Some(p) => Some(load_idiom_list(p)?.into_iter().collect::<BTreeSet<_>>()),
            None => None,
        };
        load_corpus(&self.corpus, self.schema_check, idioms.as_ref())
    }
}

pub fn run(cli: Cli) -> Result<()> {
    let cfg = Config::discover(cli.config.as_deref())?;
    match cli.command {
        Command::Extract(args) => cmd_extract(&cfg, args),
        Command::Split(args) => cmd_split(&cfg, args),
        Command::TrainAlign(args) => cmd_train_align(&cfg, args),
        Command::Align(args) => cmd_align(&cfg, args),
        Command::Eval(args) => cmd_eval(&cfg, args),
        Command::Report(args) => cmd_report(args),
        Command::EvalGlobal(args) => cmd_eval_global(&cfg, args),
        Command::Lexicon(LexiconCommand::Stats { lexicon }) => {
            let path = cfg.require_path(lexicon, "lexicon")?;
            check_inputs([path.as_path()])?;
            let (_, stats) = load_lexicon(&path)?;
            println!("{}", serde_json::to_string(&stats).map_err(|e| Error::Internal(e.to_string()))?);
            Ok(())
        }
    }
}

fn cmd_extract(cfg: &Config, args: ExtractArgs) -> Result<()> {
    let idioms = cfg.require_path(args.idioms, "idioms")?;
    let source = cfg.require_path(args.source, "source")?;
    let target = cfg.require_path(args.target, "target")?;
    let lemmas = cfg.pick_path(args.lemmas, "lemmas");
    let thresholds = FilterThresholds {
        max_len: cfg.pick(args.max_len, "max_len", FilterThresholds::default().max_len)?,
        max_ratio: cfg.pick(args.max_ratio, "max_ratio", FilterThresholds::default().max_ratio)?,
    };
    if thresholds.max_len == 0 || thresholds.max_ratio.is_nan() || thresholds.max_ratio < 1.0 {
        return Err(Error::Usage("--max-len must be positive and --max-ratio at least 1".into()));
    }
    check_inputs([idioms.as_path(), source.as_path(), target.as_path()].into_iter().chain(lemmas.as_deref()))?;

    let phrases = load_idiom_list(&idioms)?;
    let table = match &lemmas {
        Some(p) => load_lemma_table(p)?,
        None => default_lemma_table(),
    };
    let patterns = phrases
        .iter()
        .map(|p| compile_pattern(p, &table))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let src = load_lines(&source)?;
    let tgt = load_lines(&target)?;
    let extraction = extract_corpus(&patterns, &table, &src, &tgt, args.all)?;
    let found = extraction.pairs.len();
    let pairs = if args.no_filter {
        extraction.pairs
    } else {
        let outcome = preprocess_filter(extraction.pairs, thresholds);
        let count = |r: DropReason| outcome.dropped.iter().filter(|(_, reason)| *reason == r).count();
        eprintln!(
            "filter: kept {}, dropped {} (length {}, ratio {}, empty {})",
            outcome.kept.len(),
            outcome.dropped.len(),
            count(DropReason::Length),
            count(DropReason::Ratio),
            count(DropReason::Empty)
        );
        outcome.kept
    };
    eprintln!("extract: {} of {} lines matched, {} pairs written", found, src.len(), pairs.len());
    if let Some(freq) = &args.freq {
        write_file(freq, &render_frequency_table(&extraction.counts))?;
    }
    emit(&args.output, &render_corpus(&pairs))
}

fn cmd_split(cfg: &Config, args: SplitArgs) -> Result<()> {
    let corpus = resolve_corpus(cfg, &args.corpus)?;
    let kind: SplitKind = cfg.pick(args.kind, "kind", "joint".to_owned())?.parse()?;
    let factor = cfg.pick(args.upsample_factor, "upsample_factor", 1usize)?;
    let seed = cfg.pick(args.seed, "seed", 0u64)?;
    check_inputs(corpus.paths())?;
    let pairs = corpus.load()?;
    let manifest = build_split(&pairs, kind, factor, seed)?;
    eprintln!(
        "split {kind}: {} regular, {} idiom-train, {} idiom-test, {} discarded, {} multi-idiom",
        manifest.regular_ids.len(),
        manifest.idiom_train_ids.len(),
        manifest.idiom_test_ids.len(),
        manifest.discarded_ids.len(),
        manifest.multi_idiom_ids.len()
    );
    let freq = idiom_frequency_table(&pairs);
    if let Some((idiom, n)) = freq.first() {
        eprintln!("most frequent idiom: {idiom} ({n})");
    }
    emit(&args.output, &render_manifest(&manifest))
}

fn cmd_train_align(cfg: &Config, args: TrainAlignArgs) -> Result<()> {
    let corpus = resolve_corpus(cfg, &args.corpus)?;
    let manifest = cfg.pick_path(args.manifest, "manifest");
    let fwd_out = cfg.require_path(args.fwd_table, "fwd_table")?;
    let rev_out = cfg.require_path(args.rev_table, "rev_table")?;
    let config = train_config(cfg, &args.aligner)?;
    check_inputs(corpus.paths().into_iter().chain(manifest.as_deref()))?;

    let pairs = corpus.load()?;
    let selected: Vec<&AnnotatedPair> = match &manifest {
        Some(path) => {
            let ids = training_ids(&load_manifest(path)?, args.include_test);
            pairs.iter().filter(|p| ids.contains(&p.pair_id)).collect()
        }
        None => pairs.iter().collect(),
    };
    let data = bitext(selected);
    let (fwd, rev) = train_tables(&data, &config)?;
    for (name, table) in [("fwd", &fwd), ("rev", &rev)] {
        let ll: Vec<String> = table.log_likelihoods.iter().map(|v| format!("{v:.4}")).collect();
        eprintln!("{name}: {} sentence pairs, log-likelihood {}", data.len(), ll.join(" "));
    }
    write_file(&fwd_out, &render_table(&fwd))?;
    write_file(&rev_out, &render_table(&rev))
}

fn cmd_align(cfg: &Config, args: AlignArgs) -> Result<()> {
    let corpus = resolve_corpus(cfg, &args.corpus)?;
    let fwd_path = cfg.require_path(args.fwd_table, "fwd_table")?;
    let rev_path = cfg.require_path(args.rev_table, "rev_table")?;
    let hypotheses = args.hypotheses;
    let mode = match args.direction {
        AlignDirection::Fwd => AlignMode::Forward,
        AlignDirection::Rev => AlignMode::Reverse,
        AlignDirection::Sym => AlignMode::Symmetrized(heuristic(cfg, args.heuristic)?),
    };
    check_inputs(
        corpus
            .paths()
            .into_iter()
            .chain([fwd_path.as_path(), rev_path.as_path()])
            .chain(hypotheses.as_deref()),
    )?;

    let pairs = corpus.load()?;
    let fwd = load_table(&fwd_path)?;
    let rev = load_table(&rev_path)?;
    let hyps = match &hypotheses {
        Some(p) => Some(load_hypotheses(p, &pairs, args.hyp_format)?),
        None => None,
    };
    let mut out = Vec::with_capacity(pairs.len());
    for pair in &pairs {
        let src: Vec<String> = pair.source_tokens.iter().map(|t| t.normalized.clone()).collect();
        let tgt: Vec<String> = match &hyps {
            Some(h) => {
                let text = h
                    .get(&pair.pair_id)
                    .ok_or_else(|| idiomeval_core::Error::MissingHypothesis(pair.pair_id.clone()))?;
                tokenize(text).into_iter().map(|t| t.normalized).collect()
            }
            None => pair.target_tokens.iter().map(|t| t.normalized.clone()).collect(),
        };
        out.push(align_words(&fwd, &rev, &pair.pair_id, &src, &tgt, mode)?);
    }
    emit(&args.output, &render_pharaoh(&out))
}

fn cmd_eval(cfg: &Config, args: EvalArgs) -> Result<()> {
    let corpus = resolve_corpus(cfg, &args.corpus)?;
    let hyp_path = cfg.require_path(args.hypotheses, "hypotheses")?;
    let metrics = parse_metrics(&cfg.pick(args.metrics, "metrics", "litter,apt,bleu,chrf".to_owned())?)?;
    let lexicon_path = cfg.pick_path(args.lexicon, "lexicon");
    let ref_al = cfg.pick_path(args.ref_alignments, "ref_alignments");
    let hyp_al = cfg.pick_path(args.hyp_alignments, "hyp_alignments");
    let train_aligner = args.train_aligner || cfg.get::<bool>("train_aligner")?.unwrap_or(false);
    let align_corpus = cfg.pick_path(args.align_corpus, "align_corpus");
    let align_manifest = cfg.pick_path(args.align_manifest, "align_manifest");
    let format = cfg.pick(
        args.format.map(|f| if f == ReportFormat::Tabular { "tabular" } else { "structured" }.to_owned()),
        "format",
        "structured".to_owned(),
    )?;
    let tabular = match format.as_str() {
        "structured" => false,
        "tabular" => true,
        other => return Err(Error::Usage(format!("unknown report format `{other}`"))),
    };
    let wants = |m| metrics.contains(&m);
    use crate::pipeline::Metric;
    if wants(Metric::Litter) && lexicon_path.is_none() {
        return Err(Error::Usage("metric `litter` needs --lexicon".into()));
    }
    if wants(Metric::Apt) && !train_aligner && (ref_al.is_none() || hyp_al.is_none()) {
        return Err(Error::Usage(
            "metric `apt` needs --ref-alignments and --hyp-alignments, or --train-aligner".into(),
        ));
    }
    let (config, heur) = if wants(Metric::Apt) && train_aligner {
        (Some(train_config(cfg, &args.aligner)?), Some(heuristic(cfg, args.heuristic)?))
    } else {
        (None, None)
    };
    let mut inputs: Vec<&Path> = corpus.paths();
    inputs.push(&hyp_path);
    if wants(Metric::Litter) {
        inputs.extend(lexicon_path.as_deref());
    }
    if wants(Metric::Apt) {
        if train_aligner {
            inputs.extend(align_corpus.as_deref());
            inputs.extend(align_manifest.as_deref());
        } else {
            inputs.extend(ref_al.as_deref());
            inputs.extend(hyp_al.as_deref());
        }
    }
    check_inputs(inputs)?;

    let pairs = corpus.load()?;
    let hypotheses = load_hypotheses(&hyp_path, &pairs, args.hyp_format)?;
    let lexicon = match (&lexicon_path, wants(Metric::Litter)) {
        (Some(p), true) => {
            let (lexicon, stats) = load_lexicon(p)?;
            eprintln!(
                "lexicon: {} source words, {} pairs, {} multi-word and {} malformed lines skipped",
                stats.source_vocab_size, stats.pair_count, stats.skipped_multiword, stats.skipped_malformed
            );
            Some(lexicon)
        }
        _ => None,
    };
    let alignments = if !wants(Metric::Apt) {
        None
    } else if let (Some(config), Some(heur)) = (config, heur) {
        let extra = match &align_corpus {
            Some(p) => {
                let extra_pairs = load_corpus(p, false, None)?;
                match &align_manifest {
                    Some(m) => {
                        let ids = training_ids(&load_manifest(m)?, false);
                        bitext(extra_pairs.iter().filter(|p| ids.contains(&p.pair_id)))
                    }
                    None => bitext(&extra_pairs),
                }
            }
            None => Vec::new(),
        };
        Some(train_alignments(&pairs, &hypotheses, &extra, &config, heur)?)
    } else {
        let (ref_path, hyp_path) = (ref_al.as_deref().unwrap_or(Path::new("")), hyp_al.as_deref().unwrap_or(Path::new("")));
        let ref_lens: Vec<usize> = pairs.iter().map(|p| p.target_tokens.len()).collect();
        let hyp_lens = pairs
            .iter()
            .map(|p| {
                hypotheses
                    .get(&p.pair_id)
                    .map(|h| tokenize(h).len())
                    .ok_or_else(|| idiomeval_core::Error::MissingHypothesis(p.pair_id.clone()))
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Some(Alignments {
            reference: load_pharaoh(ref_path, &pairs, &ref_lens, Direction::Symmetrized)?,
            hypothesis: load_pharaoh(hyp_path, &pairs, &hyp_lens, Direction::Symmetrized)?,
            info: Some(AlignmentInfo {
                source: "files".into(),
                heuristic: None,
                bitext_pairs: None,
            }),
        })
    };
    let report = evaluate(
        &EvalInputs {
            pairs: &pairs,
            hypotheses: &hypotheses,
            lexicon: lexicon.as_ref(),
            alignments: alignments.as_ref(),
        },
        &metrics,
    )?;
    if let Some(l) = &report.litter {
        eprintln!("litter: macro {:.4}, micro {:.4}", l.macro_litter, l.micro_litter);
    }
    if tabular {
        emit(&args.output, &render_report_table(&report))
    } else {
        emit(&args.output, &report.to_line())
    }
}

fn cmd_report(args: ReportArgs) -> Result<()> {
    check_inputs([args.input.as_path()])?;
    let report = EvalReport::load(&args.input)?;
    if let Some(tsv) = &args.tsv {
        write_file(tsv, &render_idiom_tsv(&report))?;
    }
    emit(&args.output, &render_report_table(&report))
}

fn cmd_eval_global(cfg: &Config, args: EvalGlobalArgs) -> Result<()> {
    let hyp_path = cfg.require_path(args.hypotheses, "hypotheses")?;
    let refs_path = args.references.or_else(|| cfg.path("references"));
    let corpus_path = cfg.pick_path(args.corpus, "corpus");
    let source = refs_path
        .clone()
        .or(corpus_path.clone())
        .ok_or_else(|| Error::Usage("eval-global needs --references or --corpus".into()))?;
    check_inputs([hyp_path.as_path(), source.as_path()])?;

    let hyps = load_lines(&hyp_path)?;
    let refs = match (&refs_path, &corpus_path) {
        (Some(p), _) => load_lines(p)?,
        (None, Some(p)) => load_corpus(p, false, None)?.into_iter().map(|p| p.target_raw).collect(),
        (None, None) => unreachable!("checked above"),
    };
    if hyps.len() != refs.len() {
        return Err(Error::Usage(format!(
            "{} hypothesis lines for {} references",
            hyps.len(),
            refs.len()
        )));
    }
    let scores = GlobalScores {
        bleu: Some(corpus_bleu(&hyps, &refs, BLEU_MAX_N)?),
        chrf: Some(corpus_chrf(&hyps, &refs)?),
    };
    let mut line = serde_json::to_string(&scores).map_err(|e| Error::Internal(e.to_string()))?;
    line.push('\n');
    emit(&args.output, &line)
}
