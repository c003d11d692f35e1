//! Command-line surface. Every subcommand writes a run manifest next to its
//! primary output (or to `--manifest`), and every per-record output keeps
//! the input order regardless of `--jobs`.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::num::NonZeroUsize;
use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use clap::{Args, Parser, Subcommand};
use log::{error, info, warn};
use rayon::prelude::*;
use tabfact_core::augment::{generate_unknown, merge_corpora, AugmentConfig, Ratio};
use tabfact_core::classify::{lexical_baseline, BaselineConfig, ScoreVector};
use tabfact_core::corpus::{check_unique_table_ids, corpus_stats};
use tabfact_core::ensemble::{self, assemble_features, majority_vote, train, Example, TrainConfig};
use tabfact_core::eval::{score_taskb, task_a_report, Averaging};
use tabfact_core::evidence::find_evidence;
use tabfact_core::snapshot::{median_row_count, select_snapshot, Snapshot};
use tabfact_core::textnorm::{AbbrevTable, NgramOrders};
use tabfact_core::{Label, StatementKey, TableDocument};

use crate::interchange::{self, read_corpus, read_lines, write_lines, Prediction, FORMAT_VERSION};
use crate::manifest::{self, RunManifest};
use crate::model::{ConfigEcho, SavedModel};
use crate::report;
use crate::scores::{self, read_scores, ScoreRecord};
use crate::tabfact;
use crate::xml::parse_xml;

#[derive(Debug, Parser)]
#[command(
    name = "tabfact-kit",
    version,
    about = "Table statement verification pipeline"
)]
pub struct Cli {
    /// Worker threads for per-table work; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
    /// Where to write the run manifest. Defaults to `<output>.manifest.json`.
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Convert a directory of XML tables into an interchange corpus.
    Parse(ParseArgs),
    /// Corpus statistics.
    Stats(StatsArgs),
    /// Merge an external corpus and append sampled Unknown statements.
    Augment(AugmentArgs),
    /// Select the most statement-like body rows of every table.
    Snapshot(SnapshotArgs),
    /// Score statements with the built-in lexical classifier.
    Baseline(BaselineArgs),
    /// Fit the vote layer on gold-labeled statements.
    EnsembleTrain(TrainArgs),
    /// Task A labels from score files and a vote layer.
    Predict(PredictArgs),
    /// Task B relevant-cell maps.
    Evidence(EvidenceArgs),
    /// Task A and Task B scores against gold.
    Score(ScoreArgs),
    /// Import TabFact's release files as an interchange corpus.
    ImportTabfact(ImportArgs),
}

#[derive(Debug, Args)]
pub struct NormArgs {
    /// Tab-separated abbreviation table replacing the built-in one.
    #[arg(long)]
    pub abbrev_file: Option<PathBuf>,
}

impl NormArgs {
    fn load(&self, m: &mut RunManifest) -> Result<AbbrevTable> {
        match &self.abbrev_file {
            Some(path) => {
                m.input(path).set("abbrev_file", path.display().to_string());
                let text = fs::read_to_string(path).with_context(|| path.display().to_string())?;
                AbbrevTable::parse_tsv(&text).with_context(|| path.display().to_string())
            }
            None => {
                m.set("abbrev_file", "builtin");
                Ok(AbbrevTable::builtin())
            }
        }
    }
}

#[derive(Debug, Args)]
pub struct ParseArgs {
    pub in_dir: PathBuf,
    #[arg(short, long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    pub corpus: PathBuf,
    /// JSON report path.
    #[arg(short, long)]
    pub out: Option<PathBuf>,
    /// Text report path; printed to stdout when absent.
    #[arg(long)]
    pub text: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AugmentArgs {
    pub corpus: PathBuf,
    #[arg(short, long)]
    pub out: PathBuf,
    /// External interchange corpus merged before sampling.
    #[arg(long)]
    pub external: Option<PathBuf>,
    #[arg(long, default_value = "ext:")]
    pub external_prefix: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Unknown statements per original statement, as `a/b` or a decimal.
    #[arg(long, default_value = "1/2")]
    pub ratio: Ratio,
    /// Reject donors sharing more than this fraction of unigrams with the
    /// target table; 0 disables the check.
    #[arg(long, default_value_t = 0.5)]
    pub leakage_threshold: f64,
    #[arg(long, default_value_t = 10)]
    pub max_redraws: usize,
    /// Pool-exhaustion warnings as JSON lines.
    #[arg(long)]
    pub warnings: Option<PathBuf>,
    #[command(flatten)]
    pub norm: NormArgs,
}

#[derive(Debug, Args)]
pub struct SnapshotArgs {
    pub corpus: PathBuf,
    #[arg(short, long)]
    pub out: PathBuf,
    /// Rows per snapshot. Defaults to the median body-row count.
    #[arg(long = "rows-R")]
    pub rows_r: Option<NonZeroUsize>,
    /// Corpus the median is taken over. Defaults to the input corpus.
    #[arg(long, conflicts_with = "rows_r")]
    pub median_from: Option<PathBuf>,
    #[arg(long, default_value = "1,2")]
    pub ngrams: NgramOrders,
    #[command(flatten)]
    pub norm: NormArgs,
}

#[derive(Debug, Args)]
pub struct BaselineArgs {
    pub corpus: PathBuf,
    #[arg(long)]
    pub snapshots: PathBuf,
    #[arg(short, long)]
    pub out: PathBuf,
    #[arg(long, default_value = "lexical")]
    pub model: String,
    #[arg(long, default_value = "1,2")]
    pub ngrams: NgramOrders,
    #[arg(long, default_value_t = 1.25)]
    pub negated_factor: f64,
    #[arg(long, default_value_t = 0.75)]
    pub plain_factor: f64,
    #[command(flatten)]
    pub norm: NormArgs,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// Gold-labeled corpus, normally the development split.
    pub corpus: PathBuf,
    #[arg(long, required = true)]
    pub scores: Vec<PathBuf>,
    #[arg(short, long)]
    pub out: PathBuf,
    /// Comma-separated model order. Defaults to every model in the score files, sorted.
    #[arg(long, value_delimiter = ',')]
    pub models: Vec<String>,
    #[arg(long, default_value_t = 0.1)]
    pub learning_rate: f64,
    #[arg(long, default_value_t = 200)]
    pub epochs: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-4)]
    pub l2: f64,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    pub corpus: PathBuf,
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long, required = true)]
    pub scores: Vec<PathBuf>,
    #[arg(short, long)]
    pub out: PathBuf,
    /// Plurality of per-model arg-max labels; ties go to the vote layer.
    #[arg(long)]
    pub majority: bool,
}

#[derive(Debug, Args)]
pub struct EvidenceArgs {
    pub corpus: PathBuf,
    /// Task A predictions deciding between the all-cells shortcut and the rules.
    #[arg(long, required_unless_present = "use_gold_task_a")]
    pub predictions: Option<PathBuf>,
    /// Use gold Task A labels instead of predictions where available.
    #[arg(long = "use-gold-taskA")]
    pub use_gold_task_a: bool,
    #[arg(short, long)]
    pub out: PathBuf,
    /// Include the per-cell rule trace in every record.
    #[arg(long)]
    pub trace: bool,
    #[command(flatten)]
    pub norm: NormArgs,
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    /// Gold corpus.
    pub corpus: PathBuf,
    #[arg(long, required_unless_present = "evidence")]
    pub predictions: Option<PathBuf>,
    #[arg(long)]
    pub evidence: Option<PathBuf>,
    /// JSON report path.
    #[arg(short, long)]
    pub out: PathBuf,
    /// Text report path; printed to stdout when absent.
    #[arg(long)]
    pub text: Option<PathBuf>,
    /// Macro-average F1 over classes within a table (default).
    #[arg(long = "macro", conflicts_with = "micro")]
    pub macro_avg: bool,
    /// Pool class counts within a table.
    #[arg(long)]
    pub micro: bool,
}

#[derive(Debug, Args)]
pub struct ImportArgs {
    /// JSON file mapping table files to statements and labels.
    #[arg(long)]
    pub statements: PathBuf,
    /// Directory of `#`-delimited table files.
    #[arg(long)]
    pub tables: PathBuf,
    #[arg(short, long)]
    pub out: PathBuf,
}

/// Runs one command. `Ok(false)` means the command finished but some inputs
/// were rejected.
pub fn run(cli: Cli) -> Result<bool> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs)
        .build()
        .context("building the worker pool")?;
    let manifest_path = cli.manifest;
    let jobs = cli.jobs;
    pool.install(|| {
        let (ok, mut m, primary) = match cli.command {
            Command::Parse(a) => cmd_parse(a)?,
            Command::Stats(a) => cmd_stats(a)?,
            Command::Augment(a) => cmd_augment(a)?,
            Command::Snapshot(a) => cmd_snapshot(a)?,
            Command::Baseline(a) => cmd_baseline(a)?,
            Command::EnsembleTrain(a) => cmd_train(a)?,
            Command::Predict(a) => cmd_predict(a)?,
            Command::Evidence(a) => cmd_evidence(a)?,
            Command::Score(a) => cmd_score(a)?,
            Command::ImportTabfact(a) => cmd_import(a)?,
        };
        m.set("jobs", jobs);
        match manifest_path.or_else(|| primary.as_deref().map(manifest::default_path)) {
            Some(path) => m.write(&path).with_context(|| path.display().to_string())?,
            None => eprint!("{}", m.to_json()),
        }
        Ok(ok)
    })
}

type Outcome = (bool, RunManifest, Option<PathBuf>);

fn write_out<I, S>(path: &Path, lines: I) -> Result<()>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    write_lines(path, lines).with_context(|| format!("writing {}", path.display()))
}

fn load_corpus(path: &Path, m: &mut RunManifest) -> Result<Vec<TableDocument>> {
    m.input(path);
    let corpus = read_corpus(path)?;
    check_unique_table_ids(&corpus).with_context(|| path.display().to_string())?;
    Ok(corpus)
}

fn cmd_parse(a: ParseArgs) -> Result<Outcome> {
    let mut m = RunManifest::new("parse");
    m.input(&a.in_dir).output(&a.out);
    let mut files: Vec<PathBuf> = fs::read_dir(&a.in_dir)
        .with_context(|| a.in_dir.display().to_string())?
        .map(|e| e.map(|e| e.path()))
        .collect::<Result<_, _>>()
        .with_context(|| a.in_dir.display().to_string())?;
    files.retain(|p| p.extension().is_some_and(|e| e.eq_ignore_ascii_case("xml")));
    files.sort();
    if files.is_empty() {
        warn!("no XML files in {}", a.in_dir.display());
    }
    let parsed: Vec<Result<TableDocument, String>> = files
        .par_iter()
        .map(|p| {
            let bytes = fs::read(p).map_err(|e| format!("{}: {e}", p.display()))?;
            parse_xml(&bytes).map_err(|e| format!("{}: {e}", p.display()))
        })
        .collect();
    let mut seen = BTreeSet::new();
    let mut good = Vec::new();
    let mut failures = 0;
    for (path, result) in files.iter().zip(parsed) {
        match result {
            Ok(doc) if !seen.insert(doc.table_id().to_string()) => {
                error!(
                    "{}: duplicate table id `{}`",
                    path.display(),
                    doc.table_id()
                );
                failures += 1;
            }
            Ok(doc) => good.push(doc),
            Err(msg) => {
                error!("{msg}");
                failures += 1;
            }
        }
    }
    write_out(&a.out, good.iter().map(interchange::to_interchange))?;
    info!("parsed {} of {} files", good.len(), files.len());
    m.set("files", files.len()).set("failed", failures);
    if failures > 0 {
        error!("{failures} file(s) failed to parse");
    }
    Ok((failures == 0, m, Some(a.out)))
}

fn cmd_stats(a: StatsArgs) -> Result<Outcome> {
    let mut m = RunManifest::new("stats");
    let corpus = load_corpus(&a.corpus, &mut m)?;
    let stats = corpus_stats(&corpus);
    if let Some(out) = &a.out {
        m.output(out);
        fs::write(out, report::stats_json(&stats)).with_context(|| out.display().to_string())?;
    }
    let text = report::stats_text(&stats);
    match &a.text {
        Some(path) => {
            m.output(path);
            fs::write(path, text).with_context(|| path.display().to_string())?;
        }
        None => print!("{text}"),
    }
    Ok((true, m, a.out.or(a.text)))
}

fn cmd_augment(a: AugmentArgs) -> Result<Outcome> {
    let mut m = RunManifest::new("augment");
    let abbrevs = a.norm.load(&mut m)?;
    let mut corpus = load_corpus(&a.corpus, &mut m)?;
    if let Some(ext) = &a.external {
        let external = load_corpus(ext, &mut m)?;
        corpus = merge_corpora(corpus, external, &a.external_prefix)?;
        m.set("external_prefix", &a.external_prefix);
    }
    let config = AugmentConfig {
        rng_seed: a.seed,
        unknown_ratio: a.ratio,
        leakage_threshold: a.leakage_threshold,
        max_redraws: a.max_redraws,
    };
    m.set("seed", a.seed)
        .set("ratio", a.ratio.to_string())
        .set("leakage_threshold", a.leakage_threshold)
        .set("max_redraws", a.max_redraws);
    let augmented = generate_unknown(corpus, &config, &abbrevs)?;
    write_out(
        &a.out,
        augmented.corpus.iter().map(interchange::to_interchange),
    )?;
    m.output(&a.out);
    let warnings: Vec<String> = augmented
        .warnings
        .iter()
        .map(|w| {
            warn!(
                "table `{}`: donor pool exhausted, appended {} of {}",
                w.table_id, w.appended, w.requested
            );
            serde_json::json!({
                "warning": "pool_exhausted",
                "table_id": w.table_id,
                "requested": w.requested,
                "appended": w.appended,
            })
            .to_string()
        })
        .collect();
    if let Some(path) = &a.warnings {
        write_out(path, &warnings)?;
        m.output(path);
    }
    m.set("warnings", warnings.len());
    Ok((true, m, Some(a.out)))
}

fn cmd_snapshot(a: SnapshotArgs) -> Result<Outcome> {
    let mut m = RunManifest::new("snapshot");
    let abbrevs = a.norm.load(&mut m)?;
    let corpus = load_corpus(&a.corpus, &mut m)?;
    let r = match (a.rows_r, &a.median_from) {
        (Some(r), _) => {
            m.set("rows_R_source", "flag");
            r
        }
        (None, Some(path)) => {
            let population = load_corpus(path, &mut m)?;
            m.set("rows_R_source", format!("median of {}", path.display()));
            median_row_count(&population)?
        }
        (None, None) => {
            m.set("rows_R_source", "median of input");
            median_row_count(&corpus)?
        }
    };
    m.set("rows_R", r.get()).set("ngrams", a.ngrams.to_string());
    let lines: Vec<Vec<String>> = corpus
        .par_iter()
        .map(|t| {
            t.statements()
                .iter()
                .map(|s| {
                    interchange::snapshot_to_line(&select_snapshot(t, s, r, &a.ngrams, &abbrevs))
                })
                .collect()
        })
        .collect();
    write_out(&a.out, lines.iter().flatten())?;
    m.output(&a.out);
    Ok((true, m, Some(a.out)))
}

fn cmd_baseline(a: BaselineArgs) -> Result<Outcome> {
    let mut m = RunManifest::new("baseline");
    let abbrevs = a.norm.load(&mut m)?;
    let corpus = load_corpus(&a.corpus, &mut m)?;
    m.input(&a.snapshots);
    let snaps: BTreeMap<StatementKey, Snapshot> =
        read_lines(&a.snapshots, interchange::snapshot_from_line)?
            .into_iter()
            .map(|s| {
                (
                    StatementKey::new(s.table_id.as_str(), s.stmt_id.as_str()),
                    s,
                )
            })
            .collect();
    let config = BaselineConfig {
        orders: a.ngrams.clone(),
        negated_factor: a.negated_factor,
        plain_factor: a.plain_factor,
        ..BaselineConfig::default()
    };
    m.set("model", &a.model)
        .set("ngrams", a.ngrams.to_string())
        .set("negators", &config.negators)
        .set("negated_factor", a.negated_factor)
        .set("plain_factor", a.plain_factor);
    let lines: Vec<Vec<String>> = corpus
        .par_iter()
        .map(|t| {
            t.statements()
                .iter()
                .map(|s| {
                    let key = t.key(s);
                    let snap = snaps
                        .get(&key)
                        .with_context(|| format!("no snapshot for {key}"))?;
                    let v = lexical_baseline(&a.model, s, t, snap, &config, &abbrevs)?;
                    Ok(scores::to_line(&ScoreRecord::from(v)))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    write_out(&a.out, lines.iter().flatten())?;
    m.output(&a.out);
    Ok((true, m, Some(a.out)))
}

/// Score vectors from several files, grouped by statement.
fn load_scores(
    paths: &[PathBuf],
    m: &mut RunManifest,
) -> Result<BTreeMap<StatementKey, Vec<ScoreVector>>> {
    let mut index: BTreeMap<StatementKey, Vec<ScoreVector>> = BTreeMap::new();
    for path in paths {
        m.input(path);
        for record in read_scores(path)? {
            index
                .entry(record.vector.key().clone())
                .or_default()
                .push(record.vector);
        }
    }
    Ok(index)
}

fn features_for(
    index: &BTreeMap<StatementKey, Vec<ScoreVector>>,
    key: &StatementKey,
    names: &[String],
) -> Result<Vec<f64>> {
    let scores = index.get(key).map(Vec::as_slice).unwrap_or_default();
    Ok(assemble_features(key, scores, names)?)
}

fn cmd_train(a: TrainArgs) -> Result<Outcome> {
    let mut m = RunManifest::new("ensemble-train");
    let corpus = load_corpus(&a.corpus, &mut m)?;
    let index = load_scores(&a.scores, &mut m)?;
    let names: Vec<String> = if a.models.is_empty() {
        let all: BTreeSet<&str> = index
            .values()
            .flatten()
            .map(ScoreVector::model_name)
            .collect();
        all.into_iter().map(str::to_string).collect()
    } else {
        a.models.clone()
    };
    let config = TrainConfig {
        learning_rate: a.learning_rate,
        epochs: a.epochs,
        rng_seed: a.seed,
        l2: a.l2,
    };
    let mut examples = Vec::new();
    for t in &corpus {
        for s in t.statements() {
            if let Some(label) = s.gold_label {
                examples.push(Example {
                    features: features_for(&index, &t.key(s), &names)?,
                    label,
                });
            }
        }
    }
    m.set("models", &names)
        .set("learning_rate", a.learning_rate)
        .set("epochs", a.epochs)
        .set("seed", a.seed)
        .set("l2", a.l2)
        .set("examples", examples.len());
    let trained = train(names, &examples, &config)?;
    let saved = SavedModel {
        layer: trained.layer,
        config: ConfigEcho::from(&config),
        final_loss: trained.loss_trace.last().copied(),
    };
    saved
        .save(&a.out)
        .with_context(|| a.out.display().to_string())?;
    m.output(&a.out);
    Ok((true, m, Some(a.out)))
}

fn cmd_predict(a: PredictArgs) -> Result<Outcome> {
    let mut m = RunManifest::new("predict");
    let corpus = load_corpus(&a.corpus, &mut m)?;
    m.input(&a.model);
    let model = SavedModel::load(&a.model)?;
    let index = load_scores(&a.scores, &mut m)?;
    let names = model.layer.model_names().to_vec();
    m.set("models", &names).set("majority", a.majority);
    let lines: Vec<Vec<String>> = corpus
        .par_iter()
        .map(|t| {
            t.statements()
                .iter()
                .map(|s| {
                    let f = features_for(&index, &t.key(s), &names)?;
                    let (label, probs) = if a.majority {
                        (majority_vote(&f, Some(&model.layer))?, None)
                    } else {
                        let p = ensemble::forward(&model.layer, &f)?;
                        (ensemble::argmax_label(p), Some(p))
                    };
                    let p = Prediction {
                        version: FORMAT_VERSION,
                        table_id: t.table_id().into(),
                        stmt_id: s.stmt_id.clone(),
                        label,
                        probs,
                    };
                    Ok(interchange::prediction_to_line(&p))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    write_out(&a.out, lines.iter().flatten())?;
    m.output(&a.out);
    Ok((true, m, Some(a.out)))
}

fn load_predictions(path: &Path, m: &mut RunManifest) -> Result<BTreeMap<StatementKey, Label>> {
    m.input(path);
    let mut out = BTreeMap::new();
    for p in read_lines(path, interchange::prediction_from_line)? {
        let key = p.key();
        if out.insert(key.clone(), p.label).is_some() {
            bail!("{}: statement {key} predicted twice", path.display());
        }
    }
    Ok(out)
}

fn cmd_evidence(a: EvidenceArgs) -> Result<Outcome> {
    let mut m = RunManifest::new("evidence");
    let abbrevs = a.norm.load(&mut m)?;
    let corpus = load_corpus(&a.corpus, &mut m)?;
    let preds = match &a.predictions {
        Some(p) => load_predictions(p, &mut m)?,
        None => BTreeMap::new(),
    };
    m.set("use_gold_taskA", a.use_gold_task_a)
        .set("trace", a.trace);
    let lines: Vec<Vec<String>> = corpus
        .par_iter()
        .map(|t| {
            let mut out = Vec::new();
            for s in t.statements() {
                let key = t.key(s);
                let label = match (a.use_gold_task_a, s.gold_label) {
                    (true, Some(Label::Unknown)) => continue,
                    (true, Some(gold)) => gold,
                    _ => *preds
                        .get(&key)
                        .with_context(|| format!("no Task A label for {key}"))?,
                };
                // A predicted Unknown still gets a cell map; the rules decide it.
                let label = if label == Label::Unknown {
                    Label::Refuted
                } else {
                    label
                };
                let (map, trace) = find_evidence(s, t, label, &abbrevs)?;
                out.push(interchange::evidence_to_line(
                    label,
                    &map,
                    a.trace.then_some(&trace),
                ));
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    write_out(&a.out, lines.iter().flatten())?;
    m.output(&a.out);
    Ok((true, m, Some(a.out)))
}

fn cmd_score(a: ScoreArgs) -> Result<Outcome> {
    let mut m = RunManifest::new("score");
    let gold = load_corpus(&a.corpus, &mut m)?;
    let averaging = if a.micro {
        Averaging::Micro
    } else {
        Averaging::Macro
    };
    m.set("averaging", report::averaging_name(averaging));
    let task_a = match &a.predictions {
        Some(p) => {
            let preds = load_predictions(p, &mut m)?;
            Some(task_a_report(&preds, &gold, averaging)?)
        }
        None => None,
    };
    let task_b = match &a.evidence {
        Some(path) => {
            m.input(path);
            let mut maps = BTreeMap::new();
            for line in read_lines(path, interchange::evidence_from_line)? {
                let key = StatementKey::new(line.map.table_id.as_str(), line.map.stmt_id.as_str());
                ensure!(
                    maps.insert(key.clone(), line.map).is_none(),
                    "{}: evidence for {key} given twice",
                    path.display()
                );
            }
            Some(score_taskb(&maps, &gold)?)
        }
        None => None,
    };
    let a_view = task_a.as_ref().map(|r| (r, averaging));
    fs::write(&a.out, report::score_json(a_view, task_b.as_ref()))
        .with_context(|| a.out.display().to_string())?;
    m.output(&a.out);
    let text = report::score_text(a_view, task_b.as_ref());
    match &a.text {
        Some(path) => {
            fs::write(path, text).with_context(|| path.display().to_string())?;
            m.output(path);
        }
        None => print!("{text}"),
    }
    Ok((true, m, Some(a.out)))
}

fn cmd_import(a: ImportArgs) -> Result<Outcome> {
    let mut m = RunManifest::new("import-tabfact");
    m.input(&a.statements).input(&a.tables);
    let imported = tabfact::import(&a.statements, &a.tables)?;
    for msg in &imported.skipped {
        warn!("skipped {msg}");
    }
    write_out(
        &a.out,
        imported.corpus.iter().map(interchange::to_interchange),
    )?;
    m.output(&a.out)
        .set("tables", imported.corpus.len())
        .set("skipped", imported.skipped.len());
    Ok((true, m, Some(a.out)))
}
