//! Command-line front end.
//!
//! Every input is an explicit flag so a job is reproducible from its
//! command line alone; `--config FILE` expands `key = value` lines in place
//! as if the flags had been typed there. Numbers are rounded to 12
//! significant digits before serialization, so TSV and JSON outputs carry
//! identical values and repeated runs are byte-identical.
//!
//! Exit codes: 0 success, 1 input or parse error, 2 computation-domain
//! error (e.g. a degenerate corpus with zero entropy).

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::analysis::{
    consistency_alpha, fl_matrix, parse_similarity, rank_entry, single_phoneme_fl, FlMatrix,
};
use crate::contrast::{parse_contrast, ContrastSpec};
use crate::corpus::{
    join_lexicon, parse_pronunciations, parse_token_stream, parse_weighted_lexicon, CorpusSource,
    MissPolicy,
};
use crate::error::{Error, Result};
use crate::infotheory::{cohort_analysis, functional_load};
use crate::schema::{parse_schema, Schema};

#[derive(Debug, Parser)]
#[command(
    name = "fload",
    version,
    about = "Functional load of phonological contrasts from corpora",
    args_override_self = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Functional load of one contrast.
    Fl(FlArgs),
    /// Pairwise FL of every phoneme pair in a subset, with percentile ranks.
    FlMatrix(FlMatrixArgs),
    /// Cohort statistics of a lexicon under a contrast.
    Cohorts(CohortArgs),
    /// Pearson correlation between two fl-matrix reports.
    Alpha(AlphaArgs),
    /// Expected FL of single phonemes over a similarity model.
    PhonemeFl(PhonemeFlArgs),
    /// Check schema, corpus, and contrast files.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CorpusFormat {
    Stream,
    Lexicon,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Tsv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MissArg {
    Skip,
    Error,
}

#[derive(Debug, Args)]
struct InputArgs {
    /// Schema file.
    #[arg(long)]
    schema: PathBuf,
    /// Corpus file (token stream or weighted lexicon).
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long, value_enum, default_value = "stream")]
    corpus_format: CorpusFormat,
    /// Object type of the corpus values.
    #[arg(long = "type")]
    object_type: String,
    /// n-gram order (lexicons support n = 1 only).
    #[arg(short, long, default_value_t = 1)]
    n: usize,
    #[arg(long, value_enum, default_value = "tsv")]
    output: OutputFormat,
    /// Pronouncing dictionary for joining an atomic key stream
    /// (`<key> TAB <value>` lines).
    #[arg(long)]
    join_lexicon: Option<PathBuf>,
    /// Object type of the joined pronunciation values.
    #[arg(long)]
    join_type: Option<String>,
    /// Policy for stream keys missing from the join lexicon.
    #[arg(long, value_enum, default_value = "error")]
    miss: MissArg,
    /// Worker count; any value produces output identical to --jobs 1.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Debug, Args)]
struct FlArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Contrast file.
    #[arg(long)]
    contrast: PathBuf,
}

#[derive(Debug, Args)]
struct FlMatrixArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Space-separated phoneme subset, e.g. --pairs "p t k b d g".
    #[arg(long)]
    pairs: String,
    /// Atomic type of the subset; defaults to --type when that is atomic.
    #[arg(long)]
    pair_type: Option<String>,
}

#[derive(Debug, Args)]
struct CohortArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    contrast: PathBuf,
}

#[derive(Debug, Args)]
struct AlphaArgs {
    /// Two fl-matrix TSV reports to correlate.
    #[arg(required = true, num_args = 2)]
    reports: Vec<PathBuf>,
    #[arg(long, value_enum, default_value = "tsv")]
    output: OutputFormat,
    /// Consistency rule-of-thumb annotation threshold.
    #[arg(long, default_value_t = 0.9)]
    threshold: f64,
}

#[derive(Debug, Args)]
struct PhonemeFlArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Similarity model file.
    #[arg(long)]
    similar: PathBuf,
    /// Atomic type of the phonemes; defaults to --type when that is atomic.
    #[arg(long)]
    pair_type: Option<String>,
    /// Restrict to one phoneme; default is every `similar` entry.
    #[arg(long)]
    phoneme: Option<String>,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    #[arg(long)]
    schema: PathBuf,
    #[arg(long)]
    corpus: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "stream")]
    corpus_format: CorpusFormat,
    #[arg(long = "type")]
    object_type: Option<String>,
    #[arg(long)]
    contrast: Option<PathBuf>,
}

/// Entry point; returns the process exit code.
pub fn run() -> i32 {
    let args: Vec<OsString> = std::env::args_os().collect();
    run_from(args)
}

fn run_from(args: Vec<OsString>) -> i32 {
    let args = match expand_config(args) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(out) => {
            print!("{out}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Expands `--config FILE` in place: each non-comment line `key = value`
/// (or `key value`) becomes `--key value` at the position of the flag.
fn expand_config(args: Vec<OsString>) -> Result<Vec<OsString>> {
    let mut out = Vec::with_capacity(args.len());
    let mut iter = args.into_iter();
    while let Some(arg) = iter.next() {
        if arg == "--config" {
            let path = iter
                .next()
                .ok_or_else(|| Error::invalid("--config needs a file path"))?;
            let text = fs::read_to_string(&path).map_err(|e| {
                Error::invalid(format!("cannot read config {}: {e}", Path::new(&path).display()))
            })?;
            for (idx, raw) in text.lines().enumerate() {
                let line = crate::schema::strip_comment(raw).trim();
                if line.is_empty() {
                    continue;
                }
                let (key, value) = line
                    .split_once('=')
                    .or_else(|| line.split_once(char::is_whitespace))
                    .ok_or_else(|| {
                        Error::parse(idx + 1, format!("config line `{line}` has no value"))
                    })?;
                out.push(OsString::from(format!("--{}", key.trim())));
                out.push(OsString::from(value.trim().to_string()));
            }
        } else {
            out.push(arg);
        }
    }
    Ok(out)
}

fn dispatch(cli: Cli) -> Result<String> {
    match cli.command {
        Command::Fl(args) => cmd_fl(args),
        Command::FlMatrix(args) => cmd_fl_matrix(args),
        Command::Cohorts(args) => cmd_cohorts(args),
        Command::Alpha(args) => cmd_alpha(args),
        Command::PhonemeFl(args) => cmd_phoneme_fl(args),
        Command::Validate(args) => cmd_validate(args),
    }
}

// ---------------------------------------------------------------------------
// Shared loading

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::invalid(format!("cannot read {}: {e}", path.display())))
}

fn locate(err: Error, path: &Path) -> Error {
    match err {
        Error::Parse { line, msg } => Error::Parse {
            line,
            msg: format!("{}: {msg}", path.display()),
        },
        other => other,
    }
}

struct Loaded {
    schema: Arc<Schema>,
    source: CorpusSource,
    /// Object type after an optional join.
    effective_type: String,
}

impl InputArgs {
    fn check(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::invalid("n must be at least 1"));
        }
        if self.jobs < 1 {
            return Err(Error::invalid("--jobs must be at least 1"));
        }
        if self.corpus_format == CorpusFormat::Lexicon && self.n != 1 {
            return Err(Error::invalid("lexicon corpora support n = 1 only"));
        }
        Ok(())
    }

    fn load(&self) -> Result<Loaded> {
        self.check()?;
        let schema = Arc::new(parse_schema(&read_file(&self.schema)?).map_err(|e| locate(e, &self.schema))?);
        let text = read_file(&self.corpus)?;
        let mut effective_type = self.object_type.clone();
        let source = match self.corpus_format {
            CorpusFormat::Stream => {
                let corpus = parse_token_stream(&text, schema.clone(), &self.object_type)
                    .map_err(|e| locate(e, &self.corpus))?;
                match &self.join_lexicon {
                    None => CorpusSource::Stream(corpus),
                    Some(join_path) => {
                        let target_type = self.join_type.as_ref().ok_or_else(|| {
                            Error::invalid("--join-lexicon requires --join-type")
                        })?;
                        let pron = parse_pronunciations(
                            &read_file(join_path)?,
                            &schema,
                            target_type,
                        )
                        .map_err(|e| locate(e, join_path))?;
                        let policy = match self.miss {
                            MissArg::Skip => MissPolicy::Skip,
                            MissArg::Error => MissPolicy::Error,
                        };
                        let (joined, diag) =
                            join_lexicon(&corpus, &pron, schema.clone(), target_type, policy)?;
                        if diag.misses > 0 {
                            eprintln!(
                                "note: {} key occurrence(s) without pronunciation skipped ({})",
                                diag.misses,
                                diag.missing_keys
                                    .iter()
                                    .cloned()
                                    .collect::<Vec<_>>()
                                    .join(" ")
                            );
                        }
                        effective_type = target_type.clone();
                        CorpusSource::Stream(joined)
                    }
                }
            }
            CorpusFormat::Lexicon => {
                let lexicon = parse_weighted_lexicon(&text, schema.clone(), &self.object_type)
                    .map_err(|e| locate(e, &self.corpus))?;
                CorpusSource::Lexicon(lexicon)
            }
        };
        Ok(Loaded {
            schema,
            source,
            effective_type,
        })
    }
}

fn load_contrast(path: &Path, schema: Arc<Schema>, object_type: &str) -> Result<ContrastSpec> {
    parse_contrast(&read_file(path)?, schema, object_type).map_err(|e| locate(e, path))
}

fn resolve_pair_type(
    schema: &Schema,
    pair_type: &Option<String>,
    object_type: &str,
) -> Result<String> {
    match pair_type {
        Some(t) => {
            schema.atomic_inventory(t)?;
            Ok(t.clone())
        }
        None if schema.is_atomic(object_type) => Ok(object_type.to_string()),
        None => Err(Error::invalid(format!(
            "object type `{object_type}` is not atomic; pass --pair-type"
        ))),
    }
}

// ---------------------------------------------------------------------------
// Number and report formatting

/// Rounds to 12 significant digits; both TSV and JSON serialize the rounded
/// value, so the formats agree and runs are reproducible bit-for-bit.
fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

fn num(x: f64) -> String {
    format!("{}", round_sig(x))
}

fn jnum(x: f64) -> serde_json::Value {
    json!(round_sig(x))
}

fn meta(command: &str, fields: Vec<(&str, serde_json::Value)>) -> serde_json::Value {
    let mut map = serde_json::Map::new();
    map.insert("command".into(), json!(command));
    map.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    for (k, v) in fields {
        map.insert(k.into(), v);
    }
    serde_json::Value::Object(map)
}

fn render_json(meta: serde_json::Value, results: serde_json::Value) -> String {
    let doc = json!({ "meta": meta, "results": results });
    format!("{}\n", serde_json::to_string_pretty(&doc).expect("json"))
}

// ---------------------------------------------------------------------------
// Commands

fn cmd_fl(args: FlArgs) -> Result<String> {
    let loaded = args.input.load()?;
    let spec = load_contrast(&args.contrast, loaded.schema.clone(), &loaded.effective_type)?;
    let report = functional_load(&loaded.source, &spec, args.input.n)?;
    match args.input.output {
        OutputFormat::Tsv => {
            let mut out = String::from("contrast\tn\th_before\th_after\tfl\ttotal\tdistinct\n");
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
                report.contrast,
                report.n,
                num(report.h_before),
                num(report.h_after),
                num(report.fl),
                num(report.total_before),
                report.distinct_before,
            ));
            Ok(out)
        }
        OutputFormat::Json => Ok(render_json(
            meta(
                "fl",
                vec![
                    ("schema", json!(args.input.schema.display().to_string())),
                    ("corpus", json!(args.input.corpus.display().to_string())),
                    ("contrast", json!(args.contrast.display().to_string())),
                    ("type", json!(loaded.effective_type)),
                    ("n", json!(args.input.n)),
                ],
            ),
            json!([{
                "contrast": report.contrast,
                "n": report.n,
                "h_before": jnum(report.h_before),
                "h_after": jnum(report.h_after),
                "fl": jnum(report.fl),
                "total": jnum(report.total_before),
                "distinct": report.distinct_before,
            }]),
        )),
    }
}

fn matrix_rows(matrix: &FlMatrix) -> Result<Vec<(String, String, f64, f64)>> {
    let mut rows = Vec::with_capacity(matrix.entries.len());
    for ((x, y), fl) in &matrix.entries {
        let rank = rank_entry(matrix, x, y)?;
        rows.push((x.clone(), y.clone(), *fl, rank));
    }
    Ok(rows)
}

fn cmd_fl_matrix(args: FlMatrixArgs) -> Result<String> {
    let loaded = args.input.load()?;
    let pair_type = resolve_pair_type(&loaded.schema, &args.pair_type, &loaded.effective_type)?;
    let phi0: Vec<String> = args.pairs.split_whitespace().map(|s| s.to_string()).collect();
    let matrix = fl_matrix(&loaded.source, &pair_type, &phi0, args.input.n)?;
    let rows = matrix_rows(&matrix)?;
    match args.input.output {
        OutputFormat::Tsv => {
            let mut out = String::from("x\ty\tfl\trank\n");
            for (x, y, fl, rank) in rows {
                out.push_str(&format!("{x}\t{y}\t{}\t{}\n", num(fl), num(rank)));
            }
            Ok(out)
        }
        OutputFormat::Json => Ok(render_json(
            meta(
                "fl-matrix",
                vec![
                    ("schema", json!(args.input.schema.display().to_string())),
                    ("corpus", json!(args.input.corpus.display().to_string())),
                    ("type", json!(loaded.effective_type)),
                    ("pair_type", json!(pair_type)),
                    ("n", json!(args.input.n)),
                ],
            ),
            json!(rows
                .iter()
                .map(|(x, y, fl, rank)| json!({
                    "x": x, "y": y, "fl": jnum(*fl), "rank": jnum(*rank)
                }))
                .collect::<Vec<_>>()),
        )),
    }
}

fn cmd_cohorts(args: CohortArgs) -> Result<String> {
    if args.input.corpus_format != CorpusFormat::Lexicon {
        return Err(Error::invalid("cohorts requires --corpus-format lexicon"));
    }
    let loaded = args.input.load()?;
    let spec = load_contrast(&args.contrast, loaded.schema.clone(), &loaded.effective_type)?;
    let lexicon = match &loaded.source {
        CorpusSource::Lexicon(l) => l,
        _ => unreachable!(),
    };
    let r = cohort_analysis(lexicon, &spec)?;
    match args.input.output {
        OutputFormat::Tsv => {
            let mut out = String::from(
                "cohorts\tshipman\thuttenlocher\tcarter\th_w\th_wtheta\tpie\n",
            );
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
                r.cohort_count,
                num(r.shipman_avg_size),
                num(r.huttenlocher_expected_size),
                num(r.carter_expected_entropy),
                num(r.h_w),
                num(r.h_wtheta),
                num(r.pie),
            ));
            Ok(out)
        }
        OutputFormat::Json => Ok(render_json(
            meta(
                "cohorts",
                vec![
                    ("schema", json!(args.input.schema.display().to_string())),
                    ("corpus", json!(args.input.corpus.display().to_string())),
                    ("contrast", json!(args.contrast.display().to_string())),
                    ("type", json!(loaded.effective_type)),
                ],
            ),
            json!([{
                "cohorts": r.cohort_count,
                "shipman": jnum(r.shipman_avg_size),
                "huttenlocher": jnum(r.huttenlocher_expected_size),
                "carter": jnum(r.carter_expected_entropy),
                "h_w": jnum(r.h_w),
                "h_wtheta": jnum(r.h_wtheta),
                "pie": jnum(r.pie),
            }]),
        )),
    }
}

/// Reads the pair -> fl mapping back out of an fl-matrix TSV report.
fn read_matrix_report(path: &Path) -> Result<BTreeMap<(String, String), f64>> {
    let text = read_file(path)?;
    let mut out = BTreeMap::new();
    for (idx, line) in text.lines().enumerate() {
        if idx == 0 {
            if !line.starts_with("x\ty\tfl") {
                return Err(Error::parse(
                    1,
                    format!("{}: not an fl-matrix TSV report", path.display()),
                ));
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() < 3 {
            return Err(Error::parse(idx + 1, format!("{}: short row", path.display())));
        }
        let fl: f64 = fields[2]
            .parse()
            .map_err(|_| Error::parse(idx + 1, format!("bad fl value `{}`", fields[2])))?;
        out.insert((fields[0].to_string(), fields[1].to_string()), fl);
    }
    Ok(out)
}

fn cmd_alpha(args: AlphaArgs) -> Result<String> {
    let left = read_matrix_report(&args.reports[0])?;
    let right = read_matrix_report(&args.reports[1])?;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (pair, x) in &left {
        match right.get(pair) {
            Some(y) => {
                xs.push(*x);
                ys.push(*y);
            }
            None => {
                return Err(Error::invalid(format!(
                    "pair ({}, {}) missing from {}",
                    pair.0,
                    pair.1,
                    args.reports[1].display()
                )))
            }
        }
    }
    for pair in right.keys() {
        if !left.contains_key(pair) {
            return Err(Error::invalid(format!(
                "pair ({}, {}) missing from {}",
                pair.0,
                pair.1,
                args.reports[0].display()
            )));
        }
    }
    let alpha = consistency_alpha(&xs, &ys)?;
    let consistent = alpha > args.threshold;
    match args.output {
        OutputFormat::Tsv => Ok(format!(
            "alpha\tpairs\tthreshold\tconsistent\n{}\t{}\t{}\t{}\n",
            num(alpha),
            xs.len(),
            num(args.threshold),
            consistent,
        )),
        OutputFormat::Json => Ok(render_json(
            meta(
                "alpha",
                vec![
                    ("left", json!(args.reports[0].display().to_string())),
                    ("right", json!(args.reports[1].display().to_string())),
                ],
            ),
            json!([{
                "alpha": jnum(alpha),
                "pairs": xs.len(),
                "threshold": jnum(args.threshold),
                "consistent": consistent,
            }]),
        )),
    }
}

fn cmd_phoneme_fl(args: PhonemeFlArgs) -> Result<String> {
    let loaded = args.input.load()?;
    let pair_type = resolve_pair_type(&loaded.schema, &args.pair_type, &loaded.effective_type)?;
    let model = parse_similarity(&read_file(&args.similar)?, &pair_type)
        .map_err(|e| locate(e, &args.similar))?;
    let phonemes: Vec<String> = match &args.phoneme {
        Some(x) => vec![x.clone()],
        None => model.similar.keys().cloned().collect(),
    };
    let mut reports = Vec::new();
    for x in &phonemes {
        reports.push(single_phoneme_fl(&loaded.source, x, &model, args.input.n)?);
    }
    match args.input.output {
        OutputFormat::Tsv => {
            let mut out = String::from("phoneme\ty\tp\tfl_pair\tfl\n");
            for r in &reports {
                if r.breakdown.is_empty() {
                    out.push_str(&format!("{}\t-\t-\t-\t{}\n", r.phoneme, num(r.fl)));
                }
                for (y, p, pair_fl) in &r.breakdown {
                    out.push_str(&format!(
                        "{}\t{y}\t{}\t{}\t{}\n",
                        r.phoneme,
                        num(*p),
                        num(*pair_fl),
                        num(r.fl),
                    ));
                }
            }
            Ok(out)
        }
        OutputFormat::Json => Ok(render_json(
            meta(
                "phoneme-fl",
                vec![
                    ("schema", json!(args.input.schema.display().to_string())),
                    ("corpus", json!(args.input.corpus.display().to_string())),
                    ("similar", json!(args.similar.display().to_string())),
                    ("type", json!(loaded.effective_type)),
                    ("pair_type", json!(pair_type)),
                    ("n", json!(args.input.n)),
                ],
            ),
            json!(reports
                .iter()
                .map(|r| json!({
                    "phoneme": r.phoneme,
                    "fl": jnum(r.fl),
                    "empty_similarity_set": r.empty_similarity_set,
                    "breakdown": r.breakdown.iter().map(|(y, p, f)| json!({
                        "y": y, "p": jnum(*p), "fl_pair": jnum(*f)
                    })).collect::<Vec<_>>(),
                }))
                .collect::<Vec<_>>()),
        )),
    }
}

fn cmd_validate(args: ValidateArgs) -> Result<String> {
    let mut out = String::new();
    let schema = Arc::new(parse_schema(&read_file(&args.schema)?).map_err(|e| locate(e, &args.schema))?);
    out.push_str(&format!(
        "ok\tschema\t{}\t{} type(s)\n",
        args.schema.display(),
        schema.type_names().count()
    ));
    let object_type = match (&args.corpus, &args.contrast) {
        (None, None) => None,
        _ => Some(args.object_type.clone().ok_or_else(|| {
            Error::invalid("--type is required to validate a corpus or contrast")
        })?),
    };
    if let Some(corpus_path) = &args.corpus {
        let object_type = object_type.as_ref().unwrap();
        let text = read_file(corpus_path)?;
        match args.corpus_format {
            CorpusFormat::Stream => {
                let corpus = parse_token_stream(&text, schema.clone(), object_type)
                    .map_err(|e| locate(e, corpus_path))?;
                out.push_str(&format!(
                    "ok\tcorpus\t{}\t{} utterance(s), {} object(s)\n",
                    corpus_path.display(),
                    corpus.utterances.len(),
                    corpus.n_objects()
                ));
            }
            CorpusFormat::Lexicon => {
                let lexicon = parse_weighted_lexicon(&text, schema.clone(), object_type)
                    .map_err(|e| locate(e, corpus_path))?;
                out.push_str(&format!(
                    "ok\tlexicon\t{}\t{} entrie(s)\n",
                    corpus_path.display(),
                    lexicon.len()
                ));
            }
        }
    }
    if let Some(contrast_path) = &args.contrast {
        let object_type = object_type.as_ref().unwrap();
        let spec = load_contrast(contrast_path, schema, object_type)?;
        out.push_str(&format!(
            "ok\tcontrast\t{}\t{} rule(s)\n",
            contrast_path.display(),
            spec.rules.len()
        ));
    }
    Ok(out)
}
