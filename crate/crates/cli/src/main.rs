//! `verseforge`: corpus statistics, tokenizer and language-model training,
//! strophe generation, evaluation and significance testing.

mod config;
mod errors;

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use verseforge::corpus::{self, bucketize_year, MeterLabel, RhymeScheme, Strophe, YearBucket};
use verseforge::formats::{self, DataFormat};
use verseforge::generation::{self, Decoding, GeneratedStrophe, GenerationRequest};
use verseforge::language_model::{self, NGramModel, DEFAULT_DISCOUNT};
use verseforge::phonology::Phonology;
use verseforge::tokenizers::{annotation_tokens, Tokenizer, TokenizerKind, Vocab, DEFAULT_BPE_VOCAB};
use verseforge::validation::{self, EvalItem, MetricsReport, StropheScore, DEFAULT_METER_THRESHOLD};

use config::RunConfig;
use errors::{existing, CliError};

const SCHEMA_HELP: &str = "\
CORPUS SCHEMA (JSONL, one poem per line):
  {\"year\": 1893 | null,
   \"strophes\": [[{\"text\": \"...\", \"rhyme\": 3 | null, \"meter\": \"J\"}, ...], ...]}
  Strophes have 4 or 6 verses. Meter is one of J T D A X Y H P N.
  Rhyme groups are renumbered per strophe; a group seen once becomes X.
  Years fall into 20-year buckets (1893 -> 1880); null becomes NaN.

TEXT FORMATS (field separator \" # \"):
  basic        # ABAB # 1900 # J
               Tvá loď jde po vysokém moři,
  verse_par    # ABAB # 1900 # J
               9 # oři # Tvá loď jde po vysokém moři,
  meter_verse  # ABAB # 1900
               J # 9 # oři # Tvá loď jde po vysokém moři,
  Generated text on stdout starts with the line `# machine-generated`.

EXIT CODES:
  0 success, 1 other failure, 2 usage error, 3 missing input file,
  4 schema or format mismatch in an input file.";

#[derive(Parser)]
#[command(name = "verseforge", version, about = "Structured strophe generation and evaluation", after_long_help = SCHEMA_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a corpus and write its statistics as JSON.
    Ingest(IngestArgs),
    /// Print scheme, meter and year distributions.
    Stats(StatsArgs),
    /// Build or train a tokenizer vocabulary on the training split.
    TrainTokenizer(TrainTokenizerArgs),
    /// Train an n-gram language model on the training split.
    TrainLm(TrainLmArgs),
    /// Generate strophes with basic or forced decoding.
    Generate(GenerateArgs),
    /// Score generated (or gold) strophes.
    Evaluate(EvaluateArgs),
    /// Paired permutation test between two per-strophe score files.
    Significance(SignificanceArgs),
}

#[derive(Args)]
struct CorpusArgs {
    #[arg(long)]
    corpus: PathBuf,
    /// Drop strophes whose scheme occurs fewer times than this.
    #[arg(long, default_value_t = 0)]
    min_scheme_count: usize,
}

#[derive(Args)]
struct SplitArgs {
    #[arg(long, default_value_t = 0.05)]
    test_fraction: f64,
    /// Seeds the train/test split and every sampler.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct IngestArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    #[arg(long)]
    stats_out: Option<PathBuf>,
}

#[derive(Args)]
struct StatsArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    #[arg(long, default_value_t = 10)]
    top: usize,
}

#[derive(Args)]
struct TrainTokenizerArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    #[command(flatten)]
    split: SplitArgs,
    #[arg(long)]
    kind: TokenizerKind,
    #[arg(long, default_value = "meter_verse")]
    format: DataFormat,
    /// Target size for BPE vocabularies.
    #[arg(long, default_value_t = DEFAULT_BPE_VOCAB)]
    vocab_size: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct TrainLmArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    #[command(flatten)]
    split: SplitArgs,
    #[arg(long)]
    vocab: PathBuf,
    #[arg(long, default_value = "meter_verse")]
    format: DataFormat,
    /// Defaults to 8 for unicode, 4 for syllable, 3 for BPE vocabularies.
    #[arg(long)]
    order: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_DISCOUNT)]
    discount: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    vocab: PathBuf,
    #[arg(long, default_value = "meter_verse")]
    format: DataFormat,
    #[arg(long, default_value = "forced")]
    decoding: Decoding,
    #[arg(long)]
    scheme: Option<String>,
    /// A year (bucketed) or NaN.
    #[arg(long, default_value = "NaN")]
    year: String,
    /// Comma-separated verse meters, e.g. J,J,J,J.
    #[arg(long, value_delimiter = ',')]
    meters: Option<Vec<MeterLabel>>,
    /// Header meter for basic and verse_par; defaults to the modal verse meter.
    #[arg(long)]
    strophe_meter: Option<MeterLabel>,
    #[arg(long, default_value_t = generation::DEFAULT_TEMPERATURE)]
    temperature: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = generation::DEFAULT_MAX_TOKENS)]
    max_tokens: usize,
    /// Batch mode: JSONL of generation requests.
    #[arg(long, conflicts_with_all = ["scheme", "from_corpus"])]
    requests: Option<PathBuf>,
    /// Batch mode: draw requests from the test split of this corpus.
    #[arg(long, conflicts_with = "scheme")]
    from_corpus: Option<PathBuf>,
    #[arg(long, default_value_t = 100)]
    count: usize,
    #[arg(long, default_value_t = 0.05)]
    test_fraction: f64,
    /// Batch output (JSONL). Required in batch mode.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvaluateArgs {
    /// JSONL written by `generate --out`.
    #[arg(long, conflicts_with = "gold", required_unless_present = "gold")]
    input: Option<PathBuf>,
    /// Score the corpus itself, re-emitted in `--format`.
    #[arg(long)]
    gold: Option<PathBuf>,
    #[arg(long, default_value = "meter_verse")]
    format: DataFormat,
    #[arg(long, default_value_t = DEFAULT_METER_THRESHOLD)]
    threshold: f64,
    /// Report as JSON.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Per-strophe scores (JSONL) for `significance`.
    #[arg(long)]
    scores_out: Option<PathBuf>,
}

#[derive(Args)]
struct SignificanceArgs {
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    b: PathBuf,
    #[arg(long, default_value = "rhyme")]
    metric: Metric,
    #[arg(long, default_value_t = validation::DEFAULT_REPETITIONS)]
    repetitions: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also enumerate all sign patterns (feasible up to about 24 strophes).
    #[arg(long)]
    exact: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum Metric {
    NumSyl,
    End,
    Unique,
    Rhyme,
    Meter,
    VerseMeter,
}

/// One line of a per-strophe score file. Absent metrics are null.
#[derive(Debug, Serialize, Deserialize)]
struct ScoreRow {
    num_syl: Option<f64>,
    end: Option<f64>,
    unique: Option<f64>,
    rhyme: f64,
    meter: f64,
    verse_meter: f64,
}

impl ScoreRow {
    fn of(s: &StropheScore) -> ScoreRow {
        let frac = |f: &dyn Fn(&validation::VerseScore) -> Option<bool>| {
            let v: Vec<bool> = s.verses.iter().filter_map(f).collect();
            (!v.is_empty()).then(|| v.iter().filter(|&&b| b).count() as f64 / v.len() as f64)
        };
        let flag = |b: bool| if b { 1.0 } else { 0.0 };
        ScoreRow {
            num_syl: frac(&|v| v.syllables_ok),
            end: frac(&|v| v.hint_ok),
            unique: s.unique,
            rhyme: flag(s.rhyme_ok),
            meter: flag(s.meter_ok),
            verse_meter: frac(&|v| Some(v.meter_ok)).unwrap_or(0.0),
        }
    }

    fn get(&self, m: Metric) -> Option<f64> {
        match m {
            Metric::NumSyl => self.num_syl,
            Metric::End => self.end,
            Metric::Unique => self.unique,
            Metric::Rhyme => Some(self.rhyme),
            Metric::Meter => Some(self.meter),
            Metric::VerseMeter => Some(self.verse_meter),
        }
    }
}

/// A line of the batch generation output.
#[derive(Debug, Serialize, Deserialize)]
struct BatchRecord {
    request: GenerationRequest,
    #[serde(flatten)]
    generated: GeneratedStrophe,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => return errors::clap_exit(e),
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let class = errors::classify(&e);
            eprintln!("error[{}]: {}", class.name(), errors::one_line(&e));
            ExitCode::from(class.code())
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Ingest(a) => ingest(a),
        Command::Stats(a) => stats(a),
        Command::TrainTokenizer(a) => train_tokenizer(a),
        Command::TrainLm(a) => train_lm(a),
        Command::Generate(a) => generate(a),
        Command::Evaluate(a) => evaluate(a),
        Command::Significance(a) => significance(a),
    }
}

fn load_corpus(a: &CorpusArgs) -> Result<Vec<Strophe>> {
    let strophes = corpus::ingest(existing(&a.corpus)?).with_context(|| format!("reading {}", a.corpus.display()))?;
    Ok(corpus::filter_rare_schemes(strophes, a.min_scheme_count))
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))
}

fn ingest(a: IngestArgs) -> Result<()> {
    let strophes = load_corpus(&a.corpus)?;
    let st = corpus::stats(&strophes);
    println!(
        "{}: {} poems, {} strophes, {} verses",
        a.corpus.corpus.display(),
        st.poems,
        st.strophes,
        st.verses
    );
    if let Some(out) = &a.stats_out {
        let cfg = RunConfig::new("ingest")
            .corpus(&a.corpus.corpus)
            .output(out)
            .param("min_scheme_count", a.corpus.min_scheme_count);
        write_json(out, &json!({ "config": cfg, "stats": st }))?;
    }
    Ok(())
}

fn stats(a: StatsArgs) -> Result<()> {
    let st = corpus::stats(&load_corpus(&a.corpus)?);
    let pct = |c: usize, n: usize| if n == 0 { 0.0 } else { 100.0 * c as f64 / n as f64 };
    println!("poems {}  strophes {}  verses {}", st.poems, st.strophes, st.verses);
    println!("\nscheme      count      %");
    for (s, c) in st.top_schemes(a.top) {
        println!("{s:<8} {c:>8} {:>6.2}", pct(c, st.strophes));
    }
    println!("\nmeter       count      %");
    for m in MeterLabel::ALL {
        let c = st.meter_counts.get(&m.to_string()).copied().unwrap_or(0);
        println!("{:<8} {c:>8} {:>6.2}", m.to_string(), pct(c, st.verses));
    }
    println!("\nyear        count      %");
    for (y, c) in &st.year_counts {
        println!("{y:<8} {c:>8} {:>6.2}", pct(*c, st.strophes));
    }
    Ok(())
}

fn encode_all(strophes: &[Strophe], format: DataFormat, ph: &Phonology) -> Result<Vec<String>> {
    Ok(strophes
        .iter()
        .map(|s| formats::encode(s, format, ph))
        .collect::<Result<_, _>>()?)
}

fn train_tokenizer(a: TrainTokenizerArgs) -> Result<()> {
    let ph = Phonology::new();
    let strophes = load_corpus(&a.corpus)?;
    let (train, test) = corpus::split(&strophes, a.split.test_fraction, a.split.seed)?;
    let texts = encode_all(&train, a.format, &ph)?;
    let annotations = annotation_tokens(train.iter().map(|s| &s.scheme), train.iter().map(|s| s.year));
    let mut vocab = match a.kind {
        TokenizerKind::Unicode => Vocab::build_unicode(&texts)?,
        TokenizerKind::Syllable => Vocab::build_syllable(&texts, &ph, &annotations)?,
        TokenizerKind::Our => Vocab::train_bpe(TokenizerKind::Our, &texts, a.vocab_size, &annotations)?,
        TokenizerKind::Base => {
            // Stand-in for a general-purpose vocabulary: plain verse text only,
            // no annotation tokens.
            let plain: Vec<&str> = train
                .iter()
                .flat_map(|s| s.verses.iter().map(|v| v.text.as_str()))
                .collect();
            Vocab::train_bpe(TokenizerKind::Base, &plain, a.vocab_size, &[])?
        }
    };
    let cfg = RunConfig::new("train-tokenizer")
        .corpus(&a.corpus.corpus)
        .output(&a.out)
        .format(a.format)
        .tokenizer(a.kind)
        .seed(a.split.seed)
        .param("vocab_size", a.vocab_size)
        .param("test_fraction", a.split.test_fraction)
        .param("min_scheme_count", a.corpus.min_scheme_count);
    vocab.config = Some(cfg.to_line());
    vocab
        .save(&a.out)
        .with_context(|| format!("writing {}", a.out.display()))?;
    let tok = Tokenizer::new(vocab);
    let sample = if test.is_empty() {
        texts
    } else {
        encode_all(&test, a.format, &ph)?
    };
    println!(
        "{} vocabulary: {} tokens, {:.3} chars/token on held-out text",
        a.kind,
        tok.vocab().len(),
        tok.chars_per_token(&sample)?
    );
    Ok(())
}

fn load_vocab(path: &Path) -> Result<Vocab> {
    Vocab::load(existing(path)?).with_context(|| format!("reading {}", path.display()))
}

fn train_lm(a: TrainLmArgs) -> Result<()> {
    let ph = Phonology::new();
    let vocab = load_vocab(&a.vocab)?;
    let strophes = load_corpus(&a.corpus)?;
    let (train, test) = corpus::split(&strophes, a.split.test_fraction, a.split.seed)?;
    let tok = Tokenizer::new(vocab);
    let order = a.order.unwrap_or_else(|| language_model::default_order(tok.kind()));
    let seqs = language_model::training_sequences(&train, a.format, &tok, &ph)?;
    let mut model = NGramModel::train(&seqs, order, a.discount, tok.vocab())?;
    let cfg = RunConfig::new("train-lm")
        .corpus(&a.corpus.corpus)
        .vocab(&a.vocab)
        .output(&a.out)
        .format(a.format)
        .tokenizer(tok.kind())
        .seed(a.split.seed)
        .param("order", order)
        .param("discount", a.discount)
        .param("test_fraction", a.split.test_fraction)
        .param("min_scheme_count", a.corpus.min_scheme_count);
    model.config = Some(cfg.to_line());
    model
        .save(&a.out)
        .with_context(|| format!("writing {}", a.out.display()))?;
    print!("order-{order} {} model on {} strophes", tok.kind(), train.len());
    if !test.is_empty() {
        let held = language_model::training_sequences(&test, a.format, &tok, &ph)?;
        print!(", held-out perplexity {:.3}", model.perplexity(&held));
    }
    println!();
    Ok(())
}

fn parse_year(s: &str) -> Result<YearBucket> {
    if s.eq_ignore_ascii_case("nan") {
        return Ok(YearBucket::NaN);
    }
    let y: i32 = s
        .parse()
        .map_err(|_| CliError::Usage(format!("--year expects a year or NaN, got {s:?}")))?;
    Ok(bucketize_year(Some(y)))
}

fn generate(a: GenerateArgs) -> Result<()> {
    let vocab = load_vocab(&a.vocab)?;
    let model =
        NGramModel::load(existing(&a.model)?, &vocab).with_context(|| format!("reading {}", a.model.display()))?;
    let tok = Tokenizer::new(vocab);
    let mut cfg = RunConfig::new("generate")
        .vocab(&a.vocab)
        .model(&a.model)
        .format(a.format)
        .tokenizer(tok.kind())
        .decoding(a.decoding)
        .temperature(a.temperature)
        .seed(a.seed)
        .param("max_tokens", a.max_tokens);

    let batch = match (&a.requests, &a.from_corpus) {
        (Some(path), _) => {
            cfg = cfg.param("requests", path.display().to_string());
            Some(read_requests(path, &a)?)
        }
        (None, Some(path)) => {
            cfg = cfg
                .corpus(path)
                .param("count", a.count)
                .param("test_fraction", a.test_fraction);
            Some(corpus_requests(path, &a)?)
        }
        (None, None) => None,
    };

    let Some(requests) = batch else {
        let Some(scheme) = &a.scheme else {
            bail!(CliError::Usage("give --scheme, --requests or --from-corpus".into()));
        };
        let mut req = GenerationRequest::new(
            scheme
                .parse::<RhymeScheme>()
                .map_err(|e| CliError::Usage(e.to_string()))?,
            parse_year(&a.year)?,
            a.format,
        );
        req.verse_meters = a.meters.clone();
        req.strophe_meter = a.strophe_meter;
        req.temperature = a.temperature;
        req.seed = a.seed;
        req.max_tokens = a.max_tokens;
        let g = generation::generate(&model, &tok, &req, a.decoding)?;
        // stdout must stay parseable, so the config goes to stderr.
        eprintln!(
            "config {}",
            cfg.param("scheme", scheme.as_str())
                .param("year", a.year.as_str())
                .param(
                    "meters",
                    a.meters
                        .as_ref()
                        .map(|m| m.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
                )
                .param("strophe_meter", a.strophe_meter.map(|m| m.to_string()))
                .to_line()
        );
        print!("{}", g.labeled());
        if !g.raw_text.ends_with('\n') {
            println!();
        }
        if let Some(e) = &g.parse_error {
            eprintln!("warning: output does not parse: {e}");
        }
        return Ok(());
    };

    let Some(out) = &a.out else {
        bail!(CliError::Usage("batch generation needs --out".into()));
    };
    cfg = cfg.output(out);
    let mut w = BufWriter::new(File::create(out).with_context(|| format!("writing {}", out.display()))?);
    writeln!(w, "{}", json!({ "config": cfg }))?;
    let (mut parsed, n) = (0, requests.len());
    for request in requests {
        let generated = generation::generate(&model, &tok, &request, a.decoding)?;
        parsed += generated.parsed.is_some() as usize;
        writeln!(w, "{}", serde_json::to_string(&BatchRecord { request, generated })?)?;
    }
    w.flush()?;
    println!("{}", formats::MACHINE_LABEL);
    println!("wrote {n} strophes to {} ({parsed} parse)", out.display());
    Ok(())
}

/// Requests from a JSONL file; lines without a seed get `--seed + index`.
fn read_requests(path: &Path, a: &GenerateArgs) -> Result<Vec<GenerationRequest>> {
    let file = File::open(existing(path)?)?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let v: Value =
            serde_json::from_str(&line).map_err(|e| CliError::Schema(format!("{}:{}: {e}", path.display(), i + 1)))?;
        let has_seed = v.get("seed").is_some();
        let mut req: GenerationRequest =
            serde_json::from_value(v).map_err(|e| CliError::Schema(format!("{}:{}: {e}", path.display(), i + 1)))?;
        if !has_seed {
            req.seed = a.seed.wrapping_add(out.len() as u64);
        }
        out.push(req);
    }
    Ok(out)
}

/// The first `count` test-split strophes become requests carrying their
/// scheme, year and verse meters.
fn corpus_requests(path: &Path, a: &GenerateArgs) -> Result<Vec<GenerationRequest>> {
    let strophes = corpus::ingest(existing(path)?).with_context(|| format!("reading {}", path.display()))?;
    let (_, test) = corpus::split(&strophes, a.test_fraction, a.seed)?;
    Ok(test
        .iter()
        .take(a.count)
        .enumerate()
        .map(|(i, s)| {
            let mut r = GenerationRequest::new(s.scheme.clone(), s.year, a.format);
            r.verse_meters = Some(s.meters());
            r.temperature = a.temperature;
            r.max_tokens = a.max_tokens;
            r.seed = a.seed.wrapping_add(i as u64);
            r
        })
        .collect())
}

fn read_batch(path: &Path) -> Result<Vec<EvalItem>> {
    let file = File::open(existing(path)?)?;
    let mut items = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let schema = |e: serde_json::Error| CliError::Schema(format!("{}:{}: {e}", path.display(), i + 1));
        let v: Value = serde_json::from_str(&line).map_err(schema)?;
        if v.get("config").is_some() {
            continue;
        }
        let r: BatchRecord = serde_json::from_value(v).map_err(schema)?;
        items.push(EvalItem {
            scheme: r.request.scheme,
            format: r.request.format,
            text: r.generated.raw_text,
        });
    }
    Ok(items)
}

fn evaluate(a: EvaluateArgs) -> Result<()> {
    let ph = Phonology::new();
    let mut cfg = RunConfig::new("evaluate").param("threshold", a.threshold);
    let items = if let Some(input) = &a.input {
        cfg = cfg.param("input", input.display().to_string());
        read_batch(input)?
    } else {
        let gold = a.gold.as_ref().expect("clap requires --input or --gold");
        cfg = cfg.corpus(gold).format(a.format);
        let strophes = corpus::ingest(existing(gold)?).with_context(|| format!("reading {}", gold.display()))?;
        let texts = encode_all(&strophes, a.format, &ph)?;
        strophes
            .iter()
            .zip(texts)
            .map(|(s, text)| EvalItem {
                scheme: s.scheme.clone(),
                format: a.format,
                text,
            })
            .collect()
    };
    let scores: Vec<StropheScore> = items
        .iter()
        .map(|it| validation::score_item(it, &ph, a.threshold))
        .collect();
    let report = MetricsReport::from_scores(&scores);
    print!("{}", report.to_text());
    if let Some(out) = &a.out {
        write_json(out, &json!({ "config": cfg.clone().output(out), "report": report }))?;
    }
    if let Some(out) = &a.scores_out {
        let mut w = BufWriter::new(File::create(out).with_context(|| format!("writing {}", out.display()))?);
        writeln!(w, "{}", json!({ "config": cfg.output(out) }))?;
        for s in &scores {
            writeln!(w, "{}", serde_json::to_string(&ScoreRow::of(s))?)?;
        }
        w.flush()?;
    }
    Ok(())
}

fn read_scores(path: &Path, metric: Metric) -> Result<Vec<f64>> {
    let file = File::open(existing(path)?)?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let schema = |e: serde_json::Error| CliError::Schema(format!("{}:{}: {e}", path.display(), i + 1));
        let v: Value = serde_json::from_str(&line).map_err(schema)?;
        if v.get("config").is_some() {
            continue;
        }
        let row: ScoreRow = serde_json::from_value(v).map_err(schema)?;
        // An unparsed strophe has no unique ratio; it counts as zero.
        let value = match row.get(metric) {
            Some(x) => x,
            None if metric == Metric::Unique => 0.0,
            None => bail!(CliError::Schema(format!(
                "{}:{}: metric {metric:?} is absent for this format",
                path.display(),
                i + 1
            ))),
        };
        out.push(value);
    }
    Ok(out)
}

fn significance(a: SignificanceArgs) -> Result<()> {
    let x = read_scores(&a.a, a.metric)?;
    let y = read_scores(&a.b, a.metric)?;
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len().max(1) as f64;
    let p = validation::permutation_test(&x, &y, a.repetitions, a.seed)?;
    let mut result: BTreeMap<&str, Value> = BTreeMap::new();
    result.insert("metric", json!(a.metric));
    result.insert("n", json!(x.len()));
    result.insert("mean_a", json!(mean(&x)));
    result.insert("mean_b", json!(mean(&y)));
    result.insert("repetitions", json!(a.repetitions));
    result.insert("seed", json!(a.seed));
    result.insert("p", json!(p));
    if a.exact {
        if x.len() > 24 {
            bail!(CliError::Usage(format!(
                "--exact enumerates 2^n patterns; n = {} is too large",
                x.len()
            )));
        }
        result.insert("p_exact", json!(validation::exact_permutation_p(&x, &y)?));
    }
    println!("{}", serde_json::to_string(&result)?);
    Ok(())
}
