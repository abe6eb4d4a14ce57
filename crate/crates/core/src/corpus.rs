//! Annotated corpus ingestion: rhyme-scheme derivation, year buckets,
//! train/test splitting and distribution statistics.
//!
//! The corpus file is line-delimited JSON, one poem per line:
//!
//! ```text
//! {"year": 1900, "strophes": [[{"text": "...", "rhyme": 1, "meter": "J"}, ...], ...]}
//! ```
//!
//! `year` may be `null`, `rhyme` may be `null` (non-rhyming verse), and
//! `meter` is one of the letters `J T D A X Y H P N`. Blank lines are skipped.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::fs::File;
use std::hash::Hash;
use std::io::{BufRead, BufReader};
use std::path::Path;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("unsupported strophe length {0} (expected 4 or 6)")]
    UnsupportedLength(usize),
    #[error("unknown meter label {0:?}")]
    UnknownMeter(String),
    #[error("invalid rhyme scheme {scheme:?}: {reason}")]
    InvalidScheme { scheme: String, reason: &'static str },
    #[error("record {record}: {source}")]
    Record {
        record: usize,
        #[source]
        source: Box<CorpusError>,
    },
    #[error("record {record}: malformed JSON: {message}")]
    Json { record: usize, message: String },
    #[error("field `{field}`: {reason}")]
    Invariant { field: &'static str, reason: String },
    #[error("test fraction must lie strictly between 0 and 1, got {0}")]
    BadFraction(f64),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Verse meter labels, declared in dataset-frequency order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum MeterLabel {
    /// J: unstressed-stressed feet.
    Iamb,
    /// T: stressed-unstressed feet.
    Trochee,
    /// D: stressed-unstressed-unstressed feet.
    Dactyl,
    /// A: unstressed-stressed-unstressed feet.
    Amphibrach,
    /// X: free mix of dactylic and trochaic feet.
    Dactylotrochee,
    /// Y: dactylotrochee preceded by unstressed anacrusis.
    DactylotrocheeAnacrusis,
    /// H: six dactylic feet, fifth a dactyl, sixth a trochee.
    Hexameter,
    /// P: five-part dactylic line with incomplete third and sixth parts.
    Pentameter,
    /// N: free verse or anything not recognized.
    NotRecognized,
}

impl MeterLabel {
    /// All labels, in the tie-break (dataset frequency) order.
    pub const ALL: [MeterLabel; 9] = [
        MeterLabel::Iamb,
        MeterLabel::Trochee,
        MeterLabel::Dactyl,
        MeterLabel::Amphibrach,
        MeterLabel::Dactylotrochee,
        MeterLabel::DactylotrocheeAnacrusis,
        MeterLabel::Hexameter,
        MeterLabel::Pentameter,
        MeterLabel::NotRecognized,
    ];

    pub fn letter(self) -> char {
        match self {
            MeterLabel::Iamb => 'J',
            MeterLabel::Trochee => 'T',
            MeterLabel::Dactyl => 'D',
            MeterLabel::Amphibrach => 'A',
            MeterLabel::Dactylotrochee => 'X',
            MeterLabel::DactylotrocheeAnacrusis => 'Y',
            MeterLabel::Hexameter => 'H',
            MeterLabel::Pentameter => 'P',
            MeterLabel::NotRecognized => 'N',
        }
    }

    pub fn from_letter(c: char) -> Option<MeterLabel> {
        MeterLabel::ALL.into_iter().find(|m| m.letter() == c)
    }
}

impl fmt::Display for MeterLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl FromStr for MeterLabel {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut chars = s.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) => MeterLabel::from_letter(c).ok_or_else(|| CorpusError::UnknownMeter(s.to_string())),
            _ => Err(CorpusError::UnknownMeter(s.to_string())),
        }
    }
}

impl TryFrom<String> for MeterLabel {
    type Error = CorpusError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<MeterLabel> for String {
    fn from(m: MeterLabel) -> String {
        m.letter().to_string()
    }
}

/// Marker letter for a verse that rhymes with nothing else in its strophe.
pub const NON_RHYMING: char = 'X';

/// Canonically labelled rhyme scheme of a 4- or 6-verse strophe.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct RhymeScheme(String);

impl RhymeScheme {
    /// Validates length and canonical labelling.
    pub fn new(letters: &str) -> Result<RhymeScheme, CorpusError> {
        let invalid = |reason| CorpusError::InvalidScheme {
            scheme: letters.to_string(),
            reason,
        };
        let chars: Vec<char> = letters.chars().collect();
        if chars.len() != 4 && chars.len() != 6 {
            return Err(CorpusError::UnsupportedLength(chars.len()));
        }
        let mut next = 'A';
        let mut counts: HashMap<char, usize> = HashMap::new();
        for &c in &chars {
            if c == NON_RHYMING {
                continue;
            }
            if !c.is_ascii_uppercase() || c > 'W' {
                return Err(invalid("letters must be A..W or X"));
            }
            if c > next {
                return Err(invalid("rhyme groups must be lettered in first-occurrence order"));
            }
            if c == next {
                next = (next as u8 + 1) as char;
            }
            *counts.entry(c).or_default() += 1;
        }
        if counts.values().any(|&n| n < 2) {
            return Err(invalid("every rhyme letter must occur at least twice"));
        }
        Ok(RhymeScheme(letters.to_string()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn letters(&self) -> impl Iterator<Item = char> + '_ {
        self.0.chars()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letter_at(&self, i: usize) -> char {
        self.0.as_bytes()[i] as char
    }
}

impl fmt::Display for RhymeScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for RhymeScheme {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RhymeScheme::new(s)
    }
}

impl TryFrom<String> for RhymeScheme {
    type Error = CorpusError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        RhymeScheme::new(&s)
    }
}

impl From<RhymeScheme> for String {
    fn from(s: RhymeScheme) -> String {
        s.0
    }
}

/// Relabels per-verse rhyme-group ids into a canonical scheme.
///
/// Groups are lettered in first-occurrence order. Verses without a group,
/// or whose group occurs only once in the strophe, become `X`.
pub fn derive_rhyme_scheme<T: Eq + Hash>(groups: &[Option<T>]) -> Result<RhymeScheme, CorpusError> {
    if groups.len() != 4 && groups.len() != 6 {
        return Err(CorpusError::UnsupportedLength(groups.len()));
    }
    let mut occurrences: HashMap<&T, usize> = HashMap::new();
    for g in groups.iter().flatten() {
        *occurrences.entry(g).or_default() += 1;
    }
    let mut letter_of: HashMap<&T, char> = HashMap::new();
    let mut next = b'A';
    let letters: String = groups
        .iter()
        .map(|g| match g {
            Some(g) if occurrences[g] >= 2 => *letter_of.entry(g).or_insert_with(|| {
                let c = next as char;
                next += 1;
                c
            }),
            _ => NON_RHYMING,
        })
        .collect();
    Ok(RhymeScheme(letters))
}

/// A 20-year publication period, labelled by its first year.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum YearBucket {
    Start(i32),
    NaN,
}

pub const YEAR_BUCKET_WIDTH: i32 = 20;

/// Maps a publication year onto its bucket; `None` becomes `NaN`.
pub fn bucketize_year(year: Option<i32>) -> YearBucket {
    match year {
        None => YearBucket::NaN,
        Some(y) => YearBucket::Start(y.div_euclid(YEAR_BUCKET_WIDTH) * YEAR_BUCKET_WIDTH),
    }
}

impl fmt::Display for YearBucket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            YearBucket::Start(y) => write!(f, "{y}"),
            YearBucket::NaN => f.write_str("NaN"),
        }
    }
}

impl FromStr for YearBucket {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "NaN" {
            return Ok(YearBucket::NaN);
        }
        let y: i32 = s.parse().map_err(|_| CorpusError::Invariant {
            field: "year",
            reason: format!("{s:?} is neither a year nor NaN"),
        })?;
        if y.rem_euclid(YEAR_BUCKET_WIDTH) != 0 {
            return Err(CorpusError::Invariant {
                field: "year",
                reason: format!("{y} is not a bucket start"),
            });
        }
        Ok(YearBucket::Start(y))
    }
}

impl TryFrom<String> for YearBucket {
    type Error = CorpusError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<YearBucket> for String {
    fn from(y: YearBucket) -> String {
        y.to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verse {
    pub text: String,
    pub rhyme_group: Option<i64>,
    pub meter: MeterLabel,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Strophe {
    pub verses: Vec<Verse>,
    pub scheme: RhymeScheme,
    pub year: YearBucket,
    /// Index of the poem record this strophe came from.
    pub poem: usize,
}

impl Strophe {
    /// Builds a strophe, deriving the scheme from the verses' rhyme groups.
    pub fn new(verses: Vec<Verse>, year: YearBucket, poem: usize) -> Result<Strophe, CorpusError> {
        for v in &verses {
            if v.text.trim().is_empty() {
                return Err(CorpusError::Invariant {
                    field: "text",
                    reason: "verse text is empty".into(),
                });
            }
        }
        let groups: Vec<Option<i64>> = verses.iter().map(|v| v.rhyme_group).collect();
        let scheme = derive_rhyme_scheme(&groups)?;
        Ok(Strophe {
            verses,
            scheme,
            year,
            poem,
        })
    }

    pub fn meters(&self) -> Vec<MeterLabel> {
        self.verses.iter().map(|v| v.meter).collect()
    }
}

#[derive(Deserialize)]
struct PoemRecord {
    year: Option<i32>,
    strophes: Vec<Vec<VerseRecord>>,
}

#[derive(Deserialize)]
struct VerseRecord {
    text: String,
    rhyme: Option<i64>,
    meter: String,
}

/// Reads a corpus file.
pub fn ingest(path: impl AsRef<Path>) -> Result<Vec<Strophe>, CorpusError> {
    ingest_reader(BufReader::new(File::open(path)?))
}

/// Reads corpus records from any buffered reader. Record numbers in errors
/// are 1-based line numbers.
pub fn ingest_reader(reader: impl BufRead) -> Result<Vec<Strophe>, CorpusError> {
    let mut strophes = Vec::new();
    let mut poem = 0;
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record = idx + 1;
        let parsed: PoemRecord = serde_json::from_str(&line).map_err(|e| CorpusError::Json {
            record,
            message: e.to_string(),
        })?;
        let year = bucketize_year(parsed.year);
        for verses in parsed.strophes {
            let verses = verses
                .into_iter()
                .map(|v| {
                    Ok(Verse {
                        text: v.text,
                        rhyme_group: v.rhyme,
                        meter: v.meter.parse()?,
                    })
                })
                .collect::<Result<Vec<_>, CorpusError>>()
                .and_then(|verses| Strophe::new(verses, year, poem))
                .map_err(|e| CorpusError::Record {
                    record,
                    source: Box::new(e),
                })?;
            strophes.push(verses);
        }
        poem += 1;
    }
    Ok(strophes)
}

/// Drops strophes whose scheme occurs fewer than `min_count` times.
pub fn filter_rare_schemes(strophes: Vec<Strophe>, min_count: usize) -> Vec<Strophe> {
    let mut counts: HashMap<RhymeScheme, usize> = HashMap::new();
    for s in &strophes {
        *counts.entry(s.scheme.clone()).or_default() += 1;
    }
    strophes
        .into_iter()
        .filter(|s| counts[&s.scheme] >= min_count)
        .collect()
}

/// Deterministic train/test partition by strophe.
///
/// The test part holds `floor(n * test_fraction)` strophes chosen by a
/// seeded shuffle; both parts keep the input order.
pub fn split<T: Clone>(items: &[T], test_fraction: f64, seed: u64) -> Result<(Vec<T>, Vec<T>), CorpusError> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(CorpusError::BadFraction(test_fraction));
    }
    let n = items.len();
    // Tolerance absorbs products like 100 * 0.05 landing a hair under 5.
    let n_test = ((n as f64) * test_fraction + 1e-9).floor() as usize;
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let test_idx: HashSet<usize> = order[..n_test].iter().copied().collect();
    let (mut train, mut test) = (Vec::with_capacity(n - n_test), Vec::with_capacity(n_test));
    for (i, item) in items.iter().enumerate() {
        if test_idx.contains(&i) {
            test.push(item.clone());
        } else {
            train.push(item.clone());
        }
    }
    Ok((train, test))
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub scheme_counts: BTreeMap<String, usize>,
    pub meter_counts: BTreeMap<String, usize>,
    pub year_counts: BTreeMap<String, usize>,
    pub verses: usize,
    pub strophes: usize,
    pub poems: usize,
}

impl CorpusStats {
    /// Schemes sorted by descending count, ties by name.
    pub fn top_schemes(&self, k: usize) -> Vec<(&str, usize)> {
        let mut v: Vec<(&str, usize)> = self.scheme_counts.iter().map(|(s, &c)| (s.as_str(), c)).collect();
        v.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
        v.truncate(k);
        v
    }
}

pub fn stats(strophes: &[Strophe]) -> CorpusStats {
    let mut out = CorpusStats::default();
    let mut poems = HashSet::new();
    for s in strophes {
        *out.scheme_counts.entry(s.scheme.to_string()).or_default() += 1;
        *out.year_counts.entry(s.year.to_string()).or_default() += 1;
        for v in &s.verses {
            *out.meter_counts.entry(v.meter.to_string()).or_default() += 1;
        }
        out.verses += s.verses.len();
        poems.insert(s.poem);
    }
    out.strophes = strophes.len();
    out.poems = poems.len();
    out
}
