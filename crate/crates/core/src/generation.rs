//! Basic and Forced decoding over any [`LanguageModel`].
//!
//! Both decoders start from the header line. When per-verse meters are
//! given for METER_VERSE, the first verse's meter field is appended to the
//! prompt, e.g. `# AXAX # 1880\nJ # `. Decoding stops at end-of-sequence,
//! after as many verses as the scheme has, or when `max_tokens` sampled
//! tokens are used up.
//!
//! Forced decoding additionally copies the annotation prefix of an earlier
//! rhyme partner onto each later verse of the same letter. X verses are
//! never forced. If the first verse of a letter carries a malformed
//! annotation, that verse is re-sampled with a fresh seed up to
//! [`MAX_RETRIES`] times before generation gives up.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{MeterLabel, RhymeScheme, YearBucket, NON_RHYMING};
use crate::formats::{self, modal_meter, DataFormat, ParsedStrophe, StropheHeader, SEP};
use crate::language_model::{sample_dist, LanguageModel, LmError};
use crate::tokenizers::{TokenId, Tokenizer};

pub const MAX_RETRIES: usize = 8;
pub const DEFAULT_TEMPERATURE: f64 = 0.8;
pub const DEFAULT_MAX_TOKENS: usize = 1024;

const RESEED: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Debug, Error)]
pub enum GenerationError {
    #[error("{found} verse meters given for a scheme of {expected} verses")]
    MeterCount { expected: usize, found: usize },
    #[error("format {0} needs a strophe meter for its header")]
    MissingMeter(DataFormat),
    #[error("forced decoding needs verse annotations; format {0} has none")]
    ForcedBasic(DataFormat),
    #[error("model vocabulary has {model} entries but the tokenizer has {tokenizer}")]
    VocabSize { model: usize, tokenizer: usize },
    #[error("unknown decoding {0:?}, expected basic or forced")]
    UnknownDecoding(String),
    #[error(transparent)]
    Lm(#[from] LmError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decoding {
    Basic,
    Forced,
}

impl fmt::Display for Decoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Decoding::Basic => "basic",
            Decoding::Forced => "forced",
        })
    }
}

impl FromStr for Decoding {
    type Err = GenerationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "basic" => Ok(Decoding::Basic),
            "forced" => Ok(Decoding::Forced),
            _ => Err(GenerationError::UnknownDecoding(s.to_string())),
        }
    }
}

fn default_temperature() -> f64 {
    DEFAULT_TEMPERATURE
}

fn default_max_tokens() -> usize {
    DEFAULT_MAX_TOKENS
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationRequest {
    pub scheme: RhymeScheme,
    pub year: YearBucket,
    pub format: DataFormat,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strophe_meter: Option<MeterLabel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verse_meters: Option<Vec<MeterLabel>>,
    #[serde(default = "default_temperature")]
    pub temperature: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_max_tokens")]
    pub max_tokens: usize,
}

impl GenerationRequest {
    pub fn new(scheme: RhymeScheme, year: YearBucket, format: DataFormat) -> GenerationRequest {
        GenerationRequest {
            scheme,
            year,
            format,
            strophe_meter: None,
            verse_meters: None,
            temperature: DEFAULT_TEMPERATURE,
            seed: 0,
            max_tokens: DEFAULT_MAX_TOKENS,
        }
    }

    /// Checks the meter fields and builds the header line.
    pub fn header(&self) -> Result<StropheHeader, GenerationError> {
        if let Some(m) = &self.verse_meters {
            if m.len() != self.scheme.len() {
                return Err(GenerationError::MeterCount {
                    expected: self.scheme.len(),
                    found: m.len(),
                });
            }
        }
        let meter = if self.format.has_header_meter() {
            let m = self
                .strophe_meter
                .or_else(|| self.verse_meters.as_deref().map(modal_meter))
                .ok_or(GenerationError::MissingMeter(self.format))?;
            Some(m)
        } else {
            None
        };
        Ok(StropheHeader {
            scheme: self.scheme.clone(),
            year: self.year,
            meter,
        })
    }

    /// Header line, newline, and the first verse's meter field if known.
    pub fn prompt(&self) -> Result<String, GenerationError> {
        let mut p = self.header()?.render();
        p.push('\n');
        if self.format == DataFormat::MeterVerse {
            if let Some(m) = self.verse_meters.as_ref().and_then(|m| m.first()) {
                p.push_str(&format!("{m}{SEP}"));
            }
        }
        Ok(p)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeneratedStrophe {
    /// Header and verses, without the machine-generated label.
    pub raw_text: String,
    pub machine_generated: bool,
    /// The token budget ran out before the strophe was complete.
    pub truncated: bool,
    /// Zero-based verses whose annotation prefix was copied from a partner.
    pub forced_verses: Vec<usize>,
    pub retries: usize,
    pub parse_error: Option<String>,
    #[serde(skip)]
    pub parsed: Option<ParsedStrophe>,
}

impl GeneratedStrophe {
    /// Text with the leading machine-generated label.
    pub fn labeled(&self) -> String {
        format!("{}\n{}", formats::MACHINE_LABEL, self.raw_text)
    }
}

/// The annotation prefix of a verse line, through its last field separator.
pub fn annotation_prefix(line: &str, format: DataFormat) -> Option<&str> {
    let n = format.verse_fields();
    if n == 0 {
        return None;
    }
    let mut end = 0;
    for _ in 0..n {
        end += line[end..].find(SEP)? + SEP.len();
    }
    Some(&line[..end])
}

struct Decoder<'a> {
    model: &'a dyn LanguageModel,
    tokenizer: &'a Tokenizer,
    request: &'a GenerationRequest,
    rng: ChaCha8Rng,
    text: String,
    ids: Vec<TokenId>,
    sampled: usize,
}

enum VerseEnd {
    Newline,
    Eos,
    Budget,
}

impl Decoder<'_> {
    fn push_text(&mut self, s: &str) {
        self.text.push_str(s);
        self.ids.extend(self.tokenizer.encode(s).ids);
    }

    /// Samples until the current verse ends.
    fn verse(&mut self) -> Result<VerseEnd, GenerationError> {
        let eos = self.tokenizer.vocab().eos();
        loop {
            if self.sampled >= self.request.max_tokens {
                return Ok(VerseEnd::Budget);
            }
            let dist = self.model.next_dist(&self.ids);
            let tok = sample_dist(&dist, self.request.temperature, &mut self.rng)?;
            self.sampled += 1;
            if tok == eos {
                return Ok(VerseEnd::Eos);
            }
            self.ids.push(tok);
            let piece = self.tokenizer.token_text(tok);
            self.text.push_str(piece);
            if piece.contains('\n') {
                return Ok(VerseEnd::Newline);
            }
        }
    }
}

pub fn generate_basic(
    model: &dyn LanguageModel,
    tokenizer: &Tokenizer,
    request: &GenerationRequest,
) -> Result<GeneratedStrophe, GenerationError> {
    run(model, tokenizer, request, Decoding::Basic)
}

pub fn generate_forced(
    model: &dyn LanguageModel,
    tokenizer: &Tokenizer,
    request: &GenerationRequest,
) -> Result<GeneratedStrophe, GenerationError> {
    if request.format == DataFormat::Basic {
        return Err(GenerationError::ForcedBasic(request.format));
    }
    run(model, tokenizer, request, Decoding::Forced)
}

pub fn generate(
    model: &dyn LanguageModel,
    tokenizer: &Tokenizer,
    request: &GenerationRequest,
    decoding: Decoding,
) -> Result<GeneratedStrophe, GenerationError> {
    match decoding {
        Decoding::Basic => generate_basic(model, tokenizer, request),
        Decoding::Forced => generate_forced(model, tokenizer, request),
    }
}

fn run(
    model: &dyn LanguageModel,
    tokenizer: &Tokenizer,
    request: &GenerationRequest,
    decoding: Decoding,
) -> Result<GeneratedStrophe, GenerationError> {
    if model.vocab_size() != tokenizer.vocab().len() {
        return Err(GenerationError::VocabSize {
            model: model.vocab_size(),
            tokenizer: tokenizer.vocab().len(),
        });
    }
    let prompt = request.prompt()?;
    let mut d = Decoder {
        model,
        tokenizer,
        request,
        rng: ChaCha8Rng::seed_from_u64(request.seed),
        text: String::new(),
        ids: Vec::new(),
        sampled: 0,
    };
    d.push_text(&prompt);

    let letters: Vec<char> = request.scheme.letters().collect();
    let mut partners: HashMap<char, String> = HashMap::new();
    let mut forced_verses = Vec::new();
    let (mut retries, mut truncated, mut failure) = (0, false, None);
    let mut verse = 0;
    while verse < letters.len() {
        let start = (d.text.len(), d.ids.len());
        let end = d.verse()?;
        let letter = letters[verse];
        let first_of_letter = letter != NON_RHYMING && !partners.contains_key(&letter);
        if decoding == Decoding::Forced && first_of_letter && !matches!(end, VerseEnd::Budget) {
            let line_start = d.text[..start.0].rfind('\n').map_or(0, |i| i + 1);
            let line = d.text[line_start..].trim_end_matches('\n');
            match formats::parse_verse_line(line, request.format, verse + 2) {
                Ok(_) => {
                    let prefix = annotation_prefix(line, request.format).unwrap_or_default();
                    partners.insert(letter, prefix.to_string());
                }
                Err(_) if retries < MAX_RETRIES => {
                    retries += 1;
                    d.rng = ChaCha8Rng::seed_from_u64(request.seed ^ RESEED.wrapping_mul(retries as u64));
                    d.text.truncate(start.0);
                    d.ids.truncate(start.1);
                    continue;
                }
                Err(e) => {
                    failure = Some(format!(
                        "verse {}: annotation still malformed after {MAX_RETRIES} retries: {e}",
                        verse + 1
                    ));
                    break;
                }
            }
        }
        match end {
            VerseEnd::Budget => {
                truncated = true;
                break;
            }
            VerseEnd::Eos => break,
            VerseEnd::Newline => {}
        }
        verse += 1;
        if decoding == Decoding::Forced && verse < letters.len() {
            if let Some(prefix) = partners.get(&letters[verse]) {
                let prefix = prefix.clone();
                d.push_text(&prefix);
                forced_verses.push(verse);
            }
        }
    }

    let (parsed, parse_error) = match failure {
        Some(f) => (None, Some(f)),
        None => match formats::parse(&d.text, request.format) {
            Ok(p) => (Some(p), None),
            Err(e) => (None, Some(e.to_string())),
        },
    };
    Ok(GeneratedStrophe {
        raw_text: d.text,
        machine_generated: true,
        truncated,
        forced_verses,
        retries,
        parse_error,
        parsed,
    })
}
