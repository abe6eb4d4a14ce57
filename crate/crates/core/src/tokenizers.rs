//! The four tokenization schemes behind one [`Tokenizer`] type.
//!
//! Text is first cut into pieces: the special tokens (`\n`, `<eos>`), then
//! chunks of one optional leading space followed by a run of letters, a run
//! of digits, or a run of other non-space characters. Any further
//! whitespace becomes single-character chunks. BPE merges and syllable
//! splits never cross a chunk boundary, and a chunk that is itself in the
//! vocabulary (for instance an injected annotation like ` ABAB`) is always
//! one token.
//!
//! Vocabulary file layout (UTF-8):
//!
//! ```text
//! #verseforge-vocab 1
//! #kind our
//! #specials newline=0 eos=1 unk=2
//! #annotations 3 4 5
//! #config {...}
//! #end
//! <token>\t<id>
//! ```
//!
//! Tokens escape `\\`, `\n`, `\r` and `\t` with a backslash.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashMap, HashSet};
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::corpus::{MeterLabel, RhymeScheme, YearBucket};
use crate::phonology::Phonology;

pub type TokenId = u32;

pub const NEWLINE: &str = "\n";
pub const EOS: &str = "<eos>";
pub const UNK: &str = "<unk>";

/// Default OUR vocabulary size.
pub const DEFAULT_BPE_VOCAB: usize = 40_000;

#[derive(Debug, Error)]
pub enum TokenizerError {
    #[error("cannot train a tokenizer on an empty corpus")]
    EmptyCorpus,
    #[error("chars-per-token needs a non-empty sample")]
    EmptySample,
    #[error("token id {0} is outside the vocabulary")]
    BadId(TokenId),
    #[error("unknown tokenizer kind {0:?}")]
    UnknownKind(String),
    #[error("{kind} tokenizer cannot be {action}")]
    WrongKind { kind: TokenizerKind, action: &'static str },
    #[error("vocab line {line}: {reason}")]
    Format { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TokenizerKind {
    /// Externally supplied subword vocabulary.
    Base,
    /// BPE trained on the poetry corpus.
    Our,
    Syllable,
    Unicode,
}

impl TokenizerKind {
    pub const ALL: [TokenizerKind; 4] = [
        TokenizerKind::Base,
        TokenizerKind::Our,
        TokenizerKind::Syllable,
        TokenizerKind::Unicode,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TokenizerKind::Base => "base",
            TokenizerKind::Our => "our",
            TokenizerKind::Syllable => "syllable",
            TokenizerKind::Unicode => "unicode",
        }
    }

    fn is_bpe(self) -> bool {
        matches!(self, TokenizerKind::Base | TokenizerKind::Our)
    }
}

impl fmt::Display for TokenizerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TokenizerKind {
    type Err = TokenizerError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TokenizerKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| TokenizerError::UnknownKind(s.to_string()))
    }
}

enum Piece<'a> {
    Special(&'static str),
    Chunk(&'a str),
}

#[derive(PartialEq, Eq, Clone, Copy)]
enum CharClass {
    Letter,
    Digit,
    Other,
}

fn class_of(c: char) -> CharClass {
    if c.is_alphabetic() {
        CharClass::Letter
    } else if c.is_numeric() {
        CharClass::Digit
    } else {
        CharClass::Other
    }
}

fn chunks_into<'a>(text: &'a str, out: &mut Vec<Piece<'a>>) {
    let idx: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    while i < idx.len() {
        let start = idx[i].0;
        let (mut j, body_class) = if idx[i].1 == ' ' {
            match idx.get(i + 1) {
                Some(&(_, c)) if !c.is_whitespace() => (i + 1, class_of(c)),
                _ => {
                    out.push(Piece::Chunk(&text[start..start + 1]));
                    i += 1;
                    continue;
                }
            }
        } else if idx[i].1.is_whitespace() {
            let end = idx.get(i + 1).map_or(text.len(), |p| p.0);
            out.push(Piece::Chunk(&text[start..end]));
            i += 1;
            continue;
        } else {
            (i, class_of(idx[i].1))
        };
        while j < idx.len() && !idx[j].1.is_whitespace() && class_of(idx[j].1) == body_class {
            j += 1;
        }
        let end = idx.get(j).map_or(text.len(), |p| p.0);
        out.push(Piece::Chunk(&text[start..end]));
        i = j;
    }
}

fn pieces(text: &str) -> Vec<Piece<'_>> {
    let mut out = Vec::new();
    let mut rest = text;
    loop {
        let next_special = [NEWLINE, EOS]
            .into_iter()
            .filter_map(|s| rest.find(s).map(|at| (at, s)))
            .min_by_key(|&(at, _)| at);
        match next_special {
            Some((at, special)) => {
                chunks_into(&rest[..at], &mut out);
                out.push(Piece::Special(special));
                rest = &rest[at + special.len()..];
            }
            None => {
                chunks_into(rest, &mut out);
                return out;
            }
        }
    }
}

/// Result of encoding: ids plus how many characters fell back to `<unk>`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Encoding {
    pub ids: Vec<TokenId>,
    pub unknown: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocab {
    kind: TokenizerKind,
    tokens: Vec<String>,
    ids: HashMap<String, TokenId>,
    annotations: BTreeSet<TokenId>,
    /// Free-form provenance line carried through save/load.
    pub config: Option<String>,
}

impl Vocab {
    /// Starts a vocabulary holding the specials and the given atomic tokens.
    fn with_specials(kind: TokenizerKind, annotations: &[String]) -> Vocab {
        let mut v = Vocab {
            kind,
            tokens: Vec::new(),
            ids: HashMap::new(),
            annotations: BTreeSet::new(),
            config: None,
        };
        for s in [NEWLINE, EOS, UNK] {
            v.push(s);
        }
        for a in annotations {
            let id = v.push(a);
            v.annotations.insert(id);
        }
        v
    }

    fn push(&mut self, token: &str) -> TokenId {
        if let Some(&id) = self.ids.get(token) {
            return id;
        }
        let id = self.tokens.len() as TokenId;
        self.tokens.push(token.to_string());
        self.ids.insert(token.to_string(), id);
        id
    }

    pub fn kind(&self) -> TokenizerKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn newline(&self) -> TokenId {
        0
    }

    pub fn eos(&self) -> TokenId {
        1
    }

    pub fn unk(&self) -> TokenId {
        2
    }

    pub fn id(&self, token: &str) -> Option<TokenId> {
        self.ids.get(token).copied()
    }

    pub fn token(&self, id: TokenId) -> Option<&str> {
        self.tokens.get(id as usize).map(String::as_str)
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn is_annotation(&self, id: TokenId) -> bool {
        self.annotations.contains(&id)
    }

    /// Character vocabulary over every character seen in `lines`.
    pub fn build_unicode<S: AsRef<str>>(lines: &[S]) -> Result<Vocab, TokenizerError> {
        if lines.is_empty() {
            return Err(TokenizerError::EmptyCorpus);
        }
        let mut v = Vocab::with_specials(TokenizerKind::Unicode, &[]);
        let chars: BTreeSet<char> = lines.iter().flat_map(|l| l.as_ref().chars()).collect();
        for c in chars {
            v.push(c.encode_utf8(&mut [0; 4]));
        }
        Ok(v)
    }

    /// Syllable vocabulary: annotations, every character, and every
    /// syllable token observed in `lines`.
    pub fn build_syllable<S: AsRef<str>>(
        lines: &[S],
        phonology: &Phonology,
        annotations: &[String],
    ) -> Result<Vocab, TokenizerError> {
        if lines.is_empty() {
            return Err(TokenizerError::EmptyCorpus);
        }
        let mut v = Vocab::with_specials(TokenizerKind::Syllable, annotations);
        let chars: BTreeSet<char> = lines.iter().flat_map(|l| l.as_ref().chars()).collect();
        for c in chars {
            v.push(c.encode_utf8(&mut [0; 4]));
        }
        let mut seen = BTreeSet::new();
        for line in lines {
            for piece in pieces(line.as_ref()) {
                if let Piece::Chunk(chunk) = piece {
                    if v.id(chunk).is_none() {
                        seen.extend(syllable_pieces(chunk, phonology));
                    }
                }
            }
        }
        for s in seen {
            v.push(&s);
        }
        Ok(v)
    }

    /// Byte-pair-encoding training over chunks of `lines`.
    ///
    /// Repeatedly merges the most frequent adjacent symbol pair (ties go to
    /// the lexicographically smaller pair) until the vocabulary reaches
    /// `vocab_size` or no pair is left. Annotation tokens are atomic and do
    /// not take part in merging.
    pub fn train_bpe<S: AsRef<str>>(
        kind: TokenizerKind,
        lines: &[S],
        vocab_size: usize,
        annotations: &[String],
    ) -> Result<Vocab, TokenizerError> {
        if !kind.is_bpe() {
            return Err(TokenizerError::WrongKind {
                kind,
                action: "trained with BPE",
            });
        }
        if lines.iter().all(|l| l.as_ref().is_empty()) {
            return Err(TokenizerError::EmptyCorpus);
        }
        let mut v = Vocab::with_specials(kind, annotations);
        let atomic: HashSet<&str> = annotations.iter().map(String::as_str).collect();
        let mut chunk_counts: HashMap<&str, u64> = HashMap::new();
        for line in lines {
            for piece in pieces(line.as_ref()) {
                if let Piece::Chunk(c) = piece {
                    if !atomic.contains(c) {
                        *chunk_counts.entry(c).or_default() += 1;
                    }
                }
            }
        }
        let alphabet: BTreeSet<char> = chunk_counts.keys().flat_map(|c| c.chars()).collect();
        for c in alphabet {
            v.push(c.encode_utf8(&mut [0; 4]));
        }
        let mut chunks: Vec<(&str, u64)> = chunk_counts.into_iter().collect();
        chunks.sort_unstable();
        let mut words: Vec<Vec<TokenId>> = chunks
            .iter()
            .map(|(c, _)| c.chars().map(|ch| v.ids[ch.encode_utf8(&mut [0; 4]) as &str]).collect())
            .collect();
        let freqs: Vec<i64> = chunks.iter().map(|&(_, n)| n as i64).collect();

        let mut pair_counts: HashMap<(TokenId, TokenId), i64> = HashMap::new();
        let mut pair_words: HashMap<(TokenId, TokenId), HashSet<usize>> = HashMap::new();
        for (wi, w) in words.iter().enumerate() {
            for p in w.windows(2) {
                *pair_counts.entry((p[0], p[1])).or_default() += freqs[wi];
                pair_words.entry((p[0], p[1])).or_default().insert(wi);
            }
        }
        type HeapEntry = (i64, Reverse<(String, String)>, (TokenId, TokenId));
        let entry = |v: &Vocab, pair: (TokenId, TokenId), count: i64| -> HeapEntry {
            let key = (v.tokens[pair.0 as usize].clone(), v.tokens[pair.1 as usize].clone());
            (count, Reverse(key), pair)
        };
        let mut heap: BinaryHeap<HeapEntry> = pair_counts.iter().map(|(&p, &c)| entry(&v, p, c)).collect();

        while v.len() < vocab_size {
            let Some((count, _, pair)) = heap.pop() else { break };
            if count <= 0 || pair_counts.get(&pair) != Some(&count) {
                continue;
            }
            let merged = format!("{}{}", v.tokens[pair.0 as usize], v.tokens[pair.1 as usize]);
            let new_id = v.push(&merged);
            let affected: Vec<usize> = pair_words.remove(&pair).into_iter().flatten().collect();
            let mut touched: HashSet<(TokenId, TokenId)> = HashSet::new();
            for wi in affected {
                let w = &words[wi];
                if !w.windows(2).any(|p| (p[0], p[1]) == pair) {
                    continue;
                }
                for p in w.windows(2) {
                    *pair_counts.get_mut(&(p[0], p[1])).unwrap() -= freqs[wi];
                    touched.insert((p[0], p[1]));
                }
                let mut out = Vec::with_capacity(w.len());
                let mut k = 0;
                while k < w.len() {
                    if k + 1 < w.len() && (w[k], w[k + 1]) == pair {
                        out.push(new_id);
                        k += 2;
                    } else {
                        out.push(w[k]);
                        k += 1;
                    }
                }
                for p in out.windows(2) {
                    *pair_counts.entry((p[0], p[1])).or_default() += freqs[wi];
                    pair_words.entry((p[0], p[1])).or_default().insert(wi);
                    touched.insert((p[0], p[1]));
                }
                words[wi] = out;
            }
            for p in touched {
                let c = pair_counts[&p];
                if c > 0 && p != pair {
                    heap.push(entry(&v, p, c));
                }
            }
            pair_counts.remove(&pair);
        }
        Ok(v)
    }

    /// SHA-256 over kind and token list; models record it to detect a
    /// vocabulary mismatch.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.kind.name().as_bytes());
        for t in &self.tokens {
            h.update([0u8]);
            h.update(t.as_bytes());
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn to_file_string(&self) -> String {
        let mut out = String::from("#verseforge-vocab 1\n");
        out += &format!("#kind {}\n", self.kind);
        out += &format!(
            "#specials newline={} eos={} unk={}\n",
            self.newline(),
            self.eos(),
            self.unk()
        );
        let ann: Vec<String> = self.annotations.iter().map(|a| a.to_string()).collect();
        out += &format!("#annotations {}\n", ann.join(" "));
        if let Some(c) = &self.config {
            out += &format!("#config {}\n", c.replace('\n', " "));
        }
        out += "#end\n";
        for (id, t) in self.tokens.iter().enumerate() {
            out += &format!("{}\t{id}\n", escape(t));
        }
        out
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), TokenizerError> {
        fs::write(path, self.to_file_string())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Vocab, TokenizerError> {
        fs::read_to_string(path)?.parse()
    }
}

impl FromStr for Vocab {
    type Err = TokenizerError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let bad = |line: usize, reason: &str| TokenizerError::Format {
            line,
            reason: reason.to_string(),
        };
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, "#verseforge-vocab 1")) => {}
            _ => return Err(bad(1, "missing `#verseforge-vocab 1` header")),
        }
        let mut kind = None;
        let mut annotations = BTreeSet::new();
        let mut config = None;
        let mut ended = false;
        for (i, line) in lines.by_ref() {
            if line == "#end" {
                ended = true;
                break;
            }
            let (key, value) = line.split_once(' ').unwrap_or((line, ""));
            match key {
                "#kind" => kind = Some(value.parse().map_err(|_| bad(i + 1, "unknown kind"))?),
                "#specials" => {
                    if value != "newline=0 eos=1 unk=2" {
                        return Err(bad(i + 1, "specials must be newline=0 eos=1 unk=2"));
                    }
                }
                "#annotations" => {
                    for a in value.split_whitespace() {
                        annotations.insert(a.parse().map_err(|_| bad(i + 1, "bad annotation id"))?);
                    }
                }
                "#config" => config = Some(value.to_string()),
                _ => return Err(bad(i + 1, "unknown header line")),
            }
        }
        if !ended {
            return Err(bad(0, "header is not terminated by #end"));
        }
        let kind = kind.ok_or_else(|| bad(0, "missing #kind"))?;
        let mut v = Vocab {
            kind,
            tokens: Vec::new(),
            ids: HashMap::new(),
            annotations,
            config,
        };
        for (i, line) in lines {
            let (tok, id) = line
                .rsplit_once('\t')
                .ok_or_else(|| bad(i + 1, "expected token<TAB>id"))?;
            let id: usize = id.parse().map_err(|_| bad(i + 1, "bad id"))?;
            if id != v.tokens.len() {
                return Err(bad(i + 1, "ids must be dense and in order"));
            }
            let tok = unescape(tok).ok_or_else(|| bad(i + 1, "bad escape"))?;
            if v.ids.insert(tok.clone(), id as TokenId).is_some() {
                return Err(bad(i + 1, "duplicate token"));
            }
            v.tokens.push(tok);
        }
        if v.tokens.get(..3) != Some(&[NEWLINE.to_string(), EOS.to_string(), UNK.to_string()][..]) {
            return Err(bad(0, "specials must occupy ids 0..3"));
        }
        if v.annotations.iter().any(|&a| a as usize >= v.tokens.len()) {
            return Err(bad(0, "annotation id out of range"));
        }
        Ok(v)
    }
}

fn escape(t: &str) -> String {
    let mut out = String::with_capacity(t.len());
    for c in t.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out
}

fn unescape(t: &str) -> Option<String> {
    let mut out = String::with_capacity(t.len());
    let mut it = t.chars();
    while let Some(c) = it.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        out.push(match it.next()? {
            '\\' => '\\',
            'n' => '\n',
            'r' => '\r',
            't' => '\t',
            _ => return None,
        });
    }
    Some(out)
}

/// Syllable tokens of one chunk; word-initial syllables carry the
/// chunk's leading space.
fn syllable_pieces(chunk: &str, phonology: &Phonology) -> Vec<String> {
    let (space, body) = match chunk.strip_prefix(' ') {
        Some(b) => (" ", b),
        None => ("", chunk),
    };
    if body.is_empty() || !body.chars().all(char::is_alphabetic) {
        return vec![chunk.to_string()];
    }
    let split = phonology.syllabify(body);
    if split.is_clitic() {
        return vec![chunk.to_string()];
    }
    let mut out = split.syllables;
    out[0].insert_str(0, space);
    out
}

/// Standard annotation vocabulary: separators, meter letters, syllable
/// counts, and the given schemes and year buckets, each with and without a
/// leading space.
pub fn annotation_tokens<'a>(
    schemes: impl IntoIterator<Item = &'a RhymeScheme>,
    years: impl IntoIterator<Item = YearBucket>,
) -> Vec<String> {
    let mut bare: Vec<String> = vec!["#".to_string()];
    bare.extend(MeterLabel::ALL.iter().map(|m| m.to_string()));
    bare.extend((1..=40).map(|n| n.to_string()));
    let schemes: BTreeSet<String> = schemes.into_iter().map(|s| s.to_string()).collect();
    bare.extend(schemes);
    let years: BTreeSet<YearBucket> = years.into_iter().collect();
    bare.extend(years.into_iter().map(|y| y.to_string()));
    let mut out = Vec::with_capacity(bare.len() * 2);
    let mut seen = HashSet::new();
    for b in bare {
        for t in [b.clone(), format!(" {b}")] {
            if seen.insert(t.clone()) {
                out.push(t);
            }
        }
    }
    out
}

/// A vocabulary plus the syllabifier the SYLLABLE scheme needs.
#[derive(Debug, Clone)]
pub struct Tokenizer {
    vocab: Vocab,
    phonology: Phonology,
}

impl Tokenizer {
    pub fn new(vocab: Vocab) -> Tokenizer {
        Tokenizer {
            vocab,
            phonology: Phonology::new(),
        }
    }

    pub fn with_phonology(vocab: Vocab, phonology: Phonology) -> Tokenizer {
        Tokenizer { vocab, phonology }
    }

    pub fn vocab(&self) -> &Vocab {
        &self.vocab
    }

    pub fn kind(&self) -> TokenizerKind {
        self.vocab.kind
    }

    fn push_chars(&self, s: &str, enc: &mut Encoding) {
        for c in s.chars() {
            match self.vocab.id(c.encode_utf8(&mut [0; 4])) {
                Some(id) => enc.ids.push(id),
                None => {
                    enc.ids.push(self.vocab.unk());
                    enc.unknown += 1;
                }
            }
        }
    }

    fn push_bpe(&self, chunk: &str, enc: &mut Encoding) {
        let mut symbols: Vec<(String, TokenId)> = Vec::new();
        for c in chunk.chars() {
            let s = c.to_string();
            match self.vocab.id(&s) {
                Some(id) => symbols.push((s, id)),
                None => {
                    symbols.push((String::new(), self.vocab.unk()));
                    enc.unknown += 1;
                }
            }
        }
        loop {
            let best = symbols
                .windows(2)
                .enumerate()
                .filter(|(_, w)| !w[0].0.is_empty() && !w[1].0.is_empty())
                .filter_map(|(i, w)| self.vocab.id(&format!("{}{}", w[0].0, w[1].0)).map(|id| (id, i)))
                .min();
            let Some((id, i)) = best else { break };
            let right = symbols.remove(i + 1).0;
            symbols[i].0.push_str(&right);
            symbols[i].1 = id;
        }
        enc.ids.extend(symbols.into_iter().map(|(_, id)| id));
    }

    pub fn encode(&self, text: &str) -> Encoding {
        let mut enc = Encoding::default();
        for piece in pieces(text) {
            let chunk = match piece {
                Piece::Special(s) => {
                    enc.ids.push(self.vocab.ids[s]);
                    continue;
                }
                Piece::Chunk(c) => c,
            };
            if self.vocab.kind == TokenizerKind::Unicode {
                self.push_chars(chunk, &mut enc);
                continue;
            }
            if let Some(id) = self.vocab.id(chunk) {
                enc.ids.push(id);
                continue;
            }
            match self.vocab.kind {
                TokenizerKind::Syllable => {
                    for syl in syllable_pieces(chunk, &self.phonology) {
                        match self.vocab.id(&syl) {
                            Some(id) => enc.ids.push(id),
                            None => self.push_chars(&syl, &mut enc),
                        }
                    }
                }
                _ => self.push_bpe(chunk, &mut enc),
            }
        }
        enc
    }

    pub fn decode(&self, ids: &[TokenId]) -> Result<String, TokenizerError> {
        let mut out = String::new();
        for &id in ids {
            out.push_str(self.vocab.token(id).ok_or(TokenizerError::BadId(id))?);
        }
        Ok(out)
    }

    pub fn token_text(&self, id: TokenId) -> &str {
        self.vocab.token(id).unwrap_or(UNK)
    }

    /// Average characters per token over `lines`.
    pub fn chars_per_token<S: AsRef<str>>(&self, lines: &[S]) -> Result<f64, TokenizerError> {
        let (mut chars, mut tokens) = (0usize, 0usize);
        for line in lines {
            chars += line.as_ref().chars().count();
            tokens += self.encode(line.as_ref()).ids.len();
        }
        if tokens == 0 {
            return Err(TokenizerError::EmptySample);
        }
        Ok(chars as f64 / tokens as f64)
    }
}
