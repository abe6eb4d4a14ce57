//! Czech syllabification, verse stress and clausula extraction.
//!
//! Syllable nuclei are the vowels `a á e é ě i í o ó u ú ů y ý`, the
//! diphthongs `ou au eu`, and `r`/`l` standing between two consonants
//! (`vl-ny`, `krk`). A consonant cluster between two nuclei is split so the
//! following syllable takes the longest suffix found in [`ONSETS`], or a
//! single consonant otherwise. A lone intervocalic `ch` stays in the coda
//! (`duch-u`).
//!
//! Stress falls on the first syllable of every polysyllabic word. A
//! monosyllabic vocalic preposition (`po`, `do`, `na`, ...) takes the stress
//! of the word after it. Remaining monosyllables are metrically free and
//! alternate with their neighbours: a run of them right before a stressed
//! syllable is read backwards as `x X x ...`; a run at the end of the verse
//! continues the alternation of what precedes it.
//!
//! The clausula is the last two syllables of the verse with the onset of the
//! first of them removed, lowercased.

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum PhonologyError {
    #[error("verse {0:?} has no syllables")]
    NoSyllables(String),
    #[error("exceptions line {line}: {reason}")]
    Exceptions { line: usize, reason: String },
    #[error("invalid stress mark {0:?}")]
    BadStressMark(char),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Consonant clusters accepted as syllable onsets inside a word.
pub const ONSETS: &[&str] = &[
    "bl", "br", "bř", "pl", "pr", "př", "kl", "kr", "kř", "gl", "gr", "hl", "hr", "hř", "chl", "chr", "chř", "vl",
    "vr", "vř", "fl", "fr", "tř", "dř", "sk", "sp", "st", "sť", "sl", "sm", "sn", "sv", "šk", "šp", "št", "šť", "šl",
    "šm", "šn", "šv", "zd", "zb", "zv", "zl", "zm", "zn", "zř", "žd", "žl", "žm", "žn", "žv", "ml", "mř", "čl", "čt",
    "tv", "dv", "kv", "cv", "str", "stř", "skr", "skl", "spr", "spl", "zbr", "štr",
];

/// Monosyllabic prepositions that form a stress group with the next word.
pub const VOCALIC_PREPOSITIONS: &[&str] = &[
    "po", "do", "na", "za", "o", "u", "ve", "ke", "ku", "se", "ze", "od", "pod", "nad", "před", "při", "pro", "bez",
    "přes", "skrz", "ode", "nade", "pode", "přede",
];

pub fn is_vowel(c: char) -> bool {
    matches!(
        c,
        'a' | 'á' | 'e' | 'é' | 'ě' | 'i' | 'í' | 'o' | 'ó' | 'u' | 'ú' | 'ů' | 'y' | 'ý' | 'ä' | 'ö' | 'ü'
    )
}

fn lower(c: char) -> char {
    c.to_lowercase().next().unwrap_or(c)
}

fn is_diphthong(a: char, b: char) -> bool {
    matches!((a, b), ('o', 'u') | ('a', 'u') | ('e', 'u'))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyllableSplit {
    pub syllables: Vec<String>,
}

impl SyllableSplit {
    /// A word with no nucleus, like the preposition `z`.
    pub fn is_clitic(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn len(&self) -> usize {
        self.syllables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn hyphenated(&self) -> String {
        self.syllables.join("-")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stress {
    Unstressed,
    Stressed,
}

impl Stress {
    pub fn mark(self) -> char {
        match self {
            Stress::Unstressed => 'x',
            Stress::Stressed => 'X',
        }
    }

    fn flip(self) -> Stress {
        match self {
            Stress::Unstressed => Stress::Stressed,
            Stress::Stressed => Stress::Unstressed,
        }
    }
}

/// One stress mark per syllable of a verse.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct StressPattern(pub Vec<Stress>);

impl StressPattern {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_stressed(&self, i: usize) -> bool {
        self.0[i] == Stress::Stressed
    }
}

impl fmt::Display for StressPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}", s.mark())?;
        }
        Ok(())
    }
}

/// Parses `x`/`X` marks; whitespace is ignored.
impl FromStr for StressPattern {
    type Err = PhonologyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                'x' => Ok(Stress::Unstressed),
                'X' => Ok(Stress::Stressed),
                other => Err(PhonologyError::BadStressMark(other)),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(StressPattern)
    }
}

/// Verse ending that rhyme partners share.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Clausula(pub String);

impl Clausula {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Clausula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone)]
struct Syllable {
    text: String,
    /// Number of leading onset characters.
    onset: usize,
}

#[derive(Debug, Clone)]
struct WordSyllables {
    lower: String,
    syllables: Vec<Syllable>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Unit {
    Vowel,
    Consonant,
}

/// Splits text into words: maximal runs of alphabetic characters.
pub fn words(text: &str) -> impl Iterator<Item = &str> {
    text.split(|c: char| !c.is_alphabetic()).filter(|w| !w.is_empty())
}

fn onset_len(chars: &[char]) -> usize {
    if let Some(i) = chars.iter().position(|&c| is_vowel(lower(c))) {
        return i;
    }
    chars
        .iter()
        .enumerate()
        .skip(1)
        .find(|(_, &c)| matches!(lower(c), 'r' | 'l'))
        .map_or(0, |(i, _)| i)
}

fn rule_split(word: &str) -> Vec<usize> {
    let chars: Vec<char> = word.chars().collect();
    let lc: Vec<char> = chars.iter().map(|&c| lower(c)).collect();

    // (start, end, kind) over characters, with `ch` as one consonant
    let mut units: Vec<(usize, usize, Unit)> = Vec::new();
    let mut i = 0;
    while i < lc.len() {
        if lc[i] == 'c' && lc.get(i + 1) == Some(&'h') {
            units.push((i, i + 2, Unit::Consonant));
            i += 2;
        } else {
            let kind = if is_vowel(lc[i]) { Unit::Vowel } else { Unit::Consonant };
            units.push((i, i + 1, kind));
            i += 1;
        }
    }

    // nuclei as inclusive unit index ranges
    let mut nuclei: Vec<(usize, usize)> = Vec::new();
    let mut u = 0;
    while u < units.len() {
        let (s, _, kind) = units[u];
        match kind {
            Unit::Vowel => {
                let next_is_glide = units
                    .get(u + 1)
                    .is_some_and(|&(ns, _, nk)| nk == Unit::Vowel && is_diphthong(lc[s], lc[ns]));
                if next_is_glide {
                    nuclei.push((u, u + 1));
                    u += 2;
                    continue;
                }
                nuclei.push((u, u));
            }
            Unit::Consonant => {
                let liquid = matches!(lc[s], 'r' | 'l') && units[u].1 - s == 1;
                let prev_cons =
                    u > 0 && units[u - 1].2 == Unit::Consonant && !nuclei.last().is_some_and(|n| n.1 == u - 1);
                let next_cons = units.get(u + 1).is_some_and(|n| n.2 == Unit::Consonant);
                if liquid && prev_cons && next_cons {
                    nuclei.push((u, u));
                }
            }
        }
        u += 1;
    }
    if nuclei.is_empty() {
        return Vec::new();
    }

    // syllable start positions (in units) for every nucleus after the first
    let mut starts = vec![0usize];
    for w in nuclei.windows(2) {
        let (prev_end, next_start) = (w[0].1, w[1].0);
        let cluster = &units[prev_end + 1..next_start];
        let to_onset = match cluster.len() {
            0 => 0,
            1 => {
                let (s, e, _) = cluster[0];
                if e - s == 2 {
                    0
                } else {
                    1
                }
            }
            n => (2..=n.min(3))
                .rev()
                .find(|&m| {
                    let from = cluster[n - m].0;
                    let to = cluster[n - 1].1;
                    let s: String = lc[from..to].iter().collect();
                    ONSETS.contains(&s.as_str())
                })
                .unwrap_or(1),
        };
        starts.push(next_start - to_onset);
    }

    let mut lens = Vec::with_capacity(starts.len());
    for (k, &su) in starts.iter().enumerate() {
        let from = units[su].0;
        let to = starts.get(k + 1).map_or(chars.len(), |&nu| units[nu].0);
        lens.push(to - from);
    }
    lens
}

/// Rule-based syllabifier with optional per-word exceptions.
#[derive(Debug, Clone, Default)]
pub struct Phonology {
    /// lowercase word -> syllable lengths in characters
    exceptions: HashMap<String, Vec<usize>>,
}

impl Phonology {
    pub fn new() -> Phonology {
        Phonology::default()
    }

    /// Parses an exceptions list: one `word<TAB>syl-la-bles` per line.
    /// Blank lines and lines starting with `#` are ignored.
    pub fn with_exceptions(text: &str) -> Result<Phonology, PhonologyError> {
        let mut exceptions = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |reason: &str| PhonologyError::Exceptions {
                line: i + 1,
                reason: reason.to_string(),
            };
            let (word, split) = line.split_once('\t').ok_or_else(|| bad("expected word<TAB>split"))?;
            let word: String = word.chars().map(lower).collect();
            let parts: Vec<&str> = split.split('-').collect();
            if parts.iter().any(|p| p.is_empty()) {
                return Err(bad("empty syllable"));
            }
            let joined: String = parts.concat().chars().map(lower).collect();
            if joined != word {
                return Err(bad("split does not spell the word"));
            }
            exceptions.insert(word, parts.iter().map(|p| p.chars().count()).collect());
        }
        Ok(Phonology { exceptions })
    }

    pub fn load_exceptions(path: impl AsRef<Path>) -> Result<Phonology, PhonologyError> {
        Phonology::with_exceptions(&fs::read_to_string(path)?)
    }

    fn split_word(&self, word: &str) -> WordSyllables {
        let lower_word: String = word.chars().map(lower).collect();
        let lens = match self.exceptions.get(&lower_word) {
            Some(lens) => lens.clone(),
            None => rule_split(word),
        };
        let chars: Vec<char> = word.chars().collect();
        let mut syllables = Vec::with_capacity(lens.len());
        let mut at = 0;
        for len in lens {
            let piece = &chars[at..at + len];
            syllables.push(Syllable {
                text: piece.iter().collect(),
                onset: onset_len(piece),
            });
            at += len;
        }
        WordSyllables {
            lower: lower_word,
            syllables,
        }
    }

    /// Splits one word (letters only) into syllables.
    pub fn syllabify(&self, word: &str) -> SyllableSplit {
        SyllableSplit {
            syllables: self.split_word(word).syllables.into_iter().map(|s| s.text).collect(),
        }
    }

    fn verse_words(&self, text: &str) -> Vec<WordSyllables> {
        words(text).map(|w| self.split_word(w)).collect()
    }

    /// Syllables with nucleus-less clitics glued onto a neighbour.
    fn flat_syllables(&self, text: &str) -> Vec<Syllable> {
        let mut out: Vec<Syllable> = Vec::new();
        let mut pending = String::new();
        for w in self.verse_words(text) {
            if w.syllables.is_empty() {
                pending.push_str(&w.lower);
                continue;
            }
            for (i, mut s) in w.syllables.into_iter().enumerate() {
                if i == 0 && !pending.is_empty() {
                    s.onset += pending.chars().count();
                    s.text = std::mem::take(&mut pending) + &s.text;
                }
                out.push(s);
            }
        }
        if !pending.is_empty() {
            if let Some(last) = out.last_mut() {
                last.text.push_str(&pending);
            }
        }
        out
    }

    /// All syllables of a verse, in order. Clitics are prefixed to the
    /// first syllable of the following word.
    pub fn verse_syllables(&self, text: &str) -> Vec<String> {
        self.flat_syllables(text).into_iter().map(|s| s.text).collect()
    }

    pub fn syllable_count(&self, text: &str) -> usize {
        self.flat_syllables(text).len()
    }

    pub fn stress_pattern(&self, text: &str) -> StressPattern {
        let words: Vec<WordSyllables> = self
            .verse_words(text)
            .into_iter()
            .filter(|w| !w.syllables.is_empty())
            .collect();
        let mut marks: Vec<Option<Stress>> = Vec::new();
        let mut i = 0;
        while i < words.len() {
            let w = &words[i];
            let n = w.syllables.len();
            if n == 1 && i + 1 < words.len() && VOCALIC_PREPOSITIONS.contains(&w.lower.as_str()) {
                marks.push(Some(Stress::Stressed));
                marks.extend(std::iter::repeat_n(
                    Some(Stress::Unstressed),
                    words[i + 1].syllables.len(),
                ));
                i += 2;
                continue;
            }
            if n == 1 {
                marks.push(None);
            } else {
                marks.push(Some(Stress::Stressed));
                marks.extend(std::iter::repeat_n(Some(Stress::Unstressed), n - 1));
            }
            i += 1;
        }

        let mut resolved = marks.clone();
        let mut k = 0;
        while k < marks.len() {
            if marks[k].is_some() {
                k += 1;
                continue;
            }
            let start = k;
            while k < marks.len() && marks[k].is_none() {
                k += 1;
            }
            if k < marks.len() {
                // next anchored syllable opens a word, so it is stressed
                let mut s = Stress::Unstressed;
                for slot in resolved[start..k].iter_mut().rev() {
                    *slot = Some(s);
                    s = s.flip();
                }
            } else {
                let mut s = match start.checked_sub(1).and_then(|p| resolved[p]) {
                    Some(prev) => prev.flip(),
                    None => Stress::Stressed,
                };
                for slot in resolved[start..k].iter_mut() {
                    *slot = Some(s);
                    s = s.flip();
                }
            }
        }
        StressPattern(resolved.into_iter().map(|m| m.unwrap_or(Stress::Unstressed)).collect())
    }

    /// Ending hint of a verse.
    pub fn ending_hint(&self, text: &str) -> Result<Clausula, PhonologyError> {
        let syl = self.flat_syllables(text);
        let tail = match syl.len() {
            0 => return Err(PhonologyError::NoSyllables(text.to_string())),
            1 => syl[0].text.chars().skip(syl[0].onset).collect::<String>(),
            n => {
                let pen = &syl[n - 2];
                pen.text.chars().skip(pen.onset).collect::<String>() + &syl[n - 1].text
            }
        };
        Ok(Clausula(tail.chars().map(lower).collect()))
    }
}
