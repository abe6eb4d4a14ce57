//! Rule-based validators, the evaluation metrics, and a paired permutation test.
//!
//! Meter: each label is a family of strong-position sets over the verse's
//! syllables. A verse scores
//! `(stressed strong positions - 1.5 * stressed weak positions) / strong positions`
//! against the best member of each family. Scores are summed over verses
//! sharing a rhyme letter, the best mean wins if it reaches the threshold,
//! and ties go to the more frequent label.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{derive_rhyme_scheme, MeterLabel, RhymeScheme, NON_RHYMING};
use crate::formats::{self, DataFormat, ParsedStrophe};
use crate::phonology::{Phonology, StressPattern};

pub const DEFAULT_METER_THRESHOLD: f64 = 0.6;
pub const DEFAULT_REPETITIONS: usize = 100;

/// Weight of a stress on a weak position relative to a miss on a strong one.
const WEAK_STRESS_PENALTY: f64 = 1.5;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ValidationError {
    #[error("rhyme schemes cover 4 or 6 verses, got {0}")]
    VerseCount(usize),
    #[error("paired score vectors differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("a permutation test needs at least one repetition")]
    NoRepetitions,
}

/// Compositions of strong positions (1-based) for one label and verse length.
pub fn strong_position_sets(label: MeterLabel, n: usize) -> Vec<Vec<usize>> {
    use MeterLabel::*;
    let periodic = |start: usize, step: usize| -> Vec<Vec<usize>> {
        let s: Vec<usize> = (start..=n).step_by(step).collect();
        if s.is_empty() {
            vec![]
        } else {
            vec![s]
        }
    };
    match label {
        Iamb => periodic(2, 2),
        Trochee => periodic(1, 2),
        Dactyl => periodic(1, 3),
        Amphibrach => periodic(2, 3),
        Dactylotrochee => free_feet(1, n),
        DactylotrocheeAnacrusis => [2, 3].into_iter().flat_map(|s| free_feet(s, n)).collect(),
        Hexameter => fixed_feet(n, &[&[2, 3], &[2, 3], &[2, 3], &[2, 3], &[3]], 1),
        Pentameter => fixed_feet(n, &[&[2, 3], &[2, 3], &[1], &[3], &[3]], 0),
        NotRecognized => vec![],
    }
}

/// Strong positions from `start`, gaps of 2 or 3, ending 0 to 2 syllables
/// before the verse end.
fn free_feet(start: usize, n: usize) -> Vec<Vec<usize>> {
    fn go(pos: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        cur.push(pos);
        if n - pos <= 2 {
            out.push(cur.clone());
        }
        for g in [2, 3] {
            if pos + g <= n {
                go(pos + g, n, cur, out);
            }
        }
        cur.pop();
    }
    let mut out = Vec::new();
    if start <= n {
        go(start, n, &mut Vec::new(), &mut out);
    }
    out
}

/// Strong positions from 1 with one gap chosen from each slot and a fixed tail.
fn fixed_feet(n: usize, gaps: &[&[usize]], tail: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![1usize]];
    for options in gaps {
        out = out
            .into_iter()
            .flat_map(|s| {
                options.iter().map(move |g| {
                    let mut t = s.clone();
                    t.push(s.last().unwrap() + g);
                    t
                })
            })
            .collect();
    }
    out.retain(|s| s.last().unwrap() + tail == n);
    out
}

/// Best score of `pattern` against any member of the label's family, or
/// `None` when the family is empty for this length.
pub fn template_score(label: MeterLabel, pattern: &StressPattern) -> Option<f64> {
    let n = pattern.len();
    let total = (0..n).filter(|&i| pattern.is_stressed(i)).count() as f64;
    strong_position_sets(label, n)
        .iter()
        .map(|strong| {
            let hits = strong.iter().filter(|&&p| pattern.is_stressed(p - 1)).count() as f64;
            (hits - WEAK_STRESS_PENALTY * (total - hits)) / strong.len() as f64
        })
        .max_by(f64::total_cmp)
}

const SCORED: [MeterLabel; 8] = [
    MeterLabel::Iamb,
    MeterLabel::Trochee,
    MeterLabel::Dactyl,
    MeterLabel::Amphibrach,
    MeterLabel::Dactylotrochee,
    MeterLabel::DactylotrocheeAnacrusis,
    MeterLabel::Hexameter,
    MeterLabel::Pentameter,
];

fn best_label(sums: &[Option<f64>; 8], count: usize, threshold: f64) -> MeterLabel {
    let mut best: Option<(MeterLabel, f64)> = None;
    for (label, s) in SCORED.iter().zip(sums) {
        if let Some(s) = s {
            let mean = s / count as f64;
            if best.is_none_or(|(_, b)| mean > b) {
                best = Some((*label, mean));
            }
        }
    }
    match best {
        Some((l, m)) if m >= threshold => l,
        _ => MeterLabel::NotRecognized,
    }
}

fn scores(pattern: &StressPattern) -> [Option<f64>; 8] {
    SCORED.map(|l| template_score(l, pattern))
}

/// A verse on its own.
pub fn classify_meter(pattern: &StressPattern, threshold: f64) -> MeterLabel {
    best_label(&scores(pattern), 1, threshold)
}

/// Every verse of a strophe, pooling scores across verses that share a
/// rhyme letter. Without a scheme, or for X verses, each verse stands alone.
pub fn classify_strophe(patterns: &[StressPattern], scheme: Option<&RhymeScheme>, threshold: f64) -> Vec<MeterLabel> {
    let per_verse: Vec<[Option<f64>; 8]> = patterns.iter().map(scores).collect();
    let key = |i: usize| -> Option<char> {
        let s = scheme.filter(|s| s.len() == patterns.len())?;
        Some(s.letter_at(i)).filter(|&c| c != NON_RHYMING)
    };
    let mut groups: HashMap<char, Vec<usize>> = HashMap::new();
    for i in 0..patterns.len() {
        if let Some(c) = key(i) {
            groups.entry(c).or_default().push(i);
        }
    }
    (0..patterns.len())
        .map(|i| {
            let members = key(i).map_or_else(|| vec![i], |c| groups[&c].clone());
            let mut sums = [Some(0.0); 8];
            for &m in &members {
                for (acc, s) in sums.iter_mut().zip(&per_verse[m]) {
                    *acc = match (*acc, s) {
                        (Some(a), Some(s)) => Some(a + s),
                        _ => None,
                    };
                }
            }
            best_label(&sums, members.len(), threshold)
        })
        .collect()
}

/// Lowercase, drop vowel length, and merge y into i.
pub fn normalize_clausula(s: &str) -> String {
    s.chars()
        .flat_map(char::to_lowercase)
        .map(|c| match c {
            'á' => 'a',
            'é' => 'e',
            'í' | 'ý' | 'y' => 'i',
            'ó' => 'o',
            'ú' | 'ů' => 'u',
            c => c,
        })
        .collect()
}

pub fn rhymes(a: &str, b: &str, phonology: &Phonology) -> bool {
    match (phonology.ending_hint(a), phonology.ending_hint(b)) {
        (Ok(x), Ok(y)) => normalize_clausula(x.as_str()) == normalize_clausula(y.as_str()),
        _ => false,
    }
}

pub fn predict_scheme<S: AsRef<str>>(verses: &[S], phonology: &Phonology) -> Result<RhymeScheme, ValidationError> {
    let n = verses.len();
    if n != 4 && n != 6 {
        return Err(ValidationError::VerseCount(n));
    }
    let keys: Vec<Option<String>> = verses
        .iter()
        .map(|v| {
            phonology
                .ending_hint(v.as_ref())
                .ok()
                .map(|h| normalize_clausula(h.as_str()))
        })
        .collect();
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if keys[i].is_some() && keys[i] == keys[j] {
                let (a, b) = (root(&mut parent, i), root(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let groups: Vec<Option<usize>> = (0..n).map(|i| Some(root(&mut parent, i))).collect();
    Ok(derive_rhyme_scheme(&groups).expect("4 or 6 verses always yield a scheme"))
}

/// Share of distinct syllables among all syllables of the verses.
pub fn unique_syllable_ratio<S: AsRef<str>>(verses: &[S], phonology: &Phonology) -> Option<f64> {
    let syl: Vec<String> = verses
        .iter()
        .flat_map(|v| phonology.verse_syllables(v.as_ref()))
        .map(|s| s.to_lowercase())
        .collect();
    if syl.is_empty() {
        return None;
    }
    let distinct: HashSet<&String> = syl.iter().collect();
    Some(distinct.len() as f64 / syl.len() as f64)
}

/// One strophe to be scored: the scheme that was asked for and the text
/// that came back.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalItem {
    pub scheme: RhymeScheme,
    pub format: DataFormat,
    pub text: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct VerseScore {
    /// `None` when the format carries no verse annotation.
    pub syllables_ok: Option<bool>,
    pub hint_ok: Option<bool>,
    pub meter_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StropheScore {
    pub parsed: bool,
    pub verses: Vec<VerseScore>,
    pub unique: Option<f64>,
    pub rhyme_ok: bool,
    pub meter_ok: bool,
}

fn failed_strophe(n: usize, annotated: bool) -> StropheScore {
    let flag = annotated.then_some(false);
    StropheScore {
        parsed: false,
        verses: vec![
            VerseScore {
                syllables_ok: flag,
                hint_ok: flag,
                meter_ok: false
            };
            n
        ],
        unique: None,
        rhyme_ok: false,
        meter_ok: false,
    }
}

/// Scores an already parsed strophe against the requested scheme.
pub fn score_parsed(
    parsed: &ParsedStrophe,
    scheme: &RhymeScheme,
    phonology: &Phonology,
    threshold: f64,
) -> StropheScore {
    let texts = parsed.verse_texts();
    let consistency = formats::consistency_check(parsed, phonology);
    let patterns: Vec<StressPattern> = texts.iter().map(|t| phonology.stress_pattern(t)).collect();
    let predicted = classify_strophe(&patterns, Some(&parsed.header.scheme), threshold);
    let verses: Vec<VerseScore> = parsed
        .lines
        .iter()
        .enumerate()
        .map(|(i, line)| {
            let expected = line.annotation.as_ref().and_then(|a| a.meter).or(parsed.header.meter);
            let c = line.annotation.as_ref().map(|_| &consistency[i]);
            VerseScore {
                syllables_ok: c.map(|c| c.syllables_ok()),
                hint_ok: c.map(|c| c.hint_ok()),
                meter_ok: expected == Some(predicted[i]),
            }
        })
        .collect();
    StropheScore {
        parsed: true,
        unique: unique_syllable_ratio(&texts, phonology),
        rhyme_ok: predict_scheme(&texts, phonology).is_ok_and(|s| &s == scheme),
        meter_ok: verses.iter().all(|v| v.meter_ok),
        verses,
    }
}

pub fn score_item(item: &EvalItem, phonology: &Phonology, threshold: f64) -> StropheScore {
    match formats::parse(&item.text, item.format) {
        Ok(p) => score_parsed(&p, &item.scheme, phonology, threshold),
        Err(_) => failed_strophe(item.scheme.len(), item.format != DataFormat::Basic),
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
struct Tally {
    strophes: usize,
    parsed: usize,
    verses: usize,
    annotated: usize,
    syllables_ok: usize,
    hint_ok: usize,
    unique_sum: f64,
    unique_n: usize,
    rhyme_ok: usize,
    meter_ok: usize,
    verse_meter_ok: usize,
}

impl Tally {
    fn of(s: &StropheScore) -> Tally {
        let mut t = Tally {
            strophes: 1,
            parsed: s.parsed as usize,
            verses: s.verses.len(),
            rhyme_ok: s.rhyme_ok as usize,
            meter_ok: s.meter_ok as usize,
            ..Tally::default()
        };
        for v in &s.verses {
            if let (Some(a), Some(b)) = (v.syllables_ok, v.hint_ok) {
                t.annotated += 1;
                t.syllables_ok += a as usize;
                t.hint_ok += b as usize;
            }
            t.verse_meter_ok += v.meter_ok as usize;
        }
        if let Some(u) = s.unique {
            t.unique_sum = u;
            t.unique_n = 1;
        }
        t
    }

    fn merge(self, o: Tally) -> Tally {
        Tally {
            strophes: self.strophes + o.strophes,
            parsed: self.parsed + o.parsed,
            verses: self.verses + o.verses,
            annotated: self.annotated + o.annotated,
            syllables_ok: self.syllables_ok + o.syllables_ok,
            hint_ok: self.hint_ok + o.hint_ok,
            unique_sum: self.unique_sum + o.unique_sum,
            unique_n: self.unique_n + o.unique_n,
            rhyme_ok: self.rhyme_ok + o.rhyme_ok,
            meter_ok: self.meter_ok + o.meter_ok,
            verse_meter_ok: self.verse_meter_ok + o.verse_meter_ok,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub strophes: usize,
    pub parsed: usize,
    pub parse_failures: usize,
    pub verses: usize,
    /// Absent when no verse carried an annotation.
    pub num_syl: Option<f64>,
    pub end_acc: Option<f64>,
    /// Mean over parsed strophes.
    pub unique: Option<f64>,
    pub rhyme_acc: f64,
    /// Strophes whose every verse has the expected meter.
    pub meter_acc: f64,
    /// Verses with the expected meter.
    pub verse_meter_acc: f64,
}

fn ratio(a: usize, b: usize) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

impl MetricsReport {
    pub fn from_scores(scores: &[StropheScore]) -> MetricsReport {
        let t = scores.par_iter().map(Tally::of).reduce(Tally::default, Tally::merge);
        let annotated = (t.annotated > 0).then_some(t.annotated);
        MetricsReport {
            strophes: t.strophes,
            parsed: t.parsed,
            parse_failures: t.strophes - t.parsed,
            verses: t.verses,
            num_syl: annotated.map(|n| ratio(t.syllables_ok, n)),
            end_acc: annotated.map(|n| ratio(t.hint_ok, n)),
            unique: (t.unique_n > 0).then(|| t.unique_sum / t.unique_n as f64),
            rhyme_acc: ratio(t.rhyme_ok, t.strophes),
            meter_acc: ratio(t.meter_ok, t.strophes),
            verse_meter_acc: ratio(t.verse_meter_ok, t.verses),
        }
    }

    /// `key: value` lines; ratios as percentages, `n/a` when undefined.
    pub fn to_text(&self) -> String {
        let pct = |v: Option<f64>| v.map_or("n/a".to_string(), |v| format!("{:.2}%", v * 100.0));
        let mut out = String::new();
        let _ = writeln!(out, "strophes: {}", self.strophes);
        let _ = writeln!(out, "parsed: {}", self.parsed);
        let _ = writeln!(out, "parse_failures: {}", self.parse_failures);
        let _ = writeln!(out, "verses: {}", self.verses);
        let _ = writeln!(out, "num_syl: {}", pct(self.num_syl));
        let _ = writeln!(out, "end_acc: {}", pct(self.end_acc));
        let _ = writeln!(out, "unique: {}", pct(self.unique));
        let _ = writeln!(out, "rhyme_acc: {}", pct(Some(self.rhyme_acc)));
        let _ = writeln!(out, "meter_acc: {}", pct(Some(self.meter_acc)));
        let _ = writeln!(out, "verse_meter_acc: {}", pct(Some(self.verse_meter_acc)));
        out
    }
}

pub fn evaluate(items: &[EvalItem], phonology: &Phonology, threshold: f64) -> MetricsReport {
    let scores: Vec<StropheScore> = items.par_iter().map(|i| score_item(i, phonology, threshold)).collect();
    MetricsReport::from_scores(&scores)
}

fn flip_stat(diffs: &[f64], signs: impl Fn(usize) -> bool) -> f64 {
    let s: f64 = diffs
        .iter()
        .enumerate()
        .map(|(i, d)| if signs(i) { -d } else { *d })
        .sum();
    (s / diffs.len() as f64).abs()
}

/// Two-sided paired permutation test on `|mean(a - b)|`.
///
/// Sign patterns are counted up to a global flip, which leaves the
/// statistic unchanged. When there are no more of them than `repetitions`
/// all are enumerated; otherwise `repetitions` distinct ones are drawn.
pub fn permutation_test(a: &[f64], b: &[f64], repetitions: usize, seed: u64) -> Result<f64, ValidationError> {
    if a.len() != b.len() {
        return Err(ValidationError::LengthMismatch(a.len(), b.len()));
    }
    if repetitions == 0 {
        return Err(ValidationError::NoRepetitions);
    }
    let n = a.len();
    if n == 0 {
        return Ok(1.0);
    }
    let diffs: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let observed = flip_stat(&diffs, |_| false) - 1e-12;
    let free = n - 1;
    if free < 63 && (1u64 << free) <= repetitions as u64 {
        let total = 1u64 << free;
        let hits = (0..total)
            .filter(|&m| flip_stat(&diffs, |i| i > 0 && m >> (i - 1) & 1 == 1) >= observed)
            .count();
        return Ok(hits as f64 / total as f64);
    }
    let words = free.div_ceil(64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen: HashSet<Vec<u64>> = HashSet::with_capacity(repetitions);
    let mut hits = 0;
    while seen.len() < repetitions {
        let mut pattern: Vec<u64> = (0..words).map(|_| rng.gen()).collect();
        if !free.is_multiple_of(64) {
            pattern[words - 1] &= (1u64 << (free % 64)) - 1;
        }
        if !seen.insert(pattern.clone()) {
            continue;
        }
        let bit = |i: usize| i > 0 && pattern[(i - 1) / 64] >> ((i - 1) % 64) & 1 == 1;
        if flip_stat(&diffs, bit) >= observed {
            hits += 1;
        }
    }
    Ok(hits as f64 / repetitions as f64)
}

/// Exact two-sided p-value over all `2^n` sign patterns.
pub fn exact_permutation_p(a: &[f64], b: &[f64]) -> Result<f64, ValidationError> {
    if a.len() != b.len() {
        return Err(ValidationError::LengthMismatch(a.len(), b.len()));
    }
    let diffs: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let n = diffs.len();
    assert!(n < 31, "exact enumeration is only for small samples");
    let observed = flip_stat(&diffs, |_| false) - 1e-12;
    let total = 1u64 << n;
    let hits = (0..total)
        .filter(|&m| flip_stat(&diffs, |i| m >> i & 1 == 1) >= observed)
        .count();
    Ok(hits as f64 / total as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pat(s: &str) -> StressPattern {
        s.parse().unwrap()
    }

    const SHIP: [&str; 4] = [
        "Tvá loď jde po vysokém moři,",
        "v ně brázdu jako stříbro reje,",
        "svou přídu v modré vlny noří",
        "a bok svůj pěnné do peřeje.",
    ];

    #[test]
    fn meter_examples() {
        let t = DEFAULT_METER_THRESHOLD;
        assert_eq!(classify_meter(&pat("x X x X x x x X x"), t), MeterLabel::Iamb);
        assert_eq!(classify_meter(&pat("X x X x X x"), t), MeterLabel::Trochee);
        assert_eq!(classify_meter(&pat("x x x x x x x x x"), t), MeterLabel::NotRecognized);
        for l in SCORED {
            assert!(template_score(l, &pat("x x x x x x x x x")).is_none_or(|s| s < t));
        }
        let p = Phonology::new();
        let patterns: Vec<StressPattern> = SHIP.iter().map(|v| p.stress_pattern(v)).collect();
        let scheme = RhymeScheme::new("ABAB").unwrap();
        assert_eq!(classify_strophe(&patterns, Some(&scheme), t), [MeterLabel::Iamb; 4]);
    }

    #[test]
    fn family_shapes() {
        assert_eq!(strong_position_sets(MeterLabel::Dactyl, 8), [vec![1, 4, 7]]);
        assert_eq!(strong_position_sets(MeterLabel::Amphibrach, 8), [vec![2, 5, 8]]);
        // 1 + four gaps of 2..3 + 3 + 1 syllable tail
        let h = strong_position_sets(MeterLabel::Hexameter, 17);
        assert_eq!(h.len(), 1);
        assert_eq!(h[0], [1, 4, 7, 10, 13, 16]);
        assert_eq!(strong_position_sets(MeterLabel::Hexameter, 13).len(), 1);
        assert_eq!(strong_position_sets(MeterLabel::Hexameter, 15).len(), 6);
        assert_eq!(
            strong_position_sets(MeterLabel::Pentameter, 14),
            [vec![1, 4, 7, 8, 11, 14]]
        );
        for s in strong_position_sets(MeterLabel::Dactylotrochee, 11) {
            assert_eq!(s[0], 1);
            assert!(s.windows(2).all(|w| (2..=3).contains(&(w[1] - w[0]))));
            assert!(11 - s.last().unwrap() <= 2);
        }
    }

    #[test]
    fn rhyme_examples() {
        let p = Phonology::new();
        assert!(rhymes(SHIP[0], SHIP[2], &p));
        assert!(rhymes(SHIP[1], SHIP[3], &p));
        assert!(!rhymes(SHIP[0], SHIP[1], &p));
        assert_eq!(predict_scheme(&SHIP, &p).unwrap().as_str(), "ABAB");
        let four = ["pes", "kočka", "strom", "dům"];
        assert_eq!(predict_scheme(&four, &p).unwrap().as_str(), "XXXX");
        let pairs = [SHIP[0], SHIP[2], SHIP[1], SHIP[3]];
        assert_eq!(predict_scheme(&pairs, &p).unwrap().as_str(), "AABB");
        assert_eq!(predict_scheme(&SHIP[..3], &p), Err(ValidationError::VerseCount(3)));
    }

    #[test]
    fn predict_scheme_is_transitive() {
        let p = Phonology::new();
        // moři ~ noří ~ hoři, so one group even if compared pairwise
        let v = ["po moři", "v lese", "co noří", "hoři"];
        assert_eq!(predict_scheme(&v, &p).unwrap().as_str(), "AXAA");
    }

    fn ship_text(format: DataFormat) -> String {
        let p = Phonology::new();
        let s = crate::formats::tests_support::ship_strophe();
        crate::formats::encode(&s, format, &p).unwrap()
    }

    #[test]
    fn evaluate_gold_and_perturbed() {
        let p = Phonology::new();
        let scheme = RhymeScheme::new("ABAB").unwrap();
        let gold = EvalItem {
            scheme: scheme.clone(),
            format: DataFormat::MeterVerse,
            text: ship_text(DataFormat::MeterVerse),
        };
        let r = evaluate(std::slice::from_ref(&gold), &p, DEFAULT_METER_THRESHOLD);
        assert_eq!((r.num_syl, r.end_acc), (Some(1.0), Some(1.0)));
        assert_eq!((r.rhyme_acc, r.meter_acc, r.verse_meter_acc), (1.0, 1.0, 1.0));

        let mut bad = gold.clone();
        bad.text = bad.text.replacen("J # 9 # eje # v ně", "J # 8 # eje # v ně", 1);
        let r = evaluate(&[bad], &p, DEFAULT_METER_THRESHOLD);
        assert_eq!(r.num_syl, Some(0.75));
        assert_eq!(r.end_acc, Some(1.0));

        let broken = EvalItem {
            text: "# ABAB # 1900\nnot an annotated line\n".into(),
            ..gold.clone()
        };
        let r = evaluate(&[gold.clone(), broken], &p, DEFAULT_METER_THRESHOLD);
        assert_eq!((r.strophes, r.parsed, r.parse_failures, r.verses), (2, 1, 1, 8));
        assert_eq!(r.num_syl, Some(0.5));
        assert_eq!(r.rhyme_acc, 0.5);

        let basic = EvalItem {
            format: DataFormat::Basic,
            text: ship_text(DataFormat::Basic),
            ..gold
        };
        let r = evaluate(&[basic], &p, DEFAULT_METER_THRESHOLD);
        assert_eq!((r.num_syl, r.end_acc), (None, None));
        assert_eq!(r.meter_acc, 1.0);
    }

    #[test]
    fn unique_ratio() {
        let p = Phonology::new();
        assert_eq!(unique_syllable_ratio(&["ma ma ma", "ma"], &p), Some(0.25));
        assert_eq!(unique_syllable_ratio(&["pes"], &p), Some(1.0));
        assert_eq!(unique_syllable_ratio::<&str>(&[], &p), None);
    }

    #[test]
    fn permutation_examples() {
        let a = [0.3, 0.9, 0.1, 0.5];
        assert_eq!(permutation_test(&a, &a, 100, 1).unwrap(), 1.0);
        let ones = [1.0; 20];
        let zeros = [0.0; 20];
        let p = permutation_test(&ones, &zeros, 100, 1).unwrap();
        assert!(p < 0.05);
        assert_eq!(
            permutation_test(&ones, &zeros, 100, 9),
            permutation_test(&ones, &zeros, 100, 9)
        );
        assert_eq!(
            permutation_test(&ones, &zeros[..3], 100, 9),
            Err(ValidationError::LengthMismatch(20, 3))
        );
        // small n enumerates, so it is exact
        let b = [0.1, 0.2, 0.4, 0.0];
        assert_eq!(
            permutation_test(&a, &b, 100, 3).unwrap(),
            exact_permutation_p(&a, &b).unwrap()
        );
        assert_eq!(exact_permutation_p(&[1.0; 3], &[0.0; 3]).unwrap(), 0.25);
    }

    fn perfect(strong: &[usize], n: usize) -> StressPattern {
        use crate::phonology::Stress;
        StressPattern(
            (1..=n)
                .map(|i| {
                    if strong.contains(&i) {
                        Stress::Stressed
                    } else {
                        Stress::Unstressed
                    }
                })
                .collect(),
        )
    }

    proptest! {
        #[test]
        fn exact_template_match_wins(label_ix in 0usize..8, n in 4usize..20, pick in any::<prop::sample::Index>()) {
            let label = SCORED[label_ix];
            let sets = strong_position_sets(label, n);
            prop_assume!(!sets.is_empty());
            let pattern = perfect(&sets[pick.index(sets.len())], n);
            let perfect_labels: Vec<MeterLabel> =
                SCORED.into_iter().filter(|&l| template_score(l, &pattern) == Some(1.0)).collect();
            prop_assert!(perfect_labels.contains(&label));
            prop_assert_eq!(classify_meter(&pattern, DEFAULT_METER_THRESHOLD), perfect_labels[0]);
        }

        #[test]
        fn rhymes_symmetric_and_reflexive(a in "[a-zřáíéůě ]{1,20}", b in "[a-zřáíéůě ]{1,20}") {
            let p = Phonology::new();
            prop_assert_eq!(rhymes(&a, &b, &p), rhymes(&b, &a, &p));
            if p.ending_hint(&a).is_ok() {
                prop_assert!(rhymes(&a, &a, &p));
            }
        }

        #[test]
        fn p_values_in_unit_interval(v in proptest::collection::vec((0.0f64..1.0, 0.0f64..1.0), 1..30), seed in any::<u64>()) {
            let (a, b): (Vec<f64>, Vec<f64>) = v.into_iter().unzip();
            let p = permutation_test(&a, &b, 100, seed).unwrap();
            prop_assert!((0.0..=1.0).contains(&p));
        }
    }
}
