//! Writes a deterministic synthetic corpus of Czech-like strophes in the
//! ingest JSONL schema.
//!
//! Verses are assembled from a small lexicon so that polysyllables start on
//! the strong positions of the chosen meter, then kept only if this
//! crate's own phonology agrees: syllable count, ending, and meter class.
//! Rhyme partners share a normalized clausula and the whole strophe must
//! yield its scheme back under `predict_scheme`.

mod lexicon;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Parser;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use verseforge::corpus::{MeterLabel, RhymeScheme, NON_RHYMING};
use verseforge::phonology::Phonology;
use verseforge::validation::{self, normalize_clausula, DEFAULT_METER_THRESHOLD};

#[derive(Parser)]
#[command(about = "Generate a synthetic verse corpus (JSONL, one poem per line)")]
struct Args {
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 650)]
    poems: usize,
    #[arg(long, default_value_t = 2024)]
    seed: u64,
}

const METERS: [(MeterLabel, f64); 7] = [
    (MeterLabel::Iamb, 50.0),
    (MeterLabel::Trochee, 36.0),
    (MeterLabel::Dactyl, 4.5),
    (MeterLabel::Amphibrach, 3.0),
    (MeterLabel::Dactylotrochee, 2.5),
    (MeterLabel::DactylotrocheeAnacrusis, 0.5),
    (MeterLabel::Hexameter, 0.5),
];

const SCHEMES: [(&str, f64); 16] = [
    ("ABAB", 26.0),
    ("XAXA", 14.0),
    ("AABB", 14.0),
    ("AABBCC", 7.0),
    ("ABBA", 6.0),
    ("XXXX", 5.0),
    ("ABABCC", 4.0),
    ("AABCCB", 4.0),
    ("AXAX", 3.0),
    ("ABCABC", 2.0),
    ("AAXX", 2.0),
    ("XAAX", 2.0),
    ("ABCCBA", 2.0),
    ("AAAA", 2.0),
    ("XXXXXX", 2.0),
    ("ABABAB", 2.0),
];

/// (bucket start or None, weight)
const YEARS: [(Option<i32>, f64); 9] = [
    (Some(1800), 3.0),
    (Some(1820), 6.0),
    (Some(1840), 10.0),
    (Some(1860), 15.0),
    (Some(1880), 20.0),
    (Some(1900), 22.0),
    (Some(1920), 18.0),
    (Some(1940), 5.0),
    (None, 0.4),
];

fn lengths(meter: MeterLabel) -> Vec<usize> {
    use MeterLabel::*;
    match meter {
        Iamb => vec![8, 9, 10, 11],
        Trochee => vec![7, 8, 9],
        Dactyl => vec![7, 8, 10, 11],
        Amphibrach => vec![8, 9, 11],
        Dactylotrochee => vec![8, 9, 10, 11],
        DactylotrocheeAnacrusis => vec![9, 10, 11, 12],
        Hexameter => (13..=17).collect(),
        NotRecognized | Pentameter => (6..=12).collect(),
    }
}

fn pick<'a, T>(rng: &mut impl Rng, items: &'a [(T, f64)]) -> &'a T {
    &items.choose_weighted(rng, |(_, w)| *w).unwrap().0
}

struct Lexicon {
    function: Vec<&'static str>,
    frequent: Vec<&'static str>,
    mono: Vec<&'static str>,
    preps: Vec<&'static str>,
    clitics: Vec<&'static str>,
    /// Polysyllables by syllable count.
    by_len: BTreeMap<usize, Vec<&'static str>>,
    /// Normalized clausula to polysyllables carrying it.
    families: Vec<(String, Vec<(&'static str, usize)>)>,
}

impl Lexicon {
    fn new(ph: &Phonology) -> Lexicon {
        let split = |s: &'static str| -> Vec<&'static str> {
            let mut v: Vec<&str> = s.split_whitespace().collect();
            v.sort_unstable();
            v.dedup();
            v
        };
        let mut by_len: BTreeMap<usize, Vec<&str>> = BTreeMap::new();
        let mut fam: BTreeMap<String, Vec<(&str, usize)>> = BTreeMap::new();
        for w in split(lexicon::WORDS) {
            let n = ph.syllable_count(w);
            if n < 2 {
                continue;
            }
            by_len.entry(n).or_default().push(w);
            let key = normalize_clausula(ph.ending_hint(w).unwrap().as_str());
            fam.entry(key).or_default().push((w, n));
        }
        Lexicon {
            function: split(lexicon::FUNCTION),
            frequent: split(lexicon::FREQUENT),
            mono: split(lexicon::CONTENT_MONO)
                .into_iter()
                .filter(|w| ph.syllable_count(w) == 1)
                .collect(),
            preps: split(lexicon::PREPOSITIONS),
            clitics: split(lexicon::CLITICS),
            by_len,
            families: fam.into_iter().collect(),
        }
    }

    fn weak_mono(&self, rng: &mut impl Rng) -> &'static str {
        let roll: f64 = rng.gen();
        if roll < 0.5 {
            self.frequent.choose(rng).unwrap()
        } else if roll < 0.9 {
            self.function.choose(rng).unwrap()
        } else {
            self.mono.choose(rng).unwrap()
        }
    }

    /// A stress unit of `len` syllables with stress on its first syllable.
    fn unit(&self, len: usize, rng: &mut impl Rng) -> Option<String> {
        if len == 1 {
            return Some(
                if rng.gen_bool(0.2) {
                    self.mono.choose(rng)
                } else {
                    self.function.choose(rng)
                }?
                .to_string(),
            );
        }
        let roll: f64 = rng.gen();
        if roll < 0.18 && len >= 2 {
            let prep = self.preps.choose(rng)?;
            let rest = if len == 2 {
                self.mono.choose(rng)?
            } else {
                self.by_len.get(&(len - 1))?.choose(rng)?
            };
            return Some(format!("{prep} {rest}"));
        }
        let word = self.by_len.get(&len)?.choose(rng)?;
        if roll < 0.35 {
            return Some(format!("{} {word}", self.clitics.choose(rng)?));
        }
        Some(word.to_string())
    }
}

struct Gen<'a> {
    ph: &'a Phonology,
    lex: &'a Lexicon,
}

impl Gen<'_> {
    fn accept(&self, text: &str, meter: MeterLabel, n: usize, key: &str) -> bool {
        if self.ph.syllable_count(text) != n {
            return false;
        }
        match self.ph.ending_hint(text) {
            Ok(h) if normalize_clausula(h.as_str()) == key => {}
            _ => return false,
        }
        let pattern = self.ph.stress_pattern(text);
        match meter {
            MeterLabel::Hexameter | MeterLabel::Pentameter => {
                validation::template_score(meter, &pattern).is_some_and(|s| s >= DEFAULT_METER_THRESHOLD)
            }
            _ => validation::classify_meter(&pattern, DEFAULT_METER_THRESHOLD) == meter,
        }
    }

    fn verse(
        &self,
        meter: MeterLabel,
        lens: &[usize],
        end: (&str, usize),
        key: &str,
        rng: &mut impl Rng,
    ) -> Option<String> {
        let (end_word, k) = end;
        let attempts = if meter == MeterLabel::NotRecognized { 400 } else { 80 };
        'attempt: for _ in 0..attempts {
            let n = *lens.choose(rng)?;
            if n <= k {
                continue;
            }
            let start = n - k + 1;
            let mut units: Vec<String> = Vec::new();
            if meter == MeterLabel::NotRecognized {
                let mut pos = 1;
                while pos < start {
                    let len = rng.gen_range(2..=5).min(start - pos);
                    let Some(u) = self.lex.unit(len, rng) else {
                        continue 'attempt;
                    };
                    units.push(u);
                    pos += len;
                }
            } else {
                let sets: Vec<Vec<usize>> = validation::strong_position_sets(meter, n)
                    .into_iter()
                    .filter(|s| s.contains(&start) && s.iter().all(|&p| p <= start))
                    .collect();
                let Some(strong) = sets.choose(rng) else { continue };
                let mut pos = 1;
                while pos < start {
                    if strong.contains(&pos) {
                        let next = strong.iter().copied().find(|&p| p > pos).unwrap_or(start);
                        let gap = next - pos;
                        let room = start - pos;
                        let options = [(gap, 0.5), (gap + 1, 0.1), (gap + 2, 0.2), (1, 0.2)];
                        let len = *pick(rng, &options).min(&room);
                        let Some(u) = self.lex.unit(len, rng) else {
                            continue 'attempt;
                        };
                        units.push(u);
                        pos += len;
                    } else {
                        units.push(self.lex.weak_mono(rng).to_string());
                        pos += 1;
                    }
                }
            }
            units.push(end_word.to_string());
            let text = units.join(" ");
            if self.accept(&text, meter, n, key) {
                return Some(text);
            }
        }
        None
    }

    /// Verse texts with their rhyme letter, or `None` if the draw failed.
    fn strophe(
        &self,
        scheme: &RhymeScheme,
        meter: MeterLabel,
        lens: &[usize],
        rng: &mut impl Rng,
    ) -> Option<Vec<String>> {
        let letters: Vec<char> = scheme.letters().collect();
        let mut need: HashMap<char, usize> = HashMap::new();
        for &l in &letters {
            *need.entry(l).or_default() += 1;
        }
        let fits = |k: usize| {
            lens.iter().any(|&n| {
                n > k
                    && validation::strong_position_sets(meter, n)
                        .iter()
                        .any(|s| s.last() == Some(&(n - k + 1)))
            })
        };
        let families: Vec<(&str, Vec<(&str, usize)>)> = self
            .lex
            .families
            .iter()
            .map(|(key, words)| {
                (
                    key.as_str(),
                    words.iter().copied().filter(|&(_, k)| fits(k)).collect::<Vec<_>>(),
                )
            })
            .filter(|(_, words)| !words.is_empty())
            .collect();
        let mut used: HashSet<usize> = HashSet::new();
        let mut ends: HashMap<char, Vec<(&str, usize)>> = HashMap::new();
        let mut keys: HashMap<char, usize> = HashMap::new();
        let mut distinct: Vec<char> = need.keys().copied().filter(|&c| c != NON_RHYMING).collect();
        distinct.sort_unstable();
        for c in distinct {
            let fams: Vec<usize> = (0..families.len())
                .filter(|i| !used.contains(i) && families[*i].1.len() >= need[&c])
                .collect();
            let f = *fams.choose(rng)?;
            used.insert(f);
            let mut words = families[f].1.clone();
            words.shuffle(rng);
            ends.insert(c, words);
            keys.insert(c, f);
        }
        let mut out = Vec::with_capacity(letters.len());
        for &l in &letters {
            let (end, f) = if l == NON_RHYMING {
                let fams: Vec<usize> = (0..families.len()).filter(|i| !used.contains(i)).collect();
                let f = *fams.choose(rng)?;
                used.insert(f);
                (*families[f].1.choose(rng)?, f)
            } else {
                (ends.get_mut(&l)?.pop()?, keys[&l])
            };
            out.push(self.verse(meter, lens, end, families[f].0, rng)?);
        }
        let predicted = validation::predict_scheme(&out, self.ph).ok()?;
        (&predicted == scheme).then_some(out)
    }
}

fn decorate(verses: &mut [String], rng: &mut impl Rng) {
    let last = verses.len() - 1;
    for v in verses.iter_mut() {
        let words: Vec<&str> = v.split(' ').collect();
        let mut out = String::new();
        for (j, w) in words.iter().enumerate() {
            if j > 0 {
                out.push(' ');
            }
            out.push_str(w);
            let clitic = w.chars().count() == 1 && !w.chars().any(verseforge::phonology::is_vowel);
            if j + 1 < words.len() && !clitic && rng.gen_bool(0.1) {
                out.push(',');
            }
        }
        *v = out;
    }
    for (i, v) in verses.iter_mut().enumerate() {
        if i == 0 {
            let mut c = v.chars();
            let first: String = c.next().map(|f| f.to_uppercase().collect()).unwrap_or_default();
            *v = first + c.as_str();
        }
        let punct = if i == last {
            match rng.gen_range(0..10) {
                0..=5 => ".",
                6 | 7 => "!",
                _ => "",
            }
        } else {
            match rng.gen_range(0..10) {
                0..=3 => ",",
                4 | 5 => ".",
                6 => ";",
                7 => "!",
                _ => "",
            }
        };
        v.push_str(punct);
    }
}

fn main() -> Result<()> {
    let args = Args::parse();
    let ph = Phonology::new();
    let lex = Lexicon::new(&ph);
    let g = Gen { ph: &ph, lex: &lex };
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let schemes: Vec<(RhymeScheme, f64)> = SCHEMES
        .iter()
        .map(|(s, w)| (RhymeScheme::new(s).unwrap(), *w))
        .collect();

    let file = File::create(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    let mut out = BufWriter::new(file);
    let (mut strophes, mut verses, mut failures) = (0usize, 0usize, 0usize);
    let mut failed_by: BTreeMap<(char, String), usize> = BTreeMap::new();
    for _ in 0..args.poems {
        let meter = *pick(&mut rng, &METERS);
        let all = lengths(meter);
        let lens: Vec<usize> = if all.len() > 2 && !matches!(meter, MeterLabel::Hexameter | MeterLabel::NotRecognized) {
            let i = rng.gen_range(0..all.len() - 1);
            all[i..i + 2].to_vec()
        } else {
            all
        };
        let year = pick(&mut rng, &YEARS).map(|b| b + rng.gen_range(0..20));
        let poem_scheme = pick(&mut rng, &schemes).clone();
        let mut group = 0i64;
        let mut body = Vec::new();
        for _ in 0..rng.gen_range(2..=5) {
            let scheme = if rng.gen_bool(0.85) {
                poem_scheme.clone()
            } else {
                pick(&mut rng, &schemes).clone()
            };
            let Some(mut texts) = (0..30).find_map(|_| g.strophe(&scheme, meter, &lens, &mut rng)) else {
                failures += 1;
                *failed_by.entry((meter.letter(), scheme.to_string())).or_insert(0usize) += 1;
                continue;
            };
            decorate(&mut texts, &mut rng);
            let mut ids: HashMap<char, i64> = HashMap::new();
            let records: Vec<_> = texts
                .iter()
                .zip(scheme.letters())
                .map(|(t, l)| {
                    let rhyme = (l != NON_RHYMING).then(|| {
                        *ids.entry(l).or_insert_with(|| {
                            group += 1;
                            group
                        })
                    });
                    json!({"text": t, "rhyme": rhyme, "meter": meter.letter().to_string()})
                })
                .collect();
            verses += records.len();
            strophes += 1;
            body.push(records);
        }
        if body.is_empty() {
            continue;
        }
        writeln!(out, "{}", json!({"year": year, "strophes": body}))?;
    }
    out.flush()?;
    eprintln!("{strophes} strophes, {verses} verses, {failures} failed draws");
    for ((m, sch), n) in &failed_by {
        eprintln!("  failed {m} {sch}: {n}");
    }
    if strophes == 0 {
        bail!("no strophe could be generated");
    }
    Ok(())
}
