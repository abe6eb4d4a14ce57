//! Annotation-interleaved strophe text formats.
//!
//! Every line ends with `\n`. Fields are separated by exactly ` # `.
//!
//! ```text
//! BASIC        # ABAB # 1900 # J
//!              Tvá loď jde po vysokém moři,
//! VERSE_PAR    # ABAB # 1900 # J
//!              9 # oři # Tvá loď jde po vysokém moři,
//! METER_VERSE  # ABAB # 1900
//!              J # 9 # oři # Tvá loď jde po vysokém moři,
//! ```
//!
//! The header year is the bucket start or `NaN`. The header meter of BASIC
//! and VERSE_PAR is the most common verse meter, ties broken by
//! [`MeterLabel::ALL`] order. Verse lines are split on the first two
//! (VERSE_PAR) or three (METER_VERSE) separators only, so verse text may
//! itself contain `#`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{MeterLabel, RhymeScheme, Strophe, YearBucket};
use crate::phonology::{Phonology, PhonologyError};

pub const SEP: &str = " # ";

/// Label line that precedes machine-generated output.
pub const MACHINE_LABEL: &str = "# machine-generated";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: malformed header: {reason}")]
    Header { line: usize, reason: String },
    #[error("line {line}: expected {expected} annotation fields before the verse text")]
    FieldCount { line: usize, expected: usize },
    #[error("line {line}: syllable count {value:?} is not a positive integer")]
    SyllableCount { line: usize, value: String },
    #[error("line {line}: unknown meter letter {value:?}")]
    Meter { line: usize, value: String },
    #[error("line {line}: empty {what}")]
    Empty { line: usize, what: &'static str },
    #[error("scheme has {expected} verses but {found} were found")]
    VerseCount { expected: usize, found: usize },
    #[error("cannot annotate verse {verse}: {reason}")]
    Annotate { verse: usize, reason: String },
    #[error("unknown data format {0:?}")]
    UnknownFormat(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DataFormat {
    Basic,
    VersePar,
    MeterVerse,
}

impl DataFormat {
    pub const ALL: [DataFormat; 3] = [DataFormat::Basic, DataFormat::VersePar, DataFormat::MeterVerse];

    pub fn name(self) -> &'static str {
        match self {
            DataFormat::Basic => "basic",
            DataFormat::VersePar => "verse_par",
            DataFormat::MeterVerse => "meter_verse",
        }
    }

    /// Annotation fields preceding each verse's text.
    pub fn verse_fields(self) -> usize {
        match self {
            DataFormat::Basic => 0,
            DataFormat::VersePar => 2,
            DataFormat::MeterVerse => 3,
        }
    }

    pub fn has_header_meter(self) -> bool {
        self != DataFormat::MeterVerse
    }
}

impl fmt::Display for DataFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DataFormat {
    type Err = FormatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        DataFormat::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| FormatError::UnknownFormat(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineAnnotation {
    /// Present only in METER_VERSE.
    pub meter: Option<MeterLabel>,
    pub syllables: u32,
    pub hint: String,
}

impl LineAnnotation {
    /// The verse-line prefix, separator included: `J # 9 # oři # `.
    pub fn prefix(&self) -> String {
        match self.meter {
            Some(m) => format!("{m}{SEP}{}{SEP}{}{SEP}", self.syllables, self.hint),
            None => format!("{}{SEP}{}{SEP}", self.syllables, self.hint),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StropheHeader {
    pub scheme: RhymeScheme,
    pub year: YearBucket,
    /// Present only in BASIC and VERSE_PAR.
    pub meter: Option<MeterLabel>,
}

impl StropheHeader {
    pub fn render(&self) -> String {
        match self.meter {
            Some(m) => format!("# {}{SEP}{}{SEP}{m}", self.scheme, self.year),
            None => format!("# {}{SEP}{}", self.scheme, self.year),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedLine {
    /// `None` for BASIC.
    pub annotation: Option<LineAnnotation>,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedStrophe {
    pub header: StropheHeader,
    pub lines: Vec<ParsedLine>,
}

impl ParsedStrophe {
    pub fn verse_texts(&self) -> Vec<&str> {
        self.lines.iter().map(|l| l.text.as_str()).collect()
    }
}

/// Most common meter; ties go to the earlier label in [`MeterLabel::ALL`].
pub fn modal_meter(meters: &[MeterLabel]) -> MeterLabel {
    let mut counts = [0usize; 9];
    for &m in meters {
        counts[MeterLabel::ALL.iter().position(|&x| x == m).unwrap()] += 1;
    }
    let best = counts.iter().copied().max().unwrap_or(0);
    MeterLabel::ALL[counts.iter().position(|&c| c == best).unwrap_or(0)]
}

/// Syllable count and ending hint of one verse, plus the meter when the
/// format carries it.
pub fn annotate_verse(
    text: &str,
    meter: MeterLabel,
    format: DataFormat,
    phonology: &Phonology,
) -> Result<LineAnnotation, PhonologyError> {
    let hint = phonology.ending_hint(text)?;
    Ok(LineAnnotation {
        meter: (format == DataFormat::MeterVerse).then_some(meter),
        syllables: phonology.syllable_count(text) as u32,
        hint: hint.0,
    })
}

pub fn header_for(strophe: &Strophe, format: DataFormat) -> StropheHeader {
    StropheHeader {
        scheme: strophe.scheme.clone(),
        year: strophe.year,
        meter: format.has_header_meter().then(|| modal_meter(&strophe.meters())),
    }
}

pub fn encode(strophe: &Strophe, format: DataFormat, phonology: &Phonology) -> Result<String, FormatError> {
    let mut out = header_for(strophe, format).render();
    out.push('\n');
    for (i, v) in strophe.verses.iter().enumerate() {
        if format != DataFormat::Basic {
            let ann = annotate_verse(&v.text, v.meter, format, phonology).map_err(|e| FormatError::Annotate {
                verse: i + 1,
                reason: e.to_string(),
            })?;
            out.push_str(&ann.prefix());
        }
        out.push_str(&v.text);
        out.push('\n');
    }
    Ok(out)
}

pub fn parse_header(line: &str, format: DataFormat, line_no: usize) -> Result<StropheHeader, FormatError> {
    let bad = |reason: String| FormatError::Header { line: line_no, reason };
    let body = line
        .trim_end()
        .strip_prefix('#')
        .ok_or_else(|| bad("header must start with `#`".into()))?
        .trim_start();
    let body = body.strip_suffix(" #").unwrap_or(body);
    let fields: Vec<&str> = body.split(SEP).collect();
    let expected = if format.has_header_meter() { 3 } else { 2 };
    if fields.len() != expected {
        return Err(bad(format!("expected {expected} fields, found {}", fields.len())));
    }
    let scheme = RhymeScheme::new(fields[0]).map_err(|e| bad(e.to_string()))?;
    let year = fields[1]
        .parse()
        .map_err(|e: crate::corpus::CorpusError| bad(e.to_string()))?;
    let meter = match fields.get(2) {
        Some(m) => Some(m.parse().map_err(|_| FormatError::Meter {
            line: line_no,
            value: m.to_string(),
        })?),
        None => None,
    };
    Ok(StropheHeader { scheme, year, meter })
}

/// Parses one verse line. `line_no` is only used for error messages.
pub fn parse_verse_line(line: &str, format: DataFormat, line_no: usize) -> Result<ParsedLine, FormatError> {
    let line = line.trim_end();
    let n = format.verse_fields();
    let fields: Vec<&str> = line.splitn(n + 1, SEP).collect();
    if fields.len() != n + 1 {
        return Err(FormatError::FieldCount {
            line: line_no,
            expected: n,
        });
    }
    let text = fields[n];
    if text.trim().is_empty() {
        return Err(FormatError::Empty {
            line: line_no,
            what: "verse text",
        });
    }
    if n == 0 {
        return Ok(ParsedLine {
            annotation: None,
            text: text.to_string(),
        });
    }
    let (meter, rest) = if format == DataFormat::MeterVerse {
        let m = fields[0].parse().map_err(|_| FormatError::Meter {
            line: line_no,
            value: fields[0].to_string(),
        })?;
        (Some(m), &fields[1..n])
    } else {
        (None, &fields[..n])
    };
    let syllables: u32 = match rest[0].parse() {
        Ok(s) if s > 0 => s,
        _ => {
            return Err(FormatError::SyllableCount {
                line: line_no,
                value: rest[0].to_string(),
            })
        }
    };
    if rest[1].trim().is_empty() {
        return Err(FormatError::Empty {
            line: line_no,
            what: "ending hint",
        });
    }
    Ok(ParsedLine {
        annotation: Some(LineAnnotation {
            meter,
            syllables,
            hint: rest[1].to_string(),
        }),
        text: text.to_string(),
    })
}

/// Parses a whole strophe. A leading [`MACHINE_LABEL`] line and trailing
/// blank lines are ignored; the verse count must match the scheme.
pub fn parse(text: &str, format: DataFormat) -> Result<ParsedStrophe, FormatError> {
    let mut lines: Vec<(usize, &str)> = text.lines().enumerate().map(|(i, l)| (i + 1, l)).collect();
    while lines.last().is_some_and(|(_, l)| l.trim().is_empty()) {
        lines.pop();
    }
    let mut iter = lines.into_iter().peekable();
    if iter.peek().is_some_and(|(_, l)| l.trim_end() == MACHINE_LABEL) {
        iter.next();
    }
    let (hline, head) = iter.next().ok_or(FormatError::Header {
        line: 1,
        reason: "no header line".into(),
    })?;
    let header = parse_header(head, format, hline)?;
    let lines = iter
        .map(|(no, l)| parse_verse_line(l, format, no))
        .collect::<Result<Vec<_>, _>>()?;
    if lines.len() != header.scheme.len() {
        return Err(FormatError::VerseCount {
            expected: header.scheme.len(),
            found: lines.len(),
        });
    }
    Ok(ParsedStrophe { header, lines })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerseConsistency {
    pub annotated_syllables: u32,
    pub actual_syllables: usize,
    pub annotated_hint: String,
    /// `None` when the verse text has no syllables.
    pub actual_hint: Option<String>,
}

impl VerseConsistency {
    pub fn syllables_ok(&self) -> bool {
        self.annotated_syllables as usize == self.actual_syllables
    }

    pub fn hint_ok(&self) -> bool {
        self.actual_hint.as_deref() == Some(self.annotated_hint.as_str())
    }
}

/// Compares every verse's annotation with what its text actually has.
/// BASIC lines carry no annotation and are skipped.
pub fn consistency_check(parsed: &ParsedStrophe, phonology: &Phonology) -> Vec<VerseConsistency> {
    parsed
        .lines
        .iter()
        .filter_map(|l| {
            let ann = l.annotation.as_ref()?;
            Some(VerseConsistency {
                annotated_syllables: ann.syllables,
                actual_syllables: phonology.syllable_count(&l.text),
                annotated_hint: ann.hint.clone(),
                actual_hint: phonology.ending_hint(&l.text).ok().map(|h| h.0),
            })
        })
        .collect()
}

#[cfg(test)]
pub(crate) mod tests_support {
    use super::*;
    use crate::corpus::Verse;

    pub fn ship_strophe() -> Strophe {
        let texts = [
            "Tvá loď jde po vysokém moři,",
            "v ně brázdu jako stříbro reje,",
            "svou přídu v modré vlny noří",
            "a bok svůj pěnné do peřeje.",
        ];
        let verses = texts
            .iter()
            .zip([1, 2, 1, 2])
            .map(|(t, g)| Verse {
                text: t.to_string(),
                rhyme_group: Some(g),
                meter: MeterLabel::Iamb,
            })
            .collect();
        Strophe::new(verses, YearBucket::Start(1900), 0).unwrap()
    }
}
