use std::fmt;
use std::path::Path;
use std::process::ExitCode;

use verseforge::corpus::CorpusError;
use verseforge::formats::FormatError;
use verseforge::generation::GenerationError;
use verseforge::language_model::LmError;
use verseforge::tokenizers::TokenizerError;

#[derive(Debug)]
pub enum CliError {
    MissingFile(String),
    Schema(String),
    Usage(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::MissingFile(p) => write!(f, "no such file: {p}"),
            CliError::Schema(m) | CliError::Usage(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for CliError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Class {
    Other,
    Usage,
    MissingFile,
    Schema,
}

impl Class {
    pub fn code(self) -> u8 {
        match self {
            Class::Other => 1,
            Class::Usage => 2,
            Class::MissingFile => 3,
            Class::Schema => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Class::Other => "other",
            Class::Usage => "usage",
            Class::MissingFile => "missing-file",
            Class::Schema => "schema",
        }
    }
}

/// Fails with [`CliError::MissingFile`] unless `path` is an existing file.
pub fn existing(path: &Path) -> Result<&Path, CliError> {
    if path.is_file() {
        Ok(path)
    } else {
        Err(CliError::MissingFile(path.display().to_string()))
    }
}

pub fn classify(err: &anyhow::Error) -> Class {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<CliError>() {
            return match e {
                CliError::MissingFile(_) => Class::MissingFile,
                CliError::Schema(_) => Class::Schema,
                CliError::Usage(_) => Class::Usage,
            };
        }
        if let Some(e) = cause.downcast_ref::<CorpusError>() {
            return match e {
                CorpusError::Io(_) => Class::Other,
                CorpusError::BadFraction(_) => Class::Usage,
                _ => Class::Schema,
            };
        }
        if let Some(e) = cause.downcast_ref::<TokenizerError>() {
            if matches!(e, TokenizerError::Format { .. }) {
                return Class::Schema;
            }
        }
        if let Some(c) = cause.downcast_ref::<LmError>().and_then(lm_class) {
            return c;
        }
        if let Some(e) = cause.downcast_ref::<GenerationError>() {
            return match e {
                GenerationError::Lm(e) => lm_class(e).unwrap_or(Class::Other),
                GenerationError::VocabSize { .. } => Class::Schema,
                _ => Class::Usage,
            };
        }
        if cause.downcast_ref::<FormatError>().is_some() || cause.downcast_ref::<serde_json::Error>().is_some() {
            return Class::Schema;
        }
    }
    Class::Other
}

fn lm_class(e: &LmError) -> Option<Class> {
    match e {
        LmError::Format { .. } | LmError::VocabMismatch { .. } => Some(Class::Schema),
        LmError::BadOrder | LmError::BadDiscount(_) | LmError::BadTemperature(_) => Some(Class::Usage),
        _ => None,
    }
}

/// The whole cause chain on one line.
pub fn one_line(err: &anyhow::Error) -> String {
    let parts: Vec<String> = err.chain().map(|c| c.to_string().replace('\n', " ")).collect();
    parts.join(": ")
}

pub fn clap_exit(e: clap::Error) -> ExitCode {
    use clap::error::ErrorKind;
    match e.kind() {
        ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
            let _ = e.print();
            ExitCode::SUCCESS
        }
        _ => {
            let text = e.render().to_string();
            let first = text.lines().next().unwrap_or("").trim_start_matches("error: ");
            eprintln!("error[usage]: {first}");
            ExitCode::from(Class::Usage.code())
        }
    }
}
