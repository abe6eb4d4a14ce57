use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;
use verseforge::formats::DataFormat;
use verseforge::generation::Decoding;
use verseforge::tokenizers::TokenizerKind;

/// Everything a run depends on. It is written into each artifact the run
/// produces so the run can be repeated.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub subcommand: &'static str,
    pub version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corpus: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vocab: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<DataFormat>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tokenizer: Option<TokenizerKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decoding: Option<Decoding>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub temperature: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<&'static str, Value>,
}

fn path_string(p: &Path) -> Option<String> {
    Some(p.display().to_string())
}

impl RunConfig {
    pub fn new(subcommand: &'static str) -> RunConfig {
        RunConfig {
            subcommand,
            version: env!("CARGO_PKG_VERSION"),
            corpus: None,
            vocab: None,
            model: None,
            output: None,
            format: None,
            tokenizer: None,
            decoding: None,
            temperature: None,
            seed: None,
            params: BTreeMap::new(),
        }
    }

    pub fn corpus(mut self, p: &Path) -> Self {
        self.corpus = path_string(p);
        self
    }

    pub fn vocab(mut self, p: &Path) -> Self {
        self.vocab = path_string(p);
        self
    }

    pub fn model(mut self, p: &Path) -> Self {
        self.model = path_string(p);
        self
    }

    pub fn output(mut self, p: &Path) -> Self {
        self.output = path_string(p);
        self
    }

    pub fn format(mut self, f: DataFormat) -> Self {
        self.format = Some(f);
        self
    }

    pub fn tokenizer(mut self, k: TokenizerKind) -> Self {
        self.tokenizer = Some(k);
        self
    }

    pub fn decoding(mut self, d: Decoding) -> Self {
        self.decoding = Some(d);
        self
    }

    pub fn temperature(mut self, t: f64) -> Self {
        self.temperature = Some(t);
        self
    }

    pub fn seed(mut self, s: u64) -> Self {
        self.seed = Some(s);
        self
    }

    pub fn param(mut self, key: &'static str, value: impl Into<Value>) -> Self {
        self.params.insert(key, value.into());
        self
    }

    /// Compact single-line JSON, for file headers.
    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }
}
