//! Next-token models.
//!
//! [`LanguageModel`] is the only thing generation needs. [`NGramModel`] is
//! an interpolated absolute-discounting n-gram model over token ids:
//!
//! ```text
//! P(w | h) = max(c(hw) - D, 0) / c(h·) + D · N1+(h·) / c(h·) · P(w | h')
//! ```
//!
//! where `h'` drops the oldest token of `h`, `c(h·)` counts occurrences of `h`
//! followed by anything and the recursion bottoms out in the uniform
//! distribution. Contexts never seen with a follower are skipped.
//!
//! # Model file
//!
//! Plain text. A header of `key value` lines, a `%%` line, then one line per
//! stored n-gram: space-separated token ids, a tab, and the count.
//!
//! ```text
//! verseforge-ngram 1
//! order 8
//! discount 0.75
//! vocab_size 118
//! vocab_sha256 3f1a…
//! config {"seed":7}
//! %%
//! 5<TAB>1200
//! 5 17<TAB>40
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::corpus::Strophe;
use crate::formats::{self, DataFormat, FormatError};
use crate::phonology::Phonology;
use crate::tokenizers::{TokenId, Tokenizer, TokenizerKind, Vocab};

pub const DEFAULT_DISCOUNT: f64 = 0.75;
const MAGIC: &str = "verseforge-ngram 1";

#[derive(Debug, Error)]
pub enum LmError {
    #[error("training corpus is empty")]
    EmptyCorpus,
    #[error("order must be at least 1")]
    BadOrder,
    #[error("discount must lie in [0, 1), got {0}")]
    BadDiscount(f64),
    #[error("temperature must be positive and finite, got {0}")]
    BadTemperature(f64),
    #[error("token id {id} is outside the vocabulary of {vocab_size}")]
    TokenOutOfRange { id: TokenId, vocab_size: usize },
    #[error("model was trained against vocab {expected} but vocab {found} was supplied")]
    VocabMismatch { expected: String, found: String },
    #[error("model file line {line}: {reason}")]
    Format { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Anything that can predict the next token.
pub trait LanguageModel: Sync {
    fn vocab_size(&self) -> usize;

    /// A probability for every vocabulary id, summing to 1.
    fn next_dist(&self, context: &[TokenId]) -> Vec<f64>;
}

/// Default n-gram order for a tokenizer: finer tokens get longer contexts.
pub fn default_order(kind: TokenizerKind) -> usize {
    match kind {
        TokenizerKind::Unicode => 8,
        TokenizerKind::Syllable => 4,
        TokenizerKind::Base | TokenizerKind::Our => 3,
    }
}

/// Encodes each strophe in `format` and appends the end-of-sequence id.
pub fn training_sequences(
    strophes: &[Strophe],
    format: DataFormat,
    tokenizer: &Tokenizer,
    phonology: &Phonology,
) -> Result<Vec<Vec<TokenId>>, FormatError> {
    strophes
        .iter()
        .map(|s| {
            let text = formats::encode(s, format, phonology)?;
            let mut ids = tokenizer.encode(&text).ids;
            ids.push(tokenizer.vocab().eos());
            Ok(ids)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Node {
    count: u32,
    follow: u32,
    first: u32,
    len: u32,
}

/// n-gram counts as a trie in compressed-row form; children sorted by id.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Trie {
    nodes: Vec<Node>,
    children: Vec<(TokenId, u32)>,
}

#[derive(Default)]
struct TrieBuilder {
    counts: Vec<u32>,
    edges: HashMap<(u32, TokenId), u32>,
}

impl TrieBuilder {
    fn new() -> TrieBuilder {
        TrieBuilder {
            counts: vec![0],
            edges: HashMap::new(),
        }
    }

    fn child(&mut self, parent: u32, token: TokenId) -> u32 {
        let counts = &mut self.counts;
        *self.edges.entry((parent, token)).or_insert_with(|| {
            counts.push(0);
            (counts.len() - 1) as u32
        })
    }

    fn finish(self) -> Trie {
        let mut edges: Vec<(u32, TokenId, u32)> = self.edges.into_iter().map(|((p, t), c)| (p, t, c)).collect();
        edges.sort_unstable();
        let mut nodes: Vec<Node> = self
            .counts
            .iter()
            .map(|&count| Node {
                count,
                follow: 0,
                first: 0,
                len: 0,
            })
            .collect();
        let mut children = Vec::with_capacity(edges.len());
        for (i, &(parent, token, child)) in edges.iter().enumerate() {
            let p = &mut nodes[parent as usize];
            if p.len == 0 {
                p.first = i as u32;
            }
            p.len += 1;
            p.follow += self.counts[child as usize];
            children.push((token, child));
        }
        Trie { nodes, children }
    }
}

impl Trie {
    fn kids(&self, node: u32) -> &[(TokenId, u32)] {
        let n = &self.nodes[node as usize];
        &self.children[n.first as usize..(n.first + n.len) as usize]
    }

    fn child(&self, node: u32, token: TokenId) -> Option<u32> {
        let kids = self.kids(node);
        kids.binary_search_by_key(&token, |&(t, _)| t).ok().map(|i| kids[i].1)
    }

    fn find(&self, ngram: &[TokenId]) -> Option<u32> {
        ngram.iter().try_fold(0u32, |node, &t| self.child(node, t))
    }
}

#[derive(Debug, Clone)]
pub struct NGramModel {
    order: usize,
    discount: f64,
    vocab_size: usize,
    vocab_fingerprint: String,
    /// Echo of the run configuration, stored in the model file.
    pub config: Option<String>,
    trie: Trie,
}

impl NGramModel {
    pub fn train(
        sequences: &[Vec<TokenId>],
        order: usize,
        discount: f64,
        vocab: &Vocab,
    ) -> Result<NGramModel, LmError> {
        if order == 0 {
            return Err(LmError::BadOrder);
        }
        if !(0.0..1.0).contains(&discount) {
            return Err(LmError::BadDiscount(discount));
        }
        if sequences.iter().all(|s| s.is_empty()) {
            return Err(LmError::EmptyCorpus);
        }
        let vocab_size = vocab.len();
        let mut b = TrieBuilder::new();
        for seq in sequences {
            if let Some(&id) = seq.iter().find(|&&id| id as usize >= vocab_size) {
                return Err(LmError::TokenOutOfRange { id, vocab_size });
            }
            for s in 0..seq.len() {
                let mut node = 0;
                for &t in &seq[s..(s + order).min(seq.len())] {
                    node = b.child(node, t);
                    b.counts[node as usize] += 1;
                }
            }
        }
        Ok(NGramModel {
            order,
            discount,
            vocab_size,
            vocab_fingerprint: vocab.fingerprint(),
            config: None,
            trie: b.finish(),
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn discount(&self) -> f64 {
        self.discount
    }

    pub fn vocab_fingerprint(&self) -> &str {
        &self.vocab_fingerprint
    }

    /// Raw count of an n-gram (length at most `order`).
    pub fn count(&self, ngram: &[TokenId]) -> u64 {
        if ngram.is_empty() {
            return self.trie.nodes[0].follow as u64;
        }
        self.trie
            .find(ngram)
            .map_or(0, |n| self.trie.nodes[n as usize].count as u64)
    }

    /// Unsmoothed relative frequency of `token` after `context`.
    pub fn mle(&self, context: &[TokenId], token: TokenId) -> f64 {
        let Some(h) = self.trie.find(context) else { return 0.0 };
        let follow = self.trie.nodes[h as usize].follow;
        if follow == 0 {
            return 0.0;
        }
        let c = self
            .trie
            .child(h, token)
            .map_or(0, |n| self.trie.nodes[n as usize].count);
        c as f64 / follow as f64
    }

    /// Context nodes from the empty context up to the longest usable suffix.
    fn context_nodes(&self, context: &[TokenId]) -> Vec<u32> {
        let max = context.len().min(self.order - 1);
        let mut out = vec![0];
        for k in 1..=max {
            match self.trie.find(&context[context.len() - k..]) {
                Some(n) if self.trie.nodes[n as usize].follow > 0 => out.push(n),
                _ => break,
            }
        }
        out
    }

    /// Probability of a single token; agrees with [`LanguageModel::next_dist`].
    pub fn prob(&self, context: &[TokenId], token: TokenId) -> f64 {
        let mut p = 1.0 / self.vocab_size as f64;
        for h in self.context_nodes(context) {
            let node = self.trie.nodes[h as usize];
            let t = node.follow as f64;
            let c = self
                .trie
                .child(h, token)
                .map_or(0.0, |n| self.trie.nodes[n as usize].count as f64);
            p = (c - self.discount).max(0.0) / t + self.discount * node.len as f64 / t * p;
        }
        p
    }

    /// Per-token perplexity over whole sequences (each starting from an empty context).
    pub fn perplexity(&self, sequences: &[Vec<TokenId>]) -> f64 {
        let (mut nll, mut n) = (0.0, 0usize);
        for seq in sequences {
            for i in 0..seq.len() {
                nll -= self.prob(&seq[..i], seq[i]).ln();
                n += 1;
            }
        }
        (nll / n.max(1) as f64).exp()
    }

    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{MAGIC}");
        let _ = writeln!(out, "order {}", self.order);
        let _ = writeln!(out, "discount {}", self.discount);
        let _ = writeln!(out, "vocab_size {}", self.vocab_size);
        let _ = writeln!(out, "vocab_sha256 {}", self.vocab_fingerprint);
        if let Some(c) = &self.config {
            let _ = writeln!(out, "config {}", c.replace('\n', " "));
        }
        out.push_str("%%\n");
        let mut path = Vec::with_capacity(self.order);
        self.dump(0, &mut path, &mut out);
        out
    }

    fn dump(&self, node: u32, path: &mut Vec<TokenId>, out: &mut String) {
        for &(t, c) in self.trie.kids(node) {
            path.push(t);
            for (i, id) in path.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                let _ = write!(out, "{id}");
            }
            let _ = writeln!(out, "\t{}", self.trie.nodes[c as usize].count);
            self.dump(c, path, out);
            path.pop();
        }
    }

    /// Parses a model file and checks it against `vocab`.
    pub fn from_file_str(text: &str, vocab: &Vocab) -> Result<NGramModel, LmError> {
        let bad = |line: usize, reason: &str| LmError::Format {
            line,
            reason: reason.to_string(),
        };
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        match lines.next() {
            Some((_, MAGIC)) => {}
            _ => return Err(bad(1, "not a verseforge n-gram model")),
        }
        let (mut order, mut discount, mut size, mut hash, mut config) = (None, None, None, None, None);
        loop {
            let (no, line) = lines.next().ok_or_else(|| bad(0, "missing `%%` separator"))?;
            if line == "%%" {
                break;
            }
            let (k, v) = line.split_once(' ').ok_or_else(|| bad(no, "expected `key value`"))?;
            match k {
                "order" => order = Some(v.parse::<usize>().map_err(|_| bad(no, "bad order"))?),
                "discount" => discount = Some(v.parse::<f64>().map_err(|_| bad(no, "bad discount"))?),
                "vocab_size" => size = Some(v.parse::<usize>().map_err(|_| bad(no, "bad vocab_size"))?),
                "vocab_sha256" => hash = Some(v.to_string()),
                "config" => config = Some(v.to_string()),
                _ => return Err(bad(no, "unknown header key")),
            }
        }
        let order = order.ok_or_else(|| bad(0, "missing order"))?;
        let discount = discount.ok_or_else(|| bad(0, "missing discount"))?;
        let vocab_size = size.ok_or_else(|| bad(0, "missing vocab_size"))?;
        let hash = hash.ok_or_else(|| bad(0, "missing vocab_sha256"))?;
        if hash != vocab.fingerprint() || vocab_size != vocab.len() {
            return Err(LmError::VocabMismatch {
                expected: hash,
                found: vocab.fingerprint(),
            });
        }
        if order == 0 {
            return Err(LmError::BadOrder);
        }
        if !(0.0..1.0).contains(&discount) {
            return Err(LmError::BadDiscount(discount));
        }
        let mut b = TrieBuilder::new();
        for (no, line) in lines {
            let (ids, count) = line
                .split_once('\t')
                .ok_or_else(|| bad(no, "expected `ids<TAB>count`"))?;
            let count: u32 = count.parse().map_err(|_| bad(no, "bad count"))?;
            let ids: Vec<TokenId> = ids
                .split(' ')
                .map(|t| t.parse().map_err(|_| bad(no, "bad token id")))
                .collect::<Result<_, _>>()?;
            if ids.len() > order || ids.iter().any(|&t| t as usize >= vocab_size) {
                return Err(bad(no, "n-gram does not fit the order or vocabulary"));
            }
            let mut node = 0;
            for &t in &ids[..ids.len() - 1] {
                node = *b
                    .edges
                    .get(&(node, t))
                    .ok_or_else(|| bad(no, "n-gram listed before its prefix"))?;
            }
            let node = b.child(node, ids[ids.len() - 1]);
            b.counts[node as usize] = count;
        }
        Ok(NGramModel {
            order,
            discount,
            vocab_size,
            vocab_fingerprint: hash,
            config,
            trie: b.finish(),
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), LmError> {
        std::fs::write(path, self.to_file_string())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>, vocab: &Vocab) -> Result<NGramModel, LmError> {
        NGramModel::from_file_str(&std::fs::read_to_string(path)?, vocab)
    }
}

impl LanguageModel for NGramModel {
    fn vocab_size(&self) -> usize {
        self.vocab_size
    }

    fn next_dist(&self, context: &[TokenId]) -> Vec<f64> {
        let mut p = vec![1.0 / self.vocab_size as f64; self.vocab_size];
        for h in self.context_nodes(context) {
            let node = self.trie.nodes[h as usize];
            let t = node.follow as f64;
            let lambda = self.discount * node.len as f64 / t;
            for x in p.iter_mut() {
                *x *= lambda;
            }
            for &(tok, c) in self.trie.kids(h) {
                p[tok as usize] += (self.trie.nodes[c as usize].count as f64 - self.discount) / t;
            }
        }
        p
    }
}

/// Draws an id from `dist` after scaling log-probabilities by `1/temperature`.
pub fn sample_dist(dist: &[f64], temperature: f64, rng: &mut impl Rng) -> Result<TokenId, LmError> {
    if !(temperature > 0.0 && temperature.is_finite()) {
        return Err(LmError::BadTemperature(temperature));
    }
    let logits: Vec<f64> = dist.iter().map(|&p| p.ln() / temperature).collect();
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = logits.iter().map(|&l| (l - max).exp()).collect();
    let total: f64 = weights.iter().sum();
    let mut r = rng.gen::<f64>() * total;
    let mut last = 0;
    for (i, &w) in weights.iter().enumerate() {
        if w > 0.0 {
            last = i;
            if r < w {
                return Ok(i as TokenId);
            }
            r -= w;
        }
    }
    Ok(last as TokenId)
}

/// One draw from the model with a fresh generator seeded by `seed`.
pub fn sample(model: &dyn LanguageModel, context: &[TokenId], temperature: f64, seed: u64) -> Result<TokenId, LmError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_dist(&model.next_dist(context), temperature, &mut rng)
}
