//! Lexicon and additive-smoothed word bigram model, trained from clean text.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;
use std::sync::OnceLock;

use super::repair::Trie;
use crate::document::CleanDocument;
use crate::error::{Error, Result};

pub const DEFAULT_SMOOTHING: f64 = 0.1;
const HEADER: &str = "ocrnoise-models 1";

/// Word counts from a clean corpus, case preserved.
#[derive(Debug, Clone)]
pub struct Lexicon {
    entries: HashMap<String, u64>,
    total: u64,
    folded: HashMap<String, u64>,
    max_word_chars: usize,
    trie: OnceLock<Trie>,
}

impl PartialEq for Lexicon {
    fn eq(&self, other: &Self) -> bool {
        self.total == other.total && self.entries == other.entries
    }
}

impl Lexicon {
    pub fn from_counts(counts: impl IntoIterator<Item = (String, u64)>) -> Result<Self> {
        let mut entries = HashMap::new();
        let mut total = 0u64;
        for (w, c) in counts {
            if c == 0 {
                return Err(Error::Structure(format!("lexicon count for {w:?} is zero")));
            }
            if w.is_empty() || w.chars().any(char::is_whitespace) {
                return Err(Error::Structure(format!("invalid lexicon word {w:?}")));
            }
            *entries.entry(w).or_insert(0) += c;
            total += c;
        }
        let mut folded = HashMap::new();
        for (w, c) in &entries {
            *folded.entry(w.to_lowercase()).or_insert(0) += c;
        }
        let max_word_chars = entries.keys().map(|w| w.chars().count()).max().unwrap_or(0);
        Ok(Self {
            entries,
            total,
            folded,
            max_word_chars,
            trie: OnceLock::new(),
        })
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn max_word_chars(&self) -> usize {
        self.max_word_chars
    }

    pub(crate) fn trie(&self) -> &Trie {
        self.trie.get_or_init(|| Trie::build(&self.folded))
    }

    pub fn count(&self, word: &str) -> Option<u64> {
        self.entries.get(word).copied()
    }

    /// Exact lookup, falling back to the lowercase form.
    pub fn lookup(&self, word: &str) -> Option<u64> {
        if let Some(&c) = self.entries.get(word) {
            return Some(c);
        }
        if word.chars().any(char::is_uppercase) {
            self.folded.get(&word.to_lowercase()).copied()
        } else {
            self.folded.get(word).copied()
        }
    }

    pub fn contains(&self, word: &str) -> bool {
        self.lookup(word).is_some()
    }

    /// Counts keyed by lowercase form.
    pub fn folded(&self) -> &HashMap<String, u64> {
        &self.folded
    }

    /// Add-one smoothed negative log probability of an in-lexicon word.
    pub fn word_cost(&self, word: &str) -> Option<f64> {
        self.lookup(word)
            .map(|c| -((c as f64 + 1.0) / (self.total as f64 + self.entries.len() as f64)).ln())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.entries.iter().map(|(w, c)| (w.as_str(), *c))
    }

    fn sorted(&self) -> Vec<(&str, u64)> {
        let mut v: Vec<_> = self.iter().collect();
        v.sort_unstable();
        v
    }
}

/// Word bigram model with add-k smoothing.
#[derive(Debug, Clone, PartialEq)]
pub struct NGramModel {
    vocab: HashMap<String, u32>,
    words: Vec<String>,
    unigrams: Vec<u64>,
    // number of bigrams with each word on the left
    left: Vec<u64>,
    bigrams: HashMap<(u32, u32), u64>,
    tokens: u64,
    k: f64,
}

impl NGramModel {
    pub fn smoothing(&self) -> f64 {
        self.k
    }

    pub fn id(&self, word: &str) -> Option<u32> {
        self.vocab.get(word).copied()
    }

    pub fn unigram(&self, word: &str) -> u64 {
        self.id(word).map_or(0, |i| self.unigrams[i as usize])
    }

    pub fn bigram(&self, left: &str, right: &str) -> u64 {
        match (self.id(left), self.id(right)) {
            (Some(a), Some(b)) => self.bigrams.get(&(a, b)).copied().unwrap_or(0),
            _ => 0,
        }
    }

    /// `ln P(right | left)`; unknown words share one extra vocabulary slot.
    pub fn log_prob_ids(&self, left: Option<u32>, right: Option<u32>) -> f64 {
        let v = (self.words.len() + 1) as f64;
        let ctx = left.map_or(0, |a| self.left[a as usize]) as f64;
        let pair = match (left, right) {
            (Some(a), Some(b)) => self.bigrams.get(&(a, b)).copied().unwrap_or(0),
            _ => 0,
        } as f64;
        ((pair + self.k) / (ctx + self.k * v)).ln()
    }

    /// Transition score for reading-order comparison: the smoothed bigram
    /// between known words, the unigram probability of a known word after
    /// an unknown one, and a constant for unknown words, so that corrupted
    /// tokens add no signal whichever line they end up next to.
    pub fn reading_log_prob_ids(&self, left: Option<u32>, right: Option<u32>) -> f64 {
        let v = (self.words.len() + 1) as f64;
        match (left, right) {
            (Some(_), Some(_)) => self.log_prob_ids(left, right),
            (None, Some(b)) => ((self.unigrams[b as usize] as f64 + self.k)
                / (self.tokens as f64 + self.k * v))
                .ln(),
            (_, None) => (self.k / (self.tokens as f64 + self.k * v)).ln(),
        }
    }

    pub fn log_prob(&self, left: &str, right: &str) -> f64 {
        self.log_prob_ids(self.id(left), self.id(right))
    }

    /// Mean bigram log-probability over a token sequence (0 for fewer than
    /// two tokens).
    pub fn average_log_prob<'a>(&self, tokens: impl IntoIterator<Item = &'a str>) -> f64 {
        let ids: Vec<Option<u32>> = tokens.into_iter().map(|t| self.id(t)).collect();
        if ids.len() < 2 {
            return 0.0;
        }
        let sum: f64 = ids.windows(2).map(|w| self.log_prob_ids(w[0], w[1])).sum();
        sum / (ids.len() - 1) as f64
    }
}

/// Lexicon and language model trained together.
#[derive(Debug, Clone, PartialEq)]
pub struct Models {
    pub lexicon: Lexicon,
    pub lm: NGramModel,
}

/// Counts whitespace tokens and adjacent-token bigrams over each document.
pub fn train_models(corpus: &[CleanDocument], smoothing_k: f64) -> Result<(Lexicon, NGramModel)> {
    if !(smoothing_k > 0.0 && smoothing_k.is_finite()) {
        return Err(Error::Precondition(format!(
            "smoothing constant must be positive, got {smoothing_k}"
        )));
    }
    let mut vocab: HashMap<String, u32> = HashMap::new();
    let mut words: Vec<String> = Vec::new();
    let mut unigrams: Vec<u64> = Vec::new();
    let mut bigrams: HashMap<(u32, u32), u64> = HashMap::new();
    for doc in corpus {
        let mut prev: Option<u32> = None;
        for tok in doc.text.split_whitespace() {
            let id = *vocab.entry(tok.to_string()).or_insert_with(|| {
                words.push(tok.to_string());
                unigrams.push(0);
                (words.len() - 1) as u32
            });
            unigrams[id as usize] += 1;
            if let Some(p) = prev {
                *bigrams.entry((p, id)).or_insert(0) += 1;
            }
            prev = Some(id);
        }
    }
    if words.is_empty() {
        return Err(Error::EmptyInput("training corpus has no tokens".into()));
    }
    let lexicon = Lexicon::from_counts(words.iter().cloned().zip(unigrams.iter().copied()))?;
    let lm = build_lm(vocab, words, unigrams, bigrams, smoothing_k);
    Ok((lexicon, lm))
}

fn build_lm(
    vocab: HashMap<String, u32>,
    words: Vec<String>,
    unigrams: Vec<u64>,
    bigrams: HashMap<(u32, u32), u64>,
    k: f64,
) -> NGramModel {
    let mut left = vec![0u64; words.len()];
    for (&(a, _), &c) in &bigrams {
        left[a as usize] += c;
    }
    let tokens = unigrams.iter().sum();
    NGramModel {
        vocab,
        words,
        unigrams,
        left,
        bigrams,
        tokens,
        k,
    }
}

impl Models {
    pub fn train(corpus: &[CleanDocument], smoothing_k: f64) -> Result<Self> {
        let (lexicon, lm) = train_models(corpus, smoothing_k)?;
        Ok(Self { lexicon, lm })
    }

    /// Text encoding: a version header, the smoothing constant, then sorted
    /// tab-separated unigram and bigram counts.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{HEADER}");
        let _ = writeln!(out, "smoothing\t{}", self.lm.k);
        let uni = self.lexicon.sorted();
        let _ = writeln!(out, "unigrams\t{}", uni.len());
        for (w, c) in uni {
            let _ = writeln!(out, "{w}\t{c}");
        }
        let mut bi: Vec<(&str, &str, u64)> = self
            .lm
            .bigrams
            .iter()
            .map(|(&(a, b), &c)| {
                (
                    self.lm.words[a as usize].as_str(),
                    self.lm.words[b as usize].as_str(),
                    c,
                )
            })
            .collect();
        bi.sort_unstable();
        let _ = writeln!(out, "bigrams\t{}", bi.len());
        for (a, b, c) in bi {
            let _ = writeln!(out, "{a}\t{b}\t{c}");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let perr = |line: usize, message: &str| Error::Parse {
            line,
            message: message.to_string(),
        };
        let mut next = |what: &str| {
            lines
                .next()
                .ok_or_else(|| perr(0, &format!("missing {what}")))
        };

        let (n, header) = next("header")?;
        if header != HEADER {
            return Err(perr(n, &format!("expected header {HEADER:?}")));
        }
        let (n, l) = next("smoothing")?;
        let k: f64 = l
            .strip_prefix("smoothing\t")
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| perr(n, "bad smoothing line"))?;
        let (n, l) = next("unigram count")?;
        let nu: usize = l
            .strip_prefix("unigrams\t")
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| perr(n, "bad unigrams line"))?;
        let mut vocab = HashMap::with_capacity(nu);
        let mut words = Vec::with_capacity(nu);
        let mut unigrams = Vec::with_capacity(nu);
        for _ in 0..nu {
            let (n, l) = next("unigram")?;
            let (w, c) = l.split_once('\t').ok_or_else(|| perr(n, "bad unigram"))?;
            let c: u64 = c.parse().map_err(|_| perr(n, "bad unigram count"))?;
            if vocab.insert(w.to_string(), words.len() as u32).is_some() {
                return Err(perr(n, "duplicate unigram"));
            }
            words.push(w.to_string());
            unigrams.push(c);
        }
        let (n, l) = next("bigram count")?;
        let nb: usize = l
            .strip_prefix("bigrams\t")
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| perr(n, "bad bigrams line"))?;
        let mut bigrams = HashMap::with_capacity(nb);
        for _ in 0..nb {
            let (n, l) = next("bigram")?;
            let mut parts = l.split('\t');
            let (Some(a), Some(b), Some(c), None) =
                (parts.next(), parts.next(), parts.next(), parts.next())
            else {
                return Err(perr(n, "bad bigram"));
            };
            let ia = *vocab
                .get(a)
                .ok_or_else(|| perr(n, "bigram word missing from unigrams"))?;
            let ib = *vocab
                .get(b)
                .ok_or_else(|| perr(n, "bigram word missing from unigrams"))?;
            let c: u64 = c.parse().map_err(|_| perr(n, "bad bigram count"))?;
            bigrams.insert((ia, ib), c);
        }
        if !k.is_finite() || k <= 0.0 {
            return Err(perr(2, "smoothing must be positive"));
        }
        let lexicon = Lexicon::from_counts(words.iter().cloned().zip(unigrams.iter().copied()))?;
        Ok(Self {
            lexicon,
            lm: build_lm(vocab, words, unigrams, bigrams, k),
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_text(&text)
    }
}
