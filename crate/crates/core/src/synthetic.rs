//! Seeded generator of English-like text.
//!
//! Vocabulary is built from syllables with Zipf-distributed frequencies, and
//! each word has a small random set of successors, so the text has the
//! bigram structure the column de-interleaver relies on. Everything is a
//! pure function of the seed.

use std::collections::HashSet;

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::document::CleanDocument;
use crate::rng::{derive_rng, Stream};

const FUNCTION_WORDS: &[&str] = &[
    "the", "of", "and", "to", "in", "a", "is", "that", "for", "it", "as", "was", "with", "on",
    "by", "at", "from", "his", "an", "were", "are", "which", "this", "be", "or", "has", "had",
    "not", "but", "its", "also", "their", "after", "into", "other", "first", "two", "more", "when",
    "one", "there", "all", "most", "where", "been",
];

const ONSETS: &[&str] = &[
    "b", "c", "d", "f", "g", "h", "j", "k", "l", "m", "n", "p", "r", "s", "t", "v", "w", "z", "bl",
    "br", "ch", "cl", "cr", "dr", "fl", "fr", "gr", "pl", "pr", "sh", "sl", "sp", "st", "th", "tr",
];
const VOWELS: &[&str] = &["a", "e", "i", "o", "u", "ai", "ea", "ee", "ou", "oo", "io"];
const CODAS: &[&str] = &[
    "", "", "", "n", "r", "s", "t", "l", "m", "nd", "st", "ng", "ck", "rt",
];

/// A random bigram language over a pseudo-English vocabulary.
#[derive(Debug, Clone)]
pub struct SyntheticLanguage {
    words: Vec<String>,
    starts: WeightedIndex<f64>,
    successors: Vec<(Vec<usize>, WeightedIndex<f64>)>,
}

impl SyntheticLanguage {
    pub fn new(seed: u64, vocab_size: usize) -> Self {
        let mut rng = derive_rng(seed, u64::MAX);
        let mut seen: HashSet<String> = HashSet::new();
        let mut words: Vec<String> = Vec::with_capacity(vocab_size);
        for w in FUNCTION_WORDS.iter().take(vocab_size) {
            seen.insert(w.to_string());
            words.push(w.to_string());
        }
        while words.len() < vocab_size {
            let w = if rng.gen_bool(0.02) {
                rng.gen_range(1800..2030).to_string()
            } else {
                pseudo_word(&mut rng)
            };
            if seen.insert(w.clone()) {
                words.push(w);
            }
        }
        let zipf: Vec<f64> = (0..words.len()).map(|r| 1.0 / (r as f64 + 2.0)).collect();
        let pick = WeightedIndex::new(&zipf).expect("positive weights");
        let successors = (0..words.len())
            .map(|_| {
                let k = rng.gen_range(6..=14);
                let mut next: Vec<usize> = Vec::with_capacity(k);
                while next.len() < k {
                    let w = pick.sample(&mut rng);
                    if !next.contains(&w) {
                        next.push(w);
                    }
                }
                let weights: Vec<f64> = (0..k).map(|_| rng.gen_range(0.2..1.0)).collect();
                (
                    next,
                    WeightedIndex::new(&weights).expect("positive weights"),
                )
            })
            .collect();
        // sentence openers skip the first few function words
        let start_weights: Vec<f64> = zipf
            .iter()
            .enumerate()
            .map(|(i, z)| {
                if (6..40).contains(&i) || i >= FUNCTION_WORDS.len() {
                    *z
                } else {
                    0.0
                }
            })
            .collect();
        Self {
            words,
            starts: WeightedIndex::new(&start_weights).expect("positive weights"),
            successors,
        }
    }

    pub fn vocabulary(&self) -> &[String] {
        &self.words
    }

    pub fn sentence(&self, rng: &mut Stream) -> String {
        let len = rng.gen_range(6..=18);
        let mut cur = self.starts.sample(rng);
        let mut out = String::new();
        for i in 0..len {
            let w = &self.words[cur];
            if i == 0 {
                let mut cs = w.chars();
                if let Some(f) = cs.next() {
                    out.extend(f.to_uppercase());
                    out.push_str(cs.as_str());
                }
            } else {
                out.push(' ');
                out.push_str(w);
            }
            if i + 1 < len && i > 1 && rng.gen_bool(0.06) {
                out.push(',');
            }
            let (next, weights) = &self.successors[cur];
            cur = next[weights.sample(rng)];
        }
        out.push('.');
        out
    }

    pub fn document(&self, rng: &mut Stream, sentences: usize) -> String {
        (0..sentences)
            .map(|_| self.sentence(rng))
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// `count` documents; document `i` uses stream `first_index + i` and
    /// has a sentence count drawn from `sentences`.
    pub fn corpus(
        &self,
        seed: u64,
        first_index: u64,
        count: usize,
        sentences: std::ops::RangeInclusive<usize>,
    ) -> Vec<CleanDocument> {
        (0..count as u64)
            .map(|i| {
                let idx = first_index + i;
                let mut rng = derive_rng(seed, idx);
                let n = rng.gen_range(sentences.clone());
                CleanDocument::new(format!("doc{idx:06}"), self.document(&mut rng, n))
            })
            .collect()
    }
}

fn pseudo_word(rng: &mut Stream) -> String {
    let syllables = *[1usize, 1, 2, 2, 2, 3].choose(rng).expect("non-empty");
    let mut w = String::new();
    for _ in 0..syllables {
        w.push_str(ONSETS.choose(rng).expect("non-empty"));
        w.push_str(VOWELS.choose(rng).expect("non-empty"));
    }
    w.push_str(CODAS.choose(rng).expect("non-empty"));
    w
}
