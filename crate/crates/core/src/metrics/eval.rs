use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::edit::{char_errors, word_errors};
use crate::error::{Error, Result};
use crate::event::ErrorKind;
use crate::pipeline::ParallelPair;

/// A corrector's output for one pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrectedText {
    pub id: String,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub cer_before: f64,
    pub cer_after: f64,
    pub wer_before: f64,
    pub wer_after: f64,
    /// Present only when a single error kind was injected across the corpus.
    pub per_error_type: BTreeMap<ErrorKind, (f64, f64)>,
    pub document_count: usize,
}

#[derive(Default, Clone, Copy)]
struct Totals {
    char_before: usize,
    char_after: usize,
    chars: usize,
    word_before: usize,
    word_after: usize,
    words: usize,
}

pub fn evaluate_pairs(corrected: &[CorrectedText], pairs: &[ParallelPair]) -> Result<EvalReport> {
    let by_id: HashMap<&str, &ParallelPair> = pairs.iter().map(|p| (p.id.as_str(), p)).collect();
    let hyp_ids: BTreeSet<&str> = corrected.iter().map(|c| c.id.as_str()).collect();
    let mut unmatched: Vec<String> = corrected
        .iter()
        .filter(|c| !by_id.contains_key(c.id.as_str()))
        .map(|c| c.id.clone())
        .collect();
    unmatched.extend(
        pairs
            .iter()
            .filter(|p| !hyp_ids.contains(p.id.as_str()))
            .map(|p| p.id.clone()),
    );
    if !unmatched.is_empty() {
        return Err(Error::UnmatchedIds(unmatched));
    }
    if corrected.is_empty() {
        return Err(Error::EmptyInput("no pairs to evaluate".into()));
    }

    let per_doc: Vec<Totals> = corrected
        .par_iter()
        .map(|c| {
            let pair = by_id[c.id.as_str()];
            let (char_before, chars) = char_errors(&pair.contaminated, &pair.clean);
            let (char_after, _) = char_errors(&c.text, &pair.clean);
            let (word_before, words) = word_errors(&pair.contaminated, &pair.clean);
            let (word_after, _) = word_errors(&c.text, &pair.clean);
            Totals {
                char_before,
                char_after,
                chars,
                word_before,
                word_after,
                words,
            }
        })
        .collect();
    let t = per_doc.iter().fold(Totals::default(), |a, d| Totals {
        char_before: a.char_before + d.char_before,
        char_after: a.char_after + d.char_after,
        chars: a.chars + d.chars,
        word_before: a.word_before + d.word_before,
        word_after: a.word_after + d.word_after,
        words: a.words + d.words,
    });
    if t.chars == 0 || t.words == 0 {
        return Err(Error::EmptyInput("reference texts are empty".into()));
    }
    let rate = |e: usize, n: usize| e as f64 / n as f64;
    let cer_before = rate(t.char_before, t.chars);
    let cer_after = rate(t.char_after, t.chars);

    let kinds: BTreeSet<ErrorKind> = pairs
        .iter()
        .flat_map(|p| p.events.iter().map(|e| e.kind))
        .collect();
    let mut per_error_type = BTreeMap::new();
    if kinds.len() == 1 {
        per_error_type.insert(*kinds.first().unwrap(), (cer_before, cer_after));
    }
    Ok(EvalReport {
        cer_before,
        cer_after,
        wer_before: rate(t.word_before, t.words),
        wer_after: rate(t.word_after, t.words),
        per_error_type,
        document_count: corrected.len(),
    })
}

impl EvalReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_table(&self) -> String {
        let mut rows = vec![
            (
                "metric".to_string(),
                "before".to_string(),
                "after".to_string(),
            ),
            (
                "cer".into(),
                format!("{:.4}", self.cer_before),
                format!("{:.4}", self.cer_after),
            ),
            (
                "wer".into(),
                format!("{:.4}", self.wer_before),
                format!("{:.4}", self.wer_after),
            ),
        ];
        for (kind, (b, a)) in &self.per_error_type {
            rows.push((format!("cer[{kind}]"), format!("{b:.4}"), format!("{a:.4}")));
        }
        let w0 = rows.iter().map(|r| r.0.len()).max().unwrap_or(0);
        let w1 = rows.iter().map(|r| r.1.len()).max().unwrap_or(0);
        let mut out = String::new();
        for (m, b, a) in rows {
            out.push_str(&format!("{m:<w0$}  {b:>w1$}  {a:>w1$}\n"));
        }
        out.push_str(&format!("documents: {}\n", self.document_count));
        out
    }
}
