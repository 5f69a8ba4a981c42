//! Reading-order recovery: choose the column count whose de-interleaving
//! reads most fluently under the bigram model.

use super::models::NGramModel;
use super::segment::TIE_EPSILON;
use crate::layout::{balanced_heights, invert_columnize};

/// Token ids of a line sequence read in order, with total bigram
/// log-probability.
pub(crate) struct Reading {
    pub first: Option<Option<u32>>,
    pub last: Option<Option<u32>>,
    pub log_prob: f64,
    pub bigrams: usize,
}

pub(crate) fn read<S: AsRef<str>>(lines: &[S], lm: &NGramModel) -> Reading {
    let mut r = Reading {
        first: None,
        last: None,
        log_prob: 0.0,
        bigrams: 0,
    };
    for tok in lines.iter().flat_map(|l| l.as_ref().split_whitespace()) {
        let id = lm.id(tok);
        match r.last {
            Some(prev) => {
                r.log_prob += lm.reading_log_prob_ids(prev, id);
                r.bigrams += 1;
            }
            None => r.first = Some(id),
        }
        r.last = Some(id);
    }
    r
}

/// Candidate readings of an interleaved block, one per column count in
/// `columns` that the block can hold.
pub(crate) fn hypotheses<S: AsRef<str> + Clone>(
    lines: &[S],
    columns: impl IntoIterator<Item = usize>,
) -> Vec<(usize, Vec<S>)> {
    let mut out = vec![(1, lines.to_vec())];
    for c in columns {
        if c >= 2 && c <= lines.len() {
            let heights = balanced_heights(lines.len(), c);
            let lines = invert_columnize(lines, &heights).expect("balanced heights");
            out.push((c, lines));
        }
    }
    out
}

pub fn deinterleave_best(
    lines: &[String],
    lm: &NGramModel,
    max_columns: usize,
) -> (Vec<String>, usize) {
    let mut best: Option<(f64, usize, Vec<String>)> = None;
    for (c, cand) in hypotheses(lines, 2..=max_columns) {
        let r = read(&cand, lm);
        let score = if r.bigrams == 0 {
            0.0
        } else {
            r.log_prob / r.bigrams as f64
        };
        if best
            .as_ref()
            .is_none_or(|(s, _, _)| score > s + TIE_EPSILON)
        {
            best = Some((score, c, cand));
        }
    }
    let (_, c, lines) = best.expect("single-column hypothesis always present");
    (lines, c)
}
