//! Minimum-cost word segmentation against a lexicon, anchored to the
//! observed spacing.

use super::models::Lexicon;

pub const MAX_UNKNOWN_SPAN: usize = 20;
pub(crate) const TIE_EPSILON: f64 = 1e-9;

/// Space-stripped characters plus, for each inner position `i`, whether
/// the input had whitespace between char `i - 1` and char `i`.
pub(crate) struct Observed {
    pub chars: Vec<char>,
    pub spaced: Vec<bool>,
}

pub(crate) fn observe(text: &str) -> Observed {
    let mut chars = Vec::new();
    let mut spaced = Vec::new();
    let mut gap = false;
    for c in text.chars() {
        if c.is_whitespace() {
            gap = true;
            continue;
        }
        spaced.push(gap && !chars.is_empty());
        chars.push(c);
        gap = false;
    }
    Observed { chars, spaced }
}

/// Cost of `span` as one word, or `None` when it cannot be one.
pub(crate) fn span_cost(
    span: &str,
    len: usize,
    lexicon: &Lexicon,
    unknown_char_cost: f64,
) -> Option<f64> {
    match lexicon.word_cost(span) {
        Some(c) => Some(c),
        None if len <= MAX_UNKNOWN_SPAN => Some(unknown_char_cost * len as f64),
        None => None,
    }
}

pub fn segment_viterbi(
    text: &str,
    lexicon: &Lexicon,
    spacing_penalty: f64,
    unknown_char_cost: f64,
) -> String {
    let obs = observe(text);
    let n = obs.chars.len();
    if n == 0 {
        return String::new();
    }
    let stripped: String = obs.chars.iter().collect();
    let byte: Vec<usize> = stripped
        .char_indices()
        .map(|(b, _)| b)
        .chain(std::iter::once(stripped.len()))
        .collect();
    // spaced_prefix[i] = observed gaps at positions 1..i
    let mut spaced_prefix = vec![0usize; n + 1];
    for i in 1..=n {
        spaced_prefix[i] = spaced_prefix[i - 1] + usize::from(i < n && obs.spaced[i]);
    }
    let max_span = lexicon.max_word_chars().max(MAX_UNKNOWN_SPAN);

    // best[i]: cost of segmenting chars[i..]; next[i]: end of the first word
    let mut best = vec![f64::INFINITY; n + 1];
    let mut next = vec![n; n + 1];
    best[n] = 0.0;
    for i in (0..n).rev() {
        for j in (i + 1..=(i + max_span).min(n)).rev() {
            if !best[j].is_finite() {
                continue;
            }
            let Some(word) = span_cost(
                &stripped[byte[i]..byte[j]],
                j - i,
                lexicon,
                unknown_char_cost,
            ) else {
                continue;
            };
            // merged gaps inside the span, plus a boundary the input lacked
            let inside = spaced_prefix[j - 1] - spaced_prefix[i];
            let split = usize::from(j < n && !obs.spaced[j]);
            let cost = word + spacing_penalty * (inside + split) as f64 + best[j];
            // longer first words win ties
            if cost < best[i] - TIE_EPSILON {
                best[i] = cost;
                next[i] = j;
            }
        }
    }

    let mut out = String::with_capacity(stripped.len() + n / 4);
    let mut i = 0;
    while i < n {
        if i > 0 {
            out.push(' ');
        }
        out.push_str(&stripped[byte[i]..byte[next[i]]]);
        i = next[i];
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lex() -> Lexicon {
        Lexicon::from_counts(
            [("the", 100), ("cat", 50), ("theca", 1), ("t", 1)].map(|(w, c)| (w.to_string(), c)),
        )
        .unwrap()
    }

    #[test]
    fn splits_merged_words() {
        assert_eq!(segment_viterbi("thecat", &lex(), 0.0, 3.0), "the cat");
    }

    #[test]
    fn keeps_agreeing_spacing() {
        assert_eq!(segment_viterbi("the cat", &lex(), 0.0, 3.0), "the cat");
        assert_eq!(segment_viterbi("the cat", &lex(), 1.0, 3.0), "the cat");
    }

    #[test]
    fn empty_and_whitespace() {
        assert_eq!(segment_viterbi("", &lex(), 1.0, 3.0), "");
        assert_eq!(segment_viterbi(" \n ", &lex(), 1.0, 3.0), "");
    }

    #[test]
    fn joins_split_word() {
        assert_eq!(segment_viterbi("c at the", &lex(), 1.0, 3.0), "cat the");
    }

    #[test]
    fn case_falls_back_to_lowercase() {
        assert_eq!(segment_viterbi("Thecat", &lex(), 1.0, 3.0), "The cat");
    }

    #[test]
    fn long_unknown_run_is_chunked() {
        let s = "x".repeat(45);
        let out = segment_viterbi(&s, &lex(), 1.0, 3.0);
        assert_eq!(out.replace(' ', ""), s);
        assert!(out.split(' ').all(|w| w.len() <= MAX_UNKNOWN_SPAN));
    }
}
