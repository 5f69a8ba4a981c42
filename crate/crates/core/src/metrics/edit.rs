use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::text::normalize_whitespace;

/// Unit-cost edit script statistics turning `a` into `b`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EditStats {
    pub distance: usize,
    pub insertions: usize,
    pub deletions: usize,
    pub substitutions: usize,
}

impl EditStats {
    fn step(self, ins: usize, del: usize, sub: usize) -> Self {
        Self {
            distance: self.distance + ins + del + sub,
            insertions: self.insertions + ins,
            deletions: self.deletions + del,
            substitutions: self.substitutions + sub,
        }
    }
}

/// Levenshtein distance over arbitrary sequences. Among optimal scripts,
/// prefers substitutions, then deletions.
pub fn edit_stats<T: PartialEq>(a: &[T], b: &[T]) -> EditStats {
    let mut prev: Vec<EditStats> = (0..=b.len())
        .map(|j| EditStats::default().step(j, 0, 0))
        .collect();
    let mut cur = prev.clone();
    for (i, x) in a.iter().enumerate() {
        cur[0] = EditStats::default().step(0, i + 1, 0);
        for (j, y) in b.iter().enumerate() {
            let diag = prev[j].step(0, 0, usize::from(x != y));
            let del = prev[j + 1].step(0, 1, 0);
            let ins = cur[j].step(1, 0, 0);
            let mut best = diag;
            if del.distance < best.distance {
                best = del;
            }
            if ins.distance < best.distance {
                best = ins;
            }
            cur[j + 1] = best;
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

pub fn levenshtein(a: &str, b: &str) -> EditStats {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    edit_stats(&a, &b)
}

/// Character distance and reference length after whitespace normalization.
pub(crate) fn char_errors(hypothesis: &str, reference: &str) -> (usize, usize) {
    let h: Vec<char> = normalize_whitespace(hypothesis).chars().collect();
    let r: Vec<char> = normalize_whitespace(reference).chars().collect();
    (edit_stats(&h, &r).distance, r.len())
}

pub(crate) fn word_errors(hypothesis: &str, reference: &str) -> (usize, usize) {
    let h: Vec<&str> = hypothesis.split_whitespace().collect();
    let r: Vec<&str> = reference.split_whitespace().collect();
    (edit_stats(&h, &r).distance, r.len())
}

fn ratio((errors, len): (usize, usize)) -> Result<f64> {
    if len == 0 {
        return Err(Error::EmptyInput("reference text is empty".into()));
    }
    Ok(errors as f64 / len as f64)
}

pub fn cer(hypothesis: &str, reference: &str) -> Result<f64> {
    ratio(char_errors(hypothesis, reference))
}

pub fn wer(hypothesis: &str, reference: &str) -> Result<f64> {
    ratio(word_errors(hypothesis, reference))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kitten_sitting() {
        let s = levenshtein("kitten", "sitting");
        assert_eq!(
            (s.distance, s.substitutions, s.insertions, s.deletions),
            (3, 2, 1, 0)
        );
    }

    #[test]
    fn trivial_cases() {
        assert_eq!(levenshtein("abc", "abc").distance, 0);
        let s = levenshtein("", "abc");
        assert_eq!((s.distance, s.insertions), (3, 3));
        let s = levenshtein("abc", "");
        assert_eq!((s.distance, s.deletions), (3, 3));
    }

    #[test]
    fn rates() {
        assert!((cer("sittin", "sitting").unwrap() - 1.0 / 7.0).abs() < 1e-12);
        assert_eq!(cer("same text", "same text").unwrap(), 0.0);
        assert_eq!(cer("a b", "a  b").unwrap(), 0.0);
        assert_eq!(wer("a x c", "a b c").unwrap(), 1.0 / 3.0);
        assert!(matches!(cer("x", " "), Err(Error::EmptyInput(_))));
        assert!(wer("x", "").is_err());
    }
}
