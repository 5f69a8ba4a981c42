//! Confusion-weighted token repair: nearest lexicon words under a
//! restricted Damerau-Levenshtein distance, ranked by edit cost plus
//! unigram surprisal.

use std::collections::HashMap;

use super::models::Lexicon;
use super::segment::TIE_EPSILON;
use crate::channels::ConfusionTable;

// costs in half-edits so confusable substitutions stay integral
const CONFUSABLE: u32 = 1;
const EDIT: u32 = 2;

/// Prefix tree over the lowercase lexicon.
#[derive(Debug, Clone, Default)]
pub(crate) struct Trie {
    nodes: Vec<Node>,
}

#[derive(Debug, Clone, Default)]
struct Node {
    children: Vec<(char, u32)>,
    count: u64,
}

impl Trie {
    pub(crate) fn build(words: &HashMap<String, u64>) -> Self {
        let mut sorted: Vec<(&String, &u64)> = words.iter().collect();
        sorted.sort_unstable();
        let mut trie = Trie {
            nodes: vec![Node::default()],
        };
        for (w, &c) in sorted {
            let mut at = 0usize;
            for ch in w.chars() {
                at = match trie.nodes[at].children.iter().find(|(k, _)| *k == ch) {
                    Some(&(_, id)) => id as usize,
                    None => {
                        let id = trie.nodes.len();
                        trie.nodes.push(Node::default());
                        trie.nodes[at].children.push((ch, id as u32));
                        id
                    }
                };
            }
            trie.nodes[at].count += c;
        }
        trie
    }
}

struct Search<'a> {
    trie: &'a Trie,
    token: &'a [char],
    confusion: &'a ConfusionTable,
    bound: u32,
    path: Vec<char>,
    rows: Vec<Vec<u32>>,
    found: Vec<(String, u32, u64)>,
}

impl Search<'_> {
    fn sub_cost(&self, a: char, b: char) -> u32 {
        if a == b {
            0
        } else if self.confusion.confusable(a, b) {
            CONFUSABLE
        } else {
            EDIT
        }
    }

    fn visit(&mut self, node: usize) {
        let depth = self.path.len();
        let row = &self.rows[depth];
        let m = self.token.len();
        if self.trie.nodes[node].count > 0 && row[m] <= self.bound {
            self.found.push((
                self.path.iter().collect(),
                row[m],
                self.trie.nodes[node].count,
            ));
        }
        if row.iter().min().is_some_and(|&v| v > self.bound) {
            return;
        }
        for k in 0..self.trie.nodes[node].children.len() {
            let (ch, child) = self.trie.nodes[node].children[k];
            let i = depth + 1;
            let mut next = vec![0u32; m + 1];
            next[0] = self.rows[depth][0] + EDIT;
            for j in 1..=m {
                let t = self.token[j - 1];
                let mut best = (self.rows[depth][j] + EDIT)
                    .min(next[j - 1] + EDIT)
                    .min(self.rows[depth][j - 1] + self.sub_cost(t, ch));
                if i >= 2 && j >= 2 && t == self.path[i - 2] && self.token[j - 2] == ch && t != ch {
                    best = best.min(self.rows[depth - 1][j - 2] + EDIT);
                }
                next[j] = best;
            }
            if self.rows.len() > i {
                self.rows[i] = next;
            } else {
                self.rows.push(next);
            }
            self.path.push(ch);
            self.visit(child as usize);
            self.path.pop();
        }
    }
}

/// Lowercase lexicon words within `max_edits` of `token` (already
/// lowercased), with their costs in half-edits and counts.
pub(crate) fn candidates(
    token: &str,
    trie: &Trie,
    confusion: &ConfusionTable,
    max_edits: u32,
) -> Vec<(String, u32, u64)> {
    let token: Vec<char> = token.chars().collect();
    let first: Vec<u32> = (0..=token.len() as u32).map(|j| j * EDIT).collect();
    let mut search = Search {
        trie,
        token: &token,
        confusion,
        bound: max_edits * EDIT,
        path: Vec::new(),
        rows: vec![first],
        found: Vec::new(),
    };
    search.visit(0);
    search.found
}

fn restore_case(token: &str, candidate: &str) -> String {
    let letters: Vec<char> = token.chars().filter(|c| c.is_alphabetic()).collect();
    if letters.len() >= 2 && letters.iter().all(|c| c.is_uppercase()) {
        return candidate.to_uppercase();
    }
    if token.chars().next().is_some_and(char::is_uppercase) {
        let mut cs = candidate.chars();
        if let Some(f) = cs.next() {
            return f.to_uppercase().chain(cs).collect();
        }
    }
    candidate.to_string()
}

pub fn repair_token(
    token: &str,
    lexicon: &Lexicon,
    confusion: &ConfusionTable,
    max_edits: u32,
) -> String {
    repair_token_weighted(token, lexicon, confusion, max_edits, 1.0, None)
}

/// [`repair_token`] with edit costs scaled by `edit_weight`. With
/// `keep_cost_per_char`, leaving the token as an unknown word is itself a
/// candidate costing that much per character.
pub fn repair_token_weighted(
    token: &str,
    lexicon: &Lexicon,
    confusion: &ConfusionTable,
    max_edits: u32,
    edit_weight: f64,
    keep_cost_per_char: Option<f64>,
) -> String {
    if lexicon.contains(token) || !token.chars().any(char::is_alphanumeric) {
        return token.to_string();
    }
    let folded = token.to_lowercase();
    let denom = (lexicon.total() + lexicon.len() as u64) as f64;
    let mut best: Option<(f64, u32, String)> = None;
    for (word, cost, count) in candidates(&folded, lexicon.trie(), confusion, max_edits) {
        let score = edit_weight * cost as f64 / EDIT as f64 - ((count as f64 + 1.0) / denom).ln();
        let better = match &best {
            None => true,
            Some((s, c, w)) => {
                score < s - TIE_EPSILON || (score <= s + TIE_EPSILON && (cost, &word) < (*c, w))
            }
        };
        if better {
            best = Some((score, cost, word));
        }
    }
    match best {
        Some((score, _, w)) => {
            let keep =
                keep_cost_per_char.map_or(f64::INFINITY, |c| c * token.chars().count() as f64);
            if score < keep {
                restore_case(token, &w)
            } else {
                token.to_string()
            }
        }
        None => token.to_string(),
    }
}
