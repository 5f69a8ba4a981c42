//! Independent reference implementations used by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use ocrnoise::ConfusionTable;

const EPS: f64 = 1e-9;

/// Plain recursive edit distance with no memoization.
pub fn levenshtein_recursive(a: &[char], b: &[char]) -> usize {
    match (a.split_first(), b.split_first()) {
        (None, _) => b.len(),
        (_, None) => a.len(),
        (Some((x, ra)), Some((y, rb))) => {
            if x == y {
                return levenshtein_recursive(ra, rb);
            }
            1 + levenshtein_recursive(ra, rb)
                .min(levenshtein_recursive(ra, b))
                .min(levenshtein_recursive(a, rb))
        }
    }
}

/// Word counts with the corrector's lookup rule: exact form first, then
/// the summed counts of all forms sharing the lowercase spelling.
pub struct RefLexicon {
    pub counts: HashMap<String, u64>,
}

impl RefLexicon {
    pub fn new(words: &[(String, u64)]) -> Self {
        let mut counts = HashMap::new();
        for (w, c) in words {
            *counts.entry(w.clone()).or_insert(0) += c;
        }
        Self { counts }
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn lookup(&self, w: &str) -> Option<u64> {
        if let Some(&c) = self.counts.get(w) {
            return Some(c);
        }
        let low = w.to_lowercase();
        let sum: u64 = self
            .counts
            .iter()
            .filter(|(k, _)| k.to_lowercase() == low)
            .map(|(_, c)| *c)
            .sum();
        (sum > 0).then_some(sum)
    }

    pub fn cost(&self, count: u64) -> f64 {
        -((count as f64 + 1.0) / (self.total() as f64 + self.counts.len() as f64)).ln()
    }

    pub fn to_lexicon(&self) -> ocrnoise::corrector::Lexicon {
        ocrnoise::corrector::Lexicon::from_counts(self.counts.iter().map(|(w, c)| (w.clone(), *c)))
            .unwrap()
    }
}

/// Tries every way of placing word boundaries in the space-stripped text.
pub fn segment_brute_force(
    text: &str,
    lex: &RefLexicon,
    spacing_penalty: f64,
    unknown_char_cost: f64,
) -> String {
    let mut chars = Vec::new();
    let mut observed = Vec::new();
    let mut gap = false;
    for c in text.chars() {
        if c.is_whitespace() {
            gap = true;
        } else {
            if !chars.is_empty() {
                observed.push(gap);
            }
            chars.push(c);
            gap = false;
        }
    }
    if chars.is_empty() {
        return String::new();
    }
    let n = chars.len();
    let mut best: Option<(f64, Vec<usize>)> = None;
    for mask in 0u32..(1 << (n - 1)) {
        let mut words: Vec<String> = vec![String::new()];
        let mut cost = 0.0;
        for i in 0..n {
            if i > 0 {
                let split = mask & (1 << (i - 1)) != 0;
                if split != observed[i - 1] {
                    cost += spacing_penalty;
                }
                if split {
                    words.push(String::new());
                }
            }
            words.last_mut().unwrap().push(chars[i]);
        }
        let mut feasible = true;
        for w in &words {
            let len = w.chars().count();
            match lex.lookup(w) {
                Some(c) => cost += lex.cost(c),
                None if len <= 20 => cost += unknown_char_cost * len as f64,
                None => feasible = false,
            }
        }
        if !feasible {
            continue;
        }
        let lens: Vec<usize> = words.iter().map(|w| w.chars().count()).collect();
        let better = match &best {
            None => true,
            Some((b, bl)) => cost < b - EPS || (cost <= b + EPS && lens > *bl),
        };
        if better {
            best = Some((cost, lens));
        }
    }
    let (_, lens) = best.expect("single characters are always feasible");
    let mut out = String::new();
    let mut at = 0;
    for (k, l) in lens.iter().enumerate() {
        if k > 0 {
            out.push(' ');
        }
        out.extend(&chars[at..at + l]);
        at += l;
    }
    out
}

fn same_letter(x: char, k: char) -> bool {
    x == k || k.to_lowercase().any(|l| l == x) || k.to_uppercase().any(|u| u == x)
}

/// Whether a table entry lists the pair in either direction, up to case.
pub fn confusable(table: &ConfusionTable, a: char, b: char) -> bool {
    a != b
        && table.iter().any(|(k, set)| {
            set.iter().any(|&v| {
                (same_letter(a, k) && same_letter(b, v)) || (same_letter(a, v) && same_letter(b, k))
            })
        })
}

/// Every string reachable from `token` by a script of edits that each
/// touch fresh characters: substitutions (half cost when confusable),
/// insertions, deletions and adjacent swaps. Costs are in half-edits.
pub fn edit_neighbourhood(
    token: &[char],
    alphabet: &[char],
    table: &ConfusionTable,
    budget: u32,
) -> HashMap<String, u32> {
    let mut out = HashMap::new();
    let mut buf = String::new();
    explore(token, 0, alphabet, table, budget, 0, &mut buf, &mut out);
    out
}

#[allow(clippy::too_many_arguments)]
fn explore(
    token: &[char],
    pos: usize,
    alphabet: &[char],
    table: &ConfusionTable,
    budget: u32,
    spent: u32,
    buf: &mut String,
    out: &mut HashMap<String, u32>,
) {
    let len = buf.len();
    if pos == token.len() {
        let e = out.entry(buf.clone()).or_insert(u32::MAX);
        *e = (*e).min(spent);
    }
    // insertion before token[pos]
    if spent + 2 <= budget {
        for &c in alphabet {
            buf.push(c);
            explore(token, pos, alphabet, table, budget, spent + 2, buf, out);
            buf.truncate(len);
        }
    }
    if pos == token.len() {
        return;
    }
    let t = token[pos];
    buf.push(t);
    explore(token, pos + 1, alphabet, table, budget, spent, buf, out);
    buf.truncate(len);
    for &c in alphabet {
        if c == t {
            continue;
        }
        let cost = if confusable(table, t, c) { 1 } else { 2 };
        if spent + cost <= budget {
            buf.push(c);
            explore(
                token,
                pos + 1,
                alphabet,
                table,
                budget,
                spent + cost,
                buf,
                out,
            );
            buf.truncate(len);
        }
    }
    if spent + 2 <= budget {
        explore(token, pos + 1, alphabet, table, budget, spent + 2, buf, out);
        if pos + 1 < token.len() && token[pos + 1] != t {
            buf.push(token[pos + 1]);
            buf.push(t);
            explore(token, pos + 2, alphabet, table, budget, spent + 2, buf, out);
            buf.truncate(len);
        }
    }
}

/// Lowercase-token repair by exhaustive neighbourhood search.
pub fn repair_exhaustive(
    token: &str,
    lex: &RefLexicon,
    table: &ConfusionTable,
    max_edits: u32,
) -> String {
    if lex.lookup(token).is_some() || !token.chars().any(char::is_alphanumeric) {
        return token.to_string();
    }
    let mut folded: HashMap<String, u64> = HashMap::new();
    for (w, c) in &lex.counts {
        *folded.entry(w.to_lowercase()).or_insert(0) += c;
    }
    let alphabet: Vec<char> = folded
        .keys()
        .flat_map(|w| w.chars())
        .collect::<BTreeSet<char>>()
        .into_iter()
        .collect();
    let low: Vec<char> = token.to_lowercase().chars().collect();
    let mut best: Option<(f64, u32, String)> = None;
    for (cand, cost) in edit_neighbourhood(&low, &alphabet, table, 2 * max_edits) {
        let Some(&count) = folded.get(&cand) else {
            continue;
        };
        let score = cost as f64 / 2.0 + lex.cost(count);
        let better = match &best {
            None => true,
            Some((s, c, w)) => score < s - EPS || (score <= s + EPS && (cost, &cand) < (*c, w)),
        };
        if better {
            best = Some((score, cost, cand));
        }
    }
    best.map_or_else(|| token.to_string(), |(_, _, w)| w)
}
