//! Full correction pass: reading order, word boundaries and token spelling,
//! repeated until the text stops changing.

use serde::{Deserialize, Serialize};

use super::deinterleave::{hypotheses, read, Reading};
use super::models::Models;
use super::repair::repair_token_weighted;
use super::segment::{observe, segment_viterbi, TIE_EPSILON};
use crate::channels::ConfusionTable;
use crate::profile::ContaminationProfile;

const MAX_ROUNDS: usize = 4;

/// Roughly `-ln 0.05`: the price of one channel error at the default
/// contamination rates, used for edits, spacing disagreements and each
/// character of an unknown word alike.
pub const CHANNEL_COST: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrectorSettings {
    pub spacing_penalty: f64,
    pub unknown_char_cost: f64,
    pub max_edits: u32,
    /// Multiplier on repair edit costs.
    pub edit_weight: f64,
    /// Lets repair leave a token as an unknown word, priced like an
    /// unknown span in segmentation.
    pub keep_unknown: bool,
}

impl Default for CorrectorSettings {
    fn default() -> Self {
        Self {
            spacing_penalty: CHANNEL_COST,
            unknown_char_cost: CHANNEL_COST,
            max_edits: 2,
            edit_weight: CHANNEL_COST,
            keep_unknown: true,
        }
    }
}

/// Edits applied, by error category.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageDiagnostics {
    pub column: usize,
    pub segmentation: usize,
    pub substitution: usize,
    pub insertion: usize,
    pub deletion: usize,
    pub transposition: usize,
}

impl StageDiagnostics {
    pub fn total(&self) -> usize {
        self.column
            + self.segmentation
            + self.substitution
            + self.insertion
            + self.deletion
            + self.transposition
    }

    fn add(&mut self, o: &StageDiagnostics) {
        self.column += o.column;
        self.segmentation += o.segmentation;
        self.substitution += o.substitution;
        self.insertion += o.insertion;
        self.deletion += o.deletion;
        self.transposition += o.transposition;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Correction {
    pub text: String,
    pub chosen_columns_per_section: Vec<usize>,
    pub stage_diagnostics: StageDiagnostics,
}

pub fn correct(
    document: &str,
    models: &Models,
    confusion: &ConfusionTable,
    profile_hint: Option<&ContaminationProfile>,
) -> Correction {
    correct_with(
        document,
        models,
        confusion,
        profile_hint,
        &CorrectorSettings::default(),
    )
}

pub fn correct_with(
    document: &str,
    models: &Models,
    confusion: &ConfusionTable,
    profile_hint: Option<&ContaminationProfile>,
    settings: &CorrectorSettings,
) -> Correction {
    let default_profile;
    let profile = match profile_hint {
        Some(p) => p,
        None => {
            default_profile = ContaminationProfile::default();
            &default_profile
        }
    };
    let mut text = normalize_lines(document);
    let mut chosen = Vec::new();
    let mut diag = StageDiagnostics::default();
    for round in 0..MAX_ROUNDS {
        let (next, cols, d) = correct_once(&text, models, confusion, profile, settings);
        if round == 0 {
            chosen = cols;
        }
        diag.add(&d);
        if next == text {
            break;
        }
        text = next;
    }
    Correction {
        text,
        chosen_columns_per_section: chosen,
        stage_diagnostics: diag,
    }
}

fn normalize_lines(text: &str) -> String {
    text.lines()
        .map(|l| l.split_whitespace().collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join("\n")
        .trim_matches('\n')
        .to_string()
}

fn correct_once(
    text: &str,
    models: &Models,
    confusion: &ConfusionTable,
    profile: &ContaminationProfile,
    settings: &CorrectorSettings,
) -> (String, Vec<usize>, StageDiagnostics) {
    let mut diag = StageDiagnostics::default();
    // segmentation and repair are line-local, so they commute with line
    // reordering; running them first lets the reading order be scored on
    // repaired tokens
    let lines: Vec<String> = text
        .split('\n')
        .map(|line| {
            if line.trim().is_empty() {
                return String::new();
            }
            let segmented = segment_viterbi(
                line,
                &models.lexicon,
                settings.spacing_penalty,
                settings.unknown_char_cost,
            );
            diag.segmentation += spacing_changes(line, &segmented);
            let repaired: Vec<String> = segmented
                .split(' ')
                .map(|tok| {
                    let fixed = repair_token_weighted(
                        tok,
                        &models.lexicon,
                        confusion,
                        settings.max_edits,
                        settings.edit_weight,
                        settings.keep_unknown.then_some(settings.unknown_char_cost),
                    );
                    if fixed != tok {
                        count_edits(tok, &fixed, confusion, &mut diag);
                    }
                    fixed
                })
                .collect();
            repaired.join(" ")
        })
        .collect();

    let mut chosen = Vec::new();
    let mut out_lines: Vec<&str> = Vec::with_capacity(lines.len());
    let mut start = 0;
    while start < lines.len() {
        if lines[start].is_empty() {
            out_lines.push("");
            start += 1;
            continue;
        }
        let end = lines[start..]
            .iter()
            .position(|l| l.is_empty())
            .map_or(lines.len(), |k| start + k);
        let block: Vec<&str> = lines[start..end].iter().map(String::as_str).collect();
        for (cols, section) in reorder_block(&block, models, profile) {
            if cols > 1 {
                diag.column += 1;
            }
            chosen.push(cols);
            out_lines.extend(section);
        }
        start = end;
    }
    (out_lines.join("\n"), chosen, diag)
}

/// Splits a block of non-blank lines into sections sized like the
/// profile's and picks the reading order of each, maximizing the bigram
/// log-probability of the whole block plus the profile's priors on section
/// length and column count.
fn reorder_block<'a>(
    block: &[&'a str],
    models: &Models,
    profile: &ContaminationProfile,
) -> Vec<(usize, Vec<&'a str>)> {
    let n = block.len();
    let lo = profile.section_lines_min.max(1);
    let hi = profile.section_lines_max.max(lo);
    let allowed: Vec<usize> = if profile.p_multicolumn_section > 0.0 {
        profile.allowed_columns.iter().copied().collect()
    } else {
        Vec::new()
    };
    let min_cols = allowed.first().copied().unwrap_or(usize::MAX);
    let lm = &models.lm;

    // nodes: (start, end, columns, lines, reading)
    struct Node<'b> {
        start: usize,
        columns: usize,
        lines: Vec<&'b str>,
        reading: Reading,
        prior: f64,
    }
    let p_multi = profile.p_multicolumn_section.clamp(1e-6, 1.0 - 1e-6);
    let len_prior = -((hi - lo + 1) as f64).ln();
    let mut by_end: Vec<Vec<Node<'a>>> = (0..=n).map(|_| Vec::new()).collect();
    for start in 0..n {
        for len in 1..=hi.min(n - start) {
            let end = start + len;
            if len < lo && end != n {
                continue;
            }
            let eligible = len >= 2 * min_cols;
            let cols = if eligible {
                allowed.clone()
            } else {
                Vec::new()
            };
            for (c, lines) in hypotheses(&block[start..end], cols) {
                let reading = read(&lines, lm);
                let column_prior = match (eligible, c) {
                    (false, _) => 0.0,
                    (true, 1) => (1.0 - p_multi).ln(),
                    (true, _) => (p_multi / allowed.len() as f64).ln(),
                };
                by_end[end].push(Node {
                    start,
                    columns: c,
                    lines,
                    reading,
                    prior: len_prior + column_prior,
                });
            }
        }
    }

    // best[end][k]: best score of a partition of block[..end] whose last
    // section is by_end[end][k]
    let mut best: Vec<Vec<(f64, Option<usize>)>> = by_end
        .iter()
        .map(|v| vec![(f64::NEG_INFINITY, None); v.len()])
        .collect();
    for end in 1..=n {
        for k in 0..by_end[end].len() {
            let node = &by_end[end][k];
            let mut score = f64::NEG_INFINITY;
            let mut back = None;
            if node.start == 0 {
                score = node.prior + node.reading.log_prob;
            } else {
                for (p, prev) in by_end[node.start].iter().enumerate() {
                    let base = best[node.start][p].0;
                    if base == f64::NEG_INFINITY {
                        continue;
                    }
                    let link = match (prev.reading.last, node.reading.first) {
                        (Some(a), Some(b)) => lm.reading_log_prob_ids(a, b),
                        _ => 0.0,
                    };
                    let s = base + link + node.prior + node.reading.log_prob;
                    if s > score + TIE_EPSILON {
                        score = s;
                        back = Some(p);
                    }
                }
            }
            best[end][k] = (score, back);
        }
    }

    let mut k = (0..by_end[n].len())
        .fold(None::<usize>, |acc, k| match acc {
            Some(a) if best[n][k].0 <= best[n][a].0 + TIE_EPSILON => Some(a),
            _ => Some(k),
        })
        .expect("block is non-empty");
    let mut end = n;
    let mut picked = Vec::new();
    loop {
        let node = &by_end[end][k];
        picked.push((node.columns, node.lines.clone()));
        match best[end][k].1 {
            Some(p) => {
                end = node.start;
                k = p;
            }
            None => break,
        }
    }
    picked.reverse();
    picked
}

fn spacing_changes(before: &str, after: &str) -> usize {
    let a = observe(before).spaced;
    let b = observe(after).spaced;
    a.iter().zip(&b).filter(|(x, y)| x != y).count()
}

/// Classifies the cheapest restricted edit script from `from` to `to`.
fn count_edits(from: &str, to: &str, confusion: &ConfusionTable, diag: &mut StageDiagnostics) {
    let a: Vec<char> = from.to_lowercase().chars().collect();
    let b: Vec<char> = to.to_lowercase().chars().collect();
    let (n, m) = (a.len(), b.len());
    let sub = |x: char, y: char| -> u32 {
        if x == y {
            0
        } else if confusion.confusable(x, y) {
            1
        } else {
            2
        }
    };
    let mut d = vec![vec![0u32; m + 1]; n + 1];
    for i in 0..=n {
        for j in 0..=m {
            d[i][j] = if i == 0 {
                2 * j as u32
            } else if j == 0 {
                2 * i as u32
            } else {
                let mut v = (d[i - 1][j] + 2)
                    .min(d[i][j - 1] + 2)
                    .min(d[i - 1][j - 1] + sub(a[i - 1], b[j - 1]));
                if i > 1
                    && j > 1
                    && a[i - 1] == b[j - 2]
                    && a[i - 2] == b[j - 1]
                    && a[i - 1] != b[j - 1]
                {
                    v = v.min(d[i - 2][j - 2] + 2);
                }
                v
            };
        }
    }
    let (mut i, mut j) = (n, m);
    while i > 0 || j > 0 {
        if i > 0 && j > 0 && d[i][j] == d[i - 1][j - 1] + sub(a[i - 1], b[j - 1]) {
            if a[i - 1] != b[j - 1] {
                diag.substitution += 1;
            }
            i -= 1;
            j -= 1;
        } else if i > 1
            && j > 1
            && a[i - 1] == b[j - 2]
            && a[i - 2] == b[j - 1]
            && a[i - 1] != b[j - 1]
            && d[i][j] == d[i - 2][j - 2] + 2
        {
            diag.transposition += 1;
            i -= 2;
            j -= 2;
        } else if i > 0 && d[i][j] == d[i - 1][j] + 2 {
            // a character of the observed token was spurious
            diag.insertion += 1;
            i -= 1;
        } else {
            diag.deletion += 1;
            j -= 1;
        }
    }
}
