use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::document::CleanDocument;
use crate::error::{Error, Result};
use crate::rng::{derive_rng, QUERY_STREAM_BASE};

pub const BM25_K1: f64 = 1.2;
pub const BM25_B: f64 = 0.75;
pub const DEFAULT_K_VALUES: [usize; 3] = [1, 3, 5];
pub const MIN_QUERY_TOKENS: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Clean,
    Contaminated,
    Corrected,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RetrievalReport {
    pub variant: Variant,
    pub query_count: usize,
    pub recall_at: BTreeMap<usize, f64>,
}

/// Lowercased alphanumeric runs.
pub fn terms(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .collect()
}

/// Inverted index scored with Okapi BM25.
pub struct Bm25Index {
    ids: Vec<String>,
    lengths: Vec<f64>,
    avg_len: f64,
    postings: HashMap<String, Vec<(u32, u32)>>,
}

impl Bm25Index {
    pub fn new(documents: &[(String, String)]) -> Result<Self> {
        if documents.is_empty() {
            return Err(Error::EmptyInput("no documents to index".into()));
        }
        let mut postings: HashMap<String, Vec<(u32, u32)>> = HashMap::new();
        let mut lengths = Vec::with_capacity(documents.len());
        for (d, (_, text)) in documents.iter().enumerate() {
            let ts = terms(text);
            lengths.push(ts.len() as f64);
            let mut tf: BTreeMap<String, u32> = BTreeMap::new();
            for t in ts {
                *tf.entry(t).or_insert(0) += 1;
            }
            for (t, f) in tf {
                postings.entry(t).or_default().push((d as u32, f));
            }
        }
        let avg_len = lengths.iter().sum::<f64>() / lengths.len() as f64;
        Ok(Self {
            ids: documents.iter().map(|(id, _)| id.clone()).collect(),
            lengths,
            avg_len: avg_len.max(f64::MIN_POSITIVE),
            postings,
        })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn scores(&self, query: &str) -> Vec<f64> {
        let n = self.ids.len() as f64;
        let mut scores = vec![0.0; self.ids.len()];
        for t in terms(query) {
            let Some(post) = self.postings.get(&t) else {
                continue;
            };
            let df = post.len() as f64;
            let idf = ((n - df + 0.5) / (df + 0.5) + 1.0).ln();
            for &(d, f) in post {
                let f = f as f64;
                let norm =
                    BM25_K1 * (1.0 - BM25_B + BM25_B * self.lengths[d as usize] / self.avg_len);
                scores[d as usize] += idf * f * (BM25_K1 + 1.0) / (f + norm);
            }
        }
        scores
    }

    /// Document ids in rank order, ties broken by id.
    pub fn rank(&self, query: &str) -> Vec<&str> {
        let scores = self.scores(query);
        let mut order: Vec<usize> = (0..self.ids.len()).collect();
        order.sort_by(|&a, &b| {
            scores[b]
                .total_cmp(&scores[a])
                .then_with(|| self.ids[a].cmp(&self.ids[b]))
        });
        order.into_iter().map(|i| self.ids[i].as_str()).collect()
    }

    fn rank_of(&self, query: &str, doc: usize) -> usize {
        let scores = self.scores(query);
        let s = scores[doc];
        let id = &self.ids[doc];
        scores
            .iter()
            .zip(&self.ids)
            .filter(|&(&o, oid)| o > s || (o == s && oid < id))
            .count()
    }
}

pub fn bm25_recall(
    documents: &[(String, String)],
    queries: &[(String, String)],
    k_values: &BTreeSet<usize>,
    variant: Variant,
) -> Result<RetrievalReport> {
    if queries.is_empty() {
        return Err(Error::EmptyInput("no queries".into()));
    }
    let index = Bm25Index::new(documents)?;
    let pos: HashMap<&str, usize> = documents
        .iter()
        .enumerate()
        .map(|(i, (id, _))| (id.as_str(), i))
        .collect();
    let unresolved: Vec<String> = queries
        .iter()
        .filter(|(_, rel)| !pos.contains_key(rel.as_str()))
        .map(|(_, rel)| rel.clone())
        .collect();
    if !unresolved.is_empty() {
        return Err(Error::UnmatchedIds(unresolved));
    }
    let ranks: Vec<usize> = queries
        .iter()
        .map(|(q, rel)| index.rank_of(q, pos[rel.as_str()]))
        .collect();
    let recall_at = k_values
        .iter()
        .map(|&k| {
            let hits = ranks.iter().filter(|&&r| r < k).count();
            (k, hits as f64 / ranks.len() as f64)
        })
        .collect();
    Ok(RetrievalReport {
        variant,
        query_count: queries.len(),
        recall_at,
    })
}

/// Sentences split after terminal punctuation.
fn sentences(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur: Vec<&str> = Vec::new();
    for tok in text.split_whitespace() {
        cur.push(tok);
        if tok.ends_with(['.', '!', '?']) {
            out.push(cur.join(" "));
            cur.clear();
        }
    }
    if !cur.is_empty() {
        out.push(cur.join(" "));
    }
    out
}

/// One uniformly drawn sentence of at least six tokens per document, paired
/// with its source id. Documents without such a sentence get no query.
pub fn synthesize_queries(corpus: &[CleanDocument], master_seed: u64) -> Vec<(String, String)> {
    corpus
        .iter()
        .enumerate()
        .filter_map(|(i, doc)| {
            let pool: Vec<String> = sentences(&doc.text)
                .into_iter()
                .filter(|s| s.split_whitespace().count() >= MIN_QUERY_TOKENS)
                .collect();
            if pool.is_empty() {
                log::warn!(
                    "document {} has no sentence long enough for a query",
                    doc.id
                );
                return None;
            }
            let mut rng = derive_rng(master_seed, QUERY_STREAM_BASE + i as u64);
            let s = pool[rng.gen_range(0..pool.len())].clone();
            Some((s, doc.id.clone()))
        })
        .collect()
}

impl RetrievalReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_table(reports: &[RetrievalReport]) -> String {
        let ks: BTreeSet<usize> = reports
            .iter()
            .flat_map(|r| r.recall_at.keys().copied())
            .collect();
        let mut rows = vec![std::iter::once("variant".to_string())
            .chain(ks.iter().map(|k| format!("recall@{k}")))
            .chain(std::iter::once("queries".to_string()))
            .collect::<Vec<_>>()];
        for r in reports {
            let name = serde_json::to_value(r.variant)
                .unwrap()
                .as_str()
                .unwrap_or_default()
                .to_string();
            rows.push(
                std::iter::once(name)
                    .chain(
                        ks.iter()
                            .map(|k| r.recall_at.get(k).map_or("-".into(), |v| format!("{v:.4}"))),
                    )
                    .chain(std::iter::once(r.query_count.to_string()))
                    .collect(),
            );
        }
        let widths: Vec<usize> = (0..rows[0].len())
            .map(|c| rows.iter().map(|r| r[c].len()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for row in rows {
            let cells: Vec<String> = row
                .iter()
                .enumerate()
                .map(|(c, v)| {
                    if c == 0 {
                        format!("{v:<w$}", w = widths[c])
                    } else {
                        format!("{v:>w$}", w = widths[c])
                    }
                })
                .collect();
            out.push_str(cells.join("  ").trim_end());
            out.push('\n');
        }
        out
    }
}
