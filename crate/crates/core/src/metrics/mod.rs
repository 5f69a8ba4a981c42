//! Edit-distance metrics, corpus evaluation, and BM25 retrieval recall.

mod edit;
mod eval;
mod retrieval;

pub use edit::{cer, edit_stats, levenshtein, wer, EditStats};
pub use eval::{evaluate_pairs, CorrectedText, EvalReport};
pub use retrieval::{
    bm25_recall, synthesize_queries, terms, Bm25Index, RetrievalReport, Variant, BM25_B, BM25_K1,
    DEFAULT_K_VALUES, MIN_QUERY_TOKENS,
};
