//! Corpus ingestion, two-stage contamination, and JSONL export.

mod export;
mod ingest;
mod prompt;
mod synth;

pub use export::{export_jsonl, read_export, write_jsonl, ExportRecord};
pub use ingest::{ingest_corpus, CorpusFormat};
pub use prompt::{PromptTemplate, DEFAULT_SYSTEM_PROMPT};
pub use synth::{contaminate_document, reconstruct, synthesize, with_pool, ParallelPair};
