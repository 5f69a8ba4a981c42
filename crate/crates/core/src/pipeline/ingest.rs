use std::fs;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::Deserialize;

use crate::document::CleanDocument;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusFormat {
    /// A directory of `.txt` files, one document per file, id = file stem.
    PlainDir,
    /// One `{"id": ..., "text": ...}` object per line.
    Jsonl,
}

impl CorpusFormat {
    /// Directories read as `PlainDir`, everything else as `Jsonl`.
    pub fn detect(path: &Path) -> Self {
        if path.is_dir() {
            CorpusFormat::PlainDir
        } else {
            CorpusFormat::Jsonl
        }
    }
}

#[derive(Deserialize)]
struct Record {
    id: String,
    text: String,
}

/// Reads a corpus in deterministic order, skipping empty documents.
pub fn ingest_corpus(path: impl AsRef<Path>, format: CorpusFormat) -> Result<Vec<CleanDocument>> {
    let path = path.as_ref();
    let docs = match format {
        CorpusFormat::PlainDir => read_dir(path)?,
        CorpusFormat::Jsonl => read_jsonl(path)?,
    };
    Ok(docs
        .into_iter()
        .filter(|d| {
            let keep = !d.text.trim().is_empty();
            if !keep {
                log::warn!("skipping empty document {:?}", d.id);
            }
            keep
        })
        .collect())
}

fn read_dir(path: &Path) -> Result<Vec<CleanDocument>> {
    let mut files = Vec::new();
    for entry in fs::read_dir(path).map_err(|e| Error::io(path, e))? {
        let p = entry.map_err(|e| Error::io(path, e))?.path();
        if p.is_file() && p.extension().is_some_and(|e| e == "txt") {
            files.push(p);
        }
    }
    files.sort();
    files
        .into_iter()
        .map(|p| {
            let text = fs::read_to_string(&p).map_err(|e| Error::io(&p, e))?;
            let id = p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            Ok(CleanDocument { id, text })
        })
        .collect()
}

fn read_jsonl(path: &Path) -> Result<Vec<CleanDocument>> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut docs = Vec::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: Record = serde_json::from_str(&line).map_err(|e| Error::Parse {
            line: idx + 1,
            message: e.to_string(),
        })?;
        if rec.id.is_empty() {
            return Err(Error::Parse {
                line: idx + 1,
                message: "empty id".into(),
            });
        }
        docs.push(CleanDocument {
            id: rec.id,
            text: rec.text,
        });
    }
    Ok(docs)
}
