use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{ParallelPair, PromptTemplate};
use crate::error::{Error, Result};
use crate::event::ErrorEvent;
use crate::layout::SectionLayout;

/// One line of the instruction-tuning JSONL export.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExportRecord {
    pub id: String,
    pub system: String,
    pub input: String,
    pub output: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub events: Option<Vec<ErrorEvent>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub layout: Option<SectionLayout>,
}

impl ExportRecord {
    pub fn from_pair(pair: &ParallelPair, template: &PromptTemplate, include_events: bool) -> Self {
        Self {
            id: pair.id.clone(),
            system: template.system_text.clone(),
            input: pair.contaminated.clone(),
            output: pair.clean.clone(),
            events: include_events.then(|| pair.events.clone()),
            layout: include_events.then(|| pair.layout.clone()),
        }
    }

    /// Back to a pair; records exported without provenance yield an empty
    /// event log and a single-section layout.
    pub fn into_pair(self) -> ParallelPair {
        let layout = self.layout.unwrap_or_else(|| {
            let n = self.output.split('\n').count();
            SectionLayout {
                sections: vec![crate::layout::Section::single(0, n)],
            }
        });
        ParallelPair {
            id: self.id,
            clean: self.output,
            contaminated: self.input,
            layout,
            events: self.events.unwrap_or_default(),
        }
    }
}

/// Writes one record per line to `out`; returns the count written.
pub fn write_jsonl<'a, W: Write>(
    pairs: impl IntoIterator<Item = &'a ParallelPair>,
    template: &PromptTemplate,
    out: W,
    include_events: bool,
) -> std::io::Result<usize> {
    let mut w = BufWriter::new(out);
    let mut n = 0;
    for pair in pairs {
        let rec = ExportRecord::from_pair(pair, template, include_events);
        serde_json::to_writer(&mut w, &rec)?;
        w.write_all(b"\n")?;
        n += 1;
    }
    w.flush()?;
    Ok(n)
}

/// Writes the JSONL export to `path`, removing the partial file on failure.
pub fn export_jsonl<'a>(
    pairs: impl IntoIterator<Item = &'a ParallelPair>,
    template: &PromptTemplate,
    path: impl AsRef<Path>,
    include_events: bool,
) -> Result<usize> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_jsonl(pairs, template, file, include_events).map_err(|e| {
        let _ = fs::remove_file(path);
        Error::io(path, e)
    })
}

/// Reads an export back, one record per non-blank line.
pub fn read_export(path: impl AsRef<Path>) -> Result<Vec<ExportRecord>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|e| Error::Parse {
            line: idx + 1,
            message: e.to_string(),
        })?);
    }
    Ok(out)
}
