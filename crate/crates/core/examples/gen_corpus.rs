//! Writes documents of a seeded synthetic language as `{"id", "text"}` JSONL.
//!
//! cargo run --example gen_corpus -- <count> [first_index] [language_seed]
//!
//! Disjoint index windows of the same language give a training corpus and a
//! held-out test corpus.

use std::io::{self, BufWriter, Write};

use ocrnoise::synthetic::SyntheticLanguage;

fn main() -> io::Result<()> {
    let mut args = std::env::args().skip(1);
    let count: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(100);
    let first: u64 = args.next().and_then(|a| a.parse().ok()).unwrap_or(0);
    let seed: u64 = args.next().and_then(|a| a.parse().ok()).unwrap_or(0);
    let lang = SyntheticLanguage::new(seed, 2000);
    let mut out = BufWriter::new(io::stdout().lock());
    for doc in lang.corpus(seed, first, count, 8..=20) {
        serde_json::to_writer(&mut out, &doc)?;
        writeln!(out)?;
    }
    out.flush()
}
