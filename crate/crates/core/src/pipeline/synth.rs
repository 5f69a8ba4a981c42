use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channels::{apply_granular, ConfusionTable};
use crate::document::{CleanDocument, ContaminatedDocument};
use crate::error::{Error, Result};
use crate::event::{replay_from_pass, ErrorEvent, WORD_PASS};
use crate::layout::{contaminate_layout, wrap_lines, LineTemplate, SectionLayout};
use crate::profile::{validate_profile, ContaminationProfile};
use crate::rng::derive_rng;

/// A training / evaluation unit: wrapped clean text and its contaminated
/// counterpart.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParallelPair {
    pub id: String,
    /// Single-column template, lines joined by `'\n'`.
    pub clean: String,
    pub contaminated: String,
    pub layout: SectionLayout,
    pub events: Vec<ErrorEvent>,
}

impl ParallelPair {
    /// Rebuilds the contaminated text from `clean`, `layout` and `events`.
    pub fn reconstruct(&self) -> Result<String> {
        reconstruct(&self.clean, &self.layout, &self.events)
    }
}

/// Applies the column layout to `clean`'s lines, then replays the granular
/// events.
pub fn reconstruct(clean: &str, layout: &SectionLayout, events: &[ErrorEvent]) -> Result<String> {
    let lines: Vec<&str> = clean.split('\n').collect();
    let interleaved = layout.apply(&lines)?.join("\n");
    replay_from_pass(&interleaved, events, WORD_PASS)
}

/// Runs both contamination stages on one document using stream `index`.
pub fn contaminate_document(
    doc: &CleanDocument,
    index: u64,
    profile: &ContaminationProfile,
    confusion: &ConfusionTable,
) -> Result<(LineTemplate, ContaminatedDocument)> {
    let template = wrap_lines(&doc.text, profile.line_width)?;
    let mut rng = derive_rng(profile.master_seed, index);
    let structural = contaminate_layout(&template, profile, &mut rng);
    let granular = apply_granular(&structural.lines.join("\n"), profile, confusion, &mut rng);
    let mut events = structural.events;
    events.extend(granular.events);
    let contaminated = ContaminatedDocument {
        id: doc.id.clone(),
        text: granular.text,
        layout: structural.layout,
        events,
        clean_ref: doc.id.clone(),
    };
    Ok((template, contaminated))
}

/// Contaminates every document of `corpus`; document `i` uses stream
/// `first_index + i`. Documents that cannot be wrapped are skipped. Output
/// order follows the corpus regardless of `jobs`.
pub fn synthesize(
    corpus: &[CleanDocument],
    first_index: u64,
    profile: &ContaminationProfile,
    confusion: &ConfusionTable,
    jobs: usize,
) -> Result<Vec<ParallelPair>> {
    let violations = validate_profile(profile);
    if !violations.is_empty() {
        return Err(Error::Validation(violations));
    }
    let work = |(i, doc): (usize, &CleanDocument)| match contaminate_document(
        doc,
        first_index + i as u64,
        profile,
        confusion,
    ) {
        Ok((template, c)) => Some(ParallelPair {
            id: c.id,
            clean: template.joined(),
            contaminated: c.text,
            layout: c.layout,
            events: c.events,
        }),
        Err(e) => {
            log::warn!("skipping document {:?}: {e}", doc.id);
            None
        }
    };
    let pairs = with_pool(jobs, || {
        corpus.par_iter().enumerate().map(work).collect::<Vec<_>>()
    })?;
    Ok(pairs.into_iter().flatten().collect())
}

/// Runs `f` on a rayon pool of `jobs` threads.
pub fn with_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Precondition(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::event::replay;

    fn corpus(n: usize) -> Vec<CleanDocument> {
        (0..n)
            .map(|i| {
                let text = format!("document {i} says ")
                    + &"lorem ipsum dolor sit amet consectetur ".repeat(30 + i);
                CleanDocument::new(format!("d{i}"), text)
            })
            .collect()
    }

    #[test]
    fn identity_profile_pairs_are_equal() {
        let pairs = synthesize(
            &corpus(5),
            0,
            &ContaminationProfile::identity(),
            &ConfusionTable::default(),
            2,
        )
        .unwrap();
        assert_eq!(pairs.len(), 5);
        for p in pairs {
            assert_eq!(p.contaminated, p.clean);
            assert!(p.events.is_empty());
        }
    }

    #[test]
    fn full_deletion_leaves_whitespace() {
        let p = ContaminationProfile {
            del_char: 1.0,
            ..ContaminationProfile::identity()
        };
        let pairs = synthesize(&corpus(1), 0, &p, &ConfusionTable::default(), 1).unwrap();
        assert!(pairs[0].contaminated.chars().all(char::is_whitespace));
    }

    #[test]
    fn deterministic_across_jobs() {
        let p = ContaminationProfile {
            master_seed: 99,
            ..Default::default()
        };
        let docs = corpus(16);
        let a = synthesize(&docs, 0, &p, &ConfusionTable::default(), 1).unwrap();
        let b = synthesize(&docs, 0, &p, &ConfusionTable::default(), 8).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn pairs_reconstruct() {
        let docs = corpus(12);
        let pairs = synthesize(
            &docs,
            0,
            &ContaminationProfile::default(),
            &ConfusionTable::default(),
            4,
        )
        .unwrap();
        for p in &pairs {
            assert_eq!(p.reconstruct().unwrap(), p.contaminated);
            // the layout events alone carry the same information
            assert_eq!(replay(&p.clean, &p.events).unwrap(), p.contaminated);
        }
    }

    #[test]
    fn empty_document_skipped() {
        let mut docs = corpus(2);
        docs.insert(1, CleanDocument::new("blank", " \n "));
        let pairs = synthesize(
            &docs,
            0,
            &ContaminationProfile::default(),
            &ConfusionTable::default(),
            1,
        )
        .unwrap();
        assert_eq!(pairs.len(), 2);
        // the third document keeps its own stream index
        let alone = synthesize(
            &docs[2..],
            2,
            &ContaminationProfile::default(),
            &ConfusionTable::default(),
            1,
        )
        .unwrap();
        assert_eq!(pairs[1], alone[0]);
    }

    #[test]
    fn invalid_profile_rejected() {
        let p = ContaminationProfile {
            del_char: 2.0,
            ..Default::default()
        };
        assert!(matches!(
            synthesize(&corpus(1), 0, &p, &ConfusionTable::default(), 1),
            Err(Error::Validation(_))
        ));
    }
}
