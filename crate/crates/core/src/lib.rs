//! Synthetic OCR-error corpora, a noisy-channel corrector, and
//! edit-distance / retrieval evaluation.
//!
//! The pipeline wraps clean text into fixed-width lines, interleaves some
//! sections as if multi-column text had been read row by row, then runs
//! word- and character-level error channels. Every injected error is
//! logged, so a contaminated document can always be rebuilt from its clean
//! source.

pub mod channels;
pub mod cli;
pub mod corrector;
pub mod document;
pub mod error;
pub mod event;
pub mod layout;
pub mod metrics;
pub mod pipeline;
pub mod profile;
pub mod rng;
pub mod synthetic;
pub mod text;

pub use channels::{
    apply_char_pass, apply_granular, apply_word_pass, ChannelOutput, ConfusionTable,
};
pub use document::{CleanDocument, ContaminatedDocument};
pub use error::{Error, Result};
pub use event::{replay, ErrorEvent, ErrorKind};
pub use layout::{
    columnize, contaminate_layout, invert_columnize, wrap_lines, LineTemplate, Section,
    SectionLayout,
};
pub use profile::{load_profile, validate_profile, write_profile, ContaminationProfile};
pub use rng::derive_rng;
