//! Noisy-channel baseline corrector.

mod correct;
mod deinterleave;
mod models;
mod repair;
mod segment;

pub use correct::{
    correct, correct_with, Correction, CorrectorSettings, StageDiagnostics, CHANNEL_COST,
};
pub use deinterleave::deinterleave_best;
pub use models::{train_models, Lexicon, Models, NGramModel, DEFAULT_SMOOTHING};
pub use repair::{repair_token, repair_token_weighted};
pub use segment::{segment_viterbi, MAX_UNKNOWN_SPAN};
