use serde::{Deserialize, Serialize};

use crate::event::ErrorEvent;
use crate::layout::SectionLayout;

/// A clean source document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CleanDocument {
    pub id: String,
    pub text: String,
}

impl CleanDocument {
    pub fn new(id: impl Into<String>, text: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            text: text.into(),
        }
    }
}

/// A document after both contamination stages.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContaminatedDocument {
    pub id: String,
    pub text: String,
    pub layout: SectionLayout,
    /// Ordered by (pass, stage, position).
    pub events: Vec<ErrorEvent>,
    pub clean_ref: String,
}
