//! Provenance log of injected errors and its replay.
//!
//! A pass is one pipeline step (layout, word channels, char channels).
//! Inside a pass the channels run as sequential stages, and each event's
//! `position` is a character offset into the input of the stage its kind
//! belongs to. Replay applies the stages in order; within a stage the
//! events are non-overlapping edits sorted by position.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const LAYOUT_PASS: u8 = 0;
pub const WORD_PASS: u8 = 1;
pub const CHAR_PASS: u8 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ErrorKind {
    DelChar,
    DelWord,
    SubChar,
    TransChar,
    TransWord,
    SegOver,
    SegUnder,
    InsChar,
    ColumnInterleave,
}

impl ErrorKind {
    pub const ALL: [ErrorKind; 9] = [
        ErrorKind::DelChar,
        ErrorKind::DelWord,
        ErrorKind::SubChar,
        ErrorKind::TransChar,
        ErrorKind::TransWord,
        ErrorKind::SegOver,
        ErrorKind::SegUnder,
        ErrorKind::InsChar,
        ErrorKind::ColumnInterleave,
    ];

    /// Stage within the owning pass.
    pub fn stage(self) -> u8 {
        match self {
            ErrorKind::ColumnInterleave => 0,
            ErrorKind::DelWord => 0,
            ErrorKind::TransWord => 1,
            ErrorKind::SegOver => 2,
            ErrorKind::SegUnder => 3,
            ErrorKind::DelChar | ErrorKind::SubChar | ErrorKind::TransChar => 0,
            ErrorKind::InsChar => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ErrorKind::DelChar => "DelChar",
            ErrorKind::DelWord => "DelWord",
            ErrorKind::SubChar => "SubChar",
            ErrorKind::TransChar => "TransChar",
            ErrorKind::TransWord => "TransWord",
            ErrorKind::SegOver => "SegOver",
            ErrorKind::SegUnder => "SegUnder",
            ErrorKind::InsChar => "InsChar",
            ErrorKind::ColumnInterleave => "ColumnInterleave",
        }
    }
}

impl std::fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// One injected error.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorEvent {
    pub kind: ErrorKind,
    pub pass_index: u8,
    pub position: usize,
    pub original: String,
    pub replacement: String,
}

impl ErrorEvent {
    pub fn new(
        kind: ErrorKind,
        pass_index: u8,
        position: usize,
        original: impl Into<String>,
        replacement: impl Into<String>,
    ) -> Self {
        Self {
            kind,
            pass_index,
            position,
            original: original.into(),
            replacement: replacement.into(),
        }
    }

    fn order_key(&self) -> (u8, u8, usize) {
        (self.pass_index, self.kind.stage(), self.position)
    }
}

/// True when `events` is sorted by (pass, stage, position).
pub fn is_ordered(events: &[ErrorEvent]) -> bool {
    events
        .windows(2)
        .all(|w| w[0].order_key() <= w[1].order_key())
}

/// Replays every event over `input`, pass by pass and stage by stage.
pub fn replay(input: &str, events: &[ErrorEvent]) -> Result<String> {
    if !is_ordered(events) {
        return Err(Error::Replay(
            "events not ordered by (pass, stage, position)".into(),
        ));
    }
    let mut text: Vec<char> = input.chars().collect();
    let mut start = 0;
    while start < events.len() {
        let key = (events[start].pass_index, events[start].kind.stage());
        let end = events[start..]
            .iter()
            .position(|e| (e.pass_index, e.kind.stage()) != key)
            .map_or(events.len(), |n| start + n);
        text = apply_stage(&text, &events[start..end])?;
        start = end;
    }
    Ok(text.into_iter().collect())
}

/// Replays only the events belonging to passes `>= from_pass`.
pub fn replay_from_pass(input: &str, events: &[ErrorEvent], from_pass: u8) -> Result<String> {
    let first = events
        .iter()
        .position(|e| e.pass_index >= from_pass)
        .unwrap_or(events.len());
    replay(input, &events[first..])
}

fn apply_stage(input: &[char], events: &[ErrorEvent]) -> Result<Vec<char>> {
    let mut out = Vec::with_capacity(input.len() + events.len());
    let mut cursor = 0;
    for ev in events {
        if ev.position < cursor || ev.position > input.len() {
            return Err(Error::Replay(format!(
                "{} at {} overlaps or exceeds input (cursor {}, len {})",
                ev.kind,
                ev.position,
                cursor,
                input.len()
            )));
        }
        out.extend_from_slice(&input[cursor..ev.position]);
        let orig: Vec<char> = ev.original.chars().collect();
        let end = ev.position + orig.len();
        if end > input.len() || input[ev.position..end] != orig[..] {
            return Err(Error::Replay(format!(
                "{} at {} expected {:?}",
                ev.kind, ev.position, ev.original
            )));
        }
        out.extend(ev.replacement.chars());
        cursor = end;
    }
    out.extend_from_slice(&input[cursor..]);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stages_apply_in_sequence() {
        // stage 0 deletes 'b', stage 1 inserts after the (new) index 1
        let events = vec![
            ErrorEvent::new(ErrorKind::DelChar, CHAR_PASS, 1, "b", ""),
            ErrorEvent::new(ErrorKind::InsChar, CHAR_PASS, 2, "", "x"),
        ];
        assert_eq!(replay("abc", &events).unwrap(), "acx");
    }

    #[test]
    fn insertion_before_consuming_edit() {
        let events = vec![
            ErrorEvent::new(ErrorKind::SegOver, WORD_PASS, 2, "", " "),
            ErrorEvent::new(ErrorKind::SegUnder, WORD_PASS, 2, " ", ""),
        ];
        // the under-segmentation position refers to the over-segmented text
        assert_eq!(replay("abcd", &events[..1]).unwrap(), "ab cd");
        assert_eq!(replay("abcd", &events).unwrap(), "abcd");
    }

    #[test]
    fn mismatch_is_reported() {
        let events = vec![ErrorEvent::new(ErrorKind::SubChar, CHAR_PASS, 0, "z", "y")];
        assert!(matches!(replay("abc", &events), Err(Error::Replay(_))));
    }

    #[test]
    fn unordered_rejected() {
        let events = vec![
            ErrorEvent::new(ErrorKind::InsChar, CHAR_PASS, 0, "", "x"),
            ErrorEvent::new(ErrorKind::DelChar, CHAR_PASS, 1, "b", ""),
        ];
        assert!(replay("abc", &events).is_err());
    }
}
