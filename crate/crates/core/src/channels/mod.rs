//! Granular error channels, applied after the layout stage: a word pass
//! followed by a character pass.

mod chars;
mod confusion;
mod word;

pub use chars::{apply_char_pass, INSERTION_ALPHABET};
pub use confusion::{ConfusionTable, DEFAULT_CONFUSION};
pub use word::apply_word_pass;

use crate::event::ErrorEvent;
use crate::profile::ContaminationProfile;
use crate::rng::Stream;

/// Text produced by a channel pass plus the events that explain it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChannelOutput {
    pub text: String,
    pub events: Vec<ErrorEvent>,
}

/// Word pass then char pass, with the two event logs concatenated.
pub fn apply_granular(
    text: &str,
    profile: &ContaminationProfile,
    confusion: &ConfusionTable,
    rng: &mut Stream,
) -> ChannelOutput {
    let words = apply_word_pass(text, profile, rng);
    let chars = apply_char_pass(&words.text, profile, confusion, rng);
    let mut events = words.events;
    events.extend(chars.events);
    ChannelOutput {
        text: chars.text,
        events,
    }
}

// Events produced by a single stage are sorted and non-overlapping.
fn apply_events(input: &[char], events: &[ErrorEvent]) -> Vec<char> {
    let mut out = Vec::with_capacity(input.len() + events.len());
    let mut cursor = 0;
    for ev in events {
        out.extend_from_slice(&input[cursor..ev.position]);
        out.extend(ev.replacement.chars());
        cursor = ev.position + ev.original.chars().count();
    }
    out.extend_from_slice(&input[cursor..]);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::event::{is_ordered, replay, ErrorKind, CHAR_PASS, WORD_PASS};
    use crate::rng::derive_rng;
    use proptest::prelude::*;
    use std::collections::HashSet;

    #[test]
    fn identity_profile() {
        let p = ContaminationProfile::identity();
        let text = "  Ünïcödé\ttext\n\n with  odd   spacing ";
        let out = apply_granular(text, &p, &ConfusionTable::default(), &mut derive_rng(5, 5));
        assert_eq!(out.text, text);
        assert!(out.events.is_empty());
    }

    #[test]
    fn pass_indices() {
        let p = ContaminationProfile::default();
        let text = "the quick brown fox jumps over the lazy dog ".repeat(20);
        let out = apply_granular(&text, &p, &ConfusionTable::default(), &mut derive_rng(1, 2));
        let words = out
            .events
            .iter()
            .filter(|e| e.pass_index == WORD_PASS)
            .count();
        let chars = out
            .events
            .iter()
            .filter(|e| e.pass_index == CHAR_PASS)
            .count();
        assert!(words > 0 && chars > 0);
        assert_eq!(words + chars, out.events.len());
        assert!(is_ordered(&out.events));
    }

    fn sweep_a_positions(events: &[ErrorEvent]) -> Vec<usize> {
        events
            .iter()
            .filter(|e| e.pass_index == CHAR_PASS && e.kind.stage() == 0)
            .flat_map(|e| e.position..e.position + e.original.chars().count())
            .collect()
    }

    proptest! {
        #[test]
        fn replay_reproduces_output(text in "[a-zA-Z015 .,\n]{0,200}", seed in any::<u64>()) {
            let p = ContaminationProfile::default().scale_granular(3.0);
            let out = apply_granular(&text, &p, &ConfusionTable::default(), &mut derive_rng(seed, 0));
            prop_assert!(is_ordered(&out.events));
            prop_assert_eq!(replay(&text, &out.events).unwrap(), out.text);
        }

        #[test]
        fn sweep_a_is_exclusive_and_spares_whitespace(text in "[a-z015OSl \n]{0,200}", seed in any::<u64>()) {
            let p = ContaminationProfile { del_char: 0.3, sub_char: 0.3, trans_char: 0.3, ..ContaminationProfile::identity() };
            let out = apply_char_pass(&text, &p, &ConfusionTable::default(), &mut derive_rng(seed, 1));
            let pos = sweep_a_positions(&out.events);
            let uniq: HashSet<_> = pos.iter().collect();
            prop_assert_eq!(uniq.len(), pos.len());
            let chars: Vec<char> = text.chars().collect();
            prop_assert!(pos.iter().all(|&i| !chars[i].is_whitespace()));
            let ws = |s: &str| s.chars().filter(|c| c.is_whitespace()).collect::<String>();
            prop_assert_eq!(ws(&out.text), ws(&text));
        }

        #[test]
        fn event_shapes(text in "[a-z ]{0,120}", seed in any::<u64>()) {
            let p = ContaminationProfile::default().scale_granular(4.0);
            let out = apply_granular(&text, &p, &ConfusionTable::default(), &mut derive_rng(seed, 3));
            for e in &out.events {
                match e.kind {
                    ErrorKind::InsChar => prop_assert!(e.original.is_empty() && !e.replacement.is_empty()),
                    ErrorKind::DelChar | ErrorKind::DelWord => prop_assert!(!e.original.is_empty() && e.replacement.is_empty()),
                    _ => {}
                }
            }
        }
    }
}
