//! Character-level channels.
//!
//! Sweep A makes one categorical draw per non-whitespace character:
//! delete, substitute from the confusion table, transpose with the next
//! character, or keep. Sweep B then inserts a random character after each
//! character of sweep A's output.

use rand::Rng;

use super::{ChannelOutput, ConfusionTable};
use crate::event::{ErrorEvent, ErrorKind, CHAR_PASS};
use crate::profile::ContaminationProfile;
use crate::rng::Stream;

/// Characters drawn uniformly by the insertion channel.
pub const INSERTION_ALPHABET: &str =
    "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789.,;:'\"!?-";

pub fn apply_char_pass(
    text: &str,
    profile: &ContaminationProfile,
    confusion: &ConfusionTable,
    rng: &mut Stream,
) -> ChannelOutput {
    let chars: Vec<char> = text.chars().collect();
    let mut events = sweep_destructive(&chars, profile, confusion, rng);
    let mid = super::apply_events(&chars, &events);
    let inserts = sweep_insert(&mid, profile, rng);
    let out = super::apply_events(&mid, &inserts);
    events.extend(inserts);
    ChannelOutput {
        text: out.into_iter().collect(),
        events,
    }
}

fn sweep_destructive(
    chars: &[char],
    p: &ContaminationProfile,
    confusion: &ConfusionTable,
    rng: &mut Stream,
) -> Vec<ErrorEvent> {
    let del = p.del_char;
    let sub = del + p.sub_char;
    let trans = sub + p.trans_char;
    let mut events = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let u: f64 = rng.gen();
        if u < del {
            events.push(ErrorEvent::new(ErrorKind::DelChar, CHAR_PASS, i, c, ""));
        } else if u < sub {
            if let Some(set) = confusion.get(c) {
                let r = set[rng.gen_range(0..set.len())];
                events.push(ErrorEvent::new(ErrorKind::SubChar, CHAR_PASS, i, c, r));
            }
        } else if u < trans && i + 1 < chars.len() && !chars[i + 1].is_whitespace() {
            let n = chars[i + 1];
            events.push(ErrorEvent::new(
                ErrorKind::TransChar,
                CHAR_PASS,
                i,
                String::from_iter([c, n]),
                String::from_iter([n, c]),
            ));
            i += 2;
            continue;
        }
        i += 1;
    }
    events
}

fn sweep_insert(chars: &[char], p: &ContaminationProfile, rng: &mut Stream) -> Vec<ErrorEvent> {
    if p.ins_char <= 0.0 {
        return Vec::new();
    }
    let alphabet: Vec<char> = INSERTION_ALPHABET.chars().collect();
    let mut events = Vec::new();
    for i in 0..chars.len() {
        let u: f64 = rng.gen();
        if u < p.ins_char {
            let c = alphabet[rng.gen_range(0..alphabet.len())];
            events.push(ErrorEvent::new(ErrorKind::InsChar, CHAR_PASS, i + 1, "", c));
        }
    }
    events
}
