//! Word-level channels: deletion, transposition, over- and
//! under-segmentation, run as four sequential stages.

use rand::Rng;

use super::ChannelOutput;
use crate::event::{ErrorEvent, ErrorKind, WORD_PASS};
use crate::profile::ContaminationProfile;
use crate::rng::Stream;

/// A maximal non-whitespace run, as a char range.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Span {
    pub start: usize,
    pub end: usize,
}

pub(crate) fn tokenize(chars: &[char]) -> Vec<Span> {
    let mut spans = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        if chars[i].is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        while i < chars.len() && !chars[i].is_whitespace() {
            i += 1;
        }
        spans.push(Span { start, end: i });
    }
    spans
}

/// A gap between two tokens that does not cross a line break.
pub(crate) fn inline_gap(chars: &[char], left: Span, right: Span) -> bool {
    !chars[left.end..right.start].contains(&'\n')
}

fn collect(chars: &[char], from: usize, to: usize) -> String {
    chars[from..to].iter().collect()
}

pub fn apply_word_pass(
    text: &str,
    profile: &ContaminationProfile,
    rng: &mut Stream,
) -> ChannelOutput {
    let mut chars: Vec<char> = text.chars().collect();
    let mut events = Vec::new();
    for stage in [delete_words, transpose_words, over_segment, under_segment] {
        let stage_events = stage(&chars, profile, rng);
        chars = super::apply_events(&chars, &stage_events);
        events.extend(stage_events);
    }
    ChannelOutput {
        text: chars.into_iter().collect(),
        events,
    }
}

/// Each token is dropped with `del_word`, together with one adjacent
/// same-line gap. Tokens with no free same-line gap are not eligible, so a
/// line is never emptied.
fn delete_words(chars: &[char], p: &ContaminationProfile, rng: &mut Stream) -> Vec<ErrorEvent> {
    let toks = tokenize(chars);
    let mut deleted = vec![false; toks.len()];
    let mut events = Vec::new();
    for i in 0..toks.len() {
        let u: f64 = rng.gen();
        if u >= p.del_word {
            continue;
        }
        let t = toks[i];
        let follow = i + 1 < toks.len() && inline_gap(chars, t, toks[i + 1]);
        let precede = i > 0 && !deleted[i - 1] && inline_gap(chars, toks[i - 1], t);
        let (from, to) = if follow {
            (t.start, toks[i + 1].start)
        } else if precede {
            (toks[i - 1].end, t.end)
        } else {
            continue;
        };
        deleted[i] = true;
        events.push(ErrorEvent::new(
            ErrorKind::DelWord,
            WORD_PASS,
            from,
            collect(chars, from, to),
            "",
        ));
    }
    events
}

/// Left-to-right scan; a swapped pair is skipped as a whole.
fn transpose_words(chars: &[char], p: &ContaminationProfile, rng: &mut Stream) -> Vec<ErrorEvent> {
    let toks = tokenize(chars);
    let mut events = Vec::new();
    let mut i = 0;
    while i + 1 < toks.len() {
        let u: f64 = rng.gen();
        if u < p.trans_word {
            let (a, b) = (toks[i], toks[i + 1]);
            let mut replacement = collect(chars, b.start, b.end);
            replacement.push_str(&collect(chars, a.end, b.start));
            replacement.push_str(&collect(chars, a.start, a.end));
            events.push(ErrorEvent::new(
                ErrorKind::TransWord,
                WORD_PASS,
                a.start,
                collect(chars, a.start, b.end),
                replacement,
            ));
            i += 2;
        } else {
            i += 1;
        }
    }
    events
}

fn over_segment(chars: &[char], p: &ContaminationProfile, rng: &mut Stream) -> Vec<ErrorEvent> {
    let mut events = Vec::new();
    for t in tokenize(chars) {
        let len = t.end - t.start;
        if len < 2 {
            continue;
        }
        let u: f64 = rng.gen();
        if u < p.seg_over {
            let k = rng.gen_range(1..len);
            events.push(ErrorEvent::new(
                ErrorKind::SegOver,
                WORD_PASS,
                t.start + k,
                "",
                " ",
            ));
        }
    }
    events
}

/// Removes same-line gaps; line breaks are never merged.
fn under_segment(chars: &[char], p: &ContaminationProfile, rng: &mut Stream) -> Vec<ErrorEvent> {
    let toks = tokenize(chars);
    let mut events = Vec::new();
    for w in toks.windows(2) {
        if !inline_gap(chars, w[0], w[1]) {
            continue;
        }
        let u: f64 = rng.gen();
        if u < p.seg_under {
            events.push(ErrorEvent::new(
                ErrorKind::SegUnder,
                WORD_PASS,
                w[0].end,
                collect(chars, w[0].end, w[1].start),
                "",
            ));
        }
    }
    events
}
