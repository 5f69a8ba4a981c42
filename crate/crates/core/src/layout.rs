//! Structural contamination: fixed-width wrapping, sectioning, and
//! row-major column interleaving, together with the exact inverse.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::event::{ErrorEvent, ErrorKind, LAYOUT_PASS};
use crate::profile::ContaminationProfile;
use crate::rng::Stream;

/// Single-column text broken into lines of at most `width` characters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineTemplate {
    pub lines: Vec<String>,
    pub width: usize,
}

impl LineTemplate {
    pub fn joined(&self) -> String {
        self.lines.join("\n")
    }
}

/// Greedy word wrap. A word longer than `width` starts a fresh line and is
/// hard-split at `width` boundaries; its last piece may be followed by more
/// words.
pub fn wrap_lines(text: &str, width: usize) -> Result<LineTemplate> {
    if width < 8 {
        return Err(Error::Precondition(format!(
            "line width {width} is below 8"
        )));
    }
    let lines = wrap_greedy(text, width);
    if lines.is_empty() {
        return Err(Error::EmptyInput(
            "text is empty after whitespace normalization".into(),
        ));
    }
    Ok(LineTemplate { lines, width })
}

fn wrap_greedy(text: &str, width: usize) -> Vec<String> {
    let mut lines = Vec::new();
    let mut cur = String::new();
    let mut cur_len = 0;
    for word in text.split_whitespace() {
        let wlen = word.chars().count();
        if wlen > width {
            if cur_len > 0 {
                lines.push(std::mem::take(&mut cur));
            }
            let chars: Vec<char> = word.chars().collect();
            let mut pieces = chars.chunks(width).peekable();
            while let Some(piece) = pieces.next() {
                if pieces.peek().is_some() {
                    lines.push(piece.iter().collect());
                } else {
                    cur = piece.iter().collect();
                    cur_len = piece.len();
                }
            }
            continue;
        }
        if cur_len == 0 {
            cur.push_str(word);
            cur_len = wlen;
        } else if cur_len + 1 + wlen <= width {
            cur.push(' ');
            cur.push_str(word);
            cur_len += 1 + wlen;
        } else {
            lines.push(std::mem::replace(&mut cur, word.to_string()));
            cur_len = wlen;
        }
    }
    if cur_len > 0 {
        lines.push(cur);
    }
    lines
}

/// Ceiling-first balanced partition of `n` lines into `columns` heights.
pub fn balanced_heights(n: usize, columns: usize) -> Vec<usize> {
    let base = n / columns;
    let extra = n % columns;
    (0..columns)
        .map(|c| base + usize::from(c < extra))
        .collect()
}

fn check_heights(heights: &[usize]) -> Result<()> {
    if heights.is_empty() || heights.contains(&0) {
        return Err(Error::Structure(format!(
            "heights {heights:?} must be positive"
        )));
    }
    let n: usize = heights.iter().sum();
    if heights != balanced_heights(n, heights.len()) {
        return Err(Error::Structure(format!(
            "heights {heights:?} are not a balanced partition"
        )));
    }
    Ok(())
}

/// Reads `lines` as `columns` balanced columns row by row.
pub fn columnize<T: Clone>(lines: &[T], columns: usize) -> Result<(Vec<T>, Vec<usize>)> {
    if columns < 2 {
        return Err(Error::Precondition(format!(
            "columnize needs >= 2 columns, got {columns}"
        )));
    }
    if lines.len() < columns {
        return Err(Error::Precondition(format!(
            "{} lines cannot fill {columns} columns",
            lines.len()
        )));
    }
    let heights = balanced_heights(lines.len(), columns);
    let starts: Vec<usize> = heights
        .iter()
        .scan(0, |acc, h| {
            let s = *acc;
            *acc += h;
            Some(s)
        })
        .collect();
    let mut out = Vec::with_capacity(lines.len());
    for row in 0..heights[0] {
        for (c, &h) in heights.iter().enumerate() {
            if row < h {
                out.push(lines[starts[c] + row].clone());
            }
        }
    }
    Ok((out, heights))
}

/// Undoes [`columnize`] given the column heights.
pub fn invert_columnize<T: Clone>(interleaved: &[T], heights: &[usize]) -> Result<Vec<T>> {
    check_heights(heights)?;
    let n: usize = heights.iter().sum();
    if n != interleaved.len() {
        return Err(Error::Structure(format!(
            "{} lines but heights sum to {n}",
            interleaved.len()
        )));
    }
    let mut columns: Vec<Vec<T>> = heights.iter().map(|&h| Vec::with_capacity(h)).collect();
    let mut it = interleaved.iter();
    for row in 0..heights[0] {
        for (c, &h) in heights.iter().enumerate() {
            if row < h {
                columns[c].push(it.next().expect("length checked").clone());
            }
        }
    }
    Ok(columns.into_iter().flatten().collect())
}

/// Column metadata for one contiguous run of lines.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "SectionTuple", try_from = "SectionTuple")]
pub struct Section {
    pub start_line: usize,
    pub num_lines: usize,
    pub columns: usize,
    pub heights: Vec<usize>,
}

type SectionTuple = (usize, usize, usize, Vec<usize>);

impl From<Section> for SectionTuple {
    fn from(s: Section) -> Self {
        (s.start_line, s.num_lines, s.columns, s.heights)
    }
}

impl TryFrom<SectionTuple> for Section {
    type Error = Error;
    fn try_from((start_line, num_lines, columns, heights): SectionTuple) -> Result<Self> {
        let s = Section {
            start_line,
            num_lines,
            columns,
            heights,
        };
        s.check()?;
        Ok(s)
    }
}

impl Section {
    pub fn single(start_line: usize, num_lines: usize) -> Self {
        Section {
            start_line,
            num_lines,
            columns: 1,
            heights: vec![num_lines],
        }
    }

    fn check(&self) -> Result<()> {
        if self.num_lines == 0 || self.columns == 0 || self.heights.len() != self.columns {
            return Err(Error::Structure(format!("malformed section {self:?}")));
        }
        if self.heights.iter().sum::<usize>() != self.num_lines {
            return Err(Error::Structure(format!(
                "heights do not sum to num_lines in {self:?}"
            )));
        }
        check_heights(&self.heights)
    }

    fn range(&self) -> std::ops::Range<usize> {
        self.start_line..self.start_line + self.num_lines
    }
}

/// Per-section column layout of one document.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SectionLayout {
    pub sections: Vec<Section>,
}

impl SectionLayout {
    /// Total number of lines covered.
    pub fn num_lines(&self) -> usize {
        self.sections.iter().map(|s| s.num_lines).sum()
    }

    /// Checks that sections tile `0..num_lines` and are each well-formed.
    pub fn check(&self) -> Result<()> {
        let mut next = 0;
        for s in &self.sections {
            if s.start_line != next {
                return Err(Error::Structure(format!(
                    "section starting at {} does not follow line {next}",
                    s.start_line
                )));
            }
            s.check()?;
            next += s.num_lines;
        }
        Ok(())
    }

    fn check_len(&self, n: usize) -> Result<()> {
        self.check()?;
        if self.num_lines() != n {
            return Err(Error::Structure(format!(
                "layout covers {} lines, text has {n}",
                self.num_lines()
            )));
        }
        Ok(())
    }

    /// Applies the interleave of every multi-column section.
    pub fn apply<T: Clone>(&self, lines: &[T]) -> Result<Vec<T>> {
        self.check_len(lines.len())?;
        let mut out = Vec::with_capacity(lines.len());
        for s in &self.sections {
            let chunk = &lines[s.range()];
            if s.columns == 1 {
                out.extend_from_slice(chunk);
            } else {
                out.extend(columnize(chunk, s.columns)?.0);
            }
        }
        Ok(out)
    }

    /// Recovers single-column line order from interleaved lines.
    pub fn invert<T: Clone>(&self, lines: &[T]) -> Result<Vec<T>> {
        self.check_len(lines.len())?;
        let mut out = Vec::with_capacity(lines.len());
        for s in &self.sections {
            out.extend(invert_columnize(&lines[s.range()], &s.heights)?);
        }
        Ok(out)
    }
}

/// Output of [`contaminate_layout`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayoutOutput {
    pub lines: Vec<String>,
    pub layout: SectionLayout,
    pub events: Vec<ErrorEvent>,
}

/// Splits the template into random-size sections and interleaves a random
/// subset of them as 2- or 3-column text read row-major.
pub fn contaminate_layout(
    template: &LineTemplate,
    profile: &ContaminationProfile,
    rng: &mut Stream,
) -> LayoutOutput {
    let n = template.lines.len();
    let allowed: Vec<usize> = profile.allowed_columns.iter().copied().collect();
    let min_cols = allowed.first().copied().unwrap_or(usize::MAX);
    let lo = profile.section_lines_min.max(1);
    let hi = profile.section_lines_max.max(lo);

    // char offset of each line in the newline-joined template
    let mut offsets = Vec::with_capacity(n);
    let mut acc = 0;
    for line in &template.lines {
        offsets.push(acc);
        acc += line.chars().count() + 1;
    }

    let mut lines = Vec::with_capacity(n);
    let mut sections = Vec::new();
    let mut events = Vec::new();
    let mut start = 0;
    while start < n {
        let size = rng.gen_range(lo..=hi).min(n - start);
        let chunk = &template.lines[start..start + size];
        let mut columns = 1;
        if min_cols != usize::MAX && size >= 2 * min_cols {
            let u: f64 = rng.gen();
            if u < profile.p_multicolumn_section {
                columns = allowed[rng.gen_range(0..allowed.len())].min(size);
            }
        }
        if columns > 1 {
            let (interleaved, heights) = columnize(chunk, columns).expect("size >= columns");
            events.push(ErrorEvent::new(
                ErrorKind::ColumnInterleave,
                LAYOUT_PASS,
                offsets[start],
                chunk.join("\n"),
                interleaved.join("\n"),
            ));
            lines.extend(interleaved);
            sections.push(Section {
                start_line: start,
                num_lines: size,
                columns,
                heights,
            });
        } else {
            lines.extend_from_slice(chunk);
            sections.push(Section::single(start, size));
        }
        start += size;
    }
    LayoutOutput {
        lines,
        layout: SectionLayout { sections },
        events,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::event::replay;
    use crate::rng::derive_rng;
    use crate::text::normalize_whitespace;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn labels(n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("L{i}")).collect()
    }

    #[test]
    fn greedy_wrap() {
        assert_eq!(wrap_lines("aa bb cc", 8).unwrap().lines, ["aa bb cc"]);
        let t = wrap_lines("aaa bbb ccc", 8).unwrap();
        assert_eq!(t.lines, ["aaa bbb", "ccc"]);
    }

    #[test]
    fn narrow_wrap() {
        assert_eq!(wrap_greedy("aa bb cc", 5), ["aa bb", "cc"]);
        assert_eq!(wrap_greedy("abcdefghij", 4), ["abcd", "efgh", "ij"]);
    }

    #[test]
    fn oversize_word_hard_split() {
        let t = wrap_lines("abcdefghijklmnopqrst uv", 8).unwrap();
        assert_eq!(t.lines, ["abcdefgh", "ijklmnop", "qrst uv"]);
    }

    #[test]
    fn empty_text_rejected() {
        assert!(matches!(
            wrap_lines(" \n\t ", 80),
            Err(Error::EmptyInput(_))
        ));
        assert!(matches!(wrap_lines("abc", 4), Err(Error::Precondition(_))));
    }

    #[test]
    fn columnize_two() {
        let (out, h) = columnize(&labels(6), 2).unwrap();
        assert_eq!(out, ["L1", "L4", "L2", "L5", "L3", "L6"]);
        assert_eq!(h, [3, 3]);
    }

    #[test]
    fn columnize_three_uneven() {
        let (out, h) = columnize(&labels(7), 3).unwrap();
        assert_eq!(out, ["L1", "L4", "L6", "L2", "L5", "L7", "L3"]);
        assert_eq!(h, [3, 2, 2]);
    }

    #[test]
    fn columnize_preconditions() {
        assert!(columnize(&labels(2), 3).is_err());
        assert!(columnize(&labels(4), 1).is_err());
    }

    #[test]
    fn invert_examples() {
        let inter: Vec<String> = ["L1", "L4", "L2", "L5", "L3", "L6"]
            .map(String::from)
            .to_vec();
        assert_eq!(invert_columnize(&inter, &[3, 3]).unwrap(), labels(6));
        assert_eq!(invert_columnize(&labels(5), &[5]).unwrap(), labels(5));
        assert!(matches!(
            invert_columnize(&labels(5), &[3, 3]),
            Err(Error::Structure(_))
        ));
        assert!(invert_columnize(&labels(5), &[2, 3]).is_err());
    }

    #[test]
    fn twelve_lines_round_trip() {
        let (inter, h) = columnize(&labels(12), 2).unwrap();
        assert_eq!(invert_columnize(&inter, &h).unwrap(), labels(12));
    }

    fn template(n: usize) -> LineTemplate {
        LineTemplate {
            lines: (0..n).map(|i| format!("line number {i}")).collect(),
            width: 80,
        }
    }

    #[test]
    fn zero_probability_is_identity() {
        let p = ContaminationProfile {
            p_multicolumn_section: 0.0,
            ..Default::default()
        };
        let t = template(40);
        let out = contaminate_layout(&t, &p, &mut derive_rng(1, 0));
        assert_eq!(out.lines, t.lines);
        assert!(out.layout.sections.iter().all(|s| s.columns == 1));
        assert!(out.events.is_empty());
    }

    #[test]
    fn single_forced_section() {
        let p = ContaminationProfile {
            section_lines_min: 12,
            section_lines_max: 12,
            p_multicolumn_section: 1.0,
            allowed_columns: BTreeSet::from([2]),
            ..Default::default()
        };
        let t = template(12);
        let out = contaminate_layout(&t, &p, &mut derive_rng(3, 0));
        assert_eq!(out.lines, columnize(&t.lines, 2).unwrap().0);
        assert_eq!(out.events.len(), 1);
        assert_eq!(out.events[0].kind, ErrorKind::ColumnInterleave);
    }

    #[test]
    fn seeded_200_lines_invert() {
        let t = template(200);
        let p = ContaminationProfile::default();
        let out = contaminate_layout(&t, &p, &mut derive_rng(11, 4));
        assert_eq!(out.layout.invert(&out.lines).unwrap(), t.lines);
        assert_eq!(out.layout.apply(&t.lines).unwrap(), out.lines);
        assert_eq!(
            replay(&t.joined(), &out.events).unwrap(),
            out.lines.join("\n")
        );
    }

    #[test]
    fn section_tuple_serialization() {
        let s = Section {
            start_line: 6,
            num_lines: 7,
            columns: 3,
            heights: vec![3, 2, 2],
        };
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, "[6,7,3,[3,2,2]]");
        assert_eq!(serde_json::from_str::<Section>(&json).unwrap(), s);
        assert!(serde_json::from_str::<Section>("[0,7,3,[2,2,3]]").is_err());
    }

    proptest! {
        #[test]
        fn wrap_round_trips(words in prop::collection::vec("[a-zA-Z0-9,.]{1,12}", 1..300), width in 12usize..100) {
            let text = words.join(" ");
            let t = wrap_lines(&text, width).unwrap();
            prop_assert!(t.lines.iter().all(|l| !l.is_empty() && l.chars().count() <= width));
            prop_assert_eq!(normalize_whitespace(&t.lines.join(" ")), normalize_whitespace(&text));
        }

        #[test]
        fn columnize_inverts(n in 2usize..50, cols in 2usize..=3) {
            prop_assume!(n >= cols);
            let lines = labels(n);
            let (inter, h) = columnize(&lines, cols).unwrap();
            prop_assert!(h.iter().max().unwrap() - h.iter().min().unwrap() <= 1);
            prop_assert_eq!(&invert_columnize(&inter, &h).unwrap(), &lines);
            // and the other direction
            let (again, _) = columnize(&invert_columnize(&lines, &h).unwrap(), cols).unwrap();
            prop_assert_eq!(again, lines);
        }

        #[test]
        fn layout_is_a_permutation(n in 1usize..120, seed in any::<u64>()) {
            let t = template(n);
            let out = contaminate_layout(&t, &ContaminationProfile::default(), &mut derive_rng(seed, 0));
            let mut a = out.lines.clone();
            let mut b = t.lines.clone();
            a.sort();
            b.sort();
            prop_assert_eq!(a, b);
            out.layout.check().unwrap();
            prop_assert_eq!(out.layout.invert(&out.lines).unwrap(), t.lines);
        }
    }
}
