//! Contamination profile: per-channel error rates, layout parameters, and
//! the master seed.
//!
//! Profiles are stored as flat TOML (`key = value` per line). Every key is
//! optional; missing keys take the defaults below and unknown keys are
//! rejected.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Error rates and layout parameters for one contamination run.
///
/// Rates are per-unit application probabilities: character rates apply to
/// each eligible character, word rates to each eligible token or gap.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ContaminationProfile {
    pub del_char: f64,
    pub del_word: f64,
    pub seg_over: f64,
    pub seg_under: f64,
    pub trans_char: f64,
    pub trans_word: f64,
    pub sub_char: f64,
    pub ins_char: f64,
    pub line_width: usize,
    pub section_lines_min: usize,
    pub section_lines_max: usize,
    pub p_multicolumn_section: f64,
    pub allowed_columns: BTreeSet<usize>,
    #[serde(with = "seed_repr")]
    pub master_seed: u64,
}

impl Default for ContaminationProfile {
    fn default() -> Self {
        Self {
            del_char: 0.07,
            del_word: 0.02,
            seg_over: 0.05,
            seg_under: 0.05,
            trans_char: 0.05,
            trans_word: 0.02,
            sub_char: 0.05,
            ins_char: 0.05,
            line_width: 80,
            section_lines_min: 6,
            section_lines_max: 12,
            p_multicolumn_section: 0.5,
            allowed_columns: BTreeSet::from([2, 3]),
            master_seed: 0,
        }
    }
}

impl ContaminationProfile {
    /// A profile with every error rate and the multi-column probability at
    /// zero; layout parameters keep their defaults.
    pub fn identity() -> Self {
        Self {
            del_char: 0.0,
            del_word: 0.0,
            seg_over: 0.0,
            seg_under: 0.0,
            trans_char: 0.0,
            trans_word: 0.0,
            sub_char: 0.0,
            ins_char: 0.0,
            p_multicolumn_section: 0.0,
            ..Self::default()
        }
    }

    /// Same profile with the eight granular rates set to zero.
    pub fn without_granular(mut self) -> Self {
        for r in self.granular_rates_mut() {
            *r = 0.0;
        }
        self
    }

    /// Multiplies every granular rate by `factor`, clamping to `[0, 1]`.
    pub fn scale_granular(mut self, factor: f64) -> Self {
        for r in self.granular_rates_mut() {
            *r = (*r * factor).clamp(0.0, 1.0);
        }
        self
    }

    fn granular_rates_mut(&mut self) -> [&mut f64; 8] {
        [
            &mut self.del_char,
            &mut self.del_word,
            &mut self.seg_over,
            &mut self.seg_under,
            &mut self.trans_char,
            &mut self.trans_word,
            &mut self.sub_char,
            &mut self.ins_char,
        ]
    }

    /// The eight granular rates in declaration order, with their key names.
    pub fn granular_rates(&self) -> [(&'static str, f64); 8] {
        [
            ("del_char", self.del_char),
            ("del_word", self.del_word),
            ("seg_over", self.seg_over),
            ("seg_under", self.seg_under),
            ("trans_char", self.trans_char),
            ("trans_word", self.trans_word),
            ("sub_char", self.sub_char),
            ("ins_char", self.ins_char),
        ]
    }

    pub fn max_columns(&self) -> usize {
        self.allowed_columns.iter().copied().max().unwrap_or(1)
    }
}

/// One failed profile invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub field: &'static str,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

/// Checks every profile invariant; an empty list means the profile is valid.
pub fn validate_profile(p: &ContaminationProfile) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut push = |field: &'static str, message: String| out.push(Violation { field, message });

    let probs = p
        .granular_rates()
        .into_iter()
        .chain([("p_multicolumn_section", p.p_multicolumn_section)]);
    for (field, v) in probs {
        if !(0.0..=1.0).contains(&v) {
            push(field, format!("probability {v} outside [0, 1]"));
        }
    }
    let exclusive = p.del_char + p.sub_char + p.trans_char;
    if exclusive > 1.0 {
        push(
            "del_char+sub_char+trans_char",
            format!("exclusive char rates exceed 1 (sum {exclusive})"),
        );
    }
    if p.line_width < 8 {
        push(
            "line_width",
            format!("{} is below the minimum of 8", p.line_width),
        );
    }
    if p.section_lines_min == 0 {
        push("section_lines_min", "must be positive".into());
    }
    if p.section_lines_max == 0 {
        push("section_lines_max", "must be positive".into());
    }
    if p.section_lines_min > p.section_lines_max {
        push(
            "section_lines_min",
            format!(
                "{} exceeds section_lines_max {}",
                p.section_lines_min, p.section_lines_max
            ),
        );
    }
    if let Some(bad) = p.allowed_columns.iter().find(|c| !(2..=3).contains(*c)) {
        push("allowed_columns", format!("{bad} is not in {{2, 3}}"));
    }
    if p.allowed_columns.is_empty() && p.p_multicolumn_section > 0.0 {
        push(
            "allowed_columns",
            "empty while p_multicolumn_section > 0".into(),
        );
    }
    out
}

/// Parses a profile from TOML text and validates it.
pub fn parse_profile(text: &str) -> Result<ContaminationProfile> {
    let profile: ContaminationProfile = toml::from_str(text).map_err(|e| {
        let line = e
            .span()
            .map(|s| text[..s.start.min(text.len())].matches('\n').count() + 1)
            .unwrap_or(0);
        Error::Parse {
            line,
            message: e.message().to_string(),
        }
    })?;
    let violations = validate_profile(&profile);
    if violations.is_empty() {
        Ok(profile)
    } else {
        Err(Error::Validation(violations))
    }
}

pub fn load_profile(path: impl AsRef<Path>) -> Result<ContaminationProfile> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_profile(&text)
}

/// Serializes a profile, keys in declaration order.
pub fn write_profile(p: &ContaminationProfile) -> String {
    toml::to_string(p).expect("profile fields are all TOML-representable")
}

// TOML integers are signed 64-bit; seeds above i64::MAX go out as strings.
mod seed_repr {
    use serde::{de, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(seed: &u64, s: S) -> Result<S::Ok, S::Error> {
        match i64::try_from(*seed) {
            Ok(v) => s.serialize_i64(v),
            Err(_) => s.serialize_str(&seed.to_string()),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u64, D::Error> {
        struct V;
        impl de::Visitor<'_> for V {
            type Value = u64;
            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("an unsigned 64-bit integer")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<u64, E> {
                u64::try_from(v).map_err(|_| E::custom("seed must be non-negative"))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<u64, E> {
                Ok(v)
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<u64, E> {
                v.parse().map_err(E::custom)
            }
        }
        d.deserialize_any(V)
    }
}
