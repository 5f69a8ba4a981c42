use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

/// Shipped table of visually confusable characters, one `<char> -> <chars>`
/// entry per line.
pub const DEFAULT_CONFUSION: &str = "\
! -> l1I
, -> .
. -> ,
0 -> Oo
1 -> l!I7
2 -> Z
5 -> Ss
6 -> b
7 -> 1
8 -> B
9 -> gq
: -> ;
; -> :
B -> 8
I -> l1|
O -> 0
S -> 5
Z -> 2
b -> 6h
c -> e
e -> c
f -> t
g -> q9
h -> bn
i -> lj
j -> i
l -> 1!I|
m -> n
n -> mh
o -> 0
q -> g9
s -> 5
t -> f
u -> v
v -> u
| -> lI1
";

/// Map from a character to the characters it is commonly misread as.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionTable {
    entries: BTreeMap<char, Vec<char>>,
    // symmetric, case-expanded closure of `entries`
    pairs: HashSet<(char, char)>,
}

impl Default for ConfusionTable {
    fn default() -> Self {
        Self::parse(DEFAULT_CONFUSION).expect("embedded confusion table parses")
    }
}

impl ConfusionTable {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            if raw.trim().is_empty() {
                continue;
            }
            let err = |message: String| Error::Parse { line, message };
            let (lhs, rhs) = raw
                .split_once("->")
                .ok_or_else(|| err("expected `<char> -> <chars>`".into()))?;
            let mut lhs_chars = lhs.trim().chars();
            let key = match (lhs_chars.next(), lhs_chars.next()) {
                (Some(c), None) => c,
                _ => {
                    return Err(err(format!(
                        "left side {:?} is not one character",
                        lhs.trim()
                    )))
                }
            };
            let mut set: Vec<char> = Vec::new();
            for c in rhs.trim().chars() {
                if c == key {
                    return Err(err(format!("{key:?} maps to itself")));
                }
                if c.is_whitespace() {
                    return Err(err("whitespace in confusion set".into()));
                }
                if !set.contains(&c) {
                    set.push(c);
                }
            }
            if set.is_empty() {
                return Err(err(format!("empty confusion set for {key:?}")));
            }
            if entries.insert(key, set).is_some() {
                return Err(err(format!("duplicate entry for {key:?}")));
            }
        }
        let mut pairs = HashSet::new();
        let variants = |c: char| {
            let mut v = vec![c];
            v.extend(c.to_lowercase());
            v.extend(c.to_uppercase());
            v
        };
        for (&k, set) in &entries {
            for &v in set {
                for x in variants(k) {
                    for y in variants(v) {
                        if x != y {
                            pairs.insert((x, y));
                            pairs.insert((y, x));
                        }
                    }
                }
            }
        }
        Ok(Self { entries, pairs })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn get(&self, c: char) -> Option<&[char]> {
        self.entries.get(&c).map(Vec::as_slice)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (char, &[char])> {
        self.entries.iter().map(|(k, v)| (*k, v.as_slice()))
    }

    /// Whether `a` and `b` are listed as confusable in either direction,
    /// ignoring letter case on both sides.
    pub fn confusable(&self, a: char, b: char) -> bool {
        self.pairs.contains(&(a, b))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            let set: String = v.iter().collect();
            let _ = writeln!(out, "{k} -> {set}");
        }
        out
    }
}
