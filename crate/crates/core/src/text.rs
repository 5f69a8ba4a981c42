//! Whitespace helpers shared by the channels, layout, and metrics.

/// Collapses every whitespace run to one space and trims both ends.
pub fn normalize_whitespace(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for tok in text.split_whitespace() {
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(tok);
    }
    out
}

/// Like [`normalize_whitespace`], but a run that contains a newline
/// collapses to `'\n'` instead of a space, so line structure survives.
pub fn normalize_keep_lines(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut pending: Option<char> = None;
    for c in text.chars() {
        if c.is_whitespace() {
            if c == '\n' {
                pending = Some('\n');
            } else if pending.is_none() {
                pending = Some(' ');
            }
        } else {
            if let Some(sep) = pending.take() {
                if !out.is_empty() {
                    out.push(sep);
                }
            }
            out.push(c);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn collapses_runs() {
        assert_eq!(normalize_whitespace("  a \t b\n\nc "), "a b c");
        assert_eq!(normalize_whitespace(""), "");
    }

    #[test]
    fn keeps_newlines() {
        assert_eq!(normalize_keep_lines(" a  b \n  c\t\n d "), "a b\nc\nd");
        assert_eq!(normalize_keep_lines("\n\n"), "");
    }
}
