//! Line-level tokenizer shared by the sheet and matrix file formats.
//!
//! Both formats are line oriented: `#` starts a comment, blank lines are
//! skipped, `[name]` opens a section and `key = value` adds an entry.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Warning,
    Error,
}

/// Distinguishes text that could not be read at all from text that reads
/// fine but says something invalid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagnosticKind {
    Syntax,
    Validation,
}

/// A message tied to a 1-based line of the source text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub kind: DiagnosticKind,
    pub line: usize,
    pub message: String,
}

impl Diagnostic {
    pub fn syntax(line: usize, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Error,
            kind: DiagnosticKind::Syntax,
            line,
            message: message.into(),
        }
    }

    pub fn invalid(line: usize, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Error,
            kind: DiagnosticKind::Validation,
            line,
            message: message.into(),
        }
    }

    pub fn warning(line: usize, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Warning,
            kind: DiagnosticKind::Validation,
            line,
            message: message.into(),
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Warning => "warning",
            Severity::Error => "error",
        })
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}: {}", self.line, self.severity, self.message)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Line<'a> {
    Section {
        name: &'a str,
        line: usize,
    },
    Entry {
        key: &'a str,
        value: &'a str,
        line: usize,
    },
}

fn is_ident(s: &str, extra: &[char]) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || extra.contains(&c))
}

/// Splits `text` into section headers and entries. Lines that are neither
/// produce syntax diagnostics and are skipped.
pub(crate) fn lex(text: &str) -> (Vec<Line<'_>>, Vec<Diagnostic>) {
    let mut lines = Vec::new();
    let mut diags = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        }
        .trim();
        if content.is_empty() {
            continue;
        }
        if content.starts_with('[') {
            match content.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                Some(name) if is_ident(name, &['.']) => lines.push(Line::Section { name, line }),
                _ => diags.push(Diagnostic::syntax(
                    line,
                    format!("malformed section header `{content}`"),
                )),
            }
            continue;
        }
        match content.split_once('=') {
            Some((key, value)) if is_ident(key.trim(), &[]) => lines.push(Line::Entry {
                key: key.trim(),
                value: value.trim(),
                line,
            }),
            _ => diags.push(Diagnostic::syntax(
                line,
                format!("expected `key = value`, found `{content}`"),
            )),
        }
    }
    (lines, diags)
}

/// Parses a non-negative integer, reporting malformed or oversized values.
pub(crate) fn parse_uint<T: std::str::FromStr>(s: &str, line: usize) -> Result<T, Diagnostic> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Diagnostic::syntax(line, format!("malformed integer `{s}`")));
    }
    s.parse()
        .map_err(|_| Diagnostic::syntax(line, format!("integer too large `{s}`")))
}

/// Parses exactly three whitespace-separated non-negative integers.
pub(crate) fn parse_triple(s: &str, line: usize) -> Result<[u64; 3], Diagnostic> {
    let parts: Vec<&str> = s.split_whitespace().collect();
    if parts.len() != 3 {
        return Err(Diagnostic::syntax(
            line,
            format!("expected three integers (low average high), found `{s}`"),
        ));
    }
    Ok([
        parse_uint(parts[0], line)?,
        parse_uint(parts[1], line)?,
        parse_uint(parts[2], line)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comments_blanks_and_entries() {
        let (lines, diags) = lex("# header\n\n[meta]  # trailing\nname = Foo Bar  \n");
        assert!(diags.is_empty());
        assert_eq!(
            lines,
            vec![
                Line::Section {
                    name: "meta",
                    line: 3
                },
                Line::Entry {
                    key: "name",
                    value: "Foo Bar",
                    line: 4
                },
            ]
        );
    }

    #[test]
    fn malformed_lines_are_all_reported() {
        let (lines, diags) = lex("[counts\njunk\n= 3\n[ok]\n");
        assert_eq!(lines.len(), 1);
        assert_eq!(
            diags.iter().map(|d| d.line).collect::<Vec<_>>(),
            vec![1, 2, 3]
        );
        assert!(diags.iter().all(|d| d.kind == DiagnosticKind::Syntax));
    }

    #[test]
    fn integers() {
        assert_eq!(parse_uint::<u64>("42", 1).unwrap(), 42);
        assert!(parse_uint::<u64>("-1", 1).is_err());
        assert!(parse_uint::<u64>("4x", 1).is_err());
        assert!(parse_uint::<u32>("99999999999", 1)
            .unwrap_err()
            .message
            .contains("too large"));
        assert_eq!(parse_triple("1  2 3", 1).unwrap(), [1, 2, 3]);
        assert!(parse_triple("1 2", 1).is_err());
    }
}
