//! Tweets, labels, dataset files, tokenization and sentence splitting.
//!
//! Dataset files are UTF-8 TSV with one example per line:
//!
//! ```text
//! id<TAB>text[<TAB>LABEL]
//! ```
//!
//! where `LABEL` is `INFORMATIVE` or `UNINFORMATIVE` (case-insensitive on
//! input, upper case on output). Tabs inside tweet text are not supported.

use std::collections::HashSet;
use std::fmt;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    /// The positive class.
    Informative,
    Uninformative,
}

impl Label {
    pub const ALL: [Label; 2] = [Label::Informative, Label::Uninformative];

    pub fn as_str(self) -> &'static str {
        match self {
            Label::Informative => "INFORMATIVE",
            Label::Uninformative => "UNINFORMATIVE",
        }
    }

    pub fn is_informative(self) -> bool {
        self == Label::Informative
    }

    pub fn from_bool(informative: bool) -> Self {
        if informative {
            Label::Informative
        } else {
            Label::Uninformative
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownLabel(pub String);

impl fmt::Display for UnknownLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown label `{}`", self.0)
    }
}

impl std::error::Error for UnknownLabel {}

impl FromStr for Label {
    type Err = UnknownLabel;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("informative") {
            Ok(Label::Informative)
        } else if s.eq_ignore_ascii_case("uninformative") {
            Ok(Label::Uninformative)
        } else {
            Err(UnknownLabel(s.to_string()))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Example {
    pub id: String,
    pub text: String,
    pub gold: Option<Label>,
}

impl Example {
    pub fn new(id: impl Into<String>, text: impl Into<String>, gold: Option<Label>) -> Self {
        Example {
            id: id.into(),
            text: text.into(),
            gold,
        }
    }
}

/// An ordered collection of examples with unique, non-empty ids.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Dataset {
    examples: Vec<Example>,
}

impl Dataset {
    pub fn new(examples: Vec<Example>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(examples.len());
        for ex in &examples {
            if ex.id.is_empty() {
                return Err(Error::InvalidArgument("empty example id".into()));
            }
            if !seen.insert(ex.id.as_str()) {
                return Err(Error::DuplicateId(ex.id.clone()));
            }
        }
        Ok(Dataset { examples })
    }

    pub fn examples(&self) -> &[Example] {
        &self.examples
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Example> {
        self.examples.iter()
    }

    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }

    pub fn ids(&self) -> Vec<String> {
        self.examples.iter().map(|e| e.id.clone()).collect()
    }

    /// Examples whose id is in `ids`, in dataset order.
    pub fn subset<S: AsRef<str>>(&self, ids: &[S]) -> Dataset {
        let wanted: HashSet<&str> = ids.iter().map(AsRef::as_ref).collect();
        Dataset {
            examples: self
                .examples
                .iter()
                .filter(|e| wanted.contains(e.id.as_str()))
                .cloned()
                .collect(),
        }
    }

    /// Gold labels in dataset order, or `None` if any example is unlabeled.
    pub fn gold_labels(&self) -> Option<Vec<Label>> {
        self.examples.iter().map(|e| e.gold).collect()
    }
}

impl<'a> IntoIterator for &'a Dataset {
    type Item = &'a Example;
    type IntoIter = std::slice::Iter<'a, Example>;

    fn into_iter(self) -> Self::IntoIter {
        self.examples.iter()
    }
}

/// Iterates the non-empty lines of a file as `(1-based line number, line)`.
pub(crate) fn data_lines(content: &str) -> impl Iterator<Item = (usize, &str)> {
    content
        .split('\n')
        .enumerate()
        .map(|(i, line)| (i + 1, line.strip_suffix('\r').unwrap_or(line)))
        .filter(|(_, line)| !line.is_empty())
}

pub(crate) fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// Loads a dataset TSV. Lines may carry 2 or 3 fields; gold labels are only
/// parsed and kept when `has_labels` is set, in which case every line must
/// carry one.
pub fn load_dataset(path: impl AsRef<Path>, has_labels: bool) -> Result<Dataset> {
    let path = path.as_ref();
    let content = read_file(path)?;
    parse_dataset(&content, path, has_labels)
}

pub(crate) fn parse_dataset(content: &str, path: &Path, has_labels: bool) -> Result<Dataset> {
    let mut examples = Vec::new();
    let mut seen = HashSet::new();
    for (lineno, line) in data_lines(content) {
        let fields: Vec<&str> = line.split('\t').collect();
        let (id, text, label) = match fields.as_slice() {
            [id, text] => (*id, *text, None),
            [id, text, label] => (*id, *text, Some(*label)),
            _ => {
                return Err(Error::parse(
                    path,
                    lineno,
                    format!("expected 2 or 3 tab-separated fields, found {}", fields.len()),
                ))
            }
        };
        if id.is_empty() {
            return Err(Error::parse(path, lineno, "empty id"));
        }
        if !seen.insert(id.to_string()) {
            return Err(Error::parse(path, lineno, format!("duplicate id `{id}`")));
        }
        let gold = if has_labels {
            let raw = label.ok_or_else(|| Error::parse(path, lineno, "missing label field"))?;
            Some(
                raw.parse::<Label>()
                    .map_err(|e| Error::parse(path, lineno, e.to_string()))?,
            )
        } else {
            None
        };
        examples.push(Example::new(id, text, gold));
    }
    Ok(Dataset { examples })
}

/// Writes `id<TAB>LABEL` lines in input order.
pub fn write_predictions<S: AsRef<str>>(path: impl AsRef<Path>, preds: &[(S, Label)]) -> Result<()> {
    let path = path.as_ref();
    let mut seen = HashSet::with_capacity(preds.len());
    for (id, _) in preds {
        if !seen.insert(id.as_ref()) {
            return Err(Error::DuplicateId(id.as_ref().to_string()));
        }
    }
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    for (id, label) in preds {
        writeln!(out, "{}\t{}", id.as_ref(), label).map_err(|e| Error::io(path, e))?;
    }
    out.flush().map_err(|e| Error::io(path, e))
}

/// A token of a text. Offsets are counted in Unicode scalar values
/// (`start`/`end`) and in bytes (`byte_start`/`byte_end`), end-exclusive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token<'a> {
    pub surface: &'a str,
    pub start: usize,
    pub end: usize,
    pub byte_start: usize,
    pub byte_end: usize,
    pub normalized: String,
}

/// Letters, digits and `_`.
pub fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

fn is_glue_prefix(c: char) -> bool {
    c == '#' || c == '@'
}

/// Splits `text` into word runs (optionally prefixed by one glued `#` or
/// `@`) and single non-word, non-whitespace characters. Whitespace is
/// skipped.
pub fn tokenize(text: &str) -> Vec<Token<'_>> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let byte_at = |i: usize| chars.get(i).map_or(text.len(), |&(b, _)| b);
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i].1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if is_word_char(c) {
            i += 1;
        } else if is_glue_prefix(c) && chars.get(i + 1).is_some_and(|&(_, n)| is_word_char(n)) {
            i += 2;
        } else {
            i += 1;
            tokens.push(make_token(text, start, i, byte_at(start), byte_at(i)));
            continue;
        }
        while i < chars.len() && is_word_char(chars[i].1) {
            i += 1;
        }
        tokens.push(make_token(text, start, i, byte_at(start), byte_at(i)));
    }
    tokens
}

fn make_token(text: &str, start: usize, end: usize, byte_start: usize, byte_end: usize) -> Token<'_> {
    let surface = &text[byte_start..byte_end];
    Token {
        surface,
        start,
        end,
        byte_start,
        byte_end,
        normalized: surface.to_lowercase(),
    }
}

/// A sentence of a text, with the same offset conventions as [`Token`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SentenceSpan {
    pub start: usize,
    pub end: usize,
    pub byte_start: usize,
    pub byte_end: usize,
}

impl SentenceSpan {
    pub fn slice<'a>(&self, text: &'a str) -> &'a str {
        &text[self.byte_start..self.byte_end]
    }
}

fn is_terminator(c: char) -> bool {
    matches!(c, '.' | '!' | '?')
}

/// Splits after every run of `.`, `!`, `?` and at every newline. Spans are
/// trimmed of surrounding whitespace; whitespace-only pieces are dropped.
pub fn split_sentences(text: &str) -> Vec<SentenceSpan> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let byte_at = |i: usize| chars.get(i).map_or(text.len(), |&(b, _)| b);
    let mut spans = Vec::new();
    let mut push = |from: usize, to: usize| {
        let mut s = from;
        let mut e = to;
        while s < e && chars[s].1.is_whitespace() {
            s += 1;
        }
        while e > s && chars[e - 1].1.is_whitespace() {
            e -= 1;
        }
        if s < e {
            spans.push(SentenceSpan {
                start: s,
                end: e,
                byte_start: byte_at(s),
                byte_end: byte_at(e),
            });
        }
    };

    let mut piece_start = 0;
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i].1;
        if c == '\n' {
            push(piece_start, i);
            i += 1;
            piece_start = i;
        } else if is_terminator(c) {
            while i < chars.len() && is_terminator(chars[i].1) {
                i += 1;
            }
            push(piece_start, i);
            piece_start = i;
        } else {
            i += 1;
        }
    }
    push(piece_start, chars.len());
    spans
}
