//! Task lexicon: word forms mapped to word classes and optional labels,
//! plus the tagger that finds lexicon entries in a token sequence.
//!
//! Lexicon files are UTF-8 with one entry per line:
//!
//! ```text
//! # form<TAB>class[<TAB>label][<TAB>flags]
//! case	N	informative
//! first	NUMord
//! covid19	Ncorona		open_left
//! ```
//!
//! Forms are tokenized with [`tokenize`] and case-folded, so `covid-19` is a
//! three-token form and `Confirmed Case` is the same form as `confirmed case`.
//!
//! Word boundaries are realized on token boundaries: a closed entry matches a
//! run of whole tokens. An `open_left` entry drops the leading boundary and
//! matches any token whose normalized surface ends with the form, which is
//! how `covid19` is found inside `#stopcovid19`.

#![allow(clippy::tabs_in_doc_comments)]

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::path::Path;

use crate::corpus::{read_file, tokenize, Token};
use crate::error::{Error, Result};

/// Name of a semantic/syntactic word class, e.g. `N`, `NUMord`, `Ncorona`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WordClass(String);

impl WordClass {
    pub fn new(name: impl Into<String>) -> Result<Self> {
        let name = name.into();
        if is_valid_class_name(&name) {
            Ok(WordClass(name))
        } else {
            Err(Error::InvalidArgument(format!("invalid word class name `{name}`")))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for WordClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub(crate) fn is_valid_class_name(name: &str) -> bool {
    !name.is_empty() && name.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexiconEntry {
    /// Normalized form tokens, never empty.
    pub form: Vec<String>,
    pub class: WordClass,
    pub label: Option<String>,
    pub open_left: bool,
}

impl LexiconEntry {
    /// Builds an entry from a raw form string, tokenizing and case-folding it.
    pub fn new(form: &str, class: WordClass, label: Option<String>, open_left: bool) -> Result<Self> {
        let form: Vec<String> = tokenize(form).into_iter().map(|t| t.normalized).collect();
        if form.is_empty() {
            return Err(Error::InvalidArgument("empty lexicon form".into()));
        }
        if open_left && form.len() != 1 {
            return Err(Error::InvalidArgument(format!(
                "open_left requires a single-token form, `{}` has {} tokens",
                form.join(" "),
                form.len()
            )));
        }
        if matches!(&label, Some(l) if l.trim().is_empty()) {
            return Err(Error::InvalidArgument("empty label".into()));
        }
        Ok(LexiconEntry {
            form,
            class,
            label,
            open_left,
        })
    }

    pub fn form_text(&self) -> String {
        self.form.join(" ")
    }
}

#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    entries: Vec<LexiconEntry>,
    // first form token -> closed entries
    closed_index: HashMap<String, Vec<usize>>,
    // full form -> open_left entries, probed with every suffix of a token
    open_index: HashMap<String, Vec<usize>>,
}

impl Lexicon {
    pub fn new(entries: Vec<LexiconEntry>) -> Result<Self> {
        let mut lexicon = Lexicon::default();
        for entry in entries {
            lexicon.push(entry)?;
        }
        Ok(lexicon)
    }

    fn push(&mut self, entry: LexiconEntry) -> Result<()> {
        let dup = self
            .entries
            .iter()
            .any(|e| e.form == entry.form && e.class == entry.class);
        if dup {
            return Err(Error::InvalidArgument(format!(
                "duplicate lexicon entry `{}` {}",
                entry.form_text(),
                entry.class
            )));
        }
        let idx = self.entries.len();
        if entry.open_left {
            self.open_index.entry(entry.form[0].clone()).or_default().push(idx);
        } else {
            self.closed_index.entry(entry.form[0].clone()).or_default().push(idx);
        }
        self.entries.push(entry);
        Ok(())
    }

    pub fn entries(&self) -> &[LexiconEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn classes(&self) -> HashSet<&WordClass> {
        self.entries.iter().map(|e| &e.class).collect()
    }

    pub fn parse_str(content: &str, path: &Path) -> Result<Self> {
        let mut lexicon = Lexicon::default();
        for (lineno, line) in content.split('\n').enumerate() {
            let lineno = lineno + 1;
            let line = line.strip_suffix('\r').unwrap_or(line);
            let trimmed = line.trim_start();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let entry = parse_entry_line(line).map_err(|m| Error::parse(path, lineno, m))?;
            lexicon
                .push(entry)
                .map_err(|e| Error::parse(path, lineno, strip_invalid(e)))?;
        }
        Ok(lexicon)
    }

    /// Every lexicon match over `tokens`, overlapping ones included, sorted
    /// by (token_start, token_end, class name).
    pub fn tag<'l>(&'l self, tokens: &[Token<'_>]) -> Vec<LexMatch<'l>> {
        let mut found: Vec<(usize, usize, usize)> = Vec::new();
        for (i, tok) in tokens.iter().enumerate() {
            if let Some(cands) = self.closed_index.get(&tok.normalized) {
                for &idx in cands {
                    let form = &self.entries[idx].form;
                    let end = i + form.len();
                    if end <= tokens.len() && form.iter().zip(&tokens[i..end]).all(|(f, t)| *f == t.normalized) {
                        found.push((i, end, idx));
                    }
                }
            }
            if !self.open_index.is_empty() {
                let norm = tok.normalized.as_str();
                for (b, _) in norm.char_indices() {
                    if let Some(cands) = self.open_index.get(&norm[b..]) {
                        found.extend(cands.iter().map(|&idx| (i, i + 1, idx)));
                    }
                }
            }
        }
        let mut matches: Vec<LexMatch<'l>> = found
            .into_iter()
            .map(|(ts, te, idx)| LexMatch {
                entry: &self.entries[idx],
                entry_index: idx,
                token_start: ts,
                token_end: te,
                char_start: tokens[ts].start,
                char_end: tokens[te - 1].end,
            })
            .collect();
        matches.sort_by(|a, b| {
            (a.token_start, a.token_end, a.entry.class.as_str(), a.entry_index).cmp(&(
                b.token_start,
                b.token_end,
                b.entry.class.as_str(),
                b.entry_index,
            ))
        });
        matches
    }
}

fn strip_invalid(e: Error) -> String {
    match e {
        Error::InvalidArgument(m) => m,
        other => other.to_string(),
    }
}

fn parse_entry_line(line: &str) -> std::result::Result<LexiconEntry, String> {
    let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
    if fields.len() < 2 || fields.len() > 4 {
        return Err(format!(
            "expected form<TAB>class[<TAB>label][<TAB>flags], found {} field(s)",
            fields.len()
        ));
    }
    let form = fields[0];
    if form.is_empty() {
        return Err("empty form".into());
    }
    let class = fields[1];
    if class.is_empty() {
        return Err("missing word class".into());
    }
    let class = WordClass::new(class).map_err(strip_invalid)?;
    let label = fields.get(2).filter(|l| !l.is_empty()).map(|l| l.to_string());
    if let Some(l) = &label {
        if l.contains(char::is_whitespace) {
            return Err(format!("label `{l}` contains whitespace"));
        }
    }
    let mut open_left = false;
    if let Some(flags) = fields.get(3) {
        for flag in flags.split(',').map(str::trim).filter(|f| !f.is_empty()) {
            match flag {
                "open_left" => open_left = true,
                other => return Err(format!("unknown flag `{other}`")),
            }
        }
    }
    LexiconEntry::new(form, class, label, open_left).map_err(strip_invalid)
}

pub fn parse_lexicon(path: impl AsRef<Path>) -> Result<Lexicon> {
    let path = path.as_ref();
    let content = read_file(path)?;
    Lexicon::parse_str(&content, path)
}

/// A lexicon entry found over tokens `[token_start, token_end)`. Character
/// offsets are those of the covered tokens.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LexMatch<'l> {
    pub entry: &'l LexiconEntry,
    pub entry_index: usize,
    pub token_start: usize,
    pub token_end: usize,
    pub char_start: usize,
    pub char_end: usize,
}

impl LexMatch<'_> {
    pub fn class(&self) -> &WordClass {
        &self.entry.class
    }

    pub fn label(&self) -> Option<&str> {
        self.entry.label.as_deref()
    }
}
