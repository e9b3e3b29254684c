//! Word-class sequence rules and the threshold classifier built on them.
//!
//! A rule file holds one pattern per line, e.g.
//!
//! ```text
//! NUMord *N
//! ADJ Ncorona *N
//! NUM *Nperson Vpast -> informative
//! ```
//!
//! Elements are word class names; the starred element is the head. A span
//! matched by a rule takes the label of the lexicon entry matched at the
//! head, unless the rule ends in `-> label`, which overrides it.

use std::collections::HashSet;
use std::fmt;
use std::path::Path;

use crate::corpus::{read_file, tokenize, Label, Token};
use crate::error::{Error, Result};
use crate::lexicon::{is_valid_class_name, LexMatch, Lexicon, WordClass};

pub const MIN_RULE_LEN: usize = 2;
pub const MAX_RULE_LEN: usize = 7;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RulePattern {
    pub elements: Vec<WordClass>,
    pub head: usize,
    pub label_override: Option<String>,
}

impl RulePattern {
    pub fn new(elements: Vec<WordClass>, head: usize, label_override: Option<String>) -> Result<Self> {
        if !(MIN_RULE_LEN..=MAX_RULE_LEN).contains(&elements.len()) {
            return Err(Error::InvalidArgument(format!(
                "rule length {} outside {MIN_RULE_LEN}..={MAX_RULE_LEN}",
                elements.len()
            )));
        }
        if head >= elements.len() {
            return Err(Error::InvalidArgument(format!(
                "head index {head} out of range for {} elements",
                elements.len()
            )));
        }
        Ok(RulePattern {
            elements,
            head,
            label_override,
        })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

impl fmt::Display for RulePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, class) in self.elements.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            if i == self.head {
                f.write_str("*")?;
            }
            write!(f, "{class}")?;
        }
        if let Some(label) = &self.label_override {
            write!(f, " -> {label}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RuleSet {
    rules: Vec<RulePattern>,
}

impl RuleSet {
    pub fn new(rules: Vec<RulePattern>) -> Result<Self> {
        let mut seen = HashSet::new();
        for rule in &rules {
            if !seen.insert(rule) {
                return Err(Error::InvalidArgument(format!("duplicate rule `{rule}`")));
            }
        }
        Ok(RuleSet { rules })
    }

    pub fn rules(&self) -> &[RulePattern] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn parse_str(content: &str, path: &Path) -> Result<Self> {
        let mut rules = Vec::new();
        let mut seen = HashSet::new();
        for (lineno, line) in content.split('\n').enumerate() {
            let lineno = lineno + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let rule = parse_rule_line(trimmed).map_err(|m| Error::parse(path, lineno, m))?;
            if !seen.insert(rule.clone()) {
                return Err(Error::parse(path, lineno, format!("duplicate rule `{rule}`")));
            }
            rules.push(rule);
        }
        Ok(RuleSet { rules })
    }
}

fn parse_rule_line(line: &str) -> std::result::Result<RulePattern, String> {
    let (body, label_override) = match line.split_once("->") {
        None => (line, None),
        Some((body, rest)) => {
            let mut words = rest.split_whitespace();
            match (words.next(), words.next()) {
                (Some(label), None) if !label.contains("->") => (body, Some(label.to_string())),
                _ => return Err(format!("expected a single label after `->`, found `{}`", rest.trim())),
            }
        }
    };
    let mut elements = Vec::new();
    let mut head = None;
    for (i, word) in body.split_whitespace().enumerate() {
        let name = match word.strip_prefix('*') {
            Some(name) => {
                if head.replace(i).is_some() {
                    return Err("more than one `*` head marker".into());
                }
                name
            }
            None => word,
        };
        if !is_valid_class_name(name) {
            return Err(format!("invalid rule element `{word}`"));
        }
        elements.push(WordClass::new(name).map_err(|e| e.to_string())?);
    }
    let head = head.ok_or_else(|| "rule has no `*` head marker".to_string())?;
    RulePattern::new(elements, head, label_override).map_err(|e| match e {
        Error::InvalidArgument(m) => m,
        other => other.to_string(),
    })
}

pub fn parse_rules(path: impl AsRef<Path>) -> Result<RuleSet> {
    let path = path.as_ref();
    let content = read_file(path)?;
    RuleSet::parse_str(&content, path)
}

/// One firing of a rule over adjacent lexicon matches.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanMatch<'r> {
    pub rule: &'r RulePattern,
    pub rule_index: usize,
    pub char_start: usize,
    pub char_end: usize,
    pub token_start: usize,
    pub token_end: usize,
    pub label: Option<String>,
}

/// Fires every rule over the lexicon matches of one text. Rule elements must
/// be matched by lexicon matches that are strictly adjacent in token indices.
/// The result is deduplicated on (char_start, char_end, label), keeping the
/// first firing in rule order, and sorted by span.
pub fn match_rules<'r>(ruleset: &'r RuleSet, tokens: &[Token<'_>], matches: &[LexMatch<'_>]) -> Vec<SpanMatch<'r>> {
    let mut by_start: Vec<Vec<&LexMatch<'_>>> = vec![Vec::new(); tokens.len() + 1];
    for m in matches {
        if m.token_start < by_start.len() {
            by_start[m.token_start].push(m);
        }
    }

    let mut spans = Vec::new();
    let mut chain: Vec<&LexMatch<'_>> = Vec::with_capacity(MAX_RULE_LEN);
    for (rule_index, rule) in ruleset.rules.iter().enumerate() {
        for start in 0..tokens.len() {
            extend(rule, rule_index, start, &by_start, &mut chain, &mut spans);
        }
    }

    spans.sort_by(|a: &SpanMatch<'_>, b| {
        (a.char_start, a.char_end, &a.label).cmp(&(b.char_start, b.char_end, &b.label))
    });
    spans.dedup_by(|b, a| (a.char_start, a.char_end, &a.label) == (b.char_start, b.char_end, &b.label));
    spans
}

fn extend<'r, 'm, 'l>(
    rule: &'r RulePattern,
    rule_index: usize,
    pos: usize,
    by_start: &[Vec<&'m LexMatch<'l>>],
    chain: &mut Vec<&'m LexMatch<'l>>,
    out: &mut Vec<SpanMatch<'r>>,
) {
    let depth = chain.len();
    if depth == rule.elements.len() {
        let first = chain[0];
        let last = chain[depth - 1];
        let label = rule
            .label_override
            .clone()
            .or_else(|| chain[rule.head].label().map(str::to_string));
        out.push(SpanMatch {
            rule,
            rule_index,
            char_start: first.char_start,
            char_end: last.char_end,
            token_start: first.token_start,
            token_end: last.token_end,
            label,
        });
        return;
    }
    let Some(cands) = by_start.get(pos) else {
        return;
    };
    let want = &rule.elements[depth];
    for &m in cands {
        if m.class() == want {
            chain.push(m);
            extend(rule, rule_index, m.token_end, by_start, chain, out);
            chain.pop();
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleClassifierConfig {
    threshold: usize,
    pub target_label: String,
}

impl RuleClassifierConfig {
    pub const DEFAULT_TARGET: &'static str = "informative";

    pub fn new(threshold: usize) -> Result<Self> {
        Self::with_target(threshold, Self::DEFAULT_TARGET)
    }

    pub fn with_target(threshold: usize, target_label: impl Into<String>) -> Result<Self> {
        if threshold < 1 {
            return Err(Error::InvalidArgument("threshold must be at least 1".into()));
        }
        Ok(RuleClassifierConfig {
            threshold,
            target_label: target_label.into(),
        })
    }

    pub fn threshold(&self) -> usize {
        self.threshold
    }
}

impl Default for RuleClassifierConfig {
    fn default() -> Self {
        RuleClassifierConfig {
            threshold: 1,
            target_label: Self::DEFAULT_TARGET.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleDecision<'r> {
    pub label: Label,
    /// Number of spans carrying the target label.
    pub span_count: usize,
    pub spans: Vec<SpanMatch<'r>>,
}

/// Informative iff at least `config.threshold` deduplicated spans carry the
/// target label; texts where no rule fires are Uninformative.
pub fn classify_rule_based<'r>(
    ruleset: &'r RuleSet,
    lexicon: &Lexicon,
    text: &str,
    config: &RuleClassifierConfig,
) -> RuleDecision<'r> {
    let tokens = tokenize(text);
    let lex_matches = lexicon.tag(&tokens);
    let spans = match_rules(ruleset, &tokens, &lex_matches);
    let span_count = spans
        .iter()
        .filter(|s| s.label.as_deref() == Some(config.target_label.as_str()))
        .count();
    RuleDecision {
        label: Label::from_bool(span_count >= config.threshold),
        span_count,
        spans,
    }
}

/// Lexicon, rules and configuration bundled for repeated classification.
#[derive(Debug, Clone)]
pub struct RuleClassifier {
    pub lexicon: Lexicon,
    pub rules: RuleSet,
    pub config: RuleClassifierConfig,
}

impl RuleClassifier {
    pub fn new(lexicon: Lexicon, rules: RuleSet, config: RuleClassifierConfig) -> Self {
        RuleClassifier { lexicon, rules, config }
    }

    pub fn decide(&self, text: &str) -> RuleDecision<'_> {
        classify_rule_based(&self.rules, &self.lexicon, text, &self.config)
    }

    pub fn classify(&self, text: &str) -> Label {
        self.decide(text).label
    }

    pub fn span_count(&self, text: &str) -> usize {
        self.decide(text).span_count
    }
}
