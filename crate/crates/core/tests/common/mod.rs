//! Test-only reference implementations and instance generators.
//!
//! The oracles here work directly on characters of the lowercased text and
//! enumerate rule firings exhaustively; they share nothing with the
//! token-index machinery in the library beyond the definition of a word
//! character.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use tweetrules::corpus::is_word_char;
use tweetrules::{tokenize, Lexicon, LexiconEntry, RulePattern, RuleSet, WordClass};

pub fn demo_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data/demo")
        .join(name)
}

/// A lexicon match as found by the oracle: token span plus entry index.
pub type OracleLexMatch = (usize, usize, usize);

/// Character-level scan implementing word-boundary checks on the raw
/// lowercased text. Entry forms must consist of word characters only; words
/// of a multi-word form are separated by one or more whitespace characters.
pub fn oracle_tag(lexicon: &Lexicon, text: &str) -> BTreeSet<OracleLexMatch> {
    let norm: Vec<char> = text.to_lowercase().chars().collect();
    assert_eq!(
        norm.len(),
        text.chars().count(),
        "oracle needs length-preserving case folding"
    );
    let tokens = tokenize(text);
    let token_containing = |pos: usize| tokens.iter().position(|t| t.start <= pos && pos < t.end).unwrap();

    let mut out = BTreeSet::new();
    for (idx, entry) in lexicon.entries().iter().enumerate() {
        for start in 0..norm.len() {
            if !entry.open_left && !leading_boundary(&norm, start) {
                continue;
            }
            let Some(end) = match_form(&norm, start, &entry.form) else {
                continue;
            };
            if end < norm.len() && is_word_char(norm[end]) {
                continue;
            }
            let ts = token_containing(start);
            let te = token_containing(end - 1) + 1;
            out.insert((ts, te, idx));
        }
    }
    out
}

fn leading_boundary(norm: &[char], pos: usize) -> bool {
    // a `#` or `@` directly before a word character is part of the same token
    pos == 0 || !(is_word_char(norm[pos - 1]) || norm[pos - 1] == '#' || norm[pos - 1] == '@')
}

fn match_form(norm: &[char], start: usize, form: &[String]) -> Option<usize> {
    let mut pos = start;
    for (i, word) in form.iter().enumerate() {
        if i > 0 {
            let ws_start = pos;
            while pos < norm.len() && norm[pos].is_whitespace() {
                pos += 1;
            }
            if pos == ws_start {
                return None;
            }
        }
        for c in word.chars() {
            if pos >= norm.len() || norm[pos] != c {
                return None;
            }
            pos += 1;
        }
    }
    Some(pos)
}

/// One rule firing from the brute-force enumerator:
/// (char_start, char_end, token_start, token_end, label, rule_index).
pub type OracleSpan = (usize, usize, usize, usize, Option<String>, usize);

type SpanKey = (usize, usize, Option<String>);

/// Tries every rule at every start position against every combination of
/// lexicon matches, then deduplicates on (char span, label) keeping the
/// lowest rule index.
pub fn oracle_spans(lexicon: &Lexicon, rules: &RuleSet, text: &str) -> Vec<OracleSpan> {
    let tokens = tokenize(text);
    let matches: Vec<OracleLexMatch> = oracle_tag(lexicon, text).into_iter().collect();
    let entries = lexicon.entries();
    // (char_start, char_end, label) -> (token_start, token_end, rule_index)
    let mut best: BTreeMap<SpanKey, (usize, usize, usize)> = BTreeMap::new();
    if matches.is_empty() {
        return Vec::new();
    }

    for (rule_index, rule) in rules.rules().iter().enumerate() {
        let k = rule.elements.len();
        // every start position is covered: the start is whatever the first
        // match of the combination begins at
        let mut combo = vec![0usize; k];
        loop {
            let chain: Vec<&OracleLexMatch> = combo.iter().map(|&i| &matches[i]).collect();
            let fits = chain
                .iter()
                .zip(&rule.elements)
                .all(|(m, class)| &entries[m.2].class == class)
                && chain.windows(2).all(|w| w[1].0 == w[0].1);
            if fits {
                let label = rule
                    .label_override
                    .clone()
                    .or_else(|| entries[chain[rule.head].2].label.clone());
                let (ts, te) = (chain[0].0, chain[k - 1].1);
                let key = (tokens[ts].start, tokens[te - 1].end, label);
                best.entry(key)
                    .and_modify(|v| {
                        if rule_index < v.2 {
                            *v = (ts, te, rule_index)
                        }
                    })
                    .or_insert((ts, te, rule_index));
            }
            if !advance(&mut combo, matches.len()) {
                break;
            }
        }
    }
    best.into_iter()
        .map(|((cs, ce, label), (ts, te, r))| (cs, ce, ts, te, label, r))
        .collect()
}

// odometer over combo digits in 0..base; false once every combination is seen
fn advance(combo: &mut [usize], base: usize) -> bool {
    if base == 0 {
        return false;
    }
    for d in combo.iter_mut().rev() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

pub struct Instance {
    pub lexicon: Lexicon,
    pub rules: RuleSet,
    pub text: String,
}

const WORD_POOL: &[&str] = &["a", "b", "ab", "ba", "aab", "bab", "c", "ca", "bca"];
const LABELS: &[Option<&str>] = &[None, Some("informative"), Some("informative"), Some("other")];

/// Random small instance: 3-5 word forms, up to `max_classes` classes, texts
/// of at most 8 tokens.
pub fn random_instance(seed: u64, max_classes: usize) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_words = rng.random_range(3..=5);
    let words: Vec<&str> = WORD_POOL.choose_multiple(&mut rng, n_words).copied().collect();
    let n_classes = rng.random_range(1..=max_classes);
    let classes: Vec<WordClass> = (0..n_classes)
        .map(|i| WordClass::new(format!("C{i}")).unwrap())
        .collect();

    let mut entries: Vec<LexiconEntry> = Vec::new();
    for _ in 0..rng.random_range(2..=8) {
        let len = if rng.random_bool(0.8) { 1 } else { 2 };
        let form: Vec<&str> = (0..len).map(|_| *words.choose(&mut rng).unwrap()).collect();
        let class = classes.choose(&mut rng).unwrap().clone();
        let label = LABELS.choose(&mut rng).unwrap().map(str::to_string);
        let open_left = len == 1 && rng.random_bool(0.3);
        let entry = LexiconEntry::new(&form.join(" "), class, label, open_left).unwrap();
        if !entries.iter().any(|e| e.form == entry.form && e.class == entry.class) {
            entries.push(entry);
        }
    }
    let lexicon = Lexicon::new(entries).unwrap();

    let mut rules: Vec<RulePattern> = Vec::new();
    for _ in 0..rng.random_range(1..=5) {
        let len = rng.random_range(2..=4);
        let elements: Vec<WordClass> = (0..len).map(|_| classes.choose(&mut rng).unwrap().clone()).collect();
        let head = rng.random_range(0..len);
        let label_override = rng.random_bool(0.15).then(|| "informative".to_string());
        let rule = RulePattern::new(elements, head, label_override).unwrap();
        if !rules.contains(&rule) {
            rules.push(rule);
        }
    }
    let rules = RuleSet::new(rules).unwrap();

    let mut text = String::new();
    for i in 0..rng.random_range(0..=8) {
        if i > 0 {
            text.push_str(match rng.random_range(0..10) {
                0 => "",
                1 => "  ",
                2 => "\n",
                _ => " ",
            });
        }
        match rng.random_range(0..12) {
            0 => text.push(','),
            1 => text.push('-'),
            2 => text.push('#'),
            3 | 4 => {
                text.push('#');
                text.push_str(words.choose(&mut rng).unwrap());
            }
            5 => text.push_str(&words.choose(&mut rng).unwrap().to_uppercase()),
            _ => text.push_str(words.choose(&mut rng).unwrap()),
        }
    }
    Instance { lexicon, rules, text }
}

/// Random tweet-ish text drawn from the demo vocabulary, 1-4 sentences.
pub fn random_tweet(rng: &mut ChaCha8Rng) -> String {
    const WORDS: &[&str] = &[
        "new",
        "case",
        "cases",
        "first",
        "death",
        "confirmed",
        "good",
        "morning",
        "stay",
        "safe",
        "#covid19",
        "lagos",
        "patients",
        "recovered",
        "3",
        "today",
        "the",
        "in",
        "lockdown",
        "deaths",
    ];
    const ENDS: &[&str] = &[".", "!", "?", "!!!", "", "\n"];
    let mut text = String::new();
    for s in 0..rng.random_range(1..=4) {
        if s > 0 {
            text.push(' ');
        }
        let n = rng.random_range(1..=6);
        let words: Vec<&str> = (0..n).map(|_| *WORDS.choose(rng).unwrap()).collect();
        text.push_str(&words.join(" "));
        text.push_str(ENDS.choose(rng).unwrap());
    }
    text
}
