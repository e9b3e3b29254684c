//! Consistency checks between a lexicon and a rule set.

use std::collections::BTreeSet;
use std::fmt;

use crate::lexicon::Lexicon;
use crate::rules::RuleSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LintWarning {
    /// A rule element names a class with no lexicon entry; the rule can never fire.
    UnknownClass { rule: String, class: String },
    /// The rule can fire but never yields a span with the target label.
    Unreachable { rule: String, target: String },
}

impl fmt::Display for LintWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LintWarning::UnknownClass { rule, class } => {
                write!(f, "rule `{rule}`: class `{class}` has no lexicon entries")
            }
            LintWarning::Unreachable { rule, target } => {
                write!(f, "rule `{rule}`: can never produce a `{target}` span")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LintReport {
    pub entries: usize,
    pub rules: usize,
    pub warnings: Vec<LintWarning>,
}

impl LintReport {
    pub fn is_clean(&self) -> bool {
        self.warnings.is_empty()
    }
}

pub fn lint(lexicon: &Lexicon, rules: &RuleSet, target_label: &str) -> LintReport {
    let classes = lexicon.classes();
    let mut warnings = Vec::new();
    for rule in rules.rules() {
        let missing: BTreeSet<&str> = rule
            .elements
            .iter()
            .filter(|c| !classes.contains(c))
            .map(|c| c.as_str())
            .collect();
        if !missing.is_empty() {
            warnings.extend(missing.into_iter().map(|class| LintWarning::UnknownClass {
                rule: rule.to_string(),
                class: class.to_string(),
            }));
            continue;
        }
        let reaches_target = match &rule.label_override {
            Some(label) => label == target_label,
            None => {
                let head = &rule.elements[rule.head];
                lexicon
                    .entries()
                    .iter()
                    .any(|e| &e.class == head && e.label.as_deref() == Some(target_label))
            }
        };
        if !reaches_target {
            warnings.push(LintWarning::Unreachable {
                rule: rule.to_string(),
                target: target_label.to_string(),
            });
        }
    }
    LintReport {
        entries: lexicon.len(),
        rules: rules.len(),
        warnings,
    }
}
