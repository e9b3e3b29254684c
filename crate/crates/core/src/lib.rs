//! Lexicon- and rule-driven classification of tweets as informative or
//! uninformative, with ensemble integration of several systems and a
//! cross-validation harness.
//!
//! The pipeline for the rule-based system is
//! [`tokenize`] → [`Lexicon::tag`] → [`match_rules`] → span count vs.
//! threshold ([`classify_rule_based`]). [`NbModel`] is a small statistical
//! model that stands in for the learned systems, in full-text and
//! per-sentence mode. [`ensemble`] combines prediction streams, and
//! [`eval`] scores them.

pub mod cli;
pub mod corpus;
pub mod ensemble;
pub mod error;
pub mod eval;
pub mod learned;
pub mod lexicon;
pub mod lint;
pub mod rules;

pub use corpus::{
    load_dataset, split_sentences, tokenize, write_predictions, Dataset, Example, Label, SentenceSpan, Token,
};
pub use ensemble::{
    integrate_and, integrate_dataset, integrate_or, integrate_precedence, integrate_vote, IntegrationStrategy,
};
pub use error::{Error, Result};
pub use eval::{
    confusion, cross_val_predict, cross_validate, error_sentence_stats, kfold_split, metrics_positive, ConfusionCounts,
    CvReport, Fold, Metrics,
};
pub use learned::{load_predictions, train_nb, NbModel, PredictionSet};
pub use lexicon::{parse_lexicon, LexMatch, Lexicon, LexiconEntry, WordClass};
pub use rules::{
    classify_rule_based, match_rules, parse_rules, RuleClassifier, RuleClassifierConfig, RuleDecision, RulePattern,
    RuleSet, SpanMatch,
};
