//! Python bindings. Labels cross the boundary as the strings
//! `"INFORMATIVE"` and `"UNINFORMATIVE"`.

use std::path::Path;

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use tweetrules::eval::metrics_positive;
use tweetrules::{
    confusion, Dataset, Error, Example, IntegrationStrategy, Label, Lexicon, RuleClassifierConfig, RuleSet,
};

fn to_py(err: Error) -> PyErr {
    match err {
        Error::Io { .. } => PyIOError::new_err(err.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn label(s: &str) -> PyResult<Label> {
    s.parse().map_err(|e| PyValueError::new_err(format!("{e}")))
}

fn labels(v: &[String]) -> PyResult<Vec<Label>> {
    v.iter().map(|s| label(s)).collect()
}

fn dataset(examples: Vec<(String, String, Option<String>)>) -> PyResult<Dataset> {
    let examples = examples
        .into_iter()
        .map(|(id, text, gold)| Ok(Example::new(id, text, gold.as_deref().map(label).transpose()?)))
        .collect::<PyResult<Vec<_>>>()?;
    Dataset::new(examples).map_err(to_py)
}

/// Tokens as `(surface, start, end)` with character offsets.
#[pyfunction]
fn tokenize(text: &str) -> Vec<(String, usize, usize)> {
    tweetrules::tokenize(text)
        .into_iter()
        .map(|t| (t.surface.to_string(), t.start, t.end))
        .collect()
}

/// Sentences as `(start, end, text)` with character offsets.
#[pyfunction]
fn split_sentences(text: &str) -> Vec<(usize, usize, String)> {
    tweetrules::split_sentences(text)
        .into_iter()
        .map(|s| (s.start, s.end, s.slice(text).to_string()))
        .collect()
}

/// Reads a dataset file into `(id, text, label or None)` tuples.
#[pyfunction]
#[pyo3(signature = (path, has_labels=true))]
fn load_dataset(path: &str, has_labels: bool) -> PyResult<Vec<(String, String, Option<String>)>> {
    let data = tweetrules::load_dataset(path, has_labels).map_err(to_py)?;
    Ok(data
        .iter()
        .map(|e| (e.id.clone(), e.text.clone(), e.gold.map(|l| l.to_string())))
        .collect())
}

#[pyclass(name = "RuleClassifier", frozen)]
struct PyRuleClassifier {
    inner: tweetrules::RuleClassifier,
}

#[pymethods]
impl PyRuleClassifier {
    /// Builds a classifier from lexicon and rule file contents.
    #[new]
    #[pyo3(signature = (lexicon, rules, threshold=1, target_label="informative"))]
    fn new(lexicon: &str, rules: &str, threshold: usize, target_label: &str) -> PyResult<Self> {
        let lexicon = Lexicon::parse_str(lexicon, Path::new("<lexicon>")).map_err(to_py)?;
        let rules = RuleSet::parse_str(rules, Path::new("<rules>")).map_err(to_py)?;
        let config = RuleClassifierConfig::with_target(threshold, target_label).map_err(to_py)?;
        Ok(Self {
            inner: tweetrules::RuleClassifier::new(lexicon, rules, config),
        })
    }

    #[staticmethod]
    #[pyo3(signature = (lexicon_path, rules_path, threshold=1, target_label="informative"))]
    fn from_files(lexicon_path: &str, rules_path: &str, threshold: usize, target_label: &str) -> PyResult<Self> {
        let lexicon = tweetrules::parse_lexicon(lexicon_path).map_err(to_py)?;
        let rules = tweetrules::parse_rules(rules_path).map_err(to_py)?;
        let config = RuleClassifierConfig::with_target(threshold, target_label).map_err(to_py)?;
        Ok(Self {
            inner: tweetrules::RuleClassifier::new(lexicon, rules, config),
        })
    }

    fn classify(&self, text: &str) -> String {
        self.inner.classify(text).to_string()
    }

    fn span_count(&self, text: &str) -> usize {
        self.inner.span_count(text)
    }

    /// Fired spans as `(start, end, label or None, rule)`.
    fn spans(&self, text: &str) -> Vec<(usize, usize, Option<String>, String)> {
        self.inner
            .decide(text)
            .spans
            .into_iter()
            .map(|s| (s.char_start, s.char_end, s.label, s.rule.to_string()))
            .collect()
    }
}

#[pyclass(name = "NbModel", frozen)]
struct PyNbModel {
    inner: tweetrules::NbModel,
}

#[pymethods]
impl PyNbModel {
    /// Trains on `(id, text, label)` tuples.
    #[staticmethod]
    fn train(examples: Vec<(String, String, Option<String>)>) -> PyResult<Self> {
        let inner = tweetrules::train_nb(&dataset(examples)?).map_err(to_py)?;
        Ok(Self { inner })
    }

    fn vocabulary_len(&self) -> usize {
        self.inner.vocabulary_len()
    }

    /// `(label, posterior of INFORMATIVE)`.
    fn predict_full(&self, text: &str) -> (String, f64) {
        let (l, score) = self.inner.predict_full(text);
        (l.to_string(), score)
    }

    /// `(label, [(start, end, sentence_label), ...])`.
    fn predict_per_sentence(&self, text: &str) -> (String, Vec<(usize, usize, String)>) {
        let (l, sentences) = self.inner.predict_per_sentence(text);
        (
            l.to_string(),
            sentences
                .into_iter()
                .map(|(s, l)| (s.start, s.end, l.to_string()))
                .collect(),
        )
    }
}

/// Combines labels with `vote`, `and` or `or`.
#[pyfunction]
fn integrate(strategy: &str, preds: Vec<String>) -> PyResult<String> {
    let preds = labels(&preds)?;
    let out = match strategy.parse::<IntegrationStrategy>().map_err(to_py)? {
        IntegrationStrategy::MajorityVote => tweetrules::integrate_vote(&preds),
        IntegrationStrategy::And => tweetrules::integrate_and(&preds),
        IntegrationStrategy::Or => tweetrules::integrate_or(&preds),
        IntegrationStrategy::Precedence => {
            return Err(PyValueError::new_err(
                "use integrate_precedence for the precedence strategy",
            ))
        }
    };
    Ok(out.map_err(to_py)?.to_string())
}

#[pyfunction]
fn integrate_precedence(full: &str, per_sentence: &str, rule: &str) -> PyResult<String> {
    Ok(tweetrules::integrate_precedence(label(full)?, label(per_sentence)?, label(rule)?).to_string())
}

/// Counts and positive-class scores as a dict.
#[pyfunction]
fn metrics(gold: Vec<String>, pred: Vec<String>) -> PyResult<std::collections::HashMap<&'static str, f64>> {
    let c = confusion(&labels(&gold)?, &labels(&pred)?).map_err(to_py)?;
    let m = metrics_positive(&c);
    Ok([
        ("tp", c.tp as f64),
        ("fp", c.fp as f64),
        ("fn", c.fn_ as f64),
        ("tn", c.tn as f64),
        ("precision", m.precision),
        ("recall", m.recall),
        ("f1", m.f1),
    ]
    .into_iter()
    .collect())
}

/// Stratified folds over labeled `(id, text, label)` tuples, as
/// `[(train_ids, test_ids), ...]`.
#[pyfunction]
fn kfold_split(
    examples: Vec<(String, String, Option<String>)>,
    k: usize,
    seed: u64,
) -> PyResult<Vec<(Vec<String>, Vec<String>)>> {
    let folds = tweetrules::kfold_split(&dataset(examples)?, k, seed).map_err(to_py)?;
    Ok(folds.into_iter().map(|f| (f.train, f.test)).collect())
}

#[pymodule]
pub fn pytweetrules(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(tokenize, m)?)?;
    m.add_function(wrap_pyfunction!(split_sentences, m)?)?;
    m.add_function(wrap_pyfunction!(load_dataset, m)?)?;
    m.add_function(wrap_pyfunction!(integrate, m)?)?;
    m.add_function(wrap_pyfunction!(integrate_precedence, m)?)?;
    m.add_function(wrap_pyfunction!(metrics, m)?)?;
    m.add_function(wrap_pyfunction!(kfold_split, m)?)?;
    m.add_class::<PyRuleClassifier>()?;
    m.add_class::<PyNbModel>()?;
    Ok(())
}
