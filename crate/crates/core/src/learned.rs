//! Learned-model predictions: a multinomial naive Bayes stand-in trained on
//! the fly, and loading of prediction files produced by external systems.

use std::collections::{HashMap, HashSet};
use std::path::Path;

use crate::corpus::{data_lines, read_file, split_sentences, tokenize, Dataset, Label, SentenceSpan};
use crate::error::{Error, Result};

fn label_index(label: Label) -> usize {
    match label {
        Label::Informative => 0,
        Label::Uninformative => 1,
    }
}

/// Multinomial unigram model over normalized tokens with add-one smoothing.
///
/// Each class reserves one extra "unseen" slot, so the smoothed denominator
/// for class `c` is `tokens(c) + |vocabulary| + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct NbModel {
    class_log_prior: [f64; 2],
    token_log_likelihood: HashMap<String, [f64; 2]>,
    unseen_log_likelihood: [f64; 2],
}

impl NbModel {
    pub fn train(data: &Dataset) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::Training("empty dataset".into()));
        }
        let mut docs = [0usize; 2];
        let mut totals = [0usize; 2];
        let mut counts: HashMap<String, [usize; 2]> = HashMap::new();
        for ex in data {
            let gold = ex
                .gold
                .ok_or_else(|| Error::Training(format!("example `{}` has no gold label", ex.id)))?;
            let c = label_index(gold);
            docs[c] += 1;
            for tok in tokenize(&ex.text) {
                counts.entry(tok.normalized).or_default()[c] += 1;
                totals[c] += 1;
            }
        }
        for label in Label::ALL {
            if docs[label_index(label)] == 0 {
                return Err(Error::Training(format!("no {label} examples")));
            }
        }

        let n_docs = (docs[0] + docs[1]) as f64;
        let class_log_prior = [(docs[0] as f64 / n_docs).ln(), (docs[1] as f64 / n_docs).ln()];
        let vocab = counts.len();
        let denom = [(totals[0] + vocab + 1) as f64, (totals[1] + vocab + 1) as f64];
        let unseen_log_likelihood = [(1.0 / denom[0]).ln(), (1.0 / denom[1]).ln()];
        let token_log_likelihood = counts
            .into_iter()
            .map(|(tok, n)| {
                let ll = [((n[0] + 1) as f64 / denom[0]).ln(), ((n[1] + 1) as f64 / denom[1]).ln()];
                (tok, ll)
            })
            .collect();
        Ok(NbModel {
            class_log_prior,
            token_log_likelihood,
            unseen_log_likelihood,
        })
    }

    pub fn class_log_prior(&self, label: Label) -> f64 {
        self.class_log_prior[label_index(label)]
    }

    /// Log-likelihood of a normalized token; tokens outside the vocabulary
    /// get the unseen slot.
    pub fn token_log_likelihood(&self, token: &str, label: Label) -> f64 {
        let c = label_index(label);
        self.token_log_likelihood
            .get(token)
            .map_or(self.unseen_log_likelihood[c], |ll| ll[c])
    }

    pub fn unseen_log_likelihood(&self, label: Label) -> f64 {
        self.unseen_log_likelihood[label_index(label)]
    }

    pub fn vocabulary(&self) -> impl Iterator<Item = &str> {
        self.token_log_likelihood.keys().map(String::as_str)
    }

    pub fn vocabulary_len(&self) -> usize {
        self.token_log_likelihood.len()
    }

    /// Unnormalized log joint per class, indexed Informative then Uninformative.
    fn joint(&self, text: &str) -> [f64; 2] {
        let mut joint = self.class_log_prior;
        for tok in tokenize(text) {
            let ll = self
                .token_log_likelihood
                .get(&tok.normalized)
                .unwrap_or(&self.unseen_log_likelihood);
            joint[0] += ll[0];
            joint[1] += ll[1];
        }
        joint
    }

    /// Posterior probability of Informative.
    pub fn posterior_informative(&self, text: &str) -> f64 {
        let [i, u] = self.joint(text);
        // logistic of the log-odds, written to avoid overflow either way
        let d = i - u;
        if d >= 0.0 {
            1.0 / (1.0 + (-d).exp())
        } else {
            let e = d.exp();
            e / (1.0 + e)
        }
    }

    /// Argmax label and Informative posterior. Exact ties go to Uninformative.
    pub fn predict_full(&self, text: &str) -> (Label, f64) {
        let [i, u] = self.joint(text);
        (Label::from_bool(i > u), self.posterior_informative(text))
    }

    /// Predicts every sentence separately; the text is Informative iff any
    /// sentence is.
    pub fn predict_per_sentence(&self, text: &str) -> (Label, Vec<(SentenceSpan, Label)>) {
        let per_sentence: Vec<(SentenceSpan, Label)> = split_sentences(text)
            .into_iter()
            .map(|span| (span, self.predict_full(span.slice(text)).0))
            .collect();
        let any = per_sentence.iter().any(|(_, l)| l.is_informative());
        (Label::from_bool(any), per_sentence)
    }
}

pub fn train_nb(data: &Dataset) -> Result<NbModel> {
    NbModel::train(data)
}

/// Labels (and optional scores in `[0, 1]`) keyed by example id.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PredictionSet {
    by_id: HashMap<String, (Label, Option<f64>)>,
}

impl PredictionSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, id: impl Into<String>, label: Label, score: Option<f64>) -> Result<()> {
        let id = id.into();
        if let Some(s) = score {
            if !(0.0..=1.0).contains(&s) {
                return Err(Error::InvalidArgument(format!("score {s} for `{id}` outside [0, 1]")));
            }
        }
        if self.by_id.contains_key(&id) {
            return Err(Error::DuplicateId(id));
        }
        self.by_id.insert(id, (label, score));
        Ok(())
    }

    pub fn from_labels<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, Label)>,
        S: Into<String>,
    {
        let mut set = PredictionSet::new();
        for (id, label) in labels {
            set.insert(id, label, None)?;
        }
        Ok(set)
    }

    pub fn label(&self, id: &str) -> Option<Label> {
        self.by_id.get(id).map(|&(l, _)| l)
    }

    pub fn score(&self, id: &str) -> Option<f64> {
        self.by_id.get(id).and_then(|&(_, s)| s)
    }

    pub fn get(&self, id: &str) -> Option<(Label, Option<f64>)> {
        self.by_id.get(id).copied()
    }

    /// Label for `id`, or a missing-id error.
    pub fn require(&self, id: &str) -> Result<Label> {
        self.label(id).ok_or_else(|| Error::MissingId(id.to_string()))
    }

    pub fn contains(&self, id: &str) -> bool {
        self.by_id.contains_key(id)
    }

    pub fn len(&self) -> usize {
        self.by_id.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_id.is_empty()
    }

    /// `(id, label)` pairs in the order of `ids`.
    pub fn ordered<S: AsRef<str>>(&self, ids: &[S]) -> Result<Vec<(String, Label)>> {
        ids.iter()
            .map(|id| Ok((id.as_ref().to_string(), self.require(id.as_ref())?)))
            .collect()
    }
}

/// Loads `id<TAB>LABEL[<TAB>score]` lines and checks they cover exactly
/// `expected_ids`.
pub fn load_predictions(path: impl AsRef<Path>, expected_ids: &HashSet<String>) -> Result<PredictionSet> {
    let path = path.as_ref();
    let content = read_file(path)?;
    let set = parse_predictions(&content, path)?;
    for id in set.by_id.keys() {
        if !expected_ids.contains(id) {
            return Err(Error::UnexpectedId(id.clone()));
        }
    }
    if let Some(missing) = expected_ids.iter().filter(|id| !set.contains(id)).min() {
        return Err(Error::MissingId(missing.clone()));
    }
    Ok(set)
}

pub(crate) fn parse_predictions(content: &str, path: &Path) -> Result<PredictionSet> {
    let mut set = PredictionSet::new();
    for (lineno, line) in data_lines(content) {
        let fields: Vec<&str> = line.split('\t').collect();
        let (id, label, score) = match fields.as_slice() {
            [id, label] => (*id, *label, None),
            [id, label, score] => (*id, *label, Some(*score)),
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
        let label: Label = label
            .parse()
            .map_err(|e: crate::corpus::UnknownLabel| Error::parse(path, lineno, e.to_string()))?;
        let score = match score {
            None => None,
            Some(s) => {
                let v: f64 = s
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(path, lineno, format!("invalid score `{s}`")))?;
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::parse(path, lineno, format!("score {v} outside [0, 1]")));
                }
                Some(v)
            }
        };
        if set.contains(id) {
            return Err(Error::parse(path, lineno, format!("duplicate id `{id}`")));
        }
        set.insert(id, label, score)?;
    }
    Ok(set)
}
