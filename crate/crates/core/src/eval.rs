//! Positive-class scoring, stratified k-fold cross-validation and the
//! sentence-count error analysis.
//!
//! Informative is the positive class throughout. Zero denominators yield 0
//! rather than NaN.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::corpus::{split_sentences, Dataset, Label};
use crate::error::{Error, Result};
use crate::learned::PredictionSet;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ConfusionCounts {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
    pub tn: usize,
}

impl ConfusionCounts {
    pub fn total(&self) -> usize {
        self.tp + self.fp + self.fn_ + self.tn
    }

    pub fn add(&mut self, gold: Label, pred: Label) {
        match (gold.is_informative(), pred.is_informative()) {
            (true, true) => self.tp += 1,
            (false, true) => self.fp += 1,
            (true, false) => self.fn_ += 1,
            (false, false) => self.tn += 1,
        }
    }
}

pub fn confusion(gold: &[Label], pred: &[Label]) -> Result<ConfusionCounts> {
    if gold.len() != pred.len() {
        return Err(Error::LengthMismatch {
            gold: gold.len(),
            pred: pred.len(),
        });
    }
    let mut counts = ConfusionCounts::default();
    for (&g, &p) in gold.iter().zip(pred) {
        counts.add(g, p);
    }
    Ok(counts)
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Metrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Harmonic mean of precision and recall, 0 when both are 0.
pub fn f1_score(precision: f64, recall: f64) -> f64 {
    let den = precision + recall;
    if den == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / den
    }
}

pub fn metrics_positive(counts: &ConfusionCounts) -> Metrics {
    let precision = ratio(counts.tp, counts.tp + counts.fp);
    let recall = ratio(counts.tp, counts.tp + counts.fn_);
    Metrics {
        precision,
        recall,
        f1: f1_score(precision, recall),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fold {
    pub train: Vec<String>,
    pub test: Vec<String>,
}

/// Stratified k-fold split. Needs `2 <= k <= data.len()` and at least one
/// example of each label. Each label's ids are shuffled with a ChaCha8
/// generator seeded from `seed` and dealt round-robin into the folds; the
/// dealing position carries over from Informative to Uninformative so fold
/// sizes stay within one of each other. Ids inside a fold keep dataset
/// order.
pub fn kfold_split(data: &Dataset, k: usize, seed: u64) -> Result<Vec<Fold>> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("k must be at least 2, got {k}")));
    }
    let mut by_label: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
    for (i, ex) in data.iter().enumerate() {
        let gold = ex
            .gold
            .ok_or_else(|| Error::InvalidArgument(format!("example `{}` has no gold label", ex.id)))?;
        by_label[usize::from(gold == Label::Uninformative)].push(i);
    }
    if k > data.len() {
        return Err(Error::InvalidArgument(format!(
            "k = {k} exceeds the {} examples",
            data.len()
        )));
    }
    for (label, members) in Label::ALL.iter().zip(&by_label) {
        if members.is_empty() {
            return Err(Error::InvalidArgument(format!("no {label} examples to stratify")));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fold_of = vec![0usize; data.len()];
    let mut next = 0usize;
    for members in &mut by_label {
        members.shuffle(&mut rng);
        for &i in members.iter() {
            fold_of[i] = next % k;
            next += 1;
        }
    }

    let examples = data.examples();
    Ok((0..k)
        .map(|f| {
            let mut fold = Fold {
                train: Vec::new(),
                test: Vec::new(),
            };
            for (i, ex) in examples.iter().enumerate() {
                if fold_of[i] == f {
                    fold.test.push(ex.id.clone());
                } else {
                    fold.train.push(ex.id.clone());
                }
            }
            fold
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct CvReport {
    pub fold_metrics: Vec<Metrics>,
    pub mean_f1: f64,
    /// Sample standard deviation (n - 1 denominator).
    pub std_f1: f64,
}

impl CvReport {
    pub fn from_folds(fold_metrics: Vec<Metrics>) -> Self {
        let f1s: Vec<f64> = fold_metrics.iter().map(|m| m.f1).collect();
        let (mean_f1, std_f1) = mean_and_sample_std(&f1s);
        CvReport {
            fold_metrics,
            mean_f1,
            std_f1,
        }
    }

    /// Human-readable table.
    pub fn to_text(&self, system: &str, k: usize, seed: u64) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "cross-validation: system={system} k={k} seed={seed}");
        let _ = writeln!(s, "fold  precision  recall     f1");
        for (i, m) in self.fold_metrics.iter().enumerate() {
            let _ = writeln!(
                s,
                "{:<4}  {:.4}     {:.4}     {:.4}",
                i + 1,
                m.precision,
                m.recall,
                m.f1
            );
        }
        let _ = writeln!(s, "F1 {:.4}  Std {:.4}  (sample std, n-1)", self.mean_f1, self.std_f1);
        s
    }

    /// Line-oriented `key=value` form.
    pub fn to_kv(&self, system: &str, k: usize, seed: u64) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "system={system}");
        let _ = writeln!(s, "k={k}");
        let _ = writeln!(s, "seed={seed}");
        for (i, m) in self.fold_metrics.iter().enumerate() {
            let _ = writeln!(s, "fold.{}.precision={:.4}", i + 1, m.precision);
            let _ = writeln!(s, "fold.{}.recall={:.4}", i + 1, m.recall);
            let _ = writeln!(s, "fold.{}.f1={:.4}", i + 1, m.f1);
        }
        let _ = writeln!(s, "mean_f1={:.4}", self.mean_f1);
        let _ = writeln!(s, "std_f1={:.4}", self.std_f1);
        let _ = writeln!(s, "std_kind=sample");
        s
    }
}

pub fn mean_and_sample_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Trains `system` on each fold's training split and returns the labels it
/// assigns to that fold's test examples.
fn fold_predictions<B, C>(data: &Dataset, fold: &Fold, build: &mut B) -> Result<Vec<(String, Label)>>
where
    B: FnMut(&Dataset) -> Result<C>,
    C: Fn(&str) -> Label,
{
    let train = data.subset(&fold.train);
    let test = data.subset(&fold.test);
    let classify = build(&train)?;
    Ok(test.iter().map(|ex| (ex.id.clone(), classify(&ex.text))).collect())
}

/// k-fold cross-validation. `build` turns a training split into a text
/// classifier; every example is used as test data exactly once.
pub fn cross_validate<B, C>(data: &Dataset, k: usize, seed: u64, mut build: B) -> Result<CvReport>
where
    B: FnMut(&Dataset) -> Result<C>,
    C: Fn(&str) -> Label,
{
    let folds = kfold_split(data, k, seed)?;
    let mut fold_metrics = Vec::with_capacity(k);
    for fold in &folds {
        let preds = fold_predictions(data, fold, &mut build)?;
        let test = data.subset(&fold.test);
        let mut counts = ConfusionCounts::default();
        for (ex, (_, pred)) in test.iter().zip(&preds) {
            counts.add(ex.gold.expect("kfold_split checked labels"), *pred);
        }
        fold_metrics.push(metrics_positive(&counts));
    }
    Ok(CvReport::from_folds(fold_metrics))
}

/// Out-of-fold predictions: each example labeled by the model trained
/// without its fold.
pub fn cross_val_predict<B, C>(data: &Dataset, k: usize, seed: u64, mut build: B) -> Result<PredictionSet>
where
    B: FnMut(&Dataset) -> Result<C>,
    C: Fn(&str) -> Label,
{
    let folds = kfold_split(data, k, seed)?;
    let mut out = PredictionSet::new();
    for fold in &folds {
        for (id, label) in fold_predictions(data, fold, &mut build)? {
            out.insert(id, label, None)?;
        }
    }
    Ok(out)
}

/// Confusion counts of `preds` against the gold labels of `data`.
pub fn score_predictions(data: &Dataset, preds: &PredictionSet) -> Result<ConfusionCounts> {
    let mut counts = ConfusionCounts::default();
    for ex in data {
        let gold = ex
            .gold
            .ok_or_else(|| Error::InvalidArgument(format!("example `{}` has no gold label", ex.id)))?;
        counts.add(gold, preds.require(&ex.id)?);
    }
    Ok(counts)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SentenceStats {
    /// Mean sentence count of misclassified examples, `None` if there are none.
    pub mean_sentences_wrong: Option<f64>,
    pub mean_sentences_correct: Option<f64>,
}

pub fn error_sentence_stats(data: &Dataset, preds: &PredictionSet) -> Result<SentenceStats> {
    let mut wrong = (0usize, 0usize);
    let mut right = (0usize, 0usize);
    for ex in data {
        let gold = ex
            .gold
            .ok_or_else(|| Error::InvalidArgument(format!("example `{}` has no gold label", ex.id)))?;
        let n = split_sentences(&ex.text).len();
        let group = if preds.require(&ex.id)? == gold {
            &mut right
        } else {
            &mut wrong
        };
        group.0 += n;
        group.1 += 1;
    }
    let mean = |(sum, count): (usize, usize)| (count > 0).then(|| sum as f64 / count as f64);
    Ok(SentenceStats {
        mean_sentences_wrong: mean(wrong),
        mean_sentences_correct: mean(right),
    })
}
