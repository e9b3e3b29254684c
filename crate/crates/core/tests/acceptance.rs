//! Acceptance suite. Each test checks one criterion and prints a single
//! `criterion N ... PASS|FAIL` line; run with `--nocapture` to see them.

mod common;

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use tweetrules::eval::{mean_and_sample_std, score_predictions};
use tweetrules::*;

use common::{demo_path, oracle_spans, random_instance, random_tweet};

fn report(n: u32, name: &str, failures: &[String], elapsed: Duration, budget: Option<Duration>) {
    let slow = budget.is_some_and(|b| elapsed > b);
    let ok = failures.is_empty() && !slow;
    let budget_note = budget.map(|b| format!(" (budget {b:?})")).unwrap_or_default();
    println!(
        "criterion {n} {name}: {} [{} failures, {elapsed:.2?}{budget_note}]",
        if ok { "PASS" } else { "FAIL" },
        failures.len()
    );
    for f in failures.iter().take(5) {
        println!("    {f}");
    }
    assert!(ok, "criterion {n} failed");
}

fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data/fixtures")
        .join(rel)
}

fn corpus() -> Dataset {
    load_dataset(demo_path("corpus.tsv"), true).unwrap()
}

fn recall(data: &Dataset, preds: &PredictionSet) -> f64 {
    metrics_positive(&score_predictions(data, preds).unwrap()).recall
}

#[test]
fn criterion_1_worked_examples() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let lexicon = parse_lexicon(demo_path("demo.lex")).unwrap();
    let rules = RuleSet::parse_str("NUMord *N\nADJ Ncorona *N\nNUMord ADJ *N\n", Path::new("three")).unwrap();
    let config = RuleClassifierConfig::new(1).unwrap();
    for phrase in ["first case", "first confirmed death", "new covid19 deaths"] {
        let d = classify_rule_based(&rules, &lexicon, phrase, &config);
        if d.label != Label::Informative {
            failures.push(format!("{phrase:?} -> {} ({} spans)", d.label, d.span_count));
        }
    }
    let tokens = tokenize("#stopcovid19");
    let tags = lexicon.tag(&tokens);
    if !tags.iter().any(|m| m.class().as_str() == "Ncorona") {
        failures.push("#stopcovid19 has no Ncorona match".into());
    }
    report(
        1,
        "worked examples",
        &failures,
        start.elapsed(),
        Some(Duration::from_secs(1)),
    );
}

#[test]
fn criterion_2_matcher_oracle() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut checked = 0;
    for seed in 0..1000u64 {
        let inst = random_instance(seed, 5);
        let tokens = tokenize(&inst.text);
        assert!(tokens.len() <= 8, "instance {seed} has more than 8 tokens");
        let lm = inst.lexicon.tag(&tokens);
        let got: Vec<_> = match_rules(&inst.rules, &tokens, &lm)
            .into_iter()
            .map(|s| {
                (
                    s.char_start,
                    s.char_end,
                    s.token_start,
                    s.token_end,
                    s.label,
                    s.rule_index,
                )
            })
            .collect();
        let want = oracle_spans(&inst.lexicon, &inst.rules, &inst.text);
        if got != want {
            failures.push(format!("seed {seed}: text {:?}", inst.text));
        }
        checked += 1;
    }
    assert_eq!(checked, 1000);
    report(
        2,
        "matcher equals brute force on 1000 triples",
        &failures,
        start.elapsed(),
        Some(Duration::from_secs(30)),
    );
}

#[test]
fn criterion_3_threshold_monotonicity() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let data = corpus();
    assert!(data.len() >= 200);
    let lexicon = parse_lexicon(demo_path("demo.lex")).unwrap();
    let rules = parse_rules(demo_path("demo.rules")).unwrap();

    let predict = |t: usize| {
        let config = RuleClassifierConfig::new(t).unwrap();
        let mut preds = PredictionSet::new();
        for ex in &data {
            preds
                .insert(
                    ex.id.clone(),
                    classify_rule_based(&rules, &lexicon, &ex.text, &config).label,
                    None,
                )
                .unwrap();
        }
        preds
    };
    let sets: Vec<PredictionSet> = (1..=5).map(predict).collect();
    let informative = |p: &PredictionSet| -> HashSet<String> {
        data.iter()
            .filter(|ex| p.label(&ex.id) == Some(Label::Informative))
            .map(|ex| ex.id.clone())
            .collect()
    };
    for t in 1..=4 {
        let (lo, hi) = (&sets[t - 1], &sets[t]);
        let extra: Vec<String> = informative(hi).difference(&informative(lo)).cloned().collect();
        if !extra.is_empty() {
            failures.push(format!(
                "t={}: {} ids informative only at the higher threshold",
                t + 1,
                extra.len()
            ));
        }
        let (r_lo, r_hi) = (recall(&data, lo), recall(&data, hi));
        if r_hi > r_lo {
            failures.push(format!("recall rose from {r_lo:.4} at t={t} to {r_hi:.4}"));
        }
    }
    report(3, "threshold monotonicity", &failures, start.elapsed(), None);
}

#[test]
fn criterion_4_precedence_truth_table() {
    use Label::{Informative as I, Uninformative as U};
    let start = Instant::now();
    let mut failures = Vec::new();
    // (full, per_sentence, rule) -> expected
    let table = [
        ((I, I, I), I),
        ((I, I, U), I),
        ((I, U, I), I),
        ((I, U, U), U),
        ((U, I, I), U),
        ((U, I, U), U),
        ((U, U, I), U),
        ((U, U, U), U),
    ];
    for ((full, sent, rule), want) in table {
        let got = integrate_precedence(full, sent, rule);
        if got != want {
            failures.push(format!("({full}, {sent}, {rule}) -> {got}, want {want}"));
        }
    }

    let ids: Vec<String> = load_dataset(fixture("precedence/ids.tsv"), false).unwrap().ids();
    let expected_ids: HashSet<String> = ids.iter().cloned().collect();
    let load = |name: &str| load_predictions(fixture(&format!("precedence/{name}.tsv")), &expected_ids).unwrap();
    let streams = [load("full"), load("per_sentence"), load("rules")];
    let expected = load("expected");
    let merged = integrate_dataset(IntegrationStrategy::Precedence, &streams, &ids).unwrap();
    for (row, id) in ids.iter().enumerate() {
        let inputs = (streams[0].label(id), streams[1].label(id), streams[2].label(id));
        let fixture_row = (inputs, expected.label(id));
        if fixture_row
            != (
                (Some(table[row].0 .0), Some(table[row].0 .1), Some(table[row].0 .2)),
                Some(table[row].1),
            )
        {
            failures.push(format!("fixture row {id} differs from the table"));
        }
        if merged.label(id) != expected.label(id) {
            failures.push(format!("fixture row {id}: got {:?}", merged.label(id)));
        }
    }
    report(4, "precedence truth table", &failures, start.elapsed(), None);
}

#[test]
fn criterion_5_metrics() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let m = metrics_positive(&ConfusionCounts {
        tp: 3,
        fp: 1,
        fn_: 2,
        tn: 0,
    });
    let shown = format!("{:.4} {:.4} {:.4}", m.precision, m.recall, m.f1);
    if shown != "0.7500 0.6000 0.6667" {
        failures.push(format!("fixture gives {shown}"));
    }

    let zero = metrics_positive(&ConfusionCounts::default());
    let no_pred = metrics_positive(&ConfusionCounts {
        tp: 0,
        fp: 0,
        fn_: 4,
        tn: 2,
    });
    let no_gold = metrics_positive(&ConfusionCounts {
        tp: 0,
        fp: 3,
        fn_: 0,
        tn: 2,
    });
    if zero
        != (Metrics {
            precision: 0.0,
            recall: 0.0,
            f1: 0.0,
        })
        || no_pred.precision != 0.0
        || no_pred.f1 != 0.0
        || no_gold.recall != 0.0
        || no_gold.f1 != 0.0
    {
        failures.push("zero-denominator conventions".into());
    }

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..1000 {
        let c = ConfusionCounts {
            tp: rng.random_range(0..100),
            fp: rng.random_range(0..100),
            fn_: rng.random_range(0..100),
            tn: rng.random_range(0..100),
        };
        let m = metrics_positive(&c);
        let (tp, fp, fn_) = (c.tp as f64, c.fp as f64, c.fn_ as f64);
        let p = if c.tp + c.fp == 0 { 0.0 } else { tp / (tp + fp) };
        let r = if c.tp + c.fn_ == 0 { 0.0 } else { tp / (tp + fn_) };
        let direct = if c.tp == 0 {
            0.0
        } else {
            2.0 * tp / (2.0 * tp + fp + fn_)
        };
        if (m.precision - p).abs() > 1e-12 || (m.recall - r).abs() > 1e-12 || (m.f1 - direct).abs() > 1e-12 {
            failures.push(format!("{c:?}: {m:?} vs f1 {direct}"));
        }
    }
    report(5, "metric correctness", &failures, start.elapsed(), None);
}

#[test]
fn criterion_6_cross_validation() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for case in 0..500 {
        let n = rng.random_range(2..80);
        let mut labels: Vec<Label> = (0..n).map(|_| Label::from_bool(rng.random_bool(0.4))).collect();
        labels[0] = Label::Informative;
        labels[1] = Label::Uninformative;
        labels.shuffle(&mut rng);
        let data = Dataset::new(
            labels
                .iter()
                .enumerate()
                .map(|(i, &l)| Example::new(format!("e{i}"), "t", Some(l)))
                .collect(),
        )
        .unwrap();
        let k = rng.random_range(2..=n.min(10));
        let seed = rng.random();
        let folds = kfold_split(&data, k, seed).unwrap();
        let total_pos = labels.iter().filter(|l| l.is_informative()).count() as f64;

        let mut seen = HashSet::new();
        for fold in &folds {
            for id in &fold.test {
                if !seen.insert(id.clone()) {
                    failures.push(format!("case {case}: {id} in two test folds"));
                }
            }
            let test: HashSet<&String> = fold.test.iter().collect();
            if fold.train.iter().any(|id| test.contains(id)) || fold.train.len() + fold.test.len() != n {
                failures.push(format!("case {case}: train/test overlap or gap"));
            }
            let pos = data
                .subset(&fold.test)
                .iter()
                .filter(|e| e.gold == Some(Label::Informative))
                .count() as f64;
            if (pos - total_pos / k as f64).abs() >= 1.0 {
                failures.push(format!(
                    "case {case}: fold has {pos} positives, expected about {}",
                    total_pos / k as f64
                ));
            }
        }
        if seen.len() != n {
            failures.push(format!("case {case}: {} of {n} ids tested", seen.len()));
        }
    }

    let bin = env!("CARGO_BIN_EXE_tweetrules");
    let run = || {
        Command::new(bin)
            .args(["crossval", "--mode", "nb-sentence", "--k", "5", "--seed", "11", "--in"])
            .arg(demo_path("corpus.tsv"))
            .output()
            .unwrap()
    };
    let (a, b) = (run(), run());
    if !a.status.success() || a.stdout != b.stdout || a.stdout.is_empty() {
        failures.push("crossval output differs between identical runs".into());
    }

    let (mean, std) = mean_and_sample_std(&[0.8, 0.9, 1.0, 0.9, 0.8]);
    let report_text = CvReport::from_folds(
        [0.8, 0.9, 1.0, 0.9, 0.8]
            .iter()
            .map(|&f1| Metrics {
                precision: f1,
                recall: f1,
                f1,
            })
            .collect(),
    )
    .to_kv("fixture", 5, 0);
    if format!("{mean:.4} {std:.4}") != "0.8800 0.0837"
        || !report_text.contains("mean_f1=0.8800\n")
        || !report_text.contains("std_f1=0.0837\n")
    {
        failures.push(format!("fold fixture gives mean {mean:.4} std {std:.4}"));
    }
    report(6, "cross-validation protocol", &failures, start.elapsed(), None);
}

#[test]
fn criterion_7_per_sentence_aggregation() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let data = corpus();
    let model = train_nb(&data).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1000 {
        let text = random_tweet(&mut rng);
        let (label, sentences) = model.predict_per_sentence(&text);
        let or = Label::from_bool(sentences.iter().any(|(_, l)| l.is_informative()));
        if label != or {
            failures.push(format!("{text:?}: {label} but sentence OR is {or}"));
        }
        let single: String = text.chars().filter(|c| !matches!(c, '.' | '!' | '?' | '\n')).collect();
        if split_sentences(&single).len() == 1 && model.predict_per_sentence(&single).0 != model.predict_full(&single).0
        {
            failures.push(format!("single sentence {single:?} disagrees with full-text mode"));
        }
    }

    let full = cross_val_predict(&data, 5, 7, |train| {
        let m = train_nb(train)?;
        Ok(move |t: &str| m.predict_full(t).0)
    })
    .unwrap();
    let sent = cross_val_predict(&data, 5, 7, |train| {
        let m = train_nb(train)?;
        Ok(move |t: &str| m.predict_per_sentence(t).0)
    })
    .unwrap();
    let (r_full, r_sent) = (recall(&data, &full), recall(&data, &sent));
    println!("    out-of-fold recall: full {r_full:.4}, per-sentence {r_sent:.4}");
    if r_sent < r_full {
        failures.push(format!("per-sentence recall {r_sent:.4} < full {r_full:.4}"));
    }
    report(7, "per-sentence aggregation", &failures, start.elapsed(), None);
}

#[test]
fn criterion_8_end_to_end_golden() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let bin = env!("CARGO_BIN_EXE_tweetrules");
    let dir = tempfile::tempdir().unwrap();
    let out = |name: &str| dir.path().join(name);
    let s = |p: &Path| p.to_str().unwrap().to_string();
    let (lex, rules, corpus, heldout) = (
        demo_path("demo.lex"),
        demo_path("demo.rules"),
        demo_path("corpus.tsv"),
        demo_path("heldout.tsv"),
    );

    let steps: Vec<Vec<String>> = vec![
        vec![
            "classify",
            "--mode",
            "rule",
            "--lexicon",
            &s(&lex),
            "--rules",
            &s(&rules),
            "--threshold",
            "1",
        ]
        .into_iter()
        .map(String::from)
        .chain(["--in".into(), s(&heldout), "--out".into(), s(&out("rule.tsv"))])
        .collect(),
        [
            "classify",
            "--mode",
            "nb-full",
            "--train",
            &s(&corpus),
            "--in",
            &s(&heldout),
            "--out",
            &s(&out("nb_full.tsv")),
        ]
        .map(String::from)
        .to_vec(),
        [
            "classify",
            "--mode",
            "nb-sentence",
            "--train",
            &s(&corpus),
            "--in",
            &s(&heldout),
            "--out",
            &s(&out("nb_sentence.tsv")),
        ]
        .map(String::from)
        .to_vec(),
        [
            "integrate",
            "--strategy",
            "precedence",
            "--full",
            &s(&out("nb_full.tsv")),
            "--per-sentence",
            &s(&out("nb_sentence.tsv")),
            "--rules",
            &s(&out("rule.tsv")),
            "--ids",
            &s(&heldout),
            "--out",
            &s(&out("integrated.tsv")),
        ]
        .map(String::from)
        .to_vec(),
    ];
    for args in &steps {
        let o = Command::new(bin).args(args).output().unwrap();
        if !o.status.success() {
            failures.push(format!(
                "{} exited {:?}: {}",
                args[0],
                o.status.code(),
                String::from_utf8_lossy(&o.stderr)
            ));
        }
    }
    let eval = Command::new(bin)
        .args(["evaluate", "--gold", &s(&heldout), "--pred", &s(&out("integrated.tsv"))])
        .output()
        .unwrap();
    fs::write(out("metrics.txt"), &eval.stdout).unwrap();

    for name in [
        "rule.tsv",
        "nb_full.tsv",
        "nb_sentence.tsv",
        "integrated.tsv",
        "metrics.txt",
    ] {
        let golden = fs::read(demo_path(&format!("golden/{name}"))).unwrap();
        if fs::read(out(name)).unwrap_or_default() != golden {
            failures.push(format!("{name} differs from the committed golden file"));
        }
    }
    report(
        8,
        "end-to-end golden run",
        &failures,
        start.elapsed(),
        Some(Duration::from_secs(10)),
    );
}
