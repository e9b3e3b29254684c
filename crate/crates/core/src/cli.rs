//! The `tweetrules` command line.
//!
//! Exit codes: 0 success, 1 internal error, 2 bad configuration, 3 bad input
//! file, 4 lint warnings.

use std::collections::HashSet;
use std::ffi::OsString;
use std::fmt;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::corpus::{load_dataset, write_predictions, Dataset, Label};
use crate::ensemble::{integrate_dataset, IntegrationStrategy};
use crate::error::Error;
use crate::eval::{cross_validate, error_sentence_stats, metrics_positive, score_predictions};
use crate::learned::{load_predictions, NbModel, PredictionSet};
use crate::lexicon::parse_lexicon;
use crate::lint::lint;
use crate::rules::{parse_rules, RuleClassifier, RuleClassifierConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_WARNINGS: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "tweetrules", version, about = "Rule-based tweet informativeness classifier")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Rule,
    NbFull,
    NbSentence,
}

impl Mode {
    fn name(self) -> &'static str {
        match self {
            Mode::Rule => "rule",
            Mode::NbFull => "nb-full",
            Mode::NbSentence => "nb-sentence",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Kv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Vote,
    And,
    Or,
    Precedence,
}

impl From<StrategyArg> for IntegrationStrategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Vote => IntegrationStrategy::MajorityVote,
            StrategyArg::And => IntegrationStrategy::And,
            StrategyArg::Or => IntegrationStrategy::Or,
            StrategyArg::Precedence => IntegrationStrategy::Precedence,
        }
    }
}

#[derive(Debug, Clone, clap::Args)]
pub struct SystemArgs {
    #[arg(long, value_enum, default_value = "rule")]
    pub mode: Mode,
    #[arg(long)]
    pub lexicon: Option<PathBuf>,
    #[arg(long)]
    pub rules: Option<PathBuf>,
    /// Minimum number of informative spans (rule mode).
    #[arg(long, default_value_t = 1)]
    pub threshold: usize,
    #[arg(long, default_value = RuleClassifierConfig::DEFAULT_TARGET)]
    pub target_label: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Label every example of a dataset and write a prediction file.
    Classify {
        #[command(flatten)]
        system: SystemArgs,
        /// Labeled training data (nb modes).
        #[arg(long)]
        train: Option<PathBuf>,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Score a prediction file against gold labels (Informative is positive).
    Evaluate {
        #[arg(long)]
        gold: PathBuf,
        #[arg(long)]
        pred: PathBuf,
        /// Also report mean sentence counts of wrong and correct predictions.
        #[arg(long)]
        sentence_stats: bool,
    },
    /// Stratified k-fold cross-validation on a labeled dataset.
    Crossval {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 5)]
        k: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: ReportFormat,
    },
    /// Combine prediction files.
    Integrate {
        #[arg(long, value_enum)]
        strategy: StrategyArg,
        /// Input stream for vote/and/or (repeat).
        #[arg(long = "stream")]
        streams: Vec<PathBuf>,
        /// Full-text model predictions (precedence).
        #[arg(long)]
        full: Option<PathBuf>,
        /// Per-sentence model predictions (precedence).
        #[arg(long)]
        per_sentence: Option<PathBuf>,
        /// Rule-based predictions (precedence).
        #[arg(long)]
        rules: Option<PathBuf>,
        /// Dataset whose ids (first column) define the output rows.
        #[arg(long)]
        ids: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check a lexicon and rule set for problems.
    Lint {
        #[arg(long)]
        lexicon: PathBuf,
        #[arg(long)]
        rules: PathBuf,
        #[arg(long, default_value = RuleClassifierConfig::DEFAULT_TARGET)]
        target_label: String,
    },
}

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Input(Error),
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Input(_) => EXIT_INPUT,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration: {m}"),
            CliError::Input(e) => write!(f, "input: {e}"),
            CliError::Internal(m) => write!(f, "internal: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_config_error() {
            CliError::Config(e.to_string())
        } else {
            CliError::Input(e)
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Internal(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

/// Parses `args` (including the program name) and runs the command, writing
/// reports to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = err.write_all(rendered.as_bytes());
            } else {
                let _ = out.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(command: Command, out: &mut dyn Write) -> CliResult<i32> {
    match command {
        Command::Classify {
            system,
            train,
            input,
            out: out_path,
        } => cmd_classify(&system, train.as_deref(), &input, &out_path),
        Command::Evaluate {
            gold,
            pred,
            sentence_stats,
        } => cmd_evaluate(&gold, &pred, sentence_stats, out),
        Command::Crossval {
            system,
            input,
            k,
            seed,
            format,
        } => cmd_crossval(&system, &input, k, seed, format, out),
        Command::Integrate {
            strategy,
            streams,
            full,
            per_sentence,
            rules,
            ids,
            out: out_path,
        } => cmd_integrate(
            strategy,
            &streams,
            [full.as_deref(), per_sentence.as_deref(), rules.as_deref()],
            &ids,
            &out_path,
        ),
        Command::Lint {
            lexicon,
            rules,
            target_label,
        } => cmd_lint(&lexicon, &rules, &target_label, out),
    }
}

type CmdResult = CliResult<i32>;

enum System {
    Rule(RuleClassifier),
    NbFull,
    NbSentence,
}

fn rule_config(system: &SystemArgs) -> CliResult<RuleClassifierConfig> {
    RuleClassifierConfig::with_target(system.threshold, system.target_label.clone())
        .map_err(|e| CliError::Config(e.to_string()))
}

fn build_system(system: &SystemArgs) -> CliResult<System> {
    let config = rule_config(system)?;
    match system.mode {
        Mode::Rule => {
            let lexicon_path = system
                .lexicon
                .as_deref()
                .ok_or_else(|| CliError::Config("rule mode needs --lexicon".into()))?;
            let rules_path = system
                .rules
                .as_deref()
                .ok_or_else(|| CliError::Config("rule mode needs --rules".into()))?;
            let lexicon = parse_lexicon(lexicon_path).map_err(CliError::Input)?;
            let rules = parse_rules(rules_path).map_err(CliError::Input)?;
            Ok(System::Rule(RuleClassifier::new(lexicon, rules, config)))
        }
        Mode::NbFull => Ok(System::NbFull),
        Mode::NbSentence => Ok(System::NbSentence),
    }
}

fn predict_nb(model: &NbModel, per_sentence: bool, text: &str) -> Label {
    if per_sentence {
        model.predict_per_sentence(text).0
    } else {
        model.predict_full(text).0
    }
}

fn train(data: &Dataset) -> CliResult<NbModel> {
    NbModel::train(data).map_err(CliError::Input)
}

fn cmd_classify(system: &SystemArgs, train_path: Option<&Path>, input: &Path, out_path: &Path) -> CmdResult {
    let system = build_system(system)?;
    let model = match system {
        System::Rule(_) => None,
        System::NbFull | System::NbSentence => {
            let path = train_path.ok_or_else(|| CliError::Config("nb modes need --train".into()))?;
            Some(train(&load_dataset(path, true).map_err(CliError::Input)?)?)
        }
    };
    let data = load_dataset(input, false).map_err(CliError::Input)?;
    let preds: Vec<(&str, Label)> = data
        .iter()
        .map(|ex| {
            let label = match (&system, &model) {
                (System::Rule(rc), _) => rc.classify(&ex.text),
                (System::NbFull, Some(m)) => predict_nb(m, false, &ex.text),
                (System::NbSentence, Some(m)) => predict_nb(m, true, &ex.text),
                _ => unreachable!("nb model is trained above"),
            };
            (ex.id.as_str(), label)
        })
        .collect();
    write_predictions(out_path, &preds).map_err(CliError::Input)?;
    Ok(EXIT_OK)
}

fn fmt_mean(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_string(), |v| format!("{v:.4}"))
}

fn cmd_evaluate(gold_path: &Path, pred_path: &Path, sentence_stats: bool, out: &mut dyn Write) -> CmdResult {
    let gold = load_dataset(gold_path, true).map_err(CliError::Input)?;
    let ids: HashSet<String> = gold.ids().into_iter().collect();
    let preds = load_predictions(pred_path, &ids).map_err(CliError::Input)?;
    let counts = score_predictions(&gold, &preds).map_err(CliError::Input)?;
    let m = metrics_positive(&counts);
    writeln!(
        out,
        "n={} tp={} fp={} fn={} tn={}",
        counts.total(),
        counts.tp,
        counts.fp,
        counts.fn_,
        counts.tn
    )?;
    writeln!(out, "P={:.4} R={:.4} F1={:.4}", m.precision, m.recall, m.f1)?;
    if sentence_stats {
        let s = error_sentence_stats(&gold, &preds).map_err(CliError::Input)?;
        writeln!(
            out,
            "mean_sentences_wrong={} mean_sentences_correct={}",
            fmt_mean(s.mean_sentences_wrong),
            fmt_mean(s.mean_sentences_correct)
        )?;
    }
    Ok(EXIT_OK)
}

fn cmd_crossval(
    system_args: &SystemArgs,
    input: &Path,
    k: usize,
    seed: u64,
    format: ReportFormat,
    out: &mut dyn Write,
) -> CmdResult {
    if k < 2 {
        return Err(CliError::Config(format!("--k must be at least 2, got {k}")));
    }
    let system = build_system(system_args)?;
    let data = load_dataset(input, true).map_err(CliError::Input)?;
    let report = match &system {
        System::Rule(rc) => cross_validate(&data, k, seed, |_| Ok(|t: &str| rc.classify(t)))?,
        System::NbFull | System::NbSentence => {
            let per_sentence = matches!(system, System::NbSentence);
            cross_validate(&data, k, seed, |train| {
                let model = NbModel::train(train)?;
                Ok(move |t: &str| predict_nb(&model, per_sentence, t))
            })?
        }
    };
    let name = system_args.mode.name();
    let text = match format {
        ReportFormat::Text => report.to_text(name, k, seed),
        ReportFormat::Kv => report.to_kv(name, k, seed),
    };
    out.write_all(text.as_bytes())?;
    Ok(EXIT_OK)
}

fn cmd_integrate(
    strategy: StrategyArg,
    streams: &[PathBuf],
    roles: [Option<&Path>; 3],
    ids_path: &Path,
    out_path: &Path,
) -> CmdResult {
    let paths: Vec<&Path> = if strategy == StrategyArg::Precedence {
        if !streams.is_empty() {
            return Err(CliError::Config(
                "precedence takes --full, --per-sentence and --rules, not --stream".into(),
            ));
        }
        let names = ["--full", "--per-sentence", "--rules"];
        roles
            .iter()
            .zip(names)
            .map(|(p, name)| p.ok_or_else(|| CliError::Config(format!("precedence needs {name}"))))
            .collect::<CliResult<_>>()?
    } else {
        if roles.iter().any(Option::is_some) {
            return Err(CliError::Config(
                "--full/--per-sentence/--rules are only for precedence".into(),
            ));
        }
        if streams.len() < 2 {
            return Err(CliError::Config(format!(
                "needs at least 2 --stream files, got {}",
                streams.len()
            )));
        }
        streams.iter().map(PathBuf::as_path).collect()
    };

    let ids = load_dataset(ids_path, false).map_err(CliError::Input)?.ids();
    let expected: HashSet<String> = ids.iter().cloned().collect();
    let sets = paths
        .iter()
        .map(|p| load_predictions(p, &expected).map_err(CliError::Input))
        .collect::<CliResult<Vec<PredictionSet>>>()?;
    let merged = integrate_dataset(strategy.into(), &sets, &ids)?;
    write_predictions(out_path, &merged.ordered(&ids)?).map_err(CliError::Input)?;
    Ok(EXIT_OK)
}

fn cmd_lint(lexicon_path: &Path, rules_path: &Path, target: &str, out: &mut dyn Write) -> CmdResult {
    let lexicon = parse_lexicon(lexicon_path).map_err(CliError::Input)?;
    let rules = parse_rules(rules_path).map_err(CliError::Input)?;
    let report = lint(&lexicon, &rules, target);
    for w in &report.warnings {
        writeln!(out, "warning: {w}")?;
    }
    writeln!(
        out,
        "{} entries, {} rules, {} warnings",
        report.entries,
        report.rules,
        report.warnings.len()
    )?;
    Ok(if report.is_clean() { EXIT_OK } else { EXIT_WARNINGS })
}
