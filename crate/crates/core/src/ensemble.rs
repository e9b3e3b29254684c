//! Combining the predictions of several systems.

use std::fmt;
use std::str::FromStr;

use crate::corpus::Label;
use crate::error::{Error, Result};
use crate::learned::PredictionSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntegrationStrategy {
    MajorityVote,
    And,
    Or,
    /// Three role-ordered streams: full-text model, per-sentence model,
    /// rule-based system.
    Precedence,
}

impl IntegrationStrategy {
    pub fn as_str(self) -> &'static str {
        match self {
            IntegrationStrategy::MajorityVote => "vote",
            IntegrationStrategy::And => "and",
            IntegrationStrategy::Or => "or",
            IntegrationStrategy::Precedence => "precedence",
        }
    }
}

impl fmt::Display for IntegrationStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for IntegrationStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "vote" | "majority" | "majority_vote" => Ok(IntegrationStrategy::MajorityVote),
            "and" => Ok(IntegrationStrategy::And),
            "or" => Ok(IntegrationStrategy::Or),
            "precedence" => Ok(IntegrationStrategy::Precedence),
            other => Err(Error::InvalidArgument(format!("unknown strategy `{other}`"))),
        }
    }
}

fn check_arity(preds: &[Label]) -> Result<()> {
    if preds.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "integration needs at least 2 predictions, got {}",
            preds.len()
        )));
    }
    Ok(())
}

/// Informative iff strictly more than half the inputs are; ties are
/// Uninformative.
pub fn integrate_vote(preds: &[Label]) -> Result<Label> {
    check_arity(preds)?;
    let yes = preds.iter().filter(|l| l.is_informative()).count();
    Ok(Label::from_bool(2 * yes > preds.len()))
}

pub fn integrate_and(preds: &[Label]) -> Result<Label> {
    check_arity(preds)?;
    Ok(Label::from_bool(preds.iter().all(|l| l.is_informative())))
}

pub fn integrate_or(preds: &[Label]) -> Result<Label> {
    check_arity(preds)?;
    Ok(Label::from_bool(preds.iter().any(|l| l.is_informative())))
}

/// When the full-text and per-sentence outputs agree, that label stands.
/// On conflict an Uninformative rule-based verdict wins; otherwise the
/// full-text model decides.
pub fn integrate_precedence(full: Label, per_sentence: Label, rule: Label) -> Label {
    if full == per_sentence || rule.is_informative() {
        full
    } else {
        Label::Uninformative
    }
}

/// Applies `strategy` per id. Streams must cover every id; precedence takes
/// exactly three streams in (full, per-sentence, rule-based) order.
pub fn integrate_dataset<S: AsRef<str>>(
    strategy: IntegrationStrategy,
    streams: &[PredictionSet],
    ids: &[S],
) -> Result<PredictionSet> {
    match strategy {
        IntegrationStrategy::Precedence if streams.len() != 3 => {
            return Err(Error::InvalidArgument(format!(
                "precedence needs exactly 3 streams (full, per-sentence, rules), got {}",
                streams.len()
            )))
        }
        _ if streams.len() < 2 => {
            return Err(Error::InvalidArgument(format!(
                "{strategy} needs at least 2 streams, got {}",
                streams.len()
            )))
        }
        _ => {}
    }

    let mut out = PredictionSet::new();
    let mut row = Vec::with_capacity(streams.len());
    for id in ids {
        let id = id.as_ref();
        row.clear();
        for stream in streams {
            row.push(stream.require(id)?);
        }
        let label = match strategy {
            IntegrationStrategy::MajorityVote => integrate_vote(&row)?,
            IntegrationStrategy::And => integrate_and(&row)?,
            IntegrationStrategy::Or => integrate_or(&row)?,
            IntegrationStrategy::Precedence => integrate_precedence(row[0], row[1], row[2]),
        };
        out.insert(id, label, None)?;
    }
    Ok(out)
}
