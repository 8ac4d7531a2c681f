//! Translations from structures and sequents to formulas, and the reduction
//! of finite consequence to plain provability.
//!
//! A hypothesis `s = x => a` becomes the `!`-formula `τ(s) = !(ρ(x)\a)`
//! (or `τ*(s) = !(ρ(x)\σ(a))` in the classical systems). Hypotheses
//! `s1..sn` are folded right-nested, `τ(s1) ∘ (τ(s2) ∘ (… ∘ τ(sn)))`, and
//! paired to the right of the goal's antecedent.

use std::path::Path;

use thiserror::Error;

use crate::syntax::{parse_sequent, Formula, Language, ParseError, Sequent, Structure};

#[derive(Debug, Error)]
pub enum EncodingError {
    #[error("the empty succedent of {0} needs the classical encoding")]
    EmptySuccedent(String),
    #[error("line {line}: {source}")]
    Parse { line: usize, source: ParseError },
    #[error("cannot read hypothesis file: {0}")]
    Io(#[from] std::io::Error),
}

pub fn rho(x: &Structure) -> Formula {
    match x {
        Structure::Unit => Formula::one(),
        Structure::Leaf(f) => f.clone(),
        Structure::Pair(l, r) => Formula::fus(rho(l), rho(r)),
    }
}

pub fn sigma(a: Option<&Formula>) -> Formula {
    a.cloned().unwrap_or_else(Formula::zero)
}

pub fn tau(s: &Sequent) -> Result<Formula, EncodingError> {
    match &s.succedent {
        Some(a) => Ok(Formula::bang(Formula::lres(rho(&s.antecedent), a.clone()))),
        None => Err(EncodingError::EmptySuccedent(s.to_string())),
    }
}

pub fn tau_star(s: &Sequent) -> Formula {
    Formula::bang(Formula::lres(rho(&s.antecedent), sigma(s.succedent.as_ref())))
}

/// `x ∘ (τ(s1) ∘ (… ∘ τ(sn))) => a`. An empty hypothesis list returns the
/// goal unchanged.
pub fn encode_consequence(
    hyps: &[Sequent],
    goal: &Sequent,
    classical: bool,
) -> Result<Sequent, EncodingError> {
    let mut encoded = Vec::with_capacity(hyps.len());
    for h in hyps {
        encoded.push(if classical { tau_star(h) } else { tau(h)? });
    }
    let Some(fold) = encoded
        .into_iter()
        .rev()
        .map(Structure::leaf)
        .reduce(|acc, t| Structure::Pair(t.into(), acc.into()))
    else {
        return Ok(goal.clone());
    };
    Ok(goal.with_antecedent(Structure::pair(goal.antecedent.clone(), fold)))
}

/// One sequent per line; `#` starts a comment line; blank lines are skipped.
pub fn parse_hypotheses(text: &str, lang: &Language) -> Result<Vec<Sequent>, EncodingError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let s = parse_sequent(trimmed, lang).map_err(|source| EncodingError::Parse { line: i + 1, source })?;
        out.push(s);
    }
    Ok(out)
}

pub fn read_hypotheses(path: &Path, lang: &Language) -> Result<Vec<Sequent>, EncodingError> {
    parse_hypotheses(&std::fs::read_to_string(path)?, lang)
}
