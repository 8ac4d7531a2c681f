//! Proof documents as JSON trees.
//!
//! ```json
//! {"rule": "FusR", "sequent": "(p,q) => p*q", "position": null, "aux": null,
//!  "premises": [...]}
//! ```
//!
//! `position` is the path from the root of the conclusion's antecedent to the
//! hole (`L`/`R` steps, with a trailing `L^`/`R^` for a unit-insertion site).

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::syntax::{format_sequent, parse_formula, parse_sequent, Context, Language, ParseError};

use super::proof::Proof;

#[derive(Debug, Error)]
pub enum SerialError {
    #[error("malformed proof document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad sequent {text:?}: {source}")]
    Sequent { text: String, source: ParseError },
    #[error("bad aux formula {text:?}: {source}")]
    Aux { text: String, source: ParseError },
    #[error("{0}")]
    Rule(String),
    #[error("position {path:?} does not fit {sequent}")]
    Position { path: String, sequent: String },
}

#[derive(Serialize, Deserialize)]
struct Node {
    rule: String,
    sequent: String,
    position: Option<String>,
    aux: Option<String>,
    premises: Vec<Node>,
}

fn to_node(p: &Proof) -> Node {
    Node {
        rule: p.rule.to_string(),
        sequent: format_sequent(&p.conclusion),
        position: p.position.as_ref().map(|u| {
            u.to_path(&p.conclusion.antecedent)
                .expect("proof positions always fit their conclusion")
        }),
        aux: p.aux.as_ref().map(ToString::to_string),
        premises: p.premises.iter().map(to_node).collect(),
    }
}

fn from_node(n: Node, lang: &Language) -> Result<Proof, SerialError> {
    let conclusion = parse_sequent(&n.sequent, lang)
        .map_err(|source| SerialError::Sequent { text: n.sequent.clone(), source })?;
    let rule = n.rule.parse().map_err(SerialError::Rule)?;
    let position = match n.position {
        None => None,
        Some(path) => Some(Context::from_path(&path, &conclusion.antecedent).ok_or_else(|| {
            SerialError::Position { path: path.clone(), sequent: n.sequent.clone() }
        })?),
    };
    let aux = match n.aux {
        None => None,
        Some(text) => Some(parse_formula(&text, lang).map_err(|source| SerialError::Aux { text: text.clone(), source })?),
    };
    let premises = n.premises.into_iter().map(|q| from_node(q, lang)).collect::<Result<_, _>>()?;
    Ok(Proof { conclusion, rule, premises, position, aux })
}

pub fn proof_to_json(p: &Proof) -> String {
    serde_json::to_string_pretty(&to_node(p)).expect("proof nodes serialize")
}

pub fn proof_from_json(text: &str, lang: &Language) -> Result<Proof, SerialError> {
    from_node(serde_json::from_str(text)?, lang)
}
