use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::encoding::{rho, sigma};
use crate::syntax::{BinOp, Constant, Formula, Sequent};

use super::FiniteAlgebra;

/// Variable assignment into a carrier.
pub type Valuation = BTreeMap<Arc<str>, usize>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("variable {0} has no value")]
    Unbound(String),
    #[error("the algebra has no ! operation")]
    NoBang,
    #[error("the algebra has no 0 element")]
    NoZero,
}

pub fn eval(a: &FiniteAlgebra, f: &Valuation, e: &Formula) -> Result<usize, EvalError> {
    Ok(match e {
        Formula::Var(v) => *f.get(v).ok_or_else(|| EvalError::Unbound(v.to_string()))?,
        Formula::Const(Constant::One) => a.unit(),
        Formula::Const(Constant::Zero) => a.zero().ok_or(EvalError::NoZero)?,
        Formula::Const(Constant::Top) => a.top(),
        Formula::Const(Constant::Bot) => a.bottom(),
        Formula::Bang(x) => a.bang(eval(a, f, x)?).ok_or(EvalError::NoBang)?,
        Formula::Bin(op, l, r) => {
            let (x, y) = (eval(a, f, l)?, eval(a, f, r)?);
            match op {
                BinOp::And => a.meet(x, y),
                BinOp::Or => a.join(x, y),
                BinOp::Fus => a.mul(x, y),
                BinOp::Lres => a.lres(x, y),
                BinOp::Rres => a.rres(x, y),
            }
        }
    })
}

/// `f(ρ(x)) ≤ f(σ(a))`
fn holds(a: &FiniteAlgebra, f: &Valuation, s: &Sequent) -> Result<bool, EvalError> {
    Ok(a.leq(eval(a, f, &rho(&s.antecedent))?, eval(a, f, &sigma(s.succedent.as_ref()))?))
}

/// The lexicographically first valuation (earlier variables vary slowest)
/// that satisfies every hypothesis and falsifies `goal`.
pub fn counter_valuation(a: &FiniteAlgebra, hyps: &[Sequent], goal: &Sequent) -> Result<Option<Valuation>, EvalError> {
    let mut vars = goal.vars();
    for h in hyps {
        vars.extend(h.vars());
    }
    let vars: Vec<Arc<str>> = vars.into_iter().collect();
    let n = a.size();
    let mut digits = vec![0usize; vars.len()];
    loop {
        let f: Valuation = vars.iter().cloned().zip(digits.iter().copied()).collect();
        let mut premises = true;
        for h in hyps {
            if !holds(a, &f, h)? {
                premises = false;
                break;
            }
        }
        if premises && !holds(a, &f, goal)? {
            return Ok(Some(f));
        }
        let mut i = digits.len();
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < n {
                break;
            }
            digits[i] = 0;
        }
    }
}

/// Whether every valuation satisfying `hyps` satisfies `goal`.
pub fn validates(a: &FiniteAlgebra, hyps: &[Sequent], goal: &Sequent) -> Result<bool, EvalError> {
    Ok(counter_valuation(a, hyps, goal)?.is_none())
}
