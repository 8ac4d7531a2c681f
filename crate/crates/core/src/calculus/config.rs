use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::encoding::{rho, sigma};
use crate::syntax::{Formula, Language, Sequent};

/// The base calculus before structural extensions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Base {
    Fnl,
    Nacill,
    FcnlMinus,
    Fcnl,
    NaccllMinus,
    Naccll,
}

impl Base {
    pub const ALL: [Base; 6] =
        [Base::Fnl, Base::Nacill, Base::FcnlMinus, Base::Fcnl, Base::NaccllMinus, Base::Naccll];

    pub fn id(self) -> &'static str {
        match self {
            Base::Fnl => "fnl",
            Base::Nacill => "nacill",
            Base::FcnlMinus => "fcnl-",
            Base::Fcnl => "fcnl",
            Base::NaccllMinus => "naccll-",
            Base::Naccll => "naccll",
        }
    }

    pub fn has_bang(self) -> bool {
        matches!(self, Base::Nacill | Base::NaccllMinus | Base::Naccll)
    }

    /// Involutive bases: 0-rules plus the DN1/DN2/CON axiom schemes.
    pub fn is_classical(self) -> bool {
        matches!(self, Base::FcnlMinus | Base::Fcnl | Base::NaccllMinus | Base::Naccll)
    }

    pub fn is_cyclic(self) -> bool {
        matches!(self, Base::Fcnl | Base::Naccll)
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("unknown logic id {0:?} (expected fnl, nacill, fcnl-, fcnl, naccll-, naccll)")]
    UnknownLogic(String),
    #[error("unknown structural rule {0:?} (expected e, c, w, a)")]
    UnknownRule(String),
}

impl FromStr for Base {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Base::ALL
            .into_iter()
            .find(|b| b.id() == s)
            .ok_or_else(|| ConfigError::UnknownLogic(s.to_string()))
    }
}

/// A subset of the structural rules exchange, contraction, weakening and
/// associativity.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Structural {
    pub e: bool,
    pub c: bool,
    pub w: bool,
    pub a: bool,
}

impl Structural {
    pub const NONE: Structural = Structural { e: false, c: false, w: false, a: false };

    /// All eight subsets of `{e, c, w}`.
    pub fn subsets_ecw() -> Vec<Structural> {
        (0..8u8)
            .map(|m| Structural { e: m & 1 != 0, c: m & 2 != 0, w: m & 4 != 0, a: false })
            .collect()
    }

    pub fn is_empty(&self) -> bool {
        *self == Structural::NONE
    }

    /// `self ⊆ other`
    pub fn is_subset(&self, other: &Structural) -> bool {
        (!self.e || other.e) && (!self.c || other.c) && (!self.w || other.w) && (!self.a || other.a)
    }
}

impl FromStr for Structural {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut out = Structural::NONE;
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            match part {
                "e" => out.e = true,
                "c" => out.c = true,
                "w" => out.w = true,
                "a" => out.a = true,
                other => return Err(ConfigError::UnknownRule(other.to_string())),
            }
        }
        Ok(out)
    }
}

impl fmt::Display for Structural {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = [(self.e, "e"), (self.c, "c"), (self.w, "w"), (self.a, "a")]
            .into_iter()
            .filter_map(|(on, n)| on.then_some(n))
            .collect();
        f.write_str(&names.join(","))
    }
}

/// Optional constants beyond `1`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Constants {
    pub zero: bool,
    pub top: bool,
    pub bot: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CutPolicy {
    Forbidden,
    /// Any cut formula is legal in a proof. Search draws candidates from the
    /// analytic set of the root goal.
    Unrestricted,
    /// Cut formulas are drawn from [`analytic_cut_set`] of the root goal and
    /// hypotheses.
    Analytic,
    AnalyticOverSet(Vec<Formula>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LogicConfig {
    pub base: Base,
    pub structural: Structural,
    pub constants: Constants,
    pub cut_policy: CutPolicy,
}

impl LogicConfig {
    pub fn new(base: Base) -> LogicConfig {
        LogicConfig {
            base,
            structural: Structural::NONE,
            constants: Constants { zero: base.is_classical(), top: false, bot: false },
            cut_policy: CutPolicy::Forbidden,
        }
    }

    pub fn with_structural(mut self, structural: Structural) -> LogicConfig {
        self.structural = structural;
        self
    }

    pub fn with_constants(mut self, constants: Constants) -> LogicConfig {
        self.constants = constants;
        self.constants.zero |= self.base.is_classical();
        self
    }

    pub fn with_cut(mut self, cut_policy: CutPolicy) -> LogicConfig {
        self.cut_policy = cut_policy;
        self
    }

    pub fn has_bang(&self) -> bool {
        self.base.has_bang()
    }

    /// The 0-rules `0 => eps` and `x => eps / x => 0`.
    pub fn zero_rules(&self) -> bool {
        self.constants.zero
    }

    pub fn language(&self) -> Language {
        Language {
            bang: self.has_bang(),
            zero: self.constants.zero,
            top: self.constants.top,
            bot: self.constants.bot,
        }
    }

    /// The explicit cut candidates for a search rooted at `goal`, or `None`
    /// when cut is forbidden.
    pub fn resolve_cut_set(&self, goal: &Sequent, hyps: &[Sequent]) -> Option<Vec<Formula>> {
        match &self.cut_policy {
            CutPolicy::Forbidden => None,
            CutPolicy::Unrestricted | CutPolicy::Analytic => Some(analytic_cut_set(goal, hyps)),
            CutPolicy::AnalyticOverSet(set) => Some(set.clone()),
        }
    }
}

/// Subformulas of the goal and hypotheses, plus `ρ(y)\σ(b)` for each
/// hypothesis `y => b`, in a fixed order: hypothesis-derived formulas first.
pub fn analytic_cut_set(goal: &Sequent, hyps: &[Sequent]) -> Vec<Formula> {
    let mut out: Vec<Formula> = Vec::new();
    let mut seen = BTreeSet::new();
    let mut push = |f: Formula, out: &mut Vec<Formula>| {
        if seen.insert(f.clone()) {
            out.push(f);
        }
    };
    for h in hyps {
        if let Some(b) = &h.succedent {
            push(b.clone(), &mut out);
        }
    }
    let mut subs = BTreeSet::new();
    for s in hyps.iter().chain(std::iter::once(goal)) {
        for f in s.formulas() {
            f.collect_subformulas(&mut subs);
        }
    }
    let mut subs: Vec<Formula> = subs.into_iter().collect();
    subs.sort_by_key(|f| (f.size(), f.clone()));
    for f in subs {
        push(f, &mut out);
    }
    for h in hyps {
        push(Formula::lres(rho(&h.antecedent), sigma(h.succedent.as_ref())), &mut out);
    }
    out
}
