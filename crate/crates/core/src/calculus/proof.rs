use std::fmt;

use crate::syntax::{format_sequent, Context, Formula, Sequent};

use super::rules::RuleId;

/// One backward step: the rule, where it acts, and its premises in rule
/// order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RuleInstance {
    pub rule: RuleId,
    pub position: Option<Context>,
    pub aux: Option<Formula>,
    pub premises: Vec<Sequent>,
}

/// A derivation tree.
///
/// `position` is the context of the principal sub-structure in the
/// conclusion (for `FusR`, the side that is empty). `aux` carries the cut
/// formula or the metavariable of an axiom scheme.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Proof {
    pub conclusion: Sequent,
    pub rule: RuleId,
    pub premises: Vec<Proof>,
    pub position: Option<Context>,
    pub aux: Option<Formula>,
}

impl Proof {
    pub fn leaf(conclusion: Sequent, rule: RuleId) -> Proof {
        Proof { conclusion, rule, premises: Vec::new(), position: None, aux: None }
    }

    pub fn from_instance(conclusion: Sequent, inst: RuleInstance, premises: Vec<Proof>) -> Proof {
        Proof { conclusion, rule: inst.rule, premises, position: inst.position, aux: inst.aux }
    }

    /// Number of nodes on the longest root-to-leaf path.
    pub fn height(&self) -> usize {
        1 + self.premises.iter().map(Proof::height).max().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(Proof::size).sum::<usize>()
    }

    pub fn uses_cut(&self) -> bool {
        self.any_rule(&|r| r == RuleId::Cut)
    }

    pub fn any_rule(&self, pred: &dyn Fn(RuleId) -> bool) -> bool {
        pred(self.rule) || self.premises.iter().any(|p| p.any_rule(pred))
    }

    /// Every conclusion in the tree, root first.
    pub fn sequents(&self) -> Vec<&Sequent> {
        let mut out = vec![&self.conclusion];
        for p in &self.premises {
            out.extend(p.sequents());
        }
        out
    }

    pub fn premise_conclusions(&self) -> Vec<Sequent> {
        self.premises.iter().map(|p| p.conclusion.clone()).collect()
    }
}

impl Proof {
    fn write_tree(&self, f: &mut fmt::Formatter<'_>, indent: usize) -> fmt::Result {
        write!(f, "{:indent$}{}   [{}", "", format_sequent(&self.conclusion), self.rule)?;
        if let Some(a) = &self.aux {
            write!(f, " {a}")?;
        }
        writeln!(f, "]")?;
        self.premises.iter().try_for_each(|p| p.write_tree(f, indent + 2))
    }
}

/// One sequent per line, premises indented under their conclusion.
impl fmt::Display for Proof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_tree(f, 0)
    }
}
