use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

/// Nullary connectives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Constant {
    One,
    Zero,
    Top,
    Bot,
}

/// Binary connectives. `Bin(op, l, r)` always renders as `l op r`, so
/// `Bin(Lres, a, b)` is `a\b` and `Bin(Rres, b, a)` is `b/a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BinOp {
    And,
    Or,
    Fus,
    Lres,
    Rres,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::And => " /\\ ",
            BinOp::Or => " \\/ ",
            BinOp::Fus => "*",
            BinOp::Lres => "\\",
            BinOp::Rres => "/",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Var(Arc<str>),
    Const(Constant),
    Bang(Arc<Formula>),
    Bin(BinOp, Arc<Formula>, Arc<Formula>),
}

impl Formula {
    pub fn var(name: &str) -> Formula {
        Formula::Var(Arc::from(name))
    }

    pub fn one() -> Formula {
        Formula::Const(Constant::One)
    }

    pub fn zero() -> Formula {
        Formula::Const(Constant::Zero)
    }

    pub fn top() -> Formula {
        Formula::Const(Constant::Top)
    }

    pub fn bot() -> Formula {
        Formula::Const(Constant::Bot)
    }

    pub fn bang(a: Formula) -> Formula {
        Formula::Bang(Arc::new(a))
    }

    pub fn bin(op: BinOp, l: Formula, r: Formula) -> Formula {
        Formula::Bin(op, Arc::new(l), Arc::new(r))
    }

    pub fn fus(a: Formula, b: Formula) -> Formula {
        Formula::bin(BinOp::Fus, a, b)
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::bin(BinOp::And, a, b)
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::bin(BinOp::Or, a, b)
    }

    /// `a\b`
    pub fn lres(a: Formula, b: Formula) -> Formula {
        Formula::bin(BinOp::Lres, a, b)
    }

    /// `b/a`
    pub fn rres(b: Formula, a: Formula) -> Formula {
        Formula::bin(BinOp::Rres, b, a)
    }

    /// `~a`, i.e. `a\0`.
    pub fn neg_r(a: Formula) -> Formula {
        Formula::lres(a, Formula::zero())
    }

    /// `-a`, i.e. `0/a`.
    pub fn neg_l(a: Formula) -> Formula {
        Formula::rres(Formula::zero(), a)
    }

    pub fn is_bang(&self) -> bool {
        matches!(self, Formula::Bang(_))
    }

    pub fn as_neg_r(&self) -> Option<&Formula> {
        match self {
            Formula::Bin(BinOp::Lres, a, z) if **z == Formula::zero() => Some(a),
            _ => None,
        }
    }

    pub fn as_neg_l(&self) -> Option<&Formula> {
        match self {
            Formula::Bin(BinOp::Rres, z, a) if **z == Formula::zero() => Some(a),
            _ => None,
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Var(_) | Formula::Const(_) => 0,
            Formula::Bang(a) => 1 + a.depth(),
            Formula::Bin(_, l, r) => 1 + l.depth().max(r.depth()),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Var(_) | Formula::Const(_) => 1,
            Formula::Bang(a) => 1 + a.size(),
            Formula::Bin(_, l, r) => 1 + l.size() + r.size(),
        }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<Arc<str>>) {
        match self {
            Formula::Var(v) => {
                out.insert(v.clone());
            }
            Formula::Const(_) => {}
            Formula::Bang(a) => a.collect_vars(out),
            Formula::Bin(_, l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
        }
    }

    pub fn collect_subformulas(&self, out: &mut BTreeSet<Formula>) {
        if !out.insert(self.clone()) {
            return;
        }
        match self {
            Formula::Var(_) | Formula::Const(_) => {}
            Formula::Bang(a) => a.collect_subformulas(out),
            Formula::Bin(_, l, r) => {
                l.collect_subformulas(out);
                r.collect_subformulas(out);
            }
        }
    }

    /// Visits every node of the formula tree.
    pub fn any(&self, pred: &dyn Fn(&Formula) -> bool) -> bool {
        if pred(self) {
            return true;
        }
        match self {
            Formula::Var(_) | Formula::Const(_) => false,
            Formula::Bang(a) => a.any(pred),
            Formula::Bin(_, l, r) => l.any(pred) || r.any(pred),
        }
    }

    pub fn mentions_const(&self, c: Constant) -> bool {
        self.any(&|f| *f == Formula::Const(c))
    }

    pub fn mentions_bang(&self) -> bool {
        self.any(&Formula::is_bang)
    }
}

fn needs_parens(f: &Formula) -> bool {
    matches!(f, Formula::Bin(..))
}

struct Operand<'a>(&'a Formula);

impl fmt::Display for Operand<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if needs_parens(self.0) {
            write!(f, "({})", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Var(v) => f.write_str(v),
            Formula::Const(Constant::One) => f.write_str("1"),
            Formula::Const(Constant::Zero) => f.write_str("0"),
            Formula::Const(Constant::Top) => f.write_str("top"),
            Formula::Const(Constant::Bot) => f.write_str("bot"),
            Formula::Bang(a) => write!(f, "!{}", Operand(a)),
            Formula::Bin(op, l, r) => write!(f, "{}{}{}", Operand(l), op.symbol(), Operand(r)),
        }
    }
}
