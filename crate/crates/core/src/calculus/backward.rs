use crate::syntax::{BinOp, Constant, Context, Formula, Sequent, Structure};

use super::config::{analytic_cut_set, CutPolicy, LogicConfig};
use super::proof::RuleInstance;
use super::rules::RuleId;

/// All rule instances whose conclusion is exactly `goal`.
///
/// Cut candidates come from the configured policy; `Unrestricted` and
/// `Analytic` fall back to the analytic set of `goal` itself.
pub fn rule_instances_backward(goal: &Sequent, cfg: &LogicConfig, hyps: &[Sequent]) -> Vec<RuleInstance> {
    let cut_set = match &cfg.cut_policy {
        CutPolicy::Forbidden => None,
        CutPolicy::AnalyticOverSet(set) => Some(set.clone()),
        CutPolicy::Unrestricted | CutPolicy::Analytic => Some(analytic_cut_set(goal, hyps)),
    };
    let mut e = Enum { goal, cfg, out: Vec::new() };
    e.axioms(hyps);
    e.right_rules();
    e.left_rules();
    e.structural_rules();
    if let Some(set) = cut_set {
        e.cuts(&set);
    }
    e.out
}

struct Enum<'a> {
    goal: &'a Sequent,
    cfg: &'a LogicConfig,
    out: Vec<RuleInstance>,
}

fn leaf(f: &Formula) -> Structure {
    Structure::leaf(f.clone())
}

impl Enum<'_> {
    fn push(&mut self, rule: RuleId, position: Option<Context>, aux: Option<Formula>, premises: Vec<Sequent>) {
        self.out.push(RuleInstance { rule, position, aux, premises });
    }

    fn with_ant(&self, x: Structure) -> Sequent {
        self.goal.with_antecedent(x)
    }

    fn axioms(&mut self, hyps: &[Sequent]) {
        let x = &self.goal.antecedent;
        let c = self.goal.succedent.as_ref();
        let cfg = self.cfg;
        if let (Structure::Leaf(a), Some(c)) = (x, c) {
            if a == c {
                self.push(RuleId::Id, None, Some(a.clone()), vec![]);
            }
        }
        if x.is_unit() && c == Some(&Formula::one()) {
            self.push(RuleId::OneR, None, None, vec![]);
        }
        if cfg.zero_rules() && c.is_none() && *x == leaf(&Formula::zero()) {
            self.push(RuleId::ZeroL, None, None, vec![]);
        }
        if cfg.constants.top && c == Some(&Formula::top()) {
            self.push(RuleId::TopR, None, None, vec![]);
        }
        if cfg.constants.bot {
            for (u, y) in x.contexts_of() {
                if y == leaf(&Formula::bot()) {
                    self.push(RuleId::BotL, Some(u), None, vec![]);
                }
            }
        }
        if cfg.base.is_classical() {
            if let (Structure::Leaf(l), Some(r)) = (x, c) {
                for (rule, a) in classical_axiom_matches(l, r, cfg.base.is_cyclic()) {
                    self.push(rule, None, a, vec![]);
                }
            }
        }
        for (i, h) in hyps.iter().enumerate() {
            if h == self.goal {
                self.push(RuleId::Hyp(i), None, None, vec![]);
            }
        }
    }

    fn right_rules(&mut self) {
        let x = self.goal.antecedent.clone();
        let Some(c) = self.goal.succedent.clone() else {
            return;
        };
        match &c {
            Formula::Bin(BinOp::And, a, b) => {
                self.push(
                    RuleId::AndR,
                    None,
                    None,
                    vec![Sequent::new(x.clone(), (**a).clone()), Sequent::new(x.clone(), (**b).clone())],
                );
            }
            Formula::Bin(BinOp::Lres, a, b) => {
                let p = Sequent::new(Structure::pair(leaf(a), x.clone()), (**b).clone());
                self.push(RuleId::BslR, None, None, vec![p]);
            }
            Formula::Bin(BinOp::Rres, b, a) => {
                let p = Sequent::new(Structure::pair(x.clone(), leaf(a)), (**b).clone());
                self.push(RuleId::SlR, None, None, vec![p]);
            }
            Formula::Bin(BinOp::Or, a, b) => {
                self.push(RuleId::OrR1, None, None, vec![Sequent::new(x.clone(), (**a).clone())]);
                self.push(RuleId::OrR2, None, None, vec![Sequent::new(x.clone(), (**b).clone())]);
            }
            Formula::Bin(BinOp::Fus, a, b) => {
                for (pos, l, r) in fusion_splits(&x) {
                    self.push(
                        RuleId::FusR,
                        pos,
                        None,
                        vec![Sequent::new(l, (**a).clone()), Sequent::new(r, (**b).clone())],
                    );
                }
            }
            Formula::Bang(a) if self.cfg.has_bang() && x.is_bang_structure() => {
                self.push(RuleId::BangR, None, None, vec![Sequent::new(x.clone(), (**a).clone())]);
            }
            Formula::Const(Constant::Zero) if self.cfg.zero_rules() => {
                self.push(RuleId::ZeroR, None, None, vec![Sequent::empty_succedent(x.clone())]);
            }
            _ => {}
        }
    }

    fn left_rules(&mut self) {
        let bang = self.cfg.has_bang();
        for (u, y) in self.goal.antecedent.contexts_of() {
            match &y {
                Structure::Leaf(f) => {
                    self.left_leaf(&u, f, bang);
                }
                Structure::Pair(l, r) => {
                    // x ∘ (a\b) and (b/a) ∘ x with a non-empty x
                    if let Structure::Leaf(Formula::Bin(BinOp::Lres, a, b)) = &**r {
                        self.res_left(RuleId::BslL, &u, (**l).clone(), a, b);
                    }
                    if let Structure::Leaf(Formula::Bin(BinOp::Rres, b, a)) = &**l {
                        self.res_left(RuleId::SlL, &u, (**r).clone(), a, b);
                    }
                }
                Structure::Unit => {}
            }
        }
    }

    fn left_leaf(&mut self, u: &Context, f: &Formula, bang: bool) {
        let prem = |s: &Self, y: Structure| s.with_ant(u.plug(y));
        match f {
            Formula::Const(Constant::One) => {
                let p = prem(self, Structure::Unit);
                self.push(RuleId::OneL, Some(u.clone()), None, vec![p]);
            }
            Formula::Bin(BinOp::Fus, a, b) => {
                let p = prem(self, Structure::pair(leaf(a), leaf(b)));
                self.push(RuleId::FusL, Some(u.clone()), None, vec![p]);
            }
            Formula::Bin(BinOp::And, a, b) => {
                let p1 = prem(self, leaf(a));
                let p2 = prem(self, leaf(b));
                self.push(RuleId::AndL1, Some(u.clone()), None, vec![p1]);
                self.push(RuleId::AndL2, Some(u.clone()), None, vec![p2]);
            }
            Formula::Bin(BinOp::Or, a, b) => {
                let p1 = prem(self, leaf(a));
                let p2 = prem(self, leaf(b));
                self.push(RuleId::OrL, Some(u.clone()), None, vec![p1, p2]);
            }
            Formula::Bin(BinOp::Lres, a, b) => self.res_left(RuleId::BslL, u, Structure::Unit, a, b),
            Formula::Bin(BinOp::Rres, b, a) => self.res_left(RuleId::SlL, u, Structure::Unit, a, b),
            Formula::Bang(a) if bang => {
                let p = prem(self, leaf(a));
                self.push(RuleId::BangL, Some(u.clone()), None, vec![p]);
            }
            _ => {}
        }
    }

    fn res_left(&mut self, rule: RuleId, u: &Context, x: Structure, a: &Formula, b: &Formula) {
        let p1 = Sequent::new(x, a.clone());
        let p2 = self.with_ant(u.plug(leaf(b)));
        self.push(rule, Some(u.clone()), None, vec![p1, p2]);
    }

    fn structural_rules(&mut self) {
        let bang = self.cfg.has_bang();
        let s = self.cfg.structural;
        if !bang && s.is_empty() {
            return;
        }
        for (u, y) in self.goal.antecedent.contexts_of() {
            if y.is_unit() {
                continue;
            }
            let pos = Some(u.clone());
            let goal = self.goal;
            let prem = |y: Structure| vec![goal.with_antecedent(u.plug(y))];
            let is_k = y.is_bang_structure();
            if bang && is_k {
                let w = prem(Structure::Unit);
                let c = prem(Structure::pair(y.clone(), y.clone()));
                self.push(RuleId::BangW, pos.clone(), None, w);
                self.push(RuleId::BangC, pos.clone(), None, c);
            }
            if s.w {
                let w = prem(Structure::Unit);
                self.push(RuleId::W, pos.clone(), None, w);
            }
            if s.c {
                let c = prem(Structure::pair(y.clone(), y.clone()));
                self.push(RuleId::C, pos.clone(), None, c);
            }
            let Structure::Pair(l, r) = &y else {
                continue;
            };
            let (l, r) = ((**l).clone(), (**r).clone());
            if bang && r.is_bang_structure() {
                let p = prem(Structure::pair(r.clone(), l.clone()));
                self.push(RuleId::BangEBwd, pos.clone(), None, p);
            }
            if bang && l.is_bang_structure() {
                let p = prem(Structure::pair(r.clone(), l.clone()));
                self.push(RuleId::BangEFwd, pos.clone(), None, p);
            }
            if s.e {
                let p = prem(Structure::pair(r.clone(), l.clone()));
                self.push(RuleId::E, pos.clone(), None, p);
            }
            // x ∘ (y ∘ z) ⟶ (x ∘ y) ∘ z
            if let Structure::Pair(ry, rz) = &r {
                let upper = Structure::pair(Structure::pair(l.clone(), (**ry).clone()), (**rz).clone());
                if bang && l.is_bang_structure() {
                    self.push(RuleId::BangABwd, pos.clone(), None, prem(upper.clone()));
                }
                if bang && rz.is_bang_structure() {
                    self.push(RuleId::BangAsBwd, pos.clone(), None, prem(upper.clone()));
                }
                if s.a {
                    self.push(RuleId::ABwd, pos.clone(), None, prem(upper));
                }
            }
            // (x ∘ y) ∘ z ⟶ x ∘ (y ∘ z)
            if let Structure::Pair(lx, ly) = &l {
                let lower = Structure::pair((**lx).clone(), Structure::pair((**ly).clone(), r.clone()));
                if bang && lx.is_bang_structure() {
                    self.push(RuleId::BangAFwd, pos.clone(), None, prem(lower.clone()));
                }
                if bang && r.is_bang_structure() {
                    self.push(RuleId::BangAsFwd, pos.clone(), None, prem(lower.clone()));
                }
                if s.a {
                    self.push(RuleId::AFwd, pos.clone(), None, prem(lower));
                }
            }
        }
    }

    fn cuts(&mut self, set: &[Formula]) {
        let x = &self.goal.antecedent;
        let lang = self.cfg.language();
        let mut sites: Vec<(Context, Structure)> = x.contexts_of();
        if !x.is_unit() {
            sites.extend(x.unit_insertion_points().into_iter().map(|u| (u, Structure::Unit)));
        }
        for a in set.iter().filter(|a| lang.admits_formula(a)) {
            for (u, y) in &sites {
                let p1 = Sequent::new(y.clone(), a.clone());
                let p2 = self.with_ant(u.plug(leaf(a)));
                self.push(RuleId::Cut, Some(u.clone()), Some(a.clone()), vec![p1, p2]);
            }
        }
    }
}

/// Every way to read `x` as `l ∘ r`, with the position tag that names it:
/// `None` for the split at the root pair (or `ε ∘ ε`), `L^`/`R^` sites for
/// an empty left/right half.
pub(crate) fn fusion_splits(x: &Structure) -> Vec<(Option<Context>, Structure, Structure)> {
    if x.is_unit() {
        return vec![(None, Structure::Unit, Structure::Unit)];
    }
    let mut out = Vec::with_capacity(3);
    if let Structure::Pair(l, r) = x {
        out.push((None, (**l).clone(), (**r).clone()));
    }
    out.push((Some(Context::PairL(Box::new(Context::Hole), x.clone())), Structure::Unit, x.clone()));
    out.push((Some(Context::PairR(x.clone(), Box::new(Context::Hole))), x.clone(), Structure::Unit));
    out
}

/// Axiom schemes of the classical bases matched against `l => r`, with the
/// instantiated metavariable where there is one.
pub(crate) fn classical_axiom_matches(l: &Formula, r: &Formula, cyclic: bool) -> Vec<(RuleId, Option<Formula>)> {
    let mut out = Vec::new();
    // ~-a = (0/a)\0 and -~a = 0/(a\0)
    let dn1 = |f: &Formula| f.as_neg_r().and_then(Formula::as_neg_l).cloned();
    let dn2 = |f: &Formula| f.as_neg_l().and_then(Formula::as_neg_r).cloned();
    if dn1(l).as_ref() == Some(r) {
        out.push((RuleId::Dn1a, Some(r.clone())));
    }
    if dn1(r).as_ref() == Some(l) {
        out.push((RuleId::Dn1b, Some(l.clone())));
    }
    if dn2(l).as_ref() == Some(r) {
        out.push((RuleId::Dn2a, Some(r.clone())));
    }
    if dn2(r).as_ref() == Some(l) {
        out.push((RuleId::Dn2b, Some(l.clone())));
    }
    if con_match(l, r) {
        out.push((RuleId::ConA, None));
    }
    if con_match(r, l) {
        out.push((RuleId::ConB, None));
    }
    if cyclic {
        if let (Some(a), Some(b)) = (l.as_neg_r(), r.as_neg_l()) {
            if a == b {
                out.push((RuleId::CycA, Some(a.clone())));
            }
        }
        if let (Some(a), Some(b)) = (l.as_neg_l(), r.as_neg_r()) {
            if a == b {
                out.push((RuleId::CycB, Some(a.clone())));
            }
        }
    }
    out
}

/// `l = (a\0)/b` and `r = a\(0/b)`.
fn con_match(l: &Formula, r: &Formula) -> bool {
    let (Formula::Bin(BinOp::Rres, na, b1), Formula::Bin(BinOp::Lres, a2, nb)) = (l, r) else {
        return false;
    };
    match (na.as_neg_r(), nb.as_neg_l()) {
        (Some(a1), Some(b2)) => a1 == &**a2 && b2 == &**b1,
        _ => false,
    }
}
