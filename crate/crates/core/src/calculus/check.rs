use thiserror::Error;

use crate::syntax::{BinOp, Constant, Context, Formula, Sequent, Structure};

use super::config::{CutPolicy, LogicConfig};
use super::proof::Proof;
use super::rules::RuleId;

/// A rejected proof node. `path` lists premise indices from the root, e.g.
/// `root.1.0`.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("at {path}: {reason}")]
pub struct ProofError {
    pub path: String,
    pub reason: String,
}

pub fn check_proof(p: &Proof, cfg: &LogicConfig, hyps: &[Sequent]) -> Result<(), ProofError> {
    fn go(p: &Proof, cfg: &LogicConfig, hyps: &[Sequent], path: &mut String) -> Result<(), ProofError> {
        let premises = p.premise_conclusions();
        check_step(p.rule, &p.conclusion, p.position.as_ref(), p.aux.as_ref(), &premises, cfg, hyps)
            .map_err(|reason| ProofError { path: path.clone(), reason })?;
        for (i, q) in p.premises.iter().enumerate() {
            let len = path.len();
            path.push_str(&format!(".{i}"));
            go(q, cfg, hyps, path)?;
            path.truncate(len);
        }
        Ok(())
    }
    go(p, cfg, hyps, &mut "root".to_string())
}

/// Validates one inference: `premises / conclusion` by `rule` at `position`.
pub fn check_step(
    rule: RuleId,
    conclusion: &Sequent,
    position: Option<&Context>,
    aux: Option<&Formula>,
    premises: &[Sequent],
    cfg: &LogicConfig,
    hyps: &[Sequent],
) -> Result<(), String> {
    enabled(rule, cfg, hyps.len())?;
    let lang = cfg.language();
    if !lang.admits_sequent(conclusion) {
        return Err(format!("{conclusion} is outside the language of the logic"));
    }
    if premises.len() != rule.arity() {
        return Err(format!("{rule} takes {} premises, found {}", rule.arity(), premises.len()));
    }
    if let Some(u) = position {
        if !context_is_normal(u) {
            return Err("position is not a unit-normal context".into());
        }
    }
    let expect_position = matches!(rule, RuleId::Cut | RuleId::BotL) || takes_principal_context(rule);
    if expect_position && position.is_none() {
        return Err(format!("{rule} needs a position"));
    }
    if !expect_position && rule != RuleId::FusR && position.is_some() {
        return Err(format!("{rule} takes no position"));
    }
    let s = Step { concl: conclusion, x: &conclusion.antecedent, c: conclusion.succedent.as_ref(), premises };
    match rule {
        RuleId::Id => {
            let Structure::Leaf(a) = s.x else { return Err("Id needs a single formula on the left".into()) };
            expect(s.c == Some(a), "Id needs a => a")?;
            aux_is(aux, a)
        }
        RuleId::OneR => {
            no_aux(aux)?;
            expect(s.x.is_unit() && s.c == Some(&Formula::one()), "OneR concludes eps => 1")
        }
        RuleId::ZeroL => {
            no_aux(aux)?;
            expect(*s.x == Structure::leaf(Formula::zero()) && s.c.is_none(), "ZeroL concludes 0 =>")
        }
        RuleId::TopR => {
            no_aux(aux)?;
            expect(s.c == Some(&Formula::top()), "TopR concludes x => top")
        }
        RuleId::BotL => {
            no_aux(aux)?;
            let y = s.principal(position)?;
            expect(y == Structure::leaf(Formula::bot()), "BotL needs bot at the position")
        }
        RuleId::Dn1a | RuleId::Dn1b | RuleId::Dn2a | RuleId::Dn2b | RuleId::ConA | RuleId::ConB | RuleId::CycA
        | RuleId::CycB => classical_axiom(rule, &s, aux),
        RuleId::Hyp(i) => {
            no_aux(aux)?;
            expect(&hyps[i] == conclusion, "conclusion differs from the hypothesis")
        }
        RuleId::Cut => {
            let Some(a) = aux else { return Err("Cut needs its cut formula in aux".into()) };
            if !lang.admits_formula(a) {
                return Err(format!("cut formula {a} is outside the language"));
            }
            let u = position.unwrap();
            let x = u.split(s.x).ok_or("position does not fit the conclusion")?;
            s.premise(0, &x, Some(a))?;
            s.premise(1, &u.plug(Structure::leaf(a.clone())), s.c)
        }
        RuleId::FusR => {
            no_aux(aux)?;
            let Some(Formula::Bin(BinOp::Fus, a, b)) = s.c else { return Err("FusR needs a*b on the right".into()) };
            let (l, r) = (&premises[0].antecedent, &premises[1].antecedent);
            expect(Structure::pair(l.clone(), r.clone()) == *s.x, "premise antecedents do not compose to the conclusion")?;
            expect(premises[0].succedent.as_ref() == Some(a), "left premise must prove the left factor")?;
            expect(premises[1].succedent.as_ref() == Some(b), "right premise must prove the right factor")?;
            let tag = match (l.is_unit(), r.is_unit()) {
                (true, false) => Some(Context::PairL(Box::new(Context::Hole), r.clone())),
                (false, true) => Some(Context::PairR(l.clone(), Box::new(Context::Hole))),
                _ => None,
            };
            expect(position == tag.as_ref(), "FusR position does not name the empty side")
        }
        RuleId::BslR | RuleId::SlR => {
            no_aux(aux)?;
            let (op, want) = if rule == RuleId::BslR { (BinOp::Lres, "a\\b") } else { (BinOp::Rres, "b/a") };
            let Some(Formula::Bin(o, l, r)) = s.c else { return Err(format!("{rule} needs {want} on the right")) };
            expect(*o == op, &format!("{rule} needs {want} on the right"))?;
            if op == BinOp::Lres {
                s.premise(0, &Structure::pair(Structure::leaf((**l).clone()), s.x.clone()), Some(r))
            } else {
                s.premise(0, &Structure::pair(s.x.clone(), Structure::leaf((**r).clone())), Some(l))
            }
        }
        RuleId::AndR => {
            no_aux(aux)?;
            let Some(Formula::Bin(BinOp::And, a, b)) = s.c else { return Err("AndR needs a /\\ b on the right".into()) };
            s.premise(0, s.x, Some(a))?;
            s.premise(1, s.x, Some(b))
        }
        RuleId::OrR1 | RuleId::OrR2 => {
            no_aux(aux)?;
            let Some(Formula::Bin(BinOp::Or, a, b)) = s.c else { return Err(format!("{rule} needs a \\/ b on the right")) };
            s.premise(0, s.x, Some(if rule == RuleId::OrR1 { a } else { b }))
        }
        RuleId::BangR => {
            no_aux(aux)?;
            let Some(Formula::Bang(a)) = s.c else { return Err("BangR needs !a on the right".into()) };
            expect(s.x.is_bang_structure(), "BangR needs a bang-structure antecedent")?;
            s.premise(0, s.x, Some(a))
        }
        RuleId::ZeroR => {
            no_aux(aux)?;
            expect(s.c == Some(&Formula::zero()), "ZeroR concludes x => 0")?;
            s.premise(0, s.x, None)
        }
        _ => {
            no_aux(aux)?;
            let u = position.unwrap();
            let y = s.principal(Some(u))?;
            left_or_structural(rule, &s, u, &y)
        }
    }
}

fn enabled(rule: RuleId, cfg: &LogicConfig, n_hyps: usize) -> Result<(), String> {
    use RuleId::*;
    let on = match rule {
        Cut => cfg.cut_policy != CutPolicy::Forbidden,
        BangL | BangR | BangW | BangC | BangEFwd | BangEBwd | BangAFwd | BangABwd | BangAsFwd | BangAsBwd => {
            cfg.has_bang()
        }
        E => cfg.structural.e,
        C => cfg.structural.c,
        W => cfg.structural.w,
        AFwd | ABwd => cfg.structural.a,
        ZeroL | ZeroR => cfg.zero_rules(),
        TopR => cfg.constants.top,
        BotL => cfg.constants.bot,
        Dn1a | Dn1b | Dn2a | Dn2b | ConA | ConB => cfg.base.is_classical(),
        CycA | CycB => cfg.base.is_cyclic(),
        Hyp(i) => i < n_hyps,
        _ => true,
    };
    if on {
        Ok(())
    } else {
        Err(format!("{rule} is not a rule of the configured logic"))
    }
}

/// Rules whose position is the context of a sub-structure of the
/// conclusion's antecedent.
fn takes_principal_context(rule: RuleId) -> bool {
    use RuleId::*;
    matches!(
        rule,
        OneL | FusL
            | BslL
            | SlL
            | AndL1
            | AndL2
            | OrL
            | BangL
            | BangW
            | BangC
            | BangEFwd
            | BangEBwd
            | BangAFwd
            | BangABwd
            | BangAsFwd
            | BangAsBwd
            | E
            | C
            | W
            | AFwd
            | ABwd
    )
}

/// No `Unit` among the context's side structures.
fn context_is_normal(u: &Context) -> bool {
    match u {
        Context::Hole => true,
        Context::PairL(c, s) | Context::PairR(s, c) => !s.is_unit() && s.is_unit_normal() && context_is_normal(c),
    }
}

struct Step<'a> {
    concl: &'a Sequent,
    x: &'a Structure,
    c: Option<&'a Formula>,
    premises: &'a [Sequent],
}

impl Step<'_> {
    /// The non-empty sub-structure of the antecedent at `u`.
    fn principal(&self, u: Option<&Context>) -> Result<Structure, String> {
        let u = u.ok_or("missing position")?;
        match u.split(self.x) {
            Some(y) if !y.is_unit() => Ok(y),
            _ => Err(format!("position does not select a sub-structure of {}", self.concl.antecedent)),
        }
    }

    fn premise(&self, i: usize, x: &Structure, c: Option<&Formula>) -> Result<(), String> {
        let want = Sequent { antecedent: x.clone(), succedent: c.cloned() };
        if self.premises[i] == want {
            Ok(())
        } else {
            Err(format!("premise {i} should be {want}, found {}", self.premises[i]))
        }
    }

    fn premise_at(&self, i: usize, u: &Context, y: Structure) -> Result<(), String> {
        self.premise(i, &u.plug(y), self.c)
    }
}

fn left_or_structural(rule: RuleId, s: &Step<'_>, u: &Context, y: &Structure) -> Result<(), String> {
    use RuleId::*;
    let leaf = |f: &Formula| Structure::leaf(f.clone());
    let wrong = || Err(format!("{rule} does not apply to {y}"));
    match rule {
        OneL => match y {
            Structure::Leaf(Formula::Const(Constant::One)) => s.premise_at(0, u, Structure::Unit),
            _ => wrong(),
        },
        FusL => match y {
            Structure::Leaf(Formula::Bin(BinOp::Fus, a, b)) => s.premise_at(0, u, Structure::pair(leaf(a), leaf(b))),
            _ => wrong(),
        },
        AndL1 | AndL2 => match y {
            Structure::Leaf(Formula::Bin(BinOp::And, a, b)) => {
                s.premise_at(0, u, leaf(if rule == AndL1 { a } else { b }))
            }
            _ => wrong(),
        },
        OrL => match y {
            Structure::Leaf(Formula::Bin(BinOp::Or, a, b)) => {
                s.premise_at(0, u, leaf(a))?;
                s.premise_at(1, u, leaf(b))
            }
            _ => wrong(),
        },
        BangL => match y {
            Structure::Leaf(Formula::Bang(a)) => s.premise_at(0, u, leaf(a)),
            _ => wrong(),
        },
        BslL => {
            let (x, f) = match y {
                Structure::Leaf(f) => (Structure::Unit, f),
                Structure::Pair(x, r) => match &**r {
                    Structure::Leaf(f) => ((**x).clone(), f),
                    _ => return wrong(),
                },
                Structure::Unit => return wrong(),
            };
            let Formula::Bin(BinOp::Lres, a, b) = f else { return wrong() };
            s.premise(0, &x, Some(a))?;
            s.premise_at(1, u, leaf(b))
        }
        SlL => {
            let (f, x) = match y {
                Structure::Leaf(f) => (f, Structure::Unit),
                Structure::Pair(l, x) => match &**l {
                    Structure::Leaf(f) => (f, (**x).clone()),
                    _ => return wrong(),
                },
                Structure::Unit => return wrong(),
            };
            let Formula::Bin(BinOp::Rres, b, a) = f else { return wrong() };
            s.premise(0, &x, Some(a))?;
            s.premise_at(1, u, leaf(b))
        }
        BangW | W => {
            if rule == BangW && !y.is_bang_structure() {
                return Err(format!("{y} is not a bang-structure"));
            }
            s.premise_at(0, u, Structure::Unit)
        }
        BangC | C => {
            if rule == BangC && !y.is_bang_structure() {
                return Err(format!("{y} is not a bang-structure"));
            }
            s.premise_at(0, u, Structure::pair(y.clone(), y.clone()))
        }
        E | BangEFwd | BangEBwd => {
            let Structure::Pair(l, r) = y else { return wrong() };
            let banged = match rule {
                BangEFwd => l.is_bang_structure(),
                BangEBwd => r.is_bang_structure(),
                _ => true,
            };
            if !banged {
                return Err(format!("{rule} needs a bang-structure in {y}"));
            }
            s.premise_at(0, u, Structure::pair((**r).clone(), (**l).clone()))
        }
        ABwd | BangABwd | BangAsBwd => {
            // conclusion x ∘ (y ∘ z), premise (x ∘ y) ∘ z
            let Structure::Pair(x, yz) = y else { return wrong() };
            let Structure::Pair(m, z) = &**yz else { return wrong() };
            let banged = match rule {
                BangABwd => x.is_bang_structure(),
                BangAsBwd => z.is_bang_structure(),
                _ => true,
            };
            if !banged {
                return Err(format!("{rule} needs a bang-structure in {y}"));
            }
            let upper = Structure::pair(Structure::pair((**x).clone(), (**m).clone()), (**z).clone());
            s.premise_at(0, u, upper)
        }
        AFwd | BangAFwd | BangAsFwd => {
            // conclusion (x ∘ y) ∘ z, premise x ∘ (y ∘ z)
            let Structure::Pair(xy, z) = y else { return wrong() };
            let Structure::Pair(x, m) = &**xy else { return wrong() };
            let banged = match rule {
                BangAFwd => x.is_bang_structure(),
                BangAsFwd => z.is_bang_structure(),
                _ => true,
            };
            if !banged {
                return Err(format!("{rule} needs a bang-structure in {y}"));
            }
            let lower = Structure::pair((**x).clone(), Structure::pair((**m).clone(), (**z).clone()));
            s.premise_at(0, u, lower)
        }
        _ => unreachable!("{rule} handled by check_step"),
    }
}

fn classical_axiom(rule: RuleId, s: &Step<'_>, aux: Option<&Formula>) -> Result<(), String> {
    use RuleId::*;
    let (Structure::Leaf(l), Some(r)) = (s.x, s.c) else {
        return Err(format!("{rule} concludes a sequent between two formulas"));
    };
    let zero = Formula::zero;
    let tilde = |a: &Formula| Formula::lres(a.clone(), zero());
    let minus = |a: &Formula| Formula::rres(zero(), a.clone());
    // (metavariable, expected left, expected right)
    let inst: Option<(Option<Formula>, Formula, Formula)> = match rule {
        Dn1a => Some((Some(r.clone()), tilde(&minus(r)), r.clone())),
        Dn1b => Some((Some(l.clone()), l.clone(), tilde(&minus(l)))),
        Dn2a => Some((Some(r.clone()), minus(&tilde(r)), r.clone())),
        Dn2b => Some((Some(l.clone()), l.clone(), minus(&tilde(l)))),
        ConA | ConB => {
            let side = if rule == ConA { l } else { r };
            match side {
                Formula::Bin(BinOp::Rres, na, b) => match &**na {
                    Formula::Bin(BinOp::Lres, a, z) if **z == zero() => {
                        let lhs = Formula::rres(tilde(a), (**b).clone());
                        let rhs = Formula::lres((**a).clone(), minus(b));
                        Some(if rule == ConA { (None, lhs, rhs) } else { (None, rhs, lhs) })
                    }
                    _ => None,
                },
                _ => None,
            }
        }
        CycA | CycB => {
            let a = match l {
                Formula::Bin(BinOp::Lres, a, z) if rule == CycA && **z == zero() => Some((**a).clone()),
                Formula::Bin(BinOp::Rres, z, a) if rule == CycB && **z == zero() => Some((**a).clone()),
                _ => None,
            };
            a.map(|a| {
                if rule == CycA {
                    (Some(a.clone()), tilde(&a), minus(&a))
                } else {
                    (Some(a.clone()), minus(&a), tilde(&a))
                }
            })
        }
        _ => unreachable!(),
    };
    let Some((meta, el, er)) = inst else {
        return Err(format!("{} is not an instance of {rule}", s.concl));
    };
    expect(*l == el && *r == er, &format!("{} is not an instance of {rule}", s.concl))?;
    match (aux, meta) {
        (None, _) => Ok(()),
        (Some(a), Some(m)) if *a == m => Ok(()),
        (Some(a), _) => Err(format!("aux {a} does not instantiate {rule}")),
    }
}

fn expect(cond: bool, msg: &str) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.to_string())
    }
}

fn no_aux(aux: Option<&Formula>) -> Result<(), String> {
    expect(aux.is_none(), "unexpected aux formula")
}

fn aux_is(aux: Option<&Formula>, a: &Formula) -> Result<(), String> {
    match aux {
        None => Ok(()),
        Some(f) => expect(f == a, "aux does not match the axiom instance"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::config::Base;
    use crate::syntax::{parse_sequent, Language};

    fn seq(s: &str) -> Sequent {
        parse_sequent(s, &Language::FULL).unwrap()
    }

    fn node(rule: RuleId, s: &str, premises: Vec<Proof>) -> Proof {
        Proof { conclusion: seq(s), rule, premises, position: None, aux: None }
    }

    #[test]
    fn identity_leaf() {
        let p = node(RuleId::Id, "p => p", vec![]);
        assert!(check_proof(&p, &LogicConfig::new(Base::Fnl), &[]).is_ok());
        let bad = node(RuleId::Id, "p => q", vec![]);
        assert!(check_proof(&bad, &LogicConfig::new(Base::Fnl), &[]).is_err());
    }

    #[test]
    fn bang_right_needs_bang_structure() {
        let p = node(RuleId::BangR, "p => !p", vec![node(RuleId::Id, "p => p", vec![])]);
        let err = check_proof(&p, &LogicConfig::new(Base::Nacill), &[]).unwrap_err();
        assert_eq!(err.path, "root");
        assert!(err.reason.contains("bang-structure"), "{err}");
    }

    #[test]
    fn bang_right_allows_empty_antecedent() {
        let p = node(RuleId::BangR, "eps => !1", vec![node(RuleId::OneR, "eps => 1", vec![])]);
        assert!(check_proof(&p, &LogicConfig::new(Base::Nacill), &[]).is_ok());
    }

    #[test]
    fn error_path_points_at_the_bad_node() {
        let p = node(
            RuleId::AndR,
            "p => p /\\ p",
            vec![node(RuleId::Id, "p => p", vec![]), node(RuleId::OneR, "p => p", vec![])],
        );
        let err = check_proof(&p, &LogicConfig::new(Base::Fnl), &[]).unwrap_err();
        assert_eq!(err.path, "root.1");
    }

    #[test]
    fn disabled_rules_are_rejected() {
        let p = node(RuleId::E, "(q,p) => r", vec![]);
        let err = check_step(p.rule, &p.conclusion, Some(&Context::Hole), None, &[seq("(p,q) => r")], &LogicConfig::new(Base::Fnl), &[]);
        assert!(err.unwrap_err().contains("not a rule"));
    }

    #[test]
    fn cut_rejected_when_forbidden_accepted_otherwise() {
        let concl = seq("p => r");
        let prem = [seq("p => q"), seq("q => r")];
        let q = Formula::var("q");
        let hyps = [seq("p => q"), seq("q => r")];
        let fnl = LogicConfig::new(Base::Fnl);
        assert!(check_step(RuleId::Cut, &concl, Some(&Context::Hole), Some(&q), &prem, &fnl, &hyps).is_err());
        let free = fnl.with_cut(CutPolicy::AnalyticOverSet(vec![]));
        assert!(check_step(RuleId::Cut, &concl, Some(&Context::Hole), Some(&q), &prem, &free, &hyps).is_ok());
    }

    #[test]
    fn classical_axioms() {
        let cfg = LogicConfig::new(Base::NaccllMinus);
        for (rule, s) in [
            (RuleId::Dn1a, "~-p => p"),
            (RuleId::Dn1b, "p => ~-p"),
            (RuleId::Dn2a, "-~p => p"),
            (RuleId::Dn2b, "p => -~p"),
            (RuleId::ConA, "(~p)/q => p\\(-q)"),
            (RuleId::ConB, "p\\(-q) => (~p)/q"),
        ] {
            assert!(check_step(rule, &seq(s), None, None, &[], &cfg, &[]).is_ok(), "{rule} {s}");
        }
        assert!(check_step(RuleId::Dn1a, &seq("-~p => p"), None, None, &[], &cfg, &[]).is_err());
        assert!(check_step(RuleId::CycA, &seq("~p => -p"), None, None, &[], &cfg, &[]).is_err());
        let cyc = LogicConfig::new(Base::Naccll);
        assert!(check_step(RuleId::CycA, &seq("~p => -p"), None, None, &[], &cyc, &[]).is_ok());
        assert!(check_step(RuleId::CycB, &seq("-p => ~p"), None, None, &[], &cyc, &[]).is_ok());
    }
}
