//! Logic configurations, the rule table, backward rule enumeration and an
//! independent proof checker.

mod backward;
mod check;
mod config;
mod proof;
mod rules;
mod serial;

pub use backward::rule_instances_backward;
pub use check::{check_proof, check_step, ProofError};
pub use config::{analytic_cut_set, Base, ConfigError, Constants, CutPolicy, LogicConfig, Structural};
pub use proof::{Proof, RuleInstance};
pub use rules::RuleId;
pub use serial::{proof_from_json, proof_to_json, SerialError};

#[cfg(test)]
mod props {
    use proptest::prelude::*;

    use super::*;
    use crate::syntax::strategies;
    use crate::syntax::{Context, Formula, Sequent};

    fn configs() -> Vec<LogicConfig> {
        let all = Constants { zero: true, top: true, bot: true };
        let mut out = Vec::new();
        for base in Base::ALL {
            for s in ["", "e,c,w,a"] {
                out.push(LogicConfig::new(base).with_structural(s.parse().unwrap()).with_constants(all));
            }
        }
        out
    }

    fn cut_cfg(cfg: &LogicConfig, goal: &Sequent) -> LogicConfig {
        let mut set = analytic_cut_set(goal, &[]);
        set.truncate(3);
        cfg.clone().with_cut(CutPolicy::AnalyticOverSet(set))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(96))]

        #[test]
        fn enumerated_instances_check(goal in strategies::sequent(3), which in 0usize..12) {
            let cfg = configs()[which].clone();
            prop_assume!(cfg.language().admits_sequent(&goal));
            let cfg = cut_cfg(&cfg, &goal);
            for inst in rule_instances_backward(&goal, &cfg, &[]) {
                let r = check_step(inst.rule, &goal, inst.position.as_ref(), inst.aux.as_ref(), &inst.premises, &cfg, &[]);
                prop_assert!(r.is_ok(), "{} {:?}: {:?}", goal, inst, r);
            }
        }

        /// A checker-accepted step built from some enumerated instance of a
        /// neighbouring goal is enumerated for its own conclusion.
        #[test]
        fn checker_accepts_only_enumerated(goal in strategies::sequent(3), other in strategies::sequent(3), which in 0usize..12) {
            let cfg = configs()[which].clone();
            prop_assume!(cfg.language().admits_sequent(&goal) && cfg.language().admits_sequent(&other));
            let cfg = cut_cfg(&cfg, &goal);
            let CutPolicy::AnalyticOverSet(set) = &cfg.cut_policy else { unreachable!() };
            let insts = rule_instances_backward(&goal, &cfg, &[]);
            let donors = rule_instances_backward(&other, &cfg, &[]);
            for d in donors.iter().chain(insts.iter()) {
                if d.rule == RuleId::Cut && !set.contains(d.aux.as_ref().unwrap()) {
                    continue;
                }
                let positions: Vec<Option<Context>> = vec![d.position.clone(), None, Some(Context::Hole)];
                for pos in positions {
                    let ok = check_step(d.rule, &goal, pos.as_ref(), d.aux.as_ref(), &d.premises, &cfg, &[]).is_ok();
                    let listed = insts.iter().any(|i| i.rule == d.rule && i.position == pos && i.premises == d.premises
                        && i.aux == d.aux);
                    if ok {
                        prop_assert!(listed, "{} accepted but not enumerated: {:?} at {:?}", goal, d, pos);
                    }
                }
            }
        }

        #[test]
        fn double_line_directions_are_inverse(goal in strategies::sequent(4)) {
            let cfg = LogicConfig::new(Base::Naccll).with_structural("a".parse().unwrap())
                .with_constants(Constants { zero: true, top: true, bot: true });
            for inst in rule_instances_backward(&goal, &cfg, &[]) {
                let Some(back) = inst.rule.converse() else { continue };
                let premise = &inst.premises[0];
                let undo = rule_instances_backward(premise, &cfg, &[]);
                prop_assert!(
                    undo.iter().any(|j| j.rule == back && j.premises == vec![goal.clone()]),
                    "{} -{}-> {} has no {} step back", goal, inst.rule, premise, back
                );
            }
        }
    }

    #[test]
    fn formulas_are_send_and_sync() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<Formula>();
        assert_send_sync::<Proof>();
    }
}
