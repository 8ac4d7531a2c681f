//! Regenerates `tests/data/cut_corpus.jsonl`: each line is a proof ending in
//! a cut whose two premises were proved cut-free.
//!
//!     cargo run --example cut_corpus > crates/core/tests/data/cut_corpus.jsonl

use nacill::calculus::{check_proof, proof_to_json, Base, CutPolicy, LogicConfig, Proof, RuleId};
use nacill::prover::{prove, ProverOptions};
use nacill::syntax::{format_sequent, parse_formula, parse_sequent, Language, Sequent, Structure};

/// (logic, rules, left premise `X => A`, right premise `Y[A] => B`, A).
const CUTS: &[(&str, &str, &str, &str, &str)] = &[
    ("fnl", "", "(p,p\\q) => q", "(q,q\\r) => r", "q"),
    ("fnl", "", "p /\\ q => p", "(p,p\\r) => r", "p"),
    ("fnl", "", "p => p \\/ q", "p \\/ q => q \\/ p", "p \\/ q"),
    ("fnl", "", "(p,q) => p*q", "(p*q,r) => (p*q)*r", "p*q"),
    ("fnl", "", "eps => 1", "(1,p) => p", "1"),
    ("fnl", "", "p => (p*q)/q", "((p*q)/q,q) => p*q", "(p*q)/q"),
    ("fnl", "e", "(p,q) => q*p", "(q*p,r) => r*(q*p)", "q*p"),
    ("fnl", "e", "(p,p\\q) => q", "(r,q) => q*r", "q"),
    ("fnl", "w", "(p,q) => p", "(p,p\\r) => r", "p"),
    ("fnl", "c", "p => p*p", "(p*p,(p*p)\\q) => q", "p*p"),
    ("fnl", "e,c,w", "(p,q) => q*q", "(q*q,r) => r", "q*q"),
    ("nacill", "", "!p => !p*!p", "(!p*!p,(!p*!p)\\q) => q", "!p*!p"),
    ("nacill", "", "!p => p", "(p,p\\q) => q", "p"),
    ("nacill", "", "!(p /\\ q) => !p", "!p => p", "!p"),
    ("nacill", "", "!p => !!p", "(!!p,q) => q*!p", "!!p"),
    ("nacill", "", "(!p,q) => q*!p", "(q*!p,(q*!p)\\r) => r", "q*!p"),
    ("nacill", "", "eps => !1", "(!1,p) => p", "!1"),
    ("nacill", "", "(!(p\\q),!p) => !q", "!q => q", "!q"),
    ("nacill", "e", "(p,q) => q*p", "(q*p,r) => (q*p)*r", "q*p"),
    ("nacill", "c", "p => p*p", "(p*p,!q) => p*p", "p*p"),
    ("nacill", "w", "(p,q) => p", "(!r,p) => p", "p"),
    ("nacill", "e,c", "p => p*p", "(r,p*p) => (p*p)*r", "p*p"),
    ("nacill", "e,w", "(p,q) => q", "(q,!r) => !r*q", "q"),
    ("nacill", "c,w", "(p,p) => p", "(p,p\\q) => q", "p"),
    ("nacill", "e,c,w", "(q,p) => p*q", "(p*q,p*q) => p*q", "p*q"),
];

fn main() {
    let lang = Language::FULL;
    let opts = ProverOptions::with_depth(16);
    for &(logic, rules, left, right, cut) in CUTS {
        let cfg = LogicConfig::new(logic.parse::<Base>().unwrap()).with_structural(rules.parse().unwrap());
        let (l, r) = (parse_sequent(left, &lang).unwrap(), parse_sequent(right, &lang).unwrap());
        let a = parse_formula(cut, &lang).unwrap();
        let pl = prove(&l, &cfg, &opts).unwrap().unwrap_or_else(|| panic!("left premise {left} unprovable"));
        let pr = prove(&r, &cfg, &opts).unwrap().unwrap_or_else(|| panic!("right premise {right} unprovable"));
        let (u, _) = r
            .antecedent
            .contexts_of()
            .into_iter()
            .find(|(_, y)| *y == Structure::leaf(a.clone()))
            .unwrap_or_else(|| panic!("{cut} is not a leaf of {right}"));
        let concl = Sequent { antecedent: u.plug(l.antecedent.clone()), ..r.clone() };
        let p = Proof { conclusion: concl, rule: RuleId::Cut, premises: vec![pl, pr], position: Some(u), aux: Some(a) };
        check_proof(&p, &cfg.clone().with_cut(CutPolicy::Unrestricted), &[])
            .unwrap_or_else(|e| panic!("{}: {e}", format_sequent(&p.conclusion)));
        let proof: serde_json::Value = serde_json::from_str(&proof_to_json(&p)).unwrap();
        println!("{}", serde_json::json!({ "logic": logic, "rules": rules, "proof": proof }));
    }
}
