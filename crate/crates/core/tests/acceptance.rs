//! End-to-end acceptance run. Prints one `PASS`/`FAIL` line per criterion
//! and exits non-zero if any criterion fails.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use nacill::algebra::{
    canonical_key, check_axioms, countermodel, enumerate_algebras, modal_meet_form, modal_monotone_form, validates,
    AlgebraCache, AlgebraClass, ClassKind, FiniteAlgebra, DEFAULT_BUDGET,
};
use nacill::calculus::{check_proof, proof_from_json, Base, CutPolicy, LogicConfig, Proof, RuleId, Structural};
use nacill::cli;
use nacill::frames::{
    check_gentzen_rules, check_nucleus_laws, check_quasi_embedding, frame_of_algebra, galois_algebra,
    verify_embedding, KMode, DEFAULT_CLOSED_SET_CAP,
};
use nacill::prover::{prove, prove_encoded, prove_from, ProverError, ProverOptions};
use nacill::syntax::{format_sequent, parse_sequent, Constant, Language, Sequent};

type Outcome = Result<String, String>;

/// A sequent some criterion proved, with the logic and hypotheses used.
struct Proved {
    cfg: LogicConfig,
    hyps: Vec<Sequent>,
    goal: Sequent,
}

#[derive(Default)]
struct Ledger {
    proved: Vec<Proved>,
}

impl Ledger {
    fn record(&mut self, cfg: &LogicConfig, hyps: &[Sequent], goal: &Sequent) {
        self.proved.push(Proved { cfg: cfg.clone(), hyps: hyps.to_vec(), goal: goal.clone() });
    }
}

fn seq(s: &str) -> Sequent {
    parse_sequent(s, &Language::FULL).unwrap_or_else(|e| panic!("{s}: {e}"))
}

fn cfg(logic: &str, rules: &str) -> LogicConfig {
    LogicConfig::new(logic.parse::<Base>().unwrap()).with_structural(rules.parse().unwrap())
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn cache() -> AlgebraCache {
    AlgebraCache::new(PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("acceptance-cache"))
}

fn cached(cls: &AlgebraClass, n: usize) -> Vec<FiniteAlgebra> {
    let e = cache().load_or_enumerate(cls, n, DEFAULT_BUDGET).expect("cache directory is writable");
    assert!(e.exhaustive, "{cls} at size {n} was not enumerated exhaustively");
    e.algebras
}

fn c1_modal_corpus(ledger: &mut Ledger) -> Outcome {
    let text = std::fs::read_to_string(data("modal_corpus.txt")).map_err(|e| e.to_string())?;
    let nacill = cfg("nacill", "");
    let opts = ProverOptions::with_depth(25);
    let mut slowest = Duration::ZERO;
    let mut count = 0;
    for line in text.lines().filter(|l| !l.trim().is_empty() && !l.starts_with('#')) {
        let goal = seq(line);
        let start = Instant::now();
        let p = prove(&goal, &nacill, &opts).map_err(|e| format!("{line}: {e}"))?;
        let took = start.elapsed();
        let p = p.ok_or_else(|| format!("{line}: no cut-free proof of height ≤ 25"))?;
        check_proof(&p, &nacill, &[]).map_err(|e| format!("{line}: {e}"))?;
        if took > Duration::from_secs(5) {
            return Err(format!("{line}: took {took:?}"));
        }
        slowest = slowest.max(took);
        ledger.record(&nacill, &[], &goal);
        count += 1;
    }
    Ok(format!("{count} sequents proved cut-free, slowest {slowest:.2?}"))
}

fn c2_cut_corpus(ledger: &mut Ledger) -> Outcome {
    let text = std::fs::read_to_string(data("cut_corpus.jsonl")).map_err(|e| e.to_string())?;
    let start = Instant::now();
    let mut count = 0;
    let mut logics = BTreeSet::new();
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        let v: serde_json::Value = serde_json::from_str(line).map_err(|e| e.to_string())?;
        let (logic, rules) = (v["logic"].as_str().unwrap(), v["rules"].as_str().unwrap());
        let p = proof_from_json(&v["proof"].to_string(), &Language::FULL).map_err(|e| e.to_string())?;
        let c = cfg(logic, rules);
        let shown = format!("{} in {logic}[{rules}]", format_sequent(&p.conclusion));
        if !p.uses_cut() {
            return Err(format!("{shown}: the shipped proof does not use cut"));
        }
        check_proof(&p, &c.clone().with_cut(CutPolicy::Unrestricted), &[]).map_err(|e| format!("{shown}: {e}"))?;
        let q = prove(&p.conclusion, &c, &ProverOptions::default())
            .map_err(|e| format!("{shown}: {e}"))?
            .ok_or_else(|| format!("{shown}: no cut-free proof found"))?;
        check_proof(&q, &c, &[]).map_err(|e| format!("{shown}: {e}"))?;
        ledger.record(&c, &[], &p.conclusion);
        logics.insert(format!("{logic}[{rules}]"));
        count += 1;
    }
    let took = start.elapsed();
    if count < 20 {
        return Err(format!("only {count} proofs with cut shipped"));
    }
    if took > Duration::from_secs(60) {
        return Err(format!("re-proving took {took:?}"));
    }
    Ok(format!("{count} cut proofs over {} logics re-proved cut-free in {took:.2?}", logics.len()))
}

/// Hypothesis/goal templates over the metavariables X, Y, Z.
const TEMPLATES: &[(&[&str], &str)] = &[
    (&["X => Y", "Y => Z"], "X => Z"),
    (&["X => Y"], "(X,Z) => Y*Z"),
    (&["X => Y"], "(Z,X) => Z*Y"),
    (&["X => Y"], "X /\\ Z => Y"),
    (&["X => Y"], "X => Y \\/ Z"),
    (&["X => Y", "X => Z"], "X => Y /\\ Z"),
    (&["X => Z", "Y => Z"], "X \\/ Y => Z"),
    (&["(X,Y) => Z"], "X => Z/Y"),
    (&["X => Y", "Y => Z", "Z => X"], "Y => X"),
    (&["eps => X"], "Y => Y*X"),
    (&["X => Y"], "(X,X) => Y*Y"),
    // Not consequences.
    (&["X => Y"], "Y => X"),
    (&["X => Y"], "(X,Z) => Y"),
    (&["X => Y", "Y => Z"], "Z => X"),
];

const POOL: &[&str] = &["p", "q", "r", "p*q", "q/\\r", "p\\q", "!r"];

fn instantiate(template: &str, sub: &[&str]) -> Sequent {
    let mut s = template.to_string();
    for (var, f) in ["X", "Y", "Z"].iter().zip(sub) {
        s = s.replace(var, &format!("({f})"));
    }
    seq(&s)
}

/// Instances of the templates, a few substitutions each, in a fixed order.
fn consequence_instances(per_template: usize) -> Vec<(Vec<Sequent>, Sequent)> {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut subs: Vec<[&str; 3]> = Vec::new();
    for x in POOL {
        for y in POOL {
            for z in POOL {
                if x != y && y != z && x != z {
                    subs.push([x, y, z]);
                }
            }
        }
    }
    let mut out = Vec::new();
    for (hyps, goal) in TEMPLATES {
        subs.shuffle(&mut rng);
        for sub in subs.iter().take(per_template) {
            out.push((hyps.iter().map(|h| instantiate(h, sub)).collect(), instantiate(goal, sub)));
        }
    }
    out
}

/// Whether the search found a proof; an exhausted budget counts as no.
fn found(r: Result<Option<Proof>, ProverError>) -> Result<bool, String> {
    match r {
        Ok(p) => Ok(p.is_some()),
        Err(ProverError::Budget(_)) => Ok(false),
        Err(e) => Err(e.to_string()),
    }
}

/// Instance counts from [`faithfulness`].
struct Agreement {
    provable: usize,
    refuted: usize,
}

/// Both directions of the encoding on `instances`. An instance with a
/// finite countermodel is ruled out on both sides by soundness; both
/// searches still run on it, with a small budget, and must fail.
fn faithfulness(
    instances: &[(Vec<Sequent>, Sequent)],
    cfgs: &[LogicConfig],
    ledger: &mut Ledger,
) -> Result<Agreement, String> {
    let direct = ProverOptions { node_budget: 200_000, ..ProverOptions::with_depth(16) };
    let encoded = ProverOptions { node_budget: 2_000_000, ..ProverOptions::with_depth(48) };
    let probe = ProverOptions { node_budget: 20_000, ..encoded.clone() };
    let mut tally = Agreement { provable: 0, refuted: 0 };
    for (i, (hyps, goal)) in instances.iter().enumerate() {
        let c = &cfgs[i % cfgs.len()];
        let cls = AlgebraClass::of_logic(c);
        let refuted = countermodel(hyps, goal, &cls, 3, DEFAULT_BUDGET, Some(&cache()))
            .map_err(|e| e.to_string())?
            .witness
            .is_some();
        let from = found(prove_from(hyps, goal, &c.clone().with_cut(CutPolicy::Analytic), if refuted { &probe } else { &direct }))?;
        let enc = match prove_encoded(hyps, goal, c, if refuted { &probe } else { &encoded }) {
            Ok(Some(p)) if p.height() > 48 => return Err(format!("encoded proof of height {}", p.height())),
            r => found(r)?,
        };
        if from != enc {
            let hs: Vec<String> = hyps.iter().map(format_sequent).collect();
            return Err(format!(
                "{} ⊢ {} in {cls}: from hypotheses {from}, encoded {enc}",
                hs.join("; "),
                format_sequent(goal)
            ));
        }
        if from {
            tally.provable += 1;
            ledger.record(c, hyps, goal);
        }
        tally.refuted += usize::from(refuted);
    }
    Ok(tally)
}

fn c3_encoding(ledger: &mut Ledger) -> Outcome {
    let instances = consequence_instances(6);
    let cfgs: Vec<LogicConfig> = ["", "e", "c", "e,c"].iter().map(|r| cfg("nacill", r)).collect();
    let t = faithfulness(&instances, &cfgs, ledger)?;
    if t.provable < 50 {
        return Err(format!("only {} consequences proved from hypotheses", t.provable));
    }
    Ok(format!("{} instances agree: {} provable both ways, {} refuted by a countermodel", instances.len(), t.provable, t.refuted))
}

fn c4_soundness(ledger: &Ledger) -> Outcome {
    let mut checks = 0usize;
    let mut skipped = 0usize;
    for p in &ledger.proved {
        let cls = AlgebraClass::of_logic(&p.cfg);
        let zero_used = std::iter::once(&p.goal).chain(&p.hyps).any(|s| s.formulas().any(|f| f.mentions_const(Constant::Zero)));
        if zero_used && !cls.kind.is_involutive() {
            skipped += 1;
            continue;
        }
        for n in 1..=3 {
            for a in cached(&cls, n) {
                let ok = validates(&a, &p.hyps, &p.goal).map_err(|e| e.to_string())?;
                if !ok {
                    return Err(format!("{} fails in\n{a}", format_sequent(&p.goal)));
                }
                checks += 1;
            }
        }
    }
    Ok(format!("{} proved sequents, {checks} algebra checks, {skipped} skipped", ledger.proved.len()))
}

fn run_cli(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(std::iter::once("nacill").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8_lossy(&out).into_owned() + &String::from_utf8_lossy(&err))
}

fn c5_completion() -> Outcome {
    let start = Instant::now();
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let file = dir.path().join("a.alg");
    let mut count = 0;
    for r in Structural::subsets_ecw() {
        let rules = r.to_string();
        for n in 1..=4 {
            for a in cached(&AlgebraClass::new(ClassKind::Rlug).with_structural(r), n) {
                std::fs::write(&file, a.to_string()).map_err(|e| e.to_string())?;
                let path = file.to_str().unwrap();
                let (code, out) = run_cli(&["complete", path, "--k-mode", "cond15", "--verify", "--rules", &rules]);
                let identities = out.lines().any(|l| l.ends_with("identities: pass"));
                let embedding = out.lines().any(|l| l == "embedding: pass");
                if code != 0 || !identities || !embedding {
                    return Err(format!("R = {{{rules}}}:\n{a}{out}"));
                }
                count += 1;
            }
        }
    }
    Ok(format!("{count} algebras completed and verified in {:.2?}", start.elapsed()))
}

/// Refuted at exactly `size`: no countermodel below it, one at it.
fn minimal_refutation(goal: &str, cls: &AlgebraClass, size: usize) -> Result<(), String> {
    let g = seq(goal);
    if size > 1 {
        let below = countermodel(&[], &g, cls, size - 1, DEFAULT_BUDGET, Some(&cache())).map_err(|e| e.to_string())?;
        if let Some((a, _)) = below.witness {
            return Err(format!("{goal} is already refuted in {cls} at size {}", a.size()));
        }
        if !below.exhaustive {
            return Err(format!("search below size {size} in {cls} was not exhaustive"));
        }
    }
    let at = countermodel(&[], &g, cls, size, DEFAULT_BUDGET, Some(&cache())).map_err(|e| e.to_string())?;
    let (a, f) = at.witness.ok_or_else(|| format!("{goal} has no countermodel of size {size} in {cls}"))?;
    // Independent re-check: the witness is in the class and falsifies the goal.
    check_axioms(&a, cls).map_err(|v| v.to_string())?;
    let vals: Vec<(String, usize)> = f.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    if validates(&a, &[], &g) != Ok(false) || vals.is_empty() {
        return Err(format!("witness for {goal} does not falsify it"));
    }
    Ok(())
}

/// Smallest refuting size for the associativity law in FNL.
const ASSOCIATIVITY_SIZE: usize = 4;

fn c6_countermodels() -> Outcome {
    let rlug = AlgebraClass::new(ClassKind::Rlug);
    minimal_refutation("p => q", &rlug, 2)?;
    minimal_refutation("p /\\ q => p * q", &rlug, 3)?;
    minimal_refutation("p => 1", &rlug, 3)?;
    minimal_refutation("(p*q)*r => p*(q*r)", &rlug, ASSOCIATIVITY_SIZE)?;
    // The CLI agrees on the first example.
    let (code, out) = run_cli(&["countermodel", "p => q", "--class", "rlug", "--max-size", "2"]);
    if code != 0 || !out.contains("at size 2") {
        return Err(format!("countermodel command: exit {code}\n{out}"));
    }
    Ok(format!("all four minimal sizes confirmed (associativity at {ASSOCIATIVITY_SIZE})"))
}

/// Classical sequents whose derivations must use the given axiom schemes.
const CLASSICAL: &[(&str, &str, &[RuleId])] = &[
    ("fcnl-", "~-p => p", &[RuleId::Dn1a]),
    ("fcnl-", "(~-p,q) => p*q", &[RuleId::Dn1a]),
    ("fcnl-", "-~p /\\ q => p", &[RuleId::Dn2a]),
    ("fcnl-", "p => -~p", &[RuleId::Dn2b]),
    ("fcnl-", "eps => (~p/q)\\(p\\-q)", &[RuleId::ConA]),
    ("fcnl-", "(p,p\\0) =>", &[]),
    ("fcnl-", "(0/p,p) =>", &[]),
    ("fcnl", "-p => ~p", &[RuleId::CycB]),
    ("fcnl", "(~p,q) => -p*q", &[RuleId::CycA]),
    ("naccll-", "!~-p => p", &[RuleId::Dn1a]),
    ("naccll-", "(!p,!p\\0) =>", &[]),
    ("naccll-", "eps => (p\\-q)\\(~p/q)", &[RuleId::ConB]),
    ("naccll", "eps => !(-p)\\~p", &[RuleId::CycB]),
    ("naccll", "((p,q),~(p*q)) =>", &[]),
];

fn c7_classical(ledger: &mut Ledger) -> Outcome {
    let mut schemes = BTreeSet::new();
    let mut empty = 0;
    for &(logic, goal, uses) in CLASSICAL {
        let c = cfg(logic, "");
        let g = seq(goal);
        let p = prove(&g, &c, &ProverOptions::with_depth(16))
            .map_err(|e| format!("{goal}: {e}"))?
            .ok_or_else(|| format!("{goal}: no derivation in {logic}"))?;
        check_proof(&p, &c, &[]).map_err(|e| format!("{goal}: {e}"))?;
        for r in uses {
            if !p.any_rule(&|x| x == *r) {
                return Err(format!("{goal}: derivation does not use {r}"));
            }
            schemes.insert(*r);
        }
        empty += usize::from(g.succedent.is_none());
        ledger.record(&c, &[], &g);
    }
    let instances = consequence_instances(2);
    let cfgs = vec![cfg("naccll-", ""), cfg("naccll", "")];
    let t = faithfulness(&instances, &cfgs, ledger)?;
    Ok(format!(
        "{} classical derivations ({} schemes, {empty} with empty succedent); τ* agrees on {} instances ({} provable, {} refuted)",
        CLASSICAL.len(),
        schemes.len(),
        instances.len(),
        t.provable,
        t.refuted
    ))
}

fn c8_frames() -> Outcome {
    let mut count = 0;
    let mut quasi = 0;
    for r in Structural::subsets_ecw() {
        let logic = LogicConfig::new(Base::Nacill).with_structural(r);
        for n in 1..=3 {
            for a in cached(&AlgebraClass::of_logic(&logic), n) {
                let f = frame_of_algebra(&a, KMode::BangImage).map_err(|e| e.to_string())?;
                check_nucleus_laws(&f).map_err(|e| format!("{e}\n{a}"))?;
                check_gentzen_rules(&f, &a, &logic).map_err(|e| format!("{e}\n{a}"))?;
                if n <= 2 {
                    let g = galois_algebra(&f, DEFAULT_CLOSED_SET_CAP).map_err(|e| e.to_string())?;
                    verify_embedding(&a, &g).map_err(|e| format!("{e}\n{a}"))?;
                    check_quasi_embedding(&a, &g, 2, 3).map_err(|e| format!("{e}\n{a}"))?;
                    quasi += 1;
                }
                count += 1;
            }
        }
    }
    Ok(format!("{count} frames pass the nucleus laws and rule table; quasi-embedding on {quasi}"))
}

fn c9_modal_forms() -> Outcome {
    let mut tables = 0usize;
    let mut accepted = 0usize;
    for n in 1..=3 {
        let mut keys = BTreeSet::new();
        for base in enumerate_algebras(&AlgebraClass::new(ClassKind::Rlug), n, DEFAULT_BUDGET).algebras {
            for code in 0..n.pow(n as u32) {
                let bang: Vec<usize> = (0..n).map(|i| code / n.pow(i as u32) % n).collect();
                let a = base.with_bang(Some(bang)).map_err(|e| e.to_string())?;
                let (m, j) = (modal_monotone_form(&a), modal_meet_form(&a));
                if m != j {
                    return Err(format!("the forms disagree on\n{a}"));
                }
                if m {
                    accepted += 1;
                    keys.insert(canonical_key(&a));
                }
                tables += 1;
            }
        }
        // The accepted tables are exactly the modal class, up to isomorphism.
        let modal = enumerate_algebras(&AlgebraClass::new(ClassKind::ModalRlug), n, DEFAULT_BUDGET);
        let expected: BTreeSet<_> = modal.algebras.iter().map(canonical_key).collect();
        if keys != expected {
            return Err(format!("size {n}: {} accepted classes vs {} enumerated", keys.len(), expected.len()));
        }
    }
    Ok(format!("{tables} candidate tables, {accepted} accepted by both forms"))
}

fn main() {
    let mut ledger = Ledger::default();
    let mut results: Vec<(&str, Outcome, Duration)> = Vec::new();
    let mut run = |name: &'static str, f: &mut dyn FnMut(&mut Ledger) -> Outcome| {
        let start = Instant::now();
        let r = f(&mut ledger);
        let took = start.elapsed();
        match &r {
            Ok(msg) => println!("PASS {name} ({took:.2?}): {msg}"),
            Err(msg) => println!("FAIL {name} ({took:.2?}): {msg}"),
        }
        results.push((name, r, took));
    };
    run("C1 modal corpus", &mut c1_modal_corpus);
    run("C2 cut elimination", &mut c2_cut_corpus);
    run("C3 encoding faithfulness", &mut c3_encoding);
    run("C7 classical layer", &mut c7_classical);
    run("C4 soundness sweep", &mut |l| c4_soundness(l));
    run("C5 completion", &mut |_| c5_completion());
    run("C6 countermodels", &mut |_| c6_countermodels());
    run("C8 frame laws", &mut |_| c8_frames());
    run("C9 modal axiomatizations", &mut |_| c9_modal_forms());
    let failed = results.iter().filter(|(_, r, _)| r.is_err()).count();
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
