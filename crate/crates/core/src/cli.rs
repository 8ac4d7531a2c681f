//! Command-line front end. Exit codes: 0 proved / valid / pass, 1 not found /
//! refuted / fail, 2 usage or input error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::algebra::{
    check_axioms, countermodel, enumerate_algebras, AlgebraCache, AlgebraClass, ClassKind, FiniteAlgebra,
    DEFAULT_BUDGET,
};
use crate::calculus::{
    check_proof, proof_from_json, proof_to_json, Base, Constants, CutPolicy, LogicConfig, Structural,
};
use crate::encoding::{encode_consequence, read_hypotheses};
use crate::frames::{
    check_gentzen_rules, check_nucleus_laws, frame_of_algebra, galois_algebra, verify_embedding, KMode,
    DEFAULT_CLOSED_SET_CAP,
};
use crate::prover::{prove_with_stats, ProverError, ProverOptions, DEFAULT_DEPTH, DEFAULT_NODE_BUDGET};
use crate::syntax::{format_sequent, parse_sequent, Constant, Language, Sequent};

#[derive(Parser, Debug)]
#[command(name = "nacill", version, about = "Proof search and finite models for non-associative linear logics")]
struct Cli {
    /// Worker threads for search and enumeration.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CutArg {
    Forbid,
    Analytic,
    Free,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KModeArg {
    Bang,
    Cond15,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Search for a proof.
    Prove {
        sequent: String,
        #[arg(long)]
        logic: String,
        #[arg(long, default_value = "")]
        rules: String,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
        #[arg(long)]
        hyp: Option<PathBuf>,
        /// Defaults to `analytic` with `--hyp`, else `forbid`.
        #[arg(long, value_enum)]
        cut: Option<CutArg>,
        #[arg(long)]
        emit_proof: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
    },
    /// Check a proof file.
    Check {
        proof: PathBuf,
        #[arg(long)]
        logic: String,
        #[arg(long, default_value = "")]
        rules: String,
        #[arg(long)]
        hyp: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = CutArg::Free)]
        cut: CutArg,
        /// Accepted for symmetry with `prove`; has no effect on checking.
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Print the single sequent that encodes a consequence.
    Encode {
        #[arg(long)]
        hyp: PathBuf,
        sequent: String,
        #[arg(long)]
        classical: bool,
    },
    /// Search for a finite countermodel, smallest size first.
    Countermodel {
        sequent: String,
        #[arg(long)]
        class: String,
        #[arg(long, default_value = "")]
        rules: String,
        #[arg(long, default_value_t = 3)]
        max_size: usize,
        #[arg(long)]
        hyp: Option<PathBuf>,
    },
    /// Enumerate the algebras of a class up to isomorphism.
    Algebras {
        #[arg(long)]
        class: String,
        #[arg(long, default_value = "")]
        rules: String,
        #[arg(long)]
        size: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Dedekind-MacNeille completion with `!X = γ(X ∩ K)`.
    Complete {
        algebra: PathBuf,
        #[arg(long, value_enum)]
        k_mode: Option<KModeArg>,
        /// Structural identities to demand of the completion; by default
        /// those among e, c, w that the input satisfies.
        #[arg(long)]
        rules: Option<String>,
        #[arg(long)]
        verify: bool,
    },
    /// Check the cut-free Gentzen frame rules on the frame of an algebra.
    GentzenCheck {
        algebra: PathBuf,
        #[arg(long)]
        logic: String,
        #[arg(long, default_value = "")]
        rules: String,
    },
}

/// An input problem, reported on the error stream with exit code 2.
struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

type Outcome = Result<i32, Usage>;

/// Runs the command line `args` (program name first), writing the primary
/// output to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { writeln!(err, "{}", text.lines().next().unwrap_or("")) };
            return code;
        }
    };
    if cli.jobs > 1 {
        // Only the first configuration of the global pool takes effect.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build_global();
    }
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

fn structural(rules: &str) -> Result<Structural, Usage> {
    Ok(rules.parse::<Structural>()?)
}

/// The logic with every optional constant that the inputs mention.
fn logic_config(logic: &str, rules: &str, inputs: &[&Sequent]) -> Result<LogicConfig, Usage> {
    let base: Base = logic.parse()?;
    let mentions = |c: Constant| inputs.iter().any(|s| s.formulas().any(|f| f.mentions_const(c)));
    let constants = Constants { zero: mentions(Constant::Zero), top: mentions(Constant::Top), bot: mentions(Constant::Bot) };
    let cfg = LogicConfig::new(base).with_structural(structural(rules)?).with_constants(constants);
    let lang = cfg.language();
    if let Some(s) = inputs.iter().find(|s| !lang.admits_sequent(s)) {
        return Err(Usage(format!("{} is outside the language of {logic}", format_sequent(s))));
    }
    Ok(cfg)
}

fn class_of(id: &str, rules: &str) -> Result<AlgebraClass, Usage> {
    Ok(AlgebraClass::new(id.parse::<ClassKind>().map_err(Usage)?).with_structural(structural(rules)?))
}

fn hypotheses(path: Option<&Path>) -> Result<Vec<Sequent>, Usage> {
    match path {
        None => Ok(Vec::new()),
        Some(p) => Ok(read_hypotheses(p, &Language::FULL)?),
    }
}

fn read_algebra(path: &Path) -> Result<FiniteAlgebra, Usage> {
    let text = fs::read_to_string(path).map_err(|e| Usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(FiniteAlgebra::parse(&text)?)
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Outcome {
    match cli.command {
        Command::Prove { sequent, logic, rules, depth, hyp, cut, emit_proof, budget } => {
            let goal = parse_sequent(&sequent, &Language::FULL)?;
            let hyps = hypotheses(hyp.as_deref())?;
            let inputs: Vec<&Sequent> = hyps.iter().chain(std::iter::once(&goal)).collect();
            let default_cut = if hyps.is_empty() { CutArg::Forbid } else { CutArg::Analytic };
            let cfg = logic_config(&logic, &rules, &inputs)?.with_cut(match cut.unwrap_or(default_cut) {
                CutArg::Forbid => CutPolicy::Forbidden,
                CutArg::Analytic => CutPolicy::Analytic,
                CutArg::Free => CutPolicy::Unrestricted,
            });
            let opts = ProverOptions { depth, node_budget: budget, contraction_budget: None, jobs: cli.jobs };
            match prove_with_stats(&hyps, &goal, &cfg, &opts) {
                Ok((Some(p), stats)) => {
                    writeln!(out, "proved: height {}, {} nodes searched", p.height(), stats.nodes)?;
                    write!(out, "{p}")?;
                    if let Some(path) = emit_proof {
                        fs::write(&path, proof_to_json(&p) + "\n")
                            .map_err(|e| Usage(format!("cannot write {}: {e}", path.display())))?;
                    }
                    Ok(0)
                }
                Ok((None, stats)) => {
                    writeln!(out, "not found: no proof of height ≤ {depth} ({} nodes searched)", stats.nodes)?;
                    Ok(1)
                }
                Err(ProverError::Budget(n)) => {
                    writeln!(out, "not found: node budget of {n} exhausted")?;
                    Ok(1)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Check { proof, logic, rules, hyp, cut, depth: _ } => {
            let text = fs::read_to_string(&proof).map_err(|e| Usage(format!("cannot read {}: {e}", proof.display())))?;
            let hyps = hypotheses(hyp.as_deref())?;
            let p = proof_from_json(&text, &Language::FULL)?;
            let seqs = p.sequents();
            let inputs: Vec<&Sequent> = hyps.iter().chain(seqs.iter().copied()).collect();
            let cfg = logic_config(&logic, &rules, &inputs)?.with_cut(match cut {
                CutArg::Forbid => CutPolicy::Forbidden,
                CutArg::Analytic | CutArg::Free => CutPolicy::Unrestricted,
            });
            match check_proof(&p, &cfg, &hyps) {
                Ok(()) => {
                    writeln!(out, "valid: {}", format_sequent(&p.conclusion))?;
                    Ok(0)
                }
                Err(e) => {
                    writeln!(out, "invalid at {}: {}", e.path, e.reason)?;
                    Ok(1)
                }
            }
        }
        Command::Encode { hyp, sequent, classical } => {
            let goal = parse_sequent(&sequent, &Language::FULL)?;
            let hyps = hypotheses(Some(&hyp))?;
            writeln!(out, "{}", format_sequent(&encode_consequence(&hyps, &goal, classical)?))?;
            Ok(0)
        }
        Command::Countermodel { sequent, class, rules, max_size, hyp } => {
            let goal = parse_sequent(&sequent, &Language::FULL)?;
            let hyps = hypotheses(hyp.as_deref())?;
            let cls = class_of(&class, &rules)?;
            if !(1..=5).contains(&max_size) {
                return Err(Usage("--max-size must be between 1 and 5".into()));
            }
            let cm = countermodel(&hyps, &goal, &cls, max_size, DEFAULT_BUDGET, None)?;
            match cm.witness {
                Some((a, f)) => {
                    writeln!(out, "refuted in {cls} at size {}", a.size())?;
                    write!(out, "{a}")?;
                    let vals: Vec<String> = f.iter().map(|(k, v)| format!("{k}={v}")).collect();
                    writeln!(out, "valuation {}", vals.join(" "))?;
                    Ok(0)
                }
                None => {
                    let scope = if cm.exhaustive { "exhaustive" } else { "partial (budget)" };
                    writeln!(out, "no countermodel in {cls} up to size {max_size} ({scope} search)")?;
                    Ok(1)
                }
            }
        }
        Command::Algebras { class, rules, size, out: dir, budget } => {
            let cls = class_of(&class, &rules)?;
            if !(1..=5).contains(&size) {
                return Err(Usage("--size must be between 1 and 5".into()));
            }
            let e = match &dir {
                Some(d) => AlgebraCache::new(d).load_or_enumerate(&cls, size, budget)?,
                None => enumerate_algebras(&cls, size, budget),
            };
            writeln!(out, "# class {cls} size {size}\n# exhaustive {}\n# count {}", e.exhaustive, e.algebras.len())?;
            match &dir {
                Some(d) => writeln!(out, "# written to {}", AlgebraCache::new(d).path(&cls, size).display())?,
                None => {
                    for a in &e.algebras {
                        write!(out, "\n{a}")?;
                    }
                }
            }
            Ok(if e.exhaustive { 0 } else { 1 })
        }
        Command::Complete { algebra, k_mode, rules, verify } => {
            let a = read_algebra(&algebra)?;
            let mode = match k_mode {
                Some(KModeArg::Bang) => KMode::BangImage,
                Some(KModeArg::Cond15) => KMode::Conditions15,
                None if a.bang_table().is_some() => KMode::BangImage,
                None => KMode::Conditions15,
            };
            let f = frame_of_algebra(&a, mode)?;
            let g = galois_algebra(&f, DEFAULT_CLOSED_SET_CAP)?;
            write!(out, "{g}")?;
            if !verify {
                return Ok(0);
            }
            let r = match rules {
                Some(r) => structural(&r)?,
                None => satisfied_rules(&a),
            };
            let mut ok = true;
            let mut report = |label: String, res: Result<(), String>| -> std::io::Result<()> {
                ok &= res.is_ok();
                match res {
                    Ok(()) => writeln!(out, "{label}: pass"),
                    Err(m) => writeln!(out, "{label}: FAIL ({m})"),
                }
            };
            let nacill = AlgebraClass::new(ClassKind::Nacill).with_structural(r);
            report(format!("{nacill} identities"), check_axioms(&g.algebra, &nacill).map_err(|v| v.to_string()))?;
            if a.zero().is_some() {
                let kind = if check_axioms(&a, &AlgebraClass::new(ClassKind::CyInRlug)).is_ok() {
                    ClassKind::CyInRlug
                } else {
                    ClassKind::InRlug
                };
                let cls = AlgebraClass::new(kind);
                if check_axioms(&a, &cls).is_ok() {
                    report(format!("{cls} identities"), check_axioms(&g.algebra, &cls).map_err(|v| v.to_string()))?;
                }
            }
            report("embedding".to_string(), verify_embedding(&a, &g).map_err(|v| v.to_string()))?;
            Ok(if ok { 0 } else { 1 })
        }
        Command::GentzenCheck { algebra, logic, rules } => {
            let a = read_algebra(&algebra)?;
            let cfg = LogicConfig::new(logic.parse()?).with_structural(structural(&rules)?);
            let f = frame_of_algebra(&a, KMode::BangImage)?;
            let rules_res = check_gentzen_rules(&f, &a, &cfg);
            let nucleus = check_nucleus_laws(&f);
            match &rules_res {
                Ok(()) => writeln!(out, "rule table: pass")?,
                Err(e) => writeln!(out, "rule table: FAIL ({e})")?,
            }
            match &nucleus {
                Ok(()) => writeln!(out, "nucleus laws: pass")?,
                Err(e) => writeln!(out, "nucleus laws: FAIL ({e})")?,
            }
            Ok(if rules_res.is_ok() && nucleus.is_ok() { 0 } else { 1 })
        }
    }
}

/// The structural identities among e, c, w that `a` satisfies.
fn satisfied_rules(a: &FiniteAlgebra) -> Structural {
    let rlug = AlgebraClass::new(ClassKind::Rlug);
    let holds = |s: &str| check_axioms(a, &rlug.with_structural(s.parse().expect("fixed rule names"))).is_ok();
    Structural { e: holds("e"), c: holds("c"), w: holds("w"), a: false }
}
