//! Bounded backward proof search.
//!
//! Iterative deepening over proof height (a leaf has height 1). Along each
//! branch no sequent may repeat. Failures are memoised by
//! `(sequent, contraction budget)` with the largest height at which the
//! sequent failed, but only when the failure did not depend on an ancestor
//! above the failing node.
//!
//! Under (e) goals are kept with pair components in sorted order and every
//! rule is tried on every exchange variant; the explicit (e) steps are
//! rebuilt only in the returned proof, so `depth` counts the other
//! inferences.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use dashmap::DashMap;
use rayon::prelude::*;
use thiserror::Error;

use crate::calculus::{rule_instances_backward, CutPolicy, LogicConfig, Proof, RuleId, RuleInstance};
use crate::encoding::encode_consequence;
use crate::syntax::{Sequent, Structure};

pub const DEFAULT_DEPTH: usize = 24;
pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProverOptions {
    /// Maximum proof height.
    pub depth: usize,
    /// Maximum number of search nodes over all deepening rounds.
    pub node_budget: u64,
    /// Applications of `C`/`BangC` allowed per branch; `None` means `depth`.
    pub contraction_budget: Option<usize>,
    /// Worker threads for the root's alternatives; 1 is deterministic.
    pub jobs: usize,
}

impl Default for ProverOptions {
    fn default() -> Self {
        ProverOptions { depth: DEFAULT_DEPTH, node_budget: DEFAULT_NODE_BUDGET, contraction_budget: None, jobs: 1 }
    }
}

impl ProverOptions {
    pub fn with_depth(depth: usize) -> ProverOptions {
        ProverOptions { depth, ..ProverOptions::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ProverError {
    #[error("search exceeded the node budget of {0}")]
    Budget(u64),
    #[error("goal {0} is outside the language of the logic")]
    Language(String),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    /// Deepening rounds over all contraction phases.
    pub rounds: usize,
}

/// Search for a proof of `goal` with no hypotheses.
pub fn prove(goal: &Sequent, cfg: &LogicConfig, opts: &ProverOptions) -> Result<Option<Proof>, ProverError> {
    prove_from(&[], goal, cfg, opts)
}

/// Search for a proof of `goal` from the initial sequents `hyps`. An
/// `Analytic` cut policy is fixed to the analytic set of the root.
pub fn prove_from(
    hyps: &[Sequent],
    goal: &Sequent,
    cfg: &LogicConfig,
    opts: &ProverOptions,
) -> Result<Option<Proof>, ProverError> {
    prove_with_stats(hyps, goal, cfg, opts).map(|(p, _)| p)
}

pub fn prove_with_stats(
    hyps: &[Sequent],
    goal: &Sequent,
    cfg: &LogicConfig,
    opts: &ProverOptions,
) -> Result<(Option<Proof>, SearchStats), ProverError> {
    let lang = cfg.language();
    if !lang.admits_sequent(goal) {
        return Err(ProverError::Language(goal.to_string()));
    }
    let mut search_cfg = cfg.clone();
    if let Some(set) = cfg.resolve_cut_set(goal, hyps) {
        search_cfg.cut_policy = CutPolicy::AnalyticOverSet(set);
    }
    let search = Search {
        cfg: &search_cfg,
        hyps,
        memo: DashMap::new(),
        steps: DashMap::new(),
        nodes: AtomicU64::new(0),
        budget: opts.node_budget,
        exhausted: AtomicBool::new(false),
    };
    let root = if cfg.structural.e { commutative_normal(goal) } else { goal.clone() };
    let full = opts.contraction_budget.unwrap_or(opts.depth);
    let mut stats = SearchStats::default();
    for contraction in contraction_phases(full, cfg.has_bang() || cfg.structural.c) {
        for d in 1..=opts.depth {
            stats.rounds += 1;
            let found = if opts.jobs > 1 {
                search.root_parallel(&root, d, contraction, opts.jobs)
            } else {
                let mut path = Path::default();
                search.prove(&root, d, contraction, &mut path).0
            };
            stats.nodes = search.nodes.load(Ordering::Relaxed);
            if search.exhausted.load(Ordering::Relaxed) {
                return Err(ProverError::Budget(opts.node_budget));
            }
            if let Some(p) = found {
                return Ok((Some(exchange_chain(goal, p, &search_cfg)), stats));
            }
        }
    }
    Ok((None, stats))
}

/// Contraction budgets tried in turn: 0, 1, 2, 4, … and finally `full`.
/// Each phase deepens from height 1, so cheap contraction-free proofs are
/// found before the search pays for growing antecedents.
fn contraction_phases(full: usize, has_contraction: bool) -> Vec<usize> {
    if !has_contraction {
        return vec![full];
    }
    let mut out = vec![0];
    let mut b = 1;
    while b < full {
        out.push(b);
        b *= 2;
    }
    out.push(full);
    out.dedup();
    out
}

/// Prove the encoded sequent of `hyps ⊢ goal` cut-free.
pub fn prove_encoded(
    hyps: &[Sequent],
    goal: &Sequent,
    cfg: &LogicConfig,
    opts: &ProverOptions,
) -> Result<Option<Proof>, ProverError> {
    let encoded = encode_consequence(hyps, goal, cfg.base.is_classical())
        .map_err(|e| ProverError::Language(e.to_string()))?;
    prove(&encoded, &cfg.clone().with_cut(CutPolicy::Forbidden), opts)
}

/// Ancestors on the current branch, with their stack index.
#[derive(Default)]
struct Path {
    index: HashMap<Sequent, usize>,
    len: usize,
}

struct Search<'a> {
    cfg: &'a LogicConfig,
    hyps: &'a [Sequent],
    memo: DashMap<(Sequent, usize), usize>,
    /// Step lists of goals already expanded, reused by later rounds.
    steps: DashMap<Sequent, Arc<Vec<Step>>>,
    nodes: AtomicU64,
    budget: u64,
    exhausted: AtomicBool,
}

/// A backward step as searched: `inst` applies to `variant`, an exchange
/// variant of the goal, and its premises are searched in `normal` form.
struct Step {
    inst: RuleInstance,
    variant: Sequent,
    normal: Vec<Sequent>,
}

/// Goals whose step lists are kept; beyond this steps are recomputed.
const STEP_CACHE_LIMIT: usize = 100_000;

/// Sentinel for "no ancestor was hit".
const NO_HIT: usize = usize::MAX;

impl Search<'_> {
    /// Candidate steps for a goal in normal form, in search order.
    fn cached_steps(&self, goal: &Sequent) -> Arc<Vec<Step>> {
        if let Some(s) = self.steps.get(goal) {
            return Arc::clone(&s);
        }
        let s = Arc::new(self.ordered_steps(goal));
        if self.steps.len() < STEP_CACHE_LIMIT {
            self.steps.insert(goal.clone(), Arc::clone(&s));
        }
        s
    }

    fn ordered_steps(&self, goal: &Sequent) -> Vec<Step> {
        let mut steps = Vec::new();
        if self.cfg.structural.e {
            // Exchange is searched implicitly: every rule is tried on every
            // exchange variant and premises are normalised.
            let mut seen = HashSet::new();
            for v in exchange_variants(&goal.antecedent) {
                let variant = goal.with_antecedent(v);
                for inst in rule_instances_backward(&variant, self.cfg, self.hyps) {
                    if matches!(inst.rule, RuleId::E | RuleId::BangEFwd | RuleId::BangEBwd) {
                        continue;
                    }
                    let normal: Vec<Sequent> = inst.premises.iter().map(commutative_normal).collect();
                    if seen.insert((inst.rule, normal.clone())) {
                        steps.push(Step { inst, variant: variant.clone(), normal });
                    }
                }
            }
        } else {
            for inst in rule_instances_backward(goal, self.cfg, self.hyps) {
                let normal = inst.premises.clone();
                steps.push(Step { inst, variant: goal.clone(), normal });
            }
        }
        steps.sort_by_cached_key(|s| (priority(s.inst.rule), s.normal.iter().map(Sequent::size).sum::<usize>()));
        steps
    }

    fn failed_before(&self, goal: &Sequent, d: usize, contraction: usize) -> bool {
        self.memo.get(&(goal.clone(), contraction)).is_some_and(|m| *m >= d)
    }

    fn record_failure(&self, goal: &Sequent, d: usize, contraction: usize) {
        let mut e = self.memo.entry((goal.clone(), contraction)).or_insert(0);
        if *e < d {
            *e = d;
        }
    }

    /// Returns the proof, if any, and the lowest ancestor index the subtree
    /// ran into.
    fn prove(&self, goal: &Sequent, d: usize, contraction: usize, path: &mut Path) -> (Option<Proof>, usize) {
        if d == 0 || self.exhausted.load(Ordering::Relaxed) {
            return (None, NO_HIT);
        }
        if let Some(&k) = path.index.get(goal) {
            return (None, k);
        }
        let contraction = normalize_budget(contraction, d);
        if self.failed_before(goal, d, contraction) {
            return (None, NO_HIT);
        }
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.budget {
            self.exhausted.store(true, Ordering::Relaxed);
            return (None, NO_HIT);
        }
        let me = path.len;
        path.index.insert(goal.clone(), me);
        path.len += 1;
        let mut low = NO_HIT;
        let mut found = None;
        for step in self.cached_steps(goal).iter() {
            let (p, hit) = self.try_step(goal, step, d, contraction, path);
            low = low.min(hit);
            if p.is_some() {
                found = p;
                break;
            }
        }
        path.len -= 1;
        path.index.remove(goal);
        if found.is_none() && low >= me && !self.exhausted.load(Ordering::Relaxed) {
            self.record_failure(goal, d, contraction);
        }
        (found, low)
    }

    fn try_step(
        &self,
        goal: &Sequent,
        step: &Step,
        d: usize,
        contraction: usize,
        path: &mut Path,
    ) -> (Option<Proof>, usize) {
        let Step { inst, variant, normal } = step;
        let budget = if inst.rule.is_contraction() {
            match contraction.checked_sub(1) {
                Some(b) => b,
                None => return (None, NO_HIT),
            }
        } else {
            contraction
        };
        if !inst.premises.is_empty() && d < 2 {
            return (None, NO_HIT);
        }
        let mut subproofs = Vec::with_capacity(inst.premises.len());
        let mut low = NO_HIT;
        for (prem, norm) in inst.premises.iter().zip(normal) {
            let (p, hit) = self.prove(norm, d - 1, budget, path);
            low = low.min(hit);
            match p {
                Some(p) => subproofs.push(exchange_chain(prem, p, self.cfg)),
                None => return (None, low),
            }
        }
        let node = Proof::from_instance(variant.clone(), inst.clone(), subproofs);
        (Some(exchange_chain(goal, node, self.cfg)), low)
    }

    /// Tries the root's alternatives on a worker pool; the first success in
    /// search order wins.
    fn root_parallel(&self, goal: &Sequent, d: usize, contraction: usize, jobs: usize) -> Option<Proof> {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().expect("thread pool");
        let contraction = normalize_budget(contraction, d);
        if self.failed_before(goal, d, contraction) {
            return None;
        }
        let steps = self.cached_steps(goal);
        let results: Vec<Option<Proof>> = pool.install(|| {
            steps
                .par_iter()
                .map(|step| {
                    let mut path = Path::default();
                    path.index.insert(goal.clone(), 0);
                    path.len = 1;
                    self.try_step(goal, step, d, contraction, &mut path).0
                })
                .collect()
        });
        results.into_iter().flatten().next()
    }
}

/// A proof of height `d` has at most `d - 1` inferences on a branch, so any
/// larger budget is equivalent to no budget.
fn normalize_budget(contraction: usize, d: usize) -> usize {
    if contraction >= d.saturating_sub(1) {
        usize::MAX
    } else {
        contraction
    }
}

/// The representative of a sequent's class under exchange: pair
/// components sorted at every node.
fn commutative_normal(s: &Sequent) -> Sequent {
    fn go(x: &Structure) -> Structure {
        match x {
            Structure::Pair(l, r) => {
                let (l, r) = (go(l), go(r));
                if l <= r {
                    Structure::pair(l, r)
                } else {
                    Structure::pair(r, l)
                }
            }
            _ => x.clone(),
        }
    }
    s.with_antecedent(go(&s.antecedent))
}

/// Exchange variants that matter to a rule: every rule pattern spans a
/// node and its children, and premises are normalised afterwards, so it is
/// enough to flip any of those three pairs at one node at a time.
fn exchange_variants(x: &Structure) -> Vec<Structure> {
    fn flips(y: &Structure) -> Vec<Structure> {
        match y {
            Structure::Pair(l, r) => vec![y.clone(), Structure::Pair(Arc::clone(r), Arc::clone(l))],
            _ => vec![y.clone()],
        }
    }
    let mut seen = HashSet::new();
    let mut out = vec![x.clone()];
    seen.insert(x.clone());
    for (u, y) in x.contexts_of() {
        let Structure::Pair(l, r) = &y else { continue };
        for a in flips(l) {
            for b in flips(r) {
                for w in [Structure::pair(a.clone(), b.clone()), Structure::pair(b.clone(), a.clone())] {
                    let v = u.plug(w);
                    if seen.insert(v.clone()) {
                        out.push(v);
                    }
                }
            }
        }
    }
    out
}

/// Extends a proof of `p.conclusion` to a proof of `from` by explicit (e)
/// steps; the two must differ only in the order of pair components.
fn exchange_chain(from: &Sequent, p: Proof, cfg: &LogicConfig) -> Proof {
    if *from == p.conclusion {
        return p;
    }
    let target = p.conclusion.clone();
    let mut parent: HashMap<Sequent, (Sequent, RuleInstance)> = HashMap::new();
    let mut queue = std::collections::VecDeque::from([from.clone()]);
    while let Some(s) = queue.pop_front() {
        if s == target {
            break;
        }
        for inst in rule_instances_backward(&s, cfg, &[]).into_iter().filter(|i| i.rule == RuleId::E) {
            let next = inst.premises[0].clone();
            if next != *from && !parent.contains_key(&next) {
                parent.insert(next.clone(), (s.clone(), inst));
                queue.push_back(next);
            }
        }
    }
    let mut proof = p;
    let mut cur = target;
    while cur != *from {
        let (prev, inst) = parent.remove(&cur).expect("exchange variants are connected by (e)");
        proof = Proof::from_instance(prev.clone(), inst, vec![proof]);
        cur = prev;
    }
    proof
}

/// Lower runs first.
fn priority(rule: RuleId) -> u8 {
    use RuleId::*;
    match rule {
        _ if rule.arity() == 0 => 0,
        AndR | BslR | SlR => 1,
        FusL | OneL | OrL => 2,
        C | BangC => 5,
        Cut => 6,
        W | BangW => 4,
        _ => 3,
    }
}
