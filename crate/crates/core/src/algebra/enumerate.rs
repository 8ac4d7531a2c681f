use std::collections::HashMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};

use rayon::prelude::*;

use crate::syntax::Sequent;

use super::class::check_axioms;
use super::eval::{counter_valuation, EvalError, Valuation};
use super::lattices::{catalog, Lattice};
use super::{AlgebraClass, FiniteAlgebra};

/// Search nodes (table cell assignments) allowed per enumeration.
pub const DEFAULT_BUDGET: u64 = 200_000_000;

#[derive(Clone, Debug)]
pub struct Enumeration {
    /// One canonical representative per isomorphism class, sorted by
    /// lattice then canonical key.
    pub algebras: Vec<FiniteAlgebra>,
    /// False when the budget ran out before the search space was covered.
    pub exhaustive: bool,
}

/// Permutes all tables along `p` (element `x` becomes `p[x]`).
fn relabel(a: &FiniteAlgebra, p: &[usize]) -> FiniteAlgebra {
    let n = a.size();
    let mut join = vec![0; n * n];
    let mut meet = vec![0; n * n];
    let mut mult = vec![0; n * n];
    for x in 0..n {
        for y in 0..n {
            join[p[x] * n + p[y]] = p[a.join(x, y)];
            meet[p[x] * n + p[y]] = p[a.meet(x, y)];
            mult[p[x] * n + p[y]] = p[a.mul(x, y)];
        }
    }
    let bang = a.bang_table().map(|b| {
        let mut out = vec![0; n];
        for x in 0..n {
            out[p[x]] = p[b[x]];
        }
        out
    });
    FiniteAlgebra::new(n, join, meet, mult, p[a.unit()], bang, a.zero().map(|z| p[z]))
        .expect("relabelling preserves well-formedness")
}

fn encode(a: &FiniteAlgebra) -> Vec<usize> {
    let n = a.size();
    let mut key = Vec::with_capacity(2 * n * n + n + 3);
    key.extend_from_slice(a.meet_table());
    key.extend_from_slice(a.mult_table());
    key.push(a.unit());
    match a.bang_table() {
        Some(b) => key.extend_from_slice(b),
        None => key.push(n),
    }
    key.push(a.zero().unwrap_or(n));
    key
}

/// The least encoding over the given relabellings, with its representative.
fn canonical_under(a: &FiniteAlgebra, perms: &[Vec<usize>]) -> (Vec<usize>, FiniteAlgebra) {
    perms
        .iter()
        .map(|p| {
            let b = relabel(a, p);
            (encode(&b), b)
        })
        .min_by(|x, y| x.0.cmp(&y.0))
        .expect("the identity is always a relabelling")
}

fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(p: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
        if k == p.len() {
            out.push(p.clone());
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            go(p, k + 1, out);
            p.swap(k, i);
        }
    }
    let mut out = Vec::new();
    go(&mut (0..n).collect(), 0, &mut out);
    out
}

/// An isomorphism invariant: two algebras get the same key iff they are
/// isomorphic. Tries every relabelling of the carrier.
pub fn canonical_key(a: &FiniteAlgebra) -> Vec<usize> {
    canonical_under(a, &all_permutations(a.size())).0
}

struct Search<'a> {
    lat: &'a Lattice,
    cls: &'a AlgebraClass,
    n: usize,
    unit: usize,
    mult: Vec<usize>,
    set: Vec<bool>,
    free: Vec<(usize, usize)>,
    budget: &'a AtomicU64,
    out_of_budget: bool,
    found: Vec<FiniteAlgebra>,
}

impl Search<'_> {
    fn cell(&self, x: usize, y: usize) -> Option<usize> {
        self.set[x * self.n + y].then(|| self.mult[x * self.n + y])
    }

    /// Monotonicity and binary-join preservation against every cell set so
    /// far, for the freshly set cell `(x, y)`.
    fn consistent(&self, x: usize, y: usize) -> bool {
        let n = self.n;
        let l = self.lat;
        let v = self.mult[x * n + y];
        for x2 in 0..n {
            for y2 in 0..n {
                let Some(w) = self.cell(x2, y2) else { continue };
                if l.leq(x2, x) && l.leq(y2, y) && !l.leq(w, v) {
                    return false;
                }
                if l.leq(x, x2) && l.leq(y, y2) && !l.leq(v, w) {
                    return false;
                }
            }
        }
        let j = |a: usize, b: usize| l.join[a * n + b];
        for a in 0..n {
            for b in 0..n {
                // Row x: x(a ∨ b) = xa ∨ xb.
                if let (Some(p), Some(q), Some(r)) = (self.cell(x, a), self.cell(x, b), self.cell(x, j(a, b))) {
                    if r != j(p, q) {
                        return false;
                    }
                }
                // Column y: (a ∨ b)y = ay ∨ by.
                if let (Some(p), Some(q), Some(r)) = (self.cell(a, y), self.cell(b, y), self.cell(j(a, b), y)) {
                    if r != j(p, q) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn tick(&mut self) -> bool {
        if self.budget.fetch_sub(1, Ordering::Relaxed) == 0 {
            self.budget.store(0, Ordering::Relaxed);
            self.out_of_budget = true;
        }
        !self.out_of_budget
    }

    fn run(&mut self, k: usize) {
        if self.out_of_budget {
            return;
        }
        if k == self.free.len() {
            self.leaf();
            return;
        }
        let (x, y) = self.free[k];
        for v in 0..self.n {
            if !self.tick() {
                return;
            }
            self.mult[x * self.n + y] = v;
            self.set[x * self.n + y] = true;
            if self.consistent(x, y) {
                self.run(k + 1);
            }
            self.set[x * self.n + y] = false;
        }
    }

    fn leaf(&mut self) {
        let n = self.n;
        let base = FiniteAlgebra::new(n, self.lat.join.clone(), self.lat.meet.clone(), self.mult.clone(), self.unit, None, None)
            .expect("catalog lattices are well formed");
        let plain = AlgebraClass::new(super::ClassKind::Rlug).with_structural(self.cls.structural);
        if check_axioms(&base, &plain).is_err() {
            return;
        }
        let bangs = if self.cls.kind.has_bang() { bang_candidates(&base, self.cls) } else { vec![None] };
        let zeros: Vec<Option<usize>> =
            if self.cls.kind.is_involutive() { (0..n).map(Some).collect() } else { vec![None] };
        for b in &bangs {
            for &z in &zeros {
                if !self.tick() {
                    return;
                }
                let a = FiniteAlgebra::new(n, base.join.clone(), base.meet.clone(), base.mult.clone(), base.unit, b.clone(), z)
                    .expect("layers stay in range");
                if check_axioms(&a, self.cls).is_ok() {
                    self.found.push(a);
                }
            }
        }
    }
}

/// `!` tables for `a`, pruned by the identities that constrain a single
/// value (for NACILL classes) and by monotonicity.
fn bang_candidates(a: &FiniteAlgebra, cls: &AlgebraClass) -> Vec<Option<Vec<usize>>> {
    let n = a.size();
    let admissible: Vec<usize> = (0..n)
        .filter(|&v| {
            !cls.kind.is_nacill()
                || (a.leq(v, a.unit())
                    && a.leq(v, a.mul(v, v))
                    && (0..n).all(|y| a.mul(v, y) == a.mul(y, v))
                    && (0..n).all(|y| {
                        (0..n).all(|z| {
                            a.mul(v, a.mul(y, z)) == a.mul(a.mul(v, y), z) && a.mul(y, a.mul(z, v)) == a.mul(a.mul(y, z), v)
                        })
                    }))
        })
        .collect();
    let mut out = Vec::new();
    let mut b = vec![0; n];
    fn go(a: &FiniteAlgebra, nacill: bool, adm: &[usize], b: &mut Vec<usize>, k: usize, out: &mut Vec<Option<Vec<usize>>>) {
        let n = a.size();
        if k == n {
            out.push(Some(b.clone()));
            return;
        }
        for &v in adm {
            if nacill && !a.leq(v, k) {
                continue;
            }
            if (0..k).any(|x| a.leq(x, k) && !a.leq(b[x], v)) {
                continue;
            }
            b[k] = v;
            go(a, nacill, adm, b, k + 1, out);
        }
    }
    go(a, cls.kind.is_nacill(), &admissible, &mut b, 0, &mut out);
    out
}

/// Every algebra of `cls` on `n` elements up to isomorphism.
///
/// The search runs one worker per (lattice, unit) pair. Multiplication
/// tables are built cell by cell with the bottom row and column fixed to
/// bottom and the unit row and column fixed to the identity; monotonicity
/// and join preservation are checked as cells are filled, which on a
/// finite lattice is exactly residuation. `!` and `0` layers follow, and
/// every emitted algebra passes [`check_axioms`].
pub fn enumerate_algebras(cls: &AlgebraClass, n: usize, budget: u64) -> Enumeration {
    assert!((1..=5).contains(&n), "enumeration covers sizes 1 to 5");
    let lattices = catalog(n);
    let tasks: Vec<(usize, usize)> =
        (0..lattices.len()).flat_map(|l| (0..n).filter(move |&u| n == 1 || u != 0).map(move |u| (l, u))).collect();
    let counter = AtomicU64::new(budget);
    let results: Vec<(usize, Vec<FiniteAlgebra>, bool)> = tasks
        .par_iter()
        .map(|&(li, u)| {
            let lat = &lattices[li];
            let mut mult = vec![0; n * n];
            let mut set = vec![false; n * n];
            for x in 0..n {
                for (cell, value) in [((0, x), 0), ((x, 0), 0), ((u, x), x), ((x, u), x)] {
                    let i = cell.0 * n + cell.1;
                    if set[i] && mult[i] != value {
                        // Only reachable for n = 1, where 0 is the unit.
                        continue;
                    }
                    mult[i] = value;
                    set[i] = true;
                }
            }
            let free = (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).filter(|&(x, y)| !set[x * n + y]).collect();
            let mut s = Search { lat, cls, n, unit: u, mult, set, free, budget: &counter, out_of_budget: false, found: Vec::new() };
            // Fixed cells must already agree with each other.
            let fixed_ok = (0..n).all(|x| (0..n).all(|y| !s.set[x * n + y] || s.consistent(x, y)));
            if fixed_ok {
                s.run(0);
            }
            (li, s.found, !s.out_of_budget)
        })
        .collect();
    let exhaustive = results.iter().all(|r| r.2);
    let mut seen: HashMap<(usize, Vec<usize>), FiniteAlgebra> = HashMap::new();
    for (li, found, _) in results {
        let autos = lattices[li].automorphisms();
        for a in found {
            let (key, rep) = canonical_under(&a, &autos);
            seen.entry((li, key)).or_insert(rep);
        }
    }
    let mut keyed: Vec<_> = seen.into_iter().collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    Enumeration { algebras: keyed.into_iter().map(|(_, a)| a).collect(), exhaustive }
}

/// On-disk store of exhaustive enumerations, one file per class and size.
#[derive(Clone, Debug)]
pub struct AlgebraCache {
    dir: PathBuf,
}

static TMP_COUNTER: AtomicUsize = AtomicUsize::new(0);

impl AlgebraCache {
    pub fn new(dir: impl Into<PathBuf>) -> AlgebraCache {
        AlgebraCache { dir: dir.into() }
    }

    pub fn path(&self, cls: &AlgebraClass, n: usize) -> PathBuf {
        self.dir.join(format!("{}_n{n}.alg", cls.slug()))
    }

    /// Reads a cached exhaustive enumeration, or runs and records a fresh
    /// one. Partial or unreadable cache files are recomputed.
    pub fn load_or_enumerate(&self, cls: &AlgebraClass, n: usize, budget: u64) -> io::Result<Enumeration> {
        let path = self.path(cls, n);
        if let Some(e) = read_cache(&path) {
            if e.exhaustive {
                return Ok(e);
            }
        }
        let e = enumerate_algebras(cls, n, budget);
        fs::create_dir_all(&self.dir)?;
        let mut text = format!("# class {cls} size {n}\n# exhaustive {}\n# count {}\n\n", e.exhaustive, e.algebras.len());
        for a in &e.algebras {
            text.push_str(&a.to_string());
            text.push('\n');
        }
        // Concurrent writers each publish a complete file via rename.
        let tmp = path.with_extension(format!("tmp{}_{}", std::process::id(), TMP_COUNTER.fetch_add(1, Ordering::Relaxed)));
        fs::write(&tmp, text)?;
        fs::rename(&tmp, &path)?;
        Ok(e)
    }
}

fn read_cache(path: &Path) -> Option<Enumeration> {
    let text = fs::read_to_string(path).ok()?;
    let exhaustive = text.lines().find_map(|l| l.strip_prefix("# exhaustive "))?.trim() == "true";
    let count: usize = text.lines().find_map(|l| l.strip_prefix("# count "))?.trim().parse().ok()?;
    let algebras = FiniteAlgebra::parse_many(&text).ok()?;
    (algebras.len() == count).then_some(Enumeration { algebras, exhaustive })
}

#[derive(Clone, Debug)]
pub struct Countermodel {
    pub witness: Option<(FiniteAlgebra, Valuation)>,
    /// Whether every size up to the bound was searched completely.
    pub exhaustive: bool,
}

/// Smallest-size countermodel of `hyps ⊢ goal` in `cls`. Within a size,
/// algebras are tried in enumeration order and the first witness cancels
/// the remaining workers.
pub fn countermodel(
    hyps: &[Sequent],
    goal: &Sequent,
    cls: &AlgebraClass,
    max_size: usize,
    budget: u64,
    cache: Option<&AlgebraCache>,
) -> Result<Countermodel, EvalError> {
    let mut exhaustive = true;
    for n in 1..=max_size.min(5) {
        let e = match cache.map(|c| c.load_or_enumerate(cls, n, budget)) {
            Some(Ok(e)) => e,
            _ => enumerate_algebras(cls, n, budget),
        };
        exhaustive &= e.exhaustive;
        let hit = e.algebras.par_iter().find_map_first(|a| match counter_valuation(a, hyps, goal) {
            Ok(Some(f)) => Some(Ok((a.clone(), f))),
            Ok(None) => None,
            Err(err) => Some(Err(err)),
        });
        if let Some(hit) = hit {
            return Ok(Countermodel { witness: Some(hit?), exhaustive });
        }
    }
    Ok(Countermodel { witness: None, exhaustive: exhaustive && max_size <= 5 })
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;
    use crate::algebra::fixtures::*;
    use crate::algebra::ClassKind;
    use crate::calculus::Structural;
    use crate::syntax::{parse_sequent, Language};

    fn rlug() -> AlgebraClass {
        AlgebraClass::new(ClassKind::Rlug)
    }

    /// Every residuated multiplication on every labelled lattice, by brute
    /// force over all `n^(n*n)` tables, counted up to isomorphism.
    fn naive_count(cls: &AlgebraClass, n: usize) -> usize {
        let mut keys = HashSet::new();
        for lat in catalog(n) {
            let cells = n * n;
            let total = n.pow(cells as u32);
            for code in 0..total {
                let mut mult = vec![0; cells];
                let mut c = code;
                for m in mult.iter_mut() {
                    *m = c % n;
                    c /= n;
                }
                for u in 0..n {
                    let a = FiniteAlgebra::new(n, lat.join.clone(), lat.meet.clone(), mult.clone(), u, None, None).unwrap();
                    if check_axioms(&a, cls).is_ok() {
                        keys.insert(canonical_key(&a));
                    }
                }
            }
        }
        keys.len()
    }

    #[test]
    fn small_counts_match_the_naive_filter() {
        let e1 = enumerate_algebras(&rlug(), 1, DEFAULT_BUDGET);
        assert_eq!(e1.algebras.len(), 1);
        let e2 = enumerate_algebras(&rlug(), 2, DEFAULT_BUDGET);
        assert_eq!(e2.algebras, vec![two_chain()]);
        for n in 1..=3 {
            let e = enumerate_algebras(&rlug(), n, DEFAULT_BUDGET);
            assert!(e.exhaustive);
            assert_eq!(e.algebras.len(), naive_count(&rlug(), n), "size {n}");
        }
        for s in ["e", "c", "w", "e,c,w", "a"] {
            let cls = rlug().with_structural(s.parse().unwrap());
            assert_eq!(enumerate_algebras(&cls, 3, DEFAULT_BUDGET).algebras.len(), naive_count(&cls, 3), "{s}");
        }
    }

    #[test]
    fn three_element_rlugs() {
        let e = enumerate_algebras(&rlug(), 3, DEFAULT_BUDGET);
        assert_eq!(e.algebras.len(), 3);
        let keys: HashSet<_> = e.algebras.iter().map(canonical_key).collect();
        assert!(keys.contains(&canonical_key(&three_chain_nilpotent())));
        assert!(keys.contains(&canonical_key(&three_chain_mid_unit())));
    }

    #[test]
    fn emitted_algebras_are_pairwise_non_isomorphic() {
        for kind in [ClassKind::Rlug, ClassKind::Nacill, ClassKind::InRlug] {
            let e = enumerate_algebras(&AlgebraClass::new(kind), 4, DEFAULT_BUDGET);
            let keys: HashSet<_> = e.algebras.iter().map(canonical_key).collect();
            assert_eq!(keys.len(), e.algebras.len(), "{kind:?}");
        }
    }

    #[test]
    fn budget_exhaustion_is_flagged() {
        let e = enumerate_algebras(&rlug(), 4, 10);
        assert!(!e.exhaustive);
    }

    #[test]
    fn bang_layer_agrees_with_unpruned_search() {
        for n in 1..=3 {
            let cls = AlgebraClass::new(ClassKind::Nacill);
            let got: HashSet<_> = enumerate_algebras(&cls, n, DEFAULT_BUDGET).algebras.iter().map(canonical_key).collect();
            let mut want = HashSet::new();
            for base in enumerate_algebras(&rlug(), n, DEFAULT_BUDGET).algebras {
                for code in 0..n.pow(n as u32) {
                    let b: Vec<usize> = (0..n).map(|i| code / n.pow(i as u32) % n).collect();
                    let a = base.with_bang(Some(b)).unwrap();
                    if check_axioms(&a, &cls).is_ok() {
                        want.insert(canonical_key(&a));
                    }
                }
            }
            assert_eq!(got, want, "size {n}");
        }
    }

    #[test]
    fn cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let cache = AlgebraCache::new(dir.path());
        let cls = AlgebraClass::new(ClassKind::Nacill).with_structural(Structural { e: true, ..Structural::NONE });
        let first = cache.load_or_enumerate(&cls, 3, DEFAULT_BUDGET).unwrap();
        let text = fs::read_to_string(cache.path(&cls, 3)).unwrap();
        assert!(text.contains("# exhaustive true"));
        let again = read_cache(&cache.path(&cls, 3)).unwrap();
        assert_eq!(first.algebras, again.algebras);
    }

    #[test]
    fn countermodel_examples() {
        let seq = |s: &str| parse_sequent(s, &Language::FULL).unwrap();
        let cm = countermodel(&[], &seq("p => q"), &rlug(), 2, DEFAULT_BUDGET, None).unwrap();
        let (a, f) = cm.witness.unwrap();
        assert_eq!(a, two_chain());
        assert_eq!((f["p"], f["q"]), (1, 0));

        let (a, f) = countermodel(&[], &seq("p /\\ q => p*q"), &rlug(), 3, DEFAULT_BUDGET, None).unwrap().witness.unwrap();
        assert_eq!(canonical_key(&a), canonical_key(&three_chain_nilpotent()));
        assert_eq!((f["p"], f["q"]), (1, 1));

        let (a, f) = countermodel(&[], &seq("p => 1"), &rlug(), 3, DEFAULT_BUDGET, None).unwrap().witness.unwrap();
        assert_eq!(canonical_key(&a), canonical_key(&three_chain_mid_unit()));
        assert_eq!(f["p"], 2);

        let none = countermodel(&[], &seq("p => p"), &rlug(), 3, DEFAULT_BUDGET, None).unwrap();
        assert!(none.witness.is_none() && none.exhaustive);
    }
}
