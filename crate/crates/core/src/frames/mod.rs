//! Finite residuated frames, their Galois closures and Galois algebras, the
//! Dedekind-MacNeille completion with `!X = γ(X ∩ K)`, and rule-shaped
//! checks on frames.
//!
//! Subsets of `W` and `W'` are `u64` bitmasks, so both sides hold at most
//! 64 points.

mod gentzen;

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::{AlgebraError, FiniteAlgebra};

pub use gentzen::{check_gentzen_rules, check_involutive_frame, check_nucleus_laws, check_quasi_embedding, RuleFailure};

pub type Set = u64;

pub fn members(s: Set) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| s >> i & 1 == 1)
}

fn bit(i: usize) -> Set {
    1 << i
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrameError {
    #[error("frame has {0} points; at most 64 are supported")]
    TooLarge(usize),
    #[error("nuclearity fails at x={x}, y={y}, z={z}")]
    NotNuclear { x: usize, y: usize, z: usize },
    #[error("K is not a subalgebra: {0}")]
    BadK(String),
    #[error("the algebra has no ! operation")]
    NoBang,
    #[error("{0} closed sets exceed the cap of {1}")]
    TooManyClosedSets(usize, usize),
    #[error("{0}")]
    Table(#[from] AlgebraError),
    #[error("negations must be total maps on W with W' = W")]
    BadNegations,
}

/// How `K` is chosen when a frame is built from an algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum KMode {
    /// `K = {!x : x ∈ A}`.
    BangImage,
    /// `K = {x : x ≤ 1, xx = x, xa = ax, x(ab) = (xa)b, (ab)x = a(bx)}`.
    Conditions15,
}

/// `(W, W', N, ε, K)` with `∘` on `W` and the residual maps realizing
/// `x ∘ y N z ⟺ y N x⫫z ⟺ x N z⫫y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteFrame {
    w: usize,
    wp: usize,
    op: Vec<usize>,
    eps: usize,
    rel: Vec<bool>,
    res_l: Vec<usize>,
    res_r: Vec<usize>,
    k: Set,
    /// `(~, -)` on `W`, for involutive frames (which have `W' = W`).
    negations: Option<(Vec<usize>, Vec<usize>)>,
    k_mode: Option<KMode>,
    /// `x ↦ N`-row as a mask over `W'`, and `z ↦ N`-column over `W`.
    up: Vec<Set>,
    down: Vec<Set>,
}

impl FiniteFrame {
    /// Checks nuclearity and that `K` contains `ε` and is closed under `∘`.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        w: usize,
        wp: usize,
        op: Vec<usize>,
        eps: usize,
        rel: Vec<bool>,
        res_l: Vec<usize>,
        res_r: Vec<usize>,
        k: Set,
    ) -> Result<FiniteFrame, FrameError> {
        if w > 64 || wp > 64 {
            return Err(FrameError::TooLarge(w.max(wp)));
        }
        let mut up = vec![0; w];
        let mut down = vec![0; wp];
        for x in 0..w {
            for z in 0..wp {
                if rel[x * wp + z] {
                    up[x] |= bit(z);
                    down[z] |= bit(x);
                }
            }
        }
        let f = FiniteFrame { w, wp, op, eps, rel, res_l, res_r, k, negations: None, k_mode: None, up, down };
        for x in 0..w {
            for y in 0..w {
                for z in 0..wp {
                    let lhs = f.n(f.mul(x, y), z);
                    if lhs != f.n(y, f.res_l(x, z)) || lhs != f.n(x, f.res_r(z, y)) {
                        return Err(FrameError::NotNuclear { x, y, z });
                    }
                }
            }
        }
        if k >> eps & 1 == 0 {
            return Err(FrameError::BadK(format!("ε = {eps} is not in K")));
        }
        for a in members(k) {
            for b in members(k) {
                if k >> f.mul(a, b) & 1 == 0 {
                    return Err(FrameError::BadK(format!("{a} ∘ {b} = {} is not in K", f.mul(a, b))));
                }
            }
        }
        Ok(f)
    }

    pub fn with_negations(mut self, sim: Vec<usize>, minus: Vec<usize>) -> Result<FiniteFrame, FrameError> {
        if self.w != self.wp || sim.len() != self.w || minus.len() != self.w || sim.iter().chain(&minus).any(|&v| v >= self.w) {
            return Err(FrameError::BadNegations);
        }
        self.negations = Some((sim, minus));
        Ok(self)
    }

    pub fn w_size(&self) -> usize {
        self.w
    }

    pub fn wp_size(&self) -> usize {
        self.wp
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.op[x * self.w + y]
    }

    pub fn eps(&self) -> usize {
        self.eps
    }

    /// `x N z`
    pub fn n(&self, x: usize, z: usize) -> bool {
        self.rel[x * self.wp + z]
    }

    /// `x⫫z`
    pub fn res_l(&self, x: usize, z: usize) -> usize {
        self.res_l[x * self.wp + z]
    }

    /// `z⫫y`
    pub fn res_r(&self, z: usize, y: usize) -> usize {
        self.res_r[z * self.w + y]
    }

    pub fn k(&self) -> Set {
        self.k
    }

    pub fn k_mode(&self) -> Option<KMode> {
        self.k_mode
    }

    pub fn negations(&self) -> Option<(&[usize], &[usize])> {
        self.negations.as_ref().map(|(s, m)| (s.as_slice(), m.as_slice()))
    }

    pub fn full_w(&self) -> Set {
        full(self.w)
    }

    /// `X^▷`
    pub fn rhd(&self, x: Set) -> Set {
        members(x).fold(full(self.wp), |acc, i| acc & self.up[i])
    }

    /// `Z^◁`
    pub fn lhd(&self, z: Set) -> Set {
        members(z).fold(full(self.w), |acc, i| acc & self.down[i])
    }

    /// `X ∘ Y`, elementwise.
    pub fn set_mul(&self, x: Set, y: Set) -> Set {
        let mut out = 0;
        for a in members(x) {
            for b in members(y) {
                out |= bit(self.mul(a, b));
            }
        }
        out
    }
}

fn full(n: usize) -> Set {
    if n == 64 {
        Set::MAX
    } else {
        (1 << n) - 1
    }
}

/// `γ_N(X) = X^▷◁`
pub fn galois_closure(f: &FiniteFrame, x: Set) -> Set {
    f.lhd(f.rhd(x))
}

/// `W = W' = A`, `N = ≤`, `ε = 1`, residuals from the algebra, and `K`
/// per `mode`. Involutive algebras also carry `~x = x\0`, `-x = 0/x`.
pub fn frame_of_algebra(a: &FiniteAlgebra, mode: KMode) -> Result<FiniteFrame, FrameError> {
    let n = a.size();
    let mut op = vec![0; n * n];
    let mut rel = vec![false; n * n];
    let mut res_l = vec![0; n * n];
    let mut res_r = vec![0; n * n];
    for x in 0..n {
        for y in 0..n {
            op[x * n + y] = a.mul(x, y);
            rel[x * n + y] = a.leq(x, y);
            res_l[x * n + y] = a.lres(x, y);
            res_r[x * n + y] = a.rres(x, y);
        }
    }
    let k = match mode {
        KMode::BangImage => {
            let b = a.bang_table().ok_or(FrameError::NoBang)?;
            b.iter().fold(0, |acc, &v| acc | bit(v))
        }
        KMode::Conditions15 => (0..n).filter(|&x| conditions_15(a, x)).fold(0, |acc, x| acc | bit(x)),
    };
    let mut f = FiniteFrame::new(n, n, op, a.unit(), rel, res_l, res_r, k)?;
    f.k_mode = Some(mode);
    if a.zero().is_some() {
        let sim = (0..n).map(|x| a.neg_r(x).expect("zero present")).collect();
        let minus = (0..n).map(|x| a.neg_l(x).expect("zero present")).collect();
        f = f.with_negations(sim, minus)?;
    }
    Ok(f)
}

/// `x ≤ 1`, `xx = x`, and `x` commutes and associates with everything.
fn conditions_15(a: &FiniteAlgebra, x: usize) -> bool {
    let n = a.size();
    a.leq(x, a.unit())
        && a.mul(x, x) == x
        && (0..n).all(|p| {
            a.mul(x, p) == a.mul(p, x)
                && (0..n).all(|q| a.mul(x, a.mul(p, q)) == a.mul(a.mul(x, p), q) && a.mul(a.mul(p, q), x) == a.mul(p, a.mul(q, x)))
        })
}

/// Default cap on the number of closed sets a Galois algebra may have.
pub const DEFAULT_CLOSED_SET_CAP: usize = 4096;

/// The Galois algebra `W+` as a [`FiniteAlgebra`] whose element `i` is the
/// closed set `closed[i]`.
#[derive(Clone, Debug)]
pub struct GaloisAlgebra {
    pub closed: Vec<Set>,
    pub algebra: FiniteAlgebra,
    pub frame: FiniteFrame,
}

impl GaloisAlgebra {
    pub fn index_of(&self, s: Set) -> Option<usize> {
        self.closed.binary_search_by(|c| order_key(*c).cmp(&order_key(s))).ok()
    }
}

fn order_key(s: Set) -> (u32, Set) {
    (s.count_ones(), s)
}

/// Every closed set: `{Z^◁ : Z ⊆ W'}` when `|W'| ≤ 12`, otherwise the
/// intersection closure of the principal sets `{z}^◁` together with `W`.
pub fn closed_sets(f: &FiniteFrame, cap: usize) -> Result<Vec<Set>, FrameError> {
    let mut out = BTreeSet::new();
    if f.wp <= 12 {
        for z in 0..(1u64 << f.wp) {
            out.insert(f.lhd(z));
        }
    } else {
        out.insert(f.full_w());
        let principal: Vec<Set> = (0..f.wp).map(|z| f.down[z]).collect();
        let mut frontier: Vec<Set> = out.iter().copied().collect();
        while let Some(s) = frontier.pop() {
            for &p in &principal {
                if out.insert(s & p) {
                    if out.len() > cap {
                        return Err(FrameError::TooManyClosedSets(out.len(), cap));
                    }
                    frontier.push(s & p);
                }
            }
        }
    }
    if out.len() > cap {
        return Err(FrameError::TooManyClosedSets(out.len(), cap));
    }
    let mut v: Vec<Set> = out.into_iter().collect();
    v.sort_by_key(|&s| order_key(s));
    Ok(v)
}

/// Builds `W+ = (γ[P(W)], ∩, ∪_γ, ∘_γ, \, /, !_γ, γ{ε}, 0_γ)` with
/// `!_γ X = γ(X ∩ K)` and, for involutive frames, `0_γ = {ε~}^◁`.
pub fn galois_algebra(f: &FiniteFrame, cap: usize) -> Result<GaloisAlgebra, FrameError> {
    let closed = closed_sets(f, cap)?;
    let m = closed.len();
    let idx = |s: Set| closed.binary_search_by(|c| order_key(*c).cmp(&order_key(s))).expect("operations land in closed sets");
    let rows: Vec<(Vec<usize>, Vec<usize>, Vec<usize>)> = (0..m)
        .into_par_iter()
        .map(|i| {
            let x = closed[i];
            let mut join = Vec::with_capacity(m);
            let mut meet = Vec::with_capacity(m);
            let mut mult = Vec::with_capacity(m);
            for &y in &closed {
                join.push(idx(galois_closure(f, x | y)));
                meet.push(idx(x & y));
                mult.push(idx(galois_closure(f, f.set_mul(x, y))));
            }
            (join, meet, mult)
        })
        .collect();
    let (mut join, mut meet, mut mult) = (Vec::new(), Vec::new(), Vec::new());
    for (j, me, mu) in rows {
        join.extend(j);
        meet.extend(me);
        mult.extend(mu);
    }
    let unit = idx(galois_closure(f, bit(f.eps)));
    let bang = (0..m).map(|i| idx(galois_closure(f, closed[i] & f.k))).collect();
    let zero = f.negations.as_ref().map(|(sim, _)| idx(f.lhd(bit(sim[f.eps]))));
    let algebra = FiniteAlgebra::new(m, join, meet, mult, unit, Some(bang), zero)?;
    Ok(GaloisAlgebra { closed, algebra, frame: f.clone() })
}

/// `X\Y = {w : X ∘ {w} ⊆ Y}` and `Y/X = {w : {w} ∘ X ⊆ Y}` computed on sets,
/// compared with the residuals the algebra derives from its order.
pub fn check_set_residuals(g: &GaloisAlgebra) -> Result<(), String> {
    let f = &g.frame;
    let m = g.closed.len();
    for i in 0..m {
        for j in 0..m {
            let (x, y) = (g.closed[i], g.closed[j]);
            let lres: Set = (0..f.w).filter(|&w| f.set_mul(x, bit(w)) & !y == 0).fold(0, |a, w| a | bit(w));
            let rres: Set = (0..f.w).filter(|&w| f.set_mul(bit(w), x) & !y == 0).fold(0, |a, w| a | bit(w));
            if g.index_of(lres) != Some(g.algebra.lres(i, j)) {
                return Err(format!("X\\Y is not closed or disagrees at X={x:#b}, Y={y:#b}"));
            }
            if g.index_of(rres) != Some(g.algebra.rres(j, i)) {
                return Err(format!("Y/X is not closed or disagrees at X={x:#b}, Y={y:#b}"));
            }
        }
    }
    Ok(())
}

/// The first operation `x ↦ {x}^◁` fails to preserve, with witnesses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddingFailure {
    pub operation: &'static str,
    pub witness: Vec<usize>,
}

impl fmt::Display for EmbeddingFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} is not preserved at {:?}", self.operation, self.witness)
    }
}

/// Checks that `x ↦ {x}^◁` is injective and preserves `∧ ∨ · \ / 1`, and
/// `!` when `a` has one and `g` was built with [`KMode::BangImage`].
pub fn verify_embedding(a: &FiniteAlgebra, g: &GaloisAlgebra) -> Result<(), EmbeddingFailure> {
    let n = a.size();
    let fail = |operation, witness| Err(EmbeddingFailure { operation, witness });
    let mut h = Vec::with_capacity(n);
    for x in 0..n {
        match g.index_of(g.frame.lhd(bit(x))) {
            Some(i) => h.push(i),
            None => return fail("closedness of {x}^◁", vec![x]),
        }
    }
    for x in 0..n {
        for y in 0..x {
            if h[x] == h[y] {
                return fail("injectivity", vec![y, x]);
            }
        }
    }
    let b = &g.algebra;
    if h[a.unit()] != b.unit() {
        return fail("1", vec![]);
    }
    type Binary = (&'static str, fn(&FiniteAlgebra, usize, usize) -> usize);
    let ops: [Binary; 5] = [
        ("∧", FiniteAlgebra::meet),
        ("∨", FiniteAlgebra::join),
        ("·", FiniteAlgebra::mul),
        ("\\", FiniteAlgebra::lres),
        ("/", FiniteAlgebra::rres),
    ];
    for (name, op) in ops {
        for x in 0..n {
            for y in 0..n {
                if h[op(a, x, y)] != op(b, h[x], h[y]) {
                    return fail(name, vec![x, y]);
                }
            }
        }
    }
    if a.bang_table().is_some() && g.frame.k_mode == Some(KMode::BangImage) {
        for x in 0..n {
            if Some(h[a.bang(x).unwrap()]) != b.bang(h[x]) {
                return fail("!", vec![x]);
            }
        }
    }
    if let (Some(z), Some(zg)) = (a.zero(), b.zero()) {
        if h[z] != zg {
            return fail("0", vec![]);
        }
    }
    Ok(())
}

impl fmt::Display for GaloisAlgebra {
    /// The algebra file format plus `closed_sets` and `K` bitmask lines.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.algebra)?;
        let masks: Vec<String> = self.closed.iter().map(|s| format!("{s:#b}")).collect();
        writeln!(f, "closed_sets {}", masks.join(" "))?;
        writeln!(f, "K {:#b}", self.frame.k)
    }
}
