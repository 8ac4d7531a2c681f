use std::collections::BTreeSet;
use std::fmt;

use crate::algebra::{check_axioms, AlgebraClass, ClassKind, FiniteAlgebra};
use crate::calculus::LogicConfig;

use super::{bit, galois_algebra, galois_closure, members, FiniteFrame, GaloisAlgebra, Set, DEFAULT_CLOSED_SET_CAP};

/// The first rule instance whose premises hold and conclusion fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleFailure {
    pub rule: String,
    pub instance: String,
}

impl fmt::Display for RuleFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} fails at {}", self.rule, self.instance)
    }
}

fn fail(rule: &str, instance: String) -> Result<(), RuleFailure> {
    Err(RuleFailure { rule: rule.to_string(), instance })
}

/// Values of `∘`-terms of depth at most `depth` over all points of `W`.
/// On algebra-induced frames this is `W` itself already at depth 0.
fn structure_values(f: &FiniteFrame, depth: usize) -> Vec<usize> {
    let mut vals: BTreeSet<usize> = (0..f.w_size()).collect();
    for _ in 0..depth {
        let prev: Vec<usize> = vals.iter().copied().collect();
        for &x in &prev {
            for &y in &prev {
                vals.insert(f.mul(x, y));
            }
        }
    }
    vals.into_iter().collect()
}

/// Verifies every rule of the cut-free Gentzen frame rule table on
/// `(f, a)`, where `a` is identified with `W` and `W'` pointwise, plus
/// `[e]`, `[c]`, `[w]` when `cfg` includes those structural rules.
/// Structure slots range over `∘`-terms of depth ≤ 2.
pub fn check_gentzen_rules(f: &FiniteFrame, a: &FiniteAlgebra, cfg: &LogicConfig) -> Result<(), RuleFailure> {
    let n = a.size();
    if f.w_size() != n || f.wp_size() != n {
        return fail("injection of A", format!("A has {n} elements, W has {}, W' has {}", f.w_size(), f.wp_size()));
    }
    let xs = structure_values(f, 2);
    let zs: Vec<usize> = (0..f.wp_size()).collect();
    let ks: Vec<usize> = members(f.k()).collect();
    let el: Vec<usize> = (0..n).collect();
    let eps = f.eps();
    let nn = |x: usize, z: usize| f.n(x, z);
    let m = |x: usize, y: usize| f.mul(x, y);

    if let Some(b) = a.bang_table() {
        if let Some(&x) = el.iter().find(|&&x| f.k() >> b[x] & 1 == 0) {
            return fail("A^! ⊆ K", format!("a={x}"));
        }
    }
    if !nn(eps, a.unit()) {
        return fail("[1R]", String::new());
    }
    for &x in &el {
        if !nn(x, x) {
            return fail("[Id]", format!("a={x}"));
        }
    }
    for &z in &zs {
        if nn(eps, z) && !nn(a.unit(), z) {
            return fail("[1L]", format!("z={z}"));
        }
    }
    for &x in &el {
        for &y in &el {
            for &z in &zs {
                if nn(m(x, y), z) && !nn(a.mul(x, y), z) {
                    return fail("[·L]", format!("a={x}, b={y}, z={z}"));
                }
            }
        }
    }
    for &x in &xs {
        for &y in &xs {
            for &p in &el {
                for &q in &el {
                    if nn(x, p) && nn(y, q) && !nn(m(x, y), a.mul(p, q)) {
                        return fail("[·R]", format!("x={x}, y={y}, a={p}, b={q}"));
                    }
                }
            }
        }
    }
    for &x in &xs {
        for &p in &el {
            for &q in &el {
                for &z in &zs {
                    if nn(x, p) && nn(q, z) {
                        if !nn(m(x, a.lres(p, q)), z) {
                            return fail("[\\L]", format!("x={x}, a={p}, b={q}, z={z}"));
                        }
                        if !nn(m(a.rres(q, p), x), z) {
                            return fail("[/L]", format!("x={x}, a={p}, b={q}, z={z}"));
                        }
                    }
                }
                if nn(m(p, x), q) && !nn(x, a.lres(p, q)) {
                    return fail("[\\R]", format!("x={x}, a={p}, b={q}"));
                }
                if nn(m(x, p), q) && !nn(x, a.rres(q, p)) {
                    return fail("[/R]", format!("x={x}, a={p}, b={q}"));
                }
            }
        }
    }
    for &p in &el {
        for &q in &el {
            for &z in &zs {
                if (nn(p, z) || nn(q, z)) && !nn(a.meet(p, q), z) {
                    return fail("[∧L]", format!("a={p}, b={q}, z={z}"));
                }
                if nn(p, z) && nn(q, z) && !nn(a.join(p, q), z) {
                    return fail("[∨L]", format!("a={p}, b={q}, z={z}"));
                }
            }
            for &x in &xs {
                if nn(x, p) && nn(x, q) && !nn(x, a.meet(p, q)) {
                    return fail("[∧R]", format!("x={x}, a={p}, b={q}"));
                }
                if (nn(x, p) || nn(x, q)) && !nn(x, a.join(p, q)) {
                    return fail("[∨R]", format!("x={x}, a={p}, b={q}"));
                }
            }
        }
    }
    if let Some(b) = a.bang_table() {
        for &p in &el {
            for &z in &zs {
                if nn(p, z) && !nn(b[p], z) {
                    return fail("[!L]", format!("a={p}, z={z}"));
                }
            }
            for &k in &ks {
                if nn(k, p) && !nn(k, b[p]) {
                    return fail("[!R]", format!("k={k}, a={p}"));
                }
            }
        }
    }
    for &k in &ks {
        for &z in &zs {
            if nn(eps, z) && !nn(k, z) {
                return fail("[K-w]", format!("k={k}, z={z}"));
            }
            if nn(m(k, k), z) && !nn(k, z) {
                return fail("[K-c]", format!("k={k}, z={z}"));
            }
            for &y in &xs {
                if nn(m(k, y), z) != nn(m(y, k), z) {
                    return fail("[K-e]", format!("k={k}, y={y}, z={z}"));
                }
                for &x in &xs {
                    if nn(m(k, m(x, y)), z) != nn(m(m(k, x), y), z) {
                        return fail("[K-a]", format!("k={k}, x={x}, y={y}, z={z}"));
                    }
                    if nn(m(x, m(y, k)), z) != nn(m(m(x, y), k), z) {
                        return fail("[K-a*]", format!("k={k}, x={x}, y={y}, z={z}"));
                    }
                }
            }
        }
    }
    let s = cfg.structural;
    for &x in &xs {
        for &z in &zs {
            if s.c && nn(m(x, x), z) && !nn(x, z) {
                return fail("[c]", format!("x={x}, z={z}"));
            }
            if s.w && nn(eps, z) && !nn(x, z) {
                return fail("[w]", format!("x={x}, z={z}"));
            }
            for &y in &xs {
                if s.e && nn(m(x, y), z) && !nn(m(y, x), z) {
                    return fail("[e]", format!("x={x}, y={y}, z={z}"));
                }
            }
        }
    }
    Ok(())
}

/// `(γ1)`–`(γ4)` for `γ_N` over all subsets of `W`.
pub fn check_nucleus_laws(f: &FiniteFrame) -> Result<(), String> {
    let w = f.w_size();
    assert!(w <= 16, "nucleus sweep is quadratic in 2^|W|");
    let subsets = 1u64 << w;
    let gamma: Vec<Set> = (0..subsets).map(|x| galois_closure(f, x)).collect();
    for x in 0..subsets {
        let gx = gamma[x as usize];
        if x & !gx != 0 {
            return Err(format!("(γ1) X ⊆ γX fails at X={x:#b}"));
        }
        if gamma[gx as usize] & !gx != 0 {
            return Err(format!("(γ2) γγX ⊆ γX fails at X={x:#b}"));
        }
        for y in 0..subsets {
            let gy = gamma[y as usize];
            if x & !y == 0 && gx & !gy != 0 {
                return Err(format!("(γ3) monotonicity fails at X={x:#b}, Y={y:#b}"));
            }
            if f.set_mul(gx, gy) & !gamma[f.set_mul(x, y) as usize] != 0 {
                return Err(format!("(γ4) γX∘γY ⊆ γ(X∘Y) fails at X={x:#b}, Y={y:#b}"));
            }
        }
    }
    Ok(())
}

/// `f(a) ∈ f*(a) ⊆ {f(a)}^◁` for every formula over `vars` variables of
/// depth at most `depth` (atoms have depth 0) in `∧ ∨ · \ / ! 1`, and every
/// valuation `f` into `a`, with `f*(p) = {f(p)}^◁`.
///
/// The check runs on the set of pairs `(f(b), f*(b))` reachable by such
/// formulas, which is exactly as strong as visiting every formula.
pub fn check_quasi_embedding(a: &FiniteAlgebra, g: &GaloisAlgebra, vars: usize, depth: usize) -> Result<(), String> {
    let n = a.size();
    let ga = &g.algebra;
    let star = |x: usize| g.index_of(g.frame.lhd(bit(x))).ok_or_else(|| format!("{{{x}}}^◁ is not closed"));
    for code in 0..n.pow(vars as u32) {
        let val: Vec<usize> = (0..vars).map(|i| code / n.pow(i as u32) % n).collect();
        let mut pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
        for &v in &val {
            pairs.insert((v, star(v)?));
        }
        pairs.insert((a.unit(), ga.unit()));
        for _ in 0..depth {
            let prev: Vec<(usize, usize)> = pairs.iter().copied().collect();
            for &(v, s) in &prev {
                if let (Some(bv), Some(bs)) = (a.bang(v), ga.bang(s)) {
                    pairs.insert((bv, bs));
                }
                for &(w, t) in &prev {
                    pairs.insert((a.meet(v, w), ga.meet(s, t)));
                    pairs.insert((a.join(v, w), ga.join(s, t)));
                    pairs.insert((a.mul(v, w), ga.mul(s, t)));
                    pairs.insert((a.lres(v, w), ga.lres(s, t)));
                    pairs.insert((a.rres(v, w), ga.rres(s, t)));
                }
            }
        }
        for &(v, s) in &pairs {
            let set = g.closed[s];
            if set >> v & 1 == 0 || set & !g.frame.lhd(bit(v)) != 0 {
                return Err(format!("valuation {val:?}: f(b) = {v} but f*(b) = {set:#b}"));
            }
        }
    }
    Ok(())
}

/// Conditions (i)–(iii) of an involutive frame, cyclicity when asked, and
/// the consequences for the Galois algebra: `0_γ = ~{ε} = -{ε}` and the
/// involutive (cyclic) identities. Returns the Galois algebra on success.
pub fn check_involutive_frame(f: &FiniteFrame, cyclic: bool) -> Result<GaloisAlgebra, String> {
    let (sim, minus) = f.negations().ok_or("the frame carries no negations")?;
    let w = f.w_size();
    for x in 0..w {
        for y in 0..w {
            if f.res_l(x, y) != sim[f.mul(minus[y], x)] {
                return Err(format!("(i) x⫫y = (y⁻∘x)~ fails at x={x}, y={y}"));
            }
            if f.res_r(y, x) != minus[f.mul(x, sim[y])] {
                return Err(format!("(i) y⫫x = (x∘y~)⁻ fails at x={x}, y={y}"));
            }
        }
    }
    for x in 0..w {
        if minus[sim[x]] != x || sim[minus[x]] != x {
            return Err(format!("(ii) x~⁻ = x = x⁻~ fails at x={x}"));
        }
    }
    for x in 0..w {
        for y in 0..w {
            if minus[f.mul(sim[x], sim[y])] != sim[f.mul(minus[x], minus[y])] {
                return Err(format!("(iii) (x~∘y~)⁻ = (x⁻∘y⁻)~ fails at x={x}, y={y}"));
            }
        }
    }
    if cyclic {
        if let Some(x) = (0..w).find(|&x| sim[x] != minus[x]) {
            return Err(format!("not cyclic: x~ ≠ x⁻ at x={x}"));
        }
    }
    let g = galois_algebra(f, DEFAULT_CLOSED_SET_CAP).map_err(|e| e.to_string())?;
    let eps = f.eps();
    if f.lhd(bit(sim[eps])) != f.lhd(bit(minus[eps])) {
        return Err("~{ε} ≠ -{ε}".to_string());
    }
    let kind = if cyclic { ClassKind::CyInRlug } else { ClassKind::InRlug };
    check_axioms(&g.algebra, &AlgebraClass::new(kind)).map_err(|v| format!("Galois algebra: {v}"))?;
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{Base, LogicConfig};
    use crate::frames::{frame_of_algebra, KMode};

    fn two_chain_nacill() -> FiniteAlgebra {
        FiniteAlgebra::chain(2, vec![0, 0, 0, 1], 1).unwrap().with_bang(Some(vec![0, 1])).unwrap()
    }

    #[test]
    fn two_chain_is_a_gentzen_frame() {
        let a = two_chain_nacill();
        let f = frame_of_algebra(&a, KMode::BangImage).unwrap();
        let cfg = LogicConfig::new(Base::Nacill).with_structural("e,c,w".parse().unwrap());
        assert_eq!(check_gentzen_rules(&f, &a, &cfg), Ok(()));
        assert_eq!(check_nucleus_laws(&f), Ok(()));
    }

    #[test]
    fn corrupted_bang_is_caught() {
        let good = two_chain_nacill();
        let bad = good.with_bang(Some(vec![1, 1])).unwrap();
        let f = frame_of_algebra(&bad, KMode::BangImage).unwrap();
        let r = check_gentzen_rules(&f, &bad, &LogicConfig::new(Base::Nacill)).unwrap_err();
        assert_eq!(r.rule, "[!L]");
        // The frame of the good algebra paired with the bad algebra breaks K-closure.
        let f_good = frame_of_algebra(&good, KMode::BangImage).unwrap();
        let mut k_only = f_good.clone();
        k_only.k = 0b10;
        assert_eq!(check_gentzen_rules(&k_only, &good, &LogicConfig::new(Base::Nacill)).unwrap_err().rule, "A^! ⊆ K");
    }

    #[test]
    fn weakening_rule_needs_integrality() {
        let mid = FiniteAlgebra::chain(3, vec![0, 0, 0, 0, 1, 2, 0, 2, 2], 1).unwrap().with_bang(Some(vec![0, 1, 1])).unwrap();
        let f = frame_of_algebra(&mid, KMode::BangImage).unwrap();
        assert_eq!(check_gentzen_rules(&f, &mid, &LogicConfig::new(Base::Nacill)), Ok(()));
        let w = LogicConfig::new(Base::Nacill).with_structural("w".parse().unwrap());
        assert_eq!(check_gentzen_rules(&f, &mid, &w).unwrap_err().rule, "[w]");
    }

    #[test]
    fn involutive_two_chain() {
        let a = FiniteAlgebra::chain(2, vec![0, 0, 0, 1], 1).unwrap().with_zero(Some(0)).unwrap();
        let f = frame_of_algebra(&a, KMode::Conditions15).unwrap();
        assert_eq!(f.negations(), Some((&[1, 0][..], &[1, 0][..])));
        let g = check_involutive_frame(&f, true).unwrap();
        assert_eq!(g.algebra.zero(), Some(0));
        let skewed = f.clone().with_negations(vec![1, 0], vec![0, 1]).unwrap();
        assert!(check_involutive_frame(&skewed, true).is_err());
    }

    #[test]
    fn quasi_embedding_on_the_two_chain() {
        let a = two_chain_nacill();
        let g = galois_algebra(&frame_of_algebra(&a, KMode::BangImage).unwrap(), DEFAULT_CLOSED_SET_CAP).unwrap();
        assert_eq!(check_quasi_embedding(&a, &g, 2, 3), Ok(()));
    }
}
