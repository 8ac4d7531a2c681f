use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use super::formula::Formula;

/// An element of the free unital groupoid over formulas.
///
/// Values built through [`Structure::pair`] are kept in unit-normal form:
/// `Unit` never occurs below a `Pair`. Association is never normalized.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Structure {
    Unit,
    Leaf(Formula),
    Pair(Arc<Structure>, Arc<Structure>),
}

impl Structure {
    pub fn leaf(f: Formula) -> Structure {
        Structure::Leaf(f)
    }

    /// `l ∘ r`, absorbing the unit on either side.
    pub fn pair(l: Structure, r: Structure) -> Structure {
        match (l, r) {
            (Structure::Unit, r) => r,
            (l, Structure::Unit) => l,
            (l, r) => Structure::Pair(Arc::new(l), Arc::new(r)),
        }
    }

    pub fn is_unit(&self) -> bool {
        matches!(self, Structure::Unit)
    }

    /// True iff every leaf is a `!`-formula. The unit qualifies.
    pub fn is_bang_structure(&self) -> bool {
        match self {
            Structure::Unit => true,
            Structure::Leaf(f) => f.is_bang(),
            Structure::Pair(l, r) => l.is_bang_structure() && r.is_bang_structure(),
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            Structure::Unit | Structure::Leaf(_) => 1,
            Structure::Pair(l, r) => 1 + l.node_count() + r.node_count(),
        }
    }

    /// Nodes plus the sizes of all leaf formulas.
    pub fn size(&self) -> usize {
        match self {
            Structure::Unit => 1,
            Structure::Leaf(f) => 1 + f.size(),
            Structure::Pair(l, r) => 1 + l.size() + r.size(),
        }
    }

    pub fn leaves(&self) -> Vec<&Formula> {
        fn go<'a>(s: &'a Structure, out: &mut Vec<&'a Formula>) {
            match s {
                Structure::Unit => {}
                Structure::Leaf(f) => out.push(f),
                Structure::Pair(l, r) => {
                    go(l, out);
                    go(r, out);
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut out);
        out
    }

    pub fn is_unit_normal(&self) -> bool {
        match self {
            Structure::Unit | Structure::Leaf(_) => true,
            Structure::Pair(l, r) => {
                !l.is_unit() && !r.is_unit() && l.is_unit_normal() && r.is_unit_normal()
            }
        }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<Arc<str>>) {
        for f in self.leaves() {
            f.collect_vars(out);
        }
    }

    /// Every decomposition `(u, y)` with `plug(u, y) == self`, one per node,
    /// in preorder.
    pub fn contexts_of(&self) -> Vec<(Context, Structure)> {
        let mut out = Vec::with_capacity(self.node_count());
        collect_contexts(self, &mut |c| c, &mut out);
        out
    }

    /// Every context `u` with `plug(u, Unit) == self` that inserts a new
    /// node: for each node `y`, the sites immediately left and right of it.
    /// The unit structure has the single site `Hole`.
    pub fn unit_insertion_points(&self) -> Vec<Context> {
        if self.is_unit() {
            return vec![Context::Hole];
        }
        let mut out = Vec::with_capacity(2 * self.node_count());
        for (u, y) in self.contexts_of() {
            out.push(u.compose(Context::PairL(Box::new(Context::Hole), y.clone())));
            out.push(u.compose(Context::PairR(y, Box::new(Context::Hole))));
        }
        out
    }
}

fn collect_contexts(
    s: &Structure,
    wrap: &mut dyn FnMut(Context) -> Context,
    out: &mut Vec<(Context, Structure)>,
) {
    out.push((wrap(Context::Hole), s.clone()));
    if let Structure::Pair(l, r) = s {
        let right = (**r).clone();
        collect_contexts(l, &mut |c| wrap(Context::PairL(Box::new(c), right.clone())), out);
        let left = (**l).clone();
        collect_contexts(r, &mut |c| wrap(Context::PairR(left.clone(), Box::new(c))), out);
    }
}

/// A structure with exactly one hole.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Context {
    Hole,
    /// Hole inside the left component.
    PairL(Box<Context>, Structure),
    /// Hole inside the right component.
    PairR(Structure, Box<Context>),
}

impl Context {
    /// Substitutes `y` for the hole; units are absorbed.
    pub fn plug(&self, y: Structure) -> Structure {
        match self {
            Context::Hole => y,
            Context::PairL(c, s) => Structure::pair(c.plug(y), s.clone()),
            Context::PairR(s, c) => Structure::pair(s.clone(), c.plug(y)),
        }
    }

    /// `self ∘ inner`: the context whose hole is `inner`'s hole placed in
    /// `self`'s hole.
    pub fn compose(&self, inner: Context) -> Context {
        match self {
            Context::Hole => inner,
            Context::PairL(c, s) => Context::PairL(Box::new(c.compose(inner)), s.clone()),
            Context::PairR(s, c) => Context::PairR(s.clone(), Box::new(c.compose(inner))),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Context::Hole => 0,
            Context::PairL(c, _) | Context::PairR(_, c) => 1 + c.depth(),
        }
    }

    /// Finds `y` with `plug(self, y) == x`. Regular positions yield the
    /// subtree at the hole; unit-insertion sites yield `Unit`.
    pub fn split(&self, x: &Structure) -> Option<Structure> {
        if let Some(y) = self.descend(x) {
            return Some(y);
        }
        if self.plug(Structure::Unit) == *x {
            Some(Structure::Unit)
        } else {
            None
        }
    }

    fn descend(&self, x: &Structure) -> Option<Structure> {
        match (self, x) {
            (Context::Hole, _) => Some(x.clone()),
            (Context::PairL(c, s), Structure::Pair(l, r)) if **r == *s => c.descend(l),
            (Context::PairR(s, c), Structure::Pair(l, r)) if **l == *s => c.descend(r),
            _ => None,
        }
    }

    /// Path of the hole relative to `x`: `L`/`R` steps through existing
    /// pairs, then `L^`/`R^` when the hole is a fresh node inserted to the
    /// left/right of the node reached. `None` if the context does not fit.
    pub fn to_path(&self, x: &Structure) -> Option<String> {
        let mut out = String::new();
        let mut cur = self;
        let mut node = x;
        loop {
            match (cur, node) {
                (Context::Hole, _) => return Some(out),
                (Context::PairL(c, s), Structure::Pair(l, r)) if **r == *s && c.fits(l) => {
                    out.push('L');
                    cur = c;
                    node = l;
                }
                (Context::PairR(s, c), Structure::Pair(l, r)) if **l == *s && c.fits(r) => {
                    out.push('R');
                    cur = c;
                    node = r;
                }
                (Context::PairL(c, s), _) if **c == Context::Hole && s == node => {
                    out.push_str("L^");
                    return Some(out);
                }
                (Context::PairR(s, c), _) if **c == Context::Hole && s == node => {
                    out.push_str("R^");
                    return Some(out);
                }
                _ => return None,
            }
        }
    }

    fn fits(&self, x: &Structure) -> bool {
        self.to_path(x).is_some()
    }

    /// Inverse of [`Context::to_path`].
    pub fn from_path(path: &str, x: &Structure) -> Option<Context> {
        let bytes = path.as_bytes();
        fn go(bytes: &[u8], x: &Structure) -> Option<Context> {
            match bytes {
                [] => Some(Context::Hole),
                [b'L', b'^'] => Some(Context::PairL(Box::new(Context::Hole), x.clone())),
                [b'R', b'^'] => Some(Context::PairR(x.clone(), Box::new(Context::Hole))),
                [b'L', rest @ ..] => match x {
                    Structure::Pair(l, r) => {
                        Some(Context::PairL(Box::new(go(rest, l)?), (**r).clone()))
                    }
                    _ => None,
                },
                [b'R', rest @ ..] => match x {
                    Structure::Pair(l, r) => {
                        Some(Context::PairR((**l).clone(), Box::new(go(rest, r)?)))
                    }
                    _ => None,
                },
                _ => None,
            }
        }
        go(bytes, x)
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Structure::Unit => f.write_str("eps"),
            Structure::Leaf(a) => write!(f, "{a}"),
            Structure::Pair(l, r) => write!(f, "({l},{r})"),
        }
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Context::Hole => f.write_str("[]"),
            Context::PairL(c, s) => write!(f, "({c},{s})"),
            Context::PairR(s, c) => write!(f, "({s},{c})"),
        }
    }
}

/// `x => a`, or `x =>` when the succedent is empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sequent {
    pub antecedent: Structure,
    pub succedent: Option<Formula>,
}

impl Sequent {
    pub fn new(antecedent: Structure, succedent: Formula) -> Sequent {
        Sequent { antecedent, succedent: Some(succedent) }
    }

    pub fn empty_succedent(antecedent: Structure) -> Sequent {
        Sequent { antecedent, succedent: None }
    }

    pub fn with_antecedent(&self, antecedent: Structure) -> Sequent {
        Sequent { antecedent, succedent: self.succedent.clone() }
    }

    pub fn vars(&self) -> BTreeSet<Arc<str>> {
        let mut out = BTreeSet::new();
        self.antecedent.collect_vars(&mut out);
        if let Some(a) = &self.succedent {
            a.collect_vars(&mut out);
        }
        out
    }

    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.antecedent.leaves().into_iter().chain(self.succedent.iter())
    }

    pub fn size(&self) -> usize {
        self.antecedent.size() + self.succedent.as_ref().map_or(0, Formula::size)
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.succedent {
            Some(a) => write!(f, "{} => {}", self.antecedent, a),
            None => write!(f, "{} =>", self.antecedent),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: &str) -> Structure {
        Structure::leaf(Formula::var(n))
    }

    #[test]
    fn contexts_of_leaf_and_pair() {
        assert_eq!(p("p").contexts_of(), vec![(Context::Hole, p("p"))]);
        let x = Structure::pair(p("p"), p("q"));
        let got = x.contexts_of();
        assert_eq!(
            got,
            vec![
                (Context::Hole, x.clone()),
                (Context::PairL(Box::new(Context::Hole), p("q")), p("p")),
                (Context::PairR(p("p"), Box::new(Context::Hole)), p("q")),
            ]
        );
    }

    #[test]
    fn nested_pair_has_five_positions() {
        let x = Structure::pair(Structure::pair(p("p"), p("q")), p("r"));
        assert_eq!(x.contexts_of().len(), 5);
    }

    #[test]
    fn plug_identities() {
        let x = Structure::pair(p("p"), p("q"));
        assert_eq!(Context::Hole.plug(x.clone()), x);
        assert_eq!(Context::PairL(Box::new(Context::Hole), p("q")).plug(p("p")), x);
    }

    #[test]
    fn reassociation_is_distinct() {
        let a = Structure::pair(Structure::pair(p("a"), p("b")), p("c"));
        let b = Structure::pair(p("a"), Structure::pair(p("b"), p("c")));
        assert_ne!(a, b);
    }

    #[test]
    fn bang_structures() {
        let bp = Structure::leaf(Formula::bang(Formula::var("p")));
        let bq = Structure::leaf(Formula::bang(Formula::var("q")));
        assert!(Structure::pair(bp.clone(), bq.clone()).is_bang_structure());
        assert!(Structure::Unit.is_bang_structure());
        assert!(!Structure::pair(p("p"), bq).is_bang_structure());
    }

    #[test]
    fn insertion_points_plug_unit_back() {
        let x = Structure::pair(Structure::pair(p("p"), p("q")), p("r"));
        let sites = x.unit_insertion_points();
        assert_eq!(sites.len(), 2 * x.node_count());
        for u in &sites {
            assert_eq!(u.plug(Structure::Unit), x);
            assert_eq!(u.split(&x), Some(Structure::Unit));
        }
        let mut dedup = sites.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), sites.len());
        assert_eq!(Structure::Unit.unit_insertion_points(), vec![Context::Hole]);
    }

    #[test]
    fn paths_round_trip() {
        let x = Structure::pair(Structure::pair(p("p"), p("q")), p("r"));
        for (u, _) in x.contexts_of() {
            let path = u.to_path(&x).unwrap();
            assert!(!path.contains('^'));
            assert_eq!(Context::from_path(&path, &x), Some(u));
        }
        for u in x.unit_insertion_points() {
            let path = u.to_path(&x).unwrap();
            assert!(path.ends_with('^'), "{path}");
            assert_eq!(Context::from_path(&path, &x), Some(u));
        }
    }
}
