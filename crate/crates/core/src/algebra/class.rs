use std::fmt;
use std::str::FromStr;

use crate::calculus::{Base, LogicConfig, Structural};

use super::{lattice_violation, FiniteAlgebra};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassKind {
    Rlug,
    ModalRlug,
    Nacill,
    InRlug,
    CyInRlug,
    NaccllMinus,
    Naccll,
}

impl ClassKind {
    pub const ALL: [ClassKind; 7] = [
        ClassKind::Rlug,
        ClassKind::ModalRlug,
        ClassKind::Nacill,
        ClassKind::InRlug,
        ClassKind::CyInRlug,
        ClassKind::NaccllMinus,
        ClassKind::Naccll,
    ];

    pub fn id(self) -> &'static str {
        match self {
            ClassKind::Rlug => "rlug",
            ClassKind::ModalRlug => "modal-rlug",
            ClassKind::Nacill => "nacill",
            ClassKind::InRlug => "inrlug",
            ClassKind::CyInRlug => "cyinrlug",
            ClassKind::NaccllMinus => "naccll-",
            ClassKind::Naccll => "naccll",
        }
    }

    pub fn has_bang(self) -> bool {
        matches!(self, ClassKind::ModalRlug | ClassKind::Nacill | ClassKind::NaccllMinus | ClassKind::Naccll)
    }

    /// The seven NACILL identities on top of the modal ones.
    pub fn is_nacill(self) -> bool {
        matches!(self, ClassKind::Nacill | ClassKind::NaccllMinus | ClassKind::Naccll)
    }

    pub fn is_involutive(self) -> bool {
        matches!(self, ClassKind::InRlug | ClassKind::CyInRlug | ClassKind::NaccllMinus | ClassKind::Naccll)
    }

    pub fn is_cyclic(self) -> bool {
        matches!(self, ClassKind::CyInRlug | ClassKind::Naccll)
    }

    /// The algebraic counterpart of a base calculus.
    pub fn of_base(base: Base) -> ClassKind {
        match base {
            Base::Fnl => ClassKind::Rlug,
            Base::Nacill => ClassKind::Nacill,
            Base::FcnlMinus => ClassKind::InRlug,
            Base::Fcnl => ClassKind::CyInRlug,
            Base::NaccllMinus => ClassKind::NaccllMinus,
            Base::Naccll => ClassKind::Naccll,
        }
    }
}

/// A variety: a base class plus the identities of a structural-rule subset.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlgebraClass {
    pub kind: ClassKind,
    pub structural: Structural,
}

impl AlgebraClass {
    pub fn new(kind: ClassKind) -> AlgebraClass {
        AlgebraClass { kind, structural: Structural::NONE }
    }

    pub fn with_structural(self, structural: Structural) -> AlgebraClass {
        AlgebraClass { structural, ..self }
    }

    pub fn of_logic(cfg: &LogicConfig) -> AlgebraClass {
        AlgebraClass { kind: ClassKind::of_base(cfg.base), structural: cfg.structural }
    }

    /// File-name friendly id, e.g. `nacill` or `nacill_e,c`.
    pub fn slug(&self) -> String {
        if self.structural.is_empty() {
            self.kind.id().to_string()
        } else {
            format!("{}_{}", self.kind.id(), self.structural)
        }
    }
}

impl fmt::Display for AlgebraClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.structural.is_empty() {
            f.write_str(self.kind.id())
        } else {
            write!(f, "{}[{}]", self.kind.id(), self.structural)
        }
    }
}

impl FromStr for ClassKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ClassKind::ALL.into_iter().find(|k| k.id() == s).ok_or_else(|| {
            format!("unknown class id {s:?} (expected rlug, modal-rlug, nacill, inrlug, cyinrlug, naccll-, naccll)")
        })
    }
}

/// The first identity that fails, with the elements that witness it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub identity: String,
    pub witness: Vec<usize>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.witness.is_empty() {
            write!(f, "{}", self.identity)
        } else {
            let names = ["x", "y", "z"];
            let w: Vec<String> = self.witness.iter().enumerate().map(|(i, v)| format!("{}={v}", names[i])).collect();
            write!(f, "{} fails at {}", self.identity, w.join(", "))
        }
    }
}

/// Checks `pred` on all `k`-tuples in lexicographic order.
fn forall(n: usize, k: usize, identity: &str, pred: impl Fn(&[usize]) -> bool) -> Result<(), Violation> {
    let mut t = vec![0; k];
    loop {
        if !pred(&t) {
            return Err(Violation { identity: identity.to_string(), witness: t });
        }
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(());
            }
            i -= 1;
            t[i] += 1;
            if t[i] < n {
                break;
            }
            t[i] = 0;
        }
    }
}

fn missing(what: &str) -> Violation {
    Violation { identity: format!("{what} is required by the class but absent"), witness: vec![] }
}

fn rlug(a: &FiniteAlgebra) -> Result<(), Violation> {
    let n = a.size();
    if let Some(msg) = lattice_violation(n, a.join_table(), a.meet_table()) {
        return Err(Violation { identity: format!("lattice laws ({msg})"), witness: vec![] });
    }
    let u = a.unit();
    forall(n, 1, "1x = x = x1", |t| a.mul(u, t[0]) == t[0] && a.mul(t[0], u) == t[0])?;
    forall(n, 3, "xy ≤ z iff y ≤ x\\z", |t| a.leq(a.mul(t[0], t[1]), t[2]) == a.leq(t[1], a.lres(t[0], t[2])))?;
    forall(n, 3, "xy ≤ z iff x ≤ z/y", |t| a.leq(a.mul(t[0], t[1]), t[2]) == a.leq(t[0], a.rres(t[2], t[1])))
}

fn structural(a: &FiniteAlgebra, s: Structural) -> Result<(), Violation> {
    let n = a.size();
    if s.e {
        forall(n, 2, "xy ≤ yx", |t| a.leq(a.mul(t[0], t[1]), a.mul(t[1], t[0])))?;
    }
    if s.c {
        forall(n, 1, "x ≤ xx", |t| a.leq(t[0], a.mul(t[0], t[0])))?;
    }
    if s.w {
        forall(n, 1, "x ≤ 1", |t| a.leq(t[0], a.unit()))?;
    }
    if s.a {
        forall(n, 3, "(xy)z = x(yz)", |t| a.mul(a.mul(t[0], t[1]), t[2]) == a.mul(t[0], a.mul(t[1], t[2])))?;
    }
    Ok(())
}

fn modal(a: &FiniteAlgebra, b: &[usize], meet_form: bool) -> Result<(), Violation> {
    let n = a.size();
    let u = a.unit();
    forall(n, 0, "1 ≤ !1", |_| a.leq(u, b[u]))?;
    if meet_form {
        forall(n, 2, "!(x ∧ y) ≤ !y", |t| a.leq(b[a.meet(t[0], t[1])], b[t[1]]))?;
    } else {
        forall(n, 2, "x ≤ y implies !x ≤ !y", |t| !a.leq(t[0], t[1]) || a.leq(b[t[0]], b[t[1]]))?;
    }
    forall(n, 2, "!x!y ≤ !(xy)", |t| a.leq(a.mul(b[t[0]], b[t[1]]), b[a.mul(t[0], t[1])]))
}

/// The modal identities with `!` monotone. Requires a `!` table.
pub fn modal_monotone_form(a: &FiniteAlgebra) -> bool {
    a.bang_table().is_some_and(|b| modal(a, b, false).is_ok())
}

/// The modal identities with `!(x ∧ y) ≤ !y` in place of monotonicity.
pub fn modal_meet_form(a: &FiniteAlgebra) -> bool {
    a.bang_table().is_some_and(|b| modal(a, b, true).is_ok())
}

fn nacill(a: &FiniteAlgebra, b: &[usize]) -> Result<(), Violation> {
    let n = a.size();
    let m = |x, y| a.mul(x, y);
    forall(n, 1, "!x ≤ x", |t| a.leq(b[t[0]], t[0]))?;
    forall(n, 1, "!x ≤ !!x", |t| a.leq(b[t[0]], b[b[t[0]]]))?;
    forall(n, 1, "!x ≤ 1", |t| a.leq(b[t[0]], a.unit()))?;
    forall(n, 1, "!x ≤ !x!x", |t| a.leq(b[t[0]], m(b[t[0]], b[t[0]])))?;
    forall(n, 2, "!x y = y !x", |t| m(b[t[0]], t[1]) == m(t[1], b[t[0]]))?;
    forall(n, 3, "!x(yz) = (!x y)z", |t| m(b[t[0]], m(t[1], t[2])) == m(m(b[t[0]], t[1]), t[2]))?;
    forall(n, 3, "x(y!z) = (xy)!z", |t| m(t[0], m(t[1], b[t[2]])) == m(m(t[0], t[1]), b[t[2]]))
}

fn involutive(a: &FiniteAlgebra, zero: usize, cyclic: bool) -> Result<(), Violation> {
    let n = a.size();
    let nr = |x| a.lres(x, zero);
    let nl = |x| a.rres(zero, x);
    forall(n, 1, "~-x = x", |t| nr(nl(t[0])) == t[0])?;
    forall(n, 1, "-~x = x", |t| nl(nr(t[0])) == t[0])?;
    forall(n, 2, "~y/x = y\\-x", |t| a.rres(nr(t[1]), t[0]) == a.lres(t[1], nl(t[0])))?;
    if cyclic {
        forall(n, 1, "~x = -x", |t| nr(t[0]) == nl(t[0]))?;
    }
    Ok(())
}

/// Exhaustively verifies every identity of `cls`, reporting the first
/// failure in a fixed order (lattice, unit, residuation, structural, modal,
/// NACILL, involutive, cyclic) with the lexicographically least witness.
pub fn check_axioms(a: &FiniteAlgebra, cls: &AlgebraClass) -> Result<(), Violation> {
    rlug(a)?;
    structural(a, cls.structural)?;
    if cls.kind.has_bang() {
        let b = a.bang_table().ok_or_else(|| missing("a ! table"))?;
        let mono = modal(a, b, false);
        // Both formulations of the modal axioms must agree.
        if mono.is_ok() != modal(a, b, true).is_ok() {
            return Err(Violation {
                identity: "monotonicity of ! and !(x ∧ y) ≤ !y disagree".to_string(),
                witness: vec![],
            });
        }
        mono?;
        if cls.kind.is_nacill() {
            nacill(a, b)?;
        }
    }
    if cls.kind.is_involutive() {
        let z = a.zero().ok_or_else(|| missing("a 0 element"))?;
        involutive(a, z, cls.kind.is_cyclic())?;
    }
    Ok(())
}
