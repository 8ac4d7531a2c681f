//! Finite residuated lattice-ordered unital groupoids, optionally with `!`
//! and a dualizing `0`: axiom checking, evaluation, enumeration up to
//! isomorphism and countermodel search.
//!
//! Carriers are `{0, .., n-1}`. Operation tables are row-major, so
//! `mult[x * n + y]` is `x·y`.

mod class;
mod enumerate;
mod eval;
pub mod lattices;

use std::fmt;
use std::fmt::Write as _;

use thiserror::Error;

pub use class::{check_axioms, modal_meet_form, modal_monotone_form, AlgebraClass, ClassKind, Violation};
pub use enumerate::{
    canonical_key, countermodel, enumerate_algebras, AlgebraCache, Countermodel, Enumeration, DEFAULT_BUDGET,
};
pub use eval::{counter_valuation, eval, validates, EvalError, Valuation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("table {name} has {got} entries, expected {expected}")]
    Shape { name: &'static str, got: usize, expected: usize },
    #[error("element {value} in {name} is outside the carrier of size {n}")]
    Range { name: &'static str, value: usize, n: usize },
    #[error("join/meet do not form a lattice: {0}")]
    NotLattice(String),
    #[error("empty carrier")]
    Empty,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteAlgebra {
    n: usize,
    join: Vec<usize>,
    meet: Vec<usize>,
    mult: Vec<usize>,
    unit: usize,
    bang: Option<Vec<usize>>,
    zero: Option<usize>,
    lres: Vec<usize>,
    rres: Vec<usize>,
    top: usize,
    bottom: usize,
}

impl FiniteAlgebra {
    /// Validates shapes, ranges and the lattice laws, then derives the
    /// residual tables. Residuation itself is not assumed: `lres[x][z]` is the
    /// join of `{y : xy ≤ z}`, which is a true maximum exactly when the
    /// residuation law holds (see [`check_axioms`]).
    pub fn new(
        n: usize,
        join: Vec<usize>,
        meet: Vec<usize>,
        mult: Vec<usize>,
        unit: usize,
        bang: Option<Vec<usize>>,
        zero: Option<usize>,
    ) -> Result<FiniteAlgebra, AlgebraError> {
        if n == 0 {
            return Err(AlgebraError::Empty);
        }
        for (name, t) in [("join", &join), ("meet", &meet), ("mult", &mult)] {
            if t.len() != n * n {
                return Err(AlgebraError::Shape { name, got: t.len(), expected: n * n });
            }
            if let Some(&value) = t.iter().find(|&&v| v >= n) {
                return Err(AlgebraError::Range { name, value, n });
            }
        }
        if let Some(b) = &bang {
            if b.len() != n {
                return Err(AlgebraError::Shape { name: "bang", got: b.len(), expected: n });
            }
            if let Some(&value) = b.iter().find(|&&v| v >= n) {
                return Err(AlgebraError::Range { name: "bang", value, n });
            }
        }
        for (name, v) in [("unit", Some(unit)), ("zero", zero)] {
            if let Some(value) = v.filter(|&v| v >= n) {
                return Err(AlgebraError::Range { name, value, n });
            }
        }
        lattice_violation(n, &join, &meet).map_or(Ok(()), |m| Err(AlgebraError::NotLattice(m)))?;
        let leq = |x: usize, y: usize| meet[x * n + y] == x;
        let top = (0..n).find(|&t| (0..n).all(|x| leq(x, t))).expect("finite lattices have a top");
        let bottom = (0..n).find(|&b| (0..n).all(|x| leq(b, x))).expect("finite lattices have a bottom");
        let big_join = |it: &mut dyn Iterator<Item = usize>| it.fold(bottom, |acc, y| join[acc * n + y]);
        let mut lres = vec![0; n * n];
        let mut rres = vec![0; n * n];
        for x in 0..n {
            for z in 0..n {
                lres[x * n + z] = big_join(&mut (0..n).filter(|&y| leq(mult[x * n + y], z)));
                rres[z * n + x] = big_join(&mut (0..n).filter(|&y| leq(mult[y * n + x], z)));
            }
        }
        Ok(FiniteAlgebra { n, join, meet, mult, unit, bang, zero, lres, rres, top, bottom })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn join(&self, x: usize, y: usize) -> usize {
        self.join[x * self.n + y]
    }

    pub fn meet(&self, x: usize, y: usize) -> usize {
        self.meet[x * self.n + y]
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.mult[x * self.n + y]
    }

    /// `x\z`
    pub fn lres(&self, x: usize, z: usize) -> usize {
        self.lres[x * self.n + z]
    }

    /// `z/y`
    pub fn rres(&self, z: usize, y: usize) -> usize {
        self.rres[z * self.n + y]
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.meet(x, y) == x
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn bang(&self, x: usize) -> Option<usize> {
        self.bang.as_ref().map(|b| b[x])
    }

    pub fn bang_table(&self) -> Option<&[usize]> {
        self.bang.as_deref()
    }

    pub fn zero(&self) -> Option<usize> {
        self.zero
    }

    pub fn mult_table(&self) -> &[usize] {
        &self.mult
    }

    pub fn meet_table(&self) -> &[usize] {
        &self.meet
    }

    pub fn join_table(&self) -> &[usize] {
        &self.join
    }

    /// `~x = x\0`
    pub fn neg_r(&self, x: usize) -> Option<usize> {
        self.zero.map(|z| self.lres(x, z))
    }

    /// `-x = 0/x`
    pub fn neg_l(&self, x: usize) -> Option<usize> {
        self.zero.map(|z| self.rres(z, x))
    }

    pub fn with_bang(&self, bang: Option<Vec<usize>>) -> Result<FiniteAlgebra, AlgebraError> {
        FiniteAlgebra::new(self.n, self.join.clone(), self.meet.clone(), self.mult.clone(), self.unit, bang, self.zero)
    }

    pub fn with_zero(&self, zero: Option<usize>) -> Result<FiniteAlgebra, AlgebraError> {
        FiniteAlgebra::new(self.n, self.join.clone(), self.meet.clone(), self.mult.clone(), self.unit, self.bang.clone(), zero)
    }

    /// The algebra with `·` = `∧` and unit top on the lattice given by `meet`.
    pub fn brouwerian(n: usize, join: Vec<usize>, meet: Vec<usize>) -> Result<FiniteAlgebra, AlgebraError> {
        let top = (0..n).find(|&t| (0..n).all(|x| meet[x * n + t] == x)).ok_or(AlgebraError::Empty)?;
        FiniteAlgebra::new(n, join, meet.clone(), meet, top, None, None)
    }

    /// The `n`-element chain `0 < 1 < … < n-1` with the given multiplication
    /// and unit.
    pub fn chain(n: usize, mult: Vec<usize>, unit: usize) -> Result<FiniteAlgebra, AlgebraError> {
        let (join, meet) = lattices::chain(n);
        FiniteAlgebra::new(n, join, meet, mult, unit, None, None)
    }

    /// Parses the text format written by [`fmt::Display`].
    pub fn parse(text: &str) -> Result<FiniteAlgebra, AlgebraError> {
        parse_algebra(&mut text.lines().enumerate().map(|(i, l)| (i + 1, l)).peekable())
    }

    /// Parses a blank-line separated list of algebras; `#` lines are skipped.
    pub fn parse_many(text: &str) -> Result<Vec<FiniteAlgebra>, AlgebraError> {
        let mut out = Vec::new();
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l)).peekable();
        loop {
            while lines.peek().is_some_and(|(_, l)| is_blank(l)) {
                lines.next();
            }
            if lines.peek().is_none() {
                return Ok(out);
            }
            out.push(parse_algebra(&mut lines)?);
        }
    }
}

fn is_blank(l: &str) -> bool {
    let t = l.trim();
    t.is_empty() || t.starts_with('#')
}

/// First failed lattice law, as text.
pub(crate) fn lattice_violation(n: usize, join: &[usize], meet: &[usize]) -> Option<String> {
    let j = |x: usize, y: usize| join[x * n + y];
    let m = |x: usize, y: usize| meet[x * n + y];
    for x in 0..n {
        if j(x, x) != x || m(x, x) != x {
            return Some(format!("idempotency fails at x={x}"));
        }
        for y in 0..n {
            if j(x, y) != j(y, x) || m(x, y) != m(y, x) {
                return Some(format!("commutativity fails at x={x}, y={y}"));
            }
            if j(x, m(x, y)) != x || m(x, j(x, y)) != x {
                return Some(format!("absorption fails at x={x}, y={y}"));
            }
            for z in 0..n {
                if j(j(x, y), z) != j(x, j(y, z)) || m(m(x, y), z) != m(x, m(y, z)) {
                    return Some(format!("associativity fails at x={x}, y={y}, z={z}"));
                }
            }
        }
    }
    None
}

fn write_matrix(f: &mut String, name: &str, n: usize, t: &[usize]) {
    let _ = writeln!(f, "{name}");
    for row in t.chunks(n) {
        let _ = writeln!(f, "{}", row.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "));
    }
}

impl fmt::Display for FiniteAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        let _ = writeln!(s, "size {}", self.n);
        write_matrix(&mut s, "join", self.n, &self.join);
        write_matrix(&mut s, "meet", self.n, &self.meet);
        write_matrix(&mut s, "mult", self.n, &self.mult);
        let _ = writeln!(s, "unit {}", self.unit);
        if let Some(b) = &self.bang {
            let _ = writeln!(s, "bang {}", b.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "));
        }
        if let Some(z) = self.zero {
            let _ = writeln!(s, "zero {z}");
        }
        f.write_str(&s)
    }
}

type Lines<'a, I> = std::iter::Peekable<I>;

fn parse_algebra<'a, I: Iterator<Item = (usize, &'a str)>>(lines: &mut Lines<'a, I>) -> Result<FiniteAlgebra, AlgebraError> {
    let err = |line: usize, msg: String| AlgebraError::Parse { line, msg };
    let ints = |line: usize, text: &str| -> Result<Vec<usize>, AlgebraError> {
        text.split_whitespace()
            .map(|w| w.parse::<usize>().map_err(|_| err(line, format!("expected an integer, found {w:?}"))))
            .collect()
    };
    let mut n = None;
    let (mut join, mut meet, mut mult) = (None, None, None);
    let (mut unit, mut bang, mut zero) = (None, None, None);
    while let Some(&(line, text)) = lines.peek() {
        let t = text.trim();
        if t.is_empty() {
            break;
        }
        lines.next();
        if t.starts_with('#') {
            continue;
        }
        let (key, rest) = t.split_once(char::is_whitespace).unwrap_or((t, ""));
        match key {
            "size" => n = Some(ints(line, rest)?.first().copied().ok_or_else(|| err(line, "size needs a value".into()))?),
            "join" | "meet" | "mult" => {
                let size = n.ok_or_else(|| err(line, format!("{key} before size")))?;
                let mut table = Vec::with_capacity(size * size);
                for _ in 0..size {
                    let (l, row) = lines.next().ok_or_else(|| err(line, format!("{key} is truncated")))?;
                    let row = ints(l, row)?;
                    if row.len() != size {
                        return Err(err(l, format!("{key} row has {} entries, expected {size}", row.len())));
                    }
                    table.extend(row);
                }
                *match key {
                    "join" => &mut join,
                    "meet" => &mut meet,
                    _ => &mut mult,
                } = Some(table);
            }
            "unit" => unit = ints(line, rest)?.first().copied(),
            "zero" => zero = ints(line, rest)?.first().copied(),
            "bang" => bang = Some(ints(line, rest)?),
            // Frame dumps carry extra fields that plain algebras ignore.
            "closed_sets" | "K" => {}
            other => return Err(err(line, format!("unknown field {other:?}"))),
        }
    }
    let missing = |what: &str| err(0, format!("missing field {what}"));
    let n = n.ok_or_else(|| missing("size"))?;
    FiniteAlgebra::new(
        n,
        join.ok_or_else(|| missing("join"))?,
        meet.ok_or_else(|| missing("meet"))?,
        mult.ok_or_else(|| missing("mult"))?,
        unit.ok_or_else(|| missing("unit"))?,
        bang,
        zero,
    )
}
