//! Formulas, structures (the free unital groupoid over formulas), one-hole
//! contexts and sequents, together with the canonical ASCII text format.
//!
//! Grammar:
//!
//! ```text
//! Formula   ::= var | 1 | 0 | top | bot | !F | ~F | -F
//!             | F * F | F \ F | F / F | F /\ F | F \/ F | ( F )
//! Structure ::= eps | Formula | ( S , S )
//! Sequent   ::= S => [F]
//! ```
//!
//! Binding strength is `!`,`~`,`-` > `*` > `\`,`/` > `/\` > `\/`. No binary
//! level associates: `a \ b \ c` and `a * b * c` are rejected. `~a` is sugar
//! for `a\0` and `-a` for `0/a`.

mod formula;
mod parse;
mod structure;

pub use formula::{BinOp, Constant, Formula};
pub use parse::{format_sequent, parse_formula, parse_sequent, parse_structure, Language, ParseError};
pub use structure::{Context, Sequent, Structure};

#[cfg(test)]
pub(crate) mod strategies {
    use proptest::prelude::*;

    use super::*;

    pub fn formula(depth: u32) -> impl Strategy<Value = Formula> {
        let leaf = prop_oneof![
            prop::sample::select(vec!["p", "q", "r", "a_1", "xY"]).prop_map(Formula::var),
            prop::sample::select(vec![Constant::One, Constant::Zero, Constant::Top, Constant::Bot])
                .prop_map(Formula::Const),
        ];
        leaf.prop_recursive(depth, 64, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(Formula::bang),
                (
                    prop::sample::select(vec![BinOp::And, BinOp::Or, BinOp::Fus, BinOp::Lres, BinOp::Rres]),
                    inner.clone(),
                    inner
                )
                    .prop_map(|(op, l, r)| Formula::bin(op, l, r)),
            ]
        })
    }

    pub fn structure(depth: u32) -> impl Strategy<Value = Structure> {
        let leaf = prop_oneof![
            1 => Just(Structure::Unit),
            6 => formula(3).prop_map(Structure::leaf),
        ];
        leaf.prop_recursive(depth, 32, 2, |inner| {
            (inner.clone(), inner).prop_map(|(l, r)| Structure::pair(l, r))
        })
    }

    pub fn sequent(depth: u32) -> impl Strategy<Value = Sequent> {
        (structure(depth), prop::option::weighted(0.8, formula(depth))).prop_map(|(x, a)| Sequent {
            antecedent: x,
            succedent: a,
        })
    }
}
