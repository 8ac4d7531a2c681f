//! Proof search, proof checking and finite algebraic models for
//! non-associative, non-commutative linear logics with the exponential `!`.

pub mod algebra;
pub mod calculus;
pub mod cli;
pub mod encoding;
pub mod frames;
pub mod prover;
pub mod syntax;
