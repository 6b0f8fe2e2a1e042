//! Cirquent calculus CL15: formulas, cirquents and proofs; the game
//! semantics of formulas and cirquents over finite atom games; and a
//! compiler from proofs to strategies that win the proved formula under
//! every interpretation of its atoms.

pub mod bitstring;
pub mod calculus;
pub mod cirquent;
pub mod formula;
pub mod fusion;
pub mod game;
pub mod harness;
pub mod strategy;
mod syntax;

pub use syntax::SyntaxError;
