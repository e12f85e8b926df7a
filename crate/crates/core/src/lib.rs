//! Additive and abelian complexity of words over integer alphabets, and
//! searches for k-powers modulo additive morphisms.

pub mod acceptance;
pub mod complexity;
pub mod document;
pub mod error;
pub mod measures;
pub mod powers;
pub mod search;
pub mod words;

pub use error::{Error, Result};
pub use measures::{CumulativeTable, Factor, MorphismMu, MuKind};
pub use words::{Alphabet, FiniteWord, Letter, WordSource};
