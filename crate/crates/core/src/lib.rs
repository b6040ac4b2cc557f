//! Decision procedures for D0L systems: growth of letters, codes and
//! injective simplification, periodic points, interpretations and
//! circularity, with brute-force factor corpora as ground truth.
//!
//! The circularity decision for an injective system rests on one
//! equivalence: the system is not circular exactly when some word containing
//! an unbounded letter occurs with arbitrarily high powers. That property is
//! read off the injective simplification as a periodic point
//! (φ^ℓ)^∞(a) = w^ω.

pub mod algebraic;
pub mod circularity;
pub mod cli;
pub mod codes;
pub mod corpus;
pub mod error;
pub mod growth;
pub mod periodicity;
pub mod system;
pub mod word;

pub use error::{Error, Result};
pub use system::{parse_system, D0LSystem, Morphism};
pub use word::{Alphabet, Letter, Word};

/// Search bounds shared by the corpus-backed and scanning procedures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Longest factor kept in a corpus.
    pub corpus_len: usize,
    /// Length of the fixed-point prefix scanned for periods.
    pub prefix_cap: usize,
    /// Generations folded into a corpus before giving up on a fixpoint.
    pub generations: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            corpus_len: 24,
            prefix_cap: 4096,
            generations: 128,
        }
    }
}
