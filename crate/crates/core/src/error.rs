use thiserror::Error;

/// Errors raised by parsing, expansion and the decision procedures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown letter `{letter}` at line {line}, column {column}")]
    UnknownLetter {
        letter: String,
        line: usize,
        column: usize,
    },

    #[error("missing image for letter `{0}`")]
    MissingImage(String),

    #[error("the axiom is empty")]
    EmptyAxiom,

    #[error("letter `{0}` has an empty image but erasing rules are not allowed")]
    ErasingRule(String),

    #[error("the morphism is erasing (letter `{0}` maps to the empty word); a propagating system is required")]
    Erasing(String),

    #[error("the morphism is not injective; pass its injective simplification instead")]
    NonInjective,

    #[error("empty word in a candidate code")]
    EmptyCodeWord,

    #[error("invalid word `{0}`")]
    InvalidWord(String),

    #[error("word `{0}` is not a factor of the corpus")]
    NotInCorpus(String),

    #[error("length budget exceeded: result needs more than {limit} symbols")]
    BudgetExceeded { limit: usize },

    #[error("simplification search budget exceeded after {steps} refinement steps ({completed} steps of the chain completed)")]
    SearchBudget { steps: usize, completed: usize },

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
