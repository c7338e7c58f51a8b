//! Generic S-machine semantics: admissible words, rules, application with free reduction, computations.
//!
//! A rule acts on every q-letter of a word at once: a positive part-`i` letter `q` is replaced by
//! `left · q' · right`, a negative one by the inverse of that image, and the result is freely reduced.
//! The a-word to the right of a positive part-`i` letter lives in sector `Y_i`, to the right of a
//! negative one in `Y_{i-1}`; a rule may only pass sectors whose letters it permits.

mod apply;
mod computation;
mod letter;
mod rule;
mod word;

use thiserror::Error;

pub use apply::{apply_rule, apply_with_census, applicable, check_applicable, enumerate_applicable, Census, Inapplicable};
pub use computation::{ensure_reduced, run_history, run_with, Computation, RunStats, TraceMode};
pub use letter::{copy_name, Alphabet, Letter, LetterId, LetterInfo, LetterKind, LetterSet};
pub use rule::{first_cancellation, inverse_history, is_reduced_history, Hardware, Part, Rule, SignedRule};
pub use word::{
    base, free_reduce, inverse_word, is_reduced, sector_after, sector_before, sectors, validate, widths, Sector, Widths,
    Word,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("unknown letter `{0}`")]
    UnknownLetter(String),
    #[error("unknown rule `{0}`")]
    UnknownRule(String),
    #[error("invalid word: {0}")]
    InvalidWord(String),
    #[error("rule not applicable: {0}")]
    NotApplicable(Inapplicable),
    #[error("rule not applicable at step {step}: {reason}")]
    NotApplicableAt { step: usize, reason: Inapplicable },
    #[error("history is not reduced: entries {index} and {} cancel", index + 1)]
    NonReducedHistory { index: usize },
}
