//! Executable statements about computations: brief histories, the g-oracle, the binary counter,
//! the canonical long computation of M, per-lemma checkers and seeded counterexample searches.

mod brief;
mod canonical;
mod lemmas;
mod oracle;
mod search;

use thiserror::Error;

use crate::engine::EngineError;

pub use brief::{brief_history, is_long, width_profile, BriefHistory, WidthProfile};
pub use canonical::{
    canonical_end, canonical_history, canonical_start, replay_canonical, restriction_widths, Canonical, CanonicalReport,
};
pub use lemmas::{check_lemma, CheckerKey, Verdict};
pub use oracle::{
    adding_run, constant_length_run, counter_returns, counter_value, g_oracle, g_value, Branch, ConstantRun, GRun,
};
pub use search::{
    bounded_counterexample_search, merge_reports, run_checker_suite, BatchReport, SearchBudget, SearchKey, SuiteSummary,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("budget exceeded: {what} needs at least {needed} steps, cap is {cap}")]
    BudgetExceeded { what: String, needed: u64, cap: u64 },
    #[error("length-preserving continuation is not unique at step {step} ({count} candidates)")]
    NotUnique { step: usize, count: usize },
    #[error("no length-preserving computation reaches the target")]
    NoPath,
    #[error("tape is not a positive word")]
    MixedSigns,
    #[error("wrong base: {0}")]
    WrongBase(String),
    #[error("hypothesis not satisfied: {0}")]
    Inapplicable(String),
}

/// `2^n`, saturating.
pub(crate) fn pow2(n: u64) -> u64 {
    if n >= 63 {
        u64::MAX
    } else {
        1 << n
    }
}

#[cfg(test)]
mod tests;
