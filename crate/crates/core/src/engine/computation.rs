use serde::Serialize;

use super::apply::{check_applicable, substitute};
use super::rule::{first_cancellation, SignedRule};
use super::word::{widths, Widths, Word};
use super::EngineError;
use crate::machines::MachineSpec;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TraceMode {
    /// Keep every intermediate word.
    Full,
    /// Keep running statistics, plus a word every `checkpoint_stride` steps when nonzero.
    Streamed { checkpoint_stride: usize },
}

/// Running width statistics of a computation.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct RunStats {
    pub steps: usize,
    pub max_len: usize,
    pub argmax_len: usize,
    pub max_a_width: usize,
    pub max_norm: usize,
    pub min_len: usize,
}

impl RunStats {
    fn new(w: Widths) -> Self {
        RunStats {
            steps: 0,
            max_len: w.len,
            argmax_len: 0,
            max_a_width: w.a_width,
            max_norm: w.norm,
            min_len: w.len,
        }
    }

    fn record(&mut self, step: usize, w: Widths) {
        self.steps = step;
        if w.len > self.max_len {
            self.max_len = w.len;
            self.argmax_len = step;
        }
        self.min_len = self.min_len.min(w.len);
        self.max_a_width = self.max_a_width.max(w.a_width);
        self.max_norm = self.max_norm.max(w.norm);
    }
}

/// A start word, a reduced history and (optionally) the words it passes through.
#[derive(Clone, Debug)]
pub struct Computation {
    pub start: Word,
    pub history: Vec<SignedRule>,
    /// `trace[i]` is the word after `i` steps; present in [`TraceMode::Full`].
    pub trace: Option<Vec<Word>>,
    /// `(step, word)` checkpoints of a streamed run.
    pub checkpoints: Vec<(usize, Word)>,
    pub stats: RunStats,
    pub end: Word,
}

impl Computation {
    pub fn len(&self) -> usize {
        self.history.len()
    }

    pub fn is_empty(&self) -> bool {
        self.history.is_empty()
    }

    pub fn is_materialized(&self) -> bool {
        self.trace.is_some()
    }
}

/// Rejects histories containing a cancelling pair `τ τ^-1`.
pub fn ensure_reduced(history: &[SignedRule]) -> Result<(), EngineError> {
    match first_cancellation(history) {
        Some(index) => Err(EngineError::NonReducedHistory { index }),
        None => Ok(()),
    }
}

/// Runs `history` from `start`, calling `observe(step, rule, before, after)` after every step.
///
/// Fails fast at the first inapplicable rule.
pub fn run_with<F>(m: &MachineSpec, start: &Word, history: &[SignedRule], mut observe: F) -> Result<Word, EngineError>
where
    F: FnMut(usize, SignedRule, &Word, &Word),
{
    ensure_reduced(history)?;
    let mut current = start.clone();
    for (i, &rule) in history.iter().enumerate() {
        check_applicable(m, &current, rule).map_err(|reason| EngineError::NotApplicableAt { step: i, reason })?;
        let next = substitute(m, &current, rule);
        observe(i + 1, rule, &current, &next);
        current = next;
    }
    Ok(current)
}

pub fn run_history(
    m: &MachineSpec,
    start: &Word,
    history: &[SignedRule],
    mode: TraceMode,
) -> Result<Computation, EngineError> {
    let mut stats = RunStats::new(widths(m, start));
    let mut trace = match mode {
        TraceMode::Full => Some(vec![start.clone()]),
        TraceMode::Streamed { .. } => None,
    };
    let mut checkpoints = Vec::new();
    if let TraceMode::Streamed { checkpoint_stride } = mode {
        if checkpoint_stride > 0 {
            checkpoints.push((0, start.clone()));
        }
    }
    let end = run_with(m, start, history, |step, _, _, after| {
        stats.record(step, widths(m, after));
        match (&mut trace, mode) {
            (Some(t), _) => t.push(after.clone()),
            (None, TraceMode::Streamed { checkpoint_stride }) if checkpoint_stride > 0 && step % checkpoint_stride == 0 => {
                checkpoints.push((step, after.clone()));
            }
            _ => {}
        }
    })?;
    Ok(Computation { start: start.clone(), history: history.to_vec(), trace, checkpoints, stats, end })
}
