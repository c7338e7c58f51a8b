use std::fmt;

use serde::Serialize;

use super::AnalysisError;
use crate::engine::{widths, SignedRule, Widths, Word};
use crate::machines::{AgeTag, MachineSpec};

/// Run-length encoding of the ages along a history of M.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BriefHistory {
    pub runs: Vec<(AgeTag, usize)>,
}

impl BriefHistory {
    pub fn tags(&self) -> Vec<AgeTag> {
        self.runs.iter().map(|r| r.0).collect()
    }

    /// Position of the first run starting an occurrence of `pattern` as consecutive tags.
    pub fn find(&self, pattern: &[AgeTag]) -> Option<usize> {
        let tags = self.tags();
        if pattern.is_empty() {
            return Some(0);
        }
        tags.windows(pattern.len()).position(|w| w == pattern)
    }

    pub fn contains(&self, pattern: &[AgeTag]) -> bool {
        self.find(pattern).is_some()
    }

    pub fn reversed(&self) -> BriefHistory {
        BriefHistory { runs: self.runs.iter().rev().copied().collect() }
    }
}

impl fmt::Display for BriefHistory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (tag, _) in &self.runs {
            write!(f, "{tag}")?;
        }
        Ok(())
    }
}

pub fn brief_history(m: &MachineSpec, history: &[SignedRule]) -> Result<BriefHistory, AnalysisError> {
    let mut runs: Vec<(AgeTag, usize)> = Vec::new();
    for &r in history {
        let tag = m.age(r).ok_or_else(|| AnalysisError::WrongBase(format!("machine {} has no ages", m.name)))?;
        match runs.last_mut() {
            Some((t, count)) if *t == tag => *count += 1,
            _ => runs.push((tag, 1)),
        }
    }
    Ok(BriefHistory { runs })
}

/// True iff the brief history of `history` or of its inverse contains the full age chain.
pub fn is_long(m: &MachineSpec, history: &[SignedRule]) -> bool {
    let Ok(brief) = brief_history(m, history) else { return false };
    brief.contains(&AgeTag::CHAIN) || brief.reversed().contains(&AgeTag::CHAIN)
}

/// Per-word widths of a trace with their maxima.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WidthProfile {
    pub steps: Vec<Widths>,
    pub max_len: usize,
    pub argmax_len: usize,
    pub max_a_width: usize,
    pub max_norm: usize,
}

pub fn width_profile(m: &MachineSpec, trace: &[Word]) -> WidthProfile {
    let steps: Vec<Widths> = trace.iter().map(|w| widths(m, w)).collect();
    let (argmax_len, max_len) = steps.iter().enumerate().fold((0, 0), |best, (i, w)| if w.len > best.1 { (i, w.len) } else { best });
    WidthProfile {
        max_a_width: steps.iter().map(|w| w.a_width).max().unwrap_or(0),
        max_norm: steps.iter().map(|w| w.norm).max().unwrap_or(0),
        steps,
        max_len,
        argmax_len,
    }
}
