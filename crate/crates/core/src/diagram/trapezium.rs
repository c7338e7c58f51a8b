use serde::Serialize;

use super::DiagramError;
use crate::engine::{apply_with_census, widths, Computation, SignedRule, Word};
use crate::machines::MachineSpec;

/// The row of cells realizing one rule application.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Band {
    #[serde(skip)]
    pub rule: SignedRule,
    pub rule_name: String,
    pub q_cells: usize,
    pub a_cells: usize,
    pub source_len: usize,
    pub target_len: usize,
}

impl Band {
    pub fn cells(&self) -> usize {
        self.q_cells + self.a_cells
    }
}

#[derive(Clone, Debug)]
pub struct Trapezium {
    /// Bottom to top.
    pub bands: Vec<Band>,
    pub bottom: Word,
    pub top: Word,
}

impl Trapezium {
    pub fn height(&self) -> usize {
        self.bands.len()
    }

    /// Both sides are labelled by the history, one θ-edge per band.
    pub fn side_len(&self) -> usize {
        self.bands.len()
    }

    pub fn area(&self) -> u64 {
        self.bands.iter().map(|b| b.cells() as u64).sum()
    }

    pub fn perimeter(&self) -> u64 {
        (self.bottom.len() + self.top.len() + 2 * self.height()) as u64
    }
}

/// One band per step of a materialized computation.
pub fn build_trapezium(m: &MachineSpec, c: &Computation) -> Result<Trapezium, DiagramError> {
    let trace = c.trace.as_ref().ok_or(DiagramError::StreamedTraceUnsupported)?;
    let mut bands = Vec::with_capacity(c.history.len());
    for (i, &rule) in c.history.iter().enumerate() {
        let census = apply_with_census(m, &trace[i], rule)?;
        if census.word != trace[i + 1] {
            return Err(DiagramError::TraceMismatch { step: i + 1 });
        }
        bands.push(Band {
            rule,
            rule_name: m.rule_name(rule),
            q_cells: census.q_letters,
            a_cells: census.surviving_a,
            source_len: trace[i].len(),
            target_len: census.word.len(),
        });
    }
    Ok(Trapezium { bands, bottom: c.start.clone(), top: c.end.clone() })
}

/// Same as [`build_trapezium`] without keeping the trace: bands are recomputed from the start word.
pub fn build_trapezium_streamed(m: &MachineSpec, start: &Word, history: &[SignedRule]) -> Result<Trapezium, DiagramError> {
    let mut bands = Vec::with_capacity(history.len());
    let mut w = start.clone();
    for &rule in history {
        let census = apply_with_census(m, &w, rule)?;
        bands.push(Band {
            rule,
            rule_name: m.rule_name(rule),
            q_cells: census.q_letters,
            a_cells: census.surviving_a,
            source_len: w.len(),
            target_len: census.word.len(),
        });
        w = census.word;
    }
    Ok(Trapezium { bands, bottom: start.clone(), top: w })
}

/// Bands violating `cells <= 10 + |W_i|`, as `(index, cells, |W_i|)`.
pub fn band_bound_violations(t: &Trapezium) -> Vec<(usize, usize, usize)> {
    t.bands
        .iter()
        .enumerate()
        .filter(|(_, b)| b.cells() > 10 + b.source_len)
        .map(|(i, b)| (i, b.cells(), b.source_len))
        .collect()
}

/// C = area / (h (|W_0|_a + |W_t|_a + log′h)).
pub fn area_constant(m: &MachineSpec, t: &Trapezium) -> f64 {
    let h = t.height() as f64;
    if h == 0.0 {
        return 0.0;
    }
    let a = (widths(m, &t.bottom).a_width + widths(m, &t.top).a_width) as f64;
    t.area() as f64 / (h * (a + super::log_prime(h)))
}
