use serde::Serialize;

use super::{big_psi, build_trapezium_streamed, glue, log_prime, DiagramError};
use crate::analysis::{canonical_history, canonical_start};
use crate::config::Budget;
use crate::engine::widths;
use crate::machines::MachineSpec;

/// Glued copies of the canonical trapezium for n = i.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub i: u32,
    pub n_i: u64,
    pub k: u64,
    pub bottom_len: usize,
    pub top_len: usize,
    pub bottom_a_width: usize,
    pub area_delta: u64,
    pub area: u64,
    pub perimeter: u64,
    /// perimeter / (4 n_i)
    pub perimeter_ratio: f64,
    /// area / Ψ(perimeter)
    pub psi_ratio: f64,
    /// area / Ψ(n_i)
    pub shape_ratio: f64,
}

/// round(n / log′log′n)
pub fn copies_for(n: u64) -> u64 {
    let nf = n as f64;
    ((nf / log_prime(log_prime(nf))).round() as u64).max(1)
}

pub fn lower_bound_witness(m: &MachineSpec, i: u32, budget: &Budget) -> Result<Witness, DiagramError> {
    let c = canonical_history(m, i, budget.max_streamed)?;
    let start = canonical_start(m, i);
    let t = build_trapezium_streamed(m, &start, &c.history)?;
    let n_i = t.height() as u64;
    let k = copies_for(n_i);
    let g = glue(&t, k);
    Ok(Witness {
        i,
        n_i,
        k,
        bottom_len: t.bottom.len(),
        top_len: t.top.len(),
        bottom_a_width: widths(m, &t.bottom).a_width,
        area_delta: t.area(),
        area: g.area,
        perimeter: g.perimeter,
        perimeter_ratio: g.perimeter as f64 / (4 * n_i) as f64,
        psi_ratio: g.area as f64 / big_psi(g.perimeter as f64),
        shape_ratio: g.area as f64 / big_psi(n_i as f64),
    })
}
