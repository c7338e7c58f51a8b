use serde::Serialize;

use crate::analysis::{g_value, AnalysisError};

/// log′x = max(log₂x, 1)
pub fn log_prime(x: f64) -> f64 {
    if x <= 2.0 {
        1.0
    } else {
        x.log2()
    }
}

/// ψ(n) = log′n / log′log′n
pub fn small_psi(n: f64) -> f64 {
    log_prime(n) / log_prime(log_prime(n))
}

/// Ψ(n) = n² log′n / log′log′n
pub fn big_psi(n: f64) -> f64 {
    n * n * small_psi(n)
}

/// n_i = 5 + 4g(i) + 2g(g(i)), n′_i = g(g(i)).
pub fn index_pair(i: u32) -> Result<(u64, u64), AnalysisError> {
    let g = g_value(i)?;
    let gi = u32::try_from(g).map_err(|_| AnalysisError::BudgetExceeded { what: format!("g(g({i}))"), needed: u64::MAX, cap: 0 })?;
    let gg = g_value(gi)?;
    Ok((5 + 4 * g + 2 * gg, gg))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundsRow {
    pub i: u32,
    pub n_i: Option<u64>,
    pub n_prime_i: Option<u64>,
    pub d_i: Option<f64>,
    pub lambda_i: Option<f64>,
    pub big_psi: Option<f64>,
    pub small_psi: Option<f64>,
    /// n_i / 3 < n′_i
    pub third_below: Option<bool>,
    pub note: Option<String>,
}

/// One row per `i` in `1..=i_max`; rows whose g(g(i)) exceeds the budget are marked out of budget.
pub fn bounds_table(i_max: u32, epsilon: f64) -> Vec<BoundsRow> {
    (1..=i_max)
        .map(|i| match index_pair(i) {
            Ok((n, np)) => {
                let nf = n as f64;
                let npf = np as f64;
                BoundsRow {
                    i,
                    n_i: Some(n),
                    n_prime_i: Some(np),
                    d_i: Some(npf.powf(0.75)),
                    lambda_i: Some(npf.powf(epsilon)),
                    big_psi: Some(big_psi(nf)),
                    small_psi: Some(small_psi(nf)),
                    third_below: Some(n < 3 * np),
                    note: None,
                }
            }
            Err(e) => BoundsRow {
                i,
                n_i: None,
                n_prime_i: None,
                d_i: None,
                lambda_i: None,
                big_psi: None,
                small_psi: None,
                third_below: None,
                note: Some(format!("out of budget: {e}")),
            },
        })
        .collect()
}
