//! Shared truncation loop for the infinite series.

use crate::model::SeriesTruncation;

pub(crate) struct SeriesSum {
    pub value: f64,
    pub terms: usize,
    pub converged: bool,
    pub last_term: f64,
}

/// Sums `term(k)` for `k = 0, 1, ...` and stops after the first term whose
/// magnitude is below `tail_tol` once `may_stop(k)` holds, or at the budget.
pub(crate) fn sum_terms<F, S>(trunc: &SeriesTruncation, mut term: F, may_stop: S) -> SeriesSum
where
    F: FnMut(usize) -> f64,
    S: Fn(usize) -> bool,
{
    let mut value = 0.0;
    let mut last_term = f64::INFINITY;
    for k in 0..trunc.max_terms() {
        let t = term(k);
        value += t;
        last_term = t;
        if t.abs() < trunc.tail_tol() && may_stop(k) {
            return SeriesSum {
                value,
                terms: k + 1,
                converged: true,
                last_term,
            };
        }
    }
    SeriesSum {
        value,
        terms: trunc.max_terms(),
        converged: false,
        last_term,
    }
}
