//! Goodness-of-fit tests at the 1% level.

use statrs::distribution::{ChiSquared, ContinuousCDF, Discrete, Poisson};

pub const LEVEL: f64 = 0.01;

/// Asymptotic Kolmogorov–Smirnov critical value at 1%, times `√n`.
const KS_CRITICAL_1PCT: f64 = 1.6276;

#[derive(Debug, Clone, PartialEq)]
pub struct ChiSquareResult {
    pub statistic: f64,
    pub dof: usize,
    /// Upper 1% quantile of the chi-square law with `dof` degrees of freedom.
    pub critical: f64,
    pub p_value: f64,
}

impl ChiSquareResult {
    pub fn passed(&self) -> bool {
        self.statistic <= self.critical
    }
}

/// Pearson test of switch counts (`counts[k]` paths with `k` switches)
/// against Poisson(`mean`). Cells are merged from the left until each
/// expects at least five paths; the last cell collects the whole tail.
pub fn chi_square_poisson(counts: &[u64], mean: f64) -> ChiSquareResult {
    let n: u64 = counts.iter().sum();
    let nf = n as f64;
    let law = Poisson::new(mean).expect("positive Poisson mean");
    let mut cells: Vec<(f64, f64)> = Vec::new(); // (observed, expected)
    let mut observed = 0.0;
    let mut expected = 0.0;
    let mut covered = 0.0;
    let mut k = 0u64;
    // stop once the remaining tail expects fewer than five paths
    while nf * (1.0 - covered) >= 10.0 {
        let pk = law.pmf(k);
        observed += counts.get(k as usize).copied().unwrap_or(0) as f64;
        expected += nf * pk;
        covered += pk;
        if expected >= 5.0 {
            cells.push((observed, expected));
            observed = 0.0;
            expected = 0.0;
        }
        k += 1;
    }
    let rest: u64 = counts.iter().skip(k as usize).sum();
    let tail = (observed + rest as f64, expected + nf * (1.0 - covered).max(0.0));
    match cells.last_mut() {
        Some(last) if tail.1 < 5.0 => {
            last.0 += tail.0;
            last.1 += tail.1;
        }
        _ => cells.push(tail),
    }
    let statistic: f64 = cells.iter().map(|(o, e)| (o - e) * (o - e) / e).sum();
    let dof = cells.len().saturating_sub(1).max(1);
    let chi = ChiSquared::new(dof as f64).expect("positive degrees of freedom");
    ChiSquareResult {
        statistic,
        dof,
        critical: chi.inverse_cdf(1.0 - LEVEL),
        p_value: 1.0 - chi.cdf(statistic),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsResult {
    pub statistic: f64,
    pub critical: f64,
}

impl KsResult {
    pub fn passed(&self) -> bool {
        self.statistic <= self.critical
    }
}

/// One-sample Kolmogorov–Smirnov test against the uniform law on `[lo, hi]`.
/// Sorts `samples` in place.
pub fn ks_uniform(samples: &mut [f64], lo: f64, hi: f64) -> KsResult {
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    let statistic = samples
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let cdf = ((x - lo) / (hi - lo)).clamp(0.0, 1.0);
            let i = i as f64;
            (cdf - i / n).max((i + 1.0) / n - cdf)
        })
        .fold(0.0, f64::max);
    KsResult {
        statistic,
        critical: KS_CRITICAL_1PCT / n.sqrt(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_expected_counts_pass() {
        let law = Poisson::new(0.2).unwrap();
        let counts: Vec<u64> = (0..8).map(|k| (1e6 * law.pmf(k)).round() as u64).collect();
        let r = chi_square_poisson(&counts, 0.2);
        assert!(r.passed(), "{r:?}");
        assert!(r.statistic < 1.0);
    }

    #[test]
    fn wrong_mean_fails() {
        let law = Poisson::new(0.3).unwrap();
        let counts: Vec<u64> = (0..8).map(|k| (1e6 * law.pmf(k)).round() as u64).collect();
        assert!(!chi_square_poisson(&counts, 0.2).passed());
    }

    #[test]
    fn ks_on_grid_and_skewed() {
        let mut grid: Vec<f64> = (0..1000).map(|i| (i as f64 + 0.5) / 1000.0).collect();
        assert!(ks_uniform(&mut grid, 0.0, 1.0).passed());
        let mut skew: Vec<f64> = (0..1000).map(|i| ((i as f64 + 0.5) / 1000.0).powi(2)).collect();
        assert!(!ks_uniform(&mut skew, 0.0, 1.0).passed());
    }
}
