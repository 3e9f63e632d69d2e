//! Exact simulation of the flight.
//!
//! Work is split into chunks of `McConfig::chunk` samples. Chunk `i` draws
//! from its own ChaCha8 stream `i` under the run seed, and per-chunk
//! statistics are merged in a fixed binary tree over chunk indices. The
//! result is therefore a function of the configuration alone: a
//! [`ChunkRunner`] may evaluate chunks in any order or in parallel.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::model::{check_time, FlightParams, McConfig, McEstimate, Vec3};
use crate::{Error, Result};

/// Smallest sample count accepted by the characteristic-function estimators.
pub const MIN_CF_SAMPLES: u64 = 10_000;

/// Endpoint of one simulated path.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PathSample {
    pub position: Vec3,
    pub n_switches: u32,
}

/// Evaluates independent chunks and returns their results in index order.
pub trait ChunkRunner {
    fn map_chunks<T, F>(&self, n_chunks: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync;
}

/// Runs chunks one after another on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct SerialRunner;

impl ChunkRunner for SerialRunner {
    fn map_chunks<T, F>(&self, n_chunks: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync,
    {
        (0..n_chunks).map(f).collect()
    }
}

/// Random stream for chunk `chunk` of a run with seed `seed`.
pub fn substream(seed: u64, chunk: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk as u64);
    rng
}

/// Uniform on `[0, 1)` with 53 random bits.
pub fn uniform<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform direction on the unit sphere: `cos θ` uniform on `[−1, 1]`,
/// azimuth uniform on `[0, 2π)`.
pub fn sample_direction<R: RngCore + ?Sized>(rng: &mut R) -> Vec3 {
    let z = 2.0 * uniform(rng) - 1.0;
    let phi = 2.0 * PI * uniform(rng);
    let s = libm::sqrt((1.0 - z) * (1.0 + z));
    let (sin_phi, cos_phi) = libm::sincos(phi);
    Vec3::new(s * cos_phi, s * sin_phi, z)
}

fn path<R: RngCore + ?Sized>(t: f64, p: &FlightParams, rng: &mut R) -> PathSample {
    let c = p.c();
    let rate = p.lambda();
    let mut remaining = t;
    let mut position = Vec3::ZERO;
    let mut n_switches = 0u32;
    loop {
        let direction = sample_direction(rng);
        let hold = -libm::log1p(-uniform(rng)) / rate;
        if hold >= remaining {
            position = position + direction * (c * remaining);
            return PathSample {
                position,
                n_switches,
            };
        }
        position = position + direction * (c * hold);
        remaining -= hold;
        n_switches += 1;
    }
}

/// Position at time `t` with exponential holding times between switches.
pub fn sample_position<R: RngCore + ?Sized>(
    t: f64,
    p: &FlightParams,
    rng: &mut R,
) -> Result<PathSample> {
    check_time(t)?;
    Ok(path(t, p, rng))
}

fn path_given_n<R: RngCore + ?Sized>(n: u32, t: f64, p: &FlightParams, rng: &mut R) -> Vec3 {
    // Switch epochs are the order statistics of n uniforms on (0, t),
    // drawn from the largest down: U_(i) = U_(i+1) · V^{1/i}.
    let ct = p.radius(t);
    let mut upper = 1.0;
    let mut position = Vec3::ZERO;
    for i in (1..=n).rev() {
        let v = 1.0 - uniform(rng);
        let epoch = upper * libm::pow(v, 1.0 / f64::from(i));
        position = position + sample_direction(rng) * (ct * (upper - epoch));
        upper = epoch;
    }
    position + sample_direction(rng) * (ct * upper)
}

/// Position at time `t` conditioned on exactly `n` switches in `[0, t]`.
pub fn sample_position_given_n<R: RngCore + ?Sized>(
    n: u32,
    t: f64,
    p: &FlightParams,
    rng: &mut R,
) -> Result<Vec3> {
    check_time(t)?;
    Ok(path_given_n(n, t, p, rng))
}

fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= 16 {
        return values.iter().sum();
    }
    let (left, right) = values.split_at(values.len() / 2);
    pairwise_sum(left) + pairwise_sum(right)
}

#[derive(Debug, Clone, Copy)]
struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn of(values: &[f64]) -> Moments {
        if values.is_empty() {
            return Moments {
                n: 0,
                mean: 0.0,
                m2: 0.0,
            };
        }
        let n = values.len() as f64;
        let mean = pairwise_sum(values) / n;
        let squares: Vec<f64> = values.iter().map(|v| (v - mean) * (v - mean)).collect();
        Moments {
            n: values.len() as u64,
            mean,
            m2: pairwise_sum(&squares),
        }
    }

    fn merge(a: Moments, b: Moments) -> Moments {
        if a.n == 0 {
            return b;
        }
        if b.n == 0 {
            return a;
        }
        let n = a.n + b.n;
        let (na, nb, nf) = (a.n as f64, b.n as f64, n as f64);
        let delta = b.mean - a.mean;
        Moments {
            n,
            mean: a.mean + delta * nb / nf,
            m2: a.m2 + b.m2 + delta * delta * na * nb / nf,
        }
    }

    fn merge_tree(parts: &[Moments]) -> Moments {
        match parts.len() {
            0 => Moments::of(&[]),
            1 => parts[0],
            len => {
                let (left, right) = parts.split_at(len / 2);
                Moments::merge(Moments::merge_tree(left), Moments::merge_tree(right))
            }
        }
    }

    fn estimate(&self) -> McEstimate {
        let std_error = if self.n > 1 {
            let var = self.m2 / (self.n - 1) as f64;
            libm::sqrt(var / self.n as f64)
        } else {
            0.0
        };
        McEstimate {
            mean: self.mean,
            std_error,
            samples: self.n,
        }
    }
}

/// Means of `K` statistics of one draw each, merged deterministically.
fn estimate_stats<const K: usize, R, F>(cfg: &McConfig, runner: &R, draw: F) -> [McEstimate; K]
where
    R: ChunkRunner,
    F: Fn(&mut ChaCha8Rng) -> [f64; K] + Sync,
{
    let per_chunk = runner.map_chunks(cfg.n_chunks(), |chunk| {
        let mut rng = substream(cfg.seed(), chunk);
        let len = cfg.chunk_len(chunk) as usize;
        let mut columns: [Vec<f64>; K] = core::array::from_fn(|_| Vec::with_capacity(len));
        for _ in 0..len {
            let stats = draw(&mut rng);
            for (column, value) in columns.iter_mut().zip(stats) {
                column.push(value);
            }
        }
        columns.map(|column| Moments::of(&column))
    });
    core::array::from_fn(|k| {
        let parts: Vec<Moments> = per_chunk.iter().map(|m| m[k]).collect();
        Moments::merge_tree(&parts).estimate()
    })
}

/// Real and imaginary parts of an empirical characteristic function.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CfEstimate {
    pub real: McEstimate,
    pub imag: McEstimate,
}

fn check_cf_query(alpha_norm: f64, cfg: &McConfig) -> Result<()> {
    if !alpha_norm.is_finite() || alpha_norm < 0.0 {
        return Err(Error::InvalidParameter {
            what: "alpha_norm",
            value: alpha_norm,
        });
    }
    if cfg.samples() < MIN_CF_SAMPLES {
        return Err(Error::InvalidConfig(
            "characteristic-function estimates need at least 10^4 samples",
        ));
    }
    Ok(())
}

/// `E exp(i α·X(t))` with `α = (alpha_norm, 0, 0)`.
pub fn estimate_cf<R: ChunkRunner>(
    alpha_norm: f64,
    t: f64,
    p: &FlightParams,
    cfg: &McConfig,
    runner: &R,
) -> Result<CfEstimate> {
    check_time(t)?;
    check_cf_query(alpha_norm, cfg)?;
    let [real, imag] = estimate_stats(cfg, runner, |rng| {
        let phase = alpha_norm * path(t, p, rng).position.x1;
        [libm::cos(phase), libm::sin(phase)]
    });
    Ok(CfEstimate { real, imag })
}

/// As [`estimate_cf`] for the law conditioned on exactly `n` switches.
pub fn estimate_conditional_cf<R: ChunkRunner>(
    n: u32,
    alpha_norm: f64,
    t: f64,
    p: &FlightParams,
    cfg: &McConfig,
    runner: &R,
) -> Result<CfEstimate> {
    check_time(t)?;
    check_cf_query(alpha_norm, cfg)?;
    let [real, imag] = estimate_stats(cfg, runner, |rng| {
        let phase = alpha_norm * path_given_n(n, t, p, rng).x1;
        [libm::cos(phase), libm::sin(phase)]
    });
    Ok(CfEstimate { real, imag })
}

/// Counts of `f(sample)` per chunk, merged by index.
fn count_paths<R, F>(cfg: &McConfig, runner: &R, t: f64, p: &FlightParams, f: F) -> u64
where
    R: ChunkRunner,
    F: Fn(&PathSample) -> bool + Sync,
{
    runner
        .map_chunks(cfg.n_chunks(), |chunk| {
            let mut rng = substream(cfg.seed(), chunk);
            (0..cfg.chunk_len(chunk))
                .filter(|_| f(&path(t, p, &mut rng)))
                .count() as u64
        })
        .iter()
        .sum()
}

fn binomial(count: u64, samples: u64) -> McEstimate {
    let n = samples as f64;
    let mean = count as f64 / n;
    McEstimate {
        mean,
        std_error: libm::sqrt(mean * (1.0 - mean) / n),
        samples,
    }
}

/// `Pr{‖X(t)‖ ≤ r}` with its binomial standard error.
pub fn estimate_ball_prob<R: ChunkRunner>(
    r: f64,
    t: f64,
    p: &FlightParams,
    cfg: &McConfig,
    runner: &R,
) -> Result<McEstimate> {
    check_time(t)?;
    if !(r >= 0.0) {
        return Err(Error::InvalidParameter { what: "r", value: r });
    }
    if r >= p.radius(t) {
        return Ok(McEstimate {
            mean: 1.0,
            std_error: 0.0,
            samples: cfg.samples(),
        });
    }
    let count = count_paths(cfg, runner, t, p, |s| s.position.norm() <= r);
    Ok(binomial(count, cfg.samples()))
}

/// Empirical law of `‖X(t)‖` on equal bins over `[0, ct]`.
///
/// Paths without a switch sit on the sphere and are reported as `atom`
/// rather than in the last bin, so `Σ mass + atom = 1`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RadialHistogram {
    pub edges: Vec<f64>,
    pub mass: Vec<f64>,
    pub std_error: Vec<f64>,
    pub atom: f64,
    pub samples: u64,
}

/// Radial histogram of `X(t)`, or of `X(t)` given `condition` switches.
pub fn radial_histogram<R: ChunkRunner>(
    t: f64,
    p: &FlightParams,
    cfg: &McConfig,
    bins: usize,
    condition: Option<u32>,
    runner: &R,
) -> Result<RadialHistogram> {
    check_time(t)?;
    if bins == 0 {
        return Err(Error::InvalidConfig("at least one bin is needed"));
    }
    let ct = p.radius(t);
    let per_chunk = runner.map_chunks(cfg.n_chunks(), |chunk| {
        let mut rng = substream(cfg.seed(), chunk);
        // last slot counts the atom
        let mut counts = vec![0u64; bins + 1];
        for _ in 0..cfg.chunk_len(chunk) {
            let (position, n) = match condition {
                Some(n) => (path_given_n(n, t, p, &mut rng), n),
                None => {
                    let s = path(t, p, &mut rng);
                    (s.position, s.n_switches)
                }
            };
            let slot = if n == 0 {
                bins
            } else {
                ((position.norm() / ct * bins as f64) as usize).min(bins - 1)
            };
            counts[slot] += 1;
        }
        counts
    });
    let mut counts = vec![0u64; bins + 1];
    for chunk in &per_chunk {
        for (total, c) in counts.iter_mut().zip(chunk) {
            *total += c;
        }
    }
    let samples = cfg.samples();
    let estimates: Vec<McEstimate> = counts[..bins].iter().map(|&c| binomial(c, samples)).collect();
    Ok(RadialHistogram {
        edges: (0..=bins).map(|i| ct * i as f64 / bins as f64).collect(),
        mass: estimates.iter().map(|e| e.mean).collect(),
        std_error: estimates.iter().map(|e| e.std_error).collect(),
        atom: counts[bins] as f64 / samples as f64,
        samples,
    })
}

/// Switch-count frequencies and the largest `‖X(t)‖/(ct)` seen.
#[derive(Debug, Clone, PartialEq)]
pub struct Survey {
    /// `switch_counts[k]` paths had exactly `k` switches.
    pub switch_counts: Vec<u64>,
    pub max_radius_ratio: f64,
    pub samples: u64,
}

pub fn survey<R: ChunkRunner>(
    t: f64,
    p: &FlightParams,
    cfg: &McConfig,
    runner: &R,
) -> Result<Survey> {
    check_time(t)?;
    let ct = p.radius(t);
    let per_chunk = runner.map_chunks(cfg.n_chunks(), |chunk| {
        let mut rng = substream(cfg.seed(), chunk);
        let mut counts: Vec<u64> = Vec::new();
        let mut max_ratio = 0.0f64;
        for _ in 0..cfg.chunk_len(chunk) {
            let s = path(t, p, &mut rng);
            let k = s.n_switches as usize;
            if counts.len() <= k {
                counts.resize(k + 1, 0);
            }
            counts[k] += 1;
            max_ratio = max_ratio.max(s.position.norm() / ct);
        }
        (counts, max_ratio)
    });
    let mut switch_counts: Vec<u64> = Vec::new();
    let mut max_radius_ratio = 0.0f64;
    for (counts, ratio) in per_chunk {
        if switch_counts.len() < counts.len() {
            switch_counts.resize(counts.len(), 0);
        }
        for (total, c) in switch_counts.iter_mut().zip(counts) {
            *total += c;
        }
        max_radius_ratio = max_radius_ratio.max(ratio);
    }
    Ok(Survey {
        switch_counts,
        max_radius_ratio,
        samples: cfg.samples(),
    })
}

/// Every simulated endpoint, in chunk order.
pub fn sample_paths<R: ChunkRunner>(
    t: f64,
    p: &FlightParams,
    cfg: &McConfig,
    runner: &R,
) -> Result<Vec<PathSample>> {
    check_time(t)?;
    let per_chunk = runner.map_chunks(cfg.n_chunks(), |chunk| {
        let mut rng = substream(cfg.seed(), chunk);
        (0..cfg.chunk_len(chunk))
            .map(|_| path(t, p, &mut rng))
            .collect::<Vec<_>>()
    });
    Ok(per_chunk.into_iter().flatten().collect())
}
