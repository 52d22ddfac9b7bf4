//! Exact all-pairs similarity by fixed-point iteration.
//!
//! Starting from the identity table, each sweep computes
//! `s_{k+1}(a, b) = C * Σ p((a', b') | (a, b)) * s_k(a', b')` for every
//! off-diagonal pair while the diagonal stays pinned at 1. Iterates are
//! nondecreasing and bounded by 1; the solver checks this on every sweep.
//!
//! Storage is a dense row-major `n × n` table with two ping-pong buffers, so
//! the node count is capped by [`SolveConfig::memory_gate`].

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::NodeId;
use crate::kernel::Kernel;

/// Largest tolerated decrease between consecutive iterates, and overshoot above 1.
pub const MONOTONE_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveConfig {
    pub decay: f64,
    /// Stop once the max-norm change of a sweep falls below this.
    pub epsilon: f64,
    pub max_iterations: usize,
    pub memory_gate: usize,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            decay: 0.8,
            epsilon: 1e-9,
            max_iterations: 100,
            memory_gate: 20_000,
        }
    }
}

impl SolveConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.decay > 0.0 && self.decay < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "decay C must lie in (0,1), got {}",
                self.decay
            )));
        }
        if self.epsilon.is_nan() || self.epsilon <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidConfig(
                "max_iterations must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityTable {
    n: usize,
    values: Vec<f64>,
    pub iterations_run: usize,
    /// Max-norm change of the last sweep.
    pub final_delta: f64,
    pub converged: bool,
}

impl SimilarityTable {
    /// `s_0`: ones on the diagonal, zeros elsewhere.
    pub fn identity(n: usize) -> Self {
        let mut values = vec![0.0; n * n];
        for x in 0..n {
            values[x * n + x] = 1.0;
        }
        SimilarityTable {
            n,
            values,
            iterations_run: 0,
            final_delta: f64::INFINITY,
            converged: false,
        }
    }

    /// Wraps row-major values; the diagonal is forced to 1.
    pub fn from_values(n: usize, mut values: Vec<f64>) -> Result<Self> {
        if values.len() != n * n {
            return Err(Error::InvalidConfig(format!(
                "expected {} values for a {n}x{n} table, got {}",
                n * n,
                values.len()
            )));
        }
        for x in 0..n {
            values[x * n + x] = 1.0;
        }
        Ok(SimilarityTable {
            n,
            values,
            iterations_run: 0,
            final_delta: f64::INFINITY,
            converged: false,
        })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, a: NodeId, b: NodeId) -> f64 {
        self.values[a * self.n + b]
    }

    /// Overwrites one off-diagonal entry.
    pub fn set(&mut self, a: NodeId, b: NodeId, value: f64) {
        assert_ne!(a, b, "the diagonal is pinned at 1");
        self.values[a * self.n + b] = value;
    }

    pub fn row(&self, a: NodeId) -> &[f64] {
        &self.values[a * self.n..(a + 1) * self.n]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Off-diagonal entries strictly above `threshold`, row-major.
    pub fn entries_above(
        &self,
        threshold: f64,
    ) -> impl Iterator<Item = (NodeId, NodeId, f64)> + '_ {
        (0..self.n).flat_map(move |a| {
            self.row(a)
                .iter()
                .enumerate()
                .filter(move |&(b, &v)| b != a && v > threshold)
                .map(move |(b, &v)| (a, b, v))
        })
    }

    pub fn max_abs_diff(&self, other: &SimilarityTable) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }
}

/// One sweep of the iterative form into `next`. Returns the max-norm change.
fn sweep(kernel: &Kernel<'_>, decay: f64, prev: &[f64], next: &mut [f64]) -> f64 {
    let n = kernel.graph().node_count();
    next.par_chunks_mut(n)
        .enumerate()
        .map(|(a, row)| {
            let mut delta: f64 = 0.0;
            for (b, out) in row.iter_mut().enumerate() {
                *out = if a == b {
                    1.0
                } else {
                    let d = kernel.transition_unchecked(a, b);
                    decay
                        * d.entries
                            .iter()
                            .fold(0.0, |acc, &((x, y), p)| acc + p * prev[x * n + y])
                };
                delta = delta.max((*out - prev[a * n + b]).abs());
            }
            delta
        })
        .reduce(|| 0.0, f64::max)
}

fn check_monotone(prev: &[f64], next: &[f64], n: usize, iteration: usize) -> Result<()> {
    for (i, (&p, &q)) in prev.iter().zip(next).enumerate() {
        let drop = (p - q).max(q - 1.0).max(-q);
        if drop > MONOTONE_SLACK {
            return Err(Error::NonMonotone {
                iteration,
                a: i / n,
                b: i % n,
                drop,
            });
        }
    }
    Ok(())
}

fn check_capacity(kernel: &Kernel<'_>, cfg: &SolveConfig) -> Result<usize> {
    cfg.validate()?;
    let n = kernel.graph().node_count();
    if n > cfg.memory_gate {
        return Err(Error::Capacity {
            node_count: n,
            memory_gate: cfg.memory_gate,
        });
    }
    Ok(n)
}

/// Solves from `s_0 = I` until the sweep delta drops below `epsilon` or the iteration cap.
pub fn solve(kernel: &Kernel<'_>, cfg: &SolveConfig) -> Result<SimilarityTable> {
    solve_observed(kernel, cfg, |_, _, _| {})
}

/// Like [`solve`], calling `observer(k, s_k, s_{k+1})` after every sweep (row-major slices).
pub fn solve_observed<F>(
    kernel: &Kernel<'_>,
    cfg: &SolveConfig,
    mut observer: F,
) -> Result<SimilarityTable>
where
    F: FnMut(usize, &[f64], &[f64]),
{
    let n = check_capacity(kernel, cfg)?;
    let mut table = SimilarityTable::identity(n);
    let mut next = table.values.clone();
    for k in 0..cfg.max_iterations {
        let delta = sweep(kernel, cfg.decay, &table.values, &mut next);
        observer(k, &table.values, &next);
        check_monotone(&table.values, &next, n, k + 1)?;
        std::mem::swap(&mut table.values, &mut next);
        table.iterations_run = k + 1;
        table.final_delta = delta;
        if delta < cfg.epsilon {
            table.converged = true;
            break;
        }
    }
    Ok(table)
}

/// Iterates from an arbitrary starting table without the monotonicity check.
///
/// Any start converges to the same fixed point, since each sweep contracts the
/// max-norm distance to it by a factor of `C`.
pub fn refine(
    kernel: &Kernel<'_>,
    cfg: &SolveConfig,
    start: SimilarityTable,
) -> Result<SimilarityTable> {
    let n = check_capacity(kernel, cfg)?;
    if start.n != n {
        return Err(Error::DimensionMismatch {
            table: start.n,
            graph: n,
        });
    }
    let mut table = start;
    let mut next = table.values.clone();
    for k in 0..cfg.max_iterations {
        let delta = sweep(kernel, cfg.decay, &table.values, &mut next);
        std::mem::swap(&mut table.values, &mut next);
        table.iterations_run = k + 1;
        table.final_delta = delta;
        if delta < cfg.epsilon {
            table.converged = true;
            break;
        }
    }
    Ok(table)
}

/// Max over off-diagonal pairs of `|s(a,b) - C Σ p((a',b')|(a,b)) s(a',b')|`.
pub fn residual(kernel: &Kernel<'_>, table: &SimilarityTable, decay: f64) -> Result<f64> {
    let n = kernel.graph().node_count();
    if table.n != n {
        return Err(Error::DimensionMismatch {
            table: table.n,
            graph: n,
        });
    }
    let mut image = vec![0.0; n * n];
    sweep(kernel, decay, &table.values, &mut image);
    Ok(table
        .values
        .iter()
        .zip(&image)
        .enumerate()
        .filter(|(i, _)| i / n.max(1) != i % n.max(1))
        .map(|(_, (s, t))| (s - t).abs())
        .fold(0.0, f64::max))
}
