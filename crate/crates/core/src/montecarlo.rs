//! Monte Carlo estimation of pair similarity by simulating compound walks.
//!
//! Each sample draws its random numbers from a private stream keyed by
//! `(seed, a, b, sample_index)`, so the estimate does not depend on how
//! samples are spread across threads. Samples are aggregated as a histogram
//! of meeting times; integer counts merge exactly in any order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::NodeId;
use crate::kernel::Kernel;

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McConfig {
    pub samples: usize,
    /// Walks that have not met after this many steps score 0.
    pub max_steps: usize,
    pub decay: f64,
    pub seed: u64,
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig {
            samples: 200,
            max_steps: 15,
            decay: 0.8,
            seed: DEFAULT_SEED,
        }
    }
}

impl McConfig {
    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::InvalidConfig("samples must be at least 1".into()));
        }
        if self.max_steps == 0 {
            return Err(Error::InvalidConfig("max_steps must be at least 1".into()));
        }
        if !(self.decay > 0.0 && self.decay < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "decay C must lie in (0,1), got {}",
                self.decay
            )));
        }
        Ok(())
    }

    /// Upper bound on the bias from truncating walks at `max_steps`: `C^(L+1) / (1 - C)`.
    pub fn truncation_bound(&self) -> f64 {
        self.decay.powi(self.max_steps as i32 + 1) / (1.0 - self.decay)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Meeting {
    Finite(usize),
    NotMet,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkOutcome {
    pub meeting: Meeting,
    /// `C^t` for a meeting at step `t`, otherwise 0.
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    /// Sample standard deviation over `sqrt(samples_used)`.
    pub std_error: f64,
    pub samples_used: usize,
    /// Number of samples meeting at step `t`, for `t` in `0..=max_steps`.
    pub meeting_counts: Vec<u64>,
    pub not_met: u64,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes a sequence of words into one 64-bit seed.
pub fn derive_seed(seed: u64, words: &[u64]) -> u64 {
    words
        .iter()
        .fold(splitmix64(seed), |h, &w| splitmix64(h ^ splitmix64(w)))
}

fn walk_rng(seed: u64, a: NodeId, b: NodeId, sample_index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, &[a as u64, b as u64, sample_index]))
}

fn check_nodes(kernel: &Kernel<'_>, a: NodeId, b: NodeId) -> Result<()> {
    let node_count = kernel.graph().node_count();
    for node in [a, b] {
        if node >= node_count {
            return Err(Error::NodeOutOfRange { node, node_count });
        }
    }
    Ok(())
}

fn run_walk(
    kernel: &Kernel<'_>,
    a: NodeId,
    b: NodeId,
    cfg: &McConfig,
    sample_index: u64,
) -> Meeting {
    if a == b {
        return Meeting::Finite(0);
    }
    let mut rng = walk_rng(cfg.seed, a, b, sample_index);
    let (mut x, mut y) = (a, b);
    for t in 1..=cfg.max_steps {
        match kernel.step_unchecked(x, y, &mut rng) {
            None => return Meeting::NotMet,
            Some((p, q)) if p == q => return Meeting::Finite(t),
            Some((p, q)) => (x, y) = (p, q),
        }
    }
    Meeting::NotMet
}

/// Simulates one truncated walk from `(a, b)`.
pub fn sample_walk(
    kernel: &Kernel<'_>,
    start: (NodeId, NodeId),
    cfg: &McConfig,
    sample_index: u64,
) -> Result<WalkOutcome> {
    let (a, b) = start;
    check_nodes(kernel, a, b)?;
    let meeting = run_walk(kernel, a, b, cfg, sample_index);
    let score = match meeting {
        Meeting::Finite(t) => cfg.decay.powi(t as i32),
        Meeting::NotMet => 0.0,
    };
    Ok(WalkOutcome { meeting, score })
}

/// Mean of `cfg.samples` walk scores from `(a, b)` with its standard error.
pub fn estimate(kernel: &Kernel<'_>, pair: (NodeId, NodeId), cfg: &McConfig) -> Result<Estimate> {
    cfg.validate()?;
    let (a, b) = pair;
    check_nodes(kernel, a, b)?;
    let buckets = cfg.max_steps + 2;
    let histogram = (0..cfg.samples as u64)
        .into_par_iter()
        .fold(
            || vec![0u64; buckets],
            |mut h, i| {
                match run_walk(kernel, a, b, cfg, i) {
                    Meeting::Finite(t) => h[t] += 1,
                    Meeting::NotMet => h[buckets - 1] += 1,
                }
                h
            },
        )
        .reduce(
            || vec![0u64; buckets],
            |mut l, r| {
                l.iter_mut().zip(r).for_each(|(x, y)| *x += y);
                l
            },
        );
    Ok(summarize(histogram, cfg))
}

fn summarize(mut histogram: Vec<u64>, cfg: &McConfig) -> Estimate {
    let not_met = histogram.pop().unwrap_or(0);
    let n = cfg.samples as f64;
    let scores: Vec<f64> = (0..histogram.len())
        .map(|t| cfg.decay.powi(t as i32))
        .collect();
    let mean = histogram
        .iter()
        .zip(&scores)
        .map(|(&c, &s)| c as f64 * s)
        .sum::<f64>()
        / n;
    let std_error = if cfg.samples > 1 {
        let squares = histogram
            .iter()
            .zip(&scores)
            .map(|(&c, &s)| c as f64 * (s - mean).powi(2))
            .sum::<f64>()
            + not_met as f64 * mean * mean;
        (squares / (n - 1.0)).sqrt() / n.sqrt()
    } else {
        0.0
    };
    Estimate {
        mean,
        std_error,
        samples_used: cfg.samples,
        meeting_counts: histogram,
        not_met,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::kernel::make_kernel;
    use crate::measure::MeasureSpec;

    fn star(k: usize) -> Graph {
        Graph::from_edges(k + 2, (0..k).flat_map(|p| [(p, k), (p, k + 1)])).unwrap()
    }

    #[test]
    fn diagonal_start_meets_immediately() {
        let g = star(3);
        let k = make_kernel(&MeasureSpec::SimRank, &g).unwrap();
        let cfg = McConfig::default();
        let w = sample_walk(&k, (2, 2), &cfg, 0).unwrap();
        assert_eq!(
            w,
            WalkOutcome {
                meeting: Meeting::Finite(0),
                score: 1.0
            }
        );
        let e = estimate(&k, (2, 2), &cfg).unwrap();
        assert_eq!((e.mean, e.std_error), (1.0, 0.0));
    }

    #[test]
    fn unavailable_pair_never_meets() {
        let g = Graph::from_edges(2, [(1, 0)]).unwrap();
        let k = make_kernel(&MeasureSpec::SimRank, &g).unwrap();
        let cfg = McConfig::default();
        for i in 0..50 {
            let w = sample_walk(&k, (0, 1), &cfg, i).unwrap();
            assert_eq!(w.meeting, Meeting::NotMet);
            assert_eq!(w.score, 0.0);
        }
    }

    #[test]
    fn psimrank_on_star_meets_in_one_step() {
        let g = star(4);
        let k = make_kernel(&MeasureSpec::PSimRank, &g).unwrap();
        let cfg = McConfig::default();
        for i in 0..200 {
            let w = sample_walk(&k, (4, 5), &cfg, i).unwrap();
            assert_eq!(w.meeting, Meeting::Finite(1));
            assert_eq!(w.score, 0.8);
        }
        let e = estimate(&k, (4, 5), &cfg).unwrap();
        assert_eq!(e.std_error, 0.0);
        assert!((e.mean - 0.8).abs() < 1e-15);
    }

    #[test]
    fn star_estimates_agree_with_exact_values() {
        let cfg = McConfig {
            samples: 10_000,
            max_steps: 15,
            ..Default::default()
        };
        let g1 = star(4);
        let e = estimate(
            &make_kernel(&MeasureSpec::SimRank, &g1).unwrap(),
            (4, 5),
            &cfg,
        )
        .unwrap();
        assert!((e.mean - 0.2).abs() <= 4.0 * e.std_error, "{e:?}");
        let g2 = Graph::from_edges(2, [(1, 0)]).unwrap();
        let e = estimate(
            &make_kernel(&MeasureSpec::SimRankStar, &g2).unwrap(),
            (0, 1),
            &cfg,
        )
        .unwrap();
        assert!((e.mean - 0.4).abs() <= 4.0 * e.std_error, "{e:?}");
    }

    #[test]
    fn estimates_are_reproducible_and_seed_sensitive() {
        let g = Graph::from_edges(
            6,
            [
                (0, 1),
                (1, 2),
                (2, 0),
                (3, 1),
                (3, 4),
                (4, 5),
                (5, 3),
                (0, 4),
            ],
        )
        .unwrap();
        let k = make_kernel(&MeasureSpec::SimRankStar, &g).unwrap();
        let cfg = McConfig {
            samples: 2000,
            ..Default::default()
        };
        assert_eq!(
            estimate(&k, (1, 4), &cfg).unwrap(),
            estimate(&k, (1, 4), &cfg).unwrap()
        );
        let other = McConfig { seed: 7, ..cfg };
        assert_ne!(
            estimate(&k, (1, 4), &cfg).unwrap(),
            estimate(&k, (1, 4), &other).unwrap()
        );
    }

    #[test]
    fn scores_are_powers_of_the_decay() {
        let g = Graph::from_edges(
            6,
            [
                (0, 1),
                (1, 2),
                (2, 0),
                (3, 1),
                (3, 4),
                (4, 5),
                (5, 3),
                (0, 4),
            ],
        )
        .unwrap();
        let cfg = McConfig::default();
        for spec in MeasureSpec::builtin(0.4) {
            let k = make_kernel(&spec, &g).unwrap();
            for i in 0..100 {
                let w = sample_walk(&k, (1, 4), &cfg, i).unwrap();
                let ok = match w.meeting {
                    Meeting::Finite(t) => {
                        t <= cfg.max_steps && (w.score - cfg.decay.powi(t as i32)).abs() < 1e-15
                    }
                    Meeting::NotMet => w.score == 0.0,
                };
                assert!(ok, "{spec}: {w:?}");
            }
        }
    }

    #[test]
    fn invalid_inputs() {
        let g = star(2);
        let k = make_kernel(&MeasureSpec::SimRank, &g).unwrap();
        assert!(estimate(&k, (0, 9), &McConfig::default()).is_err());
        assert!(sample_walk(&k, (9, 0), &McConfig::default(), 0).is_err());
        for cfg in [
            McConfig {
                samples: 0,
                ..Default::default()
            },
            McConfig {
                max_steps: 0,
                ..Default::default()
            },
            McConfig {
                decay: 1.0,
                ..Default::default()
            },
        ] {
            assert!(matches!(
                estimate(&k, (0, 1), &cfg),
                Err(Error::InvalidConfig(_))
            ));
        }
    }

    #[test]
    fn std_error_matches_direct_formula() {
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (2, 0), (3, 1), (3, 4), (0, 4)]).unwrap();
        let k = make_kernel(&MeasureSpec::PSimRankStar, &g).unwrap();
        let cfg = McConfig {
            samples: 500,
            ..Default::default()
        };
        let e = estimate(&k, (1, 4), &cfg).unwrap();
        let scores: Vec<f64> = (0..500)
            .map(|i| sample_walk(&k, (1, 4), &cfg, i).unwrap().score)
            .collect();
        let mean = scores.iter().sum::<f64>() / 500.0;
        let var = scores.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / 499.0;
        assert!((e.mean - mean).abs() < 1e-12);
        assert!((e.std_error - (var / 500.0).sqrt()).abs() < 1e-12);
    }
}
