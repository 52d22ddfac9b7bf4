//! Retrieval evaluation: mean average precision of top-k answers against topic labels.
//!
//! Each trial samples labeled query nodes that meet the degree filters, runs a
//! top-k query per measure, and scores the answers by average precision. Only
//! labeled answers count; an answer is relevant when it shares the query's
//! label. Every measure sees the same query set and walk seed within a trial.

use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Graph, LabelId, LabelMap, NodeId};
use crate::io::format_score;
use crate::kernel::make_kernel;
use crate::measure::MeasureSpec;
use crate::montecarlo::{derive_seed, McConfig, DEFAULT_SEED};
use crate::query::{topk, QueryParams};

/// Average precision over the labeled part of a ranked answer list.
///
/// Unlabeled entries (`None`) are removed first. The denominator is the number
/// of relevant answers in what remains; a list with none scores 0.
pub fn average_precision(ranked_labels: &[Option<LabelId>], query_label: LabelId) -> f64 {
    let mut relevant = 0usize;
    let mut precision_sum = 0.0;
    for (i, label) in ranked_labels.iter().flatten().enumerate() {
        if *label == query_label {
            relevant += 1;
            precision_sum += relevant as f64 / (i + 1) as f64;
        }
    }
    if relevant == 0 {
        0.0
    } else {
        precision_sum / relevant as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalConfig {
    pub k: usize,
    pub num_queries: usize,
    pub num_trials: usize,
    pub min_in_degree: usize,
    pub min_out_degree: usize,
    pub radius: usize,
    pub mc: McConfig,
    /// Drives query sampling; walk streams are keyed by `mc.seed` and the trial index.
    pub seed: u64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            k: 100,
            num_queries: 50,
            num_trials: 50,
            min_in_degree: 5,
            min_out_degree: 5,
            radius: 4,
            mc: McConfig::default(),
            seed: DEFAULT_SEED,
        }
    }
}

impl EvalConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("k", self.k),
            ("num_queries", self.num_queries),
            ("num_trials", self.num_trials),
            ("radius", self.radius),
        ] {
            if value == 0 {
                return Err(Error::InvalidConfig(format!("{name} must be positive")));
            }
        }
        self.mc.validate()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasureReport {
    pub spec: MeasureSpec,
    pub mean_map: f64,
    pub trial_maps: Vec<f64>,
    /// `query_aps[trial][i]` belongs to `EvalReport::trial_queries[trial][i]`.
    pub query_aps: Vec<Vec<f64>>,
    pub unlabeled_skipped: usize,
    /// Queries whose answer list held no labeled node.
    pub empty_answers: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub config: EvalConfig,
    pub eligible_nodes: usize,
    pub trial_queries: Vec<Vec<NodeId>>,
    pub measures: Vec<MeasureReport>,
}

/// Labeled nodes passing the degree filters, ascending.
pub fn eligible_queries(graph: &Graph, labels: &LabelMap, cfg: &EvalConfig) -> Vec<NodeId> {
    (0..graph.node_count())
        .filter(|&v| labels.get(v).is_some())
        .filter(|&v| {
            graph.in_degree(v) >= cfg.min_in_degree && graph.out_degree(v) >= cfg.min_out_degree
        })
        .collect()
}

struct QueryScore {
    ap: f64,
    unlabeled: usize,
    empty: bool,
}

pub fn eval_map(
    graph: &Graph,
    labels: &LabelMap,
    specs: &[MeasureSpec],
    cfg: &EvalConfig,
) -> Result<EvalReport> {
    cfg.validate()?;
    if labels.is_empty() {
        return Err(Error::InvalidConfig("label map is empty".into()));
    }
    if labels.node_count() != graph.node_count() {
        return Err(Error::DimensionMismatch {
            table: labels.node_count(),
            graph: graph.node_count(),
        });
    }
    let kernels = specs
        .iter()
        .map(|s| make_kernel(s, graph))
        .collect::<Result<Vec<_>>>()?;
    let eligible = eligible_queries(graph, labels, cfg);
    if eligible.len() < cfg.num_queries {
        return Err(Error::InsufficientEligible {
            needed: cfg.num_queries,
            found: eligible.len(),
        });
    }
    let params = QueryParams {
        k: cfg.k,
        radius: cfg.radius,
        drop_zero: false,
    };

    let mut trial_queries = Vec::with_capacity(cfg.num_trials);
    // scores[trial][measure][query]
    let mut scores: Vec<Vec<Vec<QueryScore>>> = Vec::with_capacity(cfg.num_trials);
    for trial in 0..cfg.num_trials {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, &[trial as u64]));
        let queries: Vec<NodeId> =
            rand::seq::index::sample(&mut rng, eligible.len(), cfg.num_queries)
                .into_iter()
                .map(|i| eligible[i])
                .collect();
        let mc = McConfig {
            seed: derive_seed(cfg.mc.seed, &[trial as u64]),
            ..cfg.mc
        };
        let per_measure = kernels
            .iter()
            .map(|kernel| {
                queries
                    .par_iter()
                    .map(|&q| {
                        let result = topk(kernel, q, &params, &mc)?;
                        let answer_labels: Vec<Option<LabelId>> =
                            result.ranked.iter().map(|r| labels.get(r.node)).collect();
                        let unlabeled = answer_labels.iter().filter(|l| l.is_none()).count();
                        let query_label = labels.get(q).expect("eligible queries are labeled");
                        Ok(QueryScore {
                            ap: average_precision(&answer_labels, query_label),
                            unlabeled,
                            empty: unlabeled == answer_labels.len(),
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        trial_queries.push(queries);
        scores.push(per_measure);
    }

    let measures = specs
        .iter()
        .enumerate()
        .map(|(m, spec)| {
            let query_aps: Vec<Vec<f64>> = scores
                .iter()
                .map(|trial| trial[m].iter().map(|s| s.ap).collect())
                .collect();
            let trial_maps: Vec<f64> = query_aps
                .iter()
                .map(|aps| aps.iter().sum::<f64>() / aps.len() as f64)
                .collect();
            let all = || scores.iter().flat_map(|trial| trial[m].iter());
            MeasureReport {
                spec: spec.clone(),
                mean_map: trial_maps.iter().sum::<f64>() / trial_maps.len() as f64,
                trial_maps,
                query_aps,
                unlabeled_skipped: all().map(|s| s.unlabeled).sum(),
                empty_answers: all().filter(|s| s.empty).count(),
            }
        })
        .collect();

    Ok(EvalReport {
        config: *cfg,
        eligible_nodes: eligible.len(),
        trial_queries,
        measures,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrankSweep {
    pub lambdas: Vec<f64>,
    pub maps: Vec<f64>,
    /// First lambda reaching the highest MAP.
    pub best_lambda: f64,
    pub best_map: f64,
    pub report: EvalReport,
}

/// `0.0, 0.1, ..., 1.0`.
pub fn default_lambdas() -> Vec<f64> {
    (0..=10).map(|i| i as f64 / 10.0).collect()
}

/// Evaluates P-Rank at every lambda on shared query sets and picks the best.
pub fn prank_sweep(
    graph: &Graph,
    labels: &LabelMap,
    lambdas: &[f64],
    cfg: &EvalConfig,
) -> Result<PrankSweep> {
    if lambdas.is_empty() {
        return Err(Error::InvalidConfig("lambda sweep is empty".into()));
    }
    let specs: Vec<_> = lambdas
        .iter()
        .map(|&lambda| MeasureSpec::PRank { lambda })
        .collect();
    let report = eval_map(graph, labels, &specs, cfg)?;
    let maps: Vec<f64> = report.measures.iter().map(|m| m.mean_map).collect();
    let (best, best_map) =
        maps.iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |(bi, bm), (i, &m)| {
                if m > bm {
                    (i, m)
                } else {
                    (bi, bm)
                }
            });
    Ok(PrankSweep {
        lambdas: lambdas.to_vec(),
        maps,
        best_lambda: lambdas[best],
        best_map,
        report,
    })
}

impl EvalReport {
    /// Trials as rows and measures as columns in request order, then a `mean` row.
    pub fn to_tsv(&self, full_precision: bool) -> String {
        let c = &self.config;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# k={} queries={} trials={} radius={} min_in={} min_out={} samples={} max_steps={} decay={} seed={} mc_seed={} eligible={}",
            c.k, c.num_queries, c.num_trials, c.radius, c.min_in_degree, c.min_out_degree,
            c.mc.samples, c.mc.max_steps, c.mc.decay, c.seed, c.mc.seed, self.eligible_nodes
        );
        let _ = writeln!(out, "# ap_denominator=relevant_labeled_answers");
        let header: Vec<String> = self.measures.iter().map(|m| m.spec.to_string()).collect();
        let _ = writeln!(out, "trial\t{}", header.join("\t"));
        for t in 0..self.trial_queries.len() {
            let row: Vec<String> = self
                .measures
                .iter()
                .map(|m| format_score(m.trial_maps[t], full_precision))
                .collect();
            let _ = writeln!(out, "{}\t{}", t + 1, row.join("\t"));
        }
        let means: Vec<String> = self
            .measures
            .iter()
            .map(|m| format_score(m.mean_map, full_precision))
            .collect();
        let _ = writeln!(out, "mean\t{}", means.join("\t"));
        let skipped: Vec<String> = self
            .measures
            .iter()
            .map(|m| m.unlabeled_skipped.to_string())
            .collect();
        let _ = writeln!(out, "# unlabeled_skipped\t{}", skipped.join("\t"));
        let empty: Vec<String> = self
            .measures
            .iter()
            .map(|m| m.empty_answers.to_string())
            .collect();
        let _ = writeln!(out, "# empty_answers\t{}", empty.join("\t"));
        out
    }
}
