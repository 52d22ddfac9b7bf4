//! Top-k similarity queries over a radius-pruned candidate set.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::NodeId;
use crate::kernel::Kernel;
use crate::montecarlo::{estimate, McConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QueryParams {
    pub k: usize,
    /// Candidates are the nodes within this undirected hop distance of the query.
    pub radius: usize,
    /// Drop candidates whose estimated similarity is exactly zero.
    pub drop_zero: bool,
}

impl Default for QueryParams {
    fn default() -> Self {
        QueryParams {
            k: 100,
            radius: 4,
            drop_zero: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankedNode {
    pub node: NodeId,
    pub mean: f64,
    pub std_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QueryResult {
    pub query: NodeId,
    /// Mean descending, ties broken by node id ascending.
    pub ranked: Vec<RankedNode>,
    pub candidates_considered: usize,
}

/// Estimates `(query, c)` for every candidate `c` in the ball and keeps the best `k`.
pub fn topk(
    kernel: &Kernel<'_>,
    query: NodeId,
    params: &QueryParams,
    mc: &McConfig,
) -> Result<QueryResult> {
    let graph = kernel.graph();
    if params.radius == 0 {
        return Err(Error::InvalidConfig("radius must be at least 1".into()));
    }
    let candidates: Vec<NodeId> = graph
        .ball(query, params.radius)?
        .into_iter()
        .filter(|&c| c != query)
        .collect();
    rank(kernel, query, &candidates, params, mc)
}

/// Ranks an explicit candidate list; `topk` without the pruning step.
pub fn rank(
    kernel: &Kernel<'_>,
    query: NodeId,
    candidates: &[NodeId],
    params: &QueryParams,
    mc: &McConfig,
) -> Result<QueryResult> {
    mc.validate()?;
    let mut ranked = candidates
        .par_iter()
        .filter(|&&c| c != query)
        .map(|&c| {
            estimate(kernel, (query, c), mc).map(|e| RankedNode {
                node: c,
                mean: e.mean,
                std_error: e.std_error,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    if params.drop_zero {
        ranked.retain(|r| r.mean > 0.0);
    }
    ranked.sort_by(|l, r| r.mean.total_cmp(&l.mean).then(l.node.cmp(&r.node)));
    ranked.truncate(params.k);
    Ok(QueryResult {
        query,
        ranked,
        candidates_considered: candidates.iter().filter(|&&c| c != query).count(),
    })
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
    fn star_query_ranks_sibling_first() {
        let g = star(4);
        let kernel = make_kernel(&MeasureSpec::SimRank, &g).unwrap();
        let mc = McConfig {
            samples: 5000,
            ..Default::default()
        };
        let params = QueryParams {
            k: 5,
            radius: 4,
            drop_zero: false,
        };
        let res = topk(&kernel, 4, &params, &mc).unwrap();
        assert_eq!(res.candidates_considered, 5);
        let nodes: Vec<_> = res.ranked.iter().map(|r| r.node).collect();
        assert_eq!(nodes, vec![5, 0, 1, 2, 3]);
        assert!((res.ranked[0].mean - 0.2).abs() < 4.0 * res.ranked[0].std_error);
        assert!(res.ranked[1..].iter().all(|r| r.mean == 0.0));

        let dropped = topk(
            &kernel,
            4,
            &QueryParams {
                drop_zero: true,
                ..params
            },
            &mc,
        )
        .unwrap();
        assert_eq!(dropped.ranked.len(), 1);
    }

    #[test]
    fn degenerate_queries() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2)]).unwrap();
        let kernel = make_kernel(&MeasureSpec::SimRankStar, &g).unwrap();
        let mc = McConfig::default();
        let res = topk(
            &kernel,
            0,
            &QueryParams {
                k: 0,
                ..Default::default()
            },
            &mc,
        )
        .unwrap();
        assert!(res.ranked.is_empty());
        let res = topk(&kernel, 3, &QueryParams::default(), &mc).unwrap();
        assert!(res.ranked.is_empty());
        assert_eq!(res.candidates_considered, 0);
        assert!(topk(&kernel, 4, &QueryParams::default(), &mc).is_err());
    }
}
