//! Fixtures and reference computations shared by the integration tests.
//!
//! The reference side never touches `grsp::kernel`: it rebuilds adjacency
//! from raw edge lists and writes each measure as the right-hand side of its
//! recursive equation.

#![allow(dead_code)]

use std::collections::BTreeMap;

use grsp::{Graph, LabelMap, MeasureSpec, NodeId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const C: f64 = 0.8;

/// `k` source-only parents `0..k`, each pointing at `u = k` and `v = k + 1`.
pub fn star(k: usize) -> Graph {
    Graph::from_edges(k + 2, (0..k).flat_map(|p| [(p, k), (p, k + 1)])).unwrap()
}

/// The single edge `b -> a` with `a = 0`, `b = 1`.
pub fn single_edge() -> Graph {
    Graph::from_edges(2, [(1, 0)]).unwrap()
}

/// Erdős–Rényi style digraph without self-loops.
pub fn random_edges(n: usize, p: f64, seed: u64) -> Vec<(NodeId, NodeId)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if x != y && rng.random_bool(p) {
                edges.push((x, y));
            }
        }
    }
    edges
}

pub fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
    Graph::from_edges(n, random_edges(n, p, seed)).unwrap()
}

/// Two disconnected random clusters of `size` nodes, labelled "left" and "right".
pub fn two_clusters(size: usize, p: f64, seed: u64) -> (Graph, LabelMap) {
    let mut edges = random_edges(size, p, seed);
    edges.extend(
        random_edges(size, p, seed.wrapping_add(1))
            .into_iter()
            .map(|(x, y)| (x + size, y + size)),
    );
    let graph = Graph::from_edges(2 * size, edges).unwrap();
    let mut labels = LabelMap::new(2 * size);
    for v in 0..2 * size {
        labels
            .assign(v, if v < size { "left" } else { "right" })
            .unwrap();
    }
    (graph, labels)
}

/// Sorted, deduplicated in- and out-neighbor lists.
pub struct Adjacency {
    pub ins: Vec<Vec<NodeId>>,
    pub outs: Vec<Vec<NodeId>>,
}

impl Adjacency {
    pub fn new(n: usize, edges: &[(NodeId, NodeId)]) -> Self {
        let mut ins = vec![Vec::new(); n];
        let mut outs = vec![Vec::new(); n];
        for &(x, y) in edges {
            outs[x].push(y);
            ins[y].push(x);
        }
        for list in ins.iter_mut().chain(outs.iter_mut()) {
            list.sort_unstable();
            list.dedup();
        }
        Adjacency { ins, outs }
    }

    pub fn from_graph(g: &Graph) -> Self {
        Self::new(g.node_count(), &g.edges().collect::<Vec<_>>())
    }

    pub fn node_count(&self) -> usize {
        self.ins.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Reference {
    SimRank,
    RvsSimRank,
    PRank(f64),
    PSimRank,
    SimRankStar,
    PSimRankStar,
}

/// Where one weighted term of a recursion points: a pair similarity, or the constant 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Target {
    Met,
    Pair(NodeId, NodeId),
}

fn target(x: NodeId, y: NodeId) -> Target {
    if x == y {
        Target::Met
    } else {
        Target::Pair(x, y)
    }
}

fn all_pairs(xs: &[NodeId], ys: &[NodeId], weight: f64, out: &mut Vec<(Target, f64)>) {
    for &x in xs {
        for &y in ys {
            out.push((target(x, y), weight));
        }
    }
}

impl Reference {
    pub fn six() -> [Reference; 6] {
        [
            Reference::SimRank,
            Reference::RvsSimRank,
            Reference::PRank(0.4),
            Reference::PSimRank,
            Reference::SimRankStar,
            Reference::PSimRankStar,
        ]
    }

    pub fn spec(self) -> MeasureSpec {
        match self {
            Reference::SimRank => MeasureSpec::SimRank,
            Reference::RvsSimRank => MeasureSpec::RvsSimRank,
            Reference::PRank(lambda) => MeasureSpec::PRank { lambda },
            Reference::PSimRank => MeasureSpec::PSimRank,
            Reference::SimRankStar => MeasureSpec::SimRankStar,
            Reference::PSimRankStar => MeasureSpec::PSimRankStar,
        }
    }

    /// The weighted terms `w` with `s(a,b) = C Σ w · s(target)` for `a != b`,
    /// merged so that each target appears once and zero weights dropped.
    pub fn terms(self, adj: &Adjacency, a: NodeId, b: NodeId) -> Vec<(Target, f64)> {
        assert_ne!(a, b);
        let (ia, ib) = (&adj.ins[a], &adj.ins[b]);
        let (oa, ob) = (&adj.outs[a], &adj.outs[b]);
        let mut raw = Vec::new();
        let uniform =
            |xs: &Vec<NodeId>, ys: &Vec<NodeId>, scale: f64, raw: &mut Vec<(Target, f64)>| {
                if !xs.is_empty() && !ys.is_empty() {
                    all_pairs(xs, ys, scale / (xs.len() * ys.len()) as f64, raw);
                }
            };
        let common = ia.iter().filter(|x| ib.contains(x)).count();
        let union = ia.len() + ib.len() - common;
        let jaccard = if union == 0 {
            0.0
        } else {
            common as f64 / union as f64
        };
        match self {
            Reference::SimRank => uniform(ia, ib, 1.0, &mut raw),
            Reference::RvsSimRank => uniform(oa, ob, 1.0, &mut raw),
            Reference::PRank(lambda) => {
                uniform(ia, ib, lambda, &mut raw);
                uniform(oa, ob, 1.0 - lambda, &mut raw);
            }
            Reference::PSimRank => {
                if union > 0 {
                    raw.push((Target::Met, jaccard));
                    let only_a: Vec<NodeId> =
                        ia.iter().copied().filter(|x| !ib.contains(x)).collect();
                    let only_b: Vec<NodeId> =
                        ib.iter().copied().filter(|x| !ia.contains(x)).collect();
                    if !ib.is_empty() {
                        all_pairs(&only_a, ib, 1.0 / (union * ib.len()) as f64, &mut raw);
                    }
                    if !ia.is_empty() {
                        all_pairs(ia, &only_b, 1.0 / (union * ia.len()) as f64, &mut raw);
                    }
                }
            }
            Reference::SimRankStar | Reference::PSimRankStar => {
                let meet = if self == Reference::PSimRankStar {
                    jaccard
                } else {
                    0.0
                };
                if meet > 0.0 {
                    raw.push((Target::Met, meet));
                }
                let half = (1.0 - meet) / 2.0;
                if !ia.is_empty() {
                    all_pairs(ia, &[b], half / ia.len() as f64, &mut raw);
                }
                if !ib.is_empty() {
                    all_pairs(&[a], ib, half / ib.len() as f64, &mut raw);
                }
            }
        }
        let mut merged: BTreeMap<Target, f64> = BTreeMap::new();
        for (t, w) in raw {
            *merged.entry(t).or_insert(0.0) += w;
        }
        merged.into_iter().filter(|&(_, w)| w > 0.0).collect()
    }
}

/// `Σ p(w) C^l(w)` over compound walks from `(a, b)` that meet within `max_len` steps,
/// accumulated length by length over the distribution of unmet pair states.
pub fn walk_sum(
    r: Reference,
    adj: &Adjacency,
    a: NodeId,
    b: NodeId,
    decay: f64,
    max_len: usize,
) -> f64 {
    if a == b {
        return 1.0;
    }
    let n = adj.node_count();
    let mut mass = vec![0.0; n * n];
    mass[a * n + b] = 1.0;
    let mut total = 0.0;
    let mut weight = 1.0;
    for _ in 0..max_len {
        weight *= decay;
        let mut next = vec![0.0; n * n];
        for (i, &m) in mass.iter().enumerate() {
            if m == 0.0 {
                continue;
            }
            for (t, w) in r.terms(adj, i / n, i % n) {
                match t {
                    Target::Met => total += weight * m * w,
                    Target::Pair(x, y) => next[x * n + y] += m * w,
                }
            }
        }
        mass = next;
    }
    total
}

/// The same sum by explicit depth-first enumeration of every walk. Exponential; small depths only.
pub fn enumerate_walks(
    r: Reference,
    adj: &Adjacency,
    a: NodeId,
    b: NodeId,
    decay: f64,
    max_len: usize,
) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn visit(
        r: Reference,
        adj: &Adjacency,
        x: NodeId,
        y: NodeId,
        prob: f64,
        len: usize,
        decay: f64,
        max_len: usize,
    ) -> f64 {
        let mut sum = 0.0;
        for (t, w) in r.terms(adj, x, y) {
            match t {
                Target::Met => sum += prob * w * decay.powi(len as i32 + 1),
                Target::Pair(p, q) if len + 1 < max_len => {
                    sum += visit(r, adj, p, q, prob * w, len + 1, decay, max_len)
                }
                Target::Pair(..) => {}
            }
        }
        sum
    }
    if a == b {
        return 1.0;
    }
    if max_len == 0 {
        return 0.0;
    }
    visit(r, adj, a, b, 1.0, 0, decay, max_len)
}
