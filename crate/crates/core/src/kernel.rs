//! Transition kernels over compound node-pair states.
//!
//! A kernel defines, for every pair state `(a, b)` with `a != b`, the
//! probability of moving the surfer pair to each `(a', b')` and the residual
//! probability of entering the absorbing stopped state. The similarity
//! induced by a kernel is the expected value of `C^L`, where `L` is the first
//! time the walk reaches a diagonal state `(x, x)`.
//!
//! Two access paths are provided and must agree in distribution:
//! [`Kernel::transition`] enumerates the full support, and [`Kernel::step`]
//! draws one successor without materializing it.

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::measure::MeasureSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CompoundState {
    Pair(NodeId, NodeId),
    Stopped,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransitionDistribution {
    /// Sorted by target, targets distinct, every probability in (0, 1].
    pub entries: Vec<((NodeId, NodeId), f64)>,
    pub stopped_mass: f64,
}

impl TransitionDistribution {
    pub fn total_mass(&self) -> f64 {
        self.entries.iter().map(|(_, p)| p).sum::<f64>() + self.stopped_mass
    }

    pub fn probability(&self, target: (NodeId, NodeId)) -> f64 {
        self.entries
            .binary_search_by(|(t, _)| t.cmp(&target))
            .map_or(0.0, |i| self.entries[i].1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Step to an in-neighbor.
    Backward,
    /// Step to an out-neighbor.
    Forward,
}

#[derive(Debug, Clone)]
enum Rule {
    SimRank,
    RvsSimRank,
    PRank(f64),
    PSimRank,
    SimRankStar,
    PSimRankStar,
    Convex(Vec<(Rule, f64)>),
    Product(Direction, Direction),
}

impl Rule {
    fn compile(spec: &MeasureSpec) -> Rule {
        match spec {
            MeasureSpec::SimRank => Rule::SimRank,
            MeasureSpec::RvsSimRank => Rule::RvsSimRank,
            MeasureSpec::PRank { lambda } => Rule::PRank(*lambda),
            MeasureSpec::PSimRank => Rule::PSimRank,
            MeasureSpec::SimRankStar => Rule::SimRankStar,
            MeasureSpec::PSimRankStar => Rule::PSimRankStar,
            MeasureSpec::Convex(members) => Rule::Convex(
                members
                    .iter()
                    .filter(|(_, w)| *w > 0.0)
                    .map(|(m, w)| (Rule::compile(m), *w))
                    .collect(),
            ),
            MeasureSpec::Product(first, second) => {
                let dir = |m: &MeasureSpec| match m {
                    MeasureSpec::RvsSimRank => Direction::Forward,
                    _ => Direction::Backward,
                };
                Rule::Product(dir(first), dir(second))
            }
        }
    }
}

/// Collects weighted targets before sorting and merging duplicates.
#[derive(Default)]
struct Accumulator {
    entries: Vec<((NodeId, NodeId), f64)>,
    stopped: f64,
}

impl Accumulator {
    /// Gives every element of `xs × ys` probability `each`; when the product is empty
    /// the whole `mass` is unallocatable and goes to the stopped state.
    fn product(&mut self, xs: &[NodeId], ys: &[NodeId], mass: f64, each: f64) {
        if mass <= 0.0 {
            return;
        }
        if xs.is_empty() || ys.is_empty() {
            self.stopped += mass;
            return;
        }
        for &x in xs {
            for &y in ys {
                self.entries.push(((x, y), each));
            }
        }
    }

    /// `mass` spread uniformly over `xs × ys`.
    fn uniform(&mut self, xs: &[NodeId], ys: &[NodeId], mass: f64) {
        let each = mass / (xs.len() * ys.len()).max(1) as f64;
        self.product(xs, ys, mass, each);
    }

    fn diagonal(&mut self, xs: &[NodeId], each: f64) {
        self.entries.extend(xs.iter().map(|&x| ((x, x), each)));
    }

    fn finish(mut self) -> TransitionDistribution {
        self.entries.sort_by_key(|e| e.0);
        let mut merged: Vec<((NodeId, NodeId), f64)> = Vec::with_capacity(self.entries.len());
        for (target, p) in self.entries {
            match merged.last_mut() {
                Some((last, q)) if *last == target => *q += p,
                _ => merged.push((target, p)),
            }
        }
        TransitionDistribution {
            entries: merged,
            stopped_mass: self.stopped,
        }
    }
}

fn intersection(xs: &[NodeId], ys: &[NodeId]) -> Vec<NodeId> {
    let (mut i, mut j, mut out) = (0, 0, Vec::new());
    while i < xs.len() && j < ys.len() {
        match xs[i].cmp(&ys[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(xs[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn difference(xs: &[NodeId], ys: &[NodeId]) -> Vec<NodeId> {
    xs.iter()
        .copied()
        .filter(|x| ys.binary_search(x).is_err())
        .collect()
}

#[inline]
fn pick<R: Rng + ?Sized>(xs: &[NodeId], rng: &mut R) -> Option<NodeId> {
    if xs.is_empty() {
        None
    } else {
        Some(xs[rng.random_range(0..xs.len())])
    }
}

/// Uniform draw from `xs ∪ ys` (both sorted) by rejecting the second copy of shared nodes.
fn pick_union<R: Rng + ?Sized>(xs: &[NodeId], ys: &[NodeId], rng: &mut R) -> Option<NodeId> {
    let total = xs.len() + ys.len();
    if total == 0 {
        return None;
    }
    loop {
        let r = rng.random_range(0..total);
        if r < xs.len() {
            return Some(xs[r]);
        }
        let y = ys[r - xs.len()];
        if xs.binary_search(&y).is_err() {
            return Some(y);
        }
    }
}

/// A transition kernel bound to one immutable graph.
#[derive(Debug, Clone)]
pub struct Kernel<'g> {
    graph: &'g Graph,
    spec: MeasureSpec,
    rule: Rule,
}

/// Validates `spec` and binds it to `graph`.
pub fn make_kernel<'g>(spec: &MeasureSpec, graph: &'g Graph) -> Result<Kernel<'g>> {
    Kernel::new(spec, graph)
}

impl<'g> Kernel<'g> {
    pub fn new(spec: &MeasureSpec, graph: &'g Graph) -> Result<Self> {
        spec.validate()?;
        Ok(Kernel {
            graph,
            spec: spec.clone(),
            rule: Rule::compile(spec),
        })
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn spec(&self) -> &MeasureSpec {
        &self.spec
    }

    fn neighbors(&self, v: NodeId, dir: Direction) -> &'g [NodeId] {
        match dir {
            Direction::Backward => self.graph.ins(v),
            Direction::Forward => self.graph.outs(v),
        }
    }

    fn check_pair(&self, state: CompoundState) -> Result<(NodeId, NodeId)> {
        match state {
            CompoundState::Stopped => Err(Error::ContractViolation(
                "the stopped state is absorbing and has no transitions".into(),
            )),
            CompoundState::Pair(a, b) if a == b => Err(Error::ContractViolation(format!(
                "({a},{a}) is terminal and has no transitions"
            ))),
            CompoundState::Pair(a, b) => {
                let node_count = self.graph.node_count();
                for node in [a, b] {
                    if node >= node_count {
                        return Err(Error::NodeOutOfRange { node, node_count });
                    }
                }
                Ok((a, b))
            }
        }
    }

    /// The exact one-step distribution out of a non-terminal pair state.
    pub fn transition(&self, state: CompoundState) -> Result<TransitionDistribution> {
        let (a, b) = self.check_pair(state)?;
        Ok(self.transition_unchecked(a, b))
    }

    pub(crate) fn transition_unchecked(&self, a: NodeId, b: NodeId) -> TransitionDistribution {
        let mut acc = Accumulator::default();
        self.accumulate(&self.rule, a, b, 1.0, &mut acc);
        acc.finish()
    }

    fn accumulate(&self, rule: &Rule, a: NodeId, b: NodeId, weight: f64, acc: &mut Accumulator) {
        let g = self.graph;
        match rule {
            Rule::SimRank => acc.uniform(g.ins(a), g.ins(b), weight),
            Rule::RvsSimRank => acc.uniform(g.outs(a), g.outs(b), weight),
            Rule::PRank(lambda) => {
                acc.uniform(g.ins(a), g.ins(b), weight * lambda);
                acc.uniform(g.outs(a), g.outs(b), weight * (1.0 - lambda));
            }
            Rule::PSimRank => {
                let (ia, ib) = (g.ins(a), g.ins(b));
                let common = intersection(ia, ib);
                let union = (ia.len() + ib.len() - common.len()) as f64;
                if union == 0.0 {
                    acc.stopped += weight;
                    return;
                }
                acc.diagonal(&common, weight / union);
                let only_a = difference(ia, ib);
                let only_b = difference(ib, ia);
                acc.product(
                    &only_a,
                    ib,
                    weight * only_a.len() as f64 / union,
                    weight / (union * ib.len() as f64),
                );
                acc.product(
                    ia,
                    &only_b,
                    weight * only_b.len() as f64 / union,
                    weight / (union * ia.len() as f64),
                );
            }
            Rule::SimRankStar => {
                let (ia, ib) = (g.ins(a), g.ins(b));
                acc.uniform(&[a], ib, weight * 0.5);
                acc.uniform(ia, &[b], weight * 0.5);
            }
            Rule::PSimRankStar => {
                let (ia, ib) = (g.ins(a), g.ins(b));
                let common = intersection(ia, ib);
                let union = ia.len() + ib.len() - common.len();
                let jaccard = if union == 0 {
                    0.0
                } else {
                    common.len() as f64 / union as f64
                };
                if !common.is_empty() {
                    acc.diagonal(&common, weight / union as f64);
                }
                let half = weight * (1.0 - jaccard) * 0.5;
                acc.uniform(&[a], ib, half);
                acc.uniform(ia, &[b], half);
            }
            Rule::Convex(members) => {
                for (member, w) in members {
                    self.accumulate(member, a, b, weight * w, acc);
                }
            }
            Rule::Product(first, second) => acc.uniform(
                self.neighbors(a, *first),
                self.neighbors(b, *second),
                weight,
            ),
        }
    }

    /// Draws one successor of a non-terminal pair state.
    pub fn step<R: Rng + ?Sized>(
        &self,
        state: CompoundState,
        rng: &mut R,
    ) -> Result<CompoundState> {
        let (a, b) = self.check_pair(state)?;
        Ok(match self.step_unchecked(a, b, rng) {
            Some((x, y)) => CompoundState::Pair(x, y),
            None => CompoundState::Stopped,
        })
    }

    /// `None` is the stopped state.
    #[inline]
    pub(crate) fn step_unchecked<R: Rng + ?Sized>(
        &self,
        a: NodeId,
        b: NodeId,
        rng: &mut R,
    ) -> Option<(NodeId, NodeId)> {
        self.step_rule(&self.rule, a, b, rng)
    }

    fn step_rule<R: Rng + ?Sized>(
        &self,
        rule: &Rule,
        a: NodeId,
        b: NodeId,
        rng: &mut R,
    ) -> Option<(NodeId, NodeId)> {
        let g = self.graph;
        match rule {
            Rule::SimRank => self.step_both(a, b, Direction::Backward, Direction::Backward, rng),
            Rule::RvsSimRank => self.step_both(a, b, Direction::Forward, Direction::Forward, rng),
            Rule::PRank(lambda) => {
                let dir = if rng.random::<f64>() < *lambda {
                    Direction::Backward
                } else {
                    Direction::Forward
                };
                self.step_both(a, b, dir, dir, rng)
            }
            Rule::PSimRank => {
                let (ia, ib) = (g.ins(a), g.ins(b));
                let u = pick_union(ia, ib, rng)?;
                match (ia.binary_search(&u).is_ok(), ib.binary_search(&u).is_ok()) {
                    (true, true) => Some((u, u)),
                    (true, false) => Some((u, pick(ib, rng)?)),
                    _ => Some((pick(ia, rng)?, u)),
                }
            }
            Rule::SimRankStar => self.step_one(a, b, rng),
            Rule::PSimRankStar => {
                let (ia, ib) = (g.ins(a), g.ins(b));
                let u = pick_union(ia, ib, rng)?;
                if ia.binary_search(&u).is_ok() && ib.binary_search(&u).is_ok() {
                    Some((u, u))
                } else {
                    self.step_one(a, b, rng)
                }
            }
            Rule::Convex(members) => {
                let mut r = rng.random::<f64>() * members.iter().map(|(_, w)| w).sum::<f64>();
                let mut chosen = &members[members.len() - 1].0;
                for (member, w) in members {
                    if r < *w {
                        chosen = member;
                        break;
                    }
                    r -= w;
                }
                self.step_rule(chosen, a, b, rng)
            }
            Rule::Product(first, second) => self.step_both(a, b, *first, *second, rng),
        }
    }

    #[inline]
    fn step_both<R: Rng + ?Sized>(
        &self,
        a: NodeId,
        b: NodeId,
        da: Direction,
        db: Direction,
        rng: &mut R,
    ) -> Option<(NodeId, NodeId)> {
        let (na, nb) = (self.neighbors(a, da), self.neighbors(b, db));
        if na.is_empty() || nb.is_empty() {
            return None;
        }
        Some((pick(na, rng)?, pick(nb, rng)?))
    }

    /// A fair coin chooses which surfer steps to a uniform in-neighbor.
    #[inline]
    fn step_one<R: Rng + ?Sized>(
        &self,
        a: NodeId,
        b: NodeId,
        rng: &mut R,
    ) -> Option<(NodeId, NodeId)> {
        if rng.random::<bool>() {
            Some((a, pick(self.graph.ins(b), rng)?))
        } else {
            Some((pick(self.graph.ins(a), rng)?, b))
        }
    }
}
