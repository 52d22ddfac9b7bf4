//! Immutable directed simple graphs in compressed sparse row form.
//!
//! Both directions are stored: `out_neighbors(v)` lists the nodes `v` points
//! to and `in_neighbors(v)` the nodes pointing at `v`. Every adjacency list is
//! sorted ascending and free of duplicates, and the in-lists are the exact
//! transpose of the out-lists.

use std::collections::{HashMap, VecDeque};
use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::io::{content_lines, maybe_gzip};

pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
struct Csr {
    offsets: Vec<usize>,
    targets: Vec<NodeId>,
}

impl Csr {
    /// `edges` must be sorted by (row, col) and deduplicated.
    fn from_sorted(node_count: usize, edges: &[(NodeId, NodeId)]) -> Self {
        let mut offsets = vec![0usize; node_count + 1];
        for &(row, _) in edges {
            offsets[row + 1] += 1;
        }
        for i in 0..node_count {
            offsets[i + 1] += offsets[i];
        }
        let targets = edges.iter().map(|&(_, col)| col).collect();
        Csr { offsets, targets }
    }

    #[inline]
    fn row(&self, v: NodeId) -> &[NodeId] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }
}

/// External node tokens and their dense internal ids.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NodeNames {
    names: Vec<String>,
    index: HashMap<String, NodeId>,
}

impl NodeNames {
    pub fn intern(&mut self, token: &str) -> NodeId {
        if let Some(&id) = self.index.get(token) {
            return id;
        }
        let id = self.names.len();
        self.names.push(token.to_string());
        self.index.insert(token.to_string(), id);
        id
    }

    pub fn get(&self, token: &str) -> Option<NodeId> {
        self.index.get(token).copied()
    }

    pub fn name(&self, id: NodeId) -> Option<&str> {
        self.names.get(id).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    out: Csr,
    inc: Csr,
    names: Option<NodeNames>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeListOptions {
    /// Flip every edge, so a line `src dst` becomes `dst -> src`.
    pub reverse: bool,
    pub allow_self_loops: bool,
}

impl Default for EdgeListOptions {
    fn default() -> Self {
        EdgeListOptions {
            reverse: false,
            allow_self_loops: true,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LoadStats {
    pub lines: usize,
    pub duplicate_edges: usize,
    pub self_loops: usize,
}

impl Graph {
    /// Builds a graph on nodes `0..node_count`. Duplicate edges are collapsed.
    pub fn from_edges<I>(node_count: usize, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut list = Vec::new();
        for (u, v) in edges {
            for node in [u, v] {
                if node >= node_count {
                    return Err(Error::NodeOutOfRange { node, node_count });
                }
            }
            list.push((u, v));
        }
        Ok(Self::build(node_count, list, None).0)
    }

    /// Returns the graph together with the number of duplicate edges dropped.
    fn build(
        node_count: usize,
        mut edges: Vec<(NodeId, NodeId)>,
        names: Option<NodeNames>,
    ) -> (Graph, usize) {
        let raw = edges.len();
        edges.sort_unstable();
        edges.dedup();
        let duplicates = raw - edges.len();
        let out = Csr::from_sorted(node_count, &edges);
        let mut transposed: Vec<_> = edges.iter().map(|&(u, v)| (v, u)).collect();
        transposed.sort_unstable();
        let inc = Csr::from_sorted(node_count, &transposed);
        (Graph { out, inc, names }, duplicates)
    }

    pub fn node_count(&self) -> usize {
        self.out.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.out.targets.len()
    }

    fn check(&self, v: NodeId) -> Result<()> {
        if v < self.node_count() {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange {
                node: v,
                node_count: self.node_count(),
            })
        }
    }

    pub fn in_neighbors(&self, v: NodeId) -> Result<&[NodeId]> {
        self.check(v)?;
        Ok(self.inc.row(v))
    }

    pub fn out_neighbors(&self, v: NodeId) -> Result<&[NodeId]> {
        self.check(v)?;
        Ok(self.out.row(v))
    }

    /// Unchecked in-neighbors; panics when `v` is out of range.
    #[inline]
    pub(crate) fn ins(&self, v: NodeId) -> &[NodeId] {
        self.inc.row(v)
    }

    #[inline]
    pub(crate) fn outs(&self, v: NodeId) -> &[NodeId] {
        self.out.row(v)
    }

    pub fn in_degree(&self, v: NodeId) -> usize {
        self.inc.row(v).len()
    }

    pub fn out_degree(&self, v: NodeId) -> usize {
        self.out.row(v).len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        (0..self.node_count()).flat_map(move |u| self.out.row(u).iter().map(move |&v| (u, v)))
    }

    pub fn names(&self) -> Option<&NodeNames> {
        self.names.as_ref()
    }

    /// External token of `v`, or its decimal id when the graph has no names.
    pub fn display_name(&self, v: NodeId) -> String {
        self.names
            .as_ref()
            .and_then(|n| n.name(v))
            .map_or_else(|| v.to_string(), str::to_string)
    }

    /// Resolves an external token; falls back to parsing a decimal id for unnamed graphs.
    pub fn resolve(&self, token: &str) -> Result<NodeId> {
        let id = match &self.names {
            Some(names) => names.get(token),
            None => token.parse().ok().filter(|&v| v < self.node_count()),
        };
        id.ok_or_else(|| Error::UnknownNode(token.to_string()))
    }

    /// All nodes within undirected hop distance `radius` of `center`, center included, sorted.
    pub fn ball(&self, center: NodeId, radius: usize) -> Result<Vec<NodeId>> {
        self.check(center)?;
        let mut dist = vec![usize::MAX; self.node_count()];
        let mut queue = VecDeque::new();
        dist[center] = 0;
        queue.push_back(center);
        let mut found = vec![center];
        while let Some(u) = queue.pop_front() {
            let d = dist[u];
            if d == radius {
                continue;
            }
            for &w in self.out.row(u).iter().chain(self.inc.row(u)) {
                if dist[w] == usize::MAX {
                    dist[w] = d + 1;
                    found.push(w);
                    queue.push_back(w);
                }
            }
        }
        found.sort_unstable();
        Ok(found)
    }

    /// Writes one `src dst` line per edge, using external names when present.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> Result<()> {
        for (u, v) in self.edges() {
            writeln!(out, "{}\t{}", self.display_name(u), self.display_name(v))?;
        }
        Ok(())
    }
}

/// Reads a whitespace-separated edge list; gzip input is detected by its magic bytes.
///
/// Node tokens are arbitrary strings and receive dense ids in first-seen order.
pub fn load_edge_list<R: Read>(source: R, options: &EdgeListOptions) -> Result<(Graph, LoadStats)> {
    let mut names = NodeNames::default();
    let mut edges = Vec::new();
    let mut stats = LoadStats::default();
    for (line_no, line) in content_lines(maybe_gzip(source)?) {
        let line = line?;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected 2 node tokens, found {}", tokens.len()),
            });
        }
        let (src, dst) = (names.intern(tokens[0]), names.intern(tokens[1]));
        if src == dst {
            if !options.allow_self_loops {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("self-loop on '{}'", tokens[0]),
                });
            }
            stats.self_loops += 1;
        }
        stats.lines += 1;
        edges.push(if options.reverse {
            (dst, src)
        } else {
            (src, dst)
        });
    }
    let n = names.len();
    let (graph, duplicates) = Graph::build(n, edges, Some(names));
    stats.duplicate_edges = duplicates;
    Ok((graph, stats))
}

pub type LabelId = u32;

/// Partial node → label assignment with interned label strings.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabelMap {
    labels: Vec<Option<LabelId>>,
    label_names: Vec<String>,
    label_index: HashMap<String, LabelId>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LabelStats {
    pub assigned: usize,
    /// Lines naming a node the graph does not contain.
    pub unknown_nodes: usize,
}

impl LabelMap {
    pub fn new(node_count: usize) -> Self {
        LabelMap {
            labels: vec![None; node_count],
            ..Default::default()
        }
    }

    /// Assigns `label` to `node`. Reassigning a node to a different label is an error.
    pub fn assign(&mut self, node: NodeId, label: &str) -> Result<LabelId> {
        let node_count = self.labels.len();
        if node >= node_count {
            return Err(Error::NodeOutOfRange { node, node_count });
        }
        let id = match self.label_index.get(label) {
            Some(&id) => id,
            None => {
                let id = self.label_names.len() as LabelId;
                self.label_names.push(label.to_string());
                self.label_index.insert(label.to_string(), id);
                id
            }
        };
        match self.labels[node] {
            Some(existing) if existing != id => Err(Error::InvalidConfig(format!(
                "node {node} labeled both '{}' and '{label}'",
                self.label_names[existing as usize]
            ))),
            _ => {
                self.labels[node] = Some(id);
                Ok(id)
            }
        }
    }

    pub fn get(&self, node: NodeId) -> Option<LabelId> {
        self.labels.get(node).copied().flatten()
    }

    pub fn label_name(&self, id: LabelId) -> Option<&str> {
        self.label_names.get(id as usize).map(String::as_str)
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labeled_count(&self) -> usize {
        self.labels.iter().filter(|l| l.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.labeled_count() == 0
    }
}

/// Reads `node<TAB>label` lines. Lines naming nodes absent from `graph` are counted and skipped.
pub fn load_labels<R: Read>(source: R, graph: &Graph) -> Result<(LabelMap, LabelStats)> {
    let mut map = LabelMap::new(graph.node_count());
    let mut stats = LabelStats::default();
    for (line_no, line) in content_lines(maybe_gzip(source)?) {
        let line = line?;
        let fields: Vec<&str> = if line.contains('\t') {
            line.split('\t').map(str::trim).collect()
        } else {
            line.split_whitespace().collect()
        };
        if fields.len() != 2 || fields.iter().any(|f| f.is_empty()) {
            return Err(Error::Parse {
                line: line_no,
                message: "expected node<TAB>label".to_string(),
            });
        }
        match graph.resolve(fields[0]) {
            Ok(node) => {
                map.assign(node, fields[1]).map_err(|e| Error::Parse {
                    line: line_no,
                    message: e.to_string(),
                })?;
                stats.assigned += 1;
            }
            Err(_) => stats.unknown_nodes += 1,
        }
    }
    Ok((map, stats))
}
