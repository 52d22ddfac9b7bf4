//! Link-based node similarity under the random surfer-pair model.
//!
//! Two surfers start at nodes `a` and `b` and move through a directed graph
//! according to a transition kernel over node pairs. The similarity of `a`
//! and `b` is `E[C^L]`, where `L` is the step at which the surfers first
//! stand on the same node (0 when they never meet). Different kernels give
//! SimRank, rvs-SimRank, P-Rank, PSimRank, SimRank*, PSimRank*, and any
//! convex combination or per-surfer product of them.
//!
//! - [`graph`]: CSR storage with in- and out-adjacency, edge list and label loaders.
//! - [`kernel`]: transition distributions and single-step sampling per measure.
//! - [`solver`]: exact all-pairs values by fixed-point iteration.
//! - [`montecarlo`]: per-pair estimates from simulated walks.
//! - [`query`]: top-k queries with radius pruning.
//! - [`eval`]: mean average precision against node labels.
//!
//! ```
//! use grsp::{make_kernel, solve, Graph, MeasureSpec, SolveConfig};
//!
//! // Four unrelated parents all cite both node 4 and node 5.
//! let g = Graph::from_edges(6, (0..4).flat_map(|p| [(p, 4), (p, 5)])).unwrap();
//! let simrank = solve(&make_kernel(&MeasureSpec::SimRank, &g).unwrap(), &SolveConfig::default()).unwrap();
//! let psimrank = solve(&make_kernel(&MeasureSpec::PSimRank, &g).unwrap(), &SolveConfig::default()).unwrap();
//! assert!((simrank.get(4, 5) - 0.2).abs() < 1e-9);
//! assert!((psimrank.get(4, 5) - 0.8).abs() < 1e-9);
//! ```

pub mod cli;
pub mod error;
pub mod eval;
pub mod graph;
pub mod io;
pub mod kernel;
pub mod measure;
pub mod montecarlo;
pub mod query;
pub mod solver;

pub use error::{Error, Result};
pub use eval::{average_precision, eval_map, prank_sweep, EvalConfig, EvalReport};
pub use graph::{load_edge_list, load_labels, EdgeListOptions, Graph, LabelMap, NodeId};
pub use kernel::{make_kernel, CompoundState, Kernel, TransitionDistribution};
pub use measure::MeasureSpec;
pub use montecarlo::{estimate, sample_walk, Estimate, McConfig, Meeting, WalkOutcome};
pub use query::{topk, QueryParams, QueryResult};
pub use solver::{residual, solve, SimilarityTable, SolveConfig};
