//! Load an edge list (plain or gzip), inspect adjacency and neighborhoods.
//!
//!     cargo run --example load_graph -- data/g1.tsv

use std::path::PathBuf;

use grsp::io::open_text;
use grsp::{load_edge_list, EdgeListOptions};

fn main() -> grsp::Result<()> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/g1.tsv"));
    let (graph, stats) = load_edge_list(open_text(&path)?, &EdgeListOptions::default())?;
    println!(
        "{}: {} nodes, {} edges ({} lines, {} duplicates, {} self-loops)",
        path.display(),
        graph.node_count(),
        graph.edge_count(),
        stats.lines,
        stats.duplicate_edges,
        stats.self_loops
    );
    for v in 0..graph.node_count().min(10) {
        let names = |ids: &[usize]| {
            ids.iter()
                .map(|&x| graph.display_name(x))
                .collect::<Vec<_>>()
                .join(",")
        };
        println!(
            "{:>6}  in=[{}]  out=[{}]  ball(2)={}",
            graph.display_name(v),
            names(graph.in_neighbors(v)?),
            names(graph.out_neighbors(v)?),
            graph.ball(v, 2)?.len()
        );
    }
    Ok(())
}
