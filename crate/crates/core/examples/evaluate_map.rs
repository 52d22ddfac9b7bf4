//! Mean average precision of several measures against node labels, plus a P-Rank λ sweep.
//!
//!     cargo run --release --example evaluate_map -- data/clusters.tsv data/clusters.labels.tsv

use std::path::PathBuf;

use grsp::eval::default_lambdas;
use grsp::io::open_text;
use grsp::{
    eval_map, load_edge_list, load_labels, prank_sweep, EdgeListOptions, EvalConfig, McConfig,
    MeasureSpec,
};

fn main() -> grsp::Result<()> {
    let data = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data");
    let mut args = std::env::args().skip(1).map(PathBuf::from);
    let graph_path = args.next().unwrap_or_else(|| data.join("clusters.tsv"));
    let labels_path = args
        .next()
        .unwrap_or_else(|| data.join("clusters.labels.tsv"));

    let (graph, _) = load_edge_list(open_text(&graph_path)?, &EdgeListOptions::default())?;
    let (labels, stats) = load_labels(open_text(&labels_path)?, &graph)?;
    println!(
        "{} labelled nodes ({} label lines for unknown nodes)",
        labels.labeled_count(),
        stats.unknown_nodes
    );

    let cfg = EvalConfig {
        k: 10,
        num_queries: 10,
        num_trials: 5,
        mc: McConfig {
            samples: 200,
            ..McConfig::default()
        },
        ..EvalConfig::default()
    };
    let sweep = prank_sweep(&graph, &labels, &default_lambdas(), &cfg)?;
    for (lambda, map) in sweep.lambdas.iter().zip(&sweep.maps) {
        println!("prank lambda={lambda:.1} map={map:.4}");
    }

    let specs = [
        MeasureSpec::SimRank,
        MeasureSpec::PRank {
            lambda: sweep.best_lambda,
        },
        MeasureSpec::SimRankStar,
        MeasureSpec::PSimRank,
        MeasureSpec::PSimRankStar,
    ];
    let report = eval_map(&graph, &labels, &specs, &cfg)?;
    print!("{}", report.to_tsv(false));
    Ok(())
}
