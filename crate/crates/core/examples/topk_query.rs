//! Top-k similar nodes for a query, with candidates limited to a radius around it.
//!
//!     cargo run --example topk_query -- data/clusters.tsv da03

use std::path::PathBuf;

use grsp::io::open_text;
use grsp::{
    load_edge_list, make_kernel, topk, EdgeListOptions, McConfig, MeasureSpec, QueryParams,
};

fn main() -> grsp::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/clusters.tsv"));
    let query = args.next().unwrap_or_else(|| "da03".to_string());

    let (graph, _) = load_edge_list(open_text(&path)?, &EdgeListOptions::default())?;
    let q = graph.resolve(&query)?;
    let mc = McConfig {
        samples: 500,
        ..McConfig::default()
    };
    for radius in [1, 2, 4] {
        let params = QueryParams {
            k: 5,
            radius,
            drop_zero: true,
        };
        let result = topk(
            &make_kernel(&MeasureSpec::PSimRankStar, &graph)?,
            q,
            &params,
            &mc,
        )?;
        println!(
            "radius {radius}: {} candidates",
            result.candidates_considered
        );
        for r in &result.ranked {
            println!(
                "  {:<6} {:.4} ± {:.4}",
                graph.display_name(r.node),
                r.mean,
                r.std_error
            );
        }
    }
    Ok(())
}
