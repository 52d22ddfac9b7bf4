//! Compare Monte Carlo estimates with exact values as the sample count grows.

use grsp::{estimate, make_kernel, solve, Graph, McConfig, MeasureSpec, SolveConfig};

fn main() -> grsp::Result<()> {
    let edges = [
        (0, 1),
        (1, 2),
        (2, 0),
        (3, 1),
        (3, 4),
        (4, 5),
        (5, 3),
        (0, 4),
        (2, 5),
        (5, 1),
    ];
    let g = Graph::from_edges(6, edges)?;
    let pair = (1, 4);
    for spec in [MeasureSpec::SimRankStar, MeasureSpec::PSimRankStar] {
        let kernel = make_kernel(&spec, &g)?;
        let exact = solve(&kernel, &SolveConfig::default())?.get(pair.0, pair.1);
        println!("{spec}: exact {exact:.6}");
        for samples in [100, 1_000, 10_000, 100_000] {
            let cfg = McConfig {
                samples,
                max_steps: 30,
                ..McConfig::default()
            };
            let est = estimate(&kernel, pair, &cfg)?;
            println!(
                "  N={samples:<7} mean={:.6} ± {:.6}  unmet={}  tail bound={:.1e}",
                est.mean,
                est.std_error,
                est.not_met,
                cfg.truncation_bound()
            );
        }
    }
    Ok(())
}
