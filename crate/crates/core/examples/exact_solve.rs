//! Exact all-pairs similarities on small graphs, showing where the classic measures disagree.

use grsp::{make_kernel, residual, solve, Graph, MeasureSpec, SolveConfig};

fn main() -> grsp::Result<()> {
    let cfg = SolveConfig::default();

    println!("k common parents: SimRank falls as C/k, PSimRank stays at C");
    for k in [1, 2, 4, 8, 16] {
        let g = Graph::from_edges(k + 2, (0..k).flat_map(|p| [(p, k), (p, k + 1)]))?;
        let simrank = solve(&make_kernel(&MeasureSpec::SimRank, &g)?, &cfg)?;
        let psimrank = solve(&make_kernel(&MeasureSpec::PSimRank, &g)?, &cfg)?;
        println!(
            "  k={k:<3} simrank={:.6} psimrank={:.6}",
            simrank.get(k, k + 1),
            psimrank.get(k, k + 1)
        );
    }

    println!("single edge b -> a: only one-surfer-at-a-time measures see it");
    let g = Graph::from_edges(2, [(1, 0)])?;
    for spec in MeasureSpec::builtin(0.5) {
        let kernel = make_kernel(&spec, &g)?;
        let table = solve(&kernel, &cfg)?;
        println!(
            "  {spec:<16} s(a,b)={:.6}  iterations={} residual={:.1e}",
            table.get(0, 1),
            table.iterations_run,
            residual(&kernel, &table, cfg.decay)?
        );
    }
    Ok(())
}
