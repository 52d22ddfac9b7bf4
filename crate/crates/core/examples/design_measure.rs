//! Build new measures from the compact syntax: convex mixtures and per-surfer products.
//! A convex mixture mixes transition kernels, so its scores are not the average of the parts.

use grsp::{make_kernel, solve, Graph, MeasureSpec, SolveConfig};

fn main() -> grsp::Result<()> {
    // A small citation chain with a shared reference and a shared citer.
    let g = Graph::from_edges(6, [(0, 2), (0, 3), (1, 3), (2, 4), (3, 5), (4, 5), (1, 4)])?;
    let specs = [
        "simrank",
        "simrankstar",
        "convex:[simrank@0.5,simrankstar@0.5]",
        "convex:[psimrank@0.3,rvs@0.7]",
        "product:simrank,rvs",
        "product:rvs,simrank",
    ];
    // Products pair a backward surfer with a forward one, so they see chains b -> x -> a
    // and are not symmetric.
    println!(
        "{:<40} {:>8} {:>8} {:>8}",
        "measure", "s(2,3)", "s(4,0)", "s(0,4)"
    );
    for text in specs {
        let spec: MeasureSpec = text.parse()?;
        let table = solve(&make_kernel(&spec, &g)?, &SolveConfig::default())?;
        println!(
            "{:<40} {:>8.4} {:>8.4} {:>8.4}",
            spec.to_string(),
            table.get(2, 3),
            table.get(4, 0),
            table.get(0, 4)
        );
    }
    if let Err(e) = "convex:[simrank@0.5,rvs@0.4]".parse::<MeasureSpec>() {
        println!("rejected: {e}");
    }
    Ok(())
}
