//! Print the one-step transition distribution of every built-in measure from one pair state.

use grsp::{make_kernel, CompoundState, Graph, MeasureSpec};

fn main() -> grsp::Result<()> {
    // 0 and 1 share parent 2; 0 also has parent 3, 1 has parent 4.
    let g = Graph::from_edges(5, [(2, 0), (2, 1), (3, 0), (4, 1), (0, 3), (1, 4)])?;
    let state = CompoundState::Pair(0, 1);
    for spec in MeasureSpec::builtin(0.5) {
        let dist = make_kernel(&spec, &g)?.transition(state)?;
        println!("{spec}");
        for ((x, y), p) in &dist.entries {
            let mark = if x == y { "  meet" } else { "" };
            println!("    ({x},{y})  {p:.4}{mark}");
        }
        if dist.stopped_mass > 0.0 {
            println!("    stopped {:.4}", dist.stopped_mass);
        }
    }
    Ok(())
}
