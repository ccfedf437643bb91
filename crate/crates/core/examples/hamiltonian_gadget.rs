//! The incidence matrix of a graph of maximum degree 3 reaches its
//! threshold exactly when the graph has a Hamiltonian path.
//!
//! `cargo run --example hamiltonian_gadget`

use lindiag::gen::{has_hamiltonian_path, hampath_gadget, SimpleGraph};
use lindiag::{solve_matrix, SolveOptions};

fn main() -> lindiag::Result<()> {
    let graphs = [
        ("path", SimpleGraph::new(4, [(0, 1), (1, 2), (2, 3)])?),
        ("star", SimpleGraph::new(4, [(0, 1), (0, 2), (0, 3)])?),
        ("cube", SimpleGraph::new(8, [(0, 1), (1, 2), (2, 3), (3, 0), (4, 5), (5, 6), (6, 7), (7, 4), (0, 4), (1, 5), (2, 6), (3, 7)])?),
        ("two triangles", SimpleGraph::new(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)])?),
    ];
    for (name, g) in &graphs {
        let gadget = hampath_gadget(g)?;
        let s = solve_matrix(&gadget.matrix, &SolveOptions::default())?;
        println!(
            "{name:>13}: optimum {:>2}, threshold {:>2}, path {}",
            s.blocks,
            gadget.threshold,
            has_hamiltonian_path(g)
        );
        assert_eq!(s.blocks as i64 <= gadget.threshold, has_hamiltonian_path(g));
    }
    Ok(())
}
