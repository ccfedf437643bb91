//! Rows with larger weights are kept together first.
//!
//! `cargo run --example weighted_rows`

use lindiag::formats::parse_matrix_text;
use lindiag::reduction::RowWeights;
use lindiag::{solve_matrix, Constraint, SolveOptions};

fn main() -> lindiag::Result<()> {
    let a = parse_matrix_text("1010\n0110\n1101\n0011\n")?;
    for w in [vec![1, 1, 1, 1], vec![5, 1, 1, 1], vec![1, 1, 1, 9]] {
        let opts = SolveOptions::default().with_constraint(Constraint::Weights(RowWeights::new(w.clone())?));
        let s = solve_matrix(&a, &opts)?;
        let per_row: Vec<usize> = (0..a.rows()).map(|i| a.row_cons1_under(i, &s.order)).collect();
        println!(
            "weights {w:?}: order {:?}, weighted {}, segments per row {per_row:?}",
            s.order,
            s.objective()
        );
    }
    Ok(())
}
