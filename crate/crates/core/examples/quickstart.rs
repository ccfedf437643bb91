//! Order the columns of a small matrix so that rows break into as few
//! segments as possible.
//!
//! `cargo run --example quickstart`

use lindiag::formats::parse_matrix_text;
use lindiag::render::render_text;
use lindiag::{solve_matrix, ColumnPermutation, SolveOptions};

fn main() -> lindiag::Result<()> {
    let a = parse_matrix_text(
        "10101\n\
         01010\n\
         11000\n\
         00111\n",
    )?;
    let identity = ColumnPermutation::identity(a.cols());
    println!("as given: {} segments", a.cons1());
    print!("{}", render_text(&a, &identity)?);

    let s = solve_matrix(&a, &SolveOptions::default())?;
    println!("\nbest order {:?}: {} segments (optimal: {}, via {})", s.order, s.blocks, s.optimal, s.algorithm);
    print!("{}", render_text(&a, &s.permutation())?);
    Ok(())
}
