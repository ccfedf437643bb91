//! Restrict orders to a hierarchy: columns 0..3 keep their sequence (or its
//! reverse), columns 4 and 5 stay adjacent, everything else is free.
//!
//! `cargo run --example pqtree_constraints`

use lindiag::formats::parse_matrix_text;
use lindiag::pqtree::{contains, PQTree};
use lindiag::{solve_matrix, Constraint, SolveOptions};

fn main() -> lindiag::Result<()> {
    let a = parse_matrix_text("100101\n011010\n110001\n001110\n")?;
    let tree = PQTree::parse("( [0 1 2 3] (4 5) )")?;
    println!("{tree} admits {} of 720 orders", tree.count());

    let free = solve_matrix(&a, &SolveOptions::default())?;
    let opts = SolveOptions::default().with_constraint(Constraint::PqTree(tree.clone()));
    let held = solve_matrix(&a, &opts)?;
    println!("free: {:?} with {} segments", free.order, free.blocks);
    println!("tree: {:?} with {} segments", held.order, held.blocks);
    assert!(contains(&tree, &held.permutation())?);
    Ok(())
}
