//! Keep two chosen sets in one piece each, then minimize the rest.
//!
//! `cargo run --example fixed_rows`

use lindiag::render::render_text;
use lindiag::setsystem::SetSystem;
use lindiag::{solve_matrix, Constraint, SolveOptions};

const SETS: &str = r#"{
  "elements": ["ant", "bee", "cat", "dog", "eel", "fox"],
  "sets": [
    {"name": "legs6", "members": ["ant", "bee"]},
    {"name": "pets", "members": ["cat", "dog", "fox"]},
    {"name": "swims", "members": ["dog", "eel"]},
    {"name": "flies", "members": ["bee"]},
    {"name": "small", "members": ["ant", "bee", "eel", "fox"]}
  ]
}"#;

fn main() -> lindiag::Result<()> {
    let sets = SetSystem::from_json(SETS)?;
    let a = sets.to_matrix();
    let free = solve_matrix(&a, &SolveOptions::default())?;

    let (i, j) = (sets.set_index("swims").unwrap(), sets.set_index("small").unwrap());
    let opts = SolveOptions::default().with_constraint(Constraint::FixRows(i, j));
    let fixed = solve_matrix(&a, &opts)?;

    let names = |order: &[usize]| order.iter().map(|&c| sets.elements()[c].as_str()).collect::<Vec<_>>().join(" ");
    println!("unconstrained: {} segments: {}", free.blocks, names(&free.order));
    println!("swims and small whole: {} segments: {}", fixed.blocks, names(&fixed.order));
    print!("{}", render_text(&a, &fixed.permutation())?);
    Ok(())
}
