//! Draw a set system before and after ordering.
//!
//! `cargo run --example render_svg -- out_dir`

use std::path::PathBuf;

use lindiag::render::{render_svg, RenderStyle};
use lindiag::setsystem::SetSystem;
use lindiag::{solve_matrix, ColumnPermutation, SolveOptions};

const SETS: &str = r#"{
  "elements": ["Mon", "Tue", "Wed", "Thu", "Fri", "Sat", "Sun"],
  "sets": [
    {"name": "gym", "members": ["Mon", "Wed", "Fri"]},
    {"name": "office", "members": ["Mon", "Tue", "Wed", "Thu", "Fri"]},
    {"name": "market", "members": ["Sat", "Wed"]},
    {"name": "choir", "members": ["Thu", "Sun"]}
  ]
}"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| ".".into()));
    let sets = SetSystem::from_json(SETS)?;
    let a = sets.to_matrix();
    let best = solve_matrix(&a, &SolveOptions::default())?.permutation();
    let style = RenderStyle::default();
    for (name, p) in [("given", ColumnPermutation::identity(a.cols())), ("ordered", best)] {
        let path = dir.join(format!("week-{name}.svg"));
        std::fs::write(&path, render_svg(&sets, &p, &style)?)?;
        println!("{}: {} segments", path.display(), a.cons1_under(p.as_slice()));
    }
    Ok(())
}
