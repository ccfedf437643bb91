//! The reduction on its own: build the tour instance, write it as TSPLIB
//! for an external solver, and read a tour back into a column order.
//!
//! `cargo run --example tsplib_export`

use lindiag::formats::parse_matrix_text;
use lindiag::reduction::{build_plain, export_tsplib, parse_tsplib, tour_to_permutation};
use lindiag::tsp::{solve, SolverConfig};

fn main() -> lindiag::Result<()> {
    let a = parse_matrix_text("0110\n1100\n1011\n")?;
    let inst = build_plain(&a);
    let doc = export_tsplib(&inst, "small");
    print!("{doc}");

    let back = parse_tsplib(&doc)?;
    let r = solve(&back, &SolverConfig::default())?;
    let p = tour_to_permutation(&r.tour, &inst)?;
    println!("tour {:?} of length {} gives order {:?} with {} segments", r.tour.as_slice(), r.length, p.as_slice(), a.cons1_under(p.as_slice()));
    Ok(())
}
