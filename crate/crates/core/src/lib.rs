//! Column orderings for linear diagrams with the fewest line segments.
//!
//! A set system is a 0/1 matrix (rows are sets, columns are overlaps). The
//! number of drawn segments is the number of blocks of consecutive ones,
//! and minimizing it over column orders reduces to a symmetric TSP on
//! Hamming distances plus an all-zero sentinel column. Start with
//! [`pipeline::solve_matrix`].

pub mod bench;
pub mod cli;
pub mod error;
pub mod formats;
pub mod gen;
pub mod heuristics;
pub mod matrix;
pub mod pipeline;
pub mod pqtree;
pub mod reduction;
pub mod render;
pub mod setsystem;
pub mod tsp;
pub mod verify;

pub use error::{Error, Result};
pub use matrix::{BinaryMatrix, ColumnPermutation};
pub use pipeline::{solve_matrix, Constraint, Method, Solution, SolveOptions};
