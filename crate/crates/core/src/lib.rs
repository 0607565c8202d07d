//! Minimum max-displacement separation of intervals on a line.
//!
//! Given intervals that may overlap, move them so that no two share more
//! than a point while keeping the largest distance any interval moves as
//! small as possible. Two exact solvers are provided: a quadratic one that
//! keeps every candidate order ([`prelim`]) and an `O(n log n)` one that
//! keeps only undominated candidates in an ordered map ([`fast`]).
//!
//! ```
//! use intsep::{Instance, Scalar, solve};
//!
//! let inst = Instance::from_pairs([(0, 2), (1, 3)]).unwrap();
//! let sol = solve(&inst, intsep::Direction::Two);
//! assert_eq!(sol.delta, Scalar::ratio(1, 2));
//! ```

pub mod bench;
pub mod cli;
pub mod fast;
pub mod format;
pub mod gen;
pub mod lineage;
pub mod model;
pub mod oracle;
pub mod prelim;
pub mod scalar;

pub use fast::{solve_fast, solve_fast_solution, FastSolve};
pub use model::{Configuration, Direction, Instance, Interval, ModelError, Solution};
pub use prelim::solve_preliminary;
pub use scalar::Scalar;

/// Optimal solution for either direction using the fast solver.
pub fn solve(inst: &Instance, direction: Direction) -> Solution {
    let one = solve_fast_solution(inst);
    match direction {
        Direction::One => one,
        Direction::Two => model::to_two_direction(&one),
    }
}
