//! Reconstruction of every pair `(J, J~)` with prescribed spectra.
//!
//! The pipeline is: rebuild `G(x, n, n)` from the two spectra
//! ([`build_ghat`]), split its zeros between the blocks above and below the
//! site ([`enumerate_assignments`]), rebuild each block from its Weyl
//! function ([`reconstruct_weyl`]) and glue the pieces together
//! ([`assemble_solution`]). [`solve_inverse`] runs all of it.

mod assign;
mod euclid;
mod ghat;
mod solve;
mod weyl;

pub use assign::{assemble_solution, count_formula, enumerate_assignments, family_coordinates, PoleAssignment};
pub use euclid::euclid_continued_fraction;
pub use ghat::{build_ghat, GHatExpansion};
pub use solve::{
    solve_inverse, t_grid, AssignmentValues, InverseOutcome, SolutionFamily, SolutionSample, SolveOptions,
};
pub use weyl::{reconstruct_weyl, Orientation};
