//! Exact arithmetic: cyclotomic fields, integer and rational matrices,
//! Smith/Hermite forms, linear congruences and Fourier–Motzkin.

pub mod congruence;
pub mod cyclotomic;
pub mod fm;
pub mod matrix;
pub mod snf;

pub use congruence::{
    reduce_mod1, solve_linear_congruence, Congruence, CongruenceSolver, SolutionSet,
};
pub use cyclotomic::{euler_phi, CycloOp, Cyclotomic, Embedding};
pub use fm::{fm_feasible, IneqSystem, Inequality, Relation};
pub use matrix::{Field, Matrix, Ring};
pub use snf::{hermite_rows, smith_normal_form, Smith};
