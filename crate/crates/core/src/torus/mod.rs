//! Complex 3-tori `C^3 / Lambda` with cyclotomic period lattices.

pub mod fixed;
pub mod lattice;

pub use fixed::{fixed_locus, invariant_points, invariant_subgroup, FixedLocus};
pub use lattice::{
    cvec_parse, cvec_parse_or_zero, is_holomorphic, make_quotient_lattice, CVec, PeriodLattice,
    RealTorusMap, Semilinear, TorusPoint,
};
