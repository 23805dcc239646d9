//! Fixed loci of affine maps and invariant subgroups on a real torus `R^6 / Z^6`.

use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::TorusError;
use crate::exact::congruence::{Congruence, CongruenceSolver};
use crate::exact::matrix::{vec_neg, Matrix};
use crate::{IntMat, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FixedLocus {
    Empty,
    /// Fixed points in reduced lattice coordinates, sorted.
    Finite(Vec<Vec<Rational>>),
    PositiveDim,
}

impl FixedLocus {
    pub fn count(&self) -> Option<usize> {
        match self {
            FixedLocus::Empty => Some(0),
            FixedLocus::Finite(p) => Some(p.len()),
            FixedLocus::PositiveDim => None,
        }
    }
}

pub fn minus_identity(m: &IntMat) -> IntMat {
    m.sub_mat(&Matrix::identity(m.rows()))
}

/// Fixed points of `z -> M z + b` on `R^6 / Z^6`.
pub fn fixed_locus(m: &IntMat, b: &[Rational]) -> Result<FixedLocus, TorusError> {
    if !m.is_unimodular() {
        return Err(TorusError::NotLatticePreserving);
    }
    let solver = CongruenceSolver::<Rational>::new(&minus_identity(m));
    fixed_locus_with(&solver, b)
}

/// Same as [`fixed_locus`] with a precomputed solver for `M - id`.
pub fn fixed_locus_with(
    solver: &CongruenceSolver<Rational>,
    b: &[Rational],
) -> Result<FixedLocus, TorusError> {
    Ok(match solver.solve(&vec_neg(b))? {
        Congruence::Empty => FixedLocus::Empty,
        Congruence::Solutions(s) => match s.enumerate() {
            Some(pts) => FixedLocus::Finite(pts),
            None => FixedLocus::PositiveDim,
        },
    })
}

/// Elementary divisors (all > 1) of the subgroup of points fixed by every map.
pub fn invariant_subgroup(maps: &[IntMat]) -> Result<Vec<u64>, TorusError> {
    if maps.is_empty() {
        return Err(TorusError::PositiveDimensional);
    }
    for m in maps {
        if !m.is_unimodular() {
            return Err(TorusError::NotLatticePreserving);
        }
    }
    let stacked = Matrix::vstack(&maps.iter().map(minus_identity).collect::<Vec<_>>());
    let solver = CongruenceSolver::<Rational>::new(&stacked);
    let d = solver.smith().diagonal();
    if d.len() < 6 || d.contains(&0) {
        return Err(TorusError::PositiveDimensional);
    }
    Ok(d.iter()
        .map(|x| x.abs().to_u64().expect("small"))
        .filter(|x| *x > 1)
        .collect())
}

/// Points fixed by every map, enumerated.
pub fn invariant_points(maps: &[IntMat]) -> Result<Vec<Vec<Rational>>, TorusError> {
    invariant_subgroup(maps)?;
    let stacked = Matrix::vstack(&maps.iter().map(minus_identity).collect::<Vec<_>>());
    let solver = CongruenceSolver::<Rational>::new(&stacked);
    match solver.solve(&vec![Rational::from_integer(0); stacked.rows()])? {
        Congruence::Solutions(s) => Ok(s.enumerate().unwrap_or_default()),
        Congruence::Empty => Ok(Vec::new()),
    }
}
