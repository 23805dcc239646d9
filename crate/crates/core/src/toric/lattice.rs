//! Lattices `Z^3 + Z q` for rational `q` and their duals.

use num_integer::Integer;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::ToricError;
use crate::exact::matrix::{dot, Matrix};
use crate::exact::snf::hermite_rows;
use crate::{Int, RatMat, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QLattice {
    pub q: Vec<Rational>,
    /// Rows form a Z-basis (Hermite form).
    pub basis: RatMat,
}

fn q(n: Int) -> Rational {
    Rational::from_integer(n)
}

impl QLattice {
    pub fn new(q_vec: &[Rational]) -> Result<Self, ToricError> {
        if q_vec.len() != 3 {
            return Err(ToricError::InvalidFan(
                "lattice vector must have 3 entries".into(),
            ));
        }
        let l = q_vec.iter().fold(1, |acc: Int, x| acc.lcm(x.denom()));
        let mut rows: Vec<Vec<Int>> = (0..3)
            .map(|i| (0..3).map(|j| if i == j { l } else { 0 }).collect())
            .collect();
        rows.push(q_vec.iter().map(|x| (x * q(l)).to_integer()).collect());
        let h = hermite_rows(&Matrix::from_rows(rows));
        let basis = h.to_rational::<Rational>().scale(&Rational::new(1, l));
        Ok(QLattice {
            q: q_vec.to_vec(),
            basis,
        })
    }

    /// The standard lattice `Z^3`.
    pub fn standard() -> Self {
        Self::new(&[q(0), q(0), q(0)]).expect("three entries")
    }

    /// `[N : Z^3]`.
    pub fn index(&self) -> Int {
        (Rational::from_integer(1) / self.basis.det())
            .abs()
            .to_integer()
    }

    fn inverse(&self) -> RatMat {
        self.basis.inverse().expect("full rank")
    }

    /// Coordinates in the stored basis (row vector convention: `v = c * basis`).
    pub fn coords(&self, v: &[Rational]) -> Vec<Rational> {
        self.inverse().transpose().mul_vec(v)
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.coords(v).iter().all(|c| c.is_integer())
    }

    /// Whether `x` is in the dual lattice: integral with `<x,q>` integral.
    pub fn dual_contains(&self, x: &[Rational]) -> bool {
        x.iter().all(|c| c.is_integer()) && dot(x, &self.q).is_integer()
    }

    /// The first lattice point on the ray through `v`.
    pub fn primitive(&self, v: &[Rational]) -> Result<Vec<Rational>, ToricError> {
        let c = self.coords(v);
        if c.iter().all(|x| *x.numer() == 0) {
            return Err(ToricError::Degenerate);
        }
        let den = c.iter().fold(1, |acc: Int, x| acc.lcm(x.denom()));
        let ints: Vec<Int> = c.iter().map(|x| (x * q(den)).to_integer()).collect();
        let g = ints.iter().fold(0, |acc: Int, x| acc.gcd(x));
        let prim: Vec<Rational> = ints.iter().map(|x| q(x / g)).collect();
        Ok(self.basis.transpose().mul_vec(&prim))
    }

    pub fn is_primitive(&self, v: &[Rational]) -> bool {
        self.primitive(v).is_ok_and(|p| p == v)
    }
}
