//! Linear congruences `A x = b (mod L)` with `x` ranging over `(R/Z)^k`.

use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::ExactError;
use crate::exact::matrix::Matrix;
use crate::exact::snf::{smith_normal_form, Smith};
use crate::scalar::Scalar;

/// Reduce every coordinate into `[0, 1)`.
pub fn reduce_mod1<T: Scalar>(v: &[T]) -> Vec<T> {
    v.iter().map(Scalar::frac).collect()
}

pub fn is_integral_vec<T: Scalar>(v: &[T]) -> bool {
    v.iter().all(Scalar::is_integral)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Congruence<T: Scalar> {
    Empty,
    Solutions(SolutionSet<T>),
}

impl<T: Scalar> Congruence<T> {
    pub fn is_empty(&self) -> bool {
        matches!(self, Congruence::Empty)
    }

    pub fn count(&self) -> Option<u64> {
        match self {
            Congruence::Empty => Some(0),
            Congruence::Solutions(s) => s.count,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionSet<T: Scalar> {
    /// One solution, reduced into `[0, 1)^k`.
    pub particular: Vec<T>,
    /// Generators of the finite part of the homogeneous solution group
    /// with their orders.
    pub torsion: Vec<(Vec<T>, u64)>,
    /// Integer directions of real lines of solutions.
    pub free: Vec<Vec<T::Int>>,
    /// Number of solutions modulo `Z^k`, when finite.
    pub count: Option<u64>,
}

impl<T: Scalar> SolutionSet<T> {
    /// All solutions modulo `Z^k`, or `None` when the set is infinite.
    pub fn enumerate(&self) -> Option<Vec<Vec<T>>> {
        self.count?;
        let mut out = vec![self.particular.clone()];
        for (g, ord) in &self.torsion {
            let mut next = Vec::with_capacity(out.len() * *ord as usize);
            for p in &out {
                let mut cur = p.clone();
                for _ in 0..*ord {
                    next.push(reduce_mod1(&cur));
                    cur = cur
                        .iter()
                        .zip(g)
                        .map(|(a, b)| a.clone() + b.clone())
                        .collect();
                }
            }
            out = next;
        }
        out.sort();
        Some(out)
    }
}

/// Precomputed Smith data for repeated right-hand sides.
#[derive(Clone, Debug)]
pub struct CongruenceSolver<T: Scalar> {
    smith: Smith<T::Int>,
    rows: usize,
    cols: usize,
}

impl<T: Scalar> CongruenceSolver<T> {
    pub fn new(a: &Matrix<T::Int>) -> Self {
        CongruenceSolver {
            smith: smith_normal_form(a),
            rows: a.rows(),
            cols: a.cols(),
        }
    }

    pub fn smith(&self) -> &Smith<T::Int> {
        &self.smith
    }

    fn diag(&self, i: usize) -> T::Int {
        if i < self.rows.min(self.cols) {
            self.smith.d[(i, i)].clone()
        } else {
            T::Int::zero()
        }
    }

    fn transformed(&self, b: &[T]) -> Vec<T> {
        self.smith.u.to_rational::<T>().mul_vec(b)
    }

    /// Whether `A x = b (mod Z^m)` has a real solution.
    pub fn solvable(&self, b: &[T]) -> bool {
        let c = self.transformed(b);
        (0..self.rows).all(|i| !self.diag(i).is_zero() || c[i].is_integral())
    }

    pub fn solve(&self, b: &[T]) -> Result<Congruence<T>, ExactError> {
        if b.len() != self.rows {
            return Err(ExactError::DimensionMismatch(format!(
                "right-hand side has length {}, expected {}",
                b.len(),
                self.rows
            )));
        }
        let c = self.transformed(b);
        if (0..self.rows).any(|i| self.diag(i).is_zero() && !c[i].is_integral()) {
            return Ok(Congruence::Empty);
        }
        let v = self.smith.v.to_rational::<T>();
        let mut w = vec![T::zero(); self.cols];
        let mut torsion = Vec::new();
        let mut free = Vec::new();
        let mut count: Option<u64> = Some(1);
        for j in 0..self.cols {
            let d = self.diag(j);
            if d.is_zero() {
                free.push(self.smith.v.col(j));
                count = None;
                continue;
            }
            let dq = T::from_integer(d.clone());
            w[j] = c[j].clone() / dq.clone();
            let ord = d.abs().to_u64().expect("elementary divisor fits in u64");
            if ord > 1 {
                let mut e = vec![T::zero(); self.cols];
                e[j] = T::one() / dq;
                torsion.push((reduce_mod1(&v.mul_vec(&e)), ord));
            }
            count = count.map(|n| n * ord);
        }
        Ok(Congruence::Solutions(SolutionSet {
            particular: reduce_mod1(&v.mul_vec(&w)),
            torsion,
            free,
            count,
        }))
    }
}

/// Solve `A x = b (mod L Z^m)` for `x` in `(R/Z)^k`. `L` defaults to the
/// identity; otherwise it must be square, nonsingular, and contain `A Z^k`.
pub fn solve_linear_congruence<T: Scalar>(
    a: &Matrix<T::Int>,
    b: &[T],
    l: Option<&Matrix<T::Int>>,
) -> Result<Congruence<T>, ExactError> {
    if b.len() != a.rows() {
        return Err(ExactError::DimensionMismatch(format!(
            "A has {} rows but b has length {}",
            a.rows(),
            b.len()
        )));
    }
    match l {
        None => CongruenceSolver::new(a).solve(b),
        Some(l) => {
            if l.rows() != a.rows() || l.cols() != a.rows() {
                return Err(ExactError::DimensionMismatch(format!(
                    "modulus must be {}x{}, got {}x{}",
                    a.rows(),
                    a.rows(),
                    l.rows(),
                    l.cols()
                )));
            }
            let linv = l
                .to_rational::<T>()
                .inverse()
                .ok_or(ExactError::BadModulus)?;
            let a2 = linv
                .mul_mat(&a.to_rational::<T>())
                .to_integer()
                .ok_or(ExactError::BadModulus)?;
            let b2 = linv.mul_vec(b);
            CongruenceSolver::new(&a2).solve(&b2)
        }
    }
}

pub fn one_vec<T: Scalar>(n: usize, i: usize) -> Vec<T> {
    let mut v = vec![T::zero(); n];
    v[i] = T::one();
    v
}
