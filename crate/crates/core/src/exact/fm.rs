//! Fourier–Motzkin elimination for small systems of rational inequalities.

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    /// `a.x >= b`
    Ge,
    /// `a.x > b`
    Gt,
    /// `a.x <= b`
    Le,
    /// `a.x < b`
    Lt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inequality<T: Scalar> {
    pub coeffs: Vec<T>,
    pub rel: Relation,
    pub rhs: T,
}

impl<T: Scalar> Inequality<T> {
    pub fn new(coeffs: Vec<T>, rel: Relation, rhs: T) -> Self {
        Inequality { coeffs, rel, rhs }
    }

    pub fn satisfied_by(&self, x: &[T]) -> bool {
        let lhs = self
            .coeffs
            .iter()
            .zip(x)
            .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone());
        match self.rel {
            Relation::Ge => lhs >= self.rhs,
            Relation::Gt => lhs > self.rhs,
            Relation::Le => lhs <= self.rhs,
            Relation::Lt => lhs < self.rhs,
        }
    }

    /// Same constraint written as `a.x >= b` or `a.x > b`.
    fn normalized(&self) -> Lower<T> {
        match self.rel {
            Relation::Ge => Lower {
                a: self.coeffs.clone(),
                b: self.rhs.clone(),
                strict: false,
            },
            Relation::Gt => Lower {
                a: self.coeffs.clone(),
                b: self.rhs.clone(),
                strict: true,
            },
            Relation::Le => Lower {
                a: self.coeffs.iter().map(|c| -c.clone()).collect(),
                b: -self.rhs.clone(),
                strict: false,
            },
            Relation::Lt => Lower {
                a: self.coeffs.iter().map(|c| -c.clone()).collect(),
                b: -self.rhs.clone(),
                strict: true,
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IneqSystem<T: Scalar> {
    pub nvars: usize,
    pub rows: Vec<Inequality<T>>,
}

impl<T: Scalar> IneqSystem<T> {
    pub fn new(nvars: usize) -> Self {
        IneqSystem {
            nvars,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, coeffs: Vec<T>, rel: Relation, rhs: T) -> &mut Self {
        assert_eq!(coeffs.len(), self.nvars, "inequality arity");
        self.rows.push(Inequality::new(coeffs, rel, rhs));
        self
    }

    pub fn satisfied_by(&self, x: &[T]) -> bool {
        self.rows.iter().all(|r| r.satisfied_by(x))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Lower<T> {
    a: Vec<T>,
    b: T,
    strict: bool,
}

fn scale_to_unit<T: Scalar>(r: &Lower<T>, k: usize) -> Lower<T> {
    let c = r.a[k].abs();
    Lower {
        a: r.a.iter().map(|x| x.clone() / c.clone()).collect(),
        b: r.b.clone() / c,
        strict: r.strict,
    }
}

/// Exact rational feasibility of a system of (possibly strict) linear inequalities.
pub fn fm_feasible<T: Scalar>(sys: &IneqSystem<T>) -> bool {
    let mut rows: Vec<Lower<T>> = sys.rows.iter().map(Inequality::normalized).collect();
    for k in 0..sys.nvars {
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for r in rows {
            if r.a[k].is_zero() {
                rest.push(r);
            } else if r.a[k].is_positive() {
                pos.push(scale_to_unit(&r, k));
            } else {
                neg.push(scale_to_unit(&r, k));
            }
        }
        // x_k >= b_p - a_p' x'   and   x_k <= -b_n + a_n' x'
        for p in &pos {
            for n in &neg {
                let a: Vec<T> =
                    p.a.iter()
                        .zip(&n.a)
                        .map(|(x, y)| x.clone() + y.clone())
                        .collect();
                rest.push(Lower {
                    a,
                    b: p.b.clone() + n.b.clone(),
                    strict: p.strict || n.strict,
                });
            }
        }
        rest.sort();
        rest.dedup();
        rows = rest;
    }
    rows.iter().all(|r| {
        if r.strict {
            T::zero() > r.b
        } else {
            T::zero() >= r.b
        }
    })
}
