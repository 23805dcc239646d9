//! Subgroups of the 3-torsion points of `E^3` fixed by `zeta_3`.
//!
//! `Fix_zeta(E) = F_3 * t` with `t = (1 + 2 zeta_3)/3`, so such a subgroup is an
//! `F_3`-subspace of `F_3^3`; the vector `(a, b, c)` stands for `(a t, b t, c t)`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::TorusError;
use crate::exact::congruence::reduce_mod1;
use crate::torus::{make_quotient_lattice, CVec, PeriodLattice};
use crate::{Cyclo, IntMat, Rational};

pub type F3Vec = [u8; 3];

fn add(a: F3Vec, b: F3Vec) -> F3Vec {
    [(a[0] + b[0]) % 3, (a[1] + b[1]) % 3, (a[2] + b[2]) % 3]
}

fn scale(a: F3Vec, c: u8) -> F3Vec {
    a.map(|x| (x * c) % 3)
}

/// `t = (1 + 2 zeta_3) / 3`.
pub fn t_point() -> Cyclo {
    Cyclo::from_terms(3, &[(Rational::new(1, 3), 0), (Rational::new(2, 3), 1)])
}

pub fn f3_point(v: F3Vec) -> CVec {
    let t = t_point();
    v.map(|c| t.scale(&Rational::from_integer(c as i64)))
}

/// Reduced coordinates in the standard basis `e_j, zeta e_j` of `Z[zeta_3]^3`.
pub fn f3_coords(v: F3Vec) -> Vec<Rational> {
    let mut out = Vec::with_capacity(6);
    for c in v {
        let c = c as i64;
        out.push(Rational::new(c % 3, 3));
        out.push(Rational::new((2 * c) % 3, 3));
    }
    out
}

/// Inverse of [`f3_coords`] on `Fix_zeta(E)^3`.
#[derive(Clone, Debug)]
pub struct F3Index {
    map: HashMap<Vec<Rational>, F3Vec>,
}

impl Default for F3Index {
    fn default() -> Self {
        let map = all_vectors()
            .into_iter()
            .map(|v| (f3_coords(v), v))
            .collect();
        F3Index { map }
    }
}

impl F3Index {
    pub fn lookup(&self, coords: &[Rational]) -> Option<F3Vec> {
        self.map.get(&reduce_mod1(coords)).copied()
    }

    /// Image of `v` under an integer map in standard coordinates.
    pub fn image(&self, m: &IntMat, v: F3Vec) -> Option<F3Vec> {
        self.lookup(&m.to_rational::<Rational>().mul_vec(&f3_coords(v)))
    }
}

pub fn all_vectors() -> Vec<F3Vec> {
    (0..27u8).map(|i| [i / 9, (i / 3) % 3, i % 3]).collect()
}

/// An `F_3`-subspace, stored as its sorted element list.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Kernel {
    pub elements: Vec<F3Vec>,
}

impl Kernel {
    pub fn trivial() -> Self {
        Kernel {
            elements: vec![[0, 0, 0]],
        }
    }

    pub fn span(gens: &[F3Vec]) -> Self {
        let mut set: BTreeSet<F3Vec> = BTreeSet::from([[0, 0, 0]]);
        for g in gens {
            let g = g.map(|x| x % 3);
            let cur: Vec<F3Vec> = set.iter().copied().collect();
            for x in cur {
                set.insert(add(x, g));
                set.insert(add(x, scale(g, 2)));
            }
        }
        Kernel {
            elements: set.into_iter().collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.elements.len().ilog(3) as usize
    }

    pub fn contains(&self, v: F3Vec) -> bool {
        self.elements.binary_search(&v).is_ok()
    }

    /// Lexicographically greedy basis.
    pub fn basis(&self) -> Vec<F3Vec> {
        let mut out: Vec<F3Vec> = Vec::new();
        for v in &self.elements {
            if !Kernel::span(&out).contains(*v) {
                out.push(*v);
            }
        }
        out
    }

    pub fn nonzero(&self) -> impl Iterator<Item = &F3Vec> {
        self.elements.iter().filter(|v| **v != [0, 0, 0])
    }

    /// `Z[zeta_3]^3 + K`.
    pub fn lattice(&self) -> Result<PeriodLattice, TorusError> {
        let pts: Vec<CVec> = self.basis().into_iter().map(f3_point).collect();
        Ok(make_quotient_lattice(&PeriodLattice::eisenstein_cube(), &pts)?.0)
    }

    /// Image under an integer map in standard coordinates, if it stays inside `Fix_zeta(E)^3`.
    pub fn image(&self, index: &F3Index, m: &IntMat) -> Option<Kernel> {
        let imgs: Vec<F3Vec> = self
            .basis()
            .into_iter()
            .map(|v| index.image(m, v))
            .collect::<Option<_>>()?;
        Some(Kernel::span(&imgs))
    }

    pub fn is_invariant(&self, index: &F3Index, maps: &[IntMat]) -> bool {
        maps.iter()
            .all(|m| self.image(index, m).as_ref() == Some(self))
    }
}

impl fmt::Display for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = self.basis();
        if b.is_empty() {
            return f.write_str("0");
        }
        let show = |v: &F3Vec| {
            let c: Vec<&str> = v.iter().map(|x| ["0", "t", "-t"][*x as usize]).collect();
            format!("({})", c.join(","))
        };
        write!(f, "<{}>", b.iter().map(show).collect::<Vec<_>>().join(", "))
    }
}

/// Element shapes a kernel may not contain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Forbidden {
    None,
    /// Nonzero multiples of a single coordinate vector.
    Axes,
    /// Nonzero vectors supported on the third coordinate, or on the first two.
    Rho2,
}

impl Forbidden {
    pub fn allows(self, k: &Kernel) -> bool {
        match self {
            Forbidden::None => true,
            Forbidden::Axes => k
                .nonzero()
                .all(|v| v.iter().filter(|x| **x != 0).count() != 1),
            Forbidden::Rho2 => k.nonzero().all(|v| v[2] != 0 && (v[0], v[1]) != (0, 0)),
        }
    }
}

/// All 28 subspaces of `F_3^3`.
pub fn all_subspaces() -> Vec<Kernel> {
    let vs = all_vectors();
    let mut set: BTreeSet<Kernel> = BTreeSet::new();
    for a in &vs {
        for b in &vs {
            for c in &vs {
                set.insert(Kernel::span(&[*a, *b, *c]));
            }
        }
    }
    set.into_iter().collect()
}
