//! Simplicial fans subdividing the positive octant, and the quotient type of each cone.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::ToricError;
use crate::exact::matrix::Matrix;
use crate::exact::snf::smith_normal_form;
use crate::singular::CqsType;
use crate::toric::lattice::QLattice;
use crate::{Int, RatMat, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ray {
    pub name: String,
    pub vector: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fan {
    pub lattice: QLattice,
    pub rays: Vec<Ray>,
    /// Maximal cones as triples of ray indices.
    pub cones: Vec<[usize; 3]>,
}

/// Index of the sublattice spanned by a cone's generators, with the weights
/// of a generator of the quotient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ConeType {
    pub index: u32,
    pub weights: [u32; 3],
}

impl ConeType {
    pub fn is_smooth(&self) -> bool {
        self.index == 1
    }

    pub fn as_cqs(&self) -> Option<CqsType> {
        CqsType::new(self.index, self.weights).ok()
    }

    pub fn is_terminal(&self) -> bool {
        self.is_smooth()
            || self
                .as_cqs()
                .is_some_and(|t| (1..t.order).all(|k| t.age(k) > Rational::one()))
    }
}

impl fmt::Display for ConeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.weights;
        write!(f, "({}; {a},{b},{c})", self.index)
    }
}

fn cols(vs: &[&[Rational]]) -> RatMat {
    Matrix::from_cols(vs.iter().map(|v| v.to_vec()).collect())
}

/// Lexicographically least weight tuple over generator powers and orderings.
fn normalize_weights(m: u32, w: [u32; 3]) -> [u32; 3] {
    if let Ok(t) = CqsType::new(m, w) {
        return t.weights;
    }
    let mut best: Option<[u32; 3]> = None;
    for k in (1..m).filter(|k| k.gcd(&m) == 1) {
        let mut t = w.map(|x| (x * k) % m);
        t.sort();
        if best.is_none_or(|b| t < b) {
            best = Some(t);
        }
    }
    best.unwrap_or(w)
}

pub fn cone_type(gens: [&[Rational]; 3], n: &QLattice) -> Result<ConeType, ToricError> {
    let u = cols(&gens);
    if u.det().is_zero() {
        return Err(ToricError::Degenerate);
    }
    for g in gens {
        if !n.contains(g) {
            return Err(ToricError::NotInLattice(
                g.iter().map(|x| x.to_string()).collect(),
            ));
        }
    }
    // columns: generators in the coordinates of N's basis
    let m = n.basis.transpose().inverse().expect("basis").mul_mat(&u);
    let m = m.to_integer().expect("generators lie in N");
    let index = m.det_int().abs();
    if index == 1 {
        return Ok(ConeType {
            index: 1,
            weights: [0, 0, 0],
        });
    }
    let s = smith_normal_form(&m);
    let d = s.diagonal();
    if d[..2].iter().any(|x| x.abs() != 1) {
        return Err(ToricError::NotCyclic);
    }
    let order = d[2].abs();
    // N / span(gens) is generated by the element with gens-coordinates V e_3 / d_3
    let w: Vec<Int> = (0..3).map(|i| s.v[(i, 2)].mod_floor(&order)).collect();
    let weights = [w[0] as u32, w[1] as u32, w[2] as u32];
    let order = order as u32;
    Ok(ConeType {
        index: order,
        weights: normalize_weights(order, weights),
    })
}

impl Fan {
    pub fn new(
        lattice: QLattice,
        rays: Vec<(&str, Vec<Rational>)>,
        cones: Vec<[usize; 3]>,
    ) -> Self {
        let rays = rays
            .into_iter()
            .map(|(name, vector)| Ray {
                name: name.to_string(),
                vector,
            })
            .collect();
        Fan {
            lattice,
            rays,
            cones,
        }
    }

    pub fn ray_index(&self, name: &str) -> Option<usize> {
        self.rays.iter().position(|r| r.name == name)
    }

    pub fn cone_gens(&self, c: usize) -> [&[Rational]; 3] {
        self.cones[c].map(|i| self.rays[i].vector.as_slice())
    }

    pub fn cone_name(&self, c: usize) -> String {
        let names: Vec<&str> = self.cones[c]
            .iter()
            .map(|&i| self.rays[i].name.as_str())
            .collect();
        format!("cone({})", names.join(","))
    }

    pub fn cone_types(&self) -> Result<Vec<ConeType>, ToricError> {
        (0..self.cones.len())
            .map(|c| cone_type(self.cone_gens(c), &self.lattice))
            .collect()
    }

    /// Added rays: those other than the standard basis vectors.
    pub fn added_rays(&self) -> Vec<usize> {
        (0..self.rays.len())
            .filter(|&i| !is_unit_vector(&self.rays[i].vector))
            .collect()
    }

    /// Pairs of rays spanning a 2-face of some maximal cone.
    pub fn adjacency(&self) -> Vec<Vec<bool>> {
        let n = self.rays.len();
        let mut adj = vec![vec![false; n]; n];
        for c in &self.cones {
            for a in 0..3 {
                for b in 0..3 {
                    if a != b {
                        adj[c[a]][c[b]] = true;
                    }
                }
            }
        }
        adj
    }

    /// Checks that the cones triangulate the positive octant with primitive rays.
    pub fn validate(&self) -> Result<(), ToricError> {
        let zero = Rational::zero();
        for r in &self.rays {
            if r.vector.len() != 3
                || r.vector.iter().any(|x| *x < zero)
                || r.vector.iter().all(|x| x.is_zero())
            {
                return Err(ToricError::InvalidFan(format!(
                    "ray {} is outside the octant",
                    r.name
                )));
            }
            if !self.lattice.is_primitive(&r.vector) {
                return Err(ToricError::NotInLattice(
                    r.vector.iter().map(|x| x.to_string()).collect(),
                ));
            }
        }
        // points on the slice x1 + x2 + x3 = 1
        let slice: Vec<Vec<Rational>> = self
            .rays
            .iter()
            .map(|r| {
                let s: Rational = r.vector.iter().sum();
                r.vector.iter().map(|x| x / s).collect()
            })
            .collect();
        let mut area = Rational::zero();
        for (c, cone) in self.cones.iter().enumerate() {
            let d = cols(&cone.map(|i| slice[i].as_slice())).det();
            if d.is_zero() {
                return Err(ToricError::InvalidFan(format!(
                    "{} is degenerate",
                    self.cone_name(c)
                )));
            }
            area += d.abs();
        }
        if area != Rational::one() {
            return Err(ToricError::InvalidFan(format!(
                "cone volumes on the slice add up to {area}, not 1"
            )));
        }
        // every interior wall separates exactly two cones, every boundary wall borders one
        let mut walls: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for cone in &self.cones {
            for (a, b, opp) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
                let (x, y) = (cone[a].min(cone[b]), cone[a].max(cone[b]));
                walls.entry((x, y)).or_default().push(cone[opp]);
            }
        }
        for ((x, y), opp) in &walls {
            let boundary = (0..3)
                .any(|k| self.rays[*x].vector[k].is_zero() && self.rays[*y].vector[k].is_zero());
            let ok = match (boundary, opp.as_slice()) {
                (true, [_]) => true,
                (false, [p, q]) => {
                    let side = |o: usize| cols(&[&slice[*x], &slice[*y], &slice[o]]).det();
                    side(*p).is_positive() != side(*q).is_positive()
                }
                _ => false,
            };
            if !ok {
                let names = (&self.rays[*x].name, &self.rays[*y].name);
                return Err(ToricError::InvalidFan(format!(
                    "wall ({},{}) is not shared correctly",
                    names.0, names.1
                )));
            }
        }
        Ok(())
    }
}

fn is_unit_vector(v: &[Rational]) -> bool {
    v.iter().filter(|x| x.is_zero()).count() == 2 && v.iter().any(|x| x.is_one())
}

/// Every added ray's primitive generator lies on `x1 + x2 + x3 = 1`.
pub fn is_crepant_subdivision(fan: &Fan) -> Result<bool, ToricError> {
    for i in fan.added_rays() {
        let p = fan.lattice.primitive(&fan.rays[i].vector)?;
        if p.iter().sum::<Rational>() != Rational::one() {
            return Ok(false);
        }
    }
    Ok(true)
}
