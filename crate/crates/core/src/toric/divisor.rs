//! Torus-invariant divisors on a fan: Cartier data, basepoint freeness,
//! sections of the pushforward and the connectivity test for H^1.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::ToricError;
use crate::exact::fm::{fm_feasible, IneqSystem, Relation};
use crate::exact::matrix::Matrix;
use crate::toric::fan::Fan;
use crate::{Int, Rational};

/// Coefficients `a_rho`, one per ray of the fan.
pub type Divisor = Vec<Int>;

/// The prime divisor of one ray.
pub fn prime_divisor(fan: &Fan, ray: usize) -> Divisor {
    (0..fan.rays.len())
        .map(|i| if i == ray { 1 } else { 0 })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CartierData {
    /// Least `l > 0` with `l D` Cartier.
    pub index: Int,
    /// `m_tau` for `l D`, one per maximal cone.
    pub m: Vec<Vec<Rational>>,
}

fn q(n: Int) -> Rational {
    Rational::from_integer(n)
}

/// `P_D = { x : <x,u_rho> >= -a_rho }`.
pub fn divisor_polyhedron(fan: &Fan, d: &[Int]) -> IneqSystem<Rational> {
    let mut sys = IneqSystem::new(3);
    for (r, a) in fan.rays.iter().zip(d) {
        sys.push(r.vector.clone(), Relation::Ge, q(-a));
    }
    sys
}

pub fn cartier_data(fan: &Fan, d: &[Int]) -> Result<CartierData, ToricError> {
    if d.len() != fan.rays.len() {
        return Err(ToricError::InvalidFan(
            "divisor needs one coefficient per ray".into(),
        ));
    }
    let mut m = Vec::new();
    for cone in &fan.cones {
        let a = Matrix::from_rows(cone.iter().map(|&i| fan.rays[i].vector.clone()).collect());
        let b: Vec<Rational> = cone.iter().map(|&i| q(-d[i])).collect();
        m.push(a.solve(&b).ok_or(ToricError::Degenerate)?);
    }
    let order = |x: &[Rational]| -> Int {
        // the dual lattice contains d * Z^3 for d = [N : Z^3]
        let bound = fan.lattice.index() * x.iter().fold(1, |acc: Int, c| acc.lcm(c.denom()));
        (1..=bound)
            .find(|&k| fan.lattice.dual_contains(&scale(x, k)))
            .unwrap_or(bound)
    };
    let index = m.iter().fold(1, |acc: Int, x| acc.lcm(&order(x)));
    Ok(CartierData {
        index,
        m: m.iter().map(|x| scale(x, index)).collect(),
    })
}

fn scale(x: &[Rational], k: Int) -> Vec<Rational> {
    x.iter().map(|c| c * q(k)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasepointReport {
    pub cartier: CartierData,
    /// Whether `l D` is basepoint free.
    pub basepoint_free: bool,
}

/// Basepoint freeness of the least Cartier multiple: every `m_tau` lies in its polyhedron.
pub fn is_basepoint_free(fan: &Fan, d: &[Int]) -> Result<BasepointReport, ToricError> {
    let cartier = cartier_data(fan, d)?;
    let ld: Divisor = d.iter().map(|a| a * cartier.index).collect();
    let p = divisor_polyhedron(fan, &ld);
    let basepoint_free = cartier.m.iter().all(|m| p.satisfied_by(m));
    Ok(BasepointReport {
        cartier,
        basepoint_free,
    })
}

fn check_in_lattice(fan: &Fan, i: usize) -> Result<(), ToricError> {
    let v = &fan.rays[i].vector;
    if fan.lattice.contains(v) {
        Ok(())
    } else {
        Err(ToricError::TighteningUnjustified(format!(
            "ray {} is not in the lattice, so <x,{}> need not be an integer on the dual",
            fan.rays[i].name, fan.rays[i].name
        )))
    }
}

/// `P_{D_i} ∩ N^dual = P_{D_i'} ∩ N^dual` for the divisor of the `i`-th basis ray (0-based).
///
/// `P_{D_i}` adds `<x,w> >= 0` for each added ray `w`; a dual lattice point
/// violating it has `<x,w> <= -1`, so each tightened system must be infeasible.
pub fn pushforward_sections_equal(fan: &Fan, i: usize) -> Result<bool, ToricError> {
    if i >= 3 {
        return Err(ToricError::InvalidFan(format!(
            "coordinate index {i} out of range"
        )));
    }
    let mut base = IneqSystem::new(3);
    for j in 0..3 {
        let e: Vec<Rational> = (0..3).map(|k| if k == j { q(1) } else { q(0) }).collect();
        base.push(e, Relation::Ge, if j == i { q(-1) } else { q(0) });
    }
    for w in fan.added_rays() {
        check_in_lattice(fan, w)?;
        let mut sys = base.clone();
        sys.push(fan.rays[w].vector.clone(), Relation::Le, q(-1));
        if fm_feasible(&sys) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pattern {
    /// Ray names in the support.
    pub support: Vec<String>,
    /// A dual lattice point realizing the pattern, if one was found.
    pub witness: Option<Vec<Int>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct H1Report {
    pub vanishes: bool,
    pub disconnected_patterns: usize,
    /// Disconnected patterns that survive the rational test.
    pub feasible: Vec<Pattern>,
}

/// Ray supports with more than 16 rays are not enumerated.
pub const MAX_RAYS: usize = 16;
const SEARCH_BOX: Int = 12;

fn connected(adj: &[Vec<bool>], set: &[usize]) -> bool {
    if set.len() <= 1 {
        return true;
    }
    let mut seen = vec![set[0]];
    let mut stack = vec![set[0]];
    while let Some(x) = stack.pop() {
        for &y in set {
            if adj[x][y] && !seen.contains(&y) {
                seen.push(y);
                stack.push(y);
            }
        }
    }
    seen.len() == set.len()
}

/// Sufficient test for `H^1(X, O(D)) = 0`: for every `m` in the dual lattice
/// the rays with `<m,u> < -a` must span a connected subcomplex.
pub fn h1_vanishes(fan: &Fan, d: &[Int]) -> Result<H1Report, ToricError> {
    let n = fan.rays.len();
    if n > MAX_RAYS {
        return Err(ToricError::InvalidFan(format!(
            "{n} rays exceed the pattern bound {MAX_RAYS}"
        )));
    }
    if d.len() != n {
        return Err(ToricError::InvalidFan(
            "divisor needs one coefficient per ray".into(),
        ));
    }
    let adj = fan.adjacency();
    let integral: Vec<bool> = fan
        .rays
        .iter()
        .map(|r| fan.lattice.contains(&r.vector))
        .collect();
    let mut report = H1Report {
        vanishes: true,
        disconnected_patterns: 0,
        feasible: Vec::new(),
    };
    for mask in 0u32..(1 << n) {
        let set: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        if connected(&adj, &set) {
            continue;
        }
        report.disconnected_patterns += 1;
        let mut sys = IneqSystem::new(3);
        for (i, r) in fan.rays.iter().enumerate() {
            let a = q(d[i]);
            if set.contains(&i) {
                // integer valued on the dual when the ray is in N
                if integral[i] {
                    sys.push(r.vector.clone(), Relation::Le, -a - q(1));
                } else {
                    sys.push(r.vector.clone(), Relation::Lt, -a);
                }
            } else {
                sys.push(r.vector.clone(), Relation::Ge, -a);
            }
        }
        if !fm_feasible(&sys) {
            continue;
        }
        report.vanishes = false;
        report.feasible.push(Pattern {
            support: set.iter().map(|&i| fan.rays[i].name.clone()).collect(),
            witness: search_dual_point(fan, &sys),
        });
    }
    Ok(report)
}

/// A dual lattice point of the system inside a small box, if any.
fn search_dual_point(fan: &Fan, sys: &IneqSystem<Rational>) -> Option<Vec<Int>> {
    let r = -SEARCH_BOX..=SEARCH_BOX;
    for x in r.clone() {
        for y in r.clone() {
            for z in r.clone() {
                let m = vec![q(x), q(y), q(z)];
                if fan.lattice.dual_contains(&m) && sys.satisfied_by(&m) {
                    return Some(vec![x, y, z]);
                }
            }
        }
    }
    None
}
