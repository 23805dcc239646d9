//! Points with nontrivial stabilizer, their types and counting checks.

use std::collections::{BTreeMap, HashSet};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::action::{ActionContext, ElementStatus};
use crate::error::SingularError;
use crate::exact::congruence::reduce_mod1;
use crate::exact::cyclotomic::euler_phi;
use crate::exact::matrix::vec_add;
use crate::exact::Matrix;
use crate::singular::cqs::{CqsType, RrVector};
use crate::torus::FixedLocus;
use crate::{Cyclo, CycloMat, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularPoint {
    /// Orbit representative in lattice coordinates, reduced to `[0,1)`.
    pub point: Vec<Rational>,
    pub orbit_size: usize,
    pub stabilizer: Vec<usize>,
    /// Index of an element generating the stabilizer.
    pub generator: usize,
    pub kind: CqsType,
}

/// Multiset of singularity types.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Basket {
    pub entries: BTreeMap<CqsType, usize>,
}

impl Basket {
    pub fn from_points(points: &[SingularPoint]) -> Self {
        let mut entries = BTreeMap::new();
        for p in points {
            *entries.entry(p.kind).or_insert(0) += 1;
        }
        Basket { entries }
    }

    /// Sorted `d/(a,b,c)×count` strings.
    pub fn to_strings(&self) -> Vec<String> {
        self.entries
            .iter()
            .map(|(k, n)| format!("{}×{n}", k.basket_key()))
            .collect()
    }

    pub fn count(&self, order: u32, weights: [u32; 3]) -> usize {
        self.entries
            .get(&CqsType { order, weights })
            .copied()
            .unwrap_or(0)
    }

    /// Riemann–Roch counters after terminalizing 1/9(1,4,7) and 1/14(1,9,11).
    pub fn rr_counters(&self) -> RrVector {
        [
            self.count(2, [1, 1, 1]) as u32,
            self.count(3, [1, 1, 2]) as u32,
            self.count(4, [1, 1, 3]) as u32,
            self.count(6, [1, 1, 5]) as u32,
            self.count(9, [1, 4, 7]) as u32,
            self.count(14, [1, 9, 11]) as u32,
        ]
    }

    pub fn total(&self) -> usize {
        self.entries.values().sum()
    }
}

fn apply(ctx: &ActionContext, table: &[Vec<Rational>], e: usize, p: &[Rational]) -> Vec<Rational> {
    let m = ctx.linear.elements[e].real.to_rational::<Rational>();
    reduce_mod1(&vec_add(&m.mul_vec(p), &table[e]))
}

/// Exponents `w` (mod `d`) with `zeta_d^w` an eigenvalue, with multiplicity.
pub fn eigen_exponents(m: &CycloMat, d: u32) -> Vec<u32> {
    let mut out = Vec::new();
    for j in 0..d {
        let z = Cyclo::zeta(d, j as i64);
        let shifted = m.sub_mat(&Matrix::identity(m.rows()).scale(&z));
        let mult = m.rows() - shifted.rank();
        out.extend(std::iter::repeat_n(j, mult));
    }
    out
}

pub fn singular_locus(
    ctx: &ActionContext,
    table: &[Vec<Rational>],
) -> Result<Vec<SingularPoint>, SingularError> {
    let n = ctx.order();
    let mut all: Vec<Vec<Rational>> = Vec::new();
    let mut seen: HashSet<Vec<Rational>> = HashSet::new();
    for (e, st) in ctx.element_status(table).into_iter().enumerate() {
        match st {
            ElementStatus::Bad => {
                return Err(SingularError::NotGood(format!(
                    "element {} fixes a positive-dimensional set",
                    crate::action::format_word(&ctx.linear.elements[e].word, &ctx.group.generators)
                )))
            }
            ElementStatus::Isolated(_) => {
                if let FixedLocus::Finite(pts) = ctx.fixed_points(e, table) {
                    for p in pts {
                        if seen.insert(p.clone()) {
                            all.push(p);
                        }
                    }
                }
            }
            _ => {}
        }
    }
    let mut done: HashSet<Vec<Rational>> = HashSet::new();
    let mut out = Vec::new();
    for p in all {
        if done.contains(&p) {
            continue;
        }
        let images: Vec<Vec<Rational>> = (0..n).map(|e| apply(ctx, table, e, &p)).collect();
        let stabilizer: Vec<usize> = (0..n).filter(|&e| images[e] == p).collect();
        let orbit: HashSet<Vec<Rational>> = images.into_iter().collect();
        let s = stabilizer.len();
        let generator = *stabilizer
            .iter()
            .find(|&&e| ctx.linear.elements[e].order == s)
            .ok_or(SingularError::NonCyclicStabilizer(s))?;
        let m = &ctx.linear.elements[generator].complex;
        let w = eigen_exponents(m, s as u32);
        if w.len() != 3 {
            return Err(SingularError::Hypothesis(format!(
                "eigenvalues of an order {s} element are not {s}-th roots"
            )));
        }
        let kind = CqsType::new(s as u32, [w[0], w[1], w[2]])?;
        debug_assert_eq!(orbit.len() * s, n);
        out.push(SingularPoint {
            orbit_size: orbit.len(),
            point: p.clone(),
            stabilizer,
            generator,
            kind,
        });
        done.extend(orbit);
    }
    out.sort_by(|a, b| a.kind.cmp(&b.kind).then(a.point.cmp(&b.point)));
    Ok(out)
}

/// Number of points of the torus with nontrivial stabilizer.
pub fn count_special_points(ctx: &ActionContext, table: &[Vec<Rational>]) -> usize {
    let mut seen: HashSet<Vec<Rational>> = HashSet::new();
    for e in 1..ctx.order() {
        if let FixedLocus::Finite(pts) = ctx.fixed_points(e, table) {
            if !ctx.has_eigenvalue_one(e) {
                seen.extend(pts);
            }
        }
    }
    seen.len()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LefschetzReport {
    pub element: usize,
    pub order: u32,
    pub count_snf: u64,
    pub count_formula: u64,
    pub agree: bool,
}

fn prime_power(d: u32) -> Option<u32> {
    (2..=d).find(|p| d.is_multiple_of(*p)).filter(|&p| {
        let mut x = d;
        while x.is_multiple_of(p) {
            x /= p;
        }
        x == 1
    })
}

/// Fixed point count from Smith form against the closed formula.
pub fn lefschetz_check(
    ctx: &ActionContext,
    table: &[Vec<Rational>],
    e: usize,
) -> Result<LefschetzReport, SingularError> {
    if e == 0 || ctx.has_eigenvalue_one(e) {
        return Err(SingularError::HasEigenvalueOne);
    }
    let d = ctx.linear.elements[e].order as u32;
    let count_snf = ctx.fixed_points(e, table).count().expect("finite") as u64;
    let count_formula = match prime_power(d) {
        None => 1,
        Some(p) => {
            let w = eigen_exponents(&ctx.linear.elements[e].complex, d);
            if w.iter().any(|x| x.gcd(&d) != 1) {
                return Err(SingularError::Hypothesis(format!(
                    "order {d} element with non-primitive eigenvalues"
                )));
            }
            (p as u64).pow(6 / euler_phi(d))
        }
    };
    Ok(LefschetzReport {
        element: e,
        order: d,
        count_snf,
        count_formula,
        agree: count_snf == count_formula,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BurnsideReport {
    pub m: u32,
    pub orbits: usize,
    pub lhs: u64,
    pub fixed_points_per_element: u64,
    pub elements: u64,
    pub rhs: Rational,
    pub holds: bool,
}

/// Orders of elements acting with fixed points that are maximal under divisibility.
pub fn maximal_fixed_orders(ctx: &ActionContext) -> Vec<u32> {
    let orders: Vec<u32> = (1..ctx.order())
        .filter(|&e| !ctx.has_eigenvalue_one(e))
        .map(|e| ctx.linear.elements[e].order as u32)
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    orders
        .iter()
        .copied()
        .filter(|m| !orders.iter().any(|o| o != m && o % m == 0))
        .collect()
}

/// Counts points with stabilizer `Z_m` in two ways.
pub fn burnside_check(
    ctx: &ActionContext,
    table: &[Vec<Rational>],
    points: &[SingularPoint],
    m: u32,
) -> Result<BurnsideReport, SingularError> {
    let fixers: Vec<usize> = (1..ctx.order())
        .filter(|&e| !ctx.has_eigenvalue_one(e))
        .collect();
    if let Some(&e) = fixers.iter().find(|&&e| {
        let o = ctx.linear.elements[e].order as u32;
        o != m && o.is_multiple_of(m)
    }) {
        return Err(SingularError::Hypothesis(format!(
            "element of order {} has fixed points and is a proper multiple of {m}",
            ctx.linear.elements[e].order
        )));
    }
    let of_order: Vec<usize> = fixers
        .into_iter()
        .filter(|&e| ctx.linear.elements[e].order as u32 == m)
        .collect();
    let counts: Vec<u64> = of_order
        .iter()
        .map(|&e| ctx.fixed_points(e, table).count().expect("finite") as u64)
        .collect();
    let ell = counts.first().copied().unwrap_or(0);
    if counts.iter().any(|c| *c != ell) {
        return Err(SingularError::Hypothesis(format!(
            "elements of order {m} have different fixed point counts"
        )));
    }
    let orbits = points.iter().filter(|p| p.kind.order == m).count();
    let lhs = (orbits * ctx.order()) as u64 / m as u64;
    let rhs = Rational::new((ell * of_order.len() as u64) as i64, euler_phi(m) as i64);
    Ok(BurnsideReport {
        m,
        orbits,
        lhs,
        fixed_points_per_element: ell,
        elements: of_order.len() as u64,
        holds: rhs == Rational::from_integer(lhs as i64),
        rhs,
    })
}
