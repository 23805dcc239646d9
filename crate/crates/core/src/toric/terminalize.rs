//! Stored crepant terminalizations and resolutions of the non-terminal
//! singularities, with their certificates.

use serde::{Deserialize, Serialize};

use crate::error::ToricError;
use crate::singular::CqsType;
use crate::toric::divisor::{
    h1_vanishes, is_basepoint_free, prime_divisor, pushforward_sections_equal,
};
use crate::toric::fan::{cone_type, is_crepant_subdivision, ConeType, Fan};
use crate::toric::lattice::QLattice;
use crate::Rational;

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn v(d: i64, w: [i64; 3]) -> Vec<Rational> {
    w.iter().map(|x| r(*x, d)).collect()
}

fn basis_rays() -> Vec<(&'static str, Vec<Rational>)> {
    vec![
        ("e1", v(1, [1, 0, 0])),
        ("e2", v(1, [0, 1, 0])),
        ("e3", v(1, [0, 0, 1])),
    ]
}

/// Star subdivision of the octant at one interior ray.
fn star(q: Vec<Rational>, center: Vec<Rational>) -> Result<Fan, ToricError> {
    let mut rays = basis_rays();
    rays.push(("v", center));
    Ok(Fan::new(
        QLattice::new(&q)?,
        rays,
        vec![[0, 1, 3], [1, 2, 3], [2, 0, 3]],
    ))
}

/// The octant cut along `v1 = (1,2,4)/7` and its two cyclic shifts:
/// a central cone and two cones at each basis ray.
fn seven_cones(q: Vec<Rational>) -> Result<Fan, ToricError> {
    let mut rays = basis_rays();
    rays.push(("v1", v(7, [1, 2, 4])));
    rays.push(("v2", v(7, [4, 1, 2])));
    rays.push(("v3", v(7, [2, 4, 1])));
    let (e1, e2, e3, v1, v2, v3) = (0, 1, 2, 3, 4, 5);
    let cones = vec![
        [v1, v2, v3],
        [e1, e2, v3],
        [e1, v3, v2],
        [e1, v2, e3],
        [e2, e3, v1],
        [e2, v1, v3],
        [e3, v2, v1],
    ];
    Ok(Fan::new(QLattice::new(&q)?, rays, cones))
}

/// The stored fan for a singularity type, if there is one.
pub fn catalog_fan(t: CqsType) -> Result<Fan, ToricError> {
    match (t.order, t.weights) {
        (9, [1, 4, 7]) => star(v(9, [1, 4, 7]), v(3, [1, 1, 1])),
        (14, [1, 9, 11]) => seven_cones(v(14, [1, 9, 11])),
        (3, [1, 1, 1]) => star(v(3, [1, 1, 1]), v(3, [1, 1, 1])),
        (7, [1, 2, 4]) => seven_cones(v(7, [1, 2, 4])),
        _ => Err(ToricError::UnknownTarget(t.label())),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorCertificate {
    pub divisor: String,
    pub h1_vanishes: bool,
    pub cartier_index: i64,
    pub basepoint_free: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Terminalization {
    pub target: String,
    pub fan: Fan,
    pub original: ConeType,
    pub cone_types: Vec<ConeType>,
    pub crepant: bool,
    pub terminal: bool,
    pub smooth: bool,
    /// Sum of cone indices; equals the index of the original cone.
    pub index_sum: u32,
    /// `P_{D_i} ∩ N^dual = P_{D_i'} ∩ N^dual` for `i = 1, 2, 3`.
    pub pushforward: Vec<bool>,
    pub divisors: Vec<DivisorCertificate>,
    /// What the checks above give for the higher direct image.
    pub conclusion: String,
}

impl Terminalization {
    pub fn passed(&self) -> bool {
        self.crepant
            && self.terminal
            && self.index_sum == self.original.index
            && self.pushforward.iter().all(|x| *x)
            && self.divisors.iter().all(|d| d.h1_vanishes)
    }
}

pub fn terminalize(order: u32, weights: [u32; 3]) -> Result<Terminalization, ToricError> {
    let t = CqsType::new(order, weights)
        .map_err(|_| ToricError::UnknownTarget(format!("1/{order}{weights:?}")))?;
    let fan = catalog_fan(t)?;
    fan.validate()?;
    let e = basis_rays();
    let original = cone_type([&e[0].1, &e[1].1, &e[2].1], &fan.lattice)?;
    let cone_types = fan.cone_types()?;
    let mut divisors = Vec::new();
    for i in 0..fan.rays.len() {
        let d = prime_divisor(&fan, i);
        let bpf = is_basepoint_free(&fan, &d)?;
        divisors.push(DivisorCertificate {
            divisor: if i < 3 {
                format!("D{}", i + 1)
            } else {
                format!("E_{}", fan.rays[i].name)
            },
            h1_vanishes: h1_vanishes(&fan, &d)?.vanishes,
            cartier_index: bpf.cartier.index,
            basepoint_free: bpf.basepoint_free,
        });
    }
    let conclusion = if divisors.iter().all(|d| d.h1_vanishes) {
        "R^1 psi_* vanishes per the Euler-sequence reduction"
    } else {
        "vanishing not certified"
    };
    Ok(Terminalization {
        conclusion: conclusion.to_string(),
        target: t.label(),
        original,
        crepant: is_crepant_subdivision(&fan)?,
        terminal: cone_types.iter().all(ConeType::is_terminal),
        smooth: cone_types.iter().all(ConeType::is_smooth),
        index_sum: cone_types.iter().map(|c| c.index).sum(),
        pushforward: (0..3)
            .map(|i| pushforward_sections_equal(&fan, i))
            .collect::<Result<_, _>>()?,
        cone_types,
        divisors,
        fan,
    })
}
