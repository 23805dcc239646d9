//! Elements of `GL(Lambda)` normalizing the image of the representation.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::action::{ActionContext, AnalyticRep};
use crate::classify::case::{CaseSpec, NormalizerSource};
use crate::classify::kernel::{F3Index, Kernel};
use crate::error::ClassifyError;
use crate::exact::Matrix;
use crate::torus::{is_holomorphic, PeriodLattice, Semilinear};
use crate::{Cyclo, CycloMat, IntMat};

/// A normalizing map as a 6x6 integer matrix on the base lattice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizerElement {
    pub matrix: IntMat,
    pub map: Option<Semilinear>,
    pub holomorphic: bool,
}

impl NormalizerElement {
    pub fn from_semilinear(base: &PeriodLattice, s: &Semilinear) -> Result<Self, ClassifyError> {
        let matrix = base.lattice_map(base, s)?;
        let holomorphic = is_holomorphic(&matrix, base, base)?;
        Ok(NormalizerElement {
            matrix,
            map: Some(s.clone()),
            holomorphic,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Holomorphic normalizer only: biholomorphism classes.
    Biholo,
    /// Holomorphic and antiholomorphic-in-some-coordinates maps: diffeomorphism classes.
    Diffeo,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Normalizer {
    pub source: String,
    pub holomorphic: Vec<NormalizerElement>,
    /// Extra generators used only in diffeomorphism mode.
    pub semilinear: Vec<NormalizerElement>,
    /// Orders of the generated groups when they were enumerated.
    pub holomorphic_order: Option<usize>,
    pub full_order: Option<usize>,
    /// Every element, when the group was enumerated.
    #[serde(skip)]
    pub elements: Option<Vec<NormalizerElement>>,
}

impl Normalizer {
    pub fn generators(&self, mode: Mode) -> Vec<&NormalizerElement> {
        match mode {
            Mode::Biholo => self.holomorphic.iter().collect(),
            Mode::Diffeo => self.holomorphic.iter().chain(&self.semilinear).collect(),
        }
    }

    /// Enumerated elements of the holomorphic part mapping `k` onto itself.
    pub fn preserving(&self, k: &Kernel) -> Option<Vec<&NormalizerElement>> {
        let index = F3Index::default();
        let all = self.elements.as_ref()?;
        Some(
            all.iter()
                .filter(|e| e.holomorphic && k.image(&index, &e.matrix).as_ref() == Some(k))
                .collect(),
        )
    }
}

/// Whether `rep` is diagonal with three pairwise distinct coordinate characters.
pub fn is_multiplicity_free(rep: &AnalyticRep) -> bool {
    let diagonal = rep
        .matrices
        .iter()
        .all(|m| (0..3).all(|i| (0..3).all(|j| i == j || m[(i, j)] == Cyclo::int(0))));
    if !diagonal {
        return false;
    }
    let chars: Vec<Vec<Cyclo>> = (0..3)
        .map(|i| rep.matrices.iter().map(|m| m[(i, i)].clone()).collect())
        .collect();
    chars[0] != chars[1] && chars[0] != chars[2] && chars[1] != chars[2]
}

/// Images `C rho(g) C^-1` of the generators as element indices, if `C` normalizes.
pub fn conjugation_image(ctx: &ActionContext, c: &IntMat) -> Option<Vec<usize>> {
    let inv = c.inverse_int()?;
    ctx.linear
        .gens_real
        .iter()
        .map(|g| ctx.linear.find(&c.mul_mat(g).mul_mat(&inv)))
        .collect()
}

const PERMS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

fn units() -> Vec<Cyclo> {
    (0..3)
        .flat_map(|k| [Cyclo::zeta(3, k), -Cyclo::zeta(3, k)])
        .collect()
}

/// All monomial maps with unit entries (optionally with conjugation flags)
/// normalizing the image of the representation on `Z[zeta_3]^3`.
pub fn monomial_elements(
    ctx: &ActionContext,
    with_conj: bool,
) -> Result<Vec<NormalizerElement>, ClassifyError> {
    let base = &ctx.lattice;
    let us = units();
    let flags: Vec<[bool; 3]> = if with_conj {
        (0..8)
            .map(|b| [b & 1 != 0, b & 2 != 0, b & 4 != 0])
            .collect()
    } else {
        vec![[false; 3]]
    };
    let mut out = Vec::new();
    for p in PERMS {
        for a in &us {
            for b in &us {
                for c in &us {
                    let entries = [a, b, c];
                    let mut m: CycloMat = Matrix::zeros(3, 3);
                    for i in 0..3 {
                        m[(i, p[i])] = entries[i].clone();
                    }
                    for conj in &flags {
                        let s = Semilinear {
                            matrix: m.clone(),
                            conj: *conj,
                        };
                        let e = NormalizerElement::from_semilinear(base, &s)?;
                        if conjugation_image(ctx, &e.matrix).is_some() {
                            out.push(e);
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Closure of a set of invertible integer matrices under multiplication.
pub fn close_integer_group(gens: &[IntMat], bound: usize) -> Option<Vec<IntMat>> {
    let n = gens.first().map(|g| g.rows()).unwrap_or(6);
    let id: IntMat = Matrix::identity(n);
    let mut seen: HashSet<IntMat> = HashSet::from([id.clone()]);
    let mut out = vec![id];
    let mut head = 0;
    while head < out.len() {
        for g in gens {
            let m = out[head].mul_mat(g);
            if seen.insert(m.clone()) {
                if out.len() >= bound {
                    return None;
                }
                out.push(m);
            }
        }
        head += 1;
    }
    Some(out)
}

/// Whether a finite set of matrices is closed under products and inverses.
pub fn is_closed(elems: &[IntMat]) -> bool {
    let set: HashSet<&IntMat> = elems.iter().collect();
    let Some(first) = elems.first() else {
        return false;
    };
    let id = Matrix::identity(first.rows());
    if !set.contains(&id) {
        return false;
    }
    // Grow a subgroup of the set one generator at a time; every product
    // reached must stay in the set, and at the end the subgroup is the set.
    let mut gens: Vec<&IntMat> = Vec::new();
    let mut group: HashSet<IntMat> = HashSet::from([id.clone()]);
    for s in elems {
        if group.contains(s) {
            continue;
        }
        gens.push(s);
        group = HashSet::from([id.clone()]);
        let mut queue = vec![id.clone()];
        while let Some(x) = queue.pop() {
            for g in &gens {
                let y = x.mul_mat(g);
                if !set.contains(&y) {
                    return false;
                }
                if group.insert(y.clone()) {
                    queue.push(y);
                }
            }
        }
    }
    group.len() == set.len()
}

/// Greedy generating set: keep an element when it is outside the group generated so far.
pub fn generating_subset(
    elems: &[NormalizerElement],
    start: &[NormalizerElement],
) -> Vec<NormalizerElement> {
    let mut gens: Vec<NormalizerElement> = start.to_vec();
    let mats = |g: &[NormalizerElement]| g.iter().map(|e| e.matrix.clone()).collect::<Vec<_>>();
    let mut closure: HashSet<IntMat> = close_integer_group(&mats(&gens), usize::MAX)
        .unwrap_or_default()
        .into_iter()
        .collect();
    for e in elems {
        if !closure.contains(&e.matrix) {
            gens.push(e.clone());
            closure = close_integer_group(&mats(&gens), usize::MAX)
                .unwrap_or_default()
                .into_iter()
                .collect();
        }
    }
    gens.drain(..start.len());
    gens
}

pub fn normalizer(case: &CaseSpec, ctx: &ActionContext) -> Result<Normalizer, ClassifyError> {
    let multiplicity_free = is_multiplicity_free(&case.rep);
    match &case.normalizer {
        NormalizerSource::None => Ok(Normalizer {
            source: "none".into(),
            holomorphic: Vec::new(),
            semilinear: Vec::new(),
            holomorphic_order: Some(1),
            full_order: Some(1),
            elements: None,
        }),
        NormalizerSource::Monomial => {
            if !multiplicity_free {
                return Err(ClassifyError::Data(format!(
                    "{}: monomial enumeration needs three distinct coordinate characters",
                    case.name
                )));
            }
            let all = monomial_elements(ctx, true)?;
            let holo: Vec<NormalizerElement> =
                all.iter().filter(|e| e.holomorphic).cloned().collect();
            let holomorphic = generating_subset(&holo, &[]);
            let semilinear = generating_subset(&all, &holomorphic);
            Ok(Normalizer {
                source: "monomial".into(),
                holomorphic_order: Some(holo.len()),
                full_order: Some(all.len()),
                holomorphic,
                semilinear,
                elements: Some(all),
            })
        }
        NormalizerSource::Generators {
            holomorphic,
            semilinear,
        } => {
            if multiplicity_free {
                return Err(ClassifyError::Data(format!(
                    "{}: normalizer of a multiplicity-free representation is monomial; use enumeration",
                    case.name
                )));
            }
            let build = |list: &[Semilinear]| -> Result<Vec<NormalizerElement>, ClassifyError> {
                list.iter()
                    .map(|s| {
                        let e = NormalizerElement::from_semilinear(&ctx.lattice, s)?;
                        if conjugation_image(ctx, &e.matrix).is_none() {
                            return Err(ClassifyError::Data(format!(
                                "{}: catalog map does not normalize",
                                case.name
                            )));
                        }
                        Ok(e)
                    })
                    .collect()
            };
            let holomorphic = build(holomorphic)?;
            if let Some(bad) = holomorphic.iter().find(|e| !e.holomorphic) {
                return Err(ClassifyError::Data(format!(
                    "{}: {:?} is not holomorphic",
                    case.name, bad.map
                )));
            }
            let semilinear = build(semilinear)?;
            // orders are reported only when the generated groups are small
            let order = |g: &[NormalizerElement]| {
                close_integer_group(
                    &g.iter().map(|e| e.matrix.clone()).collect::<Vec<_>>(),
                    20_000,
                )
                .map(|v| v.len())
            };
            let all: Vec<NormalizerElement> =
                holomorphic.iter().chain(&semilinear).cloned().collect();
            Ok(Normalizer {
                source: "generators".into(),
                holomorphic_order: order(&holomorphic),
                full_order: order(&all),
                holomorphic,
                semilinear,
                elements: None,
            })
        }
    }
}

/// Lookup from matrices to positions, used for orbit bookkeeping.
pub fn index_of(elems: &[IntMat]) -> HashMap<&IntMat, usize> {
    elems.iter().enumerate().map(|(i, m)| (m, i)).collect()
}
