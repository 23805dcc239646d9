//! Checking that an affine map of tori conjugates one action into another.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::action::{format_word, ActionContext, AffineAction};
use crate::error::ClassifyError;
use crate::exact::congruence::{is_integral_vec, Congruence, CongruenceSolver};
use crate::exact::matrix::{vec_sub, Matrix};
use crate::torus::fixed::minus_identity;
use crate::torus::{is_holomorphic, PeriodLattice, RealTorusMap, Semilinear};
use crate::{IntMat, Rational};

/// `z -> C z + d` from the source torus to the target torus, in lattice coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceWitness {
    pub map: RealTorusMap,
    /// When false the shift is solved for instead of checked.
    pub shift_given: bool,
}

impl EquivalenceWitness {
    pub fn new(matrix: IntMat, shift: Option<Vec<Rational>>) -> Self {
        let shift_given = shift.is_some();
        let translation = shift.unwrap_or_else(|| vec![Rational::zero(); matrix.rows()]);
        EquivalenceWitness {
            map: RealTorusMap {
                matrix,
                translation,
                provenance: None,
            },
            shift_given,
        }
    }

    /// Lowers a semilinear map of `C^3`; fails unless it carries `src` onto `tgt`.
    pub fn from_semilinear(
        src: &PeriodLattice,
        tgt: &PeriodLattice,
        s: &Semilinear,
        shift: Option<Vec<Rational>>,
    ) -> Result<Self, ClassifyError> {
        let m = src.lattice_map(tgt, s)?;
        let mut w = Self::new(m, shift);
        w.map.provenance = Some(s.clone());
        Ok(w)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub valid: bool,
    pub unimodular: bool,
    pub lattice_transport: bool,
    pub condition_a: bool,
    pub condition_b: bool,
    pub holomorphic: bool,
    /// `phi_C` on the source generators, as words in the target generators.
    pub phi: Vec<String>,
    pub shift: Option<Vec<Rational>>,
    pub diagnostic: Option<String>,
}

impl WitnessReport {
    fn fail(mut self, why: String) -> Self {
        self.valid = false;
        self.diagnostic = Some(why);
        self
    }
}

pub fn verify_witness(
    src: &AffineAction,
    tgt: &AffineAction,
    w: &EquivalenceWitness,
) -> Result<WitnessReport, ClassifyError> {
    let sc = src.context()?;
    let tc = tgt.context()?;
    let sg = src.cocycle.coords(&src.lattice)?;
    let tg = tgt.cocycle.coords(&tgt.lattice)?;
    let mut report = verify_in(&sc, &sg, &tc, &tg, w);
    if report.valid || report.diagnostic.is_none() {
        if let Some(s) = &w.map.provenance {
            let same = src.lattice.map_matrix(&tgt.lattice, s).ok()
                == Some(w.map.matrix.to_rational::<Rational>());
            if !same {
                report.lattice_transport = false;
                report = report.fail("matrix does not match the semilinear map".into());
            }
        }
    }
    Ok(report)
}

/// [`verify_witness`] against precomputed contexts and generator translations.
pub fn verify_in(
    sc: &ActionContext,
    sg: &[Vec<Rational>],
    tc: &ActionContext,
    tg: &[Vec<Rational>],
    w: &EquivalenceWitness,
) -> WitnessReport {
    let c = &w.map.matrix;
    let mut report = WitnessReport {
        valid: false,
        unimodular: false,
        lattice_transport: false,
        condition_a: false,
        condition_b: false,
        holomorphic: false,
        phi: Vec::new(),
        shift: None,
        diagnostic: None,
    };
    if c.rows() != 6 || c.cols() != 6 || !c.is_unimodular() {
        return report.fail("matrix is not unimodular".into());
    }
    report.unimodular = true;
    // an integral unimodular matrix in lattice coordinates is exactly a map with C Lambda = Lambda'
    report.lattice_transport = true;
    report.holomorphic = is_holomorphic(c, &sc.lattice, &tc.lattice).unwrap_or(false);
    let inv = c.inverse_int().expect("unimodular");
    let mut phi = Vec::new();
    for (i, g) in sc.linear.gens_real.iter().enumerate() {
        match tc.linear.find(&c.mul_mat(g).mul_mat(&inv)) {
            Some(e) => phi.push(e),
            None => {
                return report.fail(format!(
                    "C rho({}) C^-1 is not in the target image",
                    sc.group.generators[i]
                ));
            }
        }
    }
    report.condition_a = true;
    report.phi = phi
        .iter()
        .map(|&e| format_word(&tc.linear.elements[e].word, &tc.group.generators))
        .collect();
    let ttable = tc.translation_table(tg);
    let cr = c.to_rational::<Rational>();
    let rhs: Vec<Vec<Rational>> = sg
        .iter()
        .zip(&phi)
        .map(|(t, &e)| vec_sub(&cr.mul_vec(t), &ttable[e]))
        .collect();
    let blocks: Vec<IntMat> = phi
        .iter()
        .map(|&e| minus_identity(&tc.linear.elements[e].real))
        .collect();
    let d = if w.shift_given {
        Some(w.map.translation.clone())
    } else {
        let a = Matrix::vstack(&blocks);
        let b: Vec<Rational> = rhs.iter().flatten().cloned().collect();
        match CongruenceSolver::<Rational>::new(&a).solve(&b) {
            Ok(Congruence::Solutions(s)) => Some(s.particular),
            _ => None,
        }
    };
    let Some(d) = d else {
        return report.fail("no shift satisfies condition (b)".into());
    };
    for (i, (m, r)) in blocks.iter().zip(&rhs).enumerate() {
        let lhs = m.to_rational::<Rational>().mul_vec(&d);
        if !is_integral_vec(&vec_sub(&lhs, r)) {
            report.shift = Some(d);
            return report.fail(format!(
                "condition (b) fails on generator {}",
                sc.group.generators[i]
            ));
        }
    }
    report.condition_b = true;
    report.shift = Some(d);
    report.valid = true;
    report
}
