//! Character averages of a 3-dimensional representation.

use std::collections::HashSet;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::ActionError;
use crate::exact::Matrix;
use crate::{Cyclo, CycloMat, Rational};

/// Closure of a finite set of invertible complex matrices.
pub fn close_matrices(gens: &[CycloMat], bound: usize) -> Result<Vec<CycloMat>, ActionError> {
    let n = gens.first().map(|g| g.rows()).unwrap_or(3);
    let id: CycloMat = Matrix::identity(n);
    let mut seen: HashSet<CycloMat> = HashSet::from([id.clone()]);
    let mut out = vec![id];
    let mut head = 0;
    while head < out.len() {
        for g in gens {
            let m = out[head].mul_mat(g);
            if seen.insert(m.clone()) {
                if out.len() >= bound {
                    return Err(ActionError::BoundExceeded(bound));
                }
                out.push(m);
            }
        }
        head += 1;
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterInvariants {
    pub order: usize,
    pub q1: Rational,
    pub q2: Rational,
    pub pg: Rational,
    /// `(1/|G|) sum chi(g)^2`; zero exactly for rigid actions.
    pub rigidity_pairing: Rational,
    pub rigid: bool,
}

fn average(xs: impl Iterator<Item = Cyclo>, order: usize) -> Result<Rational, ActionError> {
    let s = xs.fold(Cyclo::zero(), |a, b| &a + &b);
    let r = s
        .to_rational()
        .ok_or_else(|| ActionError::Invalid(format!("character average {s} is not rational")))?;
    Ok(r / Rational::from_integer(order as i64))
}

/// `q_i = <wedge^i conj(chi), 1>` and `p_g = <det conj(chi), 1>`, plus the rigidity test.
pub fn character_invariants(gens: &[CycloMat]) -> Result<CharacterInvariants, ActionError> {
    let elems = close_matrices(gens, crate::action::DEFAULT_BOUND)?;
    let order = elems.len();
    let tr: Vec<Cyclo> = elems.iter().map(|m| m.trace()).collect();
    let tr2: Vec<Cyclo> = elems.iter().map(|m| m.mul_mat(m).trace()).collect();
    let det: Vec<Cyclo> = elems.iter().map(|m| m.det()).collect();
    let half = Rational::new(1, 2);
    let q1 = average(tr.iter().map(|c| c.conj()), order)?;
    let q2 = average(
        tr.iter()
            .zip(&tr2)
            .map(|(a, b)| (&(a * a) - b).scale(&half).conj()),
        order,
    )?;
    let pg = average(det.iter().map(|c| c.conj()), order)?;
    let pairing = average(tr.iter().map(|c| c * c), order)?;
    debug_assert!(det.iter().all(|d| !d.is_zero()));
    Ok(CharacterInvariants {
        order,
        q1,
        q2,
        pg,
        rigid: pairing.is_zero(),
        rigidity_pairing: pairing,
    })
}
