//! The standard-conditions predicate for a named group.
//!
//! Abelian groups get their 3-dimensional representations enumerated as
//! triples of characters. Nonabelian groups must come with an explicit list
//! of candidate representations.

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::action::character::{character_invariants, close_matrices};
use crate::action::group::{AnalyticRep, GroupPresentation};
use crate::action::word::Word;
use crate::error::ActionError;
use crate::exact::Matrix;
use crate::{Cyclo, CycloMat};

pub const ALLOWED_ORDERS: [u32; 12] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 14];
const MUST_HAVE_ONE: [u32; 4] = [5, 8, 10, 12];
const MUST_NOT_HAVE_ONE: [u32; 3] = [7, 9, 14];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StandardReport {
    pub group: String,
    pub orders_ok: bool,
    pub candidates: usize,
    /// A representation meeting every condition, if one exists.
    pub witness: Option<String>,
}

impl StandardReport {
    pub fn holds(&self) -> bool {
        self.orders_ok && self.witness.is_some()
    }
}

pub fn standard_conditions(
    group: &GroupPresentation,
    reps: Option<&[AnalyticRep]>,
) -> Result<StandardReport, ActionError> {
    match &group.abelian_invariants {
        Some(inv) => Ok(abelian(group, inv)),
        None => {
            let reps = reps
                .filter(|r| !r.is_empty())
                .ok_or_else(|| ActionError::RepDataRequired(group.name.clone()))?;
            nonabelian(group, reps)
        }
    }
}

/// Characters of `Z_{n_1} x ... x Z_{n_r}` written as exponents of `zeta_N`, `N` the exponent.
struct AbelianGroup {
    inv: Vec<u32>,
    exp: u32,
}

impl AbelianGroup {
    fn elements(&self) -> Vec<Vec<u32>> {
        let mut out = vec![vec![]];
        for &n in &self.inv {
            out = out
                .into_iter()
                .flat_map(|v| (0..n).map(move |a| [v.clone(), vec![a]].concat()))
                .collect();
        }
        out
    }

    fn order(&self, a: &[u32]) -> u32 {
        a.iter()
            .zip(&self.inv)
            .fold(1, |acc, (x, n)| acc.lcm(&(n / x.gcd(n))))
    }

    /// `chi_c(a)` as an exponent of `zeta_N`.
    fn eval(&self, c: &[u32], a: &[u32]) -> u32 {
        let mut s = 0u64;
        for ((ci, ai), ni) in c.iter().zip(a).zip(&self.inv) {
            s += (*ci as u64) * (*ai as u64) * (self.exp / ni) as u64;
        }
        (s % self.exp as u64) as u32
    }

    fn product_trivial(&self, c: &[u32], d: &[u32]) -> bool {
        c.iter()
            .zip(d)
            .zip(&self.inv)
            .all(|((x, y), n)| (x + y) % n == 0)
    }
}

fn abelian(group: &GroupPresentation, inv: &[u32]) -> StandardReport {
    let exp = inv.iter().fold(1u32, |a, b| a.lcm(b));
    let g = AbelianGroup {
        inv: inv.to_vec(),
        exp,
    };
    let elems = g.elements();
    let orders: Vec<u32> = elems.iter().map(|a| g.order(a)).collect();
    let orders_ok = orders.iter().all(|o| ALLOWED_ORDERS.contains(o));
    let chars = elems.clone();
    let units: Vec<u32> = (1..exp).filter(|u| u.gcd(&exp) == 1).collect();
    let mut candidates = 0;
    let mut witness = None;
    'outer: for i in 0..chars.len() {
        for j in i..chars.len() {
            for k in j..chars.len() {
                candidates += 1;
                let triple = [&chars[i], &chars[j], &chars[k]];
                if !rigid_triple(&g, &triple) {
                    continue;
                }
                let ok = elems.iter().zip(&orders).skip(1).all(|(a, o)| {
                    let e: Vec<u32> = triple.iter().map(|c| g.eval(c, a)).collect();
                    element_ok(&e, *o, exp, &units)
                });
                if ok {
                    let desc: Vec<String> = triple.iter().map(|c| format!("{c:?}")).collect();
                    witness = Some(format!("characters {}", desc.join(", ")));
                    break 'outer;
                }
            }
        }
    }
    StandardReport {
        group: group.name.clone(),
        orders_ok,
        candidates,
        witness,
    }
}

fn rigid_triple(g: &AbelianGroup, t: &[&Vec<u32>; 3]) -> bool {
    (0..3).all(|i| (i..3).all(|j| !g.product_trivial(t[i], t[j])))
}

/// Faithfulness at `a`, integrality of the characteristic polynomial of
/// `rho(a) + conj rho(a)`, and the eigenvalue-1 constraints.
fn element_ok(e: &[u32], ord: u32, exp: u32, units: &[u32]) -> bool {
    if e.iter().all(|x| *x == 0) {
        return false;
    }
    let mut spectrum: Vec<u32> = e.iter().flat_map(|x| [*x, (exp - x) % exp]).collect();
    spectrum.sort();
    for u in units {
        let mut s: Vec<u32> = spectrum.iter().map(|x| (x * u) % exp).collect();
        s.sort();
        if s != spectrum {
            return false;
        }
    }
    let has_one = e.contains(&0);
    !(MUST_HAVE_ONE.contains(&ord) && !has_one) && !(MUST_NOT_HAVE_ONE.contains(&ord) && has_one)
}

fn eval_word(gens: &[CycloMat], w: &Word) -> Option<CycloMat> {
    let mut m: CycloMat = Matrix::identity(3);
    for (g, e) in w {
        let base = if *e < 0 {
            gens[*g].inverse()?
        } else {
            gens[*g].clone()
        };
        for _ in 0..e.unsigned_abs() {
            m = m.mul_mat(&base);
        }
    }
    Some(m)
}

fn matrix_order(m: &CycloMat, bound: usize) -> Option<u32> {
    let mut p = m.clone();
    for k in 1..=bound {
        if p.is_identity() {
            return Some(k as u32);
        }
        p = p.mul_mat(m);
    }
    None
}

/// Coefficients `[c0, c1, c2, 1]` of `det(x - M)` for a 3x3 matrix.
fn char_poly(m: &CycloMat) -> [Cyclo; 4] {
    let tr = m.trace();
    let tr2 = m.mul_mat(m).trace();
    let half = crate::Rational::new(1, 2);
    let c1 = (&(&tr * &tr) - &tr2).scale(&half);
    [-m.det(), c1, -tr, Cyclo::one()]
}

fn integral_double(m: &CycloMat) -> bool {
    let p = char_poly(m);
    let q: Vec<Cyclo> = p.iter().map(|c| c.conj()).collect();
    let mut prod = vec![Cyclo::zero(); 7];
    for (i, a) in p.iter().enumerate() {
        for (j, b) in q.iter().enumerate() {
            prod[i + j] = &prod[i + j] + &(a * b);
        }
    }
    prod.iter()
        .all(|c| c.to_rational().is_some_and(|r| r.is_integer()))
}

fn nonabelian(
    group: &GroupPresentation,
    reps: &[AnalyticRep],
) -> Result<StandardReport, ActionError> {
    let relators = group.parse_relators()?;
    let mut orders_ok = None;
    let mut witness = None;
    for (idx, rep) in reps.iter().enumerate() {
        let gens = &rep.matrices;
        if gens.len() != group.generators.len() {
            return Err(ActionError::Invalid(format!(
                "rep {idx} has {} matrices",
                gens.len()
            )));
        }
        let relators_hold = relators
            .iter()
            .all(|r| eval_word(gens, r).is_some_and(|m| m.is_identity()));
        let elems = close_matrices(gens, crate::action::DEFAULT_BOUND)?;
        let faithful = relators_hold && elems.len() == group.order;
        if !faithful {
            continue;
        }
        // element orders are a property of the group; a faithful image computes them
        let orders: Vec<u32> = elems
            .iter()
            .map(|m| matrix_order(m, group.order).ok_or(ActionError::BoundExceeded(group.order)))
            .collect::<Result<_, _>>()?;
        orders_ok.get_or_insert(orders.iter().all(|o| ALLOWED_ORDERS.contains(o)));
        let rigid = character_invariants(gens)?.rigid;
        let id: CycloMat = Matrix::identity(3);
        let ok = rigid
            && elems.iter().zip(&orders).all(|(m, o)| {
                let has_one = m.sub_mat(&id).det().is_zero();
                integral_double(m)
                    && !(MUST_HAVE_ONE.contains(o) && !has_one)
                    && !(MUST_NOT_HAVE_ONE.contains(o) && has_one)
            });
        if ok && witness.is_none() {
            witness = Some(format!("catalog representation {idx}"));
        }
    }
    Ok(StandardReport {
        group: group.name.clone(),
        orders_ok: orders_ok.unwrap_or(false),
        candidates: reps.len(),
        witness,
    })
}
