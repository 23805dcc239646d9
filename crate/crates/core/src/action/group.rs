//! Finite groups acting affinely on a torus.

use std::collections::HashMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::action::word::{parse_word, Word};
use crate::error::ActionError;
use crate::exact::congruence::{reduce_mod1, Congruence, CongruenceSolver, SolutionSet};
use crate::exact::matrix::{vec_add, Matrix};
use crate::torus::fixed::{fixed_locus_with, minus_identity, FixedLocus};
use crate::torus::{CVec, PeriodLattice, Semilinear};
use crate::{CycloMat, IntMat, Rational};

pub const DEFAULT_BOUND: usize = 512;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupPresentation {
    pub name: String,
    pub generators: Vec<String>,
    pub relators: Vec<String>,
    pub order: usize,
    /// Invariant factors when the group is abelian.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abelian_invariants: Option<Vec<u32>>,
}

impl GroupPresentation {
    pub fn parse_relators(&self) -> Result<Vec<Word>, ActionError> {
        self.relators
            .iter()
            .map(|r| parse_word(r, &self.generators))
            .collect()
    }

    pub fn is_abelian(&self) -> bool {
        self.abelian_invariants.is_some()
    }
}

/// Linear parts: one 3x3 matrix per generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalyticRep {
    pub matrices: Vec<CycloMat>,
}

/// Translation parts: one torus point per generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cocycle {
    pub translations: Vec<CVec>,
}

impl Cocycle {
    pub fn coords(&self, lattice: &PeriodLattice) -> Result<Vec<Vec<Rational>>, ActionError> {
        Ok(self
            .translations
            .iter()
            .map(|t| lattice.coords(t))
            .collect::<Result<_, _>>()?)
    }

    pub fn from_coords(lattice: &PeriodLattice, c: &[Vec<Rational>]) -> Self {
        Cocycle {
            translations: c.iter().map(|x| lattice.point(x)).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AffineAction {
    pub group: GroupPresentation,
    pub rep: AnalyticRep,
    pub lattice: PeriodLattice,
    pub cocycle: Cocycle,
}

/// One element of an affine group: `z -> matrix * z + translation` in lattice coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineElement {
    pub word: Word,
    pub matrix: IntMat,
    pub translation: Vec<Rational>,
}

fn compose(a: (&IntMat, &[Rational]), b: (&IntMat, &[Rational])) -> (IntMat, Vec<Rational>) {
    let m = a.0.mul_mat(b.0);
    let t = vec_add(&a.0.to_rational::<Rational>().mul_vec(b.1), a.1);
    (m, reduce_mod1(&t))
}

pub fn generator_matrices(
    rep: &AnalyticRep,
    lattice: &PeriodLattice,
) -> Result<Vec<IntMat>, ActionError> {
    rep.matrices
        .iter()
        .map(|m| Ok(lattice.lattice_map(lattice, &Semilinear::linear(m.clone()))?))
        .collect()
}

/// Closure of the affine maps generated by an action, up to `bound` elements.
pub fn close_group(action: &AffineAction, bound: usize) -> Result<Vec<AffineElement>, ActionError> {
    let gens = generator_matrices(&action.rep, &action.lattice)?;
    let trans = action.cocycle.coords(&action.lattice)?;
    let mut elems = vec![AffineElement {
        word: Vec::new(),
        matrix: Matrix::identity(6),
        translation: vec![Rational::zero(); 6],
    }];
    let mut seen: HashMap<IntMat, usize> = HashMap::from([(Matrix::identity(6), 0)]);
    let mut head = 0;
    while head < elems.len() {
        for (g, (gm, gt)) in gens.iter().zip(&trans).enumerate() {
            let (m, t) = compose((&elems[head].matrix, &elems[head].translation), (gm, gt));
            match seen.get(&m) {
                Some(&i) => {
                    if elems[i].translation != t {
                        return Err(ActionError::ContainsTranslations);
                    }
                }
                None => {
                    if elems.len() >= bound {
                        return Err(ActionError::BoundExceeded(bound));
                    }
                    let mut word = elems[head].word.clone();
                    word.push((g, 1));
                    seen.insert(m.clone(), elems.len());
                    elems.push(AffineElement {
                        word,
                        matrix: m,
                        translation: t,
                    });
                }
            }
        }
        head += 1;
    }
    Ok(elems)
}

#[derive(Clone, Debug)]
pub struct LinearElement {
    pub word: Word,
    pub complex: CycloMat,
    pub real: IntMat,
    /// `self = elements[parent.0] * generator[parent.1]`.
    pub parent: Option<(usize, usize)>,
    pub order: usize,
}

/// The finite matrix group generated by the linear parts.
#[derive(Clone, Debug)]
pub struct LinearGroup {
    pub gens_real: Vec<IntMat>,
    pub gens_complex: Vec<CycloMat>,
    pub elements: Vec<LinearElement>,
    index: HashMap<IntMat, usize>,
}

impl LinearGroup {
    pub fn new(
        rep: &AnalyticRep,
        lattice: &PeriodLattice,
        bound: usize,
    ) -> Result<Self, ActionError> {
        let gens_real = generator_matrices(rep, lattice)?;
        let gens_complex = rep.matrices.clone();
        let mut elements = vec![LinearElement {
            word: Vec::new(),
            complex: Matrix::identity(3),
            real: Matrix::identity(6),
            parent: None,
            order: 1,
        }];
        let mut index = HashMap::from([(Matrix::identity(6), 0usize)]);
        let mut head = 0;
        while head < elements.len() {
            for g in 0..gens_real.len() {
                let real = elements[head].real.mul_mat(&gens_real[g]);
                if index.contains_key(&real) {
                    continue;
                }
                if elements.len() >= bound {
                    return Err(ActionError::BoundExceeded(bound));
                }
                let mut word = elements[head].word.clone();
                word.push((g, 1));
                let complex = elements[head].complex.mul_mat(&gens_complex[g]);
                index.insert(real.clone(), elements.len());
                elements.push(LinearElement {
                    word,
                    complex,
                    real,
                    parent: Some((head, g)),
                    order: 0,
                });
            }
            head += 1;
        }
        let mut lg = LinearGroup {
            gens_real,
            gens_complex,
            elements,
            index,
        };
        for i in 0..lg.elements.len() {
            let mut k = 1;
            let mut cur = i;
            while cur != 0 {
                cur = lg.mul(cur, i);
                k += 1;
            }
            lg.elements[i].order = k;
        }
        Ok(lg)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn find(&self, m: &IntMat) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.find(&self.elements[a].real.mul_mat(&self.elements[b].real))
            .expect("closed under products")
    }

    pub fn inverse(&self, a: usize) -> usize {
        let o = self.elements[a].order;
        (1..o).fold(0, |acc, _| self.mul(acc, a))
    }

    pub fn eval_word(&self, w: &Word) -> IntMat {
        let mut m: IntMat = Matrix::identity(6);
        for (g, e) in w {
            let gm = if *e < 0 {
                self.gens_real[*g].inverse_int().expect("unimodular")
            } else {
                self.gens_real[*g].clone()
            };
            for _ in 0..e.unsigned_abs() {
                m = m.mul_mat(&gm);
            }
        }
        m
    }

    pub fn is_abelian(&self) -> bool {
        self.gens_real
            .iter()
            .all(|a| self.gens_real.iter().all(|b| a.mul_mat(b) == b.mul_mat(a)))
    }
}

/// Status of one group element on the torus.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ElementStatus {
    Identity,
    Free,
    Isolated(usize),
    /// Has eigenvalue 1 and fixes a positive-dimensional set.
    Bad,
}

/// Shared data for all cocycles over one representation and lattice.
#[derive(Clone, Debug)]
pub struct ActionContext {
    pub group: GroupPresentation,
    pub rep: AnalyticRep,
    pub lattice: PeriodLattice,
    pub linear: LinearGroup,
    pub relators: Vec<Word>,
    solvers: Vec<CongruenceSolver<Rational>>,
    eigen_one: Vec<bool>,
}

impl ActionContext {
    pub fn new(
        group: &GroupPresentation,
        rep: &AnalyticRep,
        lattice: &PeriodLattice,
    ) -> Result<Self, ActionError> {
        if rep.matrices.len() != group.generators.len() {
            return Err(ActionError::Invalid(format!(
                "{} matrices for {} generators",
                rep.matrices.len(),
                group.generators.len()
            )));
        }
        let linear = LinearGroup::new(rep, lattice, DEFAULT_BOUND)?;
        let solvers: Vec<_> = linear
            .elements
            .iter()
            .map(|e| CongruenceSolver::new(&minus_identity(&e.real)))
            .collect();
        let eigen_one = solvers
            .iter()
            .map(|s| s.smith().diagonal().iter().any(Zero::is_zero))
            .collect();
        Ok(ActionContext {
            group: group.clone(),
            rep: rep.clone(),
            lattice: lattice.clone(),
            relators: group.parse_relators()?,
            linear,
            solvers,
            eigen_one,
        })
    }

    pub fn has_eigenvalue_one(&self, e: usize) -> bool {
        self.eigen_one[e]
    }

    pub fn order(&self) -> usize {
        self.linear.len()
    }

    /// Linear faithfulness: relators hold on matrices and the image has full order.
    pub fn faithful(&self) -> bool {
        self.relators
            .iter()
            .all(|r| self.linear.eval_word(r).is_identity())
            && self.linear.len() == self.group.order
    }

    /// Translation of every element, given generator translations in lattice coordinates.
    pub fn translation_table(&self, gens: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
        let mut out: Vec<Vec<Rational>> = vec![vec![Rational::zero(); 6]; self.linear.len()];
        for i in 1..self.linear.len() {
            let (p, g) = self.linear.elements[i]
                .parent
                .expect("non-identity has a parent");
            let m = self.linear.elements[p].real.to_rational::<Rational>();
            out[i] = reduce_mod1(&vec_add(&m.mul_vec(&gens[g]), &out[p]));
        }
        out
    }

    /// Evaluate a word as an affine map.
    pub fn eval_affine(&self, w: &Word, gens: &[Vec<Rational>]) -> (IntMat, Vec<Rational>) {
        let mut acc: (IntMat, Vec<Rational>) = (Matrix::identity(6), vec![Rational::zero(); 6]);
        for (g, e) in w {
            let a = &self.linear.gens_real[*g];
            let step = if *e < 0 {
                let inv = a.inverse_int().expect("unimodular");
                let t = inv
                    .to_rational::<Rational>()
                    .mul_vec(&gens[*g])
                    .into_iter()
                    .map(|x| -x)
                    .collect::<Vec<_>>();
                (inv, t)
            } else {
                (a.clone(), gens[*g].clone())
            };
            for _ in 0..e.unsigned_abs() {
                acc = compose((&acc.0, &acc.1), (&step.0, &step.1));
            }
        }
        acc
    }

    /// Which relators act as the identity on the torus.
    pub fn relator_checks(&self, gens: &[Vec<Rational>]) -> Vec<bool> {
        self.relators
            .iter()
            .map(|r| {
                let (m, t) = self.eval_affine(r, gens);
                m.is_identity() && t.iter().all(Zero::is_zero)
            })
            .collect()
    }

    pub fn well_defined(&self, gens: &[Vec<Rational>]) -> bool {
        self.relator_checks(gens).into_iter().all(|x| x)
    }

    pub fn fixed_points(&self, e: usize, table: &[Vec<Rational>]) -> FixedLocus {
        fixed_locus_with(&self.solvers[e], &table[e]).expect("dimensions agree")
    }

    pub fn element_status(&self, table: &[Vec<Rational>]) -> Vec<ElementStatus> {
        (0..self.linear.len())
            .map(|e| {
                if e == 0 {
                    return ElementStatus::Identity;
                }
                if self.eigen_one[e] {
                    if self.solvers[e].solvable(&table[e].iter().map(|x| -x).collect::<Vec<_>>()) {
                        ElementStatus::Bad
                    } else {
                        ElementStatus::Free
                    }
                } else {
                    ElementStatus::Isolated(self.fixed_points(e, table).count().expect("finite"))
                }
            })
            .collect()
    }

    /// Solutions of `(M_e - id) x = rhs (mod Z^6)`.
    pub fn solve_shift(&self, e: usize, rhs: &[Rational]) -> Option<SolutionSet<Rational>> {
        match self.solvers[e].solve(rhs).ok()? {
            Congruence::Empty => None,
            Congruence::Solutions(s) => Some(s),
        }
    }

    /// Element index of the `g`-th generator.
    pub fn generator_element(&self, g: usize) -> usize {
        self.linear
            .find(&self.linear.gens_real[g])
            .expect("generators are elements")
    }

    /// Every element with eigenvalue 1 acts freely.
    pub fn is_good(&self, table: &[Vec<Rational>]) -> bool {
        (1..self.linear.len()).all(|e| {
            !self.eigen_one[e]
                || !self.solvers[e].solvable(&table[e].iter().map(|x| -x).collect::<Vec<_>>())
        })
    }
}

/// Result of [`validate_action`]: one flag per check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub lattice_preserving: Vec<(String, bool)>,
    pub relators: Vec<(String, bool)>,
    pub faithful: bool,
    pub problems: Vec<String>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.faithful
            && self.problems.is_empty()
            && self.lattice_preserving.iter().all(|x| x.1)
            && self.relators.iter().all(|x| x.1)
    }
}

/// Checks relators on the torus, lattice preservation and faithfulness of the linear part.
pub fn validate_action(action: &AffineAction) -> ValidationReport {
    let g = &action.group;
    let mut report = ValidationReport {
        lattice_preserving: Vec::new(),
        relators: g.relators.iter().map(|r| (r.clone(), false)).collect(),
        faithful: false,
        problems: Vec::new(),
    };
    if action.rep.matrices.len() != g.generators.len()
        || action.cocycle.translations.len() != g.generators.len()
    {
        report.problems.push("generator count mismatch".into());
        return report;
    }
    for (name, m) in g.generators.iter().zip(&action.rep.matrices) {
        let ok = action
            .lattice
            .lattice_map(&action.lattice, &Semilinear::linear(m.clone()))
            .is_ok();
        report.lattice_preserving.push((name.clone(), ok));
    }
    if !report.lattice_preserving.iter().all(|x| x.1) {
        return report;
    }
    let ctx = match ActionContext::new(g, &action.rep, &action.lattice) {
        Ok(c) => c,
        Err(e) => {
            report.problems.push(e.to_string());
            return report;
        }
    };
    let gens = match action.cocycle.coords(&action.lattice) {
        Ok(c) => c,
        Err(e) => {
            report.problems.push(e.to_string());
            return report;
        }
    };
    for (slot, ok) in report.relators.iter_mut().zip(ctx.relator_checks(&gens)) {
        slot.1 = ok;
    }
    report.faithful = ctx.faithful();
    report
}

/// Per-element fixed point behaviour of an action.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoodnessReport {
    pub good: bool,
    pub elements: Vec<(String, ElementStatus)>,
}

impl GoodnessReport {
    pub fn count(&self, pred: impl Fn(&ElementStatus) -> bool) -> usize {
        self.elements.iter().filter(|(_, s)| pred(s)).count()
    }
}

impl ActionContext {
    pub fn goodness(&self, table: &[Vec<Rational>]) -> GoodnessReport {
        let status = self.element_status(table);
        let good = !status.contains(&ElementStatus::Bad);
        let elements = self
            .linear
            .elements
            .iter()
            .zip(status)
            .map(|(e, s)| {
                (
                    crate::action::word::format_word(&e.word, &self.group.generators),
                    s,
                )
            })
            .collect();
        GoodnessReport { good, elements }
    }
}

impl AffineAction {
    pub fn context(&self) -> Result<ActionContext, ActionError> {
        ActionContext::new(&self.group, &self.rep, &self.lattice)
    }

    pub fn is_good(&self) -> Result<GoodnessReport, ActionError> {
        let ctx = self.context()?;
        let table = ctx.translation_table(&self.cocycle.coords(&self.lattice)?);
        Ok(ctx.goodness(&table))
    }
}
