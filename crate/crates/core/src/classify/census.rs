//! Standard-form cocycles on one torus, their cohomology classes, and
//! transport of cocycles along normalizing maps.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::action::ActionContext;
use crate::classify::case::CaseSpec;
use crate::classify::kernel::Kernel;
use crate::classify::uf::UnionFind;
use crate::error::ClassifyError;
use crate::exact::congruence::{reduce_mod1, Congruence, CongruenceSolver};
use crate::exact::matrix::{vec_sub, Matrix};
use crate::torus::fixed::minus_identity;
use crate::torus::PeriodLattice;
use crate::{IntMat, RatMat, Rational};

/// Generator translations in lattice coordinates, reduced into `[0,1)`.
pub type CocycleKey = Vec<Vec<Rational>>;

#[derive(Clone, Debug)]
pub struct StandardCocycle {
    pub gens: CocycleKey,
    pub table: Vec<Vec<Rational>>,
}

/// All good standard-form cocycles for one representation on one torus.
#[derive(Clone, Debug)]
pub struct KernelData {
    pub kernel: Option<Kernel>,
    pub label: String,
    pub ctx: ActionContext,
    /// Columns: this lattice's basis in base-lattice coordinates.
    pub p: RatMat,
    pub p_inv: RatMat,
    pub distinguished: usize,
    /// Parameter tuples tried, and how many gave well-defined actions.
    pub candidates: usize,
    pub well_defined: usize,
    pub actions: Vec<StandardCocycle>,
    index: HashMap<CocycleKey, usize>,
    /// Cohomology class of every action, numbered from 0 in order of first appearance.
    pub class_of: Vec<usize>,
    pub classes: usize,
}

impl KernelData {
    pub fn lattice(&self) -> &PeriodLattice {
        &self.ctx.lattice
    }

    pub fn lookup(&self, key: &CocycleKey) -> Option<usize> {
        self.index.get(key).copied()
    }

    /// Points of the torus fixed by the distinguished generator.
    pub fn fix_points(&self) -> Vec<Vec<Rational>> {
        let k = self.ctx.generator_element(self.distinguished);
        self.ctx
            .solve_shift(k, &[Rational::from_integer(0); 6])
            .and_then(|s| s.enumerate())
            .expect("distinguished generator has isolated fixed points")
    }

    /// Move the origin so the distinguished generator has zero translation.
    pub fn standardize(&self, gens: &[Vec<Rational>]) -> Option<(CocycleKey, Vec<Rational>)> {
        let k = self.ctx.generator_element(self.distinguished);
        let d = self
            .ctx
            .solve_shift(k, &gens[self.distinguished])?
            .particular;
        Some((shift(&self.ctx, gens, &d), d))
    }
}

/// `tau(g) - (rho(g) - id) d` on generators.
pub fn shift(ctx: &ActionContext, gens: &[Vec<Rational>], d: &[Rational]) -> CocycleKey {
    gens.iter()
        .zip(&ctx.linear.gens_real)
        .map(|(t, m)| {
            reduce_mod1(&vec_sub(
                t,
                &minus_identity(m).to_rational::<Rational>().mul_vec(d),
            ))
        })
        .collect()
}

fn cartesian(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|v| (0..n).map(move |i| [v.clone(), vec![i]].concat()))
            .collect();
    }
    out
}

/// Good standard-form cocycles on `Lambda_K`: the distinguished generator
/// translates by zero and the others by points it fixes.
pub fn enumerate_standard_cocycles(
    case: &CaseSpec,
    kernel: Option<&Kernel>,
    reverse: bool,
) -> Result<KernelData, ClassifyError> {
    let (lattice, label) = match kernel {
        Some(k) if case.base_is_eisenstein => (k.lattice()?, k.to_string()),
        None => (case.base.clone(), "0".to_string()),
        Some(k) if k.dim() == 0 => (case.base.clone(), "0".to_string()),
        Some(_) => {
            return Err(ClassifyError::Data(format!(
                "{}: kernels need the Eisenstein base",
                case.name
            )))
        }
    };
    let ctx = ActionContext::new(&case.group, &case.rep, &lattice)?;
    if !ctx.faithful() {
        return Err(ClassifyError::Data(format!(
            "{}: representation is not faithful",
            case.name
        )));
    }
    let p = lattice.basis_in(&case.base)?;
    let p_inv = p
        .inverse()
        .ok_or_else(|| ClassifyError::Data("degenerate lattice".into()))?;
    let mut data = KernelData {
        kernel: kernel.cloned(),
        label,
        ctx,
        p,
        p_inv,
        distinguished: case.distinguished,
        candidates: 0,
        well_defined: 0,
        actions: Vec::new(),
        index: HashMap::new(),
        class_of: Vec::new(),
        classes: 0,
    };
    let k = data.ctx.generator_element(data.distinguished);
    if data.ctx.has_eigenvalue_one(k) {
        return Err(ClassifyError::Data(format!(
            "{}: distinguished generator has eigenvalue 1",
            case.name
        )));
    }
    let mut fix = data.fix_points();
    if reverse {
        fix.reverse();
    }
    let ngen = case.group.generators.len();
    let free: Vec<usize> = (0..ngen).filter(|&g| g != data.distinguished).collect();
    let zero = vec![Rational::from_integer(0); 6];
    for choice in cartesian(fix.len(), free.len()) {
        data.candidates += 1;
        let mut gens = vec![zero.clone(); ngen];
        for (g, i) in free.iter().zip(&choice) {
            gens[*g] = fix[*i].clone();
        }
        if !data.ctx.well_defined(&gens) {
            continue;
        }
        data.well_defined += 1;
        let table = data.ctx.translation_table(&gens);
        if !data.ctx.is_good(&table) {
            continue;
        }
        data.index.insert(gens.clone(), data.actions.len());
        data.actions.push(StandardCocycle { gens, table });
    }
    // two standard cocycles are cohomologous exactly via a shift fixed by the distinguished generator
    let mut uf = UnionFind::new(data.actions.len());
    for a in 0..data.actions.len() {
        for d in &fix {
            let key = shift(&data.ctx, &data.actions[a].gens, d);
            let b = data.lookup(&key).ok_or_else(|| {
                ClassifyError::Data(format!(
                    "{}: shifted cocycle left the enumerated set",
                    case.name
                ))
            })?;
            uf.union(a, b);
        }
    }
    let (class_of, classes) = uf.labels();
    data.class_of = class_of;
    data.classes = classes;
    Ok(data)
}

/// A shift `d` with `(rho(g) - id) d = tau(g) - tau'(g)` for all generators, if one exists.
pub fn cohomologous(
    ctx: &ActionContext,
    tau: &[Vec<Rational>],
    tau2: &[Vec<Rational>],
) -> Option<Vec<Rational>> {
    let blocks: Vec<IntMat> = ctx.linear.gens_real.iter().map(minus_identity).collect();
    let a = Matrix::vstack(&blocks);
    let b: Vec<Rational> = tau
        .iter()
        .zip(tau2)
        .flat_map(|(x, y)| vec_sub(x, y))
        .collect();
    match CongruenceSolver::<Rational>::new(&a).solve(&b).ok()? {
        Congruence::Empty => None,
        Congruence::Solutions(s) => Some(s.particular),
    }
}

/// `C_K = P_dst^-1 C P_src`: a base-lattice map written between two tori.
pub fn lattice_matrix(
    src: &KernelData,
    dst: &KernelData,
    c: &IntMat,
) -> Result<IntMat, ClassifyError> {
    let m = dst
        .p_inv
        .mul_mat(&c.to_rational::<Rational>())
        .mul_mat(&src.p);
    m.to_integer().filter(|i| i.is_unimodular()).ok_or_else(|| {
        ClassifyError::Data(format!(
            "map does not carry {} onto {}",
            src.label, dst.label
        ))
    })
}

/// `C * tau = C (tau o phi_C^-1)` on the generators of the target, where
/// `phi_C(x) = C x C^-1`; `c` is written between the two lattices.
pub fn act_on_cocycle(
    src: &ActionContext,
    table: &[Vec<Rational>],
    dst: &ActionContext,
    c: &IntMat,
) -> Result<CocycleKey, ClassifyError> {
    let inv = c
        .inverse_int()
        .ok_or_else(|| ClassifyError::Data("map is not invertible".into()))?;
    let cr = c.to_rational::<Rational>();
    dst.linear
        .gens_real
        .iter()
        .map(|g| {
            let e = src.linear.find(&inv.mul_mat(g).mul_mat(c)).ok_or_else(|| {
                ClassifyError::Data("map does not normalize the representation".into())
            })?;
            Ok(reduce_mod1(&cr.mul_vec(&table[e])))
        })
        .collect()
}

/// Result of pushing one action along a normalizing map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transported {
    pub action: usize,
    /// The map between the two lattices.
    pub matrix: IntMat,
    /// Origin shift bringing the transported cocycle into standard form.
    pub shift: Vec<Rational>,
}

pub fn transport(
    src: &KernelData,
    a: usize,
    dst: &KernelData,
    c: &IntMat,
) -> Result<Transported, ClassifyError> {
    let ck = lattice_matrix(src, dst, c)?;
    let moved = act_on_cocycle(&src.ctx, &src.actions[a].table, &dst.ctx, &ck)?;
    let (key, d) = dst
        .standardize(&moved)
        .ok_or_else(|| ClassifyError::Data("transported cocycle cannot be standardized".into()))?;
    let action = dst.lookup(&key).ok_or_else(|| {
        ClassifyError::Data(format!(
            "transported action from {} is missing on {}",
            src.label, dst.label
        ))
    })?;
    Ok(Transported {
        action,
        matrix: ck,
        shift: d,
    })
}
