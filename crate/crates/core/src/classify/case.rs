//! The per-case driver: kernels, cocycles, classes, orbits and invariants.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::action::{character_invariants, ActionContext, AnalyticRep, GroupPresentation};
use crate::catalog::{Catalog, CensusSpec};
use crate::classify::census::{
    act_on_cocycle, cohomologous, enumerate_standard_cocycles, KernelData,
};
use crate::classify::kernel::{all_subspaces, F3Index, Forbidden, Kernel};
use crate::classify::normalizer::{normalizer, Mode, Normalizer};
use crate::classify::orbit::{kernel_orbits, orbit_from, KernelOrbit};
use crate::classify::uf::UnionFind;
use crate::classify::witness::{verify_in, EquivalenceWitness};
use crate::error::{CatalogError, ClassifyError};
use crate::exact::Matrix;
use crate::singular::{format_abelian, quotient_invariants};
use crate::torus::{invariant_subgroup, PeriodLattice, Semilinear};
use crate::{IntMat, Rational};

#[derive(Clone, Debug)]
pub enum KernelMode {
    Fixed(Vec<Kernel>),
    Enumerate {
        forbidden: Forbidden,
        preferred: Vec<Kernel>,
    },
}

#[derive(Clone, Debug)]
pub enum NormalizerSource {
    None,
    Monomial,
    Generators {
        holomorphic: Vec<Semilinear>,
        semilinear: Vec<Semilinear>,
    },
}

/// Everything needed to classify one group with one representation.
#[derive(Clone, Debug)]
pub struct CaseSpec {
    pub name: String,
    pub group: GroupPresentation,
    pub rep: AnalyticRep,
    pub base: PeriodLattice,
    pub base_is_eisenstein: bool,
    /// Generator whose translation is normalized to zero.
    pub distinguished: usize,
    pub kernels: KernelMode,
    pub normalizer: NormalizerSource,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ClassifyOptions {
    /// Enumerate kernels and cocycle parameters in reverse order.
    pub reverse: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizerSummary {
    pub source: String,
    pub holomorphic_order: Option<usize>,
    pub full_order: Option<usize>,
    pub holomorphic_generators: usize,
    pub semilinear_generators: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelReport {
    pub kernel: String,
    pub basis: Vec<[u8; 3]>,
    /// Kernels in the holomorphic orbit of this representative.
    pub orbit_size: usize,
    pub candidates: usize,
    pub well_defined: usize,
    pub actions: usize,
    pub good_classes: usize,
    pub biholomorphism_classes: usize,
    pub h0: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitReport {
    pub id: usize,
    pub torus: String,
    /// Generator name to translation in complex coordinates, `z = zeta_n`.
    pub representative: BTreeMap<String, Vec<String>>,
    pub representative_coords: Vec<Vec<String>>,
    pub actions: usize,
    pub cohomology_classes: usize,
    pub basket: Vec<String>,
    pub pi1: Option<String>,
    pub h0: String,
    pub pg: i64,
    pub diffeo_class_id: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowMatch {
    pub row: String,
    pub torus: String,
    pub biholomorphism_class: usize,
    pub diffeo_class_id: usize,
    pub basket_matches: bool,
    pub pi1_matches: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MergeSummary {
    pub merges: usize,
    pub verified: usize,
    pub non_holomorphic: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub case: String,
    pub group: String,
    pub normalizer: NormalizerSummary,
    pub kernels: Vec<KernelReport>,
    pub biholomorphism_classes: usize,
    pub diffeomorphism_classes: usize,
    pub classes: Vec<OrbitReport>,
    pub biholomorphism_merges: MergeSummary,
    pub diffeomorphism_merges: MergeSummary,
    pub flags: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rows: Vec<RowMatch>,
}

impl ClassificationReport {
    pub fn kernel(&self, label: &str) -> Option<&KernelReport> {
        self.kernels.iter().find(|k| k.kernel == label)
    }

    /// Compare against the catalog's expectations; returns the mismatches.
    pub fn check_expected(&self, e: &crate::catalog::Expected) -> Vec<String> {
        let mut bad = Vec::new();
        if self.biholomorphism_classes != e.biholomorphism {
            bad.push(format!(
                "{} biholomorphism classes, expected {}",
                self.biholomorphism_classes, e.biholomorphism
            ));
        }
        if self.diffeomorphism_classes != e.diffeomorphism {
            bad.push(format!(
                "{} diffeomorphism classes, expected {}",
                self.diffeomorphism_classes, e.diffeomorphism
            ));
        }
        for c in &e.census {
            let label = Kernel::span(&c.kernel).to_string();
            match self.kernel(&label) {
                None => bad.push(format!("no kernel representative {label}")),
                Some(k) => bad.extend(census_mismatch(c, k)),
            }
        }
        for r in &self.rows {
            if !r.basket_matches || !r.pi1_matches {
                bad.push(format!("row {} invariants differ from the table", r.row));
            }
        }
        let hit: BTreeSet<usize> = self.rows.iter().map(|r| r.biholomorphism_class).collect();
        if hit.len() != self.rows.len() || hit.len() != self.biholomorphism_classes {
            bad.push("table rows are not one per biholomorphism class".into());
        }
        bad
    }
}

fn census_mismatch(c: &CensusSpec, k: &KernelReport) -> Vec<String> {
    let mut bad = Vec::new();
    let mut check = |what: &str, want: Option<usize>, got: usize| {
        if let Some(w) = want {
            if w != got {
                bad.push(format!("{}: {got} {what}, expected {w}", k.kernel));
            }
        }
    };
    check("actions", c.actions, k.actions);
    check("good classes", c.good_classes, k.good_classes);
    check("orbits", c.orbits, k.biholomorphism_classes);
    bad
}

/// A union performed by the orbit step, with the data certifying it.
#[derive(Clone, Debug)]
pub struct Merge {
    pub source: (usize, usize),
    pub target: (usize, usize),
    pub witness: EquivalenceWitness,
    pub holomorphic: bool,
}

/// Full result: the report plus the data behind it.
#[derive(Clone, Debug)]
pub struct CaseResult {
    pub report: ClassificationReport,
    pub base: PeriodLattice,
    pub normalizer: Normalizer,
    pub data: Vec<KernelData>,
    pub holo_orbits: Vec<KernelOrbit>,
    /// Global action index is `offsets[kernel] + action`.
    pub offsets: Vec<usize>,
    pub class_label: Vec<usize>,
    pub biholo_label: Vec<usize>,
    pub diffeo_label: Vec<usize>,
    pub biholo_merges: Vec<Merge>,
    pub diffeo_merges: Vec<Merge>,
}

impl CaseResult {
    pub fn global(&self, kernel: usize, action: usize) -> usize {
        self.offsets[kernel] + action
    }

    /// Locate an action given on some torus of the case, via transport to the representative kernel.
    pub fn locate(
        &self,
        lattice: &PeriodLattice,
        gens: &[Vec<Rational>],
    ) -> Result<(usize, usize), ClassifyError> {
        for (i, d) in self.data.iter().enumerate() {
            let mut candidates: Vec<IntMat> = Vec::new();
            match self.holo_orbits.get(i) {
                Some(o) => {
                    for (k, u) in &o.transporters {
                        if k.lattice()? == *lattice {
                            candidates.push(u.clone());
                        }
                    }
                }
                None => {
                    if d.lattice() == lattice {
                        candidates.push(Matrix::identity(6));
                    }
                }
            }
            if let Some(u) = candidates.into_iter().next() {
                // gens are coordinates in the caller's basis, which may differ from ours
                let ctx = ActionContext::new(&d.ctx.group, &d.ctx.rep, lattice)?;
                if !ctx.well_defined(gens) {
                    return Err(ClassifyError::Data(
                        "action does not respect the relators".into(),
                    ));
                }
                let table = ctx.translation_table(gens);
                // map back along u^-1 into the representative's lattice
                let p_x = lattice.basis_in(&self.base)?;
                let u_inv = u.inverse_int().expect("unimodular");
                let ck = d
                    .p_inv
                    .mul_mat(&u_inv.to_rational::<Rational>())
                    .mul_mat(&p_x)
                    .to_integer()
                    .ok_or_else(|| {
                        ClassifyError::Data("transporter does not carry lattices".into())
                    })?;
                let moved = act_on_cocycle(&ctx, &table, &d.ctx, &ck)?;
                let (key, _) = d
                    .standardize(&moved)
                    .ok_or_else(|| ClassifyError::Data("cannot standardize".into()))?;
                return d.lookup(&key).map(|a| (i, a)).ok_or_else(|| {
                    ClassifyError::Data("action is not among the good standard cocycles".into())
                });
            }
        }
        Err(ClassifyError::Data(
            "no kernel of the case gives this lattice".into(),
        ))
    }
}

fn h0_string(ctx: &ActionContext) -> Result<String, ClassifyError> {
    let mut f = invariant_subgroup(&ctx.linear.gens_real)?;
    f.sort_by(|a, b| b.cmp(a));
    Ok(format_abelian(&f))
}

struct Invariants {
    basket: Vec<String>,
    pi1: Option<String>,
}

#[allow(clippy::too_many_arguments)]
fn orbit_step(
    data: &[KernelData],
    offsets: &[usize],
    reps_in_orbit: &[Vec<usize>],
    gens: &[IntMat],
    uf: &mut UnionFind,
    merges: &mut Vec<Merge>,
) -> Result<(), ClassifyError> {
    for group in reps_in_orbit {
        let r0 = group[0];
        let d0 = &data[r0];
        let Some(k0) = &d0.kernel else { continue };
        let orbit = orbit_from(k0, gens)?;
        let class_reps: Vec<usize> = first_of_each_class(d0);
        let mut apply = |dst: usize, c: &IntMat, uf: &mut UnionFind| -> Result<(), ClassifyError> {
            for &a in &class_reps {
                let t = crate::classify::census::transport(d0, a, &data[dst], c)?;
                if uf.union(offsets[r0] + a, offsets[dst] + t.action) {
                    merges.push(Merge {
                        source: (r0, a),
                        target: (dst, t.action),
                        witness: EquivalenceWitness::new(t.matrix, Some(t.shift)),
                        holomorphic: false,
                    });
                }
            }
            Ok(())
        };
        for s in &orbit.stabilizer {
            apply(r0, s, uf)?;
        }
        for &r1 in &group[1..] {
            let k1 = data[r1].kernel.as_ref().expect("kernel data");
            let u = orbit
                .transporters
                .get(k1)
                .ok_or_else(|| ClassifyError::Data(format!("{k1} is not in the orbit of {k0}")))?;
            apply(r1, u, uf)?;
        }
    }
    Ok(())
}

fn first_of_each_class(d: &KernelData) -> Vec<usize> {
    let mut seen = BTreeSet::new();
    (0..d.actions.len())
        .filter(|&a| seen.insert(d.class_of[a]))
        .collect()
}

fn verify_merges(
    data: &[KernelData],
    merges: &mut [Merge],
    mode: Mode,
) -> Result<MergeSummary, ClassifyError> {
    let mut summary = MergeSummary {
        merges: merges.len(),
        verified: 0,
        non_holomorphic: 0,
    };
    for m in merges.iter_mut() {
        let (s, t) = (&data[m.source.0], &data[m.target.0]);
        let r = verify_in(
            &s.ctx,
            &s.actions[m.source.1].gens,
            &t.ctx,
            &t.actions[m.target.1].gens,
            &m.witness,
        );
        if !r.valid {
            return Err(ClassifyError::Witness(format!(
                "merge {} -> {}: {}",
                s.label,
                t.label,
                r.diagnostic.unwrap_or_default()
            )));
        }
        m.holomorphic = r.holomorphic;
        if !r.holomorphic {
            if mode == Mode::Biholo {
                return Err(ClassifyError::Witness(
                    "biholomorphism merge by a non-holomorphic map".into(),
                ));
            }
            summary.non_holomorphic += 1;
        }
        summary.verified += 1;
    }
    Ok(summary)
}

pub fn classify_case(case: &CaseSpec, opts: ClassifyOptions) -> Result<CaseResult, ClassifyError> {
    let base_ctx = ActionContext::new(&case.group, &case.rep, &case.base)?;
    let norm = normalizer(case, &base_ctx)?;
    let holo: Vec<IntMat> = norm
        .generators(Mode::Biholo)
        .into_iter()
        .map(|e| e.matrix.clone())
        .collect();
    let full: Vec<IntMat> = norm
        .generators(Mode::Diffeo)
        .into_iter()
        .map(|e| e.matrix.clone())
        .collect();
    let mut flags = Vec::new();

    // kernel representatives and their holomorphic orbits
    let (mut reps, holo_orbits, diffeo_partition): (
        Vec<Kernel>,
        Vec<KernelOrbit>,
        Vec<Vec<Kernel>>,
    ) = match &case.kernels {
        KernelMode::Fixed(list) => {
            let parts = list.iter().map(|k| vec![k.clone()]).collect();
            (list.clone(), Vec::new(), parts)
        }
        KernelMode::Enumerate {
            forbidden,
            preferred,
        } => {
            if !case.base_is_eisenstein {
                return Err(ClassifyError::Data(format!(
                    "{}: kernel enumeration needs the Eisenstein base",
                    case.name
                )));
            }
            let index = F3Index::default();
            let mut cands: Vec<Kernel> = all_subspaces()
                .into_iter()
                .filter(|k| {
                    forbidden.allows(k) && k.is_invariant(&index, &base_ctx.linear.gens_real)
                })
                .collect();
            if opts.reverse {
                cands.reverse();
            }
            let ho = kernel_orbits(&cands, &holo, preferred)?;
            let fo = kernel_orbits(&cands, &full, preferred)?;
            for o in ho.iter().chain(&fo) {
                if let Some(k) = o.transporters.keys().find(|k| !cands.contains(k)) {
                    return Err(ClassifyError::Data(format!(
                        "{}: normalizer leaves the admissible kernels at {k}",
                        case.name
                    )));
                }
            }
            for o in &ho {
                if !preferred.contains(&o.representative) {
                    flags.push(format!(
                        "kernel orbit of {} is not among the preferred representatives",
                        o.representative
                    ));
                }
            }
            let reps = ho.iter().map(|o| o.representative.clone()).collect();
            let parts = fo
                .iter()
                .map(|o| {
                    ho.iter()
                        .filter(|h| o.contains(&h.representative))
                        .map(|h| h.representative.clone())
                        .collect()
                })
                .collect();
            (reps, ho, parts)
        }
    };
    if let KernelMode::Fixed(_) = case.kernels {
        reps.sort();
    }

    let data: Vec<KernelData> = reps
        .iter()
        .map(|k| enumerate_standard_cocycles(case, Some(k), opts.reverse))
        .collect::<Result<_, _>>()?;
    let mut offsets = Vec::new();
    let mut total = 0;
    for d in &data {
        offsets.push(total);
        total += d.actions.len();
    }

    // cohomology classes, cross-checked against the stacked congruence
    let mut classes = UnionFind::new(total);
    for (i, d) in data.iter().enumerate() {
        let reps = first_of_each_class(d);
        for a in 0..d.actions.len() {
            let r = reps[d.class_of[a]];
            if cohomologous(&d.ctx, &d.actions[a].gens, &d.actions[r].gens).is_none() {
                return Err(ClassifyError::Data(format!(
                    "{}: class members are not cohomologous",
                    d.label
                )));
            }
            classes.union(offsets[i] + a, offsets[i] + r);
        }
    }
    let class_label = classes.labels().0;

    let position = |k: &Kernel| reps.iter().position(|r| r == k).expect("representative");
    let holo_groups: Vec<Vec<usize>> = data.iter().enumerate().map(|(i, _)| vec![i]).collect();
    let diffeo_groups: Vec<Vec<usize>> = diffeo_partition
        .iter()
        .map(|p| p.iter().map(position).collect::<Vec<_>>())
        .collect();

    let mut uf_b = classes.clone();
    let mut biholo_merges = Vec::new();
    orbit_step(
        &data,
        &offsets,
        &holo_groups,
        &holo,
        &mut uf_b,
        &mut biholo_merges,
    )?;
    let mut uf_d = uf_b.clone();
    let mut diffeo_merges = Vec::new();
    orbit_step(
        &data,
        &offsets,
        &diffeo_groups,
        &full,
        &mut uf_d,
        &mut diffeo_merges,
    )?;
    let biholo_summary = verify_merges(&data, &mut biholo_merges, Mode::Biholo)?;
    let diffeo_summary = verify_merges(&data, &mut diffeo_merges, Mode::Diffeo)?;
    let (biholo_label, nb) = uf_b.labels();
    let (diffeo_label, nd) = uf_d.labels();

    // invariants of every action, constant on orbits
    let pg = character_invariants(&case.rep.matrices)?.pg;
    let pg = if pg.is_integer() { *pg.numer() } else { -1 };
    let mut inv: Vec<Invariants> = Vec::with_capacity(total);
    let mut h0 = Vec::new();
    for d in &data {
        h0.push(h0_string(&d.ctx)?);
        for a in &d.actions {
            let q = quotient_invariants(&d.ctx, &a.table)?;
            inv.push(Invariants {
                basket: q.basket,
                pi1: q.pi1,
            });
        }
    }
    let kernel_of = |g: usize| offsets.iter().rposition(|o| *o <= g).expect("offset");
    for (labels, what) in [
        (&biholo_label, "biholomorphism"),
        (&diffeo_label, "diffeomorphism"),
    ] {
        let mut first: BTreeMap<usize, usize> = BTreeMap::new();
        for g in 0..total {
            let f = *first.entry(labels[g]).or_insert(g);
            let same = inv[f].basket == inv[g].basket && inv[f].pi1 == inv[g].pi1;
            let same_h0 = what == "diffeomorphism" || h0[kernel_of(f)] == h0[kernel_of(g)];
            if !same || !same_h0 {
                return Err(ClassifyError::InvariantMismatch(format!(
                    "{} {what} class {}: {:?}/{:?} vs {:?}/{:?}",
                    case.name, labels[g], inv[f].basket, inv[f].pi1, inv[g].basket, inv[g].pi1
                )));
            }
        }
    }

    // one report line per biholomorphism class
    let mut orbit_reports: Vec<OrbitReport> = Vec::new();
    for id in 0..nb {
        let members: Vec<usize> = (0..total).filter(|&g| biholo_label[g] == id).collect();
        let ki = kernel_of(members[0]);
        let d = &data[ki];
        let rep_action = members
            .iter()
            .filter(|&&g| kernel_of(g) == ki)
            .map(|&g| g - offsets[ki])
            .min_by(|a, b| d.actions[*a].gens.cmp(&d.actions[*b].gens))
            .expect("member");
        let gens = &d.actions[rep_action].gens;
        let representative = case
            .group
            .generators
            .iter()
            .zip(gens)
            .map(|(name, c)| {
                (
                    name.clone(),
                    d.lattice().point(c).iter().map(|x| x.to_string()).collect(),
                )
            })
            .collect();
        let cls: BTreeSet<usize> = members.iter().map(|&g| class_label[g]).collect();
        orbit_reports.push(OrbitReport {
            id,
            torus: d.label.clone(),
            representative,
            representative_coords: gens
                .iter()
                .map(|v| v.iter().map(|x| x.to_string()).collect())
                .collect(),
            actions: members.len(),
            cohomology_classes: cls.len(),
            basket: inv[members[0]].basket.clone(),
            pi1: inv[members[0]].pi1.clone(),
            h0: h0[ki].clone(),
            pg,
            diffeo_class_id: diffeo_label[members[0]],
        });
    }

    // classes a finite generator closure could not separate
    let infinite = norm.holomorphic_order.is_none();
    for (i, a) in orbit_reports.iter().enumerate() {
        for b in &orbit_reports[i + 1..] {
            if a.torus == b.torus
                && a.basket == b.basket
                && a.pi1 == b.pi1
                && a.h0 == b.h0
                && infinite
            {
                flags.push(format!(
                    "classes {} and {} distinct per generator closure",
                    a.id, b.id
                ));
            }
        }
    }

    let kernels = data
        .iter()
        .enumerate()
        .map(|(i, d)| {
            let on_it: BTreeSet<usize> = (0..d.actions.len())
                .map(|a| biholo_label[offsets[i] + a])
                .collect();
            KernelReport {
                kernel: d.label.clone(),
                basis: d.kernel.as_ref().map(|k| k.basis()).unwrap_or_default(),
                orbit_size: holo_orbits.get(i).map(|o| o.len()).unwrap_or(1),
                candidates: d.candidates,
                well_defined: d.well_defined,
                actions: d.actions.len(),
                good_classes: d.classes,
                biholomorphism_classes: on_it.len(),
                h0: h0[i].clone(),
            }
        })
        .collect();

    let report = ClassificationReport {
        case: case.name.clone(),
        group: case.group.name.clone(),
        normalizer: NormalizerSummary {
            source: norm.source.clone(),
            holomorphic_order: norm.holomorphic_order,
            full_order: norm.full_order,
            holomorphic_generators: norm.holomorphic.len(),
            semilinear_generators: norm.semilinear.len(),
        },
        kernels,
        biholomorphism_classes: nb,
        diffeomorphism_classes: nd,
        classes: orbit_reports,
        biholomorphism_merges: biholo_summary,
        diffeomorphism_merges: diffeo_summary,
        flags,
        rows: Vec::new(),
    };
    Ok(CaseResult {
        report,
        base: case.base.clone(),
        normalizer: norm,
        data,
        holo_orbits,
        offsets,
        class_label,
        biholo_label,
        diffeo_label,
        biholo_merges,
        diffeo_merges,
    })
}

/// Classify a catalog case and place its table rows among the classes.
pub fn classify_catalog_case(
    cat: &Catalog,
    name: &str,
    opts: ClassifyOptions,
) -> Result<CaseResult, ClassifyError> {
    let spec = cat.case(name).map_err(catalog_err)?;
    let entry = cat.case_entry(name).map_err(catalog_err)?;
    let mut res = classify_case(&spec, opts)?;
    for id in &entry.expected.rows {
        let row = cat.row(id).map_err(catalog_err)?;
        let action = cat.row_action(id).map_err(catalog_err)?;
        if action.rep != spec.rep || action.group != spec.group {
            return Err(ClassifyError::Data(format!(
                "row {id} uses a different representation"
            )));
        }
        let gens = action.cocycle.coords(&action.lattice)?;
        let (k, a) = res.locate(&action.lattice, &gens)?;
        let g = res.global(k, a);
        let class = res.biholo_label[g];
        let o = &res.report.classes[class];
        res.report.rows.push(RowMatch {
            row: id.clone(),
            torus: res.data[k].label.clone(),
            biholomorphism_class: class,
            diffeo_class_id: res.diffeo_label[g],
            basket_matches: o.basket == row.basket,
            pi1_matches: o.pi1.as_deref() == Some(row.pi1.as_str()),
        });
    }
    Ok(res)
}

pub(crate) fn catalog_err(e: CatalogError) -> ClassifyError {
    ClassifyError::Data(e.to_string())
}
