//! The versioned data file: groups, representations, table rows, cases and witnesses.
//!
//! Cyclotomic entries are strings in `z = zeta_n`, e.g. `"1/3+2/3*z"` or `"-z^2"`.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::action::{AffineAction, AnalyticRep, Cocycle, GroupPresentation};
use crate::classify::case::{CaseSpec, KernelMode, NormalizerSource};
use crate::classify::kernel::{Forbidden, Kernel};
use crate::error::CatalogError;
use crate::exact::Matrix;
use crate::singular::RrVector;
use crate::torus::{cvec_parse_or_zero, PeriodLattice, Semilinear};
use crate::{Cyclo, CycloMat};

/// The catalog shipped with the crate.
pub const EMBEDDED: &str = include_str!("../data/catalog.json");

/// Environment variable naming a catalog file that replaces the embedded one.
pub const CATALOG_ENV: &str = "TORQUOT_CATALOG";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixSpec {
    Diag { diag: Vec<String> },
    Rows { rows: Vec<Vec<String>> },
}

impl MatrixSpec {
    pub fn build(&self, n: u32) -> Result<CycloMat, CatalogError> {
        let rows: Vec<Vec<Cyclo>> = match self {
            MatrixSpec::Diag { diag } => {
                let d = diag
                    .iter()
                    .map(|s| Cyclo::parse(n, s))
                    .collect::<Result<Vec<_>, _>>()?;
                return Ok(Matrix::diagonal(&d));
            }
            MatrixSpec::Rows { rows } => rows
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|s| Cyclo::parse(n, s))
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<_, _>>()?,
        };
        if rows.len() != 3 || rows.iter().any(|r| r.len() != 3) {
            return Err(CatalogError::Invalid("matrices must be 3x3".into()));
        }
        Ok(Matrix::from_rows(rows))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemilinearSpec {
    pub matrix: MatrixSpec,
    #[serde(default)]
    pub conj: [bool; 3],
}

impl SemilinearSpec {
    pub fn build(&self, n: u32) -> Result<Semilinear, CatalogError> {
        Ok(Semilinear {
            matrix: self.matrix.build(n)?,
            conj: self.conj,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupEntry {
    #[serde(flatten)]
    pub presentation: GroupPresentation,
    /// Complete list of 3-dimensional candidate representations, by name.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub reps: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepEntry {
    pub name: String,
    pub conductor: u32,
    pub matrices: Vec<MatrixSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum LatticeSpec {
    /// `Z[zeta_3]^3` enlarged by the `t`-multiples listed as vectors over `F_3`.
    Eisenstein { kernel: Vec<[u8; 3]> },
    /// `{(s_a(x), s_b(x), s_c(x))}` for `x` in `Z[zeta_n]`.
    Cm { n: u32, exps: [i64; 3] },
}

impl LatticeSpec {
    pub fn build(&self) -> Result<PeriodLattice, CatalogError> {
        match self {
            LatticeSpec::Eisenstein { kernel } => Ok(Kernel::span(kernel).lattice()?),
            LatticeSpec::Cm { n, exps } => Ok(PeriodLattice::cm_lattice(*n, *exps)?),
        }
    }

    pub fn kernel(&self) -> Option<Kernel> {
        match self {
            LatticeSpec::Eisenstein { kernel } => Some(Kernel::span(kernel)),
            LatticeSpec::Cm { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowSpec {
    pub id: String,
    pub table: u8,
    pub group: String,
    pub rep: String,
    pub lattice: LatticeSpec,
    /// Generator name to translation; missing generators translate by zero.
    pub translations: BTreeMap<String, Vec<String>>,
    pub basket: Vec<String>,
    pub pi1: String,
    pub pg: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelSpec {
    /// Use exactly these kernels instead of enumerating subgroups.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed: Option<Vec<Vec<[u8; 3]>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forbidden: Option<Forbidden>,
    /// Orbit representatives to prefer when one lies in an orbit.
    #[serde(default)]
    pub preferred: Vec<Vec<[u8; 3]>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum NormalizerSpec {
    None,
    Monomial,
    Generators {
        holomorphic: Vec<SemilinearSpec>,
        semilinear: Vec<SemilinearSpec>,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusSpec {
    pub kernel: Vec<[u8; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub actions: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub good_classes: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orbits: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expected {
    pub biholomorphism: usize,
    pub diffeomorphism: usize,
    pub rows: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub census: Vec<CensusSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normalizer_order: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseEntry {
    pub name: String,
    pub table: u8,
    pub group: String,
    pub rep: String,
    pub base: LatticeSpec,
    pub distinguished: String,
    pub kernels: KernelSpec,
    pub normalizer: NormalizerSpec,
    pub expected: Expected,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessSpec {
    pub name: String,
    pub source: String,
    pub target: String,
    pub map: SemilinearSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub holomorphic: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Catalog {
    pub version: u32,
    pub groups: Vec<GroupEntry>,
    pub reps: Vec<RepEntry>,
    pub rows: Vec<RowSpec>,
    pub cases: Vec<CaseEntry>,
    pub witnesses: Vec<WitnessSpec>,
    pub riemann_roch: Vec<RrVector>,
}

fn missing(what: &str, name: &str) -> CatalogError {
    CatalogError::Invalid(format!("no {what} named '{name}'"))
}

impl Catalog {
    pub fn embedded() -> Result<Self, CatalogError> {
        Self::parse(EMBEDDED)
    }

    /// The file named by `TORQUOT_CATALOG` if set, else the embedded catalog.
    pub fn load() -> Result<Self, CatalogError> {
        match std::env::var_os(CATALOG_ENV) {
            Some(p) => Self::from_path(Path::new(&p)),
            None => Self::embedded(),
        }
    }

    pub fn from_path(path: &Path) -> Result<Self, CatalogError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn parse(s: &str) -> Result<Self, CatalogError> {
        let c: Catalog = serde_json::from_str(s)?;
        if c.version != 1 {
            return Err(CatalogError::Invalid(format!(
                "unsupported catalog version {}",
                c.version
            )));
        }
        Ok(c)
    }

    pub fn group(&self, name: &str) -> Result<&GroupEntry, CatalogError> {
        self.groups
            .iter()
            .find(|g| g.presentation.name == name)
            .ok_or_else(|| missing("group", name))
    }

    pub fn rep_entry(&self, name: &str) -> Result<&RepEntry, CatalogError> {
        self.reps
            .iter()
            .find(|r| r.name == name)
            .ok_or_else(|| missing("representation", name))
    }

    pub fn rep(&self, name: &str) -> Result<AnalyticRep, CatalogError> {
        let e = self.rep_entry(name)?;
        let matrices = e
            .matrices
            .iter()
            .map(|m| m.build(e.conductor))
            .collect::<Result<_, _>>()?;
        Ok(AnalyticRep { matrices })
    }

    /// Candidate representations listed for a nonabelian group.
    pub fn group_reps(&self, name: &str) -> Result<Vec<AnalyticRep>, CatalogError> {
        self.group(name)?.reps.iter().map(|r| self.rep(r)).collect()
    }

    pub fn row(&self, id: &str) -> Result<&RowSpec, CatalogError> {
        self.rows
            .iter()
            .find(|r| r.id == id)
            .ok_or_else(|| missing("row", id))
    }

    pub fn row_action(&self, id: &str) -> Result<AffineAction, CatalogError> {
        let row = self.row(id)?;
        let group = self.group(&row.group)?.presentation.clone();
        let rep = self.rep(&row.rep)?;
        let lattice = row.lattice.build()?;
        let n = lattice.conductor().max(self.rep_entry(&row.rep)?.conductor);
        for name in row.translations.keys() {
            if !group.generators.contains(name) {
                return Err(CatalogError::Invalid(format!(
                    "row {id}: unknown generator '{name}'"
                )));
            }
        }
        let translations = group
            .generators
            .iter()
            .map(|g| cvec_parse_or_zero(n, row.translations.get(g).map(Vec::as_slice)))
            .collect::<Result<_, _>>()?;
        Ok(AffineAction {
            group,
            rep,
            lattice,
            cocycle: Cocycle { translations },
        })
    }

    pub fn case_entry(&self, name: &str) -> Result<&CaseEntry, CatalogError> {
        self.cases
            .iter()
            .find(|c| c.name == name)
            .ok_or_else(|| missing("case", name))
    }

    pub fn case(&self, name: &str) -> Result<CaseSpec, CatalogError> {
        let e = self.case_entry(name)?;
        let group = self.group(&e.group)?.presentation.clone();
        let rep = self.rep(&e.rep)?;
        let n = self.rep_entry(&e.rep)?.conductor;
        let distinguished = group
            .generators
            .iter()
            .position(|g| *g == e.distinguished)
            .ok_or_else(|| {
                CatalogError::Invalid(format!(
                    "case {name}: unknown generator '{}'",
                    e.distinguished
                ))
            })?;
        let kernels = match (&e.kernels.fixed, e.kernels.forbidden) {
            (Some(list), None) => KernelMode::Fixed(list.iter().map(|k| Kernel::span(k)).collect()),
            (None, Some(f)) => KernelMode::Enumerate {
                forbidden: f,
                preferred: e
                    .kernels
                    .preferred
                    .iter()
                    .map(|k| Kernel::span(k))
                    .collect(),
            },
            _ => {
                return Err(CatalogError::Invalid(format!(
                    "case {name}: give either fixed kernels or a forbidden shape"
                )))
            }
        };
        let normalizer = match &e.normalizer {
            NormalizerSpec::None => NormalizerSource::None,
            NormalizerSpec::Monomial => NormalizerSource::Monomial,
            NormalizerSpec::Generators {
                holomorphic,
                semilinear,
            } => NormalizerSource::Generators {
                holomorphic: holomorphic
                    .iter()
                    .map(|s| s.build(n))
                    .collect::<Result<_, _>>()?,
                semilinear: semilinear
                    .iter()
                    .map(|s| s.build(n))
                    .collect::<Result<_, _>>()?,
            },
        };
        Ok(CaseSpec {
            name: e.name.clone(),
            group,
            rep,
            base: e.base.build()?,
            base_is_eisenstein: matches!(e.base, LatticeSpec::Eisenstein { .. }),
            distinguished,
            kernels,
            normalizer,
        })
    }

    pub fn table_cases(&self, table: u8) -> Vec<&CaseEntry> {
        self.cases.iter().filter(|c| c.table == table).collect()
    }

    pub fn witness(&self, name: &str) -> Result<&WitnessSpec, CatalogError> {
        self.witnesses
            .iter()
            .find(|w| w.name == name)
            .ok_or_else(|| missing("witness", name))
    }
}
