//! Cohomology classes of translation parts and their orbits under normalizers.

pub mod case;
pub mod census;
pub mod kernel;
pub mod normalizer;
pub mod orbit;
pub mod tables;
pub mod uf;
pub mod witness;

pub use case::{
    classify_case, classify_catalog_case, CaseResult, CaseSpec, ClassificationReport,
    ClassifyOptions, KernelMode, KernelReport, NormalizerSource, OrbitReport, RowMatch,
};
pub use census::{
    act_on_cocycle, cohomologous, enumerate_standard_cocycles, transport, KernelData,
};
pub use kernel::{all_subspaces, F3Index, F3Vec, Forbidden, Kernel};
pub use normalizer::{
    is_multiplicity_free, monomial_elements, normalizer, Mode, Normalizer, NormalizerElement,
};
pub use orbit::{kernel_orbits, orbit_from, KernelOrbit};
pub use tables::{check_action, check_row, check_witness, RowCheck, WitnessCheck};
pub use uf::UnionFind;
pub use witness::{verify_in, verify_witness, EquivalenceWitness, WitnessReport};
