use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("incompatible conductors {0} and {1}")]
    IncompatibleConductors(u32, u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("modulus lattice is singular or does not contain the image of the domain lattice")]
    BadModulus,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TorusError {
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("vector is not in the rational span of the lattice")]
    NotTorsion,
    #[error("map does not preserve the lattice")]
    NotLatticePreserving,
    #[error("basis vectors are linearly dependent")]
    DegenerateBasis,
    #[error("invariant subgroup is positive-dimensional")]
    PositiveDimensional,
    #[error("no non-real scalar preserves the rational span of the lattice")]
    NoComplexStructure,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ActionError {
    #[error(transparent)]
    Torus(#[from] TorusError),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("group closure exceeded bound {0}")]
    BoundExceeded(usize),
    #[error("group contains translations")]
    ContainsTranslations,
    #[error("unknown generator '{0}'")]
    UnknownGenerator(String),
    #[error("rep data required for nonabelian group {0}")]
    RepDataRequired(String),
    #[error("invalid word: {0}")]
    BadWord(String),
    #[error("invalid action: {0}")]
    Invalid(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SingularError {
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error(transparent)]
    Torus(#[from] TorusError),
    #[error("weights {0:?} mod {1} do not give an isolated fixed point")]
    NotIsolated(Vec<u32>, u32),
    #[error("stabilizer of order {0} is not cyclic")]
    NonCyclicStabilizer(usize),
    #[error("element has eigenvalue 1")]
    HasEigenvalueOne,
    #[error("action is not good: {0}")]
    NotGood(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error(transparent)]
    Torus(#[from] TorusError),
    #[error(transparent)]
    Singular(#[from] SingularError),
    #[error("invariant mismatch inside one orbit: {0}")]
    InvariantMismatch(String),
    #[error("unknown case '{0}'")]
    UnknownCase(String),
    #[error("witness rejected: {0}")]
    Witness(String),
    #[error("inconsistent case data: {0}")]
    Data(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ToricError {
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("cone generators are not linearly independent")]
    Degenerate,
    #[error("ray {0:?} is not in the lattice")]
    NotInLattice(Vec<String>),
    #[error("tightening unjustified: {0}")]
    TighteningUnjustified(String),
    #[error("quotient N/cone is not cyclic")]
    NotCyclic,
    #[error("invalid fan: {0}")]
    InvalidFan(String),
    #[error("no catalog terminalization for {0}")]
    UnknownTarget(String),
}

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Torus(#[from] TorusError),
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error("catalog: {0}")]
    Invalid(String),
}
