//! Toric models of cyclic quotient singularities: cone types, crepancy,
//! Cartier data and the two cohomological checks on the terminalizations.

pub mod divisor;
pub mod fan;
pub mod lattice;
pub mod terminalize;

pub use divisor::{
    cartier_data, divisor_polyhedron, h1_vanishes, is_basepoint_free, prime_divisor,
    pushforward_sections_equal, BasepointReport, CartierData, Divisor, H1Report, Pattern,
};
pub use fan::{cone_type, is_crepant_subdivision, ConeType, Fan, Ray};
pub use lattice::QLattice;
pub use terminalize::{catalog_fan, terminalize, DivisorCertificate, Terminalization};
