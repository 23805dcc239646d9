//! Finite groups acting on tori: closure, validity, goodness, character data.

pub mod character;
pub mod group;
pub mod standard;
pub mod word;

pub use character::{character_invariants, close_matrices, CharacterInvariants};
pub use group::{
    close_group, validate_action, ActionContext, AffineAction, AffineElement, AnalyticRep, Cocycle,
    ElementStatus, GoodnessReport, GroupPresentation, LinearGroup, ValidationReport, DEFAULT_BOUND,
};
pub use standard::{standard_conditions, StandardReport};
pub use word::{format_word, parse_word, Word};
