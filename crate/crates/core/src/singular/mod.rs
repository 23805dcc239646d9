//! Singularities of quotients `T/G`, baskets and fundamental groups.

pub mod cqs;
pub mod locus;
pub mod pi1;

pub use cqs::{
    classify_cqs, riemann_roch_baskets, riemann_roch_value, CqsClass, CqsType, RrVector,
};
pub use locus::{
    burnside_check, count_special_points, eigen_exponents, lefschetz_check, maximal_fixed_orders,
    singular_locus, Basket, BurnsideReport, LefschetzReport, SingularPoint,
};
pub use pi1::{format_abelian, fundamental_group, Pi1Report};

use serde::{Deserialize, Serialize};

use crate::action::{ActionContext, AffineAction};
use crate::error::SingularError;
use crate::Rational;

/// Everything the quotient's singular data determines.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientInvariants {
    pub basket: Vec<String>,
    pub pi1: Option<String>,
    pub points: Vec<SingularPoint>,
    pub pi1_report: Pi1Report,
}

pub fn quotient_invariants(
    ctx: &ActionContext,
    table: &[Vec<Rational>],
) -> Result<QuotientInvariants, SingularError> {
    let points = singular_locus(ctx, table)?;
    let basket = Basket::from_points(&points).to_strings();
    let pi1_report = fundamental_group(ctx, table)?;
    Ok(QuotientInvariants {
        basket,
        pi1: pi1_report.pi1.clone(),
        points,
        pi1_report,
    })
}

pub fn analyze(action: &AffineAction) -> Result<QuotientInvariants, SingularError> {
    let ctx = action.context()?;
    let table = ctx.translation_table(&action.cocycle.coords(&action.lattice)?);
    quotient_invariants(&ctx, &table)
}
