//! Checks on the stored table rows and equivalence witnesses.

use serde::{Deserialize, Serialize};

use crate::action::{character_invariants, validate_action, AffineAction};
use crate::catalog::Catalog;
use crate::classify::case::catalog_err;
use crate::classify::witness::{verify_witness, EquivalenceWitness, WitnessReport};
use crate::error::ClassifyError;
use crate::singular::{burnside_check, lefschetz_check, maximal_fixed_orders, quotient_invariants};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowCheck {
    pub row: String,
    pub well_defined: bool,
    pub rigid: bool,
    pub good: bool,
    pub pg: String,
    pub pg_matches: bool,
    pub basket: Vec<String>,
    pub basket_matches: bool,
    pub pi1: Option<String>,
    pub pi1_matches: bool,
    /// Fixed-point counts from the lattice agree with the Lefschetz number for every element.
    pub lefschetz: bool,
    /// Burnside counts for each maximal order of an element with fixed points.
    pub burnside: Vec<(u32, bool)>,
    pub problems: Vec<String>,
}

impl RowCheck {
    pub fn passed(&self) -> bool {
        self.well_defined
            && self.rigid
            && self.good
            && self.pg_matches
            && self.basket_matches
            && self.pi1_matches
            && self.lefschetz
            && self.burnside.iter().all(|b| b.1)
    }
}

/// Validate one stored action against its recorded invariants.
pub fn check_action(
    row: &str,
    action: &AffineAction,
    basket: &[String],
    pi1: &str,
    pg: i64,
) -> Result<RowCheck, ClassifyError> {
    let validation = validate_action(action);
    let chars = character_invariants(&action.rep.matrices)?;
    let mut check = RowCheck {
        row: row.to_string(),
        well_defined: validation.passed(),
        rigid: chars.rigid,
        good: false,
        pg: chars.pg.to_string(),
        pg_matches: chars.pg == crate::Rational::from_integer(pg),
        basket: Vec::new(),
        basket_matches: false,
        pi1: None,
        pi1_matches: false,
        lefschetz: false,
        burnside: Vec::new(),
        problems: validation.problems.clone(),
    };
    for (r, ok) in &validation.relators {
        if !ok {
            check
                .problems
                .push(format!("relator {r} fails on the torus"));
        }
    }
    if !check.well_defined {
        return Ok(check);
    }
    let ctx = action.context()?;
    let table = ctx.translation_table(&action.cocycle.coords(&action.lattice)?);
    check.good = ctx.is_good(&table);
    if !check.good {
        check
            .problems
            .push("some element fixes a curve or surface".into());
        return Ok(check);
    }
    let inv = quotient_invariants(&ctx, &table)?;
    check.basket_matches = inv.basket == basket;
    check.pi1_matches = inv.pi1.as_deref() == Some(pi1);
    check.basket = inv.basket;
    check.pi1 = inv.pi1;
    let mut lefschetz = true;
    for e in 1..ctx.order() {
        if !ctx.has_eigenvalue_one(e) {
            lefschetz &= lefschetz_check(&ctx, &table, e)?.agree;
        }
    }
    check.lefschetz = lefschetz;
    for m in maximal_fixed_orders(&ctx) {
        check
            .burnside
            .push((m, burnside_check(&ctx, &table, &inv.points, m)?.holds));
    }
    Ok(check)
}

pub fn check_row(cat: &Catalog, id: &str) -> Result<RowCheck, ClassifyError> {
    let row = cat.row(id).map_err(catalog_err)?;
    let action = cat.row_action(id).map_err(catalog_err)?;
    check_action(id, &action, &row.basket, &row.pi1, row.pg)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessCheck {
    pub name: String,
    pub report: WitnessReport,
    /// Whether the holomorphic flag agrees with the catalog, when it records one.
    pub holomorphic_matches: bool,
}

impl WitnessCheck {
    pub fn passed(&self) -> bool {
        self.report.valid && self.holomorphic_matches
    }
}

pub fn check_witness(cat: &Catalog, name: &str) -> Result<WitnessCheck, ClassifyError> {
    let w = cat.witness(name).map_err(catalog_err)?;
    let src = cat.row_action(&w.source).map_err(catalog_err)?;
    let tgt = cat.row_action(&w.target).map_err(catalog_err)?;
    let n = src.lattice.conductor().max(tgt.lattice.conductor());
    let s = w.map.build(n).map_err(catalog_err)?;
    let witness = EquivalenceWitness::from_semilinear(&src.lattice, &tgt.lattice, &s, None)?;
    let report = verify_witness(&src, &tgt, &witness)?;
    let holomorphic_matches = w.holomorphic.is_none_or(|h| h == report.holomorphic);
    Ok(WitnessCheck {
        name: name.to_string(),
        report,
        holomorphic_matches,
    })
}
