//! Fundamental groups of quotients via the subgroup generated by elements with fixed points.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::action::{character_invariants, format_word, ActionContext, ElementStatus};
use crate::error::SingularError;
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pi1Report {
    pub gfix_order: usize,
    pub gfix_generators: Vec<String>,
    /// Some element of `G_fix` has no eigenvalue 1, so `pi_1 = G / G_fix`.
    pub shortcut_applies: bool,
    pub pi1: Option<String>,
    pub pi1_order: Option<usize>,
    /// The universal cover `T / G_fix` and whether that action is rigid.
    pub cover: Option<String>,
    pub cover_rigid: Option<bool>,
}

fn subgroup(ctx: &ActionContext, gens: &[usize]) -> Vec<bool> {
    let n = ctx.order();
    let mut inside = vec![false; n];
    inside[0] = true;
    let mut list = vec![0usize];
    let mut head = 0;
    while head < list.len() {
        for &g in gens {
            let x = ctx.linear.mul(list[head], g);
            if !inside[x] {
                inside[x] = true;
                list.push(x);
            }
        }
        head += 1;
    }
    inside
}

/// Abelian invariants written as `Z3^2`, `Z9 x Z3`, or `{1}`.
pub fn format_abelian(factors: &[u64]) -> String {
    if factors.is_empty() {
        return "{1}".into();
    }
    let mut counts: BTreeMap<std::cmp::Reverse<u64>, usize> = BTreeMap::new();
    for f in factors {
        *counts.entry(std::cmp::Reverse(*f)).or_insert(0) += 1;
    }
    counts
        .into_iter()
        .map(|(f, c)| {
            if c == 1 {
                format!("Z{}", f.0)
            } else {
                format!("Z{}^{c}", f.0)
            }
        })
        .collect::<Vec<_>>()
        .join(" x ")
}

/// Primary decomposition of a finite abelian group from its multiplication table.
fn primary_factors(n: usize, mul: &dyn Fn(usize, usize) -> usize) -> Vec<u64> {
    let order_of = |x: usize| {
        let (mut k, mut y) = (1u64, x);
        while y != 0 {
            y = mul(y, x);
            k += 1;
        }
        k
    };
    let orders: Vec<u64> = (0..n).map(order_of).collect();
    let mut out = Vec::new();
    let mut m = n as u64;
    let mut p = 2;
    while m > 1 {
        if !m.is_multiple_of(p) {
            p += 1;
            continue;
        }
        while m.is_multiple_of(p) {
            m /= p;
        }
        // count[k] = |A[p^k]|
        let mut count = vec![1u64];
        let mut pk = 1u64;
        loop {
            pk *= p;
            let c = orders.iter().filter(|o| pk.is_multiple_of(**o)).count() as u64;
            if c == *count.last().unwrap() {
                break;
            }
            count.push(c);
        }
        // number of cyclic factors of order >= p^k is log_p(count[k] / count[k-1])
        let ge: Vec<u32> = count.windows(2).map(|w| (w[1] / w[0]).ilog(p)).collect();
        for k in 0..ge.len() {
            let exact = ge[k] - ge.get(k + 1).copied().unwrap_or(0);
            for _ in 0..exact {
                out.push(p.pow(k as u32 + 1));
            }
        }
    }
    out.sort_by(|a, b| b.cmp(a));
    out
}

pub fn fundamental_group(
    ctx: &ActionContext,
    table: &[Vec<Rational>],
) -> Result<Pi1Report, SingularError> {
    let status = ctx.element_status(table);
    if status.contains(&ElementStatus::Bad) {
        return Err(SingularError::NotGood(
            "positive-dimensional fixed locus".into(),
        ));
    }
    let fixers: Vec<usize> = status
        .iter()
        .enumerate()
        .filter(|(_, s)| matches!(s, ElementStatus::Isolated(c) if *c > 0))
        .map(|(e, _)| e)
        .collect();
    let inside = subgroup(ctx, &fixers);
    let gfix: Vec<usize> = (0..ctx.order()).filter(|&e| inside[e]).collect();
    let mut gens: Vec<usize> = Vec::new();
    for &f in &fixers {
        if !subgroup(ctx, &gens)[f] {
            gens.push(f);
        }
    }
    let gfix_generators = gens
        .iter()
        .map(|&e| format_word(&ctx.linear.elements[e].word, &ctx.group.generators))
        .collect();
    let shortcut_applies = gfix.iter().any(|&e| e != 0 && !ctx.has_eigenvalue_one(e));
    let mut report = Pi1Report {
        gfix_order: gfix.len(),
        gfix_generators,
        shortcut_applies,
        pi1: None,
        pi1_order: None,
        cover: None,
        cover_rigid: None,
    };
    if !shortcut_applies {
        return Ok(report);
    }
    // cosets x * G_fix, labelled by their least element
    let n = ctx.order();
    let coset_of: Vec<usize> = (0..n)
        .map(|x| gfix.iter().map(|&h| ctx.linear.mul(x, h)).min().unwrap())
        .collect();
    let reps: Vec<usize> = {
        let mut r: Vec<usize> = coset_of.clone();
        r.sort();
        r.dedup();
        r
    };
    let idx = |c: usize| reps.binary_search(&c).unwrap();
    let qmul = |a: usize, b: usize| idx(coset_of[ctx.linear.mul(reps[a], reps[b])]);
    let q = reps.len();
    let abelian = (0..q).all(|a| (0..q).all(|b| qmul(a, b) == qmul(b, a)));
    report.pi1_order = Some(q);
    report.pi1 = Some(if abelian {
        format_abelian(&primary_factors(q, &qmul))
    } else {
        format!("nonabelian of order {q}")
    });
    let mats: Vec<_> = gens
        .iter()
        .map(|&e| ctx.linear.elements[e].complex.clone())
        .collect();
    report.cover_rigid = Some(character_invariants(&mats)?.rigid);
    report.cover = Some(format!("T/G_fix with |G_fix| = {}", gfix.len()));
    Ok(report)
}
