use torquot::action::{ActionContext, AffineAction, AnalyticRep, GroupPresentation};
use torquot::catalog::Catalog;
use torquot::exact::Matrix;
use torquot::singular::*;
use torquot::torus::PeriodLattice;
use torquot::{Cyclo, Rational, SingularError};

fn cat() -> Catalog {
    Catalog::embedded().unwrap()
}

fn context(a: &AffineAction) -> (ActionContext, Vec<Vec<Rational>>) {
    let ctx = a.context().unwrap();
    let table = ctx.translation_table(&a.cocycle.coords(&a.lattice).unwrap());
    (ctx, table)
}

#[test]
fn baskets_of_cyclic_rows() {
    let c = cat();
    let b = |id: &str| analyze(&c.row_action(id).unwrap()).unwrap().basket;
    assert_eq!(b("Y1"), ["3/(1,1,1)×8", "9/(1,4,7)×3"]);
    assert_eq!(b("Y2"), ["2/(1,1,1)×9", "7/(1,2,4)×3", "14/(1,9,11)×1"]);
    assert_eq!(b("Z2"), ["3/(1,1,1)×27"]);
}

#[test]
fn every_row_matches_its_golden_basket() {
    let c = cat();
    for row in &c.rows {
        let q = analyze(&c.row_action(&row.id).unwrap()).unwrap();
        assert_eq!(q.basket, row.basket, "{}", row.id);
        assert_eq!(q.pi1.as_deref(), Some(row.pi1.as_str()), "{}", row.id);
    }
}

#[test]
fn table2_baskets_satisfy_riemann_roch() {
    let c = cat();
    let all = riemann_roch_baskets();
    for row in c.rows.iter().filter(|r| r.table == 2) {
        let q = analyze(&c.row_action(&row.id).unwrap()).unwrap();
        let n = Basket::from_points(&q.points).rr_counters();
        assert_eq!(
            riemann_roch_value(&n),
            Rational::from_integer(1),
            "{}",
            row.id
        );
        assert!(all.contains(&n), "{}", row.id);
    }
}

#[test]
fn orbit_sizes_add_up() {
    // each orbit of points with stabilizer of order d has |G|/d members
    let c = cat();
    for id in ["Y1", "Y2", "Y9", "Y11", "Z7"] {
        let a = c.row_action(id).unwrap();
        let (ctx, _) = context(&a);
        for p in analyze(&a).unwrap().points {
            assert_eq!(p.orbit_size * p.stabilizer.len(), ctx.order(), "{id}");
            assert_eq!(p.stabilizer.len() as u32, p.kind.order, "{id}");
        }
    }
}

#[test]
fn cqs_classification() {
    let c = classify_cqs(3, [1, 1, 1]).unwrap();
    assert!(c.canonical && !c.terminal && c.gorenstein);
    assert!(classify_cqs(3, [1, 1, 2]).unwrap().terminal);
    // age of the generator of 1/4(1,1,1) is 3/4
    assert_eq!(
        CqsType::new(4, [1, 1, 1]).unwrap().age(1),
        Rational::new(3, 4)
    );
    assert!(!classify_cqs(4, [1, 1, 1]).unwrap().canonical);
    assert!(!classify_cqs(5, [1, 1, 1]).unwrap().canonical);
    for (d, w) in [
        (2, [1, 1, 1]),
        (3, [1, 1, 2]),
        (7, [1, 2, 4]),
        (9, [1, 4, 7]),
        (14, [1, 9, 11]),
        (4, [1, 1, 3]),
    ] {
        let k = classify_cqs(d, w).unwrap();
        assert!(k.canonical, "{d} {w:?}");
        assert!(k.morrison_label.is_some(), "{d} {w:?}");
    }
    assert!(!classify_cqs(9, [1, 4, 7]).unwrap().terminal);
    assert!(matches!(
        classify_cqs(6, [1, 2, 3]),
        Err(SingularError::NotIsolated(..))
    ));
}

#[test]
fn type_normalization() {
    assert_eq!(CqsType::new(3, [2, 2, 2]).unwrap().weights, [1, 1, 1]);
    assert_eq!(CqsType::new(9, [7, 1, 4]).unwrap().weights, [1, 4, 7]);
    assert_eq!(CqsType::new(9, [2, 8, 5]).unwrap().weights, [1, 4, 7]);
    assert_eq!(CqsType::new(14, [3, 13, 5]).unwrap().weights, [1, 9, 11]);
}

#[test]
fn riemann_roch_table() {
    let got = riemann_roch_baskets();
    assert_eq!(got.len(), 15);
    assert_eq!(got, cat().riemann_roch);
    assert!(got.contains(&[9, 0, 0, 0, 0, 1]));
    assert!(got.contains(&[0, 9, 0, 0, 0, 0]));
    // 16/144 + 45/144 + 35/144 + 48/144
    assert_eq!(
        riemann_roch_value(&[0, 1, 2, 1, 1, 0]),
        Rational::from_integer(1)
    );
    assert_ne!(
        riemann_roch_value(&[1, 1, 1, 1, 1, 1]),
        Rational::from_integer(1)
    );
}

fn minus_identity_context() -> ActionContext {
    let group = GroupPresentation {
        name: "Z2".into(),
        generators: vec!["g".into()],
        relators: vec!["g^2".into()],
        order: 2,
        abelian_invariants: Some(vec![2]),
    };
    let minus = Cyclo::parse(3, "-1").unwrap();
    let m = Matrix::diagonal(&[minus.clone(), minus.clone(), minus]);
    ActionContext::new(
        &group,
        &AnalyticRep { matrices: vec![m] },
        &PeriodLattice::eisenstein_cube(),
    )
    .unwrap()
}

#[test]
fn lefschetz_minus_identity() {
    let ctx = minus_identity_context();
    let table = ctx.translation_table(&[vec![Rational::from_integer(0); 6]]);
    let r = lefschetz_check(&ctx, &table, 1).unwrap();
    assert_eq!((r.count_snf, r.count_formula, r.agree), (64, 64, true));
}

#[test]
fn lefschetz_cm_generators() {
    let c = cat();
    for (id, count) in [("Y1", 3), ("Y2", 1)] {
        let (ctx, table) = context(&c.row_action(id).unwrap());
        let g = ctx.generator_element(0);
        let r = lefschetz_check(&ctx, &table, g).unwrap();
        assert_eq!(
            (r.count_snf, r.count_formula, r.agree),
            (count, count, true),
            "{id}"
        );
    }
}

#[test]
fn lefschetz_agrees_everywhere() {
    let c = cat();
    for row in &c.rows {
        let (ctx, table) = context(&c.row_action(&row.id).unwrap());
        for e in 1..ctx.order() {
            if ctx.has_eigenvalue_one(e) {
                assert!(matches!(
                    lefschetz_check(&ctx, &table, e),
                    Err(SingularError::HasEigenvalueOne)
                ));
                continue;
            }
            let r = lefschetz_check(&ctx, &table, e).unwrap();
            assert!(r.agree, "{} element {e}: {r:?}", row.id);
        }
    }
}

#[test]
fn fixed_points_of_high_order_elements() {
    // elements of order 7, 9 or 14 never have eigenvalue 1
    let c = cat();
    for row in &c.rows {
        let (ctx, _) = context(&c.row_action(&row.id).unwrap());
        for e in 1..ctx.order() {
            if [7, 9, 14].contains(&ctx.linear.elements[e].order) {
                assert!(!ctx.has_eigenvalue_one(e), "{}", row.id);
            }
        }
    }
}

#[test]
fn burnside_examples() {
    let c = cat();
    for (id, m) in [("Y1", 9), ("Y2", 14), ("Y3", 3)] {
        let a = c.row_action(id).unwrap();
        let (ctx, table) = context(&a);
        let points = analyze(&a).unwrap().points;
        let r = burnside_check(&ctx, &table, &points, m).unwrap();
        assert!(r.holds, "{id}: {r:?}");
    }
    let a = c.row_action("Y1").unwrap();
    let (ctx, table) = context(&a);
    let points = analyze(&a).unwrap().points;
    let r = burnside_check(&ctx, &table, &points, 9).unwrap();
    // 3 orbits * 9 / 9 = 3 fixed points * 6 elements / phi(9)
    assert_eq!((r.orbits, r.lhs), (3, 3));
    assert_eq!(r.rhs, Rational::from_integer(3));
    // order 3 divides the order 9 of an element with fixed points
    assert!(matches!(
        burnside_check(&ctx, &table, &points, 3),
        Err(SingularError::Hypothesis(_))
    ));
}

#[test]
fn burnside_for_all_rows() {
    let c = cat();
    for row in &c.rows {
        let a = c.row_action(&row.id).unwrap();
        let (ctx, table) = context(&a);
        let points = analyze(&a).unwrap().points;
        for m in maximal_fixed_orders(&ctx) {
            assert!(
                burnside_check(&ctx, &table, &points, m).unwrap().holds,
                "{} m={m}",
                row.id
            );
        }
    }
}

#[test]
fn fundamental_groups() {
    let c = cat();
    let p = |id: &str| analyze(&c.row_action(id).unwrap()).unwrap().pi1_report;
    assert_eq!(p("Y1").pi1.as_deref(), Some("{1}"));
    assert_eq!(p("Y3").pi1.as_deref(), Some("Z3"));
    assert_eq!(p("Z7").pi1.as_deref(), Some("Z3^2"));
    for row in &c.rows {
        let r = p(&row.id);
        assert!(r.shortcut_applies, "{}", row.id);
        let (ctx, _) = context(&c.row_action(&row.id).unwrap());
        assert_eq!(
            r.pi1_order.unwrap() * r.gfix_order,
            ctx.order(),
            "{}",
            row.id
        );
    }
}

#[test]
fn universal_cover_of_y3_is_not_rigid() {
    let r = analyze(&cat().row_action("Y3").unwrap())
        .unwrap()
        .pi1_report;
    assert_eq!(r.gfix_order, 3);
    assert_eq!(r.cover_rigid, Some(false));
}

#[test]
fn abelian_formatting() {
    assert_eq!(format_abelian(&[]), "{1}");
    assert_eq!(format_abelian(&[3]), "Z3");
    assert_eq!(format_abelian(&[3, 3]), "Z3^2");
    assert_eq!(format_abelian(&[3, 9]), "Z9 x Z3");
}
