use std::collections::BTreeSet;

use torquot::action::{validate_action, ActionContext};
use torquot::catalog::Catalog;
use torquot::classify::normalizer::{conjugation_image, is_closed, normalizer};
use torquot::classify::*;
use torquot::exact::{reduce_mod1, Matrix};
use torquot::singular::quotient_invariants;
use torquot::torus::{cvec_parse, PeriodLattice, Semilinear};
use torquot::{Cyclo, CycloMat, IntMat, Rational};

fn cat() -> Catalog {
    Catalog::embedded().unwrap()
}

fn run(name: &str) -> CaseResult {
    classify_catalog_case(&cat(), name, ClassifyOptions::default()).unwrap()
}

fn c3(s: &str) -> Cyclo {
    Cyclo::parse(3, s).unwrap()
}

#[test]
fn class_counts() {
    for (name, biholo, diffeo) in [
        ("Z9", 1, 1),
        ("Z14", 1, 1),
        ("Z3^2-rho1", 5, 4),
        ("Z3^2-rho2", 2, 2),
        ("Z3^3", 3, 2),
        ("Z9:Z3", 1, 1),
        ("Z7-cy", 1, 1),
        ("Z3-cy", 1, 1),
        ("Z3^2-cy", 4, 4),
    ] {
        let r = run(name).report;
        assert_eq!(
            (r.biholomorphism_classes, r.diffeomorphism_classes),
            (biholo, diffeo),
            "{name}"
        );
    }
}

#[test]
fn reports_meet_catalog_expectations() {
    let c = cat();
    for case in &c.cases {
        let r = classify_catalog_case(&c, &case.name, ClassifyOptions::default()).unwrap();
        assert_eq!(
            r.report.check_expected(&case.expected),
            Vec::<String>::new(),
            "{}",
            case.name
        );
        for row in &r.report.rows {
            assert!(row.basket_matches && row.pi1_matches, "{}", row.row);
        }
    }
}

#[test]
fn z3_cubed_census() {
    let r = run("Z3^3").report;
    let census = |label: &str| {
        let k = r.kernel(label).unwrap();
        (k.actions, k.good_classes)
    };
    assert_eq!(census("0"), (16, 16));
    assert_eq!(census("<(t,t,0)>"), (48, 16));
    assert_eq!(census("<(t,t,t)>"), (0, 0));
    assert_eq!(census("<(0,t,-t), (t,0,-t)>"), (0, 0));
    assert_eq!(r.kernels.len(), 4);
    // one class on E^3 and two on the quotient by <(t,t,0)>
    let tori: Vec<&str> = r.classes.iter().map(|o| o.torus.as_str()).collect();
    assert_eq!(tori, ["0", "<(t,t,0)>", "<(t,t,0)>"]);
    assert_eq!(r.classes[1].diffeo_class_id, r.classes[2].diffeo_class_id);
}

#[test]
fn rho2_census() {
    let r = run("Z3^2-rho2").report;
    let k = r.kernel("<(t,t,t)>").unwrap();
    assert_eq!((k.good_classes, k.biholomorphism_classes), (6, 1));
    let labels: Vec<&str> = r.kernels.iter().map(|k| k.kernel.as_str()).collect();
    assert_eq!(labels, ["0", "<(t,t,t)>"]);
}

#[test]
fn z9_z3_has_two_actions() {
    let r = run("Z9:Z3").report;
    let k = r.kernel("0").unwrap();
    assert_eq!(
        (k.actions, k.good_classes, k.biholomorphism_classes),
        (2, 2, 1)
    );
}

#[test]
fn z3_cubed_normalizer_order() {
    let res = run("Z3^3");
    assert_eq!(res.normalizer.holomorphic_order, Some(1296));
    let elems: Vec<IntMat> = res
        .normalizer
        .elements
        .as_ref()
        .unwrap()
        .iter()
        .filter(|e| e.holomorphic)
        .map(|e| e.matrix.clone())
        .collect();
    assert_eq!(elems.len(), 1296);
    assert!(is_closed(&elems));
}

#[test]
fn monomial_normalizers_are_closed() {
    for name in ["Z3^2-rho1", "Z3^2-cy", "Z3^3"] {
        let res = run(name);
        let all: Vec<IntMat> = res
            .normalizer
            .elements
            .as_ref()
            .unwrap()
            .iter()
            .map(|e| e.matrix.clone())
            .collect();
        assert!(is_closed(&all), "{name}");
        assert_eq!(Some(all.len()), res.normalizer.full_order, "{name}");
    }
}

#[test]
fn closure_check_on_small_sets() {
    let id: IntMat = Matrix::identity(2);
    let minus = id.map(|x: &i64| -x);
    // rotation of order 3
    let r: IntMat = Matrix::from_rows(vec![vec![0, -1], vec![1, -1]]);
    let r2 = r.mul_mat(&r);
    assert!(is_closed(&[id.clone(), minus.clone()]));
    assert!(is_closed(&[r2.clone(), id.clone(), r.clone()]));
    assert!(!is_closed(&[id.clone(), r.clone()]));
    assert!(!is_closed(&[minus.clone(), r.clone(), r2.clone()]));
    assert!(!is_closed(&[]));
    // order 6 = <r, -1> minus one element
    let six: Vec<IntMat> = [&id, &r, &r2]
        .iter()
        .flat_map(|m| [(*m).clone(), m.map(|x: &i64| -x)])
        .collect();
    assert!(is_closed(&six));
    assert!(!is_closed(&six[..5]));
}

#[test]
fn kernel_preservation_filter() {
    let res = run("Z3^3");
    let k = Kernel::span(&[[1, 1, 0]]);
    let index = F3Index::default();
    let keep = res.normalizer.preserving(&k).unwrap();
    assert!(!keep.is_empty());
    assert!(keep
        .iter()
        .all(|e| k.image(&index, &e.matrix).as_ref() == Some(&k)));
}

#[test]
fn rho2_kernel_orbit_contains_t0t() {
    let c = cat();
    let case = c.case("Z3^2-rho2").unwrap();
    let ctx = ActionContext::new(&case.group, &case.rep, &case.base).unwrap();
    let n = normalizer(&case, &ctx).unwrap();
    let gens: Vec<IntMat> = n
        .generators(Mode::Biholo)
        .iter()
        .map(|e| e.matrix.clone())
        .collect();
    let orbit = orbit_from(&Kernel::span(&[[1, 1, 1]]), &gens).unwrap();
    assert_eq!(orbit.len(), 8);
    let k = Kernel::span(&[[1, 0, 1]]);
    assert!(orbit.contains(&k));
    // the transporter really carries (t,t,t) to the other kernel
    let u = &orbit.transporters[&k];
    assert_eq!(
        Kernel::span(&[[1, 1, 1]]).image(&F3Index::default(), u),
        Some(k)
    );
    // stabilizer generators fix the representative
    for s in &orbit.stabilizer {
        assert_eq!(
            orbit.representative.image(&F3Index::default(), s).as_ref(),
            Some(&orbit.representative)
        );
    }
}

#[test]
fn subspace_count() {
    let all = all_subspaces();
    assert_eq!(all.len(), 28);
    let dims: Vec<usize> = [0, 1, 2, 3]
        .iter()
        .map(|d| all.iter().filter(|k| k.dim() == *d).count())
        .collect();
    assert_eq!(dims, [1, 13, 13, 1]);
    let rho2: Vec<&Kernel> = all.iter().filter(|k| Forbidden::Rho2.allows(k)).collect();
    assert_eq!(rho2.len(), 9);
}

#[test]
fn cohomologous_to_itself() {
    let res = run("Z3^3");
    let d = &res.data[0];
    let a = &d.actions[0].gens;
    let shift = cohomologous(&d.ctx, a, a).unwrap();
    assert!(shift.iter().all(|x| *x.numer() == 0));
    // distinct standard cocycles on E^3 are never cohomologous
    for i in 0..d.actions.len() {
        for j in 0..i {
            assert!(cohomologous(&d.ctx, &d.actions[i].gens, &d.actions[j].gens).is_none());
        }
    }
}

#[test]
fn identity_fixes_cocycles() {
    let res = run("Z3^2-rho2");
    let d = &res.data[1];
    for a in &d.actions {
        let moved = act_on_cocycle(&d.ctx, &a.table, &d.ctx, &Matrix::identity(6)).unwrap();
        assert_eq!(moved, a.gens);
    }
}

#[test]
fn minus_identity_negates_cocycles() {
    let res = run("Z3^2-rho2");
    let d = &res.data[1];
    let minus: IntMat = Matrix::identity(6).map(|x: &i64| -x);
    for (i, a) in d.actions.iter().enumerate() {
        let moved = act_on_cocycle(&d.ctx, &a.table, &d.ctx, &minus).unwrap();
        let neg: Vec<Vec<Rational>> = a
            .gens
            .iter()
            .map(|v| reduce_mod1(&v.iter().map(|x| -x).collect::<Vec<_>>()))
            .collect();
        assert_eq!(moved, neg);
        // the transported standard cocycle is cohomologous to the negated one
        let t = transport(d, i, d, &minus).unwrap();
        assert!(cohomologous(&d.ctx, &d.actions[t.action].gens, &neg).is_some());
    }
}

#[test]
fn merges_carry_valid_witnesses() {
    for name in ["Z3^2-rho1", "Z3^2-rho2", "Z3^3", "Z9:Z3"] {
        let res = run(name);
        for m in res.biholo_merges.iter().chain(&res.diffeo_merges) {
            let (s, t) = (&res.data[m.source.0], &res.data[m.target.0]);
            let r = verify_in(
                &s.ctx,
                &s.actions[m.source.1].gens,
                &t.ctx,
                &t.actions[m.target.1].gens,
                &m.witness,
            );
            assert!(r.valid, "{name}: {r:?}");
            assert_eq!(r.holomorphic, m.holomorphic, "{name}");
        }
        assert!(res.biholo_merges.iter().all(|m| m.holomorphic), "{name}");
        let s = &res.report.biholomorphism_merges;
        assert_eq!(s.merges, s.verified, "{name}");
    }
}

#[test]
fn orbit_invariants_are_constant() {
    for name in ["Z3^2-rho1", "Z3^3"] {
        let res = run(name);
        for (k, d) in res.data.iter().enumerate() {
            for (i, a) in d.actions.iter().enumerate() {
                let class = res.biholo_label[res.global(k, i)];
                let q = quotient_invariants(&d.ctx, &a.table).unwrap();
                let o = &res.report.classes[class];
                assert_eq!(q.basket, o.basket, "{name}");
                assert_eq!(q.pi1, o.pi1, "{name}");
            }
        }
    }
}

fn partition_signature(
    r: &ClassificationReport,
) -> BTreeSet<(String, Vec<String>, Option<String>, usize, String)> {
    r.classes
        .iter()
        .map(|o| {
            (
                o.torus.clone(),
                o.basket.clone(),
                o.pi1.clone(),
                o.actions,
                o.h0.clone(),
            )
        })
        .collect()
}

#[test]
fn reverse_enumeration_gives_the_same_classification() {
    let c = cat();
    for case in &c.cases {
        let a = classify_catalog_case(&c, &case.name, ClassifyOptions { reverse: false })
            .unwrap()
            .report;
        let b = classify_catalog_case(&c, &case.name, ClassifyOptions { reverse: true })
            .unwrap()
            .report;
        assert_eq!(
            a.biholomorphism_classes, b.biholomorphism_classes,
            "{}",
            case.name
        );
        assert_eq!(
            a.diffeomorphism_classes, b.diffeomorphism_classes,
            "{}",
            case.name
        );
        assert_eq!(
            partition_signature(&a),
            partition_signature(&b),
            "{}",
            case.name
        );
        let counts = |r: &ClassificationReport| -> Vec<(String, usize, usize)> {
            r.kernels
                .iter()
                .map(|k| (k.kernel.clone(), k.actions, k.good_classes))
                .collect()
        };
        assert_eq!(counts(&a), counts(&b), "{}", case.name);
    }
}

#[test]
fn table_rows_pass() {
    let c = cat();
    for row in &c.rows {
        let r = check_row(&c, &row.id).unwrap();
        assert!(r.passed(), "{}: {:?}", row.id, r.problems);
    }
}

#[test]
fn corrupted_basket_is_reported() {
    let mut c = cat();
    let row = c.rows.iter_mut().find(|r| r.id == "Y11").unwrap();
    row.basket = vec!["3/(1,1,1)×3".into(), "9/(1,4,7)×3".into()];
    let r = check_row(&c, "Y11").unwrap();
    assert!(!r.passed());
    assert!(!r.basket_matches);
    assert!(r.pi1_matches);
}

#[test]
fn witnesses() {
    let c = cat();
    for w in &c.witnesses {
        let r = check_witness(&c, &w.name).unwrap();
        assert!(r.passed(), "{}: {:?}", w.name, r.report.diagnostic);
    }
    assert!(!check_witness(&c, "Y4-Y4'").unwrap().report.holomorphic);
    assert!(!check_witness(&c, "Y10-Y10'").unwrap().report.holomorphic);
}

#[test]
fn wrong_witness_fails() {
    let c = cat();
    let src = c.row_action("Y4").unwrap();
    let tgt = c.row_action("Y4'").unwrap();
    let id = Semilinear::linear(Matrix::diagonal(&[c3("1"), c3("1"), c3("1")]));
    // the identity does not carry one kernel lattice onto the other
    let r = EquivalenceWitness::from_semilinear(&src.lattice, &tgt.lattice, &id, None);
    assert!(r.is_err() || !verify_witness(&src, &tgt, &r.unwrap()).unwrap().valid);
}

#[test]
fn printed_y8_translation_breaks_commutator() {
    let c = cat();
    let mut a = c.row_action("Y8").unwrap();
    a.cocycle.translations[0] = cvec_parse(3, &["1/3".into(), "1/3".into(), "1/3".into()]).unwrap();
    let r = validate_action(&a);
    assert!(!r.passed());
    let failed: Vec<&str> = r
        .relators
        .iter()
        .filter(|x| !x.1)
        .map(|x| x.0.as_str())
        .collect();
    assert_eq!(failed, ["[h,k]"]);
    // with tau(k) = 0 the defect of [h,k] is (rho(k) - 1) tau(h) = ((z-1)/3, (z-1)/3, (z^2-1)/3)
    let third = c3("1/3");
    let defect = [
        &(&c3("z") - &c3("1")) * &third,
        &(&c3("z") - &c3("1")) * &third,
        &(&c3("z^2") - &c3("1")) * &third,
    ];
    assert!(!a.lattice.contains(&defect).unwrap());
}

#[test]
fn plain_conjugation_does_not_normalize_z9_z3() {
    let c = cat();
    let case = c.case("Z9:Z3").unwrap();
    let ctx = ActionContext::new(&case.group, &case.rep, &case.base).unwrap();
    let one: CycloMat = Matrix::diagonal(&[c3("1"), c3("1"), c3("1")]);
    let conj = Semilinear {
        matrix: one,
        conj: [true; 3],
    };
    let m = case.base.lattice_map(&case.base, &conj).unwrap();
    assert!(conjugation_image(&ctx, &m).is_none());
    let swap: CycloMat = Matrix::from_rows(vec![
        vec![c3("0"), c3("0"), c3("1")],
        vec![c3("0"), c3("1"), c3("0")],
        vec![c3("1"), c3("0"), c3("0")],
    ]);
    let fixed = Semilinear {
        matrix: swap,
        conj: [true; 3],
    };
    let m = case.base.lattice_map(&case.base, &fixed).unwrap();
    assert!(conjugation_image(&ctx, &m).is_some());
}

#[test]
fn report_json_round_trip() {
    let r = run("Z3^2-rho1").report;
    let s = serde_json::to_string(&r).unwrap();
    let back: ClassificationReport = serde_json::from_str(&s).unwrap();
    assert_eq!(back, r);
}

#[test]
fn unknown_case_is_rejected() {
    assert!(classify_catalog_case(&cat(), "Z5", ClassifyOptions::default()).is_err());
}

#[test]
fn eisenstein_base_is_used_for_kernels() {
    let c = cat();
    let case = c.case("Z3^3").unwrap();
    assert!(case.base_is_eisenstein);
    assert_eq!(case.base, PeriodLattice::eisenstein_cube());
}
