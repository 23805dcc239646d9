use torquot::action::*;
use torquot::catalog::Catalog;
use torquot::exact::Matrix;
use torquot::torus::{PeriodLattice, Semilinear};
use torquot::{ActionError, Cyclo, CycloMat, Rational};

fn cat() -> Catalog {
    Catalog::embedded().unwrap()
}

fn c3(s: &str) -> Cyclo {
    Cyclo::parse(3, s).unwrap()
}

fn diag3(d: [&str; 3]) -> CycloMat {
    Matrix::diagonal(&d.map(c3))
}

fn cyclic(n: usize) -> GroupPresentation {
    GroupPresentation {
        name: format!("Z{n}"),
        generators: vec!["g".into()],
        relators: vec![format!("g^{n}")],
        order: n,
        abelian_invariants: Some(vec![n as u32]),
    }
}

#[test]
fn closure_sizes() {
    let c = cat();
    assert_eq!(
        close_group(&c.row_action("Y11").unwrap(), 512)
            .unwrap()
            .len(),
        27
    );
    assert_eq!(
        close_group(&c.row_action("Z7").unwrap(), 512)
            .unwrap()
            .len(),
        27
    );
    let a = AffineAction {
        group: cyclic(3),
        rep: AnalyticRep {
            matrices: vec![diag3(["z", "z", "z"])],
        },
        lattice: PeriodLattice::eisenstein_cube(),
        cocycle: Cocycle {
            translations: vec![[c3("0"), c3("0"), c3("0")]],
        },
    };
    assert_eq!(close_group(&a, 512).unwrap().len(), 3);
}

#[test]
fn closure_bound() {
    let a = cat().row_action("Y11").unwrap();
    assert!(matches!(
        close_group(&a, 10),
        Err(ActionError::BoundExceeded(10))
    ));
}

#[test]
fn pure_translations_are_rejected() {
    // identity matrix with a nonzero translation: the linear part is not faithful
    let a = AffineAction {
        group: cyclic(3),
        rep: AnalyticRep {
            matrices: vec![diag3(["1", "1", "1"])],
        },
        lattice: PeriodLattice::eisenstein_cube(),
        cocycle: Cocycle {
            translations: vec![[c3("1/3+2/3*z"), c3("0"), c3("0")]],
        },
    };
    assert!(matches!(
        close_group(&a, 512),
        Err(ActionError::ContainsTranslations)
    ));
}

#[test]
fn catalog_rows_validate() {
    let c = cat();
    for row in &c.rows {
        let report = validate_action(&c.row_action(&row.id).unwrap());
        assert!(report.passed(), "{}: {report:?}", row.id);
    }
}

/// `(rho(k) - 1) tau(h) - (rho(h) - 1) tau(k)` for diagonal `rho`: zero on the torus iff `hk = kh` holds.
fn commutator_defect(rh: [&str; 3], rk: [&str; 3], th: [&str; 3], tk: [&str; 3]) -> [Cyclo; 3] {
    let one = c3("1");
    [0, 1, 2].map(|i| {
        let a = &(&c3(rk[i]) - &one) * &c3(th[i]);
        let b = &(&c3(rh[i]) - &one) * &c3(tk[i]);
        &a - &b
    })
}

#[test]
fn relator_failure_is_detected() {
    let c = cat();
    let mut a = c.row_action("Y3").unwrap();
    // tau(h) = (1/3, 0, 0) with tau(k) = 0
    a.cocycle.translations[0] = [c3("1/3"), c3("0"), c3("0")];
    let defect = commutator_defect(
        ["1", "z^2", "z^2"],
        ["z", "z", "z^2"],
        ["1/3", "0", "0"],
        ["0", "0", "0"],
    );
    assert!(!a.lattice.contains(&defect).unwrap());
    let report = validate_action(&a);
    assert!(!report.passed());
    let failed: Vec<&str> = report
        .relators
        .iter()
        .filter(|r| !r.1)
        .map(|r| r.0.as_str())
        .collect();
    assert_eq!(failed, ["[h,k]"]);
}

#[test]
fn translation_along_fixed_axis_is_well_defined() {
    // tau(h) = (t,0,0) commutes with k: (z - 1) t = -1 - z lies in Z[z]
    let c = cat();
    let mut a = c.row_action("Y3").unwrap();
    a.cocycle.translations[0] = [c3("1/3+2/3*z"), c3("0"), c3("0")];
    let defect = commutator_defect(
        ["1", "z^2", "z^2"],
        ["z", "z", "z^2"],
        ["1/3+2/3*z", "0", "0"],
        ["0", "0", "0"],
    );
    assert!(a.lattice.contains(&defect).unwrap());
    assert!(validate_action(&a).passed());
}

#[test]
fn zero_cocycle_validates() {
    let mut a = cat().row_action("Y9").unwrap();
    let zero = [c3("0"), c3("0"), c3("0")];
    a.cocycle.translations = vec![zero.clone(), zero.clone(), zero];
    assert!(validate_action(&a).passed());
}

#[test]
fn generator_count_mismatch_is_reported() {
    let mut a = cat().row_action("Y9").unwrap();
    a.cocycle.translations.pop();
    assert!(!validate_action(&a).passed());
}

#[test]
fn non_lattice_map_is_reported() {
    let mut a = cat().row_action("Y3").unwrap();
    a.rep.matrices[0] = diag3(["2", "1", "1"]);
    let r = validate_action(&a);
    assert!(!r.passed());
    assert_eq!(r.lattice_preserving[0], ("h".to_string(), false));
}

#[test]
fn character_invariants_of_catalog_reps() {
    let c = cat();
    let z9 = character_invariants(&c.rep("Z9").unwrap().matrices).unwrap();
    let zero = Rational::from_integer(0);
    assert_eq!((z9.q1, z9.q2, z9.pg), (zero, zero, zero));
    assert!(z9.rigid);
    let cy = character_invariants(&c.rep("Z3-cy").unwrap().matrices).unwrap();
    assert_eq!(cy.pg, Rational::from_integer(1));
    assert!(cy.rigid);
    for row in &c.rows {
        let inv = character_invariants(&c.rep(&row.rep).unwrap().matrices).unwrap();
        assert!(inv.rigid, "{}", row.id);
        assert_eq!(inv.pg, Rational::from_integer(row.pg), "{}", row.id);
        assert_eq!(inv.q1, zero);
        assert_eq!(inv.q2, zero);
    }
}

#[test]
fn universal_cover_representation_is_not_rigid() {
    let inv = character_invariants(&[diag3(["z", "z", "z^2"])]).unwrap();
    assert!(!inv.rigid);
    // chi(g)^2 = 4 + z + 4z^2, chi(g^2)^2 = 4 + 4z + z^2, chi(1)^2 = 9: (17 + 5z + 5z^2) / 3 = 4
    assert_eq!(inv.rigidity_pairing, Rational::from_integer(4));
}

#[test]
fn rigidity_is_stable_under_conjugation() {
    let c = cat();
    let p: CycloMat = Matrix::from_rows(vec![
        vec![c3("1"), c3("z"), c3("0")],
        vec![c3("0"), c3("1"), c3("2")],
        vec![c3("1"), c3("0"), c3("1")],
    ]);
    let pinv = p.inverse().unwrap();
    for name in ["rho1", "rho2", "Z3^3", "He3", "Z9:Z3"] {
        let gens = c.rep(name).unwrap().matrices;
        let twisted: Vec<CycloMat> = gens.iter().map(|m| pinv.mul_mat(m).mul_mat(&p)).collect();
        let a = character_invariants(&gens).unwrap();
        let b = character_invariants(&twisted).unwrap();
        assert_eq!(a, b, "{name}");
    }
}

#[test]
fn goodness_of_catalog_actions() {
    let c = cat();
    let y1 = c.row_action("Y1").unwrap().is_good().unwrap();
    assert!(y1.good);
    assert_eq!(y1.count(|s| matches!(s, ElementStatus::Isolated(_))), 8);
    assert!(c.row_action("Y9").unwrap().is_good().unwrap().good);
    for row in &c.rows {
        assert!(
            c.row_action(&row.id).unwrap().is_good().unwrap().good,
            "{}",
            row.id
        );
    }
}

#[test]
fn zero_cocycle_on_z3_cubed_is_bad() {
    let mut a = cat().row_action("Y9").unwrap();
    let zero = [c3("0"), c3("0"), c3("0")];
    a.cocycle.translations = vec![zero.clone(), zero.clone(), zero];
    let g = a.is_good().unwrap();
    assert!(!g.good);
    // h = diag(1, z^2, z) fixes the curve z2 = z3 = 0
    let h = g.elements.iter().find(|(w, _)| w == "h").unwrap();
    assert_eq!(h.1, ElementStatus::Bad);
}

#[test]
fn lattice_preservation_of_semilinear_maps() {
    let e = PeriodLattice::eisenstein_cube();
    assert!(e
        .lattice_map(&e, &Semilinear::linear(diag3(["z", "1", "-1"])))
        .is_ok());
    assert!(e
        .lattice_map(&e, &Semilinear::linear(diag3(["1/3+2/3*z", "1", "1"])))
        .is_err());
}

#[test]
fn standard_conditions_on_named_groups() {
    let c = cat();
    let z3z9 = standard_conditions(&c.group("Z3xZ9").unwrap().presentation, None).unwrap();
    assert!(!z3z9.holds());
    let z55 = standard_conditions(&c.group("Z5^2").unwrap().presentation, None).unwrap();
    assert!(!z55.holds());
    let reps = c.group_reps("Z9:Z3").unwrap();
    let nonab = standard_conditions(&c.group("Z9:Z3").unwrap().presentation, Some(&reps)).unwrap();
    assert!(nonab.holds());
    for g in ["Z9", "Z14", "Z3^2", "Z3^3"] {
        assert!(
            standard_conditions(&c.group(g).unwrap().presentation, None)
                .unwrap()
                .holds(),
            "{g}"
        );
    }
}

#[test]
fn nonabelian_groups_need_rep_data() {
    let c = cat();
    let he = &c.group("He3").unwrap().presentation;
    assert!(matches!(
        standard_conditions(he, None),
        Err(ActionError::RepDataRequired(_))
    ));
    assert!(matches!(
        standard_conditions(he, Some(&[])),
        Err(ActionError::RepDataRequired(_))
    ));
}

#[test]
fn word_round_trip() {
    let gens = vec!["g".to_string(), "h".to_string()];
    for s in ["g^9", "h*g*h^-1*g^-4", "[g,[g,h]]"] {
        let w = parse_word(s, &gens).unwrap();
        let back = parse_word(&format_word(&w, &gens), &gens).unwrap();
        assert_eq!(w, back, "{s}");
    }
    assert!(matches!(
        parse_word("x^2", &gens),
        Err(ActionError::UnknownGenerator(_))
    ));
}
