//! End-to-end acceptance run. Prints one line per criterion and exits
//! nonzero if any of them fails.

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::thread;

use num_traits::Zero;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use torquot::action::character_invariants;
use torquot::catalog::Catalog;
use torquot::classify::*;
use torquot::exact::{Cyclotomic, Matrix};
use torquot::singular::*;
use torquot::toric::*;
use torquot::{Cyclo, CycloMat, Rational};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

const TABLE2: [&str; 6] = ["Z9", "Z14", "Z3^2-rho1", "Z3^2-rho2", "Z3^3", "Z9:Z3"];
const TABLE1: [&str; 3] = ["Z7-cy", "Z3-cy", "Z3^2-cy"];

struct Runs {
    forward: BTreeMap<String, CaseResult>,
    reverse: BTreeMap<String, ClassificationReport>,
}

fn classify_everything(cat: &Catalog) -> Result<Runs, String> {
    let names: Vec<String> = cat.cases.iter().map(|c| c.name.clone()).collect();
    let (fwd, rev) = thread::scope(|s| {
        let fwd: Vec<_> = names
            .iter()
            .map(|n| {
                s.spawn(move || classify_catalog_case(cat, n, ClassifyOptions { reverse: false }))
            })
            .collect();
        let rev: Vec<_> = names
            .iter()
            .map(|n| {
                s.spawn(move || {
                    classify_catalog_case(cat, n, ClassifyOptions { reverse: true })
                        .map(|r| r.report)
                })
            })
            .collect();
        (
            fwd.into_iter()
                .map(|h| h.join().expect("classification thread"))
                .collect::<Vec<_>>(),
            rev.into_iter()
                .map(|h| h.join().expect("classification thread"))
                .collect::<Vec<_>>(),
        )
    });
    let mut runs = Runs {
        forward: BTreeMap::new(),
        reverse: BTreeMap::new(),
    };
    for (n, (f, r)) in names.iter().zip(fwd.into_iter().zip(rev)) {
        runs.forward
            .insert(n.clone(), f.map_err(|e| format!("{n}: {e}"))?);
        runs.reverse
            .insert(n.clone(), r.map_err(|e| format!("{n}: {e}"))?);
    }
    Ok(runs)
}

fn table2(cat: &Catalog, runs: &Runs) -> Outcome {
    let mut counts = Vec::new();
    let (mut biholo, mut diffeo) = (0, 0);
    for name in TABLE2 {
        let r = &runs.forward[name].report;
        let case = cat.case_entry(name).map_err(|e| e.to_string())?;
        let problems = r.check_expected(&case.expected);
        ensure(problems.is_empty(), format!("{name}: {problems:?}"))?;
        for m in &r.rows {
            ensure(
                m.basket_matches && m.pi1_matches,
                format!("row {} differs from the table", m.row),
            )?;
        }
        counts.push(format!("{name}:{}", r.biholomorphism_classes));
        biholo += r.biholomorphism_classes;
        diffeo += r.diffeomorphism_classes;
    }
    for row in cat.rows.iter().filter(|r| r.table == 2) {
        let c = check_row(cat, &row.id).map_err(|e| e.to_string())?;
        ensure(c.passed(), format!("{}: {:?}", row.id, c.problems))?;
    }
    ensure(biholo == 13, format!("{biholo} biholomorphism classes"))?;
    ensure(diffeo == 11, format!("{diffeo} diffeomorphism classes"))?;
    // rows sharing a diffeomorphism class but not a biholomorphism class
    let mut merged = BTreeSet::new();
    for name in TABLE2 {
        let rows = &runs.forward[name].report.rows;
        for a in rows {
            for b in rows {
                if a.row < b.row
                    && a.diffeo_class_id == b.diffeo_class_id
                    && a.biholomorphism_class != b.biholomorphism_class
                {
                    merged.insert((a.row.clone(), b.row.clone()));
                }
            }
        }
    }
    let want: BTreeSet<(String, String)> = [("Y10", "Y10'"), ("Y4", "Y4'")]
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
    ensure(merged == want, format!("diffeomorphic pairs {merged:?}"))?;
    Ok(format!(
        "13 classes ({}), 11 up to diffeomorphism, merged Y4~Y4' and Y10~Y10'",
        counts.join(" ")
    ))
}

fn table1(cat: &Catalog, runs: &Runs) -> Outcome {
    let rows: Vec<_> = cat.rows.iter().filter(|r| r.table == 1).collect();
    ensure(rows.len() == 8, format!("{} rows", rows.len()))?;
    for row in &rows {
        let c = check_row(cat, &row.id).map_err(|e| e.to_string())?;
        ensure(c.passed(), format!("{}: {:?}", row.id, c.problems))?;
        ensure(c.pg == "1", format!("{}: p_g = {}", row.id, c.pg))?;
    }
    for name in TABLE1 {
        let r = &runs.forward[name].report;
        let case = cat.case_entry(name).map_err(|e| e.to_string())?;
        let problems = r.check_expected(&case.expected);
        ensure(problems.is_empty(), format!("{name}: {problems:?}"))?;
    }
    let he3 = rows.iter().filter(|r| r.group == "He3").count();
    Ok(format!(
        "8 rows verified ({he3} He3 rows by verification only), abelian cases reclassified"
    ))
}

fn census(runs: &Runs) -> Outcome {
    let r = &runs.forward["Z3^3"].report;
    let got: BTreeMap<&str, (usize, usize)> = r
        .kernels
        .iter()
        .map(|k| (k.kernel.as_str(), (k.actions, k.good_classes)))
        .collect();
    let want: BTreeMap<&str, (usize, usize)> = [
        ("0", (16, 16)),
        ("<(t,t,0)>", (48, 16)),
        ("<(t,t,t)>", (0, 0)),
        ("<(0,t,-t), (t,0,-t)>", (0, 0)),
    ]
    .into();
    ensure(got == want, format!("Z3^3 census {got:?}"))?;
    let k = runs.forward["Z3^2-rho2"]
        .report
        .kernel("<(t,t,t)>")
        .ok_or("rho2 has no <(t,t,t)> kernel")?
        .clone();
    ensure(
        (k.good_classes, k.biholomorphism_classes) == (6, 1),
        format!("rho2 census {k:?}"),
    )?;
    Ok("Z3^3 (16,16) (48,16) (0,0) (0,0); rho2 on E^3/<(t,t,t)>: 6 good classes, 1 orbit".into())
}

fn normalizer_order(runs: &Runs) -> Outcome {
    let n = &runs.forward["Z3^3"].normalizer;
    ensure(
        n.holomorphic_order == Some(1296),
        format!("order {:?}", n.holomorphic_order),
    )?;
    Ok("holomorphic normalizer of Z3^3 has order 1296".into())
}

fn riemann_roch(cat: &Catalog) -> Outcome {
    let got = riemann_roch_baskets();
    ensure(got.len() == 15, format!("{} vectors", got.len()))?;
    ensure(
        got == cat.riemann_roch,
        "vectors differ from the reference list",
    )?;
    for n in &got {
        ensure(
            riemann_roch_value(n) == Rational::from_integer(1),
            format!("{n:?} is not a solution"),
        )?;
    }
    Ok("exactly 15 basket vectors".into())
}

fn fixed_point_formulas(cat: &Catalog) -> Outcome {
    let (mut checked, mut orders) = (0, BTreeSet::new());
    for row in &cat.rows {
        let a = cat.row_action(&row.id).map_err(|e| e.to_string())?;
        let ctx = a.context().map_err(|e| e.to_string())?;
        let coords = a.cocycle.coords(&a.lattice).map_err(|e| e.to_string())?;
        let table = ctx.translation_table(&coords);
        for e in (1..ctx.order()).filter(|&e| !ctx.has_eigenvalue_one(e)) {
            let r = lefschetz_check(&ctx, &table, e).map_err(|e| e.to_string())?;
            ensure(r.agree, format!("{} element {e}: {r:?}", row.id))?;
            checked += 1;
        }
        let points = analyze(&a).map_err(|e| e.to_string())?.points;
        for m in maximal_fixed_orders(&ctx) {
            let r = burnside_check(&ctx, &table, &points, m).map_err(|e| e.to_string())?;
            ensure(r.holds, format!("{} m={m}: {r:?}", row.id))?;
            orders.insert(m);
        }
    }
    for m in [3, 7, 9, 14] {
        ensure(orders.contains(&m), format!("order {m} never checked"))?;
    }
    Ok(format!(
        "{checked} Lefschetz counts agree, Burnside holds for orders {orders:?}"
    ))
}

fn toric() -> Outcome {
    let s1 = terminalize(9, [1, 4, 7]).map_err(|e| e.to_string())?;
    let s2 = terminalize(14, [1, 9, 11]).map_err(|e| e.to_string())?;
    let names = |t: &Terminalization| {
        t.cone_types
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
    };
    ensure(
        names(&s1) == vec!["(3; 1,1,2)"; 3],
        format!("Sigma1 {:?}", names(&s1)),
    )?;
    ensure(
        names(&s2) == vec!["(2; 1,1,1)"; 7],
        format!("Sigma2 {:?}", names(&s2)),
    )?;
    ensure(s1.crepant && s2.crepant, "not crepant")?;
    ensure(
        s1.pushforward == [true; 3] && s2.pushforward == [true; 3],
        "pushforward",
    )?;
    let fan = &s2.fan;
    let d1 = prime_divisor(fan, 0);
    let c = cartier_data(fan, &d1).map_err(|e| e.to_string())?;
    ensure(c.index == 2, format!("index {}", c.index))?;
    let ints = |v: [i64; 3]| v.map(Rational::from_integer).to_vec();
    for (k, m) in c.m.iter().enumerate() {
        let want = match fan.cone_name(k).as_str() {
            "cone(e1,v2,e3)" => ints([-2, 8, 0]),
            "cone(e1,e2,v3)" | "cone(e1,v3,v2)" => ints([-2, 0, 4]),
            _ => ints([0, 0, 0]),
        };
        ensure(*m == want, format!("{}: {m:?}", fan.cone_name(k)))?;
    }
    for i in 0..fan.rays.len() {
        let r = h1_vanishes(fan, &prime_divisor(fan, i)).map_err(|e| e.to_string())?;
        ensure(r.vanishes, format!("H^1 for {}", fan.rays[i].name))?;
    }
    for (d, w) in [(3, [1, 1, 1]), (7, [1, 2, 4])] {
        let t = terminalize(d, w).map_err(|e| e.to_string())?;
        ensure(t.smooth && t.crepant, t.target.to_string())?;
        ensure(
            is_crepant_subdivision(&t.fan).map_err(|e| e.to_string())?,
            t.target.to_string(),
        )?;
    }
    Ok("Sigma1 3x(3;1,1,2), Sigma2 7x(2;1,1,1), Cartier data, pushforward, H^1, smooth resolutions".into())
}

fn witnesses(cat: &Catalog) -> Outcome {
    let want = ["Y4-Y4'", "Y10-Y10'", "Z3-Y3", "Z4-Y4", "Z5-Y5", "Z6-Y6"];
    for name in want {
        let w = check_witness(cat, name).map_err(|e| e.to_string())?;
        ensure(w.passed(), format!("{name}: {:?}", w.report.diagnostic))?;
    }
    for name in &want[..2] {
        let w = check_witness(cat, name).map_err(|e| e.to_string())?;
        ensure(
            !w.report.holomorphic,
            format!("{name} reported holomorphic"),
        )?;
    }
    Ok(format!(
        "{} witnesses verified, first two non-holomorphic",
        want.len()
    ))
}

fn small_eisenstein() -> impl Strategy<Value = Cyclo> {
    (-2i64..3, -2i64..3).prop_map(|(a, b)| {
        Cyclotomic::from_poly(
            3,
            vec![Rational::from_integer(a), Rational::from_integer(b)],
        )
    })
}

fn invertible_matrix() -> impl Strategy<Value = CycloMat> {
    prop::collection::vec(small_eisenstein(), 9)
        .prop_map(|v| Matrix::from_rows(v.chunks(3).map(|r| r.to_vec()).collect()))
        .prop_filter("singular", |m: &CycloMat| !m.det().is_zero())
}

/// Random Nielsen moves: `g_i -> g_i g_j` or `g_i -> g_i^-1`.
fn nielsen(gens: &[CycloMat], moves: &[(usize, usize, bool)]) -> Vec<CycloMat> {
    let mut g = gens.to_vec();
    let n = g.len();
    for &(i, j, invert) in moves {
        let (i, j) = (i % n, j % n);
        if invert || i == j {
            g[i] = g[i].inverse().expect("invertible generator");
        } else {
            g[i] = g[i].mul_mat(&g[j]);
        }
    }
    g
}

fn invariant_suite(cat: &Catalog, runs: &Runs) -> Outcome {
    let config = Config {
        cases: 48,
        failure_persistence: None,
        ..Config::default()
    };

    // invariants along normalizer orbits
    let mut runner = TestRunner::new(config.clone());
    let cases: Vec<&str> = ["Z3^2-rho1", "Z3^3", "Z3^2-cy"].into();
    runner
        .run(
            &(
                0..cases.len(),
                any::<prop::sample::Index>(),
                any::<prop::sample::Index>(),
                any::<prop::sample::Index>(),
            ),
            |(c, k, a, e)| {
                let res = &runs.forward[cases[c]];
                let ki = k.index(res.data.len());
                let d = &res.data[ki];
                prop_assume!(!d.actions.is_empty());
                let elems: Vec<_> = match &d.kernel {
                    Some(kern) => res.normalizer.preserving(kern).unwrap_or_default(),
                    None => res
                        .normalizer
                        .elements
                        .iter()
                        .flatten()
                        .filter(|x| x.holomorphic)
                        .collect(),
                };
                prop_assume!(!elems.is_empty());
                let i = a.index(d.actions.len());
                let g = elems[e.index(elems.len())];
                let t = transport(d, i, d, &g.matrix)
                    .map_err(|e| TestCaseError::fail(e.to_string()))?;
                let q = |j: usize| quotient_invariants(&d.ctx, &d.actions[j].table).unwrap();
                let (p, r) = (q(i), q(t.action));
                prop_assert_eq!(&p.basket, &r.basket);
                prop_assert_eq!(&p.pi1, &r.pi1);
                prop_assert_eq!(
                    res.biholo_label[res.global(ki, i)],
                    res.biholo_label[res.global(ki, t.action)]
                );
                Ok(())
            },
        )
        .map_err(|e| format!("orbit invariants: {e}"))?;

    // enumeration order
    for (name, fwd) in &runs.forward {
        let (a, b) = (&fwd.report, &runs.reverse[name]);
        let sig = |r: &ClassificationReport| -> BTreeSet<_> {
            r.classes
                .iter()
                .map(|o| (o.torus.clone(), o.basket.clone(), o.pi1.clone(), o.actions))
                .collect()
        };
        ensure(
            a.biholomorphism_classes == b.biholomorphism_classes
                && a.diffeomorphism_classes == b.diffeomorphism_classes
                && sig(a) == sig(b),
            format!("{name} depends on enumeration order"),
        )?;
    }

    // rigidity under change of basis and of generators
    let mut runner = TestRunner::new(config);
    let reps = ["rho1", "rho2", "Z3^3", "He3", "Z9:Z3", "Z3-cy", "Z3^2-cy"];
    let moves = prop::collection::vec((0usize..3, 0usize..3, any::<bool>()), 0..5);
    runner
        .run(
            &(0..reps.len(), invertible_matrix(), moves),
            |(r, p, mv)| {
                let gens = cat.rep(reps[r]).unwrap().matrices;
                let base = character_invariants(&gens).unwrap();
                let pinv = p.inverse().unwrap();
                let conj: Vec<CycloMat> =
                    gens.iter().map(|m| pinv.mul_mat(m).mul_mat(&p)).collect();
                let twisted = nielsen(&conj, &mv);
                let other = character_invariants(&twisted).unwrap();
                prop_assert_eq!(&base, &other);
                // the complex conjugate representation has the same rigidity
                let bar: Vec<CycloMat> = gens.iter().map(|m| m.map(|x| x.conj())).collect();
                prop_assert_eq!(character_invariants(&bar).unwrap().rigid, base.rigid);
                Ok(())
            },
        )
        .map_err(|e| format!("rigidity: {e}"))?;

    let z = |s: &str| Cyclo::parse(3, s).unwrap();
    let cover = character_invariants(&[Matrix::diagonal(&[z("z"), z("z"), z("z^2")])])
        .map_err(|e| e.to_string())?;
    ensure(!cover.rigid, "diag(z,z,z^2) reported rigid")?;
    Ok("orbit invariants, order independence, rigidity twists, cover not rigid".into())
}

fn main() -> ExitCode {
    let cat = match Catalog::embedded() {
        Ok(c) => c,
        Err(e) => {
            println!("catalog failed to load: {e}");
            return ExitCode::FAILURE;
        }
    };
    let runs = classify_everything(&cat);
    let need_runs = |f: &dyn Fn(&Runs) -> Outcome| match &runs {
        Ok(r) => f(r),
        Err(e) => Err(format!("classification failed: {e}")),
    };
    let results: Vec<(&str, Outcome)> = vec![
        ("table 2 reproduction", need_runs(&|r| table2(&cat, r))),
        ("table 1 verification", need_runs(&|r| table1(&cat, r))),
        ("cocycle census", need_runs(&census)),
        ("normalizer order", need_runs(&normalizer_order)),
        ("Riemann-Roch baskets", riemann_roch(&cat)),
        ("Lefschetz and Burnside", fixed_point_formulas(&cat)),
        ("toric certificates", toric()),
        ("witness verification", witnesses(&cat)),
        ("invariant suite", need_runs(&|r| invariant_suite(&cat, r))),
    ];
    let mut failed = 0;
    for (i, (name, r)) in results.iter().enumerate() {
        match r {
            Ok(detail) => println!("criterion {} [{name}]: PASS ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} [{name}]: FAIL ({why})", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        results.len() - failed,
        results.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
