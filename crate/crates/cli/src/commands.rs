use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::thread;

use serde_json::{json, Value};
use thiserror::Error;
use torquot::action::ActionContext;
use torquot::catalog::Catalog;
use torquot::classify::{
    check_row, check_witness, classify_catalog_case, normalizer as compute_normalizer, CaseResult,
    ClassificationReport, ClassifyOptions,
};
use torquot::singular::{quotient_invariants, riemann_roch_baskets, Pi1Report};
use torquot::toric::{cartier_data, prime_divisor, terminalize, Terminalization};
use torquot::{ClassifyError, ToricError};

use crate::ModeArg;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("soundness check failed: {0}")]
    Soundness(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 64,
            CliError::Soundness(_) | CliError::Internal(_) => 2,
        }
    }
}

impl From<ClassifyError> for CliError {
    fn from(e: ClassifyError) -> Self {
        match e {
            ClassifyError::UnknownCase(_) => CliError::Usage(e.to_string()),
            ClassifyError::InvariantMismatch(_) => CliError::Soundness(e.to_string()),
            other => CliError::Internal(other.to_string()),
        }
    }
}

/// Rendered result of a command. `code` is the exit status on success.
pub struct Output {
    pub text: String,
    pub json: Value,
    pub code: u8,
}

fn to_json<T: serde::Serialize>(v: &T) -> Result<Value, CliError> {
    serde_json::to_value(v).map_err(|e| CliError::Internal(e.to_string()))
}

pub fn load_catalog() -> Result<Catalog, CliError> {
    Catalog::load().map_err(|e| CliError::Usage(format!("cannot load catalog: {e}")))
}

/// Case names to run, checked against the catalog before any computation.
pub fn select(cat: &Catalog, case: Option<&str>, all: bool) -> Result<Vec<String>, CliError> {
    if all {
        return Ok(cat.cases.iter().map(|c| c.name.clone()).collect());
    }
    let name = case.ok_or_else(|| CliError::Usage("give --case NAME or --all".into()))?;
    if cat.case_entry(name).is_err() {
        let known: Vec<&str> = cat.cases.iter().map(|c| c.name.as_str()).collect();
        return Err(CliError::Usage(format!(
            "unknown case '{name}' (known: {})",
            known.join(", ")
        )));
    }
    Ok(vec![name.to_string()])
}

/// Classifies the named cases concurrently; results come back in input order.
fn run_cases(cat: &Catalog, names: &[String]) -> Result<Vec<CaseResult>, CliError> {
    let results: Vec<Result<CaseResult, ClassifyError>> = thread::scope(|s| {
        let handles: Vec<_> = names
            .iter()
            .map(|n| s.spawn(move || classify_catalog_case(cat, n, ClassifyOptions::default())))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("classification thread panicked"))
            .collect()
    });
    results
        .into_iter()
        .map(|r| r.map_err(CliError::from))
        .collect()
}

fn plural(n: usize, word: &str) -> String {
    if n == 1 {
        format!("{n} {word}")
    } else {
        format!("{n} {word}es")
    }
}

fn rows_of(r: &ClassificationReport, class: usize) -> Vec<&str> {
    r.rows
        .iter()
        .filter(|m| m.biholomorphism_class == class)
        .map(|m| m.row.as_str())
        .collect()
}

fn class_line(r: &ClassificationReport, i: usize) -> String {
    let o = &r.classes[i];
    let rows = rows_of(r, i);
    let mut s = format!(
        "#{} torus {}  basket {}  pi1 {}  p_g {}",
        o.id,
        o.torus,
        o.basket.join(" + "),
        o.pi1.as_deref().unwrap_or("?"),
        o.pg
    );
    if !rows.is_empty() {
        let _ = write!(s, "  rows {}", rows.join(" "));
    }
    s
}

fn render_report(r: &ClassificationReport, table: u8, mode: ModeArg, out: &mut String) {
    let n = &r.normalizer;
    let _ = writeln!(out, "case {} (group {}, table {table})", r.case, r.group);
    let order = |o: Option<usize>| o.map_or("not enumerated".to_string(), |x| x.to_string());
    let _ = writeln!(
        out,
        "  normalizer: {}, holomorphic order {}, full order {}",
        n.source,
        order(n.holomorphic_order),
        order(n.full_order)
    );
    for k in &r.kernels {
        let _ = writeln!(
            out,
            "  kernel {}: {} actions, {} good classes, {}",
            k.kernel,
            k.actions,
            k.good_classes,
            plural(k.biholomorphism_classes, "biholomorphism class")
        );
    }
    match mode {
        ModeArg::Biholo => {
            let _ = writeln!(
                out,
                "  {}",
                plural(r.biholomorphism_classes, "biholomorphism class")
            );
            for i in 0..r.classes.len() {
                let _ = writeln!(out, "    {}", class_line(r, i));
            }
        }
        ModeArg::Diffeo => {
            let _ = writeln!(
                out,
                "  {}",
                plural(r.diffeomorphism_classes, "diffeomorphism class")
            );
            let ids: BTreeSet<usize> = r.classes.iter().map(|o| o.diffeo_class_id).collect();
            for d in ids {
                let members: Vec<usize> = (0..r.classes.len())
                    .filter(|&i| r.classes[i].diffeo_class_id == d)
                    .collect();
                let _ = writeln!(out, "    D{d}:");
                for i in members {
                    let _ = writeln!(out, "      {}", class_line(r, i));
                }
            }
        }
    }
    let m = match mode {
        ModeArg::Biholo => &r.biholomorphism_merges,
        ModeArg::Diffeo => &r.diffeomorphism_merges,
    };
    let _ = writeln!(
        out,
        "  merges: {} found, {} verified, {} non-holomorphic",
        m.merges, m.verified, m.non_holomorphic
    );
    for f in &r.flags {
        let _ = writeln!(out, "  note: {f}");
    }
}

pub fn classify(cat: &Catalog, names: &[String], mode: ModeArg) -> Result<Output, CliError> {
    let results = run_cases(cat, names)?;
    let mut text = String::new();
    let mut totals: Vec<(u8, usize, usize)> = Vec::new();
    let mut reports = Vec::new();
    for res in &results {
        let r = &res.report;
        let table = cat.case_entry(&r.case).map(|c| c.table).unwrap_or(0);
        render_report(r, table, mode, &mut text);
        text.push('\n');
        match totals.iter_mut().find(|t| t.0 == table) {
            Some(t) => {
                t.1 += r.biholomorphism_classes;
                t.2 += r.diffeomorphism_classes;
            }
            None => totals.push((table, r.biholomorphism_classes, r.diffeomorphism_classes)),
        }
        reports.push(to_json(r)?);
    }
    totals.sort();
    if results.len() > 1 {
        for (table, b, d) in &totals {
            let _ = writeln!(
                text,
                "table {table}: {}, {}",
                plural(*b, "biholomorphism class"),
                plural(*d, "diffeomorphism class")
            );
        }
    }
    let mode_name = match mode {
        ModeArg::Biholo => "biholo",
        ModeArg::Diffeo => "diffeo",
    };
    let totals: Vec<Value> = totals
        .iter()
        .map(|(t, b, d)| json!({"table": t, "biholomorphism_classes": b, "diffeomorphism_classes": d}))
        .collect();
    Ok(Output {
        text,
        json: json!({"mode": mode_name, "reports": reports, "totals": totals}),
        code: 0,
    })
}

/// Lines present in only one of the two lists, `-` for golden and `+` for computed.
fn diff_lines(golden: &[String], computed: &[String]) -> Vec<String> {
    let mut out: Vec<String> = golden
        .iter()
        .filter(|g| !computed.contains(g))
        .map(|g| format!("- {g}"))
        .collect();
    out.extend(
        computed
            .iter()
            .filter(|c| !golden.contains(c))
            .map(|c| format!("+ {c}")),
    );
    out
}

pub fn verify_tables(cat: &Catalog) -> Result<Output, CliError> {
    let mut text = String::new();
    let mut rows = Vec::new();
    let (mut rows_ok, mut wit_ok) = (0, 0);
    for table in [1u8, 2] {
        let _ = writeln!(text, "table {table}");
        for row in cat.rows.iter().filter(|r| r.table == table) {
            let c = check_row(cat, &row.id)?;
            let pass = c.passed();
            rows_ok += usize::from(pass);
            let _ = writeln!(
                text,
                "  {:<5} {}",
                row.id,
                if pass { "PASS" } else { "FAIL" }
            );
            if !c.basket_matches {
                let _ = writeln!(text, "    basket:");
                for l in diff_lines(&row.basket, &c.basket) {
                    let _ = writeln!(text, "      {l}");
                }
            }
            if !c.pi1_matches {
                let _ = writeln!(text, "    pi1:");
                let computed = c.pi1.clone().unwrap_or_else(|| "?".into());
                for l in diff_lines(std::slice::from_ref(&row.pi1), &[computed]) {
                    let _ = writeln!(text, "      {l}");
                }
            }
            for p in &c.problems {
                let _ = writeln!(text, "    {p}");
            }
            let mut v = to_json(&c)?;
            v["golden_basket"] = to_json(&row.basket)?;
            v["golden_pi1"] = Value::String(row.pi1.clone());
            v["passed"] = Value::Bool(pass);
            rows.push(v);
        }
    }
    let _ = writeln!(text, "witnesses");
    let mut witnesses = Vec::new();
    for w in &cat.witnesses {
        let c = check_witness(cat, &w.name)?;
        let pass = c.passed();
        wit_ok += usize::from(pass);
        let kind = if c.report.holomorphic {
            "holomorphic"
        } else {
            "non-holomorphic"
        };
        let _ = writeln!(
            text,
            "  {:<10} {} ({kind})",
            w.name,
            if pass { "PASS" } else { "FAIL" }
        );
        if let Some(d) = c.report.diagnostic.as_ref().filter(|_| !pass) {
            let _ = writeln!(text, "    {d}");
        }
        let mut v = to_json(&c)?;
        v["passed"] = Value::Bool(pass);
        witnesses.push(v);
    }
    let all_ok = rows_ok == cat.rows.len() && wit_ok == cat.witnesses.len();
    let _ = writeln!(
        text,
        "{rows_ok} of {} rows pass, {wit_ok} of {} witnesses pass",
        cat.rows.len(),
        cat.witnesses.len()
    );
    Ok(Output {
        text,
        json: json!({"rows": rows, "witnesses": witnesses, "passed": all_ok}),
        code: if all_ok { 0 } else { 1 },
    })
}

pub fn baskets(cat: &Catalog) -> Result<Output, CliError> {
    let got = riemann_roch_baskets();
    let mut text = String::from("  N2  N3  N4  N6  N9 N14\n");
    for n in &got {
        let cells: Vec<String> = n.iter().map(|x| format!("{x:>3}")).collect();
        let _ = writeln!(text, " {}", cells.join(" "));
    }
    let matches = got == cat.riemann_roch;
    let _ = writeln!(
        text,
        "{} vectors; {}",
        got.len(),
        if matches {
            "matches the catalog"
        } else {
            "DIFFERS from the catalog"
        }
    );
    if !matches {
        let fmt = |v: &[[u32; 6]]| v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>();
        for l in diff_lines(&fmt(&cat.riemann_roch), &fmt(&got)) {
            let _ = writeln!(text, "  {l}");
        }
    }
    Ok(Output {
        text,
        json: json!({"counters": ["N2", "N3", "N4", "N6", "N9", "N14"], "vectors": got, "matches_catalog": matches}),
        code: if matches { 0 } else { 1 },
    })
}

const TORIC_TARGETS: [(u32, [u32; 3]); 4] = [
    (9, [1, 4, 7]),
    (14, [1, 9, 11]),
    (3, [1, 1, 1]),
    (7, [1, 2, 4]),
];

/// Parses `all`, `1/d` for a known order, or `1/d(a,b,c)`.
fn toric_targets(target: &str) -> Result<Vec<(u32, [u32; 3])>, CliError> {
    let bad = || {
        CliError::Usage(format!(
            "bad toric target '{target}' (try 1/9, 1/14, 1/3, 1/7, 1/14(1,9,11) or all)"
        ))
    };
    if target == "all" {
        return Ok(TORIC_TARGETS.to_vec());
    }
    let rest = target.strip_prefix("1/").ok_or_else(bad)?;
    let (d, w) = match rest.split_once('(') {
        None => (rest, None),
        Some((d, w)) => (d, Some(w.strip_suffix(')').ok_or_else(bad)?)),
    };
    let d: u32 = d.trim().parse().map_err(|_| bad())?;
    match w {
        None => TORIC_TARGETS
            .iter()
            .find(|t| t.0 == d)
            .map(|t| vec![*t])
            .ok_or_else(bad),
        Some(w) => {
            let w: Vec<u32> = w
                .split(',')
                .map(|x| x.trim().parse())
                .collect::<Result<_, _>>()
                .map_err(|_| bad())?;
            let w: [u32; 3] = w.try_into().map_err(|_| bad())?;
            Ok(vec![(d, w)])
        }
    }
}

fn render_terminalization(t: &Terminalization, out: &mut String) -> Result<Value, CliError> {
    let fan = &t.fan;
    let _ = writeln!(out, "target {} (cone type {})", t.target, t.original);
    for r in &fan.rays {
        let v: Vec<String> = r.vector.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(out, "  ray {:<3} ({})", r.name, v.join(", "));
    }
    for (c, ty) in t.cone_types.iter().enumerate() {
        let _ = writeln!(out, "  {:<18} {ty}", fan.cone_name(c));
    }
    let _ = writeln!(
        out,
        "  {} cones, crepant {}, terminal {}, smooth {}, index sum {} of {}",
        t.cone_types.len(),
        t.crepant,
        t.terminal,
        t.smooth,
        t.index_sum,
        t.original.index
    );
    let flags: Vec<String> = t.pushforward.iter().map(|b| b.to_string()).collect();
    let _ = writeln!(
        out,
        "  sections of D_i and D_i' agree (i = 1..3): {}",
        flags.join(" ")
    );
    for d in &t.divisors {
        let _ = writeln!(
            out,
            "  divisor {:<5} H^1 vanishes {}, Cartier index {}, basepoint free {}",
            d.divisor, d.h1_vanishes, d.cartier_index, d.basepoint_free
        );
    }
    // m_tau for the multiple of the first coordinate divisor that is Cartier
    let d1 = prime_divisor(fan, 0);
    let c = cartier_data(fan, &d1).map_err(toric_err)?;
    let _ = writeln!(out, "  Cartier data of {}D_{}:", c.index, fan.rays[0].name);
    for (k, m) in c.m.iter().enumerate() {
        let v: Vec<String> = m.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(out, "    {:<18} ({})", fan.cone_name(k), v.join(", "));
    }
    let _ = writeln!(out, "  {}", t.conclusion);
    let _ = writeln!(
        out,
        "  certificate {}",
        if t.passed() { "PASSED" } else { "FAILED" }
    );
    let mut v = to_json(t)?;
    v["cartier_first_divisor"] = to_json(&c)?;
    v["passed"] = Value::Bool(t.passed());
    Ok(v)
}

fn toric_err(e: ToricError) -> CliError {
    match e {
        ToricError::UnknownTarget(_) => CliError::Usage(e.to_string()),
        other => CliError::Internal(other.to_string()),
    }
}

pub fn toric(target: &str) -> Result<Output, CliError> {
    let mut text = String::new();
    let mut certs = Vec::new();
    for (d, w) in toric_targets(target)? {
        let t = terminalize(d, w).map_err(toric_err)?;
        certs.push(render_terminalization(&t, &mut text)?);
        text.push('\n');
    }
    Ok(Output {
        text,
        json: json!({"certificates": certs}),
        code: 0,
    })
}

fn cover_text(p: &Pi1Report, order: usize) -> String {
    if p.gfix_order == order {
        return "universal cover is the quotient itself".into();
    }
    match (&p.cover, p.cover_rigid) {
        (Some(c), Some(rigid)) => format!(
            "universal cover {c} ({})",
            if rigid { "rigid" } else { "not rigid" }
        ),
        (Some(c), None) => format!("universal cover {c}"),
        _ => "universal cover not determined".into(),
    }
}

pub fn pi1(cat: &Catalog, names: &[String]) -> Result<Output, CliError> {
    let results = run_cases(cat, names)?;
    let mut text = String::new();
    let mut cases = Vec::new();
    for res in &results {
        let r = &res.report;
        let _ = writeln!(text, "case {} (group {})", r.case, r.group);
        let mut classes = Vec::new();
        for class in 0..r.classes.len() {
            let (k, i) = (0..res.data.len())
                .flat_map(|k| (0..res.data[k].actions.len()).map(move |i| (k, i)))
                .find(|&(k, i)| res.biholo_label[res.global(k, i)] == class)
                .ok_or_else(|| {
                    CliError::Internal(format!("class {class} of {} has no action", r.case))
                })?;
            let d = &res.data[k];
            let q = quotient_invariants(&d.ctx, &d.actions[i].table)
                .map_err(|e| CliError::Internal(e.to_string()))?;
            if q.pi1 != r.classes[class].pi1 {
                return Err(CliError::Soundness(format!(
                    "pi1 of class {class} of {} is not stable",
                    r.case
                )));
            }
            let p = &q.pi1_report;
            let order = d.ctx.order();
            let rows = rows_of(r, class);
            let _ = writeln!(
                text,
                "  #{class} torus {}  pi1 {}  |G_fix| = {} of {order} (generated by {})  {}{}",
                r.classes[class].torus,
                p.pi1.as_deref().unwrap_or("?"),
                p.gfix_order,
                if p.gfix_generators.is_empty() {
                    "nothing".to_string()
                } else {
                    p.gfix_generators.join(", ")
                },
                cover_text(p, order),
                if rows.is_empty() {
                    String::new()
                } else {
                    format!("  rows {}", rows.join(" "))
                }
            );
            let mut v = to_json(p)?;
            v["class"] = json!(class);
            v["torus"] = json!(r.classes[class].torus);
            v["rows"] = to_json(&rows)?;
            classes.push(v);
        }
        cases.push(json!({"case": r.case, "group": r.group, "classes": classes}));
    }
    Ok(Output {
        text,
        json: json!({"cases": cases}),
        code: 0,
    })
}

pub fn normalizer(cat: &Catalog, names: &[String]) -> Result<Output, CliError> {
    let mut text = String::new();
    let mut out = Vec::new();
    for name in names {
        let case = cat.case(name).map_err(|e| CliError::Usage(e.to_string()))?;
        let ctx = ActionContext::new(&case.group, &case.rep, &case.base)
            .map_err(|e| CliError::Internal(e.to_string()))?;
        let n = compute_normalizer(&case, &ctx)?;
        let order = |o: Option<usize>| o.map_or("not enumerated".to_string(), |x| x.to_string());
        let _ = writeln!(text, "case {name} (group {})", case.group.name);
        let _ = writeln!(text, "  source: {}", n.source);
        let _ = writeln!(text, "  holomorphic order: {}", order(n.holomorphic_order));
        let _ = writeln!(
            text,
            "  order with semilinear maps: {}",
            order(n.full_order)
        );
        let _ = writeln!(
            text,
            "  generators: {} holomorphic, {} semilinear",
            n.holomorphic.len(),
            n.semilinear.len()
        );
        for (kind, gens) in [
            ("holomorphic", &n.holomorphic),
            ("semilinear", &n.semilinear),
        ] {
            for g in gens.iter().filter(|g| g.map.is_some()) {
                let s = g.map.as_ref().expect("filtered");
                let conj: Vec<&str> = s
                    .conj
                    .iter()
                    .map(|c| if *c { "conj" } else { "id" })
                    .collect();
                let rows: Vec<String> = s
                    .matrix
                    .to_rows()
                    .iter()
                    .map(|r| {
                        r.iter()
                            .map(|x| x.to_string())
                            .collect::<Vec<_>>()
                            .join(", ")
                    })
                    .collect();
                let _ = writeln!(
                    text,
                    "    {kind}: [{}] after ({})",
                    rows.join("; "),
                    conj.join(", ")
                );
            }
        }
        let mut v = to_json(&n)?;
        v["case"] = json!(name);
        out.push(v);
    }
    Ok(Output {
        text,
        json: json!({"normalizers": out}),
        code: 0,
    })
}
