use crate::input::{dimension, parse_list, parse_matrix, read_coloring, read_fiber, read_text};
use crate::render::render_table;
use crate::{CliError, ColoringArg, Command, Construct, Context, GroupArg, Output, LONG_CLASSIFY_N, LONG_SEARCH_N};
use equicube::canonical::{
    are_equivalent, canonical_form, canonical_form_with_generators, fiber_stabilizer_generators, stabilizer_order,
};
use equicube::classify::{build_fiber_library, classify, ClassifyOptions, Constraint, FiberSource};
use equicube::constructions::{
    constr0, constr1, constr3_with, distance_coloring, g_based_coloring, g_ij, g_of, quasigroup_coloring,
    six_argument_example, star_equation_coloring, Construction, Group, Split,
};
use equicube::hypercube::{emit_hex, emit_hex_coloring, Coloring, ColoringJson};
use equicube::refinement::refine_traced;
use equicube::search::{
    enumerate_codes, enumerate_partitions, enumerate_resumable, enumerate_with_orders, Checkpoint,
};
use equicube::spectral::{eigenvalues, quotient_matrix, spectrum_report, QuotientMatrix};
use serde_json::{json, Value};
use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

type Res = Result<Output, CliError>;

fn matrix_text(q: &QuotientMatrix) -> String {
    let w = q.rows().iter().flatten().map(|x| x.to_string().len()).max().unwrap_or(1);
    q.rows()
        .iter()
        .map(|r| {
            let cells: Vec<String> = r.iter().map(|x| format!("{x:>w$}")).collect();
            format!("  {}\n", cells.join(" "))
        })
        .collect()
}

fn eig_text(eig: &[(i32, u32)]) -> String {
    let parts: Vec<String> =
        eig.iter().map(|&(l, m)| if m == 1 { l.to_string() } else { format!("{l}^{m}") }).collect();
    parts.join(", ")
}

fn coloring_json(f: &Coloring) -> Value {
    serde_json::to_value(ColoringJson::from_coloring(f)).expect("serializable")
}

/// One hex digit per vertex.
fn digits(f: &Coloring) -> String {
    f.colors().iter().map(|&c| char::from_digit(c as u32, 16).unwrap_or('?')).collect()
}

fn need_long(ctx: &Context, what: &str, n: u32, from: u32) -> Result<(), CliError> {
    if n >= from && !ctx.long {
        return Err(CliError::Usage(format!("{what} at n = {n} is long-running; pass --long")));
    }
    Ok(())
}

fn coloring_of(arg: &ColoringArg, ctx: &mut Context) -> Result<Coloring, CliError> {
    read_coloring(&arg.coloring, arg.n, ctx)
}

pub fn dispatch(cmd: &Command, ctx: &mut Context) -> Res {
    match cmd {
        Command::Verify(a) => verify(&coloring_of(a, ctx)?),
        Command::Spectrum { matrix, coloring, n } => spectrum(matrix.as_deref(), coloring.as_deref(), *n, ctx),
        Command::Refine(a) => refine(&coloring_of(a, ctx)?),
        Command::Canon(a) => canon(&coloring_of(a, ctx)?),
        Command::Equiv { first, other } => {
            let f = coloring_of(first, ctx)?;
            let g = read_coloring(other, first.n, ctx)?;
            equiv(&f, &g)
        }
        Command::Autorder { coloring, fiber, n } => autorder(coloring.as_deref(), fiber.as_deref(), *n, ctx),
        Command::Search { n, matrix, checkpoint } => search(*n, matrix, checkpoint.as_deref(), ctx),
        Command::Codes { n, mu } => codes(*n, *mu),
        Command::Partitions { n, spectrum } => partitions(*n, spectrum),
        Command::Classify { n, degree_max, ci_min, library } => {
            let c = match (degree_max, ci_min) {
                (Some(d), None) => Constraint::DegreeMax(*d),
                (None, Some(t)) => Constraint::CiMin(*t),
                _ => return Err(CliError::Usage("give exactly one of --degree-max, --ci-min".into())),
            };
            classify_cmd(*n, c, library.as_deref(), ctx)
        }
        Command::Construct { which } => construct(which, ctx),
        Command::Bench => bench(ctx),
    }
}

fn verify(f: &Coloring) -> Res {
    let r = spectrum_report(f)?;
    let mut text = format!("perfect {}-coloring of Q_{}\nquotient matrix:\n", r.k, r.n);
    text += &matrix_text(&r.quotient);
    let _ = writeln!(text, "eigenvalues: {}", eig_text(&r.eigenvalues));
    let _ = writeln!(text, "densities: {}", r.densities.join(" "));
    let _ = writeln!(
        text,
        "degree {}, correlation immunity {}, resilience {}",
        r.degree, r.ci_order, r.resilience_order
    );
    let ess: Vec<String> = r.essential_args.iter().map(|j| j.to_string()).collect();
    let _ = writeln!(text, "essential arguments: {}", ess.join(" "));
    let mut json = serde_json::to_value(&r).expect("serializable");
    json["perfect"] = json!(true);
    Ok(Output { json, text, hex: Some(emit_hex_coloring(f)) })
}

fn spectrum(matrix: Option<&str>, coloring: Option<&Path>, n: Option<u32>, ctx: &mut Context) -> Res {
    let q = match (matrix, coloring) {
        (Some(m), None) => parse_matrix(m)?,
        (None, Some(p)) => quotient_matrix(&read_coloring(p, n, ctx)?)?,
        _ => return Err(CliError::Usage("give --matrix or --coloring".into())),
    };
    let n = dimension(if matrix.is_some() { n.unwrap_or(q.n()) } else { q.n() })?;
    let eig = eigenvalues(&q, n)?;
    let json = json!({ "n": n.get(), "matrix": q, "eigenvalues": eig });
    Ok(Output { json, text: format!("{}\n", eig_text(&eig)), hex: None })
}

fn refine(f: &Coloring) -> Res {
    let t = refine_traced(f);
    let q = quotient_matrix(&t.result)?;
    let mut text = format!("{} colors after {} rounds\n", t.result.k(), t.rounds.len());
    text += &matrix_text(&q);
    text += &digits(&t.result);
    text.push('\n');
    let rounds: Vec<Value> =
        t.rounds.iter().map(|r| json!({ "round": r.round, "k_before": r.k_before, "k_after": r.k_after })).collect();
    let json = json!({ "coloring": coloring_json(&t.result), "matrix": q, "rounds": rounds });
    Ok(Output { json, text, hex: Some(emit_hex_coloring(&t.result)) })
}

fn canon(f: &Coloring) -> Res {
    let c = canonical_form(f)?;
    let text = format!("{}\n|Aut| = {}\n", digits(&c.canon), c.aut_order);
    let json = json!({ "canonical": coloring_json(&c.canon), "aut_order": c.aut_order.to_string(), "witness": c.witness });
    Ok(Output { json, text, hex: Some(emit_hex_coloring(&c.canon)) })
}

fn equiv(f: &Coloring, g: &Coloring) -> Res {
    let w = are_equivalent(f, g)?;
    let text = match &w {
        Some(e) => format!(
            "equivalent: permutation {:?}, flips {:0w$b}, colors {:?}\n",
            e.aut.perm(),
            e.aut.flips(),
            e.color_map,
            w = e.aut.n().get() as usize
        ),
        None => "not equivalent\n".into(),
    };
    Ok(Output { json: json!({ "equivalent": w.is_some(), "witness": w }), text, hex: None })
}

fn autorder(coloring: Option<&Path>, fiber: Option<&str>, n: Option<u32>, ctx: &mut Context) -> Res {
    match (coloring, fiber) {
        (Some(p), None) => {
            let f = read_coloring(p, n, ctx)?;
            let c = canonical_form_with_generators(&f)?;
            let json = json!({ "aut_order": c.aut_order.to_string(), "generators": c.generators });
            Ok(Output { json, text: format!("{}\n", c.aut_order), hex: None })
        }
        (None, Some(h)) => {
            let n = n.ok_or_else(|| CliError::Usage("--fiber needs --n".into()))?;
            let t = read_fiber(h, n)?;
            let order = stabilizer_order(&t)?;
            let gens = fiber_stabilizer_generators(&t)?;
            let json = json!({ "aut_order": order.to_string(), "generators": gens });
            Ok(Output { json, text: format!("{order}\n"), hex: None })
        }
        _ => Err(CliError::Usage("give --coloring or --fiber".into())),
    }
}

fn classes_output(n: u32, q: &QuotientMatrix, found: &[(Coloring, u128)]) -> Output {
    let mut text = format!("{} classes with matrix {q} on Q_{n}\n", found.len());
    let mut hex = String::new();
    let mut list = Vec::new();
    for (f, a) in found {
        let _ = writeln!(text, "{}  |Aut| = {a}", digits(f));
        hex += &emit_hex_coloring(f);
        hex.push('\n');
        list.push(json!({ "coloring": coloring_json(f), "aut_order": a.to_string() }));
    }
    let json = json!({ "n": n, "matrix": q, "count": found.len(), "classes": list });
    Output { json, text, hex: Some(hex) }
}

fn search(n: u32, matrix: &str, checkpoint: Option<&Path>, ctx: &mut Context) -> Res {
    need_long(ctx, "search", n, LONG_SEARCH_N)?;
    let q = parse_matrix(matrix)?;
    let d = dimension(n)?;
    let found = match checkpoint {
        None => enumerate_with_orders(d, &q)?,
        Some(path) => {
            let resume = if path.exists() {
                let text = read_text(path, ctx)?;
                Some(serde_json::from_str::<Checkpoint>(&text).map_err(equicube::Error::from)?)
            } else {
                None
            };
            let found = enumerate_resumable(d, &q, resume, &mut |c| {
                let text = serde_json::to_string(c).expect("serializable");
                // write then rename, so an interruption never leaves a torn file
                let tmp = path.with_extension("tmp");
                std::fs::write(&tmp, text)?;
                std::fs::rename(&tmp, path)?;
                Ok(())
            })?;
            ctx.outputs.push(path.display().to_string());
            found
        }
    };
    Ok(classes_output(n, &q, &found))
}

fn codes(n: u32, mu: u32) -> Res {
    let e = enumerate_codes(dimension(n)?, mu)?;
    let mut text = format!("{} classes of {mu}-fold 1-perfect codes in Q_{n}, {} codes\n", e.classes.len(), e.labeled);
    let mut hex = String::new();
    for c in &e.classes {
        let _ = write!(text, "{}  |Aut| = {}", emit_hex(&c.representative), c.stabilizer_order);
        if let Some(cy) = &c.cycles {
            let parts: Vec<String> = cy.iter().map(|(l, m)| format!("{l}^{m}")).collect();
            let _ = write!(text, "  cycles {}", parts.join(" "));
        }
        if let Some(s) = &c.splittability {
            let _ = write!(text, "  {}", if s.splits { "splittable" } else { "not splittable" });
        }
        text.push('\n');
        hex += &emit_hex(&c.representative);
        hex.push('\n');
    }
    let mut json = serde_json::to_value(&e).expect("serializable");
    json["labeled"] = json!(e.labeled.to_string());
    for (j, c) in json["classes"].as_array_mut().expect("array").iter_mut().zip(&e.classes) {
        j["stabilizer_order"] = json!(c.stabilizer_order.to_string());
    }
    Ok(Output { json, text, hex: Some(hex) })
}

fn partitions(n: u32, spectrum: &str) -> Res {
    let p = enumerate_partitions(dimension(n)?, &parse_list(spectrum)?)?;
    let spec: Vec<String> = p.spectrum.iter().map(|m| m.to_string()).collect();
    let text = format!("({}): {} classes, {} labeled partitions\n", spec.join(","), p.class_count, p.labeled);
    let hex = p.classes.iter().map(|f| emit_hex_coloring(f) + "\n").collect();
    let json = json!({
        "spectrum": p.spectrum,
        "class_count": p.class_count,
        "labeled": p.labeled.to_string(),
        "classes": p.classes.iter().map(coloring_json).collect::<Vec<_>>(),
    });
    Ok(Output { json, text, hex: Some(hex) })
}

fn classify_cmd(n: u32, c: Constraint, library: Option<&Path>, ctx: &mut Context) -> Res {
    need_long(ctx, "classification", n, LONG_CLASSIFY_N)?;
    let source = match library {
        Some(p) => FiberSource::Dataset(read_text(p, ctx)?),
        None => FiberSource::Exhaustive,
    };
    let lib = build_fiber_library(dimension(n)?, c, &source)?;
    let report = classify(&lib, &ClassifyOptions::default())?;
    let table = render_table(&report)?;
    let by_k: Vec<String> = report.count_by_k().iter().map(|(k, m)| format!("{k}:{m}")).collect();
    let text = format!(
        "Q_{n}, {c}: {} classes; library {} fiber classes\nby colors {}\n{}",
        report.classes.len(),
        report.library_classes,
        by_k.join(" "),
        table.text
    );
    let hex = report.classes.iter().map(|r| emit_hex_coloring(&r.coloring) + "\n").collect();
    let mut json = json!({ "report": report, "table": table });
    for r in json["report"]["classes"].as_array_mut().expect("array") {
        if let Some(a) = r.get("aut_order").and_then(Value::as_u64) {
            r["aut_order"] = json!(a.to_string());
        }
    }
    Ok(Output { json, text, hex: Some(hex) })
}

fn parse_split(s: &str) -> Result<Split, CliError> {
    if s == "plain" {
        return Ok(Split::Plain);
    }
    match parse_list(s)?.as_slice() {
        [i, j] => Ok(Split::Indexed(*i, *j)),
        _ => Err(CliError::Usage(format!("split {s:?} is neither `plain` nor `i,j`"))),
    }
}

fn construct(which: &Construct, ctx: &mut Context) -> Res {
    let c: Construction = match which {
        Construct::Distance { n } => distance_coloring(dimension(*n)?)?,
        Construct::Constr0(a) => constr0(&coloring_of(a, ctx)?)?,
        Construct::Constr1 { f, other, b, c } => {
            let x = coloring_of(f, ctx)?;
            let y = read_coloring(other, f.n, ctx)?;
            constr1(&x, &y, *b, *c)?
        }
        Construct::G { n } => g_of(dimension(*n)?)?,
        Construct::Gij { n, i, j } => g_ij(dimension(*n)?, *i, *j)?,
        Construct::Constr3 { n, first, second, swap } => {
            constr3_with(dimension(*n)?, parse_split(first)?, parse_split(second)?, *swap)?
        }
        Construct::SixArgument => six_argument_example(),
        Construct::StarEquation { group } => star_equation_coloring(match group {
            GroupArg::Klein => Group::Klein,
            GroupArg::Cyclic => Group::Cyclic,
        }),
        Construct::Quasigroup => quasigroup_coloring(),
        Construct::GBased(a) => g_based_coloring(&coloring_of(a, ctx)?)?,
    };
    c.verify()?;
    let params: Vec<String> = c.spec.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
    let mut text = format!("{} ({}) verified\n", c.spec.name, params.join(", "));
    text += &matrix_text(&c.spec.expected);
    let _ = writeln!(text, "eigenvalues: {}", eig_text(&c.spec.eigenvalues));
    text += &digits(&c.coloring);
    text.push('\n');
    let json = json!({ "spec": c.spec, "coloring": coloring_json(&c.coloring), "verified": true });
    Ok(Output { json, text, hex: Some(emit_hex_coloring(&c.coloring)) })
}

fn bench(ctx: &mut Context) -> Res {
    type Task = (&'static str, Box<dyn Fn() -> Result<usize, CliError>>);
    let d = |n| dimension(n);
    let mut tasks: Vec<Task> = vec![
        ("codes n=7 mu=2", Box::new(move || Ok(enumerate_codes(d(7)?, 2)?.classes.len()))),
        ("partitions n=7 (6,2)", Box::new(move || Ok(enumerate_partitions(d(7)?, &[6, 2])?.class_count))),
        (
            "search n=6 (3,3;3,3)",
            Box::new(move || Ok(enumerate_with_orders(d(6)?, &parse_matrix("3,3;3,3")?)?.len())),
        ),
        (
            "classify n=5 ci>=1",
            Box::new(move || {
                let lib = build_fiber_library(d(5)?, Constraint::CiMin(1), &FiberSource::Exhaustive)?;
                Ok(classify(&lib, &ClassifyOptions::default())?.classes.len())
            }),
        ),
    ];
    if ctx.long {
        tasks.push((
            "search n=8 (0,2,6;2,0,6;3,3,2)",
            Box::new(move || Ok(enumerate_with_orders(d(8)?, &parse_matrix("0,2,6;2,0,6;3,3,2")?)?.len())),
        ));
        tasks.push((
            "classify n=6 ci>=2",
            Box::new(move || {
                let lib = build_fiber_library(d(6)?, Constraint::CiMin(2), &FiberSource::Exhaustive)?;
                Ok(classify(&lib, &ClassifyOptions::default())?.classes.len())
            }),
        ));
    }
    let mut text = String::new();
    let mut rows = Vec::new();
    for (name, f) in tasks {
        let start = Instant::now();
        let result = f()?;
        let ms = start.elapsed().as_millis() as u64;
        let _ = writeln!(text, "{name:<32} {result:>6} {ms:>8} ms");
        rows.push(json!({ "task": name, "result": result, "millis": ms }));
    }
    Ok(Output { json: json!({ "threads": rayon::current_num_threads(), "tasks": rows }), text, hex: None })
}
