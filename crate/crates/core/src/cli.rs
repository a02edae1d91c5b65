//! The `traceforms` command line. Every subcommand reads JSON (see
//! `docs/formats.md`), prints text or, with `--json`, one JSON document.
//!
//! Exit codes: 0 success, 1 a computed check failed, 2 bad input or an
//! enumeration cap was hit.

use std::fs;
use std::io::{self, Read};
use std::panic::{catch_unwind, AssertUnwindSafe};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::corpus::{self, CorpusEntry};
use crate::field::{Field, FieldDescriptor, FieldElement, FieldError};
use crate::form::{
    diagonalize, pfister, scaled_pfister, trace_form_from_poly, trace_form_kummer_tower, trace_form_multiquadratic,
    witt_decompose, FormError, FormInput, PfisterSign, Polynomial, QForm,
};
use crate::group::{
    build_group, frattini_rank, is_lattice_modular, sylow2, GroupError, GroupTable, PresentationSpec,
};
use crate::iwasawa::{iwasawa_structures, max_iwasawa_level, strength, thm2_classify};
use crate::oracle::{extension_obstruction, predict, FieldProfile, OracleError};
use crate::suites::{run_suite, SUITES};

#[derive(Parser, Debug)]
#[command(name = "traceforms", version, about = "Trace forms, Witt classes and 2-group conditions")]
pub struct Cli {
    /// Print one JSON document instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Finite groups.
    #[command(subcommand)]
    Group(GroupCommand),
    /// Quadratic forms and trace forms.
    #[command(subcommand)]
    Form(FormCommand),
    /// Predict whether every trace form for a group is hyperbolic.
    Predict { file: String },
    /// Pfister-form obstruction to a Galois embedding problem.
    Obstruction { file: String },
    /// Run a named check suite (or `all`).
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum GroupCommand {
    /// Order, exponent, Frattini rank, strength and Iwasawa structures.
    Analyze { file: String },
    /// Conditions (c) and (d) at a given m.
    Thm2 {
        file: String,
        #[arg(short = 'm', long)]
        m: u32,
    },
    /// Build every corpus group and check its JSON round trip.
    CorpusCheck,
}

#[derive(Subcommand, Debug)]
pub enum FormCommand {
    /// Witt class of a diagonal form or Gram matrix.
    Classify { file: String },
    /// Trace form of K[x]/(f).
    TracePoly { file: String },
    /// Trace form of K(√a_1, ..., √a_r).
    TraceMultiquad { file: String },
    /// Trace form of the M(2^n) Kummer tower.
    TraceKummer { file: String },
    /// A (scaled) Pfister form and its class.
    Pfister { file: String },
}

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Failure(_) => 1,
            CliError::Input(_) => 2,
        }
    }
}

impl From<FieldError> for CliError {
    fn from(e: FieldError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<FormError> for CliError {
    fn from(e: FormError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        CliError::Input(e.to_string())
    }
}

/// What a command produced: text lines, the JSON document, and whether
/// the computed checks held.
pub struct Output {
    pub text: Vec<String>,
    pub json: Value,
    pub ok: bool,
}

impl Output {
    fn ok(text: Vec<String>, json: Value) -> Self {
        Output { text, json, ok: true }
    }
}

/// Parses `args` (including the program name), runs, prints, and returns
/// the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let json_mode = cli.json;
    let result = catch_unwind(AssertUnwindSafe(|| execute(&cli.command)))
        .unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "internal check failed".into());
            Err(CliError::Failure(msg))
        });
    match result {
        Ok(out) => {
            if json_mode {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("JSON output"));
            } else {
                for line in &out.text {
                    println!("{line}");
                }
            }
            if out.ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let (kind, msg) = match &e {
                CliError::Input(m) => ("input error", m),
                CliError::Failure(m) => ("check failed", m),
            };
            if json_mode {
                println!("{}", json!({"error": kind, "message": msg}));
            } else {
                eprintln!("{kind}: {msg}");
            }
            e.exit_code()
        }
    }
}

pub fn execute(cmd: &Command) -> Result<Output, CliError> {
    match cmd {
        Command::Group(GroupCommand::Analyze { file }) => group_analyze(&read_json(file)?),
        Command::Group(GroupCommand::Thm2 { file, m }) => group_thm2(&read_json(file)?, *m),
        Command::Group(GroupCommand::CorpusCheck) => corpus_check(),
        Command::Form(FormCommand::Classify { file }) => form_classify(&read_json(file)?),
        Command::Form(FormCommand::TracePoly { file }) => trace_poly(&read_json(file)?),
        Command::Form(FormCommand::TraceMultiquad { file }) => trace_multiquad(&read_json(file)?),
        Command::Form(FormCommand::TraceKummer { file }) => trace_kummer(&read_json(file)?),
        Command::Form(FormCommand::Pfister { file }) => pfister_cmd(&read_json(file)?),
        Command::Predict { file } => predict_cmd(&read_json(file)?),
        Command::Obstruction { file } => obstruction_cmd(&read_json(file)?),
        Command::Verify { suite, seed } => verify(suite, *seed),
    }
}

/// Reads a JSON file, `-` for stdin. `corpus:NAME` stands for the corpus
/// entry of that name.
pub fn read_json(path: &str) -> Result<Value, CliError> {
    if let Some(name) = path.strip_prefix("corpus:") {
        return Ok(json!(name));
    }
    let text = if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| CliError::Input(e.to_string()))?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| CliError::Input(format!("{path}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{path}: malformed JSON: {e}")))
}

fn field_of(v: &Value) -> Result<Field, CliError> {
    let d = v.get("field").ok_or_else(|| CliError::Input("missing \"field\"".into()))?;
    Ok(Field::new(&descriptor_from_value(d)?)?)
}

/// A field descriptor object, or shorthand text such as `Q`, `GF(5)`,
/// `GF(5^2)` or `GF(5)((X))((Y))`.
pub fn descriptor_from_value(v: &Value) -> Result<FieldDescriptor, CliError> {
    match v {
        Value::String(s) => parse_descriptor(s),
        _ => serde_json::from_value(v.clone()).map_err(|e| CliError::Input(format!("field descriptor: {e}"))),
    }
}

pub fn parse_descriptor(s: &str) -> Result<FieldDescriptor, CliError> {
    let bad = || CliError::Input(format!("cannot read field {s:?}"));
    let s = s.trim();
    let (base, mut rest) = if let Some(r) = s.strip_prefix('Q') {
        (FieldDescriptor::rationals(), r)
    } else if let Some(r) = s.strip_prefix("GF(") {
        let close = r.find(')').ok_or_else(bad)?;
        let inner = &r[..close];
        let (p, k) = match inner.split_once('^') {
            Some((p, k)) => (p.trim().parse().map_err(|_| bad())?, k.trim().parse().map_err(|_| bad())?),
            None => (inner.trim().parse().map_err(|_| bad())?, 1),
        };
        (FieldDescriptor::gf(p, k), &r[close + 1..])
    } else {
        return Err(bad());
    };
    let mut vars = Vec::new();
    while !rest.is_empty() {
        let r = rest.strip_prefix("((").ok_or_else(bad)?;
        let close = r.find("))").ok_or_else(bad)?;
        vars.push(r[..close].trim().to_string());
        rest = &r[close + 2..];
    }
    Ok(base.laurent(vars))
}

fn elements(f: &Field, v: &Value, key: &str) -> Result<Vec<FieldElement>, CliError> {
    let xs = v
        .get(key)
        .and_then(Value::as_array)
        .ok_or_else(|| CliError::Input(format!("\"{key}\" must be a list")))?;
    xs.iter().map(|x| f.from_json(x).map_err(CliError::from)).collect()
}

fn format_list(f: &Field, xs: &[FieldElement]) -> String {
    xs.iter().map(|x| f.format(x)).collect::<Vec<_>>().join(", ")
}

/// A group from a presentation object, a corpus entry, or a corpus name.
pub fn group_from_value(v: &Value) -> Result<(String, GroupTable), CliError> {
    if let Value::String(name) = v {
        let e = corpus::find(name).ok_or_else(|| CliError::Input(format!("no corpus group named {name:?}")))?;
        return Ok((e.name.clone(), e.build()?));
    }
    if v.get("spec").is_some() {
        let e: CorpusEntry = serde_json::from_value(v.clone()).map_err(|e| CliError::Input(e.to_string()))?;
        return Ok((e.name.clone(), e.build()?));
    }
    let spec: PresentationSpec =
        serde_json::from_value(v.clone()).map_err(|e| CliError::Input(format!("group presentation: {e}")))?;
    Ok(("group".into(), build_group(&spec)?))
}

fn group_analyze(v: &Value) -> Result<Output, CliError> {
    let (name, g) = group_from_value(v)?;
    let mut text = vec![format!("{name}: order {}", g.order())];
    let mut out = json!({
        "name": name,
        "order": g.order(),
        "abelian": g.is_abelian(),
        "exponent": g.exponent(),
    });
    text.push(format!("abelian: {}", g.is_abelian()));
    text.push(format!("exponent: {}", g.exponent()));
    let (s, _) = g.subgroup_table(&sylow2(&g));
    if !g.is_two_group() {
        text.push(format!("Sylow 2-subgroup: order {} (invariants below are of it)", s.order()));
        out["sylow_order"] = json!(s.order());
    }
    let r = frattini_rank(&s)?;
    let st = strength(&s)?;
    text.push(format!("Frattini rank: {r}"));
    text.push(format!("strength: {st}"));
    text.push(format!("powerful: {}", st.at_least(2)));
    out["frattini_rank"] = json!(r);
    out["strength"] = json!(st);
    out["powerful"] = json!(st.at_least(2));
    match is_lattice_modular(&s) {
        Ok(rep) => {
            text.push(format!("lattice modular: {} ({} subgroups)", rep.modular, rep.subgroup_count));
            out["lattice_modular"] = json!(rep.modular);
        }
        Err(GroupError::EnumerationInfeasible(m)) => {
            text.push(format!("lattice modular: not decided ({m})"));
            out["lattice_modular"] = Value::Null;
        }
        Err(e) => return Err(e.into()),
    }
    let level = max_iwasawa_level(&s)?;
    let structures = if s.is_abelian() { Vec::new() } else { iwasawa_structures(&s, 2)? };
    let level_text = level.map_or("not Iwasawa".to_string(), |l| l.to_string());
    text.push(format!("Iwasawa max level: {level_text}"));
    for st in &structures {
        text.push(format!("  {}", st.describe(&s)));
    }
    out["iwasawa_max_level"] = json!(level_text);
    out["iwasawa_structures"] = Value::Array(
        structures
            .iter()
            .map(|st| json!({"A": st.a.member_list(), "t": st.t, "level": st.level, "description": st.describe(&s)}))
            .collect(),
    );
    Ok(Output::ok(text, out))
}

fn group_thm2(v: &Value, m: u32) -> Result<Output, CliError> {
    let (name, g) = group_from_value(v)?;
    let (s, _) = g.subgroup_table(&sylow2(&g));
    let rep = thm2_classify(&s, m)?;
    let mut text = vec![
        format!("{name} at m = {m}"),
        format!("condition (c): {}", rep.cond_c),
        format!("condition (d): {}", rep.cond_d),
        format!("strength: {}", rep.strength),
    ];
    if let Some(w) = &rep.cond_c_witness {
        let what = if w.is_whole() { "the whole group".to_string() } else { format!("order {}", w.order()) };
        text.push(format!("(c) fails on a subgroup: {what}"));
    }
    if let Some(st) = &rep.cond_d_witness {
        text.push(format!("(d) witness: {}", st.describe(&s)));
    }
    let mut out = serde_json::to_value(&rep).map_err(|e| CliError::Failure(e.to_string()))?;
    out["name"] = json!(name);
    out["witness_is_whole_group"] = json!(rep.cond_c_witness.as_ref().map(|w| w.is_whole()));
    Ok(Output::ok(text, out))
}

fn corpus_check() -> Result<Output, CliError> {
    let mut text = Vec::new();
    let mut rows = Vec::new();
    let mut ok = true;
    for e in corpus::corpus() {
        let g = e.build()?;
        let back: CorpusEntry = serde_json::from_str(&serde_json::to_string(&e).expect("entry serializes"))
            .map_err(|err| CliError::Failure(err.to_string()))?;
        let table = PresentationSpec::CayleyJson { mult: g.rows(), labels: None };
        let reloaded = build_group(&serde_json::from_value(serde_json::to_value(&table).unwrap()).unwrap())?;
        let same = back.build()?.rows() == g.rows() && reloaded.rows() == g.rows();
        ok &= same;
        text.push(format!("{:<24} order {:>4}  round trip {}", e.name, g.order(), if same { "ok" } else { "FAILED" }));
        rows.push(json!({"name": e.name, "order": g.order(), "two_group": g.is_two_group(), "round_trip": same}));
    }
    Ok(Output { text, json: json!({"groups": rows, "ok": ok}), ok })
}

fn class_lines(label: &str, c: &crate::form::WittClass) -> Vec<String> {
    let h = if c.is_hyperbolic() { "hyperbolic" } else { "non-hyperbolic" };
    vec![
        format!("{label}Witt class: {}", c.format()),
        format!("{label}anisotropic dimension: {}, Witt index: {}, {h}", c.anisotropic_dim(), c.witt_index),
    ]
}

fn form_classify(v: &Value) -> Result<Output, CliError> {
    let mut v = v.clone();
    if let Some(d) = v.get("field") {
        v["field"] = serde_json::to_value(descriptor_from_value(d)?).expect("descriptor serializes");
    }
    let q = FormInput::from_json(&v)?.into_diagonal()?;
    let c = witt_decompose(&q)?;
    let mut text = vec![format!("diagonal: {}", q.format())];
    text.extend(class_lines("", &c));
    Ok(Output::ok(text, json!({"diagonal": q.to_json(), "witt_class": c.to_json()})))
}

fn trace_poly(v: &Value) -> Result<Output, CliError> {
    let f = field_of(v)?;
    let poly = match v.get("poly") {
        Some(Value::String(s)) => Polynomial::parse(&f, s)?,
        Some(Value::Array(cs)) => Polynomial {
            coeffs: cs.iter().map(|c| f.from_json(c)).collect::<Result<Vec<_>, _>>()?,
        },
        _ => return Err(CliError::Input("\"poly\" must be text or a coefficient list (low degree first)".into())),
    };
    let gram = trace_form_from_poly(&f, &poly)?;
    let (q, _) = diagonalize(&gram)?;
    let c = witt_decompose(&q)?;
    let mut text = vec![format!("Gram matrix over {f}:")];
    text.extend(gram.format_rows().into_iter().map(|r| format!("  {r}")));
    text.push(format!("diagonal: {}", q.format()));
    text.extend(class_lines("", &c));
    Ok(Output::ok(text, json!({"gram": gram.to_json(), "diagonal": q.to_json(), "witt_class": c.to_json()})))
}

fn trace_multiquad(v: &Value) -> Result<Output, CliError> {
    let f = field_of(v)?;
    let slots = elements(&f, v, "slots")?;
    let q = trace_form_multiquadratic(&f, &slots)?;
    let c = witt_decompose(&q)?;
    let roots: Vec<String> = slots.iter().map(|x| format!("√({})", f.format(x))).collect();
    let mut text = vec![format!("trace form of {f}({}): {}", roots.join(", "), q.format())];
    text.extend(class_lines("", &c));
    Ok(Output::ok(text, json!({"diagonal": q.to_json(), "witt_class": c.to_json()})))
}

fn trace_kummer(v: &Value) -> Result<Output, CliError> {
    let f = field_of(v)?;
    let n = v.get("n").and_then(Value::as_u64).ok_or_else(|| CliError::Input("\"n\" must be an integer".into()))? as u32;
    let a = match v.get("a") {
        Some(x) => f.from_json(x)?,
        None if f.depth() > 0 => f.var(0),
        None => return Err(CliError::Input("\"a\" is required over a field without Laurent variables".into())),
    };
    let gram = trace_form_kummer_tower(&f, n, &a)?;
    let (q, _) = diagonalize(&gram)?;
    let c = witt_decompose(&q)?;
    let mut text = vec![
        format!("M({}) extension of {f} with a = {}: dimension {}", 1u64 << n, f.format(&a), gram.dim()),
        format!("diagonal: {}", q.format()),
    ];
    text.extend(class_lines("", &c));
    Ok(Output::ok(
        text,
        json!({"n": n, "a": f.to_json(&a), "gram": gram.to_json(), "diagonal": q.to_json(), "witt_class": c.to_json()}),
    ))
}

fn pfister_cmd(v: &Value) -> Result<Output, CliError> {
    let f = field_of(v)?;
    let slots = elements(&f, v, "slots")?;
    let sign = match v.get("sign").and_then(Value::as_str).unwrap_or("minus") {
        "minus" => PfisterSign::Minus,
        "plus" => PfisterSign::Plus,
        other => return Err(CliError::Input(format!("sign must be \"minus\" or \"plus\", got {other:?}"))),
    };
    let q: QForm = match v.get("scale") {
        Some(c) => scaled_pfister(&f, &f.from_json(c)?, &slots, sign)?,
        None => pfister(&f, &slots, sign)?,
    };
    let c = witt_decompose(&q)?;
    let mut text = vec![format!("form: {}", q.format())];
    text.extend(class_lines("", &c));
    Ok(Output::ok(text, json!({"form": q.to_json(), "witt_class": c.to_json()})))
}

fn predict_cmd(v: &Value) -> Result<Output, CliError> {
    let (name, g) = group_from_value(v.get("group").ok_or_else(|| CliError::Input("missing \"group\"".into()))?)?;
    let profile: FieldProfile = match v.get("profile") {
        Some(p) => serde_json::from_value(p.clone()).map_err(|e| CliError::Input(format!("profile: {e}")))?,
        None => FieldProfile::of_field(&field_of(v)?),
    };
    let simple = v.get("declared_simple").and_then(Value::as_bool).unwrap_or(false);
    let p = predict(&g, &profile, simple)?;
    let mut text = vec![
        format!("{name} (Sylow 2-subgroup of order {}, Frattini rank {})", p.sylow_order, p.frattini_rank),
        format!("hyperbolic forced: {}", p.hyperbolic_forced),
        format!("rule: {}", p.rule_fired.name()),
        p.provenance.clone(),
    ];
    if let Some(sh) = &p.shape {
        text.push(format!("shape: <{}> ⊗ {}-fold Pfister form", sh.scale, sh.pfister_rank));
    }
    let mut out = p.to_json();
    out["name"] = json!(name);
    Ok(Output::ok(text, out))
}

fn obstruction_cmd(v: &Value) -> Result<Output, CliError> {
    let f = field_of(v)?;
    let slots = elements(&f, v, "slots")?;
    let (name, g) = group_from_value(v.get("group").ok_or_else(|| CliError::Input("missing \"group\"".into()))?)?;
    let verdict = extension_obstruction(&f, &slots, &g)?;
    let text = vec![
        format!("{name} over {f} with [{}]", format_list(&f, &slots)),
        format!("Pfister form {}: hyperbolic {}", verdict.pfister.format(), verdict.pfister_hyperbolic),
        verdict.message().to_string(),
    ];
    Ok(Output::ok(text, verdict.to_json()))
}

fn verify(suite: &str, seed: u64) -> Result<Output, CliError> {
    let results = run_suite(suite, seed).ok_or_else(|| {
        CliError::Input(format!("unknown suite {suite:?}; known: all, {}", SUITES.join(", ")))
    })?;
    let mut text = Vec::new();
    for r in &results {
        text.push(r.summary());
        for fl in &r.failures {
            text.push(format!("  {}: expected {}, got {}", fl.input, fl.expected, fl.got));
        }
    }
    let ok = results.iter().all(|r| r.passed());
    Ok(Output { text, json: json!({"seed": seed, "suites": results, "ok": ok}), ok })
}
