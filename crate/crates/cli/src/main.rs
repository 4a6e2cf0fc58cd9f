//! `cychom`: validators and homology computations over JSON inputs.
//!
//! Exit codes: 0 clean, 1 violations or disagreement, 2 unreadable input,
//! 3 basis-size guard exceeded.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use cychom::algebra_cat::{AlgError, DEFAULT_GUARD};
use cychom::ayd::{validate_ayd, GradedBModule};
use cychom::complexes::{validate_paracocyclic, validate_paracyclic, Mode};
use cychom::fixtures::{fixture, FIXTURE_NAMES};
use cychom::galois::{
    omega_iso, relative_compare, ts_data, validate_galois, GaloisError, StronglyGradedAlgebra,
};
use cychom::groupoid_alg::{
    build_bialgebroid, groupoid_json_error, validate_hopf_axioms, FinGroupoid, Side,
};
use cychom::groupoid_homology::{burghelea_dims, compare, homology, HomologyError};
use cychom::report::Report;
use cychom::transposition::{build_para, Extract, ParaObject, SeptupleBundle, TranspositionError};

#[derive(Parser)]
#[command(
    name = "cychom",
    version,
    about = "Exact Hochschild and cyclic homology of finite groupoid algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Chains are built in degrees 0..=N; homology is reported in 0..N.
    #[arg(long, global = true, default_value_t = 4)]
    max_degree: usize,
    #[arg(long, global = true, value_enum, default_value_t = Method::Direct)]
    method: Method,
    /// Report file (`.csv` writes the dimension table); a directory for `emit-fixture`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Cap on tensor basis sizes.
    #[arg(long, global = true, env = "CYCHOM_GUARD", default_value_t = DEFAULT_GUARD as u64,
          value_parser = clap::value_parser!(u64).range(1..))]
    guard: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Groupoid, bialgebroid, aYD and Galois reports.
    Validate(Inputs),
    /// Homology of the cyclic simplex.
    Homology(Inputs),
    /// Homology from the orbit formula.
    Burghelea(Inputs),
    /// Both routes and whether they agree.
    Compare(Inputs),
    /// Galois checks, the ω maps and relative homology.
    Galois(Inputs),
    /// Build and check the para-(co)cyclic object of a septuple bundle.
    ParacyclicCheck {
        #[arg(long)]
        bundle: PathBuf,
        #[arg(long, value_enum, default_value_t = ExtractArg::None)]
        extract: ExtractArg,
    },
    /// Write the JSON inputs of a named example.
    EmitFixture { name: String },
}

#[derive(Args)]
struct Inputs {
    #[arg(long)]
    groupoid: Option<PathBuf>,
    #[arg(long)]
    module: Option<PathBuf>,
    #[arg(long)]
    graded: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Direct,
    Burghelea,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExtractArg {
    None,
    Quotient,
    Subobject,
}

enum Failure {
    Parse(String),
    Guard(String),
    /// A report that failed validation before the main computation.
    Violations(Value),
}

type Outcome = Result<Value, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.out.clone();
    let result = match &cli.command {
        Command::EmitFixture { name } => {
            emit_fixture(name, out.as_deref().unwrap_or(Path::new(".")))
        }
        _ => run(&cli),
    };
    let report = match result {
        Ok(v) => v,
        Err(Failure::Violations(v)) => v,
        Err(Failure::Parse(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
        Err(Failure::Guard(msg)) => {
            eprintln!("guard exceeded: {msg}");
            return ExitCode::from(3);
        }
    };
    let ok = report.get("ok").and_then(Value::as_bool).unwrap_or(false);
    let written = match (&cli.command, &out) {
        (Command::EmitFixture { .. }, _) | (_, None) => {
            print!("{}", render(&report));
            Ok(())
        }
        (_, Some(path)) if path.extension().is_some_and(|e| e == "csv") => match csv_table(&report)
        {
            Some(text) => fs::write(path, text).map_err(|e| e.to_string()),
            None => Err("CSV output covers dimension tables only".into()),
        },
        (_, Some(path)) => fs::write(path, render(&report)).map_err(|e| e.to_string()),
    };
    if let Err(msg) = written {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run(cli: &Cli) -> Outcome {
    let n = cli.max_degree;
    let guard = cli.guard as usize;
    match &cli.command {
        Command::Validate(inp) => validate(inp, guard),
        Command::Homology(inp) => {
            let m = load_module(inp)?;
            let mut v = match cli.method {
                Method::Direct => to_value(homology(&m, n, guard).map_err(homology_failure)?),
                Method::Burghelea => to_value(burghelea_dims(&m, n).map_err(homology_failure)?),
                Method::Both => return compare_report(&m, n, guard, "homology"),
            };
            finish(&mut v, "homology", n, true);
            Ok(v)
        }
        Command::Burghelea(inp) => {
            let m = load_module(inp)?;
            let mut v = to_value(burghelea_dims(&m, n).map_err(homology_failure)?);
            finish(&mut v, "burghelea", n, true);
            Ok(v)
        }
        Command::Compare(inp) => {
            let m = load_module(inp)?;
            compare_report(&m, n, guard, "compare")
        }
        Command::Galois(inp) => galois(inp, n, guard),
        Command::ParacyclicCheck { bundle, extract } => paracyclic(bundle, *extract, n, guard),
        Command::EmitFixture { .. } => unreachable!("handled in main"),
    }
}

fn to_value<T: serde::Serialize>(x: T) -> Value {
    serde_json::to_value(x).expect("plain data")
}

fn finish(v: &mut Value, subcommand: &str, n: usize, ok: bool) {
    let obj = v.as_object_mut().expect("object report");
    obj.insert("subcommand".into(), json!(subcommand));
    obj.insert("max_degree".into(), json!(n));
    obj.insert("ok".into(), json!(ok));
}

fn compare_report(m: &GradedBModule, n: usize, guard: usize, subcommand: &str) -> Outcome {
    let c = compare(m, n, guard).map_err(homology_failure)?;
    let ok = c.agree;
    let mut v = to_value(c);
    finish(&mut v, subcommand, n, ok);
    Ok(v)
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn violations(section: &str, rep: &Report) -> Failure {
    Failure::Violations(json!({ section: rep, "ok": false }))
}

fn load_groupoid(path: &Path) -> Result<FinGroupoid, Failure> {
    let text = read(path)?;
    if let Some(err) = groupoid_json_error(&text) {
        let mut rep = Report::new();
        rep.push("groupoid", err.to_string());
        return Err(violations("groupoid", &rep));
    }
    FinGroupoid::from_json_str(&text)
        .map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn load_module(inp: &Inputs) -> Result<GradedBModule, Failure> {
    let gpath = inp
        .groupoid
        .as_deref()
        .ok_or_else(|| Failure::Parse("--groupoid is required".into()))?;
    let mpath = inp
        .module
        .as_deref()
        .ok_or_else(|| Failure::Parse("--module is required".into()))?;
    let bd = build_bialgebroid(&load_groupoid(gpath)?);
    GradedBModule::from_json_str(&bd, &read(mpath)?)
        .map_err(|e| Failure::Parse(format!("{}: {e}", mpath.display())))
}

fn load_graded(path: &Path) -> Result<StronglyGradedAlgebra, Failure> {
    StronglyGradedAlgebra::from_json_str(&read(path)?)
        .map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn homology_failure(e: HomologyError) -> Failure {
    match e {
        HomologyError::Guard { .. } => Failure::Guard(e.to_string()),
        HomologyError::NotAyd(rep) => violations("ayd", &rep),
        HomologyError::NotStable(rep) => violations("stability", &rep),
        other => {
            let mut rep = Report::new();
            rep.push("homology", other.to_string());
            violations("homology", &rep)
        }
    }
}

fn alg_failure(e: &AlgError) -> Option<Failure> {
    matches!(e, AlgError::GuardExceeded { .. }).then(|| Failure::Guard(e.to_string()))
}

fn galois_failure(e: GaloisError) -> Failure {
    match e {
        GaloisError::Invalid(rep) => violations("galois", &rep),
        GaloisError::Homology(h) => homology_failure(h),
        GaloisError::Alg(ref a) | GaloisError::Transposition(TranspositionError::Alg(ref a))
            if alg_failure(a).is_some() =>
        {
            alg_failure(a).expect("guard")
        }
        other => {
            let mut rep = Report::new();
            rep.push("galois", other.to_string());
            violations("galois", &rep)
        }
    }
}

fn validate(inp: &Inputs, guard: usize) -> Outcome {
    if inp.groupoid.is_none() && inp.graded.is_none() {
        return Err(Failure::Parse("give --groupoid and/or --graded".into()));
    }
    let mut out = Map::new();
    let mut ok = true;
    if let Some(path) = &inp.groupoid {
        let g = load_groupoid(path)?;
        let bd = build_bialgebroid(&g);
        let right = validate_hopf_axioms(&bd, Side::Right);
        let left = validate_hopf_axioms(&bd, Side::Left);
        ok &= right.is_ok() && left.is_ok();
        out.insert("groupoid".into(), to_value(Report::new()));
        out.insert(
            "bialgebroid".into(),
            json!({ "right": right, "left": left }),
        );
        if let Some(mpath) = &inp.module {
            let m = GradedBModule::from_json_str(&bd, &read(mpath)?)
                .map_err(|e| Failure::Parse(format!("{}: {e}", mpath.display())))?;
            let ayd = validate_ayd(&m, false);
            let stable = validate_ayd(&m, true);
            ok &= stable.is_ok();
            out.insert(
                "module".into(),
                json!({ "ayd": ayd, "stable": stable.is_ok(), "stability": stable }),
            );
        }
    } else if inp.module.is_some() {
        return Err(Failure::Parse("--module needs --groupoid".into()));
    }
    if let Some(path) = &inp.graded {
        let t = load_graded(path)?;
        let rep = validate_galois(&t, guard);
        ok &= rep.is_ok();
        out.insert("galois".into(), to_value(rep));
    }
    out.insert("subcommand".into(), json!("validate"));
    out.insert("ok".into(), json!(ok));
    Ok(Value::Object(out))
}

fn galois(inp: &Inputs, n: usize, guard: usize) -> Outcome {
    let path = inp
        .graded
        .as_deref()
        .ok_or_else(|| Failure::Parse("--graded is required".into()))?;
    let t = load_graded(path)?;
    let rep = validate_galois(&t, guard);
    if !rep.is_ok() {
        return Err(violations("galois", &rep));
    }
    let ts = ts_data(&t).map_err(galois_failure)?;
    let stable = validate_ayd(&ts.module, true);
    let om = omega_iso(&t, n, guard).map_err(galois_failure)?;
    let rel = relative_compare(&t, n, guard).map_err(galois_failure)?;
    let ok = stable.is_ok() && om.findings.is_ok() && rel.agree;
    let dims: Vec<usize> = om.omega.iter().map(|m| m.cols()).collect();
    Ok(json!({
        "subcommand": "galois",
        "max_degree": n,
        "galois": rep,
        "ts_module": ts.module.to_json_value(),
        "ts_stability": stable,
        "omega": { "dims": dims, "findings": om.findings },
        "relative": rel,
        "ok": ok,
    }))
}

fn paracyclic(bundle: &Path, extract: ExtractArg, n: usize, guard: usize) -> Outcome {
    let b: SeptupleBundle = serde_json::from_str(&read(bundle)?)
        .map_err(|e| Failure::Parse(format!("{}: {e}", bundle.display())))?;
    let (s, t) = b.into_parts().map_err(Failure::Parse)?;
    let ex = match extract {
        ExtractArg::None => Extract::None,
        ExtractArg::Quotient => Extract::Quotient,
        ExtractArg::Subobject => Extract::Subobject,
    };
    let obj = match build_para(&s, &t, n, ex, guard) {
        Ok(o) => o,
        Err(TranspositionError::Invalid(rep)) | Err(TranspositionError::Axioms(rep)) => {
            return Err(violations("transposition", &rep))
        }
        Err(TranspositionError::Alg(a)) if alg_failure(&a).is_some() => {
            return Err(alg_failure(&a).expect("guard"))
        }
        Err(other) => return Err(Failure::Parse(other.to_string())),
    };
    let modes: &[Mode] = if extract == ExtractArg::None {
        &[Mode::Para]
    } else {
        &[Mode::Para, Mode::Cyclic]
    };
    let (kind, dims, found) = match &obj {
        ParaObject::Cocyclic(m) => (
            "cocyclic",
            m.dims.clone(),
            modes
                .iter()
                .flat_map(|&md| validate_paracocyclic(m, md))
                .collect::<Vec<_>>(),
        ),
        ParaObject::Cyclic(m) => (
            "cyclic",
            m.dims.clone(),
            modes
                .iter()
                .flat_map(|&md| validate_paracyclic(m, md))
                .collect::<Vec<_>>(),
        ),
    };
    Ok(json!({
        "subcommand": "paracyclic-check",
        "max_degree": n,
        "kind": kind,
        "dims": dims,
        "violations": found,
        "ok": found.is_empty(),
    }))
}

fn emit_fixture(name: &str, dir: &Path) -> Outcome {
    let f = fixture(name).ok_or_else(|| {
        Failure::Parse(format!(
            "unknown fixture {name}; known: {}",
            FIXTURE_NAMES.join(", ")
        ))
    })?;
    fs::create_dir_all(dir).map_err(|e| Failure::Parse(format!("{}: {e}", dir.display())))?;
    let mut written = Vec::new();
    for (file, value) in f.files() {
        let path = dir.join(&file);
        fs::write(&path, render(&value))
            .map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
        written.push(path.display().to_string());
    }
    Ok(json!({ "subcommand": "emit-fixture", "fixture": name, "files": written, "ok": true }))
}

/// Pretty JSON with object keys sorted at every level.
fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(&sorted(v)).expect("plain data");
    s.push('\n');
    s
}

fn sorted(v: &Value) -> Value {
    match v {
        Value::Object(m) => {
            let mut keys: Vec<&String> = m.keys().collect();
            keys.sort();
            Value::Object(
                keys.into_iter()
                    .map(|k| (k.clone(), sorted(&m[k])))
                    .collect(),
            )
        }
        Value::Array(a) => Value::Array(a.iter().map(sorted).collect()),
        other => other.clone(),
    }
}

fn csv_table(report: &Value) -> Option<String> {
    let src = report.get("direct").unwrap_or(report);
    let col = |k: &str| -> Option<Vec<u64>> {
        src.get(k)?.as_array()?.iter().map(Value::as_u64).collect()
    };
    let (hh, hc) = (col("hh")?, col("hc")?);
    let mut out = String::from("degree,hh,hc\n");
    for (d, (a, b)) in hh.iter().zip(&hc).enumerate() {
        out.push_str(&format!("{d},{a},{b}\n"));
    }
    Some(out)
}
