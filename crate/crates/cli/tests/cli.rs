use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

use cychom::algebra_cat::DEFAULT_GUARD;
use cychom::ayd::GradedBModule;
use cychom::fixtures::{fixture, FIXTURE_NAMES};
use cychom::galois::StronglyGradedAlgebra;
use cychom::groupoid_alg::{build_bialgebroid, FinGroupoid, Side};
use cychom::transposition::{
    unit_transposition_alg, unit_transposition_coring, Septuple, SeptupleBundle,
};

fn scratch(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cychom-cli-{}-{tag}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn cychom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cychom"))
        .args(args)
        .env_remove("CYCHOM_GUARD")
        .output()
        .unwrap()
}

fn emit(dir: &Path, name: &str) -> PathBuf {
    emit_into(&dir.join(name), name)
}

fn emit_into(out: &Path, name: &str) -> PathBuf {
    let o = cychom(&["emit-fixture", name, "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    out.to_path_buf()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn dims(v: &Value) -> Vec<u64> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_u64().unwrap())
        .collect()
}

#[test]
fn homology_of_c2_adjoint() {
    let dir = scratch("c2");
    let f = emit(&dir, "c2");
    let o = cychom(&[
        "homology",
        "--groupoid",
        arg(&f.join("groupoid.json")),
        "--module",
        arg(&f.join("adjoint.json")),
        "--max-degree",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(dims(&v["hh"]), vec![2, 0, 0]);
    assert_eq!(dims(&v["hc"]), vec![2, 0, 2]);
}

#[test]
fn compare_agrees_on_every_fixture() {
    let dir = scratch("compare");
    for name in FIXTURE_NAMES {
        let f = emit(&dir, name);
        let o = cychom(&[
            "compare",
            "--groupoid",
            arg(&f.join("groupoid.json")),
            "--module",
            arg(&f.join("adjoint.json")),
        ]);
        assert_eq!(o.status.code(), Some(0), "{name}");
        assert_eq!(json(&o)["agree"], Value::Bool(true), "{name}");
    }
}

#[test]
fn validate_reports_missing_composite() {
    let dir = scratch("missing");
    let f = emit(&dir, "c2");
    let mut g: Value =
        serde_json::from_str(&fs::read_to_string(f.join("groupoid.json")).unwrap()).unwrap();
    g["compose"].as_array_mut().unwrap().pop();
    let bad = dir.join("bad.json");
    fs::write(&bad, g.to_string()).unwrap();
    let o = cychom(&["validate", "--groupoid", arg(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    let w = json(&o)["groupoid"]["findings"][0]["witness"]
        .as_str()
        .unwrap()
        .to_string();
    assert!(
        w.contains("missing composite") && w.contains("(s, s)"),
        "{w}"
    );
}

#[test]
fn validate_accepts_fixtures() {
    let dir = scratch("validate");
    for name in FIXTURE_NAMES {
        let f = emit(&dir, name);
        let o = cychom(&[
            "validate",
            "--groupoid",
            arg(&f.join("groupoid.json")),
            "--module",
            arg(&f.join("adjoint.json")),
            "--graded",
            arg(&f.join("graded.json")),
        ]);
        assert_eq!(
            o.status.code(),
            Some(0),
            "{name}: {}",
            String::from_utf8_lossy(&o.stdout)
        );
    }
}

#[test]
fn exit_codes() {
    let dir = scratch("codes");
    let f = emit(&dir, "s3");
    let broken = dir.join("broken.json");
    fs::write(&broken, "{").unwrap();
    assert_eq!(
        cychom(&["validate", "--groupoid", arg(&broken)])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        cychom(&["emit-fixture", "d4", "--out", arg(&dir)])
            .status
            .code(),
        Some(2)
    );
    let (gp, mp) = (f.join("groupoid.json"), f.join("adjoint.json"));
    let args = ["homology", "--groupoid", arg(&gp), "--module", arg(&mp)];
    let mut with_flag = args.to_vec();
    with_flag.extend(["--guard", "10"]);
    assert_eq!(cychom(&with_flag).status.code(), Some(3));
    let o = Command::new(env!("CARGO_BIN_EXE_cychom"))
        .args(args)
        .env("CYCHOM_GUARD", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn identical_runs_are_byte_identical() {
    let dir = scratch("determinism");
    let f = emit(&dir, "s3");
    let run = |out: &str, sub: &str| {
        let path = dir.join(out);
        let o = cychom(&[
            sub,
            "--groupoid",
            arg(&f.join("groupoid.json")),
            "--module",
            arg(&f.join("adjoint.json")),
            "--out",
            arg(&path),
        ]);
        assert!(o.status.success());
        fs::read(path).unwrap()
    };
    for sub in ["homology", "burghelea", "compare"] {
        assert_eq!(run("a.json", sub), run("b.json", sub), "{sub}");
    }
}

#[test]
fn emitted_fixtures_reload_identically() {
    let dir = scratch("reload");
    for name in FIXTURE_NAMES {
        let f = emit(&dir, name);
        let want = fixture(name).unwrap();
        let g = FinGroupoid::from_json_str(&fs::read_to_string(f.join("groupoid.json")).unwrap())
            .unwrap();
        assert_eq!(g, want.groupoid);
        let m = GradedBModule::from_json_str(
            &want.bialgebroid,
            &fs::read_to_string(f.join("adjoint.json")).unwrap(),
        )
        .unwrap();
        assert_eq!(m, want.adjoint());
        let t = StronglyGradedAlgebra::from_json_str(
            &fs::read_to_string(f.join("graded.json")).unwrap(),
        )
        .unwrap();
        assert_eq!(t, want.graded());
        let f2 = emit_into(&dir.join(format!("{name}-again")), name);
        for file in ["groupoid.json", "adjoint.json", "graded.json"] {
            assert_eq!(
                fs::read(f.join(file)).unwrap(),
                fs::read(f2.join(file)).unwrap(),
                "{name} {file}"
            );
        }
    }
}

#[test]
fn galois_on_i2() {
    let dir = scratch("galois");
    let f = emit(&dir, "i2");
    let o = cychom(&[
        "galois",
        "--graded",
        arg(&f.join("graded.json")),
        "--max-degree",
        "3",
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stdout)
    );
    let v = json(&o);
    assert_eq!(dims(&v["relative"]["hc"]), vec![1, 0, 1]);
}

#[test]
fn paracyclic_check_on_unit_transpositions() {
    let dir = scratch("para");
    let bd = build_bialgebroid(&FinGroupoid::pair(2));
    let (s, t) = unit_transposition_alg(&bd.xi_zeta, DEFAULT_GUARD).unwrap();
    let alg = SeptupleBundle::new(&Septuple::Alg(s), &t);
    let (s, t) = unit_transposition_coring(&bd.coring(Side::Right), DEFAULT_GUARD).unwrap();
    let cor = SeptupleBundle::new(&Septuple::Coring(s), &t);
    for (name, bundle, kind) in [("alg.json", alg, "cocyclic"), ("cor.json", cor, "cyclic")] {
        let path = dir.join(name);
        fs::write(&path, serde_json::to_string(&bundle).unwrap()).unwrap();
        for extract in ["none", "quotient"] {
            let o = cychom(&[
                "paracyclic-check",
                "--bundle",
                arg(&path),
                "--max-degree",
                "3",
                "--extract",
                extract,
            ]);
            assert_eq!(
                o.status.code(),
                Some(0),
                "{name} {extract}: {}",
                String::from_utf8_lossy(&o.stdout)
            );
            assert_eq!(json(&o)["kind"], Value::String(kind.into()));
        }
    }
}

#[test]
fn csv_dimension_table() {
    let dir = scratch("csv");
    let f = emit(&dir, "c2");
    let out = dir.join("dims.csv");
    let o = cychom(&[
        "homology",
        "--groupoid",
        arg(&f.join("groupoid.json")),
        "--module",
        arg(&f.join("adjoint.json")),
        "--out",
        arg(&out),
    ]);
    assert!(o.status.success());
    assert_eq!(
        fs::read_to_string(out).unwrap(),
        "degree,hh,hc\n0,2,2\n1,0,0\n2,0,2\n3,0,0\n"
    );
}
