//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Dimensions are compared for exact equality. The only tolerances are
//! the wall-clock bounds below.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use cychom::algebra_cat::DEFAULT_GUARD;
use cychom::ayd::{adjoint_module, trivial_at_identity, validate_ayd};
use cychom::complexes::{validate_paracocyclic, validate_paracyclic, Mode, ParaCyclicModule};
use cychom::fixtures::{all_fixtures, fixture, Fixture};
use cychom::galois::{omega_iso, ts_module, validate_galois};
use cychom::groupoid_alg::{build_bialgebroid, validate_hopf_axioms, Side};
use cychom::groupoid_homology::{
    burghelea_dims, compare, cyclic_simplex, homology, resolution_homology,
};
use cychom::qlinalg::Rational;
use cychom::transposition::{
    build_para, canonical_relative, relative_cyclic_object, unit_transposition_alg,
    unit_transposition_coring, Extract, ParaObject, Septuple, Transposition,
};

/// Wall-clock bound for criterion 1.
const C2_BUDGET: Duration = Duration::from_secs(60);
/// Wall-clock bound for criterion 2.
const S3_BUDGET: Duration = Duration::from_secs(300);
/// Chains in degrees 0..=4, homology reported in degrees 0..=3.
const TOP: usize = 4;
/// ω and cyclic-power checks run in degrees 0..=3.
const OMEGA_TOP: usize = 3;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn dims_eq(what: &str, got: &[usize], want: &[usize]) -> Result<(), String> {
    ensure(got == want, format!("{what}: got {got:?}, want {want:?}"))
}

fn c1_c2_adjoint() -> Check {
    let start = Instant::now();
    let m = fixture("c2").unwrap().adjoint();
    let d = homology(&m, TOP, DEFAULT_GUARD).map_err(|e| e.to_string())?;
    let b = burghelea_dims(&m, TOP).map_err(|e| e.to_string())?;
    for (route, r) in [("homology", &d), ("burghelea", &b)] {
        dims_eq(&format!("{route} hh"), &r.hh, &[2, 0, 0, 0])?;
        dims_eq(&format!("{route} hc"), &r.hc, &[2, 0, 2, 0])?;
    }
    let t = start.elapsed();
    ensure(t < C2_BUDGET, format!("took {t:?}"))?;
    Ok(format!("hh {:?} hc {:?} in {t:.2?}", d.hh, d.hc))
}

fn c2_s3() -> Check {
    let start = Instant::now();
    let f = fixture("s3").unwrap();
    let triv = homology(&trivial_at_identity(&f.bialgebroid, 0), TOP, DEFAULT_GUARD)
        .map_err(|e| e.to_string())?;
    dims_eq("trivial hc", &triv.hc, &[1, 0, 1, 0])?;
    let adj = homology(&f.adjoint(), TOP, DEFAULT_GUARD).map_err(|e| e.to_string())?;
    dims_eq("adjoint hc", &adj.hc, &[3, 0, 3, 0])?;
    let t = start.elapsed();
    ensure(t < S3_BUDGET, format!("took {t:?}"))?;
    Ok(format!(
        "trivial hc {:?}, adjoint hc {:?} in {t:.2?}",
        triv.hc, adj.hc
    ))
}

fn c3_i2() -> Check {
    let mut out = Vec::new();
    for name in ["i2", "gset-swap"] {
        let f = fixture(name).unwrap();
        let r = homology(&f.adjoint(), TOP, DEFAULT_GUARD).map_err(|e| e.to_string())?;
        dims_eq(&format!("{name} hh"), &r.hh, &[1, 0, 0, 0])?;
        dims_eq(&format!("{name} hc"), &r.hc, &[1, 0, 1, 0])?;
        out.push(format!("{name} hh {:?} hc {:?}", r.hh, r.hc));
    }
    ensure(
        fixture("gset-swap")
            .unwrap()
            .groupoid
            .is_isomorphic(&fixture("i2").unwrap().groupoid),
        "gset-swap ≇ i2",
    )?;
    Ok(out.join("; "))
}

fn c4_compare() -> Check {
    let mut count = 0;
    for f in all_fixtures() {
        for (name, m) in f.modules() {
            ensure(
                validate_ayd(&m, true).is_ok(),
                format!("{} {name} is not a stable aYD module", f.name),
            )?;
            let c =
                compare(&m, TOP, DEFAULT_GUARD).map_err(|e| format!("{} {name}: {e}", f.name))?;
            ensure(
                c.agree,
                format!(
                    "{} {name}: direct {:?}/{:?} vs formula {:?}/{:?}",
                    f.name, c.direct.hh, c.direct.hc, c.burghelea.hh, c.burghelea.hc
                ),
            )?;
            count += 1;
        }
    }
    Ok(format!("{count} fixture modules agree"))
}

fn c5_hopf() -> Check {
    for f in all_fixtures() {
        let bd = &f.bialgebroid;
        ensure(
            bd.theta.mul(&bd.theta_inv).is_identity(),
            format!("{}: θθ⁻¹ ≠ id", f.name),
        )?;
        ensure(
            bd.theta_inv.mul(&bd.theta).is_identity(),
            format!("{}: θ⁻¹θ ≠ id", f.name),
        )?;
        for side in [Side::Right, Side::Left] {
            let rep = validate_hopf_axioms(bd, side);
            ensure(
                rep.is_ok(),
                format!("{} {side:?}: {:?}", f.name, rep.findings),
            )?;
        }
    }
    // perturbations on I2
    let clean = build_bialgebroid(&fixture("i2").unwrap().groupoid);
    let mut caught = Vec::new();
    let first_entry = |m: &cychom::qlinalg::RationalMatrix| {
        (0..m.cols())
            .find_map(|c| m.column(c).first().map(|(r, _)| (*r, c)))
            .unwrap()
    };
    let mut bd = clean.clone();
    let (r, c) = first_entry(&bd.theta);
    bd.theta.set(r, c, Rational::zero());
    caught.push(("zeroed θ entry", validate_hopf_axioms(&bd, Side::Right)));
    let mut bd = clean.clone();
    let (r, c) = first_entry(&bd.theta_inv);
    bd.theta_inv.set(r, c, Rational::from_int(2));
    caught.push(("scaled θ⁻¹ entry", validate_hopf_axioms(&bd, Side::Right)));
    let mut bd = clean.clone();
    let (r, c) = first_entry(&bd.delta);
    bd.delta.set(r, c, Rational::from_int(3));
    caught.push(("scaled Δ entry", validate_hopf_axioms(&bd, Side::Right)));
    let mut names = Vec::new();
    for (what, rep) in caught {
        ensure(!rep.is_ok(), format!("{what} went undetected"))?;
        names.push(format!("{what} → {}", rep.findings[0].check));
    }
    Ok(names.join("; "))
}

fn unit_objects(f: &Fixture) -> Result<Vec<(Septuple, Transposition)>, String> {
    let bd = &f.bialgebroid;
    let (sa, ta) = unit_transposition_alg(&bd.xi_zeta, DEFAULT_GUARD).map_err(|e| e.to_string())?;
    let mut out = vec![(Septuple::Alg(sa), ta)];
    for side in [Side::Right, Side::Left] {
        let (sc, tc) = unit_transposition_coring(&bd.coring(side), DEFAULT_GUARD)
            .map_err(|e| e.to_string())?;
        out.push((Septuple::Coring(sc), tc));
    }
    Ok(out)
}

fn para_violations(obj: &ParaObject, mode: Mode) -> Vec<String> {
    match obj {
        ParaObject::Cocyclic(m) => validate_paracocyclic(m, mode)
            .into_iter()
            .map(|v| v.identity)
            .collect(),
        ParaObject::Cyclic(m) => validate_paracyclic(m, mode)
            .into_iter()
            .map(|v| v.identity)
            .collect(),
    }
}

fn c6_paracyclic() -> Check {
    let mut checked = 0;
    let cyclic_check = |what: &str, m: &ParaCyclicModule| -> Result<(), String> {
        let v = validate_paracyclic(m, Mode::Cyclic);
        ensure(
            v.is_empty(),
            format!(
                "{what}: {:?}",
                v.iter().map(|x| &x.identity).collect::<Vec<_>>()
            ),
        )
    };
    for f in all_fixtures() {
        for (s, t) in unit_objects(&f)? {
            for ex in [Extract::None, Extract::Quotient, Extract::Subobject] {
                let obj =
                    build_para(&s, &t, OMEGA_TOP, ex, DEFAULT_GUARD).map_err(|e| e.to_string())?;
                let mode = if ex == Extract::None {
                    Mode::Para
                } else {
                    Mode::Cyclic
                };
                let v = para_violations(&obj, mode);
                ensure(v.is_empty(), format!("{} build_para {ex:?}: {v:?}", f.name))?;
                checked += 1;
            }
        }
        for (name, m) in f.modules() {
            let cs = cyclic_simplex(&m, OMEGA_TOP, DEFAULT_GUARD).map_err(|e| e.to_string())?;
            cyclic_check(&format!("{} {name} cyclic_simplex", f.name), &cs.module)?;
            checked += 1;
        }
        let t = f.graded();
        let incl = cychom::algebra_cat::AlgebraMorphism {
            source: f.bialgebroid.r.clone(),
            target: t.algebra.clone(),
            matrix: f.bialgebroid.xi_zeta.matrix.clone(),
        };
        let (x, v) = canonical_relative(&incl, DEFAULT_GUARD).map_err(|e| e.to_string())?;
        let rel = relative_cyclic_object(&incl, &v, &x, OMEGA_TOP, DEFAULT_GUARD)
            .map_err(|e| e.to_string())?;
        cyclic_check(&format!("{} relative_cyclic_object", f.name), &rel)?;
        checked += 1;
    }
    // a perturbed face must be named
    let mut m = cyclic_simplex(
        &adjoint_module(&build_bialgebroid(&fixture("c2").unwrap().groupoid)),
        OMEGA_TOP,
        DEFAULT_GUARD,
    )
    .map_err(|e| e.to_string())?
    .module;
    let old = m.faces[2][1].get(0, 0);
    m.faces[2][1].set(0, 0, &old + &Rational::one());
    let v = validate_paracyclic(&m, Mode::Para);
    ensure(!v.is_empty(), "perturbed d_1 in degree 2 went undetected")?;
    Ok(format!(
        "{checked} objects clean; perturbation flagged as \"{}\"",
        v[0].identity
    ))
}

fn c7_galois() -> Check {
    for f in all_fixtures() {
        let t = f.graded();
        let rep = validate_galois(&t, DEFAULT_GUARD);
        ensure(rep.is_ok(), format!("{}: {:?}", f.name, rep.findings))?;
        let ts = ts_module(&t, DEFAULT_GUARD).map_err(|e| e.to_string())?;
        ensure(
            ts == f.adjoint(),
            format!("{}: T_S differs from the adjoint module", f.name),
        )?;
        let om = omega_iso(&t, OMEGA_TOP, DEFAULT_GUARD).map_err(|e| e.to_string())?;
        ensure(
            om.findings.is_ok(),
            format!("{}: {:?}", f.name, om.findings.findings),
        )?;
    }
    Ok("can bijective, pentagon, T_S = adjoint, ω chain isomorphism on all fixtures".into())
}

fn c8_cokernel() -> Check {
    for f in all_fixtures() {
        for (name, m) in f.modules() {
            let cs = cyclic_simplex(&m, TOP, DEFAULT_GUARD)
                .map_err(|e| format!("{} {name}: {e}", f.name))?;
            dims_eq(
                &format!("{} {name}", f.name),
                &cs.cokernel_dims,
                &cs.module.dims,
            )?;
        }
    }
    Ok(format!("degrees 0..={TOP}"))
}

fn c9_resolution() -> Check {
    let mut count = 0;
    for f in all_fixtures() {
        for x in 0..f.groupoid.n_objects() {
            let h = resolution_homology(&f.groupoid, x, TOP).map_err(|e| e.to_string())?;
            dims_eq(&format!("{} object {x}", f.name), &h, &[1, 0, 0, 0])?;
            count += 1;
        }
    }
    Ok(format!("{count} objects acyclic in positive degrees"))
}

fn scratch() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cychom-acceptance-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn cli(args: &[&str]) -> Result<Vec<u8>, String> {
    let o = Command::new(env!("CARGO_BIN_EXE_cychom"))
        .args(args)
        .env_remove("CYCHOM_GUARD")
        .output()
        .map_err(|e| e.to_string())?;
    ensure(
        o.status.success(),
        format!("{args:?} exited with {:?}", o.status.code()),
    )?;
    Ok(o.stdout)
}

fn c10_determinism() -> Check {
    let dir = scratch();
    let mut runs = 0;
    for name in ["c2", "s3", "i2"] {
        let d = dir.join(name);
        let p = |f: &str| -> String { d.join(f).to_str().unwrap().to_string() };
        cli(&["emit-fixture", name, "--out", d.to_str().unwrap()])?;
        let (g, m, t) = (p("groupoid.json"), p("adjoint.json"), p("graded.json"));
        let cases: Vec<Vec<&str>> = vec![
            vec!["homology", "--groupoid", &g, "--module", &m],
            vec!["burghelea", "--groupoid", &g, "--module", &m],
            vec!["compare", "--groupoid", &g, "--module", &m],
            vec!["validate", "--groupoid", &g, "--module", &m, "--graded", &t],
            vec!["galois", "--graded", &t, "--max-degree", "3"],
        ];
        for args in cases {
            let a = cli(&args)?;
            let b = cli(&args)?;
            ensure(a == b, format!("{name} {}: outputs differ", args[0]))?;
            runs += 1;
        }
    }
    let _ = std::fs::remove_dir_all(Path::new(&dir));
    Ok(format!("{runs} repeated CLI runs byte-identical"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("ℚ[ℤ/2] adjoint HH/HC, both routes", c1_c2_adjoint),
        ("ℚ[S3] trivial-at-e and adjoint HC", c2_s3),
        ("pair groupoid I2 HH/HC", c3_i2),
        ("formula vs direct on every fixture module", c4_compare),
        ("×_R-Hopf identities and perturbations", c5_hopf),
        ("para-(co)cyclic identity suites", c6_paracyclic),
        ("Galois suite", c7_galois),
        ("cokernel vs normal-form dimensions", c8_cokernel),
        ("bar resolution acyclicity", c9_resolution),
        ("CLI determinism", c10_determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match res {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
