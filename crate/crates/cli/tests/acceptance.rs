use std::process::Command;
use std::time::{Duration, Instant};

struct Run {
    code: Option<i32>,
    stdout: String,
    elapsed: Duration,
}

fn quadfun(args: &[&str]) -> Run {
    let start = Instant::now();
    let o = Command::new(env!("CARGO_BIN_EXE_quadfun"))
        .args(args)
        .env_remove("QUADFUN_MAX_ORDER")
        .env_remove("QUADFUN_MAX_ARITY")
        .env_remove("QUADFUN_FAULT")
        .output()
        .expect("run quadfun");
    Run { code: o.status.code(), stdout: String::from_utf8_lossy(&o.stdout).into_owned(), elapsed: start.elapsed() }
}

/// Runs the named suites and requires each to pass within `limit`.
fn suites(anchors: &[&str], limit: Duration) -> Result<String, String> {
    let mut args = vec!["verify", "suite"];
    args.extend_from_slice(anchors);
    let r = quadfun(&args);
    for a in anchors {
        if !r.stdout.contains(&format!("PASS {a}:")) {
            return Err(r.stdout);
        }
    }
    if r.code != Some(0) {
        return Err(format!("exit {:?}", r.code));
    }
    if r.elapsed >= limit {
        return Err(format!("took {:.2?}, limit {limit:?}", r.elapsed));
    }
    Ok(format!("{:.2?}", r.elapsed))
}

fn functor(f: &str, a: &str) -> String {
    quadfun(&["functor", f, a]).stdout.trim().to_string()
}

fn functor_tables() -> Result<String, String> {
    let mut table: Vec<(String, String, String)> = vec![
        ("P".into(), "Z".into(), "Z^2".into()),
        ("P".into(), "Z/2".into(), "Z/4Z".into()),
        ("P".into(), "Z/4".into(), "Z/2Z + Z/8Z".into()),
        ("P".into(), "Z/8".into(), "Z/4Z + Z/16Z".into()),
        ("Gamma".into(), "Z".into(), "Z".into()),
        ("Gamma".into(), "Z/2".into(), "Z/4Z".into()),
        ("Gamma".into(), "Z/4".into(), "Z/8Z".into()),
        ("Gamma".into(), "Z/8".into(), "Z/16Z".into()),
        ("Psi".into(), "Z".into(), "Z".into()),
    ];
    for q in [3, 9, 27, 5, 25, 125] {
        table.push(("P".into(), format!("Z/{q}"), format!("Z/{q}Z + Z/{q}Z")));
        table.push(("Gamma".into(), format!("Z/{q}"), format!("Z/{q}Z")));
    }
    table.push(("Psi".into(), "Z/1".into(), "0".into()));
    for n in 2..=12 {
        table.push(("Psi".into(), format!("Z/{n}"), format!("Z/{n}Z")));
    }
    for n in 1..=3 {
        for k in 1..=3 {
            let expect = if k == n { "Z/2Z" } else { "0" };
            table.push((format!("Phi{n}"), format!("Z/{}", 1 << k), expect.into()));
        }
    }
    for (f, a, expect) in &table {
        let got = functor(f, a);
        if &got != expect {
            return Err(format!("{f}({a}) = {got}, expected {expect}"));
        }
    }
    suites(&["functor-tables"], Duration::from_secs(1)).map(|t| format!("{} values, suite {t}", table.len()))
}

fn theta_certificates() -> Result<String, String> {
    for (a, zero) in [("Z/2", false), ("Z/4", false), ("Z/8", false), ("Z/45", true), ("Z/3 + Z/3", true), ("Z^2", true)] {
        let r = quadfun(&["--json", "theta", a]);
        let v: serde_json::Value = serde_json::from_str(&r.stdout).map_err(|e| e.to_string())?;
        if v["theta"]["zero"] != serde_json::json!(zero) {
            return Err(format!("theta({a}): {}", r.stdout));
        }
    }
    suites(&["theta"], Duration::from_secs(60))
}

fn round_trip() -> Result<String, String> {
    let r = quadfun(&["sg", "lift", "examples/bad_psg.txt"]);
    if r.code != Some(1) || !r.stdout.starts_with("not_psg0") {
        return Err(format!("bad_psg: exit {:?}: {}", r.code, r.stdout));
    }
    suites(&["obstruction-round-trip"], Duration::from_secs(60))
}

fn realization() -> Result<String, String> {
    let r = quadfun(&["sg", "omega", "Z/2"]);
    if r.code != Some(1) || !r.stdout.starts_with("theta_nonzero") {
        return Err(format!("lift_omega(Z/2): exit {:?}: {}", r.code, r.stdout));
    }
    suites(&["realization-psg", "realization-sg"], Duration::from_secs(60))
}

fn paper_tables() -> Result<String, String> {
    let r = quadfun(&["verify", "paper-tables"]);
    if r.code != Some(0) {
        return Err(r.stdout);
    }
    if r.elapsed >= Duration::from_secs(60) {
        return Err(format!("took {:.2?}", r.elapsed));
    }
    Ok(format!("{:.2?}", r.elapsed))
}

type Criterion = (&'static str, Box<dyn Fn() -> Result<String, String>>);

#[test]
fn acceptance() {
    let criteria: Vec<Criterion> = vec![
        ("1 functor tables", Box::new(functor_tables)),
        ("2 exact sequences", Box::new(|| suites(&["exact-sequences"], Duration::from_secs(10)))),
        ("3 oracle equivalence", Box::new(|| suites(&["oracle-agreement"], Duration::from_secs(60)))),
        ("4 theta", Box::new(theta_certificates)),
        ("5 omega invariants", Box::new(|| suites(&["omega-invariants"], Duration::from_secs(60)))),
        ("6 coproduct laws", Box::new(|| suites(&["coproduct-laws"], Duration::from_secs(60)))),
        ("7 obstruction round trip", Box::new(round_trip)),
        ("8 realization pipelines", Box::new(realization)),
        ("9 delta", Box::new(|| suites(&["delta"], Duration::from_secs(60)))),
        ("10 verify paper-tables", Box::new(paper_tables)),
    ];
    let mut failed = Vec::new();
    for (name, check) in &criteria {
        match check() {
            Ok(detail) => println!("PASS {name} ({detail})"),
            Err(detail) => {
                println!("FAIL {name}: {detail}");
                failed.push(*name);
            }
        }
    }
    assert!(failed.is_empty(), "failed: {failed:?}");
}
