use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn pum(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pum"))
        .current_dir(dir)
        .args(args)
        .env_remove("PUM_THREADS")
        .output()
        .expect("spawn pum")
}

/// Small deterministic matrix: left-leaning legislators say Yes on even items.
fn write_votes(dir: &Path) {
    let (n, m) = (12, 24);
    let mut s = String::from("legislator");
    for j in 0..m {
        s.push_str(&format!(",v{j}"));
    }
    s.push('\n');
    let mut h: u64 = 7;
    for i in 0..n {
        s.push_str(&format!("L{i}"));
        for j in 0..m {
            h = h.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let noise = (h >> 33) % 10 == 0;
            let cut = (j % 6) as i64 * 2;
            let left = (i as i64) < cut;
            let yes = (left == (j % 2 == 0)) ^ noise;
            let cell = if (h >> 20) % 17 == 0 { "NA" } else if yes { "1" } else { "0" };
            s.push(',');
            s.push_str(cell);
        }
        s.push('\n');
    }
    fs::write(dir.join("votes.csv"), s).unwrap();
    let mut t = String::from("item,term\n");
    for j in 0..m {
        t.push_str(&format!("v{j},{}\n", 2000 + j / 8));
    }
    fs::write(dir.join("terms.csv"), t).unwrap();
}

const SHORT: [&str; 6] = ["--num-iter", "60", "--burn-in", "20", "--keep", "2"];

fn fit_static(dir: &Path, out: &str, threads: &str) -> Output {
    let mut args = vec!["--threads", threads, "fit-static", "--votes", "votes.csv", "--pos-leg", "L0", "--out", out];
    args.extend(SHORT);
    pum(dir, &args)
}

#[test]
fn usage_errors_exit_2() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(pum(d.path(), &["fit-static", "--bogus"]).status.code(), Some(2));
    assert_eq!(pum(d.path(), &["no-such-command"]).status.code(), Some(2));
    assert_eq!(pum(d.path(), &["--help"]).status.code(), Some(0));
}

#[test]
fn error_codes_by_kind() {
    let d = tempfile::tempdir().unwrap();
    write_votes(d.path());
    let missing = pum(d.path(), &["fit-static", "--votes", "absent.csv", "--pos-leg", "L0"]);
    assert_eq!(missing.status.code(), Some(3));
    let err = String::from_utf8_lossy(&missing.stderr);
    assert!(err.starts_with("pum: error: "), "{err}");
    assert_eq!(err.lines().count(), 1);

    let bad_ctl = pum(d.path(), &["fit-static", "--votes", "votes.csv", "--pos-leg", "L0", "--num-iter", "10", "--burn-in", "10"]);
    assert_eq!(bad_ctl.status.code(), Some(4));
    let bad_hyper = pum(d.path(), &["fit-static", "--votes", "votes.csv", "--pos-leg", "L0", "--alpha-scale=-1"]);
    assert_eq!(bad_hyper.status.code(), Some(4));
    let bad_leg = pum(d.path(), &["fit-static", "--votes", "votes.csv", "--pos-leg", "NOBODY", "--num-iter", "10", "--burn-in", "0"]);
    assert_eq!(bad_leg.status.code(), Some(5));
    let no_refs = pum(d.path(), &["fit-dynamic", "--votes", "votes.csv", "--time-index", "terms.csv"]);
    assert_eq!(no_refs.status.code(), Some(4));
}

#[test]
fn help_lists_defaults() {
    let d = tempfile::tempdir().unwrap();
    let out = pum(d.path(), &["fit-static", "--help"]);
    let help = String::from_utf8_lossy(&out.stdout);
    for want in ["[default: -2,10]", "[default: 5]", "[default: 400000]", "[default: 200000]", "[default: 10]", "[default: 0.1]"] {
        assert!(help.contains(want), "missing {want}");
    }
}

#[test]
fn static_pipeline_is_thread_invariant() {
    let d = tempfile::tempdir().unwrap();
    write_votes(d.path());
    assert!(fit_static(d.path(), "one", "1").status.success());
    assert!(fit_static(d.path(), "four", "4").status.success());
    for f in ["beta.csv", "alpha.csv", "delta.csv", "z.csv"] {
        let a = fs::read(d.path().join("one").join(f)).unwrap();
        let b = fs::read(d.path().join("four").join(f)).unwrap();
        assert_eq!(a, b, "{f} differs across thread counts");
    }
    let beta = fs::read_to_string(d.path().join("one/beta.csv")).unwrap();
    assert_eq!(beta.lines().count(), 1 + 20);

    let manifest: serde_json::Value =
        serde_json::from_slice(&fs::read(d.path().join("one/manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "fit-static");
    assert_eq!(manifest["config"]["control"]["num_iter"], 60);
    assert_eq!(manifest["inputs"][0]["sha256"].as_str().unwrap().len(), 64);

    let p = pum(d.path(), &["predict", "--votes", "votes.csv", "--samples", "one", "--out", "pred.csv"]);
    assert!(p.status.success());
    let pred = fs::read_to_string(d.path().join("pred.csv")).unwrap();
    assert_eq!(pred.lines().count(), 13);
    for line in pred.lines().skip(1) {
        for v in line.split(',').skip(1) {
            let x: f64 = v.parse().unwrap();
            assert!((0.0..=1.0).contains(&x));
        }
    }

    let w = pum(d.path(), &["waic", "--votes", "votes.csv", "--samples", "one", "--out", "waic.json"]);
    assert!(w.status.success());
    let report: serde_json::Value =
        serde_json::from_slice(&fs::read(d.path().join("waic.json")).unwrap()).unwrap();
    assert!(report["waic"].as_f64().unwrap().is_finite());
    assert_eq!(report["n_blocks"], 12);

    assert!(pum(d.path(), &["rank", "--samples", "one", "--out", "rank.csv"]).status.success());
    assert!(pum(d.path(), &["curves", "--samples", "one", "--item", "v3", "--grid", "11", "--out", "c.csv"])
        .status
        .success());
    assert_eq!(fs::read_to_string(d.path().join("c.csv")).unwrap().lines().count(), 12);
}

#[test]
fn dynamic_pipeline_reports_per_term_waic() {
    let d = tempfile::tempdir().unwrap();
    write_votes(d.path());
    let mut args = vec![
        "fit-dynamic", "--votes", "votes.csv", "--time-index", "terms.csv", "--pos-leg", "L0@1,2", "--out", "dyn",
    ];
    args.extend(SHORT);
    let out = pum(d.path(), &args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(fs::read_to_string(d.path().join("dyn/rho.csv")).unwrap().lines().count(), 21);

    let w = pum(d.path(), &["waic", "--votes", "votes.csv", "--samples", "dyn", "--out", "w.json", "--csv", "w.csv"]);
    assert!(w.status.success());
    let csv = fs::read_to_string(d.path().join("w.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 1 + 3 + 1);
    assert!(lines[4].starts_with("total,"));

    let bad = pum(d.path(), &["fit-dynamic", "--votes", "votes.csv", "--time-index", "terms.csv", "--pos-leg", "L0@9"]);
    assert_eq!(bad.status.code(), Some(4));
}

#[test]
fn preprocess_and_tune() {
    let d = tempfile::tempdir().unwrap();
    write_votes(d.path());
    let out = pum(
        d.path(),
        &["preprocess", "--votes", "votes.csv", "--leg-rm", "L11", "--combine", "L9,L10:I", "--out", "clean.csv", "--report", "r.json"],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let clean = fs::read_to_string(d.path().join("clean.csv")).unwrap();
    assert_eq!(clean.lines().count(), 1 + 10);
    assert!(d.path().join("clean.csv.manifest.json").exists());

    let t = pum(d.path(), &["tune-hyper", "--n-leg", "20", "--n-issue", "5", "--seed", "3", "--out", "theta.csv"]);
    assert!(t.status.success());
    let theta = fs::read_to_string(d.path().join("theta.csv")).unwrap();
    assert_eq!(theta.lines().count(), 101);
    let again = pum(d.path(), &["tune-hyper", "--n-leg", "20", "--n-issue", "5", "--seed", "3", "--out", "theta2.csv"]);
    assert!(again.status.success());
    assert_eq!(theta, fs::read_to_string(d.path().join("theta2.csv")).unwrap());
}
