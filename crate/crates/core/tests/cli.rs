use std::process::{Command, Output};

fn gwcacm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gwcacm")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const UNIT: [&str; 6] = ["--c0", "1200", "--cp", "1200", "--cv", "1200"];

fn with(base: &[&str], extra: &[&str]) -> Vec<String> {
    base.iter().chain(extra).map(|s| s.to_string()).collect()
}

fn run(args: Vec<String>) -> Output {
    let refs: Vec<&str> = args.iter().map(String::as_str).collect();
    gwcacm(&refs)
}

fn assert_clean_lines(text: &str) {
    assert!(!text.contains('\r'));
    assert!(text.ends_with('\n'));
    for line in text.lines() {
        assert_eq!(line, line.trim_end(), "trailing whitespace in {line:?}");
    }
}

#[test]
fn curve_csv_shape() {
    let o = run(with(&["curve"], &UNIT));
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_clean_lines(&text);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("M,R_ach,R_lb,gap,gap_bound,regime"));
    let ms: Vec<f64> = lines.map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    assert!(ms.windows(2).all(|w| w[0] < w[1]));
    assert!(text.contains("\n5700,1200,900,300,300,3\n"));
}

#[test]
fn simulate_agrees_with_curve() {
    let curve = stdout(&run(with(&["curve"], &UNIT)));
    let o = run(with(&["simulate", "--seed", "3"], &UNIT));
    assert_eq!(o.status.code(), Some(0));
    let sim = stdout(&o);
    assert_clean_lines(&sim);
    let mut rows = sim.lines();
    assert_eq!(rows.next(), Some("M,R_ach,R_lb,gap,gap_bound,regime,R_measured"));
    let body: Vec<&str> = rows.clone().take_while(|l| !l.starts_with('#')).collect();
    for (s, c) in body.iter().zip(curve.lines().skip(1)) {
        let (shared, measured) = s.rsplit_once(',').unwrap();
        assert_eq!(shared, c);
        assert_eq!(measured, c.split(',').nth(1).unwrap());
    }
    assert_eq!(body.len(), curve.lines().count() - 1);
    assert!(sim.contains("# prng=chacha8"));
    assert!(sim.trim_end().ends_with("PASS 9 demands × 29 grid points; max gap 300 at M=5700"));
}

#[test]
fn tampered_codeword_fails_verification() {
    let o = run(with(&["simulate", "--tamper", "--grid", "600"], &UNIT));
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn pmf_source_is_rejected_by_simulate() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("pmf.json");
    std::fs::write(&p, r#"{"n1":2,"n2":2,"n3":2,"p":[0.125,0.125,0.125,0.125,0.125,0.125,0.125,0.125]}"#).unwrap();
    let path = p.to_str().unwrap();
    let o = gwcacm(&["simulate", "--pmf", path]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("structured source"));

    let o = gwcacm(&["curve", "--pmf", path, "--grid", "0,1.5,3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "M,R_ach,R_lb,gap,gap_bound,regime\n0,3,2,1,1,2\n1.5,1.5,0.5,1,1,2\n3,0,0,0,0,4\n"
    );
}

#[test]
fn invalid_inputs_exit_2() {
    for args in [
        vec!["curve", "--c0", "1", "--cp", "1", "--cv", "1"],
        vec!["curve"],
        vec!["curve", "--c0", "24", "--pmf", "x.json"],
        vec!["simulate", "--c0", "1200", "--cp", "1200", "--cv", "1200", "--grid", "1650"],
        vec!["curve", "--c0", "1200", "--grid", "5000"],
        vec!["trace", "--c0", "1200", "--M", "100"],
        vec!["trace", "--c0", "1200", "--M", "100", "--demand", "1,4"],
        vec!["nonsense"],
    ] {
        let o = gwcacm(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
    let o = gwcacm(&["simulate", "--c0", "1200", "--cp", "1200", "--cv", "1200", "--grid", "1650"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("1500 or 1800"));
}

#[test]
fn trace_equal_and_full_cache() {
    let o = gwcacm(&["trace", "--cp", "1200", "--M", "600", "--demand", "3,3"]);
    assert_eq!(o.status.code(), Some(0));
    let t = stdout(&o);
    assert_clean_lines(&t);
    assert!(t.contains("EQUAL"));
    assert!(t.contains("X3 recovered (2400 bits): OK"));
    let o = gwcacm(&["trace", "--cp", "1200", "--M", "3600", "--demand", "1,2"]);
    assert!(stdout(&o).contains("empty codeword"));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    let out = dir.path().join("curve.csv");
    std::fs::write(
        &cfg,
        format!(r#"{{"c0":1200,"cp":1200,"cv":1200,"grid":"0,600","out":{:?}}}"#, out.to_str().unwrap()),
    )
    .unwrap();
    let o = gwcacm(&["curve", "--config", cfg.to_str().unwrap(), "--grid", "8400"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(
        std::fs::read_to_string(&out).unwrap(),
        "M,R_ach,R_lb,gap,gap_bound,regime\n8400,0,0,0,0,4\n"
    );
}
