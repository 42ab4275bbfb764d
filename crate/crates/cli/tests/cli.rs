use std::path::PathBuf;
use std::process::Command;

fn job(name: &str, text: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(format!("cli-{name}.job"));
    std::fs::write(&path, text).unwrap();
    path
}

fn sympinv(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_sympinv")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

const PARABOLA_T: &str = "geometry = curve\nparams = t\nwindow = 1:2\nsamples = 4\n\n[expressions]\ny = t^2\n";

#[test]
fn parabola_table_has_i2_equal_to_two_over_t6() {
    let p = job("parabola-t", PARABOLA_T);
    let (code, out, _) = sympinv(&["invariants", "--job", p.to_str().unwrap()]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "index,t,x,y,I2,status");
    assert_eq!(lines.len(), 5);
    for line in &lines[1..] {
        let f: Vec<&str> = line.split(',').collect();
        let (t, i2): (f64, f64) = (f[1].parse().unwrap(), f[4].parse().unwrap());
        assert!((i2 - 2.0 / t.powi(6)).abs() <= 1e-14, "{line}");
        assert_eq!(f[5], "ok");
        // 17 significant digits
        assert_eq!(f[4].split('e').next().unwrap().replace(['.', '-'], "").len(), 17);
    }
}

#[test]
fn json_table_matches_csv() {
    let p = job("parabola-json", PARABOLA_T);
    let p = p.to_str().unwrap();
    let (_, csv, _) = sympinv(&["invariants", "--job", p]);
    let (code, json, _) = sympinv(&["invariants", "--job", p, "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    let rows = v["rows"].as_array().unwrap();
    for (row, line) in rows.iter().zip(csv.lines().skip(1)) {
        let i2: f64 = line.split(',').nth(4).unwrap().parse().unwrap();
        assert_eq!(row["values"][0].as_f64().unwrap(), i2);
        assert!(row["degenerate"].is_null());
    }
}

#[test]
fn degenerate_rows_are_flagged_and_all_degenerate_exits_3() {
    // the tangent of y = x^2 + 1/4 passes through the origin at x = 1/2
    let p = job("shifted", "geometry = curve\nsamples = 5\n[expressions]\ny = x^2 + 0.25\n");
    let (code, out, _) = sympinv(&["invariants", "--job", p.to_str().unwrap()]);
    assert_eq!(code, 0);
    let flagged: Vec<&str> = out.lines().filter(|l| l.contains("degenerate")).collect();
    assert_eq!(flagged.len(), 1);
    assert!(flagged[0].starts_with("0,"));

    let line = job("line", "geometry = curve\nsamples = 5\n[expressions]\ny = x\n");
    let (code, _, err) = sympinv(&["invariants", "--job", line.to_str().unwrap()]);
    assert_eq!(code, 3, "{err}");
    let (code, _, _) = sympinv(&["signature", "--job", line.to_str().unwrap()]);
    assert_eq!(code, 3);
}

#[test]
fn invalid_jobs_exit_2_naming_the_field() {
    let p = job("surface-with-curve", "geometry = surface\n[expressions]\ny = x^2\n");
    let (code, _, err) = sympinv(&["invariants", "--job", p.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("expressions.x"), "{err}");
    let p = job("parabola-window", PARABOLA_T);
    let (code, _, err) = sympinv(&["signature", "--job", p.to_str().unwrap(), "--window", "3:-1"]);
    assert_eq!(code, 2);
    assert!(err.contains("`window`"), "{err}");
    let (code, _, err) = sympinv(&["invariants", "--job", "/nonexistent/file.job"]);
    assert_eq!(code, 2);
    assert!(err.contains("`job`"), "{err}");
}

#[test]
fn output_is_byte_identical_across_runs_and_thread_counts() {
    let p = job("surface-seeded", "geometry = surface\nsamples = 12\nseed = 3\n[expressions]\nx = t^2 + s\ny = s^3 - t*s\n");
    let p = p.to_str().unwrap();
    let a = sympinv(&["invariants", "--job", p, "--threads", "1"]);
    let b = sympinv(&["invariants", "--job", p, "--threads", "4"]);
    assert_eq!(a, b);
    let c = sympinv(&["invariants", "--job", p, "--seed", "4"]);
    assert_ne!(a.1, c.1);
    let s1 = sympinv(&["signature", "--job", p, "--threads", "3"]);
    let s2 = sympinv(&["signature", "--job", p, "--threads", "1"]);
    assert_eq!(s1, s2);
    let idx: Vec<usize> = a.1.lines().skip(1).map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(idx, (0..12).collect::<Vec<_>>());
}

#[test]
fn signature_json_keys_in_order() {
    let p = job("parabola-sig", "geometry = curve\n[expressions]\ny = x^2\n");
    let (code, out, _) = sympinv(&["signature", "--job", p.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["points"].as_array().unwrap().len(), 64);
    assert_eq!(v["window"][0].as_f64(), Some(0.5));
    let keys = ["geometry", "flavor", "generators", "depth", "window", "points"];
    let pos: Vec<usize> = keys.iter().map(|k| out.find(&format!("\"{k}\"")).unwrap()).collect();
    assert!(pos.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn equivalence_exit_codes() {
    let parabola = job("eq-parabola", "geometry = curve\n[expressions]\ny = x^2\n");
    let cubic = job("eq-cubic", "geometry = curve\n[expressions]\ny = x^3\n");
    // [[3/4, 5/4], [-1/2, 1/2]] has determinant 1
    let image = job(
        "eq-image",
        "geometry = curve\nmode = parametric\nparams = t\n[expressions]\nx = 0.75*t + 1.25*t^2\ny = -0.5*t + 0.5*t^2\n",
    );
    let far = job("eq-far", "geometry = curve\nwindow = 3:4\n[expressions]\ny = x^2\n");
    let depth2 = job("eq-depth2", "geometry = curve\ndepth = 2\n[expressions]\ny = x^2\n");
    let run = |a: &PathBuf, b: &PathBuf| sympinv(&["equivalence", "--job", a.to_str().unwrap(), "--job", b.to_str().unwrap()]);
    let (code, out, _) = run(&parabola, &image);
    assert_eq!(code, 0, "{out}");
    assert!(out.starts_with("verdict: equivalent\n") && out.contains("generators: I2, N(I2)"));
    assert_eq!(run(&parabola, &cubic).0, 4);
    // same curve, disjoint windows: the clouds cover different arcs
    let (code, out, _) = run(&parabola, &far);
    assert_ne!(code, 0, "{out}");
    assert_eq!(run(&parabola, &depth2).0, 2);
}

#[test]
fn check_subcommand() {
    let (code, out, _) = sympinv(&["check", "counting", "curves", "n=2"]);
    assert_eq!(code, 0);
    for (k, d) in [(0, 4), (1, 7), (2, 9), (3, 10)] {
        assert!(out.lines().any(|l| l.contains(&format!("orbit dim J^{k} ")) && l.contains(&format!("observed {d} "))), "{out}");
    }
    let (code, out, _) = sympinv(&["check", "syzygy", "contact-functions"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().filter(|l| l.contains(" R") && l.ends_with("PASS")).count(), 7, "{out}");
    let (code, out, _) = sympinv(&["check", "invariance", "functions", "n=1", "--trials", "100"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.ends_with("0 failed\n"));
    let (code, _, err) = sympinv(&["check", "counting", "curves", "n=2", "--flavor", "contact"]);
    assert_eq!(code, 2, "{err}");
    // an impossible tolerance makes the battery fail
    let (code, _, _) = sympinv(&["check", "invariance", "curves", "n=2", "--tol", "0"]);
    assert_eq!(code, 1);
}
