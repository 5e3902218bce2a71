use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_laplace-lp"))
        .args(args)
        .env("LAPLACE_LP_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field(json: &str, key: &str) -> String {
    let needle = format!("\"{key}\": ");
    let start = json
        .find(&needle)
        .unwrap_or_else(|| panic!("{key} missing in {json}"))
        + needle.len();
    json[start..]
        .split([',', '\n'])
        .next()
        .unwrap()
        .trim()
        .to_string()
}

#[test]
fn classify_reports_blowup() {
    let o = run(&[
        "classify",
        "--p",
        "3",
        "--q",
        "1.5",
        "--domain",
        "bounded:0,1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert_eq!(field(&s, "continuous"), "false");
    assert_eq!(field(&s, "reason"), "\"CounterexampleBlowup\"");
}

#[test]
fn transform_of_constant() {
    let o = run(&["transform", "--f", "const1", "--x", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: f64 = field(&stdout(&o), "value").parse().unwrap();
    assert!((v - 0.5).abs() < 1e-10, "{v}");
}

#[test]
fn bad_domain_exits_two() {
    let o = run(&["classify", "--p", "2", "--q", "2", "--domain", "nowhere"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["transform", "--f", "exp:-1", "--x", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn divergent_norm_exits_three() {
    let o = run(&["norm", "--f", "const1", "--p", "2"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("diverges"));
}

#[test]
fn sweep_csv_layout() {
    let o = run(&[
        "sweep",
        "--variant",
        "thm1",
        "--p",
        "3",
        "--domain",
        "bounded:0,1",
        "--eps-grid",
        "1e-1:1e-2:3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let lines: Vec<&str> = s.lines().collect();
    assert_eq!(lines[0], "epsilon,norm_f,norm_Lf,ratio");
    assert_eq!(lines.len(), 4);
    let ratios: Vec<f64> = lines[1..]
        .iter()
        .map(|l| l.split(',').nth(3).unwrap().parse().unwrap())
        .collect();
    assert!(ratios.windows(2).all(|w| w[1] > w[0]), "{ratios:?}");
}

#[test]
fn fit_recovers_slope() {
    let o = run(&[
        "fit",
        "--variant",
        "thm1",
        "--p",
        "3",
        "--domain",
        "bounded:0,1",
        "--eps-grid",
        "1e-1:1e-4:6",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let slope: f64 = field(&stdout(&o), "slope").parse().unwrap();
    assert!((slope + 1.0 / 3.0).abs() < 0.01, "{slope}");
}

#[test]
fn output_is_deterministic() {
    let args = [
        "sweep",
        "--variant",
        "thm2",
        "--p",
        "2",
        "--domain",
        "tail:1",
        "--eps-grid",
        "1e-1:1e-3:4",
        "--format",
        "json",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn region_svg_document() {
    let o = run(&["region", "--domain", "bounded:0,1", "--step", "0.25"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.starts_with("<?xml"));
    assert!(s.trim_end().ends_with("</svg>"));
    assert!(s.contains("<polygon"));
    assert_eq!(s.matches("r=\"2\"").count(), 25);
}

#[test]
fn region_json_lattice() {
    let o = run(&[
        "region", "--domain", "full", "--step", "0.5", "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert_eq!(s.matches("\"inv_p\"").count(), 9);
    assert_eq!(s.matches("\"continuous\": true").count(), 2);
}

#[test]
fn writes_to_output_file() {
    let dir = std::env::temp_dir().join(format!("laplace-lp-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("c.json");
    let o = run(&[
        "classify",
        "--p",
        "2",
        "--q",
        "2",
        "--domain",
        "full",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let s = std::fs::read_to_string(&path).unwrap();
    assert_eq!(field(&s, "continuous"), "true");
    std::fs::remove_dir_all(&dir).ok();
}
