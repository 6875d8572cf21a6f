use std::process::Command;

use hypergroup_cli::{run, Report};

struct Outcome {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Outcome {
    fn fields(&self) -> Vec<(String, String)> {
        Report::parse_structured(&self.stdout).expect("structured report")
    }

    fn get(&self, key: &str) -> String {
        self.fields()
            .into_iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v)
            .unwrap_or_else(|| panic!("no {key}"))
    }
}

fn hg(args: &[&str]) -> Outcome {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("hypergroup").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Outcome {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn structured(args: &[&str]) -> Outcome {
    let mut all = args.to_vec();
    all.extend(["--format", "structured"]);
    hg(&all)
}

fn number(s: &str) -> f64 {
    s.parse().unwrap_or_else(|_| panic!("not a number: {s}"))
}

#[test]
fn verify_conj_s3_passes() {
    let o = structured(&["verify", "--family", "conj", "--group", "s3"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert_eq!(o.get("status"), "pass");
    assert!(o
        .fields()
        .iter()
        .any(|(k, v)| k == "check.haar.recomputed" && v == "pass"));
}

#[test]
fn amenability_irr_q8_reports_finite_diagonal_norm() {
    let o = structured(&["amenability", "--family", "irr", "--group", "q8"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert_eq!(number(&o.get("one_delta_ma_norm")), 1.75);
    assert_eq!(number(&o.get("phi_inverse_ma_norm")), 4.0);
}

#[test]
fn p2_tree_fails_with_bound() {
    let o = structured(&[
        "p2",
        "--family",
        "tree_radial",
        "--q",
        "2",
        "--radius",
        "40",
    ]);
    assert_eq!(o.code, 0);
    assert_eq!(o.get("p2"), "fails");
    assert!((number(&o.get("bound.upper")) - 0.9428).abs() < 1e-4);
    assert_eq!(o.get("status"), "pass");
}

#[test]
fn text_format_is_aligned() {
    let o = hg(&["p2", "--family", "su2_fusion", "--radius", "20"]);
    assert_eq!(o.code, 0);
    assert!(o
        .stdout
        .lines()
        .any(|l| l.starts_with("p2 ") && l.ends_with("holds")));
    assert!(o.stdout.ends_with("pass\n"));
}

#[test]
fn deform_writes_a_loadable_table() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("deformed.hg");
    let p = path.to_str().unwrap();
    let o = structured(&[
        "deform",
        "--family",
        "tree_radial",
        "--radius",
        "30",
        "--table-out",
        p,
    ]);
    assert_eq!(o.code, 0, "{}", o.stdout);
    assert_eq!(number(&o.get("deformed.c_1_1_0")), 0.375);
    let v = structured(&["verify", "--input", p, "--tol", "1e-10"]);
    assert_eq!(v.code, 0, "{}{}", v.stdout, v.stderr);
    let p2 = structured(&["p2", "--input", p]);
    assert_eq!(p2.get("p2"), "holds");
    let strict = structured(&["verify", "--input", p, "--tol", "1e-20"]);
    assert_eq!(strict.code, 1);
    assert_eq!(strict.get("status"), "fail");
}

#[test]
fn product_round_trips_through_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("product.hg");
    let p = path.to_str().unwrap();
    let o = structured(&[
        "product",
        "--family",
        "conj",
        "--group",
        "s3",
        "--with",
        "irr(Z2)",
        "--table-out",
        p,
    ]);
    assert_eq!(o.code, 0, "{}", o.stdout);
    assert_eq!(o.get("size"), "6");
    let v = structured(&["verify", "--input", p]);
    assert_eq!(v.code, 0, "{}", v.stdout);
    assert_eq!(v.get("size"), "6");
    assert_eq!(v.get("scalar"), "rational");
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.txt");
    let o = structured(&[
        "characters",
        "--family",
        "irr",
        "--group",
        "a4",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.code, 0);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), o.stdout);
}

#[test]
fn norms_are_seeded() {
    let a = structured(&["norms", "--family", "conj", "--group", "d4", "--seed", "5"]);
    let b = structured(&["norms", "--family", "conj", "--group", "d4", "--seed", "5"]);
    let c = structured(&["norms", "--family", "conj", "--group", "d4", "--seed", "6"]);
    assert_eq!(a.code, 0, "{}", a.stdout);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    assert_eq!(a.get("seed"), "5");
}

#[test]
fn truncated_norms_pass() {
    let o = structured(&["norms", "--family", "tree_radial", "--radius", "30"]);
    assert_eq!(o.code, 0, "{}", o.stdout);
}

#[test]
fn quantum_reports_kac_type() {
    let o = structured(&["quantum", "--q", "0.5"]);
    assert_eq!(o.code, 0, "{}{}", o.stdout, o.stderr);
    assert_eq!(o.get("kac"), "false");
    let o = structured(&["quantum", "--group", "s3"]);
    assert_eq!(o.code, 0, "{}", o.stdout);
}

#[test]
fn jobs_do_not_change_output() {
    let args = ["amenability", "--family", "tree_radial", "--radius", "60"];
    let one = structured(&[&args[..], &["--jobs", "1"]].concat());
    let many = structured(&[&args[..], &["--jobs", "3"]].concat());
    assert_eq!(one.code, 0, "{}", one.stdout);
    assert_eq!(one.stdout, many.stdout);
}

#[test]
fn input_errors_exit_with_two() {
    assert_eq!(hg(&["verify", "--family", "bogus"]).code, 2);
    assert_eq!(hg(&["verify"]).code, 2);
    assert_eq!(hg(&["characters", "--family", "tree_radial"]).code, 2);
    assert_eq!(hg(&["verify", "--family", "conj", "--group", "s7"]).code, 2);
    assert_eq!(hg(&["frobnicate"]).code, 2);
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.hg");
    std::fs::write(&bad, "hypergroup v1\nsize three\n").unwrap();
    let o = hg(&["verify", "--input", bad.to_str().unwrap()]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("line"), "{}", o.stderr);
    let o = hg(&[
        "verify",
        "--input",
        dir.path().join("missing.hg").to_str().unwrap(),
    ]);
    assert_eq!(o.code, 2);
}

#[test]
fn tolerance_from_environment() {
    let bin = env!("CARGO_BIN_EXE_hypergroup");
    let run_with = |tol: &str| {
        let out = Command::new(bin)
            .args([
                "verify",
                "--family",
                "suq2_fusion",
                "--q",
                "0.5",
                "--radius",
                "10",
                "--format",
                "structured",
            ])
            .env("HYPERGROUP_TOL", tol)
            .output()
            .unwrap();
        (out.status.code(), String::from_utf8(out.stdout).unwrap())
    };
    let (code, text) = run_with("1e-3");
    assert_eq!(code, Some(0));
    assert!(text.contains("tolerance = 1.000000000000e-3"), "{text}");
    let (code, _) = run_with("not-a-number");
    assert_eq!(code, Some(2));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_hypergroup");
    let ok = Command::new(bin)
        .args(["verify", "--family", "conj", "--group", "s3"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let help = Command::new(bin).arg("--help").output().unwrap();
    assert_eq!(help.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&help.stdout).contains("amenability"));
}
