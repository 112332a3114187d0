use std::io::Write;
use std::process::{Command, Stdio};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ppv_cli::{emit_json, parse_expression, run_job, JobSpec, ParseError};

fn names() -> Vec<String> {
    vec!["t1".into(), "t2".into()]
}

fn random_expr(rng: &mut ChaCha8Rng, depth: u32) -> String {
    if depth == 0 || rng.gen_ratio(1, 3) {
        return match rng.gen_range(0..4) {
            0 => rng.gen_range(0..12).to_string(),
            1 => "x".into(),
            2 => "t1".into(),
            _ => "t2".into(),
        };
    }
    let a = random_expr(rng, depth - 1);
    match rng.gen_range(0..7) {
        0 => format!("{a} + {}", random_expr(rng, depth - 1)),
        1 => format!("{a}-{}", random_expr(rng, depth - 1)),
        2 => format!("({a})*({})", random_expr(rng, depth - 1)),
        3 => format!("({a})/({})", random_expr(rng, depth - 1)),
        4 => format!("({a})^{}", rng.gen_range(0..4)),
        5 => format!("-({a})"),
        _ => format!("( {a} )"),
    }
}

#[test]
fn print_parse_round_trip_on_generated_expressions() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    while checked < 600 {
        let src = random_expr(&mut rng, 4);
        let f = match parse_expression(&src, &names()) {
            Ok(f) => f,
            Err(ParseError::DivisionByZero { .. }) => continue,
            Err(e) => panic!("generated expression {src:?} failed: {e}"),
        };
        let printed = f.to_expr(&names());
        let g = parse_expression(&printed, &names()).unwrap_or_else(|e| panic!("{printed:?}: {e}"));
        assert_eq!(f, g, "{src} printed as {printed}");
        assert_eq!(g.to_expr(&names()), printed);
        checked += 1;
    }
}

const GOLDEN: &str = r#"{"parameters":["t1","t2"],"equation":{"q":"(x^2+(2-2*t1*t2)*x+t1^2*t2^2-3*t1*t2+2)/x^2"}}"#;

fn run_binary(args: &[&str], stdin: &str) -> (i32, String) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_ppv"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn golden_text_output() {
    let (code, out) = run_binary(&["--input", "-"], GOLDEN);
    assert_eq!(code, 0);
    assert!(out.contains("t1*(d1 a)/a = t2*(d2 a)/a"));
    assert!(out.contains("t1*(d1 b) = t2*(d2 b)"));
    assert!(out.contains("dp1 = t1*d1 - t2*d2"));
}

#[test]
fn json_output_is_deterministic_and_round_trips() {
    let (c1, a) = run_binary(&["--input", "-", "--json"], GOLDEN);
    let (c2, b) = run_binary(&["--input", "-", "--json"], GOLDEN);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["unipotent_class"], "ProperSubgroup");
    let mut exprs: Vec<String> = vec![v["q"].as_str().unwrap().into(), v["u"].as_str().unwrap().into()];
    for s in v["riccati_solutions"].as_array().unwrap() {
        exprs.push(s.as_str().unwrap().into());
    }
    for d in v["lie_basis"].as_array().unwrap() {
        for c in d["coefficients"].as_array().unwrap() {
            exprs.push(c.as_str().unwrap().into());
        }
    }
    for part in ["reductive", "unipotent"] {
        for group in ["equations", "consequences"] {
            for e in v[part][group].as_array().unwrap() {
                for t in e["terms"].as_array().unwrap() {
                    exprs.push(t["coefficient"].as_str().unwrap().into());
                }
            }
        }
    }
    for e in exprs {
        let f = parse_expression(&e, &names()).unwrap();
        assert_eq!(f.to_expr(&names()), e);
    }
}

#[test]
fn exit_codes_follow_the_error_field() {
    let (code, out) = run_binary(&["--input", "-", "--json"], r#"{"equation":{"q":"x +"}}"#);
    assert_eq!(code, 1);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["error"]["kind"], "SyntaxError");
    let (code, _) = run_binary(&["--input", "-"], "not json");
    assert_eq!(code, 1);
    let (code, _) = run_binary(&["--input", "/nonexistent/job.json"], "");
    assert_eq!(code, 1);
    let (code, out) = run_binary(&["--input", "-", "--json"], r#"{"equation":{"q":"1/x^3"}}"#);
    assert_eq!(code, 1);
    assert!(out.contains("UnsupportedPoleStructure"));
    let (code, out) = run_binary(&["--input", "-", "--json"], r#"{"equation":{"q":"x^2"}}"#);
    assert_eq!(code, 1);
    assert!(out.contains("NoRationalRiccatiSolution"));
    let (code, out) = run_binary(&["--input", "-", "--riccati", "1/x^2"], r#"{"equation":{"q":"0"}}"#);
    assert_eq!(code, 1);
    assert!(out.contains("InvalidRiccatiSolution"));
    let (code, _) = run_binary(&["--input", "-"], r#"{"equation":{"q":"0"}}"#);
    assert_eq!(code, 0);
}

#[test]
fn flags_override_the_job() {
    let (code, out) = run_binary(&["--input", "-", "--json", "--max-order-unipotent", "1"], GOLDEN);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["unipotent"]["max_order"], 1);
    assert_eq!(v["unipotent"]["space_dimension"], 1);
    let (code, out) = run_binary(&["--input", "-", "--json", "--riccati", "(t1*t2-1-x)/x"], GOLDEN);
    assert_eq!(code, 0);
    assert!(out.contains("ProperSubgroup"));
}

#[test]
fn text_forms_of_each_class() {
    let gamma = JobSpec::from_json(r#"{"parameters":["t"],"equation":{"r1":"-( (1-t-x)/x )","r0":"0"}}"#).unwrap();
    let report = run_job(&gamma);
    assert!(ppv_cli::emit_text(&report).contains("R_u(H) = Ga"));
    assert_eq!(report.exit_code(), 0);
    let trivial = JobSpec::from_json(r#"{"equation":{"q":"0"}}"#).unwrap();
    let report = run_job(&trivial);
    assert_eq!(report.unipotent_class.as_deref(), Some("Trivial"));
    assert!(emit_json(&report).contains("\"schema_version\": 1"));
}
