use std::collections::BTreeMap;
use std::process::Command;

use modo_cli::format::{format_matrix, format_operator, format_ratfunc, ratfunc_json, Style};
use modo_cli::parse::{parse_expression, parse_rational_function, ExprError, LowerError};
use modo_cli::problem::{load, save, LoadedProblem, ProblemError, ProblemFile};
use modo_cli::run_command;
use modo_core::{FieldMatrix, Modo, Polynomial, Problem, Rational, RationalFunction, VectorFunction};
use proptest::prelude::*;

fn rf(src: &str) -> RationalFunction {
    parse_rational_function(src).unwrap()
}

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn text(f: &RationalFunction) -> String {
    format_ratfunc(f, Style::Text)
}

#[test]
fn lowering_examples() {
    assert_eq!(rf("(x^2-1)/(x+1)"), rf("x-1"));
    assert!(rf("0/5") == RationalFunction::from_int(0));
    assert_eq!(parse_rational_function("1/(x-x)"), Err(ExprError::Lower(LowerError::ZeroDenominator)));
    let err = parse_expression("x^(-1)").unwrap_err();
    assert_eq!(err.offset, 2);
    assert!(err.to_string().contains("byte 2"));
}

#[test]
fn ratfunc_text_forms() {
    assert_eq!(text(&rf("-3/(2*x^2)")), "-3/(2*x^2)");
    assert_eq!(text(&rf("3/(2*x)")), "3/(2*x)");
    assert_eq!(text(&rf("(x+1)^2")), "x^2+2*x+1");
    assert_eq!(text(&rf("x^2/(x+1)")), "x^2/(x+1)");
    assert_eq!(text(&rf("(1-x)/x")), "(-x+1)/x");
    assert_eq!(text(&rf("x^2/2+1/3")), "(3*x^2+2)/6");
    assert_eq!(text(&rf("0")), "0");
    assert_eq!(text(&rf("-7")), "-7");
    assert_eq!(text(&rf("x/(3*x^2-3)")), "x/(3*x^2-3)");
}

#[test]
fn ratfunc_latex_forms() {
    assert_eq!(format_ratfunc(&rf("-3/(2*x^2)"), Style::Latex), "-\\frac{3}{2 x^{2}}");
    assert_eq!(format_ratfunc(&rf("x^2-x"), Style::Latex), "x^{2} - x");
    assert_eq!(format_ratfunc(&rf("(x+1)/x"), Style::Latex), "\\frac{x + 1}{x}");
}

#[test]
fn ratfunc_json_arrays() {
    let v = ratfunc_json(&rf("-3/(2*x^2)"));
    assert_eq!(v["num"], serde_json::json!(["-3/2"]));
    assert_eq!(v["den"], serde_json::json!(["0", "0", "1"]));
}

fn golden_k() -> Modo {
    let m = |e: [&str; 4]| FieldMatrix::new(2, 2, e.iter().map(|s| rf(s)).collect()).unwrap();
    Modo::new(
        2,
        vec![m(["0", "-3/(2*x^2)", "0", "3/x^2"]), m(["-1/x", "3/(2*x)", "0", "-3/x"]), FieldMatrix::identity(2)],
    )
    .unwrap()
}

#[test]
fn operator_rendering() {
    assert_eq!(format_operator(&Modo::zero(2), Style::Text), "0");
    assert_eq!(format_operator(&Modo::identity(1), Style::Text), "1");
    let k = format_operator(&golden_k(), Style::Text);
    assert!(k.contains("D^2") && k.contains("-3/(2*x^2)"), "{k}");
    assert_eq!(k, "I*D^2 + [[-1/x, 3/(2*x)], [0, -3/x]]*D + [[0, -3/(2*x^2)], [0, 3/x^2]]");
    let scalar = Modo::scalar(vec![rf("2/x^2"), rf("-2/x"), rf("1")]);
    assert_eq!(format_operator(&scalar, Style::Text), "D^2 - 2/x*D + 2/x^2");
    let compound = Modo::scalar(vec![rf("0"), rf("x+1"), rf("-1")]);
    assert_eq!(format_operator(&compound, Style::Text), "-D^2 + (x+1)*D");
    let latex = format_operator(&golden_k(), Style::Latex);
    assert!(latex.starts_with("I \\partial^{2} + \\begin{pmatrix}"), "{latex}");
    assert!(latex.contains("-\\frac{3}{2 x^{2}}"));
    assert_eq!(format_matrix(&FieldMatrix::identity(2), Style::Text), "[[1, 0], [0, 1]]");
}

fn coeff_strategy() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=6).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

fn ratfunc_strategy() -> impl Strategy<Value = RationalFunction> {
    let poly = || prop::collection::vec(coeff_strategy(), 0..=4).prop_map(Polynomial::from_coeffs);
    (poly(), poly())
        .prop_filter("nonzero denominator", |(_, d)| !d.is_zero())
        .prop_map(|(n, d)| RationalFunction::new(n, d).unwrap())
}

proptest! {
    #[test]
    fn format_parse_round_trip(f in ratfunc_strategy()) {
        let s = text(&f);
        prop_assert_eq!(rf(&s), f, "{}", s);
    }
}

#[test]
fn problem_file_round_trip() {
    let loaded = load(fixture("worked_example.toml").as_ref()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("copy.toml");
    save(&loaded, &path).unwrap();
    assert_eq!(load(&path).unwrap(), loaded);

    let f = |a: &str, b: &str| VectorFunction::new(vec![rf(a), rf(b)]).unwrap();
    let problem = Problem::new(vec![f("1/(x+1)", "x^2/3"), f("(2*x-1)/(x^2+5)", "-4")]).unwrap();
    let op = Modo::new(2, vec![FieldMatrix::identity(2), FieldMatrix::scalar(2, rf("-5/(7*x)"))]).unwrap();
    let lp = LoadedProblem { n: 2, problem: Some(problem), operators: BTreeMap::from([("A".to_string(), op)]) };
    let file = lp.to_file();
    assert_eq!(ProblemFile::from_toml(&file.to_toml()).unwrap(), file);
    assert_eq!(file.validate().unwrap(), lp);
}

#[test]
fn problem_file_validation() {
    let bad_expr = ProblemFile::from_toml("n = 1\nfunctions = [[\"x^(-1)\"]]").unwrap();
    let err = bad_expr.validate().unwrap_err();
    assert_eq!(err.code(), "PARSE_ERROR");
    assert!(err.to_string().starts_with("functions[0][0]"));
    let ragged = ProblemFile::from_toml("n = 2\nfunctions = [[\"x\"]]").unwrap();
    assert!(matches!(ragged.validate(), Err(ProblemError::Dimension(_))));
    let odd = ProblemFile::from_toml("n = 2\nfunctions = [[\"x\", \"1\"], [\"1\", \"0\"], [\"0\", \"1\"]]").unwrap();
    assert_eq!(odd.validate().unwrap_err().code(), "DIMENSION_MISMATCH");
    let bad_op = ProblemFile::from_toml("n = 2\n[operators]\nA = [[[\"1\"]]]").unwrap();
    assert_eq!(bad_op.validate().unwrap_err().code(), "DIMENSION_MISMATCH");
    assert!(matches!(ProblemFile::from_toml("n = "), Err(ProblemError::Toml(_))));
}

fn run(args: &[&str]) -> modo_cli::Outcome {
    run_command(std::iter::once("modo").chain(args.iter().copied()))
}

fn last_line(s: &str) -> &str {
    s.lines().last().unwrap_or("")
}

#[test]
fn command_exit_codes() {
    let worked = fixture("worked_example.toml");
    let singular = fixture("singular.toml");

    let out = run(&["kernel", &worked]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.starts_with("K = I*D^2"));

    let out = run(&["wronskian", &singular]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("det Phi = 0"));

    let out = run(&["factor", &singular, "--op", "D"]);
    assert_eq!((out.code, last_line(&out.stderr)), (2, "error: SINGULAR_WRONSKIAN"));

    let out = run(&["factor", &worked, "--op", "L"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("Q = [[1, 1], [1, 1]]*D + [[1/x, 3/(2*x)], [1/x, 3/(2*x)]]"));

    let out = run(&["factor", &worked, "--op", "D"]);
    assert_eq!((out.code, last_line(&out.stderr)), (2, "error: KERNEL_VIOLATION"));
    assert!(out.stderr.contains("phi_1: residual [3*x^2, -3*x^2]"));

    let out = run(&["verify", &worked, "--op", "K"]);
    assert_eq!(out.code, 0);
    assert_eq!(last_line(&out.stdout), "OK");
    let out = run(&["verify", &worked, "--op", "D"]);
    assert_eq!((out.code, last_line(&out.stderr)), (2, "error: KERNEL_VIOLATION"));
    assert!(out.stdout.contains("phi_4: ok"));

    let out = run(&["divide", &worked, "--num", "L", "--den", "L"]);
    assert_eq!((out.code, last_line(&out.stderr)), (2, "error: NON_MONIC_DIVISOR"));

    let out = run(&["divide", &worked, "--num", "L", "--den", "missing"]);
    assert_eq!((out.code, last_line(&out.stderr)), (1, "error: USAGE_ERROR"));

    let out = run(&["frobnicate"]);
    assert_eq!((out.code, last_line(&out.stderr)), (1, "error: USAGE_ERROR"));

    let out = run(&["--help"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("example"));
}

#[test]
fn divide_reports_nonzero_remainder() {
    let worked = fixture("worked_example.toml");
    let out = run(&["divide", &worked, "--num", "K", "--den", "D"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(
        out.stdout,
        "Q = I*D + [[-1/x, 3/(2*x)], [0, -3/x]]\nR = [[0, -3/(2*x^2)], [0, 3/x^2]]\n"
    );
}

#[test]
fn input_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, body: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, body).unwrap();
        p.display().to_string()
    };
    let bad = write("bad.toml", "n = 1\nfunctions = [[\"x +\"]]\n");
    let out = run(&["kernel", &bad]);
    assert_eq!((out.code, last_line(&out.stderr)), (1, "error: PARSE_ERROR"));
    let zero = write("zero.toml", "n = 1\nfunctions = [[\"1/(x-x)\"]]\n");
    assert_eq!(last_line(&run(&["kernel", &zero]).stderr), "error: PARSE_ERROR");
    let mismatch = write("dim.toml", "n = 2\nfunctions = [[\"x\", \"1\", \"0\"]]\n");
    let out = run(&["kernel", &mismatch]);
    assert_eq!((out.code, last_line(&out.stderr)), (1, "error: DIMENSION_MISMATCH"));
    let empty = write("empty.toml", "n = 1\n");
    assert_eq!(last_line(&run(&["kernel", &empty]).stderr), "error: DIMENSION_MISMATCH");
    let out = run(&["kernel", "/nonexistent/problem.toml"]);
    assert_eq!((out.code, last_line(&out.stderr)), (1, "error: IO_ERROR"));
}

#[test]
fn json_output_is_machine_readable() {
    let out = run(&["--format", "json", "kernel", &fixture("worked_example.toml")]);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["kernel"]["order"], 2);
    assert_eq!(v["kernel"]["coeffs"][0][0][1]["num"], serde_json::json!(["-3/2"]));
    let out = run(&["example", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["status"], "OK");
    assert_eq!(v["det"]["num"], serde_json::json!(["0", "0", "0", "0", "-4"]));
}

#[test]
fn example_is_byte_stable_in_every_format() {
    for format in ["text", "latex", "json"] {
        let a = run(&["--format", format, "example"]);
        let b = run(&["--format", format, "example"]);
        assert_eq!(a.code, 0, "{format}: {}", a.stderr);
        assert_eq!(a, b);
    }
    let expected = "\
N = 2, M = 2
Phi =
[[x^3, x^2, 0, 1],
 [-x^3, 0, x, 0],
 [3*x^2, 2*x, 0, 0],
 [-3*x^2, 0, 1, 0]]
det Phi = -4*x^4
K = I*D^2 + [[-1/x, 3/(2*x)], [0, -3/x]]*D + [[0, -3/(2*x^2)], [0, 3/x^2]]
L = [[1, 1], [1, 1]]*D^3
Q = [[1, 1], [1, 1]]*D + [[1/x, 3/(2*x)], [1/x, 3/(2*x)]]
K(phi_i) = 0 for all i
Q*K = L
OK
";
    assert_eq!(run(&["example"]).stdout, expected);
}

#[test]
fn binary_writes_code_last() {
    let out = Command::new(env!("CARGO_BIN_EXE_modo"))
        .args(["verify", &fixture("worked_example.toml"), "--op", "D"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("phi_1: FAIL"));
    assert_eq!(last_line(&String::from_utf8(out.stderr).unwrap()), "error: KERNEL_VIOLATION");
}
