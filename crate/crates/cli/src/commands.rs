//! Subcommand dispatch. `run_command` never prints; `main` does.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use modo_core::{right_divide, FactorError, FieldMatrix, Modo, Problem, Rational};
use serde_json::{json, Value};

use crate::format::{
    format_matrix_block, format_operator, format_ratfunc, format_vector, matrix_json, operator_json,
    ratfunc_json, vector_json, Style,
};
use crate::parse::parse_rational_function;
use crate::problem::{load, LoadedProblem, ProblemError, ProblemFile};

pub const EXAMPLE_FIXTURE: &str = include_str!("../fixtures/worked_example.toml");

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Latex,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "modo", version, about = "Kernel operators and right division for matrix differential operators")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the block Wronskian and its determinant.
    Wronskian { file: PathBuf },
    /// Print the monic kernel operator of the file's functions.
    Kernel { file: PathBuf },
    /// Right-divide one named operator by another.
    Divide {
        file: PathBuf,
        #[arg(long)]
        num: String,
        #[arg(long)]
        den: String,
    },
    /// Factor a named operator through the kernel operator.
    Factor {
        file: PathBuf,
        #[arg(long)]
        op: String,
    },
    /// Check that a named operator annihilates every function.
    Verify {
        file: PathBuf,
        #[arg(long)]
        op: String,
    },
    /// Run the built-in N = M = 2 example and check it.
    Example,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// A failure: human message plus a fixed code.
#[derive(Debug)]
struct Failure {
    exit: i32,
    code: &'static str,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { exit: 1, code: "USAGE_ERROR", message: message.into() }
    }
}

impl From<ProblemError> for Failure {
    fn from(e: ProblemError) -> Self {
        Failure { exit: 1, code: e.code(), message: e.to_string() }
    }
}

impl From<FactorError<Rational>> for Failure {
    fn from(e: FactorError<Rational>) -> Self {
        let message = match &e {
            FactorError::KernelViolation { index, residual } => format!(
                "operator does not annihilate phi_{index}: residual {}",
                format_vector(residual, Style::Text)
            ),
            other => other.to_string(),
        };
        Failure { exit: 2, code: e.code(), message }
    }
}

struct Ctx {
    format: OutputFormat,
    out: String,
}

impl Ctx {
    fn style(&self) -> Style {
        match self.format {
            OutputFormat::Latex => Style::Latex,
            _ => Style::Text,
        }
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.out.push_str(s.as_ref());
        self.out.push('\n');
    }

    fn json(&mut self, v: Value) {
        let s = serde_json::to_string_pretty(&v).expect("json values serialize");
        self.line(s);
    }

    fn operator(&mut self, name: &str, op: &Modo) {
        let s = format_operator(op, self.style());
        self.line(format!("{name} = {s}"));
    }
}

/// Parses `argv` (including the program name) and runs the subcommand.
pub fn run_command<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: 1, stdout: String::new(), stderr: format!("{}error: USAGE_ERROR\n", ensure_newline(rendered)) }
            } else {
                Outcome { code: 0, stdout: rendered, stderr: String::new() }
            };
        }
    };
    let mut ctx = Ctx { format: cli.format, out: String::new() };
    match dispatch(&cli.command, &mut ctx) {
        Ok(()) => Outcome { code: 0, stdout: ctx.out, stderr: String::new() },
        Err(f) => Outcome {
            code: f.exit,
            stdout: ctx.out,
            stderr: format!("modo: {}\nerror: {}\n", f.message, f.code),
        },
    }
}

fn ensure_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

fn dispatch(cmd: &Command, ctx: &mut Ctx) -> Result<(), Failure> {
    match cmd {
        Command::Wronskian { file } => wronskian(&load(file)?, ctx),
        Command::Kernel { file } => kernel(&load(file)?, ctx),
        Command::Divide { file, num, den } => {
            let lp = load(file)?;
            divide(operator(&lp, num)?, operator(&lp, den)?, ctx)
        }
        Command::Factor { file, op } => {
            let lp = load(file)?;
            factor(require_functions(&lp)?, operator(&lp, op)?, op, ctx)
        }
        Command::Verify { file, op } => {
            let lp = load(file)?;
            verify(require_functions(&lp)?, operator(&lp, op)?, op, ctx)
        }
        Command::Example => example(ctx),
    }
}

fn require_functions(lp: &LoadedProblem) -> Result<&Problem, Failure> {
    lp.problem.as_ref().ok_or_else(|| Failure {
        exit: 1,
        code: "DIMENSION_MISMATCH",
        message: "problem file lists no functions".into(),
    })
}

fn operator<'a>(lp: &'a LoadedProblem, name: &str) -> Result<&'a Modo, Failure> {
    lp.operators.get(name).ok_or_else(|| {
        let known: Vec<&str> = lp.operators.keys().map(String::as_str).collect();
        Failure::usage(format!("no operator named '{name}' (file defines: {})", known.join(", ")))
    })
}

fn print_wronskian(p: &Problem, ctx: &mut Ctx) -> (FieldMatrix, modo_core::RationalFunction) {
    let phi = p.block_wronskian();
    let det = phi.det().expect("square");
    match ctx.format {
        OutputFormat::Json => {}
        OutputFormat::Text => {
            ctx.line(format!("N = {}, M = {}", p.dim(), p.order()));
            ctx.line(format!("Phi =\n{}", format_matrix_block(&phi, Style::Text)));
            ctx.line(format!("det Phi = {}", format_ratfunc(&det, Style::Text)));
        }
        OutputFormat::Latex => {
            ctx.line(format!("N = {}, M = {}", p.dim(), p.order()));
            ctx.line(format!("\\Phi = {}", format_matrix_block(&phi, Style::Latex)));
            ctx.line(format!("\\det\\Phi = {}", format_ratfunc(&det, Style::Latex)));
        }
    }
    (phi, det)
}

fn wronskian(lp: &LoadedProblem, ctx: &mut Ctx) -> Result<(), Failure> {
    let p = require_functions(lp)?;
    let (phi, det) = print_wronskian(p, ctx);
    if ctx.format == OutputFormat::Json {
        ctx.json(json!({
            "n": p.dim(),
            "m": p.order(),
            "wronskian": matrix_json(&phi),
            "det": ratfunc_json(&det),
        }));
    }
    Ok(())
}

fn kernel(lp: &LoadedProblem, ctx: &mut Ctx) -> Result<(), Failure> {
    let k = require_functions(lp)?.kernel_operator()?;
    match ctx.format {
        OutputFormat::Json => ctx.json(json!({ "kernel": operator_json(&k) })),
        _ => ctx.operator("K", &k),
    }
    Ok(())
}

fn divide(l: &Modo, k: &Modo, ctx: &mut Ctx) -> Result<(), Failure> {
    let d = right_divide(l, k)?;
    match ctx.format {
        OutputFormat::Json => ctx.json(json!({
            "quotient": operator_json(&d.quotient),
            "remainder": operator_json(&d.remainder),
            "exact": d.remainder.is_zero(),
        })),
        _ => {
            ctx.operator("Q", &d.quotient);
            ctx.operator("R", &d.remainder);
        }
    }
    Ok(())
}

fn factor(p: &Problem, l: &Modo, name: &str, ctx: &mut Ctx) -> Result<(), Failure> {
    let q = p.factor_through_kernel(l)?;
    let k = p.kernel_operator()?;
    match ctx.format {
        OutputFormat::Json => ctx.json(json!({
            "operator": name,
            "kernel": operator_json(&k),
            "quotient": operator_json(&q),
        })),
        _ => {
            ctx.operator("K", &k);
            ctx.operator("Q", &q);
            ctx.line(format!("{name} = Q*K"));
        }
    }
    Ok(())
}

fn verify(p: &Problem, l: &Modo, name: &str, ctx: &mut Ctx) -> Result<(), Failure> {
    let mut results = Vec::new();
    let mut failures = 0;
    for (i, f) in p.functions().iter().enumerate() {
        let image = l.apply(f).map_err(FactorError::from)?;
        let ok = image.is_zero();
        failures += usize::from(!ok);
        match ctx.format {
            OutputFormat::Json => results.push(json!({ "index": i + 1, "ok": ok, "residual": vector_json(&image) })),
            OutputFormat::Text if ok => ctx.line(format!("phi_{}: ok", i + 1)),
            OutputFormat::Text => {
                ctx.line(format!("phi_{}: FAIL {name}(phi_{}) = {}", i + 1, i + 1, format_vector(&image, Style::Text)))
            }
            OutputFormat::Latex => ctx.line(format!(
                "{name}(\\varphi_{{{}}}) = {}",
                i + 1,
                format_vector(&image, Style::Latex)
            )),
        }
    }
    if ctx.format == OutputFormat::Json {
        ctx.json(json!({ "operator": name, "results": results, "ok": failures == 0 }));
    } else if failures == 0 {
        ctx.line("OK");
    }
    if failures > 0 {
        return Err(Failure {
            exit: 2,
            code: "KERNEL_VIOLATION",
            message: format!("{name} fails to annihilate {failures} of {} functions", p.functions().len()),
        });
    }
    Ok(())
}

const EXPECTED_DET: &str = "-4*x^4";
/// Kernel coefficients, ascending powers of D.
const EXPECTED_K: [[[&str; 2]; 2]; 3] = [
    [["0", "-3/(2*x^2)"], ["0", "3/x^2"]],
    [["-1/x", "3/(2*x)"], ["0", "-3/x"]],
    [["1", "0"], ["0", "1"]],
];
const EXPECTED_Q: [[[&str; 2]; 2]; 2] = [
    [["1/x", "3/(2*x)"], ["1/x", "3/(2*x)"]],
    [["1", "1"], ["1", "1"]],
];

fn literal_operator(coeffs: &[[[&str; 2]; 2]]) -> Modo {
    let mats = coeffs
        .iter()
        .map(|m| {
            let entries = m.iter().flatten().map(|s| parse_rational_function(s).expect("valid literal")).collect();
            FieldMatrix::new(2, 2, entries).expect("2x2")
        })
        .collect();
    Modo::new(2, mats).expect("2x2 coefficients")
}

fn mismatch(what: &str) -> Failure {
    Failure { exit: 2, code: "EXAMPLE_MISMATCH", message: format!("{what} differs from the expected value") }
}

fn example(ctx: &mut Ctx) -> Result<(), Failure> {
    let lp = ProblemFile::from_toml(EXAMPLE_FIXTURE)?.validate()?;
    let p = lp.problem.as_ref().expect("fixture has functions");
    let l = &lp.operators["L"];
    let (phi, det) = print_wronskian(p, ctx);
    if det != parse_rational_function(EXPECTED_DET).expect("valid literal") {
        return Err(mismatch("det Phi"));
    }
    let k = p.kernel_operator()?;
    if k != literal_operator(&EXPECTED_K) {
        return Err(mismatch("K"));
    }
    let q = p.factor_through_kernel(l)?;
    if q != literal_operator(&EXPECTED_Q) {
        return Err(mismatch("Q"));
    }
    let product = q.mul(&k).map_err(FactorError::from)?;
    if &product != l {
        return Err(mismatch("Q*K"));
    }
    let annihilated = p.functions().iter().all(|f| k.apply(f).is_ok_and(|v| v.is_zero()));
    if !annihilated {
        return Err(mismatch("K(phi_i)"));
    }
    match ctx.format {
        OutputFormat::Json => ctx.json(json!({
            "n": p.dim(),
            "m": p.order(),
            "wronskian": matrix_json(&phi),
            "det": ratfunc_json(&det),
            "kernel": operator_json(&k),
            "operator": operator_json(l),
            "quotient": operator_json(&q),
            "status": "OK",
        })),
        _ => {
            ctx.operator("K", &k);
            ctx.operator("L", l);
            ctx.operator("Q", &q);
            ctx.line("K(phi_i) = 0 for all i");
            ctx.line("Q*K = L");
            ctx.line("OK");
        }
    }
    Ok(())
}
