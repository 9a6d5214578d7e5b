//! Problem files: TOML documents whose mathematical entries are expression
//! strings.
//!
//! ```toml
//! n = 2
//! functions = [["x^3", "-x^3"], ["x^2", "0"], ["0", "x"], ["1", "0"]]
//!
//! [operators]
//! # one n x n matrix per power of D, starting at D^0
//! L = [[["0", "0"], ["0", "0"]], [["1", "0"], ["0", "1"]]]
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use modo_core::{FieldMatrix, Modo, Problem, RationalFunction, VectorFunction};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::format::{format_ratfunc, Style};
use crate::parse::{parse_rational_function, ExprError};

/// Matrix of expression strings, row-major.
pub type MatrixLiteral = Vec<Vec<String>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub n: usize,
    #[serde(default)]
    pub functions: Vec<Vec<String>>,
    /// Coefficient matrices in ascending powers of the derivation.
    #[serde(default)]
    pub operators: BTreeMap<String, Vec<MatrixLiteral>>,
}

#[derive(Debug, Error)]
pub enum ProblemError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed problem file: {0}")]
    Toml(String),
    #[error("{location}: {source}")]
    Expression { location: String, source: ExprError },
    #[error("{0}")]
    Dimension(String),
}

impl ProblemError {
    pub fn code(&self) -> &'static str {
        match self {
            ProblemError::Io { .. } => "IO_ERROR",
            ProblemError::Toml(_) | ProblemError::Expression { .. } => "PARSE_ERROR",
            ProblemError::Dimension(_) => "DIMENSION_MISMATCH",
        }
    }
}

/// A validated problem file.
#[derive(Clone, Debug, PartialEq)]
pub struct LoadedProblem {
    pub n: usize,
    /// `None` when the file lists no functions.
    pub problem: Option<Problem>,
    pub operators: BTreeMap<String, Modo>,
}

fn expr(src: &str, location: impl FnOnce() -> String) -> Result<RationalFunction, ProblemError> {
    parse_rational_function(src).map_err(|source| ProblemError::Expression { location: location(), source })
}

fn operator_from_literal(name: &str, n: usize, lit: &[MatrixLiteral]) -> Result<Modo, ProblemError> {
    let mut coeffs = Vec::with_capacity(lit.len());
    for (k, m) in lit.iter().enumerate() {
        if m.len() != n || m.iter().any(|r| r.len() != n) {
            return Err(ProblemError::Dimension(format!(
                "operators.{name}[{k}]: expected a {n}x{n} matrix"
            )));
        }
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in m.iter().enumerate() {
            for (j, s) in row.iter().enumerate() {
                entries.push(expr(s, || format!("operators.{name}[{k}][{i}][{j}]"))?);
            }
        }
        coeffs.push(FieldMatrix::new(n, n, entries).expect("shape checked"));
    }
    Ok(Modo::new(n, coeffs).expect("shapes checked"))
}

impl ProblemFile {
    pub fn from_toml(src: &str) -> Result<Self, ProblemError> {
        toml::from_str(src).map_err(|e| ProblemError::Toml(e.message().to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("plain data serializes")
    }

    /// Parses every expression and checks dimensions.
    pub fn validate(&self) -> Result<LoadedProblem, ProblemError> {
        let n = self.n;
        if n == 0 {
            return Err(ProblemError::Dimension("n must be positive".into()));
        }
        let mut functions = Vec::with_capacity(self.functions.len());
        for (i, f) in self.functions.iter().enumerate() {
            if f.len() != n {
                return Err(ProblemError::Dimension(format!(
                    "functions[{i}]: expected {n} components, found {}",
                    f.len()
                )));
            }
            let comps = f
                .iter()
                .enumerate()
                .map(|(j, s)| expr(s, || format!("functions[{i}][{j}]")))
                .collect::<Result<Vec<_>, _>>()?;
            functions.push(VectorFunction::new(comps).expect("n > 0"));
        }
        let problem = if functions.is_empty() {
            None
        } else {
            if functions.len() % n != 0 {
                return Err(ProblemError::Dimension(format!(
                    "{} functions is not a multiple of n = {n}",
                    functions.len()
                )));
            }
            Some(Problem::new(functions).map_err(|e| ProblemError::Dimension(e.to_string()))?)
        };
        let operators = self
            .operators
            .iter()
            .map(|(name, lit)| Ok((name.clone(), operator_from_literal(name, n, lit)?)))
            .collect::<Result<_, ProblemError>>()?;
        Ok(LoadedProblem { n, problem, operators })
    }
}

fn matrix_literal(a: &FieldMatrix) -> MatrixLiteral {
    (0..a.rows()).map(|i| a.row(i).iter().map(|e| format_ratfunc(e, Style::Text)).collect()).collect()
}

impl LoadedProblem {
    pub fn to_file(&self) -> ProblemFile {
        let functions = self
            .problem
            .iter()
            .flat_map(|p| p.functions())
            .map(|f| f.components().iter().map(|e| format_ratfunc(e, Style::Text)).collect())
            .collect();
        let operators = self
            .operators
            .iter()
            .map(|(name, op)| (name.clone(), op.coeffs().iter().map(matrix_literal).collect()))
            .collect();
        ProblemFile { n: self.n, functions, operators }
    }
}

pub fn load(path: &Path) -> Result<LoadedProblem, ProblemError> {
    let src = std::fs::read_to_string(path)
        .map_err(|source| ProblemError::Io { path: path.display().to_string(), source })?;
    ProblemFile::from_toml(&src)?.validate()
}

pub fn save(problem: &LoadedProblem, path: &Path) -> Result<(), ProblemError> {
    std::fs::write(path, problem.to_file().to_toml())
        .map_err(|source| ProblemError::Io { path: path.display().to_string(), source })
}
