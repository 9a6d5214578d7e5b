//! Text, LaTeX and JSON renderings. Text output is valid parser input.

use modo_core::{FieldMatrix, Modo, RationalFunction, VectorFunction};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Style {
    Text,
    Latex,
}

/// `num/den` scaled to coprime integer coefficient lists (ascending) with a
/// positive leading denominator coefficient.
fn integer_parts(f: &RationalFunction) -> (Vec<BigInt>, Vec<BigInt>) {
    let all = f.num().coeffs().iter().chain(f.den().coeffs());
    let lcm = all.clone().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let scale = |cs: &[num_rational::BigRational]| -> Vec<BigInt> {
        cs.iter().map(|c| (c * &lcm).to_integer()).collect()
    };
    let (mut num, mut den) = (scale(f.num().coeffs()), scale(f.den().coeffs()));
    let content = num.iter().chain(&den).fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if !content.is_zero() && !content.is_one() {
        num.iter_mut().chain(den.iter_mut()).for_each(|c| *c /= &content);
    }
    (num, den)
}

fn nonzero_terms(cs: &[BigInt]) -> impl Iterator<Item = (usize, &BigInt)> {
    cs.iter().enumerate().rev().filter(|(_, c)| !c.is_zero())
}

fn term_count(cs: &[BigInt]) -> usize {
    nonzero_terms(cs).count()
}

fn is_unit_poly(cs: &[BigInt]) -> bool {
    cs.len() == 1 && cs[0].is_one()
}

fn monomial_text(k: usize) -> String {
    if k == 1 { "x".into() } else { format!("x^{k}") }
}

fn monomial_latex(k: usize) -> String {
    if k == 1 { "x".into() } else { format!("x^{{{k}}}") }
}

fn int_poly(cs: &[BigInt], style: Style) -> String {
    if cs.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (k, c)) in nonzero_terms(cs).enumerate() {
        let mag = c.abs();
        let sign = match (c.is_negative(), i > 0, style) {
            (true, false, _) => "-",
            (false, false, _) => "",
            (true, true, Style::Text) => "-",
            (false, true, Style::Text) => "+",
            (true, true, Style::Latex) => " - ",
            (false, true, Style::Latex) => " + ",
        };
        out.push_str(sign);
        let body = match (k, style) {
            (0, _) => mag.to_string(),
            (_, Style::Text) if mag.is_one() => monomial_text(k),
            (_, Style::Text) => format!("{mag}*{}", monomial_text(k)),
            (_, Style::Latex) if mag.is_one() => monomial_latex(k),
            (_, Style::Latex) => format!("{mag} {}", monomial_latex(k)),
        };
        out.push_str(&body);
    }
    out
}

/// Renders a rational function, e.g. `-3/(2*x^2)` or `(x^2+2*x)/(x^2+2*x+1)`.
pub fn format_ratfunc(f: &RationalFunction, style: Style) -> String {
    let (num, den) = integer_parts(f);
    let num_s = int_poly(&num, style);
    if is_unit_poly(&den) {
        return num_s;
    }
    let den_s = int_poly(&den, style);
    match style {
        Style::Text => {
            let num_s = if term_count(&num) > 1 { format!("({num_s})") } else { num_s };
            // a bare integer or a bare power of x binds tighter than '/'
            let atomic = den.len() == 1 || (term_count(&den) == 1 && den.last().is_some_and(|c| c.is_one()));
            let den_s = if atomic { den_s } else { format!("({den_s})") };
            format!("{num_s}/{den_s}")
        }
        Style::Latex => match num_s.strip_prefix('-') {
            Some(rest) if term_count(&num) == 1 => format!("-\\frac{{{rest}}}{{{den_s}}}"),
            _ => format!("\\frac{{{num_s}}}{{{den_s}}}"),
        },
    }
}

/// Single-line matrix: `[[a, b], [c, d]]`, or a `pmatrix` in LaTeX.
pub fn format_matrix(a: &FieldMatrix, style: Style) -> String {
    let rows = (0..a.rows()).map(|i| a.row(i).iter().map(|e| format_ratfunc(e, style)).collect::<Vec<_>>());
    match style {
        Style::Text => {
            let rows: Vec<String> = rows.map(|r| format!("[{}]", r.join(", "))).collect();
            format!("[{}]", rows.join(", "))
        }
        Style::Latex => {
            let rows: Vec<String> = rows.map(|r| r.join(" & ")).collect();
            format!("\\begin{{pmatrix}} {} \\end{{pmatrix}}", rows.join(" \\\\ "))
        }
    }
}

/// Matrix with one row per line, for display.
pub fn format_matrix_block(a: &FieldMatrix, style: Style) -> String {
    match style {
        Style::Latex => format_matrix(a, style),
        Style::Text => {
            let rows: Vec<String> = (0..a.rows())
                .map(|i| format!("[{}]", a.row(i).iter().map(|e| format_ratfunc(e, style)).collect::<Vec<_>>().join(", ")))
                .collect();
            format!("[{}]", rows.join(",\n "))
        }
    }
}

pub fn format_vector(f: &VectorFunction, style: Style) -> String {
    match style {
        Style::Text => format!("[{}]", f.components().iter().map(|e| format_ratfunc(e, style)).collect::<Vec<_>>().join(", ")),
        Style::Latex => format_matrix(f.as_matrix(), style),
    }
}

fn derivation_power(k: usize, style: Style) -> String {
    match (k, style) {
        (0, _) => String::new(),
        (1, Style::Text) => "D".into(),
        (_, Style::Text) => format!("D^{k}"),
        (1, Style::Latex) => "\\partial".into(),
        (_, Style::Latex) => format!("\\partial^{{{k}}}"),
    }
}

fn operator_term(a: &FieldMatrix, k: usize, style: Style) -> String {
    let d = derivation_power(k, style);
    let glue = |coef: String| match (k, style) {
        (0, _) => coef,
        (_, Style::Text) => format!("{coef}*{d}"),
        (_, Style::Latex) => format!("{coef} {d}"),
    };
    if a.rows() == 1 {
        let c = a.get(0, 0);
        if k > 0 && c.is_one() {
            return d;
        }
        if k > 0 && (-c).is_one() {
            return format!("-{d}");
        }
        let s = format_ratfunc(c, style);
        let compound = s.char_indices().any(|(i, ch)| i > 0 && (ch == '+' || ch == '-'));
        return match (k, compound, style) {
            (0, _, _) | (_, false, _) => glue(s),
            (_, true, Style::Text) => glue(format!("({s})")),
            (_, true, Style::Latex) => glue(format!("\\left({s}\\right)")),
        };
    }
    let id = a.is_identity();
    let neg_id = a.neg().is_identity();
    if id || neg_id {
        let sign = if neg_id { "-" } else { "" };
        return format!("{sign}{}", glue("I".into()));
    }
    glue(format_matrix(a, style))
}

/// Renders an operator with powers of the derivation descending, zero
/// coefficients omitted, e.g. `I*D^2 + [[-1/x, 3/(2*x)], [0, -3/x]]*D`.
pub fn format_operator(op: &Modo, style: Style) -> String {
    let terms: Vec<String> = op
        .coeffs()
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, a)| !a.is_zero())
        .map(|(k, a)| operator_term(a, k, style))
        .collect();
    let Some((first, rest)) = terms.split_first() else {
        return "0".into();
    };
    let mut out = first.clone();
    for t in rest {
        match t.strip_prefix('-') {
            Some(tail) => {
                out.push_str(" - ");
                out.push_str(tail);
            }
            None => {
                out.push_str(" + ");
                out.push_str(t);
            }
        }
    }
    out
}

pub fn ratfunc_json(f: &RationalFunction) -> Value {
    let coeffs = |cs: &[num_rational::BigRational]| -> Value { cs.iter().map(|c| Value::String(c.to_string())).collect() };
    json!({ "num": coeffs(f.num().coeffs()), "den": coeffs(f.den().coeffs()) })
}

pub fn matrix_json(a: &FieldMatrix) -> Value {
    (0..a.rows()).map(|i| a.row(i).iter().map(ratfunc_json).collect::<Value>()).collect()
}

pub fn vector_json(f: &VectorFunction) -> Value {
    f.components().iter().map(ratfunc_json).collect()
}

/// `{"n", "order", "coeffs"}` with coefficient matrices in ascending powers.
pub fn operator_json(op: &Modo) -> Value {
    json!({
        "n": op.dim(),
        "order": op.order(),
        "coeffs": op.coeffs().iter().map(matrix_json).collect::<Value>(),
    })
}
