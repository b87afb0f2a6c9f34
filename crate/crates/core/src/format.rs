//! JSON problem and solution files.
//!
//! Numbers are written with 17 significant digits using C `%.17g` rules
//! (trailing zeros dropped, exponent form outside `1e-4 <= |x| < 1e17`), so
//! every finite double survives a write/read cycle unchanged. The exact
//! layout is documented in `docs/FORMATS.md`.

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::problem::{Dims, GainPair, ProblemSpec, ValuePair};

/// Formats `x` like C's `printf("%.17g", x)`.
pub fn fmt_g17(x: f64) -> String {
    if !x.is_finite() {
        return "null".into();
    }
    if x == 0.0 {
        return if x.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    let sci = format!("{x:.16e}");
    let (mant, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..17).contains(&exp) {
        let mant = strip_zeros(mant);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mant}e{sign}{:02}", exp.abs())
    } else {
        let prec = (16 - exp) as usize;
        strip_zeros(&format!("{x:.prec$}")).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn write_matrix(out: &mut String, key: &str, m: &Mat, last: bool) {
    let rows: Vec<String> = m
        .to_rows()
        .iter()
        .map(|r| {
            let cells: Vec<String> = r.iter().map(|&x| fmt_g17(x)).collect();
            format!("[{}]", cells.join(", "))
        })
        .collect();
    out.push_str(&format!(
        "  \"{key}\": [{}]{}\n",
        rows.join(", "),
        if last { "" } else { "," }
    ));
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    n: usize,
    m1: usize,
    m2: usize,
    #[serde(rename = "A")]
    a: Vec<Vec<f64>>,
    #[serde(rename = "B1")]
    b1: Vec<Vec<f64>>,
    #[serde(rename = "B2")]
    b2: Vec<Vec<f64>>,
    #[serde(rename = "Q1")]
    q1: Vec<Vec<f64>>,
    #[serde(rename = "Q2")]
    q2: Vec<Vec<f64>>,
    #[serde(rename = "R1")]
    r1: Vec<Vec<f64>>,
    #[serde(rename = "R2")]
    r2: Vec<Vec<f64>>,
}

fn to_mat(name: &str, rows: &[Vec<f64>], shape: (usize, usize)) -> Result<Mat> {
    if rows.len() != shape.0 || rows.iter().any(|r| r.len() != shape.1) {
        return Err(Error::Parse(format!(
            "\"{name}\" must be {}x{} (got {} rows with lengths {:?})",
            shape.0,
            shape.1,
            rows.len(),
            rows.iter().map(Vec::len).collect::<Vec<_>>()
        )));
    }
    Mat::from_rows(rows).map_err(|e| Error::Parse(format!("\"{name}\": {e}")))
}

fn to_rect_mat(name: &str, rows: &[Vec<f64>]) -> Result<Mat> {
    let cols = rows.first().map_or(0, Vec::len);
    to_mat(name, rows, (rows.len(), cols))
}

/// Parses a problem document. Shapes must agree with the declared
/// dimensions and rows must not be ragged.
pub fn parse_problem(text: &str) -> Result<ProblemSpec> {
    let raw: RawProblem = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let dims = Dims::new(raw.n, raw.m1, raw.m2).map_err(|e| Error::Parse(e.to_string()))?;
    let (n, m1, m2, m) = (raw.n, raw.m1, raw.m2, raw.m1 + raw.m2);
    ProblemSpec::new(
        dims,
        to_mat("A", &raw.a, (n, n))?,
        to_mat("B1", &raw.b1, (n, m1))?,
        to_mat("B2", &raw.b2, (n, m2))?,
        to_mat("Q1", &raw.q1, (n, n))?,
        to_mat("Q2", &raw.q2, (n, n))?,
        to_mat("R1", &raw.r1, (m, m))?,
        to_mat("R2", &raw.r2, (m, m))?,
    )
    .map_err(|e| Error::Parse(e.to_string()))
}

pub fn serialize_problem(spec: &ProblemSpec) -> String {
    let d = spec.dims();
    let mut out = String::from("{\n");
    out.push_str(&format!(
        "  \"n\": {},\n  \"m1\": {},\n  \"m2\": {},\n",
        d.n, d.m1, d.m2
    ));
    write_matrix(&mut out, "A", spec.a(), false);
    write_matrix(&mut out, "B1", spec.b1(), false);
    write_matrix(&mut out, "B2", spec.b2(), false);
    write_matrix(&mut out, "Q1", spec.q1(), false);
    write_matrix(&mut out, "Q2", spec.q2(), false);
    write_matrix(&mut out, "R1", spec.r1(), false);
    write_matrix(&mut out, "R2", spec.r2(), true);
    out.push_str("}\n");
    out
}

/// Residual norms carried by a solution file.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResidualNorms {
    #[serde(deserialize_with = "nullable_f64")]
    pub res1: f64,
    #[serde(deserialize_with = "nullable_f64")]
    pub res2: f64,
    #[serde(deserialize_with = "nullable_f64")]
    pub res_gain: f64,
}

fn nullable_f64<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
}

/// Contents of a solution file.
///
/// Only `X1` and `X2` are mandatory. Optional fields are written only when
/// set; `Theta1` and `Theta2` always travel together.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionFile {
    pub values: ValuePair,
    pub gains: Option<GainPair>,
    pub iterations: Option<usize>,
    pub residuals: Option<ResidualNorms>,
    pub status: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSolution {
    #[serde(rename = "X1")]
    x1: Vec<Vec<f64>>,
    #[serde(rename = "X2")]
    x2: Vec<Vec<f64>>,
    #[serde(rename = "Theta1")]
    theta1: Option<Vec<Vec<f64>>>,
    #[serde(rename = "Theta2")]
    theta2: Option<Vec<Vec<f64>>>,
    iterations: Option<usize>,
    residuals: Option<ResidualNorms>,
    status: Option<String>,
}

pub fn parse_solution(text: &str) -> Result<SolutionFile> {
    let raw: RawSolution = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let gains = match (raw.theta1, raw.theta2) {
        (Some(t1), Some(t2)) => Some(GainPair {
            theta1: to_rect_mat("Theta1", &t1)?,
            theta2: to_rect_mat("Theta2", &t2)?,
        }),
        (None, None) => None,
        _ => {
            return Err(Error::Parse(
                "\"Theta1\" and \"Theta2\" must appear together".into(),
            ))
        }
    };
    Ok(SolutionFile {
        values: ValuePair {
            x1: to_rect_mat("X1", &raw.x1)?,
            x2: to_rect_mat("X2", &raw.x2)?,
        },
        gains,
        iterations: raw.iterations,
        residuals: raw.residuals,
        status: raw.status,
    })
}

pub fn serialize_solution(sol: &SolutionFile) -> String {
    let mut out = String::from("{\n");
    if let Some(s) = &sol.status {
        out.push_str(&format!(
            "  \"status\": {},\n",
            serde_json::to_string(s).expect("string serializes")
        ));
    }
    let has_tail = sol.gains.is_some() || sol.iterations.is_some() || sol.residuals.is_some();
    write_matrix(&mut out, "X1", &sol.values.x1, false);
    write_matrix(&mut out, "X2", &sol.values.x2, !has_tail);
    if let Some(g) = &sol.gains {
        let more = sol.iterations.is_some() || sol.residuals.is_some();
        write_matrix(&mut out, "Theta1", &g.theta1, false);
        write_matrix(&mut out, "Theta2", &g.theta2, !more);
    }
    if let Some(it) = sol.iterations {
        out.push_str(&format!(
            "  \"iterations\": {it}{}\n",
            if sol.residuals.is_some() { "," } else { "" }
        ));
    }
    if let Some(r) = &sol.residuals {
        out.push_str(&format!(
            "  \"residuals\": {{\"res1\": {}, \"res2\": {}, \"res_gain\": {}}}\n",
            fmt_g17(r.res1),
            fmt_g17(r.res2),
            fmt_g17(r.res_gain)
        ));
    }
    out.push_str("}\n");
    out
}
