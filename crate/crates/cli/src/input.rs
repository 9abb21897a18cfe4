//! Parsers for space identifiers and matrix input.
//!
//! Matrices are row-major, either CSV (one row per line, `#` comments,
//! complex entries written `[re;im]`) or a JSON array of arrays whose
//! entries are numbers or `[re, im]` pairs.

use std::fmt;
use std::str::FromStr;

use dualspace_core::lattice::LatticeBasis;
use dualspace_core::numkernel::Matrix;
use dualspace_core::spaces::{make_space, Family, SpaceDescriptor};
use num_complex::Complex64;
use serde_json::Value;

use crate::error::{CliError, CliResult};

/// A catalog space or the `su3` lattice counterexample.
#[derive(Debug, Clone)]
pub enum SpaceArg {
    Space(Box<SpaceDescriptor>),
    Su3,
}

impl SpaceArg {
    pub fn space(&self) -> CliResult<&SpaceDescriptor> {
        match self {
            SpaceArg::Space(s) => Ok(s),
            SpaceArg::Su3 => Err(CliError::Domain("su3 only provides a lattice".into())),
        }
    }

    pub fn lattice(&self) -> &LatticeBasis {
        match self {
            SpaceArg::Space(s) => s.lattice(),
            SpaceArg::Su3 => su3_lattice(),
        }
    }
}

fn su3_lattice() -> &'static LatticeBasis {
    static SU3: std::sync::OnceLock<LatticeBasis> = std::sync::OnceLock::new();
    SU3.get_or_init(LatticeBasis::su3)
}

impl fmt::Display for SpaceArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceArg::Space(s) => write!(f, "{}", s.id()),
            SpaceArg::Su3 => f.write_str("su3"),
        }
    }
}

impl FromStr for SpaceArg {
    type Err = CliError;
    fn from_str(s: &str) -> CliResult<Self> {
        parse_space_id(s)
    }
}

/// Parses `family:n:m` (or whitespace separated) or `su3`.
pub fn parse_space_id(s: &str) -> CliResult<SpaceArg> {
    let parts: Vec<&str> =
        s.split(|c: char| c == ':' || c == ',' || c.is_whitespace()).filter(|p| !p.is_empty()).collect();
    let Some((name, dims)) = parts.split_first() else {
        return Err(CliError::Usage("empty space id".into()));
    };
    let name = name.to_ascii_lowercase();
    if name == "su3" {
        if !dims.is_empty() {
            return Err(CliError::Usage("su3 takes no dimensions".into()));
        }
        return Ok(SpaceArg::Su3);
    }
    let family = match name.as_str() {
        "gr-real" => Family::RealGrassmannian,
        "gr-complex" => Family::ComplexGrassmannian,
        "oriented-plane" => Family::OrientedTwoPlane,
        "sphere" => Family::CircleSphere,
        other => return Err(CliError::Usage(format!("unknown space family '{other}'"))),
    };
    let [n, m] = dims else {
        return Err(CliError::Usage(format!("space id '{s}' needs two dimensions")));
    };
    let parse = |d: &str| d.parse::<usize>().map_err(|_| CliError::Usage(format!("bad dimension '{d}'")));
    let (n, m) = (parse(n)?, parse(m)?);
    if n + m > 64 {
        return Err(CliError::Usage(format!("dimension n + m = {} is too large", n + m)));
    }
    Ok(SpaceArg::Space(Box::new(make_space(family, n, m)?)))
}

fn finite(x: f64) -> CliResult<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(CliError::Parse(format!("non-finite entry {x}")))
    }
}

fn parse_number(s: &str) -> CliResult<f64> {
    let t = s.trim();
    finite(t.parse::<f64>().map_err(|_| CliError::Parse(format!("bad number '{t}'")))?)
}

/// One CSV cell: `x` or `[re;im]`.
fn parse_cell(s: &str) -> CliResult<(Complex64, bool)> {
    let t = s.trim();
    if let Some(inner) = t.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
        let parts: Vec<&str> = inner.split([';', ',']).collect();
        let [re, im] = parts.as_slice() else {
            return Err(CliError::Parse(format!("complex entry '{t}' needs two parts")));
        };
        return Ok((Complex64::new(parse_number(re)?, parse_number(im)?), true));
    }
    Ok((Complex64::new(parse_number(t)?, 0.0), false))
}

fn assemble(rows: Vec<Vec<(Complex64, bool)>>) -> CliResult<Matrix> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if nrows == 0 || ncols == 0 {
        return Err(CliError::Parse("empty matrix".into()));
    }
    if let Some(bad) = rows.iter().position(|r| r.len() != ncols) {
        return Err(CliError::Parse(format!("row {bad} has {} entries, expected {ncols}", rows[bad].len())));
    }
    if nrows.saturating_mul(ncols) > 4096 {
        return Err(CliError::Parse(format!("{nrows}x{ncols} matrix is too large")));
    }
    let complex = rows.iter().flatten().any(|(_, c)| *c);
    let data: Vec<Complex64> = rows.into_iter().flatten().map(|(z, _)| z).collect();
    let m = if complex {
        Matrix::from_complex_row_major(nrows, ncols, &data)?
    } else {
        let re: Vec<f64> = data.iter().map(|z| z.re).collect();
        Matrix::from_real_row_major(nrows, ncols, &re)?
    };
    Ok(m)
}

/// Parses a CSV matrix.
pub fn parse_matrix_csv(text: &str) -> CliResult<Matrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record?;
        if record.iter().all(|c| c.is_empty()) {
            continue;
        }
        rows.push(record.iter().map(parse_cell).collect::<CliResult<Vec<_>>>()?);
    }
    assemble(rows)
}

fn json_entry(v: &Value) -> CliResult<(Complex64, bool)> {
    match v {
        Value::Number(n) => {
            Ok((Complex64::new(finite(n.as_f64().ok_or_else(|| CliError::Parse("bad number".into()))?)?, 0.0), false))
        }
        Value::Array(pair) => match pair.as_slice() {
            [Value::Number(re), Value::Number(im)] => {
                let re = finite(re.as_f64().ok_or_else(|| CliError::Parse("bad number".into()))?)?;
                let im = finite(im.as_f64().ok_or_else(|| CliError::Parse("bad number".into()))?)?;
                Ok((Complex64::new(re, im), true))
            }
            _ => Err(CliError::Parse("complex entries are [re, im] pairs".into())),
        },
        other => Err(CliError::Parse(format!("unexpected entry {other}"))),
    }
}

/// Parses a JSON array of arrays.
pub fn parse_matrix_json(text: &str) -> CliResult<Matrix> {
    let value: Value = serde_json::from_str(text)?;
    let Value::Array(rows) = value else {
        return Err(CliError::Parse("expected an array of rows".into()));
    };
    let rows = rows
        .iter()
        .map(|row| match row {
            Value::Array(cells) => cells.iter().map(json_entry).collect(),
            _ => Err(CliError::Parse("each row must be an array".into())),
        })
        .collect::<CliResult<Vec<_>>>()?;
    assemble(rows)
}

/// JSON when the text opens with `[[`, CSV otherwise.
pub fn parse_matrix(text: &str) -> CliResult<Matrix> {
    let mut chars = text.chars().filter(|c| !c.is_whitespace());
    if chars.next() == Some('[') && chars.next() == Some('[') {
        parse_matrix_json(text)
    } else {
        parse_matrix_csv(text)
    }
}

/// A space id on the first line followed by a matrix.
pub fn parse_embed_request(text: &str) -> CliResult<(SpaceArg, Matrix)> {
    let (head, body) = text.split_once('\n').unwrap_or((text, ""));
    Ok((parse_space_id(head)?, parse_matrix(body)?))
}

/// Parses a comma or whitespace separated list of reals.
pub fn parse_vector(s: &str) -> CliResult<Vec<f64>> {
    let v: Vec<f64> = s
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|p| !p.is_empty())
        .map(parse_number)
        .collect::<CliResult<_>>()?;
    if v.is_empty() {
        return Err(CliError::Usage("empty vector".into()));
    }
    Ok(v)
}
