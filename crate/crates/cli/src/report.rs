//! Exit codes, error mapping and table output.

use std::fmt;
use std::io::Write;
use std::path::Path;

use fockppt::Error;

pub const EXIT_PPT: i32 = 0;
pub const EXIT_NPT: i32 = 10;
pub const EXIT_PARSE: i32 = 64;
pub const EXIT_PRECONDITION: i32 = 65;
pub const EXIT_NON_HERMITIAN: i32 = 66;
pub const EXIT_NON_CONVERGENT: i32 = 67;
pub const EXIT_SINGULAR_BLOCK: i32 = 68;
pub const EXIT_IO: i32 = 74;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn new(code: i32, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }

    pub fn parse(message: impl Into<String>) -> Self {
        Self::new(EXIT_PARSE, message)
    }

    pub fn precondition(message: impl Into<String>) -> Self {
        Self::new(EXIT_PRECONDITION, message)
    }

    pub fn io(path: &Path, e: std::io::Error) -> Self {
        Self::new(EXIT_IO, format!("{}: {e}", path.display()))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse(_)
            | Error::DimensionMismatch(_)
            | Error::NonFinite(_)
            | Error::AsymmetricR { .. } => EXIT_PARSE,
            Error::NonHermitian { .. } => EXIT_NON_HERMITIAN,
            Error::NonConvergent { .. } => EXIT_NON_CONVERGENT,
            Error::SingularBlock { .. } => EXIT_SINGULAR_BLOCK,
            Error::InvalidSubset(_)
            | Error::InvalidPartition(_)
            | Error::NotPositiveInput { .. }
            | Error::MemoryBudget { .. }
            | Error::InsufficientCutoff(_)
            | Error::Precondition(_) => EXIT_PRECONDITION,
        };
        Self::new(code, e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// 17 significant digits, enough to round-trip any f64.
pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

/// A CSV cell.
pub enum Cell {
    Float(f64),
    Bool(bool),
    Int(usize),
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Float(x) => f.write_str(&float(*x)),
            Cell::Bool(b) => write!(f, "{b}"),
            Cell::Int(n) => write!(f, "{n}"),
        }
    }
}

impl Cell {
    fn json(&self) -> serde_json::Value {
        match self {
            Cell::Float(x) => serde_json::json!(x),
            Cell::Bool(b) => serde_json::json!(b),
            Cell::Int(n) => serde_json::json!(n),
        }
    }
}

/// Writes the table as CSV (header first) or, with `json`, as an array of
/// objects keyed by the header.
pub fn write_table(
    header: &[&str],
    rows: &[Vec<Cell>],
    json: bool,
    out: Option<&Path>,
) -> CliResult<()> {
    let mut text = String::new();
    if json {
        let objects: Vec<serde_json::Value> = rows
            .iter()
            .map(|row| {
                header
                    .iter()
                    .zip(row)
                    .map(|(k, v)| (k.to_string(), v.json()))
                    .collect()
            })
            .collect();
        text.push_str(&serde_json::to_string_pretty(&objects).expect("table serializes"));
        text.push('\n');
    } else {
        text.push_str(&header.join(","));
        text.push('\n');
        for row in rows {
            let cells: Vec<String> = row.iter().map(Cell::to_string).collect();
            text.push_str(&cells.join(","));
            text.push('\n');
        }
    }
    emit(&text, out)
}

/// Writes to `out` if given, otherwise to stdout.
pub fn emit(text: &str, out: Option<&Path>) -> CliResult<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::io(Path::new("<stdout>"), e)),
    }
}

pub fn emit_json<T: serde::Serialize>(value: &T, out: Option<&Path>) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value).expect("report serializes");
    text.push('\n');
    emit(&text, out)
}
