use std::fs;
use std::io::Write;
use std::path::Path;

use planted_clique::bundle::Bundle;
use planted_clique::Error;
use serde::Serialize;
use serde_json::{Map, Value};

pub const EXIT_INPUT: u8 = 2;
pub const EXIT_UNVERIFIED: u8 = 3;
pub const EXIT_ALGORITHM: u8 = 4;
pub const EXIT_NOT_CONVERGED: u8 = 5;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    /// Exit with `code` after the report has already been printed.
    pub fn silent(code: u8) -> Self {
        Self {
            code,
            message: String::new(),
        }
    }
}

/// Parameter, parse and I/O problems are the caller's; everything else is the algorithm's.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidParameter(_) | Error::Parse { .. } | Error::Io(_) | Error::Json(_) | Error::Budget(_) => EXIT_INPUT,
        Error::NotConverged { .. } => EXIT_NOT_CONVERGED,
        _ => EXIT_ALGORITHM,
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        Self {
            code: exit_code(&e),
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::input(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        Self::input(e.to_string())
    }
}

/// `value` serialized as an object with a leading `schema` field.
pub fn with_schema<T: Serialize>(schema: &str, value: &T) -> Result<Value, CliError> {
    let mut obj = Map::new();
    obj.insert("schema".into(), Value::String(schema.into()));
    match serde_json::to_value(value)? {
        Value::Object(fields) => obj.extend(fields),
        other => {
            obj.insert("value".into(), other);
        }
    }
    Ok(Value::Object(obj))
}

pub fn print_json(v: &Value) -> Result<(), CliError> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v)?;
    writeln!(out)?;
    Ok(())
}

pub fn read_bundle(path: &Path) -> Result<Bundle, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    Ok(Bundle::parse(&text)?)
}

/// Writes to `path`, or stdout for `-` or no path.
pub fn write_text(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) if p != Path::new("-") => fs::write(p, text).map_err(|e| CliError::input(format!("{}: {e}", p.display()))),
        _ => {
            std::io::stdout().lock().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}
