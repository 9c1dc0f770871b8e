use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use crate::CliError;

pub fn open(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(CliError::io)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn csv_writer(path: Option<&Path>) -> Result<csv::Writer<Box<dyn Write>>, CliError> {
    Ok(csv::WriterBuilder::new().flexible(true).from_writer(open(path)?))
}

pub fn write_json<T: serde::Serialize>(path: Option<&Path>, value: &T) -> Result<(), CliError> {
    let mut w = open(path)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(CliError::io)?;
    writeln!(w).map_err(CliError::io)?;
    w.flush().map_err(CliError::io)
}

/// Shortest round-trip decimal form.
pub fn num(x: f64) -> String {
    format!("{x}")
}

pub fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// JSON has no infinities; map them to null.
pub fn json_num(x: f64) -> serde_json::Value {
    serde_json::Number::from_f64(x).map_or(serde_json::Value::Null, serde_json::Value::Number)
}
