use std::fs::File;
use std::io::Write;
use std::path::PathBuf;

use clap::ValueEnum;
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::CliError;

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

/// Parses a JSON argument given inline or as a path to a file.
pub fn load<T: DeserializeOwned>(arg: &str) -> Result<T, CliError> {
    let text = arg.trim();
    let inline = text.starts_with('[') || text.starts_with('{') || text.starts_with('"');
    let body = if inline {
        text.to_string()
    } else {
        std::fs::read_to_string(text).map_err(|e| CliError::Input(format!("cannot read {text}: {e}")))?
    };
    serde_json::from_str(&body).map_err(|e| CliError::Input(format!("bad JSON in {}: {e}", short(text))))
}

fn short(s: &str) -> String {
    if s.len() > 40 {
        format!("{}...", &s[..40])
    } else {
        s.to_string()
    }
}

/// Formats a real for CSV, spelling out infinities and dropping the sign of zero.
pub fn number(v: f64) -> String {
    if v == f64::INFINITY {
        "inf".into()
    } else if v == f64::NEG_INFINITY {
        "-inf".into()
    } else if v == 0.0 {
        "0".into()
    } else {
        v.to_string()
    }
}

pub trait Emit {
    fn json<T: Serialize>(&mut self, value: &T) -> Result<(), CliError>;
    fn csv(&mut self, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError>;
}

/// Output destination and the requested format.
pub struct Sink {
    out: Option<PathBuf>,
    format: Option<Format>,
}

impl Sink {
    pub fn new(out: Option<PathBuf>, format: Option<Format>) -> Self {
        Sink { out, format }
    }

    pub fn format(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    fn writer(&self) -> Result<Box<dyn Write>, CliError> {
        Ok(match &self.out {
            Some(p) => Box::new(File::create(p)?),
            None => Box::new(std::io::stdout().lock()),
        })
    }
}

impl Emit for Sink {
    fn json<T: Serialize>(&mut self, value: &T) -> Result<(), CliError> {
        let mut w = self.writer()?;
        serde_json::to_writer_pretty(&mut w, value).map_err(|e| CliError::Io(e.into()))?;
        writeln!(w)?;
        Ok(())
    }

    fn csv(&mut self, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
        let mut w = csv::Writer::from_writer(self.writer()?);
        w.write_record(header).map_err(|e| CliError::Io(e.into()))?;
        for r in rows {
            w.write_record(r).map_err(|e| CliError::Io(e.into()))?;
        }
        w.flush()?;
        Ok(())
    }
}
