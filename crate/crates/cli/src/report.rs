use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};

use hyperdyn::Error;

pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_PREMISE: i32 = 2;
pub const EXIT_ASSERTION: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        Self { code: EXIT_CONFIG, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Rejected(_) => EXIT_PREMISE,
            Error::Internal(_) => EXIT_ASSERTION,
            _ => EXIT_CONFIG,
        };
        Self { code, message: e.to_string() }
    }
}

/// A finished experiment: summary, flat rows and the exit status it implies.
pub struct Output {
    pub command: &'static str,
    pub config: BTreeMap<String, String>,
    pub status: String,
    pub exit_code: i32,
    pub summary: Value,
    rows_json: Vec<Value>,
    rows_csv: String,
}

/// Flattens a serialisable argument struct into key → value strings.
pub fn config_of<T: Serialize>(args: &T) -> BTreeMap<String, String> {
    let Value::Object(map) = serde_json::to_value(args).expect("plain struct") else {
        return BTreeMap::new();
    };
    map.into_iter()
        .filter(|(_, v)| !v.is_null())
        .map(|(k, v)| {
            let s = match v {
                Value::String(s) => s,
                other => other.to_string(),
            };
            (k, s)
        })
        .collect()
}

impl Output {
    pub fn new<R: Serialize>(
        command: &'static str,
        config: BTreeMap<String, String>,
        summary: Value,
        rows: &[R],
    ) -> Result<Self, CliError> {
        let rows_json = rows
            .iter()
            .map(|r| serde_json::to_value(r).map_err(|e| CliError::config(e.to_string())))
            .collect::<Result<_, _>>()?;
        let mut w = csv::WriterBuilder::new().has_headers(true).from_writer(Vec::new());
        for r in rows {
            w.serialize(r).map_err(|e| CliError::config(format!("csv: {e}")))?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::config(e.to_string()))?;
        Ok(Self {
            command,
            config,
            status: "ok".into(),
            exit_code: 0,
            summary,
            rows_json,
            rows_csv: String::from_utf8(bytes).expect("utf-8"),
        })
    }

    pub fn with_status(mut self, status: &str, exit_code: i32) -> Self {
        self.status = status.into();
        self.exit_code = exit_code;
        self
    }

    pub fn failure_message(&self) -> Option<String> {
        match self.exit_code {
            0 => None,
            EXIT_PREMISE => Some(format!("{}: premise not met ({})", self.command, self.status)),
            EXIT_ASSERTION => Some(format!("{}: invariant violated ({})", self.command, self.status)),
            _ => Some(format!("{}: {}", self.command, self.status)),
        }
    }

    fn versions() -> Value {
        json!({ "hyperdyn-cli": env!("CARGO_PKG_VERSION"), "hyperdyn-core": hyperdyn::VERSION })
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Json => {
                let v = json!({
                    "command": self.command,
                    "versions": Self::versions(),
                    "config": self.config,
                    "status": self.status,
                    "summary": self.summary,
                    "rows": self.rows_json,
                });
                let mut s = serde_json::to_string_pretty(&v).map_err(|e| CliError::config(e.to_string()))?;
                s.push('\n');
                Ok(s)
            }
            Format::Csv => {
                let mut s = format!(
                    "# hyperdyn-cli {} / hyperdyn-core {}\n# command: {}\n# status: {}\n",
                    env!("CARGO_PKG_VERSION"),
                    hyperdyn::VERSION,
                    self.command,
                    self.status
                );
                for (k, v) in &self.config {
                    s.push_str(&format!("# {k} = {v}\n"));
                }
                s.push_str(&self.rows_csv);
                Ok(s)
            }
        }
    }
}
