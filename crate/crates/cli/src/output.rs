//! CSV and JSON artifacts. All numbers are written with 17 significant digits so
//! they round-trip, and nothing time-dependent goes into an artifact.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::CliError;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// A numeric table with `name [unit]` columns.
pub struct Table {
    columns: Vec<String>,
    rows: Vec<Vec<String>>,
}

pub fn num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.16e}")
    }
}

impl Table {
    /// Columns as (name, unit); an empty unit is written as `[1]`, and text
    /// columns use `-`.
    pub fn new(columns: &[(&str, &str)]) -> Self {
        let columns = columns
            .iter()
            .map(|(n, u)| format!("{n} [{}]", if u.is_empty() { "1" } else { u }))
            .collect();
        Self { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: &[f64]) {
        self.push_cells(row.iter().map(|x| num(*x)).collect());
    }

    /// A row with text cells, e.g. verdict names.
    pub fn push_cells(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn render(&self, cfg: &RunConfig) -> String {
        let mut s = format!("# g2lab {VERSION} config_sha256={}\n", cfg.hash());
        s.push_str(&self.columns.join(","));
        s.push('\n');
        for r in &self.rows {
            let _ = writeln!(s, "{}", r.join(","));
        }
        s
    }
}

/// JSON number, or null for non-finite values.
pub fn jnum(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

pub fn jopt(x: Option<f64>) -> Value {
    x.map(jnum).unwrap_or(Value::Null)
}

/// Collects artifacts of one run in the output directory.
pub struct Artifacts {
    dir: PathBuf,
    written: Vec<String>,
}

impl Artifacts {
    pub fn create(dir: &Path) -> Result<Self, CliError> {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        Ok(Self { dir: dir.to_path_buf(), written: Vec::new() })
    }

    fn write(&mut self, name: &str, body: &str) -> Result<(), CliError> {
        let path = self.dir.join(name);
        std::fs::write(&path, body).map_err(|e| CliError::io(&path, e))?;
        self.written.push(name.to_string());
        Ok(())
    }

    pub fn csv(&mut self, name: &str, table: &Table, cfg: &RunConfig) -> Result<(), CliError> {
        self.write(name, &table.render(cfg))
    }

    /// A report: the body plus the config it came from and its hash.
    pub fn report(&mut self, name: &str, body: Value, cfg: &RunConfig) -> Result<(), CliError> {
        let doc = json!({
            "tool": "g2lab",
            "version": VERSION,
            "command": cfg.command(),
            "config_sha256": cfg.hash(),
            "result": body,
        });
        let text = serde_json::to_string_pretty(&doc).expect("serializable") + "\n";
        self.write(name, &text)
    }

    /// The manifest is the only file with a wall-clock entry.
    pub fn manifest(mut self, cfg: &RunConfig, exit_code: i32, seconds: f64) -> Result<Vec<String>, CliError> {
        let doc = json!({
            "tool": "g2lab",
            "version": VERSION,
            "command": cfg.command(),
            "config": cfg.entries(),
            "config_sha256": cfg.hash(),
            "artifacts": self.written,
            "exit_code": exit_code,
            "wall_clock_seconds": seconds,
        });
        let text = serde_json::to_string_pretty(&doc).expect("serializable") + "\n";
        self.write("manifest.json", &text)?;
        Ok(self.written)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }
}
