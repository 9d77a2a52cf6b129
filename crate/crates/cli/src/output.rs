//! Tables, the artifact envelope, and writing to a file or stdout.

use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Format, RunConfig};
use crate::CliError;

pub const TOOL: &str = env!("CARGO_PKG_NAME");
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone)]
pub enum Cell {
    Text(String),
    Int(i64),
    Real(f64),
    /// Information in nats; shown in bits when requested.
    Nats(f64),
    Empty,
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Real(x)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Text(x.to_string())
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map(Cell::Real).unwrap_or(Cell::Empty)
    }
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Self { headers: headers.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    /// Two-column `field,value` table of every leaf of a JSON value.
    pub fn from_json(value: &Value) -> Self {
        let mut t = Table::new(&["field", "value"]);
        flatten("", value, &mut t);
        t
    }
}

fn flatten(prefix: &str, value: &Value, t: &mut Table) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                flatten(&key(k), v, t);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&key(&i.to_string()), v, t);
            }
        }
        Value::Number(n) => {
            let cell = match (n.as_i64(), n.as_f64()) {
                (Some(i), _) => Cell::Int(i),
                (None, Some(x)) => Cell::Real(x),
                _ => Cell::Text(n.to_string()),
            };
            t.push(vec![Cell::Text(prefix.to_string()), cell]);
        }
        Value::Bool(b) => t.push(vec![Cell::Text(prefix.to_string()), Cell::Text(b.to_string())]),
        Value::String(s) => t.push(vec![Cell::Text(prefix.to_string()), Cell::Text(s.clone())]),
        Value::Null => t.push(vec![Cell::Text(prefix.to_string()), Cell::Empty]),
    }
}

/// Six significant digits.
pub fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exponent = x.abs().log10().floor() as i32;
    if (-4..6).contains(&exponent) {
        format!("{:.*}", (5 - exponent).max(0) as usize, x)
    } else {
        format!("{x:.5e}")
    }
}

/// Output of one command before formatting.
pub struct Artifact {
    pub result: Value,
    pub table: Table,
    pub svg: Option<String>,
}

impl Artifact {
    pub fn new<R: Serialize>(result: &R, table: Table) -> Self {
        Self { result: serde_json::to_value(result).expect("result serialises"), table, svg: None }
    }

    pub fn with_svg(mut self, svg: String) -> Self {
        self.svg = Some(svg);
        self
    }
}

pub fn meta(config: &RunConfig) -> Value {
    json!({
        "tool": TOOL,
        "version": VERSION,
        "command": config.command,
        "seed": config.seed,
        "config_hash": config.hash(),
    })
}

pub fn provenance_line(config: &RunConfig) -> String {
    format!("{TOOL} {VERSION} command={} seed={} config={}", config.command, config.seed, config.hash())
}

pub fn render_json(config: &RunConfig, result: &Value) -> String {
    let envelope = json!({ "meta": meta(config), "config": config, "result": result });
    let mut s = serde_json::to_string_pretty(&envelope).expect("json");
    s.push('\n');
    s
}

/// CSV with a leading `#` provenance comment.
pub fn render_csv(config: &RunConfig, table: &Table) -> Result<String, CliError> {
    let mut out = format!("# {}\n", provenance_line(config)).into_bytes();
    {
        let mut w = csv::Writer::from_writer(&mut out);
        w.write_record(&table.headers).map_err(csv_error)?;
        for row in &table.rows {
            w.write_record(row.iter().map(|c| render_cell(c, config.bits))).map_err(csv_error)?;
        }
        w.flush().map_err(CliError::io)?;
    }
    Ok(String::from_utf8(out).expect("utf-8"))
}

fn csv_error(e: csv::Error) -> CliError {
    CliError::io(e.into())
}

fn render_cell(cell: &Cell, bits: bool) -> String {
    match cell {
        Cell::Text(s) => s.clone(),
        Cell::Int(i) => i.to_string(),
        Cell::Real(x) => sig6(*x),
        Cell::Nats(x) => sig6(if bits { x / std::f64::consts::LN_2 } else { *x }),
        Cell::Empty => String::new(),
    }
}

pub fn render(config: &RunConfig, artifact: &Artifact) -> Result<String, CliError> {
    match config.format {
        Format::Json => Ok(render_json(config, &artifact.result)),
        Format::Csv => render_csv(config, &artifact.table),
        Format::Svg => artifact
            .svg
            .clone()
            .ok_or_else(|| CliError::usage(format!("command '{}' has no svg output", config.command))),
    }
}

pub fn write_output(path: Option<&Path>, content: &str) -> Result<(), CliError> {
    match path {
        Some(p) => {
            if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent).map_err(CliError::io)?;
            }
            std::fs::write(p, content).map_err(CliError::io)
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(content.as_bytes()).map_err(CliError::io)
        }
    }
}
