//! Self-describing output: a table plus everything needed to regenerate it.

use std::fmt::Write as _;

use serde_json::{Map, Number, Value};

use crate::args::Format;

/// One table entry.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(u64),
    Float(f64),
    Bool(bool),
    Text(String),
    Empty,
}

impl Cell {
    /// CSV text. Floats carry 17 significant digits so doubles round-trip.
    pub fn to_csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format_float(*v),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            Cell::Float(v) if v.is_finite() => {
                Value::Number(format_float(*v).parse::<Number>().expect("finite float literal"))
            }
            Cell::Float(_) | Cell::Empty => Value::Null,
            Cell::Bool(v) => Value::Bool(*v),
            Cell::Text(s) => Value::String(s.clone()),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Float)
    }
}

pub fn format_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Envelope {
    pub command: String,
    /// Flag name (without `--`) and value, in command-line order.
    pub parameters: Vec<(String, String)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub seed: Option<u64>,
    pub tool_version: String,
    pub summary: Vec<(&'static str, Cell)>,
}

impl Envelope {
    pub fn new(command: &str, columns: &[&'static str]) -> Self {
        Envelope {
            command: command.to_string(),
            parameters: Vec::new(),
            columns: columns.to_vec(),
            rows: Vec::new(),
            seed: None,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            summary: Vec::new(),
        }
    }

    pub fn param(&mut self, name: &str, value: impl ToString) -> &mut Self {
        self.parameters.push((name.to_string(), value.to_string()));
        self
    }

    pub fn row(&mut self, cells: Vec<Cell>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    pub fn summary(&mut self, key: &'static str, value: impl Into<Cell>) {
        self.summary.push((key, value.into()));
    }

    /// Arguments that regenerate this envelope, program name excluded.
    pub fn to_argv(&self) -> Vec<String> {
        let mut argv = vec![self.command.clone()];
        for (name, value) in &self.parameters {
            argv.push(format!("--{name}"));
            argv.push(value.clone());
        }
        argv
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    /// Metadata as `# key=value` comment lines, then the header row and data.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# command={}", self.command);
        let _ = writeln!(out, "# tool_version={}", self.tool_version);
        if let Some(seed) = self.seed {
            let _ = writeln!(out, "# seed={seed}");
        }
        let _ = writeln!(out, "# parameters={}", self.to_argv()[1..].join(" "));
        for (key, value) in &self.summary {
            let _ = writeln!(out, "# summary.{key}={}", value.to_csv());
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::to_csv).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut root = Map::new();
        root.insert("command".into(), Value::String(self.command.clone()));
        root.insert("tool_version".into(), Value::String(self.tool_version.clone()));
        root.insert("seed".into(), self.seed.map_or(Value::Null, Value::from));
        let params: Map<String, Value> = self
            .parameters
            .iter()
            .map(|(k, v)| (k.clone(), Value::String(v.clone())))
            .collect();
        root.insert("parameters".into(), Value::Object(params));
        root.insert(
            "columns".into(),
            Value::Array(self.columns.iter().map(|c| Value::String(c.to_string())).collect()),
        );
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, cell)| (c.to_string(), cell.to_json()))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        root.insert("rows".into(), Value::Array(rows));
        let summary: Map<String, Value> = self.summary.iter().map(|(k, v)| (k.to_string(), v.to_json())).collect();
        root.insert("summary".into(), Value::Object(summary));
        let mut text = serde_json::to_string_pretty(&Value::Object(root)).expect("serializable");
        text.push('\n');
        text
    }
}
