//! Result containers and their CSV / JSON renderings.

use serde_json::{json, Map, Value};
use topoband::Tolerances;

/// One output value.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Bool(bool),
    Str(String),
    Null,
}

impl Cell {
    fn to_json(&self) -> Value {
        match self {
            Cell::Num(x) => json!(x),
            Cell::Int(i) => json!(i),
            Cell::Bool(b) => json!(b),
            Cell::Str(s) => json!(s),
            Cell::Null => Value::Null,
        }
    }

    /// Shortest text that parses back to the same value.
    fn to_csv(&self) -> String {
        match self {
            Cell::Num(x) => format!("{x:?}"),
            Cell::Int(i) => i.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Str(s) => s.clone(),
            Cell::Null => String::new(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<i64> for Cell {
    fn from(i: i64) -> Self {
        Cell::Int(i)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as i64)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Str(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Str(s)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(o: Option<T>) -> Self {
        o.map_or(Cell::Null, Into::into)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Results {
    /// Named scalars, in order.
    Record(Vec<(String, Cell)>),
    Table {
        columns: Vec<String>,
        rows: Vec<Vec<Cell>>,
    },
}

impl Results {
    pub fn record(fields: Vec<(&str, Cell)>) -> Self {
        Results::Record(
            fields
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
        )
    }

    pub fn table(columns: &[&str], rows: Vec<Vec<Cell>>) -> Self {
        Results::Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows,
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Results::Record(fields) => Value::Object(
                fields
                    .iter()
                    .map(|(k, v)| (k.clone(), v.to_json()))
                    .collect(),
            ),
            Results::Table { columns, rows } => json!({
                "columns": columns,
                "rows": rows
                    .iter()
                    .map(|r| r.iter().map(Cell::to_json).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
            }),
        }
    }
}

/// Everything a command produces.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: &'static str,
    pub inputs: Vec<(String, Cell)>,
    pub results: Results,
}

impl Report {
    pub fn new(command: &'static str, inputs: Vec<(&str, Cell)>, results: Results) -> Self {
        Report {
            command,
            inputs: inputs
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
            results,
        }
    }

    pub fn to_json(&self, tolerances: &Tolerances) -> String {
        let inputs: Map<String, Value> = self
            .inputs
            .iter()
            .map(|(k, v)| (k.clone(), v.to_json()))
            .collect();
        let doc = json!({
            "command": self.command,
            "inputs": inputs,
            "results": self.results.to_json(),
            "meta": {
                "tool": "topoband",
                "version": env!("CARGO_PKG_VERSION"),
                "tolerances": tolerances,
            },
        });
        let mut text = serde_json::to_string_pretty(&doc).expect("report serializes");
        text.push('\n');
        text
    }

    pub fn to_csv(&self) -> String {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        match &self.results {
            Results::Record(fields) => {
                writer
                    .write_record(fields.iter().map(|(k, _)| k.as_str()))
                    .and_then(|_| writer.write_record(fields.iter().map(|(_, v)| v.to_csv())))
                    .expect("in-memory csv");
            }
            Results::Table { columns, rows } => {
                writer.write_record(columns).expect("in-memory csv");
                for row in rows {
                    writer
                        .write_record(row.iter().map(Cell::to_csv))
                        .expect("in-memory csv");
                }
            }
        }
        String::from_utf8(writer.into_inner().expect("in-memory csv")).expect("csv is utf-8")
    }
}
