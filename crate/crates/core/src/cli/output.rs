//! Tabular reports rendered as JSON or CSV with identical rounded values.

use num_complex::Complex64;
use serde_json::{Map, Number, Value};

use crate::numfmt::{fmt_complex, fmt_real, round_sig};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Real(f64),
    Int(i64),
    Bool(bool),
    Text(String),
    Complex(Complex64),
    Empty,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Real(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Bool(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_string())
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::Text(x)
    }
}

impl From<Complex64> for Cell {
    fn from(z: Complex64) -> Self {
        Cell::Complex(z)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(x: Option<T>) -> Self {
        x.map_or(Cell::Empty, Into::into)
    }
}

impl Cell {
    fn to_json(&self) -> Value {
        match self {
            Cell::Real(x) => Number::from_f64(round_sig(*x)).map_or_else(|| Value::String(fmt_real(*x)), Value::Number),
            Cell::Int(i) => Value::from(*i),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Complex(z) => Value::String(fmt_complex(*z)),
            Cell::Empty => Value::Null,
        }
    }

    /// CSV fields; complex values take two.
    fn to_csv(&self) -> Vec<String> {
        match self {
            Cell::Real(x) => vec![fmt_real(*x)],
            Cell::Int(i) => vec![i.to_string()],
            Cell::Bool(b) => vec![b.to_string()],
            Cell::Text(s) => vec![s.clone()],
            Cell::Complex(z) => vec![fmt_real(z.re), fmt_real(z.im)],
            Cell::Empty => vec![String::new()],
        }
    }
}

/// Whether a column holds complex values, which CSV splits into `_re`/`_im`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Scalar,
    Complex,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub meta: Vec<(String, Cell)>,
    pub columns: Vec<(String, Kind)>,
    pub rows: Vec<Vec<Cell>>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            meta: Vec::new(),
            columns: Vec::new(),
            rows: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: &str, value: impl Into<Cell>) -> &mut Self {
        self.meta.push((key.to_string(), value.into()));
        self
    }

    pub fn column(&mut self, name: &str) -> &mut Self {
        self.columns.push((name.to_string(), Kind::Scalar));
        self
    }

    pub fn complex_column(&mut self, name: &str) -> &mut Self {
        self.columns.push((name.to_string(), Kind::Complex));
        self
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn to_json(&self) -> String {
        let mut meta = Map::new();
        for (k, v) in &self.meta {
            meta.insert(k.clone(), v.to_json());
        }
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                for ((name, _), cell) in self.columns.iter().zip(row) {
                    obj.insert(name.clone(), cell.to_json());
                }
                Value::Object(obj)
            })
            .collect();
        let mut root = Map::new();
        root.insert("command".into(), Value::String(self.command.clone()));
        root.insert("meta".into(), Value::Object(meta));
        root.insert("rows".into(), Value::Array(rows));
        let mut text = serde_json::to_string_pretty(&Value::Object(root)).expect("JSON values serialize");
        text.push('\n');
        text
    }

    /// Metadata as leading `# key=value` lines, then the header and the rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# command={}\n", self.command));
        for (k, v) in &self.meta {
            let text = match v {
                Cell::Complex(z) => fmt_complex(*z),
                other => other.to_csv().join(","),
            };
            out.push_str(&format!("# {k}={text}\n"));
        }
        let header: Vec<String> = self
            .columns
            .iter()
            .flat_map(|(name, kind)| match kind {
                Kind::Scalar => vec![name.clone()],
                Kind::Complex => vec![format!("{name}_re"), format!("{name}_im")],
            })
            .collect();
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&header).expect("in-memory write");
        for row in &self.rows {
            let fields: Vec<String> = self
                .columns
                .iter()
                .zip(row)
                .flat_map(|((_, kind), cell)| match (kind, cell) {
                    (Kind::Complex, Cell::Empty) => vec![String::new(), String::new()],
                    _ => cell.to_csv(),
                })
                .collect();
            w.write_record(&fields).expect("in-memory write");
        }
        let body = w.into_inner().expect("in-memory flush");
        out.push_str(&String::from_utf8(body).expect("fields are UTF-8"));
        out
    }
}
