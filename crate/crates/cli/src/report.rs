//! Tables with a fixed column list per command, rendered as line-delimited
//! JSON or CSV. Integers are always printed in full; reals use 6 decimals.

use std::fmt::Display;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format {other:?}, expected json or csv")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(String),
    Real(f64),
    Text(String),
    Bool(bool),
    Empty,
}

impl Cell {
    pub fn int(v: impl Display) -> Cell {
        Cell::Int(v.to_string())
    }

    pub fn text(v: impl Display) -> Cell {
        Cell::Text(v.to_string())
    }

    pub fn real(v: Option<f64>) -> Cell {
        v.map_or(Cell::Empty, Cell::Real)
    }

    fn csv_field(&self) -> String {
        match self {
            Cell::Int(s) | Cell::Text(s) => s.clone(),
            Cell::Real(x) => format!("{x:.6}"),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json_value(&self) -> String {
        match self {
            Cell::Int(s) => s.clone(),
            Cell::Real(x) if x.is_finite() => format!("{x:.6}"),
            Cell::Real(_) | Cell::Empty => "null".to_string(),
            Cell::Text(s) => serde_json::Value::String(s.clone()).to_string(),
            Cell::Bool(b) => b.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    columns: &'static [&'static str],
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &'static [&'static str]) -> Self {
        Table {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the schema");
        self.rows.push(row);
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.render_json(),
            Format::Csv => self.render_csv(),
        }
    }

    fn render_json(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            out.push('{');
            for (i, (col, cell)) in self.columns.iter().zip(row).enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&format!("\"{col}\":{}", cell.json_value()));
            }
            out.push_str("}\n");
        }
        out
    }

    fn render_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(self.columns).expect("writing to memory");
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv_field))
                .expect("writing to memory");
        }
        String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv is utf-8")
    }
}
