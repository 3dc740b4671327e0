use serde_json::{Map, Number, Value};

use crate::config::Format;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Text(String),
    Bool(bool),
    Empty,
}

impl Cell {
    pub fn opt(v: Option<f64>) -> Cell {
        v.map_or(Cell::Empty, Cell::Float)
    }

    fn csv(&self) -> String {
        match self {
            Cell::Float(x) => format_float(*x),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Float(x) => Number::from_f64(round_sig(*x)).map_or(Value::Null, Value::Number),
            Cell::Int(n) => Value::from(*n),
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Bool(b) => Value::from(*b),
            Cell::Empty => Value::Null,
        }
    }
}

/// A titled block of rows printed after the main table.
#[derive(Debug, Clone, PartialEq)]
pub struct Section {
    pub name: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub schema: &'static str,
    pub echo: Vec<(&'static str, String)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub sections: Vec<Section>,
}

/// Rounds to 12 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// Shortest representation of `x` rounded to 12 significant digits.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let r = round_sig(x);
    if r == 0.0 {
        return "0".into();
    }
    let a = r.abs();
    if !(1e-6..1e15).contains(&a) {
        format!("{r:e}")
    } else {
        format!("{r}")
    }
}

fn csv_line(cells: impl IntoIterator<Item = String>) -> String {
    cells.into_iter().collect::<Vec<_>>().join(",")
}

impl Table {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    fn to_csv(&self) -> String {
        let mut out = format!("# schema={}/v1", self.schema);
        for (k, v) in &self.echo {
            out.push_str(&format!(" {k}={v}"));
        }
        out.push('\n');
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&csv_line(row.iter().map(Cell::csv)));
            out.push('\n');
        }
        for section in &self.sections {
            out.push_str(&format!("# {}\n", section.name));
            out.push_str(&format!("# {}\n", section.columns.join(",")));
            for row in &section.rows {
                out.push_str(&format!("# {}\n", csv_line(row.iter().map(Cell::csv))));
            }
        }
        out
    }

    fn to_json(&self) -> String {
        fn objects(columns: &[&str], rows: &[Vec<Cell>]) -> Value {
            Value::Array(
                rows.iter()
                    .map(|row| {
                        let m: Map<String, Value> = columns
                            .iter()
                            .zip(row)
                            .map(|(c, v)| (c.to_string(), v.json()))
                            .collect();
                        Value::Object(m)
                    })
                    .collect(),
            )
        }
        let mut root = Map::new();
        root.insert("schema".into(), Value::from(format!("{}/v1", self.schema)));
        let config: Map<String, Value> = self
            .echo
            .iter()
            .map(|(k, v)| (k.to_string(), Value::from(v.as_str())))
            .collect();
        root.insert("config".into(), Value::Object(config));
        root.insert(
            "columns".into(),
            Value::from(
                self.columns
                    .iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>(),
            ),
        );
        root.insert("rows".into(), objects(&self.columns, &self.rows));
        for section in &self.sections {
            root.insert(
                section.name.into(),
                objects(&section.columns, &section.rows),
            );
        }
        let mut s = serde_json::to_string_pretty(&Value::Object(root)).expect("serializable");
        s.push('\n');
        s
    }
}
