//! Uniform report type and its json / tsv / markdown renderings.
//!
//! JSON layout: `{"field": {...}, "parameters": {...}, "results":
//! {"columns": [...], "rows": [[...]], ...}, "provenance": {...}}`. Integer
//! cells that fit in an `i64` are JSON numbers, larger ones are decimal
//! strings. Keys are emitted in sorted order, so output is byte-stable.

use std::fmt::Write as _;
use std::str::FromStr;

use kloos_core::FieldCtx;
use num_bigint::BigInt;
use serde_json::{Map, Value};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    Json,
    #[default]
    Tsv,
    Md,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Format::Json),
            "tsv" => Ok(Format::Tsv),
            "md" | "markdown" => Ok(Format::Md),
            _ => Err(CliError::Usage(format!("unknown format {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cell {
    Int(BigInt),
    Text(String),
}

impl Cell {
    fn to_json(&self) -> Value {
        match self {
            Cell::Int(v) => match i64::try_from(v) {
                Ok(small) => Value::from(small),
                Err(_) => Value::String(v.to_string()),
            },
            Cell::Text(s) => Value::String(s.clone()),
        }
    }
}

impl std::fmt::Display for Cell {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Cell::Int(v) => write!(f, "{v}"),
            Cell::Text(s) => f.write_str(s),
        }
    }
}

macro_rules! cell_from_int {
    ($($t:ty),*) => {$(
        impl From<$t> for Cell {
            fn from(v: $t) -> Self {
                Cell::Int(BigInt::from(v))
            }
        }
    )*};
}
cell_from_int!(i32, i64, u8, u16, u32, u64, u128, usize);

impl From<BigInt> for Cell {
    fn from(v: BigInt) -> Self {
        Cell::Int(v)
    }
}

impl From<&BigInt> for Cell {
    fn from(v: &BigInt) -> Self {
        Cell::Int(v.clone())
    }
}

impl From<num_bigint::BigUint> for Cell {
    fn from(v: num_bigint::BigUint) -> Self {
        Cell::Int(BigInt::from(v))
    }
}

impl From<&num_bigint::BigUint> for Cell {
    fn from(v: &num_bigint::BigUint) -> Self {
        Cell::Int(BigInt::from(v.clone()))
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    pub title: String,
    pub field: Option<FieldCtx>,
    pub parameters: Map<String, Value>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Scalar results beside the table.
    pub summary: Vec<(String, Cell)>,
    pub provenance: Map<String, Value>,
    /// Markdown layout: how many (key, value) column pairs per line.
    pub md_pairs: Option<usize>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report { title: title.into(), ..Default::default() }
    }

    pub fn field(mut self, ctx: &FieldCtx) -> Self {
        self.field = Some(ctx.clone());
        self
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }

    pub fn method(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.provenance.insert(key.to_string(), value.into());
        self
    }

    pub fn columns(mut self, cols: &[&str]) -> Self {
        self.columns = cols.iter().map(|c| c.to_string()).collect();
        self
    }

    pub fn row(&mut self, cells: Vec<Cell>) {
        self.rows.push(cells);
    }

    pub fn scalar(&mut self, key: &str, value: impl Into<Cell>) {
        self.summary.push((key.to_string(), value.into()));
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json_string(),
            Format::Tsv => self.to_tsv(),
            Format::Md => self.to_markdown(),
        }
    }

    pub fn to_json(&self) -> Value {
        let mut root = Map::new();
        root.insert("field".into(), self.field.as_ref().map_or(Value::Null, field_json));
        root.insert("parameters".into(), Value::Object(self.parameters.clone()));
        let mut results = Map::new();
        results.insert("title".into(), Value::String(self.title.clone()));
        if !self.columns.is_empty() {
            results.insert("columns".into(), self.columns.iter().map(|c| Value::String(c.clone())).collect());
            results.insert(
                "rows".into(),
                self.rows.iter().map(|r| r.iter().map(Cell::to_json).collect::<Value>()).collect(),
            );
        }
        for (k, v) in &self.summary {
            results.insert(k.clone(), v.to_json());
        }
        root.insert("results".into(), Value::Object(results));
        root.insert("provenance".into(), Value::Object(self.provenance.clone()));
        Value::Object(root)
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("json values serialize");
        s.push('\n');
        s
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.summary {
            let _ = writeln!(out, "# {k}\t{v}");
        }
        if !self.columns.is_empty() {
            out.push_str(&self.columns.join("\t"));
            out.push('\n');
            for row in &self.rows {
                let line: Vec<String> = row.iter().map(Cell::to_string).collect();
                out.push_str(&line.join("\t"));
                out.push('\n');
            }
        }
        out
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "### {}\n", self.title);
        if let Some(ctx) = &self.field {
            let _ = writeln!(out, "GF(2^{}), modulus {:#x}\n", ctx.r(), ctx.modulus());
        }
        if !self.summary.is_empty() {
            out.push_str("| quantity | value |\n|---|---|\n");
            for (k, v) in &self.summary {
                let _ = writeln!(out, "| {k} | {v} |");
            }
            out.push('\n');
        }
        if self.columns.is_empty() {
            return out;
        }
        match self.md_pairs {
            Some(pairs) if self.columns.len() == 2 && pairs > 1 => {
                out.push_str(&column_pairs(&self.columns[0], &self.columns[1], &self.rows, pairs));
            }
            _ => {
                out.push_str(&md_header(&self.columns));
                for row in &self.rows {
                    let line: Vec<String> = row.iter().map(Cell::to_string).collect();
                    let _ = writeln!(out, "| {} |", line.join(" | "));
                }
            }
        }
        out
    }
}

fn md_header(columns: &[String]) -> String {
    let mut out = format!("| {} |\n|", columns.join(" | "));
    for _ in columns {
        out.push_str("---|");
    }
    out.push('\n');
    out
}

/// Two-column data laid out as `pairs` side-by-side (key, value) blocks,
/// filled column-major.
pub fn column_pairs(key: &str, value: &str, rows: &[Vec<Cell>], pairs: usize) -> String {
    let height = rows.len().div_ceil(pairs);
    let cols: Vec<String> = (0..pairs).flat_map(|_| [key.to_string(), value.to_string()]).collect();
    let mut out = md_header(&cols);
    for i in 0..height {
        let mut cells = Vec::with_capacity(2 * pairs);
        for p in 0..pairs {
            match rows.get(p * height + i) {
                Some(r) => {
                    cells.push(r[0].to_string());
                    cells.push(r[1].to_string());
                }
                None => {
                    cells.push(String::new());
                    cells.push(String::new());
                }
            }
        }
        let _ = writeln!(out, "| {} |", cells.join(" | "));
    }
    out
}

pub fn field_json(ctx: &FieldCtx) -> Value {
    let mut m = Map::new();
    m.insert("r".into(), ctx.r().into());
    m.insert("q".into(), ctx.q().into());
    m.insert("modulus".into(), format!("{:#x}", ctx.modulus()).into());
    Value::Object(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn big_cells_become_strings() {
        let big = BigInt::from_str("123456789012345678901234567890").unwrap();
        assert_eq!(Cell::from(big).to_json(), Value::String("123456789012345678901234567890".into()));
        assert_eq!(Cell::from(-959i64).to_json(), Value::from(-959));
    }

    #[test]
    fn pair_layout() {
        let rows: Vec<Vec<Cell>> = (0..5u32).map(|i| vec![i.into(), (i * i).into()]).collect();
        let md = column_pairs("w", "f", &rows, 2);
        let lines: Vec<&str> = md.lines().collect();
        assert_eq!(lines[0], "| w | f | w | f |");
        assert_eq!(lines[2], "| 0 | 0 | 3 | 9 |");
        assert_eq!(lines[4], "| 2 | 4 |  |  |");
    }

    #[test]
    fn json_has_stable_top_level_keys() {
        let ctx = FieldCtx::new(4).unwrap();
        let mut rep = Report::new("t").field(&ctx).param("r", 4).method("route", "dp").columns(&["a", "b"]);
        rep.row(vec![1u32.into(), 2u32.into()]);
        let v = rep.to_json();
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        assert_eq!(keys, ["field", "parameters", "provenance", "results"]);
        assert_eq!(rep.to_json_string(), rep.to_json_string());
        assert_eq!(rep.to_tsv(), "a\tb\n1\t2\n");
    }
}
