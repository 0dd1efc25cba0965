//! Tabular output as CSV or JSON.

use std::fs::File;
use std::io::{self, Write};

use anyhow::{Context, Result};
use serde_json::{Map, Value};

use crate::args::{Format, OutputArgs};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Precision {
    /// Nine significant digits.
    Sig9,
    /// Fixed number of decimals.
    Decimals(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64, Precision),
    Int(u64),
    Text(String),
    Bool(bool),
}

impl Cell {
    pub fn num(x: f64) -> Self {
        Cell::Num(x, Precision::Sig9)
    }

    pub fn dec(x: f64, places: usize) -> Self {
        Cell::Num(x, Precision::Decimals(places))
    }

    pub fn text(s: impl Into<String>) -> Self {
        Cell::Text(s.into())
    }

    pub fn opt(x: Option<f64>) -> Self {
        x.map_or(Cell::text(""), Cell::num)
    }

    pub fn render(&self) -> String {
        match self {
            Cell::Num(x, Precision::Sig9) => sig9(*x),
            Cell::Num(x, Precision::Decimals(p)) if x.is_finite() => format!("{x:.p$}"),
            Cell::Num(x, _) => sig9(*x),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(..) => self.render().parse::<f64>().ok().and_then(serde_json::Number::from_f64).map_or(Value::Null, Value::Number),
            Cell::Int(n) => Value::from(*n),
            Cell::Text(s) if s.is_empty() => Value::Null,
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Bool(b) => Value::from(*b),
        }
    }
}

/// `x` rounded to nine significant digits, positional where that stays
/// short, trailing zeros removed.
pub fn sig9(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.8e}", x.abs());
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    let sign = if x < 0.0 { "-" } else { "" };
    let body = if (-6..15).contains(&exp) {
        let (int, frac) = if exp >= 0 {
            let e = exp as usize;
            let padded = format!("{digits:0<width$}", width = e + 1);
            (padded[..=e].to_string(), padded[e + 1..].to_string())
        } else {
            ("0".to_string(), format!("{}{digits}", "0".repeat((-exp - 1) as usize)))
        };
        let frac = frac.trim_end_matches('0');
        if frac.is_empty() {
            int
        } else {
            format!("{int}.{frac}")
        }
    } else {
        let m = mantissa.trim_end_matches('0').trim_end_matches('.');
        format!("{m}e{exp}")
    };
    format!("{sign}{body}")
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(headers: impl IntoIterator<Item = S>) -> Self {
        Self {
            headers: headers.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.headers)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))?;
        }
        w.flush()?;
        Ok(())
    }

    fn write_json<W: Write>(&self, mut out: W) -> Result<()> {
        let records: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self.headers.iter().cloned().zip(row.iter().map(Cell::json)).collect();
                Value::Object(obj)
            })
            .collect();
        serde_json::to_writer_pretty(&mut out, &records)?;
        writeln!(out)?;
        Ok(())
    }

    pub fn emit(&self, args: &OutputArgs) -> Result<()> {
        match &args.out {
            Some(path) => {
                let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
                self.write_to(io::BufWriter::new(file), args.format)
            }
            None => self.write_to(io::stdout().lock(), args.format),
        }
    }

    fn write_to<W: Write>(&self, out: W, format: Format) -> Result<()> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Json => self.write_json(out),
        }
    }
}
