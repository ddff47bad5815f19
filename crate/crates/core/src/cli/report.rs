//! Rendering of command reports as tables, CSV or JSON.

use std::fmt::Write as _;
use std::str::FromStr;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, to_f64, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "table" => Ok(Format::Table),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::input(format!(
                "unknown format `{s}`, expected json, csv or table"
            ))),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table {
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(
        title: impl Into<String>,
        columns: impl IntoIterator<Item = S>,
    ) -> Self {
        Table {
            title: title.into(),
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push<S: Into<String>>(&mut self, row: impl IntoIterator<Item = S>) {
        let row: Vec<String> = row.into_iter().map(Into::into).collect();
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// After every column of non-integer `p/q` cells, a column with their
    /// decimal values.
    fn with_decimals(&self) -> Table {
        let fractional: Vec<bool> = (0..self.columns.len())
            .map(|c| {
                !self.rows.is_empty()
                    && self
                        .rows
                        .iter()
                        .all(|r| r[c].contains('/') && parse_rational(&r[c]).is_ok())
            })
            .collect();
        let mut out = Table {
            title: self.title.clone(),
            columns: Vec::new(),
            rows: vec![Vec::new(); self.rows.len()],
        };
        for (c, name) in self.columns.iter().enumerate() {
            out.columns.push(name.clone());
            if fractional[c] {
                out.columns.push(format!("{name} (decimal)"));
            }
            for (r, row) in self.rows.iter().enumerate() {
                out.rows[r].push(row[c].clone());
                if fractional[c] {
                    out.rows[r].push(decimal(&parse_rational(&row[c]).expect("checked")));
                }
            }
        }
        out
    }
}

pub fn decimal(q: &Rational) -> String {
    format!("{:.6}", to_f64(q))
}

fn log10_abs(n: &num_bigint::BigInt) -> f64 {
    let bits = n.bits();
    let shift = bits.saturating_sub(53);
    let top: num_bigint::BigInt = n.magnitude().clone().into();
    let top = num_traits::ToPrimitive::to_f64(&(top >> shift)).unwrap_or(f64::INFINITY);
    top.log10() + shift as f64 * std::f64::consts::LOG10_2
}

/// Scientific notation that survives values far below `f64` range.
pub fn scientific(q: &Rational) -> String {
    if num_traits::Zero::is_zero(q) {
        return "0".into();
    }
    let l = log10_abs(q.numer()) - log10_abs(q.denom());
    let mut exp = l.floor();
    let mut mantissa = 10f64.powf(l - exp);
    if format!("{mantissa:.6}").starts_with("10") {
        mantissa /= 10.0;
        exp += 1.0;
    }
    let sign = if q.numer().sign() == num_bigint::Sign::Minus {
        "-"
    } else {
        ""
    };
    format!("{sign}{mantissa:.6}e{exp}")
}

pub fn q(value: &Rational) -> String {
    format_rational(value)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub summary: IndexMap<String, String>,
    pub tables: Vec<Table>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report {
            command: command.into(),
            ..Report::default()
        }
    }

    pub fn set(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.summary.insert(key.into(), value.to_string());
        self
    }

    pub fn table(&mut self, t: Table) -> &mut Self {
        self.tables.push(t);
        self
    }

    pub fn note(&mut self, text: impl Into<String>) -> &mut Self {
        self.notes.push(text.into());
        self
    }

    pub fn render(&self, format: Format, decimals: bool) -> String {
        let shown;
        let report = if decimals {
            shown = Report {
                tables: self.tables.iter().map(Table::with_decimals).collect(),
                ..self.clone()
            };
            &shown
        } else {
            self
        };
        match format {
            Format::Json => serde_json::to_string_pretty(report).expect("reports serialize") + "\n",
            Format::Csv => report.render_csv(),
            Format::Table => report.render_table(),
        }
    }

    fn render_csv(&self) -> String {
        let mut out = String::new();
        let field = |s: &str| {
            if s.contains([',', '"', '\n']) {
                format!("\"{}\"", s.replace('"', "\"\""))
            } else {
                s.to_string()
            }
        };
        if !self.summary.is_empty() {
            out.push_str("key,value\n");
            for (k, v) in &self.summary {
                let _ = writeln!(out, "{},{}", field(k), field(v));
            }
        }
        for t in &self.tables {
            if !out.is_empty() {
                out.push('\n');
            }
            let _ = writeln!(out, "# {}", t.title);
            let _ = writeln!(
                out,
                "{}",
                t.columns
                    .iter()
                    .map(|c| field(c))
                    .collect::<Vec<_>>()
                    .join(",")
            );
            for r in &t.rows {
                let _ = writeln!(
                    out,
                    "{}",
                    r.iter().map(|c| field(c)).collect::<Vec<_>>().join(",")
                );
            }
        }
        out
    }

    fn render_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.command);
        let width = self
            .summary
            .keys()
            .map(|k| k.chars().count())
            .max()
            .unwrap_or(0);
        for (k, v) in &self.summary {
            let _ = writeln!(out, "  {k:<width$}  {v}");
        }
        for t in &self.tables {
            let _ = writeln!(out, "\n{}", t.title);
            let mut widths: Vec<usize> = t.columns.iter().map(|c| c.chars().count()).collect();
            for r in &t.rows {
                for (w, c) in widths.iter_mut().zip(r) {
                    *w = (*w).max(c.chars().count());
                }
            }
            let line = |cells: &[String]| {
                cells
                    .iter()
                    .zip(&widths)
                    .map(|(c, &w)| format!("{c:<w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
                    .trim_end()
                    .to_string()
            };
            let _ = writeln!(out, "  {}", line(&t.columns));
            let _ = writeln!(
                out,
                "  {}",
                widths
                    .iter()
                    .map(|&w| "-".repeat(w))
                    .collect::<Vec<_>>()
                    .join("  ")
            );
            for r in &t.rows {
                let _ = writeln!(out, "  {}", line(r));
            }
        }
        for n in &self.notes {
            let _ = writeln!(out, "\nnote: {n}");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new("ball");
        r.set("center", "a").set("radius", "3/2");
        let mut t = Table::new("trace", ["point", "distance"]);
        t.push(["c", "3/2"]);
        t.push(["d, e", "1/3"]);
        r.table(t).note("closed ball");
        r
    }

    #[test]
    fn json_round_trips() {
        let r = sample();
        for decimals in [false, true] {
            let text = r.render(Format::Json, decimals);
            let back: Report = serde_json::from_str(&text).unwrap();
            assert_eq!(back.render(Format::Json, false), text);
        }
    }

    #[test]
    fn decimals_follow_fraction_columns() {
        let text = sample().render(Format::Csv, true);
        assert!(text.contains("point,distance,distance (decimal)"));
        assert!(text.contains("\"d, e\",1/3,0.333333"));
    }

    #[test]
    fn scientific_below_f64() {
        assert_eq!(
            scientific(&Rational::new(1.into(), 8.into())),
            "1.250000e-1"
        );
        let tiny = Rational::new(1.into(), num_bigint::BigInt::from(2).pow(4000));
        assert!(
            scientific(&tiny).ends_with("e-1205"),
            "{}",
            scientific(&tiny)
        );
        assert_eq!(
            scientific(&Rational::new((-3).into(), 1.into())),
            "-3.000000e0"
        );
    }

    #[test]
    fn table_layout() {
        let text = sample().render(Format::Table, false);
        assert!(text.contains("  center  a"));
        assert!(text.contains("note: closed ball"));
    }
}
