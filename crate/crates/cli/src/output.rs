use std::fmt::Display;
use std::io::Write;

use serde_json::Value;

use crate::args::Format;

/// Writes one line to stdout; a closed pipe is not an error worth reporting.
pub fn print(text: impl Display) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

pub fn print_json(value: &Value) {
    print(serde_json::to_string_pretty(value).expect("json values serialize"));
}

/// Rows of text rendered either as CSV or as an aligned table.
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
    footer: Option<String>,
}

impl Table {
    pub fn new<const N: usize>(header: [&str; N]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
            footer: None,
        }
    }

    pub fn row<const N: usize>(&mut self, cells: [String; N]) {
        self.rows.push(cells.into());
    }

    pub fn footer(&mut self, text: String) {
        self.footer = Some(text);
    }

    fn csv(&self) -> String {
        let line = |cells: &[String]| {
            cells
                .iter()
                .map(|c| csv_field(c))
                .collect::<Vec<_>>()
                .join(",")
        };
        let mut out = line(&self.header);
        for r in &self.rows {
            out.push('\n');
            out.push_str(&line(r));
        }
        out
    }

    fn aligned(&self) -> String {
        let mut widths: Vec<usize> = self.header.iter().map(|h| h.len()).collect();
        for r in &self.rows {
            for (w, c) in widths.iter_mut().zip(r) {
                *w = (*w).max(c.len());
            }
        }
        let line = |cells: &[String]| {
            cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:<w$}"))
                .collect::<Vec<_>>()
                .join("  ")
                .trim_end()
                .to_string()
        };
        let mut out = line(&self.header);
        for r in &self.rows {
            out.push('\n');
            out.push_str(&line(r));
        }
        if let Some(f) = &self.footer {
            out.push('\n');
            out.push_str(f);
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn emit(table: &Table, format: Format) {
    match format {
        Format::Csv => print(table.csv()),
        _ => print(table.aligned()),
    }
}
