//! Minimal CSV tables: `#` comment lines, a header row, numeric rows.
//! Empty cells stand for missing values.

use std::fmt::Write as _;

use crate::error::{invalid, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub comments: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

/// Scientific notation with 17 significant digits, enough to round-trip any `f64`.
pub fn format_value(v: f64) -> String {
    format!("{v:.16e}")
}

impl CsvTable {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            comments: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn comment(&mut self, line: impl Into<String>) -> &mut Self {
        self.comments.push(line.into());
        self
    }

    pub fn push(&mut self, row: Vec<Option<f64>>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for c in &self.comments {
            let _ = writeln!(s, "# {c}");
        }
        let _ = writeln!(s, "{}", self.columns.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|v| v.map(format_value).unwrap_or_default())
                .collect();
            let _ = writeln!(s, "{}", cells.join(","));
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut comments = Vec::new();
        let mut columns: Option<Vec<String>> = None;
        let mut rows = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            if let Some(c) = line.strip_prefix('#') {
                comments.push(c.strip_prefix(' ').unwrap_or(c).to_string());
                continue;
            }
            if line.is_empty() {
                continue;
            }
            let cells = line.split(',');
            match &columns {
                None => columns = Some(cells.map(str::to_string).collect()),
                Some(cols) => {
                    let row = cells
                        .map(|c| {
                            if c.is_empty() {
                                Ok(None)
                            } else {
                                c.trim().parse::<f64>().map(Some)
                            }
                        })
                        .collect::<std::result::Result<Vec<_>, _>>();
                    let Ok(row) = row else {
                        return invalid(format!("line {}: not a number", lineno + 1));
                    };
                    if row.len() != cols.len() {
                        return invalid(format!("line {}: wrong number of cells", lineno + 1));
                    }
                    rows.push(row);
                }
            }
        }
        let Some(columns) = columns else {
            return invalid("missing header row");
        };
        Ok(Self {
            comments,
            columns,
            rows,
        })
    }
}
