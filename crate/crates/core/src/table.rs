//! Deterministic CSV emission.
//!
//! Floats are written with 17 significant digits in scientific notation,
//! which round-trips every binary64 value and ignores locale.

use std::fmt::Write;

use crate::linalg::CMatrix;

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Column-ordered CSV table.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn header(&self) -> &[String] {
        &self.header
    }

    pub fn rows(&self) -> &[Vec<String>] {
        &self.rows
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// Nonzero entries of a complex matrix as `row,col,re,im`.
pub fn matrix_csv(m: &CMatrix) -> String {
    let mut out = String::from("row,col,re,im\n");
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let z = m[(i, j)];
            if z.re != 0.0 || z.im != 0.0 {
                let _ = writeln!(out, "{i},{j},{},{}", fmt_f64(z.re), fmt_f64(z.im));
            }
        }
    }
    out
}
