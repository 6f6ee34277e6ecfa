use std::fmt::Write as _;

use clap::ValueEnum;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Md,
    Csv,
    Json,
}

/// A rectangular table of already formatted cells.
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(headers: impl IntoIterator<Item = S>) -> Self {
        Table {
            headers: headers.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn markdown(&self) -> String {
        let esc = |s: &str| s.replace('|', "\\|");
        let mut out = String::new();
        let line = |cells: &[String]| {
            let cells: Vec<String> = cells.iter().map(|c| esc(c)).collect();
            format!("| {} |\n", cells.join(" | "))
        };
        out.push_str(&line(&self.headers));
        let _ = writeln!(out, "|{}", "---|".repeat(self.headers.len()));
        for r in &self.rows {
            out.push_str(&line(r));
        }
        out
    }

    pub fn csv(&self) -> anyhow::Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.headers)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }
}

/// Integers print as integers; anything else with six decimals. Negative
/// zero is folded into zero so output does not depend on rounding noise.
pub fn number(x: f64) -> String {
    let r = x.round();
    if (x - r).abs() < 1e-9 {
        format!("{}", r as i64)
    } else {
        let s = format!("{x:.6}");
        if s == "-0.000000" {
            "0.000000".to_string()
        } else {
            s
        }
    }
}

pub fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_else(|| "-".to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers() {
        assert_eq!(number(-4.0000000001), "-4");
        assert_eq!(number(0.5), "0.500000");
        assert_eq!(number(-1e-12), "0");
        assert_eq!(number(-0.0000001), "0.000000");
    }

    #[test]
    fn formats() {
        let mut t = Table::new(["a", "b"]);
        t.push(vec!["[[1,0],[0,1]]".into(), "x|y".into()]);
        assert_eq!(t.csv().unwrap(), "a,b\n\"[[1,0],[0,1]]\",x|y\n");
        assert_eq!(t.markdown(), "| a | b |\n|---|---|\n| [[1,0],[0,1]] | x\\|y |\n");
    }
}
