//! What a command prints: a JSON document and its text rendering.

use argagree::{Degree, SignedDegree};
use serde::Serialize;

pub struct Report {
    pub json: serde_json::Value,
    pub text: String,
}

impl Report {
    pub fn new(json: impl Serialize, text: String) -> Self {
        Report {
            json: serde_json::to_value(json).expect("serializable output"),
            text,
        }
    }
}

/// An exact fraction with its six-digit decimal rendering.
#[derive(Debug, Clone, Serialize)]
pub struct Num {
    pub exact: String,
    pub decimal: serde_json::Number,
}

impl Num {
    fn from_parts(exact: String, fixed: String) -> Self {
        let decimal = fixed.parse().expect("fixed-point literal");
        Num { exact, decimal }
    }

    /// `1/3 0.333333`
    pub fn pair(&self) -> String {
        format!("{} {}", self.exact, self.decimal_text())
    }

    pub fn decimal_text(&self) -> String {
        format!("{:.6}", self.decimal.as_f64().expect("finite"))
    }
}

impl From<Degree> for Num {
    fn from(d: Degree) -> Self {
        Num::from_parts(d.to_string(), d.to_fixed(6))
    }
}

impl From<SignedDegree> for Num {
    fn from(d: SignedDegree) -> Self {
        Num::from_parts(d.to_string(), d.to_fixed(6))
    }
}

/// Left-aligned columns separated by two spaces; no trailing blanks.
pub fn table(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| rows.iter().filter_map(|r| r.get(c)).map(String::len).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for r in rows {
        let mut line = String::new();
        for (c, cell) in r.iter().enumerate() {
            if c > 0 {
                line.push_str("  ");
            }
            line.push_str(&format!("{cell:<w$}", w = widths[c]));
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_keep_six_digits() {
        let n = Num::from(Degree::new(1, 3).unwrap());
        assert_eq!(n.pair(), "1/3 0.333333");
        let n = Num::from(Degree::ONE);
        assert_eq!(n.pair(), "1 1.000000");
        assert_eq!(serde_json::to_string(&n).unwrap(), r#"{"exact":"1","decimal":1.0}"#);
        let n = Num::from(SignedDegree::new(-1, 6).unwrap());
        assert_eq!(n.pair(), "-1/6 -0.166667");
    }

    #[test]
    fn tables_align_columns() {
        let rows = vec![
            vec!["".to_string(), "0".to_string(), "1".to_string()],
            vec!["0".to_string(), "1".to_string(), "1/3".to_string()],
        ];
        assert_eq!(table(&rows), "   0  1\n0  1  1/3\n");
    }
}
