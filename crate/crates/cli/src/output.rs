//! CSV and JSON rendering of integer tables. All numbers are written as
//! decimal strings in JSON.

use clap::ValueEnum;
use num_bigint::BigUint;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// One table cell: `value` at `n` (and `k` for two-index sequences).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row {
    pub n: usize,
    pub k: Option<usize>,
    pub value: BigUint,
}

#[derive(Serialize)]
struct JsonRow {
    n: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    k: Option<String>,
    value: String,
}

#[derive(Serialize)]
struct JsonTable<'a> {
    sequence: &'a str,
    q: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    include_t: Option<bool>,
    rows: Vec<JsonRow>,
}

/// Renders rows; `include_t` is echoed in JSON when present.
pub fn render(
    format: Format,
    sequence: &str,
    q: u64,
    include_t: Option<bool>,
    rows: &[Row],
) -> String {
    let two_index = rows.iter().any(|r| r.k.is_some());
    match format {
        Format::Csv => {
            let mut out = String::from(if two_index { "n,k,value\n" } else { "n,value\n" });
            for r in rows {
                match r.k {
                    Some(k) => out.push_str(&format!("{},{},{}\n", r.n, k, r.value)),
                    None => out.push_str(&format!("{},{}\n", r.n, r.value)),
                }
            }
            out
        }
        Format::Json => {
            let table = JsonTable {
                sequence,
                q: q.to_string(),
                include_t,
                rows: rows
                    .iter()
                    .map(|r| JsonRow {
                        n: r.n.to_string(),
                        k: r.k.map(|k| k.to_string()),
                        value: r.value.to_string(),
                    })
                    .collect(),
            };
            let mut s = serde_json::to_string_pretty(&table).expect("serializable");
            s.push('\n');
            s
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows() -> Vec<Row> {
        vec![
            Row { n: 0, k: Some(0), value: 1u32.into() },
            Row { n: 1, k: Some(1), value: 12345678901234567890u64.into() },
        ]
    }

    #[test]
    fn csv_layout() {
        let s = render(Format::Csv, "x", 2, None, &rows());
        assert_eq!(s, "n,k,value\n0,0,1\n1,1,12345678901234567890\n");
        let one = vec![Row { n: 3, k: None, value: 57u32.into() }];
        assert_eq!(render(Format::Csv, "bell", 2, None, &one), "n,value\n3,57\n");
    }

    #[test]
    fn json_uses_strings() {
        let s = render(Format::Json, "x", 2, Some(true), &rows());
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["q"], "2");
        assert_eq!(v["include_t"], true);
        assert_eq!(v["rows"][1]["value"], "12345678901234567890");
        assert_eq!(v["rows"][1]["k"], "1");
    }
}
