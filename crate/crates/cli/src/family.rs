//! `qexp family`: hand table of a deck specification read from JSON.
//!
//! Schema: `{"q": <int>, "decks": {"<n>": <d_n>, ...}}` with decimal-string
//! keys `n >= 1` and nonnegative integer values. Unknown fields are rejected.

use std::collections::BTreeMap;
use std::path::Path;

use qexp::arith::GammaTable;
use qexp::families::{deck_enumerator_with, hand_counts_recursive_with, DeckSpec};
use qexp::series::{HandTable, DEFAULT_ORDER};
use qexp::{FieldOrder, Natural};
use serde::Deserialize;

use crate::output::{render, Format, Row};
use crate::{prime_power_warning, CliError, DEFAULT_N_CAP};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    q: u64,
    decks: BTreeMap<String, u64>,
}

/// Parses and validates a deck specification. Every failure is a usage error.
pub fn parse_spec(text: &str) -> Result<DeckSpec, CliError> {
    let raw: RawSpec = serde_json::from_str(text)
        .map_err(|e| CliError::Usage(format!("deck spec does not match the schema: {e}")))?;
    let q = FieldOrder::new(raw.q).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut decks = Vec::with_capacity(raw.decks.len());
    for (key, d) in raw.decks {
        let canonical = !key.is_empty()
            && key.bytes().all(|b| b.is_ascii_digit())
            && !(key.len() > 1 && key.starts_with('0'));
        let n: usize = canonical
            .then(|| key.parse().ok())
            .flatten()
            .filter(|&n| n >= 1)
            .ok_or_else(|| {
                CliError::Usage(format!(
                    "deck key {key:?} is not a positive decimal dimension"
                ))
            })?;
        decks.push((n, Natural::from(d)));
    }
    DeckSpec::new(q, decks).map_err(|e| CliError::Usage(e.to_string()))
}

#[derive(Debug, Clone)]
pub struct FamilyRequest {
    pub order: usize,
    pub format: Format,
    /// Test hook: replace `gamma_n` by `gamma_n + 1` on the exponential path.
    pub gamma_fault: Option<usize>,
}

impl Default for FamilyRequest {
    fn default() -> Self {
        Self {
            order: DEFAULT_ORDER,
            format: Format::Csv,
            gamma_fault: None,
        }
    }
}

/// Hand table computed twice, by `exp(y D)` and by direct convolution.
/// Any difference is an internal failure.
pub fn family_table(spec: &DeckSpec, req: &FamilyRequest) -> Result<HandTable, CliError> {
    if req.order > DEFAULT_N_CAP {
        return Err(CliError::Usage(format!(
            "--order {} exceeds the cap {DEFAULT_N_CAP}",
            req.order
        )));
    }
    let gammas = GammaTable::new(spec.q(), req.order);
    let exp_gammas = match req.gamma_fault {
        Some(n) => {
            let bumped = gammas.get(n.min(req.order)).clone() + 1u32;
            gammas.clone().with_override(n.min(req.order), bumped)
        }
        None => gammas.clone(),
    };
    let series = deck_enumerator_with(spec, &exp_gammas)
        .times_y()
        .exp()
        .map_err(|e| CliError::Internal(e.to_string()))?;
    let via_exp = HandTable::from_series_with(&series, &exp_gammas)
        .map_err(|e| CliError::Internal(format!("exponential path: {e}")))?;
    let via_conv = hand_counts_recursive_with(spec, &gammas)
        .map_err(|e| CliError::Internal(format!("convolution path: {e}")))?;
    for n in 0..=req.order {
        for k in 0..=n {
            let (a, b) = (via_exp.get(n, k), via_conv.get(n, k));
            if a != b {
                return Err(CliError::Internal(format!(
                    "h({n},{k}) disagrees: exp(yD) gives {a}, convolution gives {b}"
                )));
            }
        }
    }
    Ok(via_conv)
}

pub fn table_to_rows(table: &HandTable) -> Vec<Row> {
    let mut rows = Vec::new();
    for n in 0..=table.order() {
        for k in 0..=n {
            rows.push(Row {
                n,
                k: Some(k),
                value: table.get(n, k),
            });
        }
    }
    rows
}

/// Runs `qexp family` on already-read spec text.
pub fn cmd_family_text(text: &str, req: &FamilyRequest) -> Result<(String, String), CliError> {
    let spec = parse_spec(text)?;
    let table = family_table(&spec, req)?;
    let stdout = render(req.format, "family", spec.q().get(), None, &table_to_rows(&table));
    Ok((stdout, prime_power_warning(spec.q())))
}

/// Runs `qexp family` on a spec file.
pub fn cmd_family(path: &Path, req: &FamilyRequest) -> Result<(String, String), CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    cmd_family_text(&text, req)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(text: &str, order: usize) -> HandTable {
        let spec = parse_spec(text).unwrap();
        family_table(&spec, &FamilyRequest { order, ..Default::default() }).unwrap()
    }

    #[test]
    fn examples() {
        let t = table(r#"{"q":2,"decks":{"1":1}}"#, 4);
        assert_eq!(t.get(2, 2), Natural::from(3u32));
        let t = table(r#"{"q":2,"decks":{"1":2}}"#, 4);
        assert_eq!(t.get(2, 2), Natural::from(12u32));
        let t = table(r#"{"q":2,"decks":{}}"#, 4);
        for n in 0..=4 {
            for k in 0..=n {
                let expected = u32::from(n == 0 && k == 0);
                assert_eq!(t.get(n, k), Natural::from(expected));
            }
        }
    }

    #[test]
    fn schema_violations() {
        for bad in [
            r#"{"q":2}"#,
            r#"{"q":2,"decks":{"0":1}}"#,
            r#"{"q":2,"decks":{"01":1}}"#,
            r#"{"q":2,"decks":{"x":1}}"#,
            r#"{"q":2,"decks":{"1":-1}}"#,
            r#"{"q":2,"decks":{"1":1.5}}"#,
            r#"{"q":1,"decks":{}}"#,
            r#"{"q":2,"decks":{},"extra":0}"#,
            r#"[1,2]"#,
        ] {
            assert!(matches!(parse_spec(bad), Err(CliError::Usage(_))), "{bad}");
        }
    }

    #[test]
    fn fault_is_an_internal_failure() {
        let spec = parse_spec(r#"{"q":2,"decks":{"1":1,"2":3}}"#).unwrap();
        let req = FamilyRequest { order: 5, gamma_fault: Some(2), ..Default::default() };
        assert!(matches!(family_table(&spec, &req), Err(CliError::Internal(_))));
    }

    #[test]
    fn order_cap() {
        let spec = parse_spec(r#"{"q":2,"decks":{"1":1}}"#).unwrap();
        let req = FamilyRequest { order: 25, ..Default::default() };
        assert!(matches!(family_table(&spec, &req), Err(CliError::Usage(_))));
    }
}
