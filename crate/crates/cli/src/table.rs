//! `qexp table`: rows of a named sequence.

use clap::ValueEnum;
use qexp::qcombinatorics::QSequences;
use qexp::{FieldOrder, Natural};

use crate::output::{render, Format, Row};
use crate::{prime_power_warning, CliError, DEFAULT_N_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Sequence {
    StirlingSubset,
    StirlingCycle,
    Bell,
    Diagonalizable,
    DiagonalizableByK,
    Projections,
    Diagonalizations,
    InvertibleDiagonalizations,
}

impl Sequence {
    pub fn name(self) -> &'static str {
        match self {
            Sequence::StirlingSubset => "stirling-subset",
            Sequence::StirlingCycle => "stirling-cycle",
            Sequence::Bell => "bell",
            Sequence::Diagonalizable => "diagonalizable",
            Sequence::DiagonalizableByK => "diagonalizable-by-k",
            Sequence::Projections => "projections",
            Sequence::Diagonalizations => "diagonalizations",
            Sequence::InvertibleDiagonalizations => "invertible-diagonalizations",
        }
    }

    /// Whether rows are indexed by `(n, k)`.
    pub fn two_index(self) -> bool {
        matches!(
            self,
            Sequence::StirlingSubset | Sequence::StirlingCycle | Sequence::DiagonalizableByK
        )
    }
}

#[derive(Debug, Clone)]
pub struct TableRequest {
    pub sequence: Sequence,
    pub q: u64,
    pub n_max: usize,
    pub k_max: Option<usize>,
    pub include_t: bool,
    pub format: Format,
    pub n_cap: usize,
}

impl TableRequest {
    pub fn new(sequence: Sequence, q: u64, n_max: usize) -> Self {
        Self {
            sequence,
            q,
            n_max,
            k_max: None,
            include_t: false,
            format: Format::Csv,
            n_cap: DEFAULT_N_CAP,
        }
    }

    fn validate(&self) -> Result<FieldOrder, CliError> {
        let q = FieldOrder::new(self.q).map_err(|e| CliError::Usage(e.to_string()))?;
        if self.n_max > self.n_cap {
            return Err(CliError::Usage(format!(
                "--n-max {} exceeds the cap {}",
                self.n_max, self.n_cap
            )));
        }
        if self.include_t && self.sequence != Sequence::StirlingCycle {
            return Err(CliError::Usage(format!(
                "--include-t applies only to stirling-cycle, not {}",
                self.sequence.name()
            )));
        }
        if self.k_max.is_some() && !self.sequence.two_index() {
            return Err(CliError::Usage(format!(
                "--k-max does not apply to {}",
                self.sequence.name()
            )));
        }
        Ok(q)
    }
}

/// Computes the rows for a request.
pub fn table_rows(req: &TableRequest) -> Result<Vec<Row>, CliError> {
    let q = req.validate()?;
    let engine = QSequences::new(q, req.n_max);
    let n_max = req.n_max;
    let single = |values: Vec<Natural>| -> Vec<Row> {
        values
            .into_iter()
            .enumerate()
            .map(|(n, value)| Row { n, k: None, value })
            .collect()
    };
    let double = |rows: Vec<Vec<Natural>>| -> Vec<Row> {
        let mut out = Vec::new();
        for (n, row) in rows.into_iter().enumerate() {
            let top = req.k_max.map_or(n, |k| k.min(n));
            for k in 0..=top {
                let value = row.get(k).cloned().unwrap_or_default();
                out.push(Row { n, k: Some(k), value });
            }
        }
        out
    };
    let rows = match req.sequence {
        Sequence::StirlingSubset => double(engine.stirling_subset_rows(n_max)?),
        Sequence::StirlingCycle => double(engine.stirling_cycle_rows(n_max, req.include_t)?),
        Sequence::DiagonalizableByK => double(
            (0..=n_max)
                .map(|n| engine.diagonalizable_row(n))
                .collect::<Result<_, _>>()?,
        ),
        Sequence::Bell => single(engine.bell_row(n_max)?),
        Sequence::Diagonalizable => single(
            (0..=n_max)
                .map(|n| engine.diagonalizable(n))
                .collect::<Result<_, _>>()?,
        ),
        Sequence::Projections => single(
            (0..=n_max)
                .map(|n| engine.projections(n))
                .collect::<Result<_, _>>()?,
        ),
        Sequence::Diagonalizations => single(
            (0..=n_max)
                .map(|n| engine.diagonalizations(n))
                .collect::<Result<_, _>>()?,
        ),
        Sequence::InvertibleDiagonalizations => single(
            (0..=n_max)
                .map(|n| engine.invertible_diagonalizations(n))
                .collect::<Result<_, _>>()?,
        ),
    };
    Ok(rows)
}

/// Runs `qexp table`, returning stdout and stderr text.
pub fn cmd_table(req: &TableRequest) -> Result<(String, String), CliError> {
    let rows = table_rows(req)?;
    let q = FieldOrder::new(req.q).map_err(|e| CliError::Usage(e.to_string()))?;
    let include_t = (req.sequence == Sequence::StirlingCycle).then_some(req.include_t);
    let stdout = render(req.format, req.sequence.name(), req.q, include_t, &rows);
    Ok((stdout, prime_power_warning(q)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn values(req: &TableRequest) -> Vec<String> {
        table_rows(req).unwrap().iter().map(|r| r.value.to_string()).collect()
    }

    #[test]
    fn bell_and_projections() {
        assert_eq!(values(&TableRequest::new(Sequence::Bell, 2, 3)), ["1", "1", "4", "57"]);
        assert_eq!(values(&TableRequest::new(Sequence::Projections, 2, 2)), ["1", "2", "8"]);
    }

    #[test]
    fn cycle_row_two() {
        let rows = table_rows(&TableRequest::new(Sequence::StirlingCycle, 2, 2)).unwrap();
        let at = |k| rows.iter().find(|r| r.n == 2 && r.k == Some(k)).unwrap().value.to_string();
        assert_eq!(at(1), "5");
        assert_eq!(at(2), "1");
    }

    #[test]
    fn k_max_truncates() {
        let mut req = TableRequest::new(Sequence::StirlingSubset, 2, 4);
        req.k_max = Some(1);
        let rows = table_rows(&req).unwrap();
        assert!(rows.iter().all(|r| r.k.unwrap() <= 1));
        assert_eq!(rows.len(), 1 + 2 * 4);
    }

    #[test]
    fn usage_errors() {
        let bad_q = TableRequest::new(Sequence::Bell, 1, 3);
        assert!(matches!(table_rows(&bad_q), Err(CliError::Usage(_))));
        let too_big = TableRequest::new(Sequence::Bell, 2, 25);
        assert!(matches!(table_rows(&too_big), Err(CliError::Usage(_))));
        let mut t = TableRequest::new(Sequence::Bell, 2, 3);
        t.include_t = true;
        assert!(matches!(table_rows(&t), Err(CliError::Usage(_))));
        let mut k = TableRequest::new(Sequence::Projections, 2, 3);
        k.k_max = Some(1);
        assert!(matches!(table_rows(&k), Err(CliError::Usage(_))));
    }

    #[test]
    fn warns_on_non_prime_power() {
        let (_, err) = cmd_table(&TableRequest::new(Sequence::Bell, 6, 3)).unwrap();
        assert!(err.contains("not a prime power"));
        let (_, err) = cmd_table(&TableRequest::new(Sequence::Bell, 4, 3)).unwrap();
        assert!(err.is_empty());
    }
}
