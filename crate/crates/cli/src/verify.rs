//! `qexp verify`: formula values against exhaustive enumeration over `F_p`.
//!
//! The report text depends only on the level and the gamma fault, never on
//! the worker count.

use std::fmt::Write as _;

use clap::ValueEnum;
use qexp::arith::{gl_order, GammaTable};
use qexp::oracle::{census_with_workers, count_decompositions, CensusReport, Prime};
use qexp::qcombinatorics::QSequences;
use qexp::{FieldOrder, Natural};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Level {
    Quick,
    Full,
}

impl Level {
    /// `(p, n)` pairs scanned at this level.
    pub fn cases(self) -> Vec<(u64, usize)> {
        let mut cases = vec![(2, 1), (2, 2), (2, 3), (3, 1), (3, 2)];
        if self == Level::Full {
            cases.extend([(2, 4), (3, 3)]);
        }
        cases.sort();
        cases
    }

    fn name(self) -> &'static str {
        match self {
            Level::Quick => "quick",
            Level::Full => "full",
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub level: Level,
    pub workers: usize,
    /// Test hook: replace `gamma_n` by `gamma_n + 1` in the formula engine.
    pub gamma_fault: Option<usize>,
}

impl VerifyConfig {
    pub fn new(level: Level) -> Self {
        Self {
            level,
            workers: 1,
            gamma_fault: None,
        }
    }
}

/// One formula-vs-oracle comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub level: Level,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "verify level={}", self.level.name());
        for c in &self.checks {
            if c.passed {
                let _ = writeln!(
                    out,
                    "PASS {}: expected {} actual {} (exact match)",
                    c.name, c.expected, c.actual
                );
            } else {
                let _ = writeln!(
                    out,
                    "FAIL {}: expected {} actual {}",
                    c.name, c.expected, c.actual
                );
            }
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        let _ = writeln!(
            out,
            "summary: {} checks, {} passed, {} failed",
            self.checks.len(),
            self.checks.len() - failed,
            failed
        );
        match self.first_failure() {
            Some(c) => {
                let _ = writeln!(out, "first failure: {}", c.name);
            }
            None => {
                let _ = writeln!(out, "result: all checks exact match");
            }
        }
        out
    }
}

struct Recorder {
    checks: Vec<Check>,
}

impl Recorder {
    /// `expected` is the oracle side, `actual` the formula side.
    fn compare(&mut self, name: String, expected: Natural, actual: qexp::Result<Natural>) {
        let check = match actual {
            Ok(a) => Check {
                passed: a == expected,
                name,
                expected: expected.to_string(),
                actual: a.to_string(),
            },
            Err(e) => Check {
                name,
                expected: expected.to_string(),
                actual: format!("error ({e})"),
                passed: false,
            },
        };
        self.checks.push(check);
    }
}

fn engine(p: u64, max_n: usize, fault: Option<usize>) -> QSequences {
    let q = FieldOrder::new(p).expect("p >= 2");
    let mut gammas = GammaTable::new(q, max_n);
    if let Some(n) = fault {
        let bumped = gl_order(n, q) + 1u32;
        gammas = gammas.with_override(n, bumped);
    }
    QSequences::with_gammas(gammas)
}

fn hist(map: &std::collections::BTreeMap<usize, u64>, k: usize) -> Natural {
    Natural::from(map.get(&k).copied().unwrap_or(0))
}

fn check_case(rec: &mut Recorder, seq: &QSequences, census: &CensusReport, p: u64, n: usize) -> Result<(), CliError> {
    let prime = Prime::new(p).map_err(|e| CliError::Internal(e.to_string()))?;
    let tag = |what: &str| format!("{what} p={p} n={n}");
    let pn = Natural::from(p);

    rec.compare(
        tag("total = p^(n^2)"),
        Natural::from(census.total),
        Ok(pn.pow((n * n) as u32)),
    );
    rec.compare(
        tag("projections"),
        Natural::from(census.projections),
        seq.projections(n),
    );
    rec.compare(
        tag("diagonalizable"),
        Natural::from(census.diagonalizable),
        seq.diagonalizable(n),
    );
    for k in 0..=n {
        rec.compare(
            format!("diagonalizable-by-k p={p} n={n} k={k}"),
            hist(&census.diagonalizable_by_eigenvalues, k),
            seq.diagonalizable_by_eigenvalues(n, k),
        );
    }
    rec.compare(
        tag("invertible = gamma_n"),
        Natural::from(census.invertible),
        Ok(seq.gammas().get(n).clone()),
    );
    for include_t in [false, true] {
        let (what, map) = if include_t {
            ("stirling-cycle include-t", &census.summands_all)
        } else {
            ("stirling-cycle", &census.summands_invertible)
        };
        let row = seq.stirling_cycle_rows(n, include_t);
        for k in 0..=n {
            let value = row
                .as_ref()
                .map(|r| r[n].get(k).cloned().unwrap_or_default())
                .map_err(Clone::clone);
            rec.compare(format!("{what} p={p} n={n} k={k}"), hist(map, k), value);
        }
    }

    let mut decomposition_total = Natural::from(0u32);
    for k in 0..=n {
        let count = count_decompositions(n, k, prime).map_err(|e| CliError::Internal(e.to_string()))?;
        decomposition_total += count;
        rec.compare(
            format!("stirling-subset p={p} n={n} k={k}"),
            Natural::from(count),
            seq.stirling_subset(n, k),
        );
        if k == n {
            rec.compare(
                tag("diagonalizations = {n n} p^n"),
                Natural::from(count) * pn.pow(n as u32),
                seq.diagonalizations(n),
            );
            rec.compare(
                tag("invertible-diagonalizations = {n n} (p-1)^n"),
                Natural::from(count) * (&pn - 1u32).pow(n as u32),
                seq.invertible_diagonalizations(n),
            );
        }
    }
    rec.compare(tag("bell"), decomposition_total, seq.bell(n));
    Ok(())
}

/// Runs every comparison for the configured level.
pub fn run_verify(config: &VerifyConfig) -> Result<VerifyReport, CliError> {
    let cases = config.level.cases();
    let max_n = cases.iter().map(|&(_, n)| n).max().unwrap_or(0);
    let mut rec = Recorder { checks: Vec::new() };
    for &(p, n) in &cases {
        let prime = Prime::new(p).map_err(|e| CliError::Internal(e.to_string()))?;
        let census = census_with_workers(n, prime, config.workers.max(1))
            .map_err(|e| CliError::Internal(e.to_string()))?;
        let seq = engine(p, max_n, config.gamma_fault);
        check_case(&mut rec, &seq, &census, p, n)?;
    }
    Ok(VerifyReport {
        level: config.level,
        checks: rec.checks,
    })
}

/// Runs `qexp verify`. A report with any failure exits 1 but still prints.
pub fn cmd_verify(config: &VerifyConfig) -> crate::CommandOutput {
    match run_verify(config) {
        Ok(report) => crate::CommandOutput {
            code: if report.passed() { crate::EXIT_OK } else { crate::EXIT_FAILURE },
            stdout: report.render(),
            stderr: String::new(),
        },
        Err(e) => crate::CommandOutput::from_result(Err(e)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_passes() {
        let report = run_verify(&VerifyConfig::new(Level::Quick)).unwrap();
        assert!(report.passed(), "{}", report.render());
        assert!(report.render().ends_with("result: all checks exact match\n"));
    }

    #[test]
    fn fault_names_first_failure() {
        let mut config = VerifyConfig::new(Level::Quick);
        config.gamma_fault = Some(2);
        let out = cmd_verify(&config);
        assert_eq!(out.code, crate::EXIT_FAILURE);
        let report = run_verify(&config).unwrap();
        let first = report.first_failure().unwrap();
        assert!(out.stdout.contains(&format!("first failure: {}", first.name)));
    }

    #[test]
    fn workers_do_not_change_the_report() {
        let mut one = VerifyConfig::new(Level::Quick);
        one.workers = 1;
        let mut many = one.clone();
        many.workers = 5;
        assert_eq!(cmd_verify(&one).stdout, cmd_verify(&many).stdout);
    }
}
