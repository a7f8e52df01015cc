use std::time::Duration;

use anyhow::Result;
use klimm_core::exactmat::RationalMatrix;
use klimm_core::grid::Multiset;
use klimm_core::Permutation;
use serde::Serialize;

/// Witnesses kept in full; the rest are only counted.
pub const MAX_WITNESSES: usize = 20;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Parameters {
    pub max_n: usize,
    pub max_m: Option<usize>,
    pub k: Option<usize>,
    pub seed: u64,
    pub samples: usize,
}

/// Everything needed to re-check a failing case by hand.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub case: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v: Option<Permutation>,
    #[serde(rename = "R", skip_serializing_if = "Option::is_none")]
    pub r: Option<Multiset>,
    #[serde(rename = "C", skip_serializing_if = "Option::is_none")]
    pub c: Option<Multiset>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix: Option<RationalMatrix>,
    pub detail: String,
}

impl Witness {
    pub fn new(case: impl Into<String>, detail: impl Into<String>) -> Self {
        Self {
            case: case.into(),
            v: None,
            r: None,
            c: None,
            matrix: None,
            detail: detail.into(),
        }
    }

    pub fn v(mut self, v: &Permutation) -> Self {
        self.v = Some(v.clone());
        self
    }

    pub fn labels(mut self, r: &Multiset, c: &Multiset) -> Self {
        self.r = Some(r.clone());
        self.c = Some(c.clone());
        self
    }

    pub fn matrix(mut self, m: &RationalMatrix) -> Self {
        self.matrix = Some(m.clone());
        self
    }
}

/// Result of one suite or search. `counterexamples` is nonempty exactly when
/// `cases_passed < cases_run`.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub parameters: Parameters,
    pub cases_run: usize,
    pub cases_passed: usize,
    /// Cases whose hypothesis was not met; not counted in `cases_run`.
    pub skipped: usize,
    pub errors: Vec<String>,
    pub counterexamples_total: usize,
    pub counterexamples: Vec<Witness>,
    pub notes: Vec<String>,
    #[serde(skip)]
    pub wall_time: Duration,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    suite: &'a str,
    max_n: usize,
    max_m: Option<usize>,
    k: Option<usize>,
    seed: u64,
    samples: usize,
    cases_run: usize,
    cases_passed: usize,
    skipped: usize,
    errors: usize,
    counterexamples: usize,
}

impl SuiteReport {
    /// No counterexamples and no errors.
    pub fn ok(&self) -> bool {
        self.counterexamples_total == 0 && self.errors.is_empty()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    /// Header plus one summary row.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.serialize(CsvRow {
            suite: &self.suite,
            max_n: self.parameters.max_n,
            max_m: self.parameters.max_m,
            k: self.parameters.k,
            seed: self.parameters.seed,
            samples: self.parameters.samples,
            cases_run: self.cases_run,
            cases_passed: self.cases_passed,
            skipped: self.skipped,
            errors: self.errors.len(),
            counterexamples: self.counterexamples_total,
        })?;
        Ok(String::from_utf8(w.into_inner()?)?)
    }

    pub fn summary_line(&self) -> String {
        let verdict = if self.ok() { "ok" } else { "FAILED" };
        format!(
            "{}: {}/{} passed, {} skipped, {} counterexamples, {} errors ({:.1}s) {verdict}",
            self.suite,
            self.cases_passed,
            self.cases_run,
            self.skipped,
            self.counterexamples_total,
            self.errors.len(),
            self.wall_time.as_secs_f64()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report() -> SuiteReport {
        SuiteReport {
            suite: "squares".into(),
            parameters: Parameters {
                max_n: 3,
                max_m: None,
                k: None,
                seed: 1,
                samples: 5,
            },
            cases_run: 9,
            cases_passed: 9,
            skipped: 0,
            errors: vec![],
            counterexamples_total: 0,
            counterexamples: vec![],
            notes: vec![],
            wall_time: Duration::from_secs(3),
        }
    }

    #[test]
    fn wall_time_is_not_serialized() {
        let json = report().to_json().unwrap();
        assert!(!json.contains("wall"));
        assert!(json.contains("\"cases_run\": 9"));
    }

    #[test]
    fn csv_has_header_and_row() {
        let csv = report().to_csv().unwrap();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[0].starts_with("suite,max_n"));
        assert!(lines[1].starts_with("squares,3,,,1,5,9,9,0,0,0"));
    }

    #[test]
    fn witness_omits_missing_parts() {
        let w = Witness::new("x", "d").v(&"21".parse().unwrap());
        let json = serde_json::to_string(&w).unwrap();
        assert_eq!(json, r#"{"case":"x","v":"21","detail":"d"}"#);
    }
}
