//! Hermetic acceptance suites with their brute-force oracles.
//!
//! Each criterion returns a [`CriterionReport`]; nothing here reads files
//! or the environment.

mod algebra;
mod extensions;
mod numbers;

use std::time::Instant;

use serde::Serialize;

/// Outcome of one acceptance criterion.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionReport {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    /// Number of individual exact checks performed.
    pub checks: usize,
    pub detail: String,
    /// Set when the criterion cannot pass as stated; explains why.
    pub known_deviation: Option<String>,
    pub elapsed_ms: u128,
}

pub const CRITERIA: [(u8, &str); 10] = [
    (1, "admissibility constants"),
    (2, "Ext dimension by exhaustive enumeration"),
    (3, "decomposition round trips"),
    (4, "kernel and cokernel universal properties"),
    (5, "Fontaine-Laffaille round trip"),
    (6, "étale and unipotent splittings"),
    (7, "weight-one scenario"),
    (8, "ramification bounds"),
    (9, "unit filtration"),
    (10, "semilinear solvers"),
];

/// Tally of checks with the first failure kept for the report.
#[derive(Default)]
pub(crate) struct Tally {
    checks: usize,
    failures: usize,
    first_failure: Option<String>,
}

impl Tally {
    pub(crate) fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(what());
            }
        }
    }

    pub(crate) fn fail(&mut self, what: impl Into<String>) {
        self.check(false, || what.into());
    }

    pub(crate) fn passed(&self) -> bool {
        self.failures == 0 && self.checks > 0
    }

    pub(crate) fn summary(&self, extra: &str) -> String {
        match &self.first_failure {
            None => format!("{} checks; {extra}", self.checks),
            Some(f) => format!("{} of {} checks failed, first: {f}; {extra}", self.failures, self.checks),
        }
    }
}

/// `(passed, checks, detail, known deviation)` from a criterion body.
pub(crate) type Outcome = (bool, usize, String, Option<String>);

pub(crate) fn outcome(t: &Tally, extra: &str) -> Outcome {
    (t.passed(), t.checks, t.summary(extra), None)
}

pub fn run_criterion(id: u8, seed: u64) -> Option<CriterionReport> {
    let title = CRITERIA.iter().find(|(i, _)| *i == id)?.1;
    let start = Instant::now();
    let (passed, checks, detail, known_deviation) = match id {
        1 => extensions::admissibility_constants(),
        2 => extensions::ext_dimension_oracle(),
        3 => extensions::decomposition_round_trips(seed),
        4 => algebra::category_laws(seed),
        5 => algebra::functor_round_trip(seed),
        6 => algebra::splittings(),
        7 => extensions::weight_one_scenario(seed),
        8 => numbers::ramification(),
        9 => numbers::unit_filtration(),
        10 => numbers::solvers(seed),
        _ => return None,
    };
    Some(CriterionReport {
        id,
        title,
        passed,
        checks,
        detail,
        known_deviation,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

pub fn run_all(seed: u64) -> Vec<CriterionReport> {
    CRITERIA
        .iter()
        .filter_map(|&(id, _)| run_criterion(id, seed))
        .collect()
}

impl CriterionReport {
    /// One line: `criterion N (title): PASS: detail` or the same with `FAIL`.
    pub fn line(&self) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        let mut line = format!("criterion {} ({}): {status}: {}", self.id, self.title, self.detail);
        if let Some(why) = &self.known_deviation {
            line.push_str(&format!(" [known deviation: {why}]"));
        }
        line
    }
}
