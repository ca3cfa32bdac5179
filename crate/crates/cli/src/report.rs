use std::time::Instant;

use serde::Serialize;

/// One failed case of a verification suite.
#[derive(Clone, Debug, Serialize)]
pub struct Failure {
    pub case: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<Vec<usize>>,
    pub routes: Vec<String>,
    pub difference: String,
    pub repro: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub cases: usize,
    pub failures: Vec<Failure>,
    pub wall_time_s: f64,
    pub seed: u64,
    pub version: &'static str,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn summary_line(&self) -> String {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        format!(
            "{verdict} {}: {} cases, {} failures, {:.2}s",
            self.suite,
            self.cases,
            self.failures.len(),
            self.wall_time_s
        )
    }
}

/// Accumulates cases for one suite.
pub struct SuiteRun {
    name: String,
    seed: u64,
    start: Instant,
    cases: usize,
    failures: Vec<Failure>,
}

impl SuiteRun {
    pub fn new(name: &str, seed: u64) -> Self {
        SuiteRun {
            name: name.to_string(),
            seed,
            start: Instant::now(),
            cases: 0,
            failures: Vec::new(),
        }
    }

    pub fn pass(&mut self) {
        self.cases += 1;
    }

    pub fn fail(&mut self, f: Failure) {
        self.cases += 1;
        self.failures.push(f);
    }

    pub fn record(&mut self, ok: bool, f: impl FnOnce() -> Failure) {
        if ok {
            self.pass()
        } else {
            self.fail(f())
        }
    }

    pub fn finish(self) -> VerificationReport {
        VerificationReport {
            suite: self.name,
            cases: self.cases,
            failures: self.failures,
            wall_time_s: self.start.elapsed().as_secs_f64(),
            seed: self.seed,
            version: env!("CARGO_PKG_VERSION"),
        }
    }
}
