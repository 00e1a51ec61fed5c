//! Check-row and report model shared by the verification suites, the CLI,
//! and the acceptance harness. Rows are deterministic: they are sorted by
//! (id, inputs) and carry no timing data, so two runs of the same suite
//! produce byte-identical row lists regardless of thread count.

use serde::Serialize;

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CheckRow {
    /// Stable check identifier, e.g. "traces/additivity".
    pub id: String,
    /// Canonical input rendering: space-separated key=value, keys sorted.
    pub inputs: String,
    pub pass: bool,
    /// Human-readable measurement or certificate summary.
    pub detail: String,
}

impl CheckRow {
    pub fn new(
        id: impl Into<String>,
        inputs: impl Into<String>,
        pass: bool,
        detail: impl Into<String>,
    ) -> Self {
        CheckRow { id: id.into(), inputs: inputs.into(), pass, detail: detail.into() }
    }
}

#[derive(Serialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
}

#[derive(Serialize)]
pub struct Timing {
    pub elapsed_ms: u128,
}

/// A finished suite run. `timing` is informational and excluded from
/// deterministic comparisons.
#[derive(Serialize)]
pub struct Report {
    pub schema: u32,
    pub suite: String,
    pub rows: Vec<CheckRow>,
    pub summary: Summary,
    pub timing: Timing,
}

pub const REPORT_SCHEMA: u32 = 1;

impl Report {
    pub fn new(suite: impl Into<String>, mut rows: Vec<CheckRow>, elapsed_ms: u128) -> Self {
        rows.sort_by(|a, b| a.id.cmp(&b.id).then_with(|| a.inputs.cmp(&b.inputs)));
        let passed = rows.iter().filter(|r| r.pass).count();
        let failed = rows.len() - passed;
        Report {
            schema: REPORT_SCHEMA,
            suite: suite.into(),
            rows,
            summary: Summary { passed, failed },
            timing: Timing { elapsed_ms },
        }
    }

    pub fn all_pass(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Full JSON document, pretty-printed, LF line endings, UTF-8.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// JSON without the timing block: byte-identical across reruns.
    pub fn comparable_json(&self) -> String {
        #[derive(Serialize)]
        struct Comparable<'a> {
            schema: u32,
            suite: &'a str,
            rows: &'a [CheckRow],
            summary: &'a Summary,
        }
        let c = Comparable {
            schema: self.schema,
            suite: &self.suite,
            rows: &self.rows,
            summary: &self.summary,
        };
        let mut s = serde_json::to_string_pretty(&c).expect("report serializes");
        s.push('\n');
        s
    }
}
