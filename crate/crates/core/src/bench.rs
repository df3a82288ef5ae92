//! Benchmark suites: unification problems with expected unifier counts per
//! mode, run with a per-mode timeout and reported as CSV.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::parse::TermContext;
use crate::theories::bundled;
use crate::theory::Theory;
use crate::unifier::{Engine, Mode, UnificationProblem, UnifierSet};

pub const DEFAULT_TIMEOUT_SECS: u64 = 60;

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Suite {
    /// Bundled theory used by problems that do not name one.
    pub theory: Option<String>,
    pub timeout: Option<u64>,
    #[serde(rename = "problem", default)]
    pub problems: Vec<ProblemSpec>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub id: String,
    pub theory: Option<String>,
    /// `t1 =? t1' /\ t2 =? t2' ...`
    pub equations: String,
    #[serde(default)]
    pub expected: Expected,
}

#[derive(Clone, Debug, Default, Deserialize, Serialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct Expected {
    pub plain: Option<usize>,
    pub post: Option<usize>,
    pub fast: Option<usize>,
    pub fast_post: Option<usize>,
}

impl Expected {
    pub fn get(&self, mode: BenchMode) -> Option<usize> {
        match mode {
            BenchMode::Plain => self.plain,
            BenchMode::Post => self.post,
            BenchMode::Fast => self.fast,
            BenchMode::FastPost => self.fast_post,
        }
    }
}

/// The four table columns. `Post` and `FastPost` include the quotient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BenchMode {
    Plain,
    Post,
    Fast,
    FastPost,
}

impl BenchMode {
    pub const ALL: [BenchMode; 4] = [BenchMode::Plain, BenchMode::Post, BenchMode::Fast, BenchMode::FastPost];

    pub fn mode(self) -> Mode {
        match self {
            BenchMode::Plain => Mode::PLAIN,
            BenchMode::Post => Mode::POST,
            BenchMode::Fast => Mode::FAST,
            BenchMode::FastPost => Mode::FAST_POST,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BenchMode::Plain => "plain",
            BenchMode::Post => "post",
            BenchMode::Fast => "fast",
            BenchMode::FastPost => "fastpost",
        }
    }
}

impl fmt::Display for BenchMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BenchMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "plain" => Ok(BenchMode::Plain),
            "post" => Ok(BenchMode::Post),
            "fast" => Ok(BenchMode::Fast),
            "fastpost" | "fast_post" | "fast+post" => Ok(BenchMode::FastPost),
            other => Err(Error::Input(format!("unknown benchmark mode `{other}`"))),
        }
    }
}

pub fn parse_modes(list: &str) -> Result<Vec<BenchMode>> {
    let mut modes: Vec<BenchMode> = list.split(',').map(str::parse).collect::<Result<_>>()?;
    modes.sort();
    modes.dedup();
    Ok(modes)
}

#[derive(Clone, Debug)]
pub enum Outcome {
    Done { set: UnifierSet, elapsed: Duration },
    TimedOut { elapsed: Duration },
    Failed { error: Error },
}

#[derive(Clone, Debug)]
pub struct Row {
    pub id: String,
    pub theory: String,
    pub problem: String,
    pub expected: Expected,
    pub outcomes: BTreeMap<BenchMode, Outcome>,
}

impl Row {
    pub fn count(&self, mode: BenchMode) -> Option<usize> {
        match self.outcomes.get(&mode) {
            Some(Outcome::Done { set, .. }) => Some(set.len()),
            _ => None,
        }
    }

    pub fn set(&self, mode: BenchMode) -> Option<&UnifierSet> {
        match self.outcomes.get(&mode) {
            Some(Outcome::Done { set, .. }) => Some(set),
            _ => None,
        }
    }

    /// `ok`, or the list of deviations from the expected counts, timeouts
    /// and errors.
    pub fn status(&self) -> String {
        let mut notes = Vec::new();
        for (mode, outcome) in &self.outcomes {
            match outcome {
                Outcome::Done { set, .. } => {
                    if let Some(want) = self.expected.get(*mode) {
                        if want != set.len() {
                            notes.push(format!("{mode} {} (expected {want})", set.len()));
                        }
                    }
                }
                Outcome::TimedOut { .. } => notes.push(format!("{mode} T/O")),
                Outcome::Failed { error } => notes.push(format!("{mode} error: {error}")),
            }
        }
        if notes.is_empty() {
            "ok".into()
        } else {
            notes.join("; ")
        }
    }

    fn cells(&self, mode: BenchMode) -> (String, String) {
        match self.outcomes.get(&mode) {
            None => ("-".into(), "-".into()),
            Some(Outcome::Done { set, elapsed }) => (set.len().to_string(), elapsed.as_millis().to_string()),
            Some(Outcome::TimedOut { .. }) => ("T/O".into(), "T/O".into()),
            Some(Outcome::Failed { .. }) => ("error".into(), "-".into()),
        }
    }
}

pub fn load_suite(text: &str) -> Result<Suite> {
    toml::from_str(text).map_err(|e| Error::Input(format!("benchmark suite: {e}")))
}

fn theory_named(name: &str) -> Result<Theory> {
    bundled(name).unwrap_or_else(|| Err(Error::Input(format!("unknown bundled theory `{name}`"))))
}

/// Runs one problem in each of `modes`, each with a fresh engine and its own
/// deadline.
pub fn run_problem(suite: &Suite, spec: &ProblemSpec, modes: &[BenchMode], timeout: Duration) -> Result<Row> {
    let theory_name = spec
        .theory
        .as_deref()
        .or(suite.theory.as_deref())
        .ok_or_else(|| Error::Input(format!("problem {} names no theory", spec.id)))?;
    let th = theory_named(theory_name)?;
    let equations = TermContext::new(&th).parse_equations(&spec.equations)?;
    let problem = UnificationProblem::new(equations)?;
    let mut outcomes = BTreeMap::new();
    for &mode in modes {
        let mut engine = Engine::new(&th)?;
        let start = Instant::now();
        engine.set_deadline(Some(start + timeout));
        let outcome = match engine.unify(&problem, mode.mode()) {
            Ok(set) => Outcome::Done { set, elapsed: start.elapsed() },
            Err(Error::Timeout) => Outcome::TimedOut { elapsed: start.elapsed() },
            Err(error) => Outcome::Failed { error },
        };
        outcomes.insert(mode, outcome);
    }
    Ok(Row {
        id: spec.id.clone(),
        theory: theory_name.to_string(),
        problem: spec.equations.clone(),
        expected: spec.expected.clone(),
        outcomes,
    })
}

pub fn run_suite(suite: &Suite, modes: &[BenchMode], timeout: Option<Duration>) -> Result<Vec<Row>> {
    let timeout = timeout.unwrap_or(Duration::from_secs(suite.timeout.unwrap_or(DEFAULT_TIMEOUT_SECS)));
    suite.problems.iter().map(|p| run_problem(suite, p, modes, timeout)).collect()
}

pub const CSV_HEADER: [&str; 12] =
    ["id", "theory", "problem", "#plain", "t_plain", "#post", "t_post", "#fast", "t_fast", "#fast_post", "t_fast_post", "status"];

pub fn write_csv(rows: &[Row], out: impl Write) -> Result<()> {
    let io = |e: csv::Error| Error::Input(format!("writing CSV: {e}"));
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER).map_err(io)?;
    for row in rows {
        let mut record = vec![row.id.clone(), row.theory.clone(), row.problem.clone()];
        for mode in BenchMode::ALL {
            let (count, ms) = row.cells(mode);
            record.push(count);
            record.push(ms);
        }
        record.push(row.status());
        w.write_record(&record).map_err(io)?;
    }
    w.flush().map_err(|e| Error::Input(format!("writing CSV: {e}")))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const SUITE: &str = r#"
theory = "xor"
timeout = 30

[[problem]]
id = "P1"
equations = "V1 =? V2 * V3"
expected = { plain = 7, post = 1, fast = 1, fast_post = 1 }

[[problem]]
id = "none"
equations = "a =? b"
expected = { plain = 0, fast = 2 }
"#;

    #[test]
    fn suite_round_trip_to_csv() {
        let suite = load_suite(SUITE).unwrap();
        let rows = run_suite(&suite, &BenchMode::ALL, None).unwrap();
        assert_eq!(rows[0].status(), "ok");
        assert_eq!(rows[1].status(), "fast 0 (expected 2)");
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], CSV_HEADER.join(","));
        assert!(lines[1].starts_with("P1,xor,V1 =? V2 * V3,7,"));
        assert_eq!(lines.len(), 3);
    }

    #[test]
    fn modes_parse() {
        assert_eq!(parse_modes("fastpost,plain,plain").unwrap(), vec![BenchMode::Plain, BenchMode::FastPost]);
        assert!(parse_modes("slow").is_err());
    }

    #[test]
    fn timeouts_are_reported() {
        let suite = load_suite(SUITE).unwrap();
        let row = run_problem(&suite, &suite.problems[0], &[BenchMode::Post], Duration::ZERO).unwrap();
        assert!(matches!(row.outcomes[&BenchMode::Post], Outcome::TimedOut { .. }));
        assert_eq!(row.status(), "post T/O");
    }
}
