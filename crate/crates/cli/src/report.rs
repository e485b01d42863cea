use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use timeprops::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    fn of(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    fn word(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Text(String),
    Number(f64),
    Int(usize),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Number(v) => format!("{v:.12}"),
            Cell::Int(v) => v.to_string(),
        }
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Number(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub what: String,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub verdict: Verdict,
    pub checks: Vec<Check>,
    pub tables: Vec<Table>,
    pub violations: Vec<Violation>,
    pub warnings: Vec<String>,
    pub tolerances: BTreeMap<String, f64>,
}

impl Report {
    pub fn new(command: &str, tol: &Tolerances) -> Self {
        Report {
            command: command.to_string(),
            verdict: Verdict::Pass,
            checks: Vec::new(),
            tables: Vec::new(),
            violations: Vec::new(),
            warnings: Vec::new(),
            tolerances: tol
                .entries()
                .iter()
                .map(|(k, v)| (k.to_string(), *v))
                .collect(),
        }
    }

    pub fn check(&mut self, name: &str, ok: bool, detail: impl Into<String>) {
        if !ok {
            self.verdict = Verdict::Fail;
        }
        self.checks.push(Check {
            name: name.to_string(),
            verdict: Verdict::of(ok),
            detail: detail.into(),
        });
    }

    pub fn table(&mut self, title: &str, columns: &[&str], rows: Vec<Vec<Cell>>) {
        self.tables.push(Table {
            title: title.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows,
        });
    }

    pub fn violation(&mut self, what: impl Into<String>, residual: f64) {
        self.violations.push(Violation {
            what: what.into(),
            residual,
        });
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        let _ = writeln!(out, "verdict: {}", self.verdict.word());
        for c in &self.checks {
            let _ = writeln!(out, "check {}: {}  {}", c.name, c.verdict.word(), c.detail);
        }
        for t in &self.tables {
            let _ = writeln!(out, "table {}:", t.title);
            let cells: Vec<Vec<String>> = t
                .rows
                .iter()
                .map(|r| r.iter().map(Cell::render).collect())
                .collect();
            let widths: Vec<usize> = (0..t.columns.len())
                .map(|j| {
                    cells
                        .iter()
                        .map(|r| r[j].len())
                        .chain([t.columns[j].len()])
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            let line = |row: &[String]| {
                let parts: Vec<String> = row
                    .iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:<w$}"))
                    .collect();
                format!("  {}", parts.join("  ").trim_end())
            };
            let _ = writeln!(out, "{}", line(&t.columns));
            for r in &cells {
                let _ = writeln!(out, "{}", line(r));
            }
        }
        for v in &self.violations {
            let _ = writeln!(out, "violation {}: residual {:.3e}", v.what, v.residual);
        }
        for w in &self.warnings {
            let _ = writeln!(out, "warning: {w}");
        }
        let tols: Vec<String> = self
            .tolerances
            .iter()
            .map(|(k, v)| format!("{k}={v:e}"))
            .collect();
        let _ = writeln!(out, "tolerances: {}", tols.join(" "));
        out
    }
}
