//! Reports: pass/fail verdicts with witnesses, plus optional tables of derived objects.

use std::fmt::Write as _;

use modaldoc::order::MonotoneMap;
use modaldoc::{InteriorOp, OneArrow, Violation};
use serde::Serialize;

/// Witnesses listed per verdict before the rest are counted.
pub const WITNESS_LIMIT: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub check: String,
    pub passed: bool,
    pub detail: String,
    pub witnesses: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Row {
    pub from: String,
    pub to: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Table {
    pub name: String,
    pub rows: Vec<Row>,
}

impl Table {
    pub fn of_map(name: impl Into<String>, map: &MonotoneMap) -> Table {
        let rows = map
            .src()
            .elements()
            .map(|a| Row {
                from: map.src().name(a).to_string(),
                to: map.dst().name(map.apply(a)).to_string(),
            })
            .collect();
        Table { name: name.into(), rows }
    }

    /// One table per base object.
    pub fn of_op(label: &str, op: &InteriorOp) -> Vec<Table> {
        let c = op.doctrine().base();
        c.objects()
            .map(|x| Table::of_map(format!("{label} at {}", c.object_name(x)), op.at(x)))
            .collect()
    }

    pub fn of_arrow(label: &str, arrow: &OneArrow) -> Vec<Table> {
        let (c, d) = (arrow.src().base(), arrow.dst().base());
        c.objects()
            .map(|x| {
                let fx = arrow.functor().obj(x);
                Table::of_map(format!("{label} at {} over {}", c.object_name(x), d.object_name(fx)), arrow.at(x))
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub command: String,
    pub seed: Option<u64>,
    pub passed: bool,
    /// The answer to a single query, when the command asks one.
    pub result: Option<String>,
    pub tables: Vec<Table>,
    pub verdicts: Vec<Verdict>,
    /// Checks that were refused or skipped, with the reason.
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Report {
        Report {
            command: command.into(),
            seed: None,
            passed: true,
            result: None,
            tables: Vec::new(),
            verdicts: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn flag(&mut self, check: impl Into<String>, passed: bool, detail: impl Into<String>, witnesses: Vec<String>) {
        self.passed &= passed;
        self.verdicts.push(Verdict {
            check: check.into(),
            passed,
            detail: detail.into(),
            witnesses,
        });
    }

    /// Passes when `violations` is empty; lists up to [`WITNESS_LIMIT`] of them otherwise.
    pub fn laws(&mut self, check: impl Into<String>, violations: &[Violation]) {
        let mut witnesses: Vec<String> = violations.iter().take(WITNESS_LIMIT).map(Violation::to_string).collect();
        if violations.len() > WITNESS_LIMIT {
            witnesses.push(format!("{} more", violations.len() - WITNESS_LIMIT));
        }
        let detail = match violations.len() {
            0 => String::new(),
            n => format!("{n} violation(s)"),
        };
        self.flag(check, violations.is_empty(), detail, witnesses);
    }

    pub fn failures(&self) -> usize {
        self.verdicts.iter().filter(|v| !v.passed).count()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(r) = &self.result {
            let _ = writeln!(out, "{r}");
        }
        for t in &self.tables {
            let _ = writeln!(out, "{}", t.name);
            for row in &t.rows {
                let _ = writeln!(out, "  {} ↦ {}", row.from, row.to);
            }
        }
        for v in &self.verdicts {
            let status = if v.passed { "PASS" } else { "FAIL" };
            let _ = write!(out, "{status}  {}", v.check);
            if !v.detail.is_empty() {
                let _ = write!(out, " ({})", v.detail);
            }
            let _ = writeln!(out);
            for w in &v.witnesses {
                let _ = writeln!(out, "      {w}");
            }
        }
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        let _ = writeln!(out, "{} check(s), {} failed", self.verdicts.len(), self.failures());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn passed_tracks_verdicts() {
        let mut r = Report::new("check");
        r.laws("ok", &[]);
        assert!(r.passed);
        let many: Vec<Violation> = (0..10).map(|i| Violation::new("T", i.to_string())).collect();
        r.laws("bad", &many);
        assert!(!r.passed);
        assert_eq!(r.verdicts[1].witnesses.len(), WITNESS_LIMIT + 1);
        assert!(r.to_text().contains("FAIL  bad (10 violation(s))"));
        assert!(r.to_text().ends_with("2 check(s), 1 failed\n"));
    }

    #[test]
    fn json_key_order() {
        let json = Report::new("suite").to_json();
        let keys = ["command", "seed", "passed", "result", "tables", "verdicts", "notes"];
        let positions: Vec<usize> = keys.iter().map(|k| json.find(&format!("\"{k}\"")).unwrap()).collect();
        assert!(positions.windows(2).all(|w| w[0] < w[1]));
    }
}
