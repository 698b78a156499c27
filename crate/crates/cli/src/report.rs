//! Report assembly and emission. Every subcommand produces one [`Report`]:
//! metadata, a typed row set, and a verdict summary. CSV output keeps the
//! metadata in `#` comment lines so the data rows are byte-stable across
//! runs; JSON output is a single `{meta, rows, summary}` object.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use rhcrit_core::criteria::{CriterionRecord, Verdict};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Meta {
    pub tool: String,
    pub version: String,
    pub subcommand: String,
    pub config: BTreeMap<String, String>,
    pub timestamp: String,
    pub wall_ms: u64,
}

#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize, PartialEq, Eq)]
pub struct Summary {
    pub holds: u64,
    pub fails: u64,
    pub indeterminate: u64,
    /// Rows that carry no verdict (growth diagnostics, plain series).
    pub diagnostic: u64,
}

impl Summary {
    fn count(&mut self, verdict: Option<Verdict>) {
        match verdict {
            Some(Verdict::Holds) => self.holds += 1,
            Some(Verdict::Fails) => self.fails += 1,
            Some(Verdict::Indeterminate) => self.indeterminate += 1,
            None => self.diagnostic += 1,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MertensRow {
    pub x: u64,
    pub mertens: i64,
    pub ratio_sqrt: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PsiRow {
    pub x: u64,
    pub psi: f64,
    /// ψ(x) - x
    pub delta: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GrowthRow {
    pub x: u64,
    pub mertens: i64,
    pub ratio_sqrt: f64,
    pub ratio_eps: f64,
    pub ratio_exp: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CheckRow {
    pub check: String,
    pub index: u64,
    pub deviation: f64,
    pub bound: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct EulerRow {
    pub prime_bound: u64,
    pub prime_count: u64,
    pub beta: f64,
    pub product: f64,
    pub smooth_sum: f64,
    pub deviation: f64,
    pub bound: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum RowSet {
    Criteria(Vec<CriterionRecord>),
    Mertens(Vec<MertensRow>),
    Psi(Vec<PsiRow>),
    Growth(Vec<GrowthRow>),
    Checks(Vec<CheckRow>),
    Euler(Vec<EulerRow>),
}

impl RowSet {
    pub fn summary(&self) -> Summary {
        let mut s = Summary::default();
        match self {
            RowSet::Criteria(rows) => rows.iter().for_each(|r| s.count(Some(r.verdict))),
            RowSet::Checks(rows) => rows.iter().for_each(|r| s.count(Some(r.verdict))),
            RowSet::Euler(rows) => rows.iter().for_each(|r| s.count(Some(r.verdict))),
            RowSet::Mertens(rows) => rows.iter().for_each(|_| s.count(None)),
            RowSet::Psi(rows) => rows.iter().for_each(|_| s.count(None)),
            RowSet::Growth(rows) => rows.iter().for_each(|_| s.count(None)),
        }
        s
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub meta: Meta,
    pub rows: RowSet,
    pub summary: Summary,
}

/// 17 significant digits: enough to round-trip any f64 exactly.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

impl Report {
    pub fn new(meta: Meta, rows: RowSet) -> Self {
        let summary = rows.summary();
        Self {
            meta,
            rows,
            summary,
        }
    }

    pub fn write_json(&self, out: &mut dyn Write) -> std::io::Result<()> {
        serde_json::to_writer_pretty(&mut *out, self)?;
        writeln!(out)
    }

    pub fn write_csv(&self, out: &mut dyn Write) -> std::io::Result<()> {
        writeln!(out, "# tool: {} {}", self.meta.tool, self.meta.version)?;
        writeln!(out, "# subcommand: {}", self.meta.subcommand)?;
        let config = self
            .meta
            .config
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(",");
        writeln!(out, "# config: {config}")?;
        writeln!(out, "# timestamp: {}", self.meta.timestamp)?;
        writeln!(out, "# wall_ms: {}", self.meta.wall_ms)?;

        let mut w = csv::Writer::from_writer(&mut *out);
        match &self.rows {
            RowSet::Criteria(rows) => {
                w.write_record(["criterion_id", "index", "lhs", "rhs", "margin", "verdict"])?;
                for r in rows {
                    w.write_record([
                        r.criterion_id.as_str().to_string(),
                        r.index.to_string(),
                        fmt_f64(r.lhs),
                        fmt_f64(r.rhs),
                        fmt_f64(r.margin),
                        r.verdict.as_str().to_string(),
                    ])?;
                }
            }
            RowSet::Mertens(rows) => {
                w.write_record(["x", "mertens", "ratio_sqrt"])?;
                for r in rows {
                    w.write_record([
                        r.x.to_string(),
                        r.mertens.to_string(),
                        fmt_f64(r.ratio_sqrt),
                    ])?;
                }
            }
            RowSet::Psi(rows) => {
                w.write_record(["x", "psi", "delta"])?;
                for r in rows {
                    w.write_record([r.x.to_string(), fmt_f64(r.psi), fmt_f64(r.delta)])?;
                }
            }
            RowSet::Growth(rows) => {
                w.write_record(["x", "mertens", "ratio_sqrt", "ratio_eps", "ratio_exp"])?;
                for r in rows {
                    w.write_record([
                        r.x.to_string(),
                        r.mertens.to_string(),
                        fmt_f64(r.ratio_sqrt),
                        fmt_f64(r.ratio_eps),
                        fmt_f64(r.ratio_exp),
                    ])?;
                }
            }
            RowSet::Checks(rows) => {
                w.write_record(["check", "index", "deviation", "bound", "verdict"])?;
                for r in rows {
                    w.write_record([
                        r.check.clone(),
                        r.index.to_string(),
                        fmt_f64(r.deviation),
                        fmt_f64(r.bound),
                        r.verdict.as_str().to_string(),
                    ])?;
                }
            }
            RowSet::Euler(rows) => {
                w.write_record([
                    "prime_bound",
                    "prime_count",
                    "beta",
                    "product",
                    "smooth_sum",
                    "deviation",
                    "bound",
                    "verdict",
                ])?;
                for r in rows {
                    w.write_record([
                        r.prime_bound.to_string(),
                        r.prime_count.to_string(),
                        fmt_f64(r.beta),
                        fmt_f64(r.product),
                        fmt_f64(r.smooth_sum),
                        fmt_f64(r.deviation),
                        fmt_f64(r.bound),
                        r.verdict.as_str().to_string(),
                    ])?;
                }
            }
        }
        w.flush()?;
        drop(w);
        writeln!(
            out,
            "# summary: holds={},fails={},indeterminate={},diagnostic={}",
            self.summary.holds,
            self.summary.fails,
            self.summary.indeterminate,
            self.summary.diagnostic
        )
    }
}
