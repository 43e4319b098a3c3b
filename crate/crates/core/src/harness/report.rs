use std::io::Write;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::config::CheckId;
use crate::error::Result;
use crate::kernel::operator::Operator;
use crate::kernel::space::Space;
use crate::semimodule::{FiniteFunction, FunctionalSemimodule, PointSet};
use crate::semiring::{Semiring, SemiringSpec, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    /// Both sides agree.
    Consistent,
    /// The statement failed under its hypotheses: an internal inconsistency.
    Violation,
    /// Hypotheses not met or a cap was hit; nothing was concluded.
    Skipped,
    /// Hypotheses not met and the conclusion failed; informational.
    Observation,
}

/// A semimodule in serializable form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleWitness {
    pub points: Vec<String>,
    pub carrier: Vec<Vec<Value>>,
}

impl ModuleWitness {
    pub fn of(v: &FunctionalSemimodule) -> Self {
        Self {
            points: v.points().labels().to_vec(),
            carrier: v.carrier().iter().map(|f| f.values().to_vec()).collect(),
        }
    }

    pub fn build(&self, s: Semiring) -> Result<Arc<FunctionalSemimodule>> {
        let points = PointSet::new(self.points.clone())?;
        let carrier = self
            .carrier
            .iter()
            .map(|vals| FiniteFunction::new(vals.clone()))
            .collect();
        Ok(Arc::new(FunctionalSemimodule::new(s, points, carrier)?))
    }
}

/// Everything needed to replay one instance verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub semiring: SemiringSpec,
    pub module: ModuleWitness,
    /// Source of the recorded operator, when it is not `module`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<ModuleWitness>,
    /// Target of the recorded operator, when it is not `module`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<ModuleWitness>,
    /// Operator images in source carrier order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub operator: Option<Vec<Vec<Value>>>,
    /// The element on which the recorded verdict is visible.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub element: Option<Vec<Value>>,
}

impl Witness {
    pub fn of_module(v: &FunctionalSemimodule) -> Self {
        Self {
            semiring: SemiringSpec::from(*v.semiring()),
            module: ModuleWitness::of(v),
            source: None,
            target: None,
            operator: None,
            element: None,
        }
    }

    pub fn with_operator(v: &FunctionalSemimodule, op: &Operator) -> Result<Self> {
        let mut w = Self::of_module(v);
        let module_of = |space: &Space| space.module().map(|m| ModuleWitness::of(m));
        let (src, dst) = (module_of(op.source()), module_of(op.target()));
        if src.as_ref() != Some(&w.module) {
            w.source = src;
        }
        if dst.as_ref() != Some(&w.module) {
            w.target = dst;
        }
        w.operator = Some(op.images()?.into_iter().map(FiniteFunction::into_values).collect());
        Ok(w)
    }

    pub fn with_element(mut self, f: &FiniteFunction) -> Self {
        self.element = Some(f.values().to_vec());
        self
    }

    pub fn semiring(&self) -> Result<Semiring> {
        Semiring::try_from(&self.semiring)
    }

    /// The instance semimodule and the recorded operator, if any.
    pub fn rebuild(&self) -> Result<(Arc<FunctionalSemimodule>, Option<Operator>)> {
        let s = self.semiring()?;
        let v = self.module.build(s)?;
        let op = match &self.operator {
            None => None,
            Some(table) => {
                let src = match &self.source {
                    Some(m) => m.build(s)?,
                    None => v.clone(),
                };
                let dst = match &self.target {
                    Some(m) => m.build(s)?,
                    None => v.clone(),
                };
                let images = table.iter().map(|vals| FiniteFunction::new(vals.clone())).collect();
                Some(Operator::table(Space::Enumerated(src), Space::Enumerated(dst), images)?)
            }
        };
        Ok((v, op))
    }
}

/// One line of a report: the verdict of one check on one instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub check: CheckId,
    pub index: usize,
    pub semiring: String,
    pub points: usize,
    pub carrier: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

/// Aggregate over all instances of one check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub check: CheckId,
    pub instances: usize,
    pub consistent: usize,
    pub violations: usize,
    pub skipped: usize,
    pub observations: usize,
    /// Summed per-instance time; only present when timing is requested.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
}

#[derive(Clone, Debug)]
pub struct CheckReport {
    pub summary: CheckSummary,
    pub records: Vec<InstanceRecord>,
}

impl CheckReport {
    pub fn new(check: CheckId, records: Vec<InstanceRecord>, wall_ms: Option<u64>) -> Self {
        let count = |st: Status| records.iter().filter(|r| r.status == st).count();
        Self {
            summary: CheckSummary {
                check,
                instances: records.len(),
                consistent: count(Status::Consistent),
                violations: count(Status::Violation),
                skipped: count(Status::Skipped),
                observations: count(Status::Observation),
                wall_ms,
            },
            records,
        }
    }

    pub fn violations(&self) -> impl Iterator<Item = &InstanceRecord> {
        self.records.iter().filter(|r| r.status == Status::Violation)
    }
}

/// The whole run: per-check reports in canonical check order.
#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub reports: Vec<CheckReport>,
    /// Random instances that could not be generated within the caps.
    pub generation_skips: usize,
}

#[derive(Serialize)]
struct SummaryLine<'a> {
    summary: &'a CheckSummary,
}

#[derive(Serialize)]
struct TotalLine {
    total: Totals,
}

#[derive(Serialize)]
struct Totals {
    checks: usize,
    instances: usize,
    violations: usize,
    generation_skips: usize,
}

impl SuiteReport {
    pub fn total_violations(&self) -> usize {
        self.reports.iter().map(|r| r.summary.violations).sum()
    }

    pub fn report(&self, check: CheckId) -> Option<&CheckReport> {
        self.reports.iter().find(|r| r.summary.check == check)
    }

    /// JSON lines: every instance record, then one summary line per check and
    /// a final totals line.
    pub fn write_json_lines<W: Write>(&self, out: &mut W) -> Result<()> {
        for r in &self.reports {
            for rec in &r.records {
                serde_json::to_writer(&mut *out, rec)?;
                out.write_all(b"\n")?;
            }
        }
        for r in &self.reports {
            serde_json::to_writer(&mut *out, &SummaryLine { summary: &r.summary })?;
            out.write_all(b"\n")?;
        }
        let totals = Totals {
            checks: self.reports.len(),
            instances: self.reports.iter().map(|r| r.summary.instances).sum(),
            violations: self.total_violations(),
            generation_skips: self.generation_skips,
        };
        serde_json::to_writer(&mut *out, &TotalLine { total: totals })?;
        out.write_all(b"\n")?;
        Ok(())
    }

    pub fn to_json_lines(&self) -> String {
        let mut buf = Vec::new();
        self.write_json_lines(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("serde_json emits UTF-8")
    }

    /// One line per check.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for r in &self.reports {
            let s = &r.summary;
            out.push_str(&format!(
                "{:<10} instances={:<6} consistent={:<6} skipped={:<6} observations={:<4} violations={}",
                s.check.name(),
                s.instances,
                s.consistent,
                s.skipped,
                s.observations,
                s.violations
            ));
            if let Some(ms) = s.wall_ms {
                out.push_str(&format!(" time={ms}ms"));
            }
            out.push('\n');
            for v in r.violations() {
                out.push_str(&format!(
                    "  violation #{} {} {}: {}\n",
                    v.index,
                    v.semiring,
                    v.carrier,
                    v.detail.as_deref().unwrap_or("")
                ));
            }
        }
        out
    }
}
