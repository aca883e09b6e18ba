//! Closed forms side by side with simulation, plus the identities relating them.

use crate::error::Result;
use crate::formulas::{comb_report, line_report, CombCostReport, LineCostReport};
use crate::plan::Label;
use crate::planner::{plan_checked, split_double_comb, tooth_reach, Strategy};
use crate::shapes::{join, Instance, ShapeDescriptor};
use crate::snowfield::Trace;
use serde::Serialize;
use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimSummary {
    pub steps: u64,
    pub pass_steps: u64,
    pub brush_steps: u64,
    pub ejected: u64,
    pub remaining: u64,
    pub max_depth: u32,
}

impl From<&Trace> for SimSummary {
    fn from(trace: &Trace) -> Self {
        let s = &trace.summary;
        SimSummary {
            steps: s.steps as u64,
            pass_steps: s.pass_steps() as u64,
            brush_steps: s.brush_steps() as u64,
            ejected: s.ejected,
            remaining: s.remaining,
            max_depth: s.max_depth,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub lhs: i64,
    pub relation: Relation,
    pub rhs: i64,
    pub ok: bool,
}

impl IdentityCheck {
    fn new(name: &str, lhs: impl TryInto<i64>, relation: Relation, rhs: impl TryInto<i64>) -> Self {
        let lhs = lhs.try_into().unwrap_or(i64::MAX);
        let rhs = rhs.try_into().unwrap_or(i64::MAX);
        let ok = match relation {
            Relation::Eq => lhs == rhs,
            Relation::Le => lhs <= rhs,
            Relation::Ge => lhs >= rhs,
        };
        Self {
            name: name.to_string(),
            lhs,
            relation,
            rhs,
            ok,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClosedForms {
    Line(LineCostReport),
    Comb(CombCostReport),
    /// Only the upper comb has closed forms; the lower one is simulated.
    DoubleComb {
        upper: CombCostReport,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CostReport {
    pub instance: Instance,
    pub closed: ClosedForms,
    pub improved: SimSummary,
    pub baseline: Option<SimSummary>,
    pub checks: Vec<IdentityCheck>,
    pub notes: Vec<String>,
}

impl CostReport {
    pub fn all_ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    pub fn failures(&self) -> impl Iterator<Item = &IdentityCheck> {
        self.checks.iter().filter(|c| !c.ok)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization is infallible")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "instance: {} D={}",
            self.instance.shape, self.instance.cap
        );
        match &self.closed {
            ClosedForms::Line(line) => {
                let _ = writeln!(out, "R={} Q={}", line.rq.r, line.rq.q);
                let _ = writeln!(
                    out,
                    "closed form: improved {}, baseline {}, savings {}",
                    line.cost_improved, line.cost_baseline, line.savings
                );
            }
            ClosedForms::Comb(comb) | ClosedForms::DoubleComb { upper: comb } => {
                let rq: Vec<_> = comb
                    .teeth
                    .iter()
                    .map(|rq| format!("({},{})", rq.r, rq.q))
                    .collect();
                let _ = writeln!(out, "(R_i,Q_i): {}", rq.join(" "));
                let _ = writeln!(
                    out,
                    "passes: improved {}, baseline {}, diff {}",
                    comb.pass_improved, comb.pass_baseline, comb.pass_diff
                );
                let _ = writeln!(
                    out,
                    "bounds: brush saving >= {}, net saving >= {}",
                    comb.brush_saving_lb, comb.net_saving_lb
                );
            }
        }
        for (name, sim) in [
            ("improved", Some(&self.improved)),
            ("baseline", self.baseline.as_ref()),
        ] {
            if let Some(sim) = sim {
                let _ = writeln!(
                    out,
                    "simulated {name}: {} steps ({} pass, {} brush), ejected {}, remaining {}, max depth {}",
                    sim.steps, sim.pass_steps, sim.brush_steps, sim.ejected, sim.remaining, sim.max_depth
                );
            }
        }
        for c in &self.checks {
            let rel = match c.relation {
                Relation::Eq => "=",
                Relation::Le => "<=",
                Relation::Ge => ">=",
            };
            let verdict = if c.ok { "ok" } else { "FAIL" };
            let _ = writeln!(out, "check {}: {} {rel} {} {verdict}", c.name, c.lhs, c.rhs);
        }
        for note in &self.notes {
            let _ = writeln!(out, "note: {note}");
        }
        out
    }
}

fn mechanics_checks(
    checks: &mut Vec<IdentityCheck>,
    tag: &str,
    sim: &SimSummary,
    instance: &Instance,
) {
    checks.push(IdentityCheck::new(
        &format!("{tag}_ejected_all"),
        sim.ejected,
        Relation::Eq,
        instance.shape.area(),
    ));
    checks.push(IdentityCheck::new(
        &format!("{tag}_remaining"),
        sim.remaining,
        Relation::Eq,
        0,
    ));
    checks.push(IdentityCheck::new(
        &format!("{tag}_max_depth"),
        sim.max_depth,
        Relation::Le,
        instance.cap,
    ));
}

/// Plans both strategies, simulates them and checks every identity that
/// applies to the shape. Simulation failures are returned as errors.
pub fn compare(instance: &Instance) -> Result<CostReport> {
    instance.validate()?;
    let cap = instance.cap;
    let (_, improved_trace) = plan_checked(instance, Strategy::Improved)?;
    let improved = SimSummary::from(&improved_trace);
    let mut checks = Vec::new();
    let mut notes = Vec::new();
    mechanics_checks(&mut checks, "improved", &improved, instance);

    let (closed, baseline) = match &instance.shape {
        ShapeDescriptor::Line(line) => {
            let (_, base_trace) = plan_checked(instance, Strategy::Baseline)?;
            let baseline = SimSummary::from(&base_trace);
            mechanics_checks(&mut checks, "baseline", &baseline, instance);
            let closed = line_report(line.len, cap)?;
            checks.push(IdentityCheck::new(
                "improved_steps",
                improved.steps,
                Relation::Eq,
                closed.cost_improved,
            ));
            checks.push(IdentityCheck::new(
                "baseline_steps",
                baseline.steps,
                Relation::Eq,
                closed.cost_baseline,
            ));
            checks.push(IdentityCheck::new(
                "savings",
                baseline.steps as i64 - improved.steps as i64,
                Relation::Eq,
                closed.savings,
            ));
            if closed.rq.r == 0 {
                notes.push("R=0: both strategies make the same full passes, no steps saved".into());
            }
            (ClosedForms::Line(closed), Some(baseline))
        }
        ShapeDescriptor::Comb(comb) => {
            let (_, base_trace) = plan_checked(instance, Strategy::Baseline)?;
            let baseline = SimSummary::from(&base_trace);
            mechanics_checks(&mut checks, "baseline", &baseline, instance);
            let closed = comb_report(&comb.teeth, cap)?;
            checks.push(IdentityCheck::new(
                "pass_improved",
                improved.pass_steps,
                Relation::Eq,
                closed.pass_improved,
            ));
            checks.push(IdentityCheck::new(
                "pass_baseline",
                baseline.pass_steps,
                Relation::Eq,
                closed.pass_baseline,
            ));
            checks.push(IdentityCheck::new(
                "pass_diff",
                improved.pass_steps as i64 - baseline.pass_steps as i64,
                Relation::Eq,
                closed.pass_diff,
            ));
            checks.push(IdentityCheck::new(
                "brush_saving",
                baseline.brush_steps as i64 - improved.brush_steps as i64,
                Relation::Ge,
                closed.brush_saving_lb,
            ));
            checks.push(IdentityCheck::new(
                "net_saving",
                baseline.steps as i64 - improved.steps as i64,
                Relation::Ge,
                closed.net_saving_lb,
            ));
            checks.push(IdentityCheck::new(
                "improved_le_baseline",
                improved.steps,
                Relation::Le,
                baseline.steps,
            ));

            let h = comb.teeth.len();
            let imp_reach = tooth_reach(&improved_trace, h, Label::is_brush);
            let base_reach = tooth_reach(&base_trace, h, Label::is_brush);
            let overreach = imp_reach
                .iter()
                .zip(&closed.teeth)
                .filter(|(&reach, rq)| reach > rq.r)
                .count();
            checks.push(IdentityCheck::new(
                "improved_brush_overreach",
                overreach,
                Relation::Eq,
                0,
            ));
            let short = base_reach
                .iter()
                .zip(&closed.teeth)
                .zip(&comb.teeth)
                .filter(|((&reach, rq), &t)| rq.q >= 1 && reach != t)
                .count();
            checks.push(IdentityCheck::new(
                "baseline_brush_short_of_tip",
                short,
                Relation::Eq,
                0,
            ));
            (ClosedForms::Comb(closed), Some(baseline))
        }
        ShapeDescriptor::DoubleComb(double) => {
            let split = split_double_comb(double)?;
            notes.push(match &split.lower {
                Some(lower) => format!(
                    "split into upper comb {} and lower comb {}",
                    join(&split.upper.teeth),
                    join(&lower.teeth)
                ),
                None => "no down extensions: plain comb".into(),
            });
            let upper = comb_report(&split.upper.teeth, cap)?;
            (ClosedForms::DoubleComb { upper }, None)
        }
    };

    Ok(CostReport {
        instance: instance.clone(),
        closed,
        improved,
        baseline,
        checks,
        notes,
    })
}

pub const SWEEP_HEADER: &str =
    "shape,D,R,Q,cost_improved,cost_baseline,savings,sim_improved,sim_baseline,max_depth,ok";

/// One comparison flattened into a table row. For combs `R` and `Q` are
/// summed over teeth, the costs are the pass closed forms and `savings` is
/// the net saving lower bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub shape: String,
    pub cap: u32,
    pub r: u64,
    pub q: u64,
    pub cost_improved: u64,
    pub cost_baseline: u64,
    pub savings: u64,
    pub sim_improved: u64,
    pub sim_baseline: Option<u64>,
    pub max_depth: u32,
    pub ok: bool,
}

impl SweepRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.shape,
            self.cap,
            self.r,
            self.q,
            self.cost_improved,
            self.cost_baseline,
            self.savings,
            self.sim_improved,
            self.sim_baseline
                .map_or_else(|| "-".to_string(), |s| s.to_string()),
            self.max_depth,
            self.ok
        )
    }
}

/// Shape as a single CSV-safe token, e.g. `line:10`, `comb:5/6/9`.
pub fn shape_token(shape: &ShapeDescriptor) -> String {
    let slash = |v: &[u32]| v.iter().map(u32::to_string).collect::<Vec<_>>().join("/");
    match shape {
        ShapeDescriptor::Line(line) => format!("line:{}", line.len),
        ShapeDescriptor::Comb(comb) => format!("comb:{}", slash(&comb.teeth)),
        ShapeDescriptor::DoubleComb(d) => format!("double:{};{}", slash(&d.up), slash(&d.down)),
    }
}

impl From<&CostReport> for SweepRow {
    fn from(report: &CostReport) -> Self {
        let (r, q, cost_improved, cost_baseline, savings) = match &report.closed {
            ClosedForms::Line(l) => (
                u64::from(l.rq.r),
                u64::from(l.rq.q),
                l.cost_improved,
                l.cost_baseline,
                l.savings,
            ),
            ClosedForms::Comb(c) | ClosedForms::DoubleComb { upper: c } => (
                c.total_r(),
                c.total_q(),
                c.pass_improved,
                c.pass_baseline,
                c.net_saving_lb,
            ),
        };
        let max_depth = report
            .baseline
            .as_ref()
            .map_or(0, |b| b.max_depth)
            .max(report.improved.max_depth);
        SweepRow {
            shape: shape_token(&report.instance.shape),
            cap: report.instance.cap,
            r,
            q,
            cost_improved,
            cost_baseline,
            savings,
            sim_improved: report.improved.steps,
            sim_baseline: report.baseline.as_ref().map(|b| b.steps),
            max_depth,
            ok: report.all_ok(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_line() {
        let report = compare(&Instance::new(ShapeDescriptor::line(10), 4).unwrap()).unwrap();
        assert!(report.all_ok(), "{}", report.to_text());
        let row = SweepRow::from(&report);
        assert_eq!(row.to_csv(), "line:10,4,2,2,30,38,8,30,38,4,true");
        assert!(report.notes.is_empty());
    }

    #[test]
    fn divisible_line_is_flagged() {
        let report = compare(&Instance::new(ShapeDescriptor::line(8), 4).unwrap()).unwrap();
        assert!(report.all_ok());
        assert!(report.notes[0].starts_with("R=0"));
        let row = SweepRow::from(&report);
        assert_eq!(row.savings, 0);
    }

    #[test]
    fn worked_comb() {
        let report = compare(&Instance::new(ShapeDescriptor::comb([5, 6, 9]), 4).unwrap()).unwrap();
        assert!(report.all_ok(), "{}", report.to_text());
        match &report.closed {
            ClosedForms::Comb(c) => {
                assert_eq!(
                    (c.pass_improved, c.pass_baseline, c.pass_diff),
                    (52, 42, 10)
                );
                assert_eq!(c.net_saving_lb, 22);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(report.improved.pass_steps, 52);
        assert_eq!(report.baseline.as_ref().unwrap().pass_steps, 42);
    }

    #[test]
    fn double_comb_report() {
        let report =
            compare(&Instance::new(ShapeDescriptor::double_comb([3, 2], [2, 0]), 2).unwrap())
                .unwrap();
        assert!(report.all_ok(), "{}", report.to_text());
        assert!(report.baseline.is_none());
        assert_eq!(report.improved.ejected, 7);
    }

    #[test]
    fn json_mirrors_instance_document() {
        let instance = Instance::new(ShapeDescriptor::comb([2, 3]), 3).unwrap();
        let json = compare(&instance).unwrap().to_json();
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        let back: Instance = serde_json::from_value(value["instance"].clone()).unwrap();
        assert_eq!(back, instance);
    }
}
