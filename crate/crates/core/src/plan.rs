//! Move/throw schedules and their text form.
//!
//! ```text
//! # plan: 2 segments, 4 steps
//! segment remainder_phase
//! 1,0 > 0,0
//! 0,0 > -1,0
//! segment pass(0,1)
//! 1,0
//! 2,0 > 1,0
//! ```
//!
//! Each step line names the pixel moved onto and, after `>`, the pixel its
//! snow is thrown to. Lines starting with `#` are comments.

use crate::error::{Error, Result};
use crate::shapes::Pixel;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// One unit move, optionally carrying a throw target for the entered pixel's snow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Step {
    pub move_to: Pixel,
    pub throw_to: Option<Pixel>,
}

impl Step {
    pub fn new(move_to: Pixel, throw_to: Option<Pixel>) -> Self {
        Self { move_to, throw_to }
    }

    pub fn bare(move_to: Pixel) -> Self {
        Self {
            move_to,
            throw_to: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Label {
    RemainderPhase,
    Pass { tooth: u32, pass: u32 },
    Brush { pass: u32 },
    HandleTransit,
    Stitch,
    Witness,
}

impl Label {
    pub fn is_pass(self) -> bool {
        matches!(self, Label::Pass { .. })
    }

    pub fn is_brush(self) -> bool {
        matches!(self, Label::Brush { .. })
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::RemainderPhase => f.write_str("remainder_phase"),
            Label::Pass { tooth, pass } => write!(f, "pass({tooth},{pass})"),
            Label::Brush { pass } => write!(f, "brush({pass})"),
            Label::HandleTransit => f.write_str("handle_transit"),
            Label::Stitch => f.write_str("stitch"),
            Label::Witness => f.write_str("witness"),
        }
    }
}

impl FromStr for Label {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let args = |inner: &str| -> Result<Vec<u32>, String> {
            inner
                .split(',')
                .map(|v| v.trim().parse::<u32>().map_err(|e| e.to_string()))
                .collect()
        };
        match s {
            "remainder_phase" => return Ok(Label::RemainderPhase),
            "handle_transit" => return Ok(Label::HandleTransit),
            "stitch" => return Ok(Label::Stitch),
            "witness" => return Ok(Label::Witness),
            _ => {}
        }
        if let Some(inner) = s.strip_prefix("pass(").and_then(|r| r.strip_suffix(')')) {
            if let [tooth, pass] = args(inner)?[..] {
                return Ok(Label::Pass { tooth, pass });
            }
        }
        if let Some(inner) = s.strip_prefix("brush(").and_then(|r| r.strip_suffix(')')) {
            if let [pass] = args(inner)?[..] {
                return Ok(Label::Brush { pass });
            }
        }
        Err(format!("unknown segment label `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub label: Label,
    pub steps: Vec<Step>,
}

/// Labelled segments of unit moves, walked from the field root.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Plan {
    pub segments: Vec<Segment>,
}

impl Plan {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn total_steps(&self) -> usize {
        self.segments.iter().map(|s| s.steps.len()).sum()
    }

    pub fn steps(&self) -> impl Iterator<Item = &Step> + '_ {
        self.segments.iter().flat_map(|s| s.steps.iter())
    }

    /// Steps in segments whose label satisfies `pred`.
    pub fn steps_where(&self, pred: impl Fn(Label) -> bool) -> usize {
        self.segments
            .iter()
            .filter(|s| pred(s.label))
            .map(|s| s.steps.len())
            .sum()
    }

    pub fn segment_lengths(&self) -> Vec<usize> {
        self.segments.iter().map(|s| s.steps.len()).collect()
    }

    pub fn append(&mut self, other: Plan) {
        self.segments.extend(other.segments);
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

fn write_pixel(f: &mut fmt::Formatter<'_>, p: Pixel) -> fmt::Result {
    write!(f, "{},{}", p.x, p.y)
}

impl fmt::Display for Plan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "# plan: {} segments, {} steps",
            self.segments.len(),
            self.total_steps()
        )?;
        for segment in &self.segments {
            writeln!(f, "segment {}", segment.label)?;
            for step in &segment.steps {
                write_pixel(f, step.move_to)?;
                if let Some(t) = step.throw_to {
                    f.write_str(" > ")?;
                    write_pixel(f, t)?;
                }
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

fn parse_pixel(text: &str) -> Option<Pixel> {
    let (x, y) = text.trim().split_once(',')?;
    Some(Pixel::new(x.trim().parse().ok()?, y.trim().parse().ok()?))
}

impl FromStr for Plan {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut plan = Plan::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let err = |message: String| Error::PlanFormat {
                line: n + 1,
                message,
            };
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(label) = line.strip_prefix("segment ") {
                let label = label.trim().parse::<Label>().map_err(err)?;
                plan.segments.push(Segment {
                    label,
                    steps: Vec::new(),
                });
                continue;
            }
            let (to, throw) = match line.split_once('>') {
                Some((to, throw)) => (to, Some(throw)),
                None => (line, None),
            };
            let move_to = parse_pixel(to).ok_or_else(|| err(format!("bad pixel `{to}`")))?;
            let throw_to = match throw {
                Some(t) => Some(parse_pixel(t).ok_or_else(|| err(format!("bad pixel `{t}`")))?),
                None => None,
            };
            let segment = plan
                .segments
                .last_mut()
                .ok_or_else(|| err("step before any segment header".into()))?;
            segment.steps.push(Step { move_to, throw_to });
        }
        Ok(plan)
    }
}
