//! Pixel-grid mechanics.
//!
//! The machine moves one pixel per step. Whatever snow lies on the pixel it
//! enters is thrown, as one pile, onto a 4-neighbour of that pixel named by
//! the step. A throw from the root across the ejection edge removes the pile
//! from the field. No inside pixel may ever hold more than the cap.
//!
//! Fields are created with one unit per pixel, after which the root's unit is
//! ejected for free before the first step.

use crate::error::{Error, Result, StepError};
use crate::plan::{Label, Plan, Step};
use crate::shapes::{pixels_of, validate_cap, Geometry, Pixel, ShapeDescriptor};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt::Write as _;

const NONE: u32 = u32::MAX;

/// Dense bounding-box lookup from pixel to slot.
#[derive(Debug, Clone, PartialEq, Eq)]
struct PixelIndex {
    min_x: i32,
    min_y: i32,
    width: i32,
    height: i32,
    slots: Vec<u32>,
}

impl PixelIndex {
    fn new(pixels: &[Pixel]) -> Self {
        let min_x = pixels.iter().map(|p| p.x).min().unwrap_or(0);
        let max_x = pixels.iter().map(|p| p.x).max().unwrap_or(0);
        let min_y = pixels.iter().map(|p| p.y).min().unwrap_or(0);
        let max_y = pixels.iter().map(|p| p.y).max().unwrap_or(0);
        let width = max_x - min_x + 1;
        let height = max_y - min_y + 1;
        let mut slots = vec![NONE; (width * height) as usize];
        for (i, p) in pixels.iter().enumerate() {
            slots[((p.y - min_y) * width + (p.x - min_x)) as usize] = i as u32;
        }
        Self {
            min_x,
            min_y,
            width,
            height,
            slots,
        }
    }

    fn get(&self, p: Pixel) -> Option<usize> {
        let (dx, dy) = (p.x - self.min_x, p.y - self.min_y);
        if dx < 0 || dy < 0 || dx >= self.width || dy >= self.height {
            return None;
        }
        match self.slots[(dy * self.width + dx) as usize] {
            NONE => None,
            slot => Some(slot as usize),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnowField {
    cap: u32,
    pixels: Vec<Pixel>,
    index: PixelIndex,
    depth: Vec<u32>,
    root: Pixel,
    eject_to: Pixel,
    ejected: u64,
    initial_total: u64,
    max_depth: u32,
}

/// Builds the field for a shape: one unit everywhere, then the root's unit
/// ejected.
pub fn init_field(desc: &ShapeDescriptor, cap: u32) -> Result<SnowField> {
    validate_cap(cap)?;
    let geometry = pixels_of(desc)?;
    Ok(SnowField::from_geometry(&geometry, cap))
}

impl SnowField {
    pub fn from_geometry(geometry: &Geometry, cap: u32) -> Self {
        let pixels = geometry.pixels.clone();
        let index = PixelIndex::new(&pixels);
        let mut depth = vec![1; pixels.len()];
        let root_slot = index.get(geometry.root).expect("root belongs to the cell");
        depth[root_slot] = 0;
        let initial_total = pixels.len() as u64;
        let max_depth = depth.iter().copied().max().unwrap_or(0);
        SnowField {
            cap,
            pixels,
            index,
            depth,
            root: geometry.root,
            eject_to: geometry.eject_to,
            ejected: 1,
            initial_total,
            max_depth,
        }
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn root(&self) -> Pixel {
        self.root
    }

    pub fn eject_to(&self) -> Pixel {
        self.eject_to
    }

    pub fn pixels(&self) -> &[Pixel] {
        &self.pixels
    }

    pub fn contains(&self, p: Pixel) -> bool {
        self.index.get(p).is_some()
    }

    pub fn depth(&self, p: Pixel) -> Option<u32> {
        self.index.get(p).map(|i| self.depth[i])
    }

    pub fn depths(&self) -> &[u32] {
        &self.depth
    }

    pub fn ejected(&self) -> u64 {
        self.ejected
    }

    pub fn remaining(&self) -> u64 {
        self.depth.iter().map(|&d| u64::from(d)).sum()
    }

    pub fn initial_total(&self) -> u64 {
        self.initial_total
    }

    /// Largest depth any inside pixel has held so far.
    pub fn max_depth(&self) -> u32 {
        self.max_depth
    }

    pub fn is_clear(&self) -> bool {
        self.depth.iter().all(|&d| d == 0)
    }

    /// Overwrites a pixel's depth. Used to stage non-initial configurations.
    pub fn set_depth(&mut self, p: Pixel, depth: u32) -> Option<()> {
        let slot = self.index.get(p)?;
        let old = self.depth[slot];
        self.depth[slot] = depth;
        self.initial_total = self.initial_total + u64::from(depth) - u64::from(old);
        self.max_depth = self.max_depth.max(depth);
        Some(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MachineState {
    pub position: Pixel,
}

/// What one applied step did.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StepRecord {
    pub index: usize,
    pub segment: usize,
    pub position: Pixel,
    /// Throw target actually used; `None` when the entered pixel was clear.
    pub throw_to: Option<Pixel>,
    pub moved: u32,
    pub ejected: u32,
    pub max_depth: u32,
}

/// Applies one step. The field and machine are untouched when it fails.
pub fn apply_step(
    field: &mut SnowField,
    machine: &mut MachineState,
    step: Step,
) -> Result<(u32, Option<Pixel>, u32), StepError> {
    let from = machine.position;
    let to = step.move_to;
    let entered = match field.index.get(to) {
        Some(slot) if from.is_adjacent(to) => slot,
        _ => return Err(StepError::IllegalMove { from, to }),
    };
    let pile = field.depth[entered];
    if pile == 0 {
        machine.position = to;
        return Ok((0, None, 0));
    }
    let target = step.throw_to.ok_or(StepError::MissingThrow { at: to })?;
    if !to.is_adjacent(target) {
        return Err(StepError::IllegalThrow {
            from: to,
            to: target,
        });
    }
    let mut ejected = 0;
    match field.index.get(target) {
        Some(slot) => {
            let depth = field.depth[slot] + pile;
            if depth > field.cap {
                return Err(StepError::DepthViolation {
                    at: target,
                    depth,
                    cap: field.cap,
                });
            }
            field.depth[slot] = depth;
            field.max_depth = field.max_depth.max(depth);
        }
        None if to == field.root && target == field.eject_to => {
            field.ejected += u64::from(pile);
            ejected = pile;
        }
        None => {
            return Err(StepError::IllegalEjection {
                from: to,
                to: target,
            })
        }
    }
    field.depth[entered] = 0;
    machine.position = to;
    Ok((pile, Some(target), ejected))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SegmentSummary {
    pub label: Label,
    pub steps: usize,
    pub ejected: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceSummary {
    pub steps: usize,
    pub initial: u64,
    pub ejected: u64,
    pub remaining: u64,
    pub max_depth: u32,
    pub segments: Vec<SegmentSummary>,
}

impl TraceSummary {
    pub fn steps_where(&self, pred: impl Fn(Label) -> bool) -> usize {
        self.segments
            .iter()
            .filter(|s| pred(s.label))
            .map(|s| s.steps)
            .sum()
    }

    pub fn label_steps(&self) -> BTreeMap<Label, usize> {
        let mut counts = BTreeMap::new();
        for s in &self.segments {
            *counts.entry(s.label).or_insert(0) += s.steps;
        }
        counts
    }

    pub fn pass_steps(&self) -> usize {
        self.steps_where(Label::is_pass)
    }

    pub fn brush_steps(&self) -> usize {
        self.steps_where(Label::is_brush)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Trace {
    pub records: Vec<StepRecord>,
    pub summary: TraceSummary,
}

/// Step-by-step executor. After a failed step the simulation still holds
/// the state reached by the successful prefix.
#[derive(Debug, Clone)]
pub struct Simulation {
    field: SnowField,
    machine: MachineState,
    records: Vec<StepRecord>,
    segments: Vec<SegmentSummary>,
}

impl Simulation {
    pub fn new(field: SnowField) -> Self {
        let machine = MachineState {
            position: field.root,
        };
        Self {
            field,
            machine,
            records: Vec::new(),
            segments: Vec::new(),
        }
    }

    pub fn field(&self) -> &SnowField {
        &self.field
    }

    pub fn position(&self) -> Pixel {
        self.machine.position
    }

    pub fn records(&self) -> &[StepRecord] {
        &self.records
    }

    pub fn begin_segment(&mut self, label: Label) {
        self.segments.push(SegmentSummary {
            label,
            steps: 0,
            ejected: 0,
        });
    }

    pub fn apply(&mut self, step: Step) -> Result<&StepRecord> {
        if self.segments.is_empty() {
            self.begin_segment(Label::Witness);
        }
        let index = self.records.len();
        let (moved, throw_to, ejected) = apply_step(&mut self.field, &mut self.machine, step)
            .map_err(|source| Error::Step { index, source })?;
        let segment = self.segments.len() - 1;
        let current = &mut self.segments[segment];
        current.steps += 1;
        current.ejected += u64::from(ejected);
        self.records.push(StepRecord {
            index,
            segment,
            position: self.machine.position,
            throw_to,
            moved,
            ejected,
            max_depth: self.field.max_depth,
        });
        Ok(&self.records[index])
    }

    pub fn run(&mut self, plan: &Plan) -> Result<()> {
        for segment in &plan.segments {
            self.begin_segment(segment.label);
            for &step in &segment.steps {
                self.apply(step)?;
            }
        }
        Ok(())
    }

    pub fn into_trace(self) -> Trace {
        let summary = TraceSummary {
            steps: self.records.len(),
            initial: self.field.initial_total,
            ejected: self.field.ejected,
            remaining: self.field.remaining(),
            max_depth: self.field.max_depth,
            segments: self.segments,
        };
        Trace {
            records: self.records,
            summary,
        }
    }
}

/// Runs `plan` from the field root to completion.
pub fn simulate(field: &SnowField, plan: &Plan) -> Result<Trace> {
    let mut sim = Simulation::new(field.clone());
    sim.run(plan)?;
    Ok(sim.into_trace())
}

impl Trace {
    /// Line-delimited export.
    ///
    /// ```text
    /// # trace v1
    /// # step segment label x y throw moved ejected max_depth
    /// 0 0 remainder_phase 1 0 0,0 1 0 1
    /// ...
    /// # summary
    /// steps 2
    /// ...
    /// label remainder_phase 2
    /// ```
    ///
    /// `throw` is `-` when the entered pixel held no snow.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str("# trace v1\n");
        out.push_str("# step segment label x y throw moved ejected max_depth\n");
        for r in &self.records {
            let label = self.summary.segments[r.segment].label;
            let throw = match r.throw_to {
                Some(t) => format!("{},{}", t.x, t.y),
                None => "-".to_string(),
            };
            let _ = writeln!(
                out,
                "{} {} {} {} {} {} {} {} {}",
                r.index,
                r.segment,
                label,
                r.position.x,
                r.position.y,
                throw,
                r.moved,
                r.ejected,
                r.max_depth
            );
        }
        let s = &self.summary;
        out.push_str("# summary\n");
        let _ = writeln!(out, "steps {}", s.steps);
        let _ = writeln!(out, "initial {}", s.initial);
        let _ = writeln!(out, "ejected {}", s.ejected);
        let _ = writeln!(out, "remaining {}", s.remaining);
        let _ = writeln!(out, "max_depth {}", s.max_depth);
        for (label, steps) in s.label_steps() {
            let _ = writeln!(out, "label {label} {steps}");
        }
        out
    }
}
