//! Move/throw plans for both clearing strategies.
//!
//! Pixel `k` of a line or tooth is counted from 1 at the root (line) or the
//! handle (tooth). Throws follow one choreography everywhere:
//!
//! * walking outward along a tooth or line, the entered pixel's snow goes
//!   back onto the pixel just vacated;
//! * walking back, snow rolls ahead onto the next pixel of the route, and
//!   the root throws across the ejection edge;
//! * a tooth's handle pixel throws root-ward along the handle, except during
//!   pass transit where handle snow is tipped up into its own tooth.
//!
//! Each full pass collects exactly `D` units this way, and brush batches are
//! capped at `D`, so no pixel ever exceeds the cap.

use crate::error::{Error, Result};
use crate::plan::{Label, Plan, Segment, Step};
use crate::shapes::{
    line_rq, tooth_rq, validate_cap, CombDesc, DoubleCombDesc, Instance, Pixel, Rq,
    ShapeDescriptor, EJECT_TO,
};
use crate::snowfield::{init_field, simulate, Trace};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    Improved,
    Baseline,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Improved => "improved",
            Strategy::Baseline => "baseline",
        })
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "improved" => Ok(Strategy::Improved),
            "baseline" => Ok(Strategy::Baseline),
            other => Err(format!("unknown strategy `{other}`")),
        }
    }
}

/// Accumulates steps while tracking the machine position.
struct Walker {
    plan: Plan,
    at: Pixel,
}

impl Walker {
    fn new() -> Self {
        Self {
            plan: Plan::new(),
            at: Pixel::new(0, 0),
        }
    }

    fn segment(&mut self, label: Label) {
        self.plan.segments.push(Segment {
            label,
            steps: Vec::new(),
        });
    }

    fn step(&mut self, to: Pixel, throw_to: Pixel) {
        debug_assert!(self.at.is_adjacent(to), "{} -> {}", self.at, to);
        self.plan
            .segments
            .last_mut()
            .expect("segment opened before stepping")
            .steps
            .push(Step::new(to, Some(throw_to)));
        self.at = to;
    }

    fn finish(mut self) -> Plan {
        self.plan
            .segments
            .retain(|s| !s.steps.is_empty() || s.label == Label::Stitch);
        self.plan
    }
}

fn line_pixel(k: u32) -> Pixel {
    Pixel::new(k as i32 - 1, 0)
}

/// Root to pixel `reach` and back, rolling everything it picks up out.
fn line_round_trip(w: &mut Walker, reach: u32) {
    for k in 2..=reach {
        w.step(line_pixel(k), line_pixel(k - 1));
    }
    for k in (1..reach).rev() {
        let ahead = if k > 1 { line_pixel(k - 1) } else { EJECT_TO };
        w.step(line_pixel(k), ahead);
    }
}

/// Clears `R` first, then makes `Q` full passes to pixels `R + jD`.
pub fn plan_line_improved(len: u32, cap: u32) -> Result<Plan> {
    let Rq { r, q } = line_rq(len, cap)?;
    let mut w = Walker::new();
    if r >= 2 {
        w.segment(Label::RemainderPhase);
        line_round_trip(&mut w, r);
    }
    for j in 1..=q {
        w.segment(Label::Pass { tooth: 0, pass: j });
        line_round_trip(&mut w, r + j * cap);
    }
    Ok(w.finish())
}

/// Makes `Q` full passes to pixels `jD`, then one pass over the whole line.
pub fn plan_line_baseline(len: u32, cap: u32) -> Result<Plan> {
    let Rq { r, q } = line_rq(len, cap)?;
    let mut w = Walker::new();
    for j in 1..=q {
        w.segment(Label::Pass { tooth: 0, pass: j });
        line_round_trip(&mut w, j * cap);
    }
    if r > 0 {
        w.segment(Label::RemainderPhase);
        line_round_trip(&mut w, len);
    }
    Ok(w.finish())
}

/// Comb teeth laid out along the handle, rising in `dir` (+1 up, -1 down).
#[derive(Debug, Clone, Copy)]
struct Layout<'a> {
    teeth: &'a [u32],
    dir: i32,
}

impl Layout<'_> {
    fn pixel(&self, tooth: usize, k: u32) -> Pixel {
        Pixel::new(tooth as i32, self.dir * (k as i32 - 1))
    }

    fn handle(&self, tooth: usize) -> Pixel {
        Pixel::new(tooth as i32, 0)
    }

    fn rootward(&self, tooth: usize) -> Pixel {
        if tooth == 0 {
            EJECT_TO
        } else {
            self.handle(tooth - 1)
        }
    }

    /// Tip a handle pixel's snow into its own tooth when the tooth has room.
    fn tip_up(&self, tooth: usize) -> Pixel {
        if self.teeth[tooth] >= 2 {
            self.pixel(tooth, 2)
        } else {
            self.rootward(tooth)
        }
    }

    fn handle_out(&self, w: &mut Walker, to: usize, throw: impl Fn(usize) -> Pixel) {
        let from = w.at.x as usize;
        for k in from + 1..=to {
            w.step(self.handle(k), throw(k));
        }
    }

    fn handle_home(&self, w: &mut Walker) {
        let from = w.at.x as usize;
        for k in (0..from).rev() {
            w.step(self.handle(k), self.rootward(k));
        }
    }

    /// Up tooth `i` to pixel `reach` and back down to its handle pixel.
    fn tooth_round_trip(&self, w: &mut Walker, i: usize, reach: u32) {
        for k in 2..=reach {
            w.step(self.pixel(i, k), self.pixel(i, k - 1));
        }
        for k in (1..reach).rev() {
            let ahead = if k > 1 {
                self.pixel(i, k - 1)
            } else {
                self.rootward(i)
            };
            w.step(self.pixel(i, k), ahead);
        }
    }

    /// Full pass `j` on tooth `i` reaching tooth pixel `reach`.
    fn pass(&self, w: &mut Walker, i: usize, j: u32, reach: u32) {
        w.segment(Label::Pass {
            tooth: i as u32,
            pass: j,
        });
        self.handle_out(w, i, |k| self.tip_up(k));
        self.tooth_round_trip(w, i, reach);
        self.handle_home(w);
    }
}

/// One tooth as the brush sees it.
#[derive(Debug, Clone, Copy)]
struct BrushTooth {
    /// Highest tooth pixel the brush climbs to.
    extent: u32,
    /// Snow units this tooth contributes to a batch, at most.
    weight: u32,
    /// Whether the tooth holds any snow within `extent`.
    loaded: bool,
}

/// Greedy left-to-right batches of whole teeth with total weight at most `cap`.
fn brush_batches(teeth: &[BrushTooth], cap: u32) -> Vec<(usize, usize)> {
    let mut batches = Vec::new();
    let mut start = 0;
    while start < teeth.len() {
        let mut end = start;
        let mut load = teeth[start].weight;
        while end + 1 < teeth.len() && load + teeth[end + 1].weight <= cap {
            end += 1;
            load += teeth[end].weight;
        }
        batches.push((start, end));
        start = end + 1;
    }
    batches
}

/// Brush passes over the whole comb. Each pass walks out to its first tooth,
/// clears each batch tooth up to its extent leaving the pile one handle pixel
/// root-ward of that tooth, then sweeps the piles home and out. With `trim`,
/// trailing teeth without snow are not visited.
fn brush(w: &mut Walker, layout: Layout<'_>, teeth: &[BrushTooth], cap: u32, trim: bool) {
    let mut pass = 0;
    for (start, end) in brush_batches(teeth, cap) {
        let end = if trim {
            match (start..=end).rev().find(|&i| teeth[i].loaded) {
                Some(end) => end,
                None => continue,
            }
        } else {
            end
        };
        pass += 1;
        w.segment(Label::Brush { pass });
        for (i, tooth) in teeth.iter().enumerate().take(end + 1).skip(start) {
            layout.handle_out(w, i, |k| layout.rootward(k));
            layout.tooth_round_trip(w, i, tooth.extent);
        }
        layout.handle_home(w);
    }
}

fn comb_rqs(teeth: &[u32], cap: u32) -> Result<Vec<Rq>> {
    validate_cap(cap)?;
    ShapeDescriptor::comb(teeth).validate()?;
    teeth.iter().map(|&t| tooth_rq(t, cap)).collect()
}

/// Brush over the first `R_i` pixels of each tooth, then full passes past them.
fn comb_improved(
    w: &mut Walker,
    layout: Layout<'_>,
    cap: u32,
    loaded: impl Fn(usize, Rq) -> bool,
) -> Result<()> {
    let rqs = comb_rqs(layout.teeth, cap)?;
    let brush_teeth: Vec<_> = rqs
        .iter()
        .enumerate()
        .map(|(i, &rq)| BrushTooth {
            extent: rq.r,
            weight: rq.r,
            loaded: loaded(i, rq),
        })
        .collect();
    brush(w, layout, &brush_teeth, cap, true);
    for (i, rq) in rqs.iter().enumerate() {
        for j in 1..=rq.q {
            layout.pass(w, i, j, rq.r + j * cap);
        }
    }
    Ok(())
}

pub fn plan_comb_improved(teeth: &[u32], cap: u32) -> Result<Plan> {
    let mut w = Walker::new();
    // The root's unit is gone, so tooth 0's brush region holds R_0 - 1.
    comb_improved(&mut w, Layout { teeth, dir: 1 }, cap, |i, rq| {
        i > 0 || rq.r >= 2
    })?;
    Ok(w.finish())
}

/// Full passes from each handle pixel, tooth by tooth, then a brush that
/// climbs every tooth to its tip.
///
/// A tooth that is only a handle pixel cannot stow its unit off the handle,
/// so before the passes of a tooth cross such pixels they are swept out in
/// `handle_transit` round trips of at most `D` units each.
pub fn plan_comb_baseline(teeth: &[u32], cap: u32) -> Result<Plan> {
    let rqs = comb_rqs(teeth, cap)?;
    let layout = Layout { teeth, dir: 1 };
    let mut w = Walker::new();
    let mut swept = 0;
    for (i, rq) in rqs.iter().enumerate() {
        if rq.q == 0 {
            continue;
        }
        let stubs: Vec<usize> = (swept.max(1)..i).filter(|&k| teeth[k] == 1).collect();
        for group in stubs.chunks(cap as usize) {
            let last = *group.last().expect("chunks are non-empty");
            w.segment(Label::HandleTransit);
            layout.handle_out(&mut w, last, |k| {
                if teeth[k] == 1 {
                    layout.rootward(k)
                } else {
                    layout.tip_up(k)
                }
            });
            layout.handle_home(&mut w);
        }
        swept = i;
        for j in 1..=rq.q {
            layout.pass(&mut w, i, j, j * cap);
        }
    }
    let brush_teeth: Vec<_> = teeth
        .iter()
        .zip(&rqs)
        .map(|(&t, rq)| BrushTooth {
            extent: t,
            weight: rq.r,
            loaded: true,
        })
        .collect();
    brush(&mut w, layout, &brush_teeth, cap, false);
    Ok(w.finish())
}

/// The two single-sided combs a double comb splits into.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoubleCombSplit {
    /// Up teeth together with the handle row.
    pub upper: CombDesc,
    /// Down extensions as a comb hanging from the same handle row; tooth `i`
    /// has length `down_i + 1`. `None` when there are no extensions.
    pub lower: Option<CombDesc>,
}

impl DoubleCombSplit {
    pub fn upper_pixels(&self) -> Vec<Pixel> {
        let layout = Layout {
            teeth: &self.upper.teeth,
            dir: 1,
        };
        tooth_pixels(layout, 1)
    }

    /// Lower comb pixels strictly below the shared handle row.
    pub fn lower_pixels(&self) -> Vec<Pixel> {
        match &self.lower {
            Some(lower) => tooth_pixels(
                Layout {
                    teeth: &lower.teeth,
                    dir: -1,
                },
                2,
            ),
            None => Vec::new(),
        }
    }
}

fn tooth_pixels(layout: Layout<'_>, from: u32) -> Vec<Pixel> {
    layout
        .teeth
        .iter()
        .enumerate()
        .flat_map(|(i, &t)| (from..=t).map(move |k| layout.pixel(i, k)))
        .collect()
}

pub fn split_double_comb(desc: &DoubleCombDesc) -> Result<DoubleCombSplit> {
    ShapeDescriptor::DoubleComb(desc.clone()).validate()?;
    let lower = desc.down.iter().any(|&d| d > 0).then(|| CombDesc {
        teeth: desc.down.iter().map(|&d| d + 1).collect(),
    });
    Ok(DoubleCombSplit {
        upper: CombDesc {
            teeth: desc.up.clone(),
        },
        lower,
    })
}

/// Clears the upper comb, then the lower comb on the same handle row, both
/// with the improved strategy.
pub fn plan_double_comb(desc: &DoubleCombDesc, cap: u32) -> Result<Plan> {
    let split = split_double_comb(desc)?;
    let mut w = Walker::new();
    comb_improved(
        &mut w,
        Layout {
            teeth: &split.upper.teeth,
            dir: 1,
        },
        cap,
        |i, rq| i > 0 || rq.r >= 2,
    )?;
    if let Some(lower) = &split.lower {
        w.segment(Label::Stitch);
        // Handle pixels are already clear: only pixels 2..=R_i hold snow.
        comb_improved(
            &mut w,
            Layout {
                teeth: &lower.teeth,
                dir: -1,
            },
            cap,
            |_, rq| rq.r >= 2,
        )?;
    }
    Ok(w.finish())
}

/// Plan for an instance. Double combs only have the improved strategy.
pub fn plan_for(instance: &Instance, strategy: Strategy) -> Result<Plan> {
    instance.validate()?;
    let cap = instance.cap;
    match (&instance.shape, strategy) {
        (ShapeDescriptor::Line(line), Strategy::Improved) => plan_line_improved(line.len, cap),
        (ShapeDescriptor::Line(line), Strategy::Baseline) => plan_line_baseline(line.len, cap),
        (ShapeDescriptor::Comb(comb), Strategy::Improved) => plan_comb_improved(&comb.teeth, cap),
        (ShapeDescriptor::Comb(comb), Strategy::Baseline) => plan_comb_baseline(&comb.teeth, cap),
        (ShapeDescriptor::DoubleComb(double), Strategy::Improved) => plan_double_comb(double, cap),
        (ShapeDescriptor::DoubleComb(_), Strategy::Baseline) => Err(Error::InvalidDescriptor(
            "the baseline strategy covers lines and single-sided combs only".into(),
        )),
    }
}

/// Plans and simulates, treating any mechanics failure or leftover snow as a
/// planner defect.
pub fn plan_checked(instance: &Instance, strategy: Strategy) -> Result<(Plan, Trace)> {
    let plan = plan_for(instance, strategy)?;
    let field = init_field(&instance.shape, instance.cap)?;
    let trace = simulate(&field, &plan).map_err(|e| match e {
        Error::Step { .. } => {
            Error::InternalPlan(format!("{strategy} plan for {}: {e}", instance.shape))
        }
        other => other,
    })?;
    if trace.summary.remaining != 0 {
        return Err(Error::InternalPlan(format!(
            "{strategy} plan for {} leaves {} units",
            instance.shape, trace.summary.remaining
        )));
    }
    Ok((plan, trace))
}

/// Highest tooth pixel visited per tooth (upward teeth) in segments whose
/// label satisfies `pred`. Zero for teeth never entered.
pub fn tooth_reach(trace: &Trace, teeth: usize, pred: impl Fn(Label) -> bool) -> Vec<u32> {
    let mut reach = vec![0; teeth];
    for r in &trace.records {
        let label = trace.summary.segments[r.segment].label;
        let p = r.position;
        if pred(label) && p.y >= 0 && (p.x as usize) < teeth {
            let slot = &mut reach[p.x as usize];
            *slot = (*slot).max(p.y as u32 + 1);
        }
    }
    reach
}
