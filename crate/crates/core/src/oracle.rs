//! Exhaustive breadth-first search for optimal clearing costs on tiny cells.
//!
//! A state is the machine position plus the depth of every pixel, packed into
//! one `u64` as base-`(D+1)` digits. Every step costs one, so the first
//! cleared state reached is optimal.

use crate::error::{Error, Result};
use crate::plan::{Label, Plan, Segment, Step};
use crate::planner::{plan_checked, Strategy};
use crate::shapes::{pixels_of, validate_cap, Instance, Pixel, ShapeDescriptor};
use crate::snowfield::SnowField;
use serde::Serialize;
use std::collections::hash_map::Entry;
use std::collections::{HashMap, VecDeque};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_pixels: usize,
    pub max_cap: u32,
    /// Bound on encoded states, both up front and while searching.
    pub max_states: usize,
    /// Give up once every plan of this many steps has been ruled out.
    pub max_steps: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_pixels: 8,
            max_cap: 3,
            max_states: 10_000_000,
            max_steps: 10_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Optimum {
    pub cost: u64,
    pub witness: Plan,
    pub explored: usize,
}

struct Space {
    pixels: Vec<Pixel>,
    /// Per pixel: 4-neighbour slots inside the cell.
    adjacent: Vec<Vec<usize>>,
    root: usize,
    eject_to: Pixel,
    base: u64,
    cap: u32,
}

impl Space {
    fn encode(&self, pos: usize, depth: &[u32]) -> u64 {
        let digits = depth
            .iter()
            .rev()
            .fold(0u64, |acc, &d| acc * self.base + u64::from(d));
        digits * self.pixels.len() as u64 + pos as u64
    }

    fn decode(&self, key: u64, depth: &mut [u32]) -> usize {
        let n = self.pixels.len() as u64;
        let pos = (key % n) as usize;
        let mut digits = key / n;
        for d in depth.iter_mut() {
            *d = (digits % self.base) as u32;
            digits /= self.base;
        }
        pos
    }
}

/// Minimum number of steps that clears `desc` under cap `cap`, with one
/// witness plan achieving it.
pub fn optimal_cost(desc: &ShapeDescriptor, cap: u32, limits: &Limits) -> Result<Optimum> {
    validate_cap(cap)?;
    let geometry = pixels_of(desc)?;
    let n = geometry.pixels.len();
    if n > limits.max_pixels || cap > limits.max_cap {
        return Err(Error::InstanceTooLarge(format!(
            "{n} pixels at D={cap} exceeds limits of {} pixels, D<={}",
            limits.max_pixels, limits.max_cap
        )));
    }
    let encoded = (u64::from(cap) + 1)
        .checked_pow(n as u32)
        .and_then(|s| s.checked_mul(n as u64));
    if encoded.is_none_or(|s| s > limits.max_states as u64) {
        return Err(Error::InstanceTooLarge(format!(
            "{n} pixels at D={cap} encode more than {} states",
            limits.max_states
        )));
    }

    let field = SnowField::from_geometry(&geometry, cap);
    let slot = |p: Pixel| geometry.pixels.iter().position(|&q| q == p);
    let space = Space {
        adjacent: geometry
            .pixels
            .iter()
            .map(|p| p.neighbours().into_iter().filter_map(slot).collect())
            .collect(),
        pixels: geometry.pixels.clone(),
        root: slot(geometry.root).expect("root belongs to the cell"),
        eject_to: geometry.eject_to,
        base: u64::from(cap) + 1,
        cap,
    };

    let start_depth = field.depths().to_vec();
    let start = space.encode(space.root, &start_depth);
    if start_depth.iter().all(|&d| d == 0) {
        return Ok(Optimum {
            cost: 0,
            witness: Plan::new(),
            explored: 1,
        });
    }

    let mut parent: HashMap<u64, (u64, Step)> = HashMap::new();
    let mut queue = VecDeque::from([(start, 0u64)]);
    parent.insert(start, (start, Step::bare(geometry.root)));
    let mut depth = vec![0; n];
    let mut next = vec![0; n];

    while let Some((key, dist)) = queue.pop_front() {
        if dist >= limits.max_steps {
            return Err(Error::Exhausted {
                explored: parent.len(),
                budget: limits.max_states,
            });
        }
        let pos = space.decode(key, &mut depth);
        for &to in &space.adjacent[pos] {
            let pile = depth[to];
            let mut successors: Vec<(Vec<u32>, Step)> = Vec::new();
            if pile == 0 {
                successors.push((depth.clone(), Step::bare(space.pixels[to])));
            } else {
                for target in space.pixels[to].neighbours() {
                    next.copy_from_slice(&depth);
                    next[to] = 0;
                    match slot(target) {
                        Some(t) if depth[t] + pile <= space.cap => next[t] += pile,
                        None if to == space.root && target == space.eject_to => {}
                        _ => continue,
                    }
                    successors.push((next.clone(), Step::new(space.pixels[to], Some(target))));
                }
            }
            for (state, step) in successors {
                let child = space.encode(to, &state);
                if let Entry::Vacant(e) = parent.entry(child) {
                    e.insert((key, step));
                    if state.iter().all(|&d| d == 0) {
                        let witness = rebuild(&parent, start, child);
                        return Ok(Optimum {
                            cost: witness.total_steps() as u64,
                            witness,
                            explored: parent.len(),
                        });
                    }
                    if parent.len() > limits.max_states {
                        return Err(Error::Exhausted {
                            explored: parent.len(),
                            budget: limits.max_states,
                        });
                    }
                    queue.push_back((child, dist + 1));
                }
            }
        }
    }
    Err(Error::Exhausted {
        explored: parent.len(),
        budget: limits.max_states,
    })
}

fn rebuild(parent: &HashMap<u64, (u64, Step)>, start: u64, mut key: u64) -> Plan {
    let mut steps = Vec::new();
    while key != start {
        let (prev, step) = parent[&key];
        steps.push(step);
        key = prev;
    }
    steps.reverse();
    Plan {
        segments: vec![Segment {
            label: Label::Witness,
            steps,
        }],
    }
}

/// Optimal cost next to both strategies' simulated costs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapReport {
    pub optimal: u64,
    pub improved: u64,
    /// `None` for double combs, which have no baseline plan.
    pub baseline: Option<u64>,
    pub improved_ratio: Option<f64>,
    pub baseline_ratio: Option<f64>,
}

impl GapReport {
    /// `optimal <= improved`, and `improved <= baseline` where a baseline exists.
    pub fn is_ordered(&self) -> bool {
        self.optimal <= self.improved && self.baseline.is_none_or(|b| self.improved <= b)
    }
}

pub fn gap_report(desc: &ShapeDescriptor, cap: u32, limits: &Limits) -> Result<GapReport> {
    let optimal = optimal_cost(desc, cap, limits)?.cost;
    let instance = Instance::new(desc.clone(), cap)?;
    let improved = plan_checked(&instance, Strategy::Improved)?.1.summary.steps as u64;
    let baseline = match desc {
        ShapeDescriptor::DoubleComb(_) => None,
        _ => Some(plan_checked(&instance, Strategy::Baseline)?.1.summary.steps as u64),
    };
    let ratio = |cost: u64| (optimal > 0).then(|| cost as f64 / optimal as f64);
    Ok(GapReport {
        optimal,
        improved,
        baseline,
        improved_ratio: ratio(improved),
        baseline_ratio: baseline.and_then(ratio),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::cost_line_improved;
    use crate::snowfield::{init_field, simulate};

    fn line_opt(len: u32, cap: u32) -> Optimum {
        optimal_cost(&ShapeDescriptor::line(len), cap, &Limits::default()).unwrap()
    }

    #[test]
    fn tiny_lines() {
        assert_eq!(line_opt(1, 2).cost, 0);
        assert_eq!(line_opt(1, 3).cost, 0);
        assert_eq!(line_opt(2, 2).cost, 2);
        let three = line_opt(3, 2).cost;
        assert!(three <= cost_line_improved(3, 2).unwrap());
        assert_eq!(three, 4);
    }

    #[test]
    fn witness_replays() {
        for len in 1..=5 {
            let opt = line_opt(len, 2);
            let field = init_field(&ShapeDescriptor::line(len), 2).unwrap();
            let trace = simulate(&field, &opt.witness).unwrap();
            assert_eq!(trace.summary.steps as u64, opt.cost);
            assert_eq!(trace.summary.remaining, 0);
        }
    }

    #[test]
    fn gap_reports() {
        let g = gap_report(&ShapeDescriptor::line(2), 2, &Limits::default()).unwrap();
        assert_eq!((g.optimal, g.improved, g.baseline), (2, 2, Some(2)));
        assert!(g.is_ordered());

        let g = gap_report(&ShapeDescriptor::line(6), 3, &Limits::default()).unwrap();
        assert_eq!(g.improved, 14);
        assert!(g.optimal <= 14);

        let g = gap_report(&ShapeDescriptor::comb([1, 1]), 2, &Limits::default()).unwrap();
        assert!(g.is_ordered());
    }

    #[test]
    fn rejects_oversized_instances() {
        let limits = Limits::default();
        assert!(matches!(
            optimal_cost(&ShapeDescriptor::line(9), 2, &limits),
            Err(Error::InstanceTooLarge(_))
        ));
        assert!(matches!(
            optimal_cost(&ShapeDescriptor::line(3), 4, &limits),
            Err(Error::InstanceTooLarge(_))
        ));
        let tight = Limits {
            max_states: 100,
            ..limits
        };
        assert!(matches!(
            optimal_cost(&ShapeDescriptor::line(5), 2, &tight),
            Err(Error::InstanceTooLarge(_))
        ));
        let short = Limits {
            max_steps: 3,
            ..limits
        };
        assert!(matches!(
            optimal_cost(&ShapeDescriptor::line(3), 2, &short),
            Err(Error::Exhausted { .. })
        ));
        assert_eq!(
            optimal_cost(
                &ShapeDescriptor::line(3),
                2,
                &Limits {
                    max_steps: 4,
                    ..limits
                }
            )
            .unwrap()
            .cost,
            4
        );
    }
}
