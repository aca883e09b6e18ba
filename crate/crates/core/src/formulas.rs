//! Closed-form step counts for the line and comb strategies.
//!
//! All arithmetic is exact integer arithmetic.

use crate::error::{Error, Result};
use crate::shapes::{line_rq, tooth_rq, validate_cap, Rq};
use serde::Serialize;

/// Improved line strategy: remainder first, then `Q` full passes.
///
/// `(Q+1)(2R+QD-2)` when `R > 0`, `Q((Q+1)D-2)` when the remainder vanishes.
pub fn cost_line_improved(len: u32, cap: u32) -> Result<u64> {
    let Rq { r, q } = line_rq(len, cap)?;
    let (r, q, d) = (u64::from(r), u64::from(q), u64::from(cap));
    Ok(if r > 0 {
        (q + 1) * (2 * r + q * d - 2)
    } else {
        q * ((q + 1) * d - 2)
    })
}

/// Baseline line strategy: `Q` full passes, then one pass over the whole
/// line for the remainder.
pub fn cost_line_baseline(len: u32, cap: u32) -> Result<u64> {
    let Rq { r, q } = line_rq(len, cap)?;
    let (r, q, d) = (u64::from(r), u64::from(q), u64::from(cap));
    let passes = q * ((q + 1) * d - 2);
    Ok(if r > 0 {
        passes + 2 * (r + q * d - 1)
    } else {
        passes
    })
}

/// `2Q(D-R)`, or zero when `R = 0`.
pub fn line_savings(len: u32, cap: u32) -> Result<u64> {
    let Rq { r, q } = line_rq(len, cap)?;
    Ok(if r > 0 {
        2 * u64::from(q) * u64::from(cap - r)
    } else {
        0
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LineCostReport {
    pub rq: Rq,
    pub cost_improved: u64,
    pub cost_baseline: u64,
    pub savings: u64,
}

pub fn line_report(len: u32, cap: u32) -> Result<LineCostReport> {
    Ok(LineCostReport {
        rq: line_rq(len, cap)?,
        cost_improved: cost_line_improved(len, cap)?,
        cost_baseline: cost_line_baseline(len, cap)?,
        savings: line_savings(len, cap)?,
    })
}

fn comb_rqs(teeth: &[u32], cap: u32) -> Result<Vec<Rq>> {
    validate_cap(cap)?;
    if teeth.is_empty() {
        return Err(Error::InvalidDescriptor(
            "comb needs at least one tooth".into(),
        ));
    }
    teeth
        .iter()
        .map(|&t| {
            tooth_rq(t, cap).map_err(|_| {
                Error::InvalidDescriptor(format!("tooth length {t} must be at least 1"))
            })
        })
        .collect()
}

/// Sum over teeth `i` and passes `j = 1..=Q_i` of `2(offset_i + jD - 1 + i)`.
fn pass_sum(rqs: &[Rq], cap: u32, offset: impl Fn(&Rq) -> u64) -> u64 {
    let d = u64::from(cap);
    rqs.iter()
        .enumerate()
        .map(|(i, rq)| {
            (1..=u64::from(rq.q))
                .map(|j| 2 * (offset(rq) + j * d - 1 + i as u64))
                .sum::<u64>()
        })
        .sum()
}

/// Full passes that start past each tooth's first `R_i` pixels.
pub fn comb_pass_cost_improved(teeth: &[u32], cap: u32) -> Result<u64> {
    let rqs = comb_rqs(teeth, cap)?;
    Ok(pass_sum(&rqs, cap, |rq| u64::from(rq.r)))
}

/// Full passes that start at each tooth's handle pixel.
pub fn comb_pass_cost_baseline(teeth: &[u32], cap: u32) -> Result<u64> {
    let rqs = comb_rqs(teeth, cap)?;
    Ok(pass_sum(&rqs, cap, |_| 0))
}

/// `2 * sum(Q_i * R_i)`: extra pass steps the improved strategy pays.
pub fn comb_pass_diff(teeth: &[u32], cap: u32) -> Result<u64> {
    let rqs = comb_rqs(teeth, cap)?;
    Ok(2 * rqs
        .iter()
        .map(|rq| u64::from(rq.q) * u64::from(rq.r))
        .sum::<u64>())
}

/// `2 * sum(Q_i * D)`: lower bound on brush steps saved.
pub fn comb_brush_saving_lb(teeth: &[u32], cap: u32) -> Result<u64> {
    let rqs = comb_rqs(teeth, cap)?;
    Ok(2 * rqs
        .iter()
        .map(|rq| u64::from(rq.q) * u64::from(cap))
        .sum::<u64>())
}

/// `2 * sum(Q_i * (D - R_i))`: lower bound on total steps saved.
pub fn comb_net_saving_lb(teeth: &[u32], cap: u32) -> Result<u64> {
    let rqs = comb_rqs(teeth, cap)?;
    Ok(2 * rqs
        .iter()
        .map(|rq| u64::from(rq.q) * u64::from(cap - rq.r))
        .sum::<u64>())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CombCostReport {
    pub teeth: Vec<Rq>,
    pub pass_improved: u64,
    pub pass_baseline: u64,
    pub pass_diff: u64,
    pub brush_saving_lb: u64,
    pub net_saving_lb: u64,
}

impl CombCostReport {
    pub fn total_q(&self) -> u64 {
        self.teeth.iter().map(|rq| u64::from(rq.q)).sum()
    }

    pub fn total_r(&self) -> u64 {
        self.teeth.iter().map(|rq| u64::from(rq.r)).sum()
    }
}

pub fn comb_report(teeth: &[u32], cap: u32) -> Result<CombCostReport> {
    Ok(CombCostReport {
        teeth: comb_rqs(teeth, cap)?,
        pass_improved: comb_pass_cost_improved(teeth, cap)?,
        pass_baseline: comb_pass_cost_baseline(teeth, cap)?,
        pass_diff: comb_pass_diff(teeth, cap)?,
        brush_saving_lb: comb_brush_saving_lb(teeth, cap)?,
        net_saving_lb: comb_net_saving_lb(teeth, cap)?,
    })
}
