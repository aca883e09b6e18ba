//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any fails. Expected values come from oracles written
//! here, not from the closed-form module.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use snowblower_core::oracle::{optimal_cost, Limits};
use snowblower_core::planner::{plan_checked, plan_for, Strategy};
use snowblower_core::shapes::{pixels_of, random_comb};
use snowblower_core::snowfield::{init_field, simulate, Simulation};
use snowblower_core::{
    Error, Instance, Label, Pixel, Plan, ShapeDescriptor, Step, StepError, Trace,
};
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---------------------------------------------------------------------------
// Independent oracles

/// Line cost from the closed forms as written, cross-checked against a
/// per-pass sum (a pass to pixel index k costs 2(k-1)).
fn line_oracle(len: u64, d: u64) -> (u64, u64) {
    let (r, q) = (len % d, len / d);
    let pass = |k: u64| 2 * (k - 1);
    let improved_sum: u64 = (0..=q)
        .map(|j| r + j * d)
        .filter(|&k| k >= 1)
        .map(pass)
        .sum();
    let baseline_sum: u64 =
        (1..=q).map(|j| pass(j * d)).sum::<u64>() + if r > 0 { pass(len) } else { 0 };
    let (improved, baseline) = if r > 0 {
        (
            (q + 1) * (2 * r + q * d - 2),
            q * ((q + 1) * d - 2) + 2 * (r + q * d - 1),
        )
    } else {
        (q * ((q + 1) * d - 2), q * ((q + 1) * d - 2))
    };
    assert_eq!(
        (improved, baseline),
        (improved_sum, baseline_sum),
        "line oracle L={len} D={d}"
    );
    (improved, baseline)
}

fn tooth_rq(t: u64, d: u64) -> (u64, u64) {
    let r = if t.is_multiple_of(d) { d } else { t % d };
    (r, (t - r) / d)
}

struct CombOracle {
    pass_improved: u64,
    pass_baseline: u64,
    diff: u64,
    net_lb: u64,
    rq: Vec<(u64, u64)>,
}

fn comb_oracle(teeth: &[u32], d: u64) -> CombOracle {
    let mut o = CombOracle {
        pass_improved: 0,
        pass_baseline: 0,
        diff: 0,
        net_lb: 0,
        rq: Vec::new(),
    };
    for (i, &t) in teeth.iter().enumerate() {
        let (r, q) = tooth_rq(u64::from(t), d);
        let i = i as u64;
        for j in 1..=q {
            o.pass_improved += 2 * (r + j * d - 1 + i);
            o.pass_baseline += 2 * (j * d - 1 + i);
        }
        o.diff += 2 * q * r;
        o.net_lb += 2 * q * (d - r);
        o.rq.push((r, q));
    }
    o
}

/// Replays a trace on a dense board built from the cell geometry and checks
/// adjacency, throw legality, the depth cap and conservation at every step.
fn check_mechanics(instance: &Instance, trace: &Trace) -> Result<(), String> {
    let cap = instance.cap;
    let geometry = pixels_of(&instance.shape).map_err(|e| e.to_string())?;
    let min_y = geometry.pixels.iter().map(|p| p.y).min().unwrap_or(0);
    let max_y = geometry.pixels.iter().map(|p| p.y).max().unwrap_or(0);
    let width = geometry.pixels.iter().map(|p| p.x).max().unwrap_or(0) as usize + 1;
    let height = (max_y - min_y + 1) as usize;
    let slot = |p: Pixel| -> Option<usize> {
        (p.x >= 0 && (p.x as usize) < width && p.y >= min_y && p.y <= max_y)
            .then(|| (p.y - min_y) as usize * width + p.x as usize)
    };
    let mut inside = vec![false; width * height];
    let mut depth = vec![0u32; width * height];
    for &p in &geometry.pixels {
        let s = slot(p).unwrap();
        inside[s] = true;
        depth[s] = u32::from(p != Pixel::new(0, 0));
    }
    let initial = geometry.pixels.len() as u64;
    let mut remaining = initial - 1;
    let mut ejected = 1u64;
    let mut at = Pixel::new(0, 0);
    let ctx = |i: usize| format!("{} D={cap} step {i}", instance.shape);

    for (i, r) in trace.records.iter().enumerate() {
        let p = r.position;
        ensure((p.x - at.x).abs() + (p.y - at.y).abs() == 1, || {
            format!("{}: jump {at} -> {p}", ctx(i))
        })?;
        let s = slot(p)
            .filter(|&s| inside[s])
            .ok_or_else(|| format!("{}: left the cell", ctx(i)))?;
        ensure(depth[s] == r.moved, || {
            format!("{}: moved {} but pile {}", ctx(i), r.moved, depth[s])
        })?;
        if r.moved > 0 {
            let t = r
                .throw_to
                .ok_or_else(|| format!("{}: snow without throw", ctx(i)))?;
            ensure((t.x - p.x).abs() + (t.y - p.y).abs() == 1, || {
                format!("{}: far throw", ctx(i))
            })?;
            match slot(t).filter(|&ts| inside[ts]) {
                Some(ts) => {
                    depth[ts] += r.moved;
                    ensure(depth[ts] <= cap, || {
                        format!("{}: depth {} at {t}", ctx(i), depth[ts])
                    })?;
                    ensure(r.ejected == 0, || format!("{}: phantom ejection", ctx(i)))?;
                }
                None => {
                    ensure(p == Pixel::new(0, 0) && t == Pixel::new(-1, 0), || {
                        format!("{}: ejection {p} -> {t}", ctx(i))
                    })?;
                    ensure(r.ejected == r.moved, || {
                        format!("{}: ejected mismatch", ctx(i))
                    })?;
                    remaining -= u64::from(r.moved);
                    ejected += u64::from(r.moved);
                }
            }
            depth[s] = 0;
        }
        let sum: u64 = if i % 64 == 0 || i + 1 == trace.records.len() {
            depth.iter().map(|&d| u64::from(d)).sum()
        } else {
            remaining
        };
        ensure(sum == remaining && remaining + ejected == initial, || {
            format!("{}: conservation {sum} + {ejected} != {initial}", ctx(i))
        })?;
        ensure(r.max_depth <= cap, || {
            format!("{}: recorded max depth {}", ctx(i), r.max_depth)
        })?;
        at = p;
    }
    let s = &trace.summary;
    ensure(
        s.initial == initial
            && s.ejected == ejected
            && s.remaining == remaining
            && s.max_depth <= cap,
        || format!("{} D={cap}: summary disagrees with replay", instance.shape),
    )
}

/// Highest tooth pixel index (1-based) entered during brush segments.
fn brush_reach(trace: &Trace, teeth: usize) -> Vec<u64> {
    let mut reach = vec![0; teeth];
    for r in &trace.records {
        let brush = matches!(trace.summary.segments[r.segment].label, Label::Brush { .. });
        let p = r.position;
        if brush && p.y >= 0 && (p.x as usize) < teeth {
            reach[p.x as usize] = reach[p.x as usize].max(p.y as u64 + 1);
        }
    }
    reach
}

fn pass_steps(trace: &Trace) -> u64 {
    trace
        .summary
        .segments
        .iter()
        .filter(|s| matches!(s.label, Label::Pass { .. }))
        .map(|s| s.steps as u64)
        .sum()
}

// ---------------------------------------------------------------------------
// Shared evaluation

#[derive(Default)]
struct Tally {
    traces: u64,
    steps: u64,
    mechanics: Vec<String>,
}

impl Tally {
    fn absorb(&mut self, other: Tally) {
        self.traces += other.traces;
        self.steps += other.steps;
        self.mechanics.extend(other.mechanics);
    }

    fn record(&mut self, instance: &Instance, trace: &Trace) {
        self.traces += 1;
        self.steps += trace.records.len() as u64;
        if let Err(e) = check_mechanics(instance, trace) {
            self.mechanics.push(e);
        }
    }
}

struct CombResult {
    tally: Tally,
    pass: Vec<String>,
    gap: Vec<String>,
    locality: Vec<String>,
}

fn evaluate_comb(teeth: &[u32], d: u32) -> CombResult {
    let mut out = CombResult {
        tally: Tally::default(),
        pass: Vec::new(),
        gap: Vec::new(),
        locality: Vec::new(),
    };
    let shape = ShapeDescriptor::comb(teeth.to_vec());
    let name = format!("{shape} D={d}");
    let instance = Instance::new(shape, d).unwrap();
    let (imp, base) = match (
        plan_checked(&instance, Strategy::Improved),
        plan_checked(&instance, Strategy::Baseline),
    ) {
        (Ok((_, a)), Ok((_, b))) => (a, b),
        (a, b) => {
            out.tally
                .mechanics
                .push(format!("{name}: {:?} {:?}", a.err(), b.err()));
            return out;
        }
    };
    out.tally.record(&instance, &imp);
    out.tally.record(&instance, &base);

    let o = comb_oracle(teeth, u64::from(d));
    let (pi, pb) = (pass_steps(&imp), pass_steps(&base));
    if pi != o.pass_improved || pb != o.pass_baseline || pi - pb != o.diff {
        out.pass.push(format!(
            "{name}: passes {pi}/{pb} expected {}/{} diff {}",
            o.pass_improved, o.pass_baseline, o.diff
        ));
    }

    let (ti, tb) = (imp.records.len() as u64, base.records.len() as u64);
    if ti > tb || tb - ti < o.net_lb {
        out.gap.push(format!(
            "{name}: improved {ti} baseline {tb} net bound {}",
            o.net_lb
        ));
    }

    let (ri, rb) = (
        brush_reach(&imp, teeth.len()),
        brush_reach(&base, teeth.len()),
    );
    for (i, &(r, q)) in o.rq.iter().enumerate() {
        if ri[i] > r {
            out.locality.push(format!(
                "{name}: improved brush reached {} > R={r} on tooth {i}",
                ri[i]
            ));
        }
        if q >= 1 && rb[i] != u64::from(teeth[i]) {
            out.locality.push(format!(
                "{name}: baseline brush reached {} of {} on tooth {i}",
                rb[i], teeth[i]
            ));
        }
    }
    out
}

fn evaluate_combs(cases: &[(Vec<u32>, u32)]) -> CombResult {
    cases
        .par_iter()
        .map(|(teeth, d)| evaluate_comb(teeth, *d))
        .reduce(
            || CombResult {
                tally: Tally::default(),
                pass: Vec::new(),
                gap: Vec::new(),
                locality: Vec::new(),
            },
            |mut a, b| {
                a.tally.absorb(b.tally);
                a.pass.extend(b.pass);
                a.gap.extend(b.gap);
                a.locality.extend(b.locality);
                a
            },
        )
}

fn exhaustive_combs(h_max: usize, t_max: u32, caps: &[u32]) -> Vec<(Vec<u32>, u32)> {
    let mut cases = Vec::new();
    for h in 1..=h_max {
        let mut teeth = vec![1u32; h];
        loop {
            for &d in caps {
                cases.push((teeth.clone(), d));
            }
            let Some(i) = teeth.iter().position(|&t| t < t_max) else {
                break;
            };
            teeth[i] += 1;
            teeth[..i].iter_mut().for_each(|t| *t = 1);
        }
    }
    cases
}

fn random_combs(
    seed: u64,
    count: usize,
    h_max: u32,
    t_max: u32,
    caps: (u32, u32),
) -> Vec<(Vec<u32>, u32)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let comb = random_comb(&mut rng, h_max, t_max);
            (comb.teeth, rng.gen_range(caps.0..=caps.1))
        })
        .collect()
}

fn first(errors: &[String]) -> String {
    format!(
        "{} violations, first: {}",
        errors.len(),
        errors.first().map_or("", String::as_str)
    )
}

// ---------------------------------------------------------------------------
// Criteria

fn worked_line(tally: &mut Tally) -> Outcome {
    let instance = Instance::new(ShapeDescriptor::line(10), 4).unwrap();
    let (_, imp) = plan_checked(&instance, Strategy::Improved).map_err(|e| e.to_string())?;
    let (_, base) = plan_checked(&instance, Strategy::Baseline).map_err(|e| e.to_string())?;
    tally.record(&instance, &imp);
    tally.record(&instance, &base);
    let (i, b) = (imp.records.len() as u64, base.records.len() as u64);
    let (r, q) = (10 % 4, 10 / 4);
    ensure(line_oracle(10, 4) == (30, 38), || {
        "line oracle disagrees with 30/38".into()
    })?;
    ensure(
        i == 30 && b == 38 && b - i == 8 && 8 == 2 * q * (4 - r),
        || format!("improved {i} baseline {b}"),
    )?;
    Ok(format!("improved {i}, baseline {b}, savings {}", b - i))
}

fn line_sweep(tally: &mut Tally) -> Outcome {
    let cases: Vec<(u32, u32)> = (1..=200)
        .flat_map(|l| (2..=12).map(move |d| (l, d)))
        .collect();
    let results: Vec<(Tally, Vec<String>)> = cases
        .par_iter()
        .map(|&(l, d)| {
            let mut t = Tally::default();
            let mut errors = Vec::new();
            let instance = Instance::new(ShapeDescriptor::line(l), d).unwrap();
            match (
                plan_checked(&instance, Strategy::Improved),
                plan_checked(&instance, Strategy::Baseline),
            ) {
                (Ok((_, imp)), Ok((_, base))) => {
                    t.record(&instance, &imp);
                    t.record(&instance, &base);
                    let (ci, cb) = line_oracle(u64::from(l), u64::from(d));
                    let (si, sb) = (imp.records.len() as u64, base.records.len() as u64);
                    let (r, q) = (u64::from(l % d), u64::from(l / d));
                    let savings = if r > 0 { 2 * q * (u64::from(d) - r) } else { 0 };
                    if si != ci || sb != cb || sb.checked_sub(si) != Some(savings) {
                        errors.push(format!("L={l} D={d}: sim {si}/{sb} expected {ci}/{cb}"));
                    }
                    for trace in [&imp, &base] {
                        if trace.summary.ejected != u64::from(l) {
                            errors.push(format!("L={l} D={d}: ejected {}", trace.summary.ejected));
                        }
                    }
                }
                (a, b) => errors.push(format!("L={l} D={d}: {:?} {:?}", a.err(), b.err())),
            }
            (t, errors)
        })
        .collect();
    let mut errors = Vec::new();
    for (t, e) in results {
        tally.absorb(t);
        errors.extend(e);
    }
    ensure(errors.is_empty(), || first(&errors))?;
    Ok(format!("{} instances exact", cases.len()))
}

fn comb_passes(exhaustive: &CombResult, random: &CombResult, n: (usize, usize)) -> Outcome {
    let errors: Vec<String> = exhaustive
        .pass
        .iter()
        .chain(&random.pass)
        .cloned()
        .collect();
    ensure(errors.is_empty(), || first(&errors))?;
    Ok(format!("{} exhaustive + {} random combs exact", n.0, n.1))
}

fn comb_bound(result: &CombResult, n: usize) -> Outcome {
    ensure(result.gap.is_empty(), || first(&result.gap))?;
    Ok(format!("{n} random combs, zero violations"))
}

fn brush_locality(sets: &[&CombResult]) -> Outcome {
    let errors: Vec<String> = sets
        .iter()
        .flat_map(|s| s.locality.iter().cloned())
        .collect();
    ensure(errors.is_empty(), || first(&errors))?;
    Ok(format!(
        "{} comb instances",
        sets.iter().map(|s| s.tally.traces / 2).sum::<u64>()
    ))
}

fn expect_failure(
    instance: &Instance,
    plan: &Plan,
    want: fn(&StepError) -> bool,
    kinds: &mut [u32; 3],
) -> Result<(), String> {
    let field = init_field(&instance.shape, instance.cap).map_err(|e| e.to_string())?;
    let mut sim = Simulation::new(field);
    let err = sim
        .run(plan)
        .err()
        .ok_or_else(|| format!("{}: corrupted plan succeeded", instance.shape))?;
    let Error::Step { source, .. } = &err else {
        return Err(format!("unexpected error {err}"));
    };
    match source {
        StepError::DepthViolation { .. } => kinds[0] += 1,
        StepError::IllegalEjection { .. } => kinds[1] += 1,
        StepError::MissingThrow { .. } => kinds[2] += 1,
        _ => {}
    }
    ensure(want(source), || format!("{}: got {source}", instance.shape))?;
    let f = sim.field();
    ensure(f.remaining() + f.ejected() == f.initial_total(), || {
        "prefix not conserved".into()
    })?;
    ensure(f.depths().iter().all(|&d| d <= f.cap()), || {
        "prefix over cap".into()
    })?;
    ensure(f.max_depth() <= f.cap(), || {
        "prefix max depth over cap".into()
    })?;
    let prefix = Plan {
        segments: vec![snowblower_core::Segment {
            label: Label::Witness,
            steps: plan.steps().take(sim.records().len()).copied().collect(),
        }],
    };
    let trace = simulate(&init_field(&instance.shape, instance.cap).unwrap(), &prefix)
        .map_err(|e| format!("prefix replay failed: {e}"))?;
    check_mechanics(instance, &trace)
}

fn single(steps: Vec<Step>) -> Plan {
    Plan {
        segments: vec![snowblower_core::Segment {
            label: Label::Witness,
            steps,
        }],
    }
}

fn mechanics_safety(tally: &Tally) -> Outcome {
    ensure(tally.mechanics.is_empty(), || first(&tally.mechanics))?;
    let p = Pixel::new;
    let mut kinds = [0u32; 3];
    let depth = |e: &StepError| matches!(e, StepError::DepthViolation { .. });
    let eject = |e: &StepError| matches!(e, StepError::IllegalEjection { .. });
    let missing = |e: &StepError| matches!(e, StepError::MissingThrow { .. });
    let line = |l, d| Instance::new(ShapeDescriptor::line(l), d).unwrap();

    expect_failure(
        &line(4, 2),
        &single(vec![
            Step::new(p(1, 0), Some(p(2, 0))),
            Step::new(p(2, 0), Some(p(3, 0))),
        ]),
        depth,
        &mut kinds,
    )?;
    expect_failure(
        &line(3, 2),
        &single(vec![Step::new(p(1, 0), Some(p(1, -1)))]),
        eject,
        &mut kinds,
    )?;
    expect_failure(
        &line(3, 2),
        &single(vec![Step::new(p(1, 0), Some(p(0, 0))), Step::bare(p(2, 0))]),
        missing,
        &mut kinds,
    )?;
    let comb = Instance::new(ShapeDescriptor::comb([3, 2]), 2).unwrap();
    expect_failure(
        &comb,
        &single(vec![
            Step::new(p(0, 1), Some(p(0, 0))),
            Step::new(p(0, 0), Some(p(0, -1))),
        ]),
        eject,
        &mut kinds,
    )?;

    // Every single-throw redirection and every dropped throw of real plans.
    let mut mutants = 0;
    for instance in [
        line(10, 4),
        line(7, 3),
        comb.clone(),
        Instance::new(ShapeDescriptor::comb([5, 6, 9]), 4).unwrap(),
    ] {
        for strategy in [Strategy::Improved, Strategy::Baseline] {
            let plan = plan_for(&instance, strategy).map_err(|e| e.to_string())?;
            let steps: Vec<Step> = plan.steps().copied().collect();
            for (i, step) in steps.iter().enumerate() {
                let Some(orig) = step.throw_to else { continue };
                let alternatives = step.move_to.neighbours().into_iter().filter(|&t| t != orig);
                for alt in alternatives.map(Some).chain([None]) {
                    let mut corrupted = steps.clone();
                    corrupted[i].throw_to = alt;
                    let mutant = single(corrupted);
                    let field = init_field(&instance.shape, instance.cap).unwrap();
                    let mut sim = Simulation::new(field);
                    mutants += 1;
                    match sim.run(&mutant) {
                        Ok(()) => {
                            let trace = sim.into_trace();
                            check_mechanics(&instance, &trace)?;
                        }
                        Err(_) => expect_failure(&instance, &mutant, |_| true, &mut kinds)?,
                    }
                }
            }
        }
    }
    ensure(kinds.iter().all(|&k| k > 0), || {
        format!("error kinds seen {kinds:?}")
    })?;
    Ok(format!(
        "{} traces / {} steps replayed; {mutants} corrupted plans, failures depth={} eject={} missing={}",
        tally.traces, tally.steps, kinds[0], kinds[1], kinds[2]
    ))
}

fn oracle_bounds(tally: &mut Tally) -> Outcome {
    let limits = Limits::default();
    let mut rows = Vec::new();
    for d in [2u32, 3] {
        for l in 1..=6u32 {
            let opt = optimal_cost(&ShapeDescriptor::line(l), d, &limits)
                .map_err(|e| format!("L={l} D={d}: {e}"))?;
            let (improved, _) = line_oracle(u64::from(l), u64::from(d));
            ensure(opt.cost <= improved, || {
                format!("L={l} D={d}: optimum {} > {improved}", opt.cost)
            })?;
            let instance = Instance::new(ShapeDescriptor::line(l), d).unwrap();
            let trace = simulate(&init_field(&instance.shape, d).unwrap(), &opt.witness)
                .map_err(|e| format!("L={l} D={d}: witness fails: {e}"))?;
            ensure(
                trace.summary.remaining == 0 && trace.records.len() as u64 == opt.cost,
                || format!("L={l} D={d}: witness does not clear in {} steps", opt.cost),
            )?;
            tally.record(&instance, &trace);
            if l == 1 {
                ensure(opt.cost == 0, || {
                    format!("optimal_cost(1,{d}) = {}", opt.cost)
                })?;
            }
            if (l, d) == (2, 2) {
                ensure(opt.cost == 2, || {
                    format!("optimal_cost(2,2) = {}", opt.cost)
                })?;
            }
            rows.push(format!("{}/{}", opt.cost, improved));
        }
    }
    Ok(format!(
        "optimum/improved D=2: {} D=3: {}",
        rows[..6].join(" "),
        rows[6..].join(" ")
    ))
}

fn cli(args: &[&str]) -> (i32, Vec<u8>) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = snowblower_cli::run(
        std::iter::once("snowblower").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    (code, out)
}

fn determinism() -> Outcome {
    let commands: [&[&str]; 6] = [
        &["compare", "--line", "10", "--cap", "4"],
        &[
            "compare", "--comb", "5,6,9", "--cap", "4", "--format", "json",
        ],
        &[
            "compare", "--double", "3,2;2,0", "--cap", "2", "--format", "csv",
        ],
        &["sweep", "lines", "--len", "1..40", "--cap", "2..8"],
        &["sweep", "combs", "--count", "300", "--seed", "7"],
        &[
            "sweep", "combs", "--count", "100", "--seed", "11", "--format", "json",
        ],
    ];
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    for args in commands {
        let a = cli(args);
        let b = cli(args);
        let c = single.install(|| cli(args));
        ensure(a.0 == 0 && !a.1.is_empty(), || {
            format!("{args:?} exit {}", a.0)
        })?;
        ensure(a == b && a == c, || {
            format!("{args:?} differs between runs")
        })?;
    }
    let other = cli(&["sweep", "combs", "--count", "300", "--seed", "8"]);
    ensure(other != cli(commands[4]), || "seed has no effect".into())?;
    Ok(format!(
        "{} commands byte-identical across 3 runs",
        commands.len()
    ))
}

fn main() {
    let started = Instant::now();
    let mut tally = Tally::default();
    let mut lines = Vec::new();
    let mut failed = 0;
    let mut report =
        |n: u32, name: &str, limit: Option<Duration>, run: &mut dyn FnMut() -> Outcome| {
            let t = Instant::now();
            let outcome = run();
            let elapsed = t.elapsed();
            let outcome = match (outcome, limit) {
                (Ok(_), Some(limit)) if elapsed > limit => {
                    Err(format!("took {elapsed:.2?}, limit {limit:?}"))
                }
                (o, _) => o,
            };
            let line = match &outcome {
                Ok(detail) => format!("criterion {n} {name}: PASS ({detail}; {elapsed:.2?})"),
                Err(e) => {
                    failed += 1;
                    format!("criterion {n} {name}: FAIL ({e}; {elapsed:.2?})")
                }
            };
            println!("{line}");
            lines.push(line);
        };

    let secs = |s| Some(Duration::from_secs(s));
    report(1, "worked line L=10 D=4", secs(1), &mut || {
        worked_line(&mut tally)
    });
    report(2, "line identity sweep", secs(10), &mut || {
        line_sweep(&mut tally)
    });

    let exhaustive_cases = exhaustive_combs(4, 10, &[2, 3, 4]);
    let random_cases = random_combs(0x5eed_0003, 1000, 6, 15, (2, 6));
    let bound_cases = random_combs(0x5eed_0004, 500, 6, 15, (2, 6));
    let mut exhaustive = None;
    let mut random = None;
    report(3, "comb pass equality", secs(60), &mut || {
        let e = evaluate_combs(&exhaustive_cases);
        let r = evaluate_combs(&random_cases);
        let outcome = comb_passes(&e, &r, (exhaustive_cases.len(), random_cases.len()));
        exhaustive = Some(e);
        random = Some(r);
        outcome
    });
    let mut bound = None;
    report(4, "comb end-to-end bound", None, &mut || {
        let b = evaluate_combs(&bound_cases);
        let outcome = comb_bound(&b, bound_cases.len());
        bound = Some(b);
        outcome
    });
    let (exhaustive, random, bound) = (exhaustive.unwrap(), random.unwrap(), bound.unwrap());
    report(5, "brush locality", None, &mut || {
        brush_locality(&[&exhaustive, &random, &bound])
    });
    report(7, "oracle lower bounds", secs(60), &mut || {
        oracle_bounds(&mut tally)
    });
    for set in [exhaustive, random, bound] {
        tally.absorb(set.tally);
    }
    report(6, "mechanics safety", None, &mut || {
        mechanics_safety(&tally)
    });
    report(8, "determinism", None, &mut || determinism());

    println!(
        "acceptance: {}/{} criteria passed in {:.2?}",
        lines.len() - failed,
        lines.len(),
        started.elapsed()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
