//! Command-line front end for the snowblower toolkit.
//!
//! Exit codes: 0 success, 1 input error, 2 verification failure.

pub mod render;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use snowblower_core::oracle::{gap_report, optimal_cost, Limits};
use snowblower_core::planner::{plan_for, Strategy};
use snowblower_core::report::{compare, SweepRow, SWEEP_HEADER};
use snowblower_core::shapes::{pixels_of, random_comb};
use snowblower_core::snowfield::{init_field, simulate};
use snowblower_core::{Error, Instance, Plan, ShapeDescriptor};
use std::ffi::OsString;
use std::fmt::{self, Write as _};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;

pub const MAX_SWEEP_LEN: u32 = 2000;
pub const MAX_SWEEP_CAP: u32 = 1000;
pub const MAX_COUNT: u32 = 100_000;
pub const MAX_H: u32 = 64;
pub const MAX_T: u32 = 1000;

#[derive(Parser, Debug)]
#[command(
    name = "snowblower",
    version,
    about = "Plan, simulate and compare snowblower routes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write output to PATH instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Closed-form costs next to simulated costs, with identity checks.
    Compare(ShapeArgs),
    /// Sweep lines or random combs, one table row per instance.
    #[command(subcommand)]
    Sweep(Sweep),
    /// Emit the plan for one strategy.
    Plan {
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long, default_value_t = Strategy::Improved, value_parser = Strategy::from_str)]
        strategy: Strategy,
    },
    /// Simulate a plan file, or a generated plan, and emit the trace.
    Simulate {
        #[command(flatten)]
        shape: ShapeArgs,
        #[command(flatten)]
        source: PlanSource,
    },
    /// Draw a trace as ascii frames or an svg document.
    Render {
        #[command(flatten)]
        shape: ShapeArgs,
        #[command(flatten)]
        source: PlanSource,
        #[arg(long, value_enum, default_value_t = Target::Ascii)]
        target: Target,
    },
    /// Optimal cost by exhaustive search on tiny instances.
    Oracle {
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long, default_value_t = Limits::default().max_pixels)]
        max_pixels: usize,
        #[arg(long, default_value_t = Limits::default().max_cap)]
        max_cap: u32,
        #[arg(long, default_value_t = Limits::default().max_states)]
        max_states: usize,
        #[arg(long, default_value_t = Limits::default().max_steps)]
        max_steps: u64,
        /// Also emit one optimal plan.
        #[arg(long)]
        witness: bool,
    },
}

#[derive(Args, Debug, Clone)]
pub struct ShapeArgs {
    /// Instance document (JSON).
    #[arg(long, value_name = "PATH")]
    pub instance: Option<PathBuf>,
    /// Line of L pixels.
    #[arg(long, value_name = "L")]
    pub line: Option<u32>,
    /// Comb with the given tooth lengths.
    #[arg(long, value_name = "T1,T2,...", value_delimiter = ',')]
    pub comb: Option<Vec<u32>>,
    /// Double comb, e.g. "3,2;2,0".
    #[arg(long, value_name = "UP;DOWN")]
    pub double: Option<String>,
    /// Depth cap D; overrides the cap of an instance document.
    #[arg(long, value_name = "D")]
    pub cap: Option<u32>,
}

#[derive(Args, Debug, Clone)]
pub struct PlanSource {
    /// Plan text file; when absent the plan is generated.
    #[arg(long, value_name = "PATH")]
    pub plan: Option<PathBuf>,
    #[arg(long, default_value_t = Strategy::Improved, value_parser = Strategy::from_str)]
    pub strategy: Strategy,
}

#[derive(Subcommand, Debug)]
pub enum Sweep {
    /// Every line length in LEN against every cap in CAP.
    Lines {
        #[arg(long, default_value = "1..12")]
        len: Span,
        #[arg(long, default_value = "2..12")]
        cap: Span,
    },
    /// Random combs: handle length uniform in [1, H_MAX], tooth lengths
    /// uniform in [1, T_MAX], cap uniform in CAP, all drawn from SEED.
    Combs {
        #[arg(long)]
        count: u32,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 6)]
        h_max: u32,
        #[arg(long, default_value_t = 15)]
        t_max: u32,
        #[arg(long, default_value = "2..6")]
        cap: Span,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Ascii,
    Svg,
}

/// Inclusive integer range written `A..B` or `A`; `A > B` is empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub lo: u32,
    pub hi: u32,
}

impl Span {
    pub fn is_empty(self) -> bool {
        self.lo > self.hi
    }

    fn check(self, name: &str, min: u32, max: u32) -> Result<(), Failure> {
        if !self.is_empty() && (self.lo < min || self.hi > max) {
            return Err(Failure::Input(format!(
                "{name} range {self} outside [{min}, {max}]"
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.lo, self.hi)
    }
}

impl FromStr for Span {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |t: &str| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| format!("bad range bound {t:?}"))
        };
        match s.split_once("..") {
            Some((lo, hi)) => Ok(Span {
                lo: num(lo)?,
                hi: num(hi)?,
            }),
            None => {
                let v = num(s)?;
                Ok(Span { lo: v, hi: v })
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    Input(String),
    Verify(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Input(_) => EXIT_INPUT,
            Failure::Verify(_) => EXIT_VERIFY,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Input(m) | Failure::Verify(m) => f.write_str(m),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Step { .. } | Error::InternalPlan(_) => Failure::Verify(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

/// Output of a command. `ok == false` still emits the output and exits 2.
pub struct Outcome {
    pub output: String,
    pub ok: bool,
}

impl Outcome {
    fn ok(output: String) -> Self {
        Outcome { output, ok: true }
    }
}

impl ShapeArgs {
    pub fn resolve(&self) -> Result<Instance, Failure> {
        let given = [
            self.instance.is_some(),
            self.line.is_some(),
            self.comb.is_some(),
            self.double.is_some(),
        ];
        if given.iter().filter(|&&g| g).count() != 1 {
            return Err(Failure::Input(
                "give exactly one of --instance, --line, --comb, --double".into(),
            ));
        }
        if let Some(path) = &self.instance {
            let mut instance = Instance::from_json(&read(path)?)?;
            if let Some(cap) = self.cap {
                instance.cap = cap;
            }
            instance.validate()?;
            return Ok(instance);
        }
        let cap = self
            .cap
            .ok_or_else(|| Failure::Input("--cap is required with an inline shape".into()))?;
        let shape = if let Some(len) = self.line {
            ShapeDescriptor::line(len)
        } else if let Some(teeth) = &self.comb {
            ShapeDescriptor::comb(teeth.clone())
        } else {
            parse_double(self.double.as_deref().unwrap_or_default())?
        };
        Ok(Instance::new(shape, cap)?)
    }
}

fn parse_double(text: &str) -> Result<ShapeDescriptor, Failure> {
    let (up, down) = text
        .split_once(';')
        .ok_or_else(|| Failure::Input(format!("double comb {text:?} needs UP;DOWN")))?;
    let list = |part: &str| -> Result<Vec<u32>, Failure> {
        if part.trim().is_empty() {
            return Ok(Vec::new());
        }
        part.split(',')
            .map(|t| {
                t.trim()
                    .parse()
                    .map_err(|_| Failure::Input(format!("bad length {t:?} in {text:?}")))
            })
            .collect()
    };
    Ok(ShapeDescriptor::double_comb(list(up)?, list(down)?))
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
}

fn load_plan(source: &PlanSource, instance: &Instance) -> Result<Plan, Failure> {
    match &source.plan {
        Some(path) => Ok(read(path)?.parse::<Plan>()?),
        None => Ok(plan_for(instance, source.strategy)?),
    }
}

fn unsupported(command: &str, format: Format) -> Failure {
    Failure::Input(format!("{command} does not support --format {format:?}").to_lowercase())
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serialization is infallible");
    s.push('\n');
    s
}

fn cmd_compare(shape: &ShapeArgs, format: Format) -> Result<Outcome, Failure> {
    let instance = shape.resolve()?;
    let report = compare(&instance)?;
    let output = match format {
        Format::Text => report.to_text(),
        Format::Json => to_json(&report),
        Format::Csv => format!("{SWEEP_HEADER}\n{}\n", SweepRow::from(&report).to_csv()),
    };
    Ok(Outcome {
        output,
        ok: report.all_ok(),
    })
}

fn sweep_rows(instances: &[Instance]) -> Result<Vec<SweepRow>, Failure> {
    let rows: Vec<Result<SweepRow, Error>> = instances
        .par_iter()
        .map(|i| compare(i).map(|r| SweepRow::from(&r)))
        .collect();
    rows.into_iter().map(|r| r.map_err(Failure::from)).collect()
}

fn cmd_sweep(sweep: &Sweep, format: Format) -> Result<Outcome, Failure> {
    let (comment, instances) = match *sweep {
        Sweep::Lines { len, cap } => {
            len.check("len", 1, MAX_SWEEP_LEN)?;
            cap.check("cap", 2, MAX_SWEEP_CAP)?;
            let mut instances = Vec::new();
            if !cap.is_empty() {
                for l in len.lo..=len.hi {
                    for d in cap.lo..=cap.hi {
                        instances.push(Instance::new(ShapeDescriptor::line(l), d)?);
                    }
                }
            }
            (None, instances)
        }
        Sweep::Combs {
            count,
            seed,
            h_max,
            t_max,
            cap,
        } => {
            if count > MAX_COUNT || !(1..=MAX_H).contains(&h_max) || !(1..=MAX_T).contains(&t_max) {
                return Err(Failure::Input(format!(
                    "need count <= {MAX_COUNT}, 1 <= h-max <= {MAX_H}, 1 <= t-max <= {MAX_T}"
                )));
            }
            cap.check("cap", 2, MAX_SWEEP_CAP)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut instances = Vec::new();
            if !cap.is_empty() {
                for _ in 0..count {
                    let comb = random_comb(&mut rng, h_max, t_max);
                    let d = rng.gen_range(cap.lo..=cap.hi);
                    instances.push(Instance::new(ShapeDescriptor::Comb(comb), d)?);
                }
            }
            let comment =
                format!("seed={seed} count={count} h_max={h_max} t_max={t_max} cap={cap}");
            (Some(comment), instances)
        }
    };
    let rows = sweep_rows(&instances)?;
    let ok = rows.iter().all(|r| r.ok);
    let output = match format {
        Format::Csv => {
            let mut out = String::new();
            if let Some(c) = &comment {
                let _ = writeln!(out, "# {c}");
            }
            let _ = writeln!(out, "{SWEEP_HEADER}");
            for row in &rows {
                let _ = writeln!(out, "{}", row.to_csv());
            }
            out
        }
        Format::Json => to_json(&serde_json::json!({ "header": comment, "rows": rows })),
        Format::Text => return Err(unsupported("sweep", format)),
    };
    Ok(Outcome { output, ok })
}

fn cmd_plan(shape: &ShapeArgs, strategy: Strategy, format: Format) -> Result<Outcome, Failure> {
    let instance = shape.resolve()?;
    let plan = plan_for(&instance, strategy)?;
    match format {
        Format::Text => Ok(Outcome::ok(plan.to_text())),
        Format::Json => Ok(Outcome::ok(to_json(&serde_json::json!({
            "instance": instance,
            "strategy": strategy,
            "plan": plan,
        })))),
        Format::Csv => Err(unsupported("plan", format)),
    }
}

fn cmd_simulate(
    shape: &ShapeArgs,
    source: &PlanSource,
    format: Format,
) -> Result<Outcome, Failure> {
    let instance = shape.resolve()?;
    let plan = load_plan(source, &instance)?;
    let field = init_field(&instance.shape, instance.cap)?;
    let trace = simulate(&field, &plan)?;
    match format {
        Format::Text => Ok(Outcome::ok(trace.to_text())),
        Format::Json => Ok(Outcome::ok(to_json(&trace))),
        Format::Csv => Err(unsupported("simulate", format)),
    }
}

fn cmd_render(shape: &ShapeArgs, source: &PlanSource, target: Target) -> Result<Outcome, Failure> {
    let instance = shape.resolve()?;
    let plan = load_plan(source, &instance)?;
    let geometry = pixels_of(&instance.shape)?;
    let field = init_field(&instance.shape, instance.cap)?;
    let trace = simulate(&field, &plan)?;
    Ok(Outcome::ok(match target {
        Target::Ascii => render::ascii(&geometry, &trace),
        Target::Svg => render::svg(&geometry, &trace),
    }))
}

fn cmd_oracle(
    shape: &ShapeArgs,
    limits: &Limits,
    witness: bool,
    format: Format,
) -> Result<Outcome, Failure> {
    let instance = shape.resolve()?;
    let gap = gap_report(&instance.shape, instance.cap, limits)?;
    let plan = if witness {
        Some(optimal_cost(&instance.shape, instance.cap, limits)?.witness)
    } else {
        None
    };
    let ok = gap.is_ordered();
    let output = match format {
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "instance: {} D={}", instance.shape, instance.cap);
            let _ = writeln!(out, "optimal {}", gap.optimal);
            let ratio = |r: Option<f64>| r.map_or_else(|| "-".to_string(), |r| format!("{r:.4}"));
            let _ = writeln!(
                out,
                "improved {} ratio {}",
                gap.improved,
                ratio(gap.improved_ratio)
            );
            if let Some(b) = gap.baseline {
                let _ = writeln!(out, "baseline {b} ratio {}", ratio(gap.baseline_ratio));
            }
            let _ = writeln!(out, "ordered {ok}");
            if let Some(plan) = &plan {
                out.push_str(&plan.to_text());
            }
            out
        }
        Format::Json => to_json(&serde_json::json!({
            "instance": instance,
            "gap": gap,
            "witness": plan,
        })),
        Format::Csv => return Err(unsupported("oracle", format)),
    };
    Ok(Outcome { output, ok })
}

pub fn execute(cli: &Cli) -> Result<Outcome, Failure> {
    let fmt = |default| cli.format.unwrap_or(default);
    match &cli.command {
        Command::Compare(shape) => cmd_compare(shape, fmt(Format::Text)),
        Command::Sweep(sweep) => cmd_sweep(sweep, fmt(Format::Csv)),
        Command::Plan { shape, strategy } => cmd_plan(shape, *strategy, fmt(Format::Text)),
        Command::Simulate { shape, source } => cmd_simulate(shape, source, fmt(Format::Text)),
        Command::Render {
            shape,
            source,
            target,
        } => cmd_render(shape, source, *target),
        Command::Oracle {
            shape,
            max_pixels,
            max_cap,
            max_states,
            max_steps,
            witness,
        } => {
            let limits = Limits {
                max_pixels: *max_pixels,
                max_cap: *max_cap,
                max_states: *max_states,
                max_steps: *max_steps,
            };
            cmd_oracle(shape, &limits, *witness, fmt(Format::Text))
        }
    }
}

/// Parses `args`, runs the command and writes its output. Returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let outcome = match execute(&cli) {
        Ok(outcome) => outcome,
        Err(failure) => {
            let _ = writeln!(stderr, "error: {failure}");
            return failure.code();
        }
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &outcome.output)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => stdout
            .write_all(outcome.output.as_bytes())
            .map_err(|e| format!("cannot write output: {e}")),
    };
    if let Err(message) = written {
        let _ = writeln!(stderr, "error: {message}");
        return EXIT_INPUT;
    }
    if outcome.ok {
        EXIT_OK
    } else {
        let _ = writeln!(stderr, "error: verification failed");
        EXIT_VERIFY
    }
}
