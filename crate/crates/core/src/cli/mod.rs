//! The `rieszflow` command line: one subcommand per experiment, CSV or JSON
//! output with 17 significant digits, exit code 1 for usage errors and 2 for
//! runtime failures.

mod output;

pub use output::{Cell, Format, Table};

use crate::analytic_flows::{dirac_line_flow, FlowCurve, FlowState};
use crate::equilibrium::{c_tau, equilibrium_unit};
use crate::error::{Error, Result};
use crate::flow1d::{euler_flow, interaction_flow_1d, Flow1DConfig};
use crate::halftone::{export_svg, load_pgm, run_halftone, Canvas, HalftoneConfig};
use crate::kernels::{discrepancy, Kernel};
use crate::measures::{DiscreteMeasure, QuantileGrid};
use crate::mms::{limit_curve, run_mms};
use crate::particles::{run, InitKind, SimConfig};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

#[derive(Debug, Parser)]
#[command(name = "rieszflow", version, about = "Wasserstein flows of Riesz discrepancies and interaction energies")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOptions,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOptions {
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output format; `equilibrium` defaults to json, everything else to csv.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Worker threads for pairwise sums, 0 for all cores.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Discrepancy between two weighted point clouds given as CSV files.
    Disc(DiscArgs),
    /// Unit-second-moment equilibrium measure and its proximal scale.
    Equilibrium(EquilibriumArgs),
    /// Closed-form flows sampled on a time grid.
    Flow(FlowArgs),
    /// Minimizing movement scheme from a Dirac.
    Mms(MmsArgs),
    /// Quantile-space Euler flows in one dimension.
    Flow1d(Flow1dArgs),
    /// Particle descent toward an atomic target.
    Particles(ParticlesArgs),
    /// Stippling of a PGM image.
    Halftone(HalftoneArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KernelChoice {
    Riesz,
    Wendland,
}

#[derive(Debug, Args)]
pub struct DiscArgs {
    #[arg(long)]
    pub mu: PathBuf,
    #[arg(long)]
    pub nu: PathBuf,
    #[arg(long, value_enum, default_value_t = KernelChoice::Riesz)]
    pub kernel: KernelChoice,
    #[arg(long, default_value_t = 1.0)]
    pub r: f64,
}

#[derive(Debug, Args)]
pub struct EquilibriumArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub r: f64,
    #[arg(long, default_value_t = 1.0)]
    pub tau: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FlowVariant {
    Interaction,
    Delayed,
    OneParticle,
    Disc1d,
    Geodesic,
    Composite,
    DoubleWell,
    DiracLine,
}

#[derive(Debug, Args)]
pub struct FlowArgs {
    #[arg(long, value_enum)]
    pub variant: FlowVariant,
    #[arg(long, default_value_t = 1)]
    pub d: usize,
    #[arg(long, default_value_t = 1.0)]
    pub r: f64,
    #[arg(long, default_value_t = 1.0)]
    pub t_max: f64,
    /// Number of time samples, endpoints included.
    #[arg(long, default_value_t = 11)]
    pub samples: usize,
    /// Length of stay at `δ₀` for the delayed flow.
    #[arg(long, default_value_t = 0.0)]
    pub t0: f64,
    /// Start point, comma separated; defaults to `−e₁` (or `−1` on the line).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub p: Option<Vec<f64>>,
    /// Target point, comma separated; defaults to `e₁` (or `0` on the line).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub q: Option<Vec<f64>>,
    /// Weight of the right atom for the double-well split.
    #[arg(long, default_value_t = 0.5)]
    pub w: f64,
    /// Quantile grid size for the 1D discrepancy flow.
    #[arg(long, default_value_t = 64)]
    pub n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MmsEmit {
    Times,
    FCurves,
}

#[derive(Debug, Args)]
pub struct MmsArgs {
    #[arg(long)]
    pub r: f64,
    #[arg(long)]
    pub tau: f64,
    #[arg(long)]
    pub steps: usize,
    #[arg(long, default_value_t = 1)]
    pub d: usize,
    #[arg(long, value_enum, default_value_t = MmsEmit::Times)]
    pub emit: MmsEmit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Flow1dMode {
    Disc,
    Interaction,
}

#[derive(Debug, Args)]
pub struct Flow1dArgs {
    #[arg(long, value_enum, default_value_t = Flow1dMode::Disc)]
    pub mode: Flow1dMode,
    /// Initial Dirac location, ignored with `--initial`.
    #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
    pub x0: f64,
    /// Initial quantile grid as an `s,q` CSV file.
    #[arg(long)]
    pub initial: Option<PathBuf>,
    /// Target Dirac location.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub q: f64,
    #[arg(long, default_value_t = 256)]
    pub n: usize,
    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,
    #[arg(long, default_value_t = 1000)]
    pub steps: usize,
    #[arg(long, default_value_t = 250)]
    pub record_every: usize,
}

#[derive(Debug, Args)]
pub struct ParticlesArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long, default_value_t = 1.0)]
    pub r: f64,
    #[arg(long = "M")]
    pub m: usize,
    #[arg(long)]
    pub steps: usize,
    #[arg(long, default_value_t = 0)]
    pub snapshot_every: usize,
    /// Inline JSON or a JSON file: `{"points": [[..], ..], "weights": [..]}`
    /// or a bare list of points; defaults to `δ_{e₁}`.
    #[arg(long)]
    pub target: Option<String>,
    /// Initial Dirac location, comma separated; defaults to `−e₁`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub start: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1e-9)]
    pub half_width: f64,
    /// Start from the equilibrium shape of this radius instead of a cube.
    #[arg(long)]
    pub warm_start: Option<f64>,
    #[arg(long)]
    pub tau0: Option<f64>,
    #[arg(long)]
    pub tau_max: Option<f64>,
    /// Energy trace `step,model_time,discrepancy`.
    #[arg(long)]
    pub energy: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct HalftoneArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub dots: usize,
    #[arg(long, default_value_t = 1)]
    pub stride: usize,
    #[arg(long, default_value_t = 300)]
    pub steps: usize,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Dot coordinates `x,y`.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

/// Parses `args` (program name first), runs the subcommand and returns the
/// process exit code.
pub fn dispatch<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

pub fn execute(cli: &Cli) -> Result<()> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.global.threads)
        .build()
        .map_err(|e| Error::Unsupported(format!("thread pool: {e}")))?;
    let table = pool.install(|| run_command(&cli.command, &cli.global))?;
    let default = match cli.command {
        Command::Equilibrium(_) => Format::Json,
        _ => Format::Csv,
    };
    emit(&table.render(cli.global.format.unwrap_or(default)), cli.global.out.as_deref())
}

fn emit(text: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => {
            use std::io::Write;
            std::io::stdout().write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

fn run_command(cmd: &Command, global: &GlobalOptions) -> Result<Table> {
    match cmd {
        Command::Disc(a) => disc(a),
        Command::Equilibrium(a) => equilibrium(a),
        Command::Flow(a) => flow(a),
        Command::Mms(a) => mms(a),
        Command::Flow1d(a) => flow1d(a),
        Command::Particles(a) => particles(a, global),
        Command::Halftone(a) => halftone(a, global),
    }
}

fn disc(a: &DiscArgs) -> Result<Table> {
    let mu = DiscreteMeasure::from_csv(&std::fs::read_to_string(&a.mu)?)?;
    let nu = DiscreteMeasure::from_csv(&std::fs::read_to_string(&a.nu)?)?;
    let kernel = match a.kernel {
        KernelChoice::Riesz => Kernel::riesz(a.r)?,
        KernelChoice::Wendland => Kernel::Wendland,
    };
    let rep = discrepancy(&kernel, &mu, &nu)?;
    let mut t = Table::new(["interaction", "potential", "target_self_energy", "discrepancy"]);
    t.push(vec![rep.interaction.into(), rep.potential.into(), rep.target_self_energy.into(), rep.discrepancy.into()]);
    t.single = true;
    Ok(t)
}

fn equilibrium(a: &EquilibriumArgs) -> Result<Table> {
    let sol = equilibrium_unit(a.d, a.r)?;
    let c = c_tau(a.tau, &sol)?;
    let mut t = Table::new(["d", "r", "variant", "scale", "energy", "tau", "c_tau"]);
    t.push(vec![
        a.d.into(),
        a.r.into(),
        sol.variant_name().into(),
        sol.eta_star.support_radius().into(),
        sol.energy.into(),
        a.tau.into(),
        c.into(),
    ]);
    t.single = true;
    Ok(t)
}

fn time_grid(t_max: f64, samples: usize) -> Result<Vec<f64>> {
    if samples < 2 || !(t_max >= 0.0) {
        return Err(Error::Domain("need samples ≥ 2 and t_max ≥ 0".into()));
    }
    Ok((0..samples).map(|k| t_max * k as f64 / (samples - 1) as f64).collect())
}

fn unit_vector(d: usize, sign: f64) -> Vec<f64> {
    let mut v = vec![0.0; d];
    v[0] = sign;
    v
}

fn flow(a: &FlowArgs) -> Result<Table> {
    if a.d == 0 {
        return Err(Error::Domain("dimension must be at least 1".into()));
    }
    let times = time_grid(a.t_max, a.samples)?;
    let p = a.p.clone().unwrap_or_else(|| unit_vector(a.d, -1.0));
    let q = a.q.clone().unwrap_or_else(|| unit_vector(a.d, 1.0));
    let line_target = a.q.as_ref().map_or(0.0, |q| q[0]);
    let line_start = a.p.as_ref().map_or(-1.0, |p| p[0]);
    if a.variant == FlowVariant::DiracLine {
        let mut t = Table::new(["t", "x"]);
        for &s in &times {
            t.push(vec![s.into(), dirac_line_flow(line_start, line_target, s).into()]);
        }
        return Ok(t);
    }
    let curve = match a.variant {
        FlowVariant::Interaction => FlowCurve::InteractionFlow { sol: equilibrium_unit(a.d, a.r)? },
        FlowVariant::Delayed => FlowCurve::DelayedInteractionFlow {
            t0: a.t0,
            sol: equilibrium_unit(a.d, a.r)?,
        },
        FlowVariant::OneParticle => FlowCurve::OneParticleFlow { p, q, r: a.r },
        FlowVariant::Disc1d => FlowCurve::Disc1DFlow {
            q0: QuantileGrid::dirac(line_start, a.n),
            q: line_target,
        },
        FlowVariant::Geodesic => FlowCurve::GeodesicComparison { sol: equilibrium_unit(a.d, a.r)? },
        FlowVariant::Composite => FlowCurve::CenteredComposite {
            sol: equilibrium_unit(a.d, a.r)?,
            p,
            q,
        },
        FlowVariant::DoubleWell => FlowCurve::DoubleWellSplit { w: a.w },
        FlowVariant::DiracLine => unreachable!("handled above"),
    };
    let mut table: Option<Table> = None;
    for &s in &times {
        let state = curve.eval(s)?;
        let (columns, rows) = flow_rows(s, &state);
        let t = table.get_or_insert_with(|| Table::new(columns));
        for row in rows {
            t.push(row);
        }
    }
    Ok(table.expect("time grid is nonempty"))
}

fn flow_rows(t: f64, state: &FlowState) -> (Vec<String>, Vec<Vec<Cell>>) {
    let coords = |prefix: &'static str, d: usize| (1..=d).map(move |k| format!("{prefix}{k}"));
    match state {
        FlowState::Scaling(p) => {
            let columns = ["t", "scale", "radius"].map(String::from).into_iter().chain(coords("c", p.dim())).collect();
            let mut row = vec![t.into(), p.scale.into(), p.support_radius().into()];
            row.extend(p.shift.iter().map(|&c| Cell::Num(c)));
            (columns, vec![row])
        }
        FlowState::Quantile(g) => {
            let rows = g.nodes().zip(g.values()).map(|(s, &q)| vec![t.into(), s.into(), q.into()]).collect();
            (["t", "s", "q"].map(String::from).into(), rows)
        }
        FlowState::Atomic(m) => {
            let columns = ["t".to_string()].into_iter().chain(coords("x", m.dim())).chain(["w".to_string()]).collect();
            let rows = m
                .iter()
                .map(|(x, w)| {
                    let mut row = vec![Cell::Num(t)];
                    row.extend(x.iter().map(|&c| Cell::Num(c)));
                    row.push(w.into());
                    row
                })
                .collect();
            (columns, rows)
        }
        FlowState::Particle(x) => {
            let columns = ["t", "reached"].map(String::from).into_iter().chain(coords("x", x.position.len())).collect();
            let mut row = vec![t.into(), x.reached.into()];
            row.extend(x.position.iter().map(|&c| Cell::Num(c)));
            (columns, vec![row])
        }
    }
}

fn mms(a: &MmsArgs) -> Result<Table> {
    let sol = equilibrium_unit(a.d, a.r)?;
    let traj = run_mms(a.tau, a.r, a.steps, &sol)?;
    Ok(match a.emit {
        MmsEmit::Times => {
            let mut t = Table::new(["n", "t_n"]);
            for (n, &tn) in traj.times.iter().enumerate() {
                t.push(vec![n.into(), tn.into()]);
            }
            t
        }
        MmsEmit::FCurves => {
            let mut t = Table::new(["n", "t_n", "f_tau", "f_limit"]);
            for (n, &tn) in traj.times.iter().enumerate() {
                let f = limit_curve(n as f64 * a.tau, a.r);
                t.push(vec![n.into(), tn.into(), traj.f_value(n).into(), f.into()]);
            }
            t
        }
    })
}

fn read_quantile_csv(path: &Path) -> Result<QuantileGrid> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    match lines.next() {
        Some(h) if h.trim() == "s,q" => {}
        other => return Err(Error::Parse(format!("expected header s,q, got {other:?}"))),
    }
    let values = lines
        .map(|l| {
            let q = l.split(',').nth(1).ok_or_else(|| Error::Parse(format!("bad row {l:?}")))?;
            q.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad value {q:?}")))
        })
        .collect::<Result<Vec<f64>>>()?;
    QuantileGrid::new(values)
}

fn flow1d(a: &Flow1dArgs) -> Result<Table> {
    let q0 = match &a.initial {
        Some(path) => read_quantile_csv(path)?,
        None => QuantileGrid::dirac(a.x0, a.n),
    };
    let cfg = Flow1DConfig {
        dt: a.dt,
        steps: a.steps,
        record_every: a.record_every,
    };
    let frames = match a.mode {
        Flow1dMode::Disc => euler_flow(&q0, &QuantileGrid::dirac(a.q, q0.n()), &cfg)?,
        Flow1dMode::Interaction => interaction_flow_1d(&q0, &cfg)?,
    };
    let mut t = Table::new(["step", "s", "q"]);
    for f in &frames {
        for (s, &q) in f.grid.nodes().zip(f.grid.values()) {
            t.push(vec![f.step.into(), s.into(), q.into()]);
        }
    }
    Ok(t)
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum TargetSpec {
    Weighted { points: Vec<Vec<f64>>, weights: Option<Vec<f64>> },
    Points(Vec<Vec<f64>>),
}

/// Reads a target from inline JSON or, failing that, from a JSON file.
pub fn parse_target(spec: &str) -> Result<DiscreteMeasure> {
    let text = if spec.trim_start().starts_with(['{', '[']) {
        spec.to_string()
    } else {
        std::fs::read_to_string(spec)?
    };
    let parsed: TargetSpec = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("target JSON: {e}")))?;
    let (points, weights) = match parsed {
        TargetSpec::Weighted { points, weights } => (points, weights),
        TargetSpec::Points(points) => (points, None),
    };
    let n = points.len();
    DiscreteMeasure::new(&points, weights.unwrap_or_else(|| vec![1.0 / n.max(1) as f64; n]))
}

fn particles(a: &ParticlesArgs, global: &GlobalOptions) -> Result<Table> {
    if a.d == 0 {
        return Err(Error::Domain("dimension must be at least 1".into()));
    }
    let target = match &a.target {
        Some(spec) => parse_target(spec)?,
        None => DiscreteMeasure::dirac(&unit_vector(a.d, 1.0)),
    };
    if target.dim() != a.d {
        return Err(Error::Dimension {
            expected: a.d,
            got: target.dim(),
        });
    }
    let start = a.start.clone().unwrap_or_else(|| unit_vector(a.d, -1.0));
    let mut cfg = SimConfig::new(a.m, a.r, target, start, a.steps);
    cfg.seed = global.seed;
    cfg.snapshot_every = a.snapshot_every;
    cfg.init = match a.warm_start {
        Some(radius) => InitKind::WarmStart { radius },
        None => InitKind::Cube { half_width: a.half_width },
    };
    if let Some(t) = a.tau0 {
        cfg.tau0 = t;
    }
    if let Some(t) = a.tau_max {
        cfg.tau_max = t;
    }
    let log = run(&cfg)?;
    if let Some(path) = &a.energy {
        let mut e = Table::new(["step", "model_time", "discrepancy"]);
        for rec in &log.energy {
            e.push(vec![rec.step.into(), rec.model_time.into(), rec.discrepancy.into()]);
        }
        emit(&e.render(global.format.unwrap_or(Format::Csv)), Some(path))?;
    }
    let columns = ["step".to_string(), "i".to_string()].into_iter().chain((1..=a.d).map(|k| format!("x{k}")));
    let mut t = Table::new(columns);
    for snap in &log.snapshots {
        for i in 0..snap.len() {
            let mut row = vec![snap.step.into(), i.into()];
            row.extend(snap.point(i).iter().map(|&c| Cell::Num(c)));
            t.push(row);
        }
    }
    Ok(t)
}

fn halftone(a: &HalftoneArgs, global: &GlobalOptions) -> Result<Table> {
    let pixels = load_pgm(&a.input)?;
    let mut cfg = HalftoneConfig::new(a.dots, a.steps);
    cfg.stride = a.stride;
    cfg.seed = global.seed;
    let res = run_halftone(&cfg, &pixels)?;
    if let Some(path) = &a.svg {
        let radius = 0.4 / (res.dots.len() as f64).sqrt() * 500.0;
        emit(&export_svg(&res.dots, radius, Canvas::for_aspect(pixels.aspect(), 500.0)), Some(path))?;
    }
    if let Some(path) = &a.csv {
        let mut d = Table::new(["x", "y"]);
        for &[x, y] in &res.dots {
            d.push(vec![x.into(), y.into()]);
        }
        emit(&d.render(Format::Csv), Some(path))?;
    }
    let mut t = Table::new(["step", "model_time", "discrepancy"]);
    for rec in &res.energy {
        t.push(vec![rec.step.into(), rec.model_time.into(), rec.discrepancy.into()]);
    }
    Ok(t)
}
