use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use empathica::dynamics::{
    render_phase_portrait, simulate, stabilization_check, vector_field, write_field_csv,
    LearningSchedule, PopulationState, RevisionProtocol, SimulationOptions,
};
use empathica::equilibria::{region_map, EquilibriumSet};
use empathica::ess::{
    constrained_ess, homogeneous_payoff, reduce, symmetric_equilibria, Constraint,
};
use empathica::game::{dominated_actions, inequality_report, symmetry_report};
use empathica::hierarchy::{analyze, check_consistency, default_battery};
use empathica::io::resolve_input;
use empathica::{classify, Cell, ClassTag, EmpathyMatrix, Error, Game2x2, GameFile, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

/// Empathetic 2x2 games: transforms, equilibria, ESS, dynamics and hierarchies.
#[derive(Parser)]
#[command(name = "empathica", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Game file, or the name of a bundled fixture.
    #[arg(long)]
    input: String,
    /// Output directory; reports go to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Empathy matrix l11 l12 l21 l22, overriding the file.
    #[arg(long, num_args = 1..=4, allow_negative_numbers = true, value_name = "L")]
    lambda: Option<Vec<String>>,
}

#[derive(Subcommand)]
enum Command {
    /// Write the empathetic game.
    Transform(Common),
    /// Classify the game before and after the transform.
    Classify(Common),
    /// Pure, mixed, Berge and Pareto solutions of the empathetic game.
    Solve(Common),
    /// Constrained ESS of the symmetric game under homogeneous empathy.
    Ess(EssArgs),
    /// Simulate the two-population dynamics.
    Simulate(SimulateArgs),
    /// Sample the flow of the dynamics on a grid.
    Field(FieldArgs),
    /// Map equilibrium outcomes over altruism weights.
    Sweep(SweepArgs),
    /// Analyse higher-order empathy levels.
    Hierarchy(HierarchyArgs),
}

#[derive(Args)]
struct EssArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    sigma: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    mu: f64,
    /// Cost of action 1 in the constraint c1·m + c2·(1 − m) ≤ V.
    #[arg(long, requires_all = ["c2", "v"], allow_negative_numbers = true)]
    c1: Option<f64>,
    #[arg(long, requires_all = ["c1", "v"], allow_negative_numbers = true)]
    c2: Option<f64>,
    #[arg(long = "V", id = "v", requires_all = ["c1", "c2"], allow_negative_numbers = true)]
    v: Option<f64>,
}

#[derive(Args)]
struct Dynamics {
    /// replicator, bnn, smith, imitation or hybrid:name=weight,...
    #[arg(long, default_value = "replicator")]
    protocol: String,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    dynamics: Dynamics,
    #[arg(long, default_value_t = 10_000)]
    steps: usize,
    /// Learning rate; capped every step.
    #[arg(long, default_value_t = 0.05)]
    rate: f64,
    /// Initial state p1,p2; drawn from --seed when omitted.
    #[arg(long)]
    start: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also write a phase portrait to this file.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct FieldArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    dynamics: Dynamics,
    #[arg(long, default_value_t = 21)]
    grid: usize,
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 60)]
    grid: usize,
    #[arg(long = "range-l12", default_value = "-1:2", allow_hyphen_values = true)]
    range_l12: String,
    #[arg(long = "range-l21", default_value = "-1:2", allow_hyphen_values = true)]
    range_l21: String,
}

#[derive(Args)]
struct HierarchyArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 10)]
    kmax: u32,
}

struct Loaded {
    game: Game2x2,
    lam: EmpathyMatrix,
}

impl Common {
    fn load(&self) -> Result<Loaded> {
        let file = resolve_input(&self.input)?;
        let lam = match &self.lambda {
            Some(values) => parse_lambda(values)?,
            None => file.empathy()?,
        };
        Ok(Loaded {
            game: file.game()?,
            lam,
        })
    }
}

fn parse_numbers(text: &str, what: &str) -> Result<Vec<f64>> {
    text.split([',', ' ', ':'])
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("{what}: '{s}' is not a number")))
        })
        .collect()
}

fn parse_lambda(values: &[String]) -> Result<EmpathyMatrix> {
    let nums = parse_numbers(&values.join(","), "--lambda")?;
    match nums[..] {
        [l11, l12, l21, l22] => EmpathyMatrix::new(l11, l12, l21, l22),
        _ => Err(Error::Parse(format!(
            "--lambda expects 4 numbers, got {}",
            nums.len()
        ))),
    }
}

fn parse_pair(text: &str, what: &str) -> Result<(f64, f64)> {
    match parse_numbers(text, what)?[..] {
        [x, y] => Ok((x, y)),
        _ => Err(Error::Parse(format!("{what} expects two numbers"))),
    }
}

/// Writes `name` into the output directory, or to stdout when there is none.
struct Sink<'a> {
    out: Option<&'a Path>,
}

impl Sink<'_> {
    fn write(&self, name: &str, content: &[u8]) -> Result<()> {
        match self.out {
            Some(dir) => {
                fs::create_dir_all(dir)?;
                fs::write(dir.join(name), content)?;
            }
            None => io::stdout().write_all(content)?,
        }
        Ok(())
    }

    /// Files that are only written to an output directory.
    fn write_file_only(&self, name: &str, content: &[u8]) -> Result<()> {
        if self.out.is_some() {
            self.write(name, content)?;
        }
        Ok(())
    }
}

fn pretty(value: &Value) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values serialize");
    s.push('\n');
    s.into_bytes()
}

fn csv_bytes(write: impl FnOnce(&mut Vec<u8>) -> Result<()>) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    write(&mut buf)?;
    Ok(buf)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Transform(c) => {
            let l = c.load()?;
            let out = GameFile::new(l.lam.apply(&l.game), None);
            Sink { out: c.out.as_deref() }.write("transformed.json", out.to_json().as_bytes())
        }
        Command::Classify(c) => {
            let l = c.load()?;
            let t = l.lam.apply(&l.game);
            let inequality: Vec<Value> = Cell::all()
                .into_iter()
                .map(|cell| {
                    let r = inequality_report(&l.game, &l.lam, cell);
                    let mut v = json!(r);
                    v["ratio_verdict"] = json!(r.ratio_verdict());
                    v
                })
                .collect();
            let mut report = json!({
                "original": classify(&l.game),
                "transformed": classify(&t),
                "dominated": dominated_actions(&t),
                "symmetry": symmetry_report(&l.game, &l.lam),
                "inequality": inequality,
            });
            if classify(&l.game).tag == ClassTag::Discoordination {
                report["stabilization"] = json!(stabilization_check(&l.game, &l.lam)?);
            }
            Sink { out: c.out.as_deref() }.write("classification.json", &pretty(&report))
        }
        Command::Solve(c) => {
            let l = c.load()?;
            let eq = EquilibriumSet::of(&l.lam.apply(&l.game));
            Sink { out: c.out.as_deref() }.write("equilibria.json", &pretty(&json!(eq)))
        }
        Command::Ess(a) => {
            let l = a.common.load()?;
            let con = match (a.c1, a.c2, a.v) {
                (Some(c1), Some(c2), Some(v)) => Constraint::new(c1, c2, v)?,
                _ => Constraint::unconstrained(),
            };
            let red = reduce(&homogeneous_payoff(&l.game, a.sigma, a.mu));
            let report = json!({
                "reduction": red,
                "symmetric_equilibria": symmetric_equilibria(&red),
                "constraint": con,
                "ess": constrained_ess(&red, &con)?,
            });
            Sink { out: a.common.out.as_deref() }.write("ess.json", &pretty(&report))
        }
        Command::Simulate(a) => {
            let l = a.common.load()?;
            let proto: RevisionProtocol = a.dynamics.protocol.parse()?;
            if !(a.rate.is_finite() && a.rate > 0.0) {
                return Err(Error::InvalidArgument("--rate must be positive".into()));
            }
            let s0 = match &a.start {
                Some(text) => {
                    let (p1, p2) = parse_pair(text, "--start")?;
                    PopulationState::new(p1, p2)?
                }
                None => {
                    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
                    PopulationState::new(rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0))?
                }
            };
            let game = l.lam.apply(&l.game);
            let opts = SimulationOptions {
                steps: a.steps,
                ..Default::default()
            };
            let traj = simulate(s0, &proto, &LearningSchedule::Constant(a.rate), &game, &opts)?;
            let sink = Sink { out: a.common.out.as_deref() };
            sink.write_file_only("trajectory.csv", &csv_bytes(|b| traj.write_csv(b))?)?;
            let report = json!({
                "protocol": proto.to_string(),
                "rate": a.rate,
                "start": s0,
                "final": traj.last(),
                "diagnostics": traj.diagnostics,
            });
            sink.write("diagnostics.json", &pretty(&report))?;
            if let Some(path) = &a.svg {
                let field = vector_field(&proto, &game, 15)?;
                fs::write(path, render_phase_portrait(&field, &[traj], 600))?;
            }
            Ok(())
        }
        Command::Field(a) => {
            let l = a.common.load()?;
            let proto: RevisionProtocol = a.dynamics.protocol.parse()?;
            let field = vector_field(&proto, &l.lam.apply(&l.game), a.grid)?;
            Sink { out: a.common.out.as_deref() }
                .write("field.csv", &csv_bytes(|b| write_field_csv(&field, b))?)?;
            if let Some(path) = &a.svg {
                fs::write(path, render_phase_portrait(&field, &[], 600))?;
            }
            Ok(())
        }
        Command::Sweep(a) => {
            let l = a.common.load()?;
            let r12 = parse_pair(&a.range_l12, "--range-l12")?;
            let r21 = parse_pair(&a.range_l21, "--range-l21")?;
            let map = region_map(&l.game, r12, r21, a.grid)?;
            Sink { out: a.common.out.as_deref() }
                .write("region_map.csv", &csv_bytes(|b| map.write_csv(b))?)
        }
        Command::Hierarchy(a) => {
            let l = a.common.load()?;
            let analysis = analyze(&l.game, &l.lam, a.kmax)?;
            let mut battery = vec![l.game];
            battery.extend(default_battery());
            let consistency = check_consistency(&l.lam, a.kmax, &battery)?;
            let sink = Sink { out: a.common.out.as_deref() };
            sink.write_file_only("hierarchy.csv", &csv_bytes(|b| analysis.write_csv(b))?)?;
            let report = json!({
                "lam": analysis.lam,
                "k_max": analysis.k_max,
                "consistent_up_to_k": analysis.consistent_up_to_k,
                "spectral": analysis.spectral,
                "consistency": consistency,
            });
            sink.write("verdict.json", &pretty(&report))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("empathica: {e}");
            ExitCode::from(if e.is_parse() { 1 } else { 2 })
        }
    }
}
