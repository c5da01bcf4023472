//! Command-line front end: routing, solving, verification, generation and
//! benchmarking.
//!
//! Exit codes: 0 YES (or a valid matching), 1 NO (or an invalid matching),
//! 2 usage or input error, 3 UNKNOWN.

pub mod route;
pub mod suite;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fairmatch::fpt::{kc_model, FptConfig, TargetSpec};
use fairmatch::gen::{
    random_3dm, random_instance, random_sat4occ, reduce_3dm_maxmin24, reduce_3dm_maxmin33,
    reduce_sat_mov25, CnfInstance, RandomSpec, ThreeDMInstance,
};
use fairmatch::{validate_instance, verify, Error, Instance, Matching, Measure, Result};

pub use route::{plan, route, run_algo, run_auto, Algo, Outcome, RouteDecision, SolveOptions};
pub use suite::{builtin_suite, load_suite, BUILTIN_SUITES};

pub const EXIT_YES: u8 = 0;
pub const EXIT_NO: u8 = 1;
pub const EXIT_ERROR: u8 = 2;
pub const EXIT_UNKNOWN: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "fairmatch",
    version,
    about = "Fair many-to-one bipartite matching"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide an instance and write a verified matching on YES.
    Solve(SolveArgs),
    /// Check a matching against an instance.
    Verify(VerifyArgs),
    /// Write a generated instance as JSON.
    Generate {
        #[command(subcommand)]
        kind: GenerateKind,
    },
    /// Time the solvers on a suite and write one CSV row per instance.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Instance JSON file.
    #[arg(long)]
    pub input: PathBuf,
    /// Where to write the matching on YES; printed to stdout when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Algo::Auto)]
    pub algo: Algo,
    /// Seed of the randomized MoV solver.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Rounds per partition of the randomized MoV solver.
    #[arg(long)]
    pub rounds: Option<u64>,
    /// Node budget of the integer search and the oracles.
    #[arg(long)]
    pub budget: Option<u64>,
    /// JSON file with `mu1` and `mu2` target lists, for `targeted-mov`.
    #[arg(long)]
    pub targets: Option<PathBuf>,
    /// Write the k + |C| integer model in text form to this file.
    #[arg(long)]
    pub dump_ilp: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub matching: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MeasureArg {
    Mov,
    Maxmin,
}

impl From<MeasureArg> for Measure {
    fn from(m: MeasureArg) -> Self {
        match m {
            MeasureArg::Mov => Measure::Mov,
            MeasureArg::Maxmin => Measure::MaxMin,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ThreeDMVariant {
    /// Max-Min with left and right degree at most 3.
    Maxmin33,
    /// Max-Min with left degree at most 2 and right degree at most 4.
    Maxmin24,
}

#[derive(Debug, Subcommand)]
pub enum GenerateKind {
    /// Seeded random instance.
    Random(RandomArgs),
    /// Max-Min instance from a 3-Dimensional Matching instance.
    #[command(name = "from-3dm")]
    From3dm(From3dmArgs),
    /// MoV instance from a 3-SAT formula with two positive and two negative
    /// occurrences per variable.
    FromSat(FromSatArgs),
}

#[derive(Debug, Args)]
pub struct RandomArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 2)]
    pub colors: usize,
    #[arg(long, default_value_t = 0.5)]
    pub edge_prob: f64,
    #[arg(long)]
    pub max_left_degree: Option<usize>,
    #[arg(long)]
    pub max_right_degree: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub ell: usize,
    #[arg(long, value_enum, default_value_t = MeasureArg::Maxmin)]
    pub measure: MeasureArg,
    #[arg(long, default_value_t = 0)]
    pub size_min: usize,
    #[arg(long)]
    pub size_max: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct From3dmArgs {
    /// 3DM JSON file with `x`, `y`, `z` and `triples`; random when omitted.
    #[arg(long, conflicts_with_all = ["q", "triples"])]
    pub input: Option<PathBuf>,
    /// Size of each dimension of the random instance.
    #[arg(long, default_value_t = 3)]
    pub q: usize,
    /// Number of random triples.
    #[arg(long, default_value_t = 5)]
    pub triples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = ThreeDMVariant::Maxmin33)]
    pub variant: ThreeDMVariant,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FromSatArgs {
    /// CNF JSON file with `num_vars` and `clauses`; random when omitted.
    #[arg(long, conflicts_with = "vars")]
    pub input: Option<PathBuf>,
    /// Number of variables of the random formula.
    #[arg(long, default_value_t = 3)]
    pub vars: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Builtin suite name or a directory of instance JSON files.
    #[arg(long)]
    pub suite: String,
    /// CSV destination; stdout when omitted.
    #[arg(long)]
    pub csv_out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Algo::Auto)]
    pub algo: Algo,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub budget: Option<u64>,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn emit(output: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<()> {
    match output {
        Some(p) => write_file(p, text),
        None => writeln!(out, "{text}").map_err(|e| Error::Input(e.to_string())),
    }
}

fn solve_options(seed: u64, rounds: Option<u64>, budget: Option<u64>) -> SolveOptions {
    let mut fpt = FptConfig {
        seed,
        rounds,
        ..FptConfig::default()
    };
    if let Some(b) = budget {
        fpt.ilp.max_nodes = b;
    }
    SolveOptions {
        fpt,
        oracle_budget: budget,
        targets: None,
    }
}

fn solve(args: &SolveArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<u8> {
    let instance = Instance::from_json(&read(&args.input)?)?;
    for w in validate_instance(&instance)? {
        let _ = writeln!(err, "warning: {w}");
    }
    let mut opts = solve_options(args.seed, args.rounds, args.budget);
    if let Some(path) = &args.targets {
        let targets: TargetSpec = serde_json::from_str(&read(path)?)?;
        opts.targets = Some(targets);
    }
    if let Some(path) = &args.dump_ilp {
        write_file(path, &kc_model(&instance)?.model.dump())?;
    }
    let outcome = if args.algo == Algo::Auto {
        let (outcome, decision) = run_auto(&instance, &opts)?;
        let _ = writeln!(err, "route: {} ({})", decision.algo, decision.reason);
        outcome
    } else {
        run_algo(&instance, args.algo, &opts)?
    };
    match &outcome {
        Outcome::Yes(m) => {
            if !verify(&instance, m)?.is_valid() {
                return Err(Error::Internal(
                    "refusing to write an invalid matching".into(),
                ));
            }
            let _ = writeln!(out, "YES");
            emit(args.output.as_deref(), &m.to_json(), out)?;
        }
        Outcome::No => {
            let _ = writeln!(out, "NO");
        }
        Outcome::Unknown(why) => {
            let _ = writeln!(out, "UNKNOWN");
            let _ = writeln!(err, "{why}");
        }
    }
    Ok(outcome.exit_code())
}

fn verify_cmd(args: &VerifyArgs, out: &mut dyn Write) -> Result<u8> {
    let instance = Instance::from_json(&read(&args.input)?)?;
    let matching = Matching::from_json(&read(&args.matching)?)?;
    let verdict = verify(&instance, &matching)?;
    if verdict.is_valid() {
        let _ = writeln!(out, "valid");
        return Ok(EXIT_YES);
    }
    for v in &verdict.violations {
        let _ = writeln!(out, "{v}");
    }
    Ok(EXIT_NO)
}

fn generate(kind: &GenerateKind, out: &mut dyn Write) -> Result<u8> {
    let (instance, output) = match kind {
        GenerateKind::Random(a) => {
            let spec = RandomSpec {
                n: a.n,
                k: a.k,
                num_colors: a.colors,
                edge_prob: a.edge_prob,
                max_left_degree: a.max_left_degree,
                max_right_degree: a.max_right_degree,
                connect_left: true,
                ell: a.ell,
                measure: a.measure.into(),
                size_min: a.size_min,
                size_max: a.size_max,
                seed: a.seed,
            };
            (random_instance(&spec)?, &a.output)
        }
        GenerateKind::From3dm(a) => {
            let t = match &a.input {
                Some(p) => serde_json::from_str::<ThreeDMInstance>(&read(p)?)?,
                None => random_3dm(a.q, a.triples, a.seed)?,
            };
            let inst = match a.variant {
                ThreeDMVariant::Maxmin33 => reduce_3dm_maxmin33(&t)?,
                ThreeDMVariant::Maxmin24 => reduce_3dm_maxmin24(&t)?,
            };
            (inst, &a.output)
        }
        GenerateKind::FromSat(a) => {
            let c = match &a.input {
                Some(p) => serde_json::from_str::<CnfInstance>(&read(p)?)?,
                None => random_sat4occ(a.vars, a.seed)?,
            };
            (reduce_sat_mov25(&c)?, &a.output)
        }
    };
    emit(output.as_deref(), &instance.to_json(), out)?;
    Ok(EXIT_YES)
}

fn bench(args: &BenchArgs, out: &mut dyn Write) -> Result<u8> {
    let suite = load_suite(&args.suite)?;
    let opts = solve_options(args.seed, None, args.budget);
    let mut csv = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::Input(e.to_string());
    csv.write_record([
        "instance", "algo", "answer", "millis", "n", "k", "colors", "ell",
    ])
    .map_err(csv_err)?;
    for (name, instance) in &suite {
        let start = Instant::now();
        let (algo, answer) = if args.algo == Algo::Auto {
            match run_auto(instance, &opts) {
                Ok((o, d)) => (d.algo, o.label()),
                Err(_) => (Algo::Auto, "ERROR"),
            }
        } else {
            match run_algo(instance, args.algo, &opts) {
                Ok(o) => (args.algo, o.label()),
                Err(_) => (args.algo, "ERROR"),
            }
        };
        let millis = start.elapsed().as_secs_f64() * 1000.0;
        csv.write_record([
            name.clone(),
            algo.to_string(),
            answer.to_string(),
            format!("{millis:.3}"),
            instance.n().to_string(),
            instance.k.to_string(),
            instance.num_colors.to_string(),
            instance.ell.to_string(),
        ])
        .map_err(csv_err)?;
    }
    let bytes = csv.into_inner().map_err(|e| Error::Input(e.to_string()))?;
    let text = String::from_utf8(bytes).map_err(|e| Error::Internal(e.to_string()))?;
    match &args.csv_out {
        Some(p) => write_file(p, &text)?,
        None => {
            let _ = write!(out, "{text}");
        }
    }
    Ok(EXIT_YES)
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
                return EXIT_ERROR;
            }
            let _ = write!(out, "{text}");
            return EXIT_YES;
        }
    };
    let result = match &cli.command {
        Command::Solve(a) => solve(a, out, err),
        Command::Verify(a) => verify_cmd(a, out),
        Command::Generate { kind } => generate(kind, out),
        Command::Bench(a) => bench(a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}
