//! The `stabrbm` command line.
//!
//! Every subcommand writes its outputs plus a `manifest.json` into `--out`.
//! Exit codes: 0 success, 1 verification failure, 2 usage error, 3 the
//! group needs the variational route, 4 enumeration cap exceeded.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::analytic::{self, Basis};
use crate::error::Error;
use crate::lattice::{self, LatticeSpec, Preset};
use crate::optimize::{self, FitReport, OptimizerConfig};
use crate::oracle;
use crate::pauli::{GroupClass, StabilizerGroup};
use crate::rbm::{RbmState, DEFAULT_CAP};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_VARIATIONAL: i32 = 3;
pub const EXIT_CAP: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "stabrbm", version, about = "RBM representations of stabilizer code states")]
pub struct Cli {
    /// Cap on worker threads.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Largest number of amplitudes to enumerate (default 2^24, or STABRBM_CAP).
    #[arg(long, global = true)]
    pub cap: Option<u128>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a stabilizer group from a lattice spec or a preset.
    Build(BuildArgs),
    /// Analytic RBM for a composable group.
    Construct(ConstructArgs),
    /// Check an RBM against the code space.
    Verify(VerifyArgs),
    /// Fit an RBM to a subsystem, or to the twist region of a mixed group.
    Optimize(OptimizeArgs),
    /// Apply a z- or x-string to an RBM.
    Excite(ExciteArgs),
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    #[arg(long, conflicts_with = "preset")]
    pub lattice: Option<PathBuf>,
    /// One of: toric RxC, shor, planar-smooth, planar-rough, planar-mixed,
    /// defect-smooth, defect-rough, twist, zd RxC d.
    #[arg(long, num_args = 1..=3, value_names = ["NAME", "ARGS"])]
    pub preset: Option<Vec<String>>,
    #[arg(long, short)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[arg(long)]
    pub group: PathBuf,
    #[arg(long)]
    pub emit_recipe: bool,
    #[arg(long, short)]
    pub out: PathBuf,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum BasisArg {
    Z,
    Y,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub group: PathBuf,
    #[arg(long)]
    pub rbm: PathBuf,
    /// Basis the RBM is written in; `construct` reports `y` for X+Y groups.
    #[arg(long, value_enum, default_value = "z")]
    pub basis: BasisArg,
    #[arg(long, short)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[arg(long)]
    pub group: PathBuf,
    /// Subsystem spins; without it the twist region of the group is used
    /// and the result is composed with the analytic remainder.
    #[arg(long, value_delimiter = ',')]
    pub spins: Option<Vec<usize>>,
    /// Generator labels to restrict onto `--spins`; defaults to those
    /// supported inside it.
    #[arg(long, value_delimiter = ',', requires = "spins")]
    pub stabs: Option<Vec<String>>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub trace: Option<PathBuf>,
    #[arg(long)]
    pub restarts: Option<usize>,
    #[arg(long)]
    pub max_iterations: Option<u64>,
    #[arg(long)]
    pub init_scale: Option<f64>,
    #[arg(long)]
    pub hidden: Option<usize>,
    #[arg(long)]
    pub gradient_check: bool,
    #[arg(long, short)]
    pub out: PathBuf,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum StringKind {
    Z,
    X,
}

#[derive(Debug, Args)]
pub struct ExciteArgs {
    #[arg(long)]
    pub rbm: PathBuf,
    #[arg(long, value_enum)]
    pub string: StringKind,
    #[arg(long, value_delimiter = ',', default_value = "")]
    pub path: Vec<String>,
    #[arg(long, short)]
    pub out: PathBuf,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FileHash {
    pub path: String,
    pub sha256: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: Vec<String>,
    pub inputs: Vec<FileHash>,
    pub seed: Option<u64>,
    pub tool_version: String,
    pub started_unix: u64,
    pub wall_clock_seconds: f64,
    pub outputs: Vec<FileHash>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Expectation {
    pub label: String,
    /// `[re, im]`
    pub value: [f64; 2],
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerifyReport {
    pub n: usize,
    pub d: u32,
    pub class: GroupClass,
    pub overlap: f64,
    pub expectations: Vec<Expectation>,
    /// Distance to the projector-built oracle state; for codes with logical
    /// qubits this is informational only.
    pub distance_to_oracle_state: f64,
    pub passed: bool,
}

/// Error plus the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::CapExceeded { .. } => EXIT_CAP,
            Error::RequiresVariational(_) => EXIT_VARIATIONAL,
            Error::Stalled(_) => EXIT_VERIFY,
            _ => EXIT_USAGE,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { code: EXIT_USAGE, message: e.to_string() }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure { code: EXIT_USAGE, message: e.to_string() }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// Tracks hashes and writes the manifest.
struct Run {
    command: Vec<String>,
    out: PathBuf,
    inputs: Vec<FileHash>,
    outputs: Vec<FileHash>,
    seed: Option<u64>,
    started: Instant,
    started_unix: u64,
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl Run {
    fn new(command: Vec<String>, out: &Path) -> CliResult<Run> {
        fs::create_dir_all(out)?;
        Ok(Run {
            command,
            out: out.to_path_buf(),
            inputs: vec![],
            outputs: vec![],
            seed: None,
            started: Instant::now(),
            started_unix: SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
        })
    }

    fn read(&mut self, path: &Path) -> CliResult<String> {
        let bytes = fs::read(path).map_err(|e| Failure { code: EXIT_USAGE, message: format!("{}: {e}", path.display()) })?;
        self.inputs.push(FileHash { path: path.display().to_string(), sha256: sha256_hex(&bytes) });
        String::from_utf8(bytes).map_err(|e| Failure { code: EXIT_USAGE, message: format!("{}: {e}", path.display()) })
    }

    fn write(&mut self, name: &str, contents: &[u8]) -> CliResult<PathBuf> {
        let path = self.out.join(name);
        self.write_path(&path, contents)?;
        Ok(path)
    }

    fn write_path(&mut self, path: &Path, contents: &[u8]) -> CliResult<()> {
        fs::write(path, contents)?;
        self.outputs.push(FileHash { path: path.display().to_string(), sha256: sha256_hex(contents) });
        Ok(())
    }

    fn json<T: Serialize>(&mut self, name: &str, value: &T) -> CliResult<PathBuf> {
        let mut s = serde_json::to_string_pretty(value)?;
        s.push('\n');
        self.write(name, s.as_bytes())
    }

    fn finish(self) -> CliResult<()> {
        let manifest = RunManifest {
            command: self.command,
            inputs: self.inputs,
            seed: self.seed,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            started_unix: self.started_unix,
            wall_clock_seconds: self.started.elapsed().as_secs_f64(),
            outputs: self.outputs,
        };
        let mut s = serde_json::to_string_pretty(&manifest)?;
        s.push('\n');
        fs::write(self.out.join("manifest.json"), s)?;
        Ok(())
    }
}

pub fn cap_from_env() -> u128 {
    std::env::var("STABRBM_CAP").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_CAP)
}

fn load_group(run: &mut Run, path: &Path) -> CliResult<StabilizerGroup> {
    let text = run.read(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn load_rbm(run: &mut Run, path: &Path) -> CliResult<RbmState> {
    let text = run.read(path)?;
    Ok(RbmState::from_json_str(&text)?)
}

fn rbm_bytes(rbm: &RbmState) -> Vec<u8> {
    let mut s = rbm.to_json_string();
    s.push('\n');
    s.into_bytes()
}

fn cmd_build(args: &BuildArgs, run: &mut Run) -> CliResult<i32> {
    let built = match (&args.lattice, &args.preset) {
        (Some(path), None) => {
            let text = run.read(path)?;
            let spec: LatticeSpec = serde_json::from_str(&text)?;
            Preset::Lattice(lattice::build(&spec)?)
        }
        (None, Some(p)) => lattice::preset(&p[0], &p[1..])?,
        _ => return Err(Failure { code: EXIT_USAGE, message: "give exactly one of --lattice or --preset".into() }),
    };
    run.json("group.json", built.group())?;
    match &built {
        Preset::Lattice(code) => run.json("geometry.json", &code.geometry())?,
        Preset::Group(_) => run.json("geometry.json", &serde_json::Value::Null)?,
    };
    let g = built.group();
    eprintln!("built {} generators on {} qudits (d={}), class {}", g.len(), g.n(), g.d(), g.classify());
    Ok(EXIT_OK)
}

fn cmd_construct(args: &ConstructArgs, run: &mut Run) -> CliResult<i32> {
    let g = load_group(run, &args.group)?;
    if g.d() > 2 {
        let rbm = analytic::construct_qudit(&g)?;
        run.write("rbm.json", &rbm_bytes(&rbm))?;
        return Ok(EXIT_OK);
    }
    let (rbm, recipe) = analytic::construct(&g)?;
    run.write("rbm.json", &rbm_bytes(&rbm))?;
    if args.emit_recipe {
        run.json("recipe.json", &recipe)?;
    }
    if recipe.basis == Basis::Y {
        eprintln!("rbm is written in the y basis; pass --basis y to verify");
    }
    Ok(EXIT_OK)
}

pub fn verify_report(g: &StabilizerGroup, rbm: &RbmState, basis: Basis, cap: u128) -> crate::Result<VerifyReport> {
    if rbm.n() != g.n() || rbm.d() != g.d() {
        return Err(Error::DimensionMismatch(rbm.n(), rbm.d(), g.n(), g.d()));
    }
    let mut state = rbm.full_state(cap)?;
    if basis == Basis::Y {
        let all: Vec<usize> = (0..g.n()).collect();
        state = oracle::y_basis_change(&state, &all, false)?;
    }
    let overlap = oracle::code_projector_overlap(g, &state)?;
    let expectations = g
        .generators()
        .iter()
        .zip(g.labels())
        .map(|(t, l)| {
            oracle::expectation(t, &state).map(|e| Expectation { label: l.clone(), value: [e.re, e.im] })
        })
        .collect::<crate::Result<Vec<_>>>()?;
    let reference = oracle::code_state(g, cap)?;
    let distance_to_oracle_state = oracle::distance(&reference, &state)?;
    Ok(VerifyReport {
        n: g.n(),
        d: g.d(),
        class: g.classify(),
        overlap,
        expectations,
        distance_to_oracle_state,
        passed: overlap >= 1.0 - 1e-9,
    })
}

fn cmd_verify(args: &VerifyArgs, run: &mut Run, cap: u128) -> CliResult<i32> {
    let g = load_group(run, &args.group)?;
    let rbm = load_rbm(run, &args.rbm)?;
    let basis = match args.basis {
        BasisArg::Z => Basis::Z,
        BasisArg::Y => Basis::Y,
    };
    let report = verify_report(&g, &rbm, basis, cap)?;
    run.json("report.json", &report)?;
    eprintln!("overlap {:.17}", report.overlap);
    Ok(if report.passed { EXIT_OK } else { EXIT_VERIFY })
}

fn optimizer_config(args: &OptimizeArgs) -> OptimizerConfig {
    let mut cfg = OptimizerConfig { rng_seed: args.seed, gradient_check: args.gradient_check, ..Default::default() };
    if let Some(r) = args.restarts {
        cfg.restarts = r;
    }
    if let Some(m) = args.max_iterations {
        cfg.max_iterations = m;
    }
    if let Some(s) = args.init_scale {
        cfg.init_scale = s;
    }
    cfg.hidden_count = args.hidden;
    cfg
}

fn cmd_optimize(args: &OptimizeArgs, run: &mut Run, cap: u128) -> CliResult<i32> {
    let g = load_group(run, &args.group)?;
    run.seed = Some(args.seed);
    let cfg = optimizer_config(args);
    let (rbm, report): (RbmState, FitReport) = match &args.spins {
        Some(spins) => {
            if let Some(&bad) = spins.iter().find(|&&q| q >= g.n()) {
                return Err(Error::IndexOutOfRange { index: bad, n: g.n() }.into());
            }
            let stabs: Vec<usize> = match &args.stabs {
                Some(labels) => labels
                    .iter()
                    .map(|l| {
                        g.labels().iter().position(|x| x == l).ok_or_else(|| Failure {
                            code: EXIT_USAGE,
                            message: format!("no generator labelled {l:?}"),
                        })
                    })
                    .collect::<CliResult<_>>()?,
                None => (0..g.len())
                    .filter(|&j| g.generators()[j].support().iter().all(|q| spins.contains(q)))
                    .collect(),
            };
            let sub = oracle::subsystem_state(&g, spins, &stabs, cap)?;
            if sub.free > 0 {
                eprintln!("warning: subsystem code space has dimension {}^{}", g.d(), sub.free);
            }
            optimize::fit_subsystem(&sub.state, &cfg)?
        }
        None => {
            let fit = optimize::fit_twist_group(&g, &cfg, cap)?;
            (fit.rbm, fit.report)
        }
    };
    run.write("rbm.json", &rbm_bytes(&rbm))?;
    run.json("fit_report.json", &report)?;
    if let Some(path) = &args.trace {
        run.write_path(path, report.trace_csv().as_bytes())?;
    }
    eprintln!("final distance {:.6} (fidelity {:.8})", report.final_distance, report.final_fidelity);
    Ok(EXIT_OK)
}

fn cmd_excite(args: &ExciteArgs, run: &mut Run) -> CliResult<i32> {
    let rbm = load_rbm(run, &args.rbm)?;
    let path: Vec<usize> = args
        .path
        .iter()
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.trim().parse().map_err(|_| Failure { code: EXIT_USAGE, message: format!("bad path index {s:?}") })
        })
        .collect::<CliResult<_>>()?;
    let out = match args.string {
        StringKind::Z => rbm.apply_string_z(&path)?,
        StringKind::X => rbm.apply_string_x(&path)?,
    };
    run.write("rbm.json", &rbm_bytes(&out))?;
    Ok(EXIT_OK)
}

fn out_dir(command: &Command) -> &Path {
    match command {
        Command::Build(a) => &a.out,
        Command::Construct(a) => &a.out,
        Command::Verify(a) => &a.out,
        Command::Optimize(a) => &a.out,
        Command::Excite(a) => &a.out,
    }
}

/// Run a parsed command line; returns the exit code.
pub fn run(cli: Cli, argv: Vec<String>) -> i32 {
    if let Some(t) = cli.threads {
        // a second call in the same process fails harmlessly
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build_global();
    }
    let cap = cli.cap.unwrap_or_else(cap_from_env);
    let result = Run::new(argv, out_dir(&cli.command)).and_then(|mut run| {
        let code = match &cli.command {
            Command::Build(a) => cmd_build(a, &mut run),
            Command::Construct(a) => cmd_construct(a, &mut run),
            Command::Verify(a) => cmd_verify(a, &mut run, cap),
            Command::Optimize(a) => cmd_optimize(a, &mut run, cap),
            Command::Excite(a) => cmd_excite(a, &mut run),
        }?;
        run.finish()?;
        Ok(code)
    });
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

pub fn main() -> i32 {
    let argv: Vec<String> = std::env::args().collect();
    match Cli::try_parse_from(&argv) {
        Ok(cli) => run(cli, argv),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            code
        }
    }
}
