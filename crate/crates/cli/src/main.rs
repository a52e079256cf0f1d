//! `symdyn` command line.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use serde_json::Value;

use symdyn::config::SystemConfig;
use symdyn::error::ErrorKind;
use symdyn::{Caps, Subshift};

use report::{emit, sha256_hex, to_json, versions, RunReport};

#[derive(Parser, Debug)]
#[command(name = "symdyn", version, about = "Finite symbolic dynamics: entropy, towers and recurrence")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// TOML system description.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Write the main table of the report as CSV.
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,
    #[arg(long, global = true)]
    pub cap_states: Option<u64>,
    /// Word length, partition resolution or marker bound, by command.
    #[arg(long, global = true)]
    pub resolution: Option<usize>,
    /// Fixed-point bits for Weyl sums and Bohr sets.
    #[arg(long, global = true)]
    pub precision: Option<u32>,
    /// Omit wall time and timestamp so reports are byte-identical.
    #[arg(long, global = true)]
    pub no_timestamp: bool,
    /// Seed for declared deterministic sampling.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Cover entropy with an SFT entropy cross-check.
    Entropy(commands::EntropyArgs),
    /// Counting lemma table for low-entropy words.
    Lemma(commands::LemmaArgs),
    /// Open-cover variational principle: ȟ, ĥ, h_top and an attaining measure.
    Varprinciple(commands::VarArgs),
    /// Rohlin and Kakutani-Rohlin towers, return times, uniformity.
    Tower(commands::TowerArgs),
    /// Return-time sets and recurrence families.
    Recur(commands::RecurArgs),
    /// Weyl averages and rotation recurrence along a sequence.
    Weyl(commands::WeylArgs),
    /// Transitivity and mixing of an SFT.
    Classify(commands::ClassifyArgs),
}

#[derive(Debug)]
pub enum CliError {
    Lib(symdyn::Error),
    Io(String),
}

impl From<symdyn::Error> for CliError {
    fn from(e: symdyn::Error) -> Self {
        CliError::Lib(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(e) => match e.kind() {
                ErrorKind::Validation => 2,
                ErrorKind::Resource => 3,
                ErrorKind::Precondition => 4,
            },
            CliError::Io(_) => 2,
        }
    }

    fn describe(&self) -> String {
        match self {
            CliError::Lib(e) => {
                let kind = match e.kind() {
                    ErrorKind::Validation => "validation",
                    ErrorKind::Resource => "resource cap",
                    ErrorKind::Precondition => "precondition",
                };
                format!("{kind} error: {e}")
            }
            CliError::Io(m) => format!("io error: {m}"),
        }
    }
}

/// Loaded system plus the bytes it came from.
pub struct Context {
    pub global: Global,
    pub caps: Caps,
    config: Option<(SystemConfig, Vec<u8>)>,
}

impl Context {
    pub fn system(&self) -> Result<Subshift, CliError> {
        let (c, _) = self
            .config
            .as_ref()
            .ok_or_else(|| symdyn::Error::Config("this command needs --config".into()))?;
        Ok(c.build(self.caps)?)
    }

    pub fn seed(&self) -> u64 {
        self.global.seed.unwrap_or(0)
    }
}

fn load(global: &Global) -> Result<Context, CliError> {
    let mut caps = Caps::default();
    if let Some(s) = global.cap_states {
        if s == 0 {
            return Err(symdyn::Error::InvalidArgument("--cap-states must be positive".into()).into());
        }
        caps.states = s;
    }
    let config = match &global.config {
        Some(p) => {
            let bytes = std::fs::read(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
            let text = String::from_utf8(bytes.clone())
                .map_err(|_| symdyn::Error::Config(format!("{}: not UTF-8", p.display())))?;
            let c = SystemConfig::parse(&text)
                .map_err(|e| symdyn::Error::Config(format!("{}: {}", p.display(), e.to_string().trim_start_matches("config error: "))))?;
            Some((c, bytes))
        }
        None => None,
    };
    Ok(Context { global: global.clone(), caps, config })
}

fn run(cli: Cli) -> Result<(), CliError> {
    let t0 = Instant::now();
    let ctx = load(&cli.global)?;
    let (name, outcome) = match &cli.command {
        Command::Entropy(a) => ("entropy", commands::entropy(&ctx, a)?),
        Command::Lemma(a) => ("lemma", commands::lemma(&ctx, a)?),
        Command::Varprinciple(a) => ("varprinciple", commands::varprinciple(&ctx, a)?),
        Command::Tower(a) => ("tower", commands::tower(&ctx, a)?),
        Command::Recur(a) => ("recur", commands::recur(&ctx, a)?),
        Command::Weyl(a) => ("weyl", commands::weyl(&ctx, a)?),
        Command::Classify(a) => ("classify", commands::classify(&ctx, a)?),
    };
    let (config_digest, digest_of, config) = match &ctx.config {
        Some((c, bytes)) => (
            sha256_hex(bytes),
            "config",
            serde_json::to_value(c).map_err(|e| CliError::Io(e.to_string()))?,
        ),
        None => {
            let canon = serde_json::to_string(&outcome.parameters).map_err(|e| CliError::Io(e.to_string()))?;
            (sha256_hex(canon.as_bytes()), "parameters", Value::Null)
        }
    };
    let stamp = !cli.global.no_timestamp;
    let report = RunReport {
        command: name.into(),
        config_digest,
        digest_of,
        config,
        parameters: outcome.parameters,
        results: outcome.results,
        tolerances: outcome.tolerances,
        caps: ctx.caps,
        versions: versions(),
        wall_time_s: stamp.then(|| t0.elapsed().as_secs_f64()),
        timestamp_unix: stamp.then(|| SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())),
    };
    if let Some(p) = &cli.global.csv {
        match &outcome.table {
            Some(t) => t.write(p)?,
            None => {
                return Err(symdyn::Error::InvalidArgument(format!("{name} has no table to write as CSV")).into());
            }
        }
    }
    emit(&to_json(&report)?, cli.global.out.as_deref())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("symdyn: {}", e.describe());
            ExitCode::from(e.exit_code())
        }
    }
}
