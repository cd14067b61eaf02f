//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a validation check failed, 2 invalid input or
//! configuration.

pub mod commands;
pub mod config;
pub mod format;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::any_to_any::RelayCase;
use crate::error::{Error, Result};
use commands::OutputFormat;
use config::{ConfigFile, RunConfig, DEFAULT_CONFIG};

pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_INVALID: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "chardist",
    version,
    about = "Characteristic hop distances and energy budgets for linear multi-hop networks"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,

    #[command(flatten)]
    pub overrides: Overrides,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Config file; the bundled reference configuration when omitted.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Output file, or `stdout`.
    #[arg(long, global = true, default_value = "stdout")]
    pub out: String,

    #[arg(long, global = true, value_enum)]
    pub format: Option<FormatArg>,

    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,

    #[arg(long, global = true, default_value_t = 1000)]
    pub trials: usize,
}

/// Per-key overrides of the config file.
#[derive(Debug, Args, Default)]
pub struct Overrides {
    #[arg(long = "e_t", global = true)]
    pub e_t: Option<String>,
    #[arg(long = "e_r", global = true)]
    pub e_r: Option<String>,
    #[arg(long = "e_d", global = true)]
    pub e_d: Option<String>,
    #[arg(long = "e_id", global = true, conflicts_with = "c")]
    pub e_id: Option<String>,
    #[arg(long = "c", global = true)]
    pub c: Option<String>,
    #[arg(long = "n", global = true)]
    pub n: Option<String>,
    #[arg(long = "D", global = true)]
    pub distance: Option<String>,
    #[arg(long = "K", global = true)]
    pub nodes: Option<String>,
    #[arg(long = "A", global = true)]
    pub packets: Option<String>,
    #[arg(long = "T_d", global = true)]
    pub cycle: Option<String>,
    #[arg(long = "P", global = true)]
    pub rate: Option<String>,
    #[arg(long = "B", global = true)]
    pub packet_bits: Option<String>,
    #[arg(long = "E_0", global = true)]
    pub initial_energy: Option<String>,
    #[arg(long = "paradigm", global = true)]
    pub paradigm: Option<String>,
}

impl Overrides {
    pub fn apply(&self, file: &mut ConfigFile) {
        if self.e_id.is_some() || self.c.is_some() {
            file.remove("e_id");
            file.remove("c");
        }
        let pairs = [
            ("e_t", &self.e_t),
            ("e_r", &self.e_r),
            ("e_d", &self.e_d),
            ("e_id", &self.e_id),
            ("c", &self.c),
            ("n", &self.n),
            ("D", &self.distance),
            ("K", &self.nodes),
            ("A", &self.packets),
            ("T_d", &self.cycle),
            ("P", &self.rate),
            ("B", &self.packet_bits),
            ("E_0", &self.initial_energy),
            ("paradigm", &self.paradigm),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                file.set(key, v);
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Human,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CaseArg {
    /// Electronics and amplifier energy only.
    #[value(name = "case1", alias = "1")]
    Case1,
    /// Also charges idle-state energy.
    #[value(name = "case2", alias = "2")]
    Case2,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Characteristic distance of a relay chain and the implied hop count.
    Dchar {
        #[arg(long, value_enum, default_value = "case1")]
        case: CaseArg,
    },
    /// Idle-aware characteristic distance as a function of the packet count.
    Sweep {
        #[arg(long)]
        a_min: u64,
        #[arg(long)]
        a_max: u64,
        #[arg(long, default_value_t = 1)]
        a_step: u64,
    },
    /// Per-node report of a data-gathering chain at its optimal spacing.
    Spacing,
    /// Per-node report of a data-gathering chain at a given spacing.
    Energy {
        /// Comma-separated hop lengths h_1..h_K in meters; equal hops when
        /// omitted.
        #[arg(long, value_delimiter = ',')]
        spacing: Option<Vec<f64>>,
    },
    /// Cross-check every closed form against the independent oracles.
    Validate,
}

fn load_config(common: &CommonArgs, overrides: &Overrides) -> Result<RunConfig> {
    let mut file = match &common.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::parse(DEFAULT_CONFIG)?,
    };
    overrides.apply(&mut file);
    RunConfig::from_file(&file)
}

/// Output text plus exit status of one invocation.
#[derive(Debug)]
pub struct Outcome {
    pub text: String,
    pub code: u8,
}

pub fn execute(cli: &Cli) -> Result<Outcome> {
    let cfg = load_config(&cli.common, &cli.overrides)?;
    let format = |default| match cli.common.format {
        Some(FormatArg::Csv) => OutputFormat::Csv,
        Some(FormatArg::Human) => OutputFormat::Human,
        None => default,
    };
    let text = match &cli.command {
        Command::Dchar { case } => {
            let case = match case {
                CaseArg::Case1 => RelayCase::NoIdle,
                CaseArg::Case2 => RelayCase::WithIdle,
            };
            commands::cmd_dchar(&cfg, case, format(OutputFormat::Human))?
        }
        Command::Sweep {
            a_min,
            a_max,
            a_step,
        } => commands::cmd_sweep(&cfg, *a_min, *a_max, *a_step, format(OutputFormat::Csv))?,
        Command::Spacing => commands::cmd_spacing(&cfg, format(OutputFormat::Csv))?,
        Command::Energy { spacing } => {
            commands::cmd_energy(&cfg, spacing.clone(), format(OutputFormat::Csv))?
        }
        Command::Validate => {
            let report = commands::cmd_validate(&cfg, cli.common.trials, cli.common.seed)?;
            let code = if report.passed() {
                0
            } else {
                EXIT_CHECK_FAILED
            };
            return Ok(Outcome {
                text: report.render(format(OutputFormat::Human)),
                code,
            });
        }
    };
    Ok(Outcome { text, code: 0 })
}

fn emit(out: &str, text: &str) -> std::io::Result<()> {
    if out == "stdout" || out == "-" {
        use std::io::Write;
        let mut stdout = std::io::stdout().lock();
        stdout.write_all(text.as_bytes())?;
        stdout.flush()
    } else {
        std::fs::write(out, text)
    }
}

/// Parses arguments, runs the command and writes its output. Nothing is
/// written unless the whole command succeeded.
pub fn run() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(outcome) => {
            if let Err(e) = emit(&cli.common.out, &outcome.text) {
                eprintln!("error: cannot write {}: {e}", cli.common.out);
                return ExitCode::from(EXIT_INVALID);
            }
            ExitCode::from(outcome.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NoConvergence { .. } => EXIT_CHECK_FAILED,
        _ => EXIT_INVALID,
    }
}
