//! The `ffdiag` command line.
//!
//! Exit codes: 0 success, 1 domain error, 2 precision exhausted, 64 usage.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Serialize, Serializer};

use crate::arith::{check_odd_prime, LaurentSeries};
use crate::autoseq::{christol_example, paperfold_int, paperfold_series, Dfao, PaperfoldParams};
use crate::diophantine::{
    grid_required_prec, littlewood_score, score_height_consistency, trajectory_grid, ConsistencyParams, ScoreParams,
};
use crate::error::Error;
use crate::quadext::beta_series;
use crate::resscalars::{run_embed_check, EmbedCheck};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_PRECISION: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MLevel {
    Auto,
    Level(u32),
}

impl FromStr for MLevel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "auto" {
            return Ok(MLevel::Auto);
        }
        s.parse::<u32>()
            .map(MLevel::Level)
            .map_err(|_| format!("expected `auto` or a positive integer, got `{s}`"))
    }
}

impl fmt::Display for MLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MLevel::Auto => write!(f, "auto"),
            MLevel::Level(m) => write!(f, "{m}"),
        }
    }
}

impl Serialize for MLevel {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            MLevel::Auto => s.serialize_str("auto"),
            MLevel::Level(m) => s.serialize_u32(*m),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CheckArg {
    Gamma,
    Hom,
    Membership,
    Conjugation,
}

impl From<CheckArg> for EmbedCheck {
    fn from(c: CheckArg) -> Self {
        match c {
            CheckArg::Gamma => EmbedCheck::Gamma,
            CheckArg::Hom => EmbedCheck::Hom,
            CheckArg::Membership => EmbedCheck::Membership,
            CheckArg::Conjugation => EmbedCheck::Conjugation,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "ffdiag", version, about = "Laurent series, paperfolding, Littlewood scores and the SL4 embedding over F_p")]
struct Cli {
    /// Odd prime.
    #[arg(long, global = true, default_value_t = 3)]
    p: u64,
    /// Absolute precision; defaults to what the command needs.
    #[arg(long, global = true, allow_negative_numbers = true)]
    prec: Option<i64>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the artifact here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads for parallel searches (output does not depend on it).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Square root of 1 + t^-1 with constant term 1.
    Beta,
    /// Terms f_1, f_2, ... of the paperfolding sequence reduced mod p.
    Paperfold {
        #[arg(long, default_value = "auto")]
        m_level: MLevel,
        #[arg(long, default_value_t = 16)]
        count: u64,
    },
    /// Finite automata with output.
    Dfao {
        #[command(subcommand)]
        action: DfaoCommand,
    },
    /// Littlewood score min |N| |<N t^k alpha>| over a finite box.
    Score {
        #[arg(long, default_value = "auto")]
        m_level: MLevel,
        #[arg(long, default_value_t = 6)]
        deg_max: usize,
        #[arg(long, default_value_t = 20)]
        shift_max: usize,
        #[arg(long, default_value_t = 1)]
        guard: usize,
        /// LaurentSeries JSON for alpha; defaults to the paperfolding series.
        #[arg(long)]
        alpha_file: Option<PathBuf>,
    },
    /// Mahler heights of the trajectory lattices for 0 <= n <= m <= grid.
    Trajectory {
        #[arg(long, default_value = "auto")]
        m_level: MLevel,
        #[arg(long, default_value_t = 20)]
        grid: usize,
        #[arg(long, default_value_t = 8)]
        guard: usize,
        #[arg(long)]
        alpha_file: Option<PathBuf>,
    },
    /// Seeded checks of the embedding psi.
    Embed {
        #[arg(long, value_enum)]
        check: CheckArg,
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// Compares trajectory heights with the Littlewood score.
    Consistency {
        #[arg(long, default_value = "auto")]
        m_level: MLevel,
        #[arg(long, default_value_t = 10)]
        grid: usize,
        #[arg(long, default_value_t = 4)]
        deg_max: usize,
        #[arg(long, default_value_t = 12)]
        shift_max: usize,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long)]
        alpha_file: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
enum DfaoCommand {
    /// Output of the automaton in FILE on input N.
    Eval {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        n: u64,
    },
    /// Outputs 0..count of the automaton for the cubic x^3 - x + t^-1.
    Christol {
        #[arg(long, default_value_t = 28)]
        count: u64,
    },
}

/// Everything that determines an artifact; embedded in every report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub p: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_level: Option<MLevel>,
    /// The level actually used once `auto` is resolved.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    pub prec: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deg_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shift_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub guard: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_file: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub check: Option<EmbedCheck>,
    pub seed: u64,
    pub output_path: Option<String>,
    pub format: Format,
}

impl RunConfig {
    fn base(command: &str, cli: &Cli, format: Format) -> Self {
        RunConfig {
            command: command.into(),
            p: cli.p,
            m_level: None,
            m: None,
            prec: cli.prec,
            deg_max: None,
            shift_max: None,
            grid: None,
            guard: None,
            samples: None,
            count: None,
            alpha_file: None,
            check: None,
            seed: cli.seed,
            output_path: cli.out.as_ref().map(|p| p.display().to_string()),
            format,
        }
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    config: &'a RunConfig,
    report: T,
}

/// Result of one invocation: exit code plus what goes to each stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn fail(code: i32, msg: String) -> Self {
        Outcome {
            code,
            stdout: String::new(),
            stderr: msg,
        }
    }
}

#[derive(Debug)]
enum CliError {
    Math(Error),
    Usage(String),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Math(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `argv` (program name first), runs the command and returns the
/// artifact without touching the process streams; `--out` is still written.
pub fn run_command(argv: &[String]) -> Outcome {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome::fail(EXIT_USAGE, text)
            } else {
                Outcome {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let result = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(&cli)),
            Err(e) => Err(CliError::Usage(format!("cannot start {n} threads: {e}"))),
        },
        None => dispatch(&cli),
    };
    match result {
        Ok(text) => match &cli.out {
            Some(path) => match std::fs::write(path, &text) {
                Ok(()) => Outcome {
                    code: EXIT_OK,
                    stdout: String::new(),
                    stderr: String::new(),
                },
                Err(e) => Outcome::fail(EXIT_DOMAIN, format!("error: cannot write {}: {e}\n", path.display())),
            },
            None => Outcome {
                code: EXIT_OK,
                stdout: text,
                stderr: String::new(),
            },
        },
        Err(CliError::Math(e)) => {
            let code = if e.is_precision() { EXIT_PRECISION } else { EXIT_DOMAIN };
            Outcome::fail(code, format!("error: {e}\n"))
        }
        Err(CliError::Usage(msg)) => Outcome::fail(EXIT_USAGE, format!("error: {msg}\n")),
        Err(CliError::Io(msg)) => Outcome::fail(EXIT_DOMAIN, format!("error: {msg}\n")),
    }
}

/// Runs the command, prints to the process streams and returns the exit code.
pub fn main_with_args(argv: &[String]) -> i32 {
    let o = run_command(argv);
    print!("{}", o.stdout);
    eprint!("{}", o.stderr);
    o.code
}

fn resolve_m(level: MLevel, p: u64) -> CliResult<PaperfoldParams> {
    Ok(match level {
        MLevel::Auto => PaperfoldParams::for_prime(p)?,
        MLevel::Level(m) => PaperfoldParams::new(m, p)?,
    })
}

fn read_alpha(path: &PathBuf, p: u64) -> CliResult<LaurentSeries> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    let alpha: LaurentSeries = serde_json::from_str(&text)
        .map_err(|e| CliError::Io(format!("{} is not a LaurentSeries: {e}", path.display())))?;
    if alpha.modulus() as u64 != p {
        return Err(Error::Domain(format!("alpha is over F_{}, but --p is {p}", alpha.modulus())).into());
    }
    Ok(alpha)
}

/// Alpha from `--alpha-file` (truncated to `--prec` if given) or the
/// paperfolding series of level `m` at precision `prec`.
fn load_alpha(
    file: &Option<PathBuf>,
    params: PaperfoldParams,
    prec: Option<i64>,
    default_prec: i64,
) -> CliResult<LaurentSeries> {
    match file {
        Some(path) => {
            let a = read_alpha(path, params.p as u64)?;
            Ok(match prec {
                Some(r) if r < a.prec() => a.truncate(r),
                _ => a,
            })
        }
        None => Ok(paperfold_series(params, prec.unwrap_or(default_prec))?),
    }
}

fn json<T: Serialize>(config: &RunConfig, report: T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(&Envelope { config, report })
        .map_err(|e| CliError::Io(format!("cannot serialize report: {e}")))?;
    s.push('\n');
    Ok(s)
}

fn config_comment(config: &RunConfig) -> String {
    format!("# config={}\n", serde_json::to_string(config).expect("config serializes"))
}

fn json_only(format: Format) -> CliResult<()> {
    match format {
        Format::Json => Ok(()),
        Format::Csv => Err(CliError::Usage("this command only writes JSON".into())),
    }
}

fn dispatch(cli: &Cli) -> CliResult<String> {
    match &cli.command {
        Command::Beta => {
            let format = cli.format.unwrap_or(Format::Json);
            json_only(format)?;
            let cfg = RunConfig::base("beta", cli, format);
            let beta = beta_series(cli.p, cli.prec.unwrap_or(16))?;
            json(&cfg, &beta)
        }
        Command::Paperfold { m_level, count } => {
            let format = cli.format.unwrap_or(Format::Csv);
            let params = resolve_m(*m_level, cli.p)?;
            let mut cfg = RunConfig::base("paperfold", cli, format);
            cfg.m_level = Some(*m_level);
            cfg.m = Some(params.m);
            cfg.count = Some(*count);
            let values = (1..=*count)
                .map(|n| Ok(paperfold_int(n, params.m)? % params.p as u64))
                .collect::<crate::Result<Vec<u64>>>()?;
            match format {
                Format::Csv => {
                    let row: Vec<String> = values.iter().map(u64::to_string).collect();
                    Ok(format!("{}{}\n", config_comment(&cfg), row.join(",")))
                }
                Format::Json => json(&cfg, &values),
            }
        }
        Command::Dfao { action } => match action {
            DfaoCommand::Eval { file, n } => {
                let text =
                    std::fs::read_to_string(file).map_err(|e| CliError::Io(format!("cannot read {}: {e}", file.display())))?;
                let aut: Dfao = serde_json::from_str(&text)
                    .map_err(|e| CliError::Io(format!("{} is not a valid automaton: {e}", file.display())))?;
                Ok(format!("{}\n", aut.eval(*n)))
            }
            DfaoCommand::Christol { count } => {
                let format = cli.format.unwrap_or(Format::Csv);
                let mut cfg = RunConfig::base("dfao christol", cli, format);
                cfg.count = Some(*count);
                let aut = christol_example();
                let values: Vec<u32> = (0..*count).map(|n| aut.eval(n)).collect();
                match format {
                    Format::Csv => {
                        let row: Vec<String> = values.iter().map(u32::to_string).collect();
                        Ok(format!("{}{}\n", config_comment(&cfg), row.join(",")))
                    }
                    Format::Json => json(&cfg, &values),
                }
            }
        },
        Command::Score {
            m_level,
            deg_max,
            shift_max,
            guard,
            alpha_file,
        } => {
            let format = cli.format.unwrap_or(Format::Json);
            json_only(format)?;
            let params = resolve_m(*m_level, cli.p)?;
            let sp = ScoreParams {
                deg_max: *deg_max,
                shift_max: *shift_max,
                guard: *guard,
            };
            let alpha = load_alpha(alpha_file, params, cli.prec, sp.required_prec())?;
            let mut cfg = RunConfig::base("score", cli, format);
            cfg.m_level = Some(*m_level);
            cfg.m = alpha_file.is_none().then_some(params.m);
            cfg.prec = Some(alpha.prec());
            cfg.deg_max = Some(*deg_max);
            cfg.shift_max = Some(*shift_max);
            cfg.guard = Some(*guard);
            cfg.alpha_file = alpha_file.as_ref().map(|p| p.display().to_string());
            let report = littlewood_score(&alpha, sp)?;
            json(&cfg, &report)
        }
        Command::Trajectory {
            m_level,
            grid,
            guard,
            alpha_file,
        } => {
            let format = cli.format.unwrap_or(Format::Csv);
            let params = resolve_m(*m_level, cli.p)?;
            let alpha = load_alpha(alpha_file, params, cli.prec, grid_required_prec(*grid, *guard))?;
            let mut cfg = RunConfig::base("trajectory", cli, format);
            cfg.m_level = Some(*m_level);
            cfg.m = alpha_file.is_none().then_some(params.m);
            cfg.prec = Some(alpha.prec());
            cfg.grid = Some(*grid);
            cfg.guard = Some(*guard);
            cfg.alpha_file = alpha_file.as_ref().map(|p| p.display().to_string());
            let g = trajectory_grid(&alpha, *grid, *guard)?;
            match format {
                Format::Csv => Ok(format!("{}{}", config_comment(&cfg), g.to_csv())),
                Format::Json => json(&cfg, &g),
            }
        }
        Command::Embed { check, samples } => {
            let format = cli.format.unwrap_or(Format::Json);
            json_only(format)?;
            let prec = cli.prec.unwrap_or(30);
            let mut cfg = RunConfig::base("embed", cli, format);
            cfg.prec = Some(prec);
            cfg.samples = Some(*samples);
            cfg.check = Some((*check).into());
            let report = run_embed_check((*check).into(), check_odd_prime(cli.p)?, prec, *samples, cli.seed)?;
            json(&cfg, &report)
        }
        Command::Consistency {
            m_level,
            grid,
            deg_max,
            shift_max,
            samples,
            alpha_file,
        } => {
            let format = cli.format.unwrap_or(Format::Json);
            json_only(format)?;
            let params = resolve_m(*m_level, cli.p)?;
            let sp = ScoreParams::new(*deg_max, *shift_max);
            let need = sp.required_prec().max(grid_required_prec(*grid, 1));
            let alpha = load_alpha(alpha_file, params, cli.prec, need)?;
            let mut cfg = RunConfig::base("consistency", cli, format);
            cfg.m_level = Some(*m_level);
            cfg.m = alpha_file.is_none().then_some(params.m);
            cfg.prec = Some(alpha.prec());
            cfg.grid = Some(*grid);
            cfg.deg_max = Some(*deg_max);
            cfg.shift_max = Some(*shift_max);
            cfg.samples = Some(*samples);
            cfg.alpha_file = alpha_file.as_ref().map(|p| p.display().to_string());
            let report = score_height_consistency(
                &alpha,
                ConsistencyParams {
                    max_m: *grid,
                    score: sp,
                    samples: *samples,
                    seed: cli.seed,
                },
            )?;
            json(&cfg, &report)
        }
    }
}
