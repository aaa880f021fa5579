//! Experiment configuration. A run is described by a JSON file, by flags, or
//! by both; flags override file entries and anything left unset falls back
//! to the defaults listed in [`RunConfig::resolve`].

use std::path::{Path, PathBuf};

use bergman::means::{default_t_grid, radii_ladder};
use bergman::{MeanKind, TestFunction};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Parser, Debug)]
#[command(name = "bergman", version, about = "Numerical lab for weighted Bergman spaces")]
pub struct Cli {
    /// JSON config file; flags given on the command line override it.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Integral means of a function on a set of radii.
    Means(Params),
    /// Growth-exponent fit of one mean along a ladder of radii.
    Growth(Params),
    /// Second-difference smoothness profile over a t-grid.
    Holder(Params),
    /// Solves the linear-functional extremal problem for a kernel k.
    Extremal(Params),
    /// Runs one theorem verifier, or the built-in battery (`all`,
    /// `growth-transfer`, `holder-transfer`).
    Verify {
        theorem: Option<String>,
        #[command(flatten)]
        params: Params,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum CommandKind {
    Means,
    Growth,
    Holder,
    Extremal,
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Settings shared by every command. Field names double as JSON keys.
#[derive(Args, Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    /// Test function, e.g. `monomial:3`, `pole:0.5`, `random:8:1:42`,
    /// `truncated-pole:0.25:16`, `binomial:0.5:32`, `poly:1,0,-2`.
    #[arg(long = "fn", visible_alias = "k", value_name = "SPEC")]
    #[serde(rename = "fn", alias = "k")]
    pub function: Option<String>,
    /// Mean kinds: circle, a, a-tilde, a-hat, a-hat-tilde (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub kind: Option<Vec<String>>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    /// Exponent in the growth or smoothness hypothesis.
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    /// Hypothesis constant; estimated from the data when absent.
    #[arg(long = "B")]
    #[serde(rename = "B")]
    pub b: Option<f64>,
    /// Explicit radii (comma separated); overrides the ladder.
    #[arg(long, value_delimiter = ',')]
    pub r: Option<Vec<f64>>,
    /// Ladder `r_j = 1 - 2^-j` for `j` in `J_MIN..=J_MAX`.
    #[arg(long, num_args = 2, value_names = ["J_MIN", "J_MAX"])]
    pub ladder: Option<Vec<u32>>,
    /// t values for second differences (comma separated).
    #[arg(long = "t-grid", value_delimiter = ',')]
    #[serde(rename = "t_grid")]
    pub t_grid: Option<Vec<f64>>,
    /// Truncation degree of the extremal problem.
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub degree: Option<usize>,
    /// Radial node count of a plain Gauss-Jacobi extremal quadrature.
    #[arg(long)]
    pub radial_nodes: Option<usize>,
    /// Angular node count of the extremal quadrature.
    #[arg(long)]
    pub angular_count: Option<usize>,
    /// Stationarity tolerance of the extremal solver.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_iters: Option<usize>,
    /// `integrate` or `differentiate` for derivative-transfer.
    #[arg(long)]
    pub direction: Option<String>,
    /// Logarithmic growth hypothesis for area-to-hardy.
    #[arg(long)]
    #[serde(default)]
    pub log_growth: bool,
    /// Use the dilated-norm mean in area-to-hardy.
    #[arg(long)]
    #[serde(default)]
    pub hat: bool,
    /// Seed of the random battery members.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file (or directory for per-report files with `verify`).
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

/// A malformed configuration (exit status 64).
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

struct FileConfig {
    command: Option<CommandKind>,
    theorem: Option<String>,
    params: Params,
}

fn read_file(path: &Path) -> Result<FileConfig, UsageError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| UsageError(format!("cannot read config {}: {e}", path.display())))?;
    let mut value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| UsageError(format!("config {} is not valid JSON: {e}", path.display())))?;
    let obj = value
        .as_object_mut()
        .ok_or_else(|| UsageError(format!("config {} must hold a JSON object", path.display())))?;
    let command = obj
        .remove("command")
        .map(serde_json::from_value::<CommandKind>)
        .transpose()
        .map_err(|e| UsageError(format!("bad command in config: {e}")))?;
    let theorem = obj
        .remove("theorem")
        .map(serde_json::from_value::<String>)
        .transpose()
        .map_err(|e| UsageError(format!("bad theorem in config: {e}")))?;
    let params = serde_json::from_value::<Params>(value).map_err(|e| UsageError(format!("bad config entry: {e}")))?;
    Ok(FileConfig { command, theorem, params })
}

/// Fully resolved settings of one run; serialised into every output header.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: CommandKind,
    pub theorem: Option<String>,
    #[serde(rename = "fn")]
    pub function: Option<String>,
    pub kinds: Vec<String>,
    pub p: f64,
    pub alpha: f64,
    pub beta: Option<f64>,
    #[serde(rename = "B")]
    pub b: Option<f64>,
    pub radii: Vec<f64>,
    pub t_grid: Vec<f64>,
    #[serde(rename = "N")]
    pub degree: usize,
    pub radial_nodes: Option<usize>,
    pub angular_count: Option<usize>,
    pub tol: f64,
    pub max_iters: usize,
    pub direction: String,
    pub log_growth: bool,
    pub hat: bool,
    pub seed: u64,
    pub format: Format,
    /// Names of the settings that took their default value.
    pub defaulted: Vec<String>,
    #[serde(skip)]
    pub output: Option<PathBuf>,
}

pub const DEFAULT_P: f64 = 2.0;
pub const DEFAULT_ALPHA: f64 = 0.0;
pub const DEFAULT_LADDER: (u32, u32) = (3, 12);
pub const DEFAULT_DEGREE: usize = 16;
pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_MAX_ITERS: usize = 100;
pub const DEFAULT_SEED: u64 = 0;

impl RunConfig {
    /// Merges flags over the config file over the defaults: `p = 2`,
    /// `alpha = 0`, ladder `3..=12`, t-grid `pi 2^-j` (`j = 0..=10`), `N = 16`,
    /// `tol = 1e-8`, `max_iters = 100`, direction `integrate`, seed 0, all
    /// five kinds for `means` and `a-hat` for `growth`, CSV for `means`,
    /// `growth` and `holder` and JSON otherwise.
    pub fn resolve(cli: Cli) -> Result<RunConfig, UsageError> {
        let file = cli.config.as_deref().map(read_file).transpose()?;
        let (cmd, theorem, flags) = match cli.command {
            Some(Command::Means(p)) => (Some(CommandKind::Means), None, p),
            Some(Command::Growth(p)) => (Some(CommandKind::Growth), None, p),
            Some(Command::Holder(p)) => (Some(CommandKind::Holder), None, p),
            Some(Command::Extremal(p)) => (Some(CommandKind::Extremal), None, p),
            Some(Command::Verify { theorem, params }) => (Some(CommandKind::Verify), theorem, params),
            None => (None, None, Params::default()),
        };
        let (file_cmd, file_theorem, file) = match file {
            Some(f) => (f.command, f.theorem, f.params),
            None => (None, None, Params::default()),
        };
        let command = cmd
            .or(file_cmd)
            .ok_or_else(|| UsageError("no command given (use a subcommand or \"command\" in the config)".into()))?;
        let mut defaulted = Vec::new();
        macro_rules! pick {
            ($field:ident, $name:expr, $default:expr) => {
                match flags.$field.clone().or(file.$field.clone()) {
                    Some(v) => v,
                    None => {
                        defaulted.push($name.to_string());
                        $default
                    }
                }
            };
        }

        let function = flags.function.clone().or(file.function.clone());
        if let Some(spec) = &function {
            TestFunction::parse(spec).map_err(|e| UsageError(e.to_string()))?;
        }
        let default_kinds = match command {
            CommandKind::Growth => vec!["a-hat".to_string()],
            _ => MeanKind::ALL.iter().map(|k| kind_flag(*k).to_string()).collect(),
        };
        let kinds: Vec<String> = pick!(kind, "kind", default_kinds);
        for k in &kinds {
            MeanKind::parse(k).map_err(|e| UsageError(e.to_string()))?;
        }
        let p = pick!(p, "p", DEFAULT_P);
        let alpha = pick!(alpha, "alpha", DEFAULT_ALPHA);
        let beta = flags.beta.or(file.beta);
        let b = flags.b.or(file.b);
        let radii = match flags.r.clone().or(file.r.clone()) {
            Some(r) => r,
            None => {
                let ladder = pick!(ladder, "ladder", vec![DEFAULT_LADDER.0, DEFAULT_LADDER.1]);
                if ladder.len() != 2 || ladder[0] > ladder[1] {
                    return Err(UsageError("ladder needs J_MIN <= J_MAX".into()));
                }
                radii_ladder(ladder[0], ladder[1])
            }
        };
        let t_grid = pick!(t_grid, "t_grid", default_t_grid());
        let degree = pick!(degree, "N", DEFAULT_DEGREE);
        let radial_nodes = flags.radial_nodes.or(file.radial_nodes);
        let angular_count = flags.angular_count.or(file.angular_count);
        let tol = pick!(tol, "tol", DEFAULT_TOL);
        let max_iters = pick!(max_iters, "max_iters", DEFAULT_MAX_ITERS);
        let direction = pick!(direction, "direction", "integrate".to_string());
        if !matches!(direction.as_str(), "integrate" | "differentiate") {
            return Err(UsageError(format!("direction must be integrate or differentiate, got {direction:?}")));
        }
        let seed = pick!(seed, "seed", DEFAULT_SEED);
        let default_format = match command {
            CommandKind::Means | CommandKind::Growth | CommandKind::Holder => Format::Csv,
            CommandKind::Extremal | CommandKind::Verify => Format::Json,
        };
        let format = pick!(format, "format", default_format);
        let theorem = theorem.or(file_theorem);
        if command == CommandKind::Verify && theorem.is_none() {
            return Err(UsageError("verify needs a theorem name or `all`".into()));
        }
        Ok(RunConfig {
            command,
            theorem,
            function,
            kinds,
            p,
            alpha,
            beta,
            b,
            radii,
            t_grid,
            degree,
            radial_nodes,
            angular_count,
            tol,
            max_iters,
            direction,
            log_growth: flags.log_growth || file.log_growth,
            hat: flags.hat || file.hat,
            seed,
            format,
            defaulted,
            output: flags.output.or(file.output),
        })
    }

    /// The test function, which `name` requires.
    pub fn function(&self, name: &str) -> Result<bergman::AnalyticFunction, UsageError> {
        let spec = self.function.as_deref().ok_or_else(|| UsageError(format!("{name} needs --fn")))?;
        TestFunction::parse(spec).and_then(|t| t.build()).map_err(|e| UsageError(e.to_string()))
    }

    pub fn mean_kinds(&self) -> Vec<MeanKind> {
        self.kinds.iter().map(|k| MeanKind::parse(k).expect("validated in resolve")).collect()
    }

    pub fn beta_or(&self, name: &str) -> Result<f64, UsageError> {
        self.beta.ok_or_else(|| UsageError(format!("{name} needs --beta")))
    }
}

fn kind_flag(kind: MeanKind) -> &'static str {
    match kind {
        MeanKind::CircleMp => "circle",
        MeanKind::AreaA => "a",
        MeanKind::AreaATilde => "a-tilde",
        MeanKind::AreaAHat => "a-hat",
        MeanKind::AreaAHatTilde => "a-hat-tilde",
    }
}
