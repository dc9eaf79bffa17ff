//! Run configuration: defaults, `key = value` files, then command-line flags.

use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};

use super::CliError;
use crate::dynamics::Engine;
use crate::model::{resonance_frequency, SystemParams};

/// Environment variable consulted for the seed when neither a flag nor the
/// config file sets one.
pub const SEED_ENV: &str = "PULSEDISTILL_SEED";
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_PAIRS: u64 = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Local and dressed spectra, resonance and RWA validity (JSON).
    Spectrum,
    /// Populations and concurrences along a time grid.
    Evolve,
    /// Exact integration against the rotating-wave solution.
    CompareRwa,
    /// Optimal pulse plus an N-pair Monte Carlo run.
    Distill,
    /// Initial concurrence, yield and efficiency over a θ grid.
    Sweep,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Command::Spectrum => "spectrum",
            Command::Evolve => "evolve",
            Command::CompareRwa => "compare-rwa",
            Command::Distill => "distill",
            Command::Sweep => "sweep",
        };
        f.write_str(name)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// Fully resolved settings for one invocation.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub params: SystemParams,
    /// End of the time grid in units of 1/g (physical time when g = 0).
    pub t_max: Option<f64>,
    pub points: Option<usize>,
    /// Exact-engine step in physical time.
    pub dt: Option<f64>,
    pub theta_grid: Option<Vec<f64>>,
    pub n_pairs: u64,
    pub seed: u64,
    pub engine: Engine,
    pub output_path: Option<PathBuf>,
    pub format: Option<Format>,
    /// Allow θ > π/4 via the ↓-transition protocol.
    pub mirror: bool,
}

#[derive(Parser, Debug)]
#[command(
    name = "pulsedistill",
    about = "Entanglement distillation by a local resonant pulse",
    version
)]
struct Cli {
    command: Command,
    /// `key = value` configuration file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Spin Larmor frequency (default 1).
    #[arg(long = "omega-s", visible_alias = "omega_s", allow_hyphen_values = true)]
    omega_s: Option<String>,
    /// Band Larmor frequency (default 2).
    #[arg(long = "omega-b", visible_alias = "omega_b", allow_hyphen_values = true)]
    omega_b: Option<String>,
    /// Spin-band coupling (default 0.5).
    #[arg(long = "j", visible_alias = "J", allow_hyphen_values = true)]
    j: Option<String>,
    /// Pulse amplitude (default 0.05).
    #[arg(long, allow_hyphen_values = true)]
    g: Option<String>,
    /// Pulse frequency (default: the spin-up band resonance).
    #[arg(long, allow_hyphen_values = true)]
    omega: Option<String>,
    /// Pulse phase (default 0).
    #[arg(long, allow_hyphen_values = true)]
    phi: Option<String>,
    /// Initial state angle; accepts forms like pi/6 (default pi/6).
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<String>,
    /// End of the time grid, in units of 1/g.
    #[arg(long = "t-max", visible_alias = "t_max", allow_hyphen_values = true)]
    t_max: Option<String>,
    /// Number of grid points.
    #[arg(long)]
    points: Option<String>,
    /// Exact-engine step in physical time.
    #[arg(long, allow_hyphen_values = true)]
    dt: Option<String>,
    /// Comma-separated θ values for sweep.
    #[arg(long = "theta-grid", visible_alias = "theta_grid")]
    theta_grid: Option<String>,
    /// Monte Carlo pairs (default 100000).
    #[arg(long = "n-pairs", visible_alias = "n_pairs")]
    n_pairs: Option<String>,
    /// Random seed; falls back to PULSEDISTILL_SEED, then 42.
    #[arg(long)]
    seed: Option<String>,
    /// rwa or exact (default rwa).
    #[arg(long)]
    engine: Option<String>,
    /// Write the result here instead of stdout.
    #[arg(long, visible_alias = "output_path")]
    output: Option<String>,
    /// csv or json.
    #[arg(long)]
    format: Option<String>,
    /// Use the spin-down protocol for θ above π/4 (true/false).
    #[arg(long)]
    mirror: Option<String>,
}

impl Cli {
    fn overrides(&self) -> Vec<(&'static str, &str)> {
        let pairs: [(&'static str, &Option<String>); 17] = [
            ("omega_s", &self.omega_s),
            ("omega_b", &self.omega_b),
            ("j", &self.j),
            ("g", &self.g),
            ("omega", &self.omega),
            ("phi", &self.phi),
            ("theta", &self.theta),
            ("t_max", &self.t_max),
            ("points", &self.points),
            ("dt", &self.dt),
            ("theta_grid", &self.theta_grid),
            ("n_pairs", &self.n_pairs),
            ("seed", &self.seed),
            ("engine", &self.engine),
            ("output", &self.output),
            ("format", &self.format),
            ("mirror", &self.mirror),
        ];
        pairs
            .into_iter()
            .filter_map(|(k, v)| v.as_deref().map(|v| (k, v)))
            .collect()
    }
}

/// Partially specified settings accumulated from file and flags.
#[derive(Default)]
struct Builder {
    omega_s: Option<f64>,
    omega_b: Option<f64>,
    j: Option<f64>,
    g: Option<f64>,
    omega: Option<f64>,
    phi: Option<f64>,
    theta: Option<f64>,
    t_max: Option<f64>,
    points: Option<usize>,
    dt: Option<f64>,
    theta_grid: Option<Vec<f64>>,
    n_pairs: Option<u64>,
    seed: Option<u64>,
    engine: Option<Engine>,
    output: Option<PathBuf>,
    format: Option<Format>,
    mirror: Option<bool>,
}

/// Parses a real number, also accepting `pi`, `pi/N`, `M*pi` and `M*pi/N`.
pub fn parse_real(text: &str) -> Option<f64> {
    let s = text.trim();
    if let Ok(v) = s.parse::<f64>() {
        return Some(v);
    }
    let lower = s.to_ascii_lowercase();
    let (num, den) = match lower.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim().parse::<f64>().ok()?)),
        None => (lower.as_str(), None),
    };
    let numerator = match num.strip_suffix("pi") {
        Some("") => std::f64::consts::PI,
        Some(prefix) => prefix.trim().strip_suffix('*')?.trim().parse::<f64>().ok()? * std::f64::consts::PI,
        None => num.parse::<f64>().ok()?,
    };
    Some(match den {
        Some(d) => numerator / d,
        None => numerator,
    })
}

fn bad(key: &str, value: &str, what: &str, line: Option<usize>) -> CliError {
    CliError::Config {
        key: Some(key.to_string()),
        line,
        message: format!("invalid value `{value}` for `{key}`: expected {what}"),
    }
}

impl Builder {
    fn set(&mut self, key: &str, value: &str, line: Option<usize>) -> Result<(), CliError> {
        let real = || {
            parse_real(value)
                .filter(|v| v.is_finite())
                .ok_or_else(|| bad(key, value, "a finite number", line))
        };
        let count = || {
            value
                .trim()
                .parse::<u64>()
                .map_err(|_| bad(key, value, "a non-negative integer", line))
        };
        match key {
            "omega_s" => self.omega_s = Some(real()?),
            "omega_b" => self.omega_b = Some(real()?),
            "j" | "J" => self.j = Some(real()?),
            "g" => self.g = Some(real()?),
            "omega" => self.omega = Some(real()?),
            "phi" => self.phi = Some(real()?),
            "theta" => self.theta = Some(real()?),
            "t_max" => self.t_max = Some(real()?),
            "dt" => self.dt = Some(real()?),
            "points" => self.points = Some(count()? as usize),
            "n_pairs" => self.n_pairs = Some(count()?),
            "seed" => self.seed = Some(count()?),
            "theta_grid" => {
                let grid = value
                    .split(',')
                    .map(|item| parse_real(item).filter(|v| v.is_finite()))
                    .collect::<Option<Vec<f64>>>()
                    .filter(|g| !g.is_empty())
                    .ok_or_else(|| bad(key, value, "a comma-separated list of numbers", line))?;
                self.theta_grid = Some(grid);
            }
            "engine" => {
                self.engine = Some(match value.trim() {
                    "rwa" => Engine::Rwa,
                    "exact" => Engine::Exact,
                    _ => return Err(bad(key, value, "`rwa` or `exact`", line)),
                })
            }
            "format" => {
                self.format = Some(match value.trim() {
                    "csv" => Format::Csv,
                    "json" => Format::Json,
                    _ => return Err(bad(key, value, "`csv` or `json`", line)),
                })
            }
            "output" | "output_path" => {
                let v = value.trim();
                if v.is_empty() {
                    return Err(bad(key, value, "a path", line));
                }
                self.output = Some(PathBuf::from(v));
            }
            "mirror" => {
                self.mirror = Some(match value.trim() {
                    "true" | "1" | "yes" => true,
                    "false" | "0" | "no" => false,
                    _ => return Err(bad(key, value, "a boolean", line)),
                })
            }
            other => {
                return Err(CliError::Config {
                    key: Some(other.to_string()),
                    line,
                    message: format!("unknown key `{other}`"),
                })
            }
        }
        Ok(())
    }

    fn load_file_text(&mut self, text: &str) -> Result<(), CliError> {
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| CliError::Config {
                key: None,
                line: Some(line_no),
                message: format!("line {line_no}: expected `key = value`, got `{content}`"),
            })?;
            self.set(key.trim(), value.trim(), Some(line_no))?;
        }
        Ok(())
    }

    fn build(self, command: Command, env_seed: Option<&str>) -> Result<RunConfig, CliError> {
        let seed = match (self.seed, env_seed) {
            (Some(s), _) => s,
            (None, Some(text)) => text.trim().parse::<u64>().map_err(|_| CliError::Config {
                key: Some(SEED_ENV.to_string()),
                line: None,
                message: format!("{SEED_ENV}=`{text}` is not a non-negative integer"),
            })?,
            (None, None) => DEFAULT_SEED,
        };
        let defaults = SystemParams::default();
        let mut params = SystemParams {
            omega_s: self.omega_s.unwrap_or(defaults.omega_s),
            omega_b: self.omega_b.unwrap_or(defaults.omega_b),
            j: self.j.unwrap_or(defaults.j),
            g: self.g.unwrap_or(defaults.g),
            omega: 0.0,
            phi: self.phi.unwrap_or(defaults.phi),
            theta: self.theta.unwrap_or(defaults.theta),
        };
        params.omega = self.omega.unwrap_or_else(|| resonance_frequency(&params));

        let cfg = RunConfig {
            command,
            params,
            t_max: self.t_max,
            points: self.points,
            dt: self.dt,
            theta_grid: self.theta_grid,
            n_pairs: self.n_pairs.unwrap_or(DEFAULT_PAIRS),
            seed,
            engine: self.engine.unwrap_or_default(),
            output_path: self.output,
            format: self.format,
            mirror: self.mirror.unwrap_or(false),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

fn invalid(key: &str, message: impl Into<String>) -> CliError {
    CliError::Config {
        key: Some(key.to_string()),
        line: None,
        message: message.into(),
    }
}

impl RunConfig {
    /// Checks every field the command will use.
    pub fn validate(&self) -> Result<(), CliError> {
        self.params
            .validate()
            .map_err(|e| invalid("params", e.to_string()))?;
        if !(self.params.omega > 0.0) {
            return Err(invalid(
                "omega",
                format!(
                    "pulse frequency must be positive (got {}); omega_b = J gives a degenerate resonance",
                    self.params.omega
                ),
            ));
        }
        if let Some(t) = self.t_max {
            if !(t >= 0.0) {
                return Err(invalid("t_max", "t_max must be >= 0"));
            }
        }
        if let Some(n) = self.points {
            if n < 2 {
                return Err(invalid("points", "points must be at least 2"));
            }
        }
        if let Some(dt) = self.dt {
            if !(dt > 0.0) {
                return Err(invalid("dt", "dt must be > 0"));
            }
        }
        if self.n_pairs == 0 {
            return Err(invalid("n_pairs", "n_pairs must be at least 1"));
        }
        if let Some(grid) = &self.theta_grid {
            let upper = if self.mirror {
                std::f64::consts::FRAC_PI_2
            } else {
                std::f64::consts::FRAC_PI_4 + 1e-15
            };
            if let Some(bad) = grid.iter().find(|&&t| !(t > 0.0 && t <= upper)) {
                return Err(invalid(
                    "theta_grid",
                    format!("theta {bad} outside (0, pi/4] (set mirror = true for theta > pi/4)"),
                ));
            }
        }
        match (self.command, self.format) {
            (Command::Spectrum, Some(Format::Csv)) => {
                Err(invalid("format", "spectrum is reported as JSON only"))
            }
            _ => Ok(()),
        }
    }

    pub fn format_or(&self, fallback: Format) -> Format {
        self.format.unwrap_or(fallback)
    }
}

/// Resolves a configuration from command-line arguments (including the
/// program name), an optional config file named by `--config`, and the seed
/// environment variable value.
pub fn parse_config<I, T>(args: I, env_seed: Option<&str>) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(CliError::Clap)?;
    let mut builder = Builder::default();
    if let Some(path) = &cli.config {
        let text = read_config_file(path)?;
        builder.load_file_text(&text)?;
    }
    for (key, value) in cli.overrides() {
        builder.set(key, value, None)?;
    }
    builder.build(cli.command, env_seed)
}

/// Parses config-file text alone (no flags) for `command`.
pub fn parse_config_text(command: Command, text: &str) -> Result<RunConfig, CliError> {
    let mut builder = Builder::default();
    builder.load_file_text(text)?;
    builder.build(command, None)
}

fn read_config_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Config {
        key: Some("config".into()),
        line: None,
        message: format!("cannot read config file {}: {e}", path.display()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn parse(args: &[&str]) -> Result<RunConfig, CliError> {
        let mut full = vec!["pulsedistill"];
        full.extend_from_slice(args);
        parse_config(full, None)
    }

    #[test]
    fn defaults() {
        let cfg = parse(&["spectrum"]).unwrap();
        assert_eq!(cfg.params, SystemParams::default());
        assert_eq!(cfg.params.omega, 3.0);
        assert_eq!(cfg.seed, 42);
        assert_eq!(cfg.engine, Engine::Rwa);
    }

    #[test]
    fn flags_set_values() {
        let cfg = parse(&["evolve", "--theta", "0.5235988", "--g", "0.05"]).unwrap();
        assert!((cfg.params.theta - PI / 6.0).abs() < 1e-7);
        assert_eq!(cfg.params.g, 0.05);
        let cfg = parse(&["evolve", "--theta", "pi/6", "--omega_s", "-1.5"]).unwrap();
        assert_eq!(cfg.params.theta, PI / 6.0);
        assert_eq!(cfg.params.omega_s, -1.5);
    }

    #[test]
    fn flag_overrides_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.conf");
        std::fs::write(&path, "# pulse\ng = 0.1\ntheta = 0.3  # radians\n\nseed=7\n").unwrap();
        let cfg = parse(&["evolve", "--config", path.to_str().unwrap(), "--g", "0.05"]).unwrap();
        assert_eq!(cfg.params.g, 0.05);
        assert_eq!(cfg.params.theta, 0.3);
        assert_eq!(cfg.seed, 7);
    }

    #[test]
    fn unknown_key_is_named() {
        let err = parse_config_text(Command::Evolve, "g = 0.05\ngamma=1\n").unwrap_err();
        match &err {
            CliError::Config { key, line, .. } => {
                assert_eq!(key.as_deref(), Some("gamma"));
                assert_eq!(*line, Some(2));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("gamma"));
    }

    #[test]
    fn unknown_flag_is_config_error() {
        let err = parse(&["evolve", "--gamma", "1"]).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn malformed_values() {
        assert!(parse_config_text(Command::Evolve, "g = fast").is_err());
        assert!(parse_config_text(Command::Evolve, "just text").is_err());
        assert!(parse_config_text(Command::Evolve, "engine = magic").is_err());
        assert!(parse_config_text(Command::Evolve, "g = -0.1").is_err());
        assert!(parse_config_text(Command::Evolve, "omega_b = 0.5").is_err());
        assert!(parse_config_text(Command::Sweep, "theta_grid = 0.1, 1.2").is_err());
        assert!(parse_config_text(Command::Sweep, "theta_grid = 0.1, 1.2\nmirror = true").is_ok());
        assert!(parse_config_text(Command::Spectrum, "format = csv").is_err());
    }

    #[test]
    fn seed_precedence() {
        let args = ["pulsedistill", "sweep"];
        assert_eq!(parse_config(args, Some("9")).unwrap().seed, 9);
        assert_eq!(parse_config(["pulsedistill", "sweep", "--seed", "3"], Some("9")).unwrap().seed, 3);
        assert!(parse_config(args, Some("nine")).is_err());
    }

    #[test]
    fn real_expressions() {
        assert_eq!(parse_real("pi"), Some(PI));
        assert_eq!(parse_real("pi/4"), Some(PI / 4.0));
        assert_eq!(parse_real("3*pi/8"), Some(3.0 * PI / 8.0));
        assert_eq!(parse_real("0.25"), Some(0.25));
        assert_eq!(parse_real("tau"), None);
    }
}
