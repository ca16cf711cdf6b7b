//! Command-line front end. Arguments are resolved into a [`RunConfig`], which
//! is echoed into every artifact and can be replayed with `manin run`.
//!
//! Exit status: 0 on success, 1 when a run completes but one of its checks
//! fails (or the computation itself errors), 2 on a usage error.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::arith::Rational;
use crate::chars;
use crate::constants::{self, Which};
use crate::gon::{self, SweepRow};
use crate::linalg::QMatrix;
use crate::picard;
use crate::repro;
use crate::surfaces::{self, Subset};
use crate::torsor::{self, TorsorKind};

pub const WORKERS_ENV: &str = "MANIN_WORKERS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Lemma {
    Line,
    Conic,
    Rho,
    Serre,
}

/// Everything a run depends on.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    pub workers: usize,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum Command {
    Count {
        surface: String,
        #[serde(rename = "B")]
        bound: u64,
        subset: Subset,
        budget: u64,
    },
    TorsorCount {
        surface: TorsorKind,
        #[serde(rename = "B")]
        bound: u64,
    },
    TorsorVerify {
        surface: TorsorKind,
        #[serde(rename = "B")]
        bound: u64,
    },
    Picard {
        a: [u64; 4],
    },
    Segre {
        #[serde(default)]
        surface: Option<String>,
        #[serde(default)]
        matrices: Option<PathBuf>,
    },
    Local {
        a: [i64; 4],
        p: u64,
        e: u32,
    },
    Constants {
        which: Which,
        tolerance: f64,
        prime_bound: u64,
    },
    GonSweep {
        lemma: Lemma,
        seed: u64,
        instances: usize,
    },
    Repro,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0:#}")]
    Failed(anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failed(_) => 1,
        }
    }
}

fn usage(msg: impl std::fmt::Display) -> CliError {
    CliError::Usage(msg.to_string())
}

fn failed(e: impl Into<anyhow::Error>) -> CliError {
    CliError::Failed(e.into())
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.workers == 0 {
            return Err(usage("workers must be at least 1"));
        }
        let positive = |name: &str, ok: bool| {
            if ok {
                Ok(())
            } else {
                Err(usage(format!("{name} must be positive")))
            }
        };
        match &self.command {
            Command::Count {
                surface,
                bound,
                budget,
                ..
            } => {
                surfaces::builtin(surface).map_err(usage)?;
                positive("B", *bound > 0)?;
                positive("budget", *budget > 0)
            }
            Command::TorsorCount { bound, .. } | Command::TorsorVerify { bound, .. } => {
                positive("B", *bound > 0)
            }
            Command::Picard { a } => positive("every a_i", a.iter().all(|&x| x > 0)),
            Command::Segre { surface, matrices } => match (surface, matrices) {
                (Some(s), None) => surfaces::builtin(s).map(|_| ()).map_err(usage),
                (None, Some(_)) => Ok(()),
                _ => Err(usage("segre needs exactly one of --surface and --matrices")),
            },
            Command::Local { a, p, .. } => {
                positive("every a_i", a.iter().all(|&x| x != 0))?;
                positive("p", *p > 1)
            }
            Command::Constants {
                tolerance,
                prime_bound,
                ..
            } => {
                positive("tolerance", *tolerance > 0.0)?;
                positive("prime bound", *prime_bound > 0)
            }
            Command::GonSweep { instances, .. } => positive("instances", *instances > 0),
            Command::Repro => Ok(()),
        }
    }
}

/// What a command produced: a JSON body, and rows for CSV when the command
/// has a natural table.
pub struct Artifact {
    pub json: Value,
    /// Rendered CSV body, header included.
    pub csv: Option<String>,
    /// False when a check inside the run failed.
    pub ok: bool,
}

impl Artifact {
    fn ok(v: impl Serialize) -> Result<Self, CliError> {
        Ok(Artifact {
            json: serde_json::to_value(v).map_err(failed)?,
            csv: None,
            ok: true,
        })
    }
}

#[derive(Deserialize)]
struct MatrixPair {
    #[serde(rename = "A")]
    a: Vec<Vec<Value>>,
    #[serde(rename = "B")]
    b: Vec<Vec<Value>>,
}

/// Entries may be integers or strings such as `"-3/2"`.
fn parse_matrix(rows: &[Vec<Value>]) -> Result<QMatrix, CliError> {
    let entry = |v: &Value| -> Result<Rational, CliError> {
        match v {
            Value::Number(n) => n
                .as_i64()
                .map(|x| Rational::from_integer(x.into()))
                .ok_or_else(|| usage(format!("matrix entry {n} is not an integer"))),
            Value::String(s) => s.parse().map_err(|_| usage(format!("bad rational {s:?}"))),
            other => Err(usage(format!("bad matrix entry {other}"))),
        }
    };
    let parsed: Vec<Vec<Rational>> = rows
        .iter()
        .map(|r| r.iter().map(entry).collect())
        .collect::<Result<_, _>>()?;
    if parsed.iter().any(|r| r.len() != parsed.len()) {
        return Err(usage("matrices must be square"));
    }
    Ok(QMatrix::from_rows(&parsed))
}

fn segre_from_file(path: &Path) -> Result<picard::Dp4Classification, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let pair: MatrixPair =
        serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let (a, b) = (parse_matrix(&pair.a)?, parse_matrix(&pair.b)?);
    picard::classify_pencil(&a, &b).map_err(usage)
}

fn to_csv<T: Serialize>(rows: &[T]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(failed)?;
    }
    let bytes = w.into_inner().map_err(|e| failed(anyhow::anyhow!("{e}")))?;
    String::from_utf8(bytes).map_err(failed)
}

#[derive(Serialize)]
struct ReproRow<'a> {
    id: u8,
    title: &'a str,
    passed: bool,
    failing: String,
    elapsed_ms: u64,
}

fn execute(cmd: &Command, workers: usize) -> Result<Artifact, CliError> {
    match cmd {
        Command::Count {
            surface,
            bound,
            subset,
            budget,
        } => {
            let spec = surfaces::builtin(surface).map_err(usage)?;
            let rec =
                surfaces::count_surface(&spec, *bound, *subset, *budget).map_err(|e| match e {
                    surfaces::SurfaceError::LinesUnknown(_) => usage(e),
                    e => failed(e),
                })?;
            Ok(Artifact {
                json: serde_json::to_value(&rec).map_err(failed)?,
                csv: Some(to_csv(&[&rec])?),
                ok: true,
            })
        }
        Command::TorsorCount { surface, bound } => Artifact::ok(json!({
            "surface": surface,
            "B": bound,
            "count": surface.count(*bound),
        })),
        Command::TorsorVerify { surface, bound } => {
            let r = torsor::verify_bijection(*surface, *bound).map_err(failed)?;
            let ok = match surface {
                TorsorKind::D4 => r.is_exact(),
                TorsorKind::A1 => {
                    r.differences_on_boundary() && r.image_on_surface && r.duplicates == 0
                }
            };
            let mut a = Artifact::ok(&r)?;
            a.ok = ok;
            Ok(a)
        }
        Command::Picard { a } => Artifact::ok(json!({
            "a": a,
            "rank": picard::picard_rank(*a),
            "cube_criterion_rank_one": picard::cube_criterion_rank_one(*a),
        })),
        Command::Segre { surface, matrices } => {
            let c = match (surface, matrices) {
                (Some(id), _) => {
                    let spec = surfaces::builtin(id).map_err(usage)?;
                    if spec.forms.len() != 2 || spec.nvars != 5 {
                        return Err(usage(format!(
                            "{id} is not an intersection of two quadrics in P^4"
                        )));
                    }
                    picard::classify_dp4(&spec.forms[0], &spec.forms[1]).map_err(failed)?
                }
                (None, Some(path)) => segre_from_file(path)?,
                (None, None) => return Err(usage("segre needs --surface or --matrices")),
            };
            Artifact::ok(c)
        }
        Command::Local { a, p, e } => {
            let r = chars::local_report(*a, *p, *e).map_err(|err| match err {
                chars::CharError::NotPrime(_) | chars::CharError::ZeroCoefficient => usage(err),
                err => failed(err),
            })?;
            let ok = r.checks.eq_nstar != Some(false)
                && r.checks.hensel != Some(false)
                && r.checks.sq_identity;
            let mut art = Artifact::ok(&r)?;
            art.ok = ok;
            Ok(art)
        }
        Command::Constants {
            which,
            tolerance,
            prime_bound,
        } => {
            let c = constants::evaluate(*which, *tolerance, *prime_bound).map_err(|e| match e {
                constants::ConstError::Tolerance(_) | constants::ConstError::PrimeBound(_) => {
                    usage(e)
                }
                e => failed(e),
            })?;
            Artifact::ok(
                json!({ "which": which, "value": c.value, "error_bar": c.error_bar, "method": c.method }),
            )
        }
        Command::GonSweep {
            lemma,
            seed,
            instances,
        } => {
            let (n, seed) = (*instances, *seed);
            let report = match lemma {
                Lemma::Line => {
                    gon::check_line_bound(&gon::sample(n, seed, gon::random_line_instance))
                        .map_err(failed)?
                }
                Lemma::Conic => {
                    gon::check_conic_bound(&gon::sample(n, seed, gon::random_conic_instance))
                        .map_err(failed)?
                }
                Lemma::Rho => gon::check_rho(&gon::sample(n, seed, gon::random_rho_instance)),
                Lemma::Serre => {
                    gon::check_serre(&gon::sample(n, seed, gon::random_serre_level), seed)
                }
            };
            let mut json = serde_json::to_value(&report).map_err(failed)?;
            json["rows"] = serde_json::to_value(&report.rows).map_err(failed)?;
            Ok(Artifact {
                json,
                csv: Some(to_csv::<SweepRow>(&report.rows)?),
                ok: report.violations == 0,
            })
        }
        Command::Repro => {
            let suite = repro::run_suite(workers).map_err(failed)?;
            for c in &suite.criteria {
                eprintln!("{}", repro::summary_line(c));
            }
            let rows: Vec<ReproRow> = suite
                .criteria
                .iter()
                .map(|c| ReproRow {
                    id: c.id,
                    title: c.title,
                    passed: c.passed(),
                    failing: c.failing_checks().join(" "),
                    elapsed_ms: c.elapsed_ms,
                })
                .collect();
            Ok(Artifact {
                json: serde_json::to_value(&suite).map_err(failed)?,
                csv: Some(to_csv(&rows)?),
                ok: suite.criteria.iter().all(|c| c.passed()),
            })
        }
    }
}

/// One-row CSV for an object whose values are all scalars.
fn flat_csv(v: &Value) -> Option<String> {
    let Value::Object(m) = v else { return None };
    let cells: Vec<String> = m
        .values()
        .map(|v| match v {
            Value::String(s) => Some(s.clone()),
            Value::Number(_) | Value::Bool(_) | Value::Null => Some(v.to_string()),
            _ => None,
        })
        .collect::<Option<_>>()?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(m.keys()).ok()?;
    w.write_record(&cells).ok()?;
    String::from_utf8(w.into_inner().ok()?).ok()
}

fn write_artifact(cfg: &RunConfig, art: &Artifact) -> Result<(), CliError> {
    let config = serde_json::to_value(cfg).map_err(failed)?;
    let mut text = match cfg.format {
        Format::Json => {
            let body = match &art.json {
                Value::Object(m) => {
                    let mut out = serde_json::Map::new();
                    out.insert("config".into(), config);
                    out.extend(m.clone());
                    Value::Object(out)
                }
                other => json!({ "config": config, "result": other }),
            };
            serde_json::to_string_pretty(&body).map_err(failed)?
        }
        Format::Csv => {
            let body = match &art.csv {
                Some(b) => b.clone(),
                None => flat_csv(&art.json)
                    .ok_or_else(|| usage("this command has no CSV form; use --format json"))?,
            };
            format!(
                "# config: {}\n{}",
                serde_json::to_string(&config).map_err(failed)?,
                body.trim_end()
            )
        }
    };
    text.push('\n');
    match &cfg.output {
        Some(p) => std::fs::write(p, text).map_err(failed),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(failed),
    }
}

/// Run a resolved configuration on a pool of `cfg.workers` threads.
pub fn dispatch(cfg: &RunConfig) -> Result<(), CliError> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(failed)?;
    let art = pool.install(|| execute(&cfg.command, cfg.workers))?;
    write_artifact(cfg, &art)?;
    if art.ok {
        Ok(())
    } else {
        Err(failed(anyhow::anyhow!("a check failed; see the output")))
    }
}

fn parse_tuple<T: std::str::FromStr>(s: &str) -> Result<[T; 4], String> {
    let v: Vec<T> = s
        .split(',')
        .map(|x| x.trim().parse().map_err(|_| format!("bad entry {x:?}")))
        .collect::<Result<_, _>>()?;
    v.try_into()
        .map_err(|_| "expected four comma-separated values".to_string())
}

#[derive(Parser, Debug)]
#[command(
    name = "manin",
    version,
    about = "Rational points of bounded height on del Pezzo surfaces"
)]
pub struct Cli {
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long, global = true, env = WORKERS_ENV)]
    pub workers: Option<usize>,
    /// Write the artifact here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Subcommand, Debug)]
pub enum CliCommand {
    /// Count points of height at most B on a catalogue surface.
    Count {
        #[arg(long)]
        surface: String,
        #[arg(long = "B")]
        bound: u64,
        #[arg(long, default_value = "all")]
        subset: Subset,
        #[arg(long, default_value_t = surfaces::DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Universal torsor counts and bijection checks.
    #[command(subcommand)]
    Torsor(TorsorCommand),
    /// Picard rank of a1 x^3 + a2 y^3 + a3 z^3 + a4 t^3 = 0.
    Picard {
        #[arg(long, value_parser = parse_tuple::<u64>)]
        a: [u64; 4],
    },
    /// Segre symbol and singularity type of a pencil of quadrics.
    Segre {
        #[arg(
            long,
            conflicts_with = "matrices",
            required_unless_present = "matrices"
        )]
        surface: Option<String>,
        /// JSON file {"A": [[..]], "B": [[..]]} with integer or "p/q" entries.
        #[arg(long)]
        matrices: Option<PathBuf>,
    },
    /// Local counts and identities at a prime power.
    Local {
        #[arg(long, value_parser = parse_tuple::<i64>, allow_hyphen_values = true)]
        a: [i64; 4],
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        e: u32,
    },
    /// Singular integrals, Euler products and leading constants.
    Constants {
        #[arg(long, value_enum)]
        which: Which,
        #[arg(long, default_value_t = constants::DEFAULT_TOL)]
        tolerance: f64,
        #[arg(long, default_value_t = constants::DEFAULT_PRIME_BOUND)]
        prime_bound: u64,
    },
    /// Geometry-of-numbers experiments.
    #[command(subcommand)]
    Gon(GonCommand),
    /// Run the acceptance suite and print a summary table on stderr.
    Repro,
    /// Replay a configuration echoed by an earlier run.
    Run { config: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum TorsorCommand {
    Count(TorsorArgs),
    Verify(TorsorArgs),
}

#[derive(Args, Debug)]
pub struct TorsorArgs {
    #[arg(long, value_enum)]
    surface: TorsorKind,
    #[arg(long = "B")]
    bound: u64,
}

#[derive(Subcommand, Debug)]
pub enum GonCommand {
    /// Check a lemma's bound on random instances.
    Sweep {
        #[arg(long, value_enum)]
        lemma: Lemma,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        instances: usize,
    },
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

impl Cli {
    pub fn resolve(self) -> Result<RunConfig, CliError> {
        let command = match self.command {
            CliCommand::Run { config } => {
                let text = std::fs::read_to_string(&config)
                    .map_err(|e| usage(format!("{}: {e}", config.display())))?;
                let mut v: Value = serde_json::from_str(&text)
                    .map_err(|e| usage(format!("{}: {e}", config.display())))?;
                // An artifact echoes its config under "config"; accept either.
                if let Some(c) = v.get("config") {
                    v = c.clone();
                }
                let mut cfg: RunConfig = serde_json::from_value(v)
                    .map_err(|e| usage(format!("{}: {e}", config.display())))?;
                if let Some(w) = self.workers {
                    cfg.workers = w;
                }
                if self.output.is_some() {
                    cfg.output = self.output;
                }
                return Ok(cfg);
            }
            CliCommand::Count {
                surface,
                bound,
                subset,
                budget,
            } => Command::Count {
                surface,
                bound,
                subset,
                budget,
            },
            CliCommand::Torsor(TorsorCommand::Count(t)) => Command::TorsorCount {
                surface: t.surface,
                bound: t.bound,
            },
            CliCommand::Torsor(TorsorCommand::Verify(t)) => Command::TorsorVerify {
                surface: t.surface,
                bound: t.bound,
            },
            CliCommand::Picard { a } => Command::Picard { a },
            CliCommand::Segre { surface, matrices } => Command::Segre { surface, matrices },
            CliCommand::Local { a, p, e } => Command::Local { a, p, e },
            CliCommand::Constants {
                which,
                tolerance,
                prime_bound,
            } => Command::Constants {
                which,
                tolerance,
                prime_bound,
            },
            CliCommand::Gon(GonCommand::Sweep {
                lemma,
                seed,
                instances,
            }) => Command::GonSweep {
                lemma,
                seed,
                instances,
            },
            CliCommand::Repro => Command::Repro,
        };
        Ok(RunConfig {
            command,
            workers: self.workers.unwrap_or_else(default_workers),
            output: self.output,
            format: self.format,
        })
    }
}

/// Parse arguments, run, and return the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match cli.resolve().and_then(|cfg| dispatch(&cfg)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
