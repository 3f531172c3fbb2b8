//! Command-line front end: problem files in, run reports out.

pub mod problem;
pub mod report;

use std::fmt;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use localchern::germs::special_scheme_ideal;
use localchern::obstruction::{alg_index_with, chern_obstruction, ObstructionError, TrialConfig};
use localchern::oracle::{count_special_points, OracleConfig, OracleError};
use localchern::polyring::MonomialOrder;
use localchern::stdbasis::{colength, standard_basis_with, EngineConfig};

use problem::{parse_problem, Problem};
use report::{OracleSummary, RunReport, SchemeSummary, Settings};

#[derive(Debug, Parser)]
#[command(name = "localchern", version, about = "Local Chern obstructions of collections of 1-forms")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Index, generic baseline and obstruction.
    Chern { file: std::path::PathBuf },
    /// Index of the collection only.
    Index { file: std::path::PathBuf },
    /// Special-scheme generators and the leading ideal of their local standard basis.
    Scheme { file: std::path::PathBuf },
    /// Compares the obstruction with a numeric count of special points.
    Check { file: std::path::PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Machine,
}

#[derive(Debug, Clone, Args)]
pub struct Flags {
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 3)]
    pub trials: usize,
    /// Bound on the integer coefficients of the random constant collections.
    #[arg(long, global = true, default_value_t = 10_000)]
    pub height: i64,
    /// Size of the deformation used by the oracle.
    #[arg(long, global = true, default_value_t = 1e-2)]
    pub lambda: f64,
    #[arg(long, global = true, default_value_t = 0.5)]
    pub radius: f64,
    /// Newton starts per oracle run (default: 50 times the Bezout bound).
    #[arg(long, global = true)]
    pub starts: Option<usize>,
    /// Newton residual tolerance.
    #[arg(long, global = true, default_value_t = 1e-12)]
    pub tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long = "pair-limit", global = true, default_value_t = 50_000)]
    pub pair_limit: usize,
    /// Record the wall time in the report.
    #[arg(long, global = true)]
    pub timing: bool,
}

impl Default for Flags {
    fn default() -> Self {
        Flags {
            seed: 0,
            trials: 3,
            height: 10_000,
            lambda: 1e-2,
            radius: 0.5,
            starts: None,
            tol: 1e-12,
            format: Format::Text,
            pair_limit: 50_000,
            timing: false,
        }
    }
}

impl Flags {
    fn engine(&self) -> EngineConfig {
        EngineConfig {
            pair_limit: self.pair_limit,
            ..EngineConfig::default()
        }
    }

    pub fn trial_config(&self) -> TrialConfig {
        TrialConfig {
            seed: self.seed,
            trials: self.trials,
            coefficient_height: self.height,
            engine: self.engine(),
            ..TrialConfig::default()
        }
    }

    pub fn oracle_config(&self) -> OracleConfig {
        OracleConfig {
            lambda_magnitude: self.lambda,
            ball_radius: self.radius,
            starts: self.starts,
            newton_tol: self.tol,
            seed: self.seed,
            ..OracleConfig::default()
        }
    }

    fn settings(&self) -> Settings {
        Settings {
            seed: self.seed,
            trials: self.trials,
            height: self.height,
            lambda: self.lambda,
            radius: self.radius,
            starts: self.starts,
            tol: self.tol,
            pair_limit: self.pair_limit,
        }
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.pair_limit == 0 {
            return Err(CliError::Validation("pair limit must be positive".into()));
        }
        self.trial_config().validate().map_err(|e| CliError::Validation(e.to_string()))?;
        self.oracle_config().validate().map_err(|e| CliError::Validation(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    Validation(String),
    Computation(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Computation(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "invalid input: {m}"),
            CliError::Computation(m) => write!(f, "computation failed: {m}"),
        }
    }
}

/// What a command produced: a report, warnings for the diagnostic stream
/// and whether a check passed.
#[derive(Debug)]
pub struct Outcome {
    pub report: RunReport,
    pub warnings: Vec<String>,
    pub passed: bool,
}

impl Outcome {
    pub fn exit_code(&self) -> u8 {
        if self.passed {
            0
        } else {
            3
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.report.to_text(),
            Format::Machine => self.report.to_machine(),
        }
    }
}

fn computation(e: impl fmt::Display) -> CliError {
    CliError::Computation(e.to_string())
}

pub fn load(path: &std::path::Path) -> Result<Problem, CliError> {
    let source = std::fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))?;
    parse_problem(&source).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

pub fn run(command: &Command, flags: &Flags) -> Result<Outcome, CliError> {
    flags.validate()?;
    let start = Instant::now();
    let (name, path) = match command {
        Command::Chern { file } => ("chern", file),
        Command::Index { file } => ("index", file),
        Command::Scheme { file } => ("scheme", file),
        Command::Check { file } => ("check", file),
    };
    let problem = load(path)?;
    let mut outcome = run_problem(name, &problem, flags)?;
    if flags.timing {
        outcome.report.wall_time = Some(start.elapsed().as_secs_f64());
    }
    Ok(outcome)
}

/// Runs a named command on an already validated problem.
pub fn run_problem(command: &str, problem: &Problem, flags: &Flags) -> Result<Outcome, CliError> {
    let mut report = RunReport::new(command, problem.file.clone(), flags.settings());
    let mut warnings = Vec::new();
    let mut passed = true;
    let (germ, collection) = (&problem.germ, &problem.collection);
    match command {
        "index" => {
            report.alg_index = Some(alg_index_with(germ, collection, &flags.engine()).map_err(computation)?);
        }
        "scheme" => {
            let ideal = special_scheme_ideal(germ, collection).map_err(computation)?;
            let names = &problem.file.variables;
            let sb = standard_basis_with(&ideal, MonomialOrder::LocalNegDegRevLex, &flags.engine())
                .map_err(computation)?;
            let mut leading: Vec<_> = sb.leading_monomials();
            leading.sort();
            report.scheme = Some(SchemeSummary {
                generators: ideal.generators().iter().map(|g| g.render(names)).collect(),
                leading_ideal: leading.iter().map(|m| m.render(names)).collect(),
                colength: colength(&sb),
            });
        }
        "chern" => {
            let r = chern_obstruction(germ, collection, &flags.trial_config()).map_err(computation)?;
            fill_obstruction(&mut report, &mut warnings, r);
        }
        "check" => {
            let symbolic = chern_obstruction(germ, collection, &flags.trial_config());
            let numeric = count_special_points(germ, collection, &flags.oracle_config());
            let cause = check_cause(&symbolic, &numeric);
            if let Ok(r) = symbolic {
                fill_obstruction(&mut report, &mut warnings, r);
            }
            if let Ok(o) = numeric {
                report.oracle_count = Some(o.count);
                report.oracle = Some(OracleSummary {
                    starts: o.starts,
                    deformations_agreeing: o.deformations_agreeing,
                    charts_agreeing: o.charts_agreeing,
                    rejected: o.rejected,
                    points: o.points.into_iter().map(|p| p.x).collect(),
                });
            }
            passed = cause.is_none();
            report.verdict = Some(if passed { "PASS" } else { "FAIL" }.to_string());
            report.cause = cause;
        }
        other => return Err(CliError::Validation(format!("unknown command `{other}`"))),
    }
    Ok(Outcome {
        report,
        warnings,
        passed,
    })
}

fn fill_obstruction(report: &mut RunReport, warnings: &mut Vec<String>, r: localchern::obstruction::ObstructionReport) {
    if r.negative {
        warnings.push(format!(
            "warning: negative obstruction {}; the collection may degenerate non-generically or the germ may not be a complete intersection",
            r.chern
        ));
    }
    if r.resamples > 0 {
        warnings.push(format!(
            "note: baseline needed {} extra draw(s) to outvote non-generic collections",
            r.resamples
        ));
    }
    report.alg_index = Some(r.alg_index);
    report.baseline = Some(r.baseline);
    report.chern = Some(r.chern);
    report.negative = Some(r.negative);
    report.trial_values = Some(r.trial_values);
    report.resamples = Some(r.resamples);
}

fn check_cause(
    symbolic: &Result<localchern::obstruction::ObstructionReport, ObstructionError>,
    numeric: &Result<localchern::oracle::OracleReport, OracleError>,
) -> Option<String> {
    match (symbolic, numeric) {
        (Err(e), _) => Some(format!("symbolic: {e}")),
        (_, Err(e)) => Some(format!("oracle: {e}")),
        (Ok(s), Ok(o)) if s.chern != o.count as i64 => {
            Some(format!("chern {} differs from oracle count {}", s.chern, o.count))
        }
        _ => None,
    }
}
