//! `lgcy`: Jacobi-ring algebra, thimble periods and LG/CY consistency checks
//! from a JSON job description.

mod commands;
mod config;
mod error;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use lgcy_core::Execution;

use config::{parse_number, Format, GridShape, Job, JobConfig, UPoint};
use error::{CliError, EXIT_CHECK, EXIT_INPUT};

#[derive(Parser, Debug)]
#[command(name = "lgcy", version, about = "Landau-Ginzburg / Calabi-Yau period and pairing toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Weights, central charge, Milnor numbers and the monomial basis.
    Analyze,
    /// Basis of the Jacobi ring at the first parameter point.
    Basis,
    /// Residue pairing and cup-product pairing on the Jac' sub-basis.
    Residue,
    /// Multiplication matrices of the marginal deformations.
    Connection,
    /// Picard-Fuchs operator of a one-parameter family.
    Pf {
        /// Basis index of the class whose period is annihilated.
        #[arg(long, default_value_t = 0)]
        target: usize,
    },
    /// Thimble periods on the configured grid.
    Periods,
    /// Weil-Petersson metric from both sides on the configured grid.
    Wp,
    /// Runs the consistency checks and exits 1 if any fails.
    Verify {
        #[arg(long, hide = true)]
        debug_lemma_scale: Option<f64>,
        #[arg(long, hide = true)]
        debug_literal_kappa: bool,
    },
}

#[derive(Args, Debug, Default)]
struct Common {
    /// JSON job file.
    #[arg(long, short, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    polynomial: Option<String>,
    /// Comma-separated variable names.
    #[arg(long, global = true, value_delimiter = ',')]
    variables: Option<Vec<String>>,
    /// Deformation monomial; repeat for several.
    #[arg(long, global = true)]
    deformation: Vec<String>,
    /// Parameter point `re[,im]`, exact (`1/3`, `0.25`); repeat for several.
    #[arg(long = "u", global = true, allow_hyphen_values = true)]
    u: Vec<String>,
    #[arg(long, global = true)]
    tol_exact_check: Option<f64>,
    #[arg(long, global = true)]
    tol_series: Option<f64>,
    #[arg(long, global = true)]
    tol_ode: Option<f64>,
    #[arg(long, global = true)]
    tol_fd_step: Option<f64>,
    #[arg(long, global = true)]
    tol_verify: Option<f64>,
    #[arg(long, global = true)]
    tol_forbidden: Option<f64>,
    #[arg(long, global = true)]
    tol_fit: Option<f64>,
    #[arg(long, global = true)]
    tol_wp: Option<f64>,
    #[arg(long, global = true)]
    tol_drift: Option<f64>,
    /// Grid center `re,im`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    grid_center: Option<String>,
    #[arg(long, global = true)]
    grid_radius: Option<f64>,
    #[arg(long, global = true)]
    grid_count: Option<usize>,
    #[arg(long, global = true, value_enum)]
    grid_shape: Option<GridShape>,
    /// Output file, or directory (trailing `/`) receiving `<command>.<ext>`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Disable data-parallel evaluation.
    #[arg(long, global = true)]
    sequential: bool,
}

fn parse_point(s: &str) -> Result<UPoint, CliError> {
    let parts: Vec<&str> = s.split(',').collect();
    let num = |t: &str| -> Result<config::Num, CliError> {
        parse_number(t)?;
        Ok(config::Num::Text(t.trim().to_string()))
    };
    match parts.as_slice() {
        [re] => Ok(UPoint::Real(num(re)?)),
        [re, im] => Ok(UPoint::One(config::ComplexNum { re: num(re)?, im: Some(num(im)?) })),
        _ => Err(CliError::input("config_invalid", format!("bad parameter point '{s}', expected re[,im]"))),
    }
}

fn load_config(c: &Common) -> Result<JobConfig, CliError> {
    let mut cfg = match &c.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::input("io", format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str::<JobConfig>(&text).map_err(|e| CliError {
                position: Some(e.column()),
                ..CliError::input("config_invalid", format!("{}: {e}", path.display()))
            })?
        }
        None => JobConfig::default(),
    };
    if let Some(p) = &c.polynomial {
        cfg.polynomial = p.clone();
    }
    if let Some(v) = &c.variables {
        cfg.variables = Some(v.clone());
    }
    if !c.deformation.is_empty() {
        cfg.deformation = c.deformation.clone();
    }
    if !c.u.is_empty() {
        cfg.u = c.u.iter().map(|s| parse_point(s)).collect::<Result<_, _>>()?;
    }
    let t = &mut cfg.tolerances;
    let over = [
        (&mut t.exact_check, c.tol_exact_check),
        (&mut t.series, c.tol_series),
        (&mut t.ode, c.tol_ode),
        (&mut t.fd_step, c.tol_fd_step),
        (&mut t.verify, c.tol_verify),
        (&mut t.forbidden, c.tol_forbidden),
        (&mut t.fit, c.tol_fit),
        (&mut t.wp, c.tol_wp),
        (&mut t.drift, c.tol_drift),
    ];
    for (slot, v) in over {
        if let Some(v) = v {
            *slot = v;
        }
    }
    if let Some(center) = &c.grid_center {
        let xs: Vec<f64> = center
            .split(',')
            .map(|x| x.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| CliError::input("config_invalid", format!("bad grid center '{center}'")))?;
        if xs.len() != 2 {
            return Err(CliError::input("config_invalid", format!("grid center needs re,im: '{center}'")));
        }
        cfg.grid.center = [xs[0], xs[1]];
    }
    if let Some(r) = c.grid_radius {
        cfg.grid.radius = r;
    }
    if let Some(n) = c.grid_count {
        cfg.grid.count = n;
    }
    if let Some(s) = c.grid_shape {
        cfg.grid.shape = s;
    }
    if let Some(o) = &c.out {
        cfg.output.path = Some(o.clone());
    }
    if let Some(f) = c.format {
        cfg.output.format = f;
    }
    Ok(cfg)
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Analyze => "analyze",
        Command::Basis => "basis",
        Command::Residue => "residue",
        Command::Connection => "connection",
        Command::Pf { .. } => "pf",
        Command::Periods => "periods",
        Command::Wp => "wp",
        Command::Verify { .. } => "verify",
    }
}

fn write_output(path: Option<&Path>, name: &str, format: Format, body: &str) -> Result<(), CliError> {
    let Some(path) = path else {
        use std::io::Write;
        return match std::io::stdout().lock().write_all(body.as_bytes()) {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::input("io", e.to_string())),
            _ => Ok(()),
        };
    };
    let ext = match format {
        Format::Json => "json",
        Format::Csv => "csv",
    };
    let is_dir = path.is_dir() || path.as_os_str().to_string_lossy().ends_with('/');
    let file = if is_dir { path.join(format!("{name}.{ext}")) } else { path.to_path_buf() };
    if let Some(parent) = file.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| CliError::input("io", format!("{}: {e}", parent.display())))?;
    }
    std::fs::write(&file, body).map_err(|e| CliError::input("io", format!("{}: {e}", file.display())))
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let cfg = load_config(&cli.common)?;
    let job = Job::from_config(cfg)?;
    let exec = if cli.common.sequential { Execution::Sequential } else { Execution::Parallel };
    let out = match &cli.command {
        Command::Analyze => commands::analyze(&job)?,
        Command::Basis => commands::basis(&job)?,
        Command::Residue => commands::residue(&job, exec)?,
        Command::Connection => commands::connection(&job, exec)?,
        Command::Pf { target } => commands::pf(&job, *target)?,
        Command::Periods => commands::periods(&job, exec)?,
        Command::Wp => commands::wp(&job, exec)?,
        Command::Verify { debug_lemma_scale, debug_literal_kappa } => commands::verify(
            &job,
            exec,
            commands::DebugInject { lemma_scale: *debug_lemma_scale, literal_kappa: *debug_literal_kappa },
        )?,
    };
    let format = job.config.output.format;
    let body = match format {
        Format::Json => out.json,
        Format::Csv => out.csv?,
    };
    write_output(job.config.output.path.as_deref(), command_name(&cli.command), format, &body)?;
    Ok(out.passed)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            // --help and --version.
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = CliError::input("usage", e.to_string().trim().to_string());
            eprintln!("{}", err.to_json());
            return ExitCode::from(EXIT_INPUT as u8);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("{}", CliError { exit: EXIT_CHECK, ..CliError::input("checks_failed", "one or more checks failed") }.to_json());
            ExitCode::from(EXIT_CHECK as u8)
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit as u8)
        }
    }
}
