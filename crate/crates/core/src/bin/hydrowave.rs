use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hydroelastic::io::{cmd_branch, cmd_linear, cmd_surface, cmd_verify, format_linear_table};
use hydroelastic::{BranchSign, Error, RunConfig};

/// Periodic traveling hydroelastic waves: linear theory and solution branches.
#[derive(Parser)]
#[command(name = "hydrowave", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// TOML run configuration; defaults apply to missing keys.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (overrides `output_path`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    kmax: Option<u32>,
    #[arg(long, global = true)]
    seed_k: Option<u32>,
    /// Branch selector, +1 or -1.
    #[arg(long, global = true, allow_hyphen_values = true)]
    seed_sign: Option<BranchSign>,
    /// Comma-separated Atilde values for `surface`.
    #[arg(long, global = true, value_delimiter = ',')]
    atilde_list: Option<Vec<f64>>,
    #[arg(long, global = true)]
    max_points: Option<usize>,
    /// Residual tolerance for solves and for `verify`.
    #[arg(long, global = true)]
    tol: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Bifurcation speeds, root l(k) and odd-crossing membership.
    Linear,
    /// Follow one branch from its bifurcation point.
    Branch,
    /// One branch per Atilde value plus a summary.
    Surface,
    /// Re-check a stored branch file (default: <out>/branch.json).
    Verify { file: Option<PathBuf> },
}

fn resolve(cli: &Cli) -> Result<RunConfig, Error> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(out) = &cli.out {
        cfg.output_path = out.to_string_lossy().into_owned();
    }
    if let Some(k) = cli.kmax {
        cfg.kmax = k;
    }
    if let Some(k) = cli.seed_k {
        cfg.seed.k = k;
    }
    if let Some(s) = cli.seed_sign {
        cfg.seed.sign = s;
    }
    if let Some(list) = &cli.atilde_list {
        cfg.atilde_list = list.clone();
    }
    if let Some(n) = cli.max_points {
        cfg.continuation.max_points = n;
    }
    if let Some(t) = cli.tol {
        cfg.continuation.solver.tol = t;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<ExitCode, Error> {
    let cfg = resolve(cli)?;
    match &cli.command {
        Command::Linear => {
            let out = cli.out.as_ref().map(|_| cfg.out_dir());
            let rows = cmd_linear(&cfg, out.as_deref())?;
            print!("{}", format_linear_table(&rows));
        }
        Command::Branch => {
            let out = cmd_branch(&cfg)?;
            let last = out.branch.last();
            println!(
                "termination: {}\npoints: {}\nterminal c: {}\nterminal h: {}\nbranch file: {}",
                out.branch.termination.label(),
                out.branch.points.len(),
                last.state.c,
                last.h,
                out.branch_file.display()
            );
        }
        Command::Surface => {
            for r in cmd_surface(&cfg)? {
                let h = r.terminal_h.map_or("-".into(), |h| h.to_string());
                println!("Atilde = {:<8} h = {:<22} {}", r.atilde, h, r.termination);
            }
        }
        Command::Verify { file } => {
            let path = file.clone().unwrap_or_else(|| cfg.out_dir().join("branch.json"));
            let report = cmd_verify(&path, cfg.continuation.solver.tol)?;
            print!("{}", report.summary());
            if !report.passed() {
                return Ok(ExitCode::from(2));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
