use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use adaptive_euler::problems::lookup;
use adaptive_euler::runner::{compare, exact_convergence, run, runge_convergence, RunConfig};
use adaptive_euler::{suite, Error, SchemeMode};
use anyhow::Context;
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "adaptive-euler", version, about = "Adaptive LDCU / fifth-order Euler solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one problem and write snapshots, run.log and summary.json.
    Run(RunArgs),
    /// Mesh-refinement study (exact-solution errors when available, Runge otherwise).
    Converge(ConvergeArgs),
    /// Wall time of the adaptive NEW and OLD modes on one mesh.
    Compare(CompareArgs),
    /// Run every benchmark check and print one line per check.
    Suite(SuiteArgs),
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    problem: String,
    #[arg(long, default_value = "adaptive-new")]
    mode: SchemeMode,
    #[arg(long)]
    nx: Option<usize>,
    #[arg(long)]
    ny: Option<usize>,
    #[arg(long, default_value_t = 0.4)]
    cfl: f64,
    #[arg(long)]
    c1: Option<f64>,
    #[arg(long)]
    c2: Option<f64>,
    #[arg(long)]
    accuracy_mode: bool,
    #[arg(long)]
    t_final: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Extra snapshot times, comma separated.
    #[arg(long, value_delimiter = ',')]
    snapshots: Vec<f64>,
}

#[derive(Args)]
struct ConvergeArgs {
    #[arg(long)]
    problem: String,
    #[arg(long, default_value = "quasi5")]
    mode: SchemeMode,
    /// Cells per direction, each twice the previous.
    #[arg(long, value_delimiter = ',')]
    meshes: Vec<usize>,
    #[arg(long)]
    accuracy_mode: bool,
    /// Directory for convergence.json.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long, default_value = "shock_density")]
    problem: String,
    #[arg(long)]
    nx: usize,
    #[arg(long)]
    ny: Option<usize>,
    #[arg(long, default_value_t = 5)]
    repeats: usize,
    /// LDCU Minmod2 reference mesh for density errors; a multiple of `nx`.
    #[arg(long)]
    reference_nx: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SuiteArgs {
    /// Directory for suite.json.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn cmd_run(a: RunArgs) -> anyhow::Result<bool> {
    let config = RunConfig {
        nx: a.nx,
        ny: a.ny,
        cfl: a.cfl,
        accuracy_mode: a.accuracy_mode,
        c1: a.c1,
        c2: a.c2,
        t_final: a.t_final,
        out: a.out,
        snapshots: a.snapshots,
        ..RunConfig::new(a.problem, a.mode)
    };
    let result = run::<f64>(&config)?;
    println!("{}", serde_json::to_string_pretty(&result.summary)?);
    Ok(true)
}

fn default_meshes(problem: &str) -> Option<Vec<usize>> {
    match problem {
        "smooth1d" => Some(suite::ACCURACY_1D_MESHES.to_vec()),
        "vortex2d" => Some(suite::ACCURACY_2D_MESHES.to_vec()),
        _ => None,
    }
}

fn cmd_converge(a: ConvergeArgs) -> anyhow::Result<bool> {
    let spec = lookup(&a.problem)?;
    let meshes = if a.meshes.is_empty() {
        default_meshes(&a.problem)
            .ok_or_else(|| Error::Config(format!("no default meshes for `{}`; pass --meshes", a.problem)))?
    } else {
        a.meshes
    };
    let report = if spec.exact.is_some() && spec.is_2d() {
        exact_convergence(&a.problem, a.mode, &meshes, a.accuracy_mode)?
    } else if !spec.is_2d() {
        runge_convergence(&a.problem, a.mode, &meshes, a.accuracy_mode)?
    } else {
        return Err(Error::Config(format!("`{}` has no exact solution for a 2-D study", a.problem)).into());
    };
    print!("{}", report.to_table());
    if let Some(dir) = a.out {
        fs::create_dir_all(&dir)?;
        let path = dir.join("convergence.json");
        fs::write(&path, serde_json::to_string_pretty(&report)?).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(true)
}

fn cmd_compare(a: CompareArgs) -> anyhow::Result<bool> {
    let report = compare(&a.problem, a.nx, a.ny, a.repeats, a.reference_nx)?;
    let json = serde_json::to_string_pretty(&report)?;
    println!("{json}");
    if let Some(dir) = a.out {
        fs::create_dir_all(&dir)?;
        fs::write(dir.join("compare.json"), json)?;
    }
    Ok(true)
}

fn cmd_suite(a: SuiteArgs) -> anyhow::Result<bool> {
    let mut outcomes = Vec::new();
    for check in [
        suite::accuracy_1d,
        suite::accuracy_2d,
        suite::conservation,
        suite::robustness,
        suite::blast_wave,
        suite::mode_equivalence,
        suite::benchmarks_2d,
    ] {
        let o = check();
        println!("{o}");
        outcomes.push(o);
    }
    println!("(kernel unit properties run under `cargo test`)");
    if let Some(dir) = a.out {
        fs::create_dir_all(&dir)?;
        fs::write(dir.join("suite.json"), serde_json::to_string_pretty(&outcomes)?)?;
    }
    Ok(outcomes.iter().all(|o| o.passed))
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(e) if e.is_config() => 2,
        Some(e) if e.is_blow_up() => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Converge(a) => cmd_converge(a),
        Command::Compare(a) => cmd_compare(a),
        Command::Suite(a) => cmd_suite(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
