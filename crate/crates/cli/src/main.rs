use std::path::PathBuf;
use std::process::ExitCode;

use arma_hardy_cli::{
    cmd_conjecture, cmd_examples, cmd_figure1, cmd_optimize, cmd_simulate, cmd_spectral_check, Format, Report,
    RunConfig,
};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "arma-hardy",
    version,
    about = "Rational approximation of stationary processes: reproduction runs and checks"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    /// Expansion order for coefficient-space quantities
    #[arg(long, global = true, default_value_t = 256)]
    order: usize,
    /// Stopping tolerance of the adaptive circle grid
    #[arg(long, global = true, default_value_t = 1e-4)]
    grid_tol: f64,
    /// Objective evaluations per optimizer restart
    #[arg(long, global = true, default_value_t = 2000)]
    budget: usize,
    #[arg(long, global = true, default_value_t = 8)]
    restarts: usize,
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Emit one JSON document instead of CSV
    #[arg(long, global = true)]
    json: bool,
    /// Write output here instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Norms of log(1+z/2), invertibility verdicts, geometric truncation table
    Examples,
    /// Circle errors of the Padé and hand-tuned (1,1) candidates
    Figure1 {
        #[arg(long, default_value_t = 1024)]
        grid: usize,
    },
    /// Optimize an (m, n) rational fit of log(1+z/2) on the unit circle
    Optimize {
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        n: usize,
    },
    /// Truncation against rational fits of log(1+z) at fixed total degree
    Conjecture {
        #[arg(long, value_delimiter = ',', default_values_t = [2, 4, 8])]
        budgets: Vec<usize>,
        #[arg(long, default_value_t = 4096)]
        k_expand: usize,
    },
    /// Toeplitz section norms against circle supnorms, and the exp(-(1+z)/(1-z)) profile
    SpectralCheck {
        #[arg(long, value_delimiter = ',', default_values_t = [2, 8, 64, 512])]
        dims: Vec<usize>,
        #[arg(long, default_value_t = 256)]
        hinf_grid: usize,
    },
    /// Sample path of an ARMA model as single-column CSV
    Simulate {
        /// Denominator coefficients q_1..q_N
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        ar: Vec<f64>,
        /// Numerator coefficients p_0..p_M
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_values_t = [1.0])]
        ma: Vec<f64>,
        #[arg(long, default_value_t = 1000)]
        len: usize,
        #[arg(long)]
        burn_in: Option<usize>,
    },
}

fn run(cli: Cli) -> arma_hardy_cli::Result<Report> {
    let g = cli.global;
    let cfg = RunConfig {
        order: g.order,
        grid_tol: g.grid_tol,
        budget: g.budget,
        restarts: g.restarts,
        seed: g.seed,
        format: if g.json { Format::Json } else { Format::Csv },
        out: g.out,
    };
    match cli.command {
        Command::Examples => cmd_examples(&cfg),
        Command::Figure1 { grid } => cmd_figure1(grid, &cfg),
        Command::Optimize { m, n } => cmd_optimize(m, n, &cfg),
        Command::Conjecture { budgets, k_expand } => cmd_conjecture(&budgets, k_expand, &cfg),
        Command::SpectralCheck { dims, hinf_grid } => cmd_spectral_check(&dims, hinf_grid, &cfg),
        Command::Simulate { ar, ma, len, burn_in } => cmd_simulate(&ar, &ma, len, burn_in, &cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = if cli.global.json { Format::Json } else { Format::Csv };
    let out = cli.global.out.clone();
    let report = match run(cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let text = match report.render(format) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let written = match &out {
        Some(path) => std::fs::write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    for check in &report.checks {
        eprintln!("{}", check.line());
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
