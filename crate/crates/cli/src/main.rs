use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use mdfiha::bench::run_benchmark;
use mdfiha::engine::{run, EngineConfig};
use mdfiha::io::{parse_instance, write_solution, BksTable, IoError, ParseOptions};
use mdfiha::model::{check_feasible, Variant};

#[derive(Parser)]
#[command(name = "mdfiha", version, about = "Multi-depot vehicle routing solver")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance file.
    Solve {
        #[arg(long)]
        instance: PathBuf,
        #[command(flatten)]
        common: Common,
        /// Where to write the best solution.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve every instance of a directory several times and report gaps.
    Bench {
        #[arg(long)]
        dir: PathBuf,
        #[command(flatten)]
        common: Common,
        /// CSV of best-known values (`name,cost,optimal_flag`).
        #[arg(long)]
        bks: Option<PathBuf>,
        #[arg(long, default_value_t = 10)]
        runs: usize,
        /// Where to write the CSV report.
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Mdvrp,
    Mdvrptw,
    Mdovrp,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Mdvrp => Variant::Mdvrp,
            VariantArg::Mdvrptw => Variant::Mdvrptw,
            VariantArg::Mdovrp => Variant::Mdovrp,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(Args)]
struct Common {
    #[arg(long, value_enum)]
    variant: VariantArg,
    /// Ignore the vehicle count in the instance header.
    #[arg(long)]
    relax_fleet: bool,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Wall-clock limit per run, in seconds.
    #[arg(long, default_value_t = 120.0)]
    time_limit: f64,
    #[arg(long, default_value_t = 5000)]
    generations: usize,
    /// Generations without improvement before stopping.
    #[arg(long, default_value_t = 500)]
    patience: usize,
    #[arg(long, default_value_t = 20)]
    pop_size: usize,
    /// Neighbors kept per customer.
    #[arg(long, default_value_t = 50)]
    granularity: usize,
    /// Local search step budget.
    #[arg(long, default_value_t = 500)]
    depth: usize,
    #[arg(long, default_value_t = 0.5)]
    kappa: f64,
    #[arg(long, default_value_t = 0.7)]
    xi: f64,
    #[arg(long, value_enum, default_value = "on")]
    multi_move: Switch,
}

impl Common {
    fn config(&self) -> anyhow::Result<EngineConfig> {
        anyhow::ensure!(
            self.time_limit.is_finite() && self.time_limit >= 0.0,
            "--time-limit must be a non-negative number of seconds"
        );
        Ok(EngineConfig {
            max_generations: self.generations,
            patience: self.patience,
            time_limit: Duration::from_secs_f64(self.time_limit),
            mu: self.pop_size,
            theta: self.granularity,
            depth: self.depth,
            kappa: self.kappa,
            xi: self.xi,
            multi_move: self.multi_move == Switch::On,
            seed: self.seed,
            ..EngineConfig::default()
        })
    }

    fn parse_options(&self) -> ParseOptions {
        ParseOptions {
            relax_fleet: self.relax_fleet,
        }
    }
}

const EXIT_PARSE: u8 = 1;
const EXIT_INFEASIBLE: u8 = 2;

fn solve(instance: PathBuf, common: Common, out: Option<PathBuf>) -> anyhow::Result<u8> {
    let inst = parse_instance(&instance, common.variant.into(), common.parse_options())?;
    let cfg = common.config()?;
    log::info!(
        "{}: {} customers, {} depots",
        inst.name(),
        inst.num_customers(),
        inst.num_depots()
    );
    let stats = run(&inst, &cfg)?;
    println!(
        "{} cost {:.2} feasible {} routes {} generations {} time {:.2}s",
        inst.name(),
        stats.best_cost,
        stats.feasible,
        stats.best.num_routes(),
        stats.generations,
        stats.wall_time.as_secs_f64()
    );
    if !stats.feasible {
        let report = check_feasible(&stats.best, &inst);
        eprintln!("no feasible solution found: {report:?}");
        return Ok(EXIT_INFEASIBLE);
    }
    if let Some(path) = out {
        write_solution(&stats.best, &inst, &path)?;
    }
    Ok(0)
}

fn bench(
    dir: PathBuf,
    common: Common,
    bks: Option<PathBuf>,
    runs: usize,
    report: Option<PathBuf>,
) -> anyhow::Result<u8> {
    anyhow::ensure!(runs >= 1, "--runs must be at least 1");
    let table = bks.as_deref().map(BksTable::load).transpose()?;
    let cfg = common.config()?;
    let rep = run_benchmark(
        &dir,
        common.variant.into(),
        common.parse_options(),
        table.as_ref(),
        &cfg,
        runs,
    )?;
    println!("{rep}");
    if let Some(path) = report {
        rep.save_csv(&path)
            .with_context(|| format!("writing report {}", path.display()))?;
    }
    let infeasible = rep.rows.iter().any(|r| r.f_best.is_none());
    Ok(if infeasible { EXIT_INFEASIBLE } else { 0 })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_PARSE } else { 0 });
        }
    };
    let result = match cli.cmd {
        Command::Solve { instance, common, out } => solve(instance, common, out),
        Command::Bench {
            dir,
            common,
            bks,
            runs,
            report,
        } => bench(dir, common, bks, runs, report),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<IoError>() {
                Some(io) if io.is_parse() => ExitCode::from(EXIT_PARSE),
                _ => ExitCode::FAILURE,
            }
        }
    }
}
