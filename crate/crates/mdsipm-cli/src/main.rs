use std::fs::File;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use mdsipm::clock::StdClock;
use mdsipm::ipm::{SolveResult, SolveStatus, Solver, SolverOptions};
use mdsipm::linalg::BackendSelector;
use mdsipm::make_linear_algebra;
use mdsipm::nlp::ProblemSpec;
use mdsipm_cli::io::{
    write_bench_csv, write_iteration_log_csv, write_json, KktDumper,
};
use mdsipm_cli::{bench_sweep, run_all_suites, VerifyConfig};

/// Mixed dense-sparse interior-point solver driver.
#[derive(Parser)]
#[command(name = "mdsipm", version, about)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve a built-in problem and print a summary.
    Solve(SolveArgs),
    /// Solve synthetic problems over a size sweep with per-kernel timing.
    Bench(BenchArgs),
    /// Run the oracle-backed verification suites.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    /// Hand-rolled sequential reference kernels.
    Default,
    /// Policy-based suite, sequential execution.
    HostSeq,
    /// Policy-based suite, parallel execution.
    HostPar,
}

impl BackendArg {
    fn selector(self) -> BackendSelector {
        match self {
            BackendArg::Default => BackendSelector::default(),
            BackendArg::HostSeq => BackendSelector::host_sequential(),
            BackendArg::HostPar => BackendSelector::host_parallel(),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

fn parse_problem(s: &str) -> Result<ProblemSpec, String> {
    s.parse()
}

#[derive(Args)]
struct SolveArgs {
    /// Problem selector: `synthetic:<k>` or `random:<seed>:<n_d>:<n_s>:<m_E>:<m_I>`.
    #[arg(long, value_parser = parse_problem)]
    problem: ProblemSpec,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long, default_value_t = 500)]
    max_iter: usize,
    #[arg(long, default_value_t = 0.1)]
    mu0: f64,
    #[arg(long, value_enum, default_value_t = BackendArg::Default)]
    backend: BackendArg,
    /// Write the per-iteration log to this file.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    /// Dump the full and compressed KKT matrices per iteration into this
    /// directory (text triplet format).
    #[arg(long)]
    dump_kkt: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Problem sizes `k` to sweep.
    #[arg(long, value_delimiter = ',', default_values_t = [10usize, 50, 100, 200, 500])]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long, default_value_t = 500)]
    max_iter: usize,
    #[arg(long, default_value_t = 0.1)]
    mu0: f64,
    #[arg(long, value_enum, default_value_t = BackendArg::Default)]
    backend: BackendArg,
    /// Write benchmark records to this file.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
}

#[derive(Args)]
struct VerifyArgs {
    /// Random instances per suite; zero runs nothing and exits cleanly.
    #[arg(long, default_value_t = 100)]
    seeds: usize,
    /// Base seed of the deterministic instance stream.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = BackendArg::Default)]
    backend: BackendArg,
}

fn options(tol: f64, max_iter: usize, mu0: f64) -> SolverOptions {
    SolverOptions::default()
        .with_tol(tol)
        .with_max_iter(max_iter)
        .with_mu0(mu0)
}

fn print_solve_summary(res: &SolveResult) {
    println!("status:        {:?}", res.status);
    println!("iterations:    {}", res.iterations);
    println!("objective:     {:.12e}", res.objective);
    println!("error e_0:     {:.3e}", res.final_error);
    println!("kkt dimension: {}", res.kkt_dim);
    if !res.log.is_empty() {
        let n = res.log.len() as f64;
        let sum = |f: fn(&mdsipm::ipm::IterationLog) -> f64| res.log.iter().map(f).sum::<f64>();
        let total = sum(|l| l.t_total);
        println!(
            "avg iter time: {:.6}s (K1 {:.6}s, K2 {:.6}s, K3 {:.6}s, K4 {:.6}s)",
            total / n,
            sum(|l| l.t_k1) / n,
            sum(|l| l.t_k2) / n,
            sum(|l| l.t_k3) / n,
            sum(|l| l.t_k4) / n
        );
        if total > 0.0 {
            println!("K4 fraction:   {:.1}%", 100.0 * sum(|l| l.t_k4) / total);
        }
    }
}

fn run_solve(args: SolveArgs) -> Result<ExitCode, String> {
    let problem = args.problem.instantiate();
    let report = mdsipm::nlp::validate_problem(&problem);
    if !report.is_valid() {
        return Err(format!("invalid problem: {}", report.violations.join("; ")));
    }
    let kernels = make_linear_algebra(args.backend.selector()).map_err(|e| e.to_string())?;
    let clock = StdClock::new();
    let mut dumper = match &args.dump_kkt {
        Some(dir) => Some(KktDumper::new(dir).map_err(|e| e.to_string())?),
        None => None,
    };

    let mut solver = Solver::new(&problem, options(args.tol, args.max_iter, args.mu0))
        .with_kernels(kernels)
        .with_clock(&clock);
    if let Some(d) = dumper.as_mut() {
        solver = solver.with_observer(d);
    }
    let res = solver.run().map_err(|e| e.to_string())?;

    print_solve_summary(&res);
    if let Some(d) = &dumper {
        if !d.errors.is_empty() {
            return Err(format!("kkt dump failures: {}", d.errors.join("; ")));
        }
    }
    if let Some(path) = &args.out {
        let file = File::create(path).map_err(|e| format!("{}: {e}", path.display()))?;
        match args.format {
            FormatArg::Csv => write_iteration_log_csv(file, &res.log).map_err(|e| e.to_string())?,
            FormatArg::Json => {
                let rows: Vec<serde_json::Value> = res
                    .log
                    .iter()
                    .map(|l| {
                        serde_json::json!({
                            "iter": l.iter,
                            "mu": l.mu,
                            "theta": l.theta,
                            "phi": l.phi,
                            "alpha_primal": l.alpha_primal,
                            "alpha_dual": l.alpha_dual,
                            "delta_w": l.delta_w,
                            "delta_c": l.delta_c,
                            "inertia_pos": l.inertia.pos,
                            "inertia_zero": l.inertia.zero,
                            "inertia_neg": l.inertia.neg,
                            "t_K1": l.t_k1,
                            "t_K2": l.t_k2,
                            "t_K3": l.t_k3,
                            "t_K4": l.t_k4,
                            "t_total": l.t_total,
                        })
                    })
                    .collect();
                write_json(file, &rows).map_err(|e| e.to_string())?;
            }
        }
        println!("log written to {}", path.display());
    }

    Ok(if res.status == SolveStatus::Optimal {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn run_bench(args: BenchArgs) -> Result<ExitCode, String> {
    if args.sizes.is_empty() {
        return Err("bench requires at least one size".into());
    }
    let (records, errors) = bench_sweep(
        &args.sizes,
        &options(args.tol, args.max_iter, args.mu0),
        args.backend.selector(),
    );
    println!(
        "{:>8} {:>8} {:>6} {:>14} {:>12} {:>12} {:>12} {:>12} {:>8}",
        "k", "dim", "iters", "avg_iter_time", "avg_t_K1", "avg_t_K2", "avg_t_K3", "avg_t_K4", "K4%"
    );
    for r in &records {
        println!(
            "{:>8} {:>8} {:>6} {:>14.6} {:>12.6} {:>12.6} {:>12.6} {:>12.6} {:>7.1}%",
            r.k,
            r.kkt_dim,
            r.iterations,
            r.avg_iter_time,
            r.avg_t_k1,
            r.avg_t_k2,
            r.avg_t_k3,
            r.avg_t_k4,
            100.0 * r.k4_fraction
        );
    }
    for (k, e) in &errors {
        eprintln!("size {k}: {e}");
    }
    if let Some(path) = &args.out {
        let file = File::create(path).map_err(|e| format!("{}: {e}", path.display()))?;
        match args.format {
            FormatArg::Csv => write_bench_csv(file, &records).map_err(|e| e.to_string())?,
            FormatArg::Json => write_json(file, &records).map_err(|e| e.to_string())?,
        }
        println!("records written to {}", path.display());
    }
    Ok(if errors.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn run_verify(args: VerifyArgs) -> Result<ExitCode, String> {
    let kernels = make_linear_algebra(args.backend.selector()).map_err(|e| e.to_string())?;
    let cfg = VerifyConfig {
        seeds: args.seeds,
        base_seed: args.seed,
        ..VerifyConfig::default()
    };
    let reports = run_all_suites(&*kernels, &cfg);
    let mut failed = 0;
    for r in &reports {
        println!(
            "{:<28} {:>5} passed {:>5} failed",
            r.name, r.passed, r.failed
        );
        for msg in &r.messages {
            println!("    {msg}");
        }
        failed += r.failed;
    }
    println!(
        "verify: {} suites, {} checks failed",
        reports.len(),
        failed
    );
    Ok(if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("MDS_IPM_LOG")).init();
    let cli = Cli::parse();
    let outcome = match cli.cmd {
        Cmd::Solve(args) => run_solve(args),
        Cmd::Bench(args) => run_bench(args),
        Cmd::Verify(args) => run_verify(args),
    };
    match outcome {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
