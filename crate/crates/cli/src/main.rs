mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use spectrum_split::analytic::{interference_limited_density, optimal_threshold};
use spectrum_split::experiments::{self, Figure, SweepSpec, SweepTable};
use spectrum_split::lattice::lattice_min_spacing;
use spectrum_split::{
    area_spectral_efficiency, capacity_approx, capacity_for_plan, capacity_interference_limited, det_upper_bound,
    ds_capacity, estimate_outage, gap_adjusted_threshold, info_density, optimal_band_count,
    optimal_spectral_efficiency, sinr_threshold, solve_capacity, Error, FadingModel, NetworkParams, SimConfig, Snr,
};

use render::OutputMode;

const THREADS_ENV: &str = "SPECTRUM_SPLIT_THREADS";

#[derive(Parser)]
#[command(name = "spectrum-split", version, about = "Optimal frequency band splitting for random wireless networks")]
struct Cli {
    #[arg(long, value_enum, default_value_t = OutputMode::Human, global = true)]
    output: OutputMode,

    /// Master seed for Monte-Carlo runs.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Optimal spectral efficiency and band count.
    Optimal(OptimalArgs),
    /// Closed-form densities for a given band count.
    Capacity(CapacityArgs),
    /// Monte-Carlo outage or maximum density.
    Simulate(SimulateArgs),
    /// Regenerate a figure table.
    Sweep(SweepArgs),
    /// Deterministic-placement bounds against the random network.
    Bounds(BoundsArgs),
    /// Frequency hopping against direct-sequence spreading.
    Ds(DsArgs),
}

#[derive(Args, Clone)]
struct NetworkArgs {
    /// Path-loss exponent.
    #[arg(long, default_value_t = 4.0, allow_negative_numbers = true)]
    alpha: f64,
    /// Link distance in meters.
    #[arg(long, default_value_t = 10.0, allow_negative_numbers = true)]
    d: f64,
    /// Spectral utilization R/W in bit/s/Hz; alternative to --rate.
    #[arg(long, allow_negative_numbers = true, conflicts_with = "rate")]
    util: Option<f64>,
    /// Per-link rate in bit/s.
    #[arg(long, allow_negative_numbers = true)]
    rate: Option<f64>,
    /// Total bandwidth in Hz.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    bandwidth: f64,
    /// Transmit power in W.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    power: f64,
    /// Full-band SNR in dB, or `inf`.
    #[arg(long, default_value = "inf", conflicts_with = "n0", allow_negative_numbers = true)]
    snr_db: String,
    /// Noise spectral density in W/Hz.
    #[arg(long, allow_negative_numbers = true)]
    n0: Option<f64>,
}

impl NetworkArgs {
    fn params(&self) -> Result<NetworkParams, Error> {
        let rate = match (self.util, self.rate) {
            (Some(u), None) => u * self.bandwidth,
            (None, Some(r)) => r,
            _ => return Err(Error::Invalid("one of --util or --rate is required".into())),
        };
        if let Some(n0) = self.n0 {
            return NetworkParams::new(self.alpha, self.d, self.power, n0, self.bandwidth, rate);
        }
        let snr = parse_snr(&self.snr_db)?;
        NetworkParams::new(self.alpha, self.d, self.power, 0.0, self.bandwidth, rate)?.with_snr(snr)
    }
}

fn parse_snr(s: &str) -> Result<Snr, Error> {
    match s.trim().to_ascii_lowercase().as_str() {
        "inf" | "+inf" | "infinity" => Ok(Snr::Infinite),
        other => other
            .parse::<f64>()
            .map_err(|_| Error::Invalid(format!("snr-db must be a number or inf, got {s}")))
            .and_then(Snr::from_db),
    }
}

#[derive(Args)]
struct OptimalArgs {
    #[arg(long, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long, allow_negative_numbers = true)]
    util: f64,
}

#[derive(Args)]
struct CapacityArgs {
    #[command(flatten)]
    net: NetworkArgs,
    /// Number of sub-bands.
    #[arg(long)]
    n: u32,
    /// Outage constraint.
    #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
    eps: f64,
    /// Coding gap in (0, 1].
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    gamma: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum FadingArg {
    PathLoss,
    Rayleigh,
}

impl From<FadingArg> for FadingModel {
    fn from(f: FadingArg) -> Self {
        match f {
            FadingArg::PathLoss => FadingModel::PathLossOnly,
            FadingArg::Rayleigh => FadingModel::Rayleigh,
        }
    }
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    net: NetworkArgs,
    #[arg(long, default_value_t = 1)]
    n: u32,
    #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
    eps: f64,
    #[arg(long, value_enum, default_value_t = FadingArg::PathLoss)]
    fading: FadingArg,
    #[arg(long, default_value_t = 200_000)]
    trials: u64,
    /// Simulation disk radius in meters (default scales with the threshold).
    #[arg(long, allow_negative_numbers = true)]
    window_radius: Option<f64>,
    #[arg(long, default_value_t = 0.002, allow_negative_numbers = true)]
    tol: f64,
    #[arg(long, default_value_t = 60)]
    max_iter: u32,
    /// Estimate outage at this total density instead of solving for the density.
    #[arg(long, allow_negative_numbers = true)]
    intensity: Option<f64>,
    /// Rerun the request recorded in a JSON report.
    #[arg(long)]
    replay: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_enum, default_value_t = FigureArg::Fig2)]
    figure: FigureArg,
    /// Write the CSV here and the JSON sidecar next to it.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    n_max: Option<u32>,
    /// Comma-separated utilizations.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    utils: Option<Vec<f64>>,
    /// Comma-separated path-loss exponents.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    alphas: Option<Vec<f64>>,
    /// Skip the Monte-Carlo columns.
    #[arg(long)]
    no_mc: bool,
    /// Rerun the sweep recorded in a sidecar.
    #[arg(long)]
    replay: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FigureArg {
    Fig1,
    Fig2,
    DsCompare,
    BoundsCompare,
}

impl From<FigureArg> for Figure {
    fn from(f: FigureArg) -> Self {
        match f {
            FigureArg::Fig1 => Figure::Fig1,
            FigureArg::Fig2 => Figure::Fig2,
            FigureArg::DsCompare => Figure::DsCompare,
            FigureArg::BoundsCompare => Figure::BoundsCompare,
        }
    }
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long, default_value_t = 4.0, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long, default_value_t = 10.0, allow_negative_numbers = true)]
    d: f64,
    #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
    eps: f64,
    /// Spectral efficiency; defaults to the optimum for alpha.
    #[arg(long, allow_negative_numbers = true)]
    b: Option<f64>,
}

#[derive(Args)]
struct DsArgs {
    #[command(flatten)]
    net: NetworkArgs,
    #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
    eps: f64,
    #[arg(long, default_value_t = 20)]
    n_max: u32,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_validation() { 2 } else { 3 };
        Failure { code, message: e.to_string() }
    }
}

fn threads_from_env() -> Result<usize, Failure> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(0),
        Ok(s) if s.trim().is_empty() => Ok(0),
        Ok(s) => s.trim().parse().map_err(|_| Failure {
            code: 2,
            message: format!("{THREADS_ENV} must be a non-negative integer, got {s}"),
        }),
    }
}

#[derive(Serialize)]
struct OptimalReport {
    alpha: f64,
    util: f64,
    b_star: f64,
    beta_star: f64,
    beta_star_db: f64,
    n_real: f64,
    n_star: u32,
    /// lambda(N*) / lambda(1), noise free.
    single_band_penalty: f64,
}

fn cmd_optimal(args: &OptimalArgs) -> Result<OptimalReport, Error> {
    let params = NetworkParams::interference_limited(args.alpha, 1.0, args.util)?;
    let b_star = optimal_spectral_efficiency(args.alpha)?;
    let beta_star = optimal_threshold(args.alpha)?;
    let count = optimal_band_count(&params)?;
    let best = capacity_interference_limited(&params, count.n_star, 0.5)?.lambda;
    let single = capacity_interference_limited(&params, 1, 0.5)?.lambda;
    Ok(OptimalReport {
        alpha: args.alpha,
        util: args.util,
        b_star,
        beta_star,
        beta_star_db: 10.0 * beta_star.log10(),
        n_real: count.n_real,
        n_star: count.n_star,
        single_band_penalty: best / single,
    })
}

#[derive(Serialize)]
struct CapacityReport {
    params: NetworkParams,
    snr_db: f64,
    n: u32,
    eps: f64,
    gamma: f64,
    beta: f64,
    beta_db: f64,
    b: f64,
    lambda: f64,
    lambda_interference_limited: f64,
    lambda_ds: f64,
    info_density: f64,
    relaxed_density_check: f64,
    area_spectral_efficiency: f64,
}

fn cmd_capacity(args: &CapacityArgs) -> Result<CapacityReport, Error> {
    let params = args.net.params()?;
    let plan = gap_adjusted_threshold(&params, args.n, args.gamma)?;
    let lambda = if args.gamma == 1.0 {
        capacity_approx(&params, args.n, args.eps)?.lambda
    } else {
        capacity_for_plan(&params, &plan, args.eps)?.lambda
    };
    let b_star = optimal_spectral_efficiency(params.alpha())?;
    Ok(CapacityReport {
        params,
        snr_db: params.snr().db(),
        n: args.n,
        eps: args.eps,
        gamma: args.gamma,
        beta: plan.beta,
        beta_db: plan.beta_db(),
        b: plan.b,
        lambda,
        lambda_interference_limited: capacity_interference_limited(&params, args.n, args.eps)?.lambda,
        lambda_ds: ds_capacity(&params, args.n, args.eps)?.lambda,
        info_density: info_density(&params, args.eps)?.lambda,
        relaxed_density_check: interference_limited_density(&params, b_star / params.util(), args.eps)?,
        area_spectral_efficiency: area_spectral_efficiency(&params, args.eps)?,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct SimulateRequest {
    params: NetworkParams,
    n: u32,
    eps: f64,
    fading: FadingModel,
    intensity: Option<f64>,
    sim: SimConfig,
}

#[derive(Serialize, Deserialize)]
struct SimulateReport {
    request: SimulateRequest,
    analytic_lambda: Option<f64>,
    result: SimulateResult,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
enum SimulateResult {
    Outage { p_out: f64, stderr: f64, trials: u64 },
    Capacity { lambda: f64, stderr: f64, ratio_to_analytic: Option<f64> },
}

fn simulate_request(args: &SimulateArgs, seed: u64) -> Result<SimulateRequest, Error> {
    if let Some(path) = &args.replay {
        let text = std::fs::read_to_string(path)?;
        let value: serde_json::Value = serde_json::from_str(&text)?;
        let request = value.get("request").cloned().unwrap_or(value);
        return Ok(serde_json::from_value(request)?);
    }
    let sim = SimConfig {
        trials: args.trials,
        window_radius: args.window_radius,
        master_seed: seed,
        bisect_tol_abs: args.tol,
        bisect_max_iter: args.max_iter,
        ..SimConfig::default()
    };
    sim.validate()?;
    Ok(SimulateRequest {
        params: args.net.params()?,
        n: args.n,
        eps: args.eps,
        fading: args.fading.into(),
        intensity: args.intensity,
        sim,
    })
}

fn cmd_simulate(args: &SimulateArgs, seed: u64, threads: usize) -> Result<SimulateReport, Error> {
    let request = simulate_request(args, seed)?;
    let sim = SimConfig { threads, ..request.sim.clone() };
    let analytic_lambda = capacity_approx(&request.params, request.n, request.eps).ok().map(|c| c.lambda);
    let result = match request.intensity {
        Some(total) => {
            let plan = sinr_threshold(&request.params, request.n)?;
            let est = estimate_outage(&request.params, &plan, total, request.fading, &sim)?;
            SimulateResult::Outage { p_out: est.p_out, stderr: est.stderr, trials: est.trials }
        }
        None => {
            let cap = solve_capacity(&request.params, request.n, request.eps, request.fading, &sim)?;
            SimulateResult::Capacity {
                lambda: cap.lambda,
                stderr: cap.stderr,
                ratio_to_analytic: analytic_lambda.map(|a| cap.lambda / a),
            }
        }
    };
    Ok(SimulateReport { request, analytic_lambda, result })
}

fn sweep_spec(args: &SweepArgs, seed: u64) -> Result<SweepSpec, Error> {
    if let Some(path) = &args.replay {
        return Ok(experiments::read_sidecar(path)?.spec);
    }
    let mut spec = SweepSpec::defaults(args.figure.into());
    spec.sim.master_seed = seed;
    if let Some(t) = args.trials {
        spec.sim.trials = t;
    }
    if let Some(n) = args.n_max {
        spec.grid.n_max = n;
    }
    if let Some(u) = &args.utils {
        spec.grid.utils = u.clone();
    }
    if let Some(a) = &args.alphas {
        spec.grid.alphas = a.clone();
    }
    spec.grid.monte_carlo = !args.no_mc;
    spec.output_path = args.out.clone();
    spec.validate()?;
    Ok(spec)
}

fn cmd_sweep(args: &SweepArgs, seed: u64, threads: usize, mode: OutputMode) -> Result<String, Error> {
    let mut spec = sweep_spec(args, seed)?;
    if args.replay.is_some() && args.out.is_some() {
        spec.output_path = args.out.clone();
    }
    let mut run = spec.clone();
    run.sim.threads = threads;
    let table = experiments::run_sweep(&run)?;
    if let Some(path) = &spec.output_path {
        experiments::write_outputs(&spec, &table, path)?;
    }
    Ok(match mode {
        OutputMode::Csv => table.to_csv_string()?,
        OutputMode::Json => serde_json::to_string_pretty(&table)? + "\n",
        OutputMode::Human => match &table {
            SweepTable::Fig1(r) => render::table(r),
            SweepTable::Fig2(r) => render::table(r),
            SweepTable::DsCompare(r) => render::table(r),
            SweepTable::BoundsCompare(r) => render::table(r),
        },
    })
}

#[derive(Serialize)]
struct BoundsReport {
    alpha: f64,
    d: f64,
    eps: f64,
    b: f64,
    beta: f64,
    det_upper: f64,
    lattice_lower: f64,
    lattice_spacing: f64,
    random: f64,
    upper_over_lattice: f64,
    random_over_upper: f64,
}

fn cmd_bounds(args: &BoundsArgs) -> Result<BoundsReport, Error> {
    let b = match args.b {
        Some(b) => b,
        None => optimal_spectral_efficiency(args.alpha)?,
    };
    let params = NetworkParams::interference_limited(args.alpha, args.d, b)?;
    let upper = det_upper_bound(&params, b)?.lambda;
    let layout = lattice_min_spacing(&params, b)?;
    let lattice = layout.density();
    let random = capacity_interference_limited(&params, 1, args.eps)?.lambda;
    Ok(BoundsReport {
        alpha: args.alpha,
        d: args.d,
        eps: args.eps,
        b,
        beta: b.exp2() - 1.0,
        det_upper: upper,
        lattice_lower: lattice,
        lattice_spacing: layout.spacing,
        random,
        upper_over_lattice: upper / lattice,
        random_over_upper: random / upper,
    })
}

fn cmd_ds(args: &DsArgs, mode: OutputMode) -> Result<String, Error> {
    let params = args.net.params()?;
    let mut spec = SweepSpec::defaults(Figure::DsCompare);
    spec.grid.alphas = vec![params.alpha()];
    spec.grid.utils = vec![params.util()];
    spec.grid.d = params.d();
    spec.grid.epsilon = args.eps;
    spec.grid.n_max = args.n_max;
    let table = SweepTable::DsCompare(experiments::run_ds_compare(&spec)?);
    Ok(match mode {
        OutputMode::Csv => table.to_csv_string()?,
        OutputMode::Json => serde_json::to_string_pretty(&table)? + "\n",
        OutputMode::Human => match &table {
            SweepTable::DsCompare(r) => render::table(r),
            _ => unreachable!(),
        },
    })
}

fn run(cli: &Cli) -> Result<String, Failure> {
    let threads = threads_from_env()?;
    let mode = cli.output;
    Ok(match &cli.command {
        Command::Optimal(a) => render::record(mode, &cmd_optimal(a)?),
        Command::Capacity(a) => render::record(mode, &cmd_capacity(a)?),
        Command::Simulate(a) => render::record(mode, &cmd_simulate(a, cli.seed, threads)?),
        Command::Sweep(a) => cmd_sweep(a, cli.seed, threads, mode)?,
        Command::Bounds(a) => render::record(mode, &cmd_bounds(a)?),
        Command::Ds(a) => cmd_ds(a, mode)?,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
