//! Command-line entry point: one subcommand per concern, uniform JSON
//! summaries, reproducible seeding.
//!
//! Every run writes `<out>/<command>_summary.json`, even on failure (the
//! error is recorded in the summary). CSV outputs carry a first comment
//! line with the toolkit version and the config hash. Randomness comes
//! from ChaCha12 seeded by the config; chain i uses stream i.

use crate::config::{sha256_hex, Config, ConfigError};
use crate::deconv::{self, PiSource};
use crate::exact::{self, SpinGraph};
use crate::green::{self, ZeroModePolicy};
use crate::gs::{self, GsParams};
use crate::lattice::{Coupling, StepDistribution, TorusGeometry};
use crate::mc::{self, Schedule};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use std::fs;
use std::path::{Path, PathBuf};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(name = "phi4lace", version, about = "lattice phi^4 / lace-expansion toolkit")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output directory for summaries and tables
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct CouplingArgs {
    /// Lattice dimension
    #[arg(long)]
    d: usize,
    /// Coupling kind: nn | box | table
    #[arg(long, default_value = "nn")]
    coupling: String,
    /// Per-bond amplitude for nn and box couplings
    #[arg(long, default_value_t = 0.1)]
    amplitude: f64,
    /// Box radius (kind = box)
    #[arg(long)]
    radius: Option<u32>,
    /// Explicit table file: lines `c_1 ... c_d J` (kind = table)
    #[arg(long)]
    table_file: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate the random-walk Green function S_p on a torus
    Greens {
        #[command(flatten)]
        coupling: CouplingArgs,
        /// Torus side
        #[arg(long = "L", default_value_t = 16)]
        side: usize,
        /// Fugacity in [0, 1]
        #[arg(long)]
        p: f64,
        /// At p = 1, drop the k = 0 mode instead of failing
        #[arg(long)]
        subtract_zero_mode: bool,
    },
    /// Single-site convergence of the block-spin construction
    GsCheck {
        #[command(flatten)]
        coupling: CouplingArgs,
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        mu: f64,
        /// Block sizes to scan
        #[arg(long, default_value = "16,64,256")]
        n_list: String,
    },
    /// Exact two-point matrices and the correlation-inequality suite
    Exact {
        /// Edge-list file: vertex count, then `a b J` lines
        #[arg(long)]
        graph: PathBuf,
        /// Override every bond coupling
        #[arg(long = "J")]
        set_j: Option<f64>,
        /// Cut radius for the Simon-Lieb factorization
        #[arg(long)]
        cut: Option<f64>,
    },
    /// Double-connection coefficient and the lace-identity residual
    Lace {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long = "J")]
        set_j: Option<f64>,
        /// Root vertex
        #[arg(long, default_value_t = 0)]
        root: usize,
    },
    /// Monte Carlo run from a config file
    Mc {
        #[arg(long)]
        config: PathBuf,
    },
    /// Critical-point scan from a config file
    Critical {
        #[arg(long)]
        config: PathBuf,
    },
    /// Deconvolution pipeline from a config file
    Deconv {
        #[arg(long)]
        config: PathBuf,
    },
}

/// Entry point; returns the process exit code (0 ok, 1 module error,
/// 2 invalid config).
pub fn run() -> i32 {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    let out_dir = cli.out.clone();
    if let Err(e) = fs::create_dir_all(&out_dir) {
        eprintln!("cannot create output directory {}: {e}", out_dir.display());
        return 2;
    }

    let (name, result) = dispatch(&cli, &argv);
    let (status, code, body) = match result {
        Ok(results) => ("ok", 0, results),
        Err(Failure::Config(msg)) => ("config-error", 2, json!({ "error": msg })),
        Err(Failure::Module(msg)) => ("module-error", 1, json!({ "error": msg })),
    };
    let summary = json!({
        "version": VERSION,
        "command": name,
        "config_hash": hash_of_invocation(&argv, &cli),
        "status": status,
        "results": body,
    });
    let path = out_dir.join(format!("{name}_summary.json"));
    match fs::write(&path, serde_json::to_string_pretty(&summary).unwrap()) {
        Ok(()) => println!("{}", path.display()),
        Err(e) => {
            eprintln!("cannot write summary: {e}");
            return 2;
        }
    }
    if code != 0 {
        eprintln!("{status}: see {}", path.display());
    }
    code
}

enum Failure {
    Config(String),
    Module(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.to_string())
    }
}

fn module<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Module(e.to_string())
}

/// Hash of the invocation: argv (minus the output location, which is not
/// part of the configuration) plus the config file text when one is given,
/// so editing the file changes every recorded hash.
fn hash_of_invocation(argv: &[String], cli: &Cli) -> String {
    let mut kept: Vec<&str> = Vec::new();
    let mut skip = false;
    for arg in argv {
        if skip {
            skip = false;
            continue;
        }
        if arg == "--out" {
            skip = true;
            continue;
        }
        if let Some(stripped) = arg.strip_prefix("--out=") {
            let _ = stripped;
            continue;
        }
        kept.push(arg);
    }
    let mut text = kept.join(" ");
    let config_path = match &cli.command {
        Command::Mc { config } | Command::Critical { config } | Command::Deconv { config } => {
            Some(config)
        }
        _ => None,
    };
    if let Some(path) = config_path {
        if let Ok(body) = fs::read_to_string(path) {
            text.push('\n');
            text.push_str(&body);
        }
    }
    sha256_hex(&text)
}

fn dispatch(cli: &Cli, argv: &[String]) -> (&'static str, Result<Value, Failure>) {
    let hash = hash_of_invocation(argv, cli);
    match &cli.command {
        Command::Greens {
            coupling,
            side,
            p,
            subtract_zero_mode,
        } => (
            "greens",
            run_greens(coupling, *side, *p, *subtract_zero_mode, &cli.out, &hash),
        ),
        Command::GsCheck {
            coupling,
            lambda,
            mu,
            n_list,
        } => (
            "gs-check",
            run_gs_check(coupling, *lambda, *mu, n_list, &cli.out, &hash),
        ),
        Command::Exact { graph, set_j, cut } => ("exact", run_exact(graph, *set_j, *cut)),
        Command::Lace { graph, set_j, root } => ("lace", run_lace(graph, *set_j, *root)),
        Command::Mc { config } => ("mc", run_mc(config, &cli.out, &hash)),
        Command::Critical { config } => ("critical", run_critical(config)),
        Command::Deconv { config } => ("deconv", run_deconv(config, &cli.out, &hash)),
    }
}

fn build_coupling(args: &CouplingArgs) -> Result<Coupling, Failure> {
    match args.coupling.as_str() {
        "nn" => Coupling::nearest_neighbor(args.d, args.amplitude).map_err(module),
        "box" => {
            let radius = args
                .radius
                .ok_or_else(|| Failure::Config("box coupling needs --radius".into()))?;
            Coupling::spread_out_box(args.d, radius, args.amplitude).map_err(module)
        }
        "table" => {
            let path = args
                .table_file
                .as_ref()
                .ok_or_else(|| Failure::Config("table coupling needs --table-file".into()))?;
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
            let table = parse_coupling_table(&text, args.d)?;
            Coupling::explicit(args.d, table).map_err(module)
        }
        other => Err(Failure::Config(format!("unknown coupling kind `{other}`"))),
    }
}

fn parse_coupling_table(text: &str, d: usize) -> Result<Vec<(Vec<i32>, f64)>, Failure> {
    let mut out = Vec::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != d + 1 {
            return Err(Failure::Config(format!(
                "coupling table line `{line}` needs {d} coordinates and a value"
            )));
        }
        let coords: Result<Vec<i32>, _> = fields[..d].iter().map(|s| s.parse()).collect();
        let coords = coords.map_err(|e| Failure::Config(format!("{line}: {e}")))?;
        let value: f64 = fields[d]
            .parse()
            .map_err(|e| Failure::Config(format!("{line}: {e}")))?;
        out.push((coords, value));
    }
    Ok(out)
}

fn write_csv(
    path: &Path,
    hash: &str,
    header: &str,
    rows: impl Iterator<Item = String>,
) -> Result<(), Failure> {
    let mut body = format!("# phi4lace {VERSION} config={hash}\n{header}\n");
    for row in rows {
        body.push_str(&row);
        body.push('\n');
    }
    fs::write(path, body).map_err(|e| Failure::Module(format!("{}: {e}", path.display())))
}

fn run_greens(
    args: &CouplingArgs,
    side: usize,
    p: f64,
    subtract: bool,
    out: &Path,
    hash: &str,
) -> Result<Value, Failure> {
    let coupling = build_coupling(args)?;
    let geom = TorusGeometry::new(args.d, side).map_err(module)?;
    let step = StepDistribution::from_coupling(&coupling, 1.0).map_err(module)?;
    let policy = if subtract {
        ZeroModePolicy::Subtract
    } else {
        ZeroModePolicy::Reject
    };
    let table = green::green_torus_from_step(&step, &geom, p, policy).map_err(module)?;

    let csv = out.join("greens_table.csv");
    let coords_header: String = (0..args.d).map(|i| format!("x{i},")).collect();
    write_csv(
        &csv,
        hash,
        &format!("{coords_header}abs_x,value"),
        (0..geom.volume()).map(|i| {
            let coords = geom.coords_of(i);
            let cs: String = coords.iter().map(|c| format!("{c},")).collect();
            format!("{cs}{},{:.17e}", geom.min_image_norm2(i).sqrt(), table.values()[i])
        }),
    )?;

    let sum = table.sum();
    let sum_target = if p < 1.0 { 1.0 / (1.0 - p) } else { f64::NAN };
    Ok(json!({
        "side": side,
        "p": p,
        "zero_mode_subtracted": table.zero_mode_subtracted(),
        "sum": sum,
        "sum_rule_target": sum_target,
        "sum_rule_abs_error": if p < 1.0 { (sum - sum_target).abs() } else { f64::NAN },
        "value_at_origin": table.values()[0],
        "table_csv": csv.display().to_string(),
    }))
}

fn run_gs_check(
    args: &CouplingArgs,
    lambda: f64,
    mu: f64,
    n_list: &str,
    out: &Path,
    hash: &str,
) -> Result<Value, Failure> {
    let coupling = build_coupling(args)?;
    let ns: Result<Vec<u64>, _> = n_list.split(',').map(|s| s.trim().parse()).collect();
    let ns = ns.map_err(|e| Failure::Config(format!("n_list: {e}")))?;
    let mut rows = Vec::new();
    for &n in &ns {
        let params = GsParams::new(lambda, mu, coupling.clone(), n).map_err(module)?;
        rows.extend(gs::single_site_moments(&params, &[2, 4]).map_err(module)?);
    }
    let csv = out.join("gs_convergence.csv");
    write_csv(
        &csv,
        hash,
        "N,order,finite_n,target,difference",
        rows.iter().map(|r| {
            format!(
                "{},{},{:.17e},{:.17e},{:.17e}",
                r.n, r.order, r.finite_n, r.target, r.difference
            )
        }),
    )?;
    // strictly decreasing differences along the N list, per order
    let monotone = |order: u32| -> bool {
        let diffs: Vec<f64> = rows
            .iter()
            .filter(|r| r.order == order)
            .map(|r| r.difference)
            .collect();
        diffs.windows(2).all(|w| w[1] < w[0] + 1e-12)
    };
    Ok(json!({
        "n_list": ns,
        "rows": rows.len(),
        "monotone_order2": monotone(2),
        "monotone_order4": monotone(4),
        "table_csv": csv.display().to_string(),
    }))
}

fn load_graph(path: &Path, set_j: Option<f64>) -> Result<SpinGraph, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    let graph = SpinGraph::parse_edge_list(&text).map_err(module)?;
    Ok(match set_j {
        Some(j) => graph.with_uniform_coupling(j),
        None => graph,
    })
}

fn run_exact(path: &Path, set_j: Option<f64>, cut: Option<f64>) -> Result<Value, Failure> {
    let graph = load_graph(path, set_j)?;
    let spin = exact::spin_two_point(&graph).map_err(module)?;
    let current = exact::current_two_point(&graph).map_err(module)?;
    let max_dev = spin
        .iter()
        .zip(&current)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let suite = exact::inequality_suite(&graph, cut).map_err(module)?;
    Ok(json!({
        "vertices": graph.vertex_count(),
        "bonds": graph.bonds().len(),
        "two_point_spin": spin,
        "two_point_current": current,
        "max_backend_deviation": max_dev,
        "inequalities": suite,
        "all_pass": suite.all_pass(1e-12),
    }))
}

fn run_lace(path: &Path, set_j: Option<f64>, root: usize) -> Result<Value, Failure> {
    let graph = load_graph(path, set_j)?;
    if root >= graph.vertex_count() {
        return Err(Failure::Config(format!("root {root} out of range")));
    }
    let pi = exact::pi_zero(&graph, root).map_err(module)?;
    let report = exact::lace_residual_check(&graph, root).map_err(module)?;
    Ok(json!({
        "root": root,
        "pi_zero": pi,
        "lace": report,
        "bound_holds": report.min_slack >= -1e-12,
    }))
}

/// Shared [coupling]/[geometry] config blocks.
fn coupling_from_config(cfg: &Config) -> Result<Coupling, Failure> {
    let d = cfg.require_usize("coupling", "d")?;
    let kind = cfg.get("coupling", "kind").unwrap_or("nn");
    match kind {
        "nn" => {
            let amplitude = cfg.require_f64("coupling", "amplitude")?;
            Coupling::nearest_neighbor(d, amplitude).map_err(module)
        }
        "box" => {
            let amplitude = cfg.require_f64("coupling", "amplitude")?;
            let radius = cfg.require_usize("coupling", "radius")? as u32;
            Coupling::spread_out_box(d, radius, amplitude).map_err(module)
        }
        "table" => {
            let file = cfg.require("coupling", "table_file")?;
            let text = fs::read_to_string(file)
                .map_err(|e| Failure::Config(format!("{file}: {e}")))?;
            let table = parse_coupling_table(&text, d)?;
            Coupling::explicit(d, table).map_err(module)
        }
        other => Err(Failure::Config(format!("unknown coupling kind `{other}`"))),
    }
}

fn run_mc(path: &Path, out: &Path, hash: &str) -> Result<Value, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    let cfg = Config::parse(&text)?;
    let coupling = coupling_from_config(&cfg)?;
    let d = coupling.dimension();
    let side = cfg.require_usize("geometry", "L")?;
    let geom = TorusGeometry::new(d, side).map_err(module)?;
    let lambda = cfg.require_f64("model", "lambda")?;
    let mu = cfg.require_f64("model", "mu")?;
    let schedule = Schedule::new(
        cfg.require_usize("schedule", "sweeps")?,
        cfg.require_usize("schedule", "burn_in")?,
        cfg.get_usize("schedule", "thin")?.unwrap_or(1),
    )
    .map_err(module)?;
    let seed = cfg.get_u64("run", "seed")?.unwrap_or(1);
    let chains = cfg.get_usize("run", "chains")?.unwrap_or(1);
    let displacements = cfg
        .get_displacements("run", "displacements")?
        .unwrap_or_else(|| vec![vec![0; d]]);
    for x in &displacements {
        if x.len() != d {
            return Err(Failure::Config(format!("displacement {x:?} has wrong arity")));
        }
    }

    let runs = mc::run_chains(
        &coupling,
        lambda,
        mu,
        &geom,
        schedule,
        seed,
        chains,
        &displacements,
    )
    .map_err(module)?;
    let merged = mc::merge_observables(&runs);

    // Schwinger-Dyson residuals, merged across chains per displacement
    let per_chain: Vec<Vec<(Vec<i32>, crate::stats::Estimate)>> =
        runs.iter().map(mc::sd_residual).collect();
    let residuals: Vec<(Vec<i32>, crate::stats::Estimate)> = (0..displacements.len())
        .map(|k| {
            let parts: Vec<crate::stats::Estimate> =
                per_chain.iter().map(|c| c[k].1.clone()).collect();
            (displacements[k].clone(), crate::stats::Estimate::merge(&parts))
        })
        .collect();
    let u4: Vec<(f64, f64)> = runs.iter().map(mc::binder_u4).collect();

    if cfg.get("output", "series").map(|s| s == "true").unwrap_or(false) {
        let csv = out.join("mc_chi_series.csv");
        write_csv(
            &csv,
            hash,
            "chain,measurement,chi",
            runs.iter().enumerate().flat_map(|(c, run)| {
                run.series
                    .chi
                    .iter()
                    .enumerate()
                    .map(move |(t, v)| format!("{c},{t},{v:.17e}"))
                    .collect::<Vec<_>>()
            }),
        )?;
    }

    Ok(json!({
        "lambda": lambda,
        "mu": mu,
        "side": side,
        "chains": chains,
        "acceptance": runs.iter().map(|r| r.acceptance).collect::<Vec<f64>>(),
        "observables": merged,
        "sd_residuals": residuals,
        "u4_per_chain": u4,
    }))
}

fn run_critical(path: &Path) -> Result<Value, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    let cfg = Config::parse(&text)?;
    let coupling = coupling_from_config(&cfg)?;
    let lambdas = cfg.require_f64_list("model", "lambda_grid")?;
    let mu_grid = cfg.require_f64_list("model", "mu_grid")?;
    let sides = cfg.require_usize_list("geometry", "sides")?;
    let schedule = Schedule::new(
        cfg.require_usize("schedule", "sweeps")?,
        cfg.require_usize("schedule", "burn_in")?,
        cfg.get_usize("schedule", "thin")?.unwrap_or(1),
    )
    .map_err(module)?;
    let seed = cfg.get_u64("run", "seed")?.unwrap_or(1);
    let chains = cfg.get_usize("run", "chains")?.unwrap_or(1);

    let mut reports = Vec::new();
    for &lambda in &lambdas {
        let report = mc::critical_scan(&coupling, lambda, &mu_grid, &sides, schedule, seed, chains)
            .map_err(module)?;
        reports.push(report);
    }
    let power = if reports.iter().filter(|r| r.lambda > 0.0).count() >= 2 {
        let positive: Vec<mc::ScanReport> = reports
            .iter()
            .filter(|r| r.lambda > 0.0)
            .cloned()
            .collect();
        Some(mc::delta_power_fit(&positive))
    } else {
        None
    };
    Ok(json!({
        "scans": reports,
        "delta_power_fit": power,
    }))
}

fn pi_from_json(path: &str, geom: &TorusGeometry) -> Result<PiSource, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::Config(format!("{path}: {e}")))?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| Failure::Config(format!("{path}: {e}")))?;
    let mode = value["mode"].as_str().unwrap_or("");
    match mode {
        "delta" => {
            let obar = value["obar"]
                .as_f64()
                .ok_or_else(|| Failure::Config(format!("{path}: delta needs obar")))?;
            Ok(PiSource::delta(geom, obar))
        }
        "synthetic-tail" => {
            let obar = value["obar"]
                .as_f64()
                .ok_or_else(|| Failure::Config(format!("{path}: needs obar")))?;
            let c_tail = value["c_tail"]
                .as_f64()
                .ok_or_else(|| Failure::Config(format!("{path}: needs c_tail")))?;
            Ok(PiSource::synthetic_tail(geom, obar, c_tail))
        }
        "table" => {
            let values: Vec<f64> = value["values"]
                .as_array()
                .ok_or_else(|| Failure::Config(format!("{path}: table needs values")))?
                .iter()
                .map(|v| v.as_f64().unwrap_or(f64::NAN))
                .collect();
            PiSource::from_table(geom, values, deconv::PiMode::Table).map_err(module)
        }
        other => Err(Failure::Config(format!("{path}: unknown pi mode `{other}`"))),
    }
}

fn run_deconv(path: &Path, out: &Path, hash: &str) -> Result<Value, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    let cfg = Config::parse(&text)?;
    let coupling = coupling_from_config(&cfg)?;
    let d = coupling.dimension();
    let side = cfg.require_usize("geometry", "L")?;
    let geom = TorusGeometry::new(d, side).map_err(module)?;
    let lambda = cfg.require_f64("gs", "lambda")?;
    let mu = cfg.require_f64("gs", "mu")?;
    let n = cfg.require_usize("gs", "N")? as u64;
    let params = GsParams::new(lambda, mu, coupling.clone(), n).map_err(module)?;
    let d_table = params
        .step_distribution()
        .map_err(module)?
        .torus_table(&geom);
    let p = params.fugacity();
    let beta = params.intra_weight();

    let pi = match cfg.require("pi", "mode")? {
        "delta" => PiSource::delta(&geom, cfg.require_f64("pi", "obar")?),
        "synthetic-tail" => PiSource::synthetic_tail(
            &geom,
            cfg.require_f64("pi", "obar")?,
            cfg.require_f64("pi", "c_tail")?,
        ),
        // a JSON file with {"mode": ..., ...} or {"mode": "table", "values": [...]}
        "json" => pi_from_json(cfg.require("pi", "file")?, &geom)?,
        other => return Err(Failure::Config(format!("unknown pi mode `{other}`"))),
    };

    let f = deconv::f_from_pi(&pi, &d_table, p, beta).map_err(module)?;
    let chi = deconv::chi_from_f(pi.sum(), &f).map_err(module)?;
    let sol = deconv::qr_solve(&f, &d_table, &geom).map_err(module)?;
    let window = cfg
        .require_f64_list("fit", "window")
        .unwrap_or_else(|_| vec![2.0, side as f64 / 4.0]);
    let decay = deconv::e_decay_check(&sol.e_table, sol.q, &d_table, &geom, (window[0], window[1]))
        .map_err(module)?;

    let phi = pi.phi_table(&params);
    let walk = deconv::effective_linear_sd(&phi, &coupling, lambda, mu, &geom).map_err(module)?;

    // decay curve of |E * S_q| for plotting
    let s_q = green::green_torus(
        &d_table,
        &geom,
        sol.q,
        if sol.q == 1.0 {
            ZeroModePolicy::Subtract
        } else {
            ZeroModePolicy::Reject
        },
    )
    .map_err(module)?;
    let conv = crate::fft::cyclic_convolve(&sol.e_table, s_q.values(), &geom.dims());
    let csv = out.join("deconv_decay.csv");
    write_csv(
        &csv,
        hash,
        "abs_x,abs_conv",
        (0..geom.volume()).filter_map(|i| {
            let r = geom.min_image_norm2(i).sqrt();
            (r > 0.0).then(|| format!("{r},{:.17e}", conv[i].abs()))
        }),
    )?;

    Ok(json!({
        "p": p,
        "intra_weight": beta,
        "tlambda": params.tlambda(),
        "f_hat0": sol.f_hat0,
        "block_susceptibility": chi,
        "q": sol.q,
        "r": sol.r,
        "nabla2_f0": sol.nabla2_f0,
        "e_sum": sol.e_sum,
        "e_curvature": sol.e_curvature,
        "decay": decay,
        "amplitude": walk.amplitude,
        "jhat_v": coupling.jhat() * coupling.variance(),
        "chi_inv_effective": walk.chi_inv,
        "decay_csv": csv.display().to_string(),
    }))
}
