//! `chronon-lab` command-line front end.
//!
//! Exit codes: 0 success, 1 input validation failure, 2 numerical failure.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use chronon_core::entropy::{
    conditional_density, conditional_entropy_routes, cq_conditional, generalized_conditional,
    symmetric_trotter_conditional_density, trotter_conditional_density, von_neumann, Regularization,
};
use chronon_core::gaussian_position::{
    bound_classical_velocity, bound_process_velocity, bound_resolution_velocity, max_g, max_h, optimal_interval,
    partition_entropy_g, scaled_function_h, GaussianPacket, Maximum, SEARCH_UPPER,
};
use chronon_core::io::{parse_basis, parse_state, State};
use chronon_core::linalg::DEFAULT_CUTOFF;
use chronon_core::ml_sweep::{ml_sweep, SweepConfig};
use chronon_core::relativity::{check_bound_invariance, transform_temperature, transform_time_quantum, Boost, InvarianceReport};
use chronon_core::speed_limits::{
    antiqubit_ground_energy, antiqubit_process_velocity, process_velocity, state_count, time_quantum,
};
use chronon_core::states::{build_measurement_operator, cq_embed, measurement_probability, reduce_over_apparatus};
use chronon_core::thermal_flow::{clock_ratio, dilation_from_conditioning, simulate_flow, simultaneity_offset, SystemSpec};
use chronon_core::{BipartiteState, ComplexMatrix, DensityMatrix, EntropyValue, ThermalContext, TimeQuantum};

#[derive(Debug, Parser)]
#[command(name = "chronon-lab", version, about = "Thermal time, speed limits and conditional entropy numerics")]
pub struct Cli {
    /// Output format; defaults to csv for tables (gaussian, flow) and json otherwise.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for randomized sweeps.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Temperature in natural units (h = k = c = 1).
    #[arg(long = "temperature", global = true, default_value_t = 1.0)]
    pub temperature: f64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Von Neumann, reduced or conditional entropy of a state file.
    Entropy(EntropyArgs),
    /// Conditional density, both entropy routes and the anti-qubit velocity.
    Conditional(ConditionalArgs),
    /// Randomized check of the shifted Margolus-Levitin bound.
    Mlcheck(MlcheckArgs),
    /// Partition entropy table and Gaussian velocity bounds.
    Gaussian(GaussianArgs),
    /// Frame consistency of the classical velocity bound.
    Lorentz(LorentzArgs),
    /// Merged tick sequence of several measured systems.
    Flow(FlowArgs),
    /// Time offset between two state counts.
    Simultaneity(SimultaneityArgs),
}

#[derive(Debug, Args)]
pub struct EntropyArgs {
    #[arg(long)]
    pub state: PathBuf,
    /// Conditional entropy: S(S|O) for cq states, S(A|B) for bipartite ones.
    #[arg(long)]
    pub conditional: bool,
    /// Treat a pure or density state as bipartite with these dimensions.
    #[arg(long, value_name = "DS,DA", value_parser = parse_dims)]
    pub reduce: Option<(usize, usize)>,
    /// Correlation basis file; reports the measurement probability of a pure state.
    #[arg(long)]
    pub basis: Option<PathBuf>,
    /// Also report the time quantum, process velocity and state count at this time.
    #[arg(long)]
    pub time: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ConditionalArgs {
    #[arg(long)]
    pub state: PathBuf,
    /// Step count of the finite product approximant.
    #[arg(long)]
    pub trotter: Option<u64>,
    /// Depolarize by this weight before the product approximant.
    #[arg(long)]
    pub epsilon: Option<f64>,
}

#[derive(Debug, Args)]
pub struct MlcheckArgs {
    /// Single dimension; default cycles through 2, 3, 4.
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
}

#[derive(Debug, Args)]
pub struct GaussianArgs {
    /// Rows in the x,G,H table on [0, 6].
    #[arg(long, default_value_t = 1024)]
    pub grid: usize,
    #[arg(long, default_value_t = 1.0)]
    pub sigma_k0: f64,
    /// Position resolution for the resolution bound.
    #[arg(long)]
    pub sigma_x0: Option<f64>,
}

#[derive(Debug, Args)]
pub struct LorentzArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub v: f64,
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
    pub temp_exponent: f64,
    #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
    pub length_exponent: f64,
    #[arg(long, default_value_t = 1.0)]
    pub sigma_k0: f64,
}

#[derive(Debug, Args)]
pub struct FlowArgs {
    #[arg(long)]
    pub config: PathBuf,
}

#[derive(Debug, Args)]
pub struct SimultaneityArgs {
    #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["s1", "t1"])]
    pub theta1: Option<f64>,
    #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["s2", "t2"])]
    pub theta2: Option<f64>,
    /// Defaults to 4 ln 2 kT/h.
    #[arg(long)]
    pub v_max: Option<f64>,
    /// Entropy (nats) and elapsed time giving θ₁ = 4kT·s1·t1/h.
    #[arg(long, requires = "t1")]
    pub s1: Option<f64>,
    #[arg(long, requires = "s1")]
    pub t1: Option<f64>,
    #[arg(long, requires = "t2")]
    pub s2: Option<f64>,
    #[arg(long, requires = "s2")]
    pub t2: Option<f64>,
}

fn parse_dims(s: &str) -> std::result::Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected DS,DA")?;
    let a = a.trim().parse::<usize>().map_err(|e| e.to_string())?;
    let b = b.trim().parse::<usize>().map_err(|e| e.to_string())?;
    Ok((a, b))
}

/// Failure carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<chronon_core::Error> for Failure {
    fn from(e: chronon_core::Error) -> Self {
        Failure {
            code: if e.is_numerical() { 2 } else { 1 },
            message: e.to_string(),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if code == 0 {
                write!(stdout, "{}", e.render())
            } else {
                write!(stderr, "{}", e.render())
            };
            return code;
        }
    };
    match execute(&cli) {
        Ok(text) => {
            let written = match &cli.out {
                Some(p) => std::fs::write(p, &text).map_err(|e| format!("cannot write {}: {e}", p.display())),
                None => stdout.write_all(text.as_bytes()).map_err(|e| e.to_string()),
            };
            match written {
                Ok(()) => 0,
                Err(msg) => {
                    let _ = writeln!(stderr, "error: {msg}");
                    1
                }
            }
        }
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

/// Runs the parsed command and returns the bytes to emit.
pub fn execute(cli: &Cli) -> CliResult<String> {
    let ctx = ThermalContext::natural().with_temperature(cli.temperature)?;
    let table = matches!(cli.command, Command::Gaussian(_) | Command::Flow(_));
    let format = cli.format.unwrap_or(if table { Format::Csv } else { Format::Json });
    match &cli.command {
        Command::Entropy(a) => entropy(a, &ctx, format),
        Command::Conditional(a) => conditional(a, &ctx, format),
        Command::Mlcheck(a) => mlcheck(a, cli.seed, &ctx, format),
        Command::Gaussian(a) => gaussian(a, &ctx, format),
        Command::Lorentz(a) => lorentz(a, &ctx, format),
        Command::Flow(a) => flow(a, format),
        Command::Simultaneity(a) => simultaneity(a, &ctx, format),
    }
}

/// 9 significant digits, plain decimal for moderate exponents.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        trim_zeros(&s).to_string()
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

/// `key,value` rows under a header.
fn key_values(rows: &[(&str, f64)]) -> String {
    let mut s = String::from("key,value\n");
    for (k, v) in rows {
        let _ = writeln!(s, "{k},{}", fmt_num(*v));
    }
    s
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))
}

fn load_state(path: &Path) -> CliResult<State> {
    Ok(parse_state(&read(path)?)?)
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct EntropyReport {
    quantity: &'static str,
    nats: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    measurement_probability: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    time_quantum: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    process_velocity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    state_count: Option<f64>,
}

fn entropy(a: &EntropyArgs, ctx: &ThermalContext, format: Format) -> CliResult<String> {
    let state = load_state(&a.state)?;
    let (quantity, s) = match (&state, a.reduce, a.conditional) {
        (State::Cq(cq), None, true) => ("cq_conditional", cq_conditional(cq)?),
        (State::Cq(cq), None, false) => ("von_neumann", von_neumann(&cq.mixture()?)?),
        (State::Bipartite(bi), None, true) => ("conditional", generalized_conditional(bi)?),
        (State::Bipartite(bi), None, false) => ("von_neumann", von_neumann(bi.joint())?),
        (State::Pure(psi), Some((ds, da)), false) => ("reduced", von_neumann(&reduce_over_apparatus(psi, ds, da)?)?),
        (State::Pure(psi), Some((ds, da)), true) => (
            "conditional",
            generalized_conditional(&BipartiteState::new(DensityMatrix::from_pure(psi), ds, da)?)?,
        ),
        (State::Density(rho), Some((ds, da)), c) => {
            let bi = BipartiteState::new(rho.clone(), ds, da)?;
            if c {
                ("conditional", generalized_conditional(&bi)?)
            } else {
                ("reduced", von_neumann(&bi.marginal_a()?)?)
            }
        }
        (State::Pure(psi), None, false) => ("von_neumann", von_neumann(&DensityMatrix::from_pure(psi))?),
        (State::Density(rho), None, false) => ("von_neumann", von_neumann(rho)?),
        (State::Pure(_) | State::Density(_), None, true) => {
            return Err(Failure::input("--conditional on a single-system state needs --reduce DS,DA"));
        }
        (State::Cq(_) | State::Bipartite(_), Some(_), _) => {
            return Err(Failure::input("--reduce applies only to state_vector and density files"));
        }
    };

    let measurement_probability = match &a.basis {
        None => None,
        Some(path) => {
            let State::Pure(psi) = &state else {
                return Err(Failure::input("--basis needs a state_vector file"));
            };
            let basis = parse_basis(&read(path)?)?;
            Some(measurement_probability(psi, &build_measurement_operator(&basis))?)
        }
    };

    let (time_quantum_s, velocity, count) = match a.time {
        None => (None, None, None),
        Some(t) => (
            Some(time_quantum(s, ctx)?.seconds()),
            Some(process_velocity(s, ctx)?),
            Some(state_count(s, t, ctx)?),
        ),
    };

    let report = EntropyReport {
        quantity,
        nats: s.nats(),
        measurement_probability,
        time_quantum: time_quantum_s,
        process_velocity: velocity,
        state_count: count,
    };
    Ok(match format {
        Format::Json => json(&report),
        Format::Csv => {
            let mut rows = vec![(quantity, report.nats)];
            let extras = [
                ("measurement_probability", report.measurement_probability),
                ("time_quantum", report.time_quantum),
                ("process_velocity", report.process_velocity),
                ("state_count", report.state_count),
            ];
            rows.extend(extras.iter().filter_map(|(k, v)| v.map(|v| (*k, v))));
            key_values(&rows)
        }
    })
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct TrotterReport {
    n: u64,
    epsilon: f64,
    distance: f64,
    symmetric_distance: f64,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct DilationReport {
    conditional: TimeQuantum,
    marginal: TimeQuantum,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct ConditionalReport {
    dim_a: usize,
    dim_b: usize,
    difference: f64,
    log_trace: f64,
    discrepancy: f64,
    antiqubit_velocity: f64,
    ground_energy: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    cq_conditional: Option<f64>,
    /// Absent when the conditional entropy vanishes.
    #[serde(skip_serializing_if = "Option::is_none")]
    dilation: Option<DilationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    trotter: Option<TrotterReport>,
    conditional_density: ComplexMatrix,
}

fn conditional(a: &ConditionalArgs, ctx: &ThermalContext, format: Format) -> CliResult<String> {
    let state = load_state(&a.state)?;
    let (bi, cq) = match state {
        State::Bipartite(bi) => (bi, None),
        State::Cq(cq) => (cq_embed(&cq)?, Some(cq)),
        _ => return Err(Failure::input("conditional needs a bipartite or cq state file")),
    };
    if a.epsilon.is_some() && a.trotter.is_none() {
        return Err(Failure::input("--epsilon only applies together with --trotter"));
    }
    let routes = conditional_entropy_routes(&bi)?;
    let closed = conditional_density(&bi, DEFAULT_CUTOFF)?;
    let trotter = match a.trotter {
        None => None,
        Some(n) => {
            let reg = a.epsilon.map_or(Regularization::None, Regularization::Depolarize);
            Some(TrotterReport {
                n,
                epsilon: a.epsilon.unwrap_or(0.0),
                distance: trotter_conditional_density(&bi, n, reg)?.distance(&closed),
                symmetric_distance: symmetric_trotter_conditional_density(&bi, n, reg)?.distance(&closed),
            })
        }
    };
    let (cq_value, dilation) = match &cq {
        None => (None, None),
        Some(cq) => {
            let dilation = match dilation_from_conditioning(cq, ctx) {
                Ok(d) => Some(DilationReport {
                    conditional: d.conditional,
                    marginal: d.marginal,
                }),
                Err(chronon_core::Error::NonpositiveEntropy(_)) => None,
                Err(e) => return Err(e.into()),
            };
            (Some(cq_conditional(cq)?.nats()), dilation)
        }
    };
    let report = ConditionalReport {
        dim_a: bi.dim_a(),
        dim_b: bi.dim_b(),
        difference: routes.difference,
        log_trace: routes.log_trace,
        discrepancy: routes.discrepancy(),
        antiqubit_velocity: antiqubit_process_velocity(&bi, ctx)?,
        ground_energy: antiqubit_ground_energy(&bi)?,
        cq_conditional: cq_value,
        dilation,
        trotter,
        conditional_density: closed,
    };
    Ok(match format {
        Format::Json => json(&report),
        Format::Csv => {
            let mut rows = vec![
                ("difference", report.difference),
                ("log_trace", report.log_trace),
                ("discrepancy", report.discrepancy),
                ("antiqubit_velocity", report.antiqubit_velocity),
                ("ground_energy", report.ground_energy),
            ];
            if let Some(v) = report.cq_conditional {
                rows.push(("cq_conditional", v));
            }
            if let Some(d) = &report.dilation {
                rows.push(("dilation_conditional", d.conditional.seconds()));
                rows.push(("dilation_marginal", d.marginal.seconds()));
            }
            if let Some(t) = &report.trotter {
                rows.push(("trotter_n", t.n as f64));
                rows.push(("trotter_epsilon", t.epsilon));
                rows.push(("trotter_distance", t.distance));
                rows.push(("trotter_symmetric_distance", t.symmetric_distance));
            }
            key_values(&rows)
        }
    })
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct MlcheckReport {
    trials: usize,
    found: usize,
    violations: usize,
    min_slack: Option<f64>,
}

fn mlcheck(a: &MlcheckArgs, seed: u64, ctx: &ThermalContext, format: Format) -> CliResult<String> {
    let mut cfg = SweepConfig {
        trials: a.trials,
        seed,
        ..SweepConfig::default()
    };
    if let Some(d) = a.dim {
        cfg.dims = vec![d];
    }
    let r = ml_sweep(&cfg, ctx)?;
    let report = MlcheckReport {
        trials: r.trials,
        found: r.found,
        violations: r.violations,
        min_slack: r.min_slack,
    };
    Ok(match format {
        Format::Json => json(&report),
        Format::Csv => {
            let mut rows = vec![
                ("trials", report.trials as f64),
                ("found", report.found as f64),
                ("violations", report.violations as f64),
            ];
            if let Some(s) = report.min_slack {
                rows.push(("min_slack", s));
            }
            key_values(&rows)
        }
    })
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct GaussianRow {
    x: f64,
    g: f64,
    h: f64,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct GaussianReport {
    rows: Vec<GaussianRow>,
    max_g: Maximum,
    max_h: Maximum,
    optimal_interval: Maximum,
    bound_process_velocity: f64,
    bound_classical_velocity: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    bound_resolution_velocity: Option<f64>,
}

fn gaussian(a: &GaussianArgs, ctx: &ThermalContext, format: Format) -> CliResult<String> {
    if a.grid < 2 {
        return Err(Failure::input(format!("--grid must be at least 2, got {}", a.grid)));
    }
    let packet = GaussianPacket::new(a.sigma_k0, 0.0)?;
    let rows = (0..a.grid)
        .map(|i| {
            let x = SEARCH_UPPER * i as f64 / (a.grid - 1) as f64;
            Ok(GaussianRow {
                x,
                g: partition_entropy_g(x)?.entropy.nats(),
                h: scaled_function_h(x)?,
            })
        })
        .collect::<chronon_core::Result<Vec<_>>>()?;
    let report = GaussianReport {
        rows,
        max_g: max_g(),
        max_h: max_h(),
        optimal_interval: optimal_interval(&packet),
        bound_process_velocity: bound_process_velocity(ctx),
        bound_classical_velocity: bound_classical_velocity(&packet, ctx),
        bound_resolution_velocity: a.sigma_x0.map(|s| bound_resolution_velocity(s, ctx)).transpose()?,
    };
    Ok(match format {
        Format::Json => json(&report),
        Format::Csv => {
            let mut s = String::from("x,G,H\n");
            for r in &report.rows {
                let _ = writeln!(s, "{},{},{}", fmt_num(r.x), fmt_num(r.g), fmt_num(r.h));
            }
            let summary = [
                ("max_G", report.max_g.x_star, report.max_g.value),
                ("max_H", report.max_h.x_star, report.max_h.value),
                (
                    "optimal_interval",
                    report.optimal_interval.x_star,
                    report.optimal_interval.value,
                ),
                ("bound_process_velocity", f64::NAN, report.bound_process_velocity),
                ("bound_classical_velocity", a.sigma_k0, report.bound_classical_velocity),
            ];
            for (k, x, v) in summary {
                let x = if x.is_nan() { String::new() } else { fmt_num(x) };
                let _ = writeln!(s, "{k},{x},{}", fmt_num(v));
            }
            if let (Some(sx), Some(v)) = (a.sigma_x0, report.bound_resolution_velocity) {
                let _ = writeln!(s, "bound_resolution_velocity,{},{}", fmt_num(sx), fmt_num(v));
            }
            s
        }
    })
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct Recovered {
    /// Rest-frame temperature mapped back from the boosted frame.
    temperature: f64,
    /// Rest-frame time quantum mapped back from the boosted frame.
    dt_min: f64,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct LorentzReport {
    #[serde(flatten)]
    invariance: InvarianceReport,
    recovered: Recovered,
}

fn lorentz(a: &LorentzArgs, ctx: &ThermalContext, format: Format) -> CliResult<String> {
    let boost = Boost::new(a.v, a.c)?;
    let packet = GaussianPacket::new(a.sigma_k0, 0.0)?;
    let r = check_bound_invariance(&packet, ctx, &boost, a.length_exponent, a.temp_exponent)?;
    let recovered = Recovered {
        temperature: transform_temperature(r.boosted_frame.temperature, &boost, a.temp_exponent)?,
        dt_min: transform_time_quantum(TimeQuantum::new(r.boosted_frame.dt_min)?, &boost, a.temp_exponent)?.seconds(),
    };
    Ok(match format {
        Format::Json => json(&LorentzReport {
            invariance: r,
            recovered,
        }),
        Format::Csv => {
            let mut s = String::from("frame,temperature,entropyNats,length,dtMin,velocity\n");
            for (name, f) in [("rest", &r.rest_frame), ("boosted", &r.boosted_frame)] {
                let _ = writeln!(
                    s,
                    "{name},{},{},{},{},{}",
                    fmt_num(f.temperature),
                    fmt_num(f.entropy_nats),
                    fmt_num(f.length),
                    fmt_num(f.dt_min),
                    fmt_num(f.velocity)
                );
            }
            let _ = writeln!(s, "gamma,{}", fmt_num(r.gamma));
            let _ = writeln!(s, "relDiff,{}", fmt_num(r.rel_diff));
            let _ = writeln!(s, "pass,{}", r.pass);
            s
        }
    })
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FlowConfig {
    systems: Vec<SystemSpec>,
    #[serde(rename = "T")]
    temperature: f64,
    horizon: f64,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct RatioRow {
    a: String,
    b: String,
    ratio: f64,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct FlowReport<'a> {
    ticks: &'a [chronon_core::thermal_flow::Tick],
    clock_ratios: Vec<RatioRow>,
}

fn flow(a: &FlowArgs, format: Format) -> CliResult<String> {
    let cfg: FlowConfig = serde_json::from_str(&read(&a.config)?)
        .map_err(|e| Failure::input(format!("invalid flow config: {e}")))?;
    for s in &cfg.systems {
        SystemSpec::new(s.id.clone(), s.entropy())?;
    }
    let ctx = ThermalContext::natural().with_temperature(cfg.temperature)?;
    let flow = simulate_flow(&cfg.systems, &ctx, cfg.horizon)?;
    Ok(match format {
        Format::Csv => {
            let mut s = String::from("time,quantum,systemId\n");
            for t in &flow.ticks {
                let _ = writeln!(s, "{},{},{}", fmt_num(t.time), fmt_num(t.quantum), t.system_id);
            }
            s
        }
        Format::Json => {
            let active: Vec<&SystemSpec> = cfg.systems.iter().filter(|s| s.entropy_nats > 0.0).collect();
            let mut clock_ratios = Vec::new();
            for (i, s1) in active.iter().enumerate() {
                for s2 in &active[i + 1..] {
                    clock_ratios.push(RatioRow {
                        a: s1.id.clone(),
                        b: s2.id.clone(),
                        ratio: clock_ratio(s1, s2)?,
                    });
                }
            }
            json(&FlowReport {
                ticks: &flow.ticks,
                clock_ratios,
            })
        }
    })
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct SimultaneityReport {
    theta1: f64,
    theta2: f64,
    v_max: f64,
    offset: f64,
}

fn simultaneity(a: &SimultaneityArgs, ctx: &ThermalContext, format: Format) -> CliResult<String> {
    let theta = |theta: Option<f64>, s: Option<f64>, t: Option<f64>, which: u8| -> CliResult<f64> {
        match (theta, s, t) {
            (Some(th), _, _) => Ok(th),
            (None, Some(s), Some(t)) => Ok(state_count(EntropyValue::from_nats(s), t, ctx)?),
            _ => Err(Failure::input(format!("give --theta{which} or both --s{which} and --t{which}"))),
        }
    };
    let theta1 = theta(a.theta1, a.s1, a.t1, 1)?;
    let theta2 = theta(a.theta2, a.s2, a.t2, 2)?;
    let v_max = a.v_max.unwrap_or_else(|| bound_process_velocity(ctx));
    let report = SimultaneityReport {
        theta1,
        theta2,
        v_max,
        offset: simultaneity_offset(theta1, theta2, v_max)?,
    };
    Ok(match format {
        Format::Json => json(&report),
        Format::Csv => key_values(&[
            ("theta1", report.theta1),
            ("theta2", report.theta2),
            ("v_max", report.v_max),
            ("offset", report.offset),
        ]),
    })
}
