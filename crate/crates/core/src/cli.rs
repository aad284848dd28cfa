//! Command-line front end.
//!
//! Every command reads an optional JSON config (`--config`) whose keys match
//! the long flag names with underscores, then applies explicit flags on
//! top. Outputs go to the `--out` directory (default `.`):
//!
//! | command   | files                                                   |
//! |-----------|---------------------------------------------------------|
//! | `load`    | `load_report.json`, `plan.json`, `target.csv`, `prepared.csv` |
//! | `train`   | `train_report.json`, `final_state.csv`                  |
//! | `heatmap` | `heatmap.csv`                                           |
//! | `emit`    | `circuit.ir`                                            |

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::circuits::{count_tqg, emit_plan, parse_ir, GateCountReport};
use crate::error::{Error, Result};
use crate::functions::{
    discretize, eta_bound, family_from_params, Encoding, FunctionSpec, StandardizedFunction,
};
use crate::planner::{
    compute_k0, fidelity_floor, k0_asymptotic, plan_clustered_with, plan_exact, plan_singular_with,
    plan_theorem1_with, CircuitPlan, PlanOptions, ETA_MAX, K0_COEFF,
};
use crate::simulator::{fidelity, run_plan, StateVector};
use crate::variational::{
    build_ansatz, init_params, to_plan, train, InitMode, PSchedule, TrainConfig,
};

#[derive(Debug, Parser)]
#[command(name = "qfload", version, about = "Load real functions into simulated qubit registers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Plan, simulate and score a clustered Grover-Rudolph circuit.
    Load(CommonArgs),
    /// Train the variational ansatz.
    Train(CommonArgs),
    /// Tabulate the asymptotic k0 over an (eta, epsilon) grid.
    Heatmap(CommonArgs),
    /// Write the circuit IR of a plan.
    Emit(CommonArgs),
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CommonArgs {
    /// JSON config file; flags override its values.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Family name or path to a function JSON document.
    #[arg(long)]
    pub function: Option<String>,
    /// Family parameters as a JSON object.
    #[arg(long)]
    pub params: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// amplitude | probability
    #[arg(long)]
    pub encoding: Option<String>,
    /// Last exact block; overrides the computed value.
    #[arg(long)]
    pub k0: Option<usize>,
    /// Coefficient of the k0 formula (24 or 96).
    #[arg(long)]
    pub k0_coeff: Option<f64>,
    /// Lower bound on k* for functions with endpoint singularities.
    #[arg(long)]
    pub k_star: Option<usize>,
    /// Positive integer or "k".
    #[arg(long)]
    pub p_schedule: Option<String>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub tolerance: Option<f64>,
    #[arg(long)]
    pub max_steps: Option<usize>,
    /// gr | random
    #[arg(long)]
    pub init: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Plan kind for `emit`: exact | theorem1 | singular | ansatz | auto.
    #[arg(long)]
    pub plan: Option<String>,
    /// Grid points along eta for `heatmap`.
    #[arg(long)]
    pub eta_points: Option<usize>,
    /// Grid points along epsilon for `heatmap`.
    #[arg(long)]
    pub eps_points: Option<usize>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl CommonArgs {
    /// Config file values with flags layered on top.
    pub fn resolve(&self) -> Result<Self> {
        let mut base = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
                serde_json::from_str::<CommonArgs>(&text)?
            }
            None => CommonArgs::default(),
        };
        macro_rules! overlay {
            ($($f:ident),*) => { $( if self.$f.is_some() { base.$f = self.$f.clone(); } )* };
        }
        overlay!(
            function, params, n, epsilon, encoding, k0, k0_coeff, k_star, p_schedule, gamma,
            tolerance, max_steps, init, seed, plan, eta_points, eps_points, out
        );
        if let Some(n) = base.n {
            if !(1..=24).contains(&n) {
                return Err(Error::InvalidArgument(format!("n must be in 1..=24, got {n}")));
            }
        }
        Ok(base)
    }

    fn out_dir(&self) -> Result<PathBuf> {
        let dir = self.out.clone().unwrap_or_else(|| PathBuf::from("."));
        std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        Ok(dir)
    }

    fn n(&self) -> Result<usize> {
        self.n
            .ok_or_else(|| Error::InvalidArgument("--n is required".into()))
    }

    fn encoding(&self) -> Result<Encoding> {
        self.encoding.as_deref().map_or(Ok(Encoding::Amplitude), str::parse)
    }

    fn options(&self) -> PlanOptions {
        PlanOptions {
            k0_coeff: self.k0_coeff.unwrap_or(K0_COEFF),
            ..PlanOptions::default()
        }
    }

    /// The target function from `--function` and `--params`.
    pub fn function_spec(&self) -> Result<FunctionSpec> {
        let name = self
            .function
            .as_deref()
            .ok_or_else(|| Error::InvalidArgument("--function is required".into()))?;
        let path = Path::new(name);
        if name.ends_with(".json") || path.is_file() {
            let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            return FunctionSpec::from_json(&text);
        }
        let params: Map<String, Value> = match &self.params {
            Some(p) => serde_json::from_str(p)?,
            None => Map::new(),
        };
        FunctionSpec::with_default_domain(family_from_params(name, &params)?)
    }

    fn train_config(&self) -> Result<TrainConfig> {
        let d = TrainConfig::default();
        let init = match self.init.as_deref().unwrap_or("gr") {
            "gr" | "grover_rudolph" => InitMode::GroverRudolph,
            "random" | "random_uniform" => InitMode::RandomUniform {
                seed: self.seed.unwrap_or(0),
            },
            other => return Err(Error::InvalidArgument(format!("unknown init {other:?}"))),
        };
        Ok(TrainConfig {
            gamma: self.gamma.unwrap_or(d.gamma),
            tolerance: self.tolerance.unwrap_or(d.tolerance),
            max_steps: self.max_steps.unwrap_or(d.max_steps),
            init,
        })
    }

    fn p_schedule(&self) -> Result<PSchedule> {
        self.p_schedule.as_deref().unwrap_or("1").parse()
    }
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Picks the planner: singular for functions with special points, a fixed
/// `k0` when given, otherwise the `eps`-driven `k0`.
fn load_plan(args: &CommonArgs, func: &StandardizedFunction, n: usize, eps: f64) -> Result<CircuitPlan> {
    let opts = args.options();
    if !func.spec.special_points().is_empty() {
        return plan_singular_with(func, n, eps, args.k_star, &opts);
    }
    match args.k0 {
        Some(k0) => {
            let mut plan = plan_clustered_with(func, n, k0, &opts)?;
            plan.eta = eta_bound(func).ok().map(|e| e.eta);
            Ok(plan)
        }
        None => plan_theorem1_with(func, n, eps, &opts),
    }
}

#[derive(Serialize)]
struct LoadReport<'a> {
    function: Value,
    n: usize,
    epsilon: f64,
    encoding: Encoding,
    eta: Option<f64>,
    k0: usize,
    fidelity: f64,
    exact_fidelity: f64,
    spread_bound: f64,
    fidelity_floor: Option<f64>,
    tqg: u64,
    tqg_percent: f64,
    gate_counts: &'a GateCountReport,
    zero_mass_intervals: usize,
}

pub fn cmd_load(args: &CommonArgs) -> Result<String> {
    let spec = args.function_spec()?;
    let n = args.n()?;
    let eps = args.epsilon.unwrap_or(0.05);
    let func = StandardizedFunction::new(spec, args.encoding()?);
    let plan = load_plan(args, &func, n, eps)?;
    let target = discretize(&func, n)?;
    let prepared = run_plan(&plan)?;
    let exact = run_plan(&plan_exact(&func, n)?)?;
    let fid = fidelity(&prepared, &target)?;
    let counts = count_tqg(&plan);
    let report = LoadReport {
        function: serde_json::from_str(&func.spec.to_json()?)?,
        n,
        epsilon: eps,
        encoding: func.encoding,
        eta: plan.eta,
        k0: plan.k0,
        fidelity: fid,
        exact_fidelity: fidelity(&exact, &target)?,
        spread_bound: plan.spread_fidelity_bound(),
        fidelity_floor: plan
            .eta
            .filter(|_| plan.singular.is_none())
            .map(|eta| fidelity_floor(eta, plan.k0, n)),
        tqg: counts.tqg_total,
        tqg_percent: 100.0 * counts.fraction_of_full(),
        gate_counts: &counts,
        zero_mass_intervals: plan.blocks.iter().map(|b| b.zero_mass_intervals.len()).sum(),
    };
    let dir = args.out_dir()?;
    write(&dir.join("load_report.json"), &serde_json::to_string_pretty(&report)?)?;
    write(&dir.join("plan.json"), &plan.to_json()?)?;
    target.save_csv(&dir.join("target.csv"))?;
    prepared.save_csv(&dir.join("prepared.csv"))?;
    Ok(format!(
        "{}, {}, {:.5}, {}, {:.2}%",
        plan.eta.map_or("-".to_string(), |e| format!("{e:.2}")),
        plan.k0,
        fid,
        counts.tqg_total,
        report.tqg_percent
    ))
}

pub fn cmd_train(args: &CommonArgs) -> Result<String> {
    let spec = args.function_spec()?;
    let n = args.n()?;
    let config = args.train_config()?;
    let func = StandardizedFunction::new(spec.clone(), args.encoding()?);
    let mut ansatz = build_ansatz(&spec, n, args.k0.unwrap_or(2), args.p_schedule()?)?;
    ansatz.encoding = func.encoding;
    let target = discretize(&func, n)?;
    let params = init_params(&ansatz, &func, config.init)?;
    let report = train(&ansatz, &target, params, &config)?;
    let plan = to_plan(&ansatz, &report.params)?;
    let final_state = run_plan(&plan)?;
    let doc = json!({
        "function": serde_json::from_str::<Value>(&spec.to_json()?)?,
        "n": n,
        "k0": ansatz.k0,
        "p_schedule": ansatz.p_schedule.to_string(),
        "config": config,
        "tqg": count_tqg(&plan).tqg_total,
        "report": report,
    });
    let dir = args.out_dir()?;
    write(&dir.join("train_report.json"), &serde_json::to_string_pretty(&doc)?)?;
    final_state.save_csv(&dir.join("final_state.csv"))?;
    Ok(format!(
        "params {}, steps {}, fidelity {:.5} (initial {:.5})",
        report.num_params, report.steps, report.final_fidelity, report.initial_fidelity
    ))
}

/// Rows `(eta, epsilon, k0)` over `eta in [0, 8 pi]`, `epsilon in [1e-4, 1e-2]`.
pub fn heatmap_rows(eta_points: usize, eps_points: usize) -> Result<Vec<(f64, f64, usize)>> {
    if eta_points < 2 || eps_points < 2 {
        return Err(Error::InvalidArgument("heatmap grid needs at least 2x2 points".into()));
    }
    let (e0, e1) = (1e-4, 1e-2);
    let mut rows = Vec::with_capacity(eta_points * eps_points);
    for i in 0..eta_points {
        let eta = ETA_MAX * i as f64 / (eta_points - 1) as f64;
        for j in 0..eps_points {
            let eps = e0 + (e1 - e0) * j as f64 / (eps_points - 1) as f64;
            rows.push((eta, eps, k0_asymptotic(eta, eps)));
        }
    }
    Ok(rows)
}

pub fn cmd_heatmap(args: &CommonArgs) -> Result<String> {
    let rows = heatmap_rows(args.eta_points.unwrap_or(65), args.eps_points.unwrap_or(100))?;
    let path = args.out_dir()?.join("heatmap.csv");
    let mut w = csv::Writer::from_path(&path)?;
    w.write_record(["eta", "epsilon", "k0"])?;
    for (eta, eps, k0) in &rows {
        w.write_record([eta.to_string(), eps.to_string(), k0.to_string()])?;
    }
    w.flush().map_err(|e| Error::io(&path, e))?;
    let max = rows.iter().map(|r| r.2).max().unwrap_or(2);
    Ok(format!("{} points, max k0 {max}", rows.len()))
}

pub fn cmd_emit(args: &CommonArgs) -> Result<String> {
    let spec = args.function_spec()?;
    let n = args.n()?;
    let eps = args.epsilon.unwrap_or(0.05);
    let func = StandardizedFunction::new(spec.clone(), args.encoding()?);
    let opts = args.options();
    let plan = match args.plan.as_deref().unwrap_or("auto") {
        "auto" => load_plan(args, &func, n, eps)?,
        "exact" => plan_exact(&func, n)?,
        "theorem1" => match args.k0 {
            Some(k0) => plan_clustered_with(&func, n, k0, &opts)?,
            None => plan_theorem1_with(&func, n, eps, &opts)?,
        },
        "singular" => plan_singular_with(&func, n, eps, args.k_star, &opts)?,
        "ansatz" => {
            let config = args.train_config()?;
            let mut ansatz = build_ansatz(&spec, n, args.k0.unwrap_or(2), args.p_schedule()?)?;
            ansatz.encoding = func.encoding;
            to_plan(&ansatz, &init_params(&ansatz, &func, config.init)?)?
        }
        other => return Err(Error::InvalidArgument(format!("unknown plan kind {other:?}"))),
    };
    let text = emit_plan(&plan);
    // refuse to write something the parser would not read back
    let parsed = parse_ir(&text)?;
    let path = args.out_dir()?.join("circuit.ir");
    write(&path, &text)?;
    Ok(format!(
        "{} gates, tqg {}",
        parsed.gates.len(),
        parsed.tqg.unwrap_or_default()
    ))
}

/// Runs one command; returns the line printed on success.
pub fn run(cli: &Cli) -> Result<String> {
    match &cli.command {
        Command::Load(a) => cmd_load(&a.resolve()?),
        Command::Train(a) => cmd_train(&a.resolve()?),
        Command::Heatmap(a) => cmd_heatmap(&a.resolve()?),
        Command::Emit(a) => cmd_emit(&a.resolve()?),
    }
}

/// Reference `k0` row for a normal distribution, used by the examples.
pub fn normal_row(sigma: f64, n: usize, eps: f64) -> Result<(f64, usize)> {
    let func = StandardizedFunction::amplitude(FunctionSpec::normal(0.5, sigma)?);
    let eta = eta_bound(&func)?.eta;
    Ok((eta, compute_k0(eta, eps, n)))
}

/// Reads a statevector written by any command.
pub fn read_state(path: &Path) -> Result<StateVector> {
    StateVector::load_csv(path)
}
