//! Initialization and gradient-descent training.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::objective::{gradient, loss_and_state};
use super::AnsatzSpec;
use crate::angles::{all_blocks, AngleBlock, DEFAULT_REL_TOL};
use crate::error::{Error, Result};
use crate::functions::StandardizedFunction;
use crate::simulator::{fidelity, StateVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum InitMode {
    /// Exact angles for individual parameters, midpoint of the clustered
    /// exact angles for shared ones.
    GroverRudolph,
    /// I.i.d. uniform on `[0, pi]`.
    RandomUniform { seed: u64 },
}

/// Initial parameters for `func`.
pub fn init_params(
    ansatz: &AnsatzSpec,
    func: &StandardizedFunction,
    mode: InitMode,
) -> Result<Vec<f64>> {
    match mode {
        InitMode::GroverRudolph => {
            let blocks = all_blocks(func, ansatz.n, DEFAULT_REL_TOL)?;
            init_params_from_blocks(ansatz, &blocks, mode)
        }
        InitMode::RandomUniform { .. } => init_params_from_blocks(ansatz, &[], mode),
    }
}

/// [`init_params`] with precomputed exact blocks (ignored in random mode).
pub fn init_params_from_blocks(
    ansatz: &AnsatzSpec,
    blocks: &[AngleBlock],
    mode: InitMode,
) -> Result<Vec<f64>> {
    match mode {
        InitMode::RandomUniform { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Ok((0..ansatz.num_params)
                .map(|_| rng.gen_range(0.0..=std::f64::consts::PI))
                .collect())
        }
        InitMode::GroverRudolph => {
            if blocks.len() != ansatz.n {
                return Err(Error::InvalidArgument(format!(
                    "need {} exact blocks, got {}",
                    ansatz.n,
                    blocks.len()
                )));
            }
            let mut lo = vec![f64::INFINITY; ansatz.num_params];
            let mut hi = vec![f64::NEG_INFINITY; ansatz.num_params];
            for (layout, exact) in ansatz.blocks.iter().zip(blocks) {
                for (&p, &a) in layout.param_of.iter().zip(&exact.angles) {
                    lo[p] = lo[p].min(a);
                    hi[p] = hi[p].max(a);
                }
            }
            Ok(lo.iter().zip(&hi).map(|(a, b)| 0.5 * (a + b)).collect())
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    /// Learning rate `gamma`.
    pub gamma: f64,
    /// Stop once the loss changes by less than this between steps.
    pub tolerance: f64,
    pub max_steps: usize,
    pub init: InitMode,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            gamma: 1.5,
            tolerance: 1e-9,
            max_steps: 10_000,
            init: InitMode::GroverRudolph,
        }
    }
}

impl TrainConfig {
    fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(Error::InvalidArgument(format!("gamma must be > 0, got {}", self.gamma)));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "tolerance must be > 0, got {}",
                self.tolerance
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub step: usize,
    pub loss: f64,
    pub fidelity: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainReport {
    /// Parameter updates applied.
    pub steps: usize,
    pub converged: bool,
    pub num_params: usize,
    pub initial_loss: f64,
    pub initial_fidelity: f64,
    pub final_loss: f64,
    pub final_fidelity: f64,
    /// Entry 0 is the initial point, entry `t` follows update `t`.
    pub trace: Vec<TraceEntry>,
    /// Steps at which the loss went up.
    pub loss_increases: Vec<usize>,
    pub params: Vec<f64>,
}

impl TrainReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Full-batch gradient descent `theta <- theta - gamma * grad` from
/// `params`.
///
/// Stops when consecutive losses differ by less than `tolerance` or after
/// `max_steps` updates. A loss above `1e3` times the initial one aborts with
/// [`Error::Divergence`].
pub fn train(
    ansatz: &AnsatzSpec,
    target: &StateVector,
    params: Vec<f64>,
    config: &TrainConfig,
) -> Result<TrainReport> {
    config.validate()?;
    let mut theta = params;
    let (mut loss, psi) = loss_and_state(&theta, target, ansatz)?;
    let initial_loss = loss;
    let initial_fidelity = fidelity(&psi, target)?;
    let limit = (initial_loss * 1e3).max(f64::EPSILON);
    let mut trace = vec![TraceEntry {
        step: 0,
        loss,
        fidelity: initial_fidelity,
    }];
    let mut loss_increases = Vec::new();
    let mut steps = 0;
    let mut converged = false;
    for step in 1..=config.max_steps {
        let g = gradient(&theta, target, ansatz)?;
        for (t, d) in theta.iter_mut().zip(&g) {
            *t -= config.gamma * d;
        }
        let (next, psi) = loss_and_state(&theta, target, ansatz)?;
        let fid = fidelity(&psi, target)?;
        trace.push(TraceEntry {
            step,
            loss: next,
            fidelity: fid,
        });
        steps = step;
        if !next.is_finite() || next > limit {
            return Err(Error::Divergence {
                step,
                loss: next,
                initial: initial_loss,
                trace: trace.iter().map(|e| e.loss).collect(),
            });
        }
        if next > loss {
            loss_increases.push(step);
        }
        let delta = (loss - next).abs();
        loss = next;
        if delta < config.tolerance {
            converged = true;
            break;
        }
    }
    let last = *trace.last().expect("non-empty");
    Ok(TrainReport {
        steps,
        converged,
        num_params: ansatz.num_params,
        initial_loss,
        initial_fidelity,
        final_loss: last.loss,
        final_fidelity: last.fidelity,
        trace,
        loss_increases,
        params: theta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{discretize, FunctionSpec};
    use crate::planner::plan_clustered;
    use crate::simulator::run_plan;
    use crate::variational::{build_ansatz, to_plan, PSchedule};

    #[test]
    fn uniform_gr_init_is_half_pi() {
        let spec = FunctionSpec::uniform().unwrap();
        let f = StandardizedFunction::amplitude(spec.clone());
        let a = build_ansatz(&spec, 5, 2, PSchedule::Constant(1)).unwrap();
        let p = init_params(&a, &f, InitMode::GroverRudolph).unwrap();
        assert!(p.iter().all(|x| (x - std::f64::consts::FRAC_PI_2).abs() < 1e-14));
    }

    #[test]
    fn random_init_is_seeded() {
        let spec = FunctionSpec::black_scholes(45.0, 3.0).unwrap();
        let f = StandardizedFunction::amplitude(spec.clone());
        let a = build_ansatz(&spec, 6, 2, PSchedule::Constant(1)).unwrap();
        let m = InitMode::RandomUniform { seed: 3 };
        let p = init_params(&a, &f, m).unwrap();
        assert_eq!(p, init_params(&a, &f, m).unwrap());
        assert!(p.iter().all(|x| (0.0..=std::f64::consts::PI).contains(x)));
        assert_ne!(p, init_params(&a, &f, InitMode::RandomUniform { seed: 4 }).unwrap());
    }

    #[test]
    fn zero_steps_reports_warm_start() {
        let spec = FunctionSpec::normal(0.5, 0.4).unwrap();
        let f = StandardizedFunction::amplitude(spec.clone());
        let a = build_ansatz(&spec, 7, 3, PSchedule::Constant(1)).unwrap();
        let p = init_params(&a, &f, InitMode::GroverRudolph).unwrap();
        let target = discretize(&f, 7).unwrap();
        let cfg = TrainConfig {
            max_steps: 0,
            ..TrainConfig::default()
        };
        let r = train(&a, &target, p.clone(), &cfg).unwrap();
        assert_eq!(r.steps, 0);
        assert_eq!(r.params, p);
        let clustered = run_plan(&plan_clustered(&f, 7, 3).unwrap()).unwrap();
        let want = fidelity(&clustered, &target).unwrap();
        assert!((r.final_fidelity - want).abs() < 1e-12);
        let via_plan = run_plan(&to_plan(&a, &p).unwrap()).unwrap();
        assert!((fidelity(&via_plan, &target).unwrap() - want).abs() < 1e-12);
    }

    #[test]
    fn training_improves_small_black_scholes() {
        let spec = FunctionSpec::black_scholes(45.0, 3.0).unwrap();
        let f = StandardizedFunction::amplitude(spec.clone());
        let a = build_ansatz(&spec, 5, 2, PSchedule::Constant(1)).unwrap();
        let p = init_params(&a, &f, InitMode::GroverRudolph).unwrap();
        let target = discretize(&f, 5).unwrap();
        let cfg = TrainConfig {
            max_steps: 2000,
            ..TrainConfig::default()
        };
        let r = train(&a, &target, p, &cfg).unwrap();
        assert!(r.final_loss <= r.initial_loss);
        assert!(r.final_fidelity > r.initial_fidelity);
        assert!(r.loss_increases.is_empty());
        // deterministic
        let p = init_params(&a, &f, InitMode::GroverRudolph).unwrap();
        let again = train(&a, &target, p, &cfg).unwrap();
        assert_eq!(again, r);
    }

    #[test]
    fn divergence_is_reported() {
        let spec = FunctionSpec::black_scholes(45.0, 3.0).unwrap();
        let a = build_ansatz(&spec, 3, 2, PSchedule::Constant(1)).unwrap();
        let p: Vec<f64> = (0..a.num_params).map(|i| 0.4 + 0.2 * i as f64).collect();
        let shifted: Vec<f64> = p.iter().map(|x| x + 1e-4).collect();
        let target = crate::variational::state(&a, &shifted).unwrap();
        let cfg = TrainConfig {
            gamma: 1e9,
            max_steps: 50,
            ..TrainConfig::default()
        };
        match train(&a, &target, p, &cfg) {
            Err(Error::Divergence { trace, .. }) => assert!(!trace.is_empty()),
            other => panic!("expected divergence, got {other:?}"),
        }
    }
}
