//! Grover-Rudolph initialization against random starting points.

use qfload::functions::{discretize, FunctionSpec, StandardizedFunction};
use qfload::variational::{build_ansatz, init_params, train, InitMode, PSchedule, TrainConfig};

fn main() -> qfload::Result<()> {
    let spec = FunctionSpec::black_scholes(45.0, 3.0)?;
    let func = StandardizedFunction::amplitude(spec.clone());
    let n = 12;
    let ansatz = build_ansatz(&spec, n, 2, PSchedule::Constant(1))?;
    let target = discretize(&func, n)?;

    let mut inits = vec![("grover-rudolph".to_string(), InitMode::GroverRudolph)];
    inits.extend((0..5).map(|seed| (format!("random seed {seed}"), InitMode::RandomUniform { seed })));
    for (name, init) in inits {
        let config = TrainConfig { init, ..TrainConfig::default() };
        let r = train(&ansatz, &target, init_params(&ansatz, &func, init)?, &config)?;
        println!("{name:<16} steps {:>5}  fidelity {:.5}", r.steps, r.final_fidelity);
    }
    Ok(())
}
