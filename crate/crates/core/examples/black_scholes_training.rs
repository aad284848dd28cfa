//! Trains the variational ansatz on a Black-Scholes payoff profile for a few
//! neighbour schedules.

use qfload::functions::{discretize, FunctionSpec, StandardizedFunction};
use qfload::variational::{build_ansatz, init_params, train, PSchedule, TrainConfig};

fn main() -> qfload::Result<()> {
    let spec = FunctionSpec::black_scholes(45.0, 3.0)?;
    let func = StandardizedFunction::amplitude(spec.clone());
    let n = 12;
    let target = discretize(&func, n)?;
    let config = TrainConfig::default();
    for p in ["1", "2", "3", "k"] {
        let p: PSchedule = p.parse()?;
        let ansatz = build_ansatz(&spec, n, 2, p)?;
        let params = init_params(&ansatz, &func, config.init)?;
        let r = train(&ansatz, &target, params, &config)?;
        println!(
            "p = {p}: {} parameters, {} steps, fidelity {:.5} -> {:.5}",
            r.num_params, r.steps, r.initial_fidelity, r.final_fidelity
        );
    }
    Ok(())
}
