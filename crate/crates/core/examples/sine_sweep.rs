//! Final fidelity of the trained ansatz for sin(x) on [0, 3pi/2] over qubit
//! counts and neighbour schedules, as CSV on stdout.

use qfload::functions::{discretize, FunctionSpec, StandardizedFunction};
use qfload::variational::{build_ansatz, init_params, train, PSchedule, TrainConfig};

fn main() -> qfload::Result<()> {
    let spec = FunctionSpec::sine()?;
    let func = StandardizedFunction::amplitude(spec.clone());
    let config = TrainConfig {
        max_steps: 400_000,
        ..TrainConfig::default()
    };
    println!("n,p,params,steps,fidelity");
    for n in 5..=10 {
        let target = discretize(&func, n)?;
        for p in [PSchedule::Constant(1), PSchedule::Constant(2), PSchedule::Constant(3), PSchedule::Linear] {
            let ansatz = build_ansatz(&spec, n, 3, p)?;
            let r = train(&ansatz, &target, init_params(&ansatz, &func, config.init)?, &config)?;
            println!("{n},{p},{},{},{:.6}", r.num_params, r.steps, r.final_fidelity);
        }
    }
    Ok(())
}
