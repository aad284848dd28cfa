//! A density whose log has an unbounded second derivative at one endpoint.
//!
//! The planner keeps the angle next to the singular endpoint in every
//! clustered block and clusters the rest.

use qfload::circuits::count_tqg;
use qfload::functions::{discretize, Encoding, FunctionSpec, StandardizedFunction};
use qfload::planner::plan_singular;
use qfload::simulator::{fidelity, run_plan};

fn main() -> qfload::Result<()> {
    let spec = FunctionSpec::exp_x32()?;
    for encoding in [Encoding::Probability, Encoding::Amplitude] {
        let func = StandardizedFunction::new(spec.clone(), encoding);
        let plan = plan_singular(&func, 10, 0.01, None)?;
        let info = plan.singular.as_ref().expect("singular plan");
        let fid = fidelity(&run_plan(&plan)?, &discretize(&func, 10)?)?;
        println!(
            "{encoding:?}: k* = {}, eta(k*) = {:.3}, k0 = {}, fidelity {fid:.5}, tqg {}",
            info.k_star,
            info.eta_at_k_star,
            plan.k0,
            count_tqg(&plan).tqg_total
        );
        for b in plan.blocks.iter().skip(plan.k0) {
            if let Some(c) = &b.cluster {
                println!("  block {:>2}: retained {:?}, spread {:.2e}", b.k, c.retained, c.spread);
            }
        }
    }
    Ok(())
}
