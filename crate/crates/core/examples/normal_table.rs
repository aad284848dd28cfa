//! Clustered loading of normal distributions on 8 qubits.
//!
//! ```text
//! cargo run --example normal_table
//! ```

use qfload::circuits::count_tqg;
use qfload::functions::{discretize, eta_bound, FunctionSpec, StandardizedFunction};
use qfload::planner::plan_theorem1;
use qfload::simulator::{fidelity, run_plan};

fn main() -> qfload::Result<()> {
    let n = 8;
    println!("sigma  eta    k0  fidelity  tqg  of full");
    for sigma in [1.0, 0.6, 0.4, 0.3] {
        let func = StandardizedFunction::amplitude(FunctionSpec::normal(0.5, sigma)?);
        let eta = eta_bound(&func)?.eta;
        let plan = plan_theorem1(&func, n, 0.05)?;
        let fid = fidelity(&run_plan(&plan)?, &discretize(&func, n)?)?;
        let counts = count_tqg(&plan);
        println!(
            "{sigma:<6} {eta:<6.2} {:<3} {fid:.5}   {:<4} {:.2}%",
            plan.k0,
            counts.tqg_total,
            100.0 * counts.fraction_of_full()
        );
    }
    Ok(())
}
