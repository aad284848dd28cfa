//! Writes the circuit of a clustered plan in the text IR and reads it back.

use qfload::circuits::{count_tqg, emit_plan, parse_ir};
use qfload::functions::{FunctionSpec, StandardizedFunction};
use qfload::planner::plan_theorem1;

fn main() -> qfload::Result<()> {
    let func = StandardizedFunction::amplitude(FunctionSpec::normal(0.5, 0.6)?);
    let plan = plan_theorem1(&func, 6, 0.05)?;
    let text = emit_plan(&plan);
    print!("{text}");
    let parsed = parse_ir(&text)?;
    assert_eq!(parsed.tqg, Some(count_tqg(&plan).tqg_total));
    eprintln!("{} gates parsed back", parsed.gates.len());
    Ok(())
}
