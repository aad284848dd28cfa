//! Loading real functions into simulated qubit registers with the
//! Grover-Rudolph construction.
//!
//! The pipeline is [`functions`] (target definition and discretization) ->
//! [`angles`] (exact rotation angles) -> [`planner`] (exact, clustered and
//! singular-endpoint plans) -> [`simulator`] (statevector execution).
//! [`circuits`] turns plans into gate lists and two-qubit-gate counts, and
//! [`variational`] trains the landscape-tailored ansatz.
//!
//! ```
//! use qfload::functions::{FunctionSpec, StandardizedFunction, discretize};
//! use qfload::planner::plan_theorem1;
//! use qfload::simulator::{fidelity, run_plan};
//!
//! let f = StandardizedFunction::amplitude(FunctionSpec::normal(0.5, 1.0)?);
//! let plan = plan_theorem1(&f, 8, 0.05)?;
//! let fid = fidelity(&run_plan(&plan)?, &discretize(&f, 8)?)?;
//! assert_eq!(plan.k0, 2);
//! assert!(fid > 0.999);
//! # Ok::<(), qfload::Error>(())
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

pub mod angles;
pub mod circuits;
pub mod cli;
pub mod error;
pub mod functions;
pub mod planner;
pub mod quadrature;
pub mod simulator;
pub mod variational;

pub use error::{Error, Result};
