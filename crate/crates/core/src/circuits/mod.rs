//! Gate-level view of plans: multi-controlled rotation decomposition,
//! two-qubit-gate accounting and a line-based text IR.
//!
//! Qubit operands are 0-based; qubit 0 is the first (most significant)
//! qubit of the simulator.

mod count;
mod decompose;
pub mod dense;
mod ir;

use serde::{Deserialize, Serialize};

pub use count::{
    count_tqg, mcr_tqg_count, mcr_tqg_enumerated, BlockCount, CountMethod, GateCountReport,
};
pub use decompose::{decompose_mcr, decompose_mcr_with_toffoli, expand, mcx_gates};
pub use ir::{emit_gates, emit_plan, parse_ir, ParsedIr};

use crate::angles::AngleBlock;
use crate::planner::CircuitPlan;

/// Angles closer than this are emitted as a single uncontrolled rotation.
pub const UNIFORM_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Gate {
    X { q: usize },
    Ry { q: usize, theta: f64 },
    Cx { c: usize, t: usize },
    Cry { c: usize, t: usize, theta: f64 },
    /// Controlled `V` with `V^2 = X`.
    Cv { c: usize, t: usize },
    Cvdg { c: usize, t: usize },
    Toffoli { c1: usize, c2: usize, t: usize },
    Mcx { controls: Vec<usize>, t: usize },
    /// `R_y(theta)` on `t` when control `i` is in state `ctrl_state[i]`.
    Mcry {
        controls: Vec<usize>,
        ctrl_state: Vec<bool>,
        t: usize,
        theta: f64,
    },
}

impl Gate {
    pub fn name(&self) -> &'static str {
        match self {
            Gate::X { .. } => "x",
            Gate::Ry { .. } => "ry",
            Gate::Cx { .. } => "cx",
            Gate::Cry { .. } => "cry",
            Gate::Cv { .. } => "cv",
            Gate::Cvdg { .. } => "cvdg",
            Gate::Toffoli { .. } => "ccx",
            Gate::Mcx { .. } => "mcx",
            Gate::Mcry { .. } => "mcry",
        }
    }

    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::X { q } | Gate::Ry { q, .. } => vec![*q],
            Gate::Cx { c, t } | Gate::Cry { c, t, .. } | Gate::Cv { c, t } | Gate::Cvdg { c, t } => {
                vec![*c, *t]
            }
            Gate::Toffoli { c1, c2, t } => vec![*c1, *c2, *t],
            Gate::Mcx { controls, t } | Gate::Mcry { controls, t, .. } => {
                controls.iter().copied().chain([*t]).collect()
            }
        }
    }

    /// Two-qubit gates this gate costs once fully decomposed.
    pub fn tqg_cost(&self) -> u64 {
        match self {
            Gate::X { .. } | Gate::Ry { .. } => 0,
            Gate::Cx { .. } | Gate::Cry { .. } | Gate::Cv { .. } | Gate::Cvdg { .. } => 1,
            Gate::Toffoli { .. } => 5,
            Gate::Mcx { controls, t } => {
                let universe: Vec<usize> = controls.iter().copied().chain([*t]).collect();
                mcx_gates(controls, *t, &universe)
                    .map(|gs| gs.iter().flat_map(expand).map(|g| g.tqg_cost()).sum())
                    .unwrap_or(0)
            }
            Gate::Mcry { controls, .. } => {
                if controls.is_empty() {
                    0
                } else {
                    mcr_tqg_count(controls.len() + 1).0
                }
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GateList {
    pub n_qubits: usize,
    pub gates: Vec<Gate>,
}

impl GateList {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            gates: Vec::new(),
        }
    }

    pub fn push(&mut self, g: Gate) {
        self.gates.push(g);
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Sum of [`Gate::tqg_cost`].
    pub fn tqg_cost(&self) -> u64 {
        self.gates.iter().map(Gate::tqg_cost).sum()
    }

    /// Gates acting on exactly two qubits.
    pub fn two_qubit_gates(&self) -> usize {
        self.gates.iter().filter(|g| g.qubits().len() == 2).count()
    }

    /// Operands must be distinct and in range.
    pub fn validate(&self) -> crate::Result<()> {
        for (i, g) in self.gates.iter().enumerate() {
            let qs = g.qubits();
            let mut sorted = qs.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != qs.len() || qs.iter().any(|&q| q >= self.n_qubits) {
                return Err(crate::Error::InvalidArgument(format!(
                    "gate {i} ({}) has invalid operands {qs:?}",
                    g.name()
                )));
            }
        }
        Ok(())
    }
}

fn pattern(l: usize, m: usize) -> Vec<bool> {
    (0..m).map(|i| (l >> (m - 1 - i)) & 1 == 1).collect()
}

/// Gates of one block at the multi-controlled-rotation level.
///
/// Exact blocks emit one `mcry` per control pattern, or a single `ry` when
/// all angles agree. Annotated blocks emit `ry(representative)` followed by
/// one `mcry(angle - representative)` per retained index.
pub fn block_gates(block: &AngleBlock) -> Vec<Gate> {
    let t = block.k - 1;
    let controls: Vec<usize> = (0..t).collect();
    let mcry = |l: usize, theta: f64| {
        if t == 0 {
            Gate::Ry { q: 0, theta }
        } else {
            Gate::Mcry {
                controls: controls.clone(),
                ctrl_state: pattern(l, t),
                t,
                theta,
            }
        }
    };
    match &block.cluster {
        None => {
            let first = block.angles[0];
            if block.angles.iter().all(|a| (a - first).abs() <= UNIFORM_TOL) {
                vec![Gate::Ry { q: t, theta: first }]
            } else {
                block.angles.iter().enumerate().map(|(l, &a)| mcry(l, a)).collect()
            }
        }
        Some(c) => {
            let mut gates = vec![Gate::Ry {
                q: t,
                theta: c.representative,
            }];
            gates.extend(
                c.retained
                    .iter()
                    .map(|&l| mcry(l, block.angles[l] - c.representative)),
            );
            gates
        }
    }
}

/// The whole plan at the multi-controlled-rotation level.
pub fn plan_gates(plan: &CircuitPlan) -> GateList {
    GateList {
        n_qubits: plan.n,
        gates: plan.blocks.iter().flat_map(block_gates).collect(),
    }
}
