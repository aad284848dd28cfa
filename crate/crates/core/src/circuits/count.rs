//! Two-qubit-gate accounting.

use serde::{Deserialize, Serialize};

use super::decompose::decompose_mcr;
use crate::planner::CircuitPlan;

/// Largest block size counted by enumerating the decomposition; larger
/// blocks use the closed form `80k - 398`.
pub const ENUMERATION_MAX_K: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CountMethod {
    /// Uniformly controlled rotation: `2^(k-1)` CNOTs.
    Ucr,
    /// Fully clustered: one single-qubit rotation.
    Clustered,
    ExactEnumeration,
    #[serde(rename = "barenco_80k_398")]
    Barenco80k398,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockCount {
    pub k: usize,
    pub tqg: u64,
    pub retained: usize,
    pub method: CountMethod,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateCountReport {
    pub tqg_total: u64,
    /// `2^n - 1`, the cost of the unclustered circuit.
    pub tqg_full: u64,
    /// [`CountMethod::Barenco80k398`] if any block used it, else
    /// [`CountMethod::ExactEnumeration`].
    pub formula_used: CountMethod,
    pub blocks: Vec<BlockCount>,
}

impl GateCountReport {
    pub fn fraction_of_full(&self) -> f64 {
        self.tqg_total as f64 / self.tqg_full as f64
    }

    pub fn to_json(&self) -> crate::Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Two-qubit gates in one `R_y` controlled by `k - 1` qubits (`k` qubits in
/// total), with the method used.
pub fn mcr_tqg_count(k: usize) -> (u64, CountMethod) {
    if k <= 1 {
        (0, CountMethod::ExactEnumeration)
    } else if k <= ENUMERATION_MAX_K {
        (mcr_tqg_enumerated(k), CountMethod::ExactEnumeration)
    } else {
        (80 * k as u64 - 398, CountMethod::Barenco80k398)
    }
}

/// Counts the gates of [`decompose_mcr`]`(k - 1, _)` one by one.
pub fn mcr_tqg_enumerated(k: usize) -> u64 {
    if k <= 1 {
        return 0;
    }
    decompose_mcr(k - 1, 1.0).two_qubit_gates() as u64
}

/// Tallies two-qubit gates block by block.
///
/// Unannotated blocks cost `2^(k-1)`, fully clustered ones nothing, and
/// partially clustered ones one multi-controlled rotation per retained
/// angle.
pub fn count_tqg(plan: &CircuitPlan) -> GateCountReport {
    let mut formula_used = CountMethod::ExactEnumeration;
    let blocks: Vec<BlockCount> = plan
        .blocks
        .iter()
        .map(|b| match &b.cluster {
            None => BlockCount {
                k: b.k,
                tqg: 1 << (b.k - 1),
                retained: b.angles.len(),
                method: CountMethod::Ucr,
            },
            Some(c) if c.retained.is_empty() => BlockCount {
                k: b.k,
                tqg: 0,
                retained: 0,
                method: CountMethod::Clustered,
            },
            Some(c) => {
                let (per, method) = mcr_tqg_count(b.k);
                if method == CountMethod::Barenco80k398 {
                    formula_used = method;
                }
                BlockCount {
                    k: b.k,
                    tqg: per * c.retained.len() as u64,
                    retained: c.retained.len(),
                    method,
                }
            }
        })
        .collect();
    GateCountReport {
        tqg_total: blocks.iter().map(|b| b.tqg).sum(),
        tqg_full: (1u64 << plan.n) - 1,
        formula_used,
        blocks,
    }
}
