//! Multi-controlled rotations down to controlled rotations, CNOTs and
//! controlled-`V` gates.

use super::{Gate, GateList};
use crate::error::{Error, Result};

/// `R_y(theta)` controlled by `m` qubits, as a list over qubits `0..=m`
/// (controls `0..m`, target `m`) containing only two-qubit gates.
pub fn decompose_mcr(m: usize, theta: f64) -> GateList {
    let mut out = decompose_mcr_with_toffoli(m, theta);
    out.gates = out.gates.iter().flat_map(expand).collect();
    out
}

/// Same as [`decompose_mcr`] but keeps Toffolis unexpanded.
pub fn decompose_mcr_with_toffoli(m: usize, theta: f64) -> GateList {
    let controls: Vec<usize> = (0..m).collect();
    let universe: Vec<usize> = (0..=m).collect();
    GateList {
        n_qubits: m + 1,
        gates: mcr_gates(&controls, m, theta, &universe),
    }
}

/// `R_y(theta)` on `t` controlled by `controls` (all active-high).
///
/// The last control doubles as a dirty ancilla for the two inner
/// multi-controlled NOTs.
pub(crate) fn mcr_gates(controls: &[usize], t: usize, theta: f64, universe: &[usize]) -> Vec<Gate> {
    match controls {
        [] => vec![Gate::Ry { q: t, theta }],
        [c] => vec![Gate::Cry {
            c: *c,
            t,
            theta,
        }],
        [rest @ .., last] => {
            let inner = mcx_gates(rest, t, universe).expect("last control is free");
            let mut g = vec![Gate::Cry {
                c: *last,
                t,
                theta: 0.5 * theta,
            }];
            g.extend(inner.iter().cloned());
            g.push(Gate::Cry {
                c: *last,
                t,
                theta: -0.5 * theta,
            });
            g.extend(inner);
            g
        }
    }
}

/// Multi-controlled NOT from Toffolis and CNOTs, borrowing any qubit of
/// `universe` outside the operands as a dirty ancilla.
///
/// With at least `c - 2` spare qubits the V-chain of `4(c - 2)` Toffolis is
/// used; otherwise one spare qubit splits the gate into two smaller
/// multi-controlled NOTs applied twice each.
pub fn mcx_gates(controls: &[usize], t: usize, universe: &[usize]) -> Result<Vec<Gate>> {
    let c = controls.len();
    match c {
        0 => return Ok(vec![Gate::X { q: t }]),
        1 => return Ok(vec![Gate::Cx { c: controls[0], t }]),
        2 => {
            return Ok(vec![Gate::Toffoli {
                c1: controls[0],
                c2: controls[1],
                t,
            }])
        }
        _ => {}
    }
    let free: Vec<usize> = universe
        .iter()
        .copied()
        .filter(|q| *q != t && !controls.contains(q))
        .collect();
    if free.len() >= c - 2 {
        return Ok(v_chain(controls, &free[..c - 2], t));
    }
    let Some(&anc) = free.first() else {
        return Err(Error::InvalidArgument(format!(
            "{c}-controlled NOT needs a spare qubit"
        )));
    };
    let m1 = (c + 1).div_ceil(2);
    let (g1, g2) = controls.split_at(m1);
    let mut second: Vec<usize> = g2.to_vec();
    second.push(anc);
    let a = mcx_gates(g1, anc, universe)?;
    let b = mcx_gates(&second, t, universe)?;
    let mut out = Vec::with_capacity(2 * (a.len() + b.len()));
    for _ in 0..2 {
        out.extend(a.iter().cloned());
        out.extend(b.iter().cloned());
    }
    Ok(out)
}

/// V-chain over dirty ancillas `anc` (`controls.len() - 2` of them).
fn v_chain(x: &[usize], anc: &[usize], t: usize) -> Vec<Gate> {
    let m = x.len();
    // stage j (2 <= j < m) uses control x[j] and ancilla anc[j-2]
    let stage = |j: usize| Gate::Toffoli {
        c1: x[j],
        c2: anc[j - 2],
        t: if j == m - 1 { t } else { anc[j - 1] },
    };
    let base = Gate::Toffoli {
        c1: x[0],
        c2: x[1],
        t: anc[0],
    };
    let mut g = Vec::with_capacity(4 * (m - 2));
    g.extend((2..m).rev().map(stage));
    g.push(base.clone());
    g.extend((2..m).map(stage));
    // second pass restores the ancillas
    g.extend((2..m - 1).rev().map(stage));
    g.push(base);
    g.extend((2..m - 1).map(stage));
    g
}

/// Rewrites a gate into two-qubit gates (single-qubit gates pass through).
pub fn expand(g: &Gate) -> Vec<Gate> {
    match g {
        Gate::Toffoli { c1, c2, t } => vec![
            Gate::Cv { c: *c2, t: *t },
            Gate::Cx { c: *c1, t: *c2 },
            Gate::Cvdg { c: *c2, t: *t },
            Gate::Cx { c: *c1, t: *c2 },
            Gate::Cv { c: *c1, t: *t },
        ],
        Gate::Mcx { controls, t } => {
            let universe: Vec<usize> = controls.iter().copied().chain([*t]).collect();
            mcx_gates(controls, *t, &universe)
                .map(|gs| gs.iter().flat_map(expand).collect())
                .unwrap_or_else(|_| vec![g.clone()])
        }
        Gate::Mcry {
            controls,
            ctrl_state,
            t,
            theta,
        } => {
            let flips: Vec<Gate> = controls
                .iter()
                .zip(ctrl_state)
                .filter(|(_, on)| !**on)
                .map(|(q, _)| Gate::X { q: *q })
                .collect();
            let universe: Vec<usize> = controls.iter().copied().chain([*t]).collect();
            let mut out = flips.clone();
            out.extend(
                mcr_gates(controls, *t, *theta, &universe)
                    .iter()
                    .flat_map(expand),
            );
            out.extend(flips);
            out
        }
        other => vec![other.clone()],
    }
}
