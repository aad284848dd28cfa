//! Line-per-gate text IR.
//!
//! ```text
//! # qubits <n>
//! # tqg <count>
//! x <q>
//! ry <q> <theta>
//! cx <c> <t>
//! cry <c> <t> <theta>
//! cv <c> <t>
//! cvdg <c> <t>
//! ccx <c1> <c2> <t>
//! mcx <c>... <t>
//! mcry <bits> <c>... <t> <theta>
//! ```
//!
//! `<bits>` holds one `0`/`1` per control, giving the state each control
//! must be in. Angles print in the shortest form that parses back to the
//! same `f64`. Lines starting with `#` other than the two headers are
//! ignored, as are blank lines.

use std::fmt::Write;

use super::{count_tqg, plan_gates, Gate, GateList};
use crate::error::{Error, Result};
use crate::planner::CircuitPlan;

#[derive(Clone, Debug, PartialEq)]
pub struct ParsedIr {
    pub tqg: Option<u64>,
    pub gates: GateList,
}

fn gate_line(g: &Gate) -> String {
    let join = |qs: &[usize]| {
        qs.iter()
            .map(usize::to_string)
            .collect::<Vec<_>>()
            .join(" ")
    };
    match g {
        Gate::X { q } => format!("x {q}"),
        Gate::Ry { q, theta } => format!("ry {q} {theta}"),
        Gate::Cx { c, t } => format!("cx {c} {t}"),
        Gate::Cry { c, t, theta } => format!("cry {c} {t} {theta}"),
        Gate::Cv { c, t } => format!("cv {c} {t}"),
        Gate::Cvdg { c, t } => format!("cvdg {c} {t}"),
        Gate::Toffoli { c1, c2, t } => format!("ccx {c1} {c2} {t}"),
        Gate::Mcx { controls, t } => format!("mcx {} {t}", join(controls)),
        Gate::Mcry {
            controls,
            ctrl_state,
            t,
            theta,
        } => {
            let bits: String = ctrl_state.iter().map(|&b| if b { '1' } else { '0' }).collect();
            format!("mcry {bits} {} {t} {theta}", join(controls))
        }
    }
}

fn emit(n: usize, tqg: u64, extra: &[String], gates: &[Gate]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# qubits {n}");
    let _ = writeln!(out, "# tqg {tqg}");
    for line in extra {
        let _ = writeln!(out, "# {line}");
    }
    for g in gates {
        out.push_str(&gate_line(g));
        out.push('\n');
    }
    out
}

/// IR of a gate list; the header count is [`GateList::tqg_cost`].
pub fn emit_gates(list: &GateList) -> String {
    emit(list.n_qubits, list.tqg_cost(), &[], &list.gates)
}

/// IR of a plan at the multi-controlled-rotation level; the header count
/// is [`count_tqg`]`(plan).tqg_total`.
pub fn emit_plan(plan: &CircuitPlan) -> String {
    let report = count_tqg(plan);
    let extra = [
        format!("k0 {}", plan.k0),
        format!(
            "provenance {}",
            serde_json::to_value(plan.provenance)
                .ok()
                .and_then(|v| v.as_str().map(str::to_string))
                .unwrap_or_default()
        ),
    ];
    emit(plan.n, report.tqg_total, &extra, &plan_gates(plan).gates)
}

pub fn parse_ir(text: &str) -> Result<ParsedIr> {
    let mut n_qubits = None;
    let mut tqg = None;
    let mut gates = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let err = |msg: &str| Error::Parse {
            line: line_no,
            msg: msg.to_string(),
        };
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let mut parts = rest.split_whitespace();
            match (parts.next(), parts.next()) {
                (Some("qubits"), Some(v)) => {
                    n_qubits = Some(v.parse().map_err(|_| err("bad qubit count"))?)
                }
                (Some("tqg"), Some(v)) => tqg = Some(v.parse().map_err(|_| err("bad tqg count"))?),
                _ => {}
            }
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let q = |s: &str| s.parse::<usize>().map_err(|_| err(&format!("bad qubit {s:?}")));
        let f = |s: &str| s.parse::<f64>().map_err(|_| err(&format!("bad angle {s:?}")));
        let arity = |want: usize| {
            if toks.len() == want + 1 {
                Ok(())
            } else {
                Err(err(&format!("{} takes {want} operands", toks[0])))
            }
        };
        let g = match toks[0] {
            "x" => {
                arity(1)?;
                Gate::X { q: q(toks[1])? }
            }
            "ry" => {
                arity(2)?;
                Gate::Ry {
                    q: q(toks[1])?,
                    theta: f(toks[2])?,
                }
            }
            "cx" | "cv" | "cvdg" => {
                arity(2)?;
                let (c, t) = (q(toks[1])?, q(toks[2])?);
                match toks[0] {
                    "cx" => Gate::Cx { c, t },
                    "cv" => Gate::Cv { c, t },
                    _ => Gate::Cvdg { c, t },
                }
            }
            "cry" => {
                arity(3)?;
                Gate::Cry {
                    c: q(toks[1])?,
                    t: q(toks[2])?,
                    theta: f(toks[3])?,
                }
            }
            "ccx" => {
                arity(3)?;
                Gate::Toffoli {
                    c1: q(toks[1])?,
                    c2: q(toks[2])?,
                    t: q(toks[3])?,
                }
            }
            "mcx" => {
                if toks.len() < 3 {
                    return Err(err("mcx needs controls and a target"));
                }
                let qs = toks[1..].iter().map(|s| q(s)).collect::<Result<Vec<_>>>()?;
                let (t, controls) = qs.split_last().expect("non-empty");
                Gate::Mcx {
                    controls: controls.to_vec(),
                    t: *t,
                }
            }
            "mcry" => {
                let bits = toks.get(1).ok_or_else(|| err("mcry needs a control pattern"))?;
                let ctrl_state = bits
                    .chars()
                    .map(|ch| match ch {
                        '0' => Ok(false),
                        '1' => Ok(true),
                        _ => Err(err("control pattern must be 0/1")),
                    })
                    .collect::<Result<Vec<_>>>()?;
                let m = ctrl_state.len();
                if toks.len() != m + 4 {
                    return Err(err(&format!("mcry with {m} controls takes {} tokens", m + 4)));
                }
                let controls = toks[2..2 + m].iter().map(|s| q(s)).collect::<Result<Vec<_>>>()?;
                Gate::Mcry {
                    controls,
                    ctrl_state,
                    t: q(toks[2 + m])?,
                    theta: f(toks[3 + m])?,
                }
            }
            other => return Err(err(&format!("unknown gate {other:?}"))),
        };
        gates.push(g);
    }
    let inferred = gates
        .iter()
        .flat_map(|g| g.qubits())
        .max()
        .map_or(0, |q| q + 1);
    let list = GateList {
        n_qubits: n_qubits.unwrap_or(inferred),
        gates,
    };
    list.validate().map_err(|e| Error::Parse {
        line: 0,
        msg: e.to_string(),
    })?;
    Ok(ParsedIr { tqg, gates: list })
}
