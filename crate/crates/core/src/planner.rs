//! Circuit plans: exact Grover-Rudolph, clustered beyond `k0`, and the
//! endpoint-singularity variant.

use serde::{Deserialize, Serialize};

use crate::angles::{all_blocks, delta, AngleBlock, DEFAULT_REL_TOL};
use crate::error::{Error, Result};
use crate::functions::{eta_bound, Encoding, StandardizedFunction};

/// Coefficient of the `ln(1 - eps) / eta^2` term in the `k0` formula.
///
/// The derivation through the per-block fidelity product gives 24. The
/// value 96 is kept selectable for comparison; on the normal-distribution
/// benchmarks it starts clustering one block too early.
pub const K0_COEFF: f64 = 24.0;
pub const K0_COEFF_ALT: f64 = 96.0;

/// Largest `eta` for which the clustering bound is meaningful.
pub const ETA_MAX: f64 = 8.0 * std::f64::consts::PI;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterAnnotation {
    /// Angle applied to every clustered index.
    pub representative: f64,
    /// Sorted indices that keep their own angle.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub retained: Vec<usize>,
    /// `max |representative - angle|` over clustered indices.
    pub spread: f64,
}

impl ClusterAnnotation {
    /// Clusters every index not in `retained` onto the midpoint of the
    /// extreme clustered angles. Returns `None` when nothing is left to
    /// cluster.
    pub fn midpoint(angles: &[f64], mut retained: Vec<usize>) -> Option<Self> {
        retained.sort_unstable();
        retained.dedup();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (l, &a) in angles.iter().enumerate() {
            if retained.binary_search(&l).is_err() {
                lo = lo.min(a);
                hi = hi.max(a);
            }
        }
        if lo > hi {
            return None;
        }
        Some(Self {
            representative: 0.5 * (lo + hi),
            retained,
            spread: 0.5 * (hi - lo),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    ExactGr,
    Theorem1,
    Singular,
    Variational,
}

/// Diagnostics of the singular-endpoint planner.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SingularInfo {
    pub k_max: usize,
    pub k_star: usize,
    /// `|d2 log density|` at distance `2^(1-k_star)` from the singular
    /// endpoint(s).
    pub eta_at_k_star: f64,
    pub left: bool,
    pub right: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircuitPlan {
    pub n: usize,
    pub encoding: Encoding,
    pub k0: usize,
    pub provenance: Provenance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub singular: Option<SingularInfo>,
    pub blocks: Vec<AngleBlock>,
}

impl CircuitPlan {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let plan: Self = serde_json::from_str(text)?;
        plan.validate()?;
        Ok(plan)
    }

    pub fn validate(&self) -> Result<()> {
        if self.blocks.len() != self.n {
            return Err(Error::InvalidArgument(format!(
                "plan for {} qubits has {} blocks",
                self.n,
                self.blocks.len()
            )));
        }
        for (i, b) in self.blocks.iter().enumerate() {
            if b.k != i + 1 || b.angles.len() != 1 << i {
                return Err(Error::InvalidArgument(format!("malformed block {}", i + 1)));
            }
            if let Some(c) = &b.cluster {
                if c.retained.iter().any(|&l| l >= b.angles.len()) {
                    return Err(Error::InvalidArgument(format!(
                        "block {} retains an index out of range",
                        b.k
                    )));
                }
            }
        }
        Ok(())
    }

    /// `prod cos^2(spread_k / 2)` over annotated blocks: a lower bound on
    /// the fidelity between this plan and the unclustered one.
    pub fn spread_fidelity_bound(&self) -> f64 {
        self.blocks
            .iter()
            .filter_map(|b| b.cluster.as_ref())
            .map(|c| (0.5 * c.spread).cos().powi(2))
            .product()
    }
}

/// Planner knobs shared by all entry points.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlanOptions {
    pub quad_tol: f64,
    pub k0_coeff: f64,
}

impl Default for PlanOptions {
    fn default() -> Self {
        Self {
            quad_tol: DEFAULT_REL_TOL,
            k0_coeff: K0_COEFF,
        }
    }
}

/// `k0 = max(ceil(-log2(4^-n - (24/eta^2) ln(1-eps)) / 2), 2)`, clamped to `n`.
pub fn compute_k0(eta: f64, eps: f64, n: usize) -> usize {
    compute_k0_with(eta, eps, n, K0_COEFF)
}

pub fn compute_k0_with(eta: f64, eps: f64, n: usize, coeff: f64) -> usize {
    k0_from_arg(eta, eps, 4f64.powi(-(n as i32)), coeff).min(n)
}

/// The `n -> infinity` limit of [`compute_k0`].
pub fn k0_asymptotic(eta: f64, eps: f64) -> usize {
    k0_from_arg(eta, eps, 0.0, K0_COEFF)
}

fn k0_from_arg(eta: f64, eps: f64, tail: f64, coeff: f64) -> usize {
    if eta == 0.0 {
        return 2;
    }
    let arg = tail - (coeff / (eta * eta)) * (1.0 - eps).ln();
    if !(arg > 0.0) {
        return usize::MAX;
    }
    let k = (-0.5 * arg.log2()).ceil();
    if k <= 2.0 {
        2
    } else if k >= 64.0 {
        usize::MAX
    } else {
        k as usize
    }
}

/// Lower bound `exp(-(eta^2/24)(4^-k0 - 4^-n))` on the clustered fidelity.
pub fn fidelity_floor(eta: f64, k0: usize, n: usize) -> f64 {
    (-(eta * eta / 24.0) * (4f64.powi(-(k0 as i32)) - 4f64.powi(-(n as i32)))).exp()
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > 30 {
        return Err(Error::InvalidArgument(format!("n must be in 1..=30, got {n}")));
    }
    Ok(())
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidArgument(format!("epsilon must be in (0, 1), got {eps}")));
    }
    Ok(())
}

/// Every block exact.
pub fn plan_exact(func: &StandardizedFunction, n: usize) -> Result<CircuitPlan> {
    plan_exact_with(func, n, &PlanOptions::default())
}

pub fn plan_exact_with(
    func: &StandardizedFunction,
    n: usize,
    opts: &PlanOptions,
) -> Result<CircuitPlan> {
    check_n(n)?;
    Ok(CircuitPlan {
        n,
        encoding: func.encoding,
        k0: n,
        provenance: Provenance::ExactGr,
        eta: None,
        singular: None,
        blocks: all_blocks(func, n, opts.quad_tol)?,
    })
}

/// Exact blocks up to `k0`, fully clustered blocks after.
pub fn plan_theorem1(func: &StandardizedFunction, n: usize, eps: f64) -> Result<CircuitPlan> {
    plan_theorem1_with(func, n, eps, &PlanOptions::default())
}

pub fn plan_theorem1_with(
    func: &StandardizedFunction,
    n: usize,
    eps: f64,
    opts: &PlanOptions,
) -> Result<CircuitPlan> {
    check_n(n)?;
    check_eps(eps)?;
    let eta = eta_bound(func)?.eta;
    if eta > ETA_MAX {
        return Err(Error::EtaTooLarge { eta });
    }
    let k0 = compute_k0_with(eta, eps, n, opts.k0_coeff);
    let mut plan = plan_clustered_with(func, n, k0, opts)?;
    plan.eta = Some(eta);
    Ok(plan)
}

/// Clusters every block after a caller-chosen `k0`, skipping the `eta`
/// checks.
pub fn plan_clustered(func: &StandardizedFunction, n: usize, k0: usize) -> Result<CircuitPlan> {
    plan_clustered_with(func, n, k0, &PlanOptions::default())
}

pub fn plan_clustered_with(
    func: &StandardizedFunction,
    n: usize,
    k0: usize,
    opts: &PlanOptions,
) -> Result<CircuitPlan> {
    check_n(n)?;
    let k0 = k0.min(n);
    let mut blocks = all_blocks(func, n, opts.quad_tol)?;
    for b in blocks.iter_mut().skip(k0) {
        b.cluster = ClusterAnnotation::midpoint(&b.angles, Vec::new());
    }
    Ok(CircuitPlan {
        n,
        encoding: func.encoding,
        k0,
        provenance: Provenance::Theorem1,
        eta: None,
        singular: None,
        blocks,
    })
}

const ENDPOINT_TOL: f64 = 1e-12;
const KMAX_GRID: usize = 1024;

/// Clusters around singular points or zeros that sit on the domain
/// endpoints.
///
/// Each block after `k0` keeps the angle of the interval touching each
/// singular endpoint and clusters the rest. `k0` is the larger of `k*` and
/// the `k0` formula evaluated with `eta` taken at distance `2^(1-k*)` from
/// the endpoint, where `k*` is the first block at or after `k_max` (and any
/// supplied `k_star`) whose interval width satisfies `delta * eta / 8 <= pi`.
pub fn plan_singular(
    func: &StandardizedFunction,
    n: usize,
    eps: f64,
    k_star: Option<usize>,
) -> Result<CircuitPlan> {
    plan_singular_with(func, n, eps, k_star, &PlanOptions::default())
}

pub fn plan_singular_with(
    func: &StandardizedFunction,
    n: usize,
    eps: f64,
    k_star: Option<usize>,
    opts: &PlanOptions,
) -> Result<CircuitPlan> {
    check_n(n)?;
    check_eps(eps)?;
    let points = func.standardized_special_points();
    if points.is_empty() {
        return plan_theorem1_with(func, n, eps, opts);
    }
    let mut left = false;
    let mut right = false;
    for p in &points {
        if p.position.abs() <= ENDPOINT_TOL {
            left = true;
        } else if (p.position - 1.0).abs() <= ENDPOINT_TOL {
            right = true;
        } else {
            return Err(Error::UnsupportedSingularity(func.to_original(p.position)));
        }
    }
    let edge_eta = |k: usize| -> f64 {
        let d = delta(k);
        let mut eta = 0.0f64;
        if left {
            eta = eta.max(func.d2_log_density(d).abs());
        }
        if right {
            eta = eta.max(func.d2_log_density(1.0 - d).abs());
        }
        eta
    };

    let k_lo = if left && right { 2 } else { 1 };
    check_vanishing_bound(&edge_eta, k_lo, n)?;
    let k_max = find_k_max(func, left, right, k_lo, n);

    let start = k_max.max(k_star.unwrap_or(1)).max(k_lo);
    let chosen = (start..=n)
        .find(|&k| delta(k) / 8.0 * edge_eta(k) <= std::f64::consts::PI)
        .unwrap_or(n);
    let eta_star = edge_eta(chosen);
    let k0 = compute_k0_with(eta_star, eps, n, opts.k0_coeff).max(chosen).min(n);

    let mut blocks = all_blocks(func, n, opts.quad_tol)?;
    for b in blocks.iter_mut().skip(k0) {
        let m = b.angles.len();
        let mut retained = Vec::new();
        if left {
            retained.push(0);
        }
        if right {
            retained.push(m - 1);
        }
        b.cluster = ClusterAnnotation::midpoint(&b.angles, retained);
    }
    Ok(CircuitPlan {
        n,
        encoding: func.encoding,
        k0,
        provenance: Provenance::Singular,
        eta: Some(eta_star),
        singular: Some(SingularInfo {
            k_max,
            k_star: chosen,
            eta_at_k_star: eta_star,
            left,
            right,
        }),
        blocks,
    })
}

/// `|d2 log density|(2^(1-k)) * 4^(1-k)` must shrink with `k`: it may
/// never grow and must fall below a tenth of its first value within eight
/// blocks past `k_lo` (or by `n`, whichever is later).
fn check_vanishing_bound(edge_eta: &dyn Fn(usize) -> f64, k_lo: usize, n: usize) -> Result<()> {
    let k_hi = n.max(k_lo + 8);
    let bound = |k: usize| edge_eta(k) * 4f64.powi(1 - k as i32);
    let first = bound(k_lo);
    if !first.is_finite() {
        return Err(Error::BoundViolation(format!("infinite at k = {k_lo}")));
    }
    let mut prev = first;
    for k in k_lo + 1..=k_hi {
        let b = bound(k);
        if !b.is_finite() || b > prev * (1.0 + 1e-9) + 1e-300 {
            return Err(Error::BoundViolation(format!(
                "grows from {prev:e} to {b:e} at k = {k}"
            )));
        }
        prev = b;
    }
    if prev > 0.1 * first {
        return Err(Error::BoundViolation(format!(
            "only fell from {first:e} to {prev:e} by k = {k_hi}"
        )));
    }
    Ok(())
}

/// First block whose clustered region has its largest `|d2 log density|`
/// on the edge next to a singular endpoint. Falls back to `n`.
fn find_k_max(func: &StandardizedFunction, left: bool, right: bool, k_lo: usize, n: usize) -> usize {
    for k in k_lo..=n {
        let d = delta(k);
        let lo = if left { d } else { 0.0 };
        let hi = if right { 1.0 - d } else { 1.0 };
        if lo > hi {
            continue;
        }
        if hi - lo <= f64::EPSILON {
            return k;
        }
        let mut best = 0;
        let mut best_val = f64::NEG_INFINITY;
        for i in 0..=KMAX_GRID {
            let x = lo + (hi - lo) * i as f64 / KMAX_GRID as f64;
            let v = func.d2_log_density(x).abs();
            if v > best_val {
                best_val = v;
                best = i;
            }
        }
        if (left && best == 0) || (right && best == KMAX_GRID) {
            return k;
        }
    }
    n
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::FunctionSpec;

    #[test]
    fn k0_table_values() {
        for (eta, k0) in [(2.0, 2), (50.0 / 9.0, 3), (12.5, 4), (200.0 / 9.0, 5)] {
            assert_eq!(compute_k0(eta, 0.05, 8), k0, "eta {eta}");
        }
        assert_eq!(compute_k0(0.0, 0.3, 5), 2);
        assert_eq!(compute_k0(0.75, 0.01, 10), 2);
        assert_eq!(k0_asymptotic(2.0, 0.05), 2);
        assert_eq!(k0_asymptotic(0.0, 0.01), 2);
        // the alternative coefficient starts clustering one block earlier
        assert_eq!(compute_k0_with(200.0 / 9.0, 0.05, 8, K0_COEFF_ALT), 4);
    }

    #[test]
    fn k0_clamps_to_n() {
        assert_eq!(compute_k0(8.0 * std::f64::consts::PI, 1e-6, 4), 4);
        assert_eq!(compute_k0(1.0, 0.5, 1), 1);
    }

    #[test]
    fn midpoint_annotation() {
        let c = ClusterAnnotation::midpoint(&[0.1, 0.5, 0.3, 2.0], vec![3]).unwrap();
        assert!((c.representative - 0.3).abs() < 1e-15);
        assert!((c.spread - 0.2).abs() < 1e-15);
        assert_eq!(c.retained, vec![3]);
        assert!(ClusterAnnotation::midpoint(&[1.0], vec![0]).is_none());
    }

    #[test]
    fn uniform_clustered_equals_exact() {
        let f = StandardizedFunction::amplitude(FunctionSpec::uniform().unwrap());
        let c = plan_theorem1(&f, 5, 0.05).unwrap();
        let e = plan_exact(&f, 5).unwrap();
        for (a, b) in c.blocks.iter().zip(&e.blocks) {
            assert_eq!(a.effective_angles(), b.effective_angles());
        }
        let s = plan_singular(&f, 5, 0.05, None).unwrap();
        assert_eq!(s, c);
    }

    #[test]
    fn eta_too_large() {
        let f = StandardizedFunction::amplitude(FunctionSpec::normal(0.5, 0.2).unwrap());
        assert!(matches!(plan_theorem1(&f, 6, 0.05), Err(Error::EtaTooLarge { .. })));
    }

    #[test]
    fn singular_rejections() {
        let sine = StandardizedFunction::amplitude(FunctionSpec::sine().unwrap());
        assert!(matches!(
            plan_singular(&sine, 6, 0.01, None),
            Err(Error::UnsupportedSingularity(_))
        ));
        let beta = StandardizedFunction::amplitude(FunctionSpec::beta(2.0, 1.0).unwrap());
        assert!(matches!(
            plan_singular(&beta, 6, 0.01, None),
            Err(Error::BoundViolation(_))
        ));
    }

    #[test]
    fn exp_x32_singular_plan() {
        let f = StandardizedFunction::new(FunctionSpec::exp_x32().unwrap(), Encoding::Probability);
        let plan = plan_singular(&f, 10, 0.01, None).unwrap();
        let info = plan.singular.as_ref().unwrap();
        assert_eq!(plan.k0, 2);
        assert!((info.eta_at_k_star - 0.75).abs() < 1e-12);
        for b in &plan.blocks[2..] {
            assert_eq!(b.cluster.as_ref().unwrap().retained, vec![0]);
        }
        assert!(plan.blocks[..2].iter().all(|b| b.cluster.is_none()));
    }

    #[test]
    fn json_round_trip() {
        let f = StandardizedFunction::amplitude(FunctionSpec::normal(0.5, 0.6).unwrap());
        let plan = plan_theorem1(&f, 6, 0.05).unwrap();
        let back = CircuitPlan::from_json(&plan.to_json().unwrap()).unwrap();
        assert_eq!(back, plan);
    }
}
