//! Landscape-tailored variational ansatz.
//!
//! Blocks `1..=k0` are fully parameterized. Every later block keeps its own
//! angle for the intervals at and around each zero or singular point and
//! shares one cluster parameter across all other intervals. Training
//! minimizes `2^-n * sum_i (f_i - psi_i)^2` by plain gradient descent.

mod objective;
mod train;

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::angles::AngleBlock;
use crate::error::{Error, Result};
use crate::functions::{Encoding, FunctionSpec, SlopeKind, SpecialPoint};
use crate::planner::{CircuitPlan, ClusterAnnotation, Provenance};

pub use objective::{gradient, gradient_direct, loss, loss_and_state, state};
pub use train::{init_params, init_params_from_blocks, train, InitMode, TraceEntry, TrainConfig, TrainReport};

/// Neighbours allotted per special point in block `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PSchedule {
    Constant(usize),
    /// `p(k) = k`.
    Linear,
}

impl PSchedule {
    pub fn p(self, k: usize) -> usize {
        match self {
            PSchedule::Constant(p) => p,
            PSchedule::Linear => k,
        }
    }
}

impl FromStr for PSchedule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "k" | "linear" => Ok(PSchedule::Linear),
            _ => match s.parse::<usize>() {
                Ok(p) if p >= 1 => Ok(PSchedule::Constant(p)),
                _ => Err(Error::InvalidArgument(format!(
                    "p schedule must be a positive integer or \"k\", got {s:?}"
                ))),
            },
        }
    }
}

impl std::fmt::Display for PSchedule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PSchedule::Constant(p) => write!(f, "{p}"),
            PSchedule::Linear => f.write_str("k"),
        }
    }
}

/// Parameter layout of one block.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockLayout {
    pub k: usize,
    /// Parameter index driving each of the `2^(k-1)` angles.
    pub param_of: Vec<usize>,
    /// Indices with their own parameter; `None` for a fully parameterized
    /// block.
    pub retained: Option<Vec<usize>>,
    /// The shared cluster parameter, if any.
    pub representative: Option<usize>,
}

impl BlockLayout {
    pub fn is_full(&self) -> bool {
        self.retained.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnsatzSpec {
    pub n: usize,
    pub k0: usize,
    pub p_schedule: PSchedule,
    pub encoding: Encoding,
    /// Special points on `[0, 1]`.
    pub special_points: Vec<(f64, SlopeKind)>,
    pub blocks: Vec<BlockLayout>,
    pub num_params: usize,
}

impl AnsatzSpec {
    /// Angles of every block for a parameter vector.
    pub fn block_angles(&self, params: &[f64]) -> Vec<Vec<f64>> {
        self.blocks
            .iter()
            .map(|b| b.param_of.iter().map(|&p| params[p]).collect())
            .collect()
    }

    fn check(&self, params: &[f64]) -> Result<()> {
        if params.len() != self.num_params {
            return Err(Error::InvalidArgument(format!(
                "ansatz has {} parameters, got {}",
                self.num_params,
                params.len()
            )));
        }
        Ok(())
    }
}

/// Smallest `k0` that leaves room for every special point:
/// `max{k : z + s + 1 >= 2^k}`.
pub fn min_k0(points: usize) -> usize {
    let mut k = 0;
    while points + 1 >= 1 << (k + 1) {
        k += 1;
    }
    k
}

/// Interval indices kept for one special point in a block of `m` angles.
///
/// The base is the interval containing the point, plus the nearer
/// neighbour for opposite-slope points. It then widens by `p - 1` indices,
/// alternating left and right and going one-sided at the domain edges.
fn point_indices(x: f64, kind: SlopeKind, m: usize, p: usize) -> Vec<usize> {
    let pos = x * m as f64;
    let l = (pos.floor().max(0.0) as usize).min(m - 1);
    let mut got = vec![l];
    if kind == SlopeKind::OppositeSlopeSign {
        let nb = if pos - pos.floor() >= 0.5 { l + 1 } else { l.wrapping_sub(1) };
        if nb < m {
            got.push(nb);
        }
    }
    let want = kind.base_angles() + p.saturating_sub(1);
    let mut lo = *got.iter().min().expect("non-empty");
    let mut hi = *got.iter().max().expect("non-empty");
    let mut left_turn = true;
    while got.len() < want && (lo > 0 || hi + 1 < m) {
        if (left_turn && lo > 0) || hi + 1 >= m {
            lo -= 1;
            got.push(lo);
        } else {
            hi += 1;
            got.push(hi);
        }
        left_turn = !left_turn;
    }
    got
}

/// Lays out the ansatz for `spec` on `n` qubits.
///
/// `k0` is raised to [`min_k0`] when smaller. A block after `k0` whose
/// retained set covers all its angles is fully parameterized.
pub fn build_ansatz(
    spec: &FunctionSpec,
    n: usize,
    k0: usize,
    p_schedule: PSchedule,
) -> Result<AnsatzSpec> {
    spec.validate()?;
    let (a, b) = spec.domain;
    let points: Vec<(f64, SlopeKind)> = spec
        .special_points()
        .iter()
        .map(|p: &SpecialPoint| (((p.position - a) / (b - a)).clamp(0.0, 1.0), p.kind))
        .collect();
    build_ansatz_from_points(points, n, k0, p_schedule, Encoding::Amplitude)
}

/// Same as [`build_ansatz`] with explicit standardized points.
pub fn build_ansatz_from_points(
    points: Vec<(f64, SlopeKind)>,
    n: usize,
    k0: usize,
    p_schedule: PSchedule,
    encoding: Encoding,
) -> Result<AnsatzSpec> {
    if n == 0 || n > 30 {
        return Err(Error::InvalidArgument(format!("n must be in 1..=30, got {n}")));
    }
    if k0 == 0 {
        return Err(Error::InvalidArgument("k0 must be >= 1".into()));
    }
    if let Some(&(x, _)) = points.iter().find(|(x, _)| !(0.0..=1.0).contains(x)) {
        return Err(Error::Domain(format!("special point {x} outside [0, 1]")));
    }
    let floor = min_k0(points.len());
    if k0 < floor {
        log::warn!("k0 = {k0} too small for {} special points, using {floor}", points.len());
    }
    let k0 = k0.max(floor).min(n);
    let mut next = 0usize;
    let mut blocks = Vec::with_capacity(n);
    for k in 1..=n {
        let m = 1usize << (k - 1);
        let retained = if k <= k0 {
            None
        } else {
            let mut set: Vec<usize> = points
                .iter()
                .flat_map(|&(x, kind)| point_indices(x, kind, m, p_schedule.p(k)))
                .collect();
            set.sort_unstable();
            set.dedup();
            (set.len() < m).then_some(set)
        };
        let layout = match retained {
            None => {
                let param_of = (next..next + m).collect();
                next += m;
                BlockLayout {
                    k,
                    param_of,
                    retained: None,
                    representative: None,
                }
            }
            Some(set) => {
                let mut param_of = vec![usize::MAX; m];
                for &l in &set {
                    param_of[l] = next;
                    next += 1;
                }
                let rep = next;
                next += 1;
                for slot in param_of.iter_mut().filter(|s| **s == usize::MAX) {
                    *slot = rep;
                }
                BlockLayout {
                    k,
                    param_of,
                    retained: Some(set),
                    representative: Some(rep),
                }
            }
        };
        blocks.push(layout);
    }
    Ok(AnsatzSpec {
        n,
        k0,
        p_schedule,
        encoding,
        special_points: points,
        blocks,
        num_params: next,
    })
}

/// Instantiates the ansatz as an executable plan.
pub fn to_plan(ansatz: &AnsatzSpec, params: &[f64]) -> Result<CircuitPlan> {
    ansatz.check(params)?;
    let blocks = ansatz
        .blocks
        .iter()
        .map(|b| {
            let angles: Vec<f64> = b.param_of.iter().map(|&p| params[p]).collect();
            let cluster = b.representative.map(|r| ClusterAnnotation {
                representative: params[r],
                retained: b.retained.clone().unwrap_or_default(),
                spread: 0.0,
            });
            AngleBlock {
                k: b.k,
                angles,
                cluster,
                zero_mass_intervals: Vec::new(),
            }
        })
        .collect();
    Ok(CircuitPlan {
        n: ansatz.n,
        encoding: ansatz.encoding,
        k0: ansatz.k0,
        provenance: Provenance::Variational,
        eta: None,
        singular: None,
        blocks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs() -> FunctionSpec {
        FunctionSpec::black_scholes(45.0, 3.0).unwrap()
    }

    #[test]
    fn black_scholes_counts() {
        for (p, want) in [
            (PSchedule::Constant(1), 33),
            (PSchedule::Constant(2), 52),
            (PSchedule::Constant(3), 70),
        ] {
            assert_eq!(build_ansatz(&bs(), 12, 2, p).unwrap().num_params, want, "{p}");
        }
        let linear = build_ansatz(&bs(), 12, 2, PSchedule::Linear).unwrap();
        assert_eq!(linear.num_params, 159);
    }

    #[test]
    fn closed_form_count() {
        for n in 3..=12 {
            for p in 1..=4 {
                let a = build_ansatz(&bs(), n, 2, PSchedule::Constant(p)).unwrap();
                let want: usize = 3 + (3..=n).map(|k| (1usize << (k - 1)).min(2 * p + 1)).sum::<usize>();
                assert_eq!(a.num_params, want);
            }
        }
    }

    #[test]
    fn no_points_full_gr() {
        let spec = FunctionSpec::normal(0.5, 1.0).unwrap();
        let a = build_ansatz(&spec, 6, 6, PSchedule::Constant(1)).unwrap();
        assert_eq!(a.num_params, 63);
        assert!(a.blocks.iter().all(BlockLayout::is_full));
        let clustered = build_ansatz(&spec, 6, 2, PSchedule::Constant(1)).unwrap();
        // one shared parameter per block after k0
        assert_eq!(clustered.num_params, 3 + 4);
    }

    #[test]
    fn widening() {
        assert_eq!(point_indices(0.0, SlopeKind::SameSlopeSign, 8, 3), vec![0, 1, 2]);
        assert_eq!(point_indices(1.0, SlopeKind::SameSlopeSign, 8, 3), vec![7, 6, 5]);
        assert_eq!(point_indices(0.5, SlopeKind::SameSlopeSign, 8, 3), vec![4, 3, 5]);
        assert_eq!(point_indices(0.49, SlopeKind::OppositeSlopeSign, 8, 1), vec![3, 4]);
        assert_eq!(point_indices(0.45, SlopeKind::OppositeSlopeSign, 8, 2), vec![3, 4, 2]);
    }

    #[test]
    fn min_k0_rule() {
        assert_eq!(min_k0(0), 0);
        assert_eq!(min_k0(1), 1);
        assert_eq!(min_k0(2), 1);
        assert_eq!(min_k0(3), 2);
        assert_eq!(min_k0(7), 3);
    }

    #[test]
    fn plan_instantiation() {
        let a = build_ansatz(&bs(), 5, 2, PSchedule::Constant(1)).unwrap();
        let params: Vec<f64> = (0..a.num_params).map(|i| 0.1 * i as f64).collect();
        let plan = to_plan(&a, &params).unwrap();
        plan.validate().unwrap();
        assert_eq!(plan.blocks[4].effective_angles(), a.block_angles(&params)[4]);
        assert!(to_plan(&a, &params[1..]).is_err());
    }
}
