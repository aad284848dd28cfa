//! Exact Grover-Rudolph rotation angles.
//!
//! Block `k` (1-based) splits each of the `2^(k-1)` dyadic intervals of width
//! `delta_k = 2^(1-k)` in two. Its angle `l` is
//! `2 acos(sqrt(I_left / I_total))`, so every angle lies in `[0, pi]`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functions::StandardizedFunction;
use crate::planner::ClusterAnnotation;
use crate::quadrature::adaptive_simpson;

pub use crate::quadrature::DEFAULT_REL_TOL;

/// Total mass below which an interval is treated as empty.
pub const ZERO_MASS_FLOOR: f64 = 1e-300;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AngleBlock {
    pub k: usize,
    pub angles: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cluster: Option<ClusterAnnotation>,
    /// Intervals whose total mass fell below [`ZERO_MASS_FLOOR`]; their angle
    /// is `pi/2`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub zero_mass_intervals: Vec<usize>,
}

impl AngleBlock {
    /// An unannotated block. Fails unless `angles` has `2^(k-1)` entries.
    pub fn new(k: usize, angles: Vec<f64>) -> Result<Self> {
        if k == 0 || k > 63 {
            return Err(Error::InvalidArgument(format!("block index {k} out of range")));
        }
        if angles.len() != 1 << (k - 1) {
            return Err(Error::InvalidArgument(format!(
                "block {k} needs {} angles, got {}",
                1usize << (k - 1),
                angles.len()
            )));
        }
        Ok(Self {
            k,
            angles,
            cluster: None,
            zero_mass_intervals: Vec::new(),
        })
    }

    pub fn delta(&self) -> f64 {
        delta(self.k)
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    /// The angle actually applied to control pattern `l`.
    pub fn effective(&self, l: usize) -> f64 {
        match &self.cluster {
            Some(c) if c.retained.binary_search(&l).is_err() => c.representative,
            _ => self.angles[l],
        }
    }

    pub fn effective_angles(&self) -> Vec<f64> {
        (0..self.angles.len()).map(|l| self.effective(l)).collect()
    }
}

/// Interval width of block `k` on the standardized domain.
pub fn delta(k: usize) -> f64 {
    0.5f64.powi(k as i32 - 1)
}

fn split_angle(func: &StandardizedFunction, y: f64, delta: f64, quad_tol: f64) -> Option<f64> {
    let density = |x: f64| func.density(x);
    let mid = y + 0.5 * delta;
    let left = adaptive_simpson(&density, y, mid, quad_tol);
    let right = adaptive_simpson(&density, mid, y + delta, quad_tol);
    let total = left + right;
    if !(total.abs() >= ZERO_MASS_FLOOR) {
        return None;
    }
    let ratio = (left / total).clamp(0.0, 1.0);
    Some(2.0 * ratio.sqrt().acos())
}

/// Computes the `2^(k-1)` exact angles of block `k`.
///
/// Intervals with vanishing mass get `pi/2` and are listed in
/// `zero_mass_intervals` with a logged warning.
pub fn block_angles(func: &StandardizedFunction, k: usize, quad_tol: f64) -> Result<AngleBlock> {
    if k == 0 || k > 30 {
        return Err(Error::InvalidArgument(format!("block index {k} out of range")));
    }
    if !(quad_tol > 0.0) {
        return Err(Error::InvalidArgument(format!("quad_tol must be > 0, got {quad_tol}")));
    }
    let m = 1usize << (k - 1);
    let d = delta(k);
    let raw: Vec<Option<f64>> = (0..m)
        .into_par_iter()
        .map(|l| split_angle(func, l as f64 * d, d, quad_tol))
        .collect();
    let mut zero_mass_intervals = Vec::new();
    let angles = raw
        .into_iter()
        .enumerate()
        .map(|(l, a)| {
            a.unwrap_or_else(|| {
                zero_mass_intervals.push(l);
                std::f64::consts::FRAC_PI_2
            })
        })
        .collect();
    if !zero_mass_intervals.is_empty() {
        log::warn!(
            "block {k}: {} zero-mass interval(s), angle set to pi/2",
            zero_mass_intervals.len()
        );
    }
    Ok(AngleBlock {
        k,
        angles,
        cluster: None,
        zero_mass_intervals,
    })
}

/// All blocks `1..=n`.
pub fn all_blocks(func: &StandardizedFunction, n: usize, quad_tol: f64) -> Result<Vec<AngleBlock>> {
    (1..=n).map(|k| block_angles(func, k, quad_tol)).collect()
}

/// The angle for the interval `[y, y + delta]`, defined for any real `y`.
pub fn continuous_theta(func: &StandardizedFunction, y: f64, delta: f64) -> Result<f64> {
    if !(delta > 0.0 && y >= 0.0 && y + delta <= 1.0 + 1e-12) {
        return Err(Error::InvalidArgument(format!(
            "need 0 <= y <= 1 - delta, got y = {y}, delta = {delta}"
        )));
    }
    Ok(split_angle(func, y, delta, DEFAULT_REL_TOL).unwrap_or(std::f64::consts::FRAC_PI_2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::FunctionSpec;
    use crate::quadrature::composite_simpson;
    use std::f64::consts::FRAC_PI_2;

    fn normal(sigma: f64) -> StandardizedFunction {
        StandardizedFunction::amplitude(FunctionSpec::normal(0.5, sigma).unwrap())
    }

    #[test]
    fn uniform_is_balanced() {
        let f = StandardizedFunction::amplitude(FunctionSpec::uniform().unwrap());
        for k in 1..=6 {
            let b = block_angles(&f, k, DEFAULT_REL_TOL).unwrap();
            assert_eq!(b.len(), 1 << (k - 1));
            for a in &b.angles {
                assert!((a - FRAC_PI_2).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn symmetric_first_block() {
        let b = block_angles(&normal(1.0), 1, DEFAULT_REL_TOL).unwrap();
        assert!((b.angles[0] - FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn matches_fixed_panel_oracle() {
        let sigma = 0.3;
        let g = |x: f64| (-(x - 0.5) * (x - 0.5) / (sigma * sigma)).exp();
        let b = block_angles(&normal(sigma), 3, DEFAULT_REL_TOL).unwrap();
        for l in 0..4 {
            let y = l as f64 * 0.25;
            let left = composite_simpson(&g, y, y + 0.125, 1 << 20);
            let total = composite_simpson(&g, y, y + 0.25, 1 << 20);
            let oracle = 2.0 * (left / total).sqrt().acos();
            assert!((b.angles[l] - oracle).abs() < 1e-8, "l={l}");
        }
    }

    #[test]
    fn continuous_matches_blocks() {
        let f = normal(0.4);
        let b = block_angles(&f, 4, DEFAULT_REL_TOL).unwrap();
        let t = continuous_theta(&f, 0.25, 0.125).unwrap();
        assert!((t - b.angles[2]).abs() < 1e-8);
        let d = 0.1;
        let s = continuous_theta(&normal(1.0), 0.5 - d / 2.0, d).unwrap();
        assert!((s - FRAC_PI_2).abs() < 1e-10);
        assert!(continuous_theta(&f, 0.95, 0.1).is_err());
    }

    #[test]
    fn zero_mass_intervals_are_flagged() {
        let spec = FunctionSpec::tabulated(vec![0.0, 0.0, 1.0, 1.0], (0.0, 1.0)).unwrap();
        let f = StandardizedFunction::amplitude(spec);
        let b = block_angles(&f, 3, DEFAULT_REL_TOL).unwrap();
        assert_eq!(b.zero_mass_intervals, vec![0]);
        assert_eq!(b.angles[0], FRAC_PI_2);
    }

    #[test]
    fn schedule_independent() {
        let f = normal(0.4);
        let par = block_angles(&f, 7, DEFAULT_REL_TOL).unwrap();
        let d = delta(7);
        for (l, a) in par.angles.iter().enumerate() {
            let seq = split_angle(&f, l as f64 * d, d, DEFAULT_REL_TOL).unwrap();
            assert_eq!(a.to_bits(), seq.to_bits());
        }
    }
}
