//! Dense real statevector simulation of uniformly controlled `R_y` blocks.
//!
//! Qubit 1 is the most significant bit of the basis index. Block `k` rotates
//! qubit `k` conditioned on the pattern of qubits `1..k`, so for a basis
//! index `i` the control pattern is `i >> (n - k + 1)` and the target bit is
//! bit `n - k`.

use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::angles::AngleBlock;
use crate::error::{Error, Result};
use crate::planner::CircuitPlan;

/// Arrays shorter than this are updated on the calling thread.
const PAR_THRESHOLD: usize = 1 << 14;

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<f64>,
}

impl StateVector {
    /// `|0...0>` on `n` qubits.
    pub fn zero(n: usize) -> Self {
        let mut amps = vec![0.0; 1 << n];
        amps[0] = 1.0;
        Self { n, amps }
    }

    /// Wraps raw amplitudes; the length must be a power of two. No
    /// normalization is applied.
    pub fn from_amplitudes(amps: Vec<f64>) -> Result<Self> {
        let len = amps.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "amplitude count {len} is not a power of two"
            )));
        }
        Ok(Self {
            n: len.trailing_zeros() as usize,
            amps,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<f64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a * a).sum::<f64>().sqrt()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a * a).collect()
    }

    /// Basis label of index `i`, qubit 1 first.
    pub fn bitstring(&self, i: usize) -> String {
        (0..self.n)
            .map(|q| if i >> (self.n - 1 - q) & 1 == 1 { '1' } else { '0' })
            .collect()
    }

    /// Applies one uniformly controlled rotation in place.
    pub fn apply_ucr(&mut self, block: &AngleBlock) -> Result<()> {
        let k = block.k;
        if k == 0 || k > self.n {
            return Err(Error::Index { k, n: self.n });
        }
        if block.angles.len() != 1 << (k - 1) {
            return Err(Error::InvalidArgument(format!(
                "block {k} has {} angles",
                block.angles.len()
            )));
        }
        let half = 1usize << (self.n - k);
        let rotate = |(l, chunk): (usize, &mut [f64])| {
            let (s, c) = (0.5 * block.effective(l)).sin_cos();
            let (zero, one) = chunk.split_at_mut(half);
            for (a0, a1) in zero.iter_mut().zip(one.iter_mut()) {
                let (x, y) = (*a0, *a1);
                *a0 = c * x - s * y;
                *a1 = s * x + c * y;
            }
        };
        if self.amps.len() >= PAR_THRESHOLD {
            self.amps.par_chunks_mut(2 * half).enumerate().for_each(rotate);
        } else {
            self.amps.chunks_mut(2 * half).enumerate().for_each(rotate);
        }
        Ok(())
    }

    /// Writes `index,bitstring,amplitude` rows with a header.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for (i, a) in self.amps.iter().enumerate() {
            w.serialize(CsvRow {
                index: i,
                bitstring: self.bitstring(i),
                amplitude: *a,
            })?;
        }
        w.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_csv(std::io::BufWriter::new(file))
    }

    /// Reads the format written by [`StateVector::write_csv`].
    pub fn load_csv(path: &Path) -> Result<Self> {
        let mut r = csv::Reader::from_path(path)?;
        let mut amps = Vec::new();
        for rec in r.records() {
            let rec = rec?;
            let a = rec
                .get(2)
                .and_then(|s| s.parse::<f64>().ok())
                .ok_or_else(|| Error::Parse {
                    line: amps.len() + 2,
                    msg: "bad amplitude".into(),
                })?;
            amps.push(a);
        }
        Self::from_amplitudes(amps)
    }
}

#[derive(Serialize)]
struct CsvRow {
    index: usize,
    bitstring: String,
    amplitude: f64,
}

/// Functional form of [`StateVector::apply_ucr`].
pub fn apply_ucr(mut state: StateVector, block: &AngleBlock) -> Result<StateVector> {
    state.apply_ucr(block)?;
    Ok(state)
}

/// Applies every block of `plan` in ascending `k` to `|0...0>`.
pub fn run_plan(plan: &CircuitPlan) -> Result<StateVector> {
    run_blocks(plan.n, &plan.blocks)
}

pub fn run_blocks(n: usize, blocks: &[AngleBlock]) -> Result<StateVector> {
    let mut state = StateVector::zero(n);
    for b in blocks {
        state.apply_ucr(b)?;
    }
    Ok(state)
}

/// `<a|b>^2`, clamped to `[0, 1]`.
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    if a.n != b.n {
        return Err(Error::Dimension {
            left: a.n,
            right: b.n,
        });
    }
    let dot: f64 = a.amps.iter().zip(&b.amps).map(|(x, y)| x * y).sum();
    Ok((dot * dot).clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

    fn block(k: usize, angles: &[f64]) -> AngleBlock {
        AngleBlock::new(k, angles.to_vec()).unwrap()
    }

    #[test]
    fn single_qubit() {
        let s = apply_ucr(StateVector::zero(1), &block(1, &[FRAC_PI_2])).unwrap();
        assert!((s.amplitudes()[0] - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((s.amplitudes()[1] - FRAC_1_SQRT_2).abs() < 1e-15);
        let v = StateVector::from_amplitudes(vec![0.6, 0.8]).unwrap();
        assert_eq!(apply_ucr(v.clone(), &block(1, &[0.0])).unwrap(), v);
    }

    /// Dense 8x8 matrix of a block-2 UCR on 3 qubits.
    fn dense_block2(t0: f64, t1: f64) -> [[f64; 8]; 8] {
        let mut m = [[0.0; 8]; 8];
        for i in 0..8 {
            let q1 = i >> 2;
            let q3 = i & 1;
            let th = if q1 == 0 { t0 } else { t1 };
            let (s, c) = (th / 2.0).sin_cos();
            // rows/cols with qubit 2 = 0 and 1
            let i0 = (q1 << 2) | q3;
            let i1 = i0 | 2;
            m[i0][i0] = c;
            m[i0][i1] = -s;
            m[i1][i0] = s;
            m[i1][i1] = c;
        }
        m
    }

    #[test]
    fn block_two_on_three_qubits() {
        let (t0, t1) = (0.7, 2.1);
        let mut amps = vec![0.0; 8];
        amps[0] = FRAC_1_SQRT_2;
        amps[4] = FRAC_1_SQRT_2;
        let s = StateVector::from_amplitudes(amps.clone()).unwrap();
        let out = apply_ucr(s, &block(2, &[t0, t1])).unwrap();
        let m = dense_block2(t0, t1);
        for (row, got) in m.iter().zip(out.amplitudes()) {
            let want: f64 = row.iter().zip(&amps).map(|(a, b)| a * b).sum();
            assert!((got - want).abs() < 1e-15);
        }
        let expect = [
            (0, (t0 / 2.0).cos()),
            (2, (t0 / 2.0).sin()),
            (4, (t1 / 2.0).cos()),
            (6, (t1 / 2.0).sin()),
        ];
        for (i, v) in expect {
            assert!((out.amplitudes()[i] - v * FRAC_1_SQRT_2).abs() < 1e-15);
        }
    }

    #[test]
    fn index_and_dimension_errors() {
        let mut s = StateVector::zero(2);
        assert!(matches!(
            s.apply_ucr(&block(3, &[0.0; 4])),
            Err(Error::Index { k: 3, n: 2 })
        ));
        assert!(matches!(
            fidelity(&StateVector::zero(1), &StateVector::zero(2)),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn fidelity_basics() {
        let a = StateVector::zero(1);
        let b = StateVector::from_amplitudes(vec![0.0, 1.0]).unwrap();
        assert_eq!(fidelity(&a, &a).unwrap(), 1.0);
        assert_eq!(fidelity(&a, &b).unwrap(), 0.0);
    }

    #[test]
    fn csv_round_trip() {
        let s = StateVector::from_amplitudes(vec![0.5, 0.5, 0.5, 0.5]).unwrap();
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("index,bitstring,amplitude\n0,00,0.5\n1,01,0.5"));
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("s.csv");
        s.save_csv(&p).unwrap();
        assert_eq!(StateVector::load_csv(&p).unwrap(), s);
    }
}
