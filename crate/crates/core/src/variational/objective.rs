//! Loss and its gradient.
//!
//! Starting from `|0...0>`, every amplitude of the ansatz state is a product
//! of one `cos(theta/2)` or `sin(theta/2)` factor per block, picked by the
//! bits of its index. Differentiating one factor therefore rescales the
//! amplitudes below it by `-tan(theta/2)/2` (bit 0) or `cot(theta/2)/2`
//! (bit 1).

use super::AnsatzSpec;
use crate::error::{Error, Result};
use crate::simulator::StateVector;

/// Factors closer to zero than this switch to the division-free route.
const SINGULAR_GUARD: f64 = 1e-9;

fn check_target(ansatz: &AnsatzSpec, target: &StateVector) -> Result<()> {
    if target.n() != ansatz.n {
        return Err(Error::Dimension {
            left: ansatz.n,
            right: target.n(),
        });
    }
    Ok(())
}

fn run(ansatz: &AnsatzSpec, params: &[f64]) -> Vec<f64> {
    let n = ansatz.n;
    let mut psi = vec![0.0; 1 << n];
    psi[0] = 1.0;
    for b in &ansatz.blocks {
        let half = 1usize << (n - b.k);
        for (chunk, &p) in psi.chunks_mut(2 * half).zip(&b.param_of) {
            let (s, c) = (0.5 * params[p]).sin_cos();
            let (zero, one) = chunk.split_at_mut(half);
            for (a0, a1) in zero.iter_mut().zip(one.iter_mut()) {
                let (x, y) = (*a0, *a1);
                *a0 = c * x - s * y;
                *a1 = s * x + c * y;
            }
        }
    }
    psi
}

/// The ansatz state for `params`.
pub fn state(ansatz: &AnsatzSpec, params: &[f64]) -> Result<StateVector> {
    ansatz.check(params)?;
    StateVector::from_amplitudes(run(ansatz, params))
}

fn mse(psi: &[f64], target: &[f64]) -> f64 {
    let sum: f64 = psi.iter().zip(target).map(|(p, f)| (f - p) * (f - p)).sum();
    sum / psi.len() as f64
}

/// `2^-n * sum_i (f_i - psi_i)^2`.
pub fn loss(params: &[f64], target: &StateVector, ansatz: &AnsatzSpec) -> Result<f64> {
    Ok(loss_and_state(params, target, ansatz)?.0)
}

pub fn loss_and_state(
    params: &[f64],
    target: &StateVector,
    ansatz: &AnsatzSpec,
) -> Result<(f64, StateVector)> {
    ansatz.check(params)?;
    check_target(ansatz, target)?;
    let psi = run(ansatz, params);
    let l = mse(&psi, target.amplitudes());
    Ok((l, StateVector::from_amplitudes(psi)?))
}

/// Analytic gradient through the tan/cot rescaling.
///
/// Angles whose sine or cosine half-factor vanishes take their derivative
/// from [`gradient_direct`] instead, so no division by zero ever happens.
pub fn gradient(params: &[f64], target: &StateVector, ansatz: &AnsatzSpec) -> Result<Vec<f64>> {
    ansatz.check(params)?;
    check_target(ansatz, target)?;
    let n = ansatz.n;
    let psi = run(ansatz, params);
    let scale = 2.0 / psi.len() as f64;
    // sums[k] holds the residual-weighted sums over the 2^k dyadic ranges of
    // width 2^(n-k)
    let mut sums: Vec<Vec<f64>> = vec![Vec::new(); n + 1];
    sums[n] = psi
        .iter()
        .zip(target.amplitudes())
        .map(|(p, f)| scale * (p - f) * p)
        .collect();
    for k in (0..n).rev() {
        sums[k] = sums[k + 1].chunks(2).map(|c| c[0] + c[1]).collect();
    }
    let mut grad = vec![0.0; params.len()];
    let mut direct: Option<Vec<Vec<f64>>> = None;
    for b in &ansatz.blocks {
        let level = &sums[b.k];
        for (j, &p) in b.param_of.iter().enumerate() {
            let (s, c) = (0.5 * params[p]).sin_cos();
            let g = if s.abs() < SINGULAR_GUARD || c.abs() < SINGULAR_GUARD {
                let per_angle = direct.get_or_insert_with(|| angle_gradients(ansatz, params, target));
                per_angle[b.k - 1][j]
            } else {
                -0.5 * (s / c) * level[2 * j] + 0.5 * (c / s) * level[2 * j + 1]
            };
            grad[p] += g;
        }
    }
    Ok(grad)
}

/// Gradient by reverse-mode differentiation through the blocks; uses no
/// divisions.
pub fn gradient_direct(
    params: &[f64],
    target: &StateVector,
    ansatz: &AnsatzSpec,
) -> Result<Vec<f64>> {
    ansatz.check(params)?;
    check_target(ansatz, target)?;
    let per_angle = angle_gradients(ansatz, params, target);
    let mut grad = vec![0.0; params.len()];
    for (b, g) in ansatz.blocks.iter().zip(&per_angle) {
        for (&p, v) in b.param_of.iter().zip(g) {
            grad[p] += v;
        }
    }
    Ok(grad)
}

/// Derivative of the loss with respect to every individual block angle.
fn angle_gradients(ansatz: &AnsatzSpec, params: &[f64], target: &StateVector) -> Vec<Vec<f64>> {
    let n = ansatz.n;
    let mut st = run(ansatz, params);
    let scale = 2.0 / st.len() as f64;
    let mut lam: Vec<f64> = st
        .iter()
        .zip(target.amplitudes())
        .map(|(p, f)| scale * (p - f))
        .collect();
    let mut out = vec![Vec::new(); ansatz.blocks.len()];
    for b in ansatz.blocks.iter().rev() {
        let half = 1usize << (n - b.k);
        let mut g = Vec::with_capacity(b.param_of.len());
        for ((sc, lc), &p) in st
            .chunks_mut(2 * half)
            .zip(lam.chunks_mut(2 * half))
            .zip(&b.param_of)
        {
            let (s, c) = (0.5 * params[p]).sin_cos();
            let (s0, s1) = sc.split_at_mut(half);
            let (l0, l1) = lc.split_at_mut(half);
            let mut acc = 0.0;
            for i in 0..half {
                // state before this block
                let b0 = c * s0[i] + s * s1[i];
                let b1 = -s * s0[i] + c * s1[i];
                let d0 = 0.5 * (-s * b0 - c * b1);
                let d1 = 0.5 * (c * b0 - s * b1);
                acc += l0[i] * d0 + l1[i] * d1;
                s0[i] = b0;
                s1[i] = b1;
                let (m0, m1) = (l0[i], l1[i]);
                l0[i] = c * m0 + s * m1;
                l1[i] = -s * m0 + c * m1;
            }
            g.push(acc);
        }
        out[b.k - 1] = g;
    }
    out
}
