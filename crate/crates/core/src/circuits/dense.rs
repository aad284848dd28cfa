//! Small dense complex simulator for checking decompositions.
//!
//! Exponential in the qubit count; intended for `n <= 10`.

use num_complex::Complex64;

use super::{Gate, GateList};

type Mat2 = [[Complex64; 2]; 2];

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn ry(theta: f64) -> Mat2 {
    let (s, co) = (0.5 * theta).sin_cos();
    [[c(co, 0.0), c(-s, 0.0)], [c(s, 0.0), c(co, 0.0)]]
}

const X: Mat2 = [
    [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
    [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
];

/// `V = ((1 - i)/2)(I + iX)`, so `V^2 = X`.
fn v() -> Mat2 {
    let p = c(0.5, -0.5);
    [[p, p * c(0.0, 1.0)], [p * c(0.0, 1.0), p]]
}

fn vdg() -> Mat2 {
    let m = v();
    [[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]]
}

/// Applies `u` on `t` when every control matches its state.
fn apply_controlled(state: &mut [Complex64], n: usize, controls: &[(usize, bool)], t: usize, u: &Mat2) {
    let bit = |q: usize| 1usize << (n - 1 - q);
    let tb = bit(t);
    for i in 0..state.len() {
        if i & tb != 0 {
            continue;
        }
        if controls.iter().any(|&(q, on)| (i & bit(q) != 0) != on) {
            continue;
        }
        let (a0, a1) = (state[i], state[i | tb]);
        state[i] = u[0][0] * a0 + u[0][1] * a1;
        state[i | tb] = u[1][0] * a0 + u[1][1] * a1;
    }
}

pub fn apply_gate(state: &mut [Complex64], n: usize, g: &Gate) {
    match g {
        Gate::X { q } => apply_controlled(state, n, &[], *q, &X),
        Gate::Ry { q, theta } => apply_controlled(state, n, &[], *q, &ry(*theta)),
        Gate::Cx { c, t } => apply_controlled(state, n, &[(*c, true)], *t, &X),
        Gate::Cry { c, t, theta } => apply_controlled(state, n, &[(*c, true)], *t, &ry(*theta)),
        Gate::Cv { c, t } => apply_controlled(state, n, &[(*c, true)], *t, &v()),
        Gate::Cvdg { c, t } => apply_controlled(state, n, &[(*c, true)], *t, &vdg()),
        Gate::Toffoli { c1, c2, t } => {
            apply_controlled(state, n, &[(*c1, true), (*c2, true)], *t, &X)
        }
        Gate::Mcx { controls, t } => {
            let cs: Vec<_> = controls.iter().map(|&q| (q, true)).collect();
            apply_controlled(state, n, &cs, *t, &X)
        }
        Gate::Mcry {
            controls,
            ctrl_state,
            t,
            theta,
        } => {
            let cs: Vec<_> = controls.iter().copied().zip(ctrl_state.iter().copied()).collect();
            apply_controlled(state, n, &cs, *t, &ry(*theta))
        }
    }
}

/// Column `j` is the image of basis state `j`.
pub fn unitary(gates: &[Gate], n: usize) -> Vec<Vec<Complex64>> {
    let dim = 1 << n;
    (0..dim)
        .map(|j| {
            let mut col = vec![c(0.0, 0.0); dim];
            col[j] = c(1.0, 0.0);
            for g in gates {
                apply_gate(&mut col, n, g);
            }
            col
        })
        .collect()
}

/// Largest entrywise difference between two unitaries from [`unitary`].
pub fn max_abs_diff(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(x, y)| x.iter().zip(y).map(|(p, q)| (p - q).norm()))
        .fold(0.0, f64::max)
}

/// Runs a gate list on `|0...0>` and returns the real parts.
pub fn simulate_real(list: &GateList, n: usize) -> Vec<f64> {
    let mut state = vec![c(0.0, 0.0); 1 << n];
    state[0] = c(1.0, 0.0);
    for g in &list.gates {
        apply_gate(&mut state, n, g);
    }
    state.iter().map(|z| z.re).collect()
}
