//! Two-qubit gate cost of multi-controlled R_y gates and a check of the
//! decomposition against the ideal unitary.

use qfload::circuits::{decompose_mcr, dense, mcr_tqg_count, Gate};

fn main() {
    for k in 2..=10 {
        let (tqg, method) = mcr_tqg_count(k);
        println!("k = {k:>2}: {tqg:>4} two-qubit gates ({method:?})");
    }

    let (m, theta) = (3, 0.9);
    let list = decompose_mcr(m, theta);
    let ideal = Gate::Mcry {
        controls: (0..m).collect(),
        ctrl_state: vec![true; m],
        t: m,
        theta,
    };
    let err = dense::max_abs_diff(
        &dense::unitary(&list.gates, m + 1),
        &dense::unitary(&[ideal], m + 1),
    );
    println!("{m}-controlled R_y: {} gates, max entry error {err:.1e}", list.len());
}
