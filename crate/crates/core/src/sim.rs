//! Circuit simulation.
//!
//! [`apply_circuit`] is the dense state-vector path over all
//! `wires + ancillas` qubits.  [`simulate_with_ancillas`] feeds an input
//! state on the input register with every ancilla at `|0>` and works on a
//! sparse map keyed by basis components, which keeps circuits with many
//! ancillas tractable: gates targeting ancillas are NOTs, so ancilla bits
//! stay classical per component and the component count never exceeds the
//! input dimension times the splits introduced by H/RY on input wires.

use crate::circuit::{Circuit, Gate};
use crate::eval::StateVector;
use num_complex::Complex64;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SimError {
    #[error("state has {got} qubits but the circuit spans {want} wires")]
    DimensionMismatch { got: usize, want: usize },
    #[error("sparse simulation supports at most 128 wires, circuit has {0}")]
    TooManyWires(usize),
}

/// Apply every gate in order to a dense state over all circuit wires.
pub fn apply_circuit(c: &Circuit, psi: &StateVector) -> Result<StateVector, SimError> {
    let total = c.total_wires();
    if psi.n != total {
        return Err(SimError::DimensionMismatch {
            got: psi.n,
            want: total,
        });
    }
    let mut amps = psi.amps.clone();
    for g in &c.gates {
        apply_gate_dense(&mut amps, total, g);
    }
    Ok(StateVector { n: total, amps })
}

fn apply_gate_dense(amps: &mut [Complex64], n: usize, g: &Gate) {
    let m = g.unitary();
    let tbit = 1usize << (n - g.target as usize);
    let cmask_bits: Vec<(usize, bool)> = g
        .controls
        .iter()
        .map(|(w, p)| (1usize << (n - w as usize), p))
        .collect();
    for i in 0..amps.len() {
        if i & tbit != 0 {
            continue;
        }
        if !cmask_bits
            .iter()
            .all(|(mask, p)| (i & mask != 0) == *p)
        {
            continue;
        }
        let j = i | tbit;
        let a0 = amps[i];
        let a1 = amps[j];
        amps[i] = m[0][0] * a0 + m[0][1] * a1;
        amps[j] = m[1][0] * a0 + m[1][1] * a1;
    }
}

/// Result of simulating a circuit on `input (x) |0...0>`.
#[derive(Debug, Clone)]
pub struct AncillaRun {
    /// State of the input register restricted to components whose
    /// ancillas all returned to `|0>`.
    pub output: StateVector,
    /// Total probability mass left on components with a nonzero ancilla.
    pub ancilla_garbage: f64,
}

/// Simulate `c` on `input` tensored with `|0>` ancillas, projecting the
/// ancilla register out at the end.
pub fn simulate_with_ancillas(c: &Circuit, input: &StateVector) -> Result<AncillaRun, SimError> {
    if input.n != c.wires {
        return Err(SimError::DimensionMismatch {
            got: input.n,
            want: c.wires,
        });
    }
    let total = c.total_wires();
    if total > 128 {
        return Err(SimError::TooManyWires(total));
    }
    let n = c.wires;
    // key bit (w - 1) holds wire w
    let mut state: BTreeMap<u128, Complex64> = BTreeMap::new();
    for (idx, amp) in input.amps.iter().enumerate() {
        if amp.norm_sqr() == 0.0 {
            continue;
        }
        let mut key = 0u128;
        for w in 1..=n {
            if StateVector::wire_bit(n, idx, w as u32) {
                key |= 1 << (w - 1);
            }
        }
        state.insert(key, *amp);
    }

    for g in &c.gates {
        state = apply_gate_sparse(state, g);
    }

    let mut output = StateVector {
        n,
        amps: vec![Complex64::new(0.0, 0.0); 1 << n],
    };
    let mut garbage = 0.0;
    let input_mask: u128 = if n == 128 { u128::MAX } else { (1u128 << n) - 1 };
    for (key, amp) in state {
        if key & !input_mask != 0 {
            garbage += amp.norm_sqr();
            continue;
        }
        let mut idx = 0usize;
        for w in 1..=n {
            if (key >> (w - 1)) & 1 == 1 {
                idx |= 1 << (n - w);
            }
        }
        output.amps[idx] += amp;
    }
    Ok(AncillaRun {
        output,
        ancilla_garbage: garbage,
    })
}

fn apply_gate_sparse(
    state: BTreeMap<u128, Complex64>,
    g: &Gate,
) -> BTreeMap<u128, Complex64> {
    let m = g.unitary();
    let tbit = 1u128 << (g.target - 1);
    let mut out: BTreeMap<u128, Complex64> = BTreeMap::new();
    let mut add = |key: u128, amp: Complex64| {
        if amp.norm_sqr() > 0.0 {
            *out.entry(key).or_insert(Complex64::new(0.0, 0.0)) += amp;
        }
    };
    for (key, amp) in state {
        if !g.controls.matches_key(key) {
            add(key, amp);
            continue;
        }
        let bit = (key >> (g.target - 1)) & 1;
        let col = bit as usize;
        // column `col` of the unitary distributes the amplitude
        add(key & !tbit, m[0][col] * amp);
        add(key | tbit, m[1][col] * amp);
    }
    out
}
