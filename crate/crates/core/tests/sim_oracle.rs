//! Simulator oracle: for small circuits, build each gate's full-space
//! unitary densely (Kronecker products plus control projectors) and check
//! the fast simulators against the matrix product.

use num_complex::Complex64;
use pbp_core::ast::GateName;
use pbp_core::builtins::builtin_example;
use pbp_core::circuit::{ControlStructure, Gate};
use pbp_core::compiler::{compile, Strategy};
use pbp_core::eval::StateVector;
use pbp_core::sim::{apply_circuit, simulate_with_ancillas};
use pbp_core::Circuit;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Matrix = Vec<Vec<Complex64>>;

fn zeros(dim: usize) -> Matrix {
    vec![vec![Complex64::new(0.0, 0.0); dim]; dim]
}

/// Dense full-space unitary of one controlled gate over `n` wires:
/// sum over all basis columns, copying or transforming as the controls
/// dictate.
fn gate_full_matrix(g: &Gate, n: usize) -> Matrix {
    let dim = 1usize << n;
    let u = g.unitary();
    let mut m = zeros(dim);
    for col in 0..dim {
        let fires = g
            .controls
            .iter()
            .all(|(w, p)| StateVector::wire_bit(n, col, w) == p);
        if !fires {
            m[col][col] = Complex64::new(1.0, 0.0);
            continue;
        }
        let bit = 1usize << (n - g.target as usize);
        let b = usize::from(col & bit != 0);
        let base = col & !bit;
        m[base][col] += u[0][b];
        m[base | bit][col] += u[1][b];
    }
    m
}

fn mat_vec(m: &Matrix, v: &[Complex64]) -> Vec<Complex64> {
    (0..m.len())
        .map(|r| (0..m.len()).map(|c| m[r][c] * v[c]).sum())
        .collect()
}

fn oracle_apply(c: &Circuit, psi: &StateVector) -> StateVector {
    let mut v = psi.amps.clone();
    for g in &c.gates {
        let m = gate_full_matrix(g, c.total_wires());
        v = mat_vec(&m, &v);
    }
    StateVector {
        n: psi.n,
        amps: v,
    }
}

fn random_circuit(total: usize, gates: usize, rng: &mut ChaCha8Rng) -> Circuit {
    let mut c = Circuit::new(total);
    for _ in 0..gates {
        let target = rng.gen_range(1..=total as u32);
        let mut cs = ControlStructure::empty();
        for w in 1..=total as u32 {
            if w != target && rng.gen_bool(0.3) {
                cs = cs.with(w, rng.gen_bool(0.5));
            }
        }
        let kind = match rng.gen_range(0..4) {
            0 => GateName::Not,
            1 => GateName::H,
            2 => GateName::Ph,
            _ => GateName::Ry,
        };
        let theta = kind
            .takes_phase()
            .then(|| rng.gen_range(0.0..2.0 * std::f64::consts::PI));
        c.push(Gate::new(kind, theta, target, cs));
    }
    c
}

#[test]
fn dense_simulator_matches_the_matrix_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for total in 1..=6 {
        for _ in 0..8 {
            let c = random_circuit(total, 12, &mut rng);
            let psi = pbp_core::verify::random_state(total, &mut rng);
            let fast = apply_circuit(&c, &psi).unwrap();
            let slow = oracle_apply(&c, &psi);
            let dev = fast.max_norm_dist(&slow);
            assert!(dev <= 1e-9, "total={total} deviation {dev}");
            assert!((fast.norm() - 1.0).abs() <= 1e-9, "norm preserved");
        }
    }
}

#[test]
fn sparse_simulator_matches_the_matrix_oracle_with_ancillas() {
    // compiled circuits with n + m <= 6: pairs at n = 4 has two ancillas
    let p = builtin_example("pairs").unwrap();
    let out = compile(&p, 4, Strategy::Merge).unwrap();
    let total = out.circuit.total_wires();
    assert!(total <= 6, "pick a circuit the oracle can afford");
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    for _ in 0..10 {
        let input = pbp_core::verify::random_state(4, &mut rng);
        // oracle works on the full space: input tensor |0..0>
        let mut full = StateVector::zero(total);
        for (i, amp) in input.amps.iter().enumerate() {
            full.amps[i << (total - 4)] = *amp;
        }
        let slow = oracle_apply(&out.circuit, &full);
        let fast = simulate_with_ancillas(&out.circuit, &input).unwrap();
        // fast projects ancillas; the oracle keeps them; compare on the
        // zero-ancilla block
        for idx in 0..(1usize << 4) {
            let dev = (fast.output.amps[idx] - slow.amps[idx << (total - 4)]).norm();
            assert!(dev <= 1e-9, "idx={idx} dev={dev}");
        }
    }
}

#[test]
fn sparse_and_dense_agree_on_random_circuits() {
    let mut rng = ChaCha8Rng::seed_from_u64(47);
    for total in 1..=6usize {
        for _ in 0..6 {
            let c = random_circuit(total, 10, &mut rng);
            let psi = pbp_core::verify::random_state(total, &mut rng);
            let dense = apply_circuit(&c, &psi).unwrap();
            let sparse = simulate_with_ancillas(&c, &psi).unwrap();
            assert!(sparse.ancilla_garbage == 0.0);
            assert!(dense.max_norm_dist(&sparse.output) <= 1e-9);
        }
    }
}
