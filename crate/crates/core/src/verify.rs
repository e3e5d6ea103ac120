//! Functional-equivalence checking: the simulated compiled circuit
//! against the reference interpreter, on seeded random states plus an
//! exhaustive basis sweep for small registers.

use crate::compiler::{compile, CompileError, Strategy};
use crate::eval::{run_program, Outcome, StateVector};
use crate::sim::{simulate_with_ancillas, SimError};
use crate::Program;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

pub const DEFAULT_SEED: u64 = 0xC0FFEE;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Compile(#[from] CompileError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("interpreter run failed on a verification input ({0:?})")]
    Run(Outcome),
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub program: String,
    pub n: usize,
    pub strategy: &'static str,
    pub trials: usize,
    pub basis_states: usize,
    pub tolerance: f64,
    pub max_deviation: f64,
    pub max_ancilla_garbage: f64,
    pub wires: usize,
    pub ancillas: usize,
    pub pass: bool,
}

/// Draw a seeded unit vector with independent normal components.
pub fn random_state(n: usize, rng: &mut ChaCha8Rng) -> StateVector {
    let mut amps = Vec::with_capacity(1 << n);
    for _ in 0..(1usize << n) {
        amps.push(Complex64::new(normal(rng), normal(rng)));
    }
    let mut psi = StateVector { n, amps };
    psi.normalize();
    psi
}

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    // Box-Muller on open-interval uniforms
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen::<f64>();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Compare the compiled circuit with the interpreter on `trials` seeded
/// random unit states, plus every basis state when `2^n <= 256`.
pub fn verify_equivalence(
    p: &Program,
    id: &str,
    n: usize,
    strategy: Strategy,
    trials: usize,
    tol: f64,
    seed: u64,
) -> Result<VerifyReport, VerifyError> {
    let out = compile(p, n, strategy)?;
    let mut rng = ChaCha8Rng::seed_from_u64(
        seed ^ (n as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15),
    );
    let mut inputs: Vec<StateVector> = (0..trials).map(|_| random_state(n, &mut rng)).collect();
    let mut basis_states = 0;
    if (1usize << n) <= 256 {
        basis_states = 1 << n;
        inputs.extend((0..basis_states).map(|i| StateVector::basis(n, i)));
    }

    let mut max_deviation: f64 = 0.0;
    let mut max_garbage: f64 = 0.0;
    for input in &inputs {
        let expected = run_program(p, input.clone());
        if expected.outcome != Outcome::Done {
            return Err(VerifyError::Run(expected.outcome));
        }
        let run = simulate_with_ancillas(&out.circuit, input)?;
        max_deviation = max_deviation.max(run.output.max_norm_dist(&expected.state));
        max_garbage = max_garbage.max(run.ancilla_garbage);
    }
    Ok(VerifyReport {
        program: id.to_string(),
        n,
        strategy: strategy.as_str(),
        trials,
        basis_states,
        tolerance: tol,
        max_deviation,
        max_ancilla_garbage: max_garbage,
        wires: out.circuit.wires,
        ancillas: out.circuit.ancillas,
        pass: max_deviation <= tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::load_program;

    #[test]
    fn skip_program_has_zero_deviation() {
        let p = load_program(":: skip;").unwrap();
        for n in 1..=4 {
            let r =
                verify_equivalence(&p, "skip", n, Strategy::Merge, 5, 1e-9, DEFAULT_SEED).unwrap();
            assert_eq!(r.max_deviation, 0.0);
            assert!(r.pass);
        }
    }

    #[test]
    fn random_states_are_unit_and_reproducible() {
        let mut rng1 = ChaCha8Rng::seed_from_u64(7);
        let mut rng2 = ChaCha8Rng::seed_from_u64(7);
        let a = random_state(5, &mut rng1);
        let b = random_state(5, &mut rng2);
        assert!(a.amps.iter().zip(&b.amps).all(|(x, y)| x == y));
        assert!((a.norm() - 1.0).abs() < 1e-12);
    }
}
