//! Interpreter checks against independent classical oracles: a regular
//! language for the pair scanner, integer addition for the adder, an
//! automaton for the substring chain, a counting oracle for the sum
//! programs, and the discrete Fourier transform for QFT.

use num_complex::Complex64;
use pbp_core::analysis::{brute_force_time, time_complexity};
use pbp_core::builtins::{builtin_example, chained_source, sum_source};
use pbp_core::eval::{run_program, Outcome, StateVector};
use pbp_core::verify::random_state;
use pbp_core::{load_program, Program};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn bits_of(n: usize, index: usize) -> Vec<bool> {
    (1..=n as u32)
        .map(|w| StateVector::wire_bit(n, index, w))
        .collect()
}

fn index_of(bits: &[bool]) -> usize {
    bits.iter().fold(0, |acc, b| (acc << 1) | usize::from(*b))
}

fn run_on_basis(p: &Program, n: usize, index: usize) -> usize {
    let r = run_program(p, StateVector::basis(n, index));
    assert_eq!(r.outcome, Outcome::Done);
    let hot: Vec<usize> = r
        .state
        .amps
        .iter()
        .enumerate()
        .filter(|(_, a)| a.norm() > 1e-9)
        .map(|(i, _)| i)
        .collect();
    assert_eq!(hot.len(), 1, "basis input must map to a basis output");
    assert!((r.state.amps[hot[0]].re - 1.0).abs() < 1e-9);
    hot[0]
}

// --- oracles -----------------------------------------------------------------

/// Flip the last bit exactly when the first n-1 bits spell a word of
/// (00|11)*.
fn pairs_oracle(bits: &[bool]) -> Vec<bool> {
    let n = bits.len();
    let prefix = &bits[..n - 1];
    let matches = prefix.len() % 2 == 0 && prefix.chunks(2).all(|p| p[0] == p[1]);
    let mut out = bits.to_vec();
    if matches {
        out[n - 1] = !out[n - 1];
    }
    out
}

/// Ripple adder on |a_m b_m ... a_1 b_1 0^m c_in>; the wire layout makes
/// a_m the least significant pair.
fn add_oracle(bits: &[bool]) -> Vec<bool> {
    let n = bits.len();
    assert_eq!(n % 3, 1);
    let m = n / 3;
    let mut a = 0u64;
    let mut b = 0u64;
    for i in 0..m {
        // pair i (0-based) holds a_{m-i}, weight 2^(m-i-1) reversed: the
        // first scanned pair carries the incoming carry, so it is the
        // low end of the addition
        a |= u64::from(bits[2 * i]) << i;
        b |= u64::from(bits[2 * i + 1]) << i;
    }
    let c_in = u64::from(bits[n - 1]);
    let s = a + b + c_in;
    let mut out = bits.to_vec();
    out[2 * m] = (s >> m) & 1 == 1; // carry out
    for i in 0..m {
        // s_i lands right after the carry, s_1 first; s_1 belongs to the
        // pair scanned last (a_1, b_1), which has weight 2^(m-1)
        out[2 * m + 1 + i] = (s >> (m - 1 - i)) & 1 == 1;
    }
    out
}

/// The chained substring automaton of `chained(k)` as a DFA over the
/// scanned bits; entering the flip state before the scan exhausts flips
/// the final bit.
fn chained_oracle(k: usize, bits: &[bool]) -> Vec<bool> {
    let n = bits.len();
    let mut out = bits.to_vec();
    let mut chain = 0usize; // finished automata
    let mut state = 0u8; // a = 0, b = 1, c = 2, d = 3
    for (pos, &bit) in bits.iter().enumerate() {
        let scanned = pos + 1;
        let advance = match (state, bit) {
            (0, false) => Some(1),
            (0, true) => None,
            (1, false) => Some(2),
            (1, true) => None,
            (2, true) => Some(3),
            (2, false) => None,
            (3, true) => Some(4),
            (3, false) => None,
            _ => unreachable!(),
        };
        match advance {
            Some(4) => {
                if chain + 1 == k {
                    // transition into the flip procedure; it acts on the
                    // remaining sorted set, so the scan must not be over
                    if scanned < n {
                        out[n - 1] = !out[n - 1];
                    }
                    return out;
                }
                chain += 1;
                state = 0;
            }
            Some(s) => state = s,
            None => {}
        }
    }
    out
}

/// Flip the last bit exactly when the first n-1 bits sum to r.
fn sum_oracle(r: usize, bits: &[bool]) -> Vec<bool> {
    let n = bits.len();
    let ones = bits[..n - 1].iter().filter(|b| **b).count();
    let mut out = bits.to_vec();
    if ones == r {
        out[n - 1] = !out[n - 1];
    }
    out
}

fn dft_matrix(dim: usize) -> Vec<Vec<Complex64>> {
    let root = 2.0 * std::f64::consts::PI / dim as f64;
    (0..dim)
        .map(|j| {
            (0..dim)
                .map(|k| Complex64::from_polar(1.0 / (dim as f64).sqrt(), root * (j * k) as f64))
                .collect()
        })
        .collect()
}

// --- tests -------------------------------------------------------------------

/// All basis indices for small n, a seeded sample above that.
fn basis_sweep(n: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let dim = 1usize << n;
    if n <= 10 {
        (0..dim).collect()
    } else {
        (0..256).map(|_| rand::Rng::gen_range(rng, 0..dim)).collect()
    }
}

#[test]
fn pairs_matches_the_regular_language_oracle() {
    let p = builtin_example("pairs").unwrap();
    // the worked examples: |001> -> |000>, |010> -> |010>, |111> -> |110>
    assert_eq!(run_on_basis(&p, 3, 0b001), 0b000);
    assert_eq!(run_on_basis(&p, 3, 0b010), 0b010);
    assert_eq!(run_on_basis(&p, 3, 0b111), 0b110);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in 1..=12 {
        for idx in basis_sweep(n, &mut rng) {
            let got = run_on_basis(&p, n, idx);
            let want = index_of(&pairs_oracle(&bits_of(n, idx)));
            assert_eq!(got, want, "pairs n={n} input {idx:0n$b}");
        }
    }
}

#[test]
fn add_matches_integer_addition() {
    let p = builtin_example("add").unwrap();
    for n in [4usize, 7, 10] {
        for idx in 0..(1usize << n) {
            let bits = bits_of(n, idx);
            // the zero block must be clear for the adder reading
            if bits[2 * (n / 3)..n - 1].iter().any(|b| *b) {
                continue;
            }
            let got = run_on_basis(&p, n, idx);
            let want = index_of(&add_oracle(&bits));
            assert_eq!(got, want, "add n={n} input {idx:0n$b}");
        }
    }
}

#[test]
fn chained_matches_its_automaton() {
    for k in 1..=2 {
        let p = builtin_example(&format!("chained({k})")).unwrap();
        for n in 1..=10 {
            for idx in 0..(1usize << n) {
                let got = run_on_basis(&p, n, idx);
                let want = index_of(&chained_oracle(k, &bits_of(n, idx)));
                assert_eq!(got, want, "chained({k}) n={n} input {idx:0n$b}");
            }
        }
    }
}

#[test]
fn sum_matches_the_counting_oracle() {
    for r in 1..=3 {
        let p = builtin_example(&format!("sum({r})")).unwrap();
        for n in 1..=10 {
            for idx in 0..(1usize << n) {
                let got = run_on_basis(&p, n, idx);
                let want = index_of(&sum_oracle(r, &bits_of(n, idx)));
                assert_eq!(got, want, "sum({r}) n={n} input {idx:0n$b}");
            }
        }
    }
}

#[test]
fn qft_is_the_discrete_fourier_transform() {
    let p = builtin_example("qft").unwrap();
    // |00> goes to the uniform superposition
    let r = run_program(&p, StateVector::basis(2, 0));
    assert_eq!(r.outcome, Outcome::Done);
    for a in &r.state.amps {
        assert!((a - Complex64::new(0.5, 0.0)).norm() < 1e-9);
    }
    // full unitary equals the DFT, with the natural wire order
    for n in 1..=6 {
        let dim = 1usize << n;
        let dft = dft_matrix(dim);
        for j in 0..dim {
            let r = run_program(&p, StateVector::basis(n, j));
            assert_eq!(r.outcome, Outcome::Done);
            for k in 0..dim {
                assert!(
                    (r.state.amps[k] - dft[k][j]).norm() < 1e-9,
                    "qft n={n} column {j} row {k}"
                );
            }
        }
    }
}

#[test]
fn norm_is_preserved_on_random_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for id in ["pairs", "qft", "rec", "sum(2)", "chained(1)", "cascade", "route"] {
        let p = builtin_example(id).unwrap();
        for n in 3..=8 {
            let psi = random_state(n, &mut rng);
            let r = run_program(&p, psi);
            assert_eq!(r.outcome, Outcome::Done);
            assert!(
                (r.state.norm() - 1.0).abs() <= 1e-9,
                "{id} n={n} norm {}",
                r.state.norm()
            );
        }
    }
}

#[test]
fn runs_are_linear_in_the_input() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for id in ["pairs", "qft", "rec", "sum(3)"] {
        let p = builtin_example(id).unwrap();
        for n in 2..=8usize {
            for _ in 0..5 {
                let dim = 1usize << n;
                let i = rand::Rng::gen_range(&mut rng, 0..dim);
                let j = (i + 1 + rand::Rng::gen_range(&mut rng, 0..dim - 1)) % dim;
                let theta: f64 = rand::Rng::gen_range(&mut rng, 0.0..std::f64::consts::PI / 2.0);
                let phi: f64 = rand::Rng::gen_range(&mut rng, 0.0..2.0 * std::f64::consts::PI);
                let alpha = Complex64::new(theta.cos(), 0.0);
                let beta = Complex64::from_polar(theta.sin(), phi);
                let mut mixed = StateVector::basis(n, i);
                mixed.amps[i] = alpha;
                mixed.amps[j] = beta;
                let out_mixed = run_program(&p, mixed);
                let out_i = run_program(&p, StateVector::basis(n, i));
                let out_j = run_program(&p, StateVector::basis(n, j));
                assert_eq!(out_mixed.outcome, Outcome::Done);
                let recombined: Vec<Complex64> = out_i
                    .state
                    .amps
                    .iter()
                    .zip(&out_j.state.amps)
                    .map(|(x, y)| alpha * x + beta * y)
                    .collect();
                let dev = out_mixed
                    .state
                    .amps
                    .iter()
                    .zip(&recombined)
                    .map(|(a, b)| (a - b).norm())
                    .fold(0.0, f64::max);
                assert!(dev <= 1e-9, "{id} n={n} linearity deviation {dev}");
            }
        }
    }
}

#[test]
fn error_results_return_the_failing_judgment_input() {
    // the whole program errors immediately: the reported state is the
    // input, amplitude for amplitude
    let p = load_program(":: qs[5] *= NOT;").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let input = random_state(2, &mut rng);
    let r = run_program(&p, input.clone());
    assert_eq!(r.outcome, Outcome::Error);
    assert!(r.state.amps.iter().zip(&input.amps).all(|(a, b)| a == b));
}

#[test]
fn time_closed_forms_for_pairs_and_add() {
    let pairs = builtin_example("pairs").unwrap();
    for n in 1..=64 {
        assert_eq!(
            time_complexity(&pairs, n).unwrap(),
            (n / 2 + 1) as u64,
            "pairs n={n}"
        );
    }
    let add = builtin_example("add").unwrap();
    for m in 1..=21 {
        let n = 3 * m + 1;
        assert_eq!(
            time_complexity(&add, n).unwrap(),
            (n / 3 + 1) as u64,
            "add n={n}"
        );
    }
}

#[test]
fn sum_and_chained_time_is_linear_with_the_terminal_call() {
    // The scan performs one call per qubit plus the terminating call
    // (a nil call or the flip procedure), giving n + 1 in total.
    for id in ["sum(3)", "chained(1)", "chained(2)"] {
        let p = builtin_example(id).unwrap();
        for n in 1..=64 {
            assert_eq!(time_complexity(&p, n).unwrap(), n as u64 + 1, "{id} n={n}");
        }
    }
}

#[test]
fn symbolic_time_agrees_with_brute_force() {
    for id in ["pairs", "qft", "rec", "add", "sum(2)", "chained(1)", "cascade"] {
        let p = builtin_example(id).unwrap();
        for n in pbp_core::builtins::valid_sizes(id, 1..=10) {
            assert_eq!(
                time_complexity(&p, n).unwrap(),
                brute_force_time(&p, n).unwrap(),
                "{id} n={n}"
            );
        }
    }
}

#[test]
fn generated_sources_match_their_schemata() {
    // spot-check the generators stay parseable as k and r grow
    for k in 1..=4 {
        load_program(&chained_source(k)).unwrap();
    }
    for r in 1..=5 {
        load_program(&sum_source(r)).unwrap();
    }
}
