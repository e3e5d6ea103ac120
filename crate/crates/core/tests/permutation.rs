//! Controlled-permutation circuits: brute-force basis enumeration against
//! the permutation matrix, and the documented gate/depth bounds.

use pbp_core::controlled_permutation;
use pbp_core::eval::StateVector;
use pbp_core::sim::apply_circuit;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn all_perms(n: usize) -> Vec<Vec<usize>> {
    fn go(rest: &mut Vec<usize>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(cur.clone());
            return;
        }
        for i in 0..rest.len() {
            let v = rest.remove(i);
            cur.push(v);
            go(rest, cur, out);
            cur.pop();
            rest.insert(i, v);
        }
    }
    let mut rest: Vec<usize> = (1..=n).collect();
    let mut out = Vec::new();
    go(&mut rest, &mut Vec::new(), &mut out);
    out
}

/// Where basis index `idx` over `n` data wires plus control plus
/// ancillas should end up.
fn expected_index(
    perm: &[usize],
    n: usize,
    total: usize,
    idx: usize,
    control_set: bool,
    fire_on: bool,
) -> usize {
    let bit = |w: usize| (idx >> (total - w)) & 1;
    let mut out = vec![0usize; total];
    for w in 1..=total {
        out[w - 1] = bit(w);
    }
    if control_set == fire_on {
        for (i, &to) in perm.iter().enumerate() {
            out[to - 1] = bit(i + 1);
        }
    }
    out.iter().fold(0, |acc, b| (acc << 1) | b)
}

fn check_perm(perm: &[usize], polarity: bool) {
    let n = perm.len();
    let control = (n as u32 + 1, polarity);
    let c = controlled_permutation(perm, control).unwrap();
    let total = c.total_wires();
    for control_set in [false, true] {
        for data in 0..(1usize << n) {
            // data on wires 1..=n, control on wire n+1, ancillas zero
            let mut idx = data << (total - n);
            if control_set {
                idx |= 1 << (total - (n + 1));
            }
            let out = apply_circuit(&c, &StateVector::basis(total, idx)).unwrap();
            let want = expected_index(perm, n, total, idx, control_set, polarity);
            let hot: Vec<usize> = out
                .amps
                .iter()
                .enumerate()
                .filter(|(_, a)| a.norm() > 0.5)
                .map(|(i, _)| i)
                .collect();
            assert_eq!(hot, vec![want], "perm {perm:?} pol {polarity} data {data:0n$b}");
            assert!((out.amps[want].re - 1.0).abs() < 1e-12, "exact on basis states");
        }
    }
}

#[test]
fn every_permutation_up_to_four_wires_acts_exactly() {
    for n in 1..=4 {
        for perm in all_perms(n) {
            check_perm(&perm, true);
            check_perm(&perm, false);
        }
    }
}

#[test]
fn five_and_six_wire_permutations_sampled_and_worst_case() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for n in [5usize, 6] {
        let mut perms = all_perms(n);
        perms.shuffle(&mut rng);
        for perm in perms.into_iter().take(40) {
            check_perm(&perm, true);
        }
        // full cycle and reversal
        let cycle: Vec<usize> = (1..=n).map(|i| i % n + 1).collect();
        check_perm(&cycle, true);
        check_perm(&cycle, false);
        let reversal: Vec<usize> = (1..=n).rev().collect();
        check_perm(&reversal, true);
    }
}

#[test]
fn swap_of_two_wires_controls_correctly_up_to_ten() {
    // transposition (1 2) padded to n wires
    for n in 2..=10usize {
        let mut perm: Vec<usize> = (1..=n).collect();
        perm.swap(0, 1);
        let c = controlled_permutation(&perm, (n as u32 + 1, true)).unwrap();
        let total = c.total_wires();
        for data in 0..(1usize << n) {
            for control_set in [false, true] {
                let mut idx = data << (total - n);
                if control_set {
                    idx |= 1 << (total - (n + 1));
                }
                let out = apply_circuit(&c, &StateVector::basis(total, idx)).unwrap();
                let want = expected_index(&perm, n, total, idx, control_set, true);
                assert!((out.amps[want].re - 1.0).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn gate_and_depth_bounds_hold_to_1024_wires() {
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    let sizes: Vec<usize> = (2..=64).chain([128, 256, 512, 1024]).collect();
    for n in sizes {
        let mut worst: Vec<Vec<usize>> = vec![
            (1..=n).map(|i| i % n + 1).collect(), // full cycle
            (1..=n).rev().collect(),              // reversal
        ];
        let mut random: Vec<usize> = (1..=n).collect();
        random.shuffle(&mut rng);
        worst.push(random);
        for perm in worst {
            let c = controlled_permutation(&perm, (n as u32 + 1, true)).unwrap();
            let gates = c.gates.len();
            let depth = c.depth();
            let log = (n as f64).log2().ceil() as usize;
            assert!(gates <= 7 * n, "n={n}: {gates} gates");
            assert!(depth <= 4 * log + 4, "n={n}: depth {depth} > {}", 4 * log + 4);
        }
    }
}
