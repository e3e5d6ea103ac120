//! Log-depth controlled permutations.
//!
//! A permutation is split into two rounds of disjoint transpositions.  The
//! control is fanned out to one ancilla copy per transposition through a
//! CNOT tree of logarithmic depth, each transposition becomes a controlled
//! swap whose middle gate is conditioned on its private copy, and the
//! fan-out is uncomputed.  The identity permutation produces no gates.
//!
//! Documented bounds, asserted by the test suite: at most `7n` gates and
//! depth at most `4*ceil(log2 n) + 4` for permutations on `n >= 2` wires.

use crate::circuit::{Circuit, ControlStructure, Gate};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PermError {
    #[error("not a permutation of 1..={n}: {msg}")]
    NotBijective { n: usize, msg: String },
    #[error("control wire {wire} lies inside the permuted register 1..={n}")]
    ControlInRegister { wire: u32, n: usize },
}

/// Split a permutation (given as value movements `from -> to`) into two
/// rounds of pairwise-disjoint transpositions; applying round 0 then
/// round 1 as swaps realizes the permutation.
pub(crate) fn two_round_transpositions(moves: &BTreeMap<u32, u32>) -> [Vec<(u32, u32)>; 2] {
    let mut seen: BTreeMap<u32, bool> = moves.keys().map(|&k| (k, false)).collect();
    let mut round_a = Vec::new();
    let mut round_b = Vec::new();
    for &start in moves.keys() {
        if seen[&start] {
            continue;
        }
        // collect the cycle containing `start` in movement order
        let mut cycle = vec![start];
        seen.insert(start, true);
        let mut cur = moves[&start];
        while cur != start {
            cycle.push(cur);
            seen.insert(cur, true);
            cur = moves[&cur];
        }
        let m = cycle.len();
        if m < 2 {
            continue;
        }
        // reversal around c_1 composed after reversal of the whole cycle
        for i in 1..=m / 2 {
            let (a, b) = (cycle[i - 1], cycle[m - i]);
            if a != b {
                round_a.push((a.min(b), a.max(b)));
            }
        }
        for i in 2..=(m + 1) / 2 {
            let (a, b) = (cycle[i - 1], cycle[m + 1 - i]);
            if a != b {
                round_b.push((a.min(b), a.max(b)));
            }
        }
    }
    [round_a, round_b]
}

/// Emit the gates of a permutation of wire values controlled on
/// `(control_wire, polarity)`.  `alloc` must hand out fresh ancilla wires.
/// Gates are appended to `out`; the block is its own inverse when read
/// backwards.
pub(crate) fn emit_controlled_permutation(
    out: &mut Vec<Gate>,
    moves: &BTreeMap<u32, u32>,
    control: (u32, bool),
    mut alloc: impl FnMut() -> u32,
) {
    let rounds = two_round_transpositions(moves);
    let k = rounds[0].len() + rounds[1].len();
    if k == 0 {
        return;
    }
    let copies: Vec<u32> = (0..k).map(|_| alloc()).collect();

    // fan the control out: root copy, then a doubling CNOT tree
    out.push(Gate::not(
        copies[0],
        ControlStructure::single(control.0, control.1),
    ));
    let mut tree = Vec::new();
    let mut have = 1;
    while have < k {
        let step = have.min(k - have);
        for i in 0..step {
            tree.push(Gate::not(
                copies[have + i],
                ControlStructure::single(copies[i], true),
            ));
        }
        have += step;
    }
    out.extend(tree.iter().cloned());

    let mut copy_iter = copies.iter();
    for round in &rounds {
        for &(a, b) in round {
            let copy = *copy_iter.next().expect("one copy per transposition");
            out.push(Gate::not(a, ControlStructure::single(b, true)));
            out.push(Gate::not(
                b,
                ControlStructure::empty().with(copy, true).with(a, true),
            ));
            out.push(Gate::not(a, ControlStructure::single(b, true)));
        }
    }

    // uncompute the fan-out
    out.extend(tree.into_iter().rev());
    out.push(Gate::not(
        copies[0],
        ControlStructure::single(control.0, control.1),
    ));
}

/// Build a circuit performing `perm` on wires `1..=n` when the control
/// wire holds `polarity`, and the identity otherwise.  `perm[i - 1]` is
/// the wire that receives the value of wire `i`.  The control must lie
/// outside the register; ancillas are appended after it.
pub fn controlled_permutation(perm: &[usize], control: (u32, bool)) -> Result<Circuit, PermError> {
    let n = perm.len();
    let mut sorted: Vec<usize> = perm.to_vec();
    sorted.sort_unstable();
    if sorted != (1..=n).collect::<Vec<_>>() {
        return Err(PermError::NotBijective {
            n,
            msg: format!("image {perm:?}"),
        });
    }
    let (cw, pol) = control;
    if cw as usize <= n {
        return Err(PermError::ControlInRegister { wire: cw, n });
    }
    let inputs = (cw as usize).max(n);
    let mut circuit = Circuit::new(inputs);
    let moves: BTreeMap<u32, u32> = perm
        .iter()
        .enumerate()
        .filter(|(i, &to)| *i + 1 != to)
        .map(|(i, &to)| (i as u32 + 1, to as u32))
        .collect();
    let mut next = inputs as u32;
    let mut gates = Vec::new();
    emit_controlled_permutation(&mut gates, &moves, (cw, pol), || {
        next += 1;
        next
    });
    circuit.ancillas = next as usize - inputs;
    for g in gates {
        circuit.push(g);
    }
    Ok(circuit)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn apply_moves(moves: &BTreeMap<u32, u32>, bits: &mut [bool]) {
        let orig = bits.to_vec();
        for (&from, &to) in moves {
            bits[to as usize - 1] = orig[from as usize - 1];
        }
    }

    pub(crate) fn all_perms(n: u32) -> Vec<Vec<u32>> {
        fn go(rest: &mut Vec<u32>, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
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
        let mut rest: Vec<u32> = (1..=n).collect();
        let mut out = Vec::new();
        go(&mut rest, &mut Vec::new(), &mut out);
        out
    }

    #[test]
    fn two_rounds_realize_every_permutation_of_five() {
        // exhaustive over S_5 as sequences of swaps on classical bits
        let n = 5u32;
        for p in all_perms(n) {
            let moves: BTreeMap<u32, u32> = (1..=n)
                .zip(p.iter().copied())
                .filter(|(a, b)| a != b)
                .collect();
            let rounds = two_round_transpositions(&moves);
            for round in &rounds {
                let mut used = std::collections::HashSet::new();
                for &(a, b) in round {
                    assert!(used.insert(a) && used.insert(b), "round not disjoint");
                }
            }
            // start from a distinguishable classical word and check movement
            for probe in 0..n {
                let mut bits: Vec<bool> = (0..n).map(|i| i == probe).collect();
                for round in &rounds {
                    for &(a, b) in round {
                        bits.swap(a as usize - 1, b as usize - 1);
                    }
                }
                let mut expect: Vec<bool> = (0..n).map(|i| i == probe).collect();
                apply_moves(&moves, &mut expect);
                assert_eq!(bits, expect, "perm {p:?} probe {probe}");
            }
        }
    }

    #[test]
    fn identity_permutation_has_no_gates() {
        let c = controlled_permutation(&[1, 2, 3], (4, true)).unwrap();
        assert!(c.gates.is_empty());
        assert_eq!(c.ancillas, 0);
    }

    #[test]
    fn rejects_non_bijections_and_inner_controls() {
        assert!(controlled_permutation(&[1, 1, 3], (4, true)).is_err());
        assert!(controlled_permutation(&[2, 1], (2, true)).is_err());
    }
}
