//! Reference semantics: expression evaluation and big-step statement
//! execution over explicit state vectors, with the procedure-call counter.
//!
//! Wire 1 is the leftmost tensor factor, i.e. the most significant bit of
//! a basis-state index, so the bitstring `011` is the basis state with
//! index `0b011`.

use crate::ast::*;
use crate::circuit::gate_matrix;
use num_complex::Complex64;
use std::collections::BTreeSet;

/// Set of accessible wire indices.
pub type WireSet = BTreeSet<u32>;

/// Ordered list of distinct wire indices; `[]` doubles as the error value
/// for sorted sets.
pub type PointerList = Vec<u32>;

/// Evaluate an integer expression under pointer list `l`.
pub fn eval_int(e: &IntExpr, l: &[u32]) -> i64 {
    match e {
        IntExpr::Lit(n) => *n,
        IntExpr::Shift(base, n) => eval_int(base, l).saturating_add(*n),
        IntExpr::Size(s) => eval_set(s, l).len() as i64,
    }
}

/// Evaluate a boolean expression under pointer list `l`.
pub fn eval_bool(b: &BoolExpr, l: &[u32]) -> bool {
    match b {
        BoolExpr::Cmp(op, a, c) => op.eval(eval_int(a, l), eval_int(c, l)),
        BoolExpr::And(x, y) => eval_bool(x, l) && eval_bool(y, l),
        BoolExpr::Or(x, y) => eval_bool(x, l) || eval_bool(y, l),
        BoolExpr::Not(x) => !eval_bool(x, l),
    }
}

/// Evaluate a sorted-set expression; out-of-range removal yields `[]`.
pub fn eval_set(s: &SortedSetExpr, l: &[u32]) -> PointerList {
    match s {
        SortedSetExpr::Var => l.to_vec(),
        SortedSetExpr::Remove(base, idx) => {
            let xs = eval_set(base, l);
            let k = eval_int(idx, &xs);
            if k >= 1 && (k as usize) <= xs.len() {
                let mut out = xs;
                out.remove(k as usize - 1);
                out
            } else {
                Vec::new()
            }
        }
        SortedSetExpr::MultiRemove(..) => {
            unreachable!("multi-index removal must be desugared before evaluation")
        }
    }
}

/// Evaluate a qubit expression to a wire index; 0 encodes an error.
pub fn eval_qubit(q: &QubitExpr, l: &[u32]) -> u32 {
    let xs = eval_set(&q.set, l);
    let k = eval_int(&q.index, &xs);
    if k >= 1 && (k as usize) <= xs.len() {
        xs[k as usize - 1]
    } else {
        0
    }
}

/// A state of `n` qubits as a dense vector of `2^n` amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    pub n: usize,
    pub amps: Vec<Complex64>,
}

impl StateVector {
    pub fn zero(n: usize) -> StateVector {
        StateVector::basis(n, 0)
    }

    pub fn basis(n: usize, index: usize) -> StateVector {
        assert!(index < (1usize << n));
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[index] = Complex64::new(1.0, 0.0);
        StateVector { n, amps }
    }

    /// Parse a bitstring such as `010110` into a basis state; the first
    /// character is wire 1.
    pub fn from_bits(bits: &str) -> Option<StateVector> {
        let mut index = 0usize;
        for c in bits.chars() {
            index = (index << 1)
                | match c {
                    '0' => 0,
                    '1' => 1,
                    _ => return None,
                };
        }
        let n = bits.len();
        if n == 0 || n > 30 {
            return None;
        }
        Some(StateVector::basis(n, index))
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalize(&mut self) {
        let nrm = self.norm();
        if nrm > 0.0 {
            for a in &mut self.amps {
                *a /= nrm;
            }
        }
    }

    pub fn max_norm_dist(&self, other: &StateVector) -> f64 {
        assert_eq!(self.n, other.n);
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Apply a single-qubit unitary on wire `w` (1-based).
    pub fn apply_1q(&mut self, w: u32, m: &[[Complex64; 2]; 2]) {
        debug_assert!(w >= 1 && (w as usize) <= self.n);
        let bit = 1usize << (self.n - w as usize);
        let dim = self.amps.len();
        let mut i = 0usize;
        while i < dim {
            if i & bit == 0 {
                let a0 = self.amps[i];
                let a1 = self.amps[i | bit];
                self.amps[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[i | bit] = m[1][0] * a0 + m[1][1] * a1;
            }
            i += 1;
        }
    }

    /// Value of wire `w` in basis-state `index`.
    pub fn wire_bit(n: usize, index: usize, w: u32) -> bool {
        index >> (n - w as usize) & 1 == 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Done,
    Error,
    Diverged,
}

/// The evaluation state of the big-step semantics: quantum state,
/// accessible wires and the pointer list under consideration.
#[derive(Debug, Clone)]
pub struct Configuration {
    pub state: StateVector,
    pub accessible: WireSet,
    pub pointers: PointerList,
}

impl Configuration {
    pub fn initial(state: StateVector) -> Configuration {
        let n = state.n as u32;
        Configuration {
            state,
            accessible: (1..=n).collect(),
            pointers: (1..=n).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub outcome: Outcome,
    pub state: StateVector,
    pub time: u64,
}

/// Hard cap on procedure calls along one path before a run is declared
/// divergent.
pub const DEFAULT_CALL_BUDGET: u64 = 1_000_000;

/// Call-nesting cap; keeps runaway recursion off the machine stack long
/// before the call budget is spent.
const MAX_CALL_DEPTH: u32 = 256;

struct Exec<'a> {
    prog: &'a Program,
    calls_left: u64,
    depth: u32,
}

struct Diverged;

impl<'a> Exec<'a> {
    fn stmt(
        &mut self,
        s: &Statement,
        psi: StateVector,
        acc: &WireSet,
        l: &[u32],
    ) -> Result<(Outcome, StateVector, u64), Diverged> {
        match s {
            Statement::Skip => Ok((Outcome::Done, psi, 0)),
            Statement::Unitary {
                target,
                gate,
                phase,
                arg,
            } => {
                let w = eval_qubit(target, l);
                if !acc.contains(&w) {
                    return Ok((Outcome::Error, psi, 0));
                }
                let k = arg.as_ref().map(|a| eval_int(a, l));
                let theta = phase.map(|p| p.eval(k));
                let m = gate_matrix(*gate, theta);
                let mut psi = psi;
                psi.apply_1q(w, &m);
                Ok((Outcome::Done, psi, 0))
            }
            Statement::Seq(a, b) => {
                let (st, psi1, t1) = self.stmt(a, psi, acc, l)?;
                if st != Outcome::Done {
                    return Ok((st, psi1, t1));
                }
                let (st, psi2, t2) = self.stmt(b, psi1, acc, l)?;
                Ok((st, psi2, t1 + t2))
            }
            Statement::If {
                cond,
                then_branch,
                else_branch,
            } => {
                let branch = if eval_bool(cond, l) {
                    then_branch
                } else {
                    else_branch
                };
                self.stmt(branch, psi, acc, l)
            }
            Statement::QCase { control, zero, one } => {
                let w = eval_qubit(control, l);
                if !acc.contains(&w) {
                    return Ok((Outcome::Error, psi, 0));
                }
                let mut inner = acc.clone();
                inner.remove(&w);
                let (st0, psi0, t0) = self.stmt(zero, psi.clone(), &inner, l)?;
                let (st1, psi1, t1) = self.stmt(one, psi.clone(), &inner, l)?;
                let time = t0.max(t1);
                if st0 != Outcome::Done || st1 != Outcome::Done {
                    // both error rules return the qcase's own input state
                    return Ok((Outcome::Error, psi, time));
                }
                let mut out = psi0;
                let n = out.n;
                for (i, amp) in out.amps.iter_mut().enumerate() {
                    if StateVector::wire_bit(n, i, w) {
                        *amp = psi1.amps[i];
                    }
                }
                Ok((Outcome::Done, out, time))
            }
            Statement::Call { proc, arg } => {
                let l2 = eval_set(arg, l);
                if l2.is_empty() {
                    return Ok((Outcome::Done, psi, 1));
                }
                if self.calls_left == 0 || self.depth >= MAX_CALL_DEPTH {
                    return Err(Diverged);
                }
                self.calls_left -= 1;
                self.depth += 1;
                let body = &self
                    .prog
                    .decl(proc)
                    .expect("calls are name-checked at parse time")
                    .body;
                let result = self.stmt(body, psi, acc, &l2);
                self.depth -= 1;
                let (st, psi2, t) = result?;
                Ok((st, psi2, t + 1))
            }
            Statement::MultiQCase { .. } | Statement::MacroCall { .. } => {
                unreachable!("statements must be desugared before execution")
            }
        }
    }
}

/// Execute a single statement from an explicit configuration.
pub fn exec_statement(
    prog: &Program,
    s: &Statement,
    cfg: Configuration,
) -> (Outcome, Configuration, u64) {
    let mut ex = Exec {
        prog,
        calls_left: DEFAULT_CALL_BUDGET,
        depth: 0,
    };
    match ex.stmt(s, cfg.state.clone(), &cfg.accessible, &cfg.pointers) {
        Ok((outcome, state, time)) => (
            outcome,
            Configuration {
                state,
                accessible: cfg.accessible,
                pointers: cfg.pointers,
            },
            time,
        ),
        Err(Diverged) => (Outcome::Diverged, cfg, 0),
    }
}

/// Run a desugared program on an input state from the initial
/// configuration `(S, |psi>, {1..n}, [1..n])`.
pub fn run_program(prog: &Program, input: StateVector) -> RunResult {
    run_program_with_budget(prog, input, DEFAULT_CALL_BUDGET)
}

pub fn run_program_with_budget(prog: &Program, input: StateVector, budget: u64) -> RunResult {
    let cfg = Configuration::initial(input.clone());
    let mut ex = Exec {
        prog,
        calls_left: budget,
        depth: 0,
    };
    match ex.stmt(&prog.body, cfg.state, &cfg.accessible, &cfg.pointers) {
        Ok((outcome, state, time)) => RunResult {
            outcome,
            state,
            time,
        },
        Err(Diverged) => RunResult {
            outcome: Outcome::Diverged,
            state: input,
            time: 0,
        },
    }
}
