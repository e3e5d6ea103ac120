//! Lowers surface sugar to the core language: gate macros, multi-qubit
//! `qcase`, negative indices and multi-index removals.

use crate::ast::*;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DesugarError {
    #[error("qcase over {controls} qubits is missing branch `{label}`")]
    MissingBranch { controls: usize, label: String },
    #[error("duplicate qcase branch `{label}`")]
    DuplicateBranch { label: String },
    #[error("qcase branch label `{label}` does not match the {controls} control qubits")]
    LabelLength { controls: usize, label: String },
}

/// Expand all sugar in a program.  Sequences come out flattened into the
/// right-associated shape the parser produces, so lowered programs
/// round-trip through the pretty-printer.  Idempotent on lowered input.
pub fn desugar(p: &Program) -> Result<Program, DesugarError> {
    let decls = p
        .decls
        .iter()
        .map(|d| {
            Ok(Decl {
                name: d.name.clone(),
                body: normalize_seqs(desugar_stmt(&d.body)?),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let body = normalize_seqs(desugar_stmt(&p.body)?);
    let out = Program { decls, body };
    debug_assert!(out.is_desugared());
    Ok(out)
}

fn normalize_seqs(s: Statement) -> Statement {
    fn flatten(s: Statement, out: &mut Vec<Statement>) {
        match s {
            Statement::Seq(a, b) => {
                flatten(*a, out);
                flatten(*b, out);
            }
            other => out.push(descend(other)),
        }
    }
    fn descend(s: Statement) -> Statement {
        match s {
            Statement::If {
                cond,
                then_branch,
                else_branch,
            } => Statement::If {
                cond,
                then_branch: Box::new(normalize_seqs(*then_branch)),
                else_branch: Box::new(normalize_seqs(*else_branch)),
            },
            Statement::QCase { control, zero, one } => Statement::QCase {
                control,
                zero: Box::new(normalize_seqs(*zero)),
                one: Box::new(normalize_seqs(*one)),
            },
            other => other,
        }
    }
    let mut parts = Vec::new();
    flatten(s, &mut parts);
    Statement::seq_of(parts)
}

fn desugar_stmt(s: &Statement) -> Result<Statement, DesugarError> {
    Ok(match s {
        Statement::Skip => Statement::Skip,
        Statement::Unitary {
            target,
            gate,
            phase,
            arg,
        } => Statement::Unitary {
            target: desugar_qubit(target),
            gate: *gate,
            phase: *phase,
            arg: arg.as_ref().map(desugar_int),
        },
        Statement::Seq(a, b) => Statement::Seq(
            Box::new(desugar_stmt(a)?),
            Box::new(desugar_stmt(b)?),
        ),
        Statement::If {
            cond,
            then_branch,
            else_branch,
        } => Statement::If {
            cond: desugar_bool(cond),
            then_branch: Box::new(desugar_stmt(then_branch)?),
            else_branch: Box::new(desugar_stmt(else_branch)?),
        },
        Statement::QCase { control, zero, one } => Statement::QCase {
            control: desugar_qubit(control),
            zero: Box::new(desugar_stmt(zero)?),
            one: Box::new(desugar_stmt(one)?),
        },
        Statement::Call { proc, arg } => Statement::Call {
            proc: proc.clone(),
            arg: desugar_set(arg),
        },
        Statement::MultiQCase {
            set,
            indices,
            branches,
        } => {
            let set = desugar_set(set);
            let controls: Vec<QubitExpr> = indices
                .iter()
                .map(|i| {
                    desugar_qubit(&QubitExpr {
                        set: set.clone(),
                        index: i.clone(),
                    })
                })
                .collect();
            let k = controls.len();
            let mut table: Vec<Option<Statement>> = vec![None; 1 << k];
            for (bits, body) in branches {
                let label: String = bits.iter().map(|b| if *b { '1' } else { '0' }).collect();
                if bits.len() != k {
                    return Err(DesugarError::LabelLength {
                        controls: k,
                        label,
                    });
                }
                let idx = bits
                    .iter()
                    .fold(0usize, |acc, b| (acc << 1) | usize::from(*b));
                if table[idx].is_some() {
                    return Err(DesugarError::DuplicateBranch { label });
                }
                table[idx] = Some(desugar_stmt(body)?);
            }
            if let Some(missing) = table.iter().position(Option::is_none) {
                return Err(DesugarError::MissingBranch {
                    controls: k,
                    label: format!("{:0width$b}", missing, width = k),
                });
            }
            let mut bodies: Vec<Statement> = table.into_iter().map(Option::unwrap).collect();
            // Fold from the innermost control outwards: at each level,
            // adjacent (zero, one) pairs merge under the next control,
            // leaving the first index as the outermost one.
            for level in (0..k).rev() {
                let control = controls[level].clone();
                bodies = bodies
                    .chunks_exact(2)
                    .map(|pair| Statement::QCase {
                        control: control.clone(),
                        zero: Box::new(pair[0].clone()),
                        one: Box::new(pair[1].clone()),
                    })
                    .collect();
            }
            debug_assert_eq!(bodies.len(), 1);
            bodies.pop().unwrap()
        }
        Statement::MacroCall {
            name,
            qubits,
            int_arg,
        } => {
            let q: Vec<QubitExpr> = qubits.iter().map(desugar_qubit).collect();
            match name {
                MacroName::Cnot => cnot(&q[0], &q[1]),
                MacroName::Swap => Statement::seq_of(vec![
                    cnot(&q[0], &q[1]),
                    cnot(&q[1], &q[0]),
                    cnot(&q[0], &q[1]),
                ]),
                MacroName::Tof => Statement::QCase {
                    control: q[0].clone(),
                    zero: Box::new(Statement::Skip),
                    one: Box::new(cnot(&q[1], &q[2])),
                },
                MacroName::Cphase => Statement::QCase {
                    control: q[0].clone(),
                    zero: Box::new(Statement::Skip),
                    one: Box::new(Statement::Unitary {
                        target: q[1].clone(),
                        gate: GateName::Ph,
                        phase: Some(PhaseFn::Dyadic { num: 1, shift: -1 }),
                        arg: Some(desugar_int(int_arg.as_ref().expect("parser enforces arg"))),
                    }),
                },
            }
        }
    })
}

fn cnot(c: &QubitExpr, t: &QubitExpr) -> Statement {
    Statement::QCase {
        control: c.clone(),
        zero: Box::new(Statement::Skip),
        one: Box::new(Statement::Unitary {
            target: t.clone(),
            gate: GateName::Not,
            phase: None,
            arg: None,
        }),
    }
}

/// `s[-n]` becomes `s[|s| - n + 1]`.
fn desugar_qubit(q: &QubitExpr) -> QubitExpr {
    let set = desugar_set(&q.set);
    let index = match &q.index {
        IntExpr::Lit(n) if *n < 0 => from_end(&set, *n),
        other => desugar_int(other),
    };
    QubitExpr { set, index }
}

fn from_end(set: &SortedSetExpr, neg: i64) -> IntExpr {
    IntExpr::Shift(
        Box::new(IntExpr::Shift(
            Box::new(IntExpr::Size(Box::new(set.clone()))),
            neg,
        )),
        1,
    )
}

fn desugar_set(s: &SortedSetExpr) -> SortedSetExpr {
    match s {
        SortedSetExpr::Var => SortedSetExpr::Var,
        SortedSetExpr::Remove(base, idx) => {
            let base = desugar_set(base);
            let idx = match idx {
                IntExpr::Lit(n) if *n < 0 => from_end(&base, *n),
                other => desugar_int(other),
            };
            SortedSetExpr::Remove(Box::new(base), idx)
        }
        SortedSetExpr::MultiRemove(base, indices) => {
            // Indices refer to positions in the *original* set.  Removing
            // from the highest position downwards keeps the remaining ones
            // stable: negatives (positions counted from the end) first,
            // then positive positions in descending order.
            let mut out = desugar_set(base);
            let mut negs: Vec<i64> = indices.iter().copied().filter(|n| *n < 0).collect();
            negs.sort_by_key(|n| -n); // -1 before -2 before -3 ...
            for (j, n) in negs.iter().enumerate() {
                let current = n + j as i64; // -1 once nearer ends are gone
                out = SortedSetExpr::Remove(Box::new(out.clone()), from_end(&out, current));
            }
            let mut pos: Vec<i64> = indices.iter().copied().filter(|n| *n >= 0).collect();
            pos.sort_unstable_by(|a, b| b.cmp(a));
            for p in pos {
                out = SortedSetExpr::Remove(Box::new(out), IntExpr::Lit(p));
            }
            out
        }
    }
}

fn desugar_int(e: &IntExpr) -> IntExpr {
    match e {
        IntExpr::Lit(n) => IntExpr::Lit(*n),
        IntExpr::Shift(b, n) => IntExpr::Shift(Box::new(desugar_int(b)), *n),
        IntExpr::Size(s) => IntExpr::Size(Box::new(desugar_set(s))),
    }
}

fn desugar_bool(b: &BoolExpr) -> BoolExpr {
    match b {
        BoolExpr::Cmp(op, a, c) => BoolExpr::Cmp(*op, desugar_int(a), desugar_int(c)),
        BoolExpr::And(x, y) => BoolExpr::And(Box::new(desugar_bool(x)), Box::new(desugar_bool(y))),
        BoolExpr::Or(x, y) => BoolExpr::Or(Box::new(desugar_bool(x)), Box::new(desugar_bool(y))),
        BoolExpr::Not(x) => BoolExpr::Not(Box::new(desugar_bool(x))),
    }
}
