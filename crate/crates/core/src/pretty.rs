//! Pretty-printer: emits surface syntax that re-parses to an equal AST.
//!
//! Sequences are printed flattened and re-parse right-associated, which is
//! the shape the parser and desugarer always produce.  Printing is
//! deterministic.

use crate::ast::*;
use std::fmt::Write;

pub fn pretty_print(p: &Program) -> String {
    let mut out = String::new();
    for (i, d) in p.decls.iter().enumerate() {
        let _ = write!(out, "decl {}(qs) {{\n", d.name);
        stmt(&mut out, &d.body, 1);
        out.push('}');
        if i + 1 < p.decls.len() {
            out.push(',');
        }
        out.push('\n');
    }
    out.push_str("::\n");
    stmt(&mut out, &p.body, 0);
    out
}

fn indent(out: &mut String, level: usize) {
    for _ in 0..level {
        out.push_str("  ");
    }
}

fn stmt(out: &mut String, s: &Statement, level: usize) {
    match s {
        Statement::Seq(a, b) => {
            stmt(out, a, level);
            stmt(out, b, level);
        }
        Statement::Skip => {
            indent(out, level);
            out.push_str("skip;\n");
        }
        Statement::Unitary {
            target,
            gate,
            phase,
            arg,
        } => {
            indent(out, level);
            let _ = write!(out, "{} *= {}", qubit(target), gate.as_str());
            if let Some(p) = phase {
                let _ = write!(out, "^{{{}}}", phase_fn(p));
            }
            if let Some(a) = arg {
                let _ = write!(out, "({})", int(a));
            }
            out.push_str(";\n");
        }
        Statement::If {
            cond,
            then_branch,
            else_branch,
        } => {
            indent(out, level);
            let _ = write!(out, "if {} then {{\n", bool_expr(cond, 0));
            stmt(out, then_branch, level + 1);
            indent(out, level);
            out.push_str("} else {\n");
            stmt(out, else_branch, level + 1);
            indent(out, level);
            out.push_str("}\n");
        }
        Statement::QCase { control, zero, one } => {
            indent(out, level);
            let _ = write!(out, "qcase {} of {{\n", qubit(control));
            indent(out, level + 1);
            out.push_str("0 ->\n");
            stmt(out, zero, level + 2);
            indent(out, level + 1);
            out.push_str("1 ->\n");
            stmt(out, one, level + 2);
            indent(out, level);
            out.push_str("}\n");
        }
        Statement::Call { proc, arg } => {
            indent(out, level);
            let _ = write!(out, "call {}({});\n", proc, set(arg));
        }
        Statement::MultiQCase {
            set: s,
            indices,
            branches,
        } => {
            indent(out, level);
            let idx: Vec<String> = indices.iter().map(int).collect();
            let _ = write!(out, "qcase {}[{}] of {{\n", set(s), idx.join(", "));
            for (bits, body) in branches {
                indent(out, level + 1);
                let label: String = bits.iter().map(|b| if *b { '1' } else { '0' }).collect();
                let _ = write!(out, "{label} ->\n");
                stmt(out, body, level + 2);
            }
            indent(out, level);
            out.push_str("}\n");
        }
        Statement::MacroCall {
            name,
            qubits,
            int_arg,
        } => {
            indent(out, level);
            let mut args: Vec<String> = qubits.iter().map(qubit).collect();
            if let Some(i) = int_arg {
                args.push(int(i));
            }
            let _ = write!(out, "{}({});\n", name.as_str(), args.join(", "));
        }
    }
}

fn qubit(q: &QubitExpr) -> String {
    format!("{}[{}]", set(&q.set), int(&q.index))
}

/// Render a sorted-set expression in surface syntax.
pub fn set_text(s: &SortedSetExpr) -> String {
    set(s)
}

fn set(s: &SortedSetExpr) -> String {
    match s {
        SortedSetExpr::Var => "qs".to_string(),
        SortedSetExpr::Remove(base, i) => format!("{} - [{}]", set(base), int(i)),
        SortedSetExpr::MultiRemove(base, idx) => {
            let items: Vec<String> = idx.iter().map(|n| n.to_string()).collect();
            format!("{} - [{}]", set(base), items.join(", "))
        }
    }
}

fn int(e: &IntExpr) -> String {
    match e {
        IntExpr::Lit(n) => n.to_string(),
        IntExpr::Shift(base, n) => {
            if *n >= 0 {
                format!("{} + {}", int(base), n)
            } else {
                format!("{} - {}", int(base), -n)
            }
        }
        IntExpr::Size(s) => format!("|{}|", set(s)),
    }
}

fn bool_expr(b: &BoolExpr, prec: u8) -> String {
    // prec 0 = or context, 1 = and context, 2 = atom context
    let (text, my_prec) = match b {
        BoolExpr::Or(x, y) => (
            format!("{} || {}", bool_expr(x, 0), bool_expr(y, 1)),
            0u8,
        ),
        BoolExpr::And(x, y) => (
            format!("{} && {}", bool_expr(x, 1), bool_expr(y, 2)),
            1,
        ),
        BoolExpr::Not(x) => (format!("!({})", bool_expr(x, 0)), 2),
        BoolExpr::Cmp(op, a, c) => (format!("{} {} {}", int(a), op.symbol(), int(c)), 2),
    };
    if my_prec < prec {
        format!("({text})")
    } else {
        text
    }
}

fn phase_fn(p: &PhaseFn) -> String {
    let coef = |num: i64| {
        if num == 1 {
            String::new()
        } else {
            format!("{num}*")
        }
    };
    match p {
        PhaseFn::Const { num, den } => {
            if *den == 1 {
                format!("{}pi", coef(*num))
            } else {
                format!("{}pi/{}", coef(*num), den)
            }
        }
        PhaseFn::Dyadic { num, shift } => {
            let tail = match shift.cmp(&0) {
                std::cmp::Ordering::Equal => "x".to_string(),
                std::cmp::Ordering::Greater => format!("x + {shift}"),
                std::cmp::Ordering::Less => format!("x - {}", -shift),
            };
            format!("{}pi/2^({})", coef(*num), tail)
        }
    }
}
