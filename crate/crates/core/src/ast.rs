//! Abstract syntax for the quantum language: integer, boolean, qubit and
//! sorted-set expressions, statements, and whole programs.
//!
//! The parser produces a *surface* AST which still contains sugar
//! (multi-qubit `qcase`, negative indices, multi-index removal, and the
//! gate macros `CNOT`/`SWAP`/`TOF`/`CPHASE`).  [`crate::desugar`] lowers
//! everything to the core forms.

use std::fmt;

/// Integer expressions: literals, `i + n` / `i - n` shifts by a literal,
/// and the size `|s|` of a sorted set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum IntExpr {
    Lit(i64),
    /// `i + n` (positive offset) or `i - n` (negative offset).
    Shift(Box<IntExpr>, i64),
    Size(Box<SortedSetExpr>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Ge,
    Gt,
    Eq,
    Lt,
    Le,
}

impl CmpOp {
    pub fn eval(self, a: i64, b: i64) -> bool {
        match self {
            CmpOp::Ge => a >= b,
            CmpOp::Gt => a > b,
            CmpOp::Eq => a == b,
            CmpOp::Lt => a < b,
            CmpOp::Le => a <= b,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Ge => ">=",
            CmpOp::Gt => ">",
            CmpOp::Eq => "==",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
        }
    }
}

/// Boolean expressions over integer comparisons.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BoolExpr {
    Cmp(CmpOp, IntExpr, IntExpr),
    And(Box<BoolExpr>, Box<BoolExpr>),
    Or(Box<BoolExpr>, Box<BoolExpr>),
    Not(Box<BoolExpr>),
}

/// Sorted-set expressions.  The base of every removal chain is the single
/// formal variable `qs`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SortedSetExpr {
    /// The formal variable `qs`.
    Var,
    /// `s - [i]`: the set with its `i`-th element removed.
    Remove(Box<SortedSetExpr>, IntExpr),
    /// Surface sugar `s - [i, j, ...]` with literal (possibly negative)
    /// indices interpreted against the original set.
    MultiRemove(Box<SortedSetExpr>, Vec<i64>),
}

/// A qubit expression `s[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QubitExpr {
    pub set: SortedSetExpr,
    pub index: IntExpr,
}

/// Single-qubit gate names understood by the compiler and the simulator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateName {
    Not,
    H,
    Ry,
    Ph,
}

impl GateName {
    pub fn as_str(self) -> &'static str {
        match self {
            GateName::Not => "NOT",
            GateName::H => "H",
            GateName::Ry => "RY",
            GateName::Ph => "PH",
        }
    }

    pub fn parse(s: &str) -> Option<GateName> {
        match s {
            "NOT" => Some(GateName::Not),
            "H" => Some(GateName::H),
            "RY" => Some(GateName::Ry),
            "PH" => Some(GateName::Ph),
            _ => None,
        }
    }

    /// Whether the gate takes a phase-function descriptor.
    pub fn takes_phase(self) -> bool {
        matches!(self, GateName::Ry | GateName::Ph)
    }
}

/// Closed-form phase functions with integer coefficients.
///
/// `Const(a, b)` denotes the angle `a*pi/b`; `Dyadic(a, c)` denotes
/// `a*pi / 2^(x + c)` where `x` is the gate's integer argument.  Both are
/// reduced modulo `2*pi` into `[0, 2*pi)` on evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PhaseFn {
    Const { num: i64, den: i64 },
    Dyadic { num: i64, shift: i64 },
}

impl PhaseFn {
    /// Evaluate to radians in `[0, 2*pi)`.  `arg` is the gate's integer
    /// argument; it is only consulted by the dyadic form.
    pub fn eval(self, arg: Option<i64>) -> f64 {
        use std::f64::consts::PI;
        let raw = match self {
            PhaseFn::Const { num, den } => num as f64 * PI / den as f64,
            PhaseFn::Dyadic { num, shift } => {
                let x = arg.unwrap_or(0);
                let e = x.saturating_add(shift);
                // a*pi / 2^e, allowing negative exponents.
                if e >= 0 {
                    num as f64 * PI / 2f64.powi(e.min(16_000) as i32)
                } else {
                    num as f64 * PI * 2f64.powi((-e).min(16_000) as i32)
                }
            }
        };
        let m = raw.rem_euclid(2.0 * PI);
        // rem_euclid can return the modulus itself when raw is a tiny
        // negative number.
        if m >= 2.0 * PI {
            0.0
        } else {
            m
        }
    }
}

/// Names of the statement-level gate macros expanded by desugaring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MacroName {
    Cnot,
    Swap,
    Tof,
    Cphase,
}

impl MacroName {
    pub fn as_str(self) -> &'static str {
        match self {
            MacroName::Cnot => "CNOT",
            MacroName::Swap => "SWAP",
            MacroName::Tof => "TOF",
            MacroName::Cphase => "CPHASE",
        }
    }

    pub fn parse(s: &str) -> Option<MacroName> {
        match s {
            "CNOT" => Some(MacroName::Cnot),
            "SWAP" => Some(MacroName::Swap),
            "TOF" => Some(MacroName::Tof),
            "CPHASE" => Some(MacroName::Cphase),
            _ => None,
        }
    }

    /// Number of qubit arguments; CPHASE takes an extra integer argument.
    pub fn qubit_arity(self) -> usize {
        match self {
            MacroName::Cnot => 2,
            MacroName::Swap => 2,
            MacroName::Tof => 3,
            MacroName::Cphase => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Statement {
    Skip,
    Unitary {
        target: QubitExpr,
        gate: GateName,
        phase: Option<PhaseFn>,
        arg: Option<IntExpr>,
    },
    Seq(Box<Statement>, Box<Statement>),
    If {
        cond: BoolExpr,
        then_branch: Box<Statement>,
        else_branch: Box<Statement>,
    },
    QCase {
        control: QubitExpr,
        zero: Box<Statement>,
        one: Box<Statement>,
    },
    Call {
        proc: String,
        arg: SortedSetExpr,
    },
    /// Surface sugar: `qcase s[i1,...,ik] of { b1..bk -> S ... }` with one
    /// branch per bitstring label.
    MultiQCase {
        set: SortedSetExpr,
        indices: Vec<IntExpr>,
        branches: Vec<(Vec<bool>, Statement)>,
    },
    /// Surface sugar: a gate macro invocation such as `CNOT(qs[1], qs[2]);`.
    MacroCall {
        name: MacroName,
        qubits: Vec<QubitExpr>,
        int_arg: Option<IntExpr>,
    },
}

impl Statement {
    /// Fold a list of statements into a right-associated sequence.
    /// An empty list folds to `Skip`.
    pub fn seq_of(mut stmts: Vec<Statement>) -> Statement {
        match stmts.len() {
            0 => Statement::Skip,
            1 => stmts.pop().unwrap(),
            _ => {
                let mut out = stmts.pop().unwrap();
                while let Some(s) = stmts.pop() {
                    out = Statement::Seq(Box::new(s), Box::new(out));
                }
                out
            }
        }
    }

    /// True once all surface sugar has been expanded.
    pub fn is_desugared(&self) -> bool {
        match self {
            Statement::Skip | Statement::Unitary { .. } | Statement::Call { .. } => true,
            Statement::Seq(a, b) => a.is_desugared() && b.is_desugared(),
            Statement::If {
                then_branch,
                else_branch,
                ..
            } => then_branch.is_desugared() && else_branch.is_desugared(),
            Statement::QCase { zero, one, .. } => zero.is_desugared() && one.is_desugared(),
            Statement::MultiQCase { .. } | Statement::MacroCall { .. } => false,
        }
    }
}

/// A procedure declaration `decl name(qs) { body }`.
#[derive(Debug, Clone, PartialEq)]
pub struct Decl {
    pub name: String,
    pub body: Statement,
}

/// A whole program: declarations followed by the program statement.
#[derive(Debug, Clone, PartialEq)]
pub struct Program {
    pub decls: Vec<Decl>,
    pub body: Statement,
}

impl Program {
    pub fn decl_index(&self, name: &str) -> Option<usize> {
        self.decls.iter().position(|d| d.name == name)
    }

    pub fn decl(&self, name: &str) -> Option<&Decl> {
        self.decls.iter().find(|d| d.name == name)
    }

    /// Iterate over every statement of the program (body plus all
    /// procedure bodies).
    pub fn statements(&self) -> impl Iterator<Item = (Option<&str>, &Statement)> {
        self.decls
            .iter()
            .map(|d| (Some(d.name.as_str()), &d.body))
            .chain(std::iter::once((None, &self.body)))
    }

    pub fn is_desugared(&self) -> bool {
        self.statements().all(|(_, s)| s.is_desugared())
    }
}

/// Walk all call statements inside `stmt`, invoking `f` with the callee
/// name and argument expression.
pub fn visit_calls<'a>(stmt: &'a Statement, f: &mut impl FnMut(&'a str, &'a SortedSetExpr)) {
    match stmt {
        Statement::Skip | Statement::Unitary { .. } => {}
        Statement::Seq(a, b) => {
            visit_calls(a, f);
            visit_calls(b, f);
        }
        Statement::If {
            then_branch,
            else_branch,
            ..
        } => {
            visit_calls(then_branch, f);
            visit_calls(else_branch, f);
        }
        Statement::QCase { zero, one, .. } => {
            visit_calls(zero, f);
            visit_calls(one, f);
        }
        Statement::Call { proc, arg } => f(proc, arg),
        Statement::MultiQCase { branches, .. } => {
            for (_, s) in branches {
                visit_calls(s, f);
            }
        }
        Statement::MacroCall { .. } => {}
    }
}

impl fmt::Display for GateName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}
