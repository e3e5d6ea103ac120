//! Static analysis: the call graph and its orders, procedure width and
//! rank, the WF / WIDTH<=1 / BASIC / PBP classification, and a symbolic
//! executor that decides static errors and the time-complexity function
//! without touching state vectors.

use crate::ast::*;
use crate::eval::{eval_bool, eval_int, eval_qubit, eval_set, WireSet};
use crate::pretty;
use serde::Serialize;
use std::collections::{HashMap, HashSet};
use thiserror::Error;

/// The syntactic call relation between procedures together with its
/// derived orders: reachability, mutual recursion, and the strict order.
#[derive(Debug, Clone)]
pub struct CallGraph {
    pub procs: Vec<String>,
    pub edges: Vec<(usize, usize)>,
    reach: Vec<Vec<bool>>,
}

impl CallGraph {
    /// `a` reaches `b` through one or more calls.
    pub fn reaches(&self, a: usize, b: usize) -> bool {
        self.reach[a][b]
    }

    /// Mutual recursion: both reach each other.
    pub fn similar(&self, a: usize, b: usize) -> bool {
        self.reach[a][b] && self.reach[b][a]
    }

    /// Strictly above: reaches but not mutually recursive.
    pub fn strictly_above(&self, a: usize, b: usize) -> bool {
        self.reach[a][b] && !self.similar(a, b)
    }

    pub fn recursive(&self, a: usize) -> bool {
        self.reach[a][a]
    }

    /// Recursion family of a procedure: the smallest index among the
    /// procedures mutually recursive with it.  `None` for non-recursive
    /// procedures.
    pub fn family(&self, a: usize) -> Option<usize> {
        if !self.recursive(a) {
            return None;
        }
        (0..self.procs.len()).find(|&b| self.similar(a, b))
    }
}

pub fn build_call_graph(p: &Program) -> CallGraph {
    let procs: Vec<String> = p.decls.iter().map(|d| d.name.clone()).collect();
    let k = procs.len();
    let mut edges = Vec::new();
    let mut direct = vec![vec![false; k]; k];
    for (i, d) in p.decls.iter().enumerate() {
        visit_calls(&d.body, &mut |callee, _| {
            let j = p.decl_index(callee).expect("name-checked program");
            if !direct[i][j] {
                direct[i][j] = true;
                edges.push((i, j));
            }
        });
    }
    edges.sort_unstable();
    // transitive closure
    let mut reach = direct;
    for m in 0..k {
        for a in 0..k {
            if reach[a][m] {
                for b in 0..k {
                    if reach[m][b] {
                        reach[a][b] = true;
                    }
                }
            }
        }
    }
    CallGraph {
        procs,
        edges,
        reach,
    }
}

/// Per-program analysis shared by the classifier and the compiler.
#[derive(Debug, Clone)]
pub struct ProgramAnalysis {
    pub graph: CallGraph,
    pub widths: Vec<u64>,
    pub ranks: Vec<u64>,
}

impl ProgramAnalysis {
    pub fn new(p: &Program) -> ProgramAnalysis {
        let graph = build_call_graph(p);
        let widths = (0..p.decls.len())
            .map(|i| width_of(p, &graph, i))
            .collect();
        let mut ranks = vec![None; p.decls.len()];
        for i in 0..p.decls.len() {
            rank_of(&graph, i, &mut ranks);
        }
        ProgramAnalysis {
            graph,
            widths,
            ranks: ranks.into_iter().map(Option::unwrap).collect(),
        }
    }

    /// `w_P^proc(S)` where `proc` is any member of `family`.
    pub fn stmt_width(&self, p: &Program, family: usize, s: &Statement) -> u64 {
        stmt_width_rec(p, &self.graph, family, s)
    }
}

/// Width of the body of a statement with respect to the recursion family
/// of `proc` (index into the call graph).
fn stmt_width_rec(p: &Program, g: &CallGraph, proc: usize, s: &Statement) -> u64 {
    match s {
        Statement::Skip | Statement::Unitary { .. } => 0,
        Statement::Seq(a, b) => {
            stmt_width_rec(p, g, proc, a) + stmt_width_rec(p, g, proc, b)
        }
        Statement::If {
            then_branch,
            else_branch,
            ..
        } => stmt_width_rec(p, g, proc, then_branch).max(stmt_width_rec(p, g, proc, else_branch)),
        Statement::QCase { zero, one, .. } => {
            stmt_width_rec(p, g, proc, zero).max(stmt_width_rec(p, g, proc, one))
        }
        Statement::Call { proc: callee, .. } => {
            let j = p.decl_index(callee).expect("name-checked program");
            u64::from(g.similar(proc, j))
        }
        Statement::MultiQCase { .. } | Statement::MacroCall { .. } => {
            unreachable!("width is defined on desugared statements")
        }
    }
}

/// `width_P(proc)`.
pub fn width(p: &Program, proc: &str) -> u64 {
    let g = build_call_graph(p);
    let i = p.decl_index(proc).expect("procedure is declared");
    width_of(p, &g, i)
}

fn width_of(p: &Program, g: &CallGraph, i: usize) -> u64 {
    stmt_width_rec(p, g, i, &p.decls[i].body)
}

/// `rk_P(proc)`: 0 for call-free procedures; the maximum over reached
/// procedures when non-recursive; otherwise one more than the maximum
/// over strictly lower procedures (max of the empty set being 0).
pub fn rank(p: &Program, proc: &str) -> u64 {
    let g = build_call_graph(p);
    let i = p.decl_index(proc).expect("procedure is declared");
    let mut memo = vec![None; p.decls.len()];
    rank_of(&g, i, &mut memo)
}

fn rank_of(g: &CallGraph, i: usize, memo: &mut Vec<Option<u64>>) -> u64 {
    if let Some(r) = memo[i] {
        return r;
    }
    let k = g.procs.len();
    let r = if g.recursive(i) {
        1 + (0..k)
            .filter(|&j| g.strictly_above(i, j))
            .map(|j| rank_of(g, j, memo))
            .max()
            .unwrap_or(0)
    } else if (0..k).any(|j| g.reaches(i, j)) {
        (0..k)
            .filter(|&j| g.reaches(i, j))
            .map(|j| rank_of(g, j, memo))
            .max()
            .unwrap()
    } else {
        0
    };
    memo[i] = Some(r);
    r
}

#[derive(Debug, Clone, Serialize)]
pub struct ProcReport {
    pub name: String,
    pub width: u64,
    pub rank: u64,
    pub recursive: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassificationReport {
    pub procs: Vec<ProcReport>,
    pub wf: bool,
    /// Recursive call sites whose argument performs no removal.
    pub wf_violations: Vec<String>,
    pub width_le_1: bool,
    pub width_violations: Vec<String>,
    pub basic: bool,
    /// The distinct non-`qs` call arguments, printed.
    pub call_args: Vec<String>,
    /// The unique non-trivial call argument when BASIC holds and one exists.
    pub unique_call_arg: Option<String>,
    pub pbp: bool,
}

impl ClassificationReport {
    pub fn wf_and_width(&self) -> bool {
        self.wf && self.width_le_1
    }
}

fn contains_removal(s: &SortedSetExpr) -> bool {
    match s {
        SortedSetExpr::Var => false,
        SortedSetExpr::Remove(..) | SortedSetExpr::MultiRemove(..) => true,
    }
}

fn set_to_text(s: &SortedSetExpr) -> String {
    // reuse the pretty-printer via a qubit-free wrapper
    pretty::set_text(s)
}

/// Classify a desugared program.
pub fn classify_program(p: &Program) -> ClassificationReport {
    let a = ProgramAnalysis::new(p);
    let g = &a.graph;
    let procs: Vec<ProcReport> = p
        .decls
        .iter()
        .enumerate()
        .map(|(i, d)| ProcReport {
            name: d.name.clone(),
            width: a.widths[i],
            rank: a.ranks[i],
            recursive: g.recursive(i),
        })
        .collect();

    let mut wf_violations = Vec::new();
    for (i, d) in p.decls.iter().enumerate() {
        visit_calls(&d.body, &mut |callee, arg| {
            let j = p.decl_index(callee).expect("name-checked");
            if g.similar(i, j) && !contains_removal(arg) {
                wf_violations.push(format!("{} -> {} on `{}`", d.name, callee, set_to_text(arg)));
            }
        });
    }
    let width_violations: Vec<String> = procs
        .iter()
        .filter(|r| r.width > 1)
        .map(|r| format!("{} has width {}", r.name, r.width))
        .collect();

    let mut call_args: Vec<String> = Vec::new();
    for (_, stmt) in p.statements() {
        visit_calls(stmt, &mut |_, arg| {
            if matches!(arg, SortedSetExpr::Var) {
                return;
            }
            let text = set_to_text(arg);
            if !call_args.contains(&text) {
                call_args.push(text);
            }
        });
    }

    let wf = wf_violations.is_empty();
    let width_le_1 = width_violations.is_empty();
    let basic = call_args.len() <= 1;
    ClassificationReport {
        procs,
        wf,
        wf_violations,
        width_le_1,
        width_violations,
        basic,
        unique_call_arg: if basic { call_args.first().cloned() } else { None },
        call_args,
        pbp: wf && width_le_1 && basic,
    }
}

// --- symbolic execution ----------------------------------------------------

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum StaticRunError {
    /// Some reachable expression addresses an inaccessible wire; the
    /// interpreter would reach the error configuration.
    #[error("the program is erroneous at this input size")]
    Erroneous,
    #[error("recursion bound exceeded; the program does not appear to terminate")]
    Diverged,
}

const MAX_SYMBOLIC_DEPTH: usize = 1024;

struct Symbolic<'a> {
    prog: &'a Program,
    memo: HashMap<(usize, Vec<u32>, Vec<u32>), u64>,
    in_progress: HashSet<(usize, Vec<u32>, Vec<u32>)>,
}

impl<'a> Symbolic<'a> {
    fn stmt(
        &mut self,
        s: &Statement,
        l: &[u32],
        acc: &WireSet,
        depth: usize,
    ) -> Result<u64, StaticRunError> {
        if depth > MAX_SYMBOLIC_DEPTH {
            return Err(StaticRunError::Diverged);
        }
        match s {
            Statement::Skip => Ok(0),
            Statement::Unitary { target, arg, .. } => {
                let w = eval_qubit(target, l);
                if !acc.contains(&w) {
                    return Err(StaticRunError::Erroneous);
                }
                if let Some(a) = arg {
                    let _ = eval_int(a, l);
                }
                Ok(0)
            }
            Statement::Seq(a, b) => {
                Ok(self.stmt(a, l, acc, depth)? + self.stmt(b, l, acc, depth)?)
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
                self.stmt(branch, l, acc, depth)
            }
            Statement::QCase { control, zero, one } => {
                let w = eval_qubit(control, l);
                if !acc.contains(&w) {
                    return Err(StaticRunError::Erroneous);
                }
                let mut inner = acc.clone();
                inner.remove(&w);
                let t0 = self.stmt(zero, l, &inner, depth)?;
                let t1 = self.stmt(one, l, &inner, depth)?;
                Ok(t0.max(t1))
            }
            Statement::Call { proc, arg } => {
                let l2 = eval_set(arg, l);
                if l2.is_empty() {
                    return Ok(1);
                }
                let i = self.prog.decl_index(proc).expect("name-checked");
                let key = (i, l2.clone(), acc.iter().copied().collect::<Vec<_>>());
                if let Some(&t) = self.memo.get(&key) {
                    return Ok(t + 1);
                }
                if !self.in_progress.insert(key.clone()) {
                    return Err(StaticRunError::Diverged);
                }
                let body = &self.prog.decls[i].body;
                let result = self.stmt(body, &l2, acc, depth + 1);
                self.in_progress.remove(&key);
                let t = result?;
                self.memo.insert(key, t);
                Ok(t + 1)
            }
            Statement::MultiQCase { .. } | Statement::MacroCall { .. } => {
                unreachable!("symbolic execution needs a desugared program")
            }
        }
    }
}

/// Run the program symbolically on `n` wires: detects static errors and
/// returns the exact number of procedure calls along the costliest
/// classical/quantum branch.  Time depends only on the pointer-list
/// branching structure, never on amplitudes, so this single pass equals
/// the maximum over all input states.
pub fn symbolic_run(p: &Program, n: usize) -> Result<u64, StaticRunError> {
    let l: Vec<u32> = (1..=n as u32).collect();
    let acc: WireSet = (1..=n as u32).collect();
    let mut sym = Symbolic {
        prog: p,
        memo: HashMap::new(),
        in_progress: HashSet::new(),
    };
    sym.stmt(&p.body, &l, &acc, 0)
}

/// The time-complexity function of a program at input size `n`.
pub fn time_complexity(p: &Program, n: usize) -> Result<u64, StaticRunError> {
    symbolic_run(p, n)
}

/// Brute-force cross-check: run the interpreter on every basis state and
/// take the maximum witnessed time.  Exponential in `n`; test sizes only.
pub fn brute_force_time(p: &Program, n: usize) -> Result<u64, StaticRunError> {
    use crate::eval::{run_program, Outcome, StateVector};
    let mut best = 0;
    for idx in 0..(1usize << n) {
        let r = run_program(p, StateVector::basis(n, idx));
        match r.outcome {
            Outcome::Done => best = best.max(r.time),
            Outcome::Error => return Err(StaticRunError::Erroneous),
            Outcome::Diverged => return Err(StaticRunError::Diverged),
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::desugar::desugar;
    use crate::parser::parse_program;

    fn program(src: &str) -> Program {
        desugar(&parse_program(src).unwrap()).unwrap()
    }

    #[test]
    fn call_free_program_has_empty_graph() {
        let p = program(":: qs[1] *= NOT;");
        let g = build_call_graph(&p);
        assert!(g.edges.is_empty());
    }

    #[test]
    fn width_of_skip_body_is_zero() {
        let p = program("decl f(qs) { skip; } :: call f(qs);");
        assert_eq!(width(&p, "f"), 0);
        assert_eq!(rank(&p, "f"), 0);
    }

    #[test]
    fn self_loop_is_recursive_with_rank_one() {
        let p = program(
            "decl f(qs) { if |qs| >= 1 then call f(qs - [1]); else skip; } :: call f(qs);",
        );
        assert_eq!(width(&p, "f"), 1);
        assert_eq!(rank(&p, "f"), 1);
        let r = classify_program(&p);
        assert!(r.pbp);
    }

    #[test]
    fn width_two_program_is_flagged() {
        let p = program(
            "decl f(qs) { call f(qs - [1]); call f(qs - [1]); } :: call f(qs);",
        );
        let r = classify_program(&p);
        assert!(!r.width_le_1);
        assert!(r.wf);
        assert_eq!(r.procs[0].width, 2);
    }

    #[test]
    fn non_wf_recursive_call_is_flagged() {
        let p = program("decl f(qs) { call f(qs); } :: call f(qs);");
        let r = classify_program(&p);
        assert!(!r.wf);
        assert_eq!(r.wf_violations.len(), 1);
    }

    #[test]
    fn basic_counts_distinct_non_trivial_args() {
        // two distinct removal expressions
        let p = program(
            "decl f(qs) { if |qs| > 2 then qcase qs[1] of {
                0 -> call f(qs - [1]);
                1 -> call f(qs - [1, 2]);
             } else skip; } :: call f(qs);",
        );
        let r = classify_program(&p);
        assert!(r.wf && r.width_le_1);
        assert!(!r.basic);
        assert_eq!(r.call_args.len(), 2);
    }

    #[test]
    fn symbolic_run_matches_brute_force_on_small_programs() {
        let p = program(
            "decl f(qs) { if |qs| >= 2 then qcase qs[1] of {
                0 -> call f(qs - [1]);
                1 -> skip;
             } else qs[1] *= NOT; } :: call f(qs);",
        );
        for n in 1..=6 {
            assert_eq!(
                symbolic_run(&p, n).unwrap(),
                brute_force_time(&p, n).unwrap()
            );
        }
    }

    #[test]
    fn erroneous_program_detected_statically() {
        let p = program(":: qcase qs[1] of { 0 -> skip; 1 -> qs[1] *= NOT; }");
        assert_eq!(symbolic_run(&p, 2), Err(StaticRunError::Erroneous));
    }

    #[test]
    fn non_wf_program_diverges_symbolically() {
        let p = program("decl f(qs) { call f(qs); } :: call f(qs);");
        assert_eq!(symbolic_run(&p, 3), Err(StaticRunError::Diverged));
    }
}
